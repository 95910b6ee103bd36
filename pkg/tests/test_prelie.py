import random

import pytest

from prelie_ainfty.complexes import MultiMap, dgmodule, graded_module, suspend
from prelie_ainfty.errors import EvenDegree, EvenWeight, SourceNotASuspension
from prelie_ainfty.prelie import (
    END,
    END_WEIGHT,
    FunctionSystem,
    brace,
    bracket,
    check_derivation,
    check_graded_system,
    check_prelie_algebra,
    check_weight_system,
    circle,
    convert_graded_to_weight,
    convert_weight_to_graded,
    odd_degree_square_identities,
    odd_square_identities,
    prelie_differential,
    random_dgmodule,
    random_multimap,
    random_triples,
    star,
    theta,
    theta_inv,
    weight,
)
from prelie_ainfty.scalars import GF, QQ

from .conftest import FIELDS


def small_triples(ring, seed, count=10):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        V = random_dgmodule(ring, rng, max_rank=2)
        out.extend(random_triples(V, rng, 1))
    return out


def test_weight():
    V = graded_module(QQ, {0: 1})
    assert weight(MultiMap.zero(V, V, 2, 0)) == 1
    assert weight(MultiMap.zero(V, V, 1, 0)) == 0
    assert weight(MultiMap.zero(V, V, 3, 1)) == 3


def test_rank_one_products():
    V = graded_module(QQ, {0: 1})
    mu = MultiMap(V, V, 2, 0, {(0, (0, 0)): QQ.one})
    assert star(mu, mu).apply((0, 0, 0)) == {0: 2}
    # weight-graded: the two insertions carry opposite signs
    assert circle(mu, mu).is_zero()


@pytest.mark.parametrize("ring", FIELDS)
def test_end_is_graded_system(ring):
    assert check_graded_system(END, small_triples(ring, 1)).ok


@pytest.mark.parametrize("ring", FIELDS)
def test_twisted_is_weight_system(ring):
    assert check_weight_system(END_WEIGHT, small_triples(ring, 2)).ok


@pytest.mark.parametrize("ring", FIELDS)
def test_prelie_algebra_identities(ring):
    triples = small_triples(ring, 3)
    assert check_prelie_algebra(END, triples).ok
    assert check_prelie_algebra(END_WEIGHT, triples).ok


def test_conversion_is_involutive():
    assert convert_weight_to_graded(convert_graded_to_weight(END)) is END
    with pytest.raises(ValueError):
        convert_weight_to_graded(END)
    twice = convert_weight_to_graded(FunctionSystem(END_WEIGHT.compose, "weight"))
    triples = small_triples(QQ, 4, 5)
    for f, g, h in triples:
        for k in range(1, f.arity + 1):
            assert twice.compose(f, k, g) == f.compose(k, g)


def test_corrupted_sign_is_detected():
    """Dropping the Koszul sign breaks the parallel relation on odd inputs."""

    def unsigned(f, k, g):
        out = f.compose(k, g)
        degs = f.source.basis_degrees
        terms = {}
        for (o, ins), c in out.terms.items():
            before = sum(degs[x] for x in ins[:k - 1])
            terms[(o, ins)] = f.ring.sign((g.degree * before) & 1, c)
        return MultiMap(f.source, f.target, out.arity, out.degree, terms, check=False)

    V = dgmodule(QQ, {0: 1, 1: 1}, {})
    rng = random.Random(9)
    triples = random_triples(V, rng, 40)
    assert not check_graded_system(FunctionSystem(unsigned), triples).ok
    assert not check_weight_system(FunctionSystem(END.compose, "weight"), triples).ok


def test_brace_and_bracket_antisymmetry():
    rng = random.Random(5)
    V = random_dgmodule(GF(3), rng)
    for _ in range(10):
        f, g = random_multimap(V, rng), random_multimap(V, rng)
        assert brace(f, g) == -brace(g, f).signed(f.degree * g.degree)
        assert bracket(f, g) == -bracket(g, f).signed(weight(f) * weight(g))


@pytest.mark.parametrize("ring", FIELDS)
def test_odd_square_identities(ring):
    rng = random.Random(6)
    for _ in range(15):
        V = random_dgmodule(ring, rng, max_rank=2)
        f = random_multimap(V, rng)
        g = random_multimap(V, rng, parity=("weight", 1))
        if weight(g) % 2:
            assert odd_square_identities(f, g).ok
        g = random_multimap(V, rng, parity=("degree", 1))
        if g.degree % 2:
            assert odd_degree_square_identities(f, g).ok


def test_even_inputs_rejected():
    V = graded_module(QQ, {0: 1})
    f = MultiMap.zero(V, V, 1, 0)
    with pytest.raises(EvenWeight):
        odd_square_identities(f, f)
    with pytest.raises(EvenDegree):
        odd_degree_square_identities(f, f)


@pytest.mark.parametrize("ring", FIELDS)
def test_differential_is_a_derivation(ring):
    rng = random.Random(7)
    for _ in range(15):
        V = random_dgmodule(ring, rng, max_rank=3)
        f, g = random_multimap(V, rng), random_multimap(V, rng)
        assert check_derivation(f, g).ok


def test_prelie_differential_on_rank_one():
    V = dgmodule(QQ, {0: 1, 1: 1}, {1: [[1]]})
    ident = MultiMap.identity(V)
    assert prelie_differential(ident).is_zero()


@pytest.mark.parametrize("ring", FIELDS)
def test_theta_round_trip_and_products(ring):
    rng = random.Random(10)
    for _ in range(15):
        V = random_dgmodule(ring, rng, max_rank=2)
        sV = suspend(V)
        F, G = random_multimap(sV, rng), random_multimap(sV, rng)
        assert theta_inv(theta(F, V), sV) == F
        assert theta(F, V).degree == F.degree + F.arity - 1
        assert theta(star(F, G), V) == circle(theta(F, V), theta(G, V))


def test_theta_needs_suspension():
    V = graded_module(QQ, {0: 1})
    with pytest.raises(SourceNotASuspension):
        theta(MultiMap.identity(V))
