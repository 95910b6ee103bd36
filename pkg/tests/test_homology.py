import random

import pytest

from prelie_ainfty.complexes import GradedMap, MultiMap, boundary, dgmodule, graded_module, hom_differential
from prelie_ainfty.errors import (
    AssumptionAViolated,
    NonzeroInducedMap,
    NotAChainMap,
    ProjectivityViolated,
)
from prelie_ainfty.fixtures import random_complex_around
from prelie_ainfty.homology import (
    check_assumption_A,
    hom_homology_iso,
    homology,
    induced_map,
    induced_multimap,
    lift_cycle_map,
    lift_multimap,
    multi_hom_iso,
    split_homology,
    write_as_boundary,
    write_multimap_as_boundary,
)
from prelie_ainfty.prelie import random_dgmodule, random_multimap
from prelie_ainfty.scalars import GF, QQ, ZZ


def times_two():
    return dgmodule(ZZ, {0: 1, 1: 1}, {1: [[2]]})


def test_homology_of_arrow_is_zero():
    for ring in (QQ, GF(2), ZZ):
        data = homology(dgmodule(ring, {0: 1, 1: 1}, {1: [[1]]}))
        assert data.ranks() == {} and data.assumption_a


def test_multiplication_by_two():
    data = homology(times_two())
    assert not data.assumption_a
    assert data.torsion[0] == [2]
    with pytest.raises(AssumptionAViolated):
        split_homology(times_two())
    with pytest.raises(ProjectivityViolated):
        induced_multimap(MultiMap.zero(times_two(), times_two(), 2, 0), data)
    assert homology(dgmodule(QQ, {0: 1, 1: 1}, {1: [[2]]})).ranks() == {}
    assert homology(dgmodule(GF(2), {0: 1, 1: 1}, {1: [[2]]})).ranks() == {0: 1, 1: 1}


def test_zero_differential():
    C = graded_module(QQ, {-1: 2, 3: 1})
    data = split_homology(C)
    assert data.ranks() == {-1: 2, 3: 1}
    data.verify()


@pytest.mark.parametrize("ring", [QQ, GF(2), GF(3), ZZ])
def test_random_splittings_verify(ring):
    rng = random.Random(3)
    for _ in range(25):
        C = random_dgmodule(ring, rng, max_rank=5)
        ok, data = check_assumption_A(C)
        if ok:
            data.verify()
            euler = sum((-1) ** n * r for n, r in C.dims)
            assert euler == sum((-1) ** n * r for n, r in data.h_rank.items())


def test_assumption_a_on_unimodular_complexes():
    rng = random.Random(8)
    for _ in range(10):
        C = random_complex_around({0: 1, 1: 2}, ZZ, rng, pairs=2)
        data = split_homology(C)
        assert data.ranks() == {0: 1, 1: 2}
        data.verify()


def test_induced_and_lift_round_trip(rng):
    for _ in range(10):
        C = random_complex_around({0: 1, 1: 1}, QQ, rng, pairs=2)
        D = random_complex_around({0: 2}, QQ, rng, pairs=1)
        hc, hd = split_homology(C), split_homology(D)
        blocks = {0: [[QQ.coerce(rng.randint(-2, 2)) for _ in range(1)] for _ in range(2)]}
        g = GradedMap(hc.H, hd.H, 0, blocks)
        f = lift_cycle_map(g, hc, hd)
        assert induced_map(f, hc, hd) == g


def test_write_as_boundary(rng):
    C = random_complex_around({0: 1}, QQ, rng, pairs=2)
    data = split_homology(C)
    ident = GradedMap.identity(C)
    with pytest.raises(NonzeroInducedMap):
        write_as_boundary(ident, data, data)
    f = ident - data.sigma_map @ data.proj_map
    u = write_as_boundary(f, data, data)
    assert hom_differential(u) == f
    with pytest.raises(NotAChainMap):
        write_as_boundary(data.homotopy_map, data, data)


@pytest.mark.parametrize("ring", [QQ, GF(2)])
def test_hom_homology_iso(ring):
    rng = random.Random(21)
    for _ in range(8):
        C = random_dgmodule(ring, rng, max_rank=4)
        D = random_dgmodule(ring, rng, max_rank=4)
        assert hom_homology_iso(C, D).ok


@pytest.mark.parametrize("n", [1, 2, 3])
def test_multi_hom_iso(n):
    rng = random.Random(n)
    C = random_complex_around({0: 1, 1: 1}, GF(2), rng, pairs=1)
    assert multi_hom_iso(C, n).ok


def test_multimap_round_trips(rng):
    for _ in range(10):
        C = random_complex_around({0: 1, 1: 1}, QQ, rng, pairs=2)
        data = split_homology(C)
        g = random_multimap(data.H, rng, arity=2, degrees=range(-1, 2))
        f = lift_multimap(g, data)
        assert boundary(f).is_zero() and induced_multimap(f, data) == g
        x = random_multimap(C, rng, arity=2, degrees=range(-1, 2))
        b = boundary(x)
        u = write_multimap_as_boundary(b, data)
        assert boundary(u) == b


def test_write_multimap_rejects_nonzero_class(rng):
    C = random_complex_around({0: 1}, QQ, rng, pairs=1)
    data = split_homology(C)
    mu = lift_multimap(MultiMap(data.H, data.H, 2, 0, {(0, (0, 0)): QQ.one}), data)
    with pytest.raises(NonzeroInducedMap):
        write_multimap_as_boundary(mu, data)
