import random

import pytest

from prelie_ainfty.ainfty import check_ar
from prelie_ainfty.complexes import MultiMap, graded_module
from prelie_ainfty.fixtures import (
    TEMPLATES,
    a3_fixtures,
    certify_nonexact,
    find_blocking_fixture,
    generate_a3,
    random_complex_around,
    template_algebra,
)
from prelie_ainfty.hochschild import zero_product_algebra
from prelie_ainfty.homology import split_homology
from prelie_ainfty.scalars import GF, QQ, ZZ


@pytest.mark.parametrize("name", sorted(TEMPLATES))
def test_templates_are_associative(name):
    for ring in (QQ, GF(2), ZZ):
        template_algebra(ring, name)


def test_complex_around_has_prescribed_homology():
    rng = random.Random(0)
    for ring in (QQ, GF(3), ZZ):
        C = random_complex_around({0: 2, 1: 1}, ring, rng, pairs=3)
        assert split_homology(C).ranks() == {0: 2, 1: 1}


def test_generated_fixtures_are_a3_and_deterministic():
    fx = a3_fixtures(GF(3), 1, 4)
    assert all(check_ar(f.structure, 3).ok for f in fx)
    again = a3_fixtures(GF(3), 1, 4)
    assert [f.structure for f in fx] == [f.structure for f in again]


def test_template_choice():
    fx = generate_a3(QQ, 2, template="exterior", pairs=1)
    assert fx.algebra_name == "exterior"
    assert split_homology(fx.structure.A).ranks() == {0: 1, 1: 1}


def test_certificate():
    alg = zero_product_algebra(graded_module(GF(2), {0: 1}))
    c = MultiMap(alg.B, alg.B, 2, 0, {(0, (0, 0)): 1})
    cert = certify_nonexact(alg, c)
    assert cert.ok and cert.candidates == 2
    alg3 = template_algebra(GF(3), "split")
    u = MultiMap(alg3.B, alg3.B, 1, 0, {(0, (1,)): 1})
    assert not certify_nonexact(alg3, alg3.d(u)).ok
    with pytest.raises(ValueError):
        certify_nonexact(template_algebra(QQ, "unit"), MultiMap.zero(*(2 * [graded_module(QQ, {0: 1})]), 2, 0))


def test_blocking_search_is_seeded():
    found = find_blocking_fixture(0)
    assert found.certificate.ok and found.blocked_at == 4 and found.attempts == 259
    assert found.structure.A.dims == ((0, 2), (1, 1), (2, 1))
