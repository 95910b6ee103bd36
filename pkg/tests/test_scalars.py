from fractions import Fraction

import pytest

from prelie_ainfty.errors import NotInvertible, ParseError, RingMismatch
from prelie_ainfty.scalars import GF, QQ, ZZ, RingSpec, Scalar, parse_ring


def test_rational_addition():
    assert Scalar.of(QQ, "1/2") + Scalar.of(QQ, "1/3") == Scalar.of(QQ, "5/6")


def test_characteristic_two():
    one = Scalar.of(GF(2), 1)
    assert one + one == 0
    assert not (one + one)


def test_integer_non_unit_has_no_inverse():
    with pytest.raises(NotInvertible):
        Scalar.of(ZZ, 2).inverse()
    assert Scalar.of(ZZ, -1).inverse() == -1


@pytest.mark.parametrize("ring", [QQ, GF(5), ZZ])
def test_zero_is_never_invertible(ring):
    with pytest.raises(NotInvertible):
        ring.inv(ring.zero)


def test_mixed_rings_are_rejected():
    with pytest.raises(RingMismatch):
        Scalar.of(QQ, 1) + Scalar.of(GF(2), 1)


def test_prime_field_residues_are_canonical():
    F = GF(7)
    assert F.coerce(-1) == 6
    assert F.coerce(Fraction(1, 2)) == 4
    assert Scalar.of(F, 3) * Scalar.of(F, 5) == 1
    assert Scalar.of(F, 3).inverse() == 5


def test_p_equal_two_is_accepted_and_composites_are_not():
    assert GF(2).characteristic == 2
    with pytest.raises(ValueError):
        RingSpec("prime_field", 4)


@pytest.mark.parametrize("text,ring,value", [
    ("3/2", QQ, Fraction(3, 2)), ("-4", ZZ, -4), ("5", GF(3), 2), (" 7/2 ", GF(5), 1),
])
def test_parse(text, ring, value):
    assert ring.parse(text) == value


@pytest.mark.parametrize("text,ring", [("1.5", QQ), ("1/2", ZZ), ("x", GF(2)), ("1/0", QQ)])
def test_parse_rejects(text, ring):
    with pytest.raises(ParseError):
        ring.parse(text)


def test_parse_requires_strings():
    with pytest.raises(ParseError):
        QQ.parse(3)


def test_format_round_trip():
    for ring, x in [(QQ, Fraction(-7, 3)), (ZZ, 12), (GF(11), 10)]:
        assert ring.parse(ring.format(x)) == x


def test_ring_descriptors():
    assert parse_ring("GF(3)") == GF(3)
    assert parse_ring("QQ") == QQ
    assert RingSpec.from_json({"kind": "prime_field", "p": 2}) == GF(2)
    assert RingSpec.from_json(GF(13).to_json()) == GF(13)
    with pytest.raises(ParseError):
        RingSpec.from_json({"kind": "prime_field", "p": 9})
