"""Exact coefficient rings: the rationals, prime fields and the integers.

A :class:`RingSpec` both describes a ring and carries its arithmetic on *raw*
values (``Fraction`` for QQ, canonical residues ``0 <= v < p`` for GF(p), plain
``int`` for ZZ).  The linear algebra and the multilinear-map code work on raw
values for speed; :class:`Scalar` wraps a raw value together with its ring for
callers that want checked, self-describing arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotInvertible, ParseError, RingMismatch

RATIONALS = "rationals"
PRIME_FIELD = "prime_field"
INTEGERS = "integers"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class RingSpec:
    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in (RATIONALS, PRIME_FIELD, INTEGERS):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == PRIME_FIELD:
            if not isinstance(self.p, int) or not _is_prime(self.p):
                raise ValueError(f"prime field needs a prime characteristic, got {self.p!r}")
        elif self.p is not None:
            raise ValueError(f"{self.kind} takes no characteristic")

    # -- description ---------------------------------------------------

    @property
    def is_field(self) -> bool:
        return self.kind != INTEGERS

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == PRIME_FIELD else 0

    def __str__(self):
        if self.kind == RATIONALS:
            return "QQ"
        if self.kind == INTEGERS:
            return "ZZ"
        return f"GF({self.p})"

    def to_json(self) -> dict:
        if self.kind == PRIME_FIELD:
            return {"kind": self.kind, "p": self.p}
        return {"kind": self.kind}

    @classmethod
    def from_json(cls, obj) -> "RingSpec":
        if isinstance(obj, str):
            return parse_ring(obj)
        try:
            return cls(obj["kind"], obj.get("p"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad ring descriptor {obj!r}: {exc}") from None

    # -- raw arithmetic ------------------------------------------------

    @property
    def zero(self):
        return Fraction(0) if self.kind == RATIONALS else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == RATIONALS else 1

    def coerce(self, x):
        """Map an int (or a Fraction, where meaningful) into the ring."""
        if self.kind == RATIONALS:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                if self.kind == INTEGERS:
                    raise ValueError(f"{x} is not an integer")
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            x = x.numerator
        if self.kind == PRIME_FIELD:
            return int(x) % self.p
        return int(x)

    def add(self, a, b):
        if self.kind == PRIME_FIELD:
            return (a + b) % self.p
        return a + b

    def sub(self, a, b):
        if self.kind == PRIME_FIELD:
            return (a - b) % self.p
        return a - b

    def neg(self, a):
        if self.kind == PRIME_FIELD:
            return (-a) % self.p
        return -a

    def mul(self, a, b):
        if self.kind == PRIME_FIELD:
            return (a * b) % self.p
        return a * b

    def sign(self, parity: int, a):
        """Return ``(-1)**parity * a``."""
        return self.neg(a) if parity & 1 else a

    def is_unit(self, a) -> bool:
        if self.kind == INTEGERS:
            return a in (1, -1)
        return a != 0

    def inv(self, a):
        if not self.is_unit(a):
            raise NotInvertible(f"{self.format(a)} is not invertible in {self}")
        if self.kind == RATIONALS:
            return 1 / a
        if self.kind == PRIME_FIELD:
            return pow(a, -1, self.p)
        return a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # -- text encoding -------------------------------------------------

    def format(self, a) -> str:
        if self.kind == RATIONALS:
            a = Fraction(a)
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return str(int(a))

    def parse(self, text: str):
        if not isinstance(text, str):
            raise ParseError(f"scalars must be encoded as strings, got {text!r}")
        s = text.strip()
        if not re.fullmatch(r"[+-]?\d+(/[+-]?\d+)?", s):
            raise ParseError(f"cannot parse scalar {text!r}")
        try:
            value = Fraction(s)
        except ZeroDivisionError:
            raise ParseError(f"zero denominator in {text!r}") from None
        if self.kind == INTEGERS and value.denominator != 1:
            raise ParseError(f"{text!r} is not an integer")
        return self.coerce(value)


QQ = RingSpec(RATIONALS)
ZZ = RingSpec(INTEGERS)


def GF(p: int) -> RingSpec:
    return RingSpec(PRIME_FIELD, p)


def parse_ring(text: str) -> RingSpec:
    t = text.strip()
    if t in ("QQ", "Q", "rationals"):
        return QQ
    if t in ("ZZ", "Z", "integers"):
        return ZZ
    m = re.fullmatch(r"(?:GF|F)\((\d+)\)|GF(\d+)", t)
    if m:
        try:
            return GF(int(m.group(1) or m.group(2)))
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    raise ParseError(f"unknown ring {text!r}")


@dataclass(frozen=True)
class Scalar:
    """An exact ring element that knows its ring."""

    ring: RingSpec
    value: object

    @classmethod
    def of(cls, ring: RingSpec, x) -> "Scalar":
        if isinstance(x, str):
            return cls(ring, ring.parse(x))
        return cls(ring, ring.coerce(x))

    def _other(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar.of(self.ring, other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Scalar(self.ring, self.ring.add(self.value, o.value))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Scalar(self.ring, self.ring.sub(self.value, o.value))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Scalar(self.ring, self.ring.mul(self.value, o.value))

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.ring, self.ring.neg(self.value))

    def inverse(self) -> "Scalar":
        return Scalar(self.ring, self.ring.inv(self.value))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self.ring.coerce(other)
            except ValueError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.value))

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return self.ring.format(self.value)

    def __repr__(self):
        return f"Scalar({self.ring}, {self})"
