"""A_r- and A_infinity-structures in three sign conventions.

``circle``    maps ``m_i`` on ``A`` of degree ``i - 2`` with
              ``sum_{i+j=n+1} m_i o m_j = 0`` (``o`` the weight-graded product).
``stasheff``  maps ``m~_i = (-1)**(i(i-1)/2) m_i`` on ``A``.
``suspended`` maps ``D_i`` of degree ``-1`` on ``sA`` with
              ``sum_{i+j=n+1} D_i * D_j = 0`` and ``m_i = theta(D_i)``.

All algorithms run on the circle convention; the other two are converted at
the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import DgModule, MultiMap, boundary, same_module, suspend
from .errors import ArityOutOfRange, DegreeMismatch, InternalInvariantError, InvalidArStructure, NotAChainMap
from .homology import HomologyData, homology, induced_multimap, require_projective
from .prelie import circle, star, theta, theta_inv, weight

CIRCLE = "circle"
STASHEFF = "stasheff"
SUSPENDED = "suspended"
CONVENTIONS = (CIRCLE, STASHEFF, SUSPENDED)


def stasheff_sign(i: int) -> int:
    return (i * (i - 1) // 2) & 1


@dataclass
class ArStructure:
    """Maps ``m_1, ..., m_r`` on ``A`` (on ``sA`` for the suspended convention)."""

    A: DgModule
    maps: list
    convention: str = CIRCLE
    carrier: DgModule | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown convention {self.convention!r}")
        if self.carrier is None:
            self.carrier = suspend(self.A) if self.convention == SUSPENDED else self.A
        self.maps = list(self.maps)
        self._validate_shapes()

    @property
    def r(self) -> int:
        return len(self.maps)

    def m(self, i: int) -> MultiMap:
        if not 1 <= i <= self.r:
            raise ArityOutOfRange(f"no map of arity {i} (r = {self.r})")
        return self.maps[i - 1]

    def expected_degree(self, i: int) -> int:
        return -1 if self.convention == SUSPENDED else i - 2

    def _validate_shapes(self):
        if not self.maps:
            raise InvalidArStructure("an A_r-structure needs r >= 1")
        for i, f in enumerate(self.maps, start=1):
            if f.arity != i:
                raise InvalidArStructure(f"m_{i} has arity {f.arity}")
            if f.degree != self.expected_degree(i):
                raise InvalidArStructure(f"m_{i} has degree {f.degree}, expected {self.expected_degree(i)}")
            if not (same_module(f.source, self.carrier) and same_module(f.target, self.carrier)):
                raise InvalidArStructure(f"m_{i} lives on the wrong module")
            if self.convention != SUSPENDED and weight(f) % 2 == 0:
                raise InternalInvariantError(f"m_{i} has even weight")
        if not self.m(1) == expected_m1(self.A, self.convention, self.carrier):
            raise InvalidArStructure("m_1 is not the differential of A")

    def truncate(self, r: int) -> "ArStructure":
        if r > self.r:
            raise ArityOutOfRange(f"cannot truncate an A_{self.r}-structure to A_{r}")
        return ArStructure(self.A, self.maps[:r], self.convention, self.carrier)

    def with_maps(self, maps) -> "ArStructure":
        return ArStructure(self.A, maps, self.convention, self.carrier)

    def __eq__(self, other):
        if not isinstance(other, ArStructure):
            return NotImplemented
        return (self.convention == other.convention and same_module(self.A, other.A)
                and self.maps == other.maps)

    __hash__ = None


def expected_m1(A: DgModule, convention: str, carrier: DgModule | None = None) -> MultiMap:
    d = MultiMap.differential(A)
    if convention == SUSPENDED:
        return theta_inv(d, carrier or suspend(A))
    return d


def from_dga(A: DgModule, mu: MultiMap, r: int = 2) -> ArStructure:
    """A strictly associative dg algebra as an A_r-structure with ``m_i = 0`` for ``i >= 3``."""
    maps = [MultiMap.differential(A), mu]
    for i in range(3, r + 1):
        maps.append(MultiMap.zero(A, A, i, i - 2))
    return ArStructure(A, maps[:max(r, 1)])


# -- relations -----------------------------------------------------------------------


def relation_defect(S: ArStructure, n: int) -> MultiMap:
    """The left-hand side of relation ``n`` in the structure's own convention.

    Only the maps ``m_i`` with ``i <= min(n, r)`` enter.  The result has arity
    ``n`` and degree ``n - 3`` (``-2`` in the suspended convention).
    """
    if n < 1:
        raise ArityOutOfRange("relations are indexed by n >= 1")
    X = S.carrier
    deg = -2 if S.convention == SUSPENDED else n - 3
    out = MultiMap.zero(X, X, n, deg)
    for i in range(1, n + 1):
        j = n + 1 - i
        if i > S.r or j > S.r:
            continue
        a, b = S.m(i), S.m(j)
        if S.convention == CIRCLE:
            out = out + circle(a, b)
        elif S.convention == SUSPENDED:
            out = out + star(a, b)
        else:
            acc = MultiMap.zero(X, X, n, deg)
            for k in range(1, i + 1):
                acc = acc + a.compose(k, b).signed(k * (j - 1))
            out = out + acc.signed(j * n)
    if (out.arity, out.degree) != (n, deg):
        raise InternalInvariantError("defect has the wrong shape")
    return out


@dataclass
class ArReport:
    r: int
    convention: str
    checked: list  # relation indices that hold
    first_failure: int | None = None
    defect: MultiMap | None = None

    @property
    def ok(self) -> bool:
        return self.first_failure is None

    @property
    def failures(self) -> list:
        return [] if self.ok else [self.first_failure]


def check_ar(S: ArStructure, r: int | None = None) -> ArReport:
    """Check relations ``1..r`` (default: all available) and report the first failure."""
    r = S.r if r is None else r
    if r > S.r:
        raise ArityOutOfRange(f"structure only has maps up to arity {S.r}")
    checked = []
    for n in range(1, r + 1):
        dft = relation_defect(S, n)
        if not dft.is_zero():
            return ArReport(r, S.convention, checked, n, dft)
        checked.append(n)
    return ArReport(r, S.convention, checked)


# -- conventions --------------------------------------------------------------------


def to_circle(S: ArStructure) -> ArStructure:
    if S.convention == CIRCLE:
        return S
    if S.convention == STASHEFF:
        maps = [f.signed(stasheff_sign(i)) for i, f in enumerate(S.maps, start=1)]
    else:
        maps = [theta(f, S.A) for f in S.maps]
    return ArStructure(S.A, maps, CIRCLE)


def from_circle(S: ArStructure, target: str) -> ArStructure:
    if S.convention != CIRCLE:
        raise ValueError("expected a circle-convention structure")
    if target == CIRCLE:
        return S
    if target == STASHEFF:
        return ArStructure(S.A, [f.signed(stasheff_sign(i)) for i, f in enumerate(S.maps, start=1)], STASHEFF)
    if target == SUSPENDED:
        sA = suspend(S.A)
        return ArStructure(S.A, [theta_inv(f, sA) for f in S.maps], SUSPENDED, sA)
    raise ValueError(f"unknown convention {target!r}")


def convert_convention(S: ArStructure, target: str) -> ArStructure:
    """Change sign convention; relation ``n`` holds before iff it holds after."""
    out = from_circle(to_circle(S), target)
    for n in range(1, S.r + 1):
        if relation_defect(S, n).is_zero() != relation_defect(out, n).is_zero():
            raise InternalInvariantError(f"relation {n} changed status under conversion")
    return out


# -- homology algebra ----------------------------------------------------------------


def homology_algebra(S: ArStructure, data: HomologyData | None = None):
    """The product induced by ``m_2`` on ``H(A)``.  Returns a :class:`GradedAlgebra`."""
    from .hochschild import GradedAlgebra

    S = to_circle(S)
    if S.r < 2:
        raise ArityOutOfRange("need r >= 2 for a product")
    data = data or homology(S.A)
    require_projective(data)
    m2 = S.m(2)
    if not boundary(m2).is_zero():
        raise NotAChainMap("m_2 is not a chain map")
    mu = induced_multimap(m2, data, check=False)
    if S.r >= 3 and not circle(mu, mu).is_zero():
        raise InternalInvariantError("induced product is not associative")
    return GradedAlgebra(data.H, mu, check=S.r >= 3)


def require_degree(f: MultiMap, arity: int, degree: int) -> None:
    if (f.arity, f.degree) != (arity, degree):
        raise DegreeMismatch(f"expected shape ({arity}, {degree}), got {f.shape}")
