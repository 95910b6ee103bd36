"""Extending an A_r-structure by one arity, or certifying that it cannot be done.

For an A_r-structure ``m_1, ..., m_r`` on a split complex ``A`` the cocycle

    O_{r+1} = sum_{i+j=r+2, i,j>1} m_i o m_j

induces a Hochschild cocycle on ``H(A)`` of bidegree ``(r+1, r-2)``.  If it is
a coboundary ``d u``, replacing ``m_r`` by ``m_r - m'_r`` (``m'_r`` a cycle
lifting ``u``) makes room for an ``m_{r+1}`` with

    d m_{r+1} = [m_2, m'_r - m_r] - sum_{i+j=r+2, i,j>2} m_i o m_j.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ainfty import ArStructure, check_ar, homology_algebra, to_circle
from .complexes import MultiMap, boundary
from .errors import InternalInvariantError, InvalidArStructure, RTooSmall
from .hochschild import is_coboundary
from .homology import (
    HomologyData,
    homology,
    induced_multimap,
    lift_multimap,
    require_projective,
    write_multimap_as_boundary,
)
from .prelie import bracket, circle


@dataclass
class ObstructionReport:
    r: int
    cocycle: MultiMap
    cocycle_closed: bool
    induced: MultiMap
    induced_closed: bool
    class_zero: bool
    u: MultiMap | None = None
    m_prime: MultiMap | None = None
    m_next: MultiMap | None = None
    structure: ArStructure | None = None
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.class_zero

    @property
    def failures(self) -> list:
        return [] if self.class_zero else [f"nonzero class in HH^{self.r + 1}_{self.r - 2}"]


def _validate(S: ArStructure, r: int) -> ArStructure:
    if r < 3:
        raise RTooSmall("the obstruction is defined for r >= 3")
    S = to_circle(S)
    if S.r < r:
        raise InvalidArStructure(f"need maps up to arity {r}, have {S.r}")
    S = S.truncate(r)
    rep = check_ar(S, r)
    if not rep.ok:
        raise InvalidArStructure(f"relation {rep.first_failure} fails")
    return S


def obstruction_cocycle(S: ArStructure, r: int | None = None) -> MultiMap:
    """``O_{r+1}``; asserts that it is a cycle of ``End(A)``."""
    r = S.r if r is None else r
    S = _validate(S, r)
    return _cocycle(S, r)


def _cocycle(S: ArStructure, r: int) -> MultiMap:
    A = S.A
    out = MultiMap.zero(A, A, r + 1, r - 2)
    for i in range(2, r + 1):
        j = r + 2 - i
        if 2 <= j <= r:
            out = out + circle(S.m(i), S.m(j))
    if not boundary(out).is_zero():
        raise InternalInvariantError("the obstruction cocycle is not a cycle")
    return out


def obstruction_class(S: ArStructure, r: int | None = None, data: HomologyData | None = None):
    """Return ``(O, O_bar, algebra, u or None)`` for the structure truncated at ``r``."""
    r = S.r if r is None else r
    S = _validate(S, r)
    data = data or homology(S.A)
    require_projective(data)
    O = _cocycle(S, r)
    alg = homology_algebra(S, data)
    alg.max_arity = max(alg.max_arity, r + 1)
    Obar = induced_multimap(O, data, check=False)
    if not alg.d(Obar).is_zero():
        raise InternalInvariantError("the induced obstruction is not a Hochschild cocycle")
    return O, Obar, alg, is_coboundary(alg, Obar)


def lift_once(S: ArStructure, r: int | None = None, data: HomologyData | None = None) -> ObstructionReport:
    """Try to turn the A_r-structure into an A_{r+1}-structure.

    On success the returned structure keeps ``m_1 .. m_{r-1}``, replaces ``m_r``
    by ``m_r - m'_r`` and appends ``m_{r+1}``.
    """
    r = S.r if r is None else r
    S = _validate(S, r)
    data = data or homology(S.A)
    O, Obar, alg, u = obstruction_class(S, r, data)
    report = ObstructionReport(r, O, True, Obar, True, u is not None, checks={"cocycle_closed": True,
                                                                              "induced_closed": True})
    if u is None:
        return report
    m_prime = lift_multimap(u, data)
    m_r = S.m(r)
    T = bracket(S.m(2), m_prime - m_r)
    for i in range(3, r):
        j = r + 2 - i
        if 3 <= j < r:
            T = T - circle(S.m(i), S.m(j))
    m_next = write_multimap_as_boundary(T, data)
    new = S.with_maps(S.maps[:r - 1] + [m_r - m_prime, m_next])
    ar = check_ar(new, r + 1)
    if not ar.ok:
        raise InternalInvariantError(f"lifted structure fails relation {ar.first_failure}")
    report.u, report.m_prime, report.m_next, report.structure = u, m_prime, m_next, new
    report.checks["lifted_structure_valid"] = True
    return report


@dataclass
class ExtensionResult:
    target: int
    structure: ArStructure | None
    reports: list
    blocked_at: int | None = None
    last: ArStructure | None = None  # the structure that could not be lifted

    @property
    def ok(self) -> bool:
        return self.blocked_at is None

    @property
    def blocking_report(self) -> ObstructionReport | None:
        return None if self.ok else self.reports[-1]


def extend_to_ainfty(S: ArStructure, N: int) -> ExtensionResult:
    """Lift repeatedly until the structure has maps up to arity ``N``."""
    S = to_circle(S)
    if S.r < 3:
        raise RTooSmall("start from an A_3-structure")
    data = homology(S.A)
    require_projective(data)
    current = S
    reports = []
    while current.r < N:
        rep = lift_once(current, current.r, data)
        reports.append(rep)
        if not rep.class_zero:
            return ExtensionResult(N, None, reports, current.r, current)
        current = rep.structure
    if current.r > N:
        current = current.truncate(N)
    if not check_ar(current, N).ok:
        raise InternalInvariantError("extended structure fails its relations")
    return ExtensionResult(N, current, reports)
