"""The bigraded Hochschild cochain complex of a graded associative algebra.

Cochains of bidegree ``(n, i)`` are maps ``B^{(x) n} -> B`` of degree ``i``;
the differential ``d = [mu, -]`` raises the arity by one and keeps the degree.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .complexes import DgModule, MultiMap, boundary, graded_module, multimap_basis, same_module
from .errors import ArityOutOfRange, DegreeMismatch, InternalInvariantError, NotACocycle, NotAssociative
from .prelie import PropertyReport, bracket, circle
from .scalars import RingSpec

DEFAULT_MAX_ARITY = 8


class GradedAlgebra:
    """A module ``B`` with a degree-0 product ``mu`` satisfying ``mu o mu = 0``."""

    def __init__(self, B: DgModule, mu: MultiMap, *, check: bool = True, max_arity: int = DEFAULT_MAX_ARITY):
        if (mu.arity, mu.degree) != (2, 0):
            raise DegreeMismatch("the product must have arity 2 and degree 0")
        if not (same_module(mu.source, B) and same_module(mu.target, B)):
            raise DegreeMismatch("the product must live on B")
        if check and not circle(mu, mu).is_zero():
            raise NotAssociative("mu o mu != 0")
        self.B = B
        self.mu = mu
        self.max_arity = max_arity
        self._basis = {}
        self._matrix = {}

    @property
    def ring(self) -> RingSpec:
        return self.B.ring

    def _bounds(self, n: int):
        if not 1 <= n <= self.max_arity:
            raise ArityOutOfRange(f"arity {n} outside 1..{self.max_arity}")

    def basis(self, n: int, i: int) -> list:
        """Basis keys of the cochains of bidegree ``(n, i)``."""
        self._bounds(n)
        key = (n, i)
        if key not in self._basis:
            self._basis[key] = multimap_basis(self.B, self.B, n, i)
        return self._basis[key]

    def d(self, f: MultiMap) -> MultiMap:
        """``[mu, f]``."""
        return bracket(self.mu, f)

    def d_matrix(self, n: int, i: int):
        """Matrix of ``d`` from bidegree ``(n, i)`` to ``(n+1, i)``; one column per basis element."""
        key = (n, i)
        if key not in self._matrix:
            src, tgt = self.basis(n, i), self.basis(n + 1, i)
            index = {k: t for t, k in enumerate(tgt)}
            cols = []
            for k in src:
                e = MultiMap(self.B, self.B, n, i, {k: self.ring.one}, check=False)
                cols.append(self.d(e).to_vector(tgt, index))
            self._matrix[key] = linalg.from_columns(self.ring, cols, len(tgt))
        return self._matrix[key]

    def to_vector(self, f: MultiMap) -> list:
        return f.to_vector(self.basis(f.arity, f.degree))

    def from_vector(self, n: int, i: int, vec) -> MultiMap:
        return MultiMap.from_vector(self.B, self.B, n, i, self.basis(n, i), vec)


def rank_one_algebra(ring: RingSpec) -> GradedAlgebra:
    """``R`` itself: rank one in degree 0 with ``e * e = e``."""
    B = graded_module(ring, {0: 1})
    return GradedAlgebra(B, MultiMap(B, B, 2, 0, {(0, (0, 0)): ring.one}))


def zero_product_algebra(B: DgModule) -> GradedAlgebra:
    return GradedAlgebra(B, MultiMap.zero(B, B, 2, 0))


def hochschild_d(alg: GradedAlgebra, f: MultiMap) -> MultiMap:
    return alg.d(f)


@dataclass
class HHData:
    n: int
    i: int
    cochain_rank: int
    cocycle_rank: int
    coboundary_rank: int
    rank: int
    torsion: list
    representatives: list

    def to_json(self, encode) -> dict:
        return {
            "n": self.n, "i": self.i,
            "cochains": self.cochain_rank, "cocycles": self.cocycle_rank,
            "coboundaries": self.coboundary_rank, "rank": self.rank,
            "torsion": [str(t) for t in self.torsion],
            "representatives": [encode(r) for r in self.representatives],
        }


def hh(alg: GradedAlgebra, n: int, i: int) -> HHData:
    """Kernel modulo image at bidegree ``(n, i)`` with chosen representatives."""
    ring = alg.ring
    src = alg.basis(n, i)
    dim = len(src)
    out = linalg.reduce_map(ring, alg.d_matrix(n, i), len(alg.basis(n + 1, i)), dim)
    if n > 1:
        inc = linalg.reduce_map(ring, alg.d_matrix(n - 1, i), dim, len(alg.basis(n - 1, i)))
        image, invariants = inc.image, inc.invariants
    else:
        image, invariants = [], []
    reps, _ = linalg.complement(ring, image, out.kernel, dim)
    torsion = sorted(abs(x) for x in invariants if not ring.is_unit(x))
    return HHData(n, i, dim, len(out.kernel), len(image), len(out.kernel) - len(image), torsion,
                  [alg.from_vector(n, i, v) for v in reps])


def is_coboundary(alg: GradedAlgebra, c: MultiMap) -> MultiMap | None:
    """Some ``u`` with ``d(u) = c``, or ``None`` when the class of ``c`` is nonzero."""
    if not alg.d(c).is_zero():
        raise NotACocycle("d(c) != 0")
    n, i = c.arity, c.degree
    if n < 2:
        raise ArityOutOfRange("coboundaries start in arity 2")
    if c.is_zero():
        return MultiMap.zero(alg.B, alg.B, n - 1, i)
    M = alg.d_matrix(n - 1, i)
    x = linalg.solve_exact(alg.ring, M, alg.to_vector(c), len(alg.basis(n - 1, i)))
    if x is None:
        return None
    u = alg.from_vector(n - 1, i, x)
    if not alg.d(u) == c:
        raise InternalInvariantError("solver returned a wrong preimage")
    return u


def check_d_squared(alg: GradedAlgebra, samples) -> PropertyReport:
    rep = PropertyReport("d^2 = 0")
    for t, f in enumerate(samples):
        rep.record(alg.d(alg.d(f)).is_zero(), f"sample {t}")
    return rep


def check_anticommute(m2: MultiMap, samples) -> PropertyReport:
    """``D d f + d D f = 0`` where ``d = [m_2, -]`` and ``D`` is the differential of End(A)."""
    rep = PropertyReport("anticommutation")
    if not boundary(m2).is_zero():
        rep.record(False, "m_2 is not a chain map")
        return rep
    for t, f in enumerate(samples):
        lhs = boundary(bracket(m2, f)) + bracket(m2, boundary(f))
        rep.record(lhs.is_zero(), f"sample {t}")
    return rep
