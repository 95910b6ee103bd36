"""Cycles, boundaries, homology and explicit splittings of a chain complex.

When the complex is split (always over a field; over the integers exactly
when the homology is torsion free) every degree decomposes as

    C_n = sigma(H_n) + B_n + tau(B_{n-1})

and the coordinates along the three summands are read off from the inverse of
the square matrix ``[sigma | B | tau]``.  From this data we get the projection
``P_H``, the cycle-choosing map ``sigma``, the idempotent ``pi = sigma P_H`` and
the contracting homotopy ``h = tau P_B`` with ``1 - pi = dh + hd``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from . import linalg
from .complexes import (
    DgModule,
    GradedMap,
    MultiMap,
    boundary,
    graded_module,
    hom_complex,
    hom_differential,
    hom_map,
    hom_vector,
    multimap_basis,
    same_module,
    tensor_power,
)
from .errors import (
    AssumptionAViolated,
    DegreeMismatch,
    InternalInvariantError,
    NonzeroInducedMap,
    NotAChainMap,
    ProjectivityViolated,
)


@dataclass
class HomologyData:
    complex: DgModule
    z_rank: dict
    b_rank: dict
    h_rank: dict
    torsion: dict  # degree -> invariant factors > 1 of H_n
    sigma: dict | None = None  # n -> rank(n) x h_n
    bdry: dict | None = None  # n -> rank(n) x b_n
    tau: dict | None = None  # n -> rank(n) x b_{n-1}
    coords: dict | None = field(default=None, repr=False)  # n -> inverse of [sigma|B|tau]

    @property
    def ring(self):
        return self.complex.ring

    @property
    def assumption_a(self) -> bool:
        return self.sigma is not None

    def _need_split(self):
        if not self.assumption_a:
            bad = {n: t for n, t in self.torsion.items() if t}
            raise AssumptionAViolated(f"homology has torsion: {bad}")

    @cached_property
    def H(self) -> DgModule:
        return graded_module(self.ring, self.h_rank)

    def ranks(self) -> dict:
        return {n: r for n, r in sorted(self.h_rank.items()) if r}

    # -- projections ----------------------------------------------------

    def proj_H(self, n: int):
        self._need_split()
        return self.coords[n][: self.h_rank.get(n, 0)] if n in self.coords else []

    def proj_B(self, n: int):
        self._need_split()
        if n not in self.coords:
            return []
        h, b = self.h_rank.get(n, 0), self.b_rank.get(n, 0)
        return self.coords[n][h:h + b]

    def proj_T(self, n: int):
        self._need_split()
        if n not in self.coords:
            return []
        h, b = self.h_rank.get(n, 0), self.b_rank.get(n, 0)
        return self.coords[n][h + b:]

    # -- graded maps ----------------------------------------------------

    @cached_property
    def sigma_map(self) -> GradedMap:
        """``sigma : H -> C`` of degree 0."""
        self._need_split()
        return GradedMap(self.H, self.complex, 0, {n: M for n, M in self.sigma.items() if self.h_rank.get(n)})

    @cached_property
    def proj_map(self) -> GradedMap:
        """``P_H : C -> H`` of degree 0."""
        self._need_split()
        return GradedMap(self.complex, self.H, 0, {n: self.proj_H(n) for n in self.complex.support
                                                    if self.h_rank.get(n)})

    @cached_property
    def homotopy_map(self) -> GradedMap:
        """``h = tau P_B : C_n -> C_{n+1}``."""
        self._need_split()
        C = self.complex
        blocks = {}
        for n in C.support:
            if self.b_rank.get(n) and C.rank(n + 1):
                blocks[n] = linalg.matmul(self.ring, self.tau[n + 1], self.proj_B(n), C.rank(n))
        return GradedMap(C, C, 1, blocks)

    # -- the same maps as linear MultiMaps ------------------------------------

    @cached_property
    def sigma_mm(self) -> MultiMap:
        return MultiMap.from_graded_map(self.sigma_map)

    @cached_property
    def proj_mm(self) -> MultiMap:
        return MultiMap.from_graded_map(self.proj_map)

    @cached_property
    def pi_mm(self) -> MultiMap:
        return MultiMap.from_graded_map(self.sigma_map @ self.proj_map)

    @cached_property
    def homotopy_mm(self) -> MultiMap:
        return MultiMap.from_graded_map(self.homotopy_map)

    def verify(self) -> None:
        """Check every splitting identity exactly; raise on failure."""
        self._need_split()
        C, ring = self.complex, self.ring
        one = GradedMap.identity(C)
        d = GradedMap.differential(C)
        h, pi = self.homotopy_map, self.sigma_map @ self.proj_map
        if not (d @ h + h @ d) == one - pi:
            raise InternalInvariantError("dh + hd != 1 - sigma P_H")
        if not (h @ h).is_zero() or not (h @ self.sigma_map).is_zero() or not (self.proj_map @ h).is_zero():
            raise InternalInvariantError("side conditions of the homotopy fail")
        if not self.proj_map @ self.sigma_map == GradedMap.identity(self.H):
            raise InternalInvariantError("P_H sigma != id")
        for n in C.support:
            if self.h_rank.get(n) and C.rank(n - 1):
                prod = linalg.matmul(ring, C.d_block(n), self.sigma[n], self.h_rank[n])
                if any(x != 0 for row in prod for x in row):
                    raise InternalInvariantError(f"sigma_{n} is not made of cycles")


def _assemble(ring, cols_by_part, nrows):
    cols = [c for part in cols_by_part for c in part]
    return linalg.from_columns(ring, cols, nrows)


def homology(C: DgModule) -> HomologyData:
    """Compute cycles, boundaries, homology and (when possible) a splitting."""
    ring = C.ring
    red = {}
    for n in C.support:
        red[n] = linalg.reduce_map(ring, C.d_block(n), C.rank(n - 1), C.rank(n))
    z_rank, b_rank, h_rank, torsion = {}, {}, {}, {}
    sigma_cols, bdry_cols, tau_cols = {}, {}, {}
    split = True
    for n in C.support:
        kernel = red[n].kernel
        up = red.get(n + 1)
        bdry = up.image if up is not None else []
        reps, tors = linalg.complement(ring, bdry, kernel, C.rank(n))
        if up is not None and not ring.is_field:
            tors = [x for x in up.invariants if abs(x) != 1]
        z_rank[n] = len(kernel)
        b_rank[n] = len(bdry)
        h_rank[n] = len(kernel) - len(bdry)
        torsion[n] = sorted(abs(x) for x in tors)
        if tors:
            split = False
        sigma_cols[n] = reps
        bdry_cols[n] = bdry
        tau_cols[n] = red[n].preimage
    for n in C.support:
        if h_rank[n] != len(sigma_cols[n]):
            raise InternalInvariantError(f"complement in degree {n} has the wrong size")
    if not split:
        return HomologyData(C, z_rank, b_rank, h_rank, torsion)
    sigma, bdry, tau, coords = {}, {}, {}, {}
    for n in C.support:
        r = C.rank(n)
        sigma[n] = linalg.from_columns(ring, sigma_cols[n], r)
        bdry[n] = linalg.from_columns(ring, bdry_cols[n], r)
        tau[n] = linalg.from_columns(ring, tau_cols[n], r)
        M = _assemble(ring, (sigma_cols[n], bdry_cols[n], tau_cols[n]), r)
        try:
            coords[n] = linalg.inverse(ring, M)
        except Exception as exc:  # a failed inverse here means the decomposition is not direct
            raise InternalInvariantError(f"decomposition of degree {n} is not direct: {exc}") from None
    return HomologyData(C, z_rank, b_rank, h_rank, torsion, sigma, bdry, tau, coords)


def check_assumption_A(C: DgModule) -> tuple[bool, HomologyData]:
    data = homology(C)
    return data.assumption_a, data


def split_homology(C: DgModule) -> HomologyData:
    """Homology data with a splitting; raises if the complex is not split."""
    data = homology(C)
    data._need_split()
    return data


# -- linear maps C -> D ----------------------------------------------------------


def is_chain_map(f: GradedMap) -> bool:
    return hom_differential(f).is_zero()


def induced_map(f: GradedMap, hc: HomologyData | None = None, hd: HomologyData | None = None) -> GradedMap:
    """``[c] -> [f(c)]`` as a map ``H(C) -> H(D)`` of the same degree."""
    if not is_chain_map(f):
        raise NotAChainMap("df != 0")
    hc = hc or split_homology(f.source)
    hd = hd or split_homology(f.target)
    return hd.proj_map @ f @ hc.sigma_map


def lift_cycle_map(g: GradedMap, hc: HomologyData, hd: HomologyData) -> GradedMap:
    """A chain map ``sigma_D g P_H`` inducing ``g``."""
    hc._need_split()
    hd._need_split()
    if not (same_module(g.source, hc.H) and same_module(g.target, hd.H)):
        raise DegreeMismatch("g must map H(C) to H(D)")
    f = hd.sigma_map @ g @ hc.proj_map
    if not is_chain_map(f) or not induced_map(f, hc, hd) == g:
        raise InternalInvariantError("lifted map does not induce g")
    return f


def write_as_boundary(f: GradedMap, hc: HomologyData | None = None, hd: HomologyData | None = None) -> GradedMap:
    """For a chain map inducing zero, return ``u`` of degree ``i+1`` with ``du = f``.

    ``u = (-1)**i f h_C + h_D f pi_C``.
    """
    hc = hc or split_homology(f.source)
    hd = hd or split_homology(f.target)
    if not is_chain_map(f):
        raise NotAChainMap("df != 0")
    if not induced_map(f, hc, hd).is_zero():
        raise NonzeroInducedMap("f induces a nonzero map on homology")
    pi_c = hc.sigma_map @ hc.proj_map
    u = f @ hc.homotopy_map
    if f.degree & 1:
        u = -u
    u = u + hd.homotopy_map @ f @ pi_c
    if not hom_differential(u) == f:
        raise InternalInvariantError("du != f")
    return u


@dataclass
class IsoDegree:
    degree: int
    rank_homology_of_hom: int
    rank_hom_of_homology: int
    bijective: bool


@dataclass
class IsoReport:
    degrees: list
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def hom_homology_iso(C: DgModule, D: DgModule) -> IsoReport:
    """Compare ``H(Hom(C, D))`` with ``Hom(H(C), H(D))`` degree by degree.

    The comparison map sends a cycle ``f`` to its induced map.  It is checked
    to kill boundaries and to be invertible on a basis of ``H(Hom(C, D))``.
    """
    hc, hd = split_homology(C), split_homology(D)
    ring = C.ring
    HomCD = hom_complex(C, D)
    hh = split_homology(HomCD)
    degrees, failures = [], []
    all_deg = sorted(set(HomCD.support) | set(_hom_of_h_degrees(hc, hd)))
    for i in all_deg:
        target_rank = sum(r * hd.h_rank.get(n + i, 0) for n, r in hc.h_rank.items())
        src_rank = hh.h_rank.get(i, 0)
        ok = src_rank == target_rank
        if ok and src_rank:
            cols = []
            for k in range(src_rank):
                vec = linalg.column(hh.sigma[i], k)
                f = hom_map(C, D, i, vec)
                cols.append(hom_vector(induced_map(f, hc, hd)))
            M = linalg.from_columns(ring, cols, target_rank)
            ok = ring.is_unit(linalg.determinant(ring, M))
        if ok and hh.b_rank.get(i):
            for k in range(hh.b_rank[i]):
                f = hom_map(C, D, i, linalg.column(hh.bdry[i], k))
                if not induced_map(f, hc, hd).is_zero():
                    ok = False
                    break
        degrees.append(IsoDegree(i, src_rank, target_rank, ok))
        if not ok:
            failures.append(i)
    return IsoReport(degrees, failures)


def _hom_of_h_degrees(hc, hd):
    out = set()
    for n, r in hc.h_rank.items():
        for m, s in hd.h_rank.items():
            if r and s:
                out.add(m - n)
    return out


# -- multilinear maps on one complex ---------------------------------------------------


def require_projective(data: HomologyData) -> None:
    """Cycles and homology must be free; over the integers cycles always are."""
    if not data.assumption_a:
        bad = {n: t for n, t in data.torsion.items() if t}
        raise ProjectivityViolated(f"homology is not free: {bad}")


def induced_multimap(f: MultiMap, data: HomologyData, *, check: bool = True) -> MultiMap:
    """``P_H f sigma^{(x) n}``: the map on homology induced by a cycle of ``End^n(C)``."""
    require_projective(data)
    if check and not boundary(f).is_zero():
        raise NotAChainMap("df != 0")
    return f.precompose_each(data.sigma_mm).postcompose(data.proj_mm)


def lift_multimap(g: MultiMap, data: HomologyData) -> MultiMap:
    """``sigma g P_H^{(x) n}``: a cycle of ``End^n(C)`` inducing ``g`` on homology."""
    require_projective(data)
    if not (same_module(g.source, data.H) and same_module(g.target, data.H)):
        raise DegreeMismatch("g must be a map on H(C)")
    f = g.precompose_each(data.proj_mm).postcompose(data.sigma_mm)
    if not boundary(f).is_zero() or not induced_multimap(f, data, check=False) == g:
        raise InternalInvariantError("lifted multimap does not induce g")
    return f


def tensor_homotopy_term(f: MultiMap, data: HomologyData) -> MultiMap:
    """``f o H`` for the tensor homotopy ``H = sum_k pi^{(x) k-1} (x) h (x) id^{(x) n-k}``."""
    pi, h = data.pi_mm, data.homotopy_mm
    out = MultiMap.zero(f.source, f.target, f.arity, f.degree + 1)
    for k in range(1, f.arity + 1):
        g = f
        for a in range(1, k):
            g = g.compose(a, pi)
        out = out + g.compose(k, h)
    return out


def write_multimap_as_boundary(f: MultiMap, data: HomologyData, *, check: bool = True) -> MultiMap:
    """For a cycle ``f`` of ``End^n(C)`` inducing zero, return ``u`` with ``du = f``.

    ``u = (-1)**i f o H + h f pi^{(x) n}`` where ``H`` is the homotopy on the
    tensor power built from ``h`` and ``pi``.
    """
    require_projective(data)
    if check:
        if not boundary(f).is_zero():
            raise NotAChainMap("df != 0")
        if not induced_multimap(f, data, check=False).is_zero():
            raise NonzeroInducedMap("f induces a nonzero map on homology")
    u = tensor_homotopy_term(f, data).signed(f.degree)
    u = u + f.precompose_each(data.pi_mm).postcompose(data.homotopy_mm)
    if not boundary(u) == f:
        raise InternalInvariantError("du != f")
    return u


def multi_hom_iso(C: DgModule, n: int) -> IsoReport:
    """Compare ``H(Hom(C^{(x) n}, C))`` with ``Hom(H(C)^{(x) n}, H(C))`` degree by degree."""
    data = homology(C)
    require_projective(data)
    if n == 1:
        return hom_homology_iso(C, C)
    P = tensor_power(C, n)
    HomPC = hom_complex(P, C)
    hh = split_homology(HomPC)
    H = data.H
    ring = C.ring
    degrees, failures = [], []
    lo_hi = _multi_degrees(H, n)
    for i in sorted(set(HomPC.support) | lo_hi):
        keys = multimap_basis(H, H, n, i)
        target_rank = len(keys)
        src_rank = hh.h_rank.get(i, 0)
        ok = src_rank == target_rank
        if ok and src_rank:
            cols = []
            for k in range(src_rank):
                F = hom_map(P, C, i, linalg.column(hh.sigma[i], k))
                f = MultiMap.from_power_map(F, C, n)
                cols.append(induced_multimap(f, data).to_vector(keys))
            ok = ring.is_unit(linalg.determinant(ring, linalg.from_columns(ring, cols, target_rank)))
        if ok and hh.b_rank.get(i):
            for k in range(hh.b_rank[i]):
                F = hom_map(P, C, i, linalg.column(hh.bdry[i], k))
                if not induced_multimap(MultiMap.from_power_map(F, C, n), data).is_zero():
                    ok = False
                    break
        degrees.append(IsoDegree(i, src_rank, target_rank, ok))
        if not ok:
            failures.append(i)
    return IsoReport(degrees, failures)


def _multi_degrees(H: DgModule, n: int) -> set:
    if not H.support:
        return set()
    lo, hi = H.support[0], H.support[-1]
    return {o - s for o in H.support for s in range(n * lo, n * hi + 1)
            if multimap_basis(H, H, n, o - s)}
