"""Finite-support graded modules, chain complexes and (multi)linear maps.

Every module carries a fixed ordered basis: degrees ascend, and inside one
degree the basis elements are numbered ``0 .. rank-1``.  Concatenating the
degrees gives a *global* index for each basis element, which is how
:class:`MultiMap` refers to inputs and outputs.

Differentials have degree -1.  Signs follow the Koszul rule: moving a map of
degree ``p`` past an element of degree ``q`` costs ``(-1)**(p*q)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from . import linalg
from .errors import (
    ArityOutOfRange,
    DegreeMismatch,
    NotADifferential,
    RingMismatch,
)
from .scalars import RingSpec


def _freeze(M):
    return tuple(tuple(row) for row in M)


@dataclass(frozen=True)
class GradedModule:
    ring: RingSpec
    dims: tuple  # ((degree, rank), ...) sorted, ranks > 0

    @classmethod
    def from_dims(cls, ring: RingSpec, dims) -> "GradedModule":
        items = dims.items() if hasattr(dims, "items") else dims
        clean = {}
        for deg, rank in items:
            if int(rank) < 0:
                raise ValueError(f"negative rank in degree {deg}")
            if int(rank):
                clean[int(deg)] = clean.get(int(deg), 0) + int(rank)
        return cls(ring, tuple(sorted(clean.items())))

    def rank(self, n: int) -> int:
        return self._rank_map.get(n, 0)

    @cached_property
    def _rank_map(self):
        return dict(self.dims)

    @property
    def support(self) -> list[int]:
        return [d for d, _ in self.dims]

    @cached_property
    def total_rank(self) -> int:
        return sum(r for _, r in self.dims)

    @cached_property
    def offsets(self) -> dict:
        out, pos = {}, 0
        for d, r in self.dims:
            out[d] = pos
            pos += r
        return out

    @cached_property
    def basis_degrees(self) -> tuple:
        return tuple(d for d, r in self.dims for _ in range(r))

    def index(self, degree: int, k: int) -> int:
        if not 0 <= k < self.rank(degree):
            raise IndexError(f"no basis element {k} in degree {degree}")
        return self.offsets[degree] + k

    def local(self, g: int) -> tuple[int, int]:
        d = self.basis_degrees[g]
        return d, g - self.offsets[d]


@dataclass(frozen=True)
class DgModule:
    """A free graded module with a degree -1 differential.

    ``d`` holds the nonzero blocks ``d_n : C_n -> C_{n-1}`` as matrices with
    ``rank(n-1)`` rows and ``rank(n)`` columns.
    """

    graded: GradedModule
    d: tuple = ()  # ((n, matrix), ...)
    labels: tuple | None = field(default=None, compare=False, repr=False)
    suspension_of: "DgModule | None" = field(default=None, compare=False, repr=False)

    # -- basic data -----------------------------------------------------

    @property
    def ring(self) -> RingSpec:
        return self.graded.ring

    @property
    def dims(self):
        return self.graded.dims

    def rank(self, n: int) -> int:
        return self.graded.rank(n)

    @property
    def support(self) -> list[int]:
        return self.graded.support

    @property
    def total_rank(self) -> int:
        return self.graded.total_rank

    @property
    def basis_degrees(self) -> tuple:
        return self.graded.basis_degrees

    def index(self, degree: int, k: int) -> int:
        return self.graded.index(degree, k)

    def local(self, g: int) -> tuple[int, int]:
        return self.graded.local(g)

    @cached_property
    def _blocks(self) -> dict:
        return dict(self.d)

    def d_block(self, n: int):
        """The matrix of ``d_n : C_n -> C_{n-1}`` (zero if not stored)."""
        blk = self._blocks.get(n)
        if blk is None:
            return linalg.zeros(self.ring, self.rank(n - 1), self.rank(n))
        return [list(row) for row in blk]

    @cached_property
    def d_columns(self) -> tuple:
        """``d_columns[g]`` is the sparse image ``((g', c), ...)`` of basis element ``g``."""
        cols = []
        for g, deg in enumerate(self.basis_degrees):
            blk = self._blocks.get(deg)
            if blk is None:
                cols.append(())
                continue
            k = g - self.graded.offsets[deg]
            base = self.graded.offsets.get(deg - 1, 0)
            cols.append(tuple((base + i, row[k]) for i, row in enumerate(blk) if row[k] != 0))
        return tuple(cols)

    @property
    def has_zero_differential(self) -> bool:
        return not self.d

    def check(self) -> None:
        """Raise if a block has the wrong shape or ``d o d != 0``."""
        for n, blk in self.d:
            if len(blk) != self.rank(n - 1) or any(len(row) != self.rank(n) for row in blk):
                raise NotADifferential(f"block d_{n} has the wrong shape")
        for n in self.support:
            if self.rank(n - 2) == 0:
                continue
            prod = linalg.matmul(self.ring, self.d_block(n - 1), self.d_block(n), self.rank(n))
            if any(x != 0 for row in prod for x in row):
                raise NotADifferential(f"d_{n - 1} o d_{n} != 0")

    def __str__(self):
        dims = ", ".join(f"{d}:{r}" for d, r in self.dims)
        return f"DgModule({self.ring}; {dims})"


def dgmodule(ring: RingSpec, dims, d=None, *, check: bool = True, labels=None) -> DgModule:
    """Build a :class:`DgModule` from ``{degree: rank}`` and ``{n: matrix of d_n}``."""
    graded = GradedModule.from_dims(ring, dims)
    blocks = []
    for n, M in sorted((d or {}).items()):
        n = int(n)
        rows, cols = graded.rank(n - 1), graded.rank(n)
        M = [[ring.coerce(x) for x in row] for row in M]
        if rows == 0 or cols == 0:
            if any(x != 0 for row in M for x in row):
                raise NotADifferential(f"nonzero block d_{n} outside the support")
            continue
        if len(M) != rows or any(len(row) != cols for row in M):
            raise NotADifferential(f"block d_{n} must be {rows}x{cols}")
        if any(x != 0 for row in M for x in row):
            blocks.append((n, _freeze(M)))
    C = DgModule(graded, tuple(blocks), labels=labels)
    if check:
        C.check()
    return C


def graded_module(ring: RingSpec, dims) -> DgModule:
    """A module with zero differential."""
    return dgmodule(ring, dims, {}, check=False)


def same_module(a: DgModule, b: DgModule) -> bool:
    return a is b or a == b


def _require_same_ring(*mods):
    rings = {m.ring for m in mods}
    if len(rings) > 1:
        raise RingMismatch(", ".join(str(r) for r in rings))


# -- constructions -----------------------------------------------------------


def tensor(C: DgModule, D: DgModule) -> DgModule:
    """``C (x) D`` with ``d(c (x) e) = dc (x) e + (-1)**|c| c (x) de``.

    The basis of ``(C (x) D)_n`` is ordered by ``(deg c, index of c, index of e)``;
    ``labels[g]`` is the pair of global indices ``(c, e)``.
    """
    _require_same_ring(C, D)
    ring = C.ring
    dims = {}
    labels_by_deg = {}
    for i, ri in C.dims:
        for j, rj in D.dims:
            n = i + j
            dims[n] = dims.get(n, 0) + ri * rj
            lst = labels_by_deg.setdefault(n, [])
            for a in range(ri):
                for b in range(rj):
                    lst.append((i, C.index(i, a), D.index(j, b)))
    graded = GradedModule.from_dims(ring, dims)
    labels = []
    for n in graded.support:
        labels.extend((c, e) for _, c, e in sorted(labels_by_deg[n]))
    where = {lab: g for g, lab in enumerate(labels)}
    blocks = {}
    for g, (c, e) in enumerate(labels):
        n = graded.basis_degrees[g]
        if graded.rank(n - 1) == 0:
            continue
        col = {}
        sc = C.basis_degrees[c]
        for c2, v in C.d_columns[c]:
            t = where[(c2, e)]
            col[t] = ring.add(col.get(t, ring.zero), v)
        for e2, v in D.d_columns[e]:
            t = where[(c, e2)]
            col[t] = ring.add(col.get(t, ring.zero), ring.sign(sc, v))
        if col:
            blk = blocks.setdefault(n, linalg.zeros(ring, graded.rank(n - 1), graded.rank(n)))
            base_src, base_tgt = graded.offsets[n], graded.offsets[n - 1]
            for t, v in col.items():
                blk[t - base_tgt][g - base_src] = v
    out = DgModule(graded, tuple((n, _freeze(M)) for n, M in sorted(blocks.items())
                                 if any(x != 0 for row in M for x in row)),
                   labels=tuple(labels))
    return out


def tensor_power(C: DgModule, n: int) -> DgModule:
    """``C^{(x) n}`` built left to right; ``labels[g]`` is a tuple of ``n`` indices of ``C``."""
    if n < 1:
        raise ArityOutOfRange("tensor power needs n >= 1")
    T = DgModule(C.graded, C.d, labels=tuple((g,) for g in range(C.total_rank)))
    for _ in range(n - 1):
        prev = T
        T = tensor(prev, C)
        T = DgModule(T.graded, T.d, labels=tuple(prev.labels[a] + (b,) for a, b in T.labels))
    return T


def suspend(C: DgModule) -> DgModule:
    """``(sC)_i = C_{i-1}`` with ``d(sc) = -s(dc)``.  Global indices are preserved."""
    ring = C.ring
    graded = GradedModule(ring, tuple((d + 1, r) for d, r in C.dims))
    blocks = tuple((n + 1, _freeze([[ring.neg(x) for x in row] for row in M])) for n, M in C.d)
    return DgModule(graded, blocks, labels=C.labels, suspension_of=C)


# -- graded linear maps ---------------------------------------------------------


class GradedMap:
    """A degree-``degree`` linear map ``source -> target`` given by per-degree matrices."""

    def __init__(self, source: DgModule, target: DgModule, degree: int, blocks=None):
        _require_same_ring(source, target)
        self.source = source
        self.target = target
        self.degree = degree
        self.blocks = {}
        for n, M in (blocks or {}).items():
            rows, cols = target.rank(n + degree), source.rank(n)
            if rows == 0 or cols == 0:
                continue
            if len(M) != rows or any(len(r) != cols for r in M):
                raise DegreeMismatch(f"block {n} must be {rows}x{cols}")
            if any(x != 0 for row in M for x in row):
                self.blocks[n] = [list(row) for row in M]

    @property
    def ring(self):
        return self.source.ring

    def block(self, n: int):
        M = self.blocks.get(n)
        if M is None:
            return linalg.zeros(self.ring, self.target.rank(n + self.degree), self.source.rank(n))
        return M

    @classmethod
    def identity(cls, C: DgModule) -> "GradedMap":
        return cls(C, C, 0, {n: linalg.identity(C.ring, r) for n, r in C.dims})

    @classmethod
    def differential(cls, C: DgModule) -> "GradedMap":
        return cls(C, C, -1, {n: C.d_block(n) for n in C.support})

    def _combine(self, other, op):
        if not (same_module(self.source, other.source) and same_module(self.target, other.target)
                and self.degree == other.degree):
            raise DegreeMismatch("maps have different shapes")
        blocks = {}
        for n in set(self.blocks) | set(other.blocks):
            A, B = self.block(n), other.block(n)
            blocks[n] = [[op(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]
        return GradedMap(self.source, self.target, self.degree, blocks)

    def __add__(self, other):
        return self._combine(other, self.ring.add)

    def __sub__(self, other):
        return self._combine(other, self.ring.sub)

    def __neg__(self):
        return self.scale(self.ring.neg(self.ring.one))

    def scale(self, c) -> "GradedMap":
        c = self.ring.coerce(c)
        return GradedMap(self.source, self.target, self.degree,
                         {n: [[self.ring.mul(c, x) for x in row] for row in M] for n, M in self.blocks.items()})

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        """Composition ``self o other``."""
        if not same_module(other.target, self.source):
            raise DegreeMismatch("maps are not composable")
        blocks = {}
        for n in other.blocks:
            A = self.blocks.get(n + other.degree)
            if A is None:
                continue
            blocks[n] = linalg.matmul(self.ring, A, other.blocks[n], other.source.rank(n))
        return GradedMap(other.source, self.target, self.degree + other.degree, blocks)

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (same_module(self.source, other.source) and same_module(self.target, other.target)
                and self.degree == other.degree and self.blocks == other.blocks)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.blocks

    def apply(self, n: int, vec):
        return linalg.matvec(self.ring, self.block(n), vec)

    def __repr__(self):
        return f"GradedMap(degree={self.degree}, blocks={self.blocks})"


def hom_differential(f: GradedMap) -> GradedMap:
    """``(df)_n = d_D f_n - (-1)**i f_{n-1} d_C`` for ``f`` of degree ``i``."""
    ring = f.ring
    C, D, i = f.source, f.target, f.degree
    blocks = {}
    for n in C.support:
        rows = D.rank(n + i - 1)
        if rows == 0:
            continue
        acc = linalg.matmul(ring, D.d_block(n + i), f.block(n), C.rank(n)) if D.rank(n + i) else \
            linalg.zeros(ring, rows, C.rank(n))
        if C.rank(n - 1):
            second = linalg.matmul(ring, f.block(n - 1), C.d_block(n), C.rank(n))
            acc = [[ring.sub(x, ring.sign(i, y)) for x, y in zip(ra, rb)] for ra, rb in zip(acc, second)]
        blocks[n] = acc
    return GradedMap(C, D, i - 1, blocks)


def _hom_layout(C: DgModule, D: DgModule, i: int):
    """Basis labels ``(n, r, c)`` of ``Hom_i(C, D)``: entry ``(r, c)`` of block ``f_n``."""
    return [(n, r, c) for n in C.support for r in range(D.rank(n + i)) for c in range(C.rank(n))]


def hom_degrees(C: DgModule, D: DgModule) -> list[int]:
    if not C.support or not D.support:
        return []
    lo = D.support[0] - C.support[-1]
    hi = D.support[-1] - C.support[0]
    return [i for i in range(lo, hi + 1) if _hom_layout(C, D, i)]


def hom_complex(C: DgModule, D: DgModule) -> DgModule:
    """The chain complex ``Hom(C, D)``; ``labels[g] = (n, r, c)`` per basis element."""
    _require_same_ring(C, D)
    ring = C.ring
    layouts = {i: _hom_layout(C, D, i) for i in hom_degrees(C, D)}
    graded = GradedModule.from_dims(ring, {i: len(lay) for i, lay in layouts.items()})
    blocks = {}
    for i, lay in layouts.items():
        tgt = layouts.get(i - 1)
        if not tgt:
            continue
        where = {lab: k for k, lab in enumerate(tgt)}
        M = linalg.zeros(ring, len(tgt), len(lay))
        for col, (n, r, c) in enumerate(lay):
            # d_D o E: column c of the target block picks up column r of d_D
            if D.rank(n + i - 1):
                dD = D.d_block(n + i)
                for r2 in range(D.rank(n + i - 1)):
                    v = dD[r2][r]
                    if v != 0:
                        k = where[(n, r2, c)]
                        M[k][col] = ring.add(M[k][col], v)
            # -(-1)^i E o d_C lives in block n+1
            if C.rank(n + 1) and D.rank(n + i):
                dC = C.d_block(n + 1)
                for c2 in range(C.rank(n + 1)):
                    v = dC[c][c2]
                    if v != 0:
                        k = where[(n + 1, r, c2)]
                        M[k][col] = ring.sub(M[k][col], ring.sign(i, v))
        if any(x != 0 for row in M for x in row):
            blocks[i] = _freeze(M)
    labels = tuple(lab for i in graded.support for lab in layouts[i])
    return DgModule(graded, tuple(sorted(blocks.items())), labels=labels)


def hom_vector(f: GradedMap) -> list:
    """Coordinates of ``f`` in the basis of ``Hom_{deg f}(C, D)``."""
    return [f.block(n)[r][c] for n, r, c in _hom_layout(f.source, f.target, f.degree)]


def hom_map(C: DgModule, D: DgModule, i: int, vec) -> GradedMap:
    ring = C.ring
    lay = _hom_layout(C, D, i)
    if len(vec) != len(lay):
        raise DegreeMismatch("coordinate vector has the wrong length")
    blocks = {}
    for (n, r, c), v in zip(lay, vec):
        if v != 0:
            blk = blocks.setdefault(n, linalg.zeros(ring, D.rank(n + i), C.rank(n)))
            blk[r][c] = v
    return GradedMap(C, D, i, blocks)


def suspension_map(C: DgModule, sC: DgModule | None = None) -> GradedMap:
    """``s : C -> sC`` of degree +1."""
    sC = sC or suspend(C)
    return GradedMap(C, sC, 1, {n: linalg.identity(C.ring, r) for n, r in C.dims})


def desuspension_map(C: DgModule, sC: DgModule | None = None) -> GradedMap:
    """``s^-1 : sC -> C`` of degree -1."""
    sC = sC or suspend(C)
    return GradedMap(sC, C, -1, {n + 1: linalg.identity(C.ring, r) for n, r in C.dims})


def koszul_tensor_of_maps(f: GradedMap, g: GradedMap,
                          source: DgModule | None = None, target: DgModule | None = None) -> GradedMap:
    """``(f (x) g)(x (x) y) = (-1)**(|x| |g|) f(x) (x) g(y)``.

    ``source``/``target`` may pass in already-built tensor products so that
    iterated products share module objects.
    """
    _require_same_ring(f.source, g.source)
    ring = f.ring
    S = source or tensor(f.source, g.source)
    T = target or tensor(f.target, g.target)
    where = {lab: k for k, lab in enumerate(T.labels)}
    blocks = {}
    for col, (x, y) in enumerate(S.labels):
        dx, kx = f.source.local(x)
        dy, ky = g.source.local(y)
        fx = f.block(dx)
        gy = g.block(dy)
        sgn = (dx * g.degree) & 1
        n = dx + dy
        for a in range(f.target.rank(dx + f.degree)):
            va = fx[a][kx]
            if va == 0:
                continue
            for b in range(g.target.rank(dy + g.degree)):
                vb = gy[b][ky]
                if vb == 0:
                    continue
                t = where[(f.target.index(dx + f.degree, a), g.target.index(dy + g.degree, b))]
                blk = blocks.setdefault(n, linalg.zeros(ring, T.rank(n + f.degree + g.degree), S.rank(n)))
                tr, tc = T.local(t)[1], S.local(col)[1]
                blk[tr][tc] = ring.add(blk[tr][tc], ring.sign(sgn, ring.mul(va, vb)))
    return GradedMap(S, T, f.degree + g.degree, blocks)


# -- multilinear maps -------------------------------------------------------------


class MultiMap:
    """A degree-``degree`` map ``source^{(x) arity} -> target``.

    ``terms`` maps ``(output, inputs)`` (global basis indices, ``inputs`` a
    tuple of length ``arity``) to a nonzero raw coefficient.  Every term is
    degree-consistent: ``deg(output) = sum(deg(inputs)) + degree``.
    """

    __slots__ = ("source", "target", "arity", "degree", "terms")

    def __init__(self, source: DgModule, target: DgModule, arity: int, degree: int,
                 terms=None, *, check: bool = True):
        if arity < 1:
            raise ArityOutOfRange("arity must be >= 1")
        if source.ring != target.ring:
            raise RingMismatch(f"{source.ring} vs {target.ring}")
        self.source = source
        self.target = target
        self.arity = arity
        self.degree = degree
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}
        if check:
            self._check()

    def _check(self):
        sd, td = self.source.basis_degrees, self.target.basis_degrees
        for out, ins in self.terms:
            if len(ins) != self.arity:
                raise ArityOutOfRange(f"term {out, ins} has arity {len(ins)} != {self.arity}")
            if not (0 <= out < len(td)) or any(not 0 <= x < len(sd) for x in ins):
                raise DegreeMismatch(f"term {out, ins} references a missing basis element")
            if td[out] != sum(sd[x] for x in ins) + self.degree:
                raise DegreeMismatch(f"term {out, ins} is not of degree {self.degree}")

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, source, target=None, arity=1, degree=0) -> "MultiMap":
        return cls(source, target or source, arity, degree, {}, check=False)

    @classmethod
    def identity(cls, C: DgModule) -> "MultiMap":
        return cls(C, C, 1, 0, {(g, (g,)): C.ring.one for g in range(C.total_rank)}, check=False)

    @classmethod
    def differential(cls, C: DgModule) -> "MultiMap":
        terms = {}
        for g, col in enumerate(C.d_columns):
            for t, v in col:
                terms[(t, (g,))] = v
        return cls(C, C, 1, -1, terms, check=False)

    @classmethod
    def from_graded_map(cls, f: GradedMap) -> "MultiMap":
        terms = {}
        for n, M in f.blocks.items():
            base_s = f.source.graded.offsets[n]
            base_t = f.target.graded.offsets[n + f.degree]
            for r, row in enumerate(M):
                for c, v in enumerate(row):
                    if v != 0:
                        terms[(base_t + r, (base_s + c,))] = v
        return cls(f.source, f.target, 1, f.degree, terms, check=False)

    # -- basic data ------------------------------------------------------

    @property
    def ring(self) -> RingSpec:
        return self.source.ring

    @property
    def weight(self) -> int:
        return self.degree + self.arity - 1

    @property
    def shape(self):
        return (self.arity, self.degree)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"MultiMap(arity={self.arity}, degree={self.degree}, terms={dict(self.sorted_terms())})"

    def __eq__(self, other):
        if not isinstance(other, MultiMap):
            return NotImplemented
        return (self.arity == other.arity and self.degree == other.degree
                and same_module(self.source, other.source) and same_module(self.target, other.target)
                and self.terms == other.terms)

    __hash__ = None

    # -- linear structure ------------------------------------------------

    def _like(self, terms) -> "MultiMap":
        return MultiMap(self.source, self.target, self.arity, self.degree, terms, check=False)

    def _compatible(self, other):
        if not isinstance(other, MultiMap):
            raise TypeError("expected a MultiMap")
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if (self.arity, self.degree) != (other.arity, other.degree) or not (
                same_module(self.source, other.source) and same_module(self.target, other.target)):
            if self.is_zero() and same_module(self.source, other.source):
                return
            if other.is_zero() and same_module(self.source, other.source):
                return
            raise DegreeMismatch(f"cannot add maps of shape {self.shape} and {other.shape}")

    def __add__(self, other):
        self._compatible(other)
        if self.is_zero():
            return other
        ring = self.ring
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = ring.add(terms[k], v) if k in terms else v
        return self._like(terms)

    def __neg__(self):
        ring = self.ring
        return self._like({k: ring.neg(v) for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MultiMap":
        ring = self.ring
        c = ring.coerce(c)
        if c == 0:
            return self._like({})
        return self._like({k: ring.mul(c, v) for k, v in self.terms.items()})

    def signed(self, parity: int) -> "MultiMap":
        return -self if parity & 1 else self

    # -- evaluation and composition ---------------------------------------

    def apply(self, inputs) -> dict:
        """Evaluate on a tuple of basis elements; returns ``{output: coefficient}``."""
        inputs = tuple(inputs)
        if len(inputs) != self.arity:
            raise ArityOutOfRange(f"expected {self.arity} inputs")
        out = {}
        for (o, ins), v in self.terms.items():
            if ins == inputs:
                out[o] = self.ring.add(out.get(o, self.ring.zero), v)
        return {k: v for k, v in out.items() if v != 0}

    def compose(self, k: int, g: "MultiMap") -> "MultiMap":
        """Insertion ``f o_k g = f(id^{k-1} (x) g (x) id^{n-k})`` with Koszul signs.

        On a basis tuple the result carries ``(-1)**(deg g * (|x_1|+...+|x_{k-1}|))``.
        """
        if not 1 <= k <= self.arity:
            raise ArityOutOfRange(f"slot {k} out of range 1..{self.arity}")
        if self.ring != g.ring:
            raise RingMismatch(f"{self.ring} vs {g.ring}")
        if not same_module(g.target, self.source) or not same_module(g.source, self.source):
            raise DegreeMismatch("insertion needs maps on one module")
        ring = self.ring
        degs = self.source.basis_degrees
        gdeg_odd = g.degree & 1
        by_slot = {}
        for (o, ins), v in self.terms.items():
            by_slot.setdefault(ins[k - 1], []).append((o, ins, v))
        terms = {}
        for (go, gins), gv in g.terms.items():
            for o, ins, v in by_slot.get(go, ()):
                new = ins[:k - 1] + gins + ins[k:]
                c = ring.mul(v, gv)
                if gdeg_odd and sum(degs[x] for x in ins[:k - 1]) & 1:
                    c = ring.neg(c)
                key = (o, new)
                terms[key] = ring.add(terms[key], c) if key in terms else c
        return MultiMap(self.source, self.target, self.arity + g.arity - 1, self.degree + g.degree,
                        terms, check=False)

    def precompose_each(self, phi: "MultiMap") -> "MultiMap":
        """``f o (phi (x) ... (x) phi)`` for a degree-0 linear map ``phi : C' -> source``."""
        if phi.arity != 1 or phi.degree != 0:
            raise DegreeMismatch("precompose_each needs a degree-0 linear map")
        if not same_module(phi.target, self.source):
            raise DegreeMismatch("phi does not land in the source")
        ring = self.ring
        preimages = {}
        for (o, (x,)), v in phi.terms.items():
            preimages.setdefault(o, []).append((x, v))
        terms = {}
        for (o, ins), v in self.terms.items():
            choices = [preimages.get(x) for x in ins]
            if any(c is None for c in choices):
                continue
            for combo in itertools.product(*choices):
                c = v
                for _, w in combo:
                    c = ring.mul(c, w)
                key = (o, tuple(x for x, _ in combo))
                terms[key] = ring.add(terms[key], c) if key in terms else c
        return MultiMap(phi.source, self.target, self.arity, self.degree, terms, check=False)

    def postcompose(self, phi: "MultiMap") -> "MultiMap":
        """``phi o f`` for a linear map ``phi : target -> T``."""
        if phi.arity != 1:
            raise ArityOutOfRange("postcompose needs a linear map")
        if not same_module(phi.source, self.target):
            raise DegreeMismatch("phi does not start at the target")
        ring = self.ring
        images = {}
        for (o, (x,)), v in phi.terms.items():
            images.setdefault(x, []).append((o, v))
        terms = {}
        for (o, ins), v in self.terms.items():
            for o2, w in images.get(o, ()):
                key = (o2, ins)
                c = ring.mul(w, v)
                terms[key] = ring.add(terms[key], c) if key in terms else c
        return MultiMap(self.source, phi.target, self.arity, self.degree + phi.degree, terms, check=False)

    # -- coordinates -------------------------------------------------------

    def to_vector(self, keys, index=None) -> list:
        index = index or {k: i for i, k in enumerate(keys)}
        vec = [self.ring.zero] * len(keys)
        for k, v in self.terms.items():
            try:
                vec[index[k]] = v
            except KeyError:
                raise DegreeMismatch(f"term {k} outside the given basis") from None
        return vec

    @classmethod
    def from_vector(cls, source, target, arity, degree, keys, vec) -> "MultiMap":
        return cls(source, target, arity, degree, {k: v for k, v in zip(keys, vec) if v != 0}, check=False)

    def to_graded_map(self, power: DgModule | None = None) -> GradedMap:
        """The same map as a :class:`GradedMap` out of ``tensor_power(source, arity)``."""
        P = power or tensor_power(self.source, self.arity)
        where = {lab: g for g, lab in enumerate(P.labels)}
        blocks = {}
        for (o, ins), v in self.terms.items():
            col = where[ins]
            n, c = P.local(col)
            blk = blocks.setdefault(n, linalg.zeros(self.ring, self.target.rank(n + self.degree), P.rank(n)))
            blk[self.target.local(o)[1]][c] = v
        return GradedMap(P, self.target, self.degree, blocks)

    @classmethod
    def from_power_map(cls, F: GradedMap, C: DgModule, arity: int) -> "MultiMap":
        """Inverse of :meth:`to_graded_map` for ``F`` defined on ``tensor_power(C, arity)``."""
        terms = {}
        for n, M in F.blocks.items():
            for r, row in enumerate(M):
                for c, v in enumerate(row):
                    if v != 0:
                        ins = F.source.labels[F.source.index(n, c)]
                        terms[(F.target.index(n + F.degree, r), tuple(ins))] = v
        return cls(C, F.target, arity, F.degree, terms)


def input_tuples(C: DgModule, arity: int, total_degree: int) -> list[tuple]:
    """All basis tuples of length ``arity`` whose degrees sum to ``total_degree``, sorted."""
    by_deg = {d: list(range(C.graded.offsets[d], C.graded.offsets[d] + r)) for d, r in C.dims}
    degs = sorted(by_deg)
    if not degs:
        return []
    lo, hi = degs[0], degs[-1]
    out = []

    def rec(prefix, remaining, need):
        if remaining == 0:
            if need == 0:
                out.append(tuple(prefix))
            return
        for d in degs:
            rest = need - d
            if not (lo * (remaining - 1) <= rest <= hi * (remaining - 1)):
                continue
            for g in by_deg[d]:
                prefix.append(g)
                rec(prefix, remaining - 1, rest)
                prefix.pop()

    rec([], arity, total_degree)
    return sorted(out)


def multimap_basis(source: DgModule, target: DgModule, arity: int, degree: int) -> list[tuple]:
    """The standard basis keys ``(output, inputs)`` of ``Hom_degree(source^arity, target)``."""
    keys = []
    for o, od in enumerate(target.basis_degrees):
        for ins in input_tuples(source, arity, od - degree):
            keys.append((o, ins))
    keys.sort()
    return keys


def boundary(f: MultiMap) -> MultiMap:
    """The Hom differential ``df = d o f - (-1)**i sum_k f o_k d`` on ``End^n_i``."""
    d = MultiMap.differential(f.source)
    out = d.compose(1, f)
    acc = MultiMap.zero(f.source, f.target, f.arity, f.degree - 1)
    for k in range(1, f.arity + 1):
        acc = acc + f.compose(k, d)
    return out - acc.signed(f.degree)
