"""Seeded generators for test instances and the search for blocked extensions.

Nothing here is hard-coded mathematics: A_3-structures are produced by
solving ``d m_3 = -m_2 o m_2`` with dense linear algebra, and instances whose
extension is blocked are found by random search and then certified by
enumerating every candidate coboundary preimage.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from . import linalg
from .ainfty import ArStructure, check_ar, homology_algebra
from .complexes import DgModule, MultiMap, boundary, dgmodule, graded_module, multimap_basis
from .errors import InternalInvariantError
from .hochschild import GradedAlgebra
from .homology import homology, lift_multimap
from .obstruction import extend_to_ainfty
from .prelie import circle, random_multimap, random_scalar
from .scalars import GF, RingSpec

# ``(dims, {(i, j): {k: c}})``: small associative algebras given by structure constants
TEMPLATES = {
    "unit": ({0: 1}, {(0, 0): {0: 1}}),
    "dual_numbers": ({0: 2}, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}),
    "split": ({0: 2}, {(0, 0): {0: 1}, (1, 1): {1: 1}}),
    "zero1": ({0: 1}, {}),
    "zero2": ({0: 2}, {}),
    "nilpotent": ({0: 2}, {(0, 0): {1: 1}}),
    "triangular": ({0: 3}, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 2): {1: 1}, (2, 2): {2: 1}}),
    "exterior": ({0: 1, 1: 1}, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}),
    "odd_square_zero": ({0: 1, 1: 1}, {}),
}


def template_algebra(ring: RingSpec, name: str) -> GradedAlgebra:
    dims, table = TEMPLATES[name]
    B = graded_module(ring, dims)
    terms = {}
    for (a, b), out in table.items():
        for k, c in out.items():
            terms[(k, (a, b))] = ring.coerce(c)
    return GradedAlgebra(B, MultiMap(B, B, 2, 0, terms))


def random_invertible(ring: RingSpec, rng: random.Random, n: int):
    """A random invertible (over ZZ: unimodular) matrix."""
    while True:
        M = [[random_scalar(ring, rng, nonzero=False) for _ in range(n)] for _ in range(n)]
        if n == 0 or ring.is_unit(linalg.determinant(ring, M)):
            return M


def _linear(B: DgModule, C: DgModule, blocks: dict) -> MultiMap:
    terms = {}
    for n, M in blocks.items():
        for r, row in enumerate(M):
            for c, v in enumerate(row):
                if v != 0:
                    terms[(C.index(n, r), (B.index(n, c),))] = v
    return MultiMap(B, C, 1, 0, terms, check=False)


def change_basis(alg: GradedAlgebra, rng: random.Random) -> GradedAlgebra:
    """Transport the product along a random degree-preserving automorphism."""
    ring, B = alg.ring, alg.B
    P = {n: random_invertible(ring, rng, r) for n, r in B.dims}
    Pinv = {n: linalg.inverse(ring, M) for n, M in P.items()}
    mu = alg.mu.precompose_each(_linear(B, B, P)).postcompose(_linear(B, B, Pinv))
    return GradedAlgebra(B, mu)


def associative_fixtures(ring: RingSpec, seed: int, count: int = 8) -> list:
    rng = random.Random(seed)
    names = sorted(TEMPLATES)
    out = []
    for t in range(count):
        out.append(change_basis(template_algebra(ring, names[t % len(names)]), rng))
    return out


# -- A_3 fixtures ------------------------------------------------------------------


def random_complex_around(H_dims: dict, ring: RingSpec, rng: random.Random, pairs: int) -> DgModule:
    """``H`` (zero differential) plus ``pairs`` contractible pieces, in a random basis."""
    dims = dict(H_dims)
    slots = {}
    for _ in range(pairs):
        k = rng.choice((0, 1, 2))
        for deg in (k, k - 1):
            dims[deg] = dims.get(deg, 0) + 1
        slots.setdefault(k, 0)
        slots[k] += 1
    # standard form: each pair (top, bottom) sits after the homology part of its degree
    used = {n: H_dims.get(n, 0) for n in dims}
    blocks = {n: linalg.zeros(ring, dims.get(n - 1, 0), dims[n]) for n in dims if dims.get(n - 1)}
    pair_list = []
    for k in sorted(slots):
        for _ in range(slots[k]):
            top = used[k]
            used[k] += 1
            pair_list.append((k, top))
    for k, top in pair_list:
        bottom = used[k - 1]
        used[k - 1] += 1
        blocks[k][bottom][top] = ring.one
    Q = {n: random_invertible(ring, rng, r) for n, r in dims.items()}
    Qinv = {n: linalg.inverse(ring, M) for n, M in Q.items()}
    new_blocks = {}
    for n, M in blocks.items():
        left = linalg.matmul(ring, Qinv[n - 1], M, dims[n])
        new_blocks[n] = linalg.matmul(ring, left, Q[n], dims[n])
    return dgmodule(ring, dims, new_blocks)


def boundary_matrix(A: DgModule, arity: int, degree: int):
    """Dense matrix of the Hom differential ``End^arity_degree -> End^arity_{degree-1}``."""
    src = multimap_basis(A, A, arity, degree)
    tgt = multimap_basis(A, A, arity, degree - 1)
    index = {k: t for t, k in enumerate(tgt)}
    cols = []
    for k in src:
        e = MultiMap(A, A, arity, degree, {k: A.ring.one}, check=False)
        cols.append(boundary(e).to_vector(tgt, index))
    return src, tgt, linalg.from_columns(A.ring, cols, len(tgt))


def solve_boundary(target: MultiMap) -> MultiMap | None:
    """Some ``x`` with ``dx = target``, found by dense linear algebra."""
    A = target.source
    src, tgt, M = boundary_matrix(A, target.arity, target.degree + 1)
    x = linalg.solve_exact(A.ring, M, target.to_vector(tgt), len(src))
    if x is None:
        return None
    return MultiMap.from_vector(A, A, target.arity, target.degree + 1, src, x)


@dataclass
class Fixture:
    name: str
    structure: ArStructure
    algebra_name: str


def generate_a3(ring: RingSpec, seed: int, *, pairs: int | None = None,
                template: str | None = None) -> Fixture:
    """An A_3-structure on ``H + contractible`` for a template algebra ``H``.

    ``m_2`` is a lift of a randomly transported template product plus a
    random boundary, and ``m_3`` solves ``d m_3 = -m_2 o m_2`` plus a random
    cycle.
    """
    rng = random.Random(seed)
    name = template or rng.choice(sorted(TEMPLATES))
    mu0 = change_basis(template_algebra(ring, name), rng)
    pairs = rng.randint(1, 2) if pairs is None else pairs
    A = random_complex_around(dict(mu0.B.dims), ring, rng, pairs)
    data = homology(A)
    if data.H != mu0.B:
        raise InternalInvariantError("homology of the generated complex has the wrong shape")
    m2 = lift_multimap(mu0.mu, data)
    v = random_multimap(A, rng, arity=2, degree=1, allow_zero=True)
    m2 = m2 + boundary(v)
    m3 = solve_boundary(-circle(m2, m2))
    if m3 is None:
        raise InternalInvariantError("m_2 o m_2 is not a boundary")
    w = random_multimap(A, rng, arity=3, degree=2, allow_zero=True)
    m3 = m3 + boundary(w)
    S = ArStructure(A, [MultiMap.differential(A), m2, m3])
    if not check_ar(S, 3).ok:
        raise InternalInvariantError("generated structure is not A_3")
    return Fixture(f"a3-{ring}-{seed}", S, name)


def a3_fixtures(ring: RingSpec, seed: int, count: int) -> list:
    return [generate_a3(ring, seed * 1000 + t) for t in range(count)]


def dga_fixture(ring: RingSpec) -> ArStructure:
    """A strictly associative dg algebra: ``R<x, y>`` truncated, with ``dy = x``.

    Basis ``1`` (deg 0), ``x`` (deg 0), ``y`` (deg 1); ``1`` is a unit,
    ``x^2 = 0``, ``xy = yx = 0``, ``y^2 = 0``.
    """
    A = dgmodule(ring, {0: 2, 1: 1}, {1: [[0], [1]]})
    one = ring.one
    mu = MultiMap(A, A, 2, 0, {(0, (0, 0)): one, (1, (0, 1)): one, (1, (1, 0)): one,
                               (2, (0, 2)): one, (2, (2, 0)): one})
    S = ArStructure(A, [MultiMap.differential(A), mu, MultiMap.zero(A, A, 3, 1)])
    if not check_ar(S).ok:
        raise InternalInvariantError("dga fixture is not associative")
    return S


# -- blocked extensions -------------------------------------------------------------


@dataclass
class Certificate:
    closed: bool
    nonexact: bool
    candidates: int

    @property
    def ok(self) -> bool:
        return self.closed and self.nonexact


def certify_nonexact(alg: GradedAlgebra, c: MultiMap, max_candidates: int = 1 << 20) -> Certificate:
    """Check ``d c = 0`` and that no cochain ``u`` has ``d u = c``, by enumeration.

    Only finite fields are supported; every vector of the preimage space is
    tried (a Gray-code walk over ``GF(2)``).
    """
    ring = alg.ring
    if ring.kind != "prime_field":
        raise ValueError("enumeration needs a finite field")
    closed = alg.d(c).is_zero()
    n, i = c.arity, c.degree
    src = alg.basis(n - 1, i)
    tgt = alg.basis(n, i)
    index = {k: t for t, k in enumerate(tgt)}
    images = []
    for k in src:
        e = MultiMap(alg.B, alg.B, n - 1, i, {k: ring.one}, check=False)
        images.append(alg.d(e).to_vector(tgt, index))
    total = ring.p ** len(src)
    if total > max_candidates:
        raise ValueError(f"{total} candidates exceed the enumeration budget")
    goal = c.to_vector(tgt, index)
    hit = False
    if ring.p == 2:
        masks = [sum(1 << t for t, v in enumerate(img) if v) for img in images]
        gmask = sum(1 << t for t, v in enumerate(goal) if v)
        cur = 0
        hit = cur == gmask
        for step in range(1, total):
            bit = (step & -step).bit_length() - 1
            cur ^= masks[bit]
            if cur == gmask:
                hit = True
                break
    else:
        for coeffs in itertools.product(range(ring.p), repeat=len(src)):
            vec = [0] * len(tgt)
            for a, img in zip(coeffs, images):
                if a:
                    vec = [(x + a * y) % ring.p for x, y in zip(vec, img)]
            if vec == goal:
                hit = True
                break
    return Certificate(closed, not hit, total)


@dataclass
class BlockingFixture:
    seed: int
    attempts: int
    structure: ArStructure
    blocked_at: int
    certificate: Certificate


def random_formal_a3(ring: RingSpec, rng: random.Random, max_rank: int = 4) -> ArStructure | None:
    """A module with zero differential, a random associative ``m_2`` and a random ``m_3``."""
    total = rng.randint(1, max_rank)
    dims = {}
    for _ in range(total):
        deg = rng.choice((0, 1, 2))
        dims[deg] = dims.get(deg, 0) + 1
    A = graded_module(ring, dims)
    m2 = random_multimap(A, rng, arity=2, degree=0, max_terms=3, allow_zero=True)
    if not circle(m2, m2).is_zero():
        return None
    m3 = random_multimap(A, rng, arity=3, degree=1, max_terms=3)
    if m3.is_zero():
        return None
    return ArStructure(A, [MultiMap.differential(A), m2, m3])


def find_blocking_fixture(seed: int = 0, *, ring: RingSpec | None = None, max_rank: int = 4,
                          target: int = 6, max_attempts: int = 2000) -> BlockingFixture:
    """Search seeded random A_3-structures over GF(2) for one whose extension is blocked."""
    ring = ring or GF(2)
    rng = random.Random(seed)
    for attempt in range(1, max_attempts + 1):
        S = random_formal_a3(ring, rng, max_rank)
        if S is None:
            continue
        res = extend_to_ainfty(S, target)
        if res.ok:
            continue
        alg = homology_algebra(S)
        alg.max_arity = max(alg.max_arity, target)
        cert = certify_nonexact(alg, res.blocking_report.induced)
        if cert.ok:
            return BlockingFixture(seed, attempt, S, res.blocked_at, cert)
    raise LookupError(f"no blocked instance within {max_attempts} attempts")
