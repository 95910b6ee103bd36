"""Dense exact linear algebra over a :class:`~prelie_ainfty.scalars.RingSpec`.

Matrices are lists of rows holding raw ring values.  A matrix with no rows
cannot record its column count, so functions that need it take ``ncols``.

Over a field every routine is Gauss-Jordan elimination with the pivot rule
"first nonzero entry, scanning rows then columns in ascending order", and
free variables are set to zero.  Over the integers the Smith normal form is
the workhorse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotInvertible
from .scalars import QQ, ZZ, RingSpec


def zeros(ring: RingSpec, nrows: int, ncols: int) -> list[list]:
    z = ring.zero
    return [[z] * ncols for _ in range(nrows)]


def identity(ring: RingSpec, n: int) -> list[list]:
    m = zeros(ring, n, n)
    for i in range(n):
        m[i][i] = ring.one
    return m


def _ncols(M, ncols):
    if ncols is not None:
        return ncols
    if not M:
        raise ValueError("ncols required for a matrix with no rows")
    return len(M[0])


def transpose(M, ncols=None):
    n = _ncols(M, ncols)
    return [[row[j] for row in M] for j in range(n)]


def matmul(ring: RingSpec, A, B, ncols=None):
    """``A @ B``; ``ncols`` is the column count of ``B`` when ``B`` has no rows."""
    n = _ncols(B, ncols)
    out = zeros(ring, len(A), n)
    for i, row in enumerate(A):
        o = out[i]
        for k, a in enumerate(row):
            if a == 0:
                continue
            for j, b in enumerate(B[k]):
                if b != 0:
                    o[j] = ring.add(o[j], ring.mul(a, b))
    return out


def matvec(ring: RingSpec, A, x):
    out = []
    for row in A:
        acc = ring.zero
        for a, b in zip(row, x):
            if a != 0 and b != 0:
                acc = ring.add(acc, ring.mul(a, b))
        out.append(acc)
    return out


def column(M, j):
    return [row[j] for row in M]


def from_columns(ring: RingSpec, cols, nrows: int):
    out = zeros(ring, nrows, len(cols))
    for j, c in enumerate(cols):
        for i in range(nrows):
            out[i][j] = c[i]
    return out


# -- fields ----------------------------------------------------------------


def rref(ring: RingSpec, M, ncols=None):
    """Reduced row echelon form over a field.  Returns ``(R, pivot_columns)``."""
    if not ring.is_field:
        raise ValueError(f"rref needs a field, got {ring}")
    n = _ncols(M, ncols)
    R = [list(row) for row in M]
    pivots = []
    r = 0
    for j in range(n):
        piv = next((i for i in range(r, len(R)) if R[i][j] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = ring.inv(R[r][j])
        R[r] = [ring.mul(inv, x) for x in R[r]]
        prow = R[r]
        support = [k for k in range(j, n) if prow[k] != 0]
        for i in range(len(R)):
            if i != r and R[i][j] != 0:
                c = R[i][j]
                row = R[i]
                for k in support:
                    row[k] = ring.sub(row[k], ring.mul(c, prow[k]))
        pivots.append(j)
        r += 1
        if r == len(R):
            break
    return R, pivots


def rank(ring: RingSpec, M, ncols=None) -> int:
    if not M:
        return 0
    if not ring.is_field:
        M = [[Fraction(x) for x in row] for row in M]
        ring = QQ
    return len(rref(ring, M, ncols)[1])


def nullspace(ring: RingSpec, M, ncols=None) -> list[list]:
    """Basis of ``{x : M x = 0}``.

    Over a field: one vector per free column, with a 1 in that column.  Over
    ZZ: a basis of the (saturated) integer kernel from the Smith form.
    """
    n = _ncols(M, ncols)
    if not ring.is_field:
        U, D, V = smith_normal_form(M, n)
        r = _snf_rank(D)
        return [column(V, j) for j in range(r, n)]
    R, pivots = rref(ring, M, n)
    pivset = set(pivots)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [ring.zero] * n
        v[f] = ring.one
        for row, p in zip(R, pivots):
            if row[f] != 0:
                v[p] = ring.neg(row[f])
        basis.append(v)
    return basis


def inverse(ring: RingSpec, M):
    """Exact inverse; over ZZ the matrix must be unimodular."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("inverse of a non-square matrix")
    if not ring.is_field:
        inv = inverse(QQ, [[Fraction(x) for x in row] for row in M])
        if any(x.denominator != 1 for row in inv for x in row):
            raise NotInvertible("integer matrix is not unimodular")
        return [[x.numerator for x in row] for row in inv]
    aug = [list(row) + [ring.one if i == j else ring.zero for j in range(n)] for i, row in enumerate(M)]
    R, pivots = rref(ring, aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise NotInvertible("singular matrix")
    return [row[n:] for row in R]


def determinant(ring: RingSpec, M):
    """Exact determinant; integer matrices are eliminated over QQ."""
    n = len(M)
    if not ring.is_field:
        return determinant(QQ, [[Fraction(x) for x in row] for row in M]).numerator
    A = [list(row) for row in M]
    det = ring.one
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            return ring.zero
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = ring.neg(det)
        det = ring.mul(det, A[k][k])
        inv = ring.inv(A[k][k])
        for i in range(k + 1, n):
            if A[i][k] != 0:
                c = ring.mul(A[i][k], inv)
                A[i] = [ring.sub(x, ring.mul(c, y)) for x, y in zip(A[i], A[k])]
    return det


# -- integers ----------------------------------------------------------------


def smith_normal_form(M, ncols=None):
    """Smith normal form of an integer matrix.

    Returns ``(U, D, V)`` with ``U @ M @ V == D``, ``U`` and ``V`` unimodular and
    ``D`` diagonal with nonnegative entries ``d1 | d2 | ...``.
    """
    m = len(M)
    n = _ncols(M, ncols)
    D = [[int(x) for x in row] for row in M]
    U = identity(ZZ, m)
    V = identity(ZZ, n)

    def swap_rows(a, b):
        D[a], D[b] = D[b], D[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for row in D:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]

    def add_row(dst, src, q):
        # row[dst] += q * row[src]
        D[dst] = [x + q * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = D[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return U, D, V
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is not None:
                add_row(t, bad, 1)
                continue
            if p < 0:
                D[t] = [-x for x in D[t]]
                U[t] = [-x for x in U[t]]
            break
    return U, D, V


def _snf_rank(D) -> int:
    r = 0
    while r < min(len(D), len(D[0]) if D else 0) and D[r][r] != 0:
        r += 1
    return r


def invariant_factors(M, ncols=None) -> list[int]:
    _, D, _ = smith_normal_form(M, ncols)
    return [D[t][t] for t in range(_snf_rank(D))]


# -- solving -------------------------------------------------------------------


def solve_exact(ring: RingSpec, M, b, ncols=None):
    """Return one ``x`` with ``M x = b``, or ``None`` when ``b`` is not in the image.

    The solution is deterministic: over a field the pivot variables of the
    reduced echelon form are solved for and free variables are zero; over ZZ
    the Smith form coordinates of the free directions are zero.
    """
    n = _ncols(M, ncols)
    if len(b) != len(M):
        raise ValueError("dimension mismatch in solve_exact")
    if ring.is_field:
        aug = [list(row) + [bi] for row, bi in zip(M, b)]
        R, pivots = rref(ring, aug, n + 1)
        if pivots and pivots[-1] == n:
            return None
        x = [ring.zero] * n
        for row, p in zip(R, pivots):
            x[p] = row[n]
        return x
    U, D, V = smith_normal_form(M, n)
    c = matvec(ZZ, U, b)
    r = _snf_rank(D)
    y = [0] * n
    for t in range(r):
        q, rem = divmod(c[t], D[t][t])
        if rem:
            return None
        y[t] = q
    if any(c[t] for t in range(r, len(c))):
        return None
    return matvec(ZZ, V, y)


# -- reductions used for homology ------------------------------------------------


@dataclass
class Reduction:
    """Kernel and image data of a linear map ``M : R^ncols -> R^nrows``.

    ``image[t]`` is a basis of the image with ``M @ preimage[t] == image[t]``.
    ``invariants`` are the invariant factors (all 1 over a field); an image
    basis vector ``image[t]`` is ``invariants[t]`` times a primitive vector.
    """

    kernel: list[list]
    image: list[list]
    preimage: list[list]
    invariants: list


def reduce_map(ring: RingSpec, M, nrows: int, ncols: int) -> Reduction:
    if nrows == 0 or ncols == 0:
        return Reduction(_standard_basis(ring, ncols), [], [], [])
    if ring.is_field:
        R, pivots = rref(ring, M, ncols)
        preimage = []
        for p in pivots:
            e = [ring.zero] * ncols
            e[p] = ring.one
            preimage.append(e)
        return Reduction(nullspace(ring, M, ncols), [column(M, p) for p in pivots],
                         preimage, [ring.one] * len(pivots))
    U, D, V = smith_normal_form(M, ncols)
    r = _snf_rank(D)
    Uinv = inverse(ZZ, U)
    image = [[D[t][t] * Uinv[i][t] for i in range(nrows)] for t in range(r)]
    preimage = [column(V, t) for t in range(r)]
    kernel = [column(V, j) for j in range(r, ncols)]
    return Reduction(kernel, image, preimage, [D[t][t] for t in range(r)])


def _standard_basis(ring, n):
    out = []
    for j in range(n):
        e = [ring.zero] * n
        e[j] = ring.one
        out.append(e)
    return out


def complement(ring: RingSpec, sub: list[list], basis: list[list], dim: int):
    """Extend the independent family ``sub`` (inside the span of ``basis``).

    Returns ``(reps, torsion)``: vectors ``reps`` such that ``sub + reps`` is a
    basis of ``span(basis)`` modulo torsion, and the invariant factors ``> 1``
    of ``sub`` inside ``span(basis)`` (always empty over a field).  Over a field
    ``reps`` is the greedy choice of ``basis`` vectors in order.
    """
    if ring.is_field:
        reps = []
        current = [list(v) for v in sub]
        r = rank(ring, current, dim) if current else 0
        for z in basis:
            trial = current + [z]
            tr = rank(ring, trial, dim)
            if tr > r:
                reps.append(list(z))
                current = trial
                r = tr
        return reps, []
    k = len(basis)
    if k == 0:
        return [], []
    if not sub:
        return [list(z) for z in basis], []
    Zmat = from_columns(ZZ, basis, dim)
    coords = []
    for s in sub:
        x = solve_exact(ZZ, Zmat, s, k)
        if x is None:
            raise ValueError("subfamily is not contained in the lattice")
        coords.append(x)
    K = from_columns(ZZ, coords, k)
    U, D, V = smith_normal_form(K, len(coords))
    r = _snf_rank(D)
    Uinv = inverse(ZZ, U)
    reps = []
    for t in range(r, k):
        col = column(Uinv, t)
        reps.append(matvec(ZZ, Zmat, col))
    torsion = [D[t][t] for t in range(r) if D[t][t] != 1]
    return reps, torsion
