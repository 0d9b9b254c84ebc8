"""Exact integer linear algebra.

Everything here works on plain Python integers (row-major lists of lists),
so there is no overflow and no rounding.  Lattices are always given by
row vectors in an explicit ambient ``Z^n``.

The only place numpy appears is the modular elimination behind
:func:`left_kernel`; it runs on int64 residues modulo primes below 2^31 and
every kernel vector it proposes is re-verified over the integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

INFINITE = "infinite"

Matrix = list[list[int]]

# 31-bit primes: products of two residues stay below 2^62.
_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563,
           2147483549, 2147483543, 2147483497, 2147483489, 2147483477)


class DimensionError(ValueError):
    pass


class NotContainedError(ValueError):
    pass


class RingMismatchError(ValueError):
    pass


# --------------------------------------------------------------------------
# small helpers


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def transpose(m: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    bt = transpose(b)
    if not bt:
        return [[] for _ in a]
    return [[sum(x * y for x, y in zip(row, col) if x) for col in bt] for row in a]


def vecmat(v: Sequence[int], m: Sequence[Sequence[int]]) -> list[int]:
    """Row vector times matrix."""
    ncols = len(m[0]) if m else 0
    out = [0] * ncols
    for x, row in zip(v, m):
        if x:
            for j, y in enumerate(row):
                if y:
                    out[j] += x * y
    return out


def freeze(m: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in m)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def inverse(m: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Exact inverse over Q by Gauss-Jordan; raises ZeroDivisionError if singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def integer_inverse(m: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a unimodular matrix; raises ValueError otherwise."""
    inv = inverse(m)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


def rank_mod_p(m: Sequence[Sequence[int]], p: int) -> int:
    rows = [[x % p for x in row] for row in m]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def solve_mod_p(m: Sequence[Sequence[int]], v: Sequence[int], p: int) -> list[int] | None:
    """Some x with x*m = v (mod p), or None."""
    n = len(m)
    ncols = len(v)
    # Solve m^T x^T = v^T.
    aug = [[m[i][j] % p for i in range(n)] + [v[j] % p] for j in range(ncols)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, ncols) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [x * inv % p for x in aug[r]]
        for i in range(ncols):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][n] for i in range(r, ncols)):
        return None
    x = [0] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return x


# --------------------------------------------------------------------------
# Hermite normal form


@dataclass(frozen=True)
class HnfBasis:
    """Row-style Hermite normal form of a lattice.

    Pivots are positive and the entries above each pivot lie in ``[0, pivot)``,
    so two lattices are equal exactly when their ``rows`` are equal.
    """

    rows: tuple[tuple[int, ...], ...]
    ncols: int

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def matrix(self) -> Matrix:
        return [list(r) for r in self.rows]

    @property
    def pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(r) if x) for r in self.rows]

    def is_full_rank(self) -> bool:
        return self.rank == self.ncols

    def determinant(self) -> int:
        """Product of the pivots (the covolume when the rank is full)."""
        out = 1
        for r, c in zip(self.rows, self.pivots):
            out *= r[c]
        return out


def hnf(m: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[HnfBasis, Matrix]:
    """Hermite normal form together with a unimodular transform.

    Returns ``(H, U)`` with ``U * m`` equal to the rows of ``H`` followed by
    zero rows.
    """
    rows = [list(r) for r in m]
    nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    u = identity(nrows)
    prow = 0
    for c in range(ncols):
        if prow == nrows:
            break
        for r in range(prow + 1, nrows):
            b = rows[r][c]
            if b == 0:
                continue
            a = rows[prow][c]
            if a == 0:
                rows[prow], rows[r] = rows[r], rows[prow]
                u[prow], u[r] = u[r], u[prow]
                continue
            if b % a == 0:
                q = b // a
                rows[r] = [y - q * x for x, y in zip(rows[prow], rows[r])]
                u[r] = [y - q * x for x, y in zip(u[prow], u[r])]
                continue
            g, s, t = xgcd(a, b)
            aa, bb = a // g, b // g
            rp, rr = rows[prow], rows[r]
            rows[prow] = [s * x + t * y for x, y in zip(rp, rr)]
            rows[r] = [aa * y - bb * x for x, y in zip(rp, rr)]
            up, ur = u[prow], u[r]
            u[prow] = [s * x + t * y for x, y in zip(up, ur)]
            u[r] = [aa * y - bb * x for x, y in zip(up, ur)]
        p = rows[prow][c]
        if p == 0:
            continue
        if p < 0:
            rows[prow] = [-x for x in rows[prow]]
            u[prow] = [-x for x in u[prow]]
            p = -p
        for r in range(prow):
            q = rows[r][c] // p
            if q:
                rows[r] = [x - q * y for x, y in zip(rows[r], rows[prow])]
                u[r] = [x - q * y for x, y in zip(u[r], u[prow])]
        prow += 1
    return HnfBasis(freeze(rows[:prow]), ncols), u


def span(vectors: Iterable[Sequence[int]], ncols: int) -> HnfBasis:
    """HNF of the lattice spanned by ``vectors`` (no transform is tracked).

    Vectors are inserted one at a time into an echelon basis, which keeps
    the working set at most ``ncols`` rows even for long generator lists.
    """
    basis: dict[int, list[int]] = {}
    for v in vectors:
        if len(v) != ncols:
            raise DimensionError(f"vector of length {len(v)} in Z^{ncols}")
        _insert(basis, list(v))
    return _finalize(basis, ncols)


def _insert(basis: dict[int, list[int]], v: list[int]) -> None:
    c = 0
    n = len(v)
    while True:
        while c < n and v[c] == 0:
            c += 1
        if c == n:
            return
        b = basis.get(c)
        if b is None:
            if v[c] < 0:
                v = [-x for x in v]
            basis[c] = v
            return
        a, x = b[c], v[c]
        if x % a == 0:
            q = x // a
            v = [vi - q * bi for vi, bi in zip(v, b)]
        else:
            g, s, t = xgcd(a, x)
            aa, xx = a // g, x // g
            basis[c] = [s * bi + t * vi for bi, vi in zip(b, v)]
            v = [aa * vi - xx * bi for bi, vi in zip(b, v)]
        c += 1


def _finalize(basis: dict[int, list[int]], ncols: int) -> HnfBasis:
    cols = sorted(basis)
    rows = [basis[c] for c in cols]
    for j, c in enumerate(cols):
        p = rows[j][c]
        for i in range(j):
            q = rows[i][c] // p
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[j])]
    return HnfBasis(freeze(rows), ncols)


def hnf_of(m: Sequence[Sequence[int]], ncols: int | None = None) -> HnfBasis:
    if ncols is None:
        ncols = len(m[0]) if m else 0
    return span(m, ncols)


def full_lattice(n: int) -> HnfBasis:
    return HnfBasis(freeze(identity(n)), n)


# --------------------------------------------------------------------------
# Smith normal form


def snf(m: Sequence[Sequence[int]]) -> tuple[list[int], Matrix, Matrix]:
    """Return ``(diag, left, right)`` with ``left * m * right`` diagonal.

    ``diag`` has one entry per row/column pair (``min(rows, cols)`` entries),
    each dividing the next; trailing entries are zero for rank-deficient input.
    """
    a = [list(r) for r in m]
    n = len(a)
    k = len(a[0]) if a else 0
    left = identity(n)
    right = identity(k)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + q * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in a:
            row[dst] += q * row[src]
        for row in right:
            row[dst] += q * row[src]

    t = 0
    while t < min(n, k):
        best = None
        for i in range(t, n):
            for j in range(t, k):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, n):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, k):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, n):
                    if a[i][t] and (best is None or abs(a[i][t]) < abs(a[best][t])):
                        best = i
                bestc = None
                for j in range(t, k):
                    if a[t][j] and (bestc is None or abs(a[t][j]) < abs(a[t][bestc])):
                        bestc = j
                if abs(a[best][t]) <= abs(a[t][bestc]):
                    swap_rows(t, best)
                else:
                    swap_cols(t, bestc)
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, k)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
        t += 1
    diag = [a[i][i] for i in range(min(n, k))]
    return diag, left, right


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero Smith invariants."""
    return [d for d in snf(m)[0] if d]


# --------------------------------------------------------------------------
# lattice queries


def coordinates(l: HnfBasis, v: Sequence[int]) -> list[int] | None:
    """Integer coordinates of ``v`` in the basis ``l``, or None if not a member."""
    if len(v) != l.ncols:
        raise DimensionError(f"vector of length {len(v)} against lattice in Z^{l.ncols}")
    w = list(v)
    out = []
    for row, c in zip(l.rows, l.pivots):
        q, r = divmod(w[c], row[c])
        if r:
            return None
        out.append(q)
        if q:
            w = [x - q * y for x, y in zip(w, row)]
    if any(w):
        return None
    return out


def lattice_member(l: HnfBasis, v: Sequence[int]) -> bool:
    return coordinates(l, v) is not None


def lattice_contains(outer: HnfBasis, inner: HnfBasis) -> bool:
    return all(lattice_member(outer, r) for r in inner.rows)


def lattice_index(outer: HnfBasis, inner: HnfBasis) -> int | str:
    """Group order of ``outer / inner``, or ``INFINITE`` for smaller rank."""
    if outer.ncols != inner.ncols:
        raise DimensionError("lattices live in different ambients")
    if not lattice_contains(outer, inner):
        raise NotContainedError("inner lattice is not contained in outer")
    if inner.rank != outer.rank:
        return INFINITE
    return abs(det([coordinates(outer, r) for r in inner.rows]))


def lattice_sum(a: HnfBasis, b: HnfBasis) -> HnfBasis:
    return span(list(a.rows) + list(b.rows), a.ncols)


def quotient(sub: HnfBasis) -> tuple[list[int], Matrix, Matrix]:
    """Describe ``Z^n / sub``.

    Returns ``(torsion, projection, section)``: ``torsion`` lists the
    invariant factors > 1, ``projection`` is an n x q integer matrix whose
    row space kernel is the saturation of ``sub`` (q = n - rank), and
    ``section`` is q x n with ``section * projection = I``.
    """
    n = sub.ncols
    if sub.rank == 0:
        return [], identity(n), identity(n)
    diag, _left, right = snf(sub.matrix)
    torsion = [d for d in diag if d > 1]
    s = sub.rank
    projection = [row[s:] for row in right]
    rinv = integer_inverse(right)
    section = [list(r) for r in rinv[s:]]
    return torsion, projection, section


# --------------------------------------------------------------------------
# kernels


def _rref_mod(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = a % p
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        others = np.nonzero(col)[0]
        if others.size:
            a[others] = (a[others] - col[others, None] * a[r][None, :]) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _ratrecon(x: int, m: int) -> Fraction | None:
    """Rational reconstruction of x mod m with |num|, den <= sqrt(m/2)."""
    x %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, x
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    f = Fraction(r1, s1)
    if (f.numerator - x * f.denominator) % m:
        return None
    return f


def _rational_nullspace(eqs: Sequence[Sequence[int]], nunk: int) -> tuple[list[list[Fraction]], list[int]] | None:
    """Nullspace of ``eqs`` (rows = equations) via multi-modular RREF.

    Returns the RREF-shaped basis (identity on free columns) and the free
    columns, after exact verification, or None if the primes ran out.
    """
    if not eqs:
        basis = [[Fraction(int(i == j)) for j in range(nunk)] for i in range(nunk)]
        return basis, list(range(nunk))
    big = np.array(eqs, dtype=object)
    residues = []
    pivots_ref = None
    modulus = 1
    for p in _PRIMES:
        a = np.array([[int(x) % p for x in row] for row in eqs], dtype=np.int64)
        red, pivots = _rref_mod(a, p)
        if pivots_ref is None or len(pivots) > len(pivots_ref):
            pivots_ref = pivots
            residues = [(red, p)]
            modulus = p
        elif pivots == pivots_ref:
            residues.append((red, p))
            modulus *= p
        else:
            continue
        free = [c for c in range(nunk) if c not in set(pivots_ref)]
        basis = _reconstruct(residues, pivots_ref, free, nunk, modulus)
        if basis is None:
            continue
        if _verify_nullspace(big, basis):
            return basis, free
    return None


def _reconstruct(residues, pivots, free, nunk, modulus):
    basis = []
    for f in free:
        vec = [Fraction(0)] * nunk
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            val = _crt([(-int(red[i, f])) % p for red, p in residues], [p for _, p in residues])
            q = _ratrecon(val, modulus)
            if q is None:
                return None
            vec[c] = q
        basis.append(vec)
    return basis


def _crt(values: list[int], moduli: list[int]) -> int:
    x, m = 0, 1
    for v, p in zip(values, moduli):
        t = ((v - x) * pow(m, -1, p)) % p
        x += m * t
        m *= p
    return x


def _verify_nullspace(big: np.ndarray, basis: list[list[Fraction]]) -> bool:
    for vec in basis:
        den = 1
        for q in vec:
            if q.denominator != 1:
                den = den * q.denominator // math.gcd(den, q.denominator)
        w = np.array([int(q * den) for q in vec], dtype=object)
        if any(big.dot(w)):
            return False
    return True


def _exact_nullspace(eqs: Sequence[Sequence[int]], nunk: int):
    rows = [[Fraction(x) for x in row] for row in eqs]
    pivots = []
    r = 0
    for c in range(nunk):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(nunk) if c not in set(pivots)]
    basis = []
    for f in free:
        vec = [Fraction(0)] * nunk
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -rows[i][f]
        basis.append(vec)
    return basis, free


def congruence_lattice(w: Sequence[Sequence[int]], modulus: int) -> HnfBasis:
    """HNF of ``{y in Z^d : y * w = 0 (mod modulus)}`` where w is d x k."""
    d = len(w)
    basis = identity(d)
    if modulus == 1 or d == 0:
        return HnfBasis(freeze(basis), d)
    k = len(w[0]) if w else 0
    for j in range(k):
        col = [row[j] % modulus for row in w]
        if not any(col):
            continue
        t = [sum(b * c for b, c in zip(brow, col)) % modulus for brow in basis]
        if not any(t):
            continue
        # coefficient vectors c with c.t = 0 mod modulus
        _, u = hnf([[x] for x in t] + [[modulus]], 1)
        sub = [row[:d] for row in u[1:]]
        basis = span(matmul(sub, basis), d).matrix
    return HnfBasis(freeze(basis), d)


def left_kernel(m: Sequence[Sequence[int]], nrows: int | None = None) -> HnfBasis:
    """Saturated integer basis (in HNF) of ``{c : c * m = 0}``."""
    if nrows is None:
        nrows = len(m)
    ncols = len(m[0]) if m else 0
    if not ncols:
        return full_lattice(nrows)
    return integer_nullspace(transpose(m), nrows)


def integer_nullspace(eqs: Sequence[Sequence[int]], nunk: int) -> HnfBasis:
    """Saturated integer solutions of ``eqs * x = 0`` (rows are equations)."""
    eqs = [row for row in eqs if any(row)]
    if not eqs:
        return full_lattice(nunk)
    found = _rational_nullspace(eqs, nunk)
    if found is None:
        found = _exact_nullspace(eqs, nunk)
    basis, free = found
    if not basis:
        return HnfBasis((), nunk)
    den = 1
    for vec in basis:
        for q in vec:
            if q.denominator != 1:
                den = den * q.denominator // math.gcd(den, q.denominator)
    scaled = [[int(q * den) for q in vec] for vec in basis]
    free_set = set(free)
    pivot_cols = [c for c in range(nunk) if c not in free_set]
    # basis has the identity on free columns, so integral kernel vectors are
    # exactly the integer combinations y with y * scaled = 0 mod den
    cong = congruence_lattice([[row[c] for c in pivot_cols] for row in scaled], den)
    vectors = []
    for coeff in cong.rows:
        v = [0] * nunk
        for ci, row in zip(coeff, scaled):
            if ci:
                for j, x in enumerate(row):
                    if x:
                        v[j] += ci * x
        vectors.append([x // den for x in v])
    return span(vectors, nunk)


def kernel_mod(m: Sequence[Sequence[int]], p: int) -> HnfBasis:
    """HNF of ``{v in Z^n : v * m = 0 (mod p)}`` (full rank)."""
    return congruence_lattice(m, p)


# --------------------------------------------------------------------------
# lattices with a ring action


@dataclass(frozen=True)
class GLattice:
    """A lattice in ``Z^n`` stable under a ring acting on ``Z^n``.

    ``action[k]`` is the ambient matrix of the k-th ring basis element acting
    on row vectors (``g . v = v @ action[k]``); ``gens`` are the basis indices
    that generate the ring, which is all that hom computations need.
    ``endo`` optionally lists ambient matrices known to commute with the
    action (typically right multiplications); isomorphism searches use them
    as a small, natural spanning set.
    """

    ring: object
    basis: HnfBasis
    action: tuple[tuple[tuple[int, ...], ...], ...]
    gens: tuple[int, ...]
    endo: tuple[tuple[tuple[int, ...], ...], ...] = field(default=(), compare=False)

    @property
    def ambient_rank(self) -> int:
        return self.basis.ncols

    @property
    def rank(self) -> int:
        return self.basis.rank

    def element_matrix(self, coeffs: Sequence[int]) -> Matrix:
        """Ambient matrix of an arbitrary ring element."""
        n = self.ambient_rank
        out = zeros(n, n)
        for c, a in zip(coeffs, self.action):
            if c:
                for i in range(n):
                    row, arow = out[i], a[i]
                    for j in range(n):
                        if arow[j]:
                            row[j] += c * arow[j]
        return out

    def lattice_action(self, k: int) -> Matrix:
        """Matrix of basis element k in lattice coordinates."""
        out = []
        for b in self.basis.rows:
            img = vecmat(b, self.action[k])
            c = coordinates(self.basis, img)
            if c is None:
                raise ValueError("lattice is not closed under the action")
            out.append(c)
        return out

    def is_closed(self) -> bool:
        return all(lattice_member(self.basis, vecmat(b, a))
                   for a in self.action for b in self.basis.rows)

    def with_basis(self, basis: HnfBasis) -> "GLattice":
        return GLattice(self.ring, basis, self.action, self.gens, self.endo)

    def full(self) -> "GLattice":
        """The whole ambient with the same action."""
        return self.with_basis(full_lattice(self.ambient_rank))


def hom_lattice(source: GLattice, target: GLattice) -> HnfBasis:
    """Z-basis of Hom over the ring, as flattened rank(source) x rank(target) matrices.

    A hom X is written in lattice coordinates (row v of the source basis maps
    to row v @ X of target coordinates), so integrality of X is exactly the
    condition that the source lattice lands in the target lattice.
    """
    if source.ring is not target.ring:
        raise RingMismatchError("modules over different rings")
    rs, rt = source.rank, target.rank
    nunk = rs * rt
    if nunk == 0:
        return HnfBasis((), nunk)
    eqs = []
    for g in source.gens:
        ps = source.lattice_action(g)
        pt = target.lattice_action(g)
        # (ps X - X pt)[p][q] = sum_m ps[p][m] X[m][q] - sum_l X[p][l] pt[l][q]
        for p in range(rs):
            for q in range(rt):
                row = [0] * nunk
                for m_, coef in enumerate(ps[p]):
                    if coef:
                        row[m_ * rt + q] += coef
                for l_ in range(rt):
                    coef = pt[l_][q]
                    if coef:
                        row[p * rt + l_] -= coef
                if any(row):
                    eqs.append(row)
    if not eqs:
        return full_lattice(nunk)
    return integer_nullspace(eqs, nunk)


def unflatten(v: Sequence[int], rows: int, cols: int) -> Matrix:
    return [list(v[i * cols:(i + 1) * cols]) for i in range(rows)]
