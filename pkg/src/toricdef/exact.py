"""Exact integer and rational linear algebra.

Everything here works on plain Python lists of ``int`` or ``Fraction``.
Matrices are lists of rows. No floating point is used anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

IntMatrix = list[list[int]]
RatMatrix = list[list[Fraction]]


class ExactError(ValueError):
    pass


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def mat_vec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def vec_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def primitive_part(v: Sequence[int]) -> list[int]:
    """Divide an integer vector by the gcd of its entries."""
    g = vec_gcd(v)
    if g == 0:
        raise ExactError("zero vector has no primitive part")
    return [int(x) // g for x in v]


def is_primitive(v: Sequence[int]) -> bool:
    return vec_gcd(v) == 1


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else max(abs(a), abs(b))


def clear_denominators(v: Sequence) -> list[int]:
    """Scale a rational vector to a primitive integer vector with the same direction."""
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    if any(ints):
        return primitive_part(ints)
    return ints


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    # returns (g, x, y) with a*x + b*y = g >= 0
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hermite_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``u @ m == h``. Pivots of
    ``h`` are positive, entries above a pivot lie in ``[0, pivot)`` and zero
    rows sit at the bottom.
    """
    if not m:
        raise ExactError("empty matrix")
    rows = len(m)
    cols = len(m[0])
    h = [[int(x) for x in row] for row in m]
    u = identity(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        # gcd-eliminate column c below row r
        for i in range(r + 1, rows):
            if h[i][c] == 0:
                continue
            a, b = h[r][c], h[i][c]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            hr, hi = h[r], h[i]
            h[r] = [x * s + y * t for s, t in zip(hr, hi)]
            h[i] = [-q * s + p * t for s, t in zip(hr, hi)]
            ur, ui = u[r], u[i]
            u[r] = [x * s + y * t for s, t in zip(ur, ui)]
            u[i] = [-q * s + p * t for s, t in zip(ur, ui)]
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        piv = h[r][c]
        for i in range(r):
            f = h[i][c] // piv
            if f:
                h[i] = [s - f * t for s, t in zip(h[i], h[r])]
                u[i] = [s - f * t for s, t in zip(u[i], u[r])]
        r += 1
    return h, u


def hnf_rows(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Nonzero rows of the Hermite normal form (canonical lattice basis)."""
    if not m:
        return []
    h, _ = hermite_normal_form(m)
    return [row for row in h if any(row)]


def rref(m: Sequence[Sequence]) -> tuple[RatMatrix, list[int]]:
    """Reduced row echelon form over the rationals, with pivot columns."""
    a = [[Fraction(x) for x in row] for row in m]
    if not a:
        return [], []
    rows, cols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a[:r], pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def nullspace(m: Sequence[Sequence], ncols: Optional[int] = None) -> RatMatrix:
    """Rational basis of {x : m x = 0}."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    if not m:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    r, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(r, pivots):
            x[pc] = -row[f]
        basis.append(x)
    return basis


def solve_rational(a: Sequence[Sequence], b: Sequence) -> Optional[list[Fraction]]:
    """Some rational solution of a x = b, or None."""
    ncols = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    r, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(r, pivots):
        x[pc] = row[-1]
    return x


def inverse(m: Sequence[Sequence]) -> RatMatrix:
    n = len(m)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ExactError("matrix is singular")
    return [row[n:] for row in r]


def integer_inverse(m: Sequence[Sequence[int]]) -> IntMatrix:
    inv = inverse(m)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ExactError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


def determinant(m: Sequence[Sequence]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


@dataclass(frozen=True)
class LatticeBasis:
    """Integer rows spanning a sublattice of Z^n."""

    rows: tuple[tuple[int, ...], ...]
    ambient: int

    @property
    def rank(self) -> int:
        return len(self.rows)

    def as_lists(self) -> IntMatrix:
        return [list(r) for r in self.rows]

    def contains(self, v: Sequence[int]) -> bool:
        if not self.rows:
            return not any(v)
        x = solve_rational(transpose(self.as_lists()), list(v))
        return x is not None and all(c.denominator == 1 for c in x)

    def same_lattice(self, other: "LatticeBasis") -> bool:
        return hnf_rows(self.as_lists() or [[0] * self.ambient]) == hnf_rows(
            other.as_lists() or [[0] * other.ambient]
        )


def kernel_lattice(m: Sequence[Sequence], ncols: Optional[int] = None) -> LatticeBasis:
    """Saturated Z-basis of the integer kernel {x in Z^n : m x = 0}, HNF-reduced."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    rows = [clear_denominators(row) for row in m if any(row)]
    if not rows:
        return LatticeBasis(tuple(tuple(r) for r in identity(ncols)), ncols)
    # u @ m^T = h; rows of u belonging to zero rows of h span the kernel
    h, u = hermite_normal_form(transpose(rows))
    ker = [u[i] for i in range(ncols) if not any(h[i])]
    ker = hnf_rows(ker) if ker else []
    return LatticeBasis(tuple(tuple(r) for r in ker), ncols)


def solve_nonneg_integer(
    a: Sequence[Sequence[int]], b: Sequence[int], bound: int
) -> Optional[list[int]]:
    """Lexicographically smallest x in N^n with a x = b and sum(x) <= bound."""
    if bound < 0:
        raise ExactError("bound must be nonnegative")
    rows = [list(r) for r in a]
    n = len(rows[0]) if rows else 0
    cols = [[row[j] for row in rows] for j in range(n)]
    # sign patterns of the remaining columns, used to prune
    suffix_pos = [[False] * len(rows) for _ in range(n + 1)]
    suffix_neg = [[False] * len(rows) for _ in range(n + 1)]
    for j in range(n - 1, -1, -1):
        for i in range(len(rows)):
            suffix_pos[j][i] = suffix_pos[j + 1][i] or cols[j][i] > 0
            suffix_neg[j][i] = suffix_neg[j + 1][i] or cols[j][i] < 0
    x = [0] * n

    def feasible(j: int, res: list[int]) -> bool:
        for i, r in enumerate(res):
            if r > 0 and not suffix_pos[j][i]:
                return False
            if r < 0 and not suffix_neg[j][i]:
                return False
        return True

    def rec(j: int, res: list[int], left: int) -> bool:
        if j == n:
            return not any(res)
        if not feasible(j, res):
            return False
        col = cols[j]
        cur = res
        for k in range(left + 1):
            x[j] = k
            if rec(j + 1, cur, left - k):
                return True
            cur = [r - c for r, c in zip(cur, col)]
        x[j] = 0
        return False

    if rec(0, [int(v) for v in b], bound):
        return list(x)
    return None
