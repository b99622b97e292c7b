"""Exact linear algebra over the rationals, plus univariate polynomials.

Everything in this module is deterministic and exact: integers, Fraction,
and dense polynomials with Fraction coefficients. Matrices are plain lists
of row lists. There is deliberately no float anywhere; the certificates
produced by the classification machinery quote these numbers verbatim.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial, gcd, isqrt
from typing import Sequence

Scalar = int | Fraction
Row = Sequence[Scalar]


def binomial(n: int, k: int) -> int:
    """Binomial coefficient with out-of-range indices collapsing to zero.

    The Pascal-form coefficient tables index binomials by grid positions
    that routinely step outside [0, n]; the convention everywhere in this
    package is binomial(n, k) = 0 whenever k < 0 or k > n. n must be
    nonnegative.
    """
    if n < 0:
        raise ValueError(f"binomial needs n >= 0, got n={n}")
    if k < 0 or k > n:
        return 0
    return comb(n, k)


def _as_fraction_rows(rows: Sequence[Row]) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def det(rows: Sequence[Row]) -> Fraction:
    """Determinant of a square matrix, as an exact Fraction.

    Integer matrices go through fraction-free Bareiss elimination, which
    keeps every intermediate value an integer; anything with a Fraction
    entry falls back to ordinary Gaussian elimination over Fraction.
    """
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in rows):
        raise ValueError("determinant of a non-square matrix")
    if all(isinstance(x, int) for row in rows for x in row):
        return Fraction(_det_bareiss([[int(x) for x in row] for row in rows]))
    return _det_gauss(_as_fraction_rows(rows))


def _det_bareiss(m: list[list[int]]) -> int:
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if pivot is None:
                return 0
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _det_gauss(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    result = Fraction(1)
    for k in range(n):
        pivot = next((r for r in range(k, n) if m[r][k] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            result = -result
        result *= m[k][k]
        inv = 1 / m[k][k]
        for i in range(k + 1, n):
            if m[i][k] != 0:
                factor = m[i][k] * inv
                for j in range(k, n):
                    m[i][j] -= factor * m[k][j]
    return result


def rref(rows: Sequence[Row]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the list of pivot column indices."""
    m = _as_fraction_rows(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows: Sequence[Row]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def primitive_integer_vector(vec: Sequence[Scalar]) -> list[int]:
    """Scale a rational vector to integers with content 1, keeping direction.

    The zero vector maps to itself. Sign is preserved, not normalized;
    callers pick their own sign convention.
    """
    fracs = [Fraction(x) for x in vec]
    if all(x == 0 for x in fracs):
        return [0] * len(fracs)
    denom_lcm = 1
    for x in fracs:
        denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
    ints = [int(x * denom_lcm) for x in fracs]
    content = 0
    for x in ints:
        content = gcd(content, x)
    return [x // content for x in ints]


def kernel_basis(rows: Sequence[Row], ncols: int | None = None) -> list[list[int]]:
    """Basis of the right kernel, as primitive integer vectors.

    The basis comes from the reduced row echelon form with one vector per
    free column, ordered by free column index. Each vector is scaled to
    integer entries with content 1 and its first nonzero entry positive,
    so the output is canonical for a given column order.

    An empty matrix (no rows) is the zero map; pass ncols to say how many
    columns it has.
    """
    if not rows:
        if ncols is None:
            raise ValueError("kernel of an empty matrix needs an explicit ncols")
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    width = len(rows[0])
    if ncols is not None and ncols != width:
        raise ValueError(f"ncols={ncols} disagrees with row width {width}")
    reduced, pivots = rref(rows)
    pivot_set = set(pivots)
    free_cols = [c for c in range(width) if c not in pivot_set]
    basis: list[list[int]] = []
    for fc in free_cols:
        vec = [Fraction(0)] * width
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -reduced[r][fc]
        ints = primitive_integer_vector(vec)
        lead = next(x for x in ints if x != 0)
        if lead < 0:
            ints = [-x for x in ints]
        basis.append(ints)
    return basis


def solve_unique(rows: Sequence[Row], rhs: Sequence[Scalar]) -> list[Fraction] | None:
    """Solve A x = b when A has full column rank; None if inconsistent.

    Raises if the solution is not unique (rank-deficient A), since every
    caller in this package expects an invertible situation.
    """
    if not rows:
        raise ValueError("no equations")
    width = len(rows[0])
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented)
    if width in pivots:
        return None
    if len(pivots) < width:
        raise ValueError("solve_unique on a rank-deficient system")
    sol = [Fraction(0)] * width
    for r, pc in enumerate(pivots):
        sol[pc] = reduced[r][width]
    return sol


class Poly:
    """Dense univariate polynomial with Fraction coefficients.

    Coefficient order is ascending: Poly([1, 2]) is 1 + 2x. Supports just
    enough arithmetic for symbolic determinants in one indeterminate
    (the grid degree d): ring operations, exact division, evaluation,
    and an integer-root exclusion test.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Scalar]):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c: Scalar) -> Poly:
        return cls([c])

    @classmethod
    def x(cls) -> Poly:
        return cls([0, 1])

    @classmethod
    def linear(cls, slope: Scalar, intercept: Scalar) -> Poly:
        """The polynomial slope*x + intercept."""
        return cls([intercept, slope])

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: Poly | Scalar) -> Poly:
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: Poly | Scalar) -> Poly:
        return self + (-other if isinstance(other, Poly) else Poly.constant(-Fraction(other)))

    def __rsub__(self, other: Scalar) -> Poly:
        return Poly.constant(other) + (-self)

    def __mul__(self, other: Poly | Scalar) -> Poly:
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def exact_div(self, other: Poly) -> Poly:
        """Exact polynomial quotient; raises if the division leaves a remainder."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        lead = other.coeffs[-1]
        dn = other.degree
        quot = [Fraction(0)] * max(len(rem) - dn, 0)
        for i in range(len(rem) - dn - 1, -1, -1):
            c = rem[i + dn] / lead
            quot[i] = c
            if c != 0:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        if any(c != 0 for c in rem):
            raise ValueError("polynomial division was not exact")
        return Poly(quot)

    def __call__(self, value: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def __repr__(self) -> str:
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{i}")
        return "Poly(" + " + ".join(terms) + ")"


def binomial_poly(slope: int, intercept: int, k: int) -> Poly:
    """binomial(slope*d + intercept, k) as a polynomial in d.

    Uses the falling-factorial form; it agrees with the guarded binomial
    whenever slope*d + intercept >= k, which every call site guarantees
    on its degree range.
    """
    if k < 0:
        return Poly([])
    arg = Poly.linear(slope, intercept)
    out = Poly.constant(1)
    for t in range(k):
        out = out * (arg - t)
    return out * Fraction(1, factorial(k))


def poly_det(rows: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a matrix of polynomials, by fraction-free Bareiss.

    Every division in the Bareiss recurrence is exact in the polynomial
    ring, so the result is the true determinant with no denominators
    beyond those already in the entries.
    """
    n = len(rows)
    if n == 0:
        return Poly.constant(1)
    m = [list(row) for row in rows]
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = Poly.constant(1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            pivot = next((r for r in range(k + 1, n) if not m[r][k].is_zero()), None)
            if pivot is None:
                return Poly([])
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev)
            m[i][k] = Poly([])
        prev = m[k][k]
    result = m[n - 1][n - 1]
    return result if sign == 1 else -result


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def integer_roots_at_or_above(p: Poly, lo: int) -> list[int]:
    """All integer roots r >= lo of a nonzero polynomial.

    Clears denominators, strips any power of x (whose root 0 only matters
    if lo <= 0), and then tests the positive divisors of the constant
    term, which by the rational root theorem are the only candidates.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial vanishes everywhere")
    denom_lcm = 1
    for c in p.coeffs:
        denom_lcm = denom_lcm * c.denominator // gcd(denom_lcm, c.denominator)
    ints = [int(c * denom_lcm) for c in p.coeffs]
    shift = 0
    while ints[0] == 0:
        ints.pop(0)
        shift += 1
    roots = []
    if shift and lo <= 0:
        roots.append(0)
    if len(ints) > 1:
        candidates = set()
        for r in _divisors(ints[0]):
            if r >= lo:
                candidates.add(r)
            if -r >= lo:
                candidates.add(-r)
        for r in sorted(candidates):
            if sum(c * r**i for i, c in enumerate(ints)) == 0:
                roots.append(r)
    return sorted(set(roots))
