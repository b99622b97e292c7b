"""The invertibility and hexagon criteria for excluding outcome supports.

Both criteria rule out candidate supports for nonzero outcomes. The
invertibility criterion pairs a support S with a set E of top-edge
positions: if the matrix of binomials binom(d - deg(p), a - i) over
a in E, p = (i, j) in S is invertible, the top-edge equations admit no
nonzero solution supported in S. The divide step picks E greedily so
the matrix becomes block lower triangular; the conquer step knows a few
closed-form invertible block shapes and falls back to an exact
determinant otherwise.

The hexagon criterion bounds the degree of a valid outcome whose
support avoids a hexagonal middle region of the triangle: what is left
in the bottom-left corner must itself be an outcome, and validity then
forces the whole configuration into that corner.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .grid import ChipConfiguration, Coord
from .linalg import binomial, det
from .pascal import is_outcome


@dataclass(frozen=True)
class PairingMatrix:
    """The matrix binom(d - deg(i,j), a - i) over rows a in E, columns (i,j) in S."""

    degrees: tuple[int, ...]
    points: tuple[Coord, ...]
    d: int
    entries: tuple[tuple[int, ...], ...] = field(init=False)

    def __post_init__(self):
        if not self.degrees or len(self.degrees) != len(self.points):
            raise ValueError("E and S must be nonempty sets of the same size")
        if any(not 0 <= a <= self.d for a in self.degrees):
            raise ValueError(f"row indices must lie in [0, {self.d}]")
        if any(i < 0 or j < 0 or i + j > self.d for i, j in self.points):
            raise ValueError(f"column points must lie in the degree-{self.d} triangle")
        rows = tuple(
            tuple(binomial(self.d - i - j, a - i) for (i, j) in self.points) for a in self.degrees
        )
        object.__setattr__(self, "entries", rows)

    def determinant(self) -> int:
        return int(det([list(row) for row in self.entries]))


def pairing_matrix(degrees: set[int] | tuple[int, ...], points: set[Coord] | tuple[Coord, ...], d: int) -> PairingMatrix:
    """Build the pairing matrix with rows and columns in canonical sorted order."""
    return PairingMatrix(
        tuple(sorted(degrees)),
        tuple(sorted(points, key=lambda p: (p[0] + p[1], p[0]))),
        d,
    )


@dataclass(frozen=True)
class LambdaBlock:
    """One column block of the divide step.

    Columns c_lo <= i < c_hi of the triangle, the support points falling
    in them, and the paired top-edge row indices (empty when the block
    holds no points).
    """

    c_lo: int
    c_hi: int
    points: tuple[Coord, ...]
    degrees: tuple[int, ...]


def construct_lambda(points: set[Coord] | frozenset[Coord], d: int) -> list[LambdaBlock] | None:
    """Greedy column composition pairing each support point with a top-edge row.

    Scans columns left to right, each time taking the fewest columns
    whose point count is zero or equals the column count; the matching
    rows are the consecutive top-edge positions of those columns. Returns
    None when no such composition exists, which happens exactly when the
    tail count #{(i, j) in S : i >= d - k} exceeds k + 1 for some k. An
    empty support gets the single all-of-it block by convention.
    """
    if any(i < 0 or j < 0 or i + j > d for i, j in points):
        raise ValueError(f"support must lie inside the degree-{d} triangle")
    if not points:
        return [LambdaBlock(0, d + 1, (), ())]
    by_column: dict[int, list[Coord]] = {}
    for p in points:
        by_column.setdefault(p[0], []).append(p)
    blocks = []
    c = 0
    while c <= d:
        width = None
        for lam in range(1, d + 2 - c):
            count = sum(len(by_column.get(i, ())) for i in range(c, c + lam))
            if count == 0 or count == lam:
                width = lam
                break
        if width is None:
            return None
        chunk = sorted(
            (p for i in range(c, c + width) for p in by_column.get(i, ())),
            key=lambda p: (p[0] + p[1], p[0]),
        )
        degrees = tuple(range(c, c + width)) if chunk else ()
        blocks.append(LambdaBlock(c, c + width, tuple(chunk), degrees))
        c += width
    return blocks


@dataclass(frozen=True)
class ExclusionVerdict:
    """Outcome of an invertibility attempt, with a re-checkable certificate.

    excluded means no nonzero outcome has support inside the queried set.
    The certificate lists, per nonempty block, the paired rows, points,
    and determinant; transposed records whether the argument ran on the
    reflected support.
    """

    excluded: bool
    d: int
    transposed: bool = False
    blocks: tuple[LambdaBlock, ...] = ()
    determinants: tuple[int, ...] = ()
    reason: str = ""

    def verify(self) -> bool:
        """Re-check the certificate against freshly built pairing matrices."""
        if not self.excluded:
            return True
        for block, expected in zip(self.blocks, self.determinants):
            if not block.points:
                continue
            matrix = PairingMatrix(block.degrees, block.points, self.d)
            if matrix.determinant() != expected or expected == 0:
                return False
        return True


def _closed_form_invertible(block: LambdaBlock, d: int) -> bool | None:
    """Decide a block by the known closed forms; None means no form applies.

    The shapes follow the conquer analysis after shifting the block to
    start at column zero: a single point, two points in the first two
    columns, three points in the leading column (a Vandermonde), or two
    leading-column points plus one in the next column, which is
    invertible exactly when the degree sum i + j differs from 2k + 1.
    """
    x = block.c_lo
    shifted = sorted((i - x, j) for i, j in block.points)
    size = len(shifted)
    if size == 1:
        # One row, one point: the entry binom(d - deg, a - i) with a = i
        # is binom(positive, 0) = 1 when the point is in the lead column,
        # and the shift makes it so exactly when i - x = 0.
        return True if shifted[0][0] == 0 else None
    cols = [i for i, _ in shifted]
    if size == 2:
        if cols == [0, 0]:
            return True
        if cols == [0, 1]:
            # Unit lower-triangular after the shift.
            return True
        return None
    if size == 3:
        if cols == [0, 0, 0]:
            return True
        if cols == [0, 0, 1]:
            (_, i), (_, j), (_, k) = shifted
            if i > j:
                i, j = j, i
            return i + j != 2 * k + 1
        return None
    return None


def _blocks_invertible(blocks: list[LambdaBlock], d: int) -> tuple[bool, list[int]]:
    determinants = []
    for block in blocks:
        if not block.points:
            determinants.append(1)
            continue
        closed = _closed_form_invertible(block, d)
        matrix = PairingMatrix(block.degrees, block.points, d)
        value = matrix.determinant()
        if closed is not None and closed != (value != 0):
            raise AssertionError(f"closed form disagrees with determinant on {block}")
        determinants.append(value)
        if value == 0:
            return False, determinants
    return True, determinants


def invertibility_excludes(points: set[Coord] | frozenset[Coord], d: int) -> ExclusionVerdict:
    """Try to certify that no nonzero outcome is supported inside the set.

    Runs the greedy divide construction on the support and, failing that,
    on its transpose; a successful run with all block determinants
    nonzero is a proof of exclusion. Inconclusive verdicts carry no
    claim: the support may or may not host an outcome.
    """
    if not points:
        return ExclusionVerdict(False, d, reason="empty support excludes nothing")
    for transposed in (False, True):
        attempt = frozenset((j, i) for i, j in points) if transposed else frozenset(points)
        blocks = construct_lambda(attempt, d)
        if blocks is None:
            continue
        ok, determinants = _blocks_invertible(blocks, d)
        if ok:
            return ExclusionVerdict(
                True,
                d,
                transposed=transposed,
                blocks=tuple(blocks),
                determinants=tuple(determinants),
                reason="all pairing blocks invertible",
            )
    return ExclusionVerdict(False, d, reason="no greedy column composition certifies exclusion")


@dataclass(frozen=True)
class HexagonReport:
    applies: bool
    restricted: ChipConfiguration
    bound: int


def hexagon_check(config: ChipConfiguration, d: int, d_small: int, ell1: int, ell2: int) -> HexagonReport:
    """Apply the hexagon criterion to a configuration on the degree-d triangle.

    The criterion applies when the support avoids the hexagonal middle:
    every point lies in the bottom-left triangle of degree d_small, the
    top strip j > d - ell1, or the right strip i > d - ell2. For an
    outcome the bottom-left restriction is then itself an outcome, and a
    valid outcome must be entirely inside the bottom-left triangle, so
    its degree is at most d_small.
    """
    if not (ell1 >= d_small >= 1 and ell2 >= d_small and d_small + ell1 + ell2 <= d):
        raise ValueError("need ell1, ell2 >= d' >= 1 and d' + ell1 + ell2 <= d")
    if config.degree > d:
        raise ValueError(f"configuration of degree {config.degree} does not fit in degree {d}")
    applies = all(
        i + j <= d_small or j > d - ell1 or i > d - ell2 for i, j in config.support
    )
    restricted = ChipConfiguration(
        {(i, j): v for (i, j), v in config if i + j <= d_small}, ambient=d_small
    )
    if applies and is_outcome(config, d):
        if not is_outcome(restricted, d_small):
            raise AssertionError("hexagon restriction of an outcome failed to be an outcome")
        if config.is_valid() and config.degree > d_small:
            raise AssertionError("valid outcome escaped the hexagon bound")
    return HexagonReport(applies, restricted, d_small)


def _superfactorial_shifted(n: int) -> int:
    """Product of m! for m = 0 .. n-1."""
    out = 1
    for m in range(n):
        out *= factorial(m)
    return out


def _superfactorial_literal(n: int) -> int:
    """Product of m! for m = 1 .. n."""
    out = 1
    for m in range(1, n + 1):
        out *= factorial(m)
    return out


@dataclass(frozen=True)
class HexagonDeterminant:
    """The binomial determinant underlying the hexagon criterion.

    direct is the determinant of (binom(d - d', ell1 + k - a)) for
    k, a = 0 .. d'. The closed-form product is reported under both
    superfactorial conventions because they disagree; matching names the
    one that reproduces the direct value (the criterion itself only ever
    uses the direct value).
    """

    direct: int
    formula_shifted: Fraction
    formula_literal: Fraction
    matching: str

    def nonzero(self) -> bool:
        return self.direct != 0


def hexagon_determinant(d: int, d_small: int, ell1: int) -> HexagonDeterminant:
    ell2 = d - d_small - ell1
    if not (ell1 >= d_small >= 0 and ell2 >= d_small):
        raise ValueError("need ell1 >= d' >= 0 and d - d' - ell1 >= d'")
    size = d_small + 1
    rows = [[binomial(d - d_small, ell1 + k - a) for a in range(size)] for k in range(size)]
    direct = int(det(rows))

    def closed_form(h) -> Fraction:
        numerator = h(ell1) * h(d - d_small - ell1) * h(d_small + 1) * h(d + 1)
        denominator = h(d - d_small) * h(d_small + ell1 + 1) * h(d - ell1 + 1)
        return Fraction(numerator, denominator)

    shifted = closed_form(_superfactorial_shifted)
    literal = closed_form(_superfactorial_literal)
    if shifted == direct and literal != direct:
        matching = "shifted"
    elif literal == direct and shifted != direct:
        matching = "literal"
    elif shifted == literal == direct:
        matching = "both"
    else:
        matching = "neither"
    return HexagonDeterminant(direct, shifted, literal, matching)
