"""Elimination pipeline for the support-five contraction cases.

Each merged contraction record leaves a five-point positive support
pattern on the grid: corner coordinates pin exact points, strip
coordinates leave one point somewhere along an edge or top diagonal.
The pipeline shows that for every ambient degree d >= 42 none of these
patterns carries a valid outcome, by running each case through four
eliminators and reporting which one fires:

* invertibility: the greedy column pairing from the exclusion criterion,
  carried out symbolically. Strip positions become bounded integer
  variables; scenarios enumerate how their columns can sit relative to
  the fixed corner clusters, and every scenario must end with invertible
  pairing blocks. Block sizes up to three use the closed forms; larger
  blocks fall back to an exact determinant that is a polynomial in one
  symbol, checked to have no admissible integer root.
* symmetry: the same argument after moving the support by a triangle
  symmetry. The image pattern includes the permuted origin, and a
  successful pairing there excludes any outcome on the original support
  positions as well, because the criterion is blind to entry signs.
* hexagon: if for every admissible strip position some hexagon instance
  contains the whole support, a compatible valid outcome would have
  degree far below d, contradicting its top-degree points. The four
  instances used are the fixed small one and the three third-cut
  variants, which is what pins the d >= 42 floor.
* special: ad hoc arguments for what survives, certified case by case.

Verdicts carry enough detail to re-check the certificate, and the
module-level report aggregates counts per stage.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cache

import numpy as np

from .linalg import Poly, binomial, binomial_poly, integer_roots_at_or_above, poly_det
from .hyperfield import (
    MergedContractionPoint,
    lambda_set,
    s3_on_contraction,
)

D_FLOOR = 42
_SIGMAS = ("(12)", "(13)", "(23)", "(123)", "(132)")


# ---------------------------------------------------------------------------
# Linear expressions in the ambient degree and the strip variables.


def _merge(terms):
    out = {}
    for name, coeff in terms:
        out[name] = out.get(name, 0) + coeff
    return tuple(sorted((n, c) for n, c in out.items() if c))


@dataclass(frozen=True)
class Sym:
    """Integer value of the form dc*d + c + sum of coeff*var.

    Variables stand for strip positions and float-group bases; they all
    range over [4, d - 7].
    """

    dc: int = 0
    c: int = 0
    terms: tuple[tuple[str, int], ...] = ()

    @staticmethod
    def const(n: int) -> Sym:
        return Sym(0, n)

    @staticmethod
    def dee(offset: int = 0) -> Sym:
        return Sym(1, offset)

    @staticmethod
    def var(name: str) -> Sym:
        return Sym(0, 0, ((name, 1),))

    def __add__(self, other: Sym) -> Sym:
        return Sym(self.dc + other.dc, self.c + other.c, _merge(self.terms + other.terms))

    def __sub__(self, other: Sym) -> Sym:
        return self + other.scaled(-1)

    def scaled(self, k: int) -> Sym:
        return Sym(k * self.dc, k * self.c, _merge((n, k * c) for n, c in self.terms))

    def shifted(self, n: int) -> Sym:
        return Sym(self.dc, self.c + n, self.terms)

    @property
    def is_const(self) -> bool:
        return self.dc == 0 and not self.terms

    def subst(self, mapping: dict[str, Sym]) -> Sym:
        out = Sym(self.dc, self.c)
        for name, coeff in self.terms:
            if name in mapping:
                out = out + mapping[name].scaled(coeff)
            else:
                out = out + Sym(0, 0, ((name, coeff),))
        return out

    def key(self) -> tuple:
        return (self.dc, self.c, self.terms)


def _sign_for_all(expr: Sym) -> int | None:
    """Sign of the expression over d >= 42 and all variables in [4, d-7].

    Returns -1, 0, or +1 when the sign is constant on the whole box and
    None when it can change; the bounds substitute each variable's
    extreme values, which is exact because the expression is linear.
    """
    lo_slope = expr.dc + sum(c for _, c in expr.terms if c < 0)
    lo_const = expr.c + sum(
        4 * c if c > 0 else -7 * c for _, c in expr.terms
    )
    hi_slope = expr.dc + sum(c for _, c in expr.terms if c > 0)
    hi_const = expr.c + sum(
        4 * c if c < 0 else -7 * c for _, c in expr.terms
    )
    lo = lo_slope * D_FLOOR + lo_const if lo_slope >= 0 else None
    hi = hi_slope * D_FLOOR + hi_const if hi_slope <= 0 else None
    if lo is not None and hi is not None and lo == hi == 0:
        return 0
    if lo is not None and lo > 0:
        return 1
    if hi is not None and hi < 0:
        return -1
    return None


# ---------------------------------------------------------------------------
# Possibility lists: where a support point compatible with a coordinate
# can sit on the degree-d triangle.


@dataclass(frozen=True)
class SymPoint:
    i: Sym
    j: Sym

    def transposed(self) -> SymPoint:
        return SymPoint(self.j, self.i)

    def subst(self, mapping: dict[str, Sym]) -> SymPoint:
        return SymPoint(self.i.subst(mapping), self.j.subst(mapping))

    def key(self) -> tuple:
        return (self.i.key(), self.j.key())


def _parse_cell(name: str) -> tuple[str, tuple[int, ...]]:
    kind, rest = name.split("[")
    idx = tuple(int(part) for part in rest.rstrip("]").split(","))
    return kind, idx


def cell_possibilities(name: str) -> list[SymPoint]:
    """Candidate grid positions for a support point seen in this cell.

    Corner cells pin one point. Strip cells offer a generic position,
    whose variable is named after the cell, plus the near-top positions
    the variable range cannot reach.
    """
    kind, idx = _parse_cell(name)
    var = Sym.var("m_" + name)
    if kind == "x":
        i, j = idx
        return [SymPoint(Sym.const(i), Sym.const(j))]
    if kind == "r":
        i, j = idx
        return [SymPoint(Sym.const(i), Sym.dee(-(3 + i - j)))]
    if kind == "t":
        i, j = idx
        return [SymPoint(Sym.dee(-(3 + j - i)), Sym.const(j))]
    if kind == "alpha":
        (i,) = idx
        out = [SymPoint(Sym.const(i), var)]
        out += [SymPoint(Sym.const(i), Sym.dee(-e)) for e in range(4 + i, 7)]
        return out
    if kind == "beta":
        (j,) = idx
        out = [SymPoint(var, Sym.const(j))]
        out += [SymPoint(Sym.dee(-e), Sym.const(j)) for e in range(4 + j, 7)]
        return out
    if kind == "gamma":
        (k,) = idx
        out = [SymPoint(var, Sym.dee(-k) - var)]
        out += [SymPoint(Sym.dee(-e), Sym.const(e - k)) for e in range(4 + k, 7)]
        return out
    raise ValueError(f"unknown cell {name!r}")


# ---------------------------------------------------------------------------
# The symbolic greedy pairing.


def _column_variables(points: list[SymPoint]) -> list[tuple[str, Sym]]:
    """Variables appearing in column expressions, with those expressions."""
    out = []
    seen = set()
    for p in points:
        for name, coeff in p.i.terms:
            if name not in seen:
                if abs(coeff) != 1:
                    raise AssertionError(f"unexpected column coefficient for {name}")
                seen.add(name)
                out.append((name, p.i))
    return out


def _partitions(items: list[int]):
    if not items:
        yield []
    elif len(items) == 1:
        yield [items]
    elif len(items) == 2:
        a, b = items
        yield [[a, b]]
        yield [[a], [b]]
    else:
        a, b, c = items
        yield [[a, b, c]]
        yield [[a, b], [c]]
        yield [[a, c], [b]]
        yield [[b, c], [a]]
        yield [[a], [b], [c]]


def _group_offsets(size: int):
    if size == 1:
        yield (0,)
    elif size == 2:
        for o in range(6):
            yield (0, o)
    else:
        for o2 in range(11):
            for o3 in range(11):
                lo, mid, hi = sorted((0, o2, o3))
                if mid - lo <= 5 and hi - mid <= 5:
                    yield (0, o2, o3)


def _placements(n_vars: int):
    """All ways the variable columns can sit relative to the fixed clusters.

    Each variable is either attached to the low cluster at an explicit
    column, attached to the top cluster at an explicit distance from d,
    or floating; floating variables are grouped into chains with
    explicit internal offsets and an unconstrained common base. Chains
    of interaction steps of length at most five bound the explicit
    ranges, so the enumeration covers every concrete configuration.
    """
    low_hi = 3 + 5 * n_vars
    top_hi = 6 + 5 * n_vars
    base = (
        [("low", v) for v in range(4, low_hi + 1)]
        + [("top", o) for o in range(7, top_hi + 1)]
        + [("float",)]
    )
    for combo in itertools.product(base, repeat=n_vars):
        floats = [k for k, choice in enumerate(combo) if choice == ("float",)]
        if not floats:
            yield combo
            continue
        for grouping in _partitions(floats):
            for offsets in itertools.product(
                *(_group_offsets(len(group)) for group in grouping)
            ):
                detailed = list(combo)
                for g, (group, offs) in enumerate(zip(grouping, offsets)):
                    for member, off in zip(group, offs):
                        detailed[member] = ("float", g, off)
                yield tuple(detailed)


def _substitution(colvars, placement) -> dict[str, Sym] | None:
    """Solve each placed column expression for its variable.

    Returns None when the placement forces the variable outside
    [4, d-7], which makes the scenario vacuous.
    """
    mapping = {}
    for (name, colexpr), choice in zip(colvars, placement):
        if choice[0] == "low":
            col = Sym.const(choice[1])
        elif choice[0] == "top":
            col = Sym.dee(-choice[1])
        else:
            col = Sym.var(f"B{choice[1]}").shifted(choice[2])
        coeff = dict(colexpr.terms)[name]
        rest = colexpr - Sym(0, 0, ((name, coeff),))
        value = (col - rest).scaled(coeff)
        # The variable must stay in [4, d-7] somewhere on the box.
        if _sign_for_all(value.shifted(-4)) == -1:
            return None
        if _sign_for_all(Sym.dee(-7) - value) == -1:
            return None
        mapping[name] = value
    return mapping


_TOP_WINDOW = 24


def _classify_column(col: Sym):
    if col.is_const:
        if not 0 <= col.c <= 3 + 5 * 5:
            raise AssertionError(f"unexpected explicit column {col}")
        return ("low", col.c)
    if col.dc == 1 and not col.terms:
        o = -col.c
        if not 0 <= o <= _TOP_WINDOW:
            raise AssertionError(f"unexpected top column offset {o}")
        return ("top", _TOP_WINDOW - o)
    if col.dc == 0 and len(col.terms) == 1 and col.terms[0][1] == 1:
        base = col.terms[0][0]
        if not 0 <= col.c <= 30:
            raise AssertionError(f"unexpected float offset {col.c}")
        return ("float", base, col.c)
    raise AssertionError(f"column expression out of scope: {col}")


def _region_blocks(positions: dict[int, list[int]], limit: int | None):
    """Greedy minimal balanced blocks over one cluster of columns.

    Mirrors the concrete column composition: the shortest prefix whose
    point count is zero or equals its width becomes the next block. With
    at most six points a balanced width never exceeds six, so the probe
    range is capped; a right boundary caps it further and makes the
    construction fail exactly when the top-edge tails are too crowded.
    """
    if not positions:
        return []
    c = min(positions)
    last = max(positions)
    blocks = []
    while c <= last:
        room = 6 if limit is None else min(6, limit - c)
        width = None
        for lam in range(1, room + 1):
            count = sum(len(positions.get(i, ())) for i in range(c, c + lam))
            if count == 0 or count == lam:
                width = lam
                break
        if width is None:
            return None
        members = [p for i in range(c, c + width) for p in positions.get(i, ())]
        if members:
            blocks.append((c, width, members))
        c += width
    return blocks


@dataclass(frozen=True)
class ScenarioFailure:
    reason: str
    detail: str
    expr: Sym | None = None


def _poly_entry(upper: Sym, k: int, symbol_key, u_min: int):
    """The pairing entry binom(upper, k) as a polynomial in one symbol.

    Returns (poly, symbol_key, u_min); constants keep symbol None.
    """
    if k < 0:
        return Poly.constant(0), None, 0
    if upper.is_const:
        if upper.c < 0:
            raise AssertionError("pairing entry above the triangle")
        return Poly.constant(binomial(upper.c, k)), None, 0
    if upper.dc == 1 and not upper.terms:
        return binomial_poly(1, upper.c, k), ("d",), D_FLOOR
    if upper.dc == 1 and len(upper.terms) == 1 and upper.terms[0][1] == -1:
        # A function of u = d - base with the base at most d - 7.
        return binomial_poly(1, upper.c, k), ("u", upper.terms[0][0]), 7
    return None, "mixed", 0


def _block_verdict(rows: list[Sym], pts: list[SymPoint]) -> ScenarioFailure | None:
    """Certify one pairing block invertible for every admissible value."""
    lead = rows[0]
    shifted = []
    for p in pts:
        rel = p.i - lead
        if not rel.is_const:
            raise AssertionError("block mixes columns from different clusters")
        shifted.append((rel.c, p))
    shifted.sort(key=lambda t: t[0])
    cols = [c for c, _ in shifted]
    size = len(cols)
    if size == 1:
        if cols != [0]:
            raise AssertionError("singleton block point is not in its lead column")
        return None
    if size == 2:
        if cols in ([0, 0], [0, 1]):
            return None
        raise AssertionError(f"impossible width-2 column pattern {cols}")
    if size == 3 and cols == [0, 0, 0]:
        return None
    if size == 3 and cols == [0, 0, 1]:
        j1 = shifted[0][1].j
        j2 = shifted[1][1].j
        j3 = shifted[2][1].j
        guard = j1 + j2 - j3.scaled(2) - Sym.const(1)
        sign = _sign_for_all(guard)
        if sign == 0:
            return ScenarioFailure("singular", "degenerate two-and-one block", guard)
        if sign is None:
            return ScenarioFailure("ambiguous", "two-and-one block guard can vanish", guard)
        return None
    # General block: exact determinant as a polynomial in one symbol.
    symbol = None
    u_min = 0
    grid = []
    for a in rows:
        row = []
        for _, p in shifted:
            k_expr = a - p.i
            if not k_expr.is_const:
                raise AssertionError("row index does not align with block columns")
            upper = Sym.dee() - (p.i + p.j)
            poly, sym_key, entry_min = _poly_entry(upper, k_expr.c, symbol, u_min)
            if sym_key == "mixed":
                return ScenarioFailure("ambiguous", "entry mixes the degree with a base")
            if sym_key is not None:
                if symbol is None:
                    symbol, u_min = sym_key, entry_min
                elif symbol != sym_key:
                    return ScenarioFailure("ambiguous", "block mixes two symbols")
            row.append(poly)
        grid.append(row)
    det = poly_det(grid)
    if det.is_zero():
        return ScenarioFailure("singular", "identically singular block")
    if symbol is None:
        return None
    roots = integer_roots_at_or_above(det, u_min)
    if roots:
        return ScenarioFailure(
            "ambiguous", f"block determinant vanishes at {symbol[0]} in {roots}"
        )
    return None


def _scenario_failures(points: list[SymPoint], first_only: bool = True):
    """Run the greedy pairing on fully placed points, reporting failures."""
    failures = []
    low: dict[int, list[int]] = {}
    top: dict[int, list[int]] = {}
    floats: dict[str, dict[int, list[int]]] = {}
    for idx, p in enumerate(points):
        kind = _classify_column(p.i)
        if kind[0] == "low":
            low.setdefault(kind[1], []).append(idx)
        elif kind[0] == "top":
            top.setdefault(kind[1], []).append(idx)
        else:
            floats.setdefault(kind[1], {}).setdefault(kind[2], []).append(idx)
    regions = [(low, None, Sym.const(0))]
    for base, positions in sorted(floats.items()):
        regions.append((positions, None, Sym.var(base)))
    regions.append((top, _TOP_WINDOW + 1, Sym.dee(-_TOP_WINDOW)))
    for positions, limit, base_row in regions:
        blocks = _region_blocks(positions, limit)
        if blocks is None:
            failures.append(ScenarioFailure("infeasible", "no balanced column composition"))
            if first_only:
                return failures
            continue
        for c_lo, width, members in blocks:
            rows = [base_row.shifted(c_lo + w) for w in range(width)]
            failure = _block_verdict(rows, [points[m] for m in members])
            if failure is not None:
                failures.append(failure)
                if first_only:
                    return failures
    return failures


def _scenario_verdict(points: list[SymPoint]) -> ScenarioFailure | None:
    failures = _scenario_failures(points)
    return failures[0] if failures else None


_ATTEMPT_CACHE: dict[tuple, bool] = {}


def _shape_key(points: list[SymPoint]) -> tuple:
    rename: dict[str, str] = {}

    def canon(sym: Sym) -> tuple:
        terms = []
        for name, coeff in sym.terms:
            if name not in rename:
                rename[name] = f"v{len(rename)}"
            terms.append((rename[name], coeff))
        return (sym.dc, sym.c, tuple(sorted(terms)))

    return tuple(sorted((canon(p.i), canon(p.j)) for p in points))


def _attempt_excluded(points: list[SymPoint]) -> bool:
    """True when every placement scenario certifies exclusion."""
    key = _shape_key(points)
    hit = _ATTEMPT_CACHE.get(key)
    if hit is not None:
        return hit
    colvars = _column_variables(points)
    result = True
    for placement in _placements(len(colvars)):
        mapping = _substitution(colvars, placement)
        if mapping is None:
            continue
        placed = [p.subst(mapping) for p in points]
        if _scenario_verdict(placed) is not None:
            result = False
            break
    _ATTEMPT_CACHE[key] = result
    return result


def _attempt_guards(points: list[SymPoint]) -> set[Sym] | None:
    """Expressions whose vanishing is the only way this attempt can fail.

    Walks every placement scenario and collects the guard expression of
    each failing block. Blocks of the two-and-one shape are invertible at
    a parameter point exactly when their guard is nonzero there, so when
    every failure carries a guard, the set of parameters the attempt does
    not exclude lies inside the union of the guards' zero sets. Returns
    None when some failure has no guard to blame, and an empty set when
    the attempt certifies exclusion outright.
    """
    guards: set[Sym] = set()
    colvars = _column_variables(points)
    for placement in _placements(len(colvars)):
        mapping = _substitution(colvars, placement)
        if mapping is None:
            continue
        placed = [p.subst(mapping) for p in points]
        for failure in _scenario_failures(placed, first_only=False):
            if failure.expr is None:
                return None
            guards.add(failure.expr)
    return guards


def _support_cells(case: MergedContractionPoint) -> list[str]:
    return [name for name, v in case.record().items() if v != 0]


def invertibility_eliminates(case: MergedContractionPoint) -> bool:
    """Symbolic pairing exclusion over every relative position pattern."""
    option_lists = [cell_possibilities(name) for name in _support_cells(case)]
    for combo in itertools.product(*option_lists):
        points = list(combo)
        if not (
            _attempt_excluded(points)
            or _attempt_excluded([p.transposed() for p in points])
        ):
            return False
    return True


def symmetry_eliminates(case: MergedContractionPoint) -> str | None:
    """Try the pairing argument on each nontrivial symmetry image."""
    for sigma in _SIGMAS:
        image = s3_on_contraction(sigma, case)
        if invertibility_eliminates(image):
            return sigma
    return None


# ---------------------------------------------------------------------------
# Hexagon coverage.

_HEX_SWEEP_TOP = 123


def _strip_allowed(kind: str, idx: int, inst: str, d: int, m: np.ndarray) -> np.ndarray:
    """Which generic strip positions one hexagon instance contains.

    Instances: "small" is the fixed hexagon with d' = 6 and both arms 7;
    "thirds" cuts at a third everywhere; "wide_i" widens the right arm
    so columns from the third cut upward are allowed; "wide_j" is its
    mirror. Corner cells and explicit near-top strip positions are
    inside every instance, so only generic strip variables constrain.
    """
    t = d // 3
    if kind == "alpha":
        small = m <= 6 - idx
        if inst == "small" or inst == "wide_i":
            return small
        if inst == "thirds":
            return (m + idx <= t) | (m >= d - t + 1)
        return small | (m >= t)
    if kind == "beta":
        small = m <= 6 - idx
        if inst == "small" or inst == "wide_j":
            return small
        if inst == "thirds":
            return (m + idx <= t) | (m >= d - t + 1)
        return small | (m >= t)
    if kind == "gamma":
        small = m <= 6 - idx
        if inst == "small":
            return small
        if inst == "thirds":
            return (m <= t - idx - 1) | (m >= d - t + 1)
        if inst == "wide_i":
            return small | (m >= t)
        return small | (m <= d - idx - t)
    raise ValueError(f"unexpected strip kind {kind}")


def hexagon_eliminates(case: MergedContractionPoint) -> bool:
    """Exact coverage check of the strip-variable box by hexagon instances.

    A compatible valid outcome has degree exactly d, but once one
    instance contains the entire support its degree is at most the
    instance's small triangle, far below d. The check sweeps d up to a
    cap beyond which every interval comparison in the instance bounds is
    stable, so the covering pattern repeats.
    """
    strips = [
        _parse_cell(name)
        for name in _support_cells(case)
        if name.startswith(("alpha", "beta", "gamma"))
    ]
    if not strips:
        return True
    if len(strips) > 3:
        raise AssertionError("more strip coordinates than a support-five case allows")
    for d in range(D_FLOOR, _HEX_SWEEP_TOP + 1):
        m = np.arange(4, d - 6)
        covered = np.zeros([len(m)] * len(strips), dtype=bool)
        for inst in ("small", "thirds", "wide_i", "wide_j"):
            axes = []
            for kind, (idx,) in strips:
                axes.append(_strip_allowed(kind, idx, inst, d, m))
            inside = axes[0]
            if len(axes) == 2:
                inside = axes[0][:, None] & axes[1][None, :]
            elif len(axes) == 3:
                inside = (
                    axes[0][:, None, None]
                    & axes[1][None, :, None]
                    & axes[2][None, None, :]
                )
            covered |= inside
        if not covered.all():
            return False
    return True


# ---------------------------------------------------------------------------
# Special arguments and the public pipeline.


def _special_exceptional(case: MergedContractionPoint) -> dict | None:
    """Subtraction argument for the merged record of smaller support.

    Its compatible supports carry positives at (0, 3), (1, 1), (3, 0)
    plus two top-diagonal points. Subtracting the right multiple of the
    degree-three outcome u = -1 at the origin, 1 at (0, 3) and (3, 0),
    3 at (1, 1) either kills a corner positive while keeping validity,
    leaving a valid outcome with at most four positives at degree d
    (none exist), or exhausts the origin debt first, leaving a nonzero
    outcome with no negative entry at all (impossible). Either way no
    valid outcome matches the case.
    """
    expected = ("x[0,3]", "x[1,1]", "x[3,0]", "gamma[0]")
    if case.positive_support() != expected:
        return None
    from .models import tightness_family
    from .pascal import is_outcome

    u = tightness_family(1)
    if not is_outcome(u):
        raise AssertionError("the subtraction witness stopped being an outcome")
    return {
        "argument": "subtract the degree-three outcome until a corner positive or the origin debt vanishes",
        "witness": {f"({i},{j})": str(v) for (i, j), v in u},
        "leftover": "a valid outcome with at most four positives, or a nonnegative nonzero outcome",
    }


# The last support-five case resists the pairing argument only where its
# low-column guard vanishes: both inner strip points must sit at height
# (d - 1) / 2, so d is odd, say d = 2e + 1 with e >= 21 on the degree
# range the pipeline covers. On that slice the support is pinned down to
# six explicit points (one of them carrying the free diagonal position g),
# and a hand-picked set of six pairing degrees has nonsingular pairing
# matrix for every e >= 21, which excludes the slice as well.

_E_MIN = 21

# Linear forms in (e, g) are triples (ce, c0, cg) meaning ce*e + c0 + cg*g,
# with g confined to a box [glo(e), ghi(e)] whose bounds are pairs (ce, c0).

_Tri = tuple[int, int, int]
_Pair = tuple[int, int]
_Box = tuple[_Pair, _Pair]


def _tri_sub(tri: _Tri, bound: _Pair) -> _Pair:
    """Substitute g = bound into the triple, leaving a form in e alone."""
    ce, c0, cg = tri
    return (ce + cg * bound[0], c0 + cg * bound[1])


def _tri_min(tri: _Tri, box: _Box) -> int | None:
    """Exact minimum over e >= _E_MIN and g in the box, None if unbounded."""
    glo, ghi = box
    slope, const = _tri_sub(tri, glo if tri[2] >= 0 else ghi)
    if slope < 0:
        return None
    return slope * _E_MIN + const


def _tri_max(tri: _Tri, box: _Box) -> int | None:
    """Exact maximum over e >= _E_MIN and g in the box, None if unbounded."""
    glo, ghi = box
    slope, const = _tri_sub(tri, ghi if tri[2] >= 0 else glo)
    if slope > 0:
        return None
    return slope * _E_MIN + const


def _slice_entry(upper: _Pair, k: _Tri, box: _Box) -> Poly | None:
    """One pairing entry binomial(upper, k) on the slice, as a polynomial in e.

    The upper argument is one of the slice supports' complementary
    degrees, all nonnegative for e >= _E_MIN, so the entry vanishes
    whenever k is negative or exceeds the upper argument everywhere on
    the box. A k without g and with the same e-slope as the upper reduces
    through the symmetry binomial(n, k) = binomial(n, n - k). Entries
    depending on e or g in an essentially exponential way return None;
    the determinant expansion must drop their rows before evaluating.
    """
    kmax = _tri_max(k, box)
    if kmax is not None and kmax < 0:
        return Poly([])
    over = (k[0] - upper[0], k[1] - upper[1], k[2])
    overmin = _tri_min(over, box)
    if overmin is not None and overmin >= 1:
        return Poly([])
    if k[0] == 0 and k[2] == 0:
        return binomial_poly(upper[0], upper[1], k[1])
    if k[0] == upper[0] and k[2] == 0:
        return binomial_poly(upper[0], upper[1], upper[1] - k[1])
    return None


def _expand(grid: list[list[Poly | None]]) -> Poly:
    """Determinant of a grid that may hold unevaluated entries.

    Expands along columns whose entries are all known, preferring the
    sparsest, until the unevaluated entries' rows are gone and a plain
    polynomial determinant finishes the job. Every slice pattern below
    reaches that point; anything else is a logic error, not a case to
    handle.
    """
    n = len(grid)
    if all(entry is not None for row in grid for entry in row):
        return poly_det([[entry for entry in row] for row in grid])
    best: tuple[int, int] | None = None
    for c in range(n):
        column = [grid[r][c] for r in range(n)]
        if any(entry is None for entry in column):
            continue
        nonzeros = sum(1 for entry in column if not entry.is_zero())
        if best is None or nonzeros < best[0]:
            best = (nonzeros, c)
    if best is None:
        raise AssertionError("slice determinant expansion has no evaluated column")
    _, c = best
    det = Poly([])
    for r in range(n):
        entry = grid[r][c]
        if entry.is_zero():
            continue
        minor = [
            [grid[rr][cc] for cc in range(n) if cc != c]
            for rr in range(n)
            if rr != r
        ]
        term = entry * _expand(minor)
        det = det + (term if (r + c) % 2 == 0 else -term)
    return det


def _slice_det(rows: list[_Tri], points: list[tuple[_Tri, _Pair]], box: _Box) -> Poly:
    grid: list[list[Poly | None]] = []
    for row in rows:
        entries = []
        for i_form, upper in points:
            k = (row[0] - i_form[0], row[1] - i_form[1], row[2] - i_form[2])
            entries.append(_slice_entry(upper, k, box))
        grid.append(entries)
    return _expand(grid)


def _final_slice_patterns() -> list[tuple[str, list[tuple[_Tri, _Pair]], list[_Tri], _Box]]:
    """Support patterns of the final case on the odd-diagonal slice.

    Fixed points: the origin debt, the two far corners, and the two
    inner strip points at height e. The remaining positive sits on the
    top diagonal at column g; the six patterns split its range so that
    a single degree set works uniformly across each piece.
    """
    origin = ((0, 0, 0), (2, 1))
    far_j = ((0, 0, 0), (0, 0))
    far_i = ((2, 1, 0), (0, 0))
    strip_a = ((0, 1, 0), (1, 0))
    strip_b = ((1, 0, 0), (1, 0))
    base_rows = [(0, 0, 0), (0, 1, 0), (0, 3, 0), (1, 0, 0)]
    top_row = (2, 1, 0)
    no_g: _Box = ((0, 0), (0, 0))

    def pattern(name, g_form, extra_rows, box=no_g):
        points = [origin, far_j, far_i, strip_a, strip_b, (g_form, (0, 1))]
        return (name, points, base_rows + extra_rows + [top_row], box)

    return [
        pattern("low", (0, 0, 1), [(0, 1, 1)], ((0, 4), (1, -2))),
        pattern("below-strip", (1, -1, 0), [(1, -1, 0)]),
        pattern("at-strip", (1, 0, 0), [(1, 1, 0)]),
        pattern("high", (0, 0, 1), [(0, 1, 1)], ((1, 1), (2, -6))),
        pattern("near-top", (2, -5, 0), [(2, -4, 0)]),
        pattern("nearer-top", (2, -4, 0), [(2, -3, 0)]),
    ]


_FINAL_RECORD = {
    "x[0,0]": -1,
    "r[0,3]": 1,
    "t[3,0]": 1,
    "alpha[1]": 1,
    "beta[1]": 1,
    "gamma[1]": 1,
}

_GUARD_KEYS = (
    (1, -1, (("m_alpha[1]", -2),)),
    (1, -1, (("m_beta[1]", -2),)),
)


def _special_final(case: MergedContractionPoint) -> dict | None:
    """Slice argument for the case the pairing eliminators leave behind.

    First audits the pairing failures: for every position pattern, each
    of the two attempts either certifies exclusion or fails only through
    guards pinning the strip heights to (d - 1) / 2. Any compatible
    valid outcome therefore lives on the odd-diagonal slice, and the
    explicit slice determinants rule that out for every e >= _E_MIN.
    """
    support = {name: v for name, v in case.record().items() if v != 0}
    if support != _FINAL_RECORD:
        return None
    option_lists = [cell_possibilities(name) for name in _support_cells(case)]
    resistant = 0
    for combo in itertools.product(*option_lists):
        points = list(combo)
        flipped = [p.transposed() for p in points]
        if _attempt_excluded(points) or _attempt_excluded(flipped):
            continue
        resistant += 1
        for pts, expected in ((points, _GUARD_KEYS[0]), (flipped, _GUARD_KEYS[1])):
            guards = _attempt_guards(pts)
            if guards is None or any(g.key() != expected for g in guards):
                return None
    if resistant == 0:
        return None
    determinants = {}
    for name, points, rows, box in _final_slice_patterns():
        det = _slice_det(rows, points, box)
        if det.is_zero() or integer_roots_at_or_above(det, _E_MIN):
            return None
        determinants[name] = [str(c) for c in det.coeffs]
    return {
        "argument": "strip heights are pinned to the middle, and the odd-diagonal slice has invertible pairings",
        "resistant_patterns": resistant,
        "slice": "d = 2e + 1 with both inner strip points at height e",
        "determinants_in_e": determinants,
    }


def special_eliminates(case: MergedContractionPoint) -> dict | None:
    certificate = _special_exceptional(case)
    if certificate is None:
        certificate = _special_final(case)
    return certificate


@dataclass(frozen=True)
class CaseVerdict:
    """How one contraction case was ruled out, if it was."""

    case: MergedContractionPoint
    eliminated_by: str | None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "case": self.case.record(),
            "eliminated_by": self.eliminated_by,
            "detail": self.detail,
        }


def relset_pipeline(case: MergedContractionPoint) -> CaseVerdict:
    """Run the eliminator chain on one merged contraction case."""
    if len(case.positive_support()) != 5:
        certificate = special_eliminates(case)
        if certificate is not None:
            return CaseVerdict(case, "special", certificate["argument"])
        return CaseVerdict(case, None, "no special argument applies")
    if invertibility_eliminates(case):
        return CaseVerdict(case, "invertibility", "all pairing scenarios invertible")
    sigma = symmetry_eliminates(case)
    if sigma is not None:
        return CaseVerdict(case, "symmetry", f"pairing succeeds on the {sigma} image")
    if hexagon_eliminates(case):
        return CaseVerdict(case, "hexagon", "hexagon instances cover the strip box")
    certificate = special_eliminates(case)
    if certificate is not None:
        return CaseVerdict(case, "special", certificate["argument"])
    return CaseVerdict(case, None, "survived every eliminator")


@dataclass(frozen=True)
class PipelineReport:
    verdicts: tuple[CaseVerdict, ...]
    counts: dict[str, int] = field(default_factory=dict)

    def survivors(self) -> tuple[CaseVerdict, ...]:
        return tuple(v for v in self.verdicts if v.eliminated_by is None)

    def to_json(self) -> dict:
        return {
            "counts": dict(self.counts),
            "cases": [v.to_json() for v in self.verdicts],
        }


@cache
def pipeline_summary() -> PipelineReport:
    """Run every contraction case through the pipeline and tally stages."""
    lam = lambda_set()
    verdicts = []
    counts = {"invertibility": 0, "symmetry": 0, "hexagon": 0, "special": 0, "survivor": 0}
    for case in lam.cases + (lam.exceptional,):
        verdict = relset_pipeline(case)
        verdicts.append(verdict)
        counts[verdict.eliminated_by or "survivor"] += 1
    return PipelineReport(tuple(verdicts), counts)
