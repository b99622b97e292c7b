"""Sign arithmetic, the sign-form exclusion test, and the outer-ring contraction.

Replacing every chip count by its sign loses the magnitudes but keeps a
surprising amount of structure: a linear form that vanishes on a
configuration must, on the level of signs, admit cancellation. Over the
sign alphabet {-1, 0, 1} addition becomes multivalued (1 + (-1) can be
anything), and a form "vanishes" at a sign configuration when 0 is among
the possible sums. Requiring that of every Pascal form cuts down the
possible positive supports of valid outcomes drastically.

For large ambient degree the useful information concentrates in an outer
ring of the triangle: three corner blocks of depth four plus summarized
strips along the edges and the top diagonals. The contraction maps a
sign configuration to that fixed 64-coordinate record, and the Pascal
forms near the three corners descend to forms on the record that do not
depend on the ambient degree (they only feel its parity). Enumerating
the records compatible with all descended forms yields finite case
lists, which the case pipeline then eliminates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cache
from math import comb

import numpy as np

from .grid import ChipConfiguration, Coord, act_point, grid_points
from .pascal import (
    PascalForm,
    all_forms,
    bottom_row_form,
    left_column_form,
    top_edge_form,
)

NEGATIVE = frozenset({-1})
ZERO = frozenset({0})
POSITIVE = frozenset({1})
H = frozenset({-1, 0, 1})


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def hyperfield_sum(signs) -> frozenset:
    """Set of achievable signs when adding quantities of the given signs."""
    has_pos = has_neg = False
    for s in signs:
        if s > 0:
            has_pos = True
        elif s < 0:
            has_neg = True
    if has_pos and has_neg:
        return H
    if has_pos:
        return POSITIVE
    if has_neg:
        return NEGATIVE
    return ZERO


def sign_of(config: ChipConfiguration) -> ChipConfiguration:
    """Entrywise sign of a configuration, ambient degree preserved."""
    return ChipConfiguration(
        {p: _sign(v) for p, v in config}, ambient=config.ambient
    )


def eval_sign_form(form: PascalForm, s: ChipConfiguration) -> frozenset:
    """Possible signs of the form's value given only the signs of the entries.

    The result is one of {0}, {1}, {-1}, or the full set H. The form
    vanishes in the hyperfield sense exactly when 0 is a member.
    """
    return hyperfield_sum(_sign(form.coefficient(i, j)) * v for (i, j), v in s)


@cache
def _forms_at(d: int) -> tuple[PascalForm, ...]:
    return tuple(all_forms(d))


@dataclass(frozen=True)
class HyperfieldVerdict:
    """Result of the sign-form test on a candidate positive support."""

    excluded: bool
    d: int
    failing_form: str | None = None


def hyperfield_excludes(points, d: int) -> HyperfieldVerdict:
    """Test whether signs alone rule out a valid outcome of degree exactly d.

    Builds the canonical sign configuration (-1 at the origin, +1 on the
    candidate support) and evaluates the sign image of every Pascal form
    at ambient degree d. A valid outcome of degree exactly d forces every
    one of those values to be the full set H: its entries are nonzero
    with precisely these signs, and a vanishing nontrivial sum needs
    contributions of both signs. Any other value excludes the support.

    A support whose maximal degree is less than d is excluded
    automatically (the top-row forms then evaluate to {0}), matching the
    degree-exactly-d reading.
    """
    pts = frozenset(points)
    if (0, 0) in pts:
        raise ValueError("candidate positive supports may not contain the origin")
    if any(i < 0 or j < 0 or i + j > d for i, j in pts):
        raise ValueError(f"support must lie inside the degree-{d} triangle")
    s = ChipConfiguration({(0, 0): -1, **{p: 1 for p in pts}}, ambient=d)
    for form in _forms_at(d):
        if eval_sign_form(form, s) != H:
            return HyperfieldVerdict(True, d, form.label())
    return HyperfieldVerdict(False, d)


def permute_signs(sigma: str, s: ChipConfiguration, d: int) -> ChipConfiguration:
    """Triangle symmetry on sign configurations: pure position permutation.

    Unlike the action on chip configurations there are no sign factors;
    signs of entries just travel with their points.
    """
    return ChipConfiguration(
        {act_point(sigma, p, d): v for p, v in s}, ambient=d
    )


# ---------------------------------------------------------------------------
# The outer ring and its contraction.

RING_DEPTH = 4
MIN_CONTRACTION_DEGREE = 11

XI_COORDS: tuple[str, ...] = (
    tuple(f"x[{i},{j}]" for i in range(4) for j in range(4))
    + tuple(f"r[{i},{j}]" for i in range(4) for j in range(4))
    + tuple(f"t[{i},{j}]" for i in range(4) for j in range(4))
    + tuple(f"alpha[{i}]" for i in range(4))
    + tuple(f"beta[{j}]" for j in range(4))
    + tuple(f"gamma0[{k}]" for k in range(4))
    + tuple(f"gamma1[{k}]" for k in range(4))
)
XI_INDEX = {name: idx for idx, name in enumerate(XI_COORDS)}

XI_PRIME_COORDS: tuple[str, ...] = (
    XI_COORDS[:48]
    + tuple(f"alpha[{i}]" for i in range(4))
    + tuple(f"beta[{j}]" for j in range(4))
    + tuple(f"gamma[{k}]" for k in range(4))
)


def ring_cell(point: Coord, d: int) -> tuple | None:
    """Which contraction coordinate a grid point feeds, None for the interior.

    Cells: ("x", i, j) and the two reindexed corner blocks ("r", i, j),
    ("t", i, j); summed strips ("alpha", i), ("beta", j); and the top
    diagonal strips ("gamma", parity, k) where k = d - degree.
    """
    i, j = point
    if i < 0 or j < 0 or i + j > d:
        raise ValueError(f"({i}, {j}) is outside the degree-{d} triangle")
    deg = i + j
    if deg >= d - 3:
        if i < 4:
            return ("r", i, deg - (d - 3))
        if j < 4:
            return ("t", deg - (d - 3), j)
        return ("gamma", i % 2, d - deg)
    if i < 4 and j < 4:
        return ("x", i, j)
    if i < 4:
        return ("alpha", i)
    if j < 4:
        return ("beta", j)
    return None


def _grid4() -> list[list[int]]:
    return [[0] * 4 for _ in range(4)]


def _freeze4(rows) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(row) for row in rows)


def _check4(rows, label: str):
    if len(rows) != 4 or any(len(row) != 4 for row in rows):
        raise ValueError(f"{label} must be a 4x4 grid")
    if any(v not in (-1, 0, 1) for row in rows for v in row):
        raise ValueError(f"{label} entries must be signs")


def _check1(row, label: str):
    if len(row) != 4 or any(v not in (-1, 0, 1) for v in row):
        raise ValueError(f"{label} must be four signs")


@dataclass(frozen=True)
class ContractionPoint:
    """The 64-coordinate outer-ring record of a sign configuration."""

    x: tuple[tuple[int, ...], ...]
    r: tuple[tuple[int, ...], ...]
    t: tuple[tuple[int, ...], ...]
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    gamma0: tuple[int, ...]
    gamma1: tuple[int, ...]

    def __post_init__(self):
        _check4(self.x, "x")
        _check4(self.r, "r")
        _check4(self.t, "t")
        _check1(self.alpha, "alpha")
        _check1(self.beta, "beta")
        _check1(self.gamma0, "gamma0")
        _check1(self.gamma1, "gamma1")

    def as_vector(self) -> tuple[int, ...]:
        return (
            tuple(v for row in self.x for v in row)
            + tuple(v for row in self.r for v in row)
            + tuple(v for row in self.t for v in row)
            + self.alpha
            + self.beta
            + self.gamma0
            + self.gamma1
        )

    @classmethod
    def from_vector(cls, vec) -> ContractionPoint:
        vec = tuple(vec)
        if len(vec) != 64:
            raise ValueError("a contraction point has 64 coordinates")
        return cls(
            _freeze4([vec[4 * i : 4 * i + 4] for i in range(4)]),
            _freeze4([vec[16 + 4 * i : 16 + 4 * i + 4] for i in range(4)]),
            _freeze4([vec[32 + 4 * i : 32 + 4 * i + 4] for i in range(4)]),
            vec[48:52],
            vec[52:56],
            vec[56:60],
            vec[60:64],
        )

    @classmethod
    def zero(cls) -> ContractionPoint:
        return cls.from_vector([0] * 64)

    def positive_support(self) -> tuple[str, ...]:
        return tuple(
            name for name, v in zip(XI_COORDS, self.as_vector()) if v > 0
        )

    def is_valid(self) -> bool:
        vec = self.as_vector()
        if all(v == 0 for v in vec):
            return True
        return vec[0] == -1 and all(v in (0, 1) for v in vec[1:])

    def is_weakly_valid(self) -> bool:
        return all(
            v >= 0 for v in self.alpha + self.beta + self.gamma0 + self.gamma1
        )

    def record(self) -> dict[str, int]:
        """Sparse JSON-friendly form keyed by coordinate names."""
        return {
            name: v for name, v in zip(XI_COORDS, self.as_vector()) if v != 0
        }

    @classmethod
    def from_record(cls, record: dict) -> ContractionPoint:
        vec = [0] * 64
        for name, v in record.items():
            vec[XI_INDEX[name]] = v
        return cls.from_vector(vec)


@dataclass(frozen=True)
class MergedContractionPoint:
    """Contraction record after merging the two diagonal parity strips."""

    x: tuple[tuple[int, ...], ...]
    r: tuple[tuple[int, ...], ...]
    t: tuple[tuple[int, ...], ...]
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    gamma: tuple[int, ...]

    def __post_init__(self):
        _check4(self.x, "x")
        _check4(self.r, "r")
        _check4(self.t, "t")
        _check1(self.alpha, "alpha")
        _check1(self.beta, "beta")
        _check1(self.gamma, "gamma")

    def as_vector(self) -> tuple[int, ...]:
        return (
            tuple(v for row in self.x for v in row)
            + tuple(v for row in self.r for v in row)
            + tuple(v for row in self.t for v in row)
            + self.alpha
            + self.beta
            + self.gamma
        )

    @classmethod
    def from_vector(cls, vec) -> MergedContractionPoint:
        vec = tuple(vec)
        if len(vec) != 60:
            raise ValueError("a merged contraction point has 60 coordinates")
        return cls(
            _freeze4([vec[4 * i : 4 * i + 4] for i in range(4)]),
            _freeze4([vec[16 + 4 * i : 16 + 4 * i + 4] for i in range(4)]),
            _freeze4([vec[32 + 4 * i : 32 + 4 * i + 4] for i in range(4)]),
            vec[48:52],
            vec[52:56],
            vec[56:60],
        )

    @classmethod
    def zero(cls) -> MergedContractionPoint:
        return cls.from_vector([0] * 60)

    def positive_support(self) -> tuple[str, ...]:
        return tuple(
            name for name, v in zip(XI_PRIME_COORDS, self.as_vector()) if v > 0
        )

    def is_valid(self) -> bool:
        vec = self.as_vector()
        if all(v == 0 for v in vec):
            return True
        return vec[0] == -1 and all(v in (0, 1) for v in vec[1:])

    def is_weakly_valid(self) -> bool:
        return all(v >= 0 for v in self.alpha + self.beta + self.gamma)

    def record(self) -> dict[str, int]:
        return {
            name: v
            for name, v in zip(XI_PRIME_COORDS, self.as_vector())
            if v != 0
        }

    @classmethod
    def from_record(cls, record: dict) -> MergedContractionPoint:
        index = {name: idx for idx, name in enumerate(XI_PRIME_COORDS)}
        vec = [0] * 60
        for name, v in record.items():
            vec[index[name]] = v
        return cls.from_vector(vec)


def chi(theta: ContractionPoint) -> MergedContractionPoint:
    """Merge the two parity strips of each top diagonal into one sum."""
    gamma = []
    for g0, g1 in zip(theta.gamma0, theta.gamma1):
        if g0 * g1 < 0:
            raise ValueError("parity strips of opposite sign merge to a multivalued sum")
        gamma.append(_sign(g0 + g1))
    return MergedContractionPoint(
        theta.x, theta.r, theta.t, theta.alpha, theta.beta, tuple(gamma)
    )


def contract(s: ChipConfiguration, d: int) -> ContractionPoint:
    """Project a weakly valid sign configuration onto the outer ring.

    Corner entries are copied (with the top corners reindexed relative to
    the diagonal edge); strip coordinates are hyperfield sums, which weak
    validity keeps single-valued. Points in the interior (both
    coordinates at least 4 and degree at most d-4) are forgotten.
    """
    if d < MIN_CONTRACTION_DEGREE:
        raise ValueError(f"contraction needs ambient degree at least {MIN_CONTRACTION_DEGREE}")
    if s.degree > d:
        raise ValueError(f"configuration of degree {s.degree} does not fit in degree {d}")
    if any(v not in (-1, 0, 1) for _, v in s):
        raise ValueError("contraction expects a sign configuration")
    if not s.is_weakly_valid(d):
        raise ValueError("strip sums of a non-weakly-valid configuration are multivalued")
    x, r, t = _grid4(), _grid4(), _grid4()
    alpha, beta, gamma0, gamma1 = [0] * 4, [0] * 4, [0] * 4, [0] * 4
    for p, v in s:
        cell = ring_cell(p, d)
        if cell is None:
            continue
        match cell:
            case ("x", i, j):
                x[i][j] = v
            case ("r", i, j):
                r[i][j] = v
            case ("t", i, j):
                t[i][j] = v
            case ("alpha", i):
                alpha[i] = max(alpha[i], v)
            case ("beta", j):
                beta[j] = max(beta[j], v)
            case ("gamma", 0, k):
                gamma0[k] = max(gamma0[k], v)
            case ("gamma", 1, k):
                gamma1[k] = max(gamma1[k], v)
    return ContractionPoint(
        _freeze4(x), _freeze4(r), _freeze4(t),
        tuple(alpha), tuple(beta), tuple(gamma0), tuple(gamma1),
    )


# ---------------------------------------------------------------------------
# Contracted forms, derived mechanically at reference degrees.


@dataclass(frozen=True)
class ContractedForm:
    """A sign-coefficient linear form on the 64 contraction coordinates."""

    name: str
    coefficients: tuple[int, ...]

    def evaluate(self, theta: ContractionPoint) -> frozenset:
        return hyperfield_sum(
            c * v for c, v in zip(self.coefficients, theta.as_vector()) if c and v
        )


def _form_specs(d: int):
    specs = []
    for k in (1, 2, 3):
        specs.append((f"psi[{k}]", left_column_form(k, d)))
    for k in (1, 2, 3):
        specs.append((f"psibar[{k}]", bottom_row_form(k, d)))
    for a in (1, 2, 3):
        specs.append((f"phi[{a},d-{a}]", top_edge_form(a, d - a, d)))
    for a in (1, 2, 3):
        specs.append((f"phi[d-{a},{a}]", top_edge_form(d - a, a, d)))
    for m in (3, 2, 1, 0):
        name = "psi[d]" if m == 0 else f"psi[d-{m}]"
        specs.append((name, left_column_form(d - m, d)))
    for m in (3, 2, 1, 0):
        name = "psibar[d]" if m == 0 else f"psibar[d-{m}]"
        specs.append((name, bottom_row_form(d - m, d)))
    return specs


def _contract_form(form: PascalForm, d: int) -> tuple[int, ...]:
    """Read off the descended coefficients of a Pascal form at degree d.

    The form must vanish on the invisible interior and have a constant
    coefficient sign on every strip cell; both are checked, so a form
    outside the descending family fails loudly instead of silently
    producing a wrong contraction.
    """
    per_cell: dict[tuple, set[int]] = {}
    for p in grid_points(d):
        sg = _sign(form.coefficient(*p))
        cell = ring_cell(p, d)
        if cell is None:
            if sg:
                raise AssertionError(
                    f"{form.label()} does not vanish at interior point {p}"
                )
            continue
        per_cell.setdefault(cell, set()).add(sg)
    coeffs = [0] * 64
    for cell, signs in per_cell.items():
        if len(signs) != 1:
            raise AssertionError(
                f"{form.label()} has mixed coefficient signs on cell {cell}"
            )
        (sg,) = signs
        match cell:
            case ("x", i, j):
                idx = 4 * i + j
            case ("r", i, j):
                idx = 16 + 4 * i + j
            case ("t", i, j):
                idx = 32 + 4 * i + j
            case ("alpha", i):
                idx = 48 + i
            case ("beta", j):
                idx = 52 + j
            case ("gamma", parity, k):
                idx = 56 + 4 * parity + k
        coeffs[idx] = sg
    return tuple(coeffs)


@cache
def contracted_forms(parity: str, reference: int | None = None) -> tuple[ContractedForm, ...]:
    """The 20 descended forms for the given ambient-degree parity.

    Derived by instantiating each Pascal form at a reference degree of
    the right parity and reading coefficients off the ring cells; the
    derivation is repeated at reference + 2 and must agree, which is the
    degree-independence property that makes contraction useful.
    """
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    if reference is None:
        reference = 16 if parity == "even" else 17
    if reference % 2 != (0 if parity == "even" else 1) or reference < 14:
        raise ValueError(f"reference degree {reference} unsuitable for {parity} parity")
    out = []
    for (name, form), (again_name, again) in zip(
        _form_specs(reference), _form_specs(reference + 2)
    ):
        coeffs = _contract_form(form, reference)
        if name != again_name or coeffs != _contract_form(again, reference + 2):
            raise AssertionError(f"contraction of {name} is not degree-stable")
        out.append(ContractedForm(name, coeffs))
    return tuple(out)


# ---------------------------------------------------------------------------
# The Gamma and Lambda case lists.


@cache
def _support_masks(supp_size: int) -> np.ndarray:
    """All positive supports of the given size over the 63 free coordinates,
    encoded as uint64 bitmasks (bit index = coordinate index; bit 0, the
    origin, is never set)."""
    total = comb(63, supp_size)

    def masks():
        for combo in itertools.combinations(range(1, 64), supp_size):
            m = 0
            for b in combo:
                m |= 1 << b
            yield m

    return np.fromiter(masks(), dtype=np.uint64, count=total)


def _mask_survivors(forms, masks: np.ndarray) -> np.ndarray:
    """Masks whose valid contraction point gives every form the full value H."""
    keep = np.ones(len(masks), dtype=bool)
    for form in forms:
        pos_mask = neg_mask = 0
        for idx, c in enumerate(form.coefficients):
            if idx == 0:
                continue
            if c > 0:
                pos_mask |= 1 << idx
            elif c < 0:
                neg_mask |= 1 << idx
        origin = form.coefficients[0]
        # The origin entry is -1, so its product contributes the opposite
        # of the coefficient sign.
        if origin != -1:
            keep &= (masks & np.uint64(pos_mask)) != 0
        if origin != 1:
            keep &= (masks & np.uint64(neg_mask)) != 0
        if not keep.any():
            break
    return masks[keep]


def _point_from_mask(mask: int) -> ContractionPoint:
    vec = [0] * 64
    vec[0] = -1
    for idx in range(1, 64):
        if mask >> idx & 1:
            vec[idx] = 1
    return ContractionPoint.from_vector(vec)


@cache
def gamma_set(parity: str, supp_size: int) -> tuple[ContractionPoint, ...]:
    """All valid contraction points with the given positive support size at
    which every descended form evaluates to the full set H."""
    if not 1 <= supp_size <= 5:
        raise ValueError("supported positive support sizes are 1..5")
    forms = contracted_forms(parity)
    survivors = _mask_survivors(forms, _support_masks(supp_size))
    points = [_point_from_mask(int(m)) for m in survivors]
    points.sort(key=lambda p: p.as_vector())
    return tuple(points)


@dataclass(frozen=True)
class LambdaSet:
    """Deduplicated merged images of both parity case lists."""

    cases: tuple[MergedContractionPoint, ...]
    exceptional: MergedContractionPoint


@cache
def lambda_set() -> LambdaSet:
    """Merge the two support-5 case lists along chi and split off the one
    element whose merged positive support drops below five."""
    images: dict[tuple, MergedContractionPoint] = {}
    for parity in ("even", "odd"):
        for theta in gamma_set(parity, 5):
            prime = chi(theta)
            images[prime.as_vector()] = prime
    cases = []
    small = []
    for prime in images.values():
        if len(prime.positive_support()) == 5:
            cases.append(prime)
        else:
            small.append(prime)
    if len(small) != 1:
        raise AssertionError(
            f"expected exactly one merged image of smaller support, found {len(small)}"
        )
    cases.sort(key=lambda p: p.as_vector())
    return LambdaSet(tuple(cases), small[0])


# ---------------------------------------------------------------------------
# The symmetry action on merged contraction points.


def _transpose4(rows):
    return tuple(tuple(rows[j][i] for j in range(4)) for i in range(4))


def _act12(p: MergedContractionPoint) -> MergedContractionPoint:
    return MergedContractionPoint(
        _transpose4(p.x),
        _transpose4(p.t),
        _transpose4(p.r),
        p.beta,
        p.alpha,
        p.gamma,
    )


def _act13(p: MergedContractionPoint) -> MergedContractionPoint:
    return MergedContractionPoint(
        tuple(tuple(p.t[3 - i][j] for j in range(4)) for i in range(4)),
        tuple(tuple(p.r[3 - j][3 - i] for j in range(4)) for i in range(4)),
        tuple(tuple(p.x[3 - i][j] for j in range(4)) for i in range(4)),
        p.gamma,
        p.beta,
        p.alpha,
    )

_WORDS = {
    "e": (),
    "(12)": ("12",),
    "(13)": ("13",),
    "(23)": ("12", "13", "12"),
    "(123)": ("12", "13"),
    "(132)": ("13", "12"),
}


def s3_on_contraction(sigma: str, point: MergedContractionPoint) -> MergedContractionPoint:
    """Triangle symmetry on merged contraction points.

    The transposition of the two axes swaps the top corner blocks and the
    edge strips; the symmetry fixing the bottom edge exchanges the origin
    corner with the right corner and the column strips with the diagonal
    ones. Merging the parity strips first is what makes the latter
    well defined. Words in the two generators cover the other elements,
    applied first-to-last.
    """
    if sigma not in _WORDS:
        raise ValueError(f"unknown symmetry {sigma!r}, expected one of {sorted(_WORDS)}")
    for step in _WORDS[sigma]:
        point = _act12(point) if step == "12" else _act13(point)
    return point


def __getattr__(name):
    # The support-5 case pipeline lives in its own module; expose it here
    # as well since it operates on this module's contraction points.
    if name in ("relset_pipeline", "CaseVerdict", "pipeline_summary"):
        from . import pipeline

        return getattr(pipeline, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
