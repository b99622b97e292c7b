"""Chip configurations on the triangular grid, games, and the S3 symmetry.

The playing field of degree d is the triangle of lattice points
{(i, j) : i, j >= 0, i + j <= d}. A chip configuration assigns a rational
number of chips to each point (almost all zero). A game is a multiset of
splitting moves; the move at p takes one chip off p and puts one chip on
each of p + (1, 0) and p + (0, 1). Moves commute, so a game is just a map
from grid points to integer multiplicities, and applying it is linear.

The symmetric group on three letters acts on the triangle by permuting
the barycentric roles of i, j, and d - i - j. On configurations the
action carries signs that depend on the ambient degree; on bare points it
is the plain coordinate shuffle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Coord = tuple[int, int]
Value = int | Fraction

PERMUTATIONS = ("e", "(12)", "(13)", "(23)", "(123)", "(132)")

# (sigma tau)(x) = sigma(tau(x)); table verified against the point action.
_COMPOSE = {
    ("e", "e"): "e",
    ("e", "(12)"): "(12)",
    ("e", "(13)"): "(13)",
    ("e", "(23)"): "(23)",
    ("e", "(123)"): "(123)",
    ("e", "(132)"): "(132)",
    ("(12)", "e"): "(12)",
    ("(12)", "(12)"): "e",
    ("(12)", "(13)"): "(132)",
    ("(12)", "(23)"): "(123)",
    ("(12)", "(123)"): "(23)",
    ("(12)", "(132)"): "(13)",
    ("(13)", "e"): "(13)",
    ("(13)", "(12)"): "(123)",
    ("(13)", "(13)"): "e",
    ("(13)", "(23)"): "(132)",
    ("(13)", "(123)"): "(12)",
    ("(13)", "(132)"): "(23)",
    ("(23)", "e"): "(23)",
    ("(23)", "(12)"): "(132)",
    ("(23)", "(13)"): "(123)",
    ("(23)", "(23)"): "e",
    ("(23)", "(123)"): "(13)",
    ("(23)", "(132)"): "(12)",
    ("(123)", "e"): "(123)",
    ("(123)", "(12)"): "(13)",
    ("(123)", "(13)"): "(23)",
    ("(123)", "(23)"): "(12)",
    ("(123)", "(123)"): "(132)",
    ("(123)", "(132)"): "e",
    ("(132)", "e"): "(132)",
    ("(132)", "(12)"): "(23)",
    ("(132)", "(13)"): "(12)",
    ("(132)", "(23)"): "(13)",
    ("(132)", "(123)"): "e",
    ("(132)", "(132)"): "(123)",
}

_INVERSE = {"e": "e", "(12)": "(12)", "(13)": "(13)", "(23)": "(23)", "(123)": "(132)", "(132)": "(123)"}


def grid_points(d: int) -> list[Coord]:
    """All points of the degree-d triangle, sorted by total degree then i."""
    if d < 0:
        return []
    return [(i, e - i) for e in range(d + 1) for i in range(e + 1)]


def in_grid(point: Coord, d: int) -> bool:
    i, j = point
    return i >= 0 and j >= 0 and i + j <= d


def compose(sigma: str, tau: str) -> str:
    """The permutation doing tau first, then sigma."""
    return _COMPOSE[(sigma, tau)]


def invert(sigma: str) -> str:
    return _INVERSE[sigma]


def act_point(sigma: str, point: Coord, d: int) -> Coord:
    """Image of a grid point under the triangle symmetry of ambient degree d."""
    i, j = point
    k = d - i - j
    match sigma:
        case "e":
            return (i, j)
        case "(12)":
            return (j, i)
        case "(13)":
            return (k, j)
        case "(23)":
            return (i, k)
        case "(123)":
            return (k, i)
        case "(132)":
            return (j, k)
    raise ValueError(f"unknown permutation {sigma!r}")


def _sign_factor(sigma: str, point: Coord, d: int) -> int:
    """Sign attached to moving the chips at a point, in source coordinates."""
    i, j = point
    match sigma:
        case "e" | "(12)":
            return 1
        case "(13)" | "(132)":
            return -1 if (d - j) % 2 else 1
        case "(23)" | "(123)":
            return -1 if (d - i) % 2 else 1
    raise ValueError(f"unknown permutation {sigma!r}")


def _coerce(value: Value) -> Value:
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


def _parse_value(token: str) -> Value:
    if "/" in token:
        return Fraction(token)
    return int(token)


def _format_value(value: Value) -> str:
    return str(value)


class ChipConfiguration:
    """An assignment of rational chip counts to grid points, almost all zero.

    Immutable. Only nonzero entries are stored. The optional ambient degree
    bounds the triangle the configuration is thought of as living on; it
    matters for rendering, validity checks, and the symmetry action, and
    must be at least the degree of the support.
    """

    __slots__ = ("_entries", "_ambient")

    def __init__(self, entries: Mapping[Coord, Value] | Iterable[tuple[Coord, Value]] = (), ambient: int | None = None):
        items = entries.items() if isinstance(entries, Mapping) else entries
        cleaned: dict[Coord, Value] = {}
        for (i, j), v in items:
            if i < 0 or j < 0:
                raise ValueError(f"point ({i}, {j}) is outside the nonnegative quadrant")
            v = _coerce(Fraction(v) if not isinstance(v, (int, Fraction)) else v)
            if v != 0:
                cleaned[(i, j)] = v
        if ambient is not None:
            too_big = [p for p in cleaned if p[0] + p[1] > ambient]
            if too_big:
                raise ValueError(f"points {sorted(too_big)} exceed ambient degree {ambient}")
        self._entries = cleaned
        self._ambient = ambient

    @classmethod
    def zero(cls, ambient: int | None = None) -> ChipConfiguration:
        return cls((), ambient)

    @property
    def ambient(self) -> int | None:
        return self._ambient

    @property
    def degree(self) -> int:
        """Largest total degree carrying a chip; -1 for the zero configuration."""
        if not self._entries:
            return -1
        return max(i + j for i, j in self._entries)

    @property
    def support(self) -> frozenset[Coord]:
        return frozenset(self._entries)

    @property
    def positive_support(self) -> frozenset[Coord]:
        return frozenset(p for p, v in self._entries.items() if v > 0)

    @property
    def negative_support(self) -> frozenset[Coord]:
        return frozenset(p for p, v in self._entries.items() if v < 0)

    def __getitem__(self, point: Coord) -> Value:
        return self._entries.get(point, 0)

    def __iter__(self) -> Iterator[tuple[Coord, Value]]:
        return iter(sorted(self._entries.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0][0])))

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChipConfiguration):
            return NotImplemented
        return self._entries == other._entries and self._ambient == other._ambient

    def __hash__(self) -> int:
        return hash((frozenset(self._entries.items()), self._ambient))

    def __repr__(self) -> str:
        inner = ", ".join(f"({i}, {j}): {v}" for (i, j), v in self)
        amb = "" if self._ambient is None else f", ambient={self._ambient}"
        return f"ChipConfiguration({{{inner}}}{amb})"

    def with_ambient(self, ambient: int | None) -> ChipConfiguration:
        return ChipConfiguration(self._entries, ambient)

    def _merged_ambient(self, other: ChipConfiguration) -> int | None:
        if self._ambient is None:
            return other._ambient
        if other._ambient is None:
            return self._ambient
        return max(self._ambient, other._ambient)

    def __add__(self, other: ChipConfiguration) -> ChipConfiguration:
        merged = dict(self._entries)
        for p, v in other._entries.items():
            merged[p] = merged.get(p, 0) + v
        return ChipConfiguration(merged, self._merged_ambient(other))

    def __sub__(self, other: ChipConfiguration) -> ChipConfiguration:
        return self + (-other)

    def __neg__(self) -> ChipConfiguration:
        return ChipConfiguration({p: -v for p, v in self._entries.items()}, self._ambient)

    def scale(self, factor: Value) -> ChipConfiguration:
        if factor == 0:
            return ChipConfiguration.zero(self._ambient)
        return ChipConfiguration({p: _coerce(Fraction(v) * factor) for p, v in self._entries.items()}, self._ambient)

    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v in self._entries.values())

    def primitive(self) -> ChipConfiguration:
        """Scale to integer entries with content 1, preserving signs."""
        if not self._entries:
            return self
        points = sorted(self._entries)
        from .linalg import primitive_integer_vector

        ints = primitive_integer_vector([self._entries[p] for p in points])
        scaled = ChipConfiguration(dict(zip(points, ints)), self._ambient)
        sample = points[0]
        if Fraction(self._entries[sample]) * scaled[sample] < 0:
            scaled = -scaled
        return scaled

    def is_valid(self) -> bool:
        """No chips in debt except possibly at the origin."""
        return all(p == (0, 0) for p in self.negative_support)

    def is_weakly_valid(self, d: int | None = None) -> bool:
        """Negative entries confined to the three corners of depth four.

        The corners are measured against the triangle of degree d, which
        defaults to the ambient degree (or the support degree without one).
        """
        if d is None:
            d = self._ambient if self._ambient is not None else max(self.degree, 0)
        for i, j in self.negative_support:
            low_corner = i <= 3 and j <= 3
            top_corner = i <= 3 and i + j >= d - 3
            right_corner = j <= 3 and i + j >= d - 3
            if not (low_corner or top_corner or right_corner):
                return False
        return True

    def alternating_top_sum(self) -> Value:
        """Sum of (-1)^i times the entries on the top diagonal i + j = degree."""
        e = self.degree
        total: Value = 0
        for (i, j), v in self._entries.items():
            if i + j == e:
                total += v if i % 2 == 0 else -v
        return _coerce(Fraction(total))


@dataclass(frozen=True)
class Game:
    """A multiset of splitting moves, stored as point -> multiplicity.

    Negative multiplicities mean reversed moves (merging two chips back).
    A game on the degree-d triangle only has moves at points of degree at
    most d - 1, since a move pushes chips one degree up.
    """

    moves: tuple[tuple[Coord, int], ...] = field(default=())

    def __init__(self, moves: Mapping[Coord, int] | Iterable[tuple[Coord, int]] = ()):
        items = moves.items() if isinstance(moves, Mapping) else moves
        cleaned: dict[Coord, int] = {}
        for (i, j), m in items:
            if i < 0 or j < 0:
                raise ValueError(f"move position ({i}, {j}) is outside the grid")
            if not isinstance(m, int):
                raise TypeError("move multiplicities must be integers")
            if m != 0:
                cleaned[(i, j)] = cleaned.get((i, j), 0) + m
        object.__setattr__(self, "moves", tuple(sorted(cleaned.items())))

    def multiplicity(self, point: Coord) -> int:
        return dict(self.moves).get(point, 0)

    @property
    def support(self) -> frozenset[Coord]:
        return frozenset(p for p, _ in self.moves)

    def __add__(self, other: Game) -> Game:
        merged = dict(self.moves)
        for p, m in other.moves:
            merged[p] = merged.get(p, 0) + m
        return Game(merged)

    def __neg__(self) -> Game:
        return Game({p: -m for p, m in self.moves})

    def total_effect(self) -> ChipConfiguration:
        """Net chip movement of the whole game, starting from nothing."""
        delta: dict[Coord, Value] = {}
        for (i, j), m in self.moves:
            delta[(i, j)] = delta.get((i, j), 0) - m
            delta[(i + 1, j)] = delta.get((i + 1, j), 0) + m
            delta[(i, j + 1)] = delta.get((i, j + 1), 0) + m
        return ChipConfiguration(delta)


def apply_game(start: ChipConfiguration, game: Game) -> ChipConfiguration:
    """Play every move of the game on top of the starting configuration."""
    if start.ambient is not None:
        limit = start.ambient - 1
        bad = [p for p in game.support if p[0] + p[1] > limit]
        if bad:
            raise ValueError(f"moves at {sorted(bad)} would push chips past degree {start.ambient}")
    return start + game.total_effect()


def act(sigma: str, config: ChipConfiguration, d: int | None = None) -> ChipConfiguration:
    """The signed symmetry action on chip configurations.

    The transposition of i and j is an honest relabeling; the symmetries
    moving the top edge pick up a sign of (-1) per row or column parity,
    which is what makes them send outcomes to outcomes. d defaults to the
    ambient degree and must cover the support.
    """
    if d is None:
        d = config.ambient
    if d is None:
        raise ValueError("the symmetry action needs an ambient degree")
    if config.degree > d:
        raise ValueError(f"support of degree {config.degree} does not fit in the degree-{d} triangle")
    moved = {
        act_point(sigma, p, d): _coerce(Fraction(v) * _sign_factor(sigma, p, d))
        for p, v in config
    }
    return ChipConfiguration(moved, config.ambient if config.ambient is not None else d)


def act_support(sigma: str, points: Iterable[Coord], d: int) -> frozenset[Coord]:
    return frozenset(act_point(sigma, p, d) for p in points)


def render(config: ChipConfiguration, d: int | None = None, empty: str = "·") -> str:
    """Draw the triangle, one row per j from the top (j = d) down to j = 0.

    Within a row, i increases left to right, and tokens are joined by
    single spaces. Zero entries print as the empty marker.
    """
    if d is None:
        d = config.ambient if config.ambient is not None else max(config.degree, 0)
    if config.degree > d:
        raise ValueError(f"cannot render degree-{config.degree} support in a degree-{d} triangle")
    lines = []
    for j in range(d, -1, -1):
        tokens = []
        for i in range(d - j + 1):
            v = config[(i, j)]
            tokens.append(_format_value(v) if v != 0 else empty)
        lines.append(" ".join(tokens))
    return "\n".join(lines)


def parse(text: str) -> ChipConfiguration:
    """Read a triangle back from its rendered form.

    Accepts either the middle dot or a period for empty points, integers,
    and fractions like 3/2. The number of lines fixes the ambient degree.
    """
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("no triangle rows to parse")
    d = len(lines) - 1
    entries: dict[Coord, Value] = {}
    for row_index, line in enumerate(lines):
        j = d - row_index
        tokens = line.split()
        if len(tokens) != row_index + 1:
            raise ValueError(
                f"row {row_index} (j = {j}) has {len(tokens)} entries, expected {row_index + 1}"
            )
        for i, token in enumerate(tokens):
            if token in (".", "·"):
                continue
            try:
                value = _parse_value(token)
            except ValueError as exc:
                raise ValueError(f"cannot read chip count {token!r} at ({i}, {j})") from exc
            entries[(i, j)] = value
    return ChipConfiguration(entries, ambient=d)


def config_to_json(config: ChipConfiguration) -> str:
    payload = {
        "ambient": config.ambient,
        "entries": [[i, j, _format_value(v)] for (i, j), v in config],
    }
    return json.dumps(payload)


def config_from_json(text: str) -> ChipConfiguration:
    payload = json.loads(text)
    if not isinstance(payload, dict) or "entries" not in payload:
        raise ValueError("expected an object with an 'entries' list")
    entries = {}
    for item in payload["entries"]:
        i, j, raw = item
        entries[(int(i), int(j))] = _parse_value(str(raw))
    ambient = payload.get("ambient")
    return ChipConfiguration(entries, ambient=None if ambient is None else int(ambient))
