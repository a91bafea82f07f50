"""Point sets and direction primitives, in exact rational or float64 arithmetic.

A point set is homogeneous: every coordinate is either an exact rational
(``fractions.Fraction``, with plain ints accepted) or a float.  Exact sets
support bit-exact canonical directions and file round trips; float sets get
quantized direction keys so that nearly parallel pairs collide predictably.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegeneratePair,
    FormatError,
    MixedMode,
    PreconditionFailed,
    VerticalPair,
)

# Snap for unit-vector components used as float direction keys.
DIRECTION_RESOLUTION = 1e-9
# Snap used only to detect duplicate points in float mode.
DUPLICATE_RESOLUTION = 1e-12

EXACT_TYPES = (int, Fraction)

Scalar = int | float | Fraction
Point = tuple


def is_exact_scalar(value) -> bool:
    return isinstance(value, EXACT_TYPES) and not isinstance(value, bool)


def infer_mode(coords: Iterable) -> str:
    """Classify a flat iterable of scalars as 'exact' or 'float'.

    Raises MixedMode when Fractions and floats are combined.  Plain ints are
    neutral: they count as exact unless floats are present.
    """
    saw_float = False
    saw_fraction = False
    for value in coords:
        if isinstance(value, bool):
            raise MixedMode("bool is not a coordinate type")
        if isinstance(value, Fraction):
            saw_fraction = True
        elif isinstance(value, float | np.floating):
            saw_float = True
        elif isinstance(value, int | np.integer):
            pass
        else:
            raise MixedMode(f"unsupported coordinate type {type(value).__name__}")
    if saw_float and saw_fraction:
        raise MixedMode("cannot mix exact rationals and floats in one point set")
    return "float" if saw_float else "exact"


def _coerce_point(raw: Sequence, mode: str) -> tuple:
    if mode == "exact":
        return tuple(value if isinstance(value, Fraction) else Fraction(value) for value in raw)
    out = tuple(float(value) for value in raw)
    for value in out:
        if not math.isfinite(value):
            raise PreconditionFailed("coordinates must be finite")
    return out


def _float_dup_key(point: tuple) -> tuple:
    return tuple(round(c / DUPLICATE_RESOLUTION) for c in point)


@dataclass
class PointSet:
    """An ordered collection of distinct points in a common dimension.

    Treat instances as immutable after construction; the cached numpy array
    is shared between callers.
    """

    dimension: int
    points: tuple
    mode: str
    _array: np.ndarray | None = field(default=None, repr=False, compare=False)
    _scaled: tuple | None = field(default=None, repr=False, compare=False)

    @classmethod
    def from_points(cls, raw_points: Iterable[Sequence], mode: str | None = None) -> "PointSet":
        rows = [tuple(r) for r in raw_points]
        if not rows:
            raise PreconditionFailed("a point set needs at least one point")
        dimension = len(rows[0])
        if dimension < 2:
            raise PreconditionFailed("ambient dimension must be at least 2")
        for r in rows:
            if len(r) != dimension:
                raise PreconditionFailed("all points must share one dimension")
        if mode is None:
            mode = infer_mode(c for r in rows for c in r)
        elif mode not in ("exact", "float"):
            raise PreconditionFailed(f"unknown mode {mode!r}")
        pts = tuple(_coerce_point(r, mode) for r in rows)
        if mode == "exact":
            seen = set()
            for p in pts:
                if p in seen:
                    raise PreconditionFailed(f"duplicate point {p}")
                seen.add(p)
        else:
            seen = set()
            for p in pts:
                key = _float_dup_key(p)
                if key in seen:
                    raise PreconditionFailed(f"duplicate point {p} at resolution {DUPLICATE_RESOLUTION}")
                seen.add(key)
        return cls(dimension=dimension, points=pts, mode=mode)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def as_array(self) -> np.ndarray:
        """Float64 view of the coordinates, cached after the first call."""
        if self._array is None:
            self._array = np.array(
                [[float(c) for c in p] for p in self.points], dtype=np.float64
            )
        return self._array

    def scaled_integer(self) -> tuple[np.ndarray, int] | None:
        """Integer coordinates over a common denominator, when small enough.

        Returns (array, denominator) with array = denominator * points, or
        None when the set is float mode or the common denominator does not
        fit comfortably in int64 arithmetic.
        """
        if self.mode != "exact":
            return None
        if self._scaled is None:
            denom = 1
            for p in self.points:
                for c in p:
                    denom = math.lcm(denom, c.denominator)
                    if denom > 1 << 31:
                        self._scaled = (None, 0)
                        return None
            biggest = 0
            arr = np.empty((len(self.points), self.dimension), dtype=np.int64)
            for i, p in enumerate(self.points):
                for j, c in enumerate(p):
                    v = c.numerator * (denom // c.denominator)
                    biggest = max(biggest, abs(v))
                    arr[i, j] = v
            if biggest > 1 << 40:
                self._scaled = (None, 0)
                return None
            self._scaled = (arr, denom)
        if self._scaled[0] is None:
            return None
        return self._scaled


@dataclass(frozen=True, slots=True)
class DirectionKey:
    """Canonical key for the direction spanned by an ordered point pair.

    Exact keys store a primitive integer vector; float keys store unit-vector
    components snapped to DIRECTION_RESOLUTION.  Keys from different modes
    never compare equal.
    """

    rep: tuple
    antipodal_identified: bool
    exact: bool

    def unit_vector(self) -> tuple:
        norm = math.sqrt(sum(float(c) * float(c) for c in self.rep))
        return tuple(float(c) / norm for c in self.rep)


@dataclass(frozen=True, slots=True)
class SlopeVector:
    """The d-1 slope coordinates of a pair with distinct final coordinates."""

    entries: tuple

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def _check_pair(x: Sequence, y: Sequence) -> str:
    if len(x) != len(y):
        raise PreconditionFailed("points must share a dimension")
    if len(x) < 2:
        raise PreconditionFailed("ambient dimension must be at least 2")
    return infer_mode(list(x) + list(y))


def canonical_direction(x: Sequence, y: Sequence, antipodal: bool = True) -> DirectionKey:
    """Canonical direction key of the segment from y to x.

    With ``antipodal`` the key identifies u with -u (the sign is fixed so the
    first nonzero entry is positive); without it the sign of x - y survives.
    """
    mode = _check_pair(x, y)
    if mode == "exact":
        diff = [Fraction(a) - Fraction(b) for a, b in zip(x, y)]
        if all(v == 0 for v in diff):
            raise DegeneratePair("x == y has no direction")
        denom = math.lcm(*(v.denominator for v in diff))
        ints = [int(v * denom) for v in diff]
        g = math.gcd(*ints)
        prim = [v // g for v in ints]
        if antipodal:
            for v in prim:
                if v != 0:
                    if v < 0:
                        prim = [-w for w in prim]
                    break
        return DirectionKey(rep=tuple(prim), antipodal_identified=antipodal, exact=True)

    diff = [float(a) - float(b) for a, b in zip(x, y)]
    norm = math.sqrt(sum(v * v for v in diff))
    if norm == 0.0:
        raise DegeneratePair("x == y has no direction")
    unit = [v / norm for v in diff]
    quantized = [round(v / DIRECTION_RESOLUTION) for v in unit]
    if antipodal:
        for q in quantized:
            if q != 0:
                if q < 0:
                    quantized = [-w for w in quantized]
                break
    rep = tuple(q * DIRECTION_RESOLUTION for q in quantized)
    return DirectionKey(rep=rep, antipodal_identified=antipodal, exact=False)


def slope_of_pair(x: Sequence, y: Sequence) -> SlopeVector:
    """Slopes ((x_i - y_i) / (x_d - y_d)) for i < d; symmetric under swap."""
    mode = _check_pair(x, y)
    d = len(x)
    if mode == "exact":
        dx = [Fraction(a) - Fraction(b) for a, b in zip(x, y)]
    else:
        dx = [float(a) - float(b) for a, b in zip(x, y)]
    if dx[d - 1] == 0:
        raise VerticalPair("equal final coordinates have no slope vector")
    return SlopeVector(entries=tuple(v / dx[d - 1] for v in dx[: d - 1]))


def collinearity_rank(ps: PointSet) -> int:
    """Dimension of the affine hull of the point set.

    Exact sets use rational elimination, so the answer is exact; float sets
    use an SVD with relative tolerance 1e-9.
    """
    n = len(ps)
    if n <= 1:
        return 0
    if ps.mode == "exact":
        base = ps.points[0]
        basis: list[list[Fraction]] = []
        pivots: list[int] = []
        for p in ps.points[1:]:
            v = [a - b for a, b in zip(p, base)]
            for row, piv in zip(basis, pivots):
                if v[piv] != 0:
                    factor = v[piv] / row[piv]
                    v = [a - factor * b for a, b in zip(v, row)]
            piv = next((i for i, a in enumerate(v) if a != 0), None)
            if piv is not None:
                basis.append(v)
                pivots.append(piv)
                if len(basis) == ps.dimension:
                    break
        return len(basis)
    arr = ps.as_array()
    diffs = arr[1:] - arr[0]
    sv = np.linalg.svd(diffs, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > 1e-9 * sv[0]))


# --- point set files -------------------------------------------------------
#
# Line 1: "d n mode"; then n lines of d whitespace separated coordinates.
# Exact mode writes num/den tokens and round trips bit exactly.


def write_point_set(ps: PointSet, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{ps.dimension} {len(ps)} {ps.mode}\n")
        for p in ps.points:
            if ps.mode == "exact":
                fh.write(" ".join(f"{c.numerator}/{c.denominator}" for c in p))
            else:
                fh.write(" ".join(repr(c) for c in p))
            fh.write("\n")


def read_point_set(path) -> PointSet:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise FormatError("header must be 'd n mode'")
        try:
            dimension, count = int(header[0]), int(header[1])
        except ValueError as exc:
            raise FormatError(f"bad header counts: {header[:2]}") from exc
        mode = header[2]
        if mode not in ("exact", "float"):
            raise FormatError(f"unknown mode {mode!r}")
        rows = []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            tokens = line.split()
            if len(tokens) != dimension:
                raise FormatError(f"line {lineno}: expected {dimension} coordinates")
            try:
                if mode == "exact":
                    rows.append(tuple(Fraction(t) for t in tokens))
                else:
                    rows.append(tuple(float(t) for t in tokens))
            except ValueError as exc:
                raise FormatError(f"line {lineno}: bad token") from exc
        if len(rows) != count:
            raise FormatError(f"expected {count} points, found {len(rows)}")
    return PointSet.from_points(rows, mode=mode)
