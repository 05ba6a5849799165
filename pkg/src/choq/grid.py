"""Dyadic grids on the unit square.

The grid at level ``L`` tiles ``[0,1)^2`` with ``2^L x 2^L`` half-open square
cells of width ``2^-L``.  Everything downstream (masks, sampled functions,
contents, operators) lives on these grids and samples at cell centers.

Array convention: a grid array ``a`` has shape ``(n, n)`` with ``a[i, j]``
holding the cell whose center is ``((i + 0.5) * h, (j + 0.5) * h)``,
``h = 2^-L``.  Row-major iteration therefore runs ``i`` (the x index) in the
outer loop.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, ParameterError

MAX_LEVEL = 12


@dataclass(frozen=True)
class DyadicGrid:
    """Uniform dyadic grid of ``2^level x 2^level`` cells tiling ``[0,1)^2``."""

    level: int

    def __post_init__(self) -> None:
        if not isinstance(self.level, int) or isinstance(self.level, bool):
            raise ParameterError(f"grid level must be an int, got {self.level!r}")
        if not 1 <= self.level <= MAX_LEVEL:
            raise ParameterError(
                f"grid level must be in [1, {MAX_LEVEL}], got {self.level}"
            )

    @property
    def n(self) -> int:
        """Cells per side."""
        return 1 << self.level

    @property
    def cell_width(self) -> float:
        return 2.0 ** -self.level

    @property
    def cell_area(self) -> float:
        return 4.0 ** -self.level

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Cell-center coordinates as broadcastable ``(n,1)`` / ``(1,n)`` arrays."""
        h = self.cell_width
        c = (np.arange(self.n) + 0.5) * h
        return c[:, None], c[None, :]


def build_grid(level: int) -> DyadicGrid:
    """Construct the dyadic grid at ``level`` (1 to 12)."""
    return DyadicGrid(level)


@dataclass(frozen=True, eq=False)
class DyadicMask:
    """A subset of grid cells, ``bits[i, j]`` true when cell ``(i, j)`` is in the set."""

    grid: DyadicGrid
    bits: np.ndarray

    def __post_init__(self) -> None:
        bits = np.ascontiguousarray(self.bits, dtype=bool)
        n = self.grid.n
        if bits.shape != (n, n):
            raise ParameterError(
                f"mask shape {bits.shape} does not match grid shape {(n, n)}"
            )
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def empty(cls, grid: DyadicGrid) -> "DyadicMask":
        return cls(grid, np.zeros((grid.n, grid.n), dtype=bool))

    @classmethod
    def full(cls, grid: DyadicGrid) -> "DyadicMask":
        return cls(grid, np.ones((grid.n, grid.n), dtype=bool))

    @property
    def count(self) -> int:
        return int(self.bits.sum())

    @property
    def is_empty(self) -> bool:
        return not self.bits.any()

    def union(self, other: "DyadicMask") -> "DyadicMask":
        self._check_same_grid(other)
        return DyadicMask(self.grid, self.bits | other.bits)

    def intersection(self, other: "DyadicMask") -> "DyadicMask":
        self._check_same_grid(other)
        return DyadicMask(self.grid, self.bits & other.bits)

    def difference(self, other: "DyadicMask") -> "DyadicMask":
        self._check_same_grid(other)
        return DyadicMask(self.grid, self.bits & ~other.bits)

    def subset_of(self, other: "DyadicMask") -> bool:
        self._check_same_grid(other)
        return bool(np.all(~self.bits | other.bits))

    def _check_same_grid(self, other: "DyadicMask") -> None:
        if self.grid != other.grid:
            raise ParameterError(
                f"mask grids differ: level {self.grid.level} vs {other.grid.level}"
            )


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A function sampled at cell centers, optionally with analytic |gradient|."""

    grid: DyadicGrid
    values: np.ndarray
    gradmag: np.ndarray | None = None

    def __post_init__(self) -> None:
        n = self.grid.n
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.shape != (n, n):
            raise ParameterError(
                f"values shape {values.shape} does not match grid shape {(n, n)}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.gradmag is not None:
            gm = np.ascontiguousarray(self.gradmag, dtype=np.float64)
            if gm.shape != (n, n):
                raise ParameterError(
                    f"gradmag shape {gm.shape} does not match grid shape {(n, n)}"
                )
            with np.errstate(invalid="ignore"):
                if np.any(gm < 0):
                    raise InputError("gradmag must be non-negative everywhere")
            gm.setflags(write=False)
            object.__setattr__(self, "gradmag", gm)


# ---------------------------------------------------------------------------
# Shapes and rasterization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ball:
    """Open euclidean disk ``{|x - center| < radius}``."""

    center: tuple[float, float]
    radius: float


@dataclass(frozen=True)
class Polygon:
    """Simple polygon given by its vertex loop (membership via even-odd rule)."""

    vertices: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class Difference:
    """Set difference ``outer \\ inner``."""

    outer: "Shape"
    inner: "Shape"


Shape = Ball | Polygon | Difference


def _validate_shape(shape: Shape) -> None:
    if isinstance(shape, Ball):
        cx, cy = shape.center
        r = shape.radius
        if not (math.isfinite(cx) and math.isfinite(cy) and math.isfinite(r)):
            raise ParameterError("ball center and radius must be finite")
        if r < 0:
            raise ParameterError(f"ball radius must be >= 0, got {r}")
        if cx - r < 0 or cx + r > 1 or cy - r < 0 or cy + r > 1:
            raise ParameterError(
                f"ball(center=({cx}, {cy}), radius={r}) escapes the unit square"
            )
    elif isinstance(shape, Polygon):
        verts = shape.vertices
        if len(verts) < 3:
            raise ParameterError("polygon needs at least 3 vertices")
        for x, y in verts:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ParameterError("polygon vertices must be finite")
            if not (0 <= x <= 1 and 0 <= y <= 1):
                raise ParameterError(
                    f"polygon vertex ({x}, {y}) escapes the unit square"
                )
    elif isinstance(shape, Difference):
        _validate_shape(shape.outer)
        _validate_shape(shape.inner)
    else:
        raise ParameterError(f"unknown shape {shape!r}")


def _contains(shape: Shape, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if isinstance(shape, Ball):
        cx, cy = shape.center
        return (x - cx) ** 2 + (y - cy) ** 2 < shape.radius**2
    if isinstance(shape, Polygon):
        verts = shape.vertices
        inside = np.zeros(np.broadcast_shapes(x.shape, y.shape), dtype=bool)
        m = len(verts)
        for k in range(m):
            x1, y1 = verts[k]
            x2, y2 = verts[(k + 1) % m]
            if y1 == y2:
                continue
            crosses = (y1 > y) != (y2 > y)
            xi = (x2 - x1) * (y - y1) / (y2 - y1) + x1
            inside ^= crosses & (x < xi)
        return inside
    if isinstance(shape, Difference):
        return _contains(shape.outer, x, y) & ~_contains(shape.inner, x, y)
    raise ParameterError(f"unknown shape {shape!r}")


def rasterize_shape(grid: DyadicGrid, shape: Shape) -> DyadicMask:
    """Rasterize a shape: a cell is set iff its center lies in the shape."""
    _validate_shape(shape)
    x, y = grid.centers()
    return DyadicMask(grid, _contains(shape, x, y))


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------


def fd_gradmag(f: GridFunction, domain: DyadicMask) -> np.ndarray:
    """Finite-difference gradient magnitude on the domain.

    Uses centered differences where both axis neighbors are domain cells and
    one-sided differences at domain boundary cells; cells with no domain
    neighbor along an axis get derivative 0 along it.  Off-domain entries of
    the result are 0.
    """
    if f.grid != domain.grid:
        raise ParameterError("function and domain live on different grids")
    v = f.values
    b = domain.bits
    h = f.grid.cell_width
    out_dx = np.zeros_like(v)
    out_dy = np.zeros_like(v)
    for axis, out in ((0, out_dx), (1, out_dy)):
        has_fwd = np.zeros_like(b)
        has_bwd = np.zeros_like(b)
        v_fwd = np.zeros_like(v)
        v_bwd = np.zeros_like(v)
        if axis == 0:
            has_fwd[:-1, :] = b[1:, :]
            has_bwd[1:, :] = b[:-1, :]
            v_fwd[:-1, :] = v[1:, :]
            v_bwd[1:, :] = v[:-1, :]
        else:
            has_fwd[:, :-1] = b[:, 1:]
            has_bwd[:, 1:] = b[:, :-1]
            v_fwd[:, :-1] = v[:, 1:]
            v_bwd[:, 1:] = v[:, :-1]
        centered = has_fwd & has_bwd
        fwd_only = has_fwd & ~has_bwd
        bwd_only = has_bwd & ~has_fwd
        out[centered] = (v_fwd[centered] - v_bwd[centered]) / (2.0 * h)
        out[fwd_only] = (v_fwd[fwd_only] - v[fwd_only]) / h
        out[bwd_only] = (v[bwd_only] - v_bwd[bwd_only]) / h
    mag = np.hypot(out_dx, out_dy)
    mag[~b] = 0.0
    return mag


# ---------------------------------------------------------------------------
# External formats
# ---------------------------------------------------------------------------


def write_pbm(mask: DyadicMask, path: str) -> None:
    """Write a mask as a plain (P1) PBM bitmap, row-major."""
    n = mask.grid.n
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"P1\n{n} {n}\n")
        for i in range(n):
            fh.write(" ".join("1" if v else "0" for v in mask.bits[i]) + "\n")


def read_pbm(path: str) -> DyadicMask:
    """Read a plain (P1) PBM bitmap written by :func:`write_pbm`."""
    with open(path, "r", encoding="ascii") as fh:
        tokens: list[str] = []
        for line in fh:
            line = line.split("#", 1)[0]
            tokens.extend(line.split())
    if not tokens or tokens[0] != "P1":
        raise InputError(f"{path}: not a plain PBM (P1) file")
    if len(tokens) < 3:
        raise InputError(f"{path}: truncated PBM header")
    w, h = int(tokens[1]), int(tokens[2])
    if w != h or w < 2 or (w & (w - 1)) != 0:
        raise InputError(f"{path}: size {w}x{h} is not a square power of two")
    level = w.bit_length() - 1
    if level > MAX_LEVEL:
        raise InputError(f"{path}: size {w} exceeds the maximum grid level")
    data = tokens[3:]
    if len(data) != w * h:
        raise InputError(f"{path}: expected {w * h} pixels, found {len(data)}")
    flat = np.array([int(t) for t in data], dtype=np.int64)
    if np.any((flat != 0) & (flat != 1)):
        raise InputError(f"{path}: PBM pixels must be 0 or 1")
    return DyadicMask(DyadicGrid(level), flat.reshape(w, h).astype(bool))


def write_function_csv(f: GridFunction, path: str) -> None:
    """Write a grid function as CSV with header ``i,j,value,gradmag``, row-major."""
    n = f.grid.n
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(["i", "j", "value", "gradmag"])
        for i in range(n):
            for j in range(n):
                gm = "" if f.gradmag is None else repr(float(f.gradmag[i, j]))
                writer.writerow([i, j, repr(float(f.values[i, j])), gm])
