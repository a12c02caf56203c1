"""Time grids, discretized paths, media vectors, and particle clouds.

Paths live on a shared uniform grid spanning ``[-tau, T]``; continuous-time
objects are represented by their node values with linear interpolation in
between.  All types are immutable after construction and safe to share across
parallel workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    GridMismatch,
    NonDivisibleStep,
    NonPositive,
    OutOfRange,
    SizeMismatch,
)

# Slack used when snapping a continuous time to a node index.
_TIME_SLACK = 1e-12


def _check_integral(value: float, name: str) -> int:
    k = round(value)
    if abs(value - k) > 1e-9 * max(1.0, abs(value)):
        raise NonDivisibleStep(f"{name} is not an integer multiple of dt ({value})")
    return int(k)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform discretization of ``[-tau, T]`` with step ``dt``.

    ``n_past`` is the index of time zero; ``n_steps`` the number of steps on
    ``[0, T]``.  Node ``k`` sits at ``(k - n_past) * dt``.
    """

    tau: float
    T: float
    dt: float
    n_past: int = field(init=False)
    n_steps: int = field(init=False)

    def __post_init__(self):
        if self.T <= 0 or self.dt <= 0:
            raise NonPositive("T and dt must be positive")
        if self.tau < 0:
            raise NonPositive("tau must be nonnegative")
        object.__setattr__(self, "n_past", _check_integral(self.tau / self.dt, "tau/dt"))
        object.__setattr__(self, "n_steps", _check_integral(self.T / self.dt, "T/dt"))

    @property
    def n_nodes(self) -> int:
        return self.n_past + self.n_steps + 1

    @property
    def nodes(self) -> np.ndarray:
        out = (np.arange(self.n_nodes) - self.n_past) * self.dt
        out.flags.writeable = False
        return out

    def time_of(self, index: int) -> float:
        return (index - self.n_past) * self.dt

    def index_of_time(self, t: float) -> int:
        """Largest node index whose node value is ``<= t`` (with slack)."""
        if t < -self.tau - _TIME_SLACK or t > self.T + _TIME_SLACK:
            raise OutOfRange(f"time {t} outside [-{self.tau}, {self.T}]")
        k = int(np.floor((t + self.tau) / self.dt + _TIME_SLACK))
        return min(max(k, 0), self.n_nodes - 1)

    def window(self, a: float, b: float) -> tuple[int, int]:
        """Inclusive node-index window covering ``[a, b]``."""
        if b < a:
            raise OutOfRange(f"empty window [{a}, {b}]")
        i1 = self.index_of_time(b)
        # first node >= a, with the same slack convention
        i0 = int(np.ceil((a + self.tau) / self.dt - _TIME_SLACK))
        i0 = min(max(i0, 0), self.n_nodes - 1)
        return i0, i1


def make_time_grid(tau: float, T: float, dt: float) -> TimeGrid:
    """Build the shared clock of all objects; rejects non-divisible steps."""
    return TimeGrid(float(tau), float(T), float(dt))


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SamplePath:
    """One trajectory on the grid: a value per node, all finite."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        values = _readonly(np.asarray(self.values))
        if values.ndim != 1 or values.size != self.grid.n_nodes:
            raise GridMismatch("values length must equal the node count")
        if not np.all(np.isfinite(values)):
            raise ValueError("path values must be finite")
        object.__setattr__(self, "values", values)

    def __call__(self, t: float) -> float:
        """Linear interpolation at an off-node time."""
        g = self.grid
        pos = (t + g.tau) / g.dt
        if pos < -_TIME_SLACK or pos > g.n_nodes - 1 + _TIME_SLACK:
            raise OutOfRange(f"time {t} outside the grid span")
        k = int(np.clip(np.floor(pos), 0, g.n_nodes - 2))
        frac = np.clip(pos - k, 0.0, 1.0)
        return float(self.values[k] * (1 - frac) + self.values[k + 1] * frac)


@dataclass(frozen=True)
class MediaSample:
    """One random-media vector in R^d."""

    coords: np.ndarray

    def __post_init__(self):
        coords = _readonly(np.atleast_1d(np.asarray(self.coords, dtype=np.float64)))
        if coords.ndim != 1 or coords.size < 1:
            raise DimensionMismatch("media must be a nonempty 1-d vector")
        if not np.all(np.isfinite(coords)):
            raise ValueError("media coordinates must be finite")
        object.__setattr__(self, "coords", coords)

    @property
    def d(self) -> int:
        return self.coords.size


@dataclass(frozen=True)
class ParticleCloud:
    """N (path, media) pairs on a shared grid.

    The canonical storage is columnar: ``paths`` of shape (n, n_nodes) and
    ``media`` of shape (n, d).  This is the discrete representation of an
    empirical measure over (path, media) pairs.
    """

    grid: TimeGrid
    paths: np.ndarray
    media: np.ndarray

    def __post_init__(self):
        paths = _readonly(np.asarray(self.paths))
        media = _readonly(np.asarray(self.media))
        if paths.ndim != 2 or paths.shape[0] == 0:
            raise SizeMismatch("cloud must hold at least one path")
        if paths.shape[1] != self.grid.n_nodes:
            raise GridMismatch("paths do not match the grid's node count")
        if media.ndim != 2 or media.shape[0] != paths.shape[0] or media.shape[1] < 1:
            raise SizeMismatch("media must be (n, d) with the same n as paths")
        if not (np.all(np.isfinite(paths)) and np.all(np.isfinite(media))):
            raise ValueError("cloud entries must be finite")
        object.__setattr__(self, "paths", paths)
        object.__setattr__(self, "media", media)

    def __len__(self) -> int:
        return self.paths.shape[0]

    @property
    def d(self) -> int:
        return self.media.shape[1]

    @property
    def particles(self) -> list[tuple[SamplePath, MediaSample]]:
        return [
            (SamplePath(self.grid, self.paths[i]), MediaSample(self.media[i]))
            for i in range(len(self))
        ]

    def particle(self, i: int) -> tuple[SamplePath, MediaSample]:
        return SamplePath(self.grid, self.paths[i]), MediaSample(self.media[i])

    def subsample(self, k: int, rng: np.random.Generator) -> "ParticleCloud":
        """Uniform subcloud of size ``min(k, n)`` drawn without replacement."""
        n = len(self)
        if k >= n:
            return self
        idx = np.sort(rng.choice(n, size=k, replace=False))
        return ParticleCloud(self.grid, self.paths[idx], self.media[idx])


def from_particles(particles: list[tuple[SamplePath, MediaSample]]) -> ParticleCloud:
    """Assemble a cloud from (path, media) pairs sharing one grid."""
    if not particles:
        raise SizeMismatch("cloud must hold at least one path")
    grid = particles[0][0].grid
    d = particles[0][1].d
    for p, m in particles:
        if p.grid != grid:
            raise GridMismatch("all paths must share the same grid")
        if m.d != d:
            raise DimensionMismatch("all media must share the same dimension")
    paths = np.stack([p.values for p, _ in particles])
    media = np.stack([m.coords for _, m in particles])
    return ParticleCloud(grid, paths, media)


def restrict_index(grid: TimeGrid, t: float) -> int:
    """Node index realizing the projection to ``[-tau, t]`` (floor semantics)."""
    return grid.index_of_time(t)


def _interp_positions(grid: TimeGrid, times: np.ndarray):
    pos = (np.asarray(times, dtype=np.float64) + grid.tau) / grid.dt
    k = np.clip(np.floor(pos + _TIME_SLACK).astype(np.int64), 0, grid.n_nodes - 2)
    frac = np.clip(pos - k, 0.0, 1.0)
    return k, frac


def interp_cloud_at(paths: np.ndarray, grid: TimeGrid, times: np.ndarray) -> np.ndarray:
    """Values of cloud path ``j`` at ``times[..., j]`` by linear interpolation.

    ``times`` has shape (..., n) matching the cloud's n rows.
    """
    k, frac = _interp_positions(grid, times)
    cols = np.arange(paths.shape[0])
    v0 = paths[cols, k]
    v1 = paths[cols, k + 1]
    return v0 * (1.0 - frac) + v1 * frac


def interp_rows_at(paths: np.ndarray, grid: TimeGrid, times: np.ndarray) -> np.ndarray:
    """Value of row ``i`` at ``times[i]`` by linear interpolation."""
    k, frac = _interp_positions(grid, times)
    rows = np.arange(paths.shape[0])
    v0 = paths[rows, k]
    v1 = paths[rows, k + 1]
    return v0 * (1.0 - frac) + v1 * frac


def sup_norm_diff(x: SamplePath, y: SamplePath, a: float, b: float) -> float:
    """Max of ``|x - y|`` over grid nodes in ``[a, b]``."""
    if x.grid != y.grid:
        raise GridMismatch("paths live on different grids")
    i0, i1 = x.grid.window(a, b)
    return float(np.max(np.abs(x.values[i0 : i1 + 1] - y.values[i0 : i1 + 1])))
