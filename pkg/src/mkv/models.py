"""Model-authoring contract: interaction drifts, diffusion coefficients, and
initial/media sampling laws, plus the built-in models.

A model bundles the drift ``f(t, path_up_to_t, cloud, omega)``, the diffusion
``h(omega)``, the initial-segment law on ``[-tau, 0]``, the media law on R^d,
and declared constants (sup and Lipschitz bounds of ``f``, lower/upper bounds
of ``h``).  The declared constants are assumptions, audited empirically, not
derived from the callables.

Drift evaluators are pure and batched: ``prepare`` precomputes whatever
depends only on the media vectors, ``eval_batch`` evaluates a whole batch of
particles against a frozen cloud at one time.  Evaluations at time ``t``
depend on paths only through nodes ``<= t`` (with linear interpolation at
off-node delayed times), which realizes predictability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundViolation, DelayOutOfRange, GridMismatch, OutOfRange
from .grid import (
    MediaSample,
    ParticleCloud,
    SamplePath,
    TimeGrid,
    interp_cloud_at,
    interp_rows_at,
    sup_norm_diff,
)
from .metrics import MetricKind, bl_distance_exact
from .rng import INITIAL, MEDIA, PROBE, RngStream, as_stream

_BATCH = 4096


# ---------------------------------------------------------------------------
# scalar expression set (declarative config surface for F, g, phi, delays)


class ScalarExpr:
    """A vectorized scalar function of one real variable."""

    form = "base"

    def __call__(self, u):  # pragma: no cover - abstract
        raise NotImplementedError

    def lip_bound(self) -> float:  # pragma: no cover - abstract
        raise NotImplementedError

    def to_dict(self) -> dict:  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True)
class Const(ScalarExpr):
    value: float
    form = "constant"

    def __call__(self, u):
        return np.full_like(np.asarray(u, dtype=np.float64), self.value)

    def lip_bound(self):
        return 0.0

    def to_dict(self):
        return {"form": "constant", "value": self.value}


@dataclass(frozen=True)
class Affine(ScalarExpr):
    a: float
    b: float = 0.0
    form = "affine"

    def __call__(self, u):
        return self.a * np.asarray(u, dtype=np.float64) + self.b

    def lip_bound(self):
        return abs(self.a)

    def to_dict(self):
        return {"form": "affine", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class Sin(ScalarExpr):
    amplitude: float = 1.0
    form = "sin"

    def __call__(self, u):
        return self.amplitude * np.sin(u)

    def lip_bound(self):
        return abs(self.amplitude)

    def to_dict(self):
        return {"form": "sin", "amplitude": self.amplitude}


@dataclass(frozen=True)
class Cos(ScalarExpr):
    amplitude: float = 1.0
    form = "cos"

    def __call__(self, u):
        return self.amplitude * np.cos(u)

    def lip_bound(self):
        return abs(self.amplitude)

    def to_dict(self):
        return {"form": "cos", "amplitude": self.amplitude}


@dataclass(frozen=True)
class ExpDecay(ScalarExpr):
    rate: float = 1.0
    scale: float = 1.0
    form = "exp_decay"

    def __call__(self, u):
        return self.scale * np.exp(-self.rate * np.asarray(u, dtype=np.float64))

    def lip_bound(self):
        return abs(self.scale * self.rate)

    def to_dict(self):
        return {"form": "exp_decay", "rate": self.rate, "scale": self.scale}


@dataclass(frozen=True)
class Clip(ScalarExpr):
    inner: ScalarExpr
    lo: float
    hi: float
    form = "clip"

    def __call__(self, u):
        return np.clip(self.inner(u), self.lo, self.hi)

    def lip_bound(self):
        return self.inner.lip_bound()

    def to_dict(self):
        return {"form": "clip", "lo": self.lo, "hi": self.hi, "inner": self.inner.to_dict()}


_EXPR_FORMS = {"constant", "affine", "sin", "cos", "exp_decay", "clip"}


def parse_expr(spec: dict) -> ScalarExpr:
    """Build a :class:`ScalarExpr` from its dict form."""
    form = spec.get("form")
    if form == "constant":
        return Const(float(spec["value"]))
    if form == "affine":
        return Affine(float(spec.get("a", 1.0)), float(spec.get("b", 0.0)))
    if form == "sin":
        return Sin(float(spec.get("amplitude", 1.0)))
    if form == "cos":
        return Cos(float(spec.get("amplitude", 1.0)))
    if form == "exp_decay":
        return ExpDecay(float(spec.get("rate", 1.0)), float(spec.get("scale", 1.0)))
    if form == "clip":
        return Clip(parse_expr(spec["inner"]), float(spec["lo"]), float(spec["hi"]))
    raise ValueError(f"unknown expression form {form!r}; expected one of {sorted(_EXPR_FORMS)}")


# ---------------------------------------------------------------------------
# initial-segment and media laws


class InitLaw:
    """Generator of initial segments on ``[-tau, 0]``."""

    def sample(self, n: int, grid: TimeGrid, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantInit(InitLaw):
    value: float = 0.0

    def sample(self, n, grid, rng):
        return np.full((n, grid.n_past + 1), self.value)

    def to_dict(self):
        return {"kind": "constant", "value": self.value}


@dataclass(frozen=True)
class UniformLevelInit(InitLaw):
    """Constant level drawn uniformly from [low, high] per particle."""

    low: float = 0.0
    high: float = 1.0

    def sample(self, n, grid, rng):
        levels = rng.uniform(self.low, self.high, size=n)
        return np.repeat(levels[:, None], grid.n_past + 1, axis=1)

    def to_dict(self):
        return {"kind": "uniform_level", "low": self.low, "high": self.high}


@dataclass(frozen=True)
class BrownianSegmentInit(InitLaw):
    """Frozen Brownian segment started at ``level`` at time ``-tau`` and
    scaled by ``sigma0``."""

    sigma0: float = 1.0
    level: float = 0.0

    def sample(self, n, grid, rng):
        m = grid.n_past + 1
        if m == 1:
            return np.full((n, 1), self.level)
        inc = rng.normal(scale=self.sigma0 * math.sqrt(grid.dt), size=(n, m - 1))
        out = np.empty((n, m))
        out[:, 0] = self.level
        np.cumsum(inc, axis=1, out=out[:, 1:])
        out[:, 1:] += self.level
        return out

    def to_dict(self):
        return {"kind": "brownian_segment", "sigma0": self.sigma0, "level": self.level}


class MediaLaw:
    """Generator of media vectors in R^d.  All built-ins have compact support."""

    d: int = 1

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def sup_abs_first(self) -> float:
        """Bound on |omega_1|, used for declared drift bounds."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class PointMedia(MediaLaw):
    value: tuple[float, ...] = (0.0,)

    @property
    def d(self):
        return len(self.value)

    def sample(self, n, rng):
        return np.tile(np.asarray(self.value, dtype=np.float64), (n, 1))

    def sup_abs_first(self):
        return abs(self.value[0])

    def to_dict(self):
        return {"kind": "point", "value": list(self.value)}


@dataclass(frozen=True)
class BoxUniformMedia(MediaLaw):
    low: tuple[float, ...] = (-1.0,)
    high: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        if len(self.low) != len(self.high):
            raise ValueError("low/high must have the same length")

    @property
    def d(self):
        return len(self.low)

    def sample(self, n, rng):
        lo = np.asarray(self.low, dtype=np.float64)
        hi = np.asarray(self.high, dtype=np.float64)
        return rng.uniform(size=(n, self.d)) * (hi - lo) + lo

    def sup_abs_first(self):
        return max(abs(self.low[0]), abs(self.high[0]))

    def to_dict(self):
        return {"kind": "box_uniform", "low": list(self.low), "high": list(self.high)}


@dataclass(frozen=True)
class DiscreteMedia(MediaLaw):
    """Uniform (or weighted) draw from a finite set of media vectors."""

    atoms: tuple[tuple[float, ...], ...] = ((0.0,),)
    probs: tuple[float, ...] | None = None

    @property
    def d(self):
        return len(self.atoms[0])

    def sample(self, n, rng):
        atoms = np.asarray(self.atoms, dtype=np.float64)
        idx = rng.choice(len(self.atoms), size=n, p=self.probs)
        return atoms[idx]

    def sup_abs_first(self):
        return max(abs(a[0]) for a in self.atoms)

    def to_dict(self):
        out = {"kind": "discrete", "atoms": [list(a) for a in self.atoms]}
        if self.probs is not None:
            out["probs"] = list(self.probs)
        return out


# ---------------------------------------------------------------------------
# delays


@dataclass(frozen=True)
class DelaySpec:
    """Media-dependent delay ``tau_bar(omega, sigma)`` with values in [0, cap].

    ``constant`` ignores the media; ``scaled_media_distance`` is
    ``clip(scale * |omega - sigma| + offset, 0, cap)`` with Lipschitz constant
    ``scale``.
    """

    form: str = "constant"
    value: float = 0.0
    scale: float = 0.0
    offset: float = 0.0
    cap: float = 0.0

    @property
    def K(self) -> float:
        return self.scale if self.form == "scaled_media_distance" else 0.0

    @property
    def is_constant(self) -> bool:
        return self.form == "constant"

    def pairwise(self, x_media: np.ndarray, cloud_media: np.ndarray) -> np.ndarray | float:
        if self.form == "constant":
            return self.value
        diff = x_media[:, None, :] - cloud_media[None, :, :]
        dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        return np.clip(self.scale * dist + self.offset, 0.0, self.cap)

    def validate(self, tau: float):
        hi = self.value if self.form == "constant" else self.cap
        lo = self.value if self.form == "constant" else min(0.0, self.offset)
        if lo < -1e-12 or hi > tau + 1e-12:
            raise DelayOutOfRange(f"delay range [{lo}, {hi}] exits [0, {tau}]")

    def to_dict(self):
        if self.form == "constant":
            return {"form": "constant", "value": self.value}
        return {
            "form": "scaled_media_distance",
            "scale": self.scale,
            "offset": self.offset,
            "cap": self.cap,
        }


# ---------------------------------------------------------------------------
# drift evaluators


class Drift:
    """Batched drift evaluator; subclasses are pure and stateless."""

    measure_free = False

    def prepare(self, x_media: np.ndarray, cloud_media: np.ndarray, grid: TimeGrid):
        return None

    def eval_batch(self, ctx, t: float, x_paths: np.ndarray, x_media: np.ndarray,
                   cloud_paths: np.ndarray, grid: TimeGrid) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantDrift(Drift):
    c: float = 0.0
    measure_free = True

    def eval_batch(self, ctx, t, x_paths, x_media, cloud_paths, grid):
        return np.full(x_paths.shape[0], self.c)


@dataclass(frozen=True)
class MediaDrift(Drift):
    """Pure media drift: ``f = coef * omega_1``."""

    coef: float = 1.0
    measure_free = True

    def eval_batch(self, ctx, t, x_paths, x_media, cloud_paths, grid):
        return self.coef * x_media[:, 0]


@dataclass(frozen=True)
class KuramotoParams(Drift):
    """Delayed mean-field coupling
    ``f = (1/n) sum_j coupling * shape(x(t) - z_j(t - delay(omega, sigma_j)))
    + media_coef * omega_1``.
    """

    coupling: float = 0.5
    shape: ScalarExpr = Sin()
    media_coef: float = 1.0
    delay: DelaySpec = DelaySpec()

    def prepare(self, x_media, cloud_media, grid):
        delays = self.delay.pairwise(x_media, cloud_media)
        if not np.isscalar(delays):
            if delays.min() < -1e-12 or delays.max() > grid.tau + 1e-12:
                raise DelayOutOfRange("delay evaluation exits [0, tau]")
        elif delays < -1e-12 or delays > grid.tau + 1e-12:
            raise DelayOutOfRange("delay evaluation exits [0, tau]")
        return delays

    def eval_batch(self, ctx, t, x_paths, x_media, cloud_paths, grid):
        if ctx is None:
            raise GridMismatch("Kuramoto drift requires prepare() before eval_batch")
        delays = ctx
        x_t = interp_rows_at(x_paths, grid, np.full(x_paths.shape[0], t))
        out = np.empty(x_paths.shape[0])
        n = cloud_paths.shape[0]
        if np.isscalar(delays):
            z = interp_cloud_at(cloud_paths, grid, np.full(n, t - delays))
            for s in range(0, x_t.size, _BATCH):
                blk = x_t[s : s + _BATCH]
                out[s : s + _BATCH] = np.mean(self.shape(blk[:, None] - z[None, :]), axis=1)
        else:
            for s in range(0, x_t.size, _BATCH):
                blk = x_t[s : s + _BATCH]
                z = interp_cloud_at(cloud_paths, grid, t - delays[s : s + _BATCH])
                out[s : s + _BATCH] = np.mean(self.shape(blk[:, None] - z), axis=1)
        return self.coupling * out + self.media_coef * x_media[:, 0]


@dataclass(frozen=True)
class GlParams(Drift):
    """Memory-kernel drift
    ``f = (1/n) sum_j int_{t - window(omega)}^{t} kernel(t - s)
    * kernel_media(sigma_j1) * rate(z_j(s)) ds``
    with trapezoidal quadrature on grid nodes and interpolated endpoints.
    The rate is clipped into [0, 1].
    """

    kernel: ScalarExpr = Const(1.0)
    kernel_media: ScalarExpr = Const(1.0)
    rate: ScalarExpr = Clip(Affine(1.0, 0.0), 0.0, 1.0)
    window: ScalarExpr = Const(0.1)

    def prepare(self, x_media, cloud_media, grid):
        windows = np.clip(self.window(x_media[:, 0]), 0.0, grid.tau)
        gm = self.kernel_media(cloud_media[:, 0])
        return windows, gm

    def eval_batch(self, ctx, t, x_paths, x_media, cloud_paths, grid):
        windows, gm = ctx
        k_t = grid.index_of_time(t)
        # mean over atoms of kernel_media * rate, on every node <= t plus the
        # (possibly off-node) endpoint t itself
        times = grid.nodes[: k_t + 1]
        phi = np.clip(self.rate(cloud_paths[:, : k_t + 1]), 0.0, 1.0)
        a_vals = (gm[:, None] * phi).mean(axis=0)
        if t > times[-1] + 1e-12:
            z_t = interp_cloud_at(cloud_paths, grid, np.full(cloud_paths.shape[0], t))
            a_t = float(np.mean(gm * np.clip(self.rate(z_t), 0.0, 1.0)))
            times = np.concatenate([times, [t]])
            a_vals = np.concatenate([a_vals, [a_t]])
        if times.size == 1:
            return np.zeros(x_paths.shape[0])
        w_vals = self.kernel(t - times) * a_vals
        # cumulative trapezoid of the node-linear interpolant of w
        seg = 0.5 * (w_vals[1:] + w_vals[:-1]) * np.diff(times)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        last = times.size - 1

        def _cum_at(u):
            # integral of the interpolant from times[0] up to time u
            u = np.clip(u, times[0], times[-1])
            k = np.clip(np.searchsorted(times, u, side="right") - 1, 0, last - 1)
            width = times[k + 1] - times[k]
            frac = np.clip((u - times[k]) / width, 0.0, 1.0)
            w_u = w_vals[k] * (1 - frac) + w_vals[k + 1] * frac
            return cum[k] + 0.5 * (w_vals[k] + w_u) * (u - times[k])

        lo = np.maximum(t - windows, -grid.tau)
        return _cum_at(np.full_like(lo, times[-1])) - _cum_at(lo)


# ---------------------------------------------------------------------------
# diffusion coefficients


@dataclass(frozen=True)
class Diffusion:
    """``h(omega) = clip(h0 + slope * |omega|, h_min, h_max)``; the default is
    the constant ``h0``."""

    h0: float = 1.0
    slope: float = 0.0
    h_min: float = 0.0
    h_max: float = float("inf")

    def eval(self, media: np.ndarray) -> np.ndarray:
        if self.slope == 0.0:
            return np.full(media.shape[0], self.h0)
        norms = np.sqrt(np.sum(media * media, axis=1))
        return np.clip(self.h0 + self.slope * norms, self.h_min, self.h_max)

    def __call__(self, omega: MediaSample) -> float:
        return float(self.eval(omega.coords[None, :])[0])

    def to_dict(self):
        out = {"h0": self.h0}
        if self.slope != 0.0:
            out.update({"slope": self.slope, "h_min": self.h_min, "h_max": self.h_max})
        return out


# ---------------------------------------------------------------------------
# the model bundle


@dataclass(frozen=True)
class Bounds:
    f_sup: float
    f_sl: float
    h_star: float
    h_sup: float


@dataclass(frozen=True)
class ModelSpec:
    name: str
    drift: Drift
    diffusion: Diffusion
    init_law: InitLaw
    media_law: MediaLaw
    bounds: Bounds
    metric_kind: MetricKind
    tau: float
    T: float

    @property
    def d(self) -> int:
        return self.media_law.d

    def grid_for(self, dt: float) -> TimeGrid:
        return TimeGrid(self.tau, self.T, dt)

    def check_grid(self, grid: TimeGrid):
        if abs(grid.tau - self.tau) > 1e-12 or abs(grid.T - self.T) > 1e-12:
            raise GridMismatch(
                f"grid span [-{grid.tau}, {grid.T}] does not match the model's "
                f"[-{self.tau}, {self.T}]"
            )


# ---------------------------------------------------------------------------
# spec-level operations


def eval_drift(model: ModelSpec, t: float, x: SamplePath, nu: ParticleCloud,
               omega: MediaSample, audit: bool = False) -> float:
    """One drift evaluation; with ``audit=True`` the declared sup bound is
    enforced."""
    if not -1e-12 <= t <= model.T + 1e-12:
        raise OutOfRange(f"drift time {t} outside [0, T]")
    if x.grid != nu.grid:
        raise GridMismatch("path and cloud live on different grids")
    xm = omega.coords[None, :]
    ctx = model.drift.prepare(xm, nu.media, x.grid)
    val = float(model.drift.eval_batch(ctx, t, x.values[None, :], xm, nu.paths, x.grid)[0])
    if audit and abs(val) > model.bounds.f_sup * (1 + 1e-9):
        raise BoundViolation(f"|f| = {abs(val)} exceeds the declared bound {model.bounds.f_sup}")
    return val


def kuramoto_drift(params: KuramotoParams, t: float, x: SamplePath,
                   nu: ParticleCloud, omega: MediaSample) -> float:
    xm = omega.coords[None, :]
    ctx = params.prepare(xm, nu.media, x.grid)
    return float(params.eval_batch(ctx, t, x.values[None, :], xm, nu.paths, x.grid)[0])


def gl_drift(params: GlParams, t: float, x: SamplePath, nu: ParticleCloud,
             omega: MediaSample) -> float:
    xm = omega.coords[None, :]
    ctx = params.prepare(xm, nu.media, x.grid)
    return float(params.eval_batch(ctx, t, x.values[None, :], xm, nu.paths, x.grid)[0])


def sample_initial(model: ModelSpec, rng: RngStream | int, grid: TimeGrid | None = None,
                   n: int = 1) -> np.ndarray:
    """Draw initial segments on ``[-tau, 0]``: array of node values, one row
    per particle (squeezed to 1-d when n == 1)."""
    grid = grid or model.grid_for(0.01)
    gen = as_stream(rng).with_(purpose=INITIAL).generator()
    out = model.init_law.sample(n, grid, gen)
    return out[0] if n == 1 else out


def sample_media(model: ModelSpec, rng: RngStream | int, n: int = 1):
    """Draw media vectors; a single :class:`MediaSample` when n == 1."""
    gen = as_stream(rng).with_(purpose=MEDIA).generator()
    out = model.media_law.sample(n, gen)
    return MediaSample(out[0]) if n == 1 else out


# ---------------------------------------------------------------------------
# empirical audit of the declared Lipschitz constant


@dataclass(frozen=True)
class AuditReport:
    max_ratio: float
    declared_f_sl: float
    n_probes: int
    violation: bool


def lipschitz_audit(model: ModelSpec, probes: int, rng: RngStream | int,
                    grid: TimeGrid | None = None, cloud_size: int = 16) -> AuditReport:
    """Empirical Lipschitz ratio of the drift over random probe pairs.

    Each probe draws two paths and two small clouds, evaluates the drift on
    both, and rates the difference against the path sup-distance plus the
    exact BL distance of the clouds (under the model's metric).  A violation
    is flagged when the worst ratio exceeds the declared constant by >5%.
    """
    from .simulate import simulate_reference  # local import to avoid a cycle

    if probes < 1:
        raise ValueError("probes must be at least 1")
    grid = grid or model.grid_for(0.05)
    base = as_stream(rng)
    gen = base.with_(purpose=PROBE).generator()
    max_ratio = 0.0
    for p in range(probes):
        sub = base.with_(particle=p)
        clouds = [
            simulate_reference(model, cloud_size, grid, sub.with_(replicate=r))
            for r in (0, 1)
        ]
        paths = simulate_reference(model, 2, grid, sub.with_(replicate=2))
        x, y = paths.particle(0)[0], paths.particle(1)[0]
        omega = MediaSample(model.media_law.sample(1, gen)[0])
        t = grid.time_of(int(gen.integers(grid.n_past, grid.n_nodes)))
        num = abs(
            eval_drift(model, t, x, clouds[0], omega)
            - eval_drift(model, t, y, clouds[1], omega)
        )
        den = sup_norm_diff(x, y, -grid.tau, t) + bl_distance_exact(
            clouds[0], clouds[1], t, model.metric_kind
        ).value
        if den > 1e-12:
            max_ratio = max(max_ratio, num / den)
    return AuditReport(
        max_ratio=max_ratio,
        declared_f_sl=model.bounds.f_sl,
        n_probes=probes,
        violation=max_ratio > model.bounds.f_sl * 1.05,
    )


# ---------------------------------------------------------------------------
# built-in model factories


def zero_model(tau: float = 0.0, T: float = 1.0, h: float = 1.0,
               init: InitLaw | None = None, media: MediaLaw | None = None) -> ModelSpec:
    """Driftless model; its law is the reference law."""
    return ModelSpec(
        name="zero",
        drift=ConstantDrift(0.0),
        diffusion=Diffusion(h),
        init_law=init or ConstantInit(0.0),
        media_law=media or PointMedia((0.0,)),
        bounds=Bounds(f_sup=0.0, f_sl=0.0, h_star=h, h_sup=h),
        metric_kind=MetricKind.sup_plus_euclid(),
        tau=tau,
        T=T,
    )


def constant_model(c: float = 0.5, tau: float = 0.0, T: float = 1.0, h: float = 1.0,
                   init: InitLaw | None = None, media: MediaLaw | None = None) -> ModelSpec:
    """Constant drift ``f = c``; every Girsanov object has a closed form."""
    return ModelSpec(
        name="constant",
        drift=ConstantDrift(c),
        diffusion=Diffusion(h),
        init_law=init or ConstantInit(0.0),
        media_law=media or PointMedia((0.0,)),
        bounds=Bounds(f_sup=abs(c), f_sl=0.0, h_star=h, h_sup=h),
        metric_kind=MetricKind.sup_plus_euclid(),
        tau=tau,
        T=T,
    )


def media_drift_model(coef: float = 1.0, tau: float = 0.0, T: float = 1.0, h: float = 1.0,
                      init: InitLaw | None = None, media: MediaLaw | None = None) -> ModelSpec:
    """Pure media drift ``f = coef * omega_1``; the fixed point is
    ``xi(0) + coef * omega_1 * t + h B(t)`` in closed form."""
    media = media or BoxUniformMedia((-1.0,), (1.0,))
    return ModelSpec(
        name="media",
        drift=MediaDrift(coef),
        diffusion=Diffusion(h),
        init_law=init or ConstantInit(0.0),
        media_law=media,
        bounds=Bounds(f_sup=abs(coef) * media.sup_abs_first(), f_sl=0.0, h_star=h, h_sup=h),
        metric_kind=MetricKind.sup_plus_euclid(),
        tau=tau,
        T=T,
    )


def kuramoto_model(coupling: float = 0.5, tau: float = 0.2, T: float = 1.0, h: float = 1.0,
                   media: MediaLaw | None = None, init: InitLaw | None = None,
                   delay: DelaySpec | None = None, media_coef: float = 1.0,
                   shape: ScalarExpr | None = None) -> ModelSpec:
    """Delayed mean-field oscillator coupling with media-shifted frequency.

    Media must have compact support (all built-in laws do).
    """
    media = media or BoxUniformMedia((-0.5,), (0.5,))
    delay = delay or DelaySpec(form="constant", value=0.0)
    delay.validate(tau)
    shape = shape or Sin()
    f_sup = abs(coupling) + abs(media_coef) * media.sup_abs_first()
    return ModelSpec(
        name="kuramoto",
        drift=KuramotoParams(coupling=coupling, shape=shape, media_coef=media_coef,
                             delay=delay),
        diffusion=Diffusion(h),
        init_law=init or UniformLevelInit(-math.pi, math.pi),
        media_law=media,
        bounds=Bounds(f_sup=f_sup, f_sl=2.0 * abs(coupling), h_star=h, h_sup=h),
        metric_kind=MetricKind.kuramoto(delay.K),
        tau=tau,
        T=T,
    )


def gl_model(kernel: ScalarExpr | None = None, rate: ScalarExpr | None = None,
             window: float = 0.1, tau: float = 0.2, T: float = 1.0, h: float = 1.0,
             media: MediaLaw | None = None, init: InitLaw | None = None,
             kernel_media: ScalarExpr | None = None) -> ModelSpec:
    """Memory-kernel (integrate-to-last-reset) drift with rate in [0, 1]."""
    if not 0.0 < window <= tau:
        raise DelayOutOfRange(f"window {window} must lie in (0, tau]")
    kernel = kernel or Const(1.0)
    kernel_media = kernel_media or Const(1.0)
    rate = rate or Clip(Affine(1.0, 0.0), 0.0, 1.0)
    probe = np.linspace(0.0, tau + T, 257)
    kvals = kernel(probe)
    if np.min(kvals) < 0:
        raise ValueError("kernel must be nonnegative on [0, tau + T]")
    media = media or PointMedia((0.0,))
    g_sup = float(np.max(kvals)) * max(abs(float(kernel_media(np.array([media.sup_abs_first()])))), 1.0)
    return ModelSpec(
        name="galves_locherbach",
        drift=GlParams(kernel=kernel, kernel_media=kernel_media, rate=rate,
                       window=Const(window)),
        diffusion=Diffusion(h),
        init_law=init or ConstantInit(0.0),
        media_law=media,
        bounds=Bounds(f_sup=g_sup * window, f_sl=2.0 * g_sup * rate.lip_bound() * window,
                      h_star=h, h_sup=h),
        metric_kind=MetricKind.sup_plus_euclid(),
        tau=tau,
        T=T,
    )
