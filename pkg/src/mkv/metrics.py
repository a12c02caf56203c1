"""Time-indexed metrics on (path, media) pairs and bounded-Lipschitz distances.

Two point metrics are supported:

* ``SupPlusEuclid``: sup-norm of the path difference over ``[-tau, t]`` plus
  the Euclidean distance of the media vectors.
* ``KuramotoWindow(K)``: ``sqrt(|w - w'|^2 + S^2)`` where ``S`` is the sup of
  ``|x(s) - x'(u)|`` over node pairs ``s, u in [0, t]`` whose offset is within
  ``K |w - w'|``.

Bounded-Lipschitz (Dudley) distances between empirical clouds come in three
flavors: an exact finite-support linear program (the ground truth), a
randomized dictionary lower bound (scalable), and the coupling upper bound
``mean(min(dist, 2))`` for equal-size paired clouds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.ndimage import maximum_filter1d, minimum_filter1d
from scipy.optimize import linprog

from .errors import DimensionMismatch, GridMismatch, MkvError, SizeMismatch, SupportTooLarge
from .grid import MediaSample, ParticleCloud, SamplePath, TimeGrid
from .rng import RngStream, as_stream, DICTIONARY

DEFAULT_LP_CAP = 1200
_CHUNK = 128


class Variant(enum.Enum):
    SUP_PLUS_EUCLID = "sup_plus_euclid"
    KURAMOTO_WINDOW = "kuramoto_window"


@dataclass(frozen=True)
class MetricKind:
    """Choice of point metric; ``K`` is the window slope for the Kuramoto kind."""

    variant: Variant = Variant.SUP_PLUS_EUCLID
    K: float = 0.0

    def __post_init__(self):
        if self.K < 0:
            raise ValueError("K must be nonnegative")

    @staticmethod
    def sup_plus_euclid() -> "MetricKind":
        return MetricKind(Variant.SUP_PLUS_EUCLID)

    @staticmethod
    def kuramoto(K: float) -> "MetricKind":
        return MetricKind(Variant.KURAMOTO_WINDOW, float(K))


class BlMode(enum.Enum):
    EXACT_LP = "exact_lp"
    DICTIONARY_LOWER_BOUND = "dictionary_lower_bound"


@dataclass(frozen=True)
class BlCertificate:
    """Feasible dual witness: test-function values on the support atoms plus
    the Lipschitz and sup-norm budgets it was certified against."""

    phi: np.ndarray
    lip_budget: float
    bound_budget: float

    def max_violation(self, dist: np.ndarray) -> float:
        """Largest constraint violation against a support distance matrix."""
        phi = self.phi
        lip = np.abs(phi[:, None] - phi[None, :]) - self.lip_budget * dist
        box = np.abs(phi) - self.bound_budget
        budget = self.lip_budget + self.bound_budget - 1.0
        return float(max(lip.max(), box.max(), budget, 0.0))


@dataclass(frozen=True)
class BlResult:
    value: float
    mode: BlMode
    certificate: BlCertificate | None = None

    def __float__(self) -> float:
        return self.value


# ---------------------------------------------------------------------------
# point metric evaluation


def _media_dist(media_a: np.ndarray, media_b: np.ndarray) -> np.ndarray:
    diff = media_a[:, None, :] - media_b[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def _window_sup_matrix(pa: np.ndarray, pb: np.ndarray, i0: int, i1: int) -> np.ndarray:
    """Pairwise max |a_i - b_j| over node columns [i0, i1], chunked over rows."""
    wa = pa[:, i0 : i1 + 1]
    wb = pb[:, i0 : i1 + 1]
    out = np.empty((wa.shape[0], wb.shape[0]))
    for s in range(0, wa.shape[0], _CHUNK):
        blk = wa[s : s + _CHUNK]
        out[s : s + _CHUNK] = np.max(np.abs(blk[:, None, :] - wb[None, :, :]), axis=2)
    return out


def _band_widths(grid: TimeGrid, K: float, media_dist: np.ndarray, win_len: int) -> np.ndarray:
    # Node offsets are rounded UP so the band condition never loses admissible
    # node pairs; this keeps the triangle inequality valid at the grid level.
    w = np.ceil(K * media_dist / grid.dt).astype(np.int64)
    return np.clip(w, 0, max(win_len - 1, 0))


def _kuramoto_sup_matrix(
    pa: np.ndarray, pb: np.ndarray, grid: TimeGrid, t: float, widths: np.ndarray
) -> np.ndarray:
    """Pairwise banded window sup over [0, t] with per-pair node offsets."""
    i1 = grid.index_of_time(t)
    i0 = grid.n_past
    if i1 < i0:
        return np.zeros_like(widths, dtype=np.float64)
    wa = pa[:, i0 : i1 + 1]
    wb = pb[:, i0 : i1 + 1]
    out = np.empty(widths.shape)
    for w in np.unique(widths):
        ii, jj = np.nonzero(widths == w)
        if w == 0:
            hi = wb
            lo = wb
        else:
            size = int(2 * w + 1)
            hi = maximum_filter1d(wb, size=size, axis=1, mode="nearest")
            lo = minimum_filter1d(wb, size=size, axis=1, mode="nearest")
        for s in range(0, ii.size, _CHUNK * 64):
            isel = ii[s : s + _CHUNK * 64]
            jsel = jj[s : s + _CHUNK * 64]
            a = wa[isel]
            up = np.max(a - lo[jsel], axis=1)
            dn = np.max(hi[jsel] - a, axis=1)
            out[isel, jsel] = np.maximum(up, dn)
    return out


def cross_distance_matrix(
    paths_a: np.ndarray,
    media_a: np.ndarray,
    paths_b: np.ndarray,
    media_b: np.ndarray,
    grid: TimeGrid,
    t: float,
    kind: MetricKind,
) -> np.ndarray:
    """All pairwise ``dist_t`` values between two columnar supports."""
    if media_a.shape[1] != media_b.shape[1]:
        raise DimensionMismatch("media dimensions differ")
    em = _media_dist(media_a, media_b)
    if kind.variant is Variant.SUP_PLUS_EUCLID:
        i0, i1 = grid.window(-grid.tau, t)
        return _window_sup_matrix(paths_a, paths_b, i0, i1) + em
    i1 = grid.index_of_time(t)
    win_len = max(i1 - grid.n_past + 1, 0)
    widths = _band_widths(grid, kind.K, em, win_len)
    sup = _kuramoto_sup_matrix(paths_a, paths_b, grid, t, widths)
    return np.sqrt(em * em + sup * sup)


def support_distance_matrix(
    paths: np.ndarray, media: np.ndarray, grid: TimeGrid, t: float, kind: MetricKind
) -> np.ndarray:
    dist = cross_distance_matrix(paths, media, paths, media, grid, t, kind)
    # symmetrize away rounding noise and pin the diagonal
    dist = 0.5 * (dist + dist.T)
    np.fill_diagonal(dist, 0.0)
    return dist


def paired_distances(
    paths_a: np.ndarray,
    media_a: np.ndarray,
    paths_b: np.ndarray,
    media_b: np.ndarray,
    grid: TimeGrid,
    t: float,
    kind: MetricKind,
) -> np.ndarray:
    """``dist_t`` of matched rows (particle i against particle i)."""
    if media_a.shape[1] != media_b.shape[1]:
        raise DimensionMismatch("media dimensions differ")
    em = np.sqrt(np.sum((media_a - media_b) ** 2, axis=1))
    if kind.variant is Variant.SUP_PLUS_EUCLID:
        i0, i1 = grid.window(-grid.tau, t)
        sup = np.max(np.abs(paths_a[:, i0 : i1 + 1] - paths_b[:, i0 : i1 + 1]), axis=1)
        return sup + em
    i1 = grid.index_of_time(t)
    i0 = grid.n_past
    if i1 < i0:
        return em.copy()
    wa = paths_a[:, i0 : i1 + 1]
    wb = paths_b[:, i0 : i1 + 1]
    win_len = i1 - i0 + 1
    widths = _band_widths(grid, kind.K, em, win_len)
    sup = np.empty(em.shape)
    for w in np.unique(widths):
        sel = np.nonzero(widths == w)[0]
        if w == 0:
            hi = wb[sel]
            lo = wb[sel]
        else:
            size = int(2 * w + 1)
            hi = maximum_filter1d(wb[sel], size=size, axis=1, mode="nearest")
            lo = minimum_filter1d(wb[sel], size=size, axis=1, mode="nearest")
        a = wa[sel]
        sup[sel] = np.maximum(np.max(a - lo, axis=1), np.max(hi - a, axis=1))
    return np.sqrt(em * em + sup * sup)


def dist_t(
    p: tuple[SamplePath, MediaSample],
    q: tuple[SamplePath, MediaSample],
    t: float,
    kind: MetricKind,
) -> float:
    """Point metric between two (path, media) pairs at horizon ``t``."""
    xp, mp = p
    xq, mq = q
    if xp.grid != xq.grid:
        raise GridMismatch("paths live on different grids")
    if mp.d != mq.d:
        raise DimensionMismatch("media dimensions differ")
    out = paired_distances(
        xp.values[None, :], mp.coords[None, :], xq.values[None, :], mq.coords[None, :],
        xp.grid, t, kind,
    )
    return float(out[0])


# ---------------------------------------------------------------------------
# bounded-Lipschitz distances


def _combined_support(a: ParticleCloud, b: ParticleCloud):
    if a.grid != b.grid:
        raise GridMismatch("clouds live on different grids")
    if a.d != b.d:
        raise DimensionMismatch("clouds have different media dimensions")
    paths = np.concatenate([a.paths, b.paths])
    media = np.concatenate([a.media, b.media])
    weights = np.concatenate([
        np.full(len(a), 1.0 / len(a)),
        np.full(len(b), -1.0 / len(b)),
    ])
    return paths, media, weights


def _bl_lp_matrices(dist: np.ndarray):
    n = dist.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    m = iu.size
    rows = np.arange(m)
    d = dist[iu, ju]
    ones = np.ones(m)
    a_pairs_pos = sparse.coo_matrix(
        (np.concatenate([ones, -ones, -d]),
         (np.concatenate([rows, rows, rows]),
          np.concatenate([iu, ju, np.full(m, n)]))),
        shape=(m, n + 2),
    )
    a_pairs_neg = sparse.coo_matrix(
        (np.concatenate([-ones, ones, -d]),
         (np.concatenate([rows, rows, rows]),
          np.concatenate([iu, ju, np.full(m, n)]))),
        shape=(m, n + 2),
    )
    r = np.arange(n)
    one_n = np.ones(n)
    a_box_pos = sparse.coo_matrix(
        (np.concatenate([one_n, -one_n]),
         (np.concatenate([r, r]), np.concatenate([r, np.full(n, n + 1)]))),
        shape=(n, n + 2),
    )
    a_box_neg = sparse.coo_matrix(
        (np.concatenate([-one_n, -one_n]),
         (np.concatenate([r, r]), np.concatenate([r, np.full(n, n + 1)]))),
        shape=(n, n + 2),
    )
    a_budget = sparse.coo_matrix((np.ones(2), ([0, 0], [n, n + 1])), shape=(1, n + 2))
    a_ub = sparse.vstack([a_pairs_pos, a_pairs_neg, a_box_pos, a_box_neg, a_budget],
                         format="csr")
    b_ub = np.zeros(a_ub.shape[0])
    b_ub[-1] = 1.0
    return a_ub, b_ub


def _repair_certificate(phi: np.ndarray, lip: float, bound: float,
                        dist: np.ndarray) -> BlCertificate:
    """Project an approximate LP solution onto the feasible set.

    The budgets are rescaled onto ``L + B <= 1`` and the test function is
    replaced by its clipped lower Lipschitz envelope whenever that reduces the
    worst constraint violation.
    """
    lip = max(float(lip), 0.0)
    bound = max(float(bound), 0.0)
    total = lip + bound
    if total > 1.0:
        phi = phi / total
        lip /= total
        bound /= total
    raw = BlCertificate(phi, lip, bound)
    envelope = np.min(phi[None, :] + lip * dist, axis=1)
    repaired = BlCertificate(np.clip(envelope, -bound, bound), lip, bound)
    if repaired.max_violation(dist) <= raw.max_violation(dist):
        return repaired
    return raw


def bl_distance_exact(
    a: ParticleCloud,
    b: ParticleCloud,
    t: float,
    kind: MetricKind,
    lp_cap: int = DEFAULT_LP_CAP,
) -> BlResult:
    """Exact Dudley distance between two empirical clouds restricted to
    ``[-tau, t]``, solved as a finite-support linear program.

    The returned certificate is a feasible test function achieving the value.
    """
    paths, media, weights = _combined_support(a, b)
    n = paths.shape[0]
    if n > lp_cap:
        raise SupportTooLarge(f"combined support {n} exceeds the LP cap {lp_cap}")
    dist = support_distance_matrix(paths, media, a.grid, t, kind)
    a_ub, b_ub = _bl_lp_matrices(dist)
    res = linprog(
        np.concatenate([-weights, [0.0, 0.0]]),
        A_ub=a_ub,
        b_ub=b_ub,
        bounds=[(None, None)] * n + [(0, None), (0, None)],
        method="highs",
    )
    if res.status != 0:  # phi = 0 is always feasible, so this is internal
        raise MkvError(f"BL linear program failed with status {res.status}")
    cert = _repair_certificate(res.x[:n], res.x[n], res.x[n + 1], dist)
    value = float(np.dot(weights, cert.phi))
    return BlResult(max(value, 0.0), BlMode.EXACT_LP, cert)


def bl_distance_dictionary(
    a: ParticleCloud,
    b: ParticleCloud,
    t: float,
    kind: MetricKind,
    dict_size: int,
    seed: RngStream | int,
) -> BlResult:
    """Lower bound on the Dudley distance from a randomized dictionary of
    certified test functions (soft thresholds of distances to landmark atoms).

    Entries are drawn sequentially, so dictionaries of increasing size under
    the same seed are nested and the value is nondecreasing in ``dict_size``.
    """
    if dict_size < 1:
        raise ValueError("dict_size must be at least 1")
    paths, media, weights = _combined_support(a, b)
    n = paths.shape[0]
    rng = as_stream(seed).with_(purpose=DICTIONARY).generator()
    best_val = 0.0
    best = None
    for _ in range(dict_size):
        landmark = int(rng.integers(0, n))
        width = float(np.exp(rng.uniform(np.log(0.05), np.log(5.0))))
        r = cross_distance_matrix(
            paths, media, paths[landmark : landmark + 1],
            media[landmark : landmark + 1], a.grid, t, kind,
        )[:, 0]
        # hinge of the distance, rescaled so sup + Lip <= 1
        scale = width / (width + 1.0)
        phi = np.clip(1.0 - r / width, 0.0, 1.0) * scale
        v = float(np.dot(weights, phi))
        if abs(v) > best_val:
            best_val = abs(v)
            best = BlCertificate(phi if v >= 0 else -phi, 1.0 / (width + 1.0), scale)
    if best is None:
        best = BlCertificate(np.zeros(n), 0.0, 0.0)
    return BlResult(best_val, BlMode.DICTIONARY_LOWER_BOUND, best)


def coupling_upper_bound(
    a: ParticleCloud, b: ParticleCloud, t: float, kind: MetricKind
) -> float:
    """Upper bound on the Dudley distance from the identity pairing:
    average of ``min(dist_t(a_i, b_i), 2)``."""
    if len(a) != len(b):
        raise SizeMismatch("coupling bound needs equal-size clouds")
    if a.grid != b.grid:
        raise GridMismatch("clouds live on different grids")
    d = paired_distances(a.paths, a.media, b.paths, b.media, a.grid, t, kind)
    return float(np.mean(np.minimum(d, 2.0)))


def dump_bl_lp(
    a: ParticleCloud, b: ParticleCloud, t: float, kind: MetricKind
) -> str:
    """Plain-text tabular dump of the exact-LP instance for external checks.

    One objective row per support atom (``obj i c_i``) followed by constraint
    rows: ``lip i j d_ij`` (two-sided Lipschitz pair), ``box i`` (|phi_i| <= B)
    and a final ``budget`` row (L + B <= 1).
    """
    paths, media, weights = _combined_support(a, b)
    dist = support_distance_matrix(paths, media, a.grid, t, kind)
    n = paths.shape[0]
    lines = [f"# bl-lp support={n} t={t:.17g} kind={kind.variant.value} K={kind.K:.17g}"]
    for i in range(n):
        lines.append(f"obj {i} {weights[i]:.17g}")
    for i in range(n):
        for j in range(i + 1, n):
            lines.append(f"lip {i} {j} {dist[i, j]:.17g}")
    for i in range(n):
        lines.append(f"box {i}")
    lines.append("budget")
    return "\n".join(lines) + "\n"
