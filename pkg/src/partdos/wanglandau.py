"""Wang-Landau flat-histogram estimation of the partition-quality DOS.

The quality range is discretized into bins; the walk is run over overlapping
bin windows which are joined afterwards at the bin where the 5-point slopes
of the two entropy profiles agree best.  The modification factor f halves on
each flatness pass (every active bin visited at least n_min + 1/sqrt(f)
times) until f < epsilon, with the 1/t schedule taking over should f ever
drop below 1/(t+1).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import logsumexp

from . import kernels
from .kernels import F_Q, F_QMAX, F_QMIN, I_BIN, I_T
from .sampler import Q_ABS_BOUND, Sampler

_WARMUP_BINS = 400


class NonConvergenceError(RuntimeError):
    """Window step budget exceeded; carries the partial entropy profile."""

    def __init__(self, msg, profile=None):
        super().__init__(msg)
        self.profile = profile


class StitchError(ValueError):
    pass


@dataclass(frozen=True)
class WlConfig:
    epsilon: float = 1e-5
    n_min: int = 10_000
    n_bins: int = 200
    n_s: int = 20               # half window width, in bins
    n_o: int = 10               # overshoot bins discarded from each side
    n_step: int = 10            # window shift, in bins
    f0: float = 1.0
    flat_check_every: int = 10_000
    warmup_steps: int = 100_000
    pad: float = 0.1            # relative padding of the discovered Q range
    q_lo: float | None = None   # pin the grid range explicitly
    q_hi: float | None = None
    refresh_every: int = 1_000_000
    max_window_steps: int = 2_000_000_000
    drive_max_steps: int = 20_000_000

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not (0 <= self.n_o < self.n_s):
            raise ValueError("need 0 <= n_o < n_s")
        if not (0 < self.n_step <= self.n_s):
            raise ValueError("need 0 < n_step <= n_s")
        if self.n_bins < 2:
            raise ValueError("need at least 2 bins")

    def single_window(self) -> "WlConfig":
        """Variant whose first window spans the whole grid."""
        return replace(self, n_s=self.n_bins, n_o=0, n_step=self.n_bins)


@dataclass
class DosGrid:
    q_lo: float
    q_hi: float
    n_bins: int
    entropy: np.ndarray              # per-bin ln g (possibly normalized); nan when inactive
    hist: np.ndarray                 # per-bin visit counts
    active: np.ndarray               # per-bin reachability flags
    normalized: bool = False

    @property
    def bin_width(self) -> float:
        return (self.q_hi - self.q_lo) / self.n_bins

    def bin_edges(self) -> np.ndarray:
        return self.q_lo + self.bin_width * np.arange(self.n_bins + 1)

    def bin_index(self, q: float) -> int:
        return int(np.floor((q - self.q_lo) * self.n_bins / (self.q_hi - self.q_lo)))

    def same_binning(self, other: "DosGrid") -> bool:
        return (self.n_bins == other.n_bins
                and math.isclose(self.q_lo, other.q_lo, rel_tol=0, abs_tol=1e-12)
                and math.isclose(self.q_hi, other.q_hi, rel_tol=0, abs_tol=1e-12))

    def to_csv(self) -> str:
        edges = self.bin_edges()
        out = io.StringIO()
        out.write("q_lo,q_hi,log_g_norm,hist,active\n")
        for i in range(self.n_bins):
            val = self.entropy[i] if self.active[i] else float("nan")
            out.write("%.17g,%.17g,%.17g,%d,%d\n"
                      % (edges[i], edges[i + 1], val, self.hist[i], int(self.active[i])))
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "DosGrid":
        lines = [ln for ln in text.strip().splitlines() if ln]
        if not lines or not lines[0].startswith("q_lo"):
            raise ValueError("not a DOS CSV: missing header")
        rows = [ln.split(",") for ln in lines[1:]]
        q_lo = float(rows[0][0])
        q_hi = float(rows[-1][1])
        n = len(rows)
        entropy = np.array([float(r[2]) for r in rows])
        hist = np.array([int(r[3]) for r in rows], dtype=np.int64)
        active = np.array([bool(int(r[4])) for r in rows])
        return cls(q_lo, q_hi, n, entropy, hist, active, normalized=True)


@dataclass
class WindowProfile:
    lo: int                 # full window bounds, in grid bins
    hi: int
    lo_r: int               # retained bounds after overshoot removal
    hi_r: int
    entropy: np.ndarray     # grid-length arrays; meaningful on [lo, hi]
    hist: np.ndarray
    active: np.ndarray


def wl_window(sampler: Sampler, lo: int, hi: int, q_lo: float, inv_w: float,
              n_bins: int, cfg: WlConfig, rng: np.random.Generator,
              entropy=None, hist=None, active=None):
    """Run the Wang-Landau walk restricted to grid bins [lo, hi].

    The sampler's current Q must already lie inside the window.  Returns
    (entropy, hist, active) as grid-length arrays.
    """
    if hi - lo + 1 < 2:
        raise ValueError("window needs at least 2 bins")
    entropy = np.zeros(n_bins) if entropy is None else entropy
    hist = np.zeros(n_bins, dtype=np.int64) if hist is None else hist
    active = np.zeros(n_bins, dtype=bool) if active is None else active
    q = sampler.refresh_q()
    cur = int(np.floor((q - q_lo) * inv_w))
    if not (lo <= cur <= hi):
        raise ValueError("sampler state lies outside the window")
    fstate = np.array([q, q, q], dtype=np.float64)
    istate = np.array([0, cur], dtype=np.int64)
    active[cur] = True
    f = cfg.f0
    one_over_t = False
    steps = 0
    next_refresh = cfg.refresh_every
    while f >= cfg.epsilon:
        draws = rng.random((cfg.flat_check_every, 4))
        f = kernels.run_chunk(draws, *sampler.kernel_args(), fstate, istate,
                              entropy, hist, active, lo, hi, q_lo, inv_w,
                              n_bins, f, one_over_t,
                              sampler.mix.p_swap, sampler.mix.p_rewire,
                              sampler.two_e)
        steps += draws.shape[0]
        if steps >= next_refresh:
            fstate[F_Q] = sampler.refresh_q()
            nb = int(np.floor((fstate[F_Q] - q_lo) * inv_w))
            istate[I_BIN] = min(max(nb, lo), hi)
            next_refresh += cfg.refresh_every
        if steps > cfg.max_window_steps:
            raise NonConvergenceError(
                f"window [{lo}, {hi}] did not converge within {steps} steps (f={f:g})",
                profile=(entropy.copy(), hist.copy(), active.copy()))
        if not one_over_t:
            t = istate[I_T]
            if f < 1.0 / (t + 1.0):
                one_over_t = True
                continue
            sl = slice(lo, hi + 1)
            act = active[sl]
            if act.any() and hist[sl][act].min() >= cfg.n_min + 1.0 / math.sqrt(f):
                hist[sl] = 0
                f *= 0.5
    return entropy, hist, active


def _drive_into_window(sampler: Sampler, lo: int, hi: int, q_lo: float,
                       inv_w: float, n_bins: int, cfg: WlConfig,
                       rng: np.random.Generator) -> None:
    q = sampler.refresh_q()
    cur = int(np.floor((q - q_lo) * inv_w))
    fstate = np.array([q, q, q], dtype=np.float64)
    istate = np.array([0, cur], dtype=np.int64)
    steps = 0
    while not (lo <= istate[I_BIN] <= hi):
        draws = rng.random((cfg.flat_check_every, 3))
        arrived = kernels.drive_chunk(draws, *sampler.kernel_args(), fstate,
                                      istate, lo, hi, q_lo, inv_w, n_bins,
                                      sampler.mix.p_swap, sampler.mix.p_rewire,
                                      sampler.two_e)
        steps += draws.shape[0]
        if arrived:
            break
        if steps > cfg.drive_max_steps:
            raise NonConvergenceError(
                f"could not drive the walker into window [{lo}, {hi}]")
    sampler.refresh_q()


def _discover_range(sampler: Sampler, cfg: WlConfig) -> tuple[float, float]:
    """Constant-f exploratory walk to bracket the reachable Q range."""
    bound = Q_ABS_BOUND * (1 + 1e-9)
    inv_w = _WARMUP_BINS / (2 * bound)
    entropy = np.zeros(_WARMUP_BINS)
    hist = np.zeros(_WARMUP_BINS, dtype=np.int64)
    active = np.zeros(_WARMUP_BINS, dtype=bool)
    q = sampler.refresh_q()
    cur = int(np.floor((q + bound) * inv_w))
    fstate = np.array([q, q, q], dtype=np.float64)
    istate = np.array([0, cur], dtype=np.int64)
    rng = sampler.rng_stream(0xFA0)
    done = 0
    while done < cfg.warmup_steps:
        n = min(cfg.flat_check_every, cfg.warmup_steps - done)
        draws = rng.random((n, 4))
        kernels.run_chunk(draws, *sampler.kernel_args(), fstate, istate,
                          entropy, hist, active, 0, _WARMUP_BINS - 1,
                          -bound, inv_w, _WARMUP_BINS, 1.0, False,
                          sampler.mix.p_swap, sampler.mix.p_rewire,
                          sampler.two_e)
        done += n
    sampler.refresh_q()
    q_min = fstate[F_QMIN]
    q_max = fstate[F_QMAX]
    span = max(q_max - q_min, 1e-6)
    # irrational padding factors keep bin edges off the rational Q spectrum,
    # which would otherwise split a single exact Q value across two bins
    lo = max(-bound, q_min - cfg.pad * span * (1 + 1e-3 * math.sqrt(2)))
    hi = min(bound, q_max + cfg.pad * span * (1 + 1e-3 * math.sqrt(3)))
    return lo, hi


def wl_sweep(sampler: Sampler, cfg: WlConfig | None = None) -> DosGrid:
    """Full windowed Wang-Landau sweep; returns the normalized stitched DOS."""
    cfg = cfg or WlConfig()
    if cfg.q_lo is not None and cfg.q_hi is not None:
        q_lo, q_hi = float(cfg.q_lo), float(cfg.q_hi)
        if q_hi <= q_lo:
            raise ValueError("need q_hi > q_lo")
    else:
        q_lo, q_hi = _discover_range(sampler, cfg)
    n_bins = cfg.n_bins
    inv_w = n_bins / (q_hi - q_lo)

    q = sampler.refresh_q()
    cur = int(np.floor((q - q_lo) * inv_w))
    if not (0 <= cur < n_bins):
        _drive_into_window(sampler, 0, n_bins - 1, q_lo, inv_w, n_bins, cfg,
                           sampler.rng_stream(0xD0, 0))
        cur = int(np.floor((sampler.state.q - q_lo) * inv_w))

    profiles: list[WindowProfile] = []
    widx = 0

    def run_at(walker: Sampler, center: int) -> WindowProfile:
        nonlocal widx
        lo = max(0, center - cfg.n_s - cfg.n_o)
        hi = min(n_bins - 1, center + cfg.n_s + cfg.n_o)
        _drive_into_window(walker, lo, hi, q_lo, inv_w, n_bins, cfg,
                           sampler.rng_stream(0xD0, widx + 1))
        ent, hst, act = wl_window(walker, lo, hi, q_lo, inv_w, n_bins, cfg,
                                  sampler.rng_stream(0xA0, widx))
        lo_r = lo + cfg.n_o if lo > 0 else lo
        hi_r = hi - cfg.n_o if hi < n_bins - 1 else hi
        widx += 1
        return WindowProfile(lo, hi, lo_r, hi_r, ent, hst, act)

    right = sampler.copy()
    left = sampler.copy()
    center = cur
    prof = run_at(right, center)
    profiles.append(prof)
    # propagate the first window's state to the left walker as well
    left = right.copy()

    # a side is exhausted at the grid edge, or when a window uncovers no
    # active bin beyond the previous coverage (spectra are discrete, so a
    # single unvisited edge bin may just be a gap, not the end of the range)
    def right_exhausted(p, prev_hi) -> bool:
        if p.hi == n_bins - 1:
            return True
        return not p.active[prev_hi + 1:p.hi_r + 1].any()

    def left_exhausted(p, prev_lo) -> bool:
        if p.lo == 0:
            return True
        return not p.active[p.lo_r:prev_lo].any()

    right_done = right_exhausted(prof, center)
    left_done = left_exhausted(prof, center)
    cover_hi_r = prof.hi_r
    cover_lo_r = prof.lo_r
    c_r = center
    c_l = center
    while not (right_done and left_done):
        if not right_done:
            c_r += cfg.n_step
            p = run_at(right, c_r)
            profiles.append(p)
            right_done = right_exhausted(p, cover_hi_r)
            cover_hi_r = max(cover_hi_r, p.hi_r)
        if not left_done:
            c_l -= cfg.n_step
            p = run_at(left, c_l)
            profiles.append(p)
            left_done = left_exhausted(p, cover_lo_r)
            cover_lo_r = min(cover_lo_r, p.lo_r)

    entropy, active = stitch(profiles, n_bins)
    hist = np.zeros(n_bins, dtype=np.int64)
    for p in profiles:
        hist[p.lo_r:p.hi_r + 1] += p.hist[p.lo_r:p.hi_r + 1]
    grid = DosGrid(q_lo, q_hi, n_bins, entropy, hist, active)
    return normalize(grid)


def _five_point_slope(vals: np.ndarray, ok: np.ndarray, j: int) -> float | None:
    if j - 2 < 0 or j + 2 >= vals.shape[0]:
        return None
    if not (ok[j - 2] and ok[j - 1] and ok[j] and ok[j + 1] and ok[j + 2]):
        return None
    return (vals[j - 2] - 8.0 * vals[j - 1] + 8.0 * vals[j + 1] - vals[j + 2]) / 12.0


def stitch(profiles: list[WindowProfile], n_bins: int) -> tuple[np.ndarray, np.ndarray]:
    """Join retained window profiles into one continuous ln g profile.

    Adjacent profiles are joined at the overlap bin where their 5-point
    finite-difference slopes agree best (ties resolved towards smaller Q);
    the right profile is shifted by the entropy offset at the join.
    """
    if not profiles:
        raise StitchError("no window profiles to stitch")
    profs = sorted(profiles, key=lambda p: (p.lo_r, p.hi_r))
    merged = np.full(n_bins, np.nan)
    m_active = np.zeros(n_bins, dtype=bool)
    first = profs[0]
    for b in range(first.lo_r, first.hi_r + 1):
        if first.active[b]:
            merged[b] = first.entropy[b]
            m_active[b] = True
    cover_hi = first.hi_r
    for p in profs[1:]:
        ov_lo = p.lo_r
        ov_hi = min(cover_hi, p.hi_r)
        if ov_hi - ov_lo + 1 < 5:
            raise StitchError(
                "window overlap is below 5 bins; increase n_s or decrease n_step")
        common = [b for b in range(ov_lo, ov_hi + 1) if m_active[b] and p.active[b]]
        if not common:
            raise StitchError("windows share no active bins; cannot stitch")
        best = None
        for j in common:
            sl = _five_point_slope(merged, m_active, j)
            sr = _five_point_slope(p.entropy, p.active, j)
            if sl is None or sr is None:
                continue
            d = abs(sl - sr)
            if best is None or d < best[0]:
                best = (d, j)
        join = best[1] if best is not None else common[len(common) // 2]
        offset = merged[join] - p.entropy[join]
        for b in range(p.lo_r, p.hi_r + 1):
            if not p.active[b]:
                continue
            if b > join or not m_active[b]:
                merged[b] = p.entropy[b] + offset
                m_active[b] = True
        cover_hi = max(cover_hi, p.hi_r)
    return merged, m_active


def normalize(grid: DosGrid) -> DosGrid:
    """Shift entropy so that sum over active bins of exp(entropy) equals 1."""
    act = grid.active & np.isfinite(grid.entropy)
    if not act.any():
        raise ValueError("no active bins to normalize")
    shift = logsumexp(grid.entropy[act])
    out = np.full(grid.n_bins, np.nan)
    out[act] = grid.entropy[act] - shift
    return DosGrid(grid.q_lo, grid.q_hi, grid.n_bins, out, grid.hist.copy(),
                   act.copy(), normalized=True)


@dataclass
class DosComparison:
    q_edges: np.ndarray     # (n_bins + 1,)
    log_ratio: np.ndarray   # nan outside the active intersection
    flag: list[str]         # per bin: '', 'both', 'a_only', 'b_only'

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("q_lo,q_hi,log_ratio,flag\n")
        for i, fl in enumerate(self.flag):
            if not fl:
                continue
            out.write("%.17g,%.17g,%.17g,%s\n"
                      % (self.q_edges[i], self.q_edges[i + 1], self.log_ratio[i], fl))
        return out.getvalue()


def compare(grid_a: DosGrid, grid_b: DosGrid) -> DosComparison:
    """Per-bin log ratio ln g_a - ln g_b on the active intersection."""
    if not grid_a.same_binning(grid_b):
        raise ValueError("grids use different binning; rerun with a pinned range")
    both = grid_a.active & grid_b.active
    if not both.any():
        raise ValueError("active bins are disjoint; nothing to compare")
    n = grid_a.n_bins
    ratio = np.full(n, np.nan)
    ratio[both] = grid_a.entropy[both] - grid_b.entropy[both]
    flags = []
    for i in range(n):
        if both[i]:
            flags.append("both")
        elif grid_a.active[i]:
            flags.append("a_only")
        elif grid_b.active[i]:
            flags.append("b_only")
        else:
            flags.append("")
    return DosComparison(grid_a.bin_edges(), ratio, flags)
