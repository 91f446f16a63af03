"""Entropic sampling: harvest states with Q >= alpha * Q_max.

The flat-histogram walk is run at constant f (large f maximizes barrier
crossing; sample quality is enforced by the alpha filter, not by DOS
accuracy).  Every n_corr steps the state is recorded if its quality clears
the threshold; whenever a better Q_max turns up, the threshold is recomputed
and previously recorded states are discarded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .kernels import F_Q, F_QMAX
from .sampler import Q_ABS_BOUND, Sampler

_QMAX_TOL = 1e-9


@dataclass(frozen=True)
class EntropicConfig:
    f: float = 1.0
    n_bins: int = 400
    warmup_steps: int = 1_000_000
    max_steps: int = 20_000_000_000


@dataclass
class SampleRecord:
    q: float
    labels: np.ndarray
    b: np.ndarray | None = None   # only for varying-structure nulls
    step: int = 0

    def to_json(self) -> str:
        d = {"q": self.q, "labels": [int(x) for x in self.labels]}
        if self.b is not None:
            d["B"] = [[int(v) for v in row] for row in self.b]
        return json.dumps(d)


@dataclass
class SampleSet:
    records: list[SampleRecord]
    q_max_seen: float
    alpha: float
    n_corr: int
    exhausted: bool = False

    @property
    def q_min(self) -> float:
        return self.alpha * self.q_max_seen

    def labels_matrix(self) -> np.ndarray:
        return np.array([r.labels for r in self.records], dtype=np.int64)

    def to_jsonl(self) -> str:
        return "".join(r.to_json() + "\n" for r in self.records)

    @classmethod
    def from_jsonl(cls, text: str, alpha: float = 0.99, n_corr: int = 10_000) -> "SampleSet":
        records = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            d = json.loads(line)
            b = np.array(d["B"], dtype=np.int64) if "B" in d else None
            records.append(SampleRecord(float(d["q"]),
                                        np.array(d["labels"], dtype=np.int64), b))
        q_max = max((r.q for r in records), default=0.0)
        return cls(records, q_max, alpha, n_corr)


def merge_sample_sets(sets: list[SampleSet]) -> SampleSet:
    """Merge partial sets, re-applying the global alpha * Q_max filter."""
    if not sets:
        raise ValueError("nothing to merge")
    alpha = sets[0].alpha
    q_max = max(s.q_max_seen for s in sets)
    records = [r for s in sets for r in s.records if r.q >= alpha * q_max - 1e-12]
    return SampleSet(records, q_max, alpha, sets[0].n_corr,
                     exhausted=any(s.exhausted for s in sets))


def entropic_sample(sampler: Sampler, alpha: float = 0.99, m: int = 1000,
                    n_corr: int = 10_000, cfg: EntropicConfig | None = None,
                    varying_b: bool = False) -> SampleSet:
    """Harvest m decorrelated states with Q above alpha * Q_max."""
    if m < 1:
        raise ValueError("need m >= 1")
    if not 0 < alpha < 1:
        raise ValueError("need 0 < alpha < 1")
    cfg = cfg or EntropicConfig()
    bound = Q_ABS_BOUND * (1 + 1e-9)
    n_bins = cfg.n_bins
    inv_w = n_bins / (2 * bound)
    entropy = np.zeros(n_bins)
    hist = np.zeros(n_bins, dtype=np.int64)
    active = np.zeros(n_bins, dtype=bool)
    q = sampler.refresh_q()
    fstate = np.array([q, q, q], dtype=np.float64)
    istate = np.array([0, int(np.floor((q + bound) * inv_w))], dtype=np.int64)
    rng = sampler.rng_stream(0xE5)
    args = (sampler.mix.p_swap, sampler.mix.p_rewire, sampler.two_e)

    def run(n_steps):
        draws = rng.random((n_steps, 4))
        kernels.run_chunk(draws, *sampler.kernel_args(), fstate, istate,
                          entropy, hist, active, 0, n_bins - 1, -bound, inv_w,
                          n_bins, cfg.f, False, *args)

    done = 0
    while done < cfg.warmup_steps:
        n = min(n_corr, cfg.warmup_steps - done)
        run(n)
        done += n
    q_max = fstate[F_QMAX]

    records: list[SampleRecord] = []
    steps = done
    while len(records) < m and steps < cfg.max_steps:
        run(n_corr)
        steps += n_corr
        if fstate[F_QMAX] > q_max + _QMAX_TOL:
            q_max = fstate[F_QMAX]
            records.clear()
        # fresh recompute so stored q carries no incremental drift
        q = sampler.refresh_q()
        fstate[F_Q] = q
        if q > alpha * q_max:
            records.append(SampleRecord(
                q, sampler.labelling.c.copy(),
                sampler.bm.b.copy() if varying_b else None, steps))
    return SampleSet(records, q_max, alpha, n_corr,
                     exhausted=len(records) < m)
