"""Rejection sampling of Bruhat-comparable pairs and Monte Carlo success estimates.

Stream contract: trial k of a run with seed s draws from
``numpy.random.Generator(PCG64(SeedSequence([s, k])))``, so results depend on
(s, k) only and not on how trials are split across workers.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist
from typing import Optional

import numpy as np

from .errors import BudgetExceeded
from .mult import classify_pair
from .perm import MAX_N, Permutation, bruhat_leq

__all__ = ["TrialConfig", "SuccessReport", "trial_rng", "sample_comparable_pair",
           "sample_strict_pair", "estimate_success", "wilson_interval"]


@dataclass(frozen=True)
class TrialConfig:
    n: int
    trials: int
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise ValueError(f"n must be in 1..{MAX_N}")
        if self.trials < 1:
            raise ValueError("trials must be positive")


def trial_rng(seed: int, k: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, k])))


def _draw(n: int, rng: np.random.Generator) -> Permutation:
    return Permutation._unchecked(tuple(int(a) + 1 for a in rng.permutation(n)))


def sample_comparable_pair(n: int, rng: np.random.Generator) -> tuple[Permutation, Permutation, int]:
    """Draw sigma, rho independently until comparable; return (smaller, larger, rejections)."""
    rejections = 0
    while True:
        s, r = _draw(n, rng), _draw(n, rng)
        if bruhat_leq(s, r):
            return s, r, rejections
        if bruhat_leq(r, s):
            return r, s, rejections
        rejections += 1


def sample_strict_pair(n: int, rng: np.random.Generator) -> tuple[Permutation, Permutation, int]:
    """Like sample_comparable_pair, redrawing diagonal pairs; uniform on Gamma_n."""
    if n < 2:
        raise ValueError("Gamma_1 is empty")
    total = 0
    while True:
        u, v, rej = sample_comparable_pair(n, rng)
        total += rej
        if u != v:
            return u, v, total
        total += 1


def wilson_interval(successes: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    z = NormalDist().inv_cdf(0.5 + level / 2)
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * ((p * (1 - p) / trials + z * z / (4 * trials * trials)) ** 0.5) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class SuccessReport:
    n: int
    trials: int
    seed: int
    successes: int
    budget_exceeded: int
    pct: float
    ci: tuple
    mean_rejections: float

    def to_json(self) -> dict:
        return {"n": self.n, "trials": self.trials, "seed": self.seed,
                "successes": self.successes, "budget_exceeded": self.budget_exceeded,
                "pct": round(self.pct, 2), "ci": [round(c, 2) for c in self.ci],
                "mean_rejections": round(self.mean_rejections, 3)}


def _run_trials(args) -> list[tuple[int, int, int]]:
    n, seed, ks, verify, budget = args
    out = []
    for k in ks:
        u, v, rej = sample_strict_pair(n, trial_rng(seed, k))
        try:
            rec = classify_pair((u, v), verify=verify, budget=budget, check_conjecture=False)
            ok, exceeded = rec.route != "unresolved", rec.budget_exceeded
        except BudgetExceeded:
            ok, exceeded = False, True
        out.append((int(ok and not exceeded), int(exceeded), rej))
    return out


def estimate_success(config: TrialConfig, jobs: Optional[int] = None, verify: bool = False,
                     budget: Optional[int] = None) -> SuccessReport:
    """Fraction of sampled pairs of Gamma_n resolved by the homogeneity or v_max route."""
    jobs = jobs or os.cpu_count() or 1
    ks = list(range(config.trials))
    chunks = [ks[i::jobs] for i in range(jobs)] if jobs > 1 else [ks]
    tasks = [(config.n, config.seed, c, verify, budget) for c in chunks if c]
    if len(tasks) == 1:
        results = [_run_trials(tasks[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(tasks)) as ex:
            results = list(ex.map(_run_trials, tasks))
    rows = [r for part in results for r in part]
    succ = sum(r[0] for r in rows)
    exceeded = sum(r[1] for r in rows)
    rej = sum(r[2] for r in rows)
    denom = config.trials - exceeded
    pct = 100.0 * succ / denom if denom else 0.0
    lo, hi = wilson_interval(succ, denom) if denom else (0.0, 0.0)
    return SuccessReport(config.n, config.trials, config.seed, succ, exceeded, pct,
                         (100 * lo, 100 * hi), rej / config.trials)
