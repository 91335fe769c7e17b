"""Pearson chi-squared statistic, noncentrality, power, and the equivalence test."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dist import ChiSqParams, RandomStream, chisq_cdf, chisq_quantile
from .evidence import EquivalenceParams

__all__ = [
    "CellData",
    "pearson_stat",
    "ncp_lambda",
    "power_lack_of_fit",
    "power_equivalence",
    "EquivalenceDecision",
    "equivalence_test",
    "PowerEstimate",
    "multinomial_power_mc",
]

_MIN_PROB = 1e-12


@dataclass
class CellData:
    """Observed cell counts paired with null-model cell probabilities.

    Cells with null probability below 1e-12 are rejected; merging sparse
    cells is the job of the model-fit pipelines, not of this container.
    """

    counts: np.ndarray
    null_probs: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        counts = np.asarray(self.counts)
        probs = np.asarray(self.null_probs, dtype=float)
        if counts.ndim != 1 or probs.ndim != 1 or len(counts) != len(probs):
            raise ValueError("counts and null_probs must be 1-d sequences of equal length")
        if len(counts) == 0:
            raise ValueError("need at least one cell")
        if np.any(counts < 0) or not np.allclose(counts, np.round(counts)):
            raise ValueError("counts must be nonnegative integers")
        if np.any(probs <= _MIN_PROB):
            raise ValueError("every null probability must exceed 1e-12")
        if abs(probs.sum() - 1.0) > 1e-9:
            raise ValueError(f"null_probs must sum to 1, got {probs.sum()!r}")
        self.counts = counts.astype(np.int64)
        self.null_probs = probs
        self.n = int(self.counts.sum())
        if self.n <= 0:
            raise ValueError("total count must be positive")


def pearson_stat(data: CellData) -> float:
    """Sum of (observed - expected)^2 / expected over the cells."""
    expected = data.n * data.null_probs
    return float(((data.counts - expected) ** 2 / expected).sum())


def ncp_lambda(n: int, null_probs, alt_probs) -> float:
    """Noncentrality n * sum((p_i - q_i)^2 / p_i) of an alternative q vs null p."""
    p = np.asarray(null_probs, dtype=float)
    q = np.asarray(alt_probs, dtype=float)
    if p.shape != q.shape:
        raise ValueError("probability vectors must have the same length")
    if np.any(p <= _MIN_PROB):
        raise ValueError("null probabilities must be strictly positive")
    if n <= 0:
        raise ValueError("n must be positive")
    return float(n * ((p - q) ** 2 / p).sum())


def power_lack_of_fit(alpha: float, nu: float, lam: float) -> float:
    """P(S >= c) for S ~ chi2(nu, lam), c the central 1-alpha quantile."""
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie strictly in (0, 1)")
    c = chisq_quantile(1.0 - alpha, ChiSqParams(nu, 0.0))
    return 1.0 - chisq_cdf(c, ChiSqParams(nu, lam))


def power_equivalence(alpha: float, params: EquivalenceParams, lam: float) -> float:
    """P(S <= c_alpha) for S ~ chi2(nu, lam), c_alpha the alpha quantile at lambda0."""
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie strictly in (0, 1)")
    c = chisq_quantile(alpha, ChiSqParams(params.nu, params.lambda0))
    return chisq_cdf(c, ChiSqParams(params.nu, lam))


@dataclass(frozen=True)
class EquivalenceDecision:
    decision: str  # reject_nonequivalence | retain
    s: float
    critical_value: float
    alpha: float
    params: EquivalenceParams

    @property
    def reject(self) -> bool:
        return self.decision == "reject_nonequivalence"


def equivalence_test(s: float, params: EquivalenceParams, alpha: float) -> EquivalenceDecision:
    """Reject non-equivalence iff s <= the alpha quantile of chi2(nu, lambda0)."""
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie strictly in (0, 1)")
    c = chisq_quantile(alpha, ChiSqParams(params.nu, params.lambda0))
    decision = "reject_nonequivalence" if s <= c else "retain"
    return EquivalenceDecision(decision=decision, s=float(s), critical_value=c,
                               alpha=alpha, params=params)


@dataclass(frozen=True)
class PowerEstimate:
    power: float
    se: float
    reps: int
    critical_value: float


def _power_chunk(stream: RandomStream, lo: int, hi: int, n: int,
                 true_probs: np.ndarray, expected: np.ndarray, c: float) -> int:
    hits = 0
    for i in range(lo, hi):
        counts = stream.substream(i).gen.multinomial(n, true_probs)
        s = ((counts - expected) ** 2 / expected).sum()
        if s >= c:
            hits += 1
    return hits


def multinomial_power_mc(
    stream: RandomStream,
    n: int,
    true_probs,
    null_probs,
    alpha: float,
    reps: int,
    workers: int = 1,
) -> PowerEstimate:
    """Monte Carlo power of the level-alpha chi-squared test under true_probs.

    Each replication draws from its own substream, so the estimate is
    independent of worker count and of chunking.
    """
    if reps < 1000:
        raise ValueError("reps must be at least 1000")
    true_probs = np.asarray(true_probs, dtype=float)
    null_probs = np.asarray(null_probs, dtype=float)
    if true_probs.shape != null_probs.shape:
        raise ValueError("probability vectors must have the same length")
    if np.any(null_probs <= _MIN_PROB) or abs(null_probs.sum() - 1.0) > 1e-9:
        raise ValueError("null_probs must be strictly positive and sum to 1")
    r = len(null_probs)
    c = chisq_quantile(1.0 - alpha, ChiSqParams(r - 1, 0.0))
    expected = n * null_probs

    if workers <= 1:
        hits = _power_chunk(stream, 0, reps, n, true_probs, expected, c)
    else:
        bounds = np.linspace(0, reps, workers + 1).astype(int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futs = [
                pool.submit(_power_chunk, stream, int(lo), int(hi), n,
                            true_probs, expected, c)
                for lo, hi in zip(bounds[:-1], bounds[1:])
            ]
            hits = sum(f.result() for f in futs)
    p = hits / reps
    se = math.sqrt(max(p * (1.0 - p), 1e-300) / reps)
    return PowerEstimate(power=p, se=se, reps=reps, critical_value=c)
