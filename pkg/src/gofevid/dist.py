"""Distribution primitives: normal and (non)central chi-squared, seedable streams.

The noncentral chi-squared CDF/density are computed as Poisson(lambda/2)
mixtures of central chi-squared terms, truncated when the remaining Poisson
tail mass is below 1e-14.  Random streams are counter-based (Philox keyed by
(seed, stream_id)), so substreams are cheap and order-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

__all__ = [
    "RandomStream",
    "ChiSqParams",
    "normal_cdf",
    "normal_quantile",
    "chisq_mean_var",
    "chisq_cdf",
    "chisq_quantile",
    "sample_chisq",
    "sample_family",
    "FAMILIES",
]

_MASK64 = (1 << 64) - 1


def _mix64(a: int, b: int) -> int:
    """Deterministic 64-bit mix of two ids (splitmix64 finalizer)."""
    z = (a * 0x9E3779B97F4A7C15 + b + 0x632BE59BD9B4E019) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


class RandomStream:
    """A reproducible random source identified by (seed, stream_id).

    Distinct stream_ids under one seed give statistically independent
    sequences.  A stream is single-owner: do not share one instance between
    threads; give each work unit its own substream instead.
    """

    __slots__ = ("seed", "stream_id", "_gen")

    def __init__(self, seed: int, stream_id: int = 0):
        seed = int(seed)
        stream_id = int(stream_id)
        if not (0 <= seed <= _MASK64 and 0 <= stream_id <= _MASK64):
            raise ValueError("seed and stream_id must be unsigned 64-bit integers")
        self.seed = seed
        self.stream_id = stream_id
        self._gen = None

    @property
    def gen(self) -> np.random.Generator:
        if self._gen is None:
            key = np.array([self.seed, self.stream_id], dtype=np.uint64)
            self._gen = np.random.Generator(np.random.Philox(key=key))
        return self._gen

    def substream(self, index: int) -> "RandomStream":
        """Child stream for work unit `index`; independent of drawing order."""
        return RandomStream(self.seed, _mix64(self.stream_id, int(index)))

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, stream_id={self.stream_id})"


@dataclass(frozen=True)
class ChiSqParams:
    """Degrees of freedom nu > 0 and noncentrality lam >= 0."""

    nu: float
    lam: float = 0.0

    def __post_init__(self):
        if not (self.nu > 0 and math.isfinite(self.nu)):
            raise ValueError(f"nu must be positive and finite, got {self.nu}")
        if not (self.lam >= 0 and math.isfinite(self.lam)):
            raise ValueError(f"lam must be nonnegative and finite, got {self.lam}")


def normal_cdf(x):
    """Standard normal CDF; accepts scalars or arrays."""
    if np.isscalar(x):
        if not math.isfinite(x):
            raise ValueError("x must be finite")
        return float(special.ndtr(x))
    return special.ndtr(np.asarray(x, dtype=float))


def normal_quantile(p):
    """Inverse standard normal CDF on (0, 1)."""
    arr = np.asarray(p, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ValueError("p must lie strictly in (0, 1)")
    out = special.ndtri(arr)
    return float(out) if np.isscalar(p) else out


def chisq_mean_var(params: ChiSqParams) -> tuple[float, float]:
    """Mean nu + lam and variance 2 nu + 4 lam."""
    return params.nu + params.lam, 2.0 * params.nu + 4.0 * params.lam


def _poisson_weights(lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Poisson(lam/2) index range and weights with tail mass < 1e-14."""
    m = 0.5 * lam
    if m == 0.0:
        return np.array([0]), np.array([1.0])
    half = 12.0 * math.sqrt(m) + 20.0
    klo = max(0, int(math.floor(m - half)))
    khi = int(math.ceil(m + half))
    k = np.arange(klo, khi + 1)
    logw = k * math.log(m) - m - special.gammaln(k + 1.0)
    return k, np.exp(logw)


def chisq_cdf(x, params: ChiSqParams):
    """CDF of the (non)central chi-squared law; negative x maps to 0.

    Absolute error <= 1e-10 (Poisson-mixture truncation plus the regularized
    incomplete gamma of each central term).
    """
    scalar = np.isscalar(x)
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros(xa.shape, dtype=float)
    pos = xa > 0.0
    if np.any(pos):
        k, w = _poisson_weights(params.lam)
        shapes = 0.5 * params.nu + k
        xh = 0.5 * xa[pos]
        vals = np.empty(xh.shape, dtype=float)
        # chunk to bound the (terms x points) temporary
        step = max(1, 2_000_000 // len(k))
        for i in range(0, len(xh), step):
            block = xh[i : i + step]
            vals[i : i + step] = w @ special.gammainc(shapes[:, None], block[None, :])
        out[pos] = np.clip(vals, 0.0, 1.0)
    return float(out[0]) if scalar else out


def chisq_quantile(p: float, params: ChiSqParams) -> float:
    """Inverse of chisq_cdf, solved by bracketing root search."""
    if not (0.0 < p < 1.0):
        raise ValueError("p must lie strictly in (0, 1)")
    nu, lam = params.nu, params.lam
    hi = nu + lam + 20.0 * math.sqrt(2.0 * nu + 4.0 * lam) + 50.0
    while chisq_cdf(hi, params) < p:
        hi *= 2.0
        if hi > 1e12:
            raise RuntimeError("failed to bracket quantile")
    return float(
        optimize.brentq(
            lambda q: chisq_cdf(q, params) - p, 0.0, hi, xtol=1e-12, maxiter=200
        )
    )


def sample_chisq(stream: RandomStream, params: ChiSqParams, size=None):
    """Draw from the (non)central chi-squared law.

    A noncentral draw is a central chi-squared with nu + 2K df, K ~
    Poisson(lam/2); the central path never touches the Poisson sampler.
    """
    g = stream.gen
    half_nu = 0.5 * params.nu
    if params.lam == 0.0:
        return 2.0 * g.standard_gamma(half_nu, size=size)
    k = g.poisson(0.5 * params.lam, size=size)
    return 2.0 * g.standard_gamma(half_nu + k, size=size)


def _sample_normal(g, size, mu=0.0, sigma=1.0):
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    return g.normal(mu, sigma, size=size)


def _sample_logistic(g, size, loc=0.0, scale=1.0):
    if not scale > 0:
        raise ValueError("scale must be positive")
    return g.logistic(loc, scale, size=size)


def _sample_student_t(g, size, df=1.0):
    if not df > 0:
        raise ValueError("df must be positive")
    return g.standard_t(df, size=size)


def _sample_poisson(g, size, mu=1.0):
    if not mu >= 0:
        raise ValueError("mu must be nonnegative")
    return g.poisson(mu, size=size)


def _sample_neg_binomial(g, size, mu=1.0, alpha=0.0):
    """Mean mu, variance mu + alpha*mu^2; alpha = 0 degenerates to Poisson."""
    if not (mu > 0 and alpha >= 0):
        raise ValueError("need mu > 0 and alpha >= 0")
    if alpha == 0.0:
        return g.poisson(mu, size=size)
    return g.negative_binomial(1.0 / alpha, 1.0 / (1.0 + alpha * mu), size=size)


def _sample_multinomial(g, size, n=1, probs=None):
    probs = np.asarray(probs, dtype=float)
    if probs.ndim != 1 or np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-9:
        raise ValueError("probs must be a probability vector summing to 1")
    if not (isinstance(n, (int, np.integer)) and n > 0):
        raise ValueError("n must be a positive integer")
    return g.multinomial(n, probs, size=size)


FAMILIES = {
    "normal": _sample_normal,
    "logistic": _sample_logistic,
    "student_t": _sample_student_t,
    "poisson": _sample_poisson,
    "neg_binomial": _sample_neg_binomial,
    "multinomial": _sample_multinomial,
}


def sample_family(stream: RandomStream, family: str, size=None, **params):
    """Draw from a named family; see FAMILIES for the supported set."""
    try:
        fn = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
    return fn(stream.gen, size, **params)
