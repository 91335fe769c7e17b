"""Symmetrized Kullback-Leibler divergences: closed form for multinomials,
numerical quadrature for pairs of noncentral chi-squared laws."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .dist import ChiSqParams, _poisson_weights
from .evidence import EquivalenceParams

__all__ = [
    "DensityGrid",
    "kld_J_multinomial",
    "J_uniform",
    "chisq_density",
    "J_noncentral",
    "signed_root_J",
]

_LOG_FLOOR = -690.0  # exp() underflows to 0 a bit below this


def _positive_simplex(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or len(arr) < 2:
        raise ValueError(f"{name} must be a 1-d probability vector of length >= 2")
    if np.any(arr <= 0):
        raise ValueError(f"{name} must be componentwise positive (divergence is infinite otherwise)")
    if abs(arr.sum() - 1.0) > 1e-6:
        raise ValueError(f"{name} must sum to 1, got {arr.sum()!r}")
    return arr


def kld_J_multinomial(p, q, n: int = 1) -> float:
    """Symmetrized divergence n * sum((p_i - q_i) ln(p_i / q_i)) of two multinomials."""
    pa, qa = _positive_simplex(p, "p"), _positive_simplex(q, "q")
    if pa.shape != qa.shape:
        raise ValueError("p and q must have the same length")
    if n <= 0:
        raise ValueError("n must be positive")
    return float(n * ((pa - qa) * np.log(pa / qa)).sum())


def J_uniform(p, n: int = 1) -> float:
    """Symmetrized divergence of p from uniform: n * sum((p_i - 1/r) ln p_i)."""
    pa = _positive_simplex(p, "p")
    if n <= 0:
        raise ValueError("n must be positive")
    r = len(pa)
    return float(n * ((pa - 1.0 / r) * np.log(pa)).sum())


def _chisq_logpdf(x: np.ndarray, params: ChiSqParams) -> np.ndarray:
    """Log density of the Poisson-mixture representation, stable in the tails."""
    k, w = _poisson_weights(params.lam)
    logw = np.log(w)
    shapes = 0.5 * params.nu + k
    lx = np.log(x)
    # terms[i, j] = logw[i] + log gamma-density(shape_i, x_j / 2) - log 2
    terms = (
        logw[:, None]
        + (shapes[:, None] - 1.0) * (lx[None, :] - math.log(2.0))
        - 0.5 * x[None, :]
        - special.gammaln(shapes)[:, None]
        - math.log(2.0)
    )
    return special.logsumexp(terms, axis=0)


def chisq_density(x, params: ChiSqParams):
    """Density of the (non)central chi-squared law; nonpositive x maps to 0."""
    scalar = np.isscalar(x)
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros(xa.shape, dtype=float)
    pos = xa > 0.0
    if np.any(pos):
        out[pos] = np.exp(_chisq_logpdf(xa[pos], params))
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class DensityGrid:
    """A density tabulated on an equally spaced support grid."""

    support: np.ndarray
    step: float
    values: np.ndarray

    def __post_init__(self):
        if len(self.support) != len(self.values) or len(self.support) < 2:
            raise ValueError("support and values must be equal-length, with >= 2 points")
        if not self.step > 0:
            raise ValueError("step must be positive")
        if np.any(np.asarray(self.values) < 0):
            raise ValueError("density values must be nonnegative")
        total = float(np.trapezoid(self.values, dx=self.step))
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"density must integrate to 1 (trapezoid rule), got {total!r}")

    @classmethod
    def from_params(cls, params: ChiSqParams, n_points: int = 8192) -> "DensityGrid":
        """Tabulate a chi-squared density; needs nu >= 2, since below that the
        density is unbounded at 0 and a uniform grid cannot carry its mass."""
        if params.nu < 2.0:
            raise ValueError("uniform-grid tabulation requires nu >= 2")
        hi = _support_bound(params)
        support = np.linspace(0.0, hi, n_points)
        return cls(support=support, step=float(support[1] - support[0]),
                   values=chisq_density(support, params))


def _support_bound(params: ChiSqParams) -> float:
    mean = params.nu + params.lam
    sd = math.sqrt(2.0 * params.nu + 4.0 * params.lam)
    return mean + 40.0 * sd + 20.0


def J_noncentral(nu: float, lambdaA: float, lambdaB: float, epsabs: float = 1e-6) -> float:
    """Symmetrized divergence between chi2(nu, lambdaA) and chi2(nu, lambdaB).

    Integrates (f_A - f_B) ln(f_A / f_B) by adaptive quadrature over the
    union of the effective supports; regions where both densities underflow
    contribute nothing (the integrand there is below any representable tail
    bound).
    """
    if not (nu > 0 and lambdaA >= 0 and lambdaB >= 0):
        raise ValueError("need nu > 0 and nonnegative noncentralities")
    if lambdaA == lambdaB:
        return 0.0
    pa = ChiSqParams(nu, lambdaA)
    pb = ChiSqParams(nu, lambdaB)
    hi = max(_support_bound(pa), _support_bound(pb))

    def integrand(x: float) -> float:
        xa = np.array([x])
        la = float(_chisq_logpdf(xa, pa)[0])
        lb = float(_chisq_logpdf(xa, pb)[0])
        if la < _LOG_FLOOR and lb < _LOG_FLOOR:
            return 0.0
        return (math.exp(la) - math.exp(lb)) * (la - lb)

    breaks = sorted({nu + lambdaA, nu + lambdaB} - {0.0, hi})
    val, _ = integrate.quad(integrand, 0.0, hi, points=breaks or None,
                            limit=400, epsabs=epsabs, epsrel=1e-9)
    return max(val, 0.0)


def signed_root_J(params: EquivalenceParams, lam: float, epsabs: float = 1e-6) -> float:
    """sgn(lambda0 - lam) * sqrt(J(lambda0, lam)); comparable to the
    first-order mean of the equivalence evidence."""
    if not lam >= 0:
        raise ValueError("lam must be nonnegative")
    j = J_noncentral(params.nu, params.lambda0, lam, epsabs=epsabs)
    return math.copysign(math.sqrt(j), params.lambda0 - lam)
