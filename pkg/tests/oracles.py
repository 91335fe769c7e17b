"""Independent oracles for the test suite.

Kept deliberately separate from the library's own numerics: the incomplete
gamma here is a hand-rolled series / continued fraction, the normal CDF goes
through math.erfc, densities for quadrature come from scipy.stats, and the
divergence oracle is plain trapezoid summation on a fine fixed grid.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, stats

_EPS = 1e-15
_MAX_ITER = 10_000


def reg_inc_gamma_p(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) by series or continued fraction."""
    if x < 0 or a <= 0:
        raise ValueError("need x >= 0 and a > 0")
    if x == 0.0:
        return 0.0
    lg = math.lgamma(a)
    if x < a + 1.0:
        # series: P(a,x) = x^a e^-x / Gamma(a) * sum x^n / (a)_{n+1}
        term = 1.0 / a
        total = term
        ap = a
        for _ in range(_MAX_ITER):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * _EPS:
                break
        return total * math.exp(-x + a * math.log(x) - lg)
    # Lentz continued fraction for Q(a,x)
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    q = h * math.exp(-x + a * math.log(x) - lg)
    return 1.0 - q


def central_chisq_cdf(x: float, nu: float) -> float:
    if x <= 0:
        return 0.0
    return reg_inc_gamma_p(0.5 * nu, 0.5 * x)


def central_chisq_quantile(p: float, nu: float) -> float:
    """Bisection on the oracle CDF."""
    lo, hi = 0.0, nu + 20.0 * math.sqrt(2.0 * nu) + 50.0
    while central_chisq_cdf(hi, nu) < p:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if central_chisq_cdf(mid, nu) < p:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _ncx2_pdf(x, nu, lam):
    if lam == 0.0:
        return stats.chi2.pdf(x, nu)
    return stats.ncx2.pdf(x, nu, lam)


def transform_moments(fn, nu: float, lam: float) -> tuple[float, float]:
    """Exact mean and sd of fn(S) for S ~ chi2(nu, lam), by adaptive quadrature."""
    hi = nu + lam + 40.0 * math.sqrt(2.0 * nu + 4.0 * lam) + 20.0
    m1, _ = integrate.quad(lambda x: fn(x) * _ncx2_pdf(x, nu, lam), 0.0, hi,
                           points=[nu], limit=400)
    m2, _ = integrate.quad(lambda x: fn(x) ** 2 * _ncx2_pdf(x, nu, lam), 0.0, hi,
                           points=[nu], limit=400)
    return m1, math.sqrt(max(m2 - m1 * m1, 0.0))


def trapezoid_J(nu: float, lam_a: float, lam_b: float, n_points: int = 200_001) -> float:
    """Symmetrized divergence by trapezoid sums on a fine fixed grid.

    Integrates in u = sqrt(x) so the nu < 2 endpoint singularity of the
    density does not poison the uniform grid.
    """
    if lam_a == lam_b:
        return 0.0
    hi = max(nu + lam_a, nu + lam_b) + 40.0 * math.sqrt(2.0 * nu + 4.0 * max(lam_a, lam_b)) + 20.0
    u = np.linspace(1e-9, math.sqrt(hi), n_points)
    x = u * u
    la = stats.ncx2.logpdf(x, nu, lam_a) if lam_a > 0 else stats.chi2.logpdf(x, nu)
    lb = stats.ncx2.logpdf(x, nu, lam_b) if lam_b > 0 else stats.chi2.logpdf(x, nu)
    ok = (la > -690) | (lb > -690)
    integrand = np.zeros_like(x)
    integrand[ok] = (np.exp(la[ok]) - np.exp(lb[ok])) * (la[ok] - lb[ok]) * 2.0 * u[ok]
    return float(np.trapezoid(integrand, u))


def uniform_sphere_simplex(rng: np.random.Generator, r: int, radius: float,
                           size: int) -> np.ndarray:
    """Random points at Euclidean distance `radius` from uniform, inside the
    simplex (rejection on positivity)."""
    out = np.empty((size, r))
    got = 0
    while got < size:
        z = rng.standard_normal((2 * (size - got) + 16, r))
        z -= z.mean(axis=1, keepdims=True)
        norms = np.linalg.norm(z, axis=1)
        z = z[norms > 1e-12]
        norms = norms[norms > 1e-12]
        pts = 1.0 / r + radius * z / norms[:, None]
        pts = pts[np.all(pts > 0.0, axis=1)]
        take = min(len(pts), size - got)
        out[got : got + take] = pts[:take]
        got += take
    return out
