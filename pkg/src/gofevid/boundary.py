"""Equivalence boundaries on the probability simplex and sample-size planning."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EquivalenceSpec",
    "euclid_d",
    "sup_M",
    "lambda0_uniform",
    "inradius",
    "least_divergent_point",
    "sample_size",
    "table2",
]

_KINDS = ("euclidean", "sup", "weighted")


@dataclass(frozen=True)
class EquivalenceSpec:
    """What counts as 'equivalent': a boundary of relative error k on r cells.

    kind selects the operative notion: a Euclidean ball of radius
    d0 = k/sqrt(r(r-1)), a sup-metric box of radius M0 = k/r, or the
    weighted relative-discrepancy form used with non-uniform cell
    probabilities.  d0 and M0 are always populated for reference.
    """

    r: int
    k: float
    kind: str = "euclidean"
    d0: float = 0.0
    M0: float = 0.0

    def __post_init__(self):
        if not (isinstance(self.r, (int, np.integer)) and self.r >= 2):
            raise ValueError("r must be an integer >= 2")
        if not (0.0 < self.k <= 1.0):
            raise ValueError("k must lie in (0, 1]")
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}")
        object.__setattr__(self, "d0", self.k / math.sqrt(self.r * (self.r - 1)))
        object.__setattr__(self, "M0", self.k / self.r)

    def lambda0(self, n: int) -> float:
        """Boundary noncentrality for sample size n: n k^2 / (r - 1)."""
        if self.kind == "sup":
            raise ValueError("lambda0 is not defined for the sup-metric boundary")
        return lambda0_uniform(n, self.r, self.k)


def _as_simplex(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or len(arr) < 2:
        raise ValueError(f"{name} must be a 1-d probability vector of length >= 2")
    if np.any(arr < 0):
        raise ValueError(f"{name} must be componentwise nonnegative")
    if abs(arr.sum() - 1.0) > 1e-6:
        raise ValueError(f"{name} must sum to 1, got {arr.sum()!r}")
    return arr


def euclid_d(p, q) -> float:
    """Euclidean distance between two probability vectors."""
    pa, qa = _as_simplex(p, "p"), _as_simplex(q, "q")
    if pa.shape != qa.shape:
        raise ValueError("p and q must have the same length")
    return float(np.sqrt(((pa - qa) ** 2).sum()))


def sup_M(p, q) -> float:
    """Sup-metric distance max_i |p_i - q_i|."""
    pa, qa = _as_simplex(p, "p"), _as_simplex(q, "q")
    if pa.shape != qa.shape:
        raise ValueError("p and q must have the same length")
    return float(np.abs(pa - qa).max())


def lambda0_uniform(n: int, r: int, k: float) -> float:
    """Boundary noncentrality n k^2 / (r - 1) for equivalence to uniformity."""
    if not (isinstance(r, (int, np.integer)) and r >= 2):
        raise ValueError("r must be an integer >= 2")
    if not (0.0 < k <= 1.0):
        raise ValueError("k must lie in (0, 1]")
    if n <= 0:
        raise ValueError("n must be positive")
    return n * k * k / (r - 1)


def inradius(r: int) -> float:
    """Radius 1/sqrt(r(r-1)) of the ball inscribed in the (r-1)-simplex."""
    if not (isinstance(r, (int, np.integer)) and r >= 2):
        raise ValueError("r must be an integer >= 2")
    return 1.0 / math.sqrt(r * (r - 1))


def least_divergent_point(r: int, d0: float) -> np.ndarray:
    """The distribution at Euclidean distance d0 from uniform with least
    symmetrized KL divergence.

    Closed form: u_r + d0*sqrt(1-1/r)*(1, -1/(r-1), ..., -1/(r-1)); returned
    with the large coordinate first (any permutation is equally optimal).
    Requires d0 < sqrt(1-1/r) so that all entries stay positive.
    """
    if not (isinstance(r, (int, np.integer)) and r >= 2):
        raise ValueError("r must be an integer >= 2")
    if not (0.0 < d0 < math.sqrt(1.0 - 1.0 / r)):
        raise ValueError(f"d0 must lie in (0, sqrt(1 - 1/r)) = (0, {math.sqrt(1 - 1 / r)})")
    step = d0 * math.sqrt(1.0 - 1.0 / r)
    p = np.full(r, 1.0 / r - step / (r - 1))
    p[0] = 1.0 / r + step
    return p


def sample_size(m0: float, nu: float, r: int, d0: float) -> int:
    """Minimal n achieving maximum expected equivalence evidence m0.

    ceil of max{((m0 + sqrt(nu/2))^2 - nu/2) / (r d0^2), 5r}; the 5r floor
    keeps every expected cell count at or above 5.
    """
    if not (m0 > 0 and nu > 0 and d0 > 0):
        raise ValueError("m0, nu, d0 must all be positive")
    if not (isinstance(r, (int, np.integer)) and r >= 2):
        raise ValueError("r must be an integer >= 2")
    lam0 = (m0 + math.sqrt(0.5 * nu)) ** 2 - 0.5 * nu
    return int(math.ceil(max(lam0 / (r * d0 * d0), 5.0 * r)))


def table2(m0_list, r_list, k: float = 1.0) -> np.ndarray:
    """Matrix of minimal sample sizes over a grid of m0 (rows) and r (cols).

    Each entry is recomputed exactly with nu = r - 1 and d0 = k/sqrt(r(r-1));
    rescaling a k=1 table by 1/k^2 is only approximate because the ceiling
    and the 5r floor do not commute with scaling.
    """
    if not (0.0 < k <= 1.0):
        raise ValueError("k must lie in (0, 1]")
    out = np.empty((len(m0_list), len(r_list)), dtype=np.int64)
    for i, m0 in enumerate(m0_list):
        for j, r in enumerate(r_list):
            out[i, j] = sample_size(m0, r - 1, r, k / math.sqrt(r * (r - 1)))
    return out
