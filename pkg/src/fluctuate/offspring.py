"""First-generation offspring laws of mutant and non-mutant cells.

An offspring law is a finite probability vector (pi_0, ..., pi_K) over the
number of daughters a cell splits into.  Everything downstream (Malthusian
rates, clone-size generating functions, limit-law checks) is driven by the
generating function f(s) = sum pi_k s^k and the ratio
h(s) = (1 - f(s)) / (1 - s).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError

_PROB_TOL = 1e-12
_FIXED_POINT_TOL = 1e-14
_MAX_FIXED_POINT_ITER = 10**6


class OffspringDistribution:
    """Finite-support offspring law with derived analytic objects.

    Supercriticality (mean number of daughters mu > 1) is enforced at
    construction; the extinction probability q (smallest fixed point of the
    generating function in [0, 1)) is computed eagerly.  Instances are
    immutable and safe to share across threads.
    """

    def __init__(self, probs):
        probs = np.asarray(probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError("offspring probabilities must be a nonempty 1-d sequence")
        if np.any(probs < 0):
            raise ValueError("offspring probabilities must be nonnegative")
        total = probs.sum()
        if abs(total - 1.0) > _PROB_TOL:
            raise ValueError(f"offspring probabilities sum to {total!r}, not 1")
        probs = probs / total
        mean = float(np.arange(probs.size) @ probs)
        if not mean > 1.0:
            raise ValueError(f"offspring law must be supercritical (mu > 1), got mu = {mean}")
        self._probs = probs
        self._probs.setflags(write=False)
        self.mean = mean
        # Tail probabilities P(K > j) are the power-series coefficients of h:
        # h(s) = sum_k pi_k (1 + s + ... + s^{k-1}) = sum_j P(K > j) s^j.
        self._h_coeffs = np.cumsum(probs[::-1])[::-1][1:].copy()
        self._h_coeffs.setflags(write=False)
        self.extinction_prob = extinction_prob(self)

    @property
    def probs(self):
        return self._probs

    @property
    def max_offspring(self) -> int:
        return self._probs.size - 1

    def pgf(self, s):
        """Evaluate f(s) = sum pi_k s^k for |s| <= 1 (scalar or array)."""
        s = np.asarray(s)
        if np.any(np.abs(s) > 1.0 + 1e-12):
            raise ValueError("pgf argument must satisfy |s| <= 1")
        out = np.polynomial.polynomial.polyval(s, self._probs)
        return out if out.ndim else out[()]

    def h(self, s):
        """Evaluate h(s) = (1 - f(s)) / (1 - s), with h(1) = mu.

        Uses the cancellation-free tail-probability expansion
        h(s) = sum_j P(K > j) s^j, which is exact for all s (the singularity
        at s = 1 is removable and needs no special casing).
        """
        s = np.asarray(s)
        if np.any(np.abs(s) > 1.0 + 1e-12):
            raise ValueError("h argument must satisfy |s| <= 1")
        out = np.polynomial.polynomial.polyval(s, self._h_coeffs)
        return out if out.ndim else out[()]

    def h_deficit(self, s):
        """mu - h(1 - s) for s in (0, 1], evaluated without cancellation.

        mu - h(1-s) = sum_j P(K > j) (1 - (1-s)^j); each summand is computed
        through expm1/log1p so the result stays accurate down to s ~ 1e-300.
        """
        s = np.asarray(s, dtype=float)
        j = np.arange(1, self._h_coeffs.size)
        # 1 - (1-s)^j = -expm1(j log1p(-s)); j = 0 contributes nothing.
        terms = -np.expm1(np.multiply.outer(np.log1p(-s), j))
        out = terms @ self._h_coeffs[1:]
        return out if out.ndim else out[()]

    def cache_key(self):
        return ("offspring", self._probs.tobytes())

    def __repr__(self):
        return f"OffspringDistribution({np.array2string(self._probs, separator=', ')})"


def fractional_linear(mu: float, tail_tol: float = 1e-12) -> OffspringDistribution:
    """Truncated fractional-linear law f(s) = s / (s + mu (1 - s)).

    The exact law is geometric: pi_k = mu^{-1} ((mu-1)/mu)^{k-1} for k >= 1.
    The series is cut once the remaining tail mass drops below `tail_tol`
    and renormalized, which perturbs mu by O(tail_tol).
    """
    if mu <= 1.0:
        raise ValueError("fractional-linear law requires mu > 1")
    ratio = (mu - 1.0) / mu
    # Tail mass beyond k = K is ratio**K.
    kmax = max(2, int(np.ceil(np.log(tail_tol) / np.log(ratio))))
    probs = np.zeros(kmax + 1)
    probs[1:] = (1.0 / mu) * ratio ** np.arange(kmax)
    probs /= probs.sum()
    return OffspringDistribution(probs)


def pgf_eval(dist: OffspringDistribution, s):
    """Functional form of :meth:`OffspringDistribution.pgf`."""
    return dist.pgf(s)


def h_eval(dist: OffspringDistribution, s):
    """Functional form of :meth:`OffspringDistribution.h`."""
    return dist.h(s)


def extinction_prob(dist: OffspringDistribution) -> float:
    """Smallest fixed point of f in [0, 1) by monotone iteration from 0.

    The iteration q_{n+1} = f(q_n) increases monotonically to the smallest
    fixed point, so no root bracketing is needed.
    """
    if dist.probs[0] == 0.0:
        return 0.0
    q = 0.0
    for _ in range(_MAX_FIXED_POINT_ITER):
        q_next = float(dist.pgf(q))
        if abs(q_next - q) < _FIXED_POINT_TOL:
            if not q_next < 1.0:
                raise ConvergenceError("extinction probability reached 1; law not supercritical")
            return q_next
        q = q_next
    raise ConvergenceError(
        f"extinction-probability iteration did not converge in {_MAX_FIXED_POINT_ITER} steps"
    )


@dataclass(frozen=True)
class StarProbeReport:
    """Log-log slope fit of mu - h(1-s) against s on a decreasing grid."""

    omega_estimate: float
    s_grid: np.ndarray
    deficits: np.ndarray
    residuals: np.ndarray
    truncated: bool = field(default=False)


def star_probe(dist: OffspringDistribution, s_grid) -> StarProbeReport:
    """Estimate the regularity index of the offspring law near s = 1.

    Fits the slope of log(mu - h(1-s)) versus log s.  For any finite-support
    law with a finite second factorial moment the deficit behaves like a
    constant times s, so the slope estimate tends to 1.  Underflowing grid
    entries are dropped and reported via `truncated`.
    """
    s_grid = np.asarray(s_grid, dtype=float)
    if s_grid.ndim != 1 or s_grid.size < 2:
        raise ValueError("s_grid must contain at least two points")
    if np.any(s_grid <= 0) or np.any(s_grid > 0.5):
        raise ValueError("s_grid must lie in (0, 0.5]")
    if np.any(np.diff(s_grid) >= 0):
        raise ValueError("s_grid must be strictly decreasing")
    deficits = dist.h_deficit(s_grid)
    ok = deficits > 0
    truncated = not bool(ok.all())
    s_used, d_used = s_grid[ok], deficits[ok]
    if s_used.size < 2:
        raise ValueError("deficit underflowed on all but one grid point")
    x, y = np.log(s_used), np.log(d_used)
    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    return StarProbeReport(
        omega_estimate=float(slope),
        s_grid=s_used,
        deficits=d_used,
        residuals=residuals,
        truncated=truncated,
    )
