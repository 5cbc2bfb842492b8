"""Cell life-time distributions G(t) with transforms and exact samplers.

Built-in families:

* Exponential(rate)        -- the Markov case
* KendallGamma(k, rate)    -- k exponential cell-cycle stages of rate k*rate,
                              i.e. a Gamma(k, k*rate) life-time
* Rahn(alpha, k)           -- CDF (1 - e^{-alpha t})^k, the maximum of k
                              independent Exp(alpha) stage clocks
* TabulatedCdf(t, G)       -- linear interpolation between measured knots

All built-ins satisfy G(0) = 0 and G(inf) = 1 and are non-lattice.  The
first three are phase-type: `phase_rates` exposes a chain of exponential
stages whose total duration has law G, which downstream code uses to turn
the non-Markov population process into a small Markov system.
"""

from __future__ import annotations

import numpy as np
from scipy import integrate, special

__all__ = ["Exponential", "KendallGamma", "Rahn", "TabulatedCdf", "LifetimeDistribution"]


class LifetimeDistribution:
    """Common interface; concrete families override the abstract pieces."""

    #: number of uniforms one sample consumes (fixed per family so that the
    #: simulator's random stream is identical across backends)
    uniforms_per_draw = 1

    def cdf(self, t):
        raise NotImplementedError

    def laplace_stieltjes(self, beta: float) -> float:
        """integral of e^{-beta t} dG(t) over [0, inf)."""
        raise NotImplementedError

    def discounted_mean(self, beta: float) -> float:
        """integral of t e^{-beta t} dG(t) over [0, inf)."""
        raise NotImplementedError

    def from_uniforms(self, u):
        """Map uniforms of shape (..., uniforms_per_draw) to samples."""
        raise NotImplementedError

    def mean(self) -> float:
        return self.discounted_mean(0.0)

    def median(self) -> float:
        raise NotImplementedError

    @property
    def phase_rates(self):
        """Stage rates of an exponential chain realizing G, or None."""
        return None

    @property
    def is_lattice(self) -> bool:
        return False

    def sample(self, rng, size=None):
        """Draw from G using `rng` (a numpy Generator)."""
        n = 1 if size is None else int(size)
        u = rng.random((n, self.uniforms_per_draw))
        out = self.from_uniforms(u)
        return float(out[0]) if size is None else out

    def _check_t(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ValueError("life-times are nonnegative; got t < 0")
        return t

    def cache_key(self):
        raise NotImplementedError


class Exponential(LifetimeDistribution):
    def __init__(self, rate: float):
        if rate <= 0:
            raise ValueError("rate must be positive")
        self.rate = float(rate)

    def cdf(self, t):
        t = self._check_t(t)
        return -np.expm1(-self.rate * t)

    def laplace_stieltjes(self, beta):
        return self.rate / (self.rate + beta)

    def discounted_mean(self, beta):
        return self.rate / (self.rate + beta) ** 2

    def from_uniforms(self, u):
        u = np.asarray(u)
        return -np.log1p(-u[..., 0]) / self.rate

    def median(self):
        return np.log(2.0) / self.rate

    @property
    def phase_rates(self):
        return np.array([self.rate])

    def cache_key(self):
        return ("exponential", self.rate)

    def __repr__(self):
        return f"Exponential(rate={self.rate})"


class KendallGamma(LifetimeDistribution):
    """Multi-stage cell cycle: k exponential stages, each of rate k*rate.

    The total life-time is Gamma with shape k and rate k*rate, so the mean
    stays 1/rate for every k while the variance shrinks like 1/k.
    """

    def __init__(self, stages: int, rate: float):
        if int(stages) != stages or stages < 1:
            raise ValueError("stages must be a positive integer")
        if rate <= 0:
            raise ValueError("rate must be positive")
        self.stages = int(stages)
        self.rate = float(rate)
        self.uniforms_per_draw = self.stages

    def cdf(self, t):
        t = self._check_t(t)
        return special.gammainc(self.stages, self.stages * self.rate * t)

    def laplace_stieltjes(self, beta):
        k, lam = self.stages, self.rate
        return (k * lam / (k * lam + beta)) ** k

    def discounted_mean(self, beta):
        k, lam = self.stages, self.rate
        return k * (k * lam) ** k / (k * lam + beta) ** (k + 1)

    def from_uniforms(self, u):
        u = np.asarray(u)
        # sum of k exponentials of rate k*rate
        return -np.log1p(-u).sum(axis=-1) / (self.stages * self.rate)

    def median(self):
        return special.gammaincinv(self.stages, 0.5) / (self.stages * self.rate)

    @property
    def phase_rates(self):
        return np.full(self.stages, self.stages * self.rate)

    def cache_key(self):
        return ("kendall", self.stages, self.rate)

    def __repr__(self):
        return f"KendallGamma(stages={self.stages}, rate={self.rate})"


class Rahn(LifetimeDistribution):
    """Life-time with CDF (1 - e^{-alpha t})^k and density
    alpha k e^{-alpha t} (1 - e^{-alpha t})^{k-1}.

    This is the law of the maximum of k independent Exp(alpha) clocks;
    equivalently a chain of exponential stages with rates
    k*alpha, (k-1)*alpha, ..., alpha (the order-statistic spacings).
    """

    def __init__(self, rate: float, stages: int):
        if rate <= 0:
            raise ValueError("rate must be positive")
        if int(stages) != stages or stages < 1:
            raise ValueError("stages must be a positive integer")
        self.rate = float(rate)
        self.stages = int(stages)
        self.uniforms_per_draw = self.stages

    def cdf(self, t):
        t = self._check_t(t)
        return (-np.expm1(-self.rate * t)) ** self.stages

    def pdf(self, t):
        t = np.asarray(t, dtype=float)
        a, k = self.rate, self.stages
        return a * k * np.exp(-a * t) * (-np.expm1(-a * t)) ** (k - 1)

    def laplace_stieltjes(self, beta):
        # Substituting x = e^{-alpha t} turns the transform into a Beta
        # integral: k * B(beta/alpha + 1, k) = prod_i i / (beta/alpha + i).
        i = np.arange(1, self.stages + 1)
        return float(np.prod(i / (beta / self.rate + i)))

    def discounted_mean(self, beta):
        val, err = integrate.quad(
            lambda t: t * np.exp(-beta * t) * self.pdf(t),
            0.0,
            np.inf,
            epsabs=1e-13,
            epsrel=1e-12,
            limit=200,
        )
        return val

    def from_uniforms(self, u):
        u = np.asarray(u)
        # maximum of k exponentials of rate alpha
        return (-np.log1p(-u)).max(axis=-1) / self.rate

    def median(self):
        return -np.log1p(-0.5 ** (1.0 / self.stages)) / self.rate

    @property
    def phase_rates(self):
        return self.rate * np.arange(self.stages, 0, -1, dtype=float)

    def cache_key(self):
        return ("rahn", self.rate, self.stages)

    def __repr__(self):
        return f"Rahn(rate={self.rate}, stages={self.stages})"


class TabulatedCdf(LifetimeDistribution):
    """Piecewise-linear CDF through measured (t, G) knots.

    The knot grid must start at (0, 0) and end with G = 1.  Grids that pile
    more than 99% of the mass onto fewer than 10 knots are flagged as
    lattice-like so that limit-law diagnostics can refuse them.
    """

    def __init__(self, t_knots, g_knots):
        t = np.asarray(t_knots, dtype=float)
        g = np.asarray(g_knots, dtype=float)
        if t.ndim != 1 or t.shape != g.shape or t.size < 2:
            raise ValueError("need matching 1-d knot arrays with at least two knots")
        if t[0] != 0.0 or g[0] != 0.0:
            raise ValueError("knot grid must start at (0, 0)")
        if np.any(np.diff(t) <= 0):
            raise ValueError("t knots must be strictly increasing")
        if np.any(np.diff(g) < 0) or np.any(g < 0) or np.any(g > 1 + 1e-12):
            raise ValueError("G knots must be nondecreasing in [0, 1]")
        if abs(g[-1] - 1.0) > 1e-9:
            raise ValueError("defective life-times (G(inf) < 1) are not supported")
        self.t_knots = t
        self.g_knots = np.clip(g, 0.0, 1.0)
        incr = np.sort(np.diff(self.g_knots))[::-1]
        self._lattice = bool(incr[: min(9, incr.size)].sum() > 0.99)

    def cdf(self, t):
        t = self._check_t(t)
        return np.interp(t, self.t_knots, self.g_knots, left=0.0, right=1.0)

    def laplace_stieltjes(self, beta):
        # Stieltjes sum with trapezoid weights on the knot increments.
        dg = np.diff(self.g_knots)
        w = np.exp(-beta * self.t_knots)
        return float(0.5 * ((w[1:] + w[:-1]) * dg).sum())

    def discounted_mean(self, beta):
        dg = np.diff(self.g_knots)
        w = self.t_knots * np.exp(-beta * self.t_knots)
        return float(0.5 * ((w[1:] + w[:-1]) * dg).sum())

    def from_uniforms(self, u):
        u = np.asarray(u)
        return np.interp(u[..., 0], self.g_knots, self.t_knots)

    def median(self):
        return float(np.interp(0.5, self.g_knots, self.t_knots))

    @property
    def is_lattice(self):
        return self._lattice

    def cache_key(self):
        return ("table", self.t_knots.tobytes(), self.g_knots.tobytes())

    def __repr__(self):
        return f"TabulatedCdf({self.t_knots.size} knots)"
