"""Malthusian growth rate, the proliferation correction factor n1, and
neutrality checks.

The Malthusian parameter beta of a proliferation model (offspring law plus
life-time law) is the unique positive root of

    mu * integral e^{-beta t} dG(t) = 1.

A mutation is neutral when the mutant model shares the non-mutant beta.
The correction factor

    n1 = (mu - 1) / (beta mu^2 * integral t e^{-beta t} dG(t))

rescales fluctuation-experiment estimates of the expected mutation count;
it equals 1 for exponential life-times and is bounded below by
(mu - 1)/(mu ln mu) for every life-time law.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .lifetime import LifetimeDistribution
from .offspring import OffspringDistribution

_BETA_TOL = 1e-12
_BETA_CAP = 2.0**60


def solve_beta(offspring: OffspringDistribution, lifetime: LifetimeDistribution) -> float:
    """Unique beta > 0 with mu * L(beta) = 1, by bracketing + bisection.

    mu * L is continuous and strictly decreasing from mu > 1 at beta = 0,
    so a geometric expansion of the upper bracket always finds a sign
    change unless the transform is defective.
    """
    mu = offspring.mean

    def excess(beta):
        return mu * lifetime.laplace_stieltjes(beta) - 1.0

    hi = 1.0
    while excess(hi) > 0.0:
        hi *= 2.0
        if hi > _BETA_CAP:
            raise NumericalError("no Malthusian root below 2^60; transform looks defective")
    lo = 0.0
    while hi - lo > _BETA_TOL:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def compute_n1(
    offspring: OffspringDistribution, lifetime: LifetimeDistribution, beta: float
) -> float:
    """Proliferation correction factor for a model with Malthusian rate beta."""
    mu = offspring.mean
    return (mu - 1.0) / (beta * mu**2 * lifetime.discounted_mean(beta))


def n1_lower_bound(mu: float) -> float:
    """Universal lower bound (mu - 1)/(mu ln mu), valid for every life-time law."""
    if mu <= 1.0:
        raise ValueError("bound requires mu > 1")
    return (mu - 1.0) / (mu * np.log(mu))


def kendall_beta(stages: int, rate: float, mu: float) -> float:
    """Closed-form Malthusian rate for the multi-stage Gamma life-time."""
    return stages * rate * (mu ** (1.0 / stages) - 1.0)


def kendall_n1(stages: int, mu: float) -> float:
    """Closed-form correction factor for the multi-stage Gamma life-time."""
    return (mu - 1.0) / (stages * (mu - mu ** (1.0 - 1.0 / stages)))


def rahn_beta_heuristic(rate: float, stages: int, mu: float) -> float:
    """Rough Malthusian rate alpha (k+1) (mu^{1/k} - 1) / 2 for Rahn life-times.

    Diagnostic only; the generic root-finder is always used for computation.
    """
    return rate * (stages + 1) * (mu ** (1.0 / stages) - 1.0) / 2.0


def rahn_n1(rate: float, stages: int, mu: float, beta: float) -> float:
    """Closed-form correction factor for Rahn life-times at a given beta."""
    i = np.arange(1, stages + 1)
    return (rate / beta) * ((mu - 1.0) / mu) / float(np.sum(1.0 / (beta / rate + i)))


def check_neutrality(
    nonmutant_offspring: OffspringDistribution,
    nonmutant_lifetime: LifetimeDistribution,
    mutant_offspring: OffspringDistribution,
    mutant_lifetime: LifetimeDistribution,
) -> float:
    """Residual |mu_mutant * L_mutant(beta) - 1| at the non-mutant beta.

    A residual below 1e-9 declares the mutation neutral.
    """
    beta = solve_beta(nonmutant_offspring, nonmutant_lifetime)
    return abs(mutant_offspring.mean * mutant_lifetime.laplace_stieltjes(beta) - 1.0)


NEUTRALITY_TOL = 1e-9


@dataclass(frozen=True)
class ProliferationModel:
    """One cell type's offspring law and life-time law with derived rates."""

    offspring: OffspringDistribution
    lifetime: LifetimeDistribution
    beta: float
    n1: float

    @classmethod
    def build(cls, offspring: OffspringDistribution, lifetime: LifetimeDistribution):
        beta = solve_beta(offspring, lifetime)
        n1 = compute_n1(offspring, lifetime, beta)
        bound = n1_lower_bound(offspring.mean)
        if n1 < bound - 1e-12:
            raise NumericalError(
                f"n1 = {n1} violates the universal lower bound {bound}; "
                "the discounted-mean integral is inaccurate"
            )
        residual = abs(offspring.mean * lifetime.laplace_stieltjes(beta) - 1.0)
        if residual > 1e-10:
            raise NumericalError(f"Malthusian residual {residual} too large")
        return cls(offspring=offspring, lifetime=lifetime, beta=beta, n1=n1)

    def cache_key(self):
        return (self.offspring.cache_key(), self.lifetime.cache_key())
