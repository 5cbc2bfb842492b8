"""Independent closed-form references used to validate the numerical routes.

These are deliberately kept separate from the production code paths: each
one is an analytic solution (or a classical recursion) that a numerical
route is tested against, never a substitute for it.
"""

from __future__ import annotations

import numpy as np
from scipy import integrate


def yule_pgf(s, t, rate=1.0):
    """PGF of a binary-splitting clone with exponential life-times.

    F_t(s) = s e^{-rate t} / (1 - s (1 - e^{-rate t})); solves the renewal
    equation for f(s) = s^2, G(t) = 1 - e^{-rate t}.
    """
    s = np.asarray(s, dtype=np.complex128)
    e = np.exp(-rate * np.asarray(t, dtype=float))
    out = s * e / (1.0 - s * (1.0 - e))
    return out if out.ndim else out[()]


def lea_coulson_g(s):
    """Discounted clone-size PGF for the binary/exponential (neutral) model:
    g(s) = 1 + ((1-s)/s) log(1-s), with g(0) = 0."""
    s = np.asarray(s, dtype=np.complex128)
    out = np.ones_like(s)
    nz = s != 0
    out[nz] = 1.0 + (1.0 - s[nz]) / s[nz] * np.log(1.0 - s[nz])
    out[~nz] = 0.0
    return out if out.ndim else out[()]


def lea_coulson_pmf(m: float, r_max: int) -> np.ndarray:
    """Classical recursion for the mutant-count law of the binary/exponential
    model, g_LD(s) = (1-s)^{m(1-s)/s}.

    The clone-size law has coefficients b_k = 1/(k(k+1)), so differentiating
    the compound-Poisson PGF gives

        p_0 = e^{-m},   p_r = (m/r) sum_{j=0}^{r-1} p_j / (r - j + 1).
    """
    p = np.zeros(r_max + 1)
    p[0] = np.exp(-m)
    inv = 1.0 / np.arange(2, r_max + 2)  # inv[k-1] = 1/(k+1)
    for r in range(1, r_max + 1):
        p[r] = (m / r) * np.dot(p[:r], inv[r - 1 :: -1])
    return p


def lea_coulson_clone_coeffs(k_max: int) -> np.ndarray:
    """Power-series coefficients of lea_coulson_g: b_0 = 0, b_k = 1/(k(k+1))."""
    k = np.arange(1, k_max + 1, dtype=float)
    return np.concatenate([[0.0], 1.0 / (k * (k + 1.0))])


def harmonic_number(n: int) -> float:
    """H_n computed by direct summation (smallest terms first)."""
    return float(np.sum(1.0 / np.arange(n, 0, -1, dtype=float)))


def geometric_survival_integral(mu: float, n: int) -> float:
    """Quadrature of integral_0^infty (1 - (1 - mu^{-u})^n) du.

    Equals H_n / log(mu); used as the identity check's left-hand side.
    """
    log_mu = np.log(mu)
    u_knee = np.log(n) / log_mu if n > 1 else 0.0
    upper = u_knee + 80.0 / log_mu

    def integrand(u):
        return -np.expm1(n * np.log1p(-(mu**-u)))

    val, _ = integrate.quad(
        integrand,
        0.0,
        upper,
        points=[u_knee] if 0.0 < u_knee < upper else None,
        limit=400,
        epsabs=1e-12,
        epsrel=1e-11,
    )
    # tail beyond `upper` is below n mu^{-upper} / log(mu)
    return val
