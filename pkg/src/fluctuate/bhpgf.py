"""Clone-size generating functions for general proliferation models.

F_u(s), the PGF of the number of cells a clone of age u contains, solves
the life-time renewal equation

    F_u(s) = (1 - G(u)) s + integral_0^u f(F_{u-y}(s)) dG(y).

The growth-rate discounted transform

    g(s) = beta * integral_0^infty e^{-beta u} F_u(s) du

is the clone-size PGF entering the mutant-count law.  Two independent
routes compute it:

* the renewal route marches the Volterra equation on a uniform time grid
  (works for every life-time law, including tabulated ones);
* the phase route rewrites phase-type life-times (exponential, multi-stage
  Gamma, Rahn) as a chain of exponential stages, which turns the clone into
  a small Markov system integrated by fixed-step RK4.

The routes cross-validate each other; the phase route is preferred where
available because its cost per evaluation point is far lower, which matters
when g is needed at hundreds of thousands of points on a circle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from ._backend import phase_march, renewal_march
from .errors import NumericalError
from .lifetime import Exponential
from .malthus import ProliferationModel
from .offspring import OffspringDistribution

DEFAULT_HORIZON_FACTOR = 30.0


@dataclass(frozen=True)
class PgfGrid:
    """F_u(s) sampled on a uniform time grid for a set of points s."""

    h: float
    horizon: float
    points: np.ndarray
    values: np.ndarray  # values[i, p] = F_{i h}(s_p)

    @property
    def times(self) -> np.ndarray:
        return self.h * np.arange(self.values.shape[0])


def default_step(model: ProliferationModel) -> float:
    return min(1e-2 / model.beta, model.lifetime.median() / 50.0)


def default_horizon(model: ProliferationModel) -> float:
    return DEFAULT_HORIZON_FACTOR / model.beta


def solve_renewal(model: ProliferationModel, points, h=None, horizon=None) -> PgfGrid:
    """Solve the renewal equation on a uniform grid with step h up to horizon.

    The step must resolve the life-time law: G(h) < 0.1 is required.  The
    march rejects itself if any |F| exceeds 1 + 1e-8.
    """
    points = np.atleast_1d(np.asarray(points, dtype=np.complex128))
    if np.any(np.abs(points) > 1.0 + 1e-12):
        raise ValueError("renewal points must satisfy |s| <= 1")
    if h is None:
        h = default_step(model)
    if horizon is None:
        horizon = default_horizon(model)
    if model.lifetime.cdf(h) >= 0.1:
        raise ValueError(f"step h={h} too coarse: G(h) = {model.lifetime.cdf(h):.3f} >= 0.1")
    n_steps = int(np.ceil(horizon / h))
    grid_t = h * np.arange(n_steps + 1)
    cdf = model.lifetime.cdf(grid_t)
    surv = 1.0 - cdf
    dG = np.empty(n_steps + 1)
    dG[0] = 0.0
    dG[1:] = np.diff(cdf)
    values = renewal_march(points, model.offspring.probs, surv, dG)
    return PgfGrid(h=h, horizon=n_steps * h, points=points, values=values)


def compute_g(model: ProliferationModel, grid: PgfGrid, s) -> complex:
    """Discounted transform g(s) from a solved grid by trapezoidal quadrature.

    Beyond the horizon F_u(s) is replaced by the extinction probability q,
    giving the tail correction q e^{-beta U}; a warning is raised when that
    correction is not negligible relative to the result.
    """
    s = complex(s)
    matches = np.nonzero(np.isclose(grid.points, s, rtol=0, atol=1e-15))[0]
    if matches.size == 0:
        raise ValueError(f"s={s} is not one of the grid points")
    col = grid.values[:, matches[0]]
    beta = model.beta
    u = grid.times
    integrand = beta * np.exp(-beta * u) * col
    body = np.trapezoid(integrand, dx=grid.h)
    tail = model.offspring.extinction_prob * np.exp(-beta * grid.horizon)
    g = body + tail
    if tail > 1e-8 * max(abs(g), 1e-300):
        warnings.warn(
            f"horizon tail correction {tail:.3e} exceeds 1e-8 of g; increase the horizon",
            stacklevel=2,
        )
    result = complex(g)
    if abs(s.imag) == 0.0 and s.real <= 1.0:
        return result.real if abs(result.imag) < 1e-12 else result
    return result


def _phase_steps(model: ProliferationModel, horizon: float, tol: float) -> int:
    """Fixed RK4 step count for a target global accuracy on g."""
    rates = model.lifetime.phase_rates
    scale = max(float(np.max(rates)), model.beta)
    h = (120.0 * tol / (horizon * scale**5)) ** 0.25
    h = min(h, 0.2 / scale)
    return int(np.ceil(horizon / h))


def phase_g(model: ProliferationModel, points, tol=1e-10, horizon=None):
    """g at arbitrary points via the phase-type Markov system (fast route)."""
    rates = model.lifetime.phase_rates
    if rates is None:
        raise ValueError("life-time law has no exponential-stage representation")
    points = np.atleast_1d(np.asarray(points, dtype=np.complex128))
    if horizon is None:
        horizon = default_horizon(model)
    n_steps = _phase_steps(model, horizon, tol)
    g_raw, _ = phase_march(points, model.offspring.probs, rates, model.beta, horizon, n_steps)
    return g_raw + model.offspring.extinction_prob * np.exp(-model.beta * horizon)


def g_values(model: ProliferationModel, points, route="auto", tol=1e-10, h=None, horizon=None):
    """g(s) for an array of points, choosing the route automatically.

    route = "phase" forces the stage-chain fast route (phase-type life-times
    only); "renewal" forces the Volterra march; "auto" prefers the phase
    route when available.
    """
    points = np.atleast_1d(np.asarray(points, dtype=np.complex128))
    if route == "auto":
        route = "phase" if model.lifetime.phase_rates is not None else "renewal"
    if route == "phase":
        return phase_g(model, points, tol=tol, horizon=horizon)
    if route != "renewal":
        raise ValueError(f"unknown route {route!r}")
    grid = solve_renewal(model, points, h=h, horizon=horizon)
    return np.array([compute_g(model, grid, s) for s in points])


def g_on_circle(model: ProliferationModel, radius: float, m_points: int, tol=1e-9):
    """g at the m_points-th roots of unity scaled by `radius`.

    Exploits g(conj s) = conj g(s): only the upper half circle is computed.
    Non-phase-type life-times fall back to the renewal route in chunks.
    """
    if not 0.0 < radius < 1.0:
        raise ValueError("radius must lie in (0, 1)")
    half = m_points // 2
    theta = 2.0 * np.pi * np.arange(half + 1) / m_points
    s_half = radius * np.exp(1j * theta)
    if model.lifetime.phase_rates is not None:
        g_half = phase_g(model, s_half, tol=tol)
    else:
        chunks = []
        for lo in range(0, s_half.size, 256):
            pts = s_half[lo : lo + 256]
            grid = solve_renewal(model, pts)
            chunks.append(np.array([compute_g(model, grid, s) for s in pts]))
        g_half = np.concatenate(chunks)
    g = np.empty(m_points, dtype=np.complex128)
    g[: half + 1] = g_half
    g[half + 1 :] = np.conj(g_half[1 : m_points - half][::-1])
    return g


@dataclass(frozen=True)
class DeltaProbeResult:
    """Sequence delta(s_j) = gamma(s_j) + n1 log(1 - s_j) along s_j -> 1."""

    s_values: np.ndarray
    gamma_values: np.ndarray
    delta_values: np.ndarray
    delta_limit: float
    increments_decreasing: bool
    truncated_at: int | None


def delta_probe(
    model: ProliferationModel,
    j_start: int = 3,
    j_stop: int = 20,
    route: str = "auto",
    g_tol: float = 1e-12,
) -> DeltaProbeResult:
    """Probe the finite limit of gamma(s) + n1 log(1-s) as s -> 1.

    Evaluates along s_j = 1 - 2^{-j}.  The probe stops once 1 - g(s_j)
    drops within 100x the quadrature tolerance (the ratio gamma would be
    noise beyond that).  The returned limit is the last computed value; a
    non-Cauchy flag is set when the increments stop decreasing by more than
    the estimated noise floor.
    """
    js = np.arange(j_start, j_stop + 1)
    one_minus_s = 2.0 ** (-js.astype(float))
    s = 1.0 - one_minus_s
    g = g_values(model, s, route=route, tol=g_tol)
    g = np.real_if_close(g, tol=1e6)
    one_minus_g = 1.0 - g.real
    keep = one_minus_g >= 100.0 * g_tol
    truncated_at = None
    if not keep.all():
        first_bad = int(np.argmin(keep))
        truncated_at = int(js[first_bad])
        sl = slice(0, first_bad)
        s, one_minus_s, one_minus_g = s[sl], one_minus_s[sl], one_minus_g[sl]
    if s.size < 3:
        raise NumericalError("delta probe retained fewer than three usable points")
    gamma = one_minus_g / one_minus_s
    delta = gamma + model.n1 * np.log(one_minus_s)
    increments = np.abs(np.diff(delta))
    noise = 100.0 * g_tol / one_minus_s[1:]
    ok = True
    for i in range(increments.size - 1):
        if increments[i + 1] > increments[i] + max(noise[i + 1], 1e-14):
            ok = False
            break
    return DeltaProbeResult(
        s_values=s,
        gamma_values=gamma,
        delta_values=delta,
        delta_limit=float(delta[-1]),
        increments_decreasing=ok,
        truncated_at=truncated_at,
    )


def markov_zbar(offspring: OffspringDistribution, rate: float, beta: float, s):
    """z(s) = (rate/beta) (s - f(s)) / (1 - s), via the identity
    (s - f(s))/(1 - s) = h(s) - 1 (cancellation-free)."""
    return (rate / beta) * (offspring.h(s) - 1.0)


def markov_gamma_ode(
    model: ProliferationModel,
    s_start: float,
    s_mesh,
    initial_gamma: float | None = None,
    rtol: float = 1e-11,
):
    """gamma(s) = (1 - g(s))/(1 - s) for exponential life-times via the
    forward-equation ODE, independent of the renewal quadrature.

    For Markov clonal growth g satisfies
    g(s) = s - (rate/beta)(s - f(s)) g'(s), equivalently

        gamma = 1 + z(s) (gamma - gamma'(s) (1 - s)),

    which in the variable t = -log(1-s) is the linear ODE
    d(gamma)/dt = (gamma (z - 1) + 1)/z.  Integration starts from a value
    obtained by the renewal route at s_start (or a supplied one).

    Returns gamma on s_mesh (all entries must lie in [s_start, 1)).
    """
    if not isinstance(model.lifetime, Exponential):
        raise ValueError("the forward-equation route requires an exponential life-time")
    q = model.offspring.extinction_prob
    if not q < s_start < 1.0:
        raise ValueError(f"s_start must lie in (q, 1) = ({q}, 1)")
    s_mesh = np.atleast_1d(np.asarray(s_mesh, dtype=float))
    if np.any(s_mesh < s_start) or np.any(s_mesh >= 1.0):
        raise ValueError("s_mesh must lie in [s_start, 1)")
    rate = model.lifetime.rate
    if initial_gamma is None:
        g0 = g_values(model, [s_start], route="renewal", h=min(1e-3 / model.beta, default_step(model)))[0]
        initial_gamma = float((1.0 - g0.real) / (1.0 - s_start))

    def rhs(t, y):
        z = markov_zbar(model.offspring, rate, model.beta, 1.0 - np.exp(-t))
        return (y * (z - 1.0) + 1.0) / z

    t0 = -np.log1p(-s_start)
    t_eval = -np.log1p(-s_mesh)
    order = np.argsort(t_eval)
    sol = solve_ivp(
        rhs,
        (t0, float(t_eval[order[-1]])),
        [initial_gamma],
        t_eval=t_eval[order],
        method="DOP853",
        rtol=rtol,
        atol=1e-13,
    )
    if not sol.success:
        raise NumericalError(f"gamma ODE integration failed: {sol.message}")
    out = np.empty_like(t_eval)
    out[order] = sol.y[0]
    return out
