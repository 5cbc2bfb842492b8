"""Pure-Python/numpy implementations of the hot kernels.

fluctuate._kernels (Cython) implements the same three entry points with the
same semantics and, for the simulator, the same random-stream consumption
order, so results are bit-identical across backends.  This module is the
fallback selected by fluctuate._backend when the extension is unavailable.
"""

from __future__ import annotations

import heapq

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import NumericalError, RenewalInstabilityError

BACKEND_NAME = "python"

_CHUNK = 1 << 16

# lifetime variant ids shared with the compiled kernel
LT_EXPONENTIAL = 0
LT_KENDALL = 1
LT_RAHN = 2
LT_TABLE = 3


def renewal_march(s, pi, surv, dG):
    """Forward march of the life-time renewal equation for the clone PGF.

    F_u(s) = (1 - G(u)) s + integral_0^u f(F_{u-y}(s)) dG(y) is discretized
    on the uniform grid u_i = i h with trapezoidal Stieltjes weights built
    from the CDF increments dG[j] = G(j h) - G((j-1) h).  The implicit
    f(F_i) endpoint is handled by one predictor-corrector pass.

    Parameters
    ----------
    s : complex array (M,), evaluation points with |s| <= 1
    pi : float array, offspring probabilities
    surv : float array (N+1,), surv[i] = 1 - G(i h)
    dG : float array (N+1,), CDF increments (dG[0] is unused)

    Returns
    -------
    F : complex array (N+1, M) with F[i, p] = F_{i h}(s_p)
    """
    s = np.ascontiguousarray(s, dtype=np.complex128)
    pi = np.ascontiguousarray(pi, dtype=np.float64)
    surv = np.ascontiguousarray(surv, dtype=np.float64)
    dG = np.ascontiguousarray(dG, dtype=np.float64)
    n_steps = surv.size - 1
    m = s.size
    F = np.empty((n_steps + 1, m), dtype=np.complex128)
    fF = np.empty_like(F)
    F[0] = s
    fF[0] = npoly.polyval(s, pi)
    half_dg1 = 0.5 * dG[1]
    for i in range(1, n_steps + 1):
        # weight of f(F_l) for l = 0..i-1; f(F_i) enters with weight dG[1]/2
        w = np.empty(i)
        w[0] = 0.5 * dG[i]
        if i > 1:
            w[1:] = 0.5 * (dG[i - 1 : 0 : -1] + dG[i:1:-1])
        base = surv[i] * s + w @ fF[:i]
        pred = base + half_dg1 * fF[i - 1]
        F[i] = base + half_dg1 * npoly.polyval(pred, pi)
        fF[i] = npoly.polyval(F[i], pi)
        if np.max(np.abs(F[i])) > 1.0 + 1e-8:
            raise RenewalInstabilityError(
                f"|F| exceeded 1 + 1e-8 at step {i}; decrease the time step"
            )
    return F


def phase_march(s, pi, rates, beta, horizon, n_steps):
    """March the stage-resolved Markov system for phase-type life-times.

    A life-time realized as a chain of exponential stages with the given
    rates makes the population Markov in the stage counts.  With F_j(t) the
    PGF of the total cell count started from one stage-j cell,

        dF_j/dt = rates[j] (F_{j+1} - F_j)          (j < k)
        dF_k/dt = rates[k] (f(F_1) - F_k)

    with F_j(0) = s.  The growth-rate discounted transform
    g_raw = beta * integral_0^horizon e^{-beta t} F_1(t) dt is accumulated
    as an extra state so it inherits the RK4 order.

    Returns (g_raw, F1_final); the caller adds the horizon tail correction.
    """
    s = np.ascontiguousarray(s, dtype=np.complex128)
    pi = np.ascontiguousarray(pi, dtype=np.float64)
    rates = np.ascontiguousarray(rates, dtype=np.float64)
    k = rates.size
    h = horizon / n_steps
    F = np.tile(s, (k, 1))
    g = np.zeros(s.size, dtype=np.complex128)

    def rhs(t, F):
        dF = np.empty_like(F)
        for j in range(k - 1):
            dF[j] = rates[j] * (F[j + 1] - F[j])
        dF[k - 1] = rates[k - 1] * (npoly.polyval(F[0], pi) - F[k - 1])
        dg = (beta * np.exp(-beta * t)) * F[0]
        return dF, dg

    for i in range(n_steps):
        t = i * h
        dF1, dg1 = rhs(t, F)
        dF2, dg2 = rhs(t + 0.5 * h, F + (0.5 * h) * dF1)
        dF3, dg3 = rhs(t + 0.5 * h, F + (0.5 * h) * dF2)
        dF4, dg4 = rhs(t + h, F + h * dF3)
        F += (h / 6.0) * (dF1 + 2.0 * (dF2 + dF3) + dF4)
        g += (h / 6.0) * (dg1 + 2.0 * (dg2 + dg3) + dg4)
    return g, F[0].copy()


class _UniformStream:
    """Sequential uniforms drawn from `rng` in fixed-size chunks.

    Both backends refill with rng.random(_CHUNK) at identical positions in
    the consumption sequence, which is what makes their outputs identical.
    """

    __slots__ = ("rng", "buf", "pos")

    def __init__(self, rng):
        self.rng = rng
        self.buf = rng.random(_CHUNK)
        self.pos = 0

    def take(self):
        if self.pos == self.buf.size:
            self.buf = self.rng.random(_CHUNK)
            self.pos = 0
        v = self.buf[self.pos]
        self.pos += 1
        return v


def _draw_lifetime(stream, lt_id, par):
    if lt_id == LT_EXPONENTIAL:
        return -np.log1p(-stream.take()) / par[0]
    if lt_id == LT_KENDALL:
        k = int(par[0])
        total = 0.0
        for _ in range(k):
            total += -np.log1p(-stream.take())
        return total / (k * par[1])
    if lt_id == LT_RAHN:
        k = int(par[1])
        best = 0.0
        for _ in range(k):
            v = -np.log1p(-stream.take())
            if v > best:
                best = v
        return best / par[0]
    # LT_TABLE: inverse-CDF interpolation; par = (g_knots..., t_knots...)
    n = par.size // 2
    g_knots = par[:n]
    t_knots = par[n:]
    u = stream.take()
    j = int(np.searchsorted(g_knots, u, side="right"))
    if j <= 0:
        return t_knots[0]
    if j >= n:
        return t_knots[n - 1]
    g0, g1 = g_knots[j - 1], g_knots[j]
    t0, t1 = t_knots[j - 1], t_knots[j]
    if g1 == g0:
        return t0
    return t0 + (u - g0) * (t1 - t0) / (g1 - g0)


def _draw_offspring(stream, cum_pi):
    u = stream.take()
    k = 0
    n = cum_pi.size
    while k < n - 1 and u >= cum_pi[k]:
        k += 1
    return k


def simulate_culture(
    rng,
    cum_pi_nm,
    cum_pi_m,
    lt_nm_id,
    lt_nm_par,
    lt_m_id,
    lt_m_par,
    rho,
    n_max,
    t_max,
    mem_guard,
):
    """Event-driven growth of one culture (fallback backend).

    Every living cell carries one scheduled division time; the event queue
    is ordered by (time, insertion sequence).  At a division, the parent is
    removed and k daughters are scheduled; each daughter of a non-mutant
    parent is an independent Bernoulli(rho) mutation trial, counted in
    births_trials.  Daughters of mutants are mutants.

    Returns (total_cells, mutant_cells, births_trials, stop_time, extinct).
    """
    stream = _UniformStream(rng)
    heap = []
    seq = 0
    founder_life = _draw_lifetime(stream, lt_nm_id, lt_nm_par)
    heapq.heappush(heap, (founder_life, seq, False))
    seq += 1
    living = 1
    mutants = 0
    births = 0
    t_now = 0.0
    while heap:
        t_next = heap[0][0]
        if t_next > t_max:
            t_now = t_max
            break
        t, _, is_mut = heapq.heappop(heap)
        t_now = t
        living -= 1
        if is_mut:
            mutants -= 1
        k = _draw_offspring(stream, cum_pi_m if is_mut else cum_pi_nm)
        for _ in range(k):
            if is_mut:
                d_mut = True
            else:
                births += 1
                d_mut = stream.take() < rho
            if d_mut:
                life = _draw_lifetime(stream, lt_m_id, lt_m_par)
            else:
                life = _draw_lifetime(stream, lt_nm_id, lt_nm_par)
            heapq.heappush(heap, (t + life, seq, d_mut))
            seq += 1
            living += 1
            if d_mut:
                mutants += 1
        if living >= n_max:
            break
        if living > mem_guard:
            raise NumericalError(f"population exceeded the memory guard of {mem_guard} cells")
    extinct = living == 0
    return living, mutants, births, t_now, extinct
