"""Luria-Delbruck fluctuation analysis under general proliferation models.

Computes the mutant-count distribution of a fluctuation experiment when
cell life-times are not exponential, verifies the index-1 stable limit law
of the normalized mutant count, and estimates mutation parameters with the
proliferation-model correction factor n1.
"""

from ._backend import backend_name, have_compiled
from .bhpgf import (
    PgfGrid,
    compute_g,
    delta_probe,
    g_on_circle,
    g_values,
    markov_gamma_ode,
    solve_renewal,
)
from .errors import (
    ConvergenceError,
    DataError,
    FluctuateError,
    NumericalError,
    RenewalInstabilityError,
    UsageError,
)
from .lifetime import Exponential, KendallGamma, LifetimeDistribution, Rahn, TabulatedCdf
from .malthus import (
    ProliferationModel,
    check_neutrality,
    compute_n1,
    kendall_beta,
    kendall_n1,
    n1_lower_bound,
    solve_beta,
)
from .offspring import (
    OffspringDistribution,
    extinction_prob,
    fractional_linear,
    h_eval,
    pgf_eval,
    star_probe,
)

__version__ = "0.1.0"
