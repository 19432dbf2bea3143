"""Incentive analysis for the off-switch game.

A robot proposes an action of uncertain utility to a human who can
either let it run or press the robot's off switch. This package
computes the robot's incentive to defer that choice to the human --
in closed form, by quadrature, by a variance/bias decomposition, and
by Monte Carlo -- and reproduces the standard parameter sweeps and the
designer's value-versus-uncertainty experiment.
"""

from .beliefs import (
    Belief,
    Dirac,
    Empirical,
    Gaussian,
    NumericalDomainError,
    TruncatedMoments,
    expectation,
    expectation_split,
    norm_cdf,
    norm_pdf,
    posterior_update,
    stein_check,
    truncated_moments,
)
from .designer import (
    DesignerResult,
    DesignerRow,
    DesignerScenario,
    fig4_scenario,
    noise_for_posterior_std,
    simulate,
    trial_value,
)
from .incentives import (
    ActionValues,
    DegenerateInputError,
    IncentiveReport,
    Method,
    RobotAction,
    action_values,
    boltzmann_grad_identity,
    correction_probability,
    delta,
    delta_decomposition,
    delta_monte_carlo,
    delta_rational_gaussian,
)
from .policies import (
    Boltzmann,
    Constant,
    HumanPolicy,
    NotDifferentiableError,
    Rational,
    Tabular,
    allow_prob,
    allow_prob_grad,
)
from .sweeps import (
    CrossCheckError,
    SweepGrid,
    SweepRow,
    run_sweep,
    zero_boundary,
)

__version__ = "0.1.0"
