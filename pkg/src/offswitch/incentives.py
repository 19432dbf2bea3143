"""The robot's incentive to hand the decision to the human.

Everything here revolves around one number: with belief B over the
action's utility and a human policy pi, the advantage of proposing the
action and waiting over just taking the best unilateral move is

    delta = E[pi(U) U] - max(E[U], 0).

Four routes compute it, and the test suite plays them against each
other:

* :func:`delta` -- direct quadrature of the defining expectations,
* :func:`delta_rational_gaussian` -- closed form for a rational human
  and Gaussian belief, via truncated-normal moments,
* :func:`delta_decomposition` -- the Gaussian-belief split
  ``delta = std^2 E[pi'] - |mean| Pr(correction)``,
* :func:`delta_monte_carlo` -- seeded sampling oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .beliefs import (
    Belief,
    Dirac,
    Gaussian,
    belief_mean,
    expectation_split,
    gaussian_split_pieces,
    norm_cdf,
    norm_pdf,
    truncated_moments,
)
from .policies import (
    Boltzmann,
    Constant,
    HumanPolicy,
    Rational,
    Tabular,
    _tabular_slope,
    allow_prob,
    allow_prob_grad,
)

__all__ = [
    "ActionValues",
    "DegenerateInputError",
    "IncentiveReport",
    "Method",
    "RobotAction",
    "action_values",
    "boltzmann_grad_identity",
    "correction_probability",
    "delta",
    "delta_decomposition",
    "delta_monte_carlo",
    "delta_rational_gaussian",
]

# A logistic policy saturates to within 2e-22 of {0, 1} beyond 50 beta,
# so splitting the integration domain there (and at the step location 0)
# lets the per-piece Legendre rule resolve arbitrarily sharp temperatures.
_LOGISTIC_SATURATION_WIDTH = 50.0


class DegenerateInputError(ValueError):
    """The decomposition is 0 * inf at a point mass sitting on the step."""


class RobotAction(str, Enum):
    WAIT = "wait"
    ACT = "act"
    SWITCH_OFF = "switch_off"


class Method(str, Enum):
    CLOSED_FORM_RATIONAL = "closed_form_rational"
    DECOMPOSITION = "decomposition"
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class ActionValues:
    """Expected payoffs of the three robot moves; v_off is identically 0."""

    v_wait: float
    v_act: float
    v_off: float = 0.0


@dataclass(frozen=True)
class IncentiveReport:
    delta: float
    optimal: RobotAction
    values: ActionValues
    method: Method
    info_term: Optional[float] = None
    correction_term: Optional[float] = None
    mc_stderr: Optional[float] = None


def _optimal_action(values: ActionValues) -> RobotAction:
    # Ties break toward deference: Wait, then Act, then SwitchOff.
    if values.v_wait >= values.v_act and values.v_wait >= values.v_off:
        return RobotAction.WAIT
    if values.v_act >= values.v_off:
        return RobotAction.ACT
    return RobotAction.SWITCH_OFF


def _policy_splits(policy: HumanPolicy) -> tuple[float, ...]:
    """Domain split points that make the policy integrands quadrature-friendly."""
    if isinstance(policy, Rational):
        return (0.0,)
    if isinstance(policy, Boltzmann):
        w = _LOGISTIC_SATURATION_WIDTH * policy.beta
        return (-w, 0.0, w)
    if isinstance(policy, Tabular):
        return policy.breakpoints
    return ()


def action_values(belief: Belief, policy: HumanPolicy) -> ActionValues:
    """Expected value of waiting, acting, and shutting down."""
    v_wait = expectation_split(
        belief, lambda u: allow_prob(policy, u) * u, splits=_policy_splits(policy)
    )
    return ActionValues(v_wait=v_wait, v_act=belief_mean(belief), v_off=0.0)


def delta(belief: Belief, policy: HumanPolicy) -> IncentiveReport:
    """Incentive report straight from the defining expectations."""
    values = action_values(belief, policy)
    return IncentiveReport(
        delta=values.v_wait - max(values.v_act, 0.0),
        optimal=_optimal_action(values),
        values=values,
        method=Method.QUADRATURE,
    )


def delta_rational_gaussian(mean: float, std: float) -> IncentiveReport:
    """Closed-form incentive for a rational human and N(mean, std^2) belief.

    delta = min(E[U 1{U>0}], E[-U 1{U<0}]), non-negative by
    construction and strictly positive whenever std > 0.
    """
    tm = truncated_moments(mean, std)
    values = ActionValues(v_wait=tm.pos_part, v_act=mean, v_off=0.0)
    return IncentiveReport(
        delta=min(tm.pos_part, tm.neg_part),
        optimal=_optimal_action(values),
        values=values,
        method=Method.CLOSED_FORM_RATIONAL,
    )


def correction_probability(mean: float, belief: Belief, policy: HumanPolicy) -> float:
    """Probability the human overrides the robot's best-guess move.

    With the belief leaning positive (mean >= 0, inclusive) the override
    is a switch-off, so Pr = 1 - E[pi]; leaning negative it is an
    allowance, so Pr = E[pi].
    """
    e_pi = expectation_split(
        belief, lambda u: allow_prob(policy, u), splits=_policy_splits(policy)
    )
    return 1.0 - e_pi if mean >= 0.0 else e_pi


def _expected_policy_slope(mean: float, std: float, policy: HumanPolicy) -> float:
    """E[pi'(U)] under N(mean, std^2), std > 0.

    The rational step has no pointwise derivative; its distributional
    derivative is a unit point mass at 0, so the expectation is the
    Gaussian density there.
    """
    if isinstance(policy, Rational):
        return norm_pdf(mean / std) / std
    if isinstance(policy, Constant):
        return 0.0
    if isinstance(policy, Boltzmann):
        f = lambda u: allow_prob_grad(policy, u)
    else:
        f = lambda u: _tabular_slope(policy, u)
    return expectation_split(Gaussian(mean, std), f, splits=_policy_splits(policy))


def delta_decomposition(mean: float, std: float, policy: HumanPolicy) -> IncentiveReport:
    """Incentive via the information/correction split for Gaussian beliefs.

    delta = std^2 E[pi'] - |mean| Pr(correction). Waiting is optimal
    exactly when (|mean|/std^2) Pr(correction) < E[pi'], which is the
    same comparison as delta > 0; the returned ``optimal`` applies the
    deference tie-break at equality.
    """
    if std == 0.0:
        if isinstance(policy, Rational) and mean == 0.0:
            raise DegenerateInputError(
                "point mass exactly on the rational step: std^2 E[pi'] is 0 * inf"
            )
        # A point mass charges sigma^2 E[pi'] to zero for every policy
        # whose pi is continuous at the mass (all non-step variants).
        info_term = 0.0
        prc = correction_probability(mean, Dirac(mean), policy)
    else:
        info_term = std * std * _expected_policy_slope(mean, std, policy)
        prc = correction_probability(mean, Gaussian(mean, std), policy)
    correction_term = abs(mean) * prc
    d = info_term - correction_term
    values = ActionValues(v_wait=d + max(mean, 0.0), v_act=mean, v_off=0.0)
    return IncentiveReport(
        delta=d,
        optimal=_optimal_action(values),
        values=values,
        method=Method.DECOMPOSITION,
        info_term=info_term,
        correction_term=correction_term,
    )


def boltzmann_grad_identity(mean: float, std: float, beta: float) -> tuple[float, float]:
    """Two independent evaluations of E[pi'] for a logistic policy.

    lhs integrates the analytic gradient; rhs integrates
    pi (1 - pi) / beta. Test helper.
    """
    policy = Boltzmann(beta)
    belief = Gaussian(mean, std)
    splits = _policy_splits(policy)
    lhs = expectation_split(belief, lambda u: allow_prob_grad(policy, u), splits=splits)

    def product_form(u):
        pi = allow_prob(policy, u)
        return pi * (1.0 - pi) / beta

    rhs = expectation_split(belief, product_form, splits=splits)
    return lhs, rhs


def delta_monte_carlo(
    belief: Belief, policy: HumanPolicy, n: int, seed: int
) -> IncentiveReport:
    """Sampling estimate of the incentive; the oracle for the other routes.

    Draws with numpy's default PCG64 generator, so a fixed (seed, n)
    reproduces bit-identical output. ``mc_stderr`` is the standard
    error of the waiting-value estimate.
    """
    if n < 1000:
        raise ValueError(f"need n >= 1000 Monte-Carlo samples, got {n}")
    rng = np.random.default_rng(seed)
    if isinstance(belief, Gaussian):
        u = rng.normal(belief.mean, belief.std, size=n)
    elif isinstance(belief, Dirac):
        u = np.full(n, belief.value)
    else:
        u = rng.choice(np.asarray(belief.samples), size=n, replace=True)
    wait_draws = allow_prob(policy, u) * u
    v_wait = float(np.mean(wait_draws))
    v_act = float(np.mean(u))
    values = ActionValues(v_wait=v_wait, v_act=v_act, v_off=0.0)
    return IncentiveReport(
        delta=v_wait - max(v_act, 0.0),
        optimal=_optimal_action(values),
        values=values,
        method=Method.MONTE_CARLO,
        mc_stderr=float(np.std(wait_draws, ddof=1) / math.sqrt(n)),
    )


def _decomposition_terms_grid(
    means: np.ndarray, std: float, policy: HumanPolicy
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(delta, info_term, correction_term) over a vector of means, std > 0.

    Vectorized twin of :func:`delta_decomposition`: closed forms where
    they exist (rational, constant), broadcast split-domain quadrature
    otherwise. Agrees with the scalar route to quadrature accuracy.
    """
    means = np.asarray(means, dtype=float)
    if std <= 0.0:
        raise ValueError("_decomposition_terms_grid requires std > 0")
    if isinstance(policy, Rational):
        z = means / std
        e_dot = norm_pdf(z) / std
        e_pi = norm_cdf(z)
    elif isinstance(policy, Constant):
        e_dot = np.zeros_like(means)
        e_pi = np.full_like(means, policy.p)
    else:
        # One node pass serves both expectations; for the logistic the
        # gradient is pi (1 - pi) / beta, reusing the computed pi.
        e_pi = np.zeros_like(means)
        e_dot = np.zeros_like(means)
        for x, w in gaussian_split_pieces(means, std, _policy_splits(policy)):
            pi = allow_prob(policy, x)
            e_pi += np.sum(w * pi, axis=1)
            if isinstance(policy, Boltzmann):
                grad = pi * (1.0 - pi) / policy.beta
            else:
                grad = _tabular_slope(policy, x)
            e_dot += np.sum(w * grad, axis=1)
    info = std * std * e_dot
    prc = np.where(means >= 0.0, 1.0 - e_pi, e_pi)
    corr = np.abs(means) * prc
    return info - corr, info, corr
