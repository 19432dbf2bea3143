"""Value versus deliberate uncertainty: the designer's trade-off.

A designer ships a robot that plays the off-switch game against
customers whose action utility is drawn from a known Gaussian prior.
Each customer supplies a noisy estimate of that utility; the designer
chooses what noise level the robot *assumes* when it conditions on the
estimate. Assuming more noise than the truth widens the robot's belief,
which buys deference (a larger incentive to wait) at the cost of
realized value. ``simulate`` measures both sides of that trade by
Monte Carlo.

Protocol per trial: draw ``n_actions`` candidate utilities from the
prior and a noisy observation of each; the robot updates the prior on
every observation with the *assumed* noise, queues the candidate with
the highest posterior mean, and plays the game for it -- acting
directly, shutting down, or waiting for the human, who then allows the
action with probability ``allow_prob(human, true utility)``.

All grid points reuse the same sampled trials and the same human
accept/reject draw (common random numbers), and every draw comes from
one seeded PCG64 stream, so a scenario's result is bit-identical across
runs and thread counts.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .beliefs import Belief, norm_cdf, norm_pdf
from .incentives import RobotAction, _decomposition_terms_grid, delta
from .policies import Boltzmann, Constant, HumanPolicy, Rational, allow_prob

__all__ = [
    "DesignerResult",
    "DesignerRow",
    "DesignerScenario",
    "fig4_scenario",
    "noise_for_posterior_std",
    "simulate",
    "trial_value",
]

# Dense enough that linear interpolation of delta over the posterior-mean
# range stays below ~1e-7, far below the Monte-Carlo standard errors.
_TABLE_POINTS = 8193


@dataclass(frozen=True)
class DesignerScenario:
    prior_mean: float
    prior_std: float
    true_noise_std: float
    assumed_noise_grid: tuple[float, ...]
    n_actions: int
    n_trials: int
    seed: int
    human: HumanPolicy = field(default_factory=Rational)

    def __init__(
        self,
        prior_mean: float,
        prior_std: float,
        true_noise_std: float,
        assumed_noise_grid: Sequence[float],
        n_actions: int,
        n_trials: int,
        seed: int,
        human: HumanPolicy = None,
    ):
        grid = tuple(float(v) for v in assumed_noise_grid)
        if not (math.isfinite(prior_mean) and math.isfinite(prior_std) and prior_std > 0.0):
            raise ValueError("prior_std must be finite and > 0")
        if not (math.isfinite(true_noise_std) and true_noise_std > 0.0):
            raise ValueError("true_noise_std must be finite and > 0")
        if not grid or any(v <= 0.0 or not math.isfinite(v) for v in grid):
            raise ValueError("assumed_noise_grid values must be finite and > 0")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("assumed_noise_grid must be strictly increasing")
        if n_actions < 1:
            raise ValueError("n_actions must be >= 1")
        if n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        object.__setattr__(self, "prior_mean", float(prior_mean))
        object.__setattr__(self, "prior_std", float(prior_std))
        object.__setattr__(self, "true_noise_std", float(true_noise_std))
        object.__setattr__(self, "assumed_noise_grid", grid)
        object.__setattr__(self, "n_actions", int(n_actions))
        object.__setattr__(self, "n_trials", int(n_trials))
        object.__setattr__(self, "seed", int(seed))
        object.__setattr__(self, "human", human if human is not None else Rational())


@dataclass(frozen=True)
class DesignerRow:
    assumed_noise_std: float
    posterior_std: float
    v_mean: float
    v_stderr: float
    delta_mean: float
    delta_stderr: float


@dataclass(frozen=True)
class DesignerResult:
    rows: tuple[DesignerRow, ...]


def noise_for_posterior_std(prior_std: float, posterior_std: float) -> float:
    """Observation noise that makes the one-step posterior this wide."""
    if not 0.0 < posterior_std < prior_std:
        raise ValueError("posterior_std must lie strictly between 0 and prior_std")
    return prior_std * posterior_std / math.sqrt(prior_std**2 - posterior_std**2)


def fig4_scenario(n_actions: int = 1, n_trials: int = 200_000, seed: int = 42) -> DesignerScenario:
    """Standard N(0,1)-prior scenario behind the value-vs-uncertainty plots.

    The noise grid targets 11 posterior widths evenly spanning
    [0.3, 0.999]; the true noise (std 1) corresponds to width
    1/sqrt(2) ~ 0.707. The human is noisily rational (temperature 1):
    a rational human would make the realized value independent of the
    assumed width, because waiting is then always optimal for the robot
    and always correct for the human.
    """
    targets = np.linspace(0.3, 0.999, 11)
    return DesignerScenario(
        prior_mean=0.0,
        prior_std=1.0,
        true_noise_std=1.0,
        assumed_noise_grid=tuple(noise_for_posterior_std(1.0, s) for s in targets),
        n_actions=n_actions,
        n_trials=n_trials,
        seed=seed,
        human=Boltzmann(1.0),
    )


def _draw_trials(scenario: DesignerScenario) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(true utilities, observations, human accept draws) for every trial.

    Draw order is part of the reproducibility contract: candidate
    utilities, then observation noise, then one uniform per trial.
    """
    rng = np.random.default_rng(scenario.seed)
    shape = (scenario.n_trials, scenario.n_actions)
    u = rng.normal(scenario.prior_mean, scenario.prior_std, size=shape)
    obs = u + rng.normal(0.0, scenario.true_noise_std, size=shape)
    coin = rng.uniform(size=scenario.n_trials)
    return u, obs, coin


def _delta_for_means(means: np.ndarray, std: float, policy: HumanPolicy) -> np.ndarray:
    """Per-trial incentive of the chosen candidate, vectorized over means.

    Rational and constant policies hit exact closed forms; the others go
    through a dense decomposition table plus linear interpolation.
    """
    if isinstance(policy, Rational):
        z = means / std
        pdf_term = std * norm_pdf(z)
        pos = means * norm_cdf(z) + pdf_term
        neg = pdf_term - means * norm_cdf(-z)
        return np.minimum(pos, neg)
    if isinstance(policy, Constant):
        prc = np.where(means >= 0.0, 1.0 - policy.p, policy.p)
        return -np.abs(means) * prc
    lo = float(np.min(means))
    hi = float(np.max(means))
    if hi == lo:
        d, _, _ = _decomposition_terms_grid(np.asarray([lo]), std, policy)
        return np.full_like(means, d[0])
    grid = np.linspace(lo, hi, _TABLE_POINTS)
    d, _, _ = _decomposition_terms_grid(grid, std, policy)
    return np.interp(means, grid, d)


def simulate(scenario: DesignerScenario, threads: int = 1) -> DesignerResult:
    """Run the experiment over the assumed-noise grid.

    Returns one row per grid point, in grid order, with the mean and
    standard error of the realized game value and of the robot-side
    incentive of the queued candidate.
    """
    u, obs, coin = _draw_trials(scenario)
    n = scenario.n_trials
    trial_idx = np.arange(n)
    prior_var = scenario.prior_std**2
    accept = coin[:, None] < allow_prob(scenario.human, u)  # (n, A): decision vs each true u

    def compute(k: int) -> DesignerRow:
        nu = scenario.assumed_noise_grid[k]
        noise_var = nu * nu
        post_means = (prior_var * obs + noise_var * scenario.prior_mean) / (
            prior_var + noise_var
        )
        post_std = scenario.prior_std * nu / math.sqrt(prior_var + noise_var)
        chosen = np.argmax(post_means, axis=1)
        mu_sel = post_means[trial_idx, chosen]
        u_sel = u[trial_idx, chosen]
        deltas = _delta_for_means(mu_sel, post_std, scenario.human)
        waits = deltas >= 0.0
        allowed = accept[trial_idx, chosen]
        value = np.where(
            waits,
            np.where(allowed, u_sel, 0.0),
            np.where(mu_sel >= 0.0, u_sel, 0.0),
        )
        return DesignerRow(
            assumed_noise_std=nu,
            posterior_std=post_std,
            v_mean=float(np.mean(value)),
            v_stderr=_stderr(value),
            delta_mean=float(np.mean(deltas)),
            delta_stderr=_stderr(deltas),
        )

    indices = range(len(scenario.assumed_noise_grid))
    if threads <= 1:
        rows = [compute(k) for k in indices]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(compute, indices))
    return DesignerResult(rows=tuple(rows))


def _stderr(values: np.ndarray) -> float:
    if values.size <= 1:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(values.size))


def trial_value(
    u_true: float, belief: Belief, human: HumanPolicy, draw: float
) -> tuple[float, RobotAction]:
    """Payoff of one game against the realized utility.

    The robot moves by its incentive report; on a wait, the human allows
    the action when the uniform ``draw`` falls below her allow
    probability at the true utility.
    """
    action = delta(belief, human).optimal
    if action is RobotAction.ACT:
        return u_true, action
    if action is RobotAction.SWITCH_OFF:
        return 0.0, action
    if draw < allow_prob(human, u_true):
        return u_true, action
    return 0.0, action
