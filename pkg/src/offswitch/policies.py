"""Human decision policies: probability the human lets the action run.

A policy maps the action's utility ``u`` to the probability that the
human does *not* press the off switch. Variants:

* ``Rational()`` -- allow exactly when u >= 0 (boundary inclusive),
* ``Boltzmann(beta)`` -- noisily rational logistic with temperature beta,
* ``Constant(p)`` -- utility-independent coin flip,
* ``Tabular(breakpoints, values)`` -- piecewise-linear interpolation with
  constant extrapolation; exists mainly to build decreasing-policy
  counterexamples.

``allow_prob`` and ``allow_prob_grad`` accept a scalar or an ndarray of
utilities and return a matching shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

__all__ = [
    "Boltzmann",
    "Constant",
    "HumanPolicy",
    "NotDifferentiableError",
    "Rational",
    "Tabular",
    "allow_prob",
    "allow_prob_grad",
]


class NotDifferentiableError(ValueError):
    """The policy has no derivative at the requested utility."""


@dataclass(frozen=True)
class Rational:
    """Step policy: allow iff the utility is non-negative."""


@dataclass(frozen=True)
class Boltzmann:
    """Logistic policy (1 + exp(-u/beta))^-1; beta > 0.

    beta -> 0 recovers the rational step, beta -> infinity a coin flip.
    """

    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise ValueError(f"Boltzmann beta must be > 0, got {self.beta}")


@dataclass(frozen=True)
class Constant:
    """Allow with fixed probability p regardless of utility."""

    p: float

    def __post_init__(self):
        if not (math.isfinite(self.p) and 0.0 <= self.p <= 1.0):
            raise ValueError(f"Constant p must be in [0, 1], got {self.p}")


@dataclass(frozen=True)
class Tabular:
    """Piecewise-linear policy through (breakpoint, value) pairs.

    Breakpoints must be strictly increasing, values in [0, 1]; outside
    the breakpoint range the policy extrapolates as a constant.
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __init__(self, breakpoints: Sequence[float], values: Sequence[float]):
        breakpoints = tuple(float(b) for b in breakpoints)
        values = tuple(float(v) for v in values)
        if not breakpoints or len(breakpoints) != len(values):
            raise ValueError("Tabular needs matching, non-empty breakpoints and values")
        if not all(math.isfinite(b) for b in breakpoints):
            raise ValueError("Tabular breakpoints must be finite")
        if any(b2 <= b1 for b1, b2 in zip(breakpoints, breakpoints[1:])):
            raise ValueError("Tabular breakpoints must be strictly increasing")
        if not all(math.isfinite(v) and 0.0 <= v <= 1.0 for v in values):
            raise ValueError("Tabular values must be in [0, 1]")
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "values", values)


HumanPolicy = Union[Rational, Boltzmann, Constant, Tabular]


def _as_array(u) -> tuple[np.ndarray, bool]:
    arr = np.asarray(u, dtype=float)
    return arr, arr.ndim == 0


def _restore(out: np.ndarray, scalar: bool):
    return float(out) if scalar else out


def _logistic(z: np.ndarray) -> np.ndarray:
    # exp of the negative magnitude only, so |z| up to 1e4 (and far
    # beyond) cannot overflow; saturation to exact 0.0/1.0 is fine.
    e = np.exp(-np.abs(z))
    return np.where(z >= 0.0, 1.0 / (1.0 + e), e / (1.0 + e))


def allow_prob(policy: HumanPolicy, u):
    """Probability the human allows the action given its utility ``u``."""
    arr, scalar = _as_array(u)
    if isinstance(policy, Rational):
        out = np.where(arr >= 0.0, 1.0, 0.0)
    elif isinstance(policy, Boltzmann):
        out = _logistic(arr / policy.beta)
    elif isinstance(policy, Constant):
        out = np.full_like(arr, policy.p)
    elif isinstance(policy, Tabular):
        out = np.interp(arr, policy.breakpoints, policy.values)
    else:
        raise TypeError(f"unknown policy {type(policy).__name__}")
    return _restore(out, scalar)


def allow_prob_grad(policy: HumanPolicy, u):
    """d/du of :func:`allow_prob` where it exists.

    Raises :class:`NotDifferentiableError` for the rational step policy
    and for tabular policies evaluated exactly at a breakpoint; callers
    that need the step policy's distributional derivative use dedicated
    closed forms instead.
    """
    arr, scalar = _as_array(u)
    if isinstance(policy, Rational):
        raise NotDifferentiableError("the rational step policy is not differentiable")
    if isinstance(policy, Boltzmann):
        # e/(beta (1+e)^2) with e = exp(-|u/beta|): an expression for
        # pi' distinct from pi(1-pi), and even in u, so it never overflows.
        e = np.exp(-np.abs(arr / policy.beta))
        out = e / (policy.beta * (1.0 + e) ** 2)
    elif isinstance(policy, Constant):
        out = np.zeros_like(arr)
    elif isinstance(policy, Tabular):
        bp = np.asarray(policy.breakpoints)
        if np.any(np.isin(arr, bp)):
            offending = float(np.ravel(arr[np.isin(arr, bp)])[0])
            raise NotDifferentiableError(
                f"tabular policy has a kink at breakpoint {offending!r}"
            )
        out = _tabular_slope(policy, arr)
    else:
        raise TypeError(f"unknown policy {type(policy).__name__}")
    return _restore(out, scalar)


def _tabular_slope(policy: Tabular, u: np.ndarray) -> np.ndarray:
    """Segment slope at each u; 0 in the constant extrapolation regions."""
    bp = np.asarray(policy.breakpoints)
    vals = np.asarray(policy.values)
    slopes = np.zeros(len(bp) + 1)
    if len(bp) > 1:
        slopes[1:-1] = np.diff(vals) / np.diff(bp)
    return slopes[np.searchsorted(bp, u)]
