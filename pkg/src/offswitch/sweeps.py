"""Incentive surfaces over (mean, std) and (std, temperature) grids.

``run_sweep`` evaluates the incentive at every grid point, in
lexicographic (mu, sigma, beta) order regardless of how many worker
threads execute it, and cross-checks a fixed 1-in-16 sample of the
decomposition rows against direct quadrature. ``zero_boundary``
extracts the delta = 0 crossing curve that separates the defer region
from the act/shut-down region.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .beliefs import Gaussian, norm_cdf, norm_pdf
from .incentives import (
    DegenerateInputError,
    RobotAction,
    delta,
    delta_decomposition,
    delta_rational_gaussian,
)
from .policies import Boltzmann

__all__ = [
    "CrossCheckError",
    "SweepGrid",
    "SweepRow",
    "default_fig2_contour_grid",
    "default_fig2_lines_grid",
    "default_fig3_grid",
    "run_sweep",
    "zero_boundary",
]

CROSS_CHECK_EVERY = 16
CROSS_CHECK_TOL = 1e-5


class CrossCheckError(RuntimeError):
    """Decomposition and quadrature disagreed at a grid point."""


def _validate_axis(name: str, axis: tuple[float, ...], positive: bool = False) -> None:
    if not axis:
        raise ValueError(f"{name} must be non-empty")
    if not all(math.isfinite(v) for v in axis):
        raise ValueError(f"{name} must be finite")
    if any(b <= a for a, b in zip(axis, axis[1:])):
        raise ValueError(f"{name} must be strictly increasing")
    if positive and axis[0] <= 0.0:
        raise ValueError(f"{name} values must be > 0")


@dataclass(frozen=True)
class SweepGrid:
    """Parameter grid; ``beta_axis`` present iff the human is Boltzmann."""

    mu_axis: tuple[float, ...]
    sigma_axis: tuple[float, ...]
    beta_axis: Optional[tuple[float, ...]] = None
    policy_family: str = "rational"

    def __init__(self, mu_axis, sigma_axis, beta_axis=None, policy_family="rational"):
        mu_axis = tuple(float(v) for v in mu_axis)
        sigma_axis = tuple(float(v) for v in sigma_axis)
        beta_axis = None if beta_axis is None else tuple(float(v) for v in beta_axis)
        _validate_axis("mu_axis", mu_axis)
        _validate_axis("sigma_axis", sigma_axis)
        if sigma_axis[0] < 0.0:
            raise ValueError("sigma_axis values must be >= 0")
        if policy_family not in ("rational", "boltzmann"):
            raise ValueError(f"unknown policy_family {policy_family!r}")
        if (beta_axis is None) != (policy_family == "rational"):
            raise ValueError("beta_axis must be given exactly for the boltzmann family")
        if beta_axis is not None:
            _validate_axis("beta_axis", beta_axis, positive=True)
        object.__setattr__(self, "mu_axis", mu_axis)
        object.__setattr__(self, "sigma_axis", sigma_axis)
        object.__setattr__(self, "beta_axis", beta_axis)
        object.__setattr__(self, "policy_family", policy_family)


@dataclass(frozen=True)
class SweepRow:
    mu: float
    sigma: float
    beta: Optional[float]
    delta: float
    info_term: float
    correction_term: float
    optimal: RobotAction


def _rational_row(mu: float, sigma: float) -> SweepRow:
    report = delta_rational_gaussian(mu, sigma)
    if sigma == 0.0:
        if mu == 0.0:
            raise DegenerateInputError(
                "point mass exactly on the rational step: std^2 E[pi'] is 0 * inf"
            )
        info, corr = 0.0, 0.0
    else:
        z = mu / sigma
        info = sigma * norm_pdf(z)
        corr = abs(mu) * norm_cdf(-abs(z))
    return SweepRow(
        mu=mu,
        sigma=sigma,
        beta=None,
        delta=report.delta,
        info_term=info,
        correction_term=corr,
        optimal=report.optimal,
    )


def _boltzmann_row(mu: float, sigma: float, beta: float, cross_check: bool) -> SweepRow:
    report = delta_decomposition(mu, sigma, Boltzmann(beta))
    if cross_check:
        direct = delta(Gaussian(mu, sigma), Boltzmann(beta)).delta
        if abs(direct - report.delta) > CROSS_CHECK_TOL:
            raise CrossCheckError(
                f"decomposition/quadrature mismatch at mu={mu}, sigma={sigma}, "
                f"beta={beta}: {report.delta} vs {direct}"
            )
    return SweepRow(
        mu=mu,
        sigma=sigma,
        beta=beta,
        delta=report.delta,
        info_term=report.info_term,
        correction_term=report.correction_term,
        optimal=report.optimal,
    )


def run_sweep(grid: SweepGrid, threads: int = 1) -> list[SweepRow]:
    """One row per grid point, lexicographic in (mu, sigma, beta).

    Rational rows use the closed form; Boltzmann rows use the
    decomposition, with every 16th row (by global row index, so the
    sample is thread-count independent) re-derived by direct quadrature
    and rejected beyond 1e-5 discrepancy.
    """
    if grid.policy_family == "rational":
        points = [(mu, sigma) for mu in grid.mu_axis for sigma in grid.sigma_axis]
        compute = lambda i: _rational_row(*points[i])
    else:
        points = [
            (mu, sigma, beta)
            for mu in grid.mu_axis
            for sigma in grid.sigma_axis
            for beta in grid.beta_axis
        ]
        compute = lambda i: _boltzmann_row(*points[i], cross_check=i % CROSS_CHECK_EVERY == 0)
    indices = range(len(points))
    if threads <= 1:
        return [compute(i) for i in indices]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(compute, indices))


def zero_boundary(rows: list[SweepRow]) -> list[tuple[float, float]]:
    """delta = 0 crossings of a single-mu Boltzmann sweep.

    For each sigma column, walks the beta axis and linearly interpolates
    the beta at which delta changes sign. Empty when delta never
    changes sign (e.g. the mu = 0 slice, where waiting always wins).
    """
    if not rows:
        raise ValueError("zero_boundary needs a non-empty row list")
    if any(r.beta is None for r in rows):
        raise ValueError("zero_boundary needs Boltzmann sweep rows")
    if len({r.mu for r in rows}) != 1:
        raise ValueError("zero_boundary needs rows for exactly one mu")
    sigmas = sorted({r.sigma for r in rows})
    betas = sorted({r.beta for r in rows})
    if len(rows) != len(sigmas) * len(betas):
        raise ValueError("rows do not form a complete rectangular (sigma, beta) grid")
    by_point = {(r.sigma, r.beta): r.delta for r in rows}
    if len(by_point) != len(rows):
        raise ValueError("duplicate (sigma, beta) grid points")

    crossings: list[tuple[float, float]] = []
    for sigma in sigmas:
        deltas = [by_point[(sigma, beta)] for beta in betas]
        for (b0, d0), (b1, d1) in zip(zip(betas, deltas), zip(betas[1:], deltas[1:])):
            if d0 == 0.0:
                crossings.append((sigma, b0))
            elif d0 * d1 < 0.0:
                crossings.append((sigma, b0 + (b1 - b0) * d0 / (d0 - d1)))
        if deltas[-1] == 0.0:
            crossings.append((sigma, betas[-1]))
    return crossings


def _symmetric_axis(limit: float, half_count: int) -> tuple[float, ...]:
    # Bitwise-negatable pairs around 0, so mu <-> -mu sweep rows compare
    # exactly; a plain linspace over [-limit, limit] is not symmetric in
    # floating point.
    half = np.linspace(0.0, limit, half_count)
    return tuple(np.concatenate([-half[:0:-1], half]))


def default_fig2_lines_grid() -> SweepGrid:
    """Incentive-vs-std curves for a few fixed means, rational human."""
    return SweepGrid(
        mu_axis=(0.0, 0.5, 1.0, 2.0),
        sigma_axis=tuple(np.linspace(0.01, 3.0, 80)),
    )


def default_fig2_contour_grid() -> SweepGrid:
    """81 x 80 (mu, sigma) surface, rational human, mu symmetric about 0."""
    return SweepGrid(
        mu_axis=_symmetric_axis(2.0, 41),
        sigma_axis=tuple(np.linspace(0.01, 3.0, 80)),
    )


def default_fig3_grid(mu: float) -> SweepGrid:
    """60 x 60 (sigma, beta) log-log surface at one mean, Boltzmann human."""
    return SweepGrid(
        mu_axis=(mu,),
        sigma_axis=tuple(np.logspace(-1.3, 0.5, 60)),
        beta_axis=tuple(np.logspace(-1.3, 1.0, 60)),
        policy_family="boltzmann",
    )
