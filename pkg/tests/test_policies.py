"""Human policy values, gradients, and limits."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from offswitch.policies import (
    Boltzmann,
    Constant,
    NotDifferentiableError,
    Rational,
    Tabular,
    allow_prob,
    allow_prob_grad,
)

_utils = st.floats(min_value=-1e4, max_value=1e4, allow_nan=False)


class TestConstruction:
    def test_boltzmann_needs_positive_beta(self):
        with pytest.raises(ValueError):
            Boltzmann(0.0)
        with pytest.raises(ValueError):
            Boltzmann(-1.0)

    def test_constant_needs_probability(self):
        with pytest.raises(ValueError):
            Constant(1.5)

    def test_tabular_validation(self):
        with pytest.raises(ValueError):
            Tabular([0.0, 0.0], [0.1, 0.2])  # not strictly increasing
        with pytest.raises(ValueError):
            Tabular([0.0, 1.0], [0.1, 1.2])  # value out of range
        with pytest.raises(ValueError):
            Tabular([0.0], [0.1, 0.2])  # length mismatch


class TestAllowProb:
    def test_rational_step(self):
        assert allow_prob(Rational(), -0.1) == 0.0
        assert allow_prob(Rational(), 0.0) == 1.0  # boundary inclusive
        assert allow_prob(Rational(), 0.1) == 1.0

    def test_boltzmann_at_origin(self):
        assert allow_prob(Boltzmann(1.0), 0.0) == 0.5

    def test_boltzmann_spot_value(self):
        # 1 / (1 + e^-2), checked against the exp formula directly.
        assert allow_prob(Boltzmann(0.5), 1.0) == pytest.approx(
            1.0 / (1.0 + math.exp(-2.0)), abs=1e-15
        )
        assert allow_prob(Boltzmann(0.5), 1.0) == pytest.approx(0.8807971, abs=1e-7)

    def test_boltzmann_overflow_safe(self):
        assert allow_prob(Boltzmann(1.0), 1e4) == 1.0
        assert allow_prob(Boltzmann(1.0), -1e4) == 0.0
        assert allow_prob(Boltzmann(1e-6), 50.0) == 1.0

    def test_constant_ignores_utility(self):
        assert allow_prob(Constant(0.3), -10.0) == 0.3
        assert allow_prob(Constant(0.3), 10.0) == 0.3

    def test_tabular_interpolates_and_extrapolates_flat(self):
        pol = Tabular([-1.0, 1.0], [0.8, 0.2])
        assert allow_prob(pol, 0.0) == pytest.approx(0.5)
        assert allow_prob(pol, -5.0) == 0.8
        assert allow_prob(pol, 5.0) == 0.2

    def test_vectorized_matches_scalar(self):
        us = np.array([-2.0, -0.5, 0.0, 0.5, 2.0])
        for pol in (Rational(), Boltzmann(0.7), Constant(0.4), Tabular([-1, 1], [0.9, 0.1])):
            vec = allow_prob(pol, us)
            assert vec.shape == us.shape
            assert vec == pytest.approx([allow_prob(pol, float(u)) for u in us])

    @given(u=_utils, beta=st.floats(min_value=1e-6, max_value=1e3, allow_nan=False))
    def test_boltzmann_in_unit_interval(self, u, beta):
        p = allow_prob(Boltzmann(beta), u)
        assert 0.0 <= p <= 1.0

    @given(u=_utils)
    def test_all_variants_in_unit_interval(self, u):
        for pol in (Rational(), Boltzmann(0.3), Constant(0.25), Tabular([-2, 0, 3], [1, 0.5, 0])):
            assert 0.0 <= allow_prob(pol, u) <= 1.0

    def test_boltzmann_strictly_increasing(self):
        us = np.linspace(-30.0, 30.0, 2001)
        ps = allow_prob(Boltzmann(1.0), us)
        assert np.all(np.diff(ps) > 0.0)

    def test_small_beta_converges_to_rational(self):
        pol = Boltzmann(1e-6)
        for u in (-5.0, -0.01, 0.01, 5.0):
            assert abs(allow_prob(pol, u) - allow_prob(Rational(), u)) < 1e-12


class TestAllowProbGrad:
    def test_boltzmann_at_origin(self):
        assert allow_prob_grad(Boltzmann(1.0), 0.0) == 0.25

    def test_constant_is_flat(self):
        assert allow_prob_grad(Constant(0.3), 12.3) == 0.0

    def test_rational_raises(self):
        with pytest.raises(NotDifferentiableError):
            allow_prob_grad(Rational(), 1.0)

    def test_tabular_breakpoint_raises(self):
        pol = Tabular([-1.0, 1.0], [0.8, 0.2])
        with pytest.raises(NotDifferentiableError):
            allow_prob_grad(pol, 1.0)

    def test_tabular_slopes(self):
        pol = Tabular([-1.0, 0.0, 1.0], [0.2, 0.8, 0.5])
        assert allow_prob_grad(pol, -0.5) == pytest.approx(0.6)
        assert allow_prob_grad(pol, 0.5) == pytest.approx(-0.3)
        assert allow_prob_grad(pol, -3.0) == 0.0
        assert allow_prob_grad(pol, 3.0) == 0.0

    def test_boltzmann_positive_everywhere(self):
        us = np.linspace(-50.0, 50.0, 101)
        assert np.all(allow_prob_grad(Boltzmann(2.0), us) >= 0.0)
        assert np.all(allow_prob_grad(Boltzmann(2.0), np.linspace(-5, 5, 101)) > 0.0)

    @pytest.mark.parametrize(
        "policy,u",
        [
            (Boltzmann(2.0), 1.0),
            (Boltzmann(0.5), -0.3),
            (Boltzmann(1.0), 0.0),
            (Constant(0.3), 0.7),
            (Tabular([-1.0, 0.0, 1.0], [0.2, 0.8, 0.5]), 0.4),
            (Tabular([-1.0, 0.0, 1.0], [0.2, 0.8, 0.5]), -0.6),
        ],
    )
    def test_matches_central_finite_difference(self, policy, u):
        h = 1e-6
        fd = (allow_prob(policy, u + h) - allow_prob(policy, u - h)) / (2 * h)
        assert abs(allow_prob_grad(policy, u) - fd) < 1e-8
