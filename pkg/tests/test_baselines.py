"""Tests for the full-rank LMS, NLMS and MBER reference updates."""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

import baselines
import jidf
import mber
from baselines import FullRankFilter
from errors import ArgumentError


class TestFullRankFilter:
    """Tests for the full-rank filter container."""

    def test_unit(self):
        f = FullRankFilter.unit(4)
        assert_array_equal(f.w, [1, 0, 0, 0])
        assert f.M == 4
        assert f.ctrl is None

    def test_rejects_non_finite(self):
        with pytest.raises(FloatingPointError, match="not finite"):
            FullRankFilter(np.array([1.0, np.inf]))

    def test_output_is_inner_product(self, crandn):
        w, r = crandn(5), crandn(5)
        assert_allclose(FullRankFilter(w).output(r), np.conj(w) @ r)

    def test_step_sizes(self):
        assert (baselines.MU_LMS, baselines.MU_MBER, baselines.MU_REDUCED_RANK) == (0.085, 0.05, 0.035)


class TestLMS:
    """Tests for the LMS update."""

    def test_zero_error_keeps_weights(self, crandn):
        f = FullRankFilter.unit(4)
        r = np.concatenate([[1.0], crandn(3)])
        assert_array_equal(baselines.lms_step(f, r, 1.0, 0.085).w, f.w)

    def test_shape_mismatch(self, crandn):
        with pytest.raises(ArgumentError, match="does not match"):
            baselines.lms_step(FullRankFilter.unit(4), crandn(5), 1.0, 0.01)

    def test_converges_on_static_channel(self, rng, crandn):
        """Single user, fixed channel: LMS approaches the Wiener solution and detects without errors."""
        M, sigma, mu = 4, 0.3, 0.01
        h = np.array([1.0, 0.5j, -0.7, 0.3 + 0.4j])
        f = FullRankFilter.unit(M)
        errors = 0
        n_iter = 10 ** 4
        for i in range(n_iter):
            b = float(rng.choice([-1.0, 1.0]))
            r = h * b + sigma * crandn(M)
            if i >= n_iter - 2000:
                errors += mber.decide(f.output(r)) != b
            f = baselines.lms_step(f, r, b, mu)
        wiener = np.linalg.solve(np.outer(h, h.conj()) + sigma ** 2 * np.eye(M), h)
        assert errors == 0
        assert np.linalg.norm(f.w - wiener) < 0.25 * np.linalg.norm(wiener)


class TestNLMS:
    """Tests for the normalized LMS update."""

    def test_unit_step_interpolates(self, crandn):
        """With mu = 1 the updated filter reproduces the reference on the same input."""
        f = FullRankFilter(crandn(6))
        r = crandn(6)
        updated = baselines.nlms_step(f, r, -1.0, 1.0)
        assert_allclose(updated.output(r), -1.0, atol=1e-6)

    def test_zero_step(self, crandn):
        f = FullRankFilter(crandn(6))
        assert_array_equal(baselines.nlms_step(f, crandn(6), 1.0, 0.0).w, f.w)


class TestFullRankMBER:
    """Tests for the full-rank MBER SG update."""

    def test_matches_reduced_rank_update_with_identity_reduction(self, rng, crandn):
        M = 6
        branch = jidf.make_branch(1, M, M, 1)
        for _ in range(20):
            w, r = crandn(M), crandn(M)
            b = float(rng.choice([-1.0, 1.0]))
            xbar = np.vdot(w, r)
            reduced = mber.update_w(w, r, b, xbar, branch, 0.05, 0.7)
            full = baselines.mber_fullrank_step(FullRankFilter(w), r, b, 0.05, 0.7, normalize=False)
            assert_allclose(full.w, reduced.w, atol=1e-10)

    def test_unit_norm(self, crandn):
        f = baselines.mber_fullrank_step(FullRankFilter(crandn(8)), crandn(8), 1.0, 0.05, 0.5)
        assert_allclose(np.linalg.norm(f.w), 1.0, rtol=1e-12)

    def test_zero_step(self, crandn):
        f = FullRankFilter(crandn(8))
        assert_array_equal(baselines.mber_fullrank_step(f, crandn(8), 1.0, 0.0, 0.5, normalize=False).w, f.w)

    def test_keeps_controller(self, crandn):
        ctrl = mber.StepSizeController()
        f = baselines.mber_fullrank_step(FullRankFilter(crandn(4), ctrl), crandn(4), 1.0, 0.05, 0.5)
        assert f.ctrl is ctrl
