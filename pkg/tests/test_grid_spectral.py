"""Transforms and multiplier operators against independent oracles."""

import numpy as np
import pytest

from muskatlab.grid import (
    GridError,
    PeriodicGrid,
    RealField,
    SpectralField,
    apply_lambda_s,
    derivative,
    forward_transform,
    hilbert,
    inverse_transform,
    mean_remove,
    translate,
)

from conftest import random_field


def dft_oracle(samples):
    """Direct O(N^2) discrete Fourier sum."""
    n = len(samples)
    j = np.arange(n)
    k = np.arange(n)
    return (samples[None, :] * np.exp(-2j * np.pi * k[:, None] * j[None, :] / n)).sum(axis=1) / n


class TestPeriodicGrid:
    def test_basic(self):
        g = PeriodicGrid(64, 2.0 * np.pi)
        assert g.spacing * g.n_points == pytest.approx(g.length, rel=1e-15)
        assert len(g.nodes) == 64
        assert g.wavenumbers[1] == pytest.approx(1.0)

    @pytest.mark.parametrize("n", [4, 6, 100, 7])
    def test_rejects_bad_sizes(self, n):
        with pytest.raises(GridError):
            PeriodicGrid(n, 1.0)

    def test_rejects_bad_length(self):
        with pytest.raises(GridError):
            PeriodicGrid(64, -1.0)


class TestRealField:
    def test_shape_mismatch(self, grid_2pi):
        with pytest.raises(GridError):
            RealField(grid_2pi, np.zeros(13))

    def test_mean_removed_flag_enforced(self, grid_2pi):
        with pytest.raises(GridError):
            RealField(grid_2pi, np.ones(grid_2pi.n_points), mean_removed=True)

    def test_mean_remove(self, grid_2pi):
        f = RealField(grid_2pi, np.cos(grid_2pi.nodes) + 3.0)
        g = mean_remove(f)
        assert abs(g.mean()) < 1e-14


class TestForwardTransform:
    def test_zero_field(self, grid_2pi):
        F = forward_transform(RealField(grid_2pi, np.zeros(grid_2pi.n_points)))
        assert np.all(F.coefficients == 0)

    def test_single_mode(self, grid_2pi):
        f = RealField(grid_2pi, np.cos(grid_2pi.nodes))
        c = forward_transform(f).coefficients
        nonzero = np.flatnonzero(np.abs(c) > 1e-13)
        assert sorted(nonzero) == [1, grid_2pi.n_points - 1]
        assert c[1] == pytest.approx(0.5)

    def test_round_trip_against_direct_sum(self, rng):
        g = PeriodicGrid(64, 2.0 * np.pi)
        f = random_field(g, rng, k_max=20)
        F = forward_transform(f)
        direct = dft_oracle(f.samples)
        assert np.max(np.abs(F.coefficients - direct)) < 1e-12
        back = inverse_transform(F)
        rel = np.max(np.abs(back.samples - f.samples)) / np.max(np.abs(f.samples))
        assert rel < 1e-12

    @pytest.mark.parametrize("n", [64, 256, 1024])
    def test_parseval(self, n, rng):
        g = PeriodicGrid(n, 5.0)
        f = random_field(g, rng, k_max=n // 4)
        c = forward_transform(f).coefficients
        l2_sq = g.spacing * np.sum(f.samples**2)
        coef_sq = g.length * np.sum(np.abs(c) ** 2)
        assert l2_sq == pytest.approx(coef_sq, rel=1e-12)

    def test_hermitian_symmetry(self, grid_2pi, rng):
        F = forward_transform(random_field(grid_2pi, rng))
        assert F.hermitian_defect() < 1e-14


class TestLambda:
    def test_single_mode(self, grid_2pi):
        k = 3
        f = RealField(grid_2pi, np.cos(k * grid_2pi.nodes), mean_removed=True)
        out = apply_lambda_s(f, 1.0)
        assert np.max(np.abs(out.samples - k * f.samples)) < 1e-11

    def test_constant_killed(self, grid_2pi):
        f = RealField(grid_2pi, np.full(grid_2pi.n_points, 2.5))
        assert np.max(np.abs(apply_lambda_s(f, 0.7).samples)) < 1e-13

    def test_s_zero_is_identity(self, grid_2pi, rng):
        f = random_field(grid_2pi, rng)
        assert np.array_equal(apply_lambda_s(f, 0.0).samples, f.samples)

    def test_half_powers_compose(self, grid_2pi, rng):
        f = random_field(grid_2pi, rng)
        twice = apply_lambda_s(apply_lambda_s(f, 0.5), 0.5)
        once = apply_lambda_s(f, 1.0)
        rel = np.max(np.abs(twice.samples - once.samples)) / np.max(np.abs(once.samples))
        assert rel < 1e-10

    def test_rejects_negative_order(self, grid_2pi, rng):
        with pytest.raises(ValueError):
            apply_lambda_s(random_field(grid_2pi, rng), -0.5)


class TestHilbert:
    def test_cos_to_sin(self, grid_2pi):
        for k in (1, 5):
            f = RealField(grid_2pi, np.cos(k * grid_2pi.nodes), mean_removed=True)
            out = hilbert(f)
            assert np.max(np.abs(out.samples - np.sin(k * grid_2pi.nodes))) < 1e-12

    def test_involution_is_negation(self, grid_2pi, rng):
        f = random_field(grid_2pi, rng)
        out = hilbert(hilbert(f))
        rel = np.max(np.abs(out.samples + f.samples)) / np.max(np.abs(f.samples))
        assert rel < 1e-12

    def test_derivative_of_hilbert_is_lambda(self, grid_2pi, rng):
        f = random_field(grid_2pi, rng)
        a = derivative(hilbert(f), 1)
        b = apply_lambda_s(f, 1.0)
        rel = np.max(np.abs(a.samples - b.samples)) / np.max(np.abs(b.samples))
        assert rel < 1e-12


class TestDerivative:
    def test_single_mode(self, grid_2pi):
        k = 4
        f = RealField(grid_2pi, np.sin(k * grid_2pi.nodes), mean_removed=True)
        out = derivative(f, 1)
        assert np.max(np.abs(out.samples - k * np.cos(k * grid_2pi.nodes))) < 1e-11

    def test_constant_to_zero(self, grid_2pi):
        f = RealField(grid_2pi, np.full(grid_2pi.n_points, 1.7))
        assert np.max(np.abs(derivative(f, 1).samples)) < 1e-13

    def test_second_derivative_vs_finite_difference(self, rng):
        coeffs = rng.randn(6, 2)
        errors = []
        for n in (128, 256):
            g = PeriodicGrid(n, 2.0 * np.pi)
            x = g.nodes
            s = np.zeros(n)
            for k in range(1, 7):
                a, b = coeffs[k - 1]
                s += (a * np.cos(k * x) + b * np.sin(k * x)) / (1.0 + k) ** 2
            f = RealField(g, s - np.mean(s), mean_removed=True)
            spectral = derivative(f, 2).samples
            fd = (np.roll(f.samples, -1) - 2.0 * f.samples + np.roll(f.samples, 1)) / g.spacing**2
            errors.append(np.max(np.abs(spectral - fd)))
        # centered stencil is second order: halving h quarters the error
        assert errors[1] < errors[0] / 3.0

    @pytest.mark.parametrize("order", [0, 5, -1])
    def test_rejects_orders(self, grid_2pi, rng, order):
        with pytest.raises(ValueError):
            derivative(random_field(grid_2pi, rng), order)


class TestOperatorAlgebra:
    def test_pairwise_commutation(self, grid_2pi, rng):
        f = random_field(grid_2pi, rng)
        ops = {
            "lambda": lambda u: apply_lambda_s(u, 1.0),
            "hilbert": hilbert,
            "ddx": lambda u: derivative(u, 1),
        }
        names = list(ops)
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                ab = ops[a](ops[b](f)).samples
                ba = ops[b](ops[a](f)).samples
                assert np.max(np.abs(ab - ba)) < 1e-10

    def test_lambda_factorizations(self, grid_2pi, rng):
        f = random_field(grid_2pi, rng)
        lam = apply_lambda_s(f, 1.0).samples
        dh = derivative(hilbert(f), 1).samples
        hd = hilbert(derivative(f, 1)).samples
        assert np.max(np.abs(lam - dh)) < 1e-10
        assert np.max(np.abs(lam - hd)) < 1e-10

    def test_linearity(self, grid_2pi, rng):
        f = random_field(grid_2pi, rng)
        g = random_field(grid_2pi, rng)
        a, b = 2.5, -0.75
        combo = RealField(grid_2pi, a * f.samples + b * g.samples, mean_removed=True)
        for op in (lambda u: apply_lambda_s(u, 0.5), hilbert, lambda u: derivative(u, 1)):
            lhs = op(combo).samples
            rhs = a * op(f).samples + b * op(g).samples
            scale = max(np.max(np.abs(rhs)), 1e-30)
            assert np.max(np.abs(lhs - rhs)) / scale < 1e-12


class TestTranslate:
    def test_grid_shift_is_roll(self, grid_2pi, rng):
        f = random_field(grid_2pi, rng)
        out = translate(f, 3 * grid_2pi.spacing)
        assert np.array_equal(out.samples, np.roll(f.samples, 3))

    def test_fractional_shift_exact_on_modes(self, grid_2pi):
        k, y = 3, 0.2345
        f = RealField(grid_2pi, np.cos(k * grid_2pi.nodes), mean_removed=True)
        out = translate(f, y)
        expect = np.cos(k * (grid_2pi.nodes - y))
        assert np.max(np.abs(out.samples - expect)) < 1e-12
