"""Measurement-model tests: unitary 2D DFT, masking, and their compositions.

The transform is checked against a brute-force double-sum DFT evaluated
entry by entry, and the operator-norm seam against a literal power
iteration on the masked operator — both oracles are independent of the
implementation under test.
"""

import numpy as np
import pytest

from uwa_est import (
    ChannelGrid,
    DelayDopplerGrid,
    Measurement,
    SamplingMask,
    apply_mask,
    dft2_adjoint,
    dft2_forward,
    forward_model,
    make_mask,
    mask_cardinality,
    operator_norm_sq,
)


def brute_force_dft2(h: np.ndarray) -> np.ndarray:
    """O((LK)^2) DFT straight from the definition, unitary scaling."""
    L, K = h.shape
    out = np.zeros((L, K), dtype=np.complex128)
    for p in range(L):
        for q in range(K):
            acc = 0.0 + 0.0j
            for l in range(L):
                for k in range(K):
                    acc += h[l, k] * np.exp(-2j * np.pi * (p * l / L + q * k / K))
            out[p, q] = acc / np.sqrt(L * K)
    return out


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class TestDft2Forward:
    def test_zero_maps_to_zero(self):
        grid = DelayDopplerGrid(doppler_bins=4, delay_taps=6)
        out = dft2_forward(np.zeros((4, 6), dtype=complex))
        assert np.all(out == 0)

    def test_impulse_maps_to_constant(self):
        h = np.zeros((4, 4), dtype=complex)
        h[0, 0] = 1.0
        out = dft2_forward(h)
        np.testing.assert_allclose(out, np.full((4, 4), 0.25), atol=1e-14)

    def test_matches_brute_force_definition(self):
        rng = np.random.default_rng(42)
        h = random_complex(rng, (3, 5))
        np.testing.assert_allclose(dft2_forward(h), brute_force_dft2(h), atol=1e-12)

    def test_accepts_channel_grid(self):
        rng = np.random.default_rng(7)
        grid = DelayDopplerGrid(doppler_bins=3, delay_taps=5)
        values = random_complex(rng, (3, 5))
        channel = ChannelGrid(grid=grid, values=values)
        np.testing.assert_array_equal(dft2_forward(channel), dft2_forward(values))

    def test_rejects_non_finite(self):
        h = np.zeros((2, 2), dtype=complex)
        h[0, 0] = np.nan
        with pytest.raises(ValueError):
            dft2_forward(h)


class TestDft2Adjoint:
    def test_round_trip(self):
        rng = np.random.default_rng(0)
        h = random_complex(rng, (8, 8))
        back = dft2_adjoint(dft2_forward(h))
        assert np.max(np.abs(back - h)) <= 1e-10

    def test_adjoint_identity(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            x = random_complex(rng, (5, 9))
            y = random_complex(rng, (5, 9))
            lhs = np.vdot(y, dft2_forward(x))
            rhs = np.vdot(dft2_adjoint(y), x)
            assert abs(lhs - rhs) <= 1e-10 * np.linalg.norm(x) * np.linalg.norm(y)

    def test_constant_maps_to_impulse(self):
        u = np.full((4, 4), 0.25, dtype=complex)
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 0] = 1.0
        np.testing.assert_allclose(dft2_adjoint(u), expected, atol=1e-14)


class TestParsevalAndLinearity:
    def test_energy_preserved_on_many_grids(self):
        rng = np.random.default_rng(3)
        for shape in [(2, 2), (5, 7), (11, 20), (16, 32)]:
            x = random_complex(rng, shape)
            assert np.isclose(
                np.linalg.norm(dft2_forward(x)), np.linalg.norm(x), rtol=1e-10
            )

    def test_round_trip_many_grids(self):
        rng = np.random.default_rng(4)
        for shape in [(1, 1), (3, 4), (16, 32)]:
            x = random_complex(rng, shape)
            np.testing.assert_allclose(dft2_adjoint(dft2_forward(x)), x, rtol=1e-10, atol=1e-12)

    def test_forward_model_linear(self):
        rng = np.random.default_rng(5)
        grid = DelayDopplerGrid(doppler_bins=6, delay_taps=6)
        mask = make_mask(grid, 50.0, 11)
        h1, h2 = random_complex(rng, (6, 6)), random_complex(rng, (6, 6))
        a, b = 1.7 - 0.3j, -0.4 + 2.2j
        combined = forward_model(a * h1 + b * h2, mask)
        separate = a * forward_model(h1, mask) + b * forward_model(h2, mask)
        np.testing.assert_allclose(combined, separate, rtol=1e-10, atol=1e-12)


class TestMaskCardinality:
    def test_eq4_formula_on_the_reference_grid(self):
        grid = DelayDopplerGrid(doppler_bins=11, delay_taps=200)
        expected = {10: 220, 25: 550, 50: 1100, 75: 1650, 100: 2200}
        for pct, m in expected.items():
            assert mask_cardinality(grid, float(pct)) == m

    def test_rounds_half_up(self):
        grid = DelayDopplerGrid(doppler_bins=8, delay_taps=32)  # 256 cells
        # 256 * 3.3203125 / 100 = 8.5 exactly
        assert mask_cardinality(grid, 3.3203125) == 9

    def test_clamps_to_at_least_one(self):
        grid = DelayDopplerGrid(doppler_bins=8, delay_taps=32)
        assert mask_cardinality(grid, 0.01) == 1

    def test_monotone_in_percentage(self):
        grid = DelayDopplerGrid(doppler_bins=7, delay_taps=13)
        values = [mask_cardinality(grid, pct) for pct in np.linspace(0.5, 100, 200)]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert values[-1] == grid.size

    def test_rejects_out_of_range(self):
        grid = DelayDopplerGrid(doppler_bins=2, delay_taps=2)
        for pct in (0.0, -5.0, 100.5):
            with pytest.raises(ValueError):
                mask_cardinality(grid, pct)


class TestMakeMask:
    def test_full_sampling_keeps_everything(self):
        grid = DelayDopplerGrid(doppler_bins=4, delay_taps=5)
        mask = make_mask(grid, 100.0, 0)
        assert mask.cardinality == 20
        assert mask.kept.all()

    def test_reference_grid_half_sampling(self):
        grid = DelayDopplerGrid(doppler_bins=11, delay_taps=200)
        assert make_mask(grid, 50.0, 3).cardinality == 1100

    def test_deterministic_and_seed_sensitive(self):
        grid = DelayDopplerGrid(doppler_bins=16, delay_taps=16)
        for seed in range(10):
            a = make_mask(grid, 50.0, seed)
            b = make_mask(grid, 50.0, seed)
            np.testing.assert_array_equal(a.kept, b.kept)
            c = make_mask(grid, 50.0, seed + 1000)
            assert (a.kept != c.kept).any()

    def test_cardinality_matches_kept_count(self):
        grid = DelayDopplerGrid(doppler_bins=9, delay_taps=17)
        for pct in (7.0, 33.3, 64.0, 99.0):
            mask = make_mask(grid, pct, 5)
            assert mask.cardinality == int(np.count_nonzero(mask.kept))
            assert mask.cardinality == mask_cardinality(grid, pct)


class TestApplyMask:
    def test_all_true_mask_is_identity(self):
        rng = np.random.default_rng(8)
        grid = DelayDopplerGrid(doppler_bins=3, delay_taps=3)
        mask = make_mask(grid, 100.0, 0)
        u = random_complex(rng, (3, 3))
        np.testing.assert_array_equal(apply_mask(mask, u), u)

    def test_ones_sum_to_cardinality(self):
        grid = DelayDopplerGrid(doppler_bins=6, delay_taps=7)
        mask = make_mask(grid, 40.0, 2)
        out = apply_mask(mask, np.ones((6, 7), dtype=complex))
        assert out.sum() == mask.cardinality

    def test_matches_entrywise_loop(self):
        rng = np.random.default_rng(9)
        grid = DelayDopplerGrid(doppler_bins=5, delay_taps=8)
        mask = make_mask(grid, 35.0, 4)
        u = random_complex(rng, (5, 8))
        out = apply_mask(mask, u)
        for i in range(5):
            for j in range(8):
                expected = u[i, j] if mask.kept[i, j] else 0.0
                assert out[i, j] == expected

    def test_idempotent(self):
        rng = np.random.default_rng(10)
        grid = DelayDopplerGrid(doppler_bins=4, delay_taps=9)
        mask = make_mask(grid, 55.0, 6)
        u = random_complex(rng, (4, 9))
        once = apply_mask(mask, u)
        np.testing.assert_array_equal(apply_mask(mask, once), once)

    def test_shape_mismatch_rejected(self):
        grid = DelayDopplerGrid(doppler_bins=4, delay_taps=9)
        mask = make_mask(grid, 55.0, 6)
        with pytest.raises(ValueError):
            apply_mask(mask, np.zeros((4, 8), dtype=complex))


class TestForwardModel:
    def test_zero_channel(self):
        grid = DelayDopplerGrid(doppler_bins=4, delay_taps=4)
        mask = make_mask(grid, 50.0, 0)
        assert np.all(forward_model(np.zeros((4, 4), dtype=complex), mask) == 0)

    def test_no_mask_equals_plain_transform(self):
        rng = np.random.default_rng(11)
        h = random_complex(rng, (6, 6))
        np.testing.assert_array_equal(forward_model(h), dft2_forward(h))

    def test_composition(self):
        rng = np.random.default_rng(12)
        grid = DelayDopplerGrid(doppler_bins=6, delay_taps=6)
        mask = make_mask(grid, 50.0, 1)
        h = random_complex(rng, (6, 6))
        np.testing.assert_array_equal(
            forward_model(h, mask), apply_mask(mask, dft2_forward(h))
        )


class TestOperatorNormSq:
    def power_iteration(self, mask, grid, iters=100, seed=0):
        rng = np.random.default_rng(seed)
        v = random_complex(rng, grid.shape)
        v /= np.linalg.norm(v)
        for _ in range(iters):
            w = dft2_adjoint(apply_mask(mask, dft2_forward(v)))
            nw = np.linalg.norm(w)
            if nw == 0:
                return 0.0
            v = w / nw
        return float(np.linalg.norm(apply_mask(mask, dft2_forward(v))) ** 2)

    def test_no_mask(self):
        grid = DelayDopplerGrid(doppler_bins=4, delay_taps=4)
        assert operator_norm_sq(None, grid) == 1.0

    def test_any_selection_mask(self):
        grid = DelayDopplerGrid(doppler_bins=8, delay_taps=8)
        for pct in (10.0, 30.0, 90.0):
            mask = make_mask(grid, pct, 3)
            assert operator_norm_sq(mask, grid) == 1.0
            assert self.power_iteration(mask, grid) <= 1.0 + 1e-6

    def test_power_iteration_agrees_within_one_percent(self):
        grid = DelayDopplerGrid(doppler_bins=8, delay_taps=8)
        mask = make_mask(grid, 30.0, 7)
        estimate = self.power_iteration(mask, grid)
        assert 0 < estimate <= 1.0 + 1e-6
        assert abs(estimate - operator_norm_sq(mask, grid)) <= 0.01


class TestTypes:
    def test_grid_validation(self):
        with pytest.raises(ValueError):
            DelayDopplerGrid(doppler_bins=0, delay_taps=5)
        with pytest.raises(ValueError):
            DelayDopplerGrid(doppler_bins=5, delay_taps=-1)
        with pytest.raises(ValueError):
            DelayDopplerGrid(doppler_bins=2, delay_taps=2, doppler_resolution_hz=0.0)

    def test_grid_shape_and_size(self):
        grid = DelayDopplerGrid(doppler_bins=11, delay_taps=200)
        assert grid.shape == (11, 200)
        assert grid.size == 2200

    def test_channel_grid_shape_checked(self):
        grid = DelayDopplerGrid(doppler_bins=3, delay_taps=4)
        with pytest.raises(ValueError):
            ChannelGrid(grid=grid, values=np.zeros((4, 3), dtype=complex))

    def test_channel_grid_rejects_non_finite(self):
        grid = DelayDopplerGrid(doppler_bins=2, delay_taps=2)
        bad = np.zeros((2, 2), dtype=complex)
        bad[1, 1] = np.inf
        with pytest.raises(ValueError):
            ChannelGrid(grid=grid, values=bad)

    def test_channel_values_read_only(self):
        grid = DelayDopplerGrid(doppler_bins=2, delay_taps=2)
        channel = ChannelGrid(grid=grid, values=np.ones((2, 2), dtype=complex))
        with pytest.raises(ValueError):
            channel.values[0, 0] = 0

    def test_sampling_mask_cardinality_checked(self):
        grid = DelayDopplerGrid(doppler_bins=2, delay_taps=3)
        kept = np.array([[True, False, True], [False, False, True]])
        SamplingMask(grid=grid, kept=kept, cardinality=3)
        with pytest.raises(ValueError):
            SamplingMask(grid=grid, kept=kept, cardinality=4)

    def test_measurement_requires_zeros_off_mask(self):
        grid = DelayDopplerGrid(doppler_bins=2, delay_taps=2)
        mask = make_mask(grid, 50.0, 0)
        values = np.ones((2, 2), dtype=complex)
        with pytest.raises(ValueError):
            Measurement(grid=grid, values=values, mask=mask)
        Measurement(grid=grid, values=apply_mask(mask, values), mask=mask)
