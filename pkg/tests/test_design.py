import math
import warnings

import pytest
from hypothesis import given, strategies as st

import oracles
from bayesborrow import (
    DesignParams,
    GammaMixtureHyperparams,
    HistoricalSource,
    LegacyAggregationWarning,
    RawWeightsWarning,
    WeightVector,
    aggregate_legacy,
    aggregate_precision_weighted,
    events_required_tte,
    linearize_all,
    required_precision,
    round_allocation,
    sample_size_binary_two_arm,
    sample_size_borrow_normal,
    sample_size_frequentist,
    sample_size_no_borrow,
    sample_size_single_arm_binary,
    sweep_surface,
)

SIGMA0_SQ = 3.69**2


def _design(**overrides):
    base = dict(
        delta=1.0, R=0.5, eta=0.95, zeta=0.80,
        sigma0_sq=SIGMA0_SQ, mu0=0.0, s0_sq=100.0, alpha=0.05, beta=0.20,
    )
    base.update(overrides)
    return DesignParams(**base)


class TestRequiredPrecision:
    def test_reference_value(self):
        assert required_precision(1.0, 0.95, 0.80) == pytest.approx(6.18256, abs=1e-4)
        z = oracles.quantile_bisect(0.95) + oracles.quantile_bisect(0.80)
        assert required_precision(1.0, 0.95, 0.80) == pytest.approx(z * z, rel=1e-12)

    def test_scales_with_inverse_delta_squared(self):
        assert required_precision(2.0, 0.95, 0.80) == pytest.approx(1.54564, abs=1e-4)
        assert required_precision(2.0, 0.95, 0.80) == pytest.approx(
            required_precision(1.0, 0.95, 0.80) / 4.0, rel=1e-12
        )

    def test_half_thresholds_give_zero(self):
        assert required_precision(1.0, 0.5, 0.5) == 0.0


class TestRoundAllocation:
    @pytest.mark.parametrize(
        "n_real,R,expected",
        [(336.7, 0.5, 338), (202.17, 0.5, 204), (10.0, 0.5, 10), (0.0, 0.5, 0), (-3.0, 0.5, 0)],
    )
    def test_even_rounding(self, n_real, R, expected):
        assert round_allocation(n_real, R) == expected

    def test_third_allocation_rounds_to_multiple_of_three(self):
        assert round_allocation(10.0, 1.0 / 3.0) == 12
        assert round_allocation(12.0, 1.0 / 3.0) == 12

    def test_snaps_float_fuzz(self):
        assert round_allocation(204.00000000000003, 0.5) == 204

    def test_irrational_like_ratio_falls_back_to_ceiling(self):
        with pytest.warns(UserWarning, match="denominator"):
            assert round_allocation(10.2, 1.0 / math.pi) == 11


class TestNormalFormulas:
    def test_frequentist_reference(self):
        result = sample_size_frequentist(_design())
        assert result.n == 338
        assert result.n_real == pytest.approx(336.729, abs=1e-3)
        assert result.per_arm == 169
        assert result.convention == "total"

    def test_frequentist_quarters_when_delta_doubles(self):
        a = sample_size_frequentist(_design())
        b = sample_size_frequentist(_design(delta=2.0))
        assert b.n_real == pytest.approx(a.n_real / 4.0, rel=1e-12)

    def test_equal_allocation_minimizes_frequentist_n(self):
        best = sample_size_frequentist(_design()).n_real
        for r in [i / 20 for i in range(1, 20)]:
            assert sample_size_frequentist(_design(R=r)).n_real >= best

    def test_no_borrow_reference(self):
        result = sample_size_no_borrow(_design())
        assert result.n == 338
        assert result.prior_precision_used == pytest.approx(0.01)

    def test_no_borrow_vague_limit_matches_frequentist(self):
        nb = sample_size_no_borrow(_design(s0_sq=math.inf, eta=0.95, zeta=0.80))
        fr = sample_size_frequentist(_design(alpha=0.05, beta=0.20))
        assert nb.n_real == fr.n_real  # eta = 1 - alpha, zeta = 1 - beta

    def test_decisive_prior_gives_zero(self):
        result = sample_size_no_borrow(_design(s0_sq=1.0 / 10.0))  # precision 10 > 6.18
        assert result.n == 0
        assert result.n_real == 0.0
        assert result.decisive_by_prior

    def test_missing_params_raise(self):
        with pytest.raises(ValueError, match="alpha"):
            sample_size_frequentist(_design(alpha=None))
        with pytest.raises(ValueError, match="s0_sq"):
            sample_size_no_borrow(_design(s0_sq=None))


class TestBorrowNormal:
    def test_config_a_reference(self, configs):
        scenario = configs["a"]
        transformed = linearize_all(scenario.sources, scenario.weights, scenario.hyper)
        prior = aggregate_precision_weighted(scenario.sources, transformed, scenario.hyper)
        result = sample_size_borrow_normal(scenario.design, prior)
        assert result.n == 204

    def test_config_d_reference(self, configs):
        scenario = configs["d"]
        transformed = linearize_all(scenario.sources, scenario.weights, scenario.hyper)
        prior = aggregate_precision_weighted(scenario.sources, transformed, scenario.hyper)
        assert sample_size_borrow_normal(scenario.design, prior).n == 112

    def test_raw_weight_hazard_reference(self, alzheimers_stated):
        scenario = alzheimers_stated
        prior = aggregate_precision_weighted(scenario.sources, scenario.weights, scenario.hyper)
        with pytest.warns(RawWeightsWarning):
            result = sample_size_borrow_normal(scenario.design, prior)
        assert result.n == 332

    def test_legacy_prior_warns(self, configs):
        scenario = configs["a"]
        transformed = linearize_all(scenario.sources, scenario.weights, scenario.hyper)
        prior = aggregate_legacy(scenario.sources, transformed, scenario.hyper)
        with pytest.warns(LegacyAggregationWarning):
            sample_size_borrow_normal(scenario.design, prior)

    def test_consistency_with_no_borrow(self, configs):
        scenario = configs["b"]
        transformed = linearize_all(scenario.sources, scenario.weights, scenario.hyper)
        prior = aggregate_precision_weighted(scenario.sources, transformed, scenario.hyper)
        via_borrow = sample_size_borrow_normal(scenario.design, prior)
        via_no_borrow = sample_size_no_borrow(_design(s0_sq=prior.variance))
        assert via_borrow.n_real == via_no_borrow.n_real
        assert via_borrow.n == via_no_borrow.n


class TestOtherEndpoints:
    def test_binary_reference(self):
        result = sample_size_binary_two_arm(0.6, 0.4, math.log(2.25), 0.95, 0.80, 0.0)
        assert result.n == 79
        assert result.per_arm == 79
        assert result.convention == "per-arm"

    def test_binary_decisive_prior(self):
        target = required_precision(math.log(2.25), 0.95, 0.80)
        result = sample_size_binary_two_arm(0.6, 0.4, math.log(2.25), 0.95, 0.80, target)
        assert result.n == 0 and result.decisive_by_prior

    def test_binary_symmetry(self):
        a = sample_size_binary_two_arm(0.6, 0.4, 0.5, 0.95, 0.80)
        b = sample_size_binary_two_arm(0.4, 0.6, 0.5, 0.95, 0.80)
        assert a.n_real == b.n_real

    def test_binary_boundary_proportions_rejected(self):
        with pytest.raises(ValueError):
            sample_size_binary_two_arm(0.0, 0.4, 0.5, 0.95, 0.80)
        with pytest.raises(ValueError):
            sample_size_binary_two_arm(0.6, 1.0, 0.5, 0.95, 0.80)

    def test_tte_reference(self):
        result = events_required_tte(math.log(1.5), 0.5, 0.95, 0.80, 0.0)
        assert result.n == 152
        assert result.n_real == pytest.approx(150.425, abs=1e-3)
        assert result.convention == "events"

    def test_tte_prior_precision_linearity(self):
        base = events_required_tte(math.log(1.5), 0.5, 0.95, 0.80, 0.0)
        less = events_required_tte(math.log(1.5), 0.5, 0.95, 0.80, 1.0)
        assert base.n_real - less.n_real == pytest.approx(4.0, rel=1e-12)

    def test_tte_equal_allocation_minimizes(self):
        best = events_required_tte(0.4, 0.5, 0.95, 0.80).n_real
        for r in [0.1, 0.25, 0.4, 0.6, 0.75, 0.9]:
            assert events_required_tte(0.4, r, 0.95, 0.80).n_real >= best

    def test_single_arm_reference(self):
        result = sample_size_single_arm_binary(0.3, 0.5, 0.95, 0.80, 0.0)
        assert result.n == 118
        assert result.n_real == pytest.approx(117.763, abs=1e-3)

    def test_single_arm_half_minimizes(self):
        best = sample_size_single_arm_binary(0.5, 0.5, 0.95, 0.80).n_real
        for p in [0.1, 0.2, 0.35, 0.65, 0.9]:
            assert sample_size_single_arm_binary(p, 0.5, 0.95, 0.80).n_real >= best

    def test_single_arm_decisive(self):
        target = required_precision(0.5, 0.95, 0.80)
        assert sample_size_single_arm_binary(0.3, 0.5, 0.95, 0.80, target).n == 0

    @given(st.floats(min_value=0.0, max_value=6.0), st.floats(min_value=0.01, max_value=0.17))
    def test_n_real_strictly_decreasing_then_clamped(self, prior_precision, bump):
        a = sample_size_binary_two_arm(0.5, 0.3, 0.7, 0.95, 0.80, prior_precision)
        b = sample_size_binary_two_arm(0.5, 0.3, 0.7, 0.95, 0.80, prior_precision + bump)
        if a.n_real > 0:
            assert b.n_real < a.n_real or (b.n_real == 0.0 and b.decisive_by_prior)
        else:
            assert b.n_real == 0.0


class TestSweepSurface:
    def test_two_axis_grid_shape_and_corners(self, two_source):
        table = sweep_surface(
            two_source.sources, two_source.weights, two_source.hyper, two_source.design,
            axes=[0, 1], grid_step=0.01,
        )
        assert table.columns == (
            "w1", "w2", "prior_precision", "prior_precision_legacy",
            "n_real_raw", "n_real_linearized",
        )
        assert len(table.rows) == 101 * 101
        by_point = {(row[0], row[1]): row for row in table.rows}
        assert by_point[(0.0, 0.0)][3] == pytest.approx(20.0, abs=1e-3)
        assert by_point[(1.0, 1.0)][3] == pytest.approx(0.180, abs=1e-3)

    def test_star_column_monotone_legacy_not(self, two_source):
        table = sweep_surface(
            two_source.sources, two_source.weights, two_source.hyper, two_source.design,
            axes=[0, 1], grid_step=0.05,
        )
        points = {(row[0], row[1]): row for row in table.rows}
        grid = sorted({row[0] for row in table.rows})
        star_monotone = True
        legacy_monotone = True
        for w2 in grid:
            for a, b in zip(grid, grid[1:]):
                if points[(b, w2)][2] > points[(a, w2)][2]:
                    star_monotone = False
                if points[(b, w2)][3] > points[(a, w2)][3]:
                    legacy_monotone = False
        assert star_monotone
        assert not legacy_monotone

    def test_linearized_column_affine_along_axis(self, two_source):
        table = sweep_surface(
            two_source.sources, two_source.weights, two_source.hyper, two_source.design,
            axes=[0], grid_step=0.1,
        )
        values = [row[-1] for row in table.rows]
        span = max(abs(v) for v in values)
        for a, b, c in zip(values, values[1:], values[2:]):
            assert abs((c - b) - (b - a)) <= 1e-9 * span

    def test_validation(self, two_source):
        args = (two_source.sources, two_source.weights, two_source.hyper, two_source.design)
        with pytest.raises(ValueError):
            sweep_surface(*args, axes=[5], grid_step=0.1)
        with pytest.raises(ValueError):
            sweep_surface(*args, axes=[0], grid_step=0.6)
        with pytest.raises(ValueError):
            sweep_surface(*args, axes=[0, 0], grid_step=0.1)


class TestDesignParamsValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [dict(delta=0.0), dict(delta=-1.0), dict(R=0.0), dict(R=1.0),
         dict(eta=1.0), dict(zeta=0.0), dict(sigma0_sq=-1.0), dict(s0_sq=0.0)],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            _design(**kwargs)
