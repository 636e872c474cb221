import pytest
from hypothesis import given, strategies as st

import oracles
from bayesborrow import (
    GammaMixtureHyperparams,
    HistoricalSource,
    WeightKind,
    WeightVector,
    commensurate_variance,
    interpolate_precision,
    invert_precision,
    linearize_all,
    linearize_weight,
    precision_endpoints,
)
from bayesborrow.linearize import PrecisionEndpoints


class TestPrecisionEndpoints:
    def test_steep_hyper_values(self, source_01, steep_hyper):
        ep = precision_endpoints(source_01, steep_hyper)
        assert ep.at_zero == pytest.approx(9.99990, abs=1e-4)
        assert ep.at_one == pytest.approx(0.0900901, abs=1e-6)

    def test_config_a_source_1(self, default_hyper):
        source = HistoricalSource(id="s", theta=0.1, tau_sq=1.25)
        ep = precision_endpoints(source, default_hyper)
        assert ep.at_zero == pytest.approx(0.80000, abs=1e-5)
        assert ep.at_one == pytest.approx(0.0097800, abs=1e-6)

    def test_uninformative_source_limit(self, default_hyper):
        source = HistoricalSource(id="s", theta=0.0, tau_sq=1e12)
        ep = precision_endpoints(source, default_hyper)
        assert ep.at_zero == pytest.approx(0.0, abs=1e-11)
        assert ep.at_one == pytest.approx(0.0, abs=1e-11)
        assert ep.at_zero > ep.at_one

    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            PrecisionEndpoints(at_zero=0.5, at_one=0.6)


class TestInterpolatePrecision:
    def test_exact_endpoints(self, source_01, steep_hyper):
        ep = precision_endpoints(source_01, steep_hyper)
        assert interpolate_precision(0.0, ep) == ep.at_zero
        assert interpolate_precision(1.0, ep) == ep.at_one

    def test_midpoint(self):
        ep = PrecisionEndpoints(at_zero=9.99990, at_one=0.0900901)
        assert interpolate_precision(0.5, ep) == pytest.approx(5.04500, abs=1e-4)

    @pytest.mark.parametrize("bad", [-0.01, 1.01])
    def test_domain(self, bad, source_01, steep_hyper):
        with pytest.raises(ValueError):
            interpolate_precision(bad, precision_endpoints(source_01, steep_hyper))


class TestInvertPrecision:
    def test_endpoint_inversion_exact(self, source_01, steep_hyper):
        ep = precision_endpoints(source_01, steep_hyper)
        assert invert_precision(ep.at_zero, source_01, steep_hyper) == 0.0
        assert invert_precision(ep.at_one, source_01, steep_hyper) == 1.0

    def test_against_bisection_oracle(self, source_01, steep_hyper):
        w = invert_precision(5.04500, source_01, steep_hyper)
        assert w == pytest.approx(0.0089286, abs=1e-6)
        assert w == pytest.approx(
            oracles.invert_precision_bisect(5.04500, source_01, steep_hyper), abs=1e-10
        )

    def test_out_of_range_rejected(self, source_01, steep_hyper):
        ep = precision_endpoints(source_01, steep_hyper)
        with pytest.raises(ValueError):
            invert_precision(ep.at_zero * 1.001, source_01, steep_hyper)
        with pytest.raises(ValueError):
            invert_precision(ep.at_one * 0.999, source_01, steep_hyper)

    @given(st.floats(min_value=0.0, max_value=1.0))
    def test_round_trip_on_grid(self, w, ):
        hyper = GammaMixtureHyperparams()
        source = HistoricalSource(id="s", theta=0.0, tau_sq=0.7)
        P = 1.0 / commensurate_variance(source, w, hyper)
        assert invert_precision(P, source, hyper) == pytest.approx(w, abs=1e-10)

    def test_round_trip_101_grid(self, source_01, steep_hyper):
        for i in range(101):
            w = i / 100
            P = 1.0 / commensurate_variance(source_01, w, steep_hyper)
            assert invert_precision(P, source_01, steep_hyper) == pytest.approx(w, abs=1e-10)


class TestLinearizeWeight:
    def test_reference_values(self, default_hyper):
        # recorded reference transformed weights for two benchmark sources
        s1 = HistoricalSource(id="s", theta=0.0, tau_sq=1.25)
        assert linearize_weight(0.20, s1, default_hyper) == pytest.approx(3.05e-3, rel=0.01)
        s5 = HistoricalSource(id="s", theta=0.0, tau_sq=0.66)
        assert linearize_weight(0.70, s5, default_hyper) == pytest.approx(1.49e-2, rel=0.01)

    def test_composition_value(self, source_01, steep_hyper):
        assert linearize_weight(0.5, source_01, steep_hyper) == pytest.approx(8.93e-3, abs=1e-5)

    def test_fixed_points_exact(self, default_hyper):
        for tau_sq in (0.04, 0.5, 5.81):
            source = HistoricalSource(id="s", theta=0.0, tau_sq=tau_sq)
            assert linearize_weight(0.0, source, default_hyper) == 0.0
            assert linearize_weight(1.0, source, default_hyper) == 1.0

    def test_strictly_increasing_1001_grid(self, default_hyper):
        source = HistoricalSource(id="s", theta=0.0, tau_sq=0.77)
        values = [linearize_weight(i / 1000, source, default_hyper) for i in range(1001)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_downstream_precision_affine(self, default_hyper):
        # xi^{-2}(f(w)) must be affine in w: that is the whole point
        source = HistoricalSource(id="s", theta=0.0, tau_sq=1.89)
        grid = [i / 10 for i in range(11)]
        precs = [
            1.0 / commensurate_variance(source, linearize_weight(w, source, default_hyper), default_hyper)
            for w in grid
        ]
        span = max(precs) - min(precs)
        for a, b, c in zip(precs, precs[1:], precs[2:]):
            assert abs((c - b) - (b - a)) <= 1e-9 * span


class TestLinearizeAll:
    def test_config_b_row(self, configs):
        scenario = configs["b"]
        transformed = linearize_all(scenario.sources, scenario.weights, scenario.hyper)
        expected = (3.14e-3, 4.31e-3, 1.93e-2, 1.34e-2, 1.69e-2)
        assert transformed.kind is WeightKind.TRANSFORMED
        for got, want in zip(transformed, expected):
            assert got == pytest.approx(want, rel=0.01)

    def test_all_zero_and_all_one_fixed(self, configs):
        scenario = configs["a"]
        zeros = linearize_all(scenario.sources, WeightVector.raw([0.0] * 5), scenario.hyper)
        ones = linearize_all(scenario.sources, WeightVector.raw([1.0] * 5), scenario.hyper)
        assert zeros.values == (0.0,) * 5
        assert ones.values == (1.0,) * 5

    def test_coordinate_independence(self, configs):
        scenario = configs["a"]
        base = linearize_all(scenario.sources, scenario.weights, scenario.hyper)
        moved = list(scenario.weights.values)
        moved[2] = 0.11
        changed = linearize_all(scenario.sources, WeightVector.raw(moved), scenario.hyper)
        for q in range(5):
            if q == 2:
                assert changed[q] != base[q]
            else:
                assert changed[q] == base[q]

    def test_rejects_transformed_input(self, configs):
        scenario = configs["a"]
        transformed = linearize_all(scenario.sources, scenario.weights, scenario.hyper)
        with pytest.raises(ValueError, match="raw"):
            linearize_all(scenario.sources, transformed, scenario.hyper)

    def test_length_mismatch(self, configs):
        scenario = configs["a"]
        with pytest.raises(ValueError):
            linearize_all(scenario.sources, WeightVector.raw([0.5]), scenario.hyper)
