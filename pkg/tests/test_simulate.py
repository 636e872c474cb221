import math

import numpy as np
import pytest

from bayesborrow import (
    SimulationConfig,
    Verdict,
    aggregate_precision_weighted,
    decide,
    linearize_all,
    posterior_update,
    run_replicate,
    run_simulation,
)
from bayesborrow import _mc_fallback as fallback
from bayesborrow._backend import kernel
from bayesborrow.simulate import replicate_key, splitmix64_mix, stream_value, uniform_from_raw

try:
    from bayesborrow import _mc_kernel as compiled
except ImportError:  # extension not built in this install
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernel not built")


@pytest.fixture(scope="module")
def config_a_sim(configs=None):
    from bayesborrow import load_bundled, sample_size_borrow_normal

    scenario = load_bundled("config_a.scenario.json")
    transformed = linearize_all(scenario.sources, scenario.weights, scenario.hyper)
    prior = aggregate_precision_weighted(scenario.sources, transformed, scenario.hyper)
    n = sample_size_borrow_normal(scenario.design, prior).n
    return SimulationConfig(
        design=scenario.design, prior=prior, n=n,
        true_mu_delta=1.0, replicates=2000, seed=1001,
    )


class TestRngReference:
    def test_splitmix_known_vector(self):
        # reference outputs of SplitMix64 seeded with 1234567 (first three next() calls)
        state = 1234567
        outs = []
        for _ in range(3):
            state = (state + 0x9E3779B97F4A7C15) & ((1 << 64) - 1)
            outs.append(splitmix64_mix(state))
        assert outs == [stream_value(1234567, i) for i in range(3)]

    def test_uniform_strictly_inside_unit_interval(self):
        assert uniform_from_raw(0) == 2.0**-54
        assert uniform_from_raw((1 << 64) - 1) == 1.0 - 2.0**-54

    def test_replicate_key_is_mix_of_seed_and_index(self):
        assert replicate_key(42, 7) == stream_value(42, 7)

    def test_backend_stream_matches_scalar_reference(self):
        if compiled is not None:
            for index in (0, 1, 2, 1000):
                assert compiled.stream_raw(99, index) == stream_value(99, index)


class TestBackendParity:
    @needs_compiled
    def test_ybars_bitwise_equal(self):
        a = fallback.replicate_ybars(2024, 0, 200, 51, 51, 1.0, 3.69)
        b = compiled.replicate_ybars(2024, 0, 200, 51, 51, 1.0, 3.69)
        assert np.array_equal(a, b)

    @needs_compiled
    def test_quantile_bitwise_equal(self):
        p = np.concatenate([
            np.linspace(1e-12, 0.0242, 500),
            np.linspace(0.0243, 0.9757, 2000),
            np.linspace(0.9758, 1 - 1e-12, 500),
        ])
        assert np.array_equal(fallback.norm_quantile(p), compiled.norm_quantile(p))

    @needs_compiled
    def test_cdf_bitwise_equal(self):
        x = np.linspace(-8.0, 8.0, 4001)
        assert np.array_equal(fallback.norm_cdf(x), compiled.norm_cdf(x))

    @needs_compiled
    def test_tallies_equal(self, config_a_sim):
        args = (
            config_a_sim.seed, 0, config_a_sim.replicates, 102, 102, 1.0, 3.69,
            config_a_sim.prior.mean, config_a_sim.prior.precision,
            204 * 0.25 / 3.69**2, 1.0, 0.95, 0.80,
        )
        assert tuple(fallback.tally_replicates(*args)) == tuple(compiled.tally_replicates(*args))


class TestRunReplicate:
    def test_deterministic_per_index(self, config_a_sim):
        a = run_replicate(17, config_a_sim)
        b = run_replicate(17, config_a_sim)
        assert a == b

    def test_injection_hook_reproduces_posterior_example(self, config_a_sim):
        outcome = run_replicate(0, config_a_sim, ybar_delta=1.0)
        assert outcome.verdict is Verdict.FUTILE
        post = posterior_update(config_a_sim.prior, 1.0, config_a_sim.n, 0.5, 3.69**2)
        expected = decide(post, 1.0, 0.95, 0.80)
        assert outcome == expected

    def test_noiseless_data_always_efficacious(self, config_a_sim):
        # sigma0 ~ 0: every replicate observes ybar ~ mu exactly
        from dataclasses import replace

        tiny = replace(config_a_sim.design, sigma0_sq=1e-12)
        config = SimulationConfig(
            design=tiny, prior=config_a_sim.prior, n=config_a_sim.n,
            true_mu_delta=1.0, replicates=1, seed=5,
        )
        for rep in range(20):
            assert run_replicate(rep, config).verdict is Verdict.EFFICACIOUS

    def test_matches_batch_tally(self, config_a_sim):
        reps = 300
        verdicts = [run_replicate(i, config_a_sim).verdict for i in range(reps)]
        n_t, n_c = config_a_sim.arm_sizes
        tally = kernel.tally_replicates(
            config_a_sim.seed, 0, reps, n_t, n_c,
            config_a_sim.true_mu_delta, math.sqrt(config_a_sim.design.sigma0_sq),
            config_a_sim.prior.mean, config_a_sim.prior.precision,
            config_a_sim.n * 0.25 / config_a_sim.design.sigma0_sq,
            1.0, 0.95, 0.80,
        )
        assert tally == (
            sum(v is Verdict.EFFICACIOUS for v in verdicts),
            sum(v is Verdict.FUTILE for v in verdicts),
            sum(v is Verdict.INCONCLUSIVE for v in verdicts),
        )


class TestRunSimulation:
    def test_identical_config_identical_result(self, config_a_sim):
        assert run_simulation(config_a_sim) == run_simulation(config_a_sim)

    def test_worker_count_does_not_change_result(self, config_a_sim):
        assert run_simulation(config_a_sim, workers=1) == run_simulation(config_a_sim, workers=4)

    def test_percentages_sum_to_100(self, config_a_sim):
        result = run_simulation(config_a_sim)
        total = result.pct_efficacious + result.pct_futile + result.pct_inconclusive
        assert total == pytest.approx(100.0, abs=1e-9)

    def test_formula_n_gives_zero_inconclusive(self, config_a_sim):
        assert run_simulation(config_a_sim).pct_inconclusive == 0.0

    def test_mc_stderr_definition(self, config_a_sim):
        result = run_simulation(config_a_sim)
        p = result.pct_efficacious / 100.0
        assert result.mc_stderr == pytest.approx(
            math.sqrt(p * (1 - p) / result.replicates), rel=1e-12
        )

    def test_seed_changes_result(self, config_a_sim):
        from dataclasses import replace

        other = replace(config_a_sim, seed=999)
        assert run_simulation(other) != run_simulation(config_a_sim)

    def test_efficacy_rank_across_configs(self):
        from bayesborrow import load_bundled, sample_size_borrow_normal

        rates = []
        for name in "abcd":
            scenario = load_bundled(f"config_{name}.scenario.json")
            transformed = linearize_all(scenario.sources, scenario.weights, scenario.hyper)
            prior = aggregate_precision_weighted(scenario.sources, transformed, scenario.hyper)
            n = sample_size_borrow_normal(scenario.design, prior).n
            config = SimulationConfig(
                design=scenario.design, prior=prior, n=n,
                true_mu_delta=1.0, replicates=4000, seed=77,
            )
            rates.append(run_simulation(config).pct_efficacious)
        assert rates == sorted(rates)


class TestConfigValidation:
    def test_incompatible_allocation_rejected(self, config_a_sim):
        from dataclasses import replace

        with pytest.raises(ValueError, match="allocation"):
            SimulationConfig(
                design=replace(config_a_sim.design, R=1.0 / 3.0),
                prior=config_a_sim.prior, n=103,
                true_mu_delta=1.0, replicates=10, seed=1,
            )

    @pytest.mark.parametrize("bad", [dict(replicates=0), dict(seed=-1), dict(seed=1 << 64), dict(n=1)])
    def test_bad_scalars_rejected(self, config_a_sim, bad):
        kwargs = dict(
            design=config_a_sim.design, prior=config_a_sim.prior, n=config_a_sim.n,
            true_mu_delta=1.0, replicates=10, seed=1,
        )
        kwargs.update(bad)
        with pytest.raises(ValueError):
            SimulationConfig(**kwargs)
