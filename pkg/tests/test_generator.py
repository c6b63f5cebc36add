import math

import numpy as np
import pytest

from ganleak.generator import (
    GeneratorModel,
    SaturatingSchedule,
    SourceIdentity,
    TabulatedSchedule,
    memorization_schedule,
    sample_batch,
    sample_codes,
    sample_identity,
)
from ganleak.identity import DatasetSpec, make_setting1_spec


def rng(seed=0):
    return np.random.default_rng(seed)


def two_member_spec(count_a=300, count_b=100):
    return DatasetSpec(
        yf_size=10, members=frozenset({0, 1}), samples_per_identity={0: count_a, 1: count_b}
    )


class TestModelValidation:
    def test_rho_range(self):
        spec = make_setting1_spec(10, 2, 1)
        with pytest.raises(ValueError):
            GeneratorModel(spec, memorization_rate=1.5)
        with pytest.raises(ValueError):
            GeneratorModel(spec, memorization_rate=-0.1)

    def test_gamma_nonnegative(self):
        spec = make_setting1_spec(10, 2, 1)
        with pytest.raises(ValueError):
            GeneratorModel(spec, memorization_rate=0.5, bias_exponent=-1.0)

    def test_default_novel_space_mirrors_unseen_pool(self):
        spec = make_setting1_spec(100, 30, 2)
        model = GeneratorModel(spec, memorization_rate=0.5)
        assert model.novel_space_size == 70

    def test_empty_novel_space_needs_full_memorization(self):
        spec = make_setting1_spec(10, 10, 1)
        GeneratorModel(spec, memorization_rate=1.0)  # fine
        with pytest.raises(ValueError):
            GeneratorModel(spec, memorization_rate=0.9)

    def test_weights_are_a_distribution(self):
        model = GeneratorModel(two_member_spec(), memorization_rate=0.5, bias_exponent=1.7)
        assert abs(model.member_weights.sum() - 1.0) < 1e-9
        assert model.member_cdf[-1] == 1.0

    def test_gamma_zero_is_exactly_uniform(self):
        model = GeneratorModel(two_member_spec(999, 1), memorization_rate=0.5, bias_exponent=0.0)
        assert set(model.member_weights) == {0.5}


class TestSampling:
    def test_forced_member_support(self):
        model = GeneratorModel(two_member_spec(1, 1), memorization_rate=1.0)
        draws = sample_batch(model, 100_000, rng(1))
        assert all(s.is_member for s in draws)
        freq0 = sum(s.index == 0 for s in draws) / len(draws)
        assert abs(freq0 - 0.5) < 4 * math.sqrt(0.25 / len(draws))

    def test_forced_complement(self):
        model = GeneratorModel(two_member_spec(), memorization_rate=0.0)
        codes = sample_codes(model, 50_000, rng(2))
        assert (codes < 0).all()

    def test_mixture_probabilities(self):
        # closed-form oracle: rho=0.5, gamma=1, counts 300/100
        # P(member 0) = 0.5 * 300/400 = 0.375, P(member 1) = 0.125, P(novel) = 0.5
        model = GeneratorModel(two_member_spec(300, 100), memorization_rate=0.5, bias_exponent=1.0)
        n = 1_000_000
        codes = sample_codes(model, n, rng(3))
        p0 = (codes == 0).mean()
        p1 = (codes == 1).mean()
        pn = (codes < 0).mean()
        assert abs(p0 - 0.375) < 4 * math.sqrt(0.375 * 0.625 / n)
        assert abs(p1 - 0.125) < 4 * math.sqrt(0.125 * 0.875 / n)
        assert abs(pn - 0.5) < 4 * math.sqrt(0.25 / n)

    def test_novel_draws_cover_space_uniformly(self):
        spec = make_setting1_spec(20, 4, 1)
        model = GeneratorModel(spec, memorization_rate=0.0, novel_space_size=8)
        codes = sample_codes(model, 80_000, rng(4))
        js = -codes - 1
        assert js.min() >= 0 and js.max() <= 7
        freq = np.bincount(js, minlength=8) / len(js)
        assert np.abs(freq - 0.125).max() < 4 * math.sqrt(0.125 * 0.875 / len(js))

    def test_k_validation(self):
        model = GeneratorModel(two_member_spec(), memorization_rate=0.5)
        with pytest.raises(ValueError):
            sample_codes(model, 0, rng())
        assert len(sample_batch(model, 1, rng())) == 1

    def test_batch_size_matches_lambda_times_pool(self):
        spec = make_setting1_spec(8631, 30, 333)
        model = GeneratorModel(spec, memorization_rate=0.5)
        assert len(sample_codes(model, 2 * 8631, rng(5))) == 17_262

    def test_determinism(self):
        model = GeneratorModel(two_member_spec(), memorization_rate=0.4)
        a = sample_codes(model, 1000, rng(42))
        b = sample_codes(model, 1000, rng(42))
        assert np.array_equal(a, b)

    def test_single_draw_equals_batch(self):
        model = GeneratorModel(two_member_spec(), memorization_rate=0.6)
        batch = sample_batch(model, 50, rng(7))
        r = rng(7)
        singles = [sample_identity(model, r) for _ in range(50)]
        assert singles == batch

    def test_member_marginal_ignores_novel_space_size(self):
        spec = make_setting1_spec(50, 5, 2)
        small = GeneratorModel(spec, memorization_rate=0.5, novel_space_size=3)
        large = GeneratorModel(spec, memorization_rate=0.5, novel_space_size=4000)
        a = sample_codes(small, 20_000, rng(11))
        b = sample_codes(large, 20_000, rng(11))
        members = a >= 0
        assert np.array_equal(members, b >= 0)
        assert np.array_equal(a[members], b[members])

    @pytest.mark.parametrize("seed,rho", [(0, 0.1), (1, 0.5), (2, 0.9), (3, 0.3), (4, 0.7)])
    def test_member_frequency_concentrates_at_rho(self, seed, rho):
        # binomial concentration at n = 1e5: |freq - rho| <= 4 sqrt(rho(1-rho)/n)
        model = GeneratorModel(two_member_spec(), memorization_rate=rho)
        n = 100_000
        codes = sample_codes(model, n, rng(seed))
        freq = (codes >= 0).mean()
        assert abs(freq - rho) <= 4 * math.sqrt(rho * (1 - rho) / n)


class TestSourceIdentity:
    @pytest.mark.parametrize("src", [SourceIdentity(True, 0), SourceIdentity(True, 17),
                                     SourceIdentity(False, 0), SourceIdentity(False, 9)])
    def test_code_round_trip(self, src):
        assert SourceIdentity.from_code(src.to_code()) == src


class TestSchedules:
    def test_saturating_values(self):
        sched = SaturatingSchedule(tau=10_000)
        assert sched.rate_at(0) == 0.0
        assert sched.rate_at(17_000) == pytest.approx(1.0 - math.exp(-1.7))
        assert sched.rate_at(17_000) == pytest.approx(0.817, abs=5e-4)
        assert sched.rate_at(10**9) == 1.0

    def test_saturating_rejects_bad_tau(self):
        with pytest.raises(ValueError):
            SaturatingSchedule(tau=0.0)
        with pytest.raises(ValueError):
            SaturatingSchedule(tau=-3.0)

    def test_tabulated_monotonicity_enforced(self):
        TabulatedSchedule(points=((0, 0.0), (10, 0.5), (20, 0.5)))
        with pytest.raises(ValueError):
            TabulatedSchedule(points=((0, 0.5), (10, 0.2)))
        with pytest.raises(ValueError):
            TabulatedSchedule(points=((10, 0.1), (5, 0.2)))
        with pytest.raises(ValueError):
            TabulatedSchedule(points=())

    def test_tabulated_lookup(self):
        sched = TabulatedSchedule(points=((5, 0.25), (10, 1.0)))
        assert sched.rate_at(0) == 0.0
        assert sched.rate_at(5) == 0.25
        assert sched.rate_at(9) == 0.25
        assert sched.rate_at(100) == 1.0

    def test_schedule_only_moves_rho(self):
        model = GeneratorModel(two_member_spec(), memorization_rate=0.0, bias_exponent=2.0)
        stepped = memorization_schedule(model, 17_000, SaturatingSchedule(tau=10_000))
        assert stepped.memorization_rate == pytest.approx(0.8173, abs=5e-4)
        assert stepped.spec is model.spec
        assert stepped.bias_exponent == 2.0
        assert model.memorization_rate == 0.0  # original untouched
