import pytest

from ganleak.identity import (
    DatasetSpec,
    NoBiasError,
    make_setting1_spec,
    make_setting2_spec,
    random_baseline_precision,
)


class TestSetting1:
    def test_reference_cell(self):
        spec = make_setting1_spec(8631, 30, 333)
        assert len(spec.members) == 30
        assert spec.total_samples == 9990  # the "30 (10k)" grid cell
        assert spec.members == frozenset(range(30))
        assert spec.biased_members is None

    def test_full_overlap_boundary(self):
        spec = make_setting1_spec(10, 10, 1)
        assert spec.members == frozenset(range(10))
        assert spec.total_samples == 10

    def test_largest_cell(self):
        spec = make_setting1_spec(8631, 880, 364)
        assert spec.total_samples == 880 * 364 == 320_320

    def test_uniform_counts(self):
        spec = make_setting1_spec(100, 7, 13)
        assert set(spec.samples_per_identity.values()) == {13}

    @pytest.mark.parametrize("yg", [0, -1, 101])
    def test_rejects_bad_yg(self, yg):
        with pytest.raises(ValueError):
            make_setting1_spec(100, yg, 5)

    def test_rejects_zero_per_id(self):
        with pytest.raises(ValueError):
            make_setting1_spec(100, 5, 0)

    def test_deterministic(self):
        assert make_setting1_spec(50, 5, 3) == make_setting1_spec(50, 5, 3)


class TestSetting2:
    def test_reference_cell(self):
        spec = make_setting2_spec(8631, 20, 300, 2000, 20)
        assert sum(spec.samples_per_identity[y] for y in spec.biased_members) == 6_000
        assert sum(spec.samples_per_identity[y] for y in spec.unbiased_members) == 40_000
        assert spec.total_samples == 46_000

    def test_widest_cell(self):
        spec = make_setting2_spec(8631, 160, 300, 2000, 20)
        assert spec.total_samples == 88_000

    def test_smallest_legal_bias(self):
        spec = make_setting2_spec(5, 1, 2, 1, 1)
        assert spec.members == frozenset({0, 1})
        assert spec.biased_members == frozenset({0})
        assert spec.samples_per_identity == {0: 2, 1: 1}

    def test_no_bias_is_a_distinct_error(self):
        with pytest.raises(NoBiasError):
            make_setting2_spec(100, 5, 10, 20, 10)
        with pytest.raises(NoBiasError):
            make_setting2_spec(100, 5, 3, 20, 10)

    def test_tier_overflow(self):
        with pytest.raises(ValueError, match="overflow"):
            make_setting2_spec(10, 6, 5, 5, 1)


class TestDatasetSpec:
    def test_total_is_exact_sum(self):
        spec = DatasetSpec(
            yf_size=10,
            members=frozenset({1, 3, 5}),
            samples_per_identity={1: 4, 3: 9, 5: 2},
        )
        assert spec.total_samples == 15

    def test_members_must_be_in_range(self):
        with pytest.raises(ValueError):
            DatasetSpec(yf_size=3, members=frozenset({3}), samples_per_identity={3: 1})

    def test_members_non_empty(self):
        with pytest.raises(ValueError):
            DatasetSpec(yf_size=3, members=frozenset(), samples_per_identity={})

    def test_counts_must_cover_members(self):
        with pytest.raises(ValueError):
            DatasetSpec(yf_size=5, members=frozenset({0, 1}), samples_per_identity={0: 1})

    def test_counts_must_be_positive(self):
        with pytest.raises(ValueError):
            DatasetSpec(yf_size=5, members=frozenset({0}), samples_per_identity={0: 0})

    def test_biased_subset_of_members(self):
        with pytest.raises(ValueError):
            DatasetSpec(
                yf_size=5,
                members=frozenset({0}),
                samples_per_identity={0: 1},
                biased_members=frozenset({1}),
            )

    def test_truth_set_modes(self):
        spec = make_setting2_spec(10, 1, 5, 2, 1)
        assert spec.truth_set("full") == frozenset({0, 1, 2})
        assert spec.truth_set("biased") == frozenset({0})
        with pytest.raises(ValueError):
            spec.truth_set("partial")

    def test_biased_mode_requires_subset(self):
        spec = make_setting1_spec(10, 3, 1)
        with pytest.raises(ValueError):
            spec.truth_set("biased")


class TestRandomBaseline:
    def test_reference_rates(self):
        spec = make_setting1_spec(8631, 30, 333)
        assert random_baseline_precision(spec) == pytest.approx(0.003476, abs=5e-7)

    def test_full_overlap(self):
        spec = make_setting1_spec(10, 10, 1)
        assert random_baseline_precision(spec) == 1.0

    def test_biased_rate(self):
        spec = make_setting2_spec(8631, 20, 300, 2000, 20)
        assert random_baseline_precision(spec, "biased") == pytest.approx(0.002317, abs=5e-7)

    @pytest.mark.parametrize("yf,yg", [(8631, 30), (1292, 220), (17, 17), (1000, 1)])
    def test_exact_ratio(self, yf, yg):
        spec = make_setting1_spec(yf, yg, 3)
        assert random_baseline_precision(spec) == yg / yf
