import json

import numpy as np
import pytest
from scipy.stats import spearmanr

from ganleak.attack import AttackConfig, run_attack
from ganleak.classifier import ClassifierModel
from ganleak.generator import GeneratorModel
from ganleak.harness import (
    ConfigError,
    config_from_dict,
    config_to_dict,
    early_stopping_series,
    load_config,
    read_replicate_report,
    read_summary,
    replicate_seed,
    run_early_stopping,
    run_experiment,
    run_setting1,
    run_setting2,
)
from ganleak.identity import make_setting2_spec
from ganleak.ingest import write_membership_manifest, write_prediction_log


def cfg(**overrides):
    data = {
        "schema_version": 1,
        "mode": "setting1",
        "rho": 0.5,
        "replicates": 3,
        "master_seed": 9,
        "classifier": {"yf_size": 300, "accuracy": 0.9},
        "grid": {"yg_sizes": [10], "per_identity": 4},
    }
    data.update(overrides)
    return config_from_dict(data)


class TestConfigParsing:
    def test_minimal(self):
        config = cfg()
        assert config.lam == 2
        assert config.thresholds == (2, 20)
        assert config.grid["per_identity"] == [4]

    def test_defaults_mirror_reference_grid(self):
        config = config_from_dict(
            {"schema_version": 1, "mode": "setting1", "rho": 0.3, "master_seed": 1}
        )
        assert config.grid["yg_sizes"] == [30, 58, 111, 220, 440, 880]
        assert config.grid["per_identity"] == [333, 345, 360, 364, 364, 364]
        assert config.classifier.preset == "vggface2"

    def test_unknown_top_level_key(self):
        with pytest.raises(ConfigError, match="unknown key"):
            cfg(typo=True)

    def test_unknown_grid_key(self):
        with pytest.raises(ConfigError, match="unknown key"):
            cfg(grid={"yg_sizes": [10], "per_id": 4})

    def test_schema_version_required(self):
        with pytest.raises(ConfigError, match="schema_version"):
            config_from_dict({"mode": "setting1", "rho": 0.5})

    def test_mode_required(self):
        with pytest.raises(ConfigError, match="mode"):
            config_from_dict({"schema_version": 1})

    def test_rho_required_for_simulated_grids(self):
        with pytest.raises(ConfigError, match="rho"):
            config_from_dict({"schema_version": 1, "mode": "setting1"})

    def test_rho_forbidden_for_early_stopping(self):
        with pytest.raises(ConfigError, match="rho"):
            config_from_dict({"schema_version": 1, "mode": "early_stopping", "rho": 0.2})

    def test_classifier_exclusive_choice(self):
        with pytest.raises(ConfigError, match="classifier"):
            cfg(classifier={"preset": "casia", "yf_size": 10, "accuracy": 0.5})
        with pytest.raises(ConfigError, match="classifier"):
            cfg(classifier={"yf_size": 10})

    def test_empty_grid_rejected(self):
        with pytest.raises(ConfigError, match="at least one"):
            cfg(grid={"yg_sizes": []})

    def test_concentrated_needs_kappa(self):
        with pytest.raises(ConfigError, match="kappa"):
            cfg(novel_spread={"kind": "concentrated"})

    def test_replicates_positive(self):
        with pytest.raises(ConfigError):
            cfg(replicates=0)

    def test_explicit_empty_thresholds_rejected(self):
        with pytest.raises(ConfigError, match="non-empty"):
            cfg(thresholds=[])
        assert cfg(thresholds=[5]).thresholds == (5,)

    def test_round_trips_through_dict(self):
        config = cfg()
        assert config_from_dict(config_to_dict(config)) == config

    def test_load_config_rejects_bad_json(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text("{not json")
        with pytest.raises(ConfigError, match="JSON"):
            load_config(p)

    def test_mode_guards_on_runners(self):
        with pytest.raises(ConfigError):
            run_setting2(cfg())
        with pytest.raises(ConfigError):
            run_early_stopping(cfg())
        with pytest.raises(ConfigError):
            run_setting1(cfg(mode="setting2", grid={"yg1_sizes": [5]}))


class TestReplicateSeeds:
    def test_pairwise_distinct_streams(self):
        draws = set()
        for cell in range(4):
            for rep in range(6):
                seq = replicate_seed(7, cell, rep)
                draws.add(float(np.random.default_rng(seq).random()))
        assert len(draws) == 24

    def test_independent_of_execution_order(self):
        a = np.random.default_rng(replicate_seed(3, 1, 2)).random(4)
        b = np.random.default_rng(replicate_seed(3, 1, 2)).random(4)
        assert np.array_equal(a, b)


class TestSetting1:
    def test_perfect_memorizer_grid_has_unit_precision(self):
        config = config_from_dict(
            {
                "schema_version": 1,
                "mode": "setting1",
                "rho": 1.0,
                "replicates": 10,
                "master_seed": 11,
                "classifier": {"yf_size": 8631, "accuracy": 1.0},
            }
        )
        result = run_setting1(config)
        assert [c.params["yg_size"] for c in result.cells] == [30, 58, 111, 220, 440, 880]
        for cell in result.cells:
            t0_stats = cell.stats[0]
            assert t0_stats.threshold == 2
            assert t0_stats.defined_replicates == 10
            assert t0_stats.precision_mean == 1.0
            assert t0_stats.precision_stderr == 0.0

    def test_no_memorization_matches_baseline(self):
        config = config_from_dict(
            {
                "schema_version": 1,
                "mode": "setting1",
                "rho": 0.0,
                "replicates": 50,
                "master_seed": 17,
                "classifier": {"yf_size": 8631, "accuracy": 0.861},
                "grid": {"yg_sizes": [30], "per_identity": 333},
            }
        )
        result = run_setting1(config)
        cell = result.cells[0]
        assert cell.baseline == pytest.approx(30 / 8631)
        t0_stats = cell.stats[0]
        assert t0_stats.precision_mean == pytest.approx(cell.baseline, abs=4e-4)

    def test_n_samples_reported(self):
        result = run_setting1(cfg(replicates=1))
        assert result.cells[0].n_samples == 40


class TestSetting2:
    def test_reference_baseline(self):
        config = config_from_dict(
            {
                "schema_version": 1,
                "mode": "setting2",
                "rho": 0.3,
                "replicates": 1,
                "master_seed": 2,
                "grid": {"yg1_sizes": [20]},
            }
        )
        result = run_setting2(config)
        assert result.cells[0].baseline == pytest.approx(20 / 8631)

    def test_bias_detected_with_gamma_one(self):
        config = config_from_dict(
            {
                "schema_version": 1,
                "mode": "setting2",
                "rho": 0.5,
                "gamma": 1.0,
                "replicates": 20,
                "master_seed": 3,
                "classifier": {"yf_size": 500, "accuracy": 1.0},
                "grid": {"yg1_sizes": [10], "n1_per_identity": 300,
                         "yg2_size": 100, "n2_per_identity": 20},
            }
        )
        result = run_setting2(config)
        cell = result.cells[0]
        t1_stats = cell.stats[1]
        assert t1_stats.threshold == 20
        assert t1_stats.defined_replicates == 20
        assert t1_stats.precision_mean > 10 * cell.baseline
        assert t1_stats.recall_mean > 0.5  # the heavy tier itself is flagged

    def test_gamma_zero_makes_tiers_exchangeable(self):
        # with gamma = 0 emission ignores counts, so heavy-tier and
        # light-tier identities get flagged at the same rate
        spec = make_setting2_spec(500, 10, 300, 100, 20)
        gen = GeneratorModel(spec, memorization_rate=0.5, bias_exponent=0.0)
        cls = ClassifierModel(yf_size=500, top1_accuracy=1.0)
        g1, g2 = spec.biased_members, spec.unbiased_members
        rate1, rate2 = [], []
        for seed in range(100):
            _, decisions = run_attack(gen, cls, AttackConfig(2, 500, 2), seed)
            rate1.append(len(decisions.positives & g1) / len(g1))
            rate2.append(len(decisions.positives & g2) / len(g2))
        diff = np.mean(rate1) - np.mean(rate2)
        stderr = np.sqrt(np.var(rate1, ddof=1) / 100 + np.var(rate2, ddof=1) / 100)
        assert abs(diff) < 4 * stderr

    def test_gamma_one_separates_tiers(self):
        spec = make_setting2_spec(500, 10, 300, 100, 20)
        gen = GeneratorModel(spec, memorization_rate=0.5, bias_exponent=1.0)
        cls = ClassifierModel(yf_size=500, top1_accuracy=1.0)
        g1, g2 = spec.biased_members, spec.unbiased_members
        rate1, rate2 = [], []
        for seed in range(30):
            _, decisions = run_attack(gen, cls, AttackConfig(2, 500, 20), seed)
            rate1.append(len(decisions.positives & g1) / len(g1))
            rate2.append(len(decisions.positives & g2) / len(g2))
        assert np.mean(rate1) > 0.8
        assert np.mean(rate2) < 0.05


class TestEarlyStopping:
    def base_config(self, schedule, steps, replicates=20):
        return config_from_dict(
            {
                "schema_version": 1,
                "mode": "early_stopping",
                "replicates": replicates,
                "master_seed": 23,
                "classifier": {"yf_size": 400, "accuracy": 0.9},
                "grid": {
                    "yg_size": 20,
                    "per_identity": 5,
                    "schedule": schedule,
                    "steps": steps,
                },
            }
        )

    def test_flat_zero_schedule_stays_at_baseline(self):
        config = self.base_config({"kind": "tabulated", "points": [[0, 0.0]]}, [0, 50, 100])
        result = run_early_stopping(config)
        for cell in result.cells:
            assert cell.params["rho"] == 0.0
            assert cell.stats[0].precision_mean == pytest.approx(0.05, abs=0.012)

    def test_saturating_schedule_gains_precision_with_steps(self):
        steps = list(range(0, 10))
        config = self.base_config({"kind": "saturating", "tau": 3.0}, steps)
        result = run_early_stopping(config)
        series = early_stopping_series(result)
        assert [s[0] for s in series] == steps
        rhos = [s[1] for s in series]
        assert all(b >= a for a, b in zip(rhos, rhos[1:]))
        precisions = [s[2][2] for s in series]  # threshold T0 = 2
        corr = spearmanr(steps, precisions).statistic
        assert corr > 0.9

    def test_single_step(self):
        config = self.base_config({"kind": "saturating", "tau": 5.0}, [7])
        result = run_early_stopping(config)
        assert len(result.cells) == 1
        assert result.cells[0].params["step"] == 7


class TestDeterminismAndTree:
    def test_rerun_is_identical(self):
        config = cfg(replicates=4)
        assert run_experiment(config) == run_experiment(config)

    def test_output_tree_shape(self, tmp_path):
        config = cfg(replicates=2, export={"pr_curves": True, "histograms": True})
        run_experiment(config, tmp_path / "out")
        root = tmp_path / "out"
        assert (root / "manifest.json").is_file()
        assert (root / "setting1" / "summary.csv").is_file()
        rep = root / "setting1" / "yg00010" / "rep001"
        assert (rep / "report.json").is_file()
        assert (rep / "pr_curve.csv").is_file()
        assert (rep / "histogram.csv").is_file()

    def test_summary_and_reports_parse_back(self, tmp_path):
        config = cfg(replicates=2)
        result = run_experiment(config, tmp_path / "out")
        rows = read_summary(tmp_path / "out" / "setting1" / "summary.csv")
        assert len(rows) == len(config.thresholds)
        assert rows[0]["cell"] == "yg00010"
        assert rows[0]["precision_mean"] == result.cells[0].stats[0].precision_mean
        reports = read_replicate_report(
            tmp_path / "out" / "setting1" / "yg00010" / "rep000" / "report.json"
        )
        assert tuple(reports) == result.cells[0].replicate_reports[0]

    def test_manifest_echoes_config(self, tmp_path):
        config = cfg(replicates=2)
        run_experiment(config, tmp_path / "out")
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert manifest["config"] == config_to_dict(config)
        assert "notes" in manifest

    def test_missing_master_seed_is_an_error(self):
        config = cfg(master_seed=None)
        with pytest.raises(ConfigError, match="seed"):
            run_experiment(config)


class TestIngestMode:
    def test_log_plus_manifest(self, tmp_path):
        spec = make_setting2_spec(6, 1, 4, 1, 1)
        manifest_path = tmp_path / "truth.csv"
        write_membership_manifest(spec, manifest_path)
        log_path = tmp_path / "preds.csv"
        write_prediction_log(
            log_path, [f"g{i}" for i in range(6)], [0, 0, 0, 1, 5, 9]
        )
        config = config_from_dict(
            {
                "schema_version": 1,
                "mode": "ingest",
                "thresholds": [2],
                "grid": {"log": str(log_path), "manifest": str(manifest_path)},
            }
        )
        result = run_experiment(config, tmp_path / "out")
        report = result.cells[0].replicate_reports[0][0]
        assert report.positives_count == 1  # only identity 0 reaches 2 hits
        assert report.precision == 1.0
        assert report.recall == 0.5
        assert (tmp_path / "out" / "ingest" / "ingest" / "rep000" / "report.json").is_file()

    def test_biased_eval_mode(self, tmp_path):
        spec = make_setting2_spec(6, 1, 4, 1, 1)
        write_membership_manifest(spec, tmp_path / "truth.csv")
        write_prediction_log(tmp_path / "preds.csv", ["a", "b", "c"], [1, 1, 0])
        config = config_from_dict(
            {
                "schema_version": 1,
                "mode": "ingest",
                "thresholds": [2],
                "grid": {
                    "log": str(tmp_path / "preds.csv"),
                    "manifest": str(tmp_path / "truth.csv"),
                    "eval_mode": "biased",
                },
            }
        )
        result = run_experiment(config)
        report = result.cells[0].replicate_reports[0][0]
        assert report.mode == "biased"
        assert report.precision == 0.0  # flagged identity 1 is the light tier
