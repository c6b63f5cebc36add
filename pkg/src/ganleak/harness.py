"""Config-driven experiment runner.

Reproduces the diversity grid (setting 1), the bias grid (setting 2) and
the early-stopping sweep on the simulator, with seeded Monte Carlo
replication, and fronts ingestion-mode attacks. Replicate seeds derive
solely from (master_seed, cell index, replicate index), so any execution
order, and in particular parallel execution, yields identical results.

Output tree: ``<out>/manifest.json`` plus ``<out>/<mode>/summary.csv`` and
``<out>/<mode>/<cell>/<replicate>/report.json`` (optionally pr_curve.csv
and histogram.csv per replicate). Outputs are byte-stable for a fixed
(config, master_seed).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import ingest
from .attack import AttackConfig, FrequencyTable, accumulate, run_attack
from .classifier import ClassifierModel, ConcentratedSpread, UniformSpread, preset
from .evaluation import EvalReport, evaluate, f1, histogram, pr_sweep
from .generator import (
    GeneratorModel,
    SaturatingSchedule,
    TabulatedSchedule,
    memorization_schedule,
)
from .identity import (
    DatasetSpec,
    make_setting1_spec,
    make_setting2_spec,
    random_baseline_precision,
)

SCHEMA_VERSION = 1

# grid shapes mirroring the published evaluation tables
DEFAULT_SETTING1_YG = (30, 58, 111, 220, 440, 880)
DEFAULT_SETTING1_PER_ID = (333, 345, 360, 364, 364, 364)
DEFAULT_SETTING2_YG1 = (20, 40, 80, 160)
DEFAULT_SETTING2 = {"n1_per_identity": 300, "yg2_size": 2000, "n2_per_identity": 20}
DEFAULT_EARLY_STOPPING = {
    "yg_size": 220,
    "per_identity": 364,
    "tau": 10000.0,
    "steps": tuple(range(0, 20000, 2000)),
}


class ConfigError(ValueError):
    """The experiment config is malformed (unknown key, bad value, ...)."""


@dataclass(frozen=True)
class ClassifierConfig:
    preset: str | None = None
    yf_size: int | None = None
    accuracy: float | None = None

    def build(self) -> ClassifierModel:
        if self.preset is not None:
            return preset(self.preset)
        return ClassifierModel(yf_size=self.yf_size, top1_accuracy=self.accuracy)


@dataclass(frozen=True)
class NovelSpreadConfig:
    kind: str = "uniform"
    kappa: float | None = None
    seed: int | None = None

    def build(self):
        if self.kind == "uniform":
            return UniformSpread()
        return ConcentratedSpread(seed=self.seed if self.seed is not None else 0, kappa=self.kappa)


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str
    lam: int = 2
    replicates: int = 10
    master_seed: int | None = None
    thresholds: tuple[int, ...] = ()
    rho: float | None = None
    gamma: float = 1.0
    classifier: ClassifierConfig = ClassifierConfig(preset="vggface2")
    novel_spread: NovelSpreadConfig = NovelSpreadConfig()
    grid: dict = field(default_factory=dict)
    export_pr_curves: bool = False
    export_histograms: bool = False

    def __post_init__(self):
        if self.mode not in ("setting1", "setting2", "early_stopping", "ingest"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        if self.lam < 1:
            raise ConfigError("lambda must be >= 1")
        if not self.thresholds:
            object.__setattr__(self, "thresholds", (self.lam, 10 * self.lam))
        if any(t < 0 for t in self.thresholds):
            raise ConfigError("thresholds must be >= 0")
        if self.mode in ("setting1", "setting2"):
            if self.rho is None:
                raise ConfigError(f"mode {self.mode!r} requires rho")
            if not 0.0 <= self.rho <= 1.0:
                raise ConfigError("rho must be in [0, 1]")
        if self.mode == "early_stopping" and self.rho is not None:
            raise ConfigError("early_stopping derives rho from the schedule; drop the rho key")


def _take(data: dict, allowed: dict, where: str) -> dict:
    """Strict key check: every present key must be known; apply defaults."""
    unknown = set(data) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")
    return {key: data.get(key, default) for key, default in allowed.items()}


def config_from_dict(data: dict) -> ExperimentConfig:
    top = _take(
        data,
        {
            "schema_version": None,
            "mode": None,
            "lambda": 2,
            "replicates": 10,
            "master_seed": None,
            "thresholds": None,
            "rho": None,
            "gamma": 1.0,
            "classifier": {"preset": "vggface2"},
            "novel_spread": {"kind": "uniform"},
            "grid": {},
            "export": {},
        },
        "config",
    )
    if top["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(
            f"schema_version must be {SCHEMA_VERSION}, got {top['schema_version']!r}"
        )
    if top["mode"] is None:
        raise ConfigError("config requires a mode")

    cls_raw = _take(
        top["classifier"], {"preset": None, "yf_size": None, "accuracy": None}, "classifier"
    )
    if cls_raw["preset"] is not None:
        if cls_raw["yf_size"] is not None or cls_raw["accuracy"] is not None:
            raise ConfigError("classifier: give either a preset or yf_size+accuracy, not both")
    elif cls_raw["yf_size"] is None or cls_raw["accuracy"] is None:
        raise ConfigError("classifier: needs a preset or explicit yf_size and accuracy")
    classifier = ClassifierConfig(**cls_raw)

    spread_raw = _take(
        top["novel_spread"], {"kind": "uniform", "kappa": None, "seed": None}, "novel_spread"
    )
    if spread_raw["kind"] not in ("uniform", "concentrated"):
        raise ConfigError("novel_spread.kind must be uniform or concentrated")
    if spread_raw["kind"] == "concentrated" and spread_raw["kappa"] is None:
        raise ConfigError("concentrated novel_spread requires kappa")
    spread = NovelSpreadConfig(**spread_raw)

    export = _take(top["export"], {"pr_curves": False, "histograms": False}, "export")

    mode = top["mode"]
    grid = dict(top["grid"])
    if mode == "setting1":
        custom_yg = "yg_sizes" in grid
        grid = _take(
            grid,
            {"yg_sizes": list(DEFAULT_SETTING1_YG), "per_identity": None},
            "grid",
        )
        if grid["per_identity"] is None:
            # default counts shaped like the reference grid; a flat count for
            # custom grids
            grid["per_identity"] = 364 if custom_yg else list(DEFAULT_SETTING1_PER_ID)
        if not grid["yg_sizes"]:
            raise ConfigError("setting1 grid must list at least one yg_size")
        if isinstance(grid["per_identity"], int):
            grid["per_identity"] = [grid["per_identity"]] * len(grid["yg_sizes"])
        if len(grid["per_identity"]) != len(grid["yg_sizes"]):
            raise ConfigError("per_identity must be a scalar or match yg_sizes in length")
    elif mode == "setting2":
        grid = _take(
            grid,
            {"yg1_sizes": list(DEFAULT_SETTING2_YG1), **DEFAULT_SETTING2},
            "grid",
        )
        if not grid["yg1_sizes"]:
            raise ConfigError("setting2 grid must list at least one yg1_size")
    elif mode == "early_stopping":
        grid = _take(
            grid,
            {
                "yg_size": DEFAULT_EARLY_STOPPING["yg_size"],
                "per_identity": DEFAULT_EARLY_STOPPING["per_identity"],
                "schedule": {"kind": "saturating", "tau": DEFAULT_EARLY_STOPPING["tau"]},
                "steps": list(DEFAULT_EARLY_STOPPING["steps"]),
            },
            "grid",
        )
        sched = grid["schedule"]
        if sched.get("kind") == "saturating":
            sched = _take(sched, {"kind": None, "tau": None}, "schedule")
            if sched["tau"] is None:
                raise ConfigError("saturating schedule requires tau")
        elif sched.get("kind") == "tabulated":
            sched = _take(sched, {"kind": None, "points": None}, "schedule")
            if not sched["points"]:
                raise ConfigError("tabulated schedule requires points")
        else:
            raise ConfigError("schedule.kind must be saturating or tabulated")
        grid["schedule"] = sched
        if not grid["steps"]:
            raise ConfigError("early_stopping grid must list at least one step")
    else:  # ingest
        grid = _take(grid, {"log": None, "manifest": None, "eval_mode": "full"}, "grid")
        if grid["log"] is None or grid["manifest"] is None:
            raise ConfigError("ingest grid requires log and manifest paths")
        if grid["eval_mode"] not in ("full", "biased"):
            raise ConfigError("eval_mode must be full or biased")

    if top["thresholds"] is not None and not top["thresholds"]:
        raise ConfigError("thresholds, when given, must be non-empty")
    thresholds = tuple(top["thresholds"]) if top["thresholds"] is not None else ()
    return ExperimentConfig(
        mode=mode,
        lam=top["lambda"],
        replicates=top["replicates"],
        master_seed=top["master_seed"],
        thresholds=thresholds,
        rho=top["rho"],
        gamma=top["gamma"],
        classifier=classifier,
        novel_spread=spread,
        grid=grid,
        export_pr_curves=bool(export["pr_curves"]),
        export_histograms=bool(export["histograms"]),
    )


def config_to_dict(config: ExperimentConfig) -> dict:
    """Normalized echo of a config, suitable for the run manifest."""
    return {
        "schema_version": SCHEMA_VERSION,
        "mode": config.mode,
        "lambda": config.lam,
        "replicates": config.replicates,
        "master_seed": config.master_seed,
        "thresholds": list(config.thresholds),
        "rho": config.rho,
        "gamma": config.gamma,
        "classifier": {
            "preset": config.classifier.preset,
            "yf_size": config.classifier.yf_size,
            "accuracy": config.classifier.accuracy,
        },
        "novel_spread": {
            "kind": config.novel_spread.kind,
            "kappa": config.novel_spread.kappa,
            "seed": config.novel_spread.seed,
        },
        "grid": config.grid,
        "export": {
            "pr_curves": config.export_pr_curves,
            "histograms": config.export_histograms,
        },
    }


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config root must be an object")
    return config_from_dict(data)


# --------------------------------------------------------------------------
# aggregation
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdStats:
    """Mean and standard error across replicates at one threshold.

    Replicates that flag nothing have undefined precision; they are
    excluded from the precision mean (``defined_replicates`` counts the
    rest) rather than silently scored as 0 or 1.
    """

    threshold: int
    replicates: int
    defined_replicates: int
    precision_mean: float | None
    precision_stderr: float | None
    recall_mean: float
    recall_stderr: float
    f1_mean: float
    f1_stderr: float


@dataclass(frozen=True)
class CellResult:
    label: str
    params: dict
    baseline: float
    n_samples: int
    stats: tuple[ThresholdStats, ...]
    replicate_reports: tuple[tuple[EvalReport, ...], ...]


@dataclass(frozen=True)
class AggregateResult:
    mode: str
    cells: tuple[CellResult, ...]


def _mean_stderr(values: list[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    if len(arr) < 2:
        return mean, 0.0
    return mean, float(arr.std(ddof=1) / math.sqrt(len(arr)))


def _aggregate_threshold(reports: list[EvalReport], threshold: int) -> ThresholdStats:
    precisions = [r.precision for r in reports if r.precision is not None]
    if precisions:
        p_mean, p_err = _mean_stderr(precisions)
    else:
        p_mean, p_err = None, None
    r_mean, r_err = _mean_stderr([r.recall for r in reports])
    f_mean, f_err = _mean_stderr([r.f1 for r in reports])
    return ThresholdStats(
        threshold=threshold,
        replicates=len(reports),
        defined_replicates=len(precisions),
        precision_mean=p_mean,
        precision_stderr=p_err,
        recall_mean=r_mean,
        recall_stderr=r_err,
        f1_mean=f_mean,
        f1_stderr=f_err,
    )


def replicate_seed(master_seed: int, cell_index: int, rep: int) -> np.random.SeedSequence:
    """The only source of replicate randomness: (master, cell, replicate)."""
    return np.random.SeedSequence(master_seed, spawn_key=(cell_index, rep))


# --------------------------------------------------------------------------
# runners
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class _Cell:
    label: str
    params: dict
    spec: DatasetSpec
    generator: GeneratorModel
    eval_mode: str


def _require_seed(config: ExperimentConfig) -> int:
    if config.master_seed is None:
        raise ConfigError("a master seed is required (config master_seed or CLI --seed)")
    if config.master_seed < 0:
        raise ConfigError("master_seed must be >= 0")
    return config.master_seed


def _build_cells(config: ExperimentConfig, classifier: ClassifierModel) -> list[_Cell]:
    yf = classifier.yf_size
    cells: list[_Cell] = []
    if config.mode == "setting1":
        for yg, per_id in zip(config.grid["yg_sizes"], config.grid["per_identity"]):
            spec = make_setting1_spec(yf, yg, per_id)
            gen = GeneratorModel(spec, memorization_rate=config.rho, bias_exponent=config.gamma)
            cells.append(
                _Cell(
                    label=f"yg{yg:05d}",
                    params={"yg_size": yg, "per_identity": per_id, "rho": config.rho},
                    spec=spec,
                    generator=gen,
                    eval_mode="full",
                )
            )
    elif config.mode == "setting2":
        g = config.grid
        for yg1 in g["yg1_sizes"]:
            spec = make_setting2_spec(
                yf, yg1, g["n1_per_identity"], g["yg2_size"], g["n2_per_identity"]
            )
            gen = GeneratorModel(spec, memorization_rate=config.rho, bias_exponent=config.gamma)
            cells.append(
                _Cell(
                    label=f"yg1_{yg1:05d}",
                    params={"yg1_size": yg1, "yg2_size": g["yg2_size"], "rho": config.rho},
                    spec=spec,
                    generator=gen,
                    eval_mode="biased",
                )
            )
    elif config.mode == "early_stopping":
        g = config.grid
        sched_cfg = g["schedule"]
        if sched_cfg["kind"] == "saturating":
            schedule = SaturatingSchedule(tau=sched_cfg["tau"])
        else:
            schedule = TabulatedSchedule(points=tuple((int(s), float(r)) for s, r in sched_cfg["points"]))
        spec = make_setting1_spec(yf, g["yg_size"], g["per_identity"])
        base = GeneratorModel(spec, memorization_rate=0.0, bias_exponent=config.gamma)
        for step in g["steps"]:
            gen = memorization_schedule(base, step, schedule)
            cells.append(
                _Cell(
                    label=f"step{step:06d}",
                    params={"step": step, "rho": gen.memorization_rate, "yg_size": g["yg_size"]},
                    spec=spec,
                    generator=gen,
                    eval_mode="full",
                )
            )
    else:
        raise ConfigError(f"mode {config.mode!r} does not run on the simulator")
    return cells


def _run_simulated(config: ExperimentConfig, out_dir: Path | None) -> AggregateResult:
    master_seed = _require_seed(config)
    classifier_base = config.classifier.build()
    classifier = ClassifierModel(
        yf_size=classifier_base.yf_size,
        top1_accuracy=classifier_base.top1_accuracy,
        novel_spread=config.novel_spread.build(),
    )
    cells = _build_cells(config, classifier)
    results: list[CellResult] = []
    for cell_index, cell in enumerate(cells):
        per_threshold: dict[int, list[EvalReport]] = {t: [] for t in config.thresholds}
        replicate_reports: list[tuple[EvalReport, ...]] = []
        for rep in range(config.replicates):
            seed = replicate_seed(master_seed, cell_index, rep)
            attack_cfg = AttackConfig(config.lam, classifier.yf_size, config.thresholds[0])
            table, _ = run_attack(cell.generator, classifier, attack_cfg, seed)
            seed_label = f"{master_seed}:{cell_index}:{rep}"
            reports = tuple(
                evaluate(
                    table,
                    cell.spec,
                    threshold,
                    mode=cell.eval_mode,
                    lam=config.lam,
                    seed=seed_label,
                )
                for threshold in config.thresholds
            )
            replicate_reports.append(reports)
            for report in reports:
                per_threshold[report.threshold].append(report)
            if out_dir is not None:
                _write_replicate(out_dir, config, cell, rep, reports, table)
        stats = tuple(_aggregate_threshold(per_threshold[t], t) for t in config.thresholds)
        results.append(
            CellResult(
                label=cell.label,
                params=cell.params,
                baseline=random_baseline_precision(cell.spec, cell.eval_mode),
                n_samples=cell.spec.total_samples,
                stats=stats,
                replicate_reports=tuple(replicate_reports),
            )
        )
    return AggregateResult(mode=config.mode, cells=tuple(results))


def _run_ingest(config: ExperimentConfig, out_dir: Path | None) -> AggregateResult:
    log = ingest.load_prediction_log(config.grid["log"])
    spec = ingest.load_membership_manifest(config.grid["manifest"])
    table = accumulate(log.predictions, spec.yf_size, policy="discard")
    eval_mode = config.grid["eval_mode"]
    reports = tuple(
        evaluate(table, spec, t, mode=eval_mode, lam=config.lam, seed=None)
        for t in config.thresholds
    )
    stats = tuple(_aggregate_threshold([r], r.threshold) for r in reports)
    cell = CellResult(
        label="ingest",
        params={"log": config.grid["log"], "manifest": config.grid["manifest"]},
        baseline=reports[0].baseline,
        n_samples=spec.total_samples,
        stats=stats,
        replicate_reports=(reports,),
    )
    if out_dir is not None:
        payload = {
            "cell": "ingest",
            "replicate": 0,
            "seed": None,
            "reports": [ingest.eval_report_to_dict(r) for r in reports],
        }
        _write_replicate_files(
            out_dir / "ingest" / "ingest" / "rep000", payload, table, spec, eval_mode, config
        )
    return AggregateResult(mode="ingest", cells=(cell,))


def _write_replicate(out_dir: Path, config: ExperimentConfig, cell: _Cell, rep: int,
                     reports: tuple[EvalReport, ...], table: FrequencyTable) -> None:
    rep_dir = out_dir / config.mode / cell.label / f"rep{rep:03d}"
    payload = {
        "cell": cell.label,
        "replicate": rep,
        "seed": reports[0].seed,
        "reports": [ingest.eval_report_to_dict(r) for r in reports],
    }
    _write_replicate_files(rep_dir, payload, table, cell.spec, cell.eval_mode, config)


def _write_replicate_files(rep_dir: Path, payload: dict, table: FrequencyTable,
                           spec: DatasetSpec, eval_mode: str,
                           config: ExperimentConfig) -> None:
    rep_dir.mkdir(parents=True, exist_ok=True)
    (rep_dir / "report.json").write_text(
        json.dumps(payload, indent=2) + "\n", encoding="utf-8"
    )
    if config.export_pr_curves:
        ingest.write_report(pr_sweep(table, spec, eval_mode), rep_dir / "pr_curve.csv", "csv")
    if config.export_histograms:
        ingest.write_report(histogram(table, spec), rep_dir / "histogram.csv", "csv")


def run_experiment(
    config: ExperimentConfig, out_dir: str | Path | None = None
) -> AggregateResult:
    """Run the configured grid; optionally write the full output tree."""
    out_path = Path(out_dir) if out_dir is not None else None
    if config.mode == "ingest":
        result = _run_ingest(config, out_path)
    else:
        result = _run_simulated(config, out_path)
    if out_path is not None:
        _write_summary(out_path, config, result)
    return result


def run_setting1(config: ExperimentConfig, out_dir: str | Path | None = None) -> AggregateResult:
    """Diversity grid: attack precision/recall across training pool sizes."""
    if config.mode != "setting1":
        raise ConfigError(f"run_setting1 needs mode 'setting1', got {config.mode!r}")
    return run_experiment(config, out_dir)


def run_setting2(config: ExperimentConfig, out_dir: str | Path | None = None) -> AggregateResult:
    """Bias grid: scores computed against the heavy tier only."""
    if config.mode != "setting2":
        raise ConfigError(f"run_setting2 needs mode 'setting2', got {config.mode!r}")
    return run_experiment(config, out_dir)


def run_early_stopping(
    config: ExperimentConfig, out_dir: str | Path | None = None
) -> AggregateResult:
    """Memorization schedule sweep: one attack per training step."""
    if config.mode != "early_stopping":
        raise ConfigError(f"run_early_stopping needs mode 'early_stopping', got {config.mode!r}")
    return run_experiment(config, out_dir)


def early_stopping_series(result: AggregateResult) -> list[tuple[int, float, dict[int, float | None]]]:
    """Plot-ready series: (step, rho, {threshold: mean precision})."""
    series = []
    for cell in result.cells:
        series.append(
            (
                cell.params["step"],
                cell.params["rho"],
                {s.threshold: s.precision_mean for s in cell.stats},
            )
        )
    return series


# --------------------------------------------------------------------------
# output tree
# --------------------------------------------------------------------------

_SUMMARY_COLUMNS = [
    "mode", "cell", "yg_size", "yg1_size", "step", "rho", "n_samples",
    "baseline", "baseline_f1", "threshold", "replicates", "defined_replicates",
    "precision_mean", "precision_stderr", "recall_mean", "recall_stderr",
    "f1_mean", "f1_stderr",
]


def _csv_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_summary(out_dir: Path, config: ExperimentConfig, result: AggregateResult) -> None:
    mode_dir = out_dir / result.mode
    mode_dir.mkdir(parents=True, exist_ok=True)
    lines = [",".join(_SUMMARY_COLUMNS)]
    for cell in result.cells:
        for stats in cell.stats:
            row = {
                "mode": result.mode,
                "cell": cell.label,
                "yg_size": cell.params.get("yg_size"),
                "yg1_size": cell.params.get("yg1_size"),
                "step": cell.params.get("step"),
                "rho": cell.params.get("rho"),
                "n_samples": cell.n_samples,
                "baseline": cell.baseline,
                # baseline guessing attains any recall; scored at recall = 1
                "baseline_f1": f1(cell.baseline, 1.0),
                "threshold": stats.threshold,
                "replicates": stats.replicates,
                "defined_replicates": stats.defined_replicates,
                "precision_mean": stats.precision_mean,
                "precision_stderr": stats.precision_stderr,
                "recall_mean": stats.recall_mean,
                "recall_stderr": stats.recall_stderr,
                "f1_mean": stats.f1_mean,
                "f1_stderr": stats.f1_stderr,
            }
            lines.append(",".join(_csv_value(row[c]) for c in _SUMMARY_COLUMNS))
    (mode_dir / "summary.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "config": config_to_dict(config),
        "notes": {
            "baseline_f1": "baseline rows score F1 at recall = 1.0 by convention",
            "per_identity_counts": "simulated cells use exactly uniform per-identity counts",
            "undefined_precision": (
                "replicates flagging no identities are excluded from precision means; "
                "defined_replicates counts the rest"
            ),
        },
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )


def read_summary(path: str | Path) -> list[dict]:
    """Parse a summary.csv back into typed row dicts."""
    lines = Path(path).read_text(encoding="utf-8").rstrip("\n").split("\n")
    header = lines[0].split(",")
    if header != _SUMMARY_COLUMNS:
        raise ValueError(f"{path}: unexpected summary header")
    rows = []
    int_cols = {"yg_size", "yg1_size", "step", "n_samples", "threshold",
                "replicates", "defined_replicates"}
    float_cols = {"rho", "baseline", "baseline_f1", "precision_mean", "precision_stderr",
                  "recall_mean", "recall_stderr", "f1_mean", "f1_stderr"}
    for line in lines[1:]:
        row: dict = {}
        for key, value in zip(header, line.split(",")):
            if value == "":
                row[key] = None
            elif key in int_cols:
                row[key] = int(value)
            elif key in float_cols:
                row[key] = float(value)
            else:
                row[key] = value
        rows.append(row)
    return rows


def read_replicate_report(path: str | Path) -> list[EvalReport]:
    """Parse a per-replicate report.json back into EvalReports."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [ingest.eval_report_from_dict(r) for r in data["reports"]]
