"""Command-line surface.

Subcommands: ``simulate`` (one attack run on the simulator), ``attack``
(ingestion mode: prediction log + membership manifest), ``pr-curve``,
``histogram``, ``nn`` (embedding queries) and ``experiment`` (config-driven
grids). The master seed comes from ``--seed``, then the config file, then
the ``GANLEAK_SEED`` environment variable.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__, ingest
from .attack import AttackConfig, accumulate, run_attack
from .classifier import ClassifierModel, ConcentratedSpread, UniformSpread, preset
from .evaluation import evaluate, histogram, pr_sweep
from .generator import GeneratorModel
from .harness import ConfigError, load_config, run_experiment
from .identity import make_setting1_spec, make_setting2_spec
from .neighbors import contact_sheet_manifest

SEED_ENV = "GANLEAK_SEED"


def _resolve_seed(cli_seed: int | None, config_seed: int | None = None) -> int:
    if cli_seed is not None:
        return cli_seed
    if config_seed is not None:
        return config_seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    raise ValueError(f"no master seed: pass --seed, set it in the config, or export {SEED_ENV}")


def _parse_thresholds(raw: str | None, lam: int) -> list[int]:
    if raw is None:
        return [lam, 10 * lam]
    try:
        values = [int(v) for v in raw.split(",") if v != ""]
    except ValueError:
        raise ValueError(f"--thresholds must be comma-separated integers, got {raw!r}") from None
    if not values or any(v < 0 for v in values):
        raise ValueError("--thresholds needs at least one value >= 0")
    return values


def _format_for(path: str, explicit: str | None) -> str:
    if explicit is not None:
        return explicit
    return "json" if path.endswith(".json") else "csv"


# --------------------------------------------------------------------------
# subcommand handlers
# --------------------------------------------------------------------------

def _cmd_simulate(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.preset is not None:
        classifier = preset(args.preset)
        yf = classifier.yf_size
        accuracy = classifier.top1_accuracy
    else:
        if args.yf is None or args.accuracy is None:
            raise ValueError("simulate needs --preset, or both --yf and --accuracy")
        yf, accuracy = args.yf, args.accuracy
    if args.novel_spread == "concentrated":
        if args.kappa is None:
            raise ValueError("--novel-spread concentrated requires --kappa")
        spread = ConcentratedSpread(seed=args.novel_seed, kappa=args.kappa)
    else:
        spread = UniformSpread()
    classifier = ClassifierModel(yf_size=yf, top1_accuracy=accuracy, novel_spread=spread)

    if args.yg1 is not None:
        if args.yg is not None:
            raise ValueError("give either --yg (uniform split) or --yg1/... (biased split)")
        for name, value in (("--n1-per-id", args.n1_per_id), ("--yg2", args.yg2),
                            ("--n2-per-id", args.n2_per_id)):
            if value is None:
                raise ValueError(f"--yg1 requires {name}")
        spec = make_setting2_spec(yf, args.yg1, args.n1_per_id, args.yg2, args.n2_per_id)
    elif args.yg is not None:
        spec = make_setting1_spec(yf, args.yg, args.per_id)
    else:
        raise ValueError("simulate needs --yg (uniform split) or --yg1/... (biased split)")
    generator = GeneratorModel(
        spec,
        memorization_rate=args.rho,
        bias_exponent=args.gamma,
        novel_space_size=args.novel_size,
    )

    thresholds = _parse_thresholds(args.thresholds, args.lam)
    attack_cfg = AttackConfig(args.lam, yf, thresholds[0])
    table, _ = run_attack(generator, classifier, attack_cfg, seed)
    reports = [
        evaluate(table, spec, t, mode=args.eval_mode, lam=args.lam, seed=seed)
        for t in thresholds
    ]
    payload = {"seed": seed, "reports": [ingest.eval_report_to_dict(r) for r in reports]}
    if args.out is not None:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    else:
        print(json.dumps(payload, indent=2))
    if args.pr_curve is not None:
        curve = pr_sweep(table, spec, args.eval_mode)
        ingest.write_report(curve, args.pr_curve, _format_for(args.pr_curve, None))
    if args.histogram is not None:
        ingest.write_report(histogram(table, spec), args.histogram,
                            _format_for(args.histogram, None))
    return 0


def _load_table_and_truth(args):
    log = ingest.load_prediction_log(args.log)
    spec = ingest.load_membership_manifest(args.manifest)
    table = accumulate(log.predictions, spec.yf_size, policy=args.policy)
    return table, spec


def _cmd_attack(args) -> int:
    table, spec = _load_table_and_truth(args)
    thresholds = _parse_thresholds(args.thresholds, args.lam)
    reports = [
        evaluate(table, spec, t, mode=args.eval_mode, lam=args.lam) for t in thresholds
    ]
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for report in reports:
            ingest.write_report(report, out / f"report_t{report.threshold}.json", "json")
    else:
        print(json.dumps([ingest.eval_report_to_dict(r) for r in reports], indent=2))
    return 0


def _cmd_pr_curve(args) -> int:
    table, spec = _load_table_and_truth(args)
    curve = pr_sweep(table, spec, args.eval_mode)
    ingest.write_report(curve, args.out, _format_for(args.out, args.format))
    return 0


def _cmd_histogram(args) -> int:
    table, spec = _load_table_and_truth(args)
    ingest.write_report(histogram(table, spec), args.out, _format_for(args.out, args.format))
    return 0


def _cmd_nn(args) -> int:
    embeddings = ingest.load_embeddings(args.embeddings)
    queries = ingest.load_embeddings(args.queries)
    query_list = [
        (queries.sample_ids[i], int(queries.identities[i]), queries.vectors[i])
        for i in range(len(queries))
    ]
    rows = contact_sheet_manifest(query_list, embeddings, args.k)
    ingest.write_nn_manifest(rows, args.out)
    return 0


def _cmd_experiment(args) -> int:
    config = load_config(args.config)
    seed = _resolve_seed(args.seed, config.master_seed)
    if seed != config.master_seed:
        from dataclasses import replace

        config = replace(config, master_seed=seed)
    run_experiment(config, args.out)
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _add_log_manifest(p: argparse.ArgumentParser) -> None:
    p.add_argument("--log", required=True, help="prediction log CSV")
    p.add_argument("--manifest", required=True, help="membership manifest CSV")
    p.add_argument("--policy", choices=["strict", "discard"], default="discard",
                   help="out-of-range prediction handling (default: discard and count)")
    p.add_argument("--eval-mode", choices=["full", "biased"], default="full")
    p.add_argument("--lambda", dest="lam", type=int, default=2,
                   help="samples per known identity (sets default thresholds)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ganleak",
        description="Blind identity membership attacks against generative face models",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="one seeded attack run on the simulator")
    p.add_argument("--preset", choices=["vggface2", "casia"])
    p.add_argument("--yf", type=int, help="identity pool size (with --accuracy)")
    p.add_argument("--accuracy", type=float, help="classifier top-1 accuracy (with --yf)")
    p.add_argument("--yg", type=int, help="uniform split: number of training identities")
    p.add_argument("--per-id", type=int, default=100, help="uniform split: samples per identity")
    p.add_argument("--yg1", type=int, help="biased split: heavy-tier identities")
    p.add_argument("--n1-per-id", type=int, help="biased split: heavy-tier samples per identity")
    p.add_argument("--yg2", type=int, help="biased split: light-tier identities")
    p.add_argument("--n2-per-id", type=int, help="biased split: light-tier samples per identity")
    p.add_argument("--eval-mode", choices=["full", "biased"], default="full")
    p.add_argument("--rho", type=float, required=True, help="memorization rate in [0, 1]")
    p.add_argument("--gamma", type=float, default=1.0, help="bias exponent (weights ~ count^gamma)")
    p.add_argument("--novel-spread", choices=["uniform", "concentrated"], default="uniform")
    p.add_argument("--kappa", type=float, help="Dirichlet concentration for novel preferences")
    p.add_argument("--novel-seed", type=int, default=0, help="seed of the novel preference table")
    p.add_argument("--novel-size", type=int, help="novel pseudo-identity count (default: yf - yg)")
    p.add_argument("--lambda", dest="lam", type=int, default=2)
    p.add_argument("--thresholds", help="comma-separated decision thresholds (default: lam,10*lam)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="report JSON path (default: stdout)")
    p.add_argument("--pr-curve", help="also write the threshold sweep here (.csv or .json)")
    p.add_argument("--histogram", help="also write the per-identity histogram here")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("attack", help="score a prediction log against a manifest")
    _add_log_manifest(p)
    p.add_argument("--thresholds", help="comma-separated thresholds (default: lam,10*lam)")
    p.add_argument("--out", help="directory for report_t<T>.json files (default: stdout)")
    p.set_defaults(func=_cmd_attack)

    p = sub.add_parser("pr-curve", help="threshold sweep from a prediction log")
    _add_log_manifest(p)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["json", "csv"])
    p.set_defaults(func=_cmd_pr_curve)

    p = sub.add_parser("histogram", help="per-identity frequency histogram from a log")
    _add_log_manifest(p)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["json", "csv"])
    p.set_defaults(func=_cmd_histogram)

    p = sub.add_parser("nn", help="intra-identity nearest neighbors for query embeddings")
    p.add_argument("--embeddings", required=True, help="training embeddings (CSV or binary)")
    p.add_argument("--queries", required=True,
                   help="query embeddings; identity column holds the predicted identity")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--out", required=True, help="contact-sheet manifest CSV")
    p.set_defaults(func=_cmd_nn)

    p = sub.add_parser("experiment", help="run a config-driven experiment grid")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, help="master seed override")
    p.set_defaults(func=_cmd_experiment)

    return parser


def cli_dispatch(argv: list[str] | None = None) -> int:
    """Parse and run; returns the process exit code instead of raising."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits on --help and usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, ConfigError) as exc:
        print(f"ganleak: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
