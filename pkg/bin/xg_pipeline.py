#!/usr/bin/env python3
import os
import sys
import json
import argparse
import logging

# Add repository root to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

try:
    import pandas as pd
    from lib.config_loader import load_config, apply_overrides
    from lib.errors import XgError, IncompatibleArtifact, InvalidConfig, UnknownFeature
    from lib.shot_data import (
        SyntheticGroundTruth, generate_synthetic, ground_truth_proba, write_csv,
        load_csv, split_by_season, class_rate, season_summary,
    )
    from lib.features import featurize_dataset
    from lib.gam import load_model, save_model
    from lib.metrics import evaluate
    from lib.pipeline import APPROACHES, train_approach
    from lib.storage_writer import write_frame_csv, write_json, write_text
    from lib.zones import save_zone_table
    from analysis.lib.explain import export_explanations, interaction_table
    from analysis.lib.report_tables import (
        evaluation_table, format_evaluation_text, format_training_report, print_table,
    )
    from rich.table import Table
except ImportError as e:
    print(f"Error: A required module is missing: {e}")
    print("Please ensure you have installed the project's dependencies with 'pip install -e .'")
    sys.exit(1)

EXIT_XG_ERROR = 2
EXIT_IO_ERROR = 3


def setup_logging(log_level_str):
    """Configures the logging format and level."""
    numeric_level = getattr(logging, log_level_str.upper(), logging.INFO)
    logging.basicConfig(level=numeric_level, format='[%(asctime)s] [%(levelname)s] %(message)s', datefmt='%Y-%m-%d %H:%M:%S')


def _comma_list(text):
    return [item.strip() for item in text.split(",") if item.strip()]


def parse_args(argv=None):
    """Parses command-line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Run configuration JSON (defaults to config/xg-config.json).")
    common.add_argument("--out", default="out", help="Output directory. Defaults to 'out'.")
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Override configured log level.")

    parser = argparse.ArgumentParser(description="Zone-based explainable expected-goals pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", parents=[common], help="Write a synthetic shot dataset with known goal probabilities.")
    gen.add_argument("--seed", type=int, required=True, help="Random seed (required).")
    gen.add_argument("--n", type=int, help="Number of shots.")
    gen.add_argument("--constant-probability", type=float, help="Replace the ground-truth surface by a constant.")

    data_args = argparse.ArgumentParser(add_help=False)
    data_args.add_argument("--data", help="Shot CSV. Defaults to <out>/shots.csv.")
    data_args.add_argument("--test-seasons", type=_comma_list, help="Comma-separated seasons held out for testing.")
    data_args.add_argument("--lenient", action="store_true", help="Drop invalid rows instead of failing.")

    train = sub.add_parser("train", parents=[common, data_args], help="Fit one approach on the training seasons.")
    train.add_argument("--approach", choices=APPROACHES, required=True)
    train.add_argument("--seed", type=int, required=True, help="Random seed for bagging (required).")
    train.add_argument("--zones", help="Zone-centre table (JSON) overriding the built-in centres.")
    train.add_argument("--cmeans-iterations", type=int)
    train.add_argument("--learning-rate", type=float)
    train.add_argument("--max-rounds", type=int)
    train.add_argument("--bag-count", type=int)
    train.add_argument("--validation-fraction", type=float)
    train.add_argument("--patience", type=int, help="Early-stopping patience in rounds.")
    train.add_argument("--no-penalty-pair", action="store_true", help="Drop the penalty-spot x penalty pair.")

    ev = sub.add_parser("evaluate", parents=[common, data_args], help="Score trained models on the test seasons.")
    ev.add_argument("--approaches", type=_comma_list, help="Comma-separated approaches. Defaults to every model found.")
    ev.add_argument("--ece-bins", type=int)

    ex = sub.add_parser("explain", parents=[common, data_args], help="Export explanations for a trained model.")
    ex.add_argument("--approach", choices=APPROACHES, required=True)
    ex.add_argument("--local", type=int, nargs="*", default=[], help="Row indices of the data file to explain.")
    ex.add_argument("--feature", action="append", help="Restrict shape tables to this feature (repeatable).")
    ex.add_argument("--pair", action="append", type=_comma_list, help="Check that 'a,b' is an interaction (repeatable).")

    sub.add_parser("summary", parents=[common, data_args], help="Shot counts per competition and season.")

    return parser.parse_args(argv)


def effective_config(args):
    """Defaults < config file < command-line flags."""
    config = load_config(args.config)
    overrides = {
        "log_level": args.log_level,
        "split.test_seasons": getattr(args, "test_seasons", None),
    }
    if args.command == "generate":
        overrides.update({
            "synthetic.seed": args.seed,
            "synthetic.n": args.n,
            "synthetic.constant_probability": args.constant_probability,
        })
    elif args.command == "train":
        overrides.update({
            "training.seed": args.seed,
            "training.learning_rate": args.learning_rate,
            "training.max_rounds": args.max_rounds,
            "training.bag_count": args.bag_count,
            "training.validation_fraction": args.validation_fraction,
            "training.early_stopping_patience": args.patience,
            "training.include_penalty_pair": False if args.no_penalty_pair else None,
            "zones.cmeans_iterations": args.cmeans_iterations,
        })
        if args.zones:
            zone_doc = _read_json(args.zones)
            overrides["zones.centers"] = zone_doc.get("centers") if isinstance(zone_doc, dict) else zone_doc
    elif args.command == "evaluate":
        overrides["evaluation.ece_bins"] = args.ece_bins
    return apply_overrides(config, overrides)


def _read_json(path):
    with open(path, 'r', encoding='utf-8') as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise InvalidConfig(f"{path}: invalid JSON ({e})")


def _data_path(args):
    path = args.data or os.path.join(args.out, "shots.csv")
    if not os.path.isfile(path):
        raise FileNotFoundError(f"shot file not found: {path}")
    return path


def _load_partitions(args, config):
    dataset = load_csv(_data_path(args), config.get("coord_spec"), strict=not args.lenient)
    train, test = split_by_season(dataset, config["split"]["test_seasons"])
    return dataset, train, test


def _model_path(out, approach):
    return os.path.join(out, f"model-{approach}.json.gz")


def cmd_generate(args, config):
    """Synthetic shots plus the ground-truth probability sidecar."""
    synthetic = config["synthetic"]
    gt = SyntheticGroundTruth.from_config(synthetic)
    dataset = generate_synthetic(gt, synthetic["n"])
    os.makedirs(args.out, exist_ok=True)
    write_csv(dataset, os.path.join(args.out, "shots.csv"))
    p_star = ground_truth_proba(gt, dataset)
    write_frame_csv(os.path.join(args.out, "ground_truth.csv"), pd.DataFrame({"shot_index": range(len(dataset)), "p_star": p_star}))
    write_json(os.path.join(args.out, "ground_truth.json"), {
        "ground_truth": gt.to_dict(),
        "n": len(dataset),
        "goal_rate": class_rate(dataset),
        "mean_p_star": float(p_star.mean()),
        "config": config,
    })


def cmd_train(args, config):
    """Split, zone fit, featurize, whitelist and fit one approach."""
    _, train, _ = _load_partitions(args, config)
    model, zone_model = train_approach(args.approach, train, config)
    if zone_model is not None:
        save_zone_table(zone_model, os.path.join(args.out, "zones.json"))
    save_model(model, _model_path(args.out, args.approach))
    write_json(os.path.join(args.out, f"training-report-{args.approach}.json"), {
        "approach": args.approach,
        "intercept": model.intercept,
        "training_report": model.training_report,
        "zone_fit_report": zone_model.fit_report if zone_model is not None else None,
        "config": config,
    })
    write_text(os.path.join(args.out, f"training-report-{args.approach}.txt"), format_training_report(model, args.approach))


def _check_compatible(model, approach, config):
    if model.feature_spec is None or list(model.feature_spec.feature_names) != list(model.feature_names):
        raise IncompatibleArtifact(f"{approach}: the artifact's feature spec does not match its functions")
    trained = model.config.get("config", {}).get("coord_spec")
    if trained is not None and trained != config.get("coord_spec"):
        raise IncompatibleArtifact(
            f"{approach}: model was trained with coordinate spec {trained}, data is read with {config.get('coord_spec')}"
        )


def cmd_evaluate(args, config):
    """Seven-metric report for one or more approaches side by side."""
    if args.approaches:
        approaches = args.approaches
        unknown = [a for a in approaches if a not in APPROACHES]
        if unknown:
            raise InvalidConfig(f"unknown approach(es): {', '.join(unknown)}")
    else:
        approaches = [a for a in APPROACHES if os.path.isfile(_model_path(args.out, a))]
        if not approaches:
            raise FileNotFoundError(f"no model artifacts found in {args.out}")

    _, train, test = _load_partitions(args, config)
    baseline_rate = class_rate(train)
    ece_bins = int(config["evaluation"]["ece_bins"])
    reports = {}
    for approach in approaches:
        model = load_model(_model_path(args.out, approach))
        _check_compatible(model, approach, config)
        X, y = featurize_dataset(model.feature_spec, test)
        reports[approach] = evaluate(model.predict_proba(X), y, baseline_rate, ece_bins)
        logging.info(f"Evaluated {approach} on {len(test)} test shots")

    write_json(os.path.join(args.out, "evaluation.json"), {
        "baseline_rate": baseline_rate,
        "reports": {name: r.to_dict() for name, r in reports.items()},
        "config": config,
    })
    write_text(os.path.join(args.out, "evaluation.txt"), format_evaluation_text(reports))
    print_table(evaluation_table(reports, title=f"Evaluation on {len(test)} test shots"))


def cmd_explain(args, config):
    """Importance, shape, interaction and local explanation files for one approach."""
    model = load_model(_model_path(args.out, args.approach))
    _check_compatible(model, args.approach, config)
    for name in args.feature or []:
        if name not in model.feature_names:
            raise UnknownFeature(f"unknown feature '{name}' (model features: {', '.join(model.feature_names)})")
    dataset, train, _ = _load_partitions(args, config)
    for pair in args.pair or []:
        if len(pair) != 2:
            raise InvalidConfig(f"--pair expects 'a,b', got {','.join(pair)}")
        interaction_table(model, tuple(pair))
    reference, _ = featurize_dataset(model.feature_spec, train)

    local_vectors = {}
    if args.local:
        bad = [i for i in args.local if not 0 <= i < len(dataset)]
        if bad:
            raise InvalidConfig(f"--local index out of range (dataset has {len(dataset)} shots): {bad}")
        full, _ = featurize_dataset(model.feature_spec, dataset)
        local_vectors = {i: full.iloc[i].to_numpy(dtype=float) for i in args.local}

    out_dir = os.path.join(args.out, f"explain-{args.approach}")
    export_explanations(model, reference, out_dir, local_vectors=local_vectors, features=args.feature)
    write_json(os.path.join(out_dir, "run.json"), {"approach": args.approach, "local": sorted(local_vectors), "config": config})


def cmd_summary(args, config):
    dataset = load_csv(_data_path(args), config.get("coord_spec"), strict=not args.lenient)
    table = season_summary(dataset)
    write_frame_csv(os.path.join(args.out, "season-summary.csv"), table.reset_index())
    rich_table = Table(title=f"Shots per competition and season ({len(dataset)} shots)")
    rich_table.add_column("Competition", style="magenta")
    for season in table.columns:
        rich_table.add_column(str(season), justify="right")
    for competition, row in table.iterrows():
        rich_table.add_row(str(competition), *(str(v) for v in row))
    print_table(rich_table)


COMMANDS = {
    "generate": cmd_generate,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "explain": cmd_explain,
    "summary": cmd_summary,
}


def main(argv=None):
    """Main execution function. Returns the process exit status."""
    args = parse_args(argv)
    try:
        config = effective_config(args)
        setup_logging(config.get("log_level", "INFO"))
        logging.info(f"Running '{args.command}' with output directory {args.out}")
        COMMANDS[args.command](args, config)
    except XgError as e:
        print(e.one_line(), file=sys.stderr)
        return EXIT_XG_ERROR
    except json.JSONDecodeError as e:
        print(f"error=InvalidConfig {e}", file=sys.stderr)
        return EXIT_XG_ERROR
    except OSError as e:
        print(f"error=IOError {e}", file=sys.stderr)
        return EXIT_IO_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
