import math

from rich.console import Console
from rich.table import Table

from lib.metrics import METRIC_COLUMNS


def _is_missing(value):
    return value is None or (isinstance(value, float) and math.isnan(value))


def best_per_column(reports):
    """Names of the approach(es) holding the best value in each metric column."""
    best = {}
    for key, _, higher_is_better in METRIC_COLUMNS:
        values = {name: getattr(r, key) for name, r in reports.items() if not _is_missing(getattr(r, key))}
        if not values:
            best[key] = set()
            continue
        target = max(values.values()) if higher_is_better else min(values.values())
        best[key] = {name for name, v in values.items() if v == target}
    return best


def _cell(value):
    return "n/a" if _is_missing(value) else f"{value:.4f}"


def evaluation_table(reports, title="Evaluation"):
    """Rich table of the seven metrics, one row per approach; best values in bold."""
    best = best_per_column(reports)
    table = Table(title=title)
    table.add_column("Approach", style="magenta")
    for _, header, _ in METRIC_COLUMNS:
        table.add_column(header, justify="right")
    for name, report in reports.items():
        cells = []
        for key, _, _ in METRIC_COLUMNS:
            text = _cell(getattr(report, key))
            cells.append(f"[bold green]{text}[/bold green]" if name in best[key] else text)
        table.add_row(name, *cells)
    return table


def format_evaluation_text(reports):
    """Fixed-width rendering of the evaluation table; '*' marks the best value per column."""
    best = best_per_column(reports)
    width = max([len("Approach")] + [len(name) for name in reports]) + 2
    header = "Approach".ljust(width) + "".join(h.rjust(10) for _, h, _ in METRIC_COLUMNS)
    lines = [header, "-" * len(header)]
    for name, report in reports.items():
        cells = []
        for key, _, _ in METRIC_COLUMNS:
            text = _cell(getattr(report, key)) + ("*" if name in best[key] else " ")
            cells.append(text.rjust(10))
        lines.append(name.ljust(width) + "".join(cells))
    sample = next(iter(reports.values()), None)
    if sample is not None:
        lines.append("")
        lines.append(f"n = {sample.n}, baseline rate = {sample.baseline_rate:.6f}, ECE bins = {sample.ece_bins}")
    return "\n".join(lines)


def format_training_report(model, approach):
    """Human-readable summary of a fit: sizes, stopping rounds and the tail of the validation curves."""
    report = model.training_report
    lines = [f"Training report: {approach}", "=" * 60]
    lines.append(f"Intercept (log-odds): {model.intercept:+.6f}")
    lines.append(f"Features: {len(model.feature_names)}; main effects: {len(model.main_effects)}; "
                 f"pairwise effects: {len(model.pair_effects)}")
    if "base_rate" in report:
        lines.append(f"Training base rate: {report['base_rate']:.6f}")
    if "n_rows" in report:
        lines.append(f"Training rows: {report['n_rows']}")
    if report.get("degenerate_labels"):
        lines.append("Labels held a single class; the model is the constant-rate model.")
    for stage_key, stage_name in (("main_stage", "Main effects"), ("pair_stage", "Pairwise effects")):
        stage = report.get(stage_key)
        if not stage or not stage["rounds_run"]:
            continue
        lines.append("")
        lines.append(f"{stage_name}:")
        for bag, (rounds, stop, curve) in enumerate(zip(stage["rounds_run"], stage["early_stop_round"],
                                                         stage["validation_curves"]), start=1):
            lines.append(f"  bag {bag}: rounds run {rounds}, early-stop round {stop}, "
                         f"validation log loss {curve[0]:.6f} -> {curve[stop]:.6f}")
    return "\n".join(lines)


def print_table(table):
    Console().print(table)
