"""Command-line front end.

Four subcommands: ``test`` runs the chi-square homogeneity test on a CSV
table, ``audit`` adds the scale-dependence audit, ``invariant`` runs a
scale-invariant statistic against its Monte-Carlo-calibrated null, and
``datasets`` writes one of the bundled example tables to a CSV file.

Reports go to standard output, human-readable by default or as a single
JSON object with ``--json``. Exit codes: 0 the command ran (the statistical
decision never affects the exit code), 2 input or usage error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone

from . import __version__
from .backend import BACKEND
from .datasets import DATASET_NAMES, write_dataset_csv
from .errors import (
    ChiAuditError,
    CsvParseError,
    NumericalError,
    UnknownDatasetError,
)
from .invariance import InvariantStatKind, audit_scaling, invariant_test
from .pearson import check_assumptions, homogeneity_test
from .tables import ContingencyTable, make_table

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class TableFile:
    """A CSV table on disk, with resolved layout flags."""

    path: str
    has_header_row: bool
    has_label_column: bool


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_table_file(
    path,
    header: bool | None = None,
    labels: bool | None = None,
) -> tuple[ContingencyTable, TableFile, str]:
    """Parse a CSV file into a table.

    ``header`` and ``labels`` force the presence or absence of a header row
    and a leading label column; None means auto-detect (a row or column is
    treated as labels when it contains non-numeric cells). Returns the
    table, the resolved TableFile, and the SHA-256 digest of the file bytes.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    digest = hashlib.sha256(raw).hexdigest()
    try:
        text = raw.decode("utf-8-sig")
    except UnicodeDecodeError as e:
        raise CsvParseError(f"{path} is not UTF-8 text: {e}") from None

    rows: list[tuple[int, list[str]]] = []
    reader = csv.reader(io.StringIO(text))
    for cells in reader:
        stripped = [c.strip() for c in cells]
        if any(stripped):
            rows.append((reader.line_num, stripped))
    if not rows:
        raise CsvParseError(f"{path} contains no data")

    first_line, first_row = rows[0]
    if header is None:
        header = len(first_row) > 1 and any(
            c and not _is_number(c) for c in first_row[1:]
        )
    data = rows[1:] if header else rows
    if not data:
        raise CsvParseError(f"{path} has a header row but no data rows",
                            line=first_line)

    if labels is None:
        labels = any(r and not _is_number(r[0]) for _, r in data)

    width = len(data[0][1])
    matrix: list[list[float]] = []
    row_labels: list[str] = []
    for line, cells in data:
        if len(cells) != width:
            raise CsvParseError(
                f"expected {width} fields but found {len(cells)}", line=line
            )
        if labels:
            row_labels.append(cells[0])
            values = cells[1:]
            offset = 2
        else:
            values = cells
            offset = 1
        parsed = []
        for idx, cell in enumerate(values):
            if not _is_number(cell):
                raise CsvParseError(
                    f"cell {cell!r} is not a number", line=line, col=idx + offset
                )
            parsed.append(float(cell))
        matrix.append(parsed)

    col_labels: list[str] | None = None
    if header:
        col_labels = first_row[1:] if labels else first_row
        data_width = width - 1 if labels else width
        if len(col_labels) != data_width:
            raise CsvParseError(
                f"header has {len(col_labels)} column labels for "
                f"{data_width} data columns",
                line=first_line,
            )

    table = make_table(
        matrix,
        row_labels=row_labels if labels else None,
        col_labels=col_labels,
    )
    return table, TableFile(str(path), bool(header), bool(labels)), digest


def serialize_report(report: dict) -> str:
    """Stable JSON: sorted keys, exact float round-trip."""
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _matrix(a) -> list[list[float]]:
    return [[float(v) for v in row] for row in a]


def _base_report(args, table: ContingencyTable, table_file: TableFile,
                 digest: str) -> dict:
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "chi-audit", "version": __version__,
                 "backend": BACKEND},
        "input": {
            "path": table_file.path,
            "sha256": digest,
            "has_header_row": table_file.has_header_row,
            "has_label_column": table_file.has_label_column,
            "rows": table.n_rows,
            "cols": table.n_cols,
            "grand_total": table.grand_total,
            "row_labels": list(table.row_labels) if table.row_labels else None,
            "col_labels": list(table.col_labels) if table.col_labels else None,
        },
    }
    if not args.no_timestamp:
        report["generated_at"] = datetime.now(timezone.utc).isoformat(
            timespec="seconds"
        )
    return report


def _decision(reject: bool) -> str:
    return "reject" if reject else "fail-to-reject"


def _pearson_block(res) -> dict:
    return {
        "statistic": res.statistic,
        "dof": res.dof,
        "alpha": res.alpha,
        "critical_value": res.critical_value,
        "p_value": res.p_value,
        "reject_h0": res.reject_h0,
        "decision": _decision(res.reject_h0),
        "expected": _matrix(res.expected),
        "contributions": _matrix(res.contributions),
    }


def _assumptions_block(rep) -> dict:
    return {
        "min_expected": rep.min_expected,
        "cells_below_5": rep.cells_below_5,
        "cells_below_10": rep.cells_below_10,
        "cells_below_threshold": rep.cells_below_threshold,
        "threshold": rep.threshold,
        "passes": rep.passes,
        "notes": list(rep.notes),
    }


def _audit_block(audit) -> dict:
    return {
        "base_statistic": audit.base_statistic,
        "critical_value": audit.critical_value,
        "critical_scale": (
            "infinite" if math.isinf(audit.critical_scale)
            else audit.critical_scale
        ),
        "linearity_residual": audit.linearity_residual,
        "decision_at": [
            {
                "scale": p.scale,
                "statistic": p.statistic,
                "p_value": p.p_value,
                "reject_h0": p.reject_h0,
                "decision": _decision(p.reject_h0),
            }
            for p in audit.probes
        ],
        "proportional": audit.proportional,
        "flip_confirmed": audit.flip_confirmed,
        "alpha": audit.alpha,
        "notes": list(audit.notes),
    }


def _invariant_block(result) -> dict:
    cal = result.calibration
    return {
        "kind": result.kind.value,
        "statistic": result.statistic,
        "alpha": result.alpha,
        "critical_value": result.critical_value,
        "reject_h0": result.reject_h0,
        "decision": _decision(result.reject_h0),
        "calibration": {
            "kind": cal.kind.value,
            "row_totals": list(cal.row_totals),
            "pooled_probs": list(cal.pooled_probs),
            "alpha": cal.alpha,
            "trials": cal.trials,
            "seed": cal.seed,
            "empirical_quantiles": {
                repr(level): value
                for level, value in cal.empirical_quantiles.items()
            },
            "critical_value_at_alpha": cal.critical_value_at_alpha,
            "monte_carlo_se": cal.monte_carlo_se,
            "too_few_trials": cal.too_few_trials,
        },
    }


def _fmt(x: float) -> str:
    return format(x, ".6g")


def _print_table_heading(table: ContingencyTable, table_file: TableFile):
    print(
        f"table: {table.n_rows}x{table.n_cols} from {table_file.path}, "
        f"grand total {_fmt(table.grand_total)}"
    )


def _print_pearson(res):
    print(f"statistic: {_fmt(res.statistic)} (dof {res.dof})")
    print(
        f"critical value at alpha {_fmt(res.alpha)}: "
        f"{_fmt(res.critical_value)}"
    )
    print(f"p-value: {_fmt(res.p_value)}")
    print(f"decision: {_decision(res.reject_h0)}")


def _print_assumptions(rep):
    print(
        f"expected counts: min {_fmt(rep.min_expected)}, "
        f"{rep.cells_below_threshold} cell(s) below threshold "
        f"{_fmt(rep.threshold)}"
    )
    for note in rep.notes:
        print(f"  note: {note}")


def _load(args):
    return read_table_file(args.input, header=args.header, labels=args.labels)


def cmd_test(args) -> int:
    table, table_file, digest = _load(args)
    res = homogeneity_test(table, alpha=args.alpha)
    assumptions = check_assumptions(table, threshold=args.threshold)
    if args.json:
        report = _base_report(args, table, table_file, digest)
        report["pearson"] = _pearson_block(res)
        report["assumptions"] = _assumptions_block(assumptions)
        sys.stdout.write(serialize_report(report))
    else:
        _print_table_heading(table, table_file)
        _print_pearson(res)
        _print_assumptions(assumptions)
    return 0


def cmd_audit(args) -> int:
    table, table_file, digest = _load(args)
    res = homogeneity_test(table, alpha=args.alpha)
    assumptions = check_assumptions(table, threshold=args.threshold)
    audit = audit_scaling(table, alpha=args.alpha,
                          probe_scales=args.scale or ())
    if args.json:
        report = _base_report(args, table, table_file, digest)
        report["pearson"] = _pearson_block(res)
        report["assumptions"] = _assumptions_block(assumptions)
        report["scaling_audit"] = _audit_block(audit)
        sys.stdout.write(serialize_report(report))
    else:
        _print_table_heading(table, table_file)
        _print_pearson(res)
        _print_assumptions(assumptions)
        print("scaling audit:")
        if math.isinf(audit.critical_scale):
            print("  proportional table: statistic is 0 at every scale, "
                  "critical scale infinite")
        else:
            print(
                f"  critical scale c* = {_fmt(audit.critical_scale)}: "
                f"scaling the table by c > c* flips the decision to reject"
            )
            confirmed = "yes" if audit.flip_confirmed else "NO"
            print(f"  flip confirmed at c* x (1 +/- 1e-3): {confirmed}")
        print(f"  linearity residual over probes: "
              f"{_fmt(audit.linearity_residual)}")
        for probe in audit.probes:
            print(
                f"  at scale {_fmt(probe.scale)}: statistic "
                f"{_fmt(probe.statistic)}, p-value {_fmt(probe.p_value)}, "
                f"{_decision(probe.reject_h0)}"
            )
        for note in audit.notes:
            print(f"  note: {note}")
    return 0


def cmd_invariant(args) -> int:
    table, table_file, digest = _load(args)
    res = homogeneity_test(table, alpha=args.alpha)
    assumptions = check_assumptions(table, threshold=args.threshold)
    kind = InvariantStatKind(args.kind)
    result = invariant_test(
        table, kind, alpha=args.alpha, trials=args.trials, seed=args.seed
    )
    if args.json:
        report = _base_report(args, table, table_file, digest)
        report["pearson"] = _pearson_block(res)
        report["assumptions"] = _assumptions_block(assumptions)
        report["invariant"] = _invariant_block(result)
        sys.stdout.write(serialize_report(report))
    else:
        cal = result.calibration
        _print_table_heading(table, table_file)
        _print_pearson(res)
        _print_assumptions(assumptions)
        print(f"invariant statistic ({kind.value}): {_fmt(result.statistic)}")
        print(
            f"calibrated critical value (alpha {_fmt(result.alpha)}, "
            f"{cal.trials} trials, seed {cal.seed}): "
            f"{_fmt(result.critical_value)} "
            f"+/- {_fmt(cal.monte_carlo_se)} (MC standard error)"
        )
        print(f"decision: {_decision(result.reject_h0)}")
        totals = ", ".join(str(r) for r in cal.row_totals)
        probs = ", ".join(_fmt(p) for p in cal.pooled_probs)
        print(f"calibration margins: row totals ({totals}); "
              f"pooled column probabilities ({probs})")
        if cal.too_few_trials:
            print("warning: fewer than 1000 trials; the calibrated critical "
                  "value is noisy")
    return 0


def cmd_datasets(args) -> int:
    name = args.name
    if name not in DATASET_NAMES:
        raise UnknownDatasetError(name, DATASET_NAMES)
    out = args.output if args.output else f"{name}.csv"
    write_dataset_csv(name, out)
    print(f"wrote {name} to {out}")
    return 0


def _add_table_flags(sub: argparse.ArgumentParser):
    sub.add_argument("input", help="CSV file holding the table")
    sub.add_argument("--alpha", type=float, default=0.05,
                     help="significance level (default 0.05)")
    sub.add_argument("--threshold", type=float, default=5.0,
                     help="expected-count advisory threshold (default 5)")
    sub.add_argument("--json", action="store_true",
                     help="emit a JSON report instead of text")
    sub.add_argument("--header", action=argparse.BooleanOptionalAction,
                     default=None,
                     help="force header row on/off (default: auto-detect)")
    sub.add_argument("--labels", action=argparse.BooleanOptionalAction,
                     default=None,
                     help="force label column on/off (default: auto-detect)")
    sub.add_argument("--no-timestamp", action="store_true",
                     help="omit the generated_at field from JSON reports")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chi-audit",
        description=(
            "Chi-square homogeneity testing with a scale-dependence audit "
            "and calibrated scale-invariant statistics."
        ),
    )
    parser.add_argument("--version", action="version",
                        version=f"chi-audit {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p_test = commands.add_parser(
        "test", help="run the chi-square homogeneity test on a CSV table"
    )
    _add_table_flags(p_test)
    p_test.set_defaults(func=cmd_test)

    p_audit = commands.add_parser(
        "audit", help="audit how the decision depends on the entry scale"
    )
    _add_table_flags(p_audit)
    p_audit.add_argument("--scale", action="append", type=float,
                         metavar="C",
                         help="probe scale factor (repeatable)")
    p_audit.set_defaults(func=cmd_audit)

    p_inv = commands.add_parser(
        "invariant",
        help="test a scale-invariant statistic against a calibrated null",
    )
    _add_table_flags(p_inv)
    p_inv.add_argument(
        "--kind", required=True,
        choices=[k.value for k in InvariantStatKind],
        help="which invariant statistic to use",
    )
    p_inv.add_argument("--trials", type=int, default=10000,
                       help="Monte Carlo trials for calibration (default 10000)")
    p_inv.add_argument("--seed", type=int, default=0,
                       help="PRNG seed (default 0)")
    p_inv.set_defaults(func=cmd_invariant)

    p_data = commands.add_parser(
        "datasets", help="write a bundled example table to a CSV file"
    )
    p_data.add_argument("name",
                        help=f"one of: {', '.join(DATASET_NAMES)}")
    p_data.add_argument("--output", "-o", default=None,
                        help="output path (default <name>.csv)")
    p_data.set_defaults(func=cmd_datasets)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return 3
    except (CsvParseError, UnknownDatasetError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ChiAuditError as e:
        path = getattr(args, "input", None)
        prefix = f"{path}: " if path else ""
        print(f"error: {prefix}{e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
