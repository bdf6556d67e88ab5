"""Command-line entry point: ingest -> fuse/sweep/group -> report.

Exit codes: 0 success, 1 validation failure (every violation listed on
stderr), 2 usage error. Reports go to stdout or, with --out/--out-dir, are
written atomically (write to a temp file, then rename).
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from . import grouping, report, sweep
from .errors import VotefuseError
from .ingest import Experiment, load_experiment, validate_tree
from .metrics import score
from .model import TiePolicy
from .voting import fuse

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2


def _write_atomic(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _deliver(data: bytes, out: str | None) -> None:
    if out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        _write_atomic(Path(out), data)


def _meta(args: argparse.Namespace, with_policy: bool = True) -> report.ReportMeta:
    timestamp = None
    if getattr(args, "timestamp", False):
        timestamp = datetime.now(timezone.utc).isoformat()
    return report.ReportMeta(
        manifest=args.manifest,
        tie_policy=args.tie_policy if with_policy else None,
        alignment_mode=args.alignment,
        timestamp=timestamp,
    )


def _load(args: argparse.Namespace) -> Experiment:
    return load_experiment(args.manifest, mode=args.alignment)


def _resolve_runs(exp: Experiment, selector: str):
    if selector == "all":
        return exp.runs.full_spec()
    run_ids = [part.strip() for part in selector.split(",") if part.strip()]
    if not run_ids:
        raise VotefuseError("--runs must be 'all' or a comma-separated run_id list")
    return exp.runs.spec_for(run_ids)


def _cmd_validate(args: argparse.Namespace) -> int:
    diagnostics, exp = validate_tree(args.manifest, mode=args.alignment)
    if exp is None:
        for line in diagnostics:
            print(line, file=sys.stderr)
        print(f"{len(diagnostics)} violation(s) found", file=sys.stderr)
        return EXIT_VALIDATION
    print(
        f"{len(exp.runs)} runs, {exp.runs.sample_count} samples, {exp.labels.count} labels"
        + (f" ({exp.runs.dropped} samples dropped by intersection)" if exp.runs.dropped else "")
    )
    return EXIT_OK


def _cmd_table(args: argparse.Namespace) -> int:
    exp = _load(args)
    table = sweep.individual_table(exp.runs, exp.truth)
    doc = report.individual_table_document(table, _meta(args, with_policy=False))
    _deliver(report.emit(doc, args.format), args.out)
    return EXIT_OK


def _cmd_fuse(args: argparse.Namespace) -> int:
    exp = _load(args)
    policy = TiePolicy.from_flag(args.tie_policy)
    spec = _resolve_runs(exp, args.runs)
    fused = fuse(spec, exp.runs, exp.labels.count, policy)
    metrics = score(fused.labels, exp.truth, exp.labels.count, tie_count=fused.tie_count)
    member_ids = [exp.runs.run_ids[i] for i in spec.indices]
    doc = report.fuse_document(member_ids, metrics, _meta(args))
    _deliver(report.emit(doc, args.format), args.out)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    exp = _load(args)
    policy = TiePolicy.from_flag(args.tie_policy)
    result = sweep.sweep_size(exp.runs, exp.truth, args.size, policy, args.top)
    doc = report.sweep_document(result, exp.runs, _meta(args))
    _deliver(report.emit(doc, args.format), args.out)
    return EXIT_OK


def _cmd_groups(args: argparse.Namespace) -> int:
    exp = _load(args)
    policy = TiePolicy.from_flag(args.tie_policy)
    result = grouping.evaluate_groups(exp.runs, exp.truth, args.key, policy)
    doc = report.groups_document(result, _meta(args))
    _deliver(report.emit(doc, args.format), args.out)
    return EXIT_OK


def _cmd_sweep_all(args: argparse.Namespace) -> int:
    """Emit the full artifact set: table, per-size sweeps, best-per-size, groups."""
    exp = _load(args)
    policy = TiePolicy.from_flag(args.tie_policy)
    n = len(exp.runs)
    sizes = sweep.parse_size_range(args.sizes if args.sizes else f"2-{n}", n)
    meta = _meta(args)
    out_dir = Path(args.out_dir)
    ext = "json" if args.format == "structured" else "csv"

    table = sweep.individual_table(exp.runs, exp.truth)
    table_doc = report.individual_table_document(table, _meta(args, with_policy=False))
    _write_atomic(out_dir / f"individual_table.{ext}", report.emit(table_doc, args.format))

    best, reports = sweep.sweep_all(exp.runs, exp.truth, sizes, policy, args.top)
    for k in sizes:
        sweep_path = out_dir / f"sweep_k{k:02d}.{ext}"
        if args.format == "structured":
            data = report.emit(report.sweep_document(reports[k], exp.runs, meta), "structured")
        else:
            data = report.emit_plot_data(reports[k], exp.runs)
        _write_atomic(sweep_path, data)

    if args.format == "structured":
        best_data = report.emit(report.best_per_size_document(best, exp.runs, meta), "structured")
    else:
        best_data = report.emit_plot_data(best)
    _write_atomic(out_dir / f"best_per_size.{ext}", best_data)

    for key in grouping.GROUP_KEYS:
        group_report = grouping.evaluate_groups(exp.runs, exp.truth, key, policy)
        if args.format == "structured":
            data = report.emit(report.groups_document(group_report, meta), "structured")
        else:
            data = report.emit_plot_data(group_report)
        _write_atomic(out_dir / f"groups_{key}.{ext}", data)

    print(f"wrote {1 + len(sizes) + 1 + len(grouping.GROUP_KEYS)} report file(s) to {out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="votefuse",
        description="Majority-vote fusion and exhaustive ensemble sweeps over prediction runs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, policy: bool = True, output: bool = True) -> None:
        p.add_argument("--manifest", required=True, help="path to the manifest file")
        p.add_argument(
            "--alignment",
            choices=("strict", "intersect"),
            default="strict",
            help="sample alignment mode (default: strict)",
        )
        if policy:
            p.add_argument(
                "--tie-policy",
                choices=[policy.value for policy in TiePolicy],
                default=TiePolicy.LOWEST_LABEL_INDEX.value,
                help="tie resolution rule (default: lowest-label)",
            )
        if output:
            p.add_argument(
                "--format",
                choices=report.FORMATS,
                default="delimited",
                help="report serialization (default: delimited)",
            )
            p.add_argument("--out", default=None, help="write the report here instead of stdout")
            p.add_argument(
                "--timestamp",
                action="store_true",
                help="include a generation timestamp in report metadata (off by default)",
            )

    p_validate = sub.add_parser("validate", help="check a manifest and everything it references")
    common(p_validate, policy=False, output=False)
    p_validate.set_defaults(func=_cmd_validate)

    p_table = sub.add_parser("table", help="individual per-run accuracy table")
    common(p_table, policy=False)
    p_table.set_defaults(func=_cmd_table)

    p_fuse = sub.add_parser("fuse", help="fuse a run subset by majority vote and score it")
    common(p_fuse)
    p_fuse.add_argument(
        "--runs",
        default="all",
        help="'all' or a comma-separated run_id list (default: all)",
    )
    p_fuse.set_defaults(func=_cmd_fuse)

    p_sweep = sub.add_parser("sweep", help="evaluate every ensemble of one size")
    common(p_sweep)
    p_sweep.add_argument("--size", type=int, required=True, help="ensemble size k")
    p_sweep.add_argument("--top", type=int, default=10, help="rows to retain (default: 10)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_all = sub.add_parser(
        "sweep-all",
        help="emit the complete artifact set: table, per-size sweeps, best-per-size, groups",
    )
    common(p_all)
    p_all.add_argument("--sizes", default=None, help="size selection, e.g. '2-12' (default: 2-n)")
    p_all.add_argument("--top", type=int, default=10, help="rows per sweep file (default: 10)")
    p_all.add_argument("--out-dir", required=True, help="directory for the artifact files")
    p_all.set_defaults(func=_cmd_sweep_all)

    p_groups = sub.add_parser("groups", help="fuse and score runs grouped by one tag")
    common(p_groups)
    p_groups.add_argument(
        "--key",
        choices=grouping.GROUP_KEYS,
        required=True,
        help="grouping tag: representation or family",
    )
    p_groups.set_defaults(func=_cmd_groups)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VotefuseError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
