"""Command-line harness: run suites, convergence studies, sample/inspect fields.

Exit codes: 0 all checks passed, 1 at least one suite failed, 2 usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analytic, jgf
from .harness import ConfigError, Report, SUITES, SuiteConfig, convergence_study, run
from .jets import jet1_of, jet2_of, jet_connection_of, jet_matter_of
from .lie_core import seeded_rng

SAMPLE_KINDS = ("group", "jet1-gauge", "jet2-gauge", "connection", "jet-connection", "jet-matter")


def _load_config(args) -> SuiteConfig:
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    cfg = SuiteConfig.from_dict(data)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.suite:
        overrides["suites"] = tuple(args.suite)
    if getattr(args, "out", None):
        overrides["output"] = args.out
    if args.threads is not None:
        overrides["threads"] = args.threads
    if overrides:
        from dataclasses import replace

        cfg = replace(cfg, **overrides)
    return cfg


def _print_report(report: Report) -> None:
    for res in report.suites:
        extra = ""
        if res.convergence_ratios:
            extra = " ratios=" + ",".join(f"{r:.3f}" for r in res.convergence_ratios)
        elif res.mode == "exact":
            extra = " (exact)"
        print(
            f"{res.status.upper():4s} {res.name:28s} "
            f"max_error={res.max_error:.3e} tol={res.tolerance:.3e}{extra}"
        )
    print(f"overall: {report.overall} (seed={report.seed}, config={report.config_hash})")


def _cmd_run(args) -> int:
    cfg = _load_config(args)
    report = run(cfg)
    _print_report(report)
    return 0 if report.passed else 1


def _cmd_converge(args) -> int:
    cfg = _load_config(args)
    names = list(cfg.suites) or [n for n, s in SUITES.items() if s.fd]
    results = [convergence_study(cfg, name) for name in names]
    report = Report(
        seed=cfg.seed,
        config_hash=cfg.config_hash(),
        suites=results,
        overall="pass" if all(r.status == "pass" for r in results) else "fail",
    )
    if cfg.output:
        report.write(cfg.output)
    if args.csv:
        lines = ["suite,h,error"]
        for res in results:
            for h, e in zip(res.details["h_levels"], res.details["errors"]):
                lines.append(f"{res.name},{h!r},{e!r}")
        Path(args.csv).write_text("\n".join(lines) + "\n")
    _print_report(report)
    return 0 if report.passed else 1


def _cmd_sample(args) -> int:
    cfg = _load_config(args)
    spec, patch = cfg.group, cfg.patch
    rng = seeded_rng(cfg.seed, "sample", args.kind)
    if args.kind in ("group", "jet1-gauge", "jet2-gauge"):
        fam = analytic.random_gauge_family(rng, spec, patch.dim, factors=2)
        sample = analytic.sample_gauge(patch, spec, fam)
        if args.kind == "group":
            out = sample.values
        elif args.kind == "jet1-gauge":
            out = jet1_of(sample.values) if args.fd else sample.jet1
        else:
            out = jet2_of(sample.values) if args.fd else sample.jet2
    elif args.kind in ("connection", "jet-connection"):
        fam = analytic.random_connection_family(rng, spec, patch.dim)
        sample = analytic.sample_connection(patch, spec, fam)
        if args.kind == "connection":
            out = sample.values
        else:
            out = jet_connection_of(sample.values) if args.fd else sample.jet
    elif args.kind == "jet-matter":
        fam = analytic.random_matter_family(rng, spec, patch.dim)
        sample = analytic.sample_matter(patch, spec, fam)
        out = jet_matter_of(sample.values) if args.fd else sample.jet
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown sample kind {args.kind}")
    jgf.write_field(out, args.out)
    print(f"wrote {args.kind} field to {args.out}")
    return 0


def _cmd_inspect(args) -> int:
    print(jgf.describe(args.path))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaugejets",
        description="Verify jet-level gauge invariance claims on grid patches.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_default=None):
        p.add_argument("--config", help="JSON config path (defaults are built in)")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument(
            "--suite",
            action="append",
            metavar="NAME",
            help=f"suite to run (repeatable); known: {', '.join(sorted(SUITES))}",
        )
        p.add_argument("--out", default=out_default, help="report/field output path")
        p.add_argument("--threads", type=int, help="number of worker threads for suites")

    p_run = sub.add_parser("run", help="run verification suites")
    common(p_run)
    p_run.set_defaults(fn=_cmd_run)

    p_conv = sub.add_parser("converge", help="error-vs-h convergence study")
    common(p_conv)
    p_conv.add_argument("--csv", help="also write per-level error data as CSV")
    p_conv.set_defaults(fn=_cmd_converge)

    p_sample = sub.add_parser("sample", help="emit a sampled field as a JGF1 file")
    common(p_sample, out_default="field.jgf1")
    p_sample.add_argument("--kind", choices=SAMPLE_KINDS, default="jet1-gauge")
    p_sample.add_argument(
        "--fd", action="store_true", help="store finite-difference jets instead of exact ones"
    )
    p_sample.set_defaults(fn=_cmd_sample)

    p_inspect = sub.add_parser("inspect", help="pretty-print a JGF1 field file")
    p_inspect.add_argument("path")
    p_inspect.set_defaults(fn=_cmd_inspect)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, jgf.FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
