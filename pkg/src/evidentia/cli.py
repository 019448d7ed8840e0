"""Command-line entry point.

Subcommands::

    evidentia run --config FILE --out DIR [--seed N] [--reps N]
    evidentia compute MODEL [parameter flags] --eu X [--es Y]
    evidentia plot CSV --x COL --y COL --out FILE.svg
    evidentia incoherence [--trials N] [--seed N] [--out DIR]
    evidentia projection [--ea X Y] [--eb X Y] [--eu X Y] [--seed N] [--out DIR]

Errors are reported on one line as ``evidentia: error[KIND]: message`` and
map to exit codes 2 (usage), 3 (I/O) and 4 (numerical degeneracy).
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import load_config
from .errors import (
    ConfigurationError,
    DegenerateLawError,
    DomainError,
    EstimationError,
    EvidentiaError,
    ParameterError,
)
from .exact_lr import lr_cs, lr_ss, lr_two_suspect
from .experiments import (
    TRUTH_LABELS,
    ProjectionToy,
    incoherence_search,
    projection_demo,
    run_config,
    search_projection_flip,
    write_records_csv,
)
from .generative import EvidencePair, Hypothesis, Scenario, SpecificSourceParams, SuspectTruth, TwoSuspectParams
from .score_slr import (
    frstat_ratio,
    slr_asym,
    slr_cs,
    slr_ss_es,
    slr_ss_es_unconditioned,
    slr_ss_eu,
    slr_two_suspect_anchored,
)
from .stats_core import RngStream, kde_build, kde_log_pdf
from .svgplot import density_lines, scatter_log10

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4
ERROR_KINDS = {EXIT_USAGE: "usage", EXIT_IO: "io", EXIT_NUMERIC: "numeric"}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _one_line(msg) -> str:
    return " ".join(str(msg).split())


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_USAGE, f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# plot
# ---------------------------------------------------------------------------


def _log10_or_none(raw: str):
    try:
        v = float(raw)
    except ValueError:
        return None
    if not (math.isfinite(v) and v > 0):
        return None
    return math.log10(v)


def read_xy(csv_path, x_col: str, y_col: str):
    """log10 of two LR columns, dropping rows where either is non-finite or zero."""
    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in (x_col, y_col):
            if col not in header:
                raise CliError(EXIT_USAGE, f"{csv_path}: no column {col!r} (have: {', '.join(header)})")
        xs, ys, dropped = [], [], 0
        for row in reader:
            x, y = _log10_or_none(row[x_col]), _log10_or_none(row[y_col])
            if x is None or y is None:
                dropped += 1
                continue
            xs.append(x)
            ys.append(y)
    return np.array(xs), np.array(ys), dropped


def plot_csv(csv_path, x_col: str, y_col: str, out_svg, title: str | None = None) -> int:
    xs, ys, dropped = read_xy(csv_path, x_col, y_col)
    svg = scatter_log10(xs, ys, title=title or Path(csv_path).stem,
                        xlabel=f"log10 {x_col}", ylabel=f"log10 {y_col}", n_dropped=dropped)
    with open(out_svg, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    return xs.size


def cmd_plot(args) -> int:
    n = plot_csv(args.csv, args.x, args.y, args.out, title=args.title)
    print(f"wrote {args.out} ({n} points)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


@dataclass
class RunManifest:
    config_path: str
    config_names: list
    seeds: dict
    out_dir: str
    csv_paths: list = field(default_factory=list)
    svg_paths: list = field(default_factory=list)
    summary_path: str = ""
    tool_version: str = __version__
    timestamp: str = ""

    def artifacts(self) -> list:
        return self.csv_paths + self.svg_paths + ([self.summary_path] if self.summary_path else [])

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _timestamp() -> str:
    # SOURCE_DATE_EPOCH pins the timestamp for reproducible manifests.
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = (_dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc) if epoch
            else _dt.datetime.now(_dt.timezone.utc))
    return when.replace(microsecond=0).isoformat()


def cmd_run(args) -> int:
    try:
        configs = load_config(args.config)
    except OSError as exc:
        raise CliError(EXIT_USAGE, f"cannot read config {args.config}: {exc.strerror or exc}")
    if args.seed is not None or args.reps is not None:
        configs = [replace(c, seed=args.seed if args.seed is not None else c.seed,
                           n_reps=args.reps if args.reps is not None else c.n_reps)
                   for c in configs]
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write to {out}: {exc.strerror or exc}")

    manifest = RunManifest(config_path=str(args.config), config_names=[c.name for c in configs],
                           seeds={c.name: c.seed for c in configs}, out_dir=str(out))
    summaries = []
    for c in configs:
        records, summary = run_config(c)
        summaries.append(summary.to_text())
        ycols = c.comparison.y_columns
        for truth in c.truths:
            stem = f"{c.name}_{TRUTH_LABELS[truth]}"
            csv_path = out / f"{stem}.csv"
            write_records_csv([r for r in records if r.truth is truth], csv_path)
            manifest.csv_paths.append(str(csv_path))
            for y in ycols:
                svg_path = out / (f"{stem}.svg" if len(ycols) == 1 else f"{stem}_{y}.svg")
                plot_csv(csv_path, "lr_ss", y, svg_path, title=f"Config {c.name}, truth {TRUTH_LABELS[truth]}")
                manifest.svg_paths.append(str(svg_path))
        print(f"{c.name}: {len(records)} records", flush=True)
    summary_path = out / "summary.txt"
    summary_path.write_text("\n".join(summaries), encoding="utf-8")
    manifest.summary_path = str(summary_path)
    manifest.timestamp = _timestamp()
    missing = [a for a in manifest.artifacts() if not Path(a).exists()]
    if missing:
        raise CliError(EXIT_IO, f"artifacts missing after run: {', '.join(missing)}")
    manifest.write(out / "manifest.json")
    print(f"wrote {len(manifest.csv_paths)} CSVs, {len(manifest.svg_paths)} SVGs, "
          f"summary.txt and manifest.json to {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# compute
# ---------------------------------------------------------------------------

SS_MODELS = ("lr_ss", "lr_cs", "slr_cs", "slr_ss_es", "slr_ss_unc", "slr_ss_eu", "slr_asym", "frstat")
TWO_SUSPECT_MODELS = ("lr_ab", "slr_ab")
MODELS = SS_MODELS + TWO_SUSPECT_MODELS


def _require(args, names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise CliError(EXIT_USAGE, f"compute {args.model}: missing {flags}")


def _compute(args):
    if args.model in SS_MODELS:
        _require(args, ("mu", "var_d", "mu_d", "var_u", "eu"))
        p = SpecificSourceParams(mu=args.mu, var_d=args.var_d, mu_d=args.mu_d,
                                 var_u=args.var_u, var_s=args.var_s)
        e_s = args.es if args.es is not None else args.mu_d
        pair = EvidencePair(args.eu, e_s, Scenario.SPECIFIC_SOURCE, Hypothesis.H0)
        fn = {
            "lr_ss": lr_ss, "lr_cs": lr_cs, "slr_cs": slr_cs, "slr_ss_es": slr_ss_es,
            "slr_ss_eu": slr_ss_eu, "slr_asym": slr_asym, "frstat": frstat_ratio,
        }.get(args.model)
        if fn is not None:
            return fn(pair, p)
        return slr_ss_es_unconditioned(pair, p, stream=RngStream(args.seed))
    _require(args, ("mu_a", "var_a", "mu_b", "var_b", "var_u", "eu"))
    p = TwoSuspectParams(mu_a=args.mu_a, var_a=args.var_a, mu_b=args.mu_b,
                         var_b=args.var_b, var_u=args.var_u)
    if args.model == "lr_ab":
        return lr_two_suspect(args.eu, p)
    anchor = SuspectTruth.HA if args.anchor == "a" else SuspectTruth.HB
    anchor_value = args.ea if anchor is SuspectTruth.HA else args.eb
    if anchor_value is None:
        raise CliError(EXIT_USAGE, f"compute slr_ab: missing --e{args.anchor}")
    return slr_two_suspect_anchored(args.eu, anchor_value, p, anchor)


def cmd_compute(args) -> int:
    r = _compute(args)
    flags = [name for name in ("is_limit", "extrapolated") if getattr(r, name)]
    print(f"value: {r.value!r}")
    print(f"log10: {r.log10_value!r}")
    print(f"model: {r.model_tag.value}")
    print(f"hypotheses: {r.hypotheses}")
    print(f"flags: {', '.join(flags) if flags else 'none'}")
    for key in sorted(r.diagnostics):
        print(f"{key}: {r.diagnostics[key]!r}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# incoherence and projection
# ---------------------------------------------------------------------------

WITNESS_COLUMNS = ("trial", "kind", "truth", "mu_a", "var_a", "mu_b", "var_b", "var_u",
                   "e_u", "e_a", "e_b", "log10_slr_a", "log10_slr_b", "log10_lr_ab")


def cmd_incoherence(args) -> int:
    report = incoherence_search(n_trials=args.trials, seed=args.seed)
    print(f"trials: {report.n_trials}")
    print(f"witnesses: {report.count()} (both_own {report.count('both_own')}, "
          f"both_other {report.count('both_other')})")
    print(f"max |LR_ab * LR_ba - 1|: {report.max_reciprocity_error:.3g}")
    for kind in ("both_own", "both_other"):
        w = next((w for w in report.witnesses if w.kind == kind), None)
        if w is not None:
            print(f"first {kind}: trial {w.trial}, e_u={w.e_u:.4f}, e_a={w.e_a:.4f}, e_b={w.e_b:.4f}, "
                  f"log10 SLR_a={w.log10_slr_a:.4f}, log10 SLR_b={w.log10_slr_b:.4f}, "
                  f"log10 LR_ab={w.log10_lr_ab:.4f}")
    if args.out:
        out = Path(args.out)
        try:
            out.mkdir(parents=True, exist_ok=True)
            with open(out / "incoherence_witnesses.csv", "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(WITNESS_COLUMNS)
                for w in report.witnesses:
                    p = w.params
                    writer.writerow([w.trial, w.kind, w.truth.value]
                                    + [repr(v) for v in (p.mu_a, p.var_a, p.mu_b, p.var_b, p.var_u,
                                                         w.e_u, w.e_a, w.e_b, w.log10_slr_a,
                                                         w.log10_slr_b, w.log10_lr_ab)])
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write to {out}: {exc.strerror or exc}")
        print(f"wrote {out / 'incoherence_witnesses.csv'}")
    return EXIT_OK


def _projection_panel(proj, title: str) -> str:
    curves = []
    lo = min(proj.from_a.min(), proj.from_b.min(), proj.e_u)
    hi = max(proj.from_a.max(), proj.from_b.max(), proj.e_u)
    grid = np.linspace(lo, hi, 200)
    for label, sample in (("from A", proj.from_a), ("from B", proj.from_b)):
        curves.append((label, grid, np.exp(kde_log_pdf(grid, kde_build(sample)))))
    return density_lines(curves, title=title, xlabel="scalar projection", markers=[("e_u", proj.e_u)])


def cmd_projection(args) -> int:
    if args.eu is None:
        toy = search_projection_flip(tuple(args.ea), tuple(args.eb), var=args.var)
        if toy is None:
            raise CliError(EXIT_NUMERIC, "no trace position on the search grid produces a flip")
    else:
        toy = ProjectionToy(tuple(args.ea), tuple(args.eb), tuple(args.eu), var=args.var)
    ds = projection_demo(toy, n_pseudo=args.n_pseudo, seed=args.seed)
    print(f"e_a={toy.e_a} e_b={toy.e_b} e_u=({toy.e_u[0]:.4g}, {toy.e_u[1]:.4g}) var={toy.var}")
    print(f"log10 LR (A vs B, full vectors): {ds.log10_lr_ab:.4f}")
    for proj in (ds.onto_a, ds.onto_b):
        print(f"onto {proj.anchor}: projection of e_u {proj.e_u:.4f}, log10 SLR {proj.log10_slr:.4f} "
              f"(empirical {proj.log10_slr_empirical:.4f}), favours {proj.favours}")
    print(f"flip: {'yes' if ds.is_flip else 'no'}")
    if args.out:
        out = Path(args.out)
        try:
            out.mkdir(parents=True, exist_ok=True)
            with open(out / "projection.csv", "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["anchor", "source", "projection"])
                for proj in (ds.onto_a, ds.onto_b):
                    for src, sample in (("A", proj.from_a), ("B", proj.from_b)):
                        for v in sample:
                            writer.writerow([proj.anchor, src, repr(float(v))])
            for proj in (ds.onto_a, ds.onto_b):
                (out / f"projection_onto_{proj.anchor}.svg").write_text(
                    _projection_panel(proj, f"Projection onto e_{proj.anchor}"), encoding="utf-8")
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write to {out}: {exc.strerror or exc}")
        print(f"wrote projection.csv and two SVG panels to {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="evidentia", description="Likelihood ratio and score-based LR experiments.")
    parser.add_argument("--version", action="version", version=f"evidentia {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run experiments from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, help="override every experiment's seed")
    p.add_argument("--reps", type=int, help="override every experiment's n_reps")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compute", help="evaluate one model on one piece of evidence")
    p.add_argument("model", choices=MODELS)
    for name in ("mu", "var-d", "mu-d", "var-u"):
        p.add_argument("--" + name, type=float)
    p.add_argument("--var-s", type=float, default=1.0)
    p.add_argument("--eu", type=float, help="trace measurement")
    p.add_argument("--es", type=float, help="control measurement (default: mu_d)")
    for name in ("mu-a", "var-a", "mu-b", "var-b"):
        p.add_argument("--" + name, type=float)
    p.add_argument("--ea", type=float, help="control measurement from suspect A")
    p.add_argument("--eb", type=float, help="control measurement from suspect B")
    p.add_argument("--anchor", choices=("a", "b"), default="a")
    p.add_argument("--seed", type=int, default=0, help="seed for the slr_ss_unc law check")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("plot", help="log10-log10 scatter of two CSV columns")
    p.add_argument("csv")
    p.add_argument("--x", default="lr_ss")
    p.add_argument("--y", default="lr_cs")
    p.add_argument("--out", required=True)
    p.add_argument("--title")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("incoherence", help="search for incoherent anchored SLR pairs")
    p.add_argument("--trials", type=int, default=10**4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_incoherence)

    p = sub.add_parser("projection", help="two-dimensional projection example")
    p.add_argument("--ea", type=float, nargs=2, default=(3.0, 0.0))
    p.add_argument("--eb", type=float, nargs=2, default=(0.5, 3.0))
    p.add_argument("--eu", type=float, nargs=2, help="trace position (default: searched)")
    p.add_argument("--var", type=float, default=0.5)
    p.add_argument("--n-pseudo", type=int, default=1000)
    p.add_argument("--seed", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_projection)
    return parser


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, (DegenerateLawError, DomainError, EstimationError)):
        return EXIT_NUMERIC
    if isinstance(exc, (ConfigurationError, ParameterError)):
        return EXIT_USAGE
    if isinstance(exc, OSError):
        return EXIT_IO
    return EXIT_NUMERIC if isinstance(exc, (FloatingPointError, ArithmeticError)) else EXIT_USAGE


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        code, msg = exc.code, str(exc)
    except (EvidentiaError, OSError, ArithmeticError) as exc:
        code = _exit_code(exc)
        detail = exc.strerror if isinstance(exc, OSError) and exc.strerror else exc
        where = f" {exc.filename}" if isinstance(exc, OSError) and exc.filename else ""
        msg = f"{detail}{where}"
    print(f"evidentia: error[{ERROR_KINDS[code]}]: {_one_line(msg)}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
