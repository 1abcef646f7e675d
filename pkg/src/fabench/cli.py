"""Command-line interface.

Subcommands: extract, analyze resolution-table, fairness, probe, bound,
sample, bench, and figure {gaps, allocation, tradeoff}. Exit codes: 0 ok,
2 usage, 3 input I/O, 4 data semantics, 5 numeric failure. Commands taking
--seed are byte-reproducible; FAB_SEED in the environment overrides the
default seed, an explicit --seed wins over both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .errors import (
    ConfigError,
    DataError,
    DomainError,
    EmptyInputError,
    FabenchError,
    FormatError,
    NumericError,
    ShapeError,
)
from .scales import FrequencyWarp, resolution_table
from .spectral import load_audio
from .featio import write_fab1, write_feature_csv
from .filterbanks import build_triangular_bank
from .fairness import (
    bootstrap_report,
    gap_reduction,
    load_groups_json,
    load_results_csv,
    point_report,
    report_to_json,
    report_to_text,
)
from .frontends import FRONTEND_NAMES, default_frontend
from .evalkit import (
    INTERVAL_CENTS,
    Manifest,
    discrimination_probe,
    excess_bound_integral,
    bound_integral,
    load_bound_csv,
    overhead_benchmark,
    sample_balanced,
    synth_tone_clip,
    uniform_bound_preset,
)
from .parametric import allocation_fraction, init_gabor_bank
from . import refdata

DEFAULT_PROBES = "80,100,200,250,300,400,500"


def _default_seed() -> int:
    env = os.environ.get("FAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise DataError(f"FAB_SEED must be an integer, got {env!r}") from None
    return 0


def _resolve_seed(args) -> int:
    return args.seed if args.seed is not None else _default_seed()


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_band(spec: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in spec.split(":"))
    except ValueError:
        raise DataError(f"bad band {spec!r}; expected LO:HI in Hz") from None
    if not (0 < lo < hi):
        raise DataError(f"bad band {spec!r}; need 0 < lo < hi")
    return lo, hi


def _parse_frontends(spec: str) -> list[str]:
    names = [n.strip() for n in spec.split(",") if n.strip()]
    for n in names:
        if n not in FRONTEND_NAMES:
            raise ConfigError(f"unknown frontend {n!r}; expected one of {FRONTEND_NAMES}")
    if not names:
        raise ConfigError("no frontends given")
    return names


# ---------------------------------------------------------------------------
# extract

def cmd_extract(args) -> int:
    frontend = default_frontend(args.frontend, args.sample_rate)
    inputs = [Path(p) for p in args.inputs]
    if args.output and len(inputs) > 1:
        raise DataError("-o works with a single input; omit it for batches")
    for path in inputs:
        try:
            audio = load_audio(str(path), args.sample_rate)
        except FileNotFoundError:
            raise FormatError(f"{path}: file not found") from None
        feats = frontend.extract(audio)
        if args.output:
            out = Path(args.output)
        else:
            out = path.with_suffix(".csv" if args.format == "csv" else ".fab")
        if args.format == "csv":
            write_feature_csv(str(out), feats)
        else:
            write_fab1(str(out), feats, frontend.name)
        print(f"{path} -> {out} ({feats.n_frames} frames x {feats.n_channels} channels)")
    return 0


# ---------------------------------------------------------------------------
# analyze resolution-table

def _resolution_csv(rows) -> str:
    lines = ["freq_hz,scale_value,bandwidth_hz,jnd_hz,deficit_ratio"]
    for r in rows:
        lines.append(
            f"{r.freq_hz:.9g},{r.scale_value:.9g},{r.bandwidth_hz:.9g},"
            f"{r.jnd_hz:.9g},{r.deficit_ratio:.9g}"
        )
    return "\n".join(lines) + "\n"


def cmd_resolution_table(args) -> int:
    warp = FrequencyWarp.from_name(args.warp)
    probes = [float(x) for x in args.probes.split(",") if x.strip()]
    rows = resolution_table(warp, args.filters, args.fmin, args.fmax, probes)
    header = f"{'freq (Hz)':>10} {'scale':>9} {'bandwidth (Hz)':>15} {'JND (Hz)':>9} {'deficit':>8}"
    print(header)
    print("-" * len(header))
    for r in rows:
        print(
            f"{r.freq_hz:>10.1f} {r.scale_value:>9.1f} {r.bandwidth_hz:>15.1f} "
            f"{r.jnd_hz:>9.1f} {r.deficit_ratio:>7.1f}x"
        )
    print(
        f"\nbandwidth = local center spacing of a {args.filters}-filter bank over "
        f"{args.fmin:g}-{args.fmax:g} Hz\n(edges equally spaced on the {args.warp} "
        f"scale, {args.filters + 1} intervals); JND = 1% of frequency"
    )
    if args.csv:
        _emit(_resolution_csv(rows), args.csv)
        print(f"csv written to {args.csv}")
    return 0


# ---------------------------------------------------------------------------
# fairness

def cmd_fairness(args) -> int:
    groups_spec = load_groups_json(args.groups)
    groups = load_results_csv(args.results, groups_spec)
    report = bootstrap_report(groups, n_boot=args.n_boot, seed=_resolve_seed(args))
    sys.stdout.write(report_to_text(report))
    if args.output:
        _emit(report_to_json(report) + "\n", args.output)
        print(f"json written to {args.output}")
    return 0


# ---------------------------------------------------------------------------
# probe

def cmd_probe(args) -> int:
    names = _parse_frontends(args.frontends)
    band = _parse_band(args.band)
    try:
        cents = INTERVAL_CENTS.get(args.interval, None)
        cents = float(args.interval) if cents is None else cents
    except ValueError:
        raise DataError(
            f"bad interval {args.interval!r}; give cents or one of {sorted(INTERVAL_CENTS)}"
        ) from None
    seed = _resolve_seed(args)
    lines = ["frontend,interval_cents,accuracy,n_trials,seed"]
    for name in names:
        config = default_frontend(name, args.sample_rate)
        result = discrimination_probe(config, cents, band, args.trials, seed)
        lines.append(
            f"{result.frontend},{result.interval_cents:.9g},"
            f"{result.accuracy:.9g},{result.n_trials},{result.seed}"
        )
    _emit("\n".join(lines) + "\n", args.output)
    return 0


# ---------------------------------------------------------------------------
# bound

def cmd_bound(args) -> int:
    band = _parse_band(args.band)
    if args.spec:
        spec = load_bound_csv(args.spec)
    else:
        # shipped preset: default mel bank resolution, uniform density on the band
        warp = FrequencyWarp.mel()

        def res_fn(f):
            return resolution_table(warp, 40, 0.0, 8000.0, [f])[0].bandwidth_hz

        spec = uniform_bound_preset(res_fn, band)
    lines = [
        "quantity,value",
        f"indicator_bound,{bound_integral(spec):.9g}",
        f"excess_bound,{excess_bound_integral(spec, c=args.c, band=band):.9g}",
    ]
    _emit("\n".join(lines) + "\n", args.output)
    return 0


# ---------------------------------------------------------------------------
# sample

def cmd_sample(args) -> int:
    manifest = Manifest.load(args.manifest)
    sampled = sample_balanced(
        manifest, args.quota, _resolve_seed(args), stratify_key=args.stratify
    )
    if args.output:
        sampled.save(args.output)
        print(f"{len(sampled.entries)} entries written to {args.output}")
    else:
        sys.stdout.write(json.dumps(sampled.to_json_dict(), indent=2, sort_keys=True) + "\n")
    return 0


# ---------------------------------------------------------------------------
# bench

def cmd_bench(args) -> int:
    names = _parse_frontends(args.frontends)
    audio = synth_tone_clip(
        [220.0], 3, 20.0, args.duration, seed=0, sample_rate=args.sample_rate
    )
    ratios = overhead_benchmark(
        [default_frontend(n, args.sample_rate) for n in names], audio, args.passes
    )
    ordered = names if "mel" in names else ["mel"] + names
    lines = ["frontend,relative_cost"]
    lines.extend(f"{name},{ratios[name]:.2f}" for name in ordered)
    _emit("\n".join(lines) + "\n", args.output)
    return 0


# ---------------------------------------------------------------------------
# figure emitters

def _domain_reports(frontend: str):
    return {
        domain: point_report(refdata.reference_groups(domain, frontend))
        for domain in refdata.reference_domains(frontend)
    }


def cmd_figure_gaps(args) -> int:
    lines = ["domain,frontend,wgs,gap,rho,gap_reduction_pct"]
    base = {d: point_report(refdata.reference_groups(d, "mel")) for d in refdata.DOMAINS}
    for domain in refdata.DOMAINS:
        for name in FRONTEND_NAMES:
            if domain not in refdata.reference_domains(name):
                continue
            rep = point_report(refdata.reference_groups(domain, name))
            red = gap_reduction(base[domain], rep)
            lines.append(
                f"{domain},{name},{rep.wgs:.9g},{rep.gap:.9g},{rep.rho:.9g},{red:.9g}"
            )
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_figure_allocation(args) -> int:
    band = (80.0, 500.0)
    lines = ["source,band_lo_hz,band_hi_hz,n_in_band,n_filters,fraction"]
    for label, fmax in (("mel_40_0_8000", 8000.0), ("mel_40_0_4000", 4000.0)):
        bank = build_triangular_bank(FrequencyWarp.mel(), 40, 0.0, fmax, 257, 16000.0)
        stat = allocation_fraction(bank.centers, *band)
        lines.append(
            f"{label},{band[0]:.9g},{band[1]:.9g},{stat.n_in_band},40,{stat.fraction:.9g}"
        )
    gabor = init_gabor_bank()
    stat = allocation_fraction(gabor.center_freqs_hz, *band)
    lines.append(
        f"gabor_init,{band[0]:.9g},{band[1]:.9g},{stat.n_in_band},"
        f"{gabor.n_filters},{stat.fraction:.9g}"
    )
    # adapted learnable front-end allocation from the bundled reference results
    lines.append(f"leaf_adapted_reference,{band[0]:.9g},{band[1]:.9g},27,64,0.42")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_figure_tradeoff(args) -> int:
    lines = ["frontend,overhead_pct,speech_gap_reduction_pct,music_gap_reduction_pct,scenes_gap_reduction_pct"]
    base = {d: point_report(refdata.reference_groups(d, "mel")) for d in refdata.DOMAINS}
    for name in FRONTEND_NAMES:
        cells = []
        for domain in refdata.DOMAINS:
            if domain in refdata.reference_domains(name):
                rep = point_report(refdata.reference_groups(domain, name))
                cells.append(f"{gap_reduction(base[domain], rep):.9g}")
            else:
                cells.append("")
        lines.append(f"{name},{refdata.OVERHEAD_PERCENT[name]:.9g}," + ",".join(cells))
    _emit("\n".join(lines) + "\n", args.output)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fabench",
        description="Audio front-end analysis and fairness bench",
    )
    parser.add_argument("--version", action="version", version=f"fabench {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract features from WAV files")
    p.add_argument("inputs", nargs="+", help="input WAV files")
    p.add_argument("--frontend", required=True, choices=FRONTEND_NAMES)
    p.add_argument("-o", "--output", help="output path (single input only)")
    p.add_argument("--format", choices=("fab1", "csv"), default="fab1")
    p.add_argument("--sample-rate", type=float, default=16000.0)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("analyze", help="numeric analyses")
    asub = p.add_subparsers(dest="analysis", required=True)
    rt = asub.add_parser("resolution-table", help="filterbank resolution vs JND")
    rt.add_argument("--warp", choices=("mel", "erb", "bark", "log2"), default="mel")
    rt.add_argument("--filters", type=int, default=40)
    rt.add_argument("--fmin", type=float, default=0.0)
    rt.add_argument("--fmax", type=float, default=8000.0)
    rt.add_argument("--probes", default=DEFAULT_PROBES, help="comma-separated Hz")
    rt.add_argument("--csv", help="also write the table as CSV to this path")
    rt.set_defaults(func=cmd_resolution_table)

    p = sub.add_parser("fairness", help="fairness report from scored results")
    p.add_argument("--results", required=True, help="CSV: sample_id,group_id,task,score")
    p.add_argument("--groups", required=True, help="JSON: group_id -> {label, task}")
    p.add_argument("--n-boot", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", help="write the JSON report here")
    p.set_defaults(func=cmd_fairness)

    p = sub.add_parser("probe", help="synthetic ABX tone-discrimination probe")
    p.add_argument("--frontends", required=True, help="comma-separated names")
    p.add_argument("--interval", default="50", help="cents, or shruti/quarter_tone/semitone/octave")
    p.add_argument("--band", default="200:500", help="base-frequency band LO:HI Hz")
    p.add_argument("--trials", type=int, default=240)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--sample-rate", type=float, default=16000.0)
    p.add_argument("-o", "--output", help="output CSV path (default stdout)")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("bound", help="information-loss lower bound")
    p.add_argument("--spec", help="BoundSpec CSV (f_hz,info,density,min_res,res)")
    p.add_argument("--band", default="200:500")
    p.add_argument("--c", type=float, default=1.0, help="excess-bound constant")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sample", help="balanced manifest sampling")
    p.add_argument("--manifest", required=True)
    p.add_argument("--quota", type=int, required=True, help="entries per label")
    p.add_argument("--stratify", help="extra-field key to stratify within labels")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", help="output manifest JSON (default stdout)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("bench", help="front-end overhead benchmark")
    p.add_argument("--frontends", required=True)
    p.add_argument("--passes", type=int, default=1000)
    p.add_argument("--duration", type=float, default=1.0, help="clip length in s")
    p.add_argument("--sample-rate", type=float, default=16000.0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("figure", help="plot-ready CSVs")
    fsub = p.add_subparsers(dest="figure", required=True)
    g = fsub.add_parser("gaps", help="per-domain fairness gaps")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_figure_gaps)
    g = fsub.add_parser("allocation", help="filter allocation to 80-500 Hz")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_figure_allocation)
    g = fsub.add_parser("tradeoff", help="gap reduction vs overhead")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_figure_tradeoff)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, EmptyInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DataError, DomainError, ShapeError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except FabenchError as exc:  # safety net for future error classes
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
