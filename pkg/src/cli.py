# src/cli.py
"""
Screening command line.

    python -m src.cli list      [--db CSV] [--category NAME] [--csv OUT]
    python -m src.cli classify  (--point RE,IM | --real RE | --ratio R) [--regions YAML] [--out REPORT]
    python -m src.cli plot      [--db CSV] [--regions YAML] [--locus-report REPORT] [--out SVG]
    python -m src.cli batch     [--db CSV] [--regions YAML] [--thickness-mm MM] [--out CSV]
    python -m src.cli validate  [--db CSV] [--regions YAML]
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
import time
from collections import Counter
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import pandas as pd

from src.inversion.locus import SolverConfig, uncertainty_band
from src.materials import (
    ComplexPermittivity,
    MaterialDatabase,
    builtin_database,
    database_violations,
    dump_database,
    load_database,
    loss_tangent,
)
from src.physics.em_model import SlabScene, slab_response
from src.report.plot import render_permittivity_plane
from src.report.run_report import (
    atomic_write_text,
    build_report,
    read_report,
    report_locus_points,
    write_report,
)
from src.screening.classifier import (
    LocusEvidence,
    LosslessBandEvidence,
    Outcome,
    PointEvidence,
    classify_evidence,
    classify_locus_band,
    classify_observation,
)
from src.screening.regions import RegionSet, default_regions, load_regions, region_violations
from src.utils.config import settings
from src.utils.errors import ScreeningError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_THREAT = 3
EXIT_PATDOWN = 4
OUTCOME_EXIT = {Outcome.SAFE: EXIT_OK, Outcome.THREAT: EXIT_THREAT, Outcome.PATDOWN: EXIT_PATDOWN}

BATCH_COLUMNS = ["name", "eps_real", "eps_imag", "back_visible", "evidence", "verdict", "error"]

EXIT_HELP = """\
exit status:
  0  Safe (classify) / success
  1  validate found violations
  2  usage, input or I/O error
  3  Threat (classify)
  4  PatDown (classify)
"""


# ------------------------------- arg helpers ---------------------------------

def _pair(text: str) -> Tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got '{text}'")
    return a, b


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: '{text}'")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0 (got {text})")
    return v


def _nonnegative(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: '{text}'")
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0 (got {text})")
    return v


def _load_db(args) -> MaterialDatabase:
    return load_database(args.db) if args.db else builtin_database()


def _load_rs(args) -> RegionSet:
    if args.regions:
        return load_regions(args.regions)
    if Path(settings.regions_path).is_file():
        return load_regions(settings.regions_path)
    return default_regions()


def _solver(args) -> SolverConfig:
    cfg = SolverConfig.from_settings(settings)
    if getattr(args, "reference", None):
        cfg = dataclasses.replace(cfg, reference=ComplexPermittivity(*args.reference))
    return cfg


def _band(args) -> Tuple[float, float]:
    return tuple(args.band) if getattr(args, "band", None) else settings.lossless_band


def _ms(t0: float) -> int:
    return int((time.perf_counter() - t0) * 1000)


# -------------------------------- commands -----------------------------------

def _cmd_list(args) -> int:
    db = _load_db(args)
    if args.category:
        db = db.by_category(args.category)
    print(f"{'name':<34} {'eps_real':>9} {'eps_imag':>9} {'tan_d':>10}  source")
    for r in db:
        p = r.permittivity
        print(f"{r.name:<34} {p.real:>9g} {p.loss:>9g} {loss_tangent(p):>10.4g}  {r.source}")
    print(f"\n{len(db)} materials")
    if args.csv:
        dump_database(db, args.csv)
        logger.info("wrote %s", args.csv)
    return EXIT_OK


def _cmd_classify(args) -> int:
    rs = _load_rs(args)
    cfg = _solver(args)
    band = _band(args)
    timings: Dict[str, int] = {}
    t0 = time.perf_counter()

    if args.point:
        ev = PointEvidence(ComplexPermittivity(*args.point))
        evidence_input = {"kind": "point", "real": args.point[0], "loss": args.point[1]}
        verdict = classify_evidence(ev, rs)
    elif args.real is not None:
        ev = LosslessBandEvidence(args.real, band)
        evidence_input = {"kind": "lossless_band", "real": args.real, "band": list(band)}
        verdict = classify_evidence(ev, rs)
    else:
        evidence_input = {"kind": "ratio", "ratio": args.ratio, "ratio_tolerance": args.ratio_tolerance}
        obs = classify_observation(False, skin_relative_ratio=args.ratio, rs=rs, solver=cfg, band=band)
        ev, verdict = obs.evidence, obs.verdict
        if args.ratio_tolerance and isinstance(ev, LocusEvidence):
            lb = uncertainty_band(ev.curve, args.ratio_tolerance, cfg)
            verdict = classify_locus_band(lb, rs, nominal=ev.curve)
    timings["classify_ms"] = _ms(t0)

    print(f"{verdict.outcome.value}: {verdict.rationale.rule}"
          f" [{', '.join(verdict.rationale.tags)}] regions={list(verdict.touched_regions)}")
    print(f"  {verdict.rationale.detail}")

    out = Path(args.out)
    report = build_report(
        command="classify",
        evidence_input=evidence_input,
        region_set={"id": rs.id, "path": rs.path},
        solver=cfg.to_dict() if evidence_input["kind"] == "ratio" else None,
        verdict=verdict.to_dict(),
        evidence=ev.to_dict() if ev is not None else None,
        artifacts=[str(out)],
        timings=timings if args.timings else None,
    )
    write_report(out, report)
    logger.info("report written to %s", out)
    return OUTCOME_EXIT[verdict.outcome]


def _cmd_plot(args) -> int:
    db = _load_db(args)
    rs = _load_rs(args)
    locus = report_locus_points(read_report(args.locus_report)) if args.locus_report else None
    svg = render_permittivity_plane(db, rs, locus=locus, frequency_ghz=db.frequency_ghz)
    atomic_write_text(args.out, svg)
    print(f"wrote {args.out} ({len(db)} materials, {len(rs.regions)} regions"
          f"{', locus overlay' if locus else ''})")
    return EXIT_OK


def _batch_row(r, args, db: MaterialDatabase, rs: RegionSet, cfg: SolverConfig, band) -> Dict[str, str]:
    row = {
        "name": r.name,
        "eps_real": repr(r.permittivity.real),
        "eps_imag": repr(r.permittivity.loss),
        "back_visible": "", "evidence": "", "verdict": "", "error": "",
    }
    try:
        scene = SlabScene(r.permittivity, args.thickness_mm, backing=cfg.reference, frequency_ghz=settings.frequency_ghz)
        echo = slab_response(scene, cfg.reference, settings.visibility_threshold_db)
        obs = classify_observation(
            echo.back_surface_visible,
            predicted_real=r.permittivity.real,
            skin_relative_ratio=echo.skin_relative_ratio,
            rs=rs, solver=cfg, band=band, db=db,
        )
        row.update(back_visible=str(echo.back_surface_visible).lower(),
                   evidence=obs.evidence_kind, verdict=obs.verdict.outcome.value)
    except ScreeningError as e:
        logger.warning("batch row '%s' failed: %s", r.name, e)
        row["error"] = str(e)
    return row


def _cmd_batch(args) -> int:
    db = _load_db(args)
    rs = _load_rs(args)
    cfg = _solver(args)
    band = _band(args)

    rows: List[Dict[str, str]] = [_batch_row(r, args, db, rs, cfg, band) for r in db]
    df = pd.DataFrame(rows, columns=BATCH_COLUMNS)
    atomic_write_text(args.out, df.to_csv(index=False, lineterminator="\n"))

    counts = Counter(row["verdict"] for row in rows if not row["error"])
    errors = sum(1 for row in rows if row["error"])
    print(f"Threat={counts[Outcome.THREAT.value]} Safe={counts[Outcome.SAFE.value]} "
          f"PatDown={counts[Outcome.PATDOWN.value]} errors={errors}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    problems: List[str] = []
    if args.db:
        problems += [f"{args.db}:row {v.row}: {v.message}" for v in database_violations(args.db)]
    else:
        db = builtin_database()
        problems += [f"builtin:{r.name}: negative loss tangent" for r in db if loss_tangent(r.permittivity) < 0]

    regions_path = args.regions or settings.regions_path
    if args.regions or Path(regions_path).is_file():
        problems += [f"{v.location}: {v.message}" for v in region_violations(regions_path)]

    for p in problems:
        print(p)
    if problems:
        print(f"{len(problems)} violation(s)")
        return EXIT_VIOLATIONS
    print("clean")
    return EXIT_OK


# ---------------------------------- parser -----------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        "screening",
        description="Classify body-worn dielectric objects on the 30 GHz complex-permittivity plane.",
        epilog=EXIT_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    ap.add_argument("--log-level", default=None, help="Logging level (default from config)")
    sub = ap.add_subparsers()

    def common(p, db=True, regions=True):
        if db:
            p.add_argument("--db", default=None, help="Material CSV (default: built-in table)")
        if regions:
            p.add_argument("--regions", default=None, help="Region-set YAML (default: config/regions.yaml)")

    ap_list = sub.add_parser("list", help="List materials")
    common(ap_list, regions=False)
    ap_list.add_argument("--category", default=None)
    ap_list.add_argument("--csv", default=None, help="Also write the listed rows as CSV")
    ap_list.set_defaults(func=_cmd_list)

    ap_cls = sub.add_parser("classify", help="Classify one observation", epilog=EXIT_HELP,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
    common(ap_cls, db=False)
    ev = ap_cls.add_mutually_exclusive_group(required=True)
    ev.add_argument("--point", type=_pair, metavar="RE,IM", help="Full complex permittivity (eps', eps'')")
    ev.add_argument("--real", type=float, metavar="RE", help="eps' only (back surface visible)")
    ev.add_argument("--ratio", type=_nonnegative, metavar="R", help="Skin-relative front reflectivity (power)")
    ap_cls.add_argument("--band", type=_pair, metavar="LO,HI", default=None, help="Loss band for --real")
    ap_cls.add_argument("--ratio-tolerance", type=_nonnegative, default=0.0)
    ap_cls.add_argument("--reference", type=_pair, metavar="RE,IM", default=None, help="Reference (skin) permittivity")
    ap_cls.add_argument("--timings", action="store_true", help="Record stage timings in the report")
    ap_cls.add_argument("--out", default="run_report.json", help="RunReport path")
    ap_cls.set_defaults(func=_cmd_classify)

    ap_plot = sub.add_parser("plot", help="Write the permittivity-plane SVG")
    common(ap_plot)
    ap_plot.add_argument("--locus-report", default=None, help="Overlay the locus from a classify report")
    ap_plot.add_argument("--out", default="permittivity_plane.svg")
    ap_plot.set_defaults(func=_cmd_plot)

    ap_batch = sub.add_parser("batch", help="Simulate every material as a slab on skin and classify it")
    common(ap_batch)
    ap_batch.add_argument("--thickness-mm", type=_positive, default=10.0)
    ap_batch.add_argument("--reference", type=_pair, metavar="RE,IM", default=None)
    ap_batch.add_argument("--out", default="batch_verdicts.csv")
    ap_batch.set_defaults(func=_cmd_batch)

    ap_val = sub.add_parser("validate", help="Check a material CSV and a region file")
    common(ap_val)
    ap_val.set_defaults(func=_cmd_validate)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=(args.log_level or settings.log_level).upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    if not hasattr(args, "func"):
        ap.print_help()
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ScreeningError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
