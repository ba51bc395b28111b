"""
Threat / Safe / PatDown decisions on the permittivity plane.

Three kinds of evidence reach the classifier:
  - a point, when the characterisation recovered the full complex permittivity;
  - a lossless band, when the back surface is visible and only eps' is known
    (eps'' is then taken to lie in [0.0005, 0.055]);
  - a locus curve, when only the front-surface reflectivity is known.

Precedence is the same for all three: touching any hazard region is a Threat;
lying entirely inside the safe regions is Safe; anything else goes to PatDown.
Regions are closed, so a boundary point is inside.

A Threat is tagged "surrogate" only when the tabulated material nearest the
evidence, among those inside a touched hazard region, is one of that region's
listed benign look-alikes.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, ClassVar, Dict, Optional, Sequence, Tuple, Union

from shapely.geometry import LineString, Point
from shapely.geometry.base import BaseGeometry

from src.inversion.locus import LocusBand, LocusCurve, SolverConfig, solve_locus
from src.materials.builtin import builtin_database
from src.materials.records import ComplexPermittivity, MaterialDatabase, normalize_name
from src.screening.regions import Region, RegionSet, default_regions
from src.utils.errors import DomainError, EmptyCurve, MissingInput, NoSolution

logger = logging.getLogger(__name__)

DEFAULT_LOSSLESS_BAND = (0.0005, 0.055)

RULE_POINT = "point-in-region"
RULE_BAND = "lossless-band"
RULE_LOCUS = "locus-curve"
RULE_LOCUS_BAND = "locus-uncertainty-band"
RULE_UNRESOLVABLE = "unresolvable reflectivity"


class Outcome(str, Enum):
    THREAT = "Threat"
    SAFE = "Safe"
    PATDOWN = "PatDown"


@dataclass(frozen=True)
class Rationale:
    rule: str
    tags: Tuple[str, ...] = ()
    detail: str = ""


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    touched_regions: Tuple[str, ...]
    rationale: Rationale

    def to_dict(self) -> Dict[str, Any]:
        return {
            "outcome": self.outcome.value,
            "touched_regions": list(self.touched_regions),
            "rationale": {
                "rule": self.rationale.rule,
                "tags": list(self.rationale.tags),
                "detail": self.rationale.detail,
            },
        }


# -------------------------------- evidence -----------------------------------

@dataclass(frozen=True)
class PointEvidence:
    permittivity: ComplexPermittivity
    kind: ClassVar[str] = "point"

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "real": self.permittivity.real, "loss": self.permittivity.loss}


@dataclass(frozen=True)
class LosslessBandEvidence:
    real: float
    band: Tuple[float, float] = DEFAULT_LOSSLESS_BAND
    kind: ClassVar[str] = "lossless_band"

    def __post_init__(self):
        _check_band_inputs(self.real, self.band)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "real": self.real, "band": list(self.band)}


@dataclass(frozen=True)
class LocusEvidence:
    curve: LocusCurve
    kind: ClassVar[str] = "locus"

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, **self.curve.to_dict()}


PermittivityEvidence = Union[PointEvidence, LosslessBandEvidence, LocusEvidence]


@dataclass(frozen=True)
class ObservationResult:
    verdict: Verdict
    evidence: Optional[PermittivityEvidence]
    evidence_kind: str


def _check_band_inputs(real: float, band: Sequence[float]):
    if not real >= 1.0:
        raise DomainError(f"eps' must be >= 1 (got {real})")
    lo, hi = band
    if not (0.0 <= lo <= hi):
        raise DomainError(f"loss band must satisfy 0 <= lo <= hi (got [{lo}, {hi}])")


# --------------------------------- rules -------------------------------------

def _surrogate_lookalike(geom: BaseGeometry, hazards: Sequence[Region], db: MaterialDatabase) -> Optional[str]:
    """Surrogate record nearest the evidence inside a touched hazard region, if any."""
    for region in hazards:
        names = {normalize_name(s) for s in region.surrogates}
        if not names:
            continue
        inside = []
        for m in db:
            pt = Point(m.permittivity.real, m.permittivity.loss)
            if region.covers(pt):
                inside.append((geom.distance(pt), m))
        if not inside:
            continue
        nearest = min(d for d, _ in inside)
        # ties resolve towards the surrogate
        for d, m in inside:
            if d <= nearest + 1e-12 and m.key in names:
                return m.name
    return None


def _decide(geom: BaseGeometry, samples: Sequence[BaseGeometry], rs: RegionSet, rule: str, detail: str,
            db: Optional[MaterialDatabase] = None) -> Verdict:
    touched = tuple(r.name for r in rs.regions if r.intersects(geom))
    hazards = [r for r in rs.hazards if r.intersects(geom)]
    if hazards:
        tags: Tuple[str, ...] = ("hazard",)
        lookalike = _surrogate_lookalike(geom, hazards, db if db is not None else builtin_database())
        if lookalike:
            tags += ("surrogate",)
            detail += f"; nearest tabulated material is the benign surrogate {lookalike}, route to secondary check"
        return Verdict(Outcome.THREAT, touched, Rationale(rule, tags, detail))

    union = rs.safe_union
    if union is not None and all(union.covers(s) for s in samples):
        return Verdict(Outcome.SAFE, touched, Rationale(rule, ("safe",), detail))

    tag = "outside" if not touched else "partially-safe"
    return Verdict(Outcome.PATDOWN, touched, Rationale(rule, (tag,), detail))


def classify_point(p: ComplexPermittivity, rs: Optional[RegionSet] = None,
                   db: Optional[MaterialDatabase] = None) -> Verdict:
    rs = rs or default_regions()
    pt = Point(p.real, p.loss)
    return _decide(pt, [pt], rs, RULE_POINT, f"eps = {p}", db)


def classify_lossless_band(real: float, rs: Optional[RegionSet] = None,
                           band: Tuple[float, float] = DEFAULT_LOSSLESS_BAND,
                           db: Optional[MaterialDatabase] = None) -> Verdict:
    """Treat eps' alone as the vertical segment {real} x band."""
    rs = rs or default_regions()
    _check_band_inputs(real, band)
    lo, hi = band
    geom = Point(real, lo) if lo == hi else LineString([(real, lo), (real, hi)])
    return _decide(geom, [geom], rs, RULE_BAND, f"eps' = {real:g}, eps'' in [{lo:g}, {hi:g}]", db)


def _curve_geometry(curve: LocusCurve) -> Tuple[BaseGeometry, Sequence[BaseGeometry]]:
    pts = [Point(p.real, p.loss) for p in curve.points]
    if len(pts) == 1:
        return pts[0], pts
    return LineString([(p.real, p.loss) for p in curve.points]), pts


def classify_locus(curve: LocusCurve, rs: Optional[RegionSet] = None,
                   db: Optional[MaterialDatabase] = None) -> Verdict:
    if not curve.points:
        raise EmptyCurve("locus curve has no points")
    rs = rs or default_regions()
    geom, samples = _curve_geometry(curve)
    detail = f"ratio {curve.target_ratio:.6g}, {len(curve.points)} samples"
    return _decide(geom, samples, rs, RULE_LOCUS, detail, db)


def classify_locus_band(band: LocusBand, rs: Optional[RegionSet] = None,
                        nominal: Optional[LocusCurve] = None,
                        db: Optional[MaterialDatabase] = None) -> Verdict:
    """
    Conservative merge: any Threat side wins, Safe needs every side Safe.
    Sides that could not be solved are listed in the detail; the remaining
    curves (the nominal one included) still decide.
    """
    rs = rs or default_regions()
    curves = [c for c in (band.lower, nominal, band.upper) if c is not None]
    if not curves:
        raise EmptyCurve("uncertainty band has no curves")
    verdicts = [classify_locus(c, rs, db) for c in curves]
    touched = tuple(dict.fromkeys(n for v in verdicts for n in v.touched_regions))
    outcomes = {v.outcome for v in verdicts}
    tags = tuple(dict.fromkeys(t for v in verdicts for t in v.rationale.tags))
    detail = " | ".join(v.rationale.detail for v in verdicts)
    if band.errors:
        detail += " | empty sides: " + ", ".join(side for side, _ in band.errors)
    if Outcome.THREAT in outcomes:
        outcome = Outcome.THREAT
    elif outcomes == {Outcome.SAFE}:
        outcome = Outcome.SAFE
    else:
        outcome = Outcome.PATDOWN
    return Verdict(outcome, touched, Rationale(RULE_LOCUS_BAND, tags, detail))


def classify_evidence(e: PermittivityEvidence, rs: Optional[RegionSet] = None,
                      db: Optional[MaterialDatabase] = None) -> Verdict:
    if isinstance(e, PointEvidence):
        return classify_point(e.permittivity, rs, db)
    if isinstance(e, LosslessBandEvidence):
        return classify_lossless_band(e.real, rs, e.band, db)
    if isinstance(e, LocusEvidence):
        return classify_locus(e.curve, rs, db)
    raise TypeError(f"Unknown evidence type: {type(e).__name__}")


def classify_observation(back_surface_visible: bool,
                         predicted_real: Optional[float] = None,
                         skin_relative_ratio: Optional[float] = None,
                         rs: Optional[RegionSet] = None,
                         solver: Optional[SolverConfig] = None,
                         band: Tuple[float, float] = DEFAULT_LOSSLESS_BAND,
                         db: Optional[MaterialDatabase] = None) -> ObservationResult:
    """
    Back surface visible: the object is practically lossless and only eps' is
    known, so use the lossless band. Otherwise invert the front reflectivity
    into a locus and classify the curve.
    """
    rs = rs or default_regions()
    if back_surface_visible:
        if predicted_real is None:
            raise MissingInput("back surface visible but no predicted eps' supplied")
        ev = LosslessBandEvidence(float(predicted_real), band)
        return ObservationResult(classify_evidence(ev, rs, db), ev, ev.kind)

    if skin_relative_ratio is None:
        raise MissingInput("back surface not visible and no skin-relative ratio supplied")
    try:
        curve = solve_locus(float(skin_relative_ratio), config=solver)
    except NoSolution as e:
        logger.warning("locus inversion failed for ratio %s: %s", skin_relative_ratio, e)
        verdict = Verdict(Outcome.PATDOWN, (), Rationale(RULE_UNRESOLVABLE, ("unresolvable",), str(e)))
        return ObservationResult(verdict, None, LocusEvidence.kind)
    ev = LocusEvidence(curve)
    return ObservationResult(classify_evidence(ev, rs, db), ev, ev.kind)
