# src/screening/regions.py
from __future__ import annotations

import hashlib
import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml
from shapely.geometry import box
from shapely.geometry.base import BaseGeometry
from shapely.ops import unary_union

from src.utils.errors import RegionConfigError

logger = logging.getLogger(__name__)

DEFAULT_REGION_SET_ID = "default-30ghz"


class Semantics(str, Enum):
    HAZARD = "hazard"
    SAFE = "safe"


def _bounds_problems(real_min: float, real_max: float, loss_min: float, loss_max: float) -> List[str]:
    problems = []
    if not all(math.isfinite(v) for v in (real_min, real_max, loss_min, loss_max)):
        problems.append("bounds must be finite")
        return problems
    if real_min < 1.0:
        problems.append(f"real_min must be >= 1 (got {real_min:g})")
    if not real_min < real_max:
        problems.append(f"real_min must be < real_max (got {real_min:g} >= {real_max:g})")
    if loss_min < 0.0:
        problems.append(f"loss_min must be >= 0 (got {loss_min:g})")
    if not loss_min < loss_max:
        problems.append(f"loss_min must be < loss_max (got {loss_min:g} >= {loss_max:g})")
    return problems


@dataclass(frozen=True)
class Region:
    """Closed axis-aligned rectangle on the linear (eps', eps'') plane."""
    name: str
    real_min: float
    real_max: float
    loss_min: float
    loss_max: float
    semantics: Semantics
    surrogates: Tuple[str, ...] = ()
    note: str = ""

    def __post_init__(self):
        problems = _bounds_problems(self.real_min, self.real_max, self.loss_min, self.loss_max)
        if problems:
            raise RegionConfigError(f"region '{self.name}': " + "; ".join(problems))
        object.__setattr__(self, "semantics", Semantics(self.semantics))
        object.__setattr__(self, "surrogates", tuple(self.surrogates))

    @cached_property
    def shape(self):
        return box(self.real_min, self.loss_min, self.real_max, self.loss_max)

    @property
    def is_hazard(self) -> bool:
        return self.semantics is Semantics.HAZARD

    def intersects(self, geom: BaseGeometry) -> bool:
        return self.shape.intersects(geom)

    def covers(self, geom: BaseGeometry) -> bool:
        return self.shape.covers(geom)

    def to_dict(self) -> Dict[str, Any]:
        d: Dict[str, Any] = {
            "name": self.name,
            "semantics": self.semantics.value,
            "real": [self.real_min, self.real_max],
            "loss": [self.loss_min, self.loss_max],
        }
        if self.surrogates:
            d["surrogates"] = list(self.surrogates)
        if self.note:
            d["note"] = self.note
        return d


@dataclass(frozen=True)
class RegionSet:
    regions: Tuple[Region, ...]
    id: str = "custom"
    path: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "regions", tuple(self.regions))
        names = [r.name for r in self.regions]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise RegionConfigError(f"duplicate region names: {dupes}")

    @property
    def hazards(self) -> Tuple[Region, ...]:
        return tuple(r for r in self.regions if r.is_hazard)

    @property
    def safes(self) -> Tuple[Region, ...]:
        return tuple(r for r in self.regions if not r.is_hazard)

    @cached_property
    def safe_union(self) -> Optional[BaseGeometry]:
        if not self.safes:
            return None
        return unary_union([r.shape for r in self.safes])

    def with_region(self, region: Region) -> "RegionSet":
        return RegionSet(self.regions + (region,), id=f"{self.id}+{region.name}")

    def to_dict(self) -> Dict[str, Any]:
        return {"id": self.id, "regions": [r.to_dict() for r in self.regions]}


def default_regions() -> RegionSet:
    """
    The three default screening boxes. Bounds are membership-constrained
    defaults (no published coordinates exist); config/regions.yaml ships the
    same set for re-tuning without a rebuild.
    """
    return RegionSet((
        Region("LowerHazard", 2.2, 3.7, 0.0005, 0.055, Semantics.HAZARD,
               surrogates=("Sugar", "Salt", "Baking Soda"),
               note="practically lossless explosives and their look-alikes"),
        Region("Safe", 1.3, 3.2, 0.06, 0.5, Semantics.SAFE,
               note="moderately lossy benign materials"),
        Region("UpperHazard", 3.8, 60.0, 0.8, 60.0, Semantics.HAZARD,
               surrogates=("dish soap", "body lotion"),
               note="peroxides and similar water-based materials"),
    ), id=DEFAULT_REGION_SET_ID)


# ------------------------------ config file ----------------------------------

@dataclass(frozen=True)
class RegionViolation:
    location: str
    message: str


def _load_yaml(p: Path) -> Tuple[Dict[str, Any], str]:
    try:
        text = p.read_text(encoding="utf-8")
        return (yaml.safe_load(text) or {}), text
    except (OSError, yaml.YAMLError) as e:
        raise RegionConfigError(f"Failed to read YAML at {p}: {e}")


def _pair(raw: Any, key: str) -> Tuple[float, float]:
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise RegionConfigError(f"'{key}' must be a [min, max] pair")
    try:
        return float(raw[0]), float(raw[1])
    except (TypeError, ValueError):
        raise RegionConfigError(f"'{key}' bounds must be numbers (got {raw})")


def _to_region(entry: Dict[str, Any]) -> Region:
    if not isinstance(entry, dict):
        raise RegionConfigError("region entry must be a mapping")
    name = str(entry.get("name") or "").strip()
    if not name:
        raise RegionConfigError("region name is required")
    sem = str(entry.get("semantics") or "").strip().lower()
    if sem not in (s.value for s in Semantics):
        raise RegionConfigError(f"semantics must be 'hazard' or 'safe' (got '{entry.get('semantics')}')")
    real_min, real_max = _pair(entry.get("real"), "real")
    loss_min, loss_max = _pair(entry.get("loss"), "loss")
    return Region(
        name=name,
        real_min=real_min, real_max=real_max,
        loss_min=loss_min, loss_max=loss_max,
        semantics=Semantics(sem),
        surrogates=tuple(str(s) for s in (entry.get("surrogates") or [])),
        note=str(entry.get("note") or ""),
    )


def _entries(doc: Any) -> List[Any]:
    entries = doc.get("regions") if isinstance(doc, dict) else None
    if not isinstance(entries, list) or not entries:
        raise RegionConfigError("'regions' must be a non-empty list")
    return entries


def load_regions(path: Union[str, Path]) -> RegionSet:
    p = Path(path)
    doc, text = _load_yaml(p)
    regions = []
    for i, entry in enumerate(_entries(doc)):
        try:
            regions.append(_to_region(entry))
        except RegionConfigError as e:
            raise RegionConfigError(f"{p}: regions[{i}]: {e}")
    rs = RegionSet(tuple(regions), id=str(doc.get("id") or hashlib.sha256(text.encode()).hexdigest()[:16]), path=str(p))
    if not rs.hazards:
        raise RegionConfigError(f"{p}: at least one hazard region is required for screening")
    logger.info("loaded region set '%s' (%d regions) from %s", rs.id, len(rs.regions), p)
    return rs


def region_violations(path: Union[str, Path]) -> List[RegionViolation]:
    """Every problem in a region file, without stopping at the first."""
    p = Path(path)
    try:
        doc, _ = _load_yaml(p)
        entries = _entries(doc)
    except RegionConfigError as e:
        return [RegionViolation(str(p), str(e))]

    out: List[RegionViolation] = []
    seen: Dict[str, int] = {}
    hazard_count = 0
    for i, entry in enumerate(entries):
        where = f"{p}:regions[{i}]"
        try:
            r = _to_region(entry)
        except RegionConfigError as e:
            out.append(RegionViolation(where, str(e)))
            continue
        if r.name in seen:
            out.append(RegionViolation(where, f"duplicate region name '{r.name}' (first at regions[{seen[r.name]}])"))
        seen.setdefault(r.name, i)
        hazard_count += r.is_hazard
    if not hazard_count:
        out.append(RegionViolation(str(p), "no hazard region defined"))
    return out
