"""
Value types for the 30 GHz material permittivity database.

Permittivity follows the eps = eps' - j eps'' convention, with eps'' kept as a
nonnegative loss magnitude. The -j is applied only in src.physics.em_model.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, Optional, Tuple

from src.utils.errors import DomainError, DuplicateName, MalformedRow, NonPhysicalValue

logger = logging.getLogger(__name__)

DATABASE_FREQUENCY_GHZ = 30.0

_ASCII_FOLD = str.maketrans("ABCDEFGHIJKLMNOPQRSTUVWXYZ", "abcdefghijklmnopqrstuvwxyz")


def normalize_name(name: str) -> str:
    """Whitespace-trimmed, ASCII case-folded lookup key."""
    return (name or "").strip().translate(_ASCII_FOLD)


@dataclass(frozen=True)
class ComplexPermittivity:
    real: float
    loss: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.real) and math.isfinite(self.loss)):
            raise NonPhysicalValue(f"permittivity components must be finite (got {self.real}, {self.loss})")
        if self.loss < 0.0:
            raise NonPhysicalValue(f"loss must be >= 0 for a passive medium (got {self.loss})")

    @property
    def is_bulk(self) -> bool:
        # vacuum lower bound on eps'
        return self.real >= 1.0

    def as_complex(self) -> complex:
        return complex(self.real, -self.loss)

    def __str__(self) -> str:
        return f"{self.real:g} - j {self.loss:g}"


def loss_tangent(p: ComplexPermittivity) -> float:
    if p.real <= 0.0:
        raise DomainError(f"loss tangent undefined for eps' <= 0 (got {p.real})")
    return p.loss / p.real


@dataclass(frozen=True)
class MaterialRecord:
    name: str
    permittivity: ComplexPermittivity
    source: str = ""
    category: Optional[str] = None

    def __post_init__(self):
        if not (self.name or "").strip():
            raise MalformedRow("material name must not be empty")
        if not self.permittivity.is_bulk:
            raise NonPhysicalValue(f"{self.name}: eps' must be >= 1 (got {self.permittivity.real})")
        object.__setattr__(self, "name", self.name.strip())
        if self.category is not None and not self.category.strip():
            object.__setattr__(self, "category", None)

    @property
    def key(self) -> str:
        return normalize_name(self.name)


@dataclass(frozen=True)
class MaterialDatabase:
    records: Tuple[MaterialRecord, ...]
    frequency_ghz: float = DATABASE_FREQUENCY_GHZ
    _index: Dict[str, MaterialRecord] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        index: Dict[str, MaterialRecord] = {}
        for r in self.records:
            if r.key in index:
                raise DuplicateName(f"duplicate material name '{r.name}' (clashes with '{index[r.key].name}')")
            index[r.key] = r
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[MaterialRecord]:
        return iter(self.records)

    def find(self, name: str) -> Optional[MaterialRecord]:
        return self._index.get(normalize_name(name))

    def by_category(self, category: str) -> "MaterialDatabase":
        want = normalize_name(category)
        picked = tuple(r for r in self.records if r.category and normalize_name(r.category) == want)
        logger.debug("category %r selected %d of %d records", category, len(picked), len(self.records))
        return MaterialDatabase(picked, frequency_ghz=self.frequency_ghz)


def find_material(db: MaterialDatabase, name: str) -> Optional[MaterialRecord]:
    return db.find(name)
