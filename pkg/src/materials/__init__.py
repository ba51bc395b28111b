from src.materials.builtin import builtin_database
from src.materials.loaders import Violation, database_violations, dump_database, load_database
from src.materials.records import (
    ComplexPermittivity,
    MaterialDatabase,
    MaterialRecord,
    find_material,
    loss_tangent,
    normalize_name,
)

__all__ = [
    "ComplexPermittivity",
    "MaterialDatabase",
    "MaterialRecord",
    "Violation",
    "builtin_database",
    "database_violations",
    "dump_database",
    "find_material",
    "load_database",
    "loss_tangent",
    "normalize_name",
]
