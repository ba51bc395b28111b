import logging
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Tuple, Union

import pandas as pd

from src.materials.records import (
    ComplexPermittivity,
    MaterialDatabase,
    MaterialRecord,
)
from src.utils.errors import (
    DuplicateName,
    EmptyFile,
    MalformedRow,
    MaterialDatabaseError,
    NonPhysicalValue,
)

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["name", "eps_real", "eps_imag", "source", "category"]

# plain decimal or scientific notation, no thousands separators
_NUMBER_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True)
class Violation:
    row: int
    message: str


def _read_frame(path: Path) -> pd.DataFrame:
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise EmptyFile("file is empty (header row required)", path=str(path))
    except UnicodeDecodeError as e:
        raise MalformedRow(f"not valid UTF-8 at byte {e.start}", path=str(path)) from e
    except pd.errors.ParserError as e:
        raise MalformedRow(f"unparseable CSV: {e}", path=str(path)) from e
    missing = [c for c in CSV_COLUMNS if c not in df.columns]
    if missing:
        raise MalformedRow(f"header must be {','.join(CSV_COLUMNS)} (missing {missing})", row=1, path=str(path))
    if df.empty:
        raise EmptyFile("no material rows after the header", path=str(path))
    return df


def _parse_number(text: str, column: str, row: int, path: str) -> float:
    t = (text or "").strip()
    if not _NUMBER_RE.fullmatch(t):
        raise MalformedRow(f"column {column} is not a number: {text!r}", row=row, path=path)
    value = float(t)
    if not math.isfinite(value):
        raise MalformedRow(f"column {column} overflows: {text!r}", row=row, path=path)
    return value


def _parse_row(rec: Dict[str, str], row: int, path: str) -> MaterialRecord:
    real = _parse_number(rec["eps_real"], "eps_real", row, path)
    loss = _parse_number(rec["eps_imag"], "eps_imag", row, path)
    if real < 1.0:
        raise NonPhysicalValue(f"eps_real must be >= 1 (got {real})", row=row, path=path)
    if loss < 0.0:
        raise NonPhysicalValue(f"eps_imag must be >= 0 (got {loss})", row=row, path=path)
    name = (rec["name"] or "").strip()
    if not name:
        raise MalformedRow("name is empty", row=row, path=path)
    category = (rec["category"] or "").strip() or None
    return MaterialRecord(
        name=name,
        permittivity=ComplexPermittivity(real, loss),
        source=(rec["source"] or "").strip(),
        category=category,
    )


def _iter_rows(df: pd.DataFrame) -> Iterator[Tuple[int, Dict[str, str]]]:
    # header is file line 1, first data row is line 2
    for i, rec in enumerate(df[CSV_COLUMNS].to_dict("records")):
        yield i + 2, rec


def load_database(path: Union[str, Path]) -> MaterialDatabase:
    """
    Parse a material CSV (name,eps_real,eps_imag,source,category) into a
    MaterialDatabase. The first bad row aborts the load; errors carry the
    1-based file line and the path.
    """
    path = Path(path)
    df = _read_frame(path)
    records: List[MaterialRecord] = []
    seen: Dict[str, int] = {}
    for row, rec in _iter_rows(df):
        r = _parse_row(rec, row, str(path))
        if r.key in seen:
            raise DuplicateName(f"'{r.name}' duplicates row {seen[r.key]}", row=row, path=str(path))
        seen[r.key] = row
        records.append(r)
    logger.info("loaded %d materials from %s", len(records), path)
    return MaterialDatabase(tuple(records))


def database_violations(path: Union[str, Path]) -> List[Violation]:
    """Like load_database, but keeps going and reports every bad row."""
    path = Path(path)
    try:
        df = _read_frame(path)
    except MaterialDatabaseError as e:
        return [Violation(e.row or 0, f"{type(e).__name__}: {e.detail}")]
    out: List[Violation] = []
    seen: Dict[str, int] = {}
    for row, rec in _iter_rows(df):
        try:
            r = _parse_row(rec, row, str(path))
        except MaterialDatabaseError as e:
            out.append(Violation(row, f"{type(e).__name__}: {e.detail}"))
            continue
        if r.key in seen:
            out.append(Violation(row, f"DuplicateName: '{r.name}' duplicates row {seen[r.key]}"))
            continue
        seen[r.key] = row
    return out


def dump_database(db: MaterialDatabase, path: Union[str, Path]) -> Path:
    path = Path(path)
    rows = [{
        "name": r.name,
        "eps_real": repr(float(r.permittivity.real)),
        "eps_imag": repr(float(r.permittivity.loss)),
        "source": r.source,
        "category": r.category or "",
    } for r in db]
    pd.DataFrame(rows, columns=CSV_COLUMNS).to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
    return path
