"""
RunReport envelope written by `classify`.

Schema (field order is fixed so identical runs give identical bytes):

{
  "version": "1.0",
  "command": "classify",
  "inputs": {
    "evidence": {"kind": "point|lossless_band|ratio", ...},
    "region_set": {"id": "...", "path": "..." | null},
    "solver": {...}
  },
  "verdict": {"outcome": "Threat|Safe|PatDown", "touched_regions": [...],
              "rationale": {"rule": "...", "tags": [...], "detail": "..."}},
  "evidence": {...} | null,          // resolved evidence, locus points included
  "artifacts": ["run_report.json"],
  "timings": {"<stage>_ms": int}     // empty unless timings were requested
}
"""
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from src.utils.errors import ReportError

REPORT_VERSION = "1.0"


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """Write via a sibling temp file so a failed write leaves nothing behind."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def build_report(command: str,
                 evidence_input: Dict[str, Any],
                 region_set: Dict[str, Any],
                 solver: Optional[Dict[str, Any]],
                 verdict: Dict[str, Any],
                 evidence: Optional[Dict[str, Any]] = None,
                 artifacts: Sequence[str] = (),
                 timings: Optional[Dict[str, int]] = None) -> Dict[str, Any]:
    return {
        "version": REPORT_VERSION,
        "command": command,
        "inputs": {
            "evidence": evidence_input,
            "region_set": region_set,
            "solver": solver,
        },
        "verdict": verdict,
        "evidence": evidence,
        "artifacts": list(artifacts),
        "timings": dict(timings or {}),
    }


def write_report(path: Union[str, Path], report: Dict[str, Any]) -> Path:
    return atomic_write_text(path, json.dumps(report, indent=2, ensure_ascii=False) + "\n")


def read_report(path: Union[str, Path]) -> Dict[str, Any]:
    try:
        report = json.loads(Path(path).read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ReportError(f"{path}: not a readable report ({e})") from e
    if not isinstance(report, dict):
        raise ReportError(f"{path}: report must be a JSON object")
    return report


def report_locus_points(report: Dict[str, Any]) -> List[Tuple[float, float]]:
    """(eps', eps'') samples of the locus stored in a report, if any."""
    ev = report.get("evidence") or {}
    if ev.get("kind") != "locus":
        return []
    return [(float(x), float(y)) for x, y in ev.get("points", [])]
