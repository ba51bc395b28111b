from fastapi import FastAPI, Body, HTTPException
from pydantic import BaseModel, model_validator
from pathlib import Path
from typing import Optional, Tuple

from src.inversion.locus import SolverConfig, uncertainty_band
from src.materials import ComplexPermittivity, builtin_database, loss_tangent
from src.screening.classifier import (
    LocusEvidence,
    classify_locus_band,
    classify_observation,
    classify_lossless_band,
    classify_point,
)
from src.screening.regions import default_regions, load_regions
from src.utils.config import settings
from src.utils.errors import ScreeningError

app = FastAPI(title="Permittivity Screening API", version="0.1.0")


class ClassifyRequest(BaseModel):
    point: Optional[Tuple[float, float]] = None   # (eps', eps'')
    real: Optional[float] = None                  # eps' only, back surface visible
    ratio: Optional[float] = None                 # skin-relative front reflectivity
    band: Optional[Tuple[float, float]] = None
    ratio_tolerance: float = 0.0

    @model_validator(mode="after")
    def _one_evidence(self):
        given = [k for k in ("point", "real", "ratio") if getattr(self, k) is not None]
        if len(given) != 1:
            raise ValueError(f"exactly one of point, real, ratio is required (got {given or 'none'})")
        return self


def _regions():
    if Path(settings.regions_path).is_file():
        return load_regions(settings.regions_path)
    return default_regions()


@app.get("/healthz")
def healthz():
    return {"status": "ok"}


@app.get("/v1/materials")
def list_materials(category: Optional[str] = None):
    db = builtin_database()
    if category:
        db = db.by_category(category)
    return {
        "materials": [
            {
                "name": r.name,
                "eps_real": r.permittivity.real,
                "eps_imag": r.permittivity.loss,
                "loss_tangent": loss_tangent(r.permittivity),
                "source": r.source,
                "category": r.category,
            }
            for r in db
        ]
    }


@app.post("/v1/classify")
def classify(req: ClassifyRequest = Body(...)):
    rs = _regions()
    band = req.band or settings.lossless_band
    try:
        if req.point is not None:
            verdict = classify_point(ComplexPermittivity(*req.point), rs)
        elif req.real is not None:
            verdict = classify_lossless_band(req.real, rs, band)
        else:
            cfg = SolverConfig.from_settings(settings)
            obs = classify_observation(False, skin_relative_ratio=req.ratio, rs=rs, solver=cfg, band=band)
            verdict = obs.verdict
            if req.ratio_tolerance and isinstance(obs.evidence, LocusEvidence):
                lb = uncertainty_band(obs.evidence.curve, req.ratio_tolerance, cfg)
                verdict = classify_locus_band(lb, rs, nominal=obs.evidence.curve)
    except ScreeningError as e:
        raise HTTPException(status_code=422, detail=str(e))
    return verdict.to_dict()
