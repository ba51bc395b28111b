import os
from pathlib import Path

import yaml
from dotenv import load_dotenv

# Load variables from .env into environment
load_dotenv(override=True)

REPO_ROOT = Path(__file__).resolve().parents[2]
DEFAULT_CONFIG = REPO_ROOT / "config" / "app.yaml"


class Settings:
    def __init__(self, path=None):
        path = Path(path or os.getenv("SCREENING_CONFIG") or DEFAULT_CONFIG)
        cfg = {}
        if path.is_file():
            with open(path, "r", encoding="utf-8") as f:
                cfg = yaml.safe_load(f) or {}
        self.config_path = path

        self.frequency_ghz = float(cfg.get("frequency_ghz", 30.0))
        ref = cfg.get("reference_permittivity", {}) or {}
        self.reference_real = float(ref.get("real", 20.0))
        self.reference_loss = float(ref.get("loss", 16.0))
        self.visibility_threshold_db = float(cfg.get("visibility_threshold_db", 15.0))
        band = cfg.get("lossless_band") or [0.0005, 0.055]
        self.lossless_band = (float(band[0]), float(band[1]))

        # relative paths in the YAML are resolved against the repo root
        regions_path = Path(cfg.get("regions_path", "config/regions.yaml"))
        self.regions_path = regions_path if regions_path.is_absolute() else REPO_ROOT / regions_path

        solver = cfg.get("solver", {}) or {}
        grid = solver.get("grid", {}) or {}
        self.solver_real_min = float(solver.get("real_min", 1.0))
        self.solver_real_max = float(solver.get("real_max", 1.0e4))
        self.solver_rel_tolerance = float(solver.get("rel_tolerance", 1.0e-9))
        self.solver_max_iter = int(solver.get("max_iter", 200))
        self.grid_start = float(grid.get("start", 1.0e-4))
        self.grid_stop = float(grid.get("stop", 100.0))
        self.grid_steps = int(grid.get("steps", 200))

        self.log_level = os.getenv("SCREENING_LOG_LEVEL") or cfg.get("log_level", "INFO")


settings = Settings()
