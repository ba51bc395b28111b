"""
Inversion of a skin-relative front-surface reflectivity into the locus of
complex permittivities that reproduce it.

For a fixed eps'' the half-space reflectivity |Gamma(eps' - j eps'')|^2 falls
until eps'* = (2 + sqrt(1 + 3 eps''^2)) / 3 and rises from there on. Roots are
taken on the rising branch [max(real_min, eps'*), real_max], where they are
unique; a second root on the falling branch is reported in diagnostics only.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect

from src.materials.records import ComplexPermittivity
from src.physics.em_model import DRY_SKIN, halfspace_reflectivity, reflectivity
from src.utils.errors import DomainError, InvalidGrid, NoSolution

logger = logging.getLogger(__name__)

NO_ROOT = "no-root"
FALLING_BRANCH = "falling-branch root"


def default_loss_grid(start: float = 1.0e-4, stop: float = 100.0, steps: int = 200) -> Tuple[float, ...]:
    """Log-spaced eps'' samples, `steps` intervals, endpoints exact."""
    grid = np.logspace(math.log10(start), math.log10(stop), steps + 1)
    grid[0], grid[-1] = start, stop
    return tuple(float(x) for x in np.unique(grid))


def reflectivity_minimum_real(loss: float) -> float:
    """eps' at which |Gamma|^2 is smallest along a fixed-eps'' slice."""
    return (2.0 + math.sqrt(1.0 + 3.0 * loss * loss)) / 3.0


@dataclass(frozen=True)
class SolverConfig:
    reference: ComplexPermittivity = DRY_SKIN
    loss_grid: Tuple[float, ...] = field(default_factory=default_loss_grid)
    real_min: float = 1.0
    real_max: float = 1.0e4
    rel_tolerance: float = 1.0e-9
    max_iter: int = 200

    @classmethod
    def from_settings(cls, s) -> "SolverConfig":
        return cls(
            reference=ComplexPermittivity(s.reference_real, s.reference_loss),
            loss_grid=default_loss_grid(s.grid_start, s.grid_stop, s.grid_steps),
            real_min=s.solver_real_min,
            real_max=s.solver_real_max,
            rel_tolerance=s.solver_rel_tolerance,
            max_iter=s.solver_max_iter,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "reference": {"real": self.reference.real, "loss": self.reference.loss},
            "loss_grid": {"start": self.loss_grid[0], "stop": self.loss_grid[-1], "samples": len(self.loss_grid)},
            "real_min": self.real_min,
            "real_max": self.real_max,
            "rel_tolerance": self.rel_tolerance,
            "max_iter": self.max_iter,
        }


@dataclass(frozen=True)
class LocusDiagnostic:
    loss: float
    reason: str
    detail: str


@dataclass(frozen=True)
class LocusCurve:
    target_ratio: float
    points: Tuple[ComplexPermittivity, ...]
    loss_grid: Tuple[float, ...]
    reference: ComplexPermittivity = DRY_SKIN
    diagnostics: Tuple[LocusDiagnostic, ...] = ()

    def __len__(self) -> int:
        return len(self.points)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target_ratio": self.target_ratio,
            "reference": {"real": self.reference.real, "loss": self.reference.loss},
            "points": [[p.real, p.loss] for p in self.points],
            "omitted": len([d for d in self.diagnostics if d.reason == NO_ROOT]),
        }


@dataclass(frozen=True)
class LocusBand:
    lower: Optional[LocusCurve]
    upper: Optional[LocusCurve]
    errors: Tuple[Tuple[str, str], ...] = ()


def _check_grid(loss_grid: Sequence[float]) -> Tuple[float, ...]:
    grid = tuple(float(x) for x in loss_grid)
    if not grid:
        raise InvalidGrid("loss grid is empty")
    if not all(math.isfinite(x) and x >= 0.0 for x in grid):
        raise InvalidGrid("loss grid values must be finite and >= 0")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidGrid("loss grid must be strictly increasing")
    return grid


def _root(h, lo: float, hi: float, cfg: SolverConfig) -> float:
    x, info = bisect(h, lo, hi, xtol=1e-14, maxiter=cfg.max_iter, full_output=True, disp=False)
    if not info.converged:
        logger.warning("bisection on [%g, %g] stopped after %d iterations", lo, hi, info.iterations)
    return float(x)


def _solve_slice(loss: float, target_power: float, tol: float, cfg: SolverConfig):
    """Return (eps' or None, diagnostics) for one eps'' sample."""
    def h(x):
        return float(reflectivity(x, loss)) - target_power

    diags: List[LocusDiagnostic] = []
    lo = max(cfg.real_min, reflectivity_minimum_real(loss))
    hi = cfg.real_max
    if lo > hi:
        diags.append(LocusDiagnostic(loss, NO_ROOT, f"reflectivity minimum at eps'={lo:.6g} lies beyond real_max"))
        return None, diags
    h_lo, h_hi = h(lo), h(hi)

    if h_lo > tol:
        diags.append(LocusDiagnostic(loss, NO_ROOT, f"target below the reflectivity minimum {h_lo + target_power:.6g}"))
        return None, diags
    if h_hi < -tol:
        diags.append(LocusDiagnostic(loss, NO_ROOT, f"target above the reflectivity at eps'={hi:g}"))
        return None, diags

    if abs(h_lo) <= tol:
        x = lo
    elif abs(h_hi) <= tol:
        x = hi
    else:
        x = _root(h, lo, hi, cfg)

    # falling branch: h decreases on [real_min, lo)
    if lo > cfg.real_min and h_lo < 0.0 and h(cfg.real_min) >= 0.0:
        h_min = h(cfg.real_min)
        alt = cfg.real_min if h_min <= tol else _root(h, cfg.real_min, lo, cfg)
        diags.append(LocusDiagnostic(loss, FALLING_BRANCH, f"eps'={alt:.9g} also matches; kept eps'={x:.9g}"))
    return x, diags


def solve_locus(target_ratio: float,
                loss_grid: Optional[Sequence[float]] = None,
                reference: Optional[ComplexPermittivity] = None,
                config: Optional[SolverConfig] = None) -> LocusCurve:
    cfg = config or SolverConfig()
    reference = reference or cfg.reference
    grid = _check_grid(cfg.loss_grid if loss_grid is None else loss_grid)

    if not (math.isfinite(target_ratio) and target_ratio >= 0.0):
        raise DomainError(f"target ratio must be finite and >= 0 (got {target_ratio})")
    ref_power = halfspace_reflectivity(reference)
    if ref_power == 0.0:
        raise DomainError(f"reference {reference} does not reflect; cannot invert against it")

    target_power = target_ratio * ref_power
    tol = cfg.rel_tolerance * ref_power

    points: List[ComplexPermittivity] = []
    diagnostics: List[LocusDiagnostic] = []
    for loss in grid:
        x, diags = _solve_slice(loss, target_power, tol, cfg)
        diagnostics.extend(diags)
        if x is not None:
            points.append(ComplexPermittivity(x, loss))

    skipped = sum(1 for d in diagnostics if d.reason == NO_ROOT)
    if skipped:
        logger.warning("locus for ratio %.6g: %d of %d grid values have no root", target_ratio, skipped, len(grid))
    if not points:
        raise NoSolution(f"no permittivity with eps' in [{cfg.real_min:g}, {cfg.real_max:g}] "
                         f"reproduces skin-relative ratio {target_ratio:.6g}", diagnostics)
    logger.debug("locus for ratio %.6g: %d points", target_ratio, len(points))
    return LocusCurve(
        target_ratio=float(target_ratio),
        points=tuple(points),
        loss_grid=grid,
        reference=reference,
        diagnostics=tuple(diagnostics),
    )


def uncertainty_band(curve: LocusCurve, ratio_tolerance: float,
                     config: Optional[SolverConfig] = None) -> LocusBand:
    """
    Loci at target*(1 - tol) and target*(1 + tol) on the curve's own grid.
    A side with no solution is None and listed in `errors`; both may be None.
    """
    if not (math.isfinite(ratio_tolerance) and ratio_tolerance >= 0.0):
        raise DomainError(f"ratio tolerance must be finite and >= 0 (got {ratio_tolerance})")
    if ratio_tolerance == 0.0:
        return LocusBand(lower=curve, upper=curve)

    sides: Dict[str, Optional[LocusCurve]] = {}
    errors: List[Tuple[str, str]] = []
    targets = (
        ("lower", max(0.0, curve.target_ratio * (1.0 - ratio_tolerance))),
        ("upper", curve.target_ratio * (1.0 + ratio_tolerance)),
    )
    for side, target in targets:
        try:
            sides[side] = solve_locus(target, curve.loss_grid, curve.reference, config)
        except NoSolution as e:
            sides[side] = None
            errors.append((side, str(e)))
    if sides["lower"] is None and sides["upper"] is None:
        logger.warning("both sides of the ±%g band around ratio %.6g are empty", ratio_tolerance, curve.target_ratio)
    return LocusBand(lower=sides["lower"], upper=sides["upper"], errors=tuple(errors))
