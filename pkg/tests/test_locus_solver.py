"""
Locus inversion against a brute-force scan, plus the residual, round-trip and
band properties.
"""
import math

import numpy as np
import pytest

from src.inversion.locus import (
    FALLING_BRANCH,
    NO_ROOT,
    LocusCurve,
    SolverConfig,
    default_loss_grid,
    reflectivity_minimum_real,
    solve_locus,
    uncertainty_band,
)
from src.materials import ComplexPermittivity
from src.physics.em_model import DRY_SKIN, halfspace_reflectivity, reflectivity, skin_relative_ratio
from src.utils.errors import DomainError, InvalidGrid, NoSolution

SKIN = halfspace_reflectivity(DRY_SKIN)
COARSE_GRID = (0.0, 0.01, 0.1, 1.0, 10.0)
CELL = 0.01


def _by_loss(curve):
    return {p.loss: p.real for p in curve.points}


# ---------------------------------------------------------------------------
# Grid
# ---------------------------------------------------------------------------

def test_default_grid():
    g = default_loss_grid()
    assert g[0] == 1e-4
    assert g[-1] == 100.0
    assert len(g) == 201
    assert all(b > a for a, b in zip(g, g[1:]))
    # spans every tabulated loss
    assert g[0] < 5e-4 and g[-1] > 30.0


@pytest.mark.parametrize("grid", [(), (0.1, 0.1), (1.0, 0.5), (-0.1, 0.2), (0.1, float("nan"))])
def test_invalid_grid(grid):
    with pytest.raises(InvalidGrid):
        solve_locus(0.5, grid)


def test_invalid_inputs():
    with pytest.raises(DomainError):
        solve_locus(-0.1, (0.0,))
    with pytest.raises(DomainError):
        solve_locus(0.5, (0.0,), reference=ComplexPermittivity(1.0))


# ---------------------------------------------------------------------------
# Worked examples
# ---------------------------------------------------------------------------

def test_closed_form_lossless_point():
    curve = solve_locus((1.0 / 9.0) / SKIN, (0.0,))
    assert len(curve) == 1
    assert curve.points[0].real == pytest.approx(4.0, abs=1e-9)
    assert curve.points[0].loss == 0.0


def test_zero_ratio_gives_vacuum_point():
    curve = solve_locus(0.0, (0.0,))
    assert curve.points == (ComplexPermittivity(1.0, 0.0),)


def test_zero_ratio_has_no_lossy_solution():
    with pytest.raises(NoSolution) as e:
        solve_locus(0.0)
    assert e.value.diagnostics
    assert all(d.reason == NO_ROOT for d in e.value.diagnostics)


def test_skin_ratio_passes_through_skin():
    curve = solve_locus(1.0, (1.0, 16.0, 30.0))
    assert _by_loss(curve)[16.0] == pytest.approx(20.0, abs=1e-6)


def test_ratio_above_supremum_is_unsolvable():
    cfg = SolverConfig(real_max=50.0)
    with pytest.raises(NoSolution):
        solve_locus(2.0, (0.0, 1.0), config=cfg)


def test_skin_ratio_truncates_at_high_loss():
    # the slice minimum rises with loss past the skin return
    curve = solve_locus(1.0)
    omitted = [d.loss for d in curve.diagnostics if d.reason == NO_ROOT]
    assert 0 < len(curve) < len(curve.loss_grid)
    assert len(curve) + len(omitted) == len(curve.loss_grid)
    assert min(omitted) > max(p.loss for p in curve.points)


# ---------------------------------------------------------------------------
# Properties
# ---------------------------------------------------------------------------

def test_reflectivity_minimum_location():
    for loss in (0.0, 0.3, 1.0, 7.0, 30.0):
        x0 = reflectivity_minimum_real(loss)
        left = np.linspace(max(1.0, x0 - 5.0), x0, 200)
        right = np.linspace(x0, x0 + 50.0, 200)
        if x0 > 1.0:
            assert np.all(np.diff(reflectivity(left, loss)) < 0)
        assert np.all(np.diff(reflectivity(right, loss)) > 0)


def test_rising_branch_monotone_on_random_slices():
    rng = np.random.default_rng(11)
    for loss in 10.0 ** rng.uniform(-4, 2, 50):
        x = np.linspace(reflectivity_minimum_real(loss), 1e3, 5000)
        assert np.all(np.diff(reflectivity(x, loss)) > 0)


def test_brute_force_oracle():
    rng = np.random.default_rng(1234)
    ratios = rng.uniform(0.0, 1.5, 50)
    ratios[ratios == 0.0] = 1e-3
    for ratio in ratios:
        curve = solve_locus(float(ratio), COARSE_GRID)
        solved = _by_loss(curve)
        target = ratio * SKIN
        for loss in COARSE_GRID:
            xs = np.arange(max(1.0, reflectivity_minimum_real(loss)), 100.0 + CELL, CELL)
            vals = reflectivity(xs, loss)
            if vals[0] > target + 1e-9:
                assert loss not in solved
                continue
            if vals[-1] < target:
                continue
            hit = xs[np.argmax(vals >= target)]
            assert abs(solved[loss] - hit) <= CELL + 1e-9, (ratio, loss)


def test_residual_bound():
    for ratio in (0.05, 0.3, 0.8, 1.0, 1.4):
        curve = solve_locus(ratio)
        for p in curve.points:
            assert p.real >= 1.0
            assert abs(halfspace_reflectivity(p) - ratio * SKIN) <= 1e-9 * SKIN


def test_points_ordered_by_loss():
    curve = solve_locus(0.6)
    losses = [p.loss for p in curve.points]
    assert all(b > a for a, b in zip(losses, losses[1:]))


def test_forward_inverse_every_material(db):
    for rec in db:
        p = rec.permittivity
        ratio = skin_relative_ratio(halfspace_reflectivity(p))
        curve = solve_locus(ratio, (p.loss,))
        assert len(curve) == 1, rec.name
        assert curve.points[0].real == pytest.approx(p.real, abs=1e-6), rec.name


def test_falling_branch_root_is_reported_not_returned():
    loss = 10.0
    x0 = reflectivity_minimum_real(loss)
    # a target between the slice minimum and the value at eps'=1
    target = 0.5 * (float(reflectivity(x0, loss)) + float(reflectivity(1.0, loss)))
    curve = solve_locus(target / SKIN, (loss,))
    assert curve.points[0].real > x0
    falling = [d for d in curve.diagnostics if d.reason == FALLING_BRANCH]
    assert len(falling) == 1


# ---------------------------------------------------------------------------
# Uncertainty band
# ---------------------------------------------------------------------------

def test_zero_width_band():
    curve = solve_locus(0.5, (0.0, 1.0))
    band = uncertainty_band(curve, 0.0)
    assert band.lower is curve and band.upper is curve
    assert band.errors == ()


def test_band_brackets_nominal():
    curve = solve_locus((1.0 / 9.0) / SKIN, (0.0,))
    band = uncertainty_band(curve, 0.1)
    assert band.lower.points[0].real < 4.0 < band.upper.points[0].real


def test_band_brackets_pointwise():
    curve = solve_locus(0.4, (0.0, 0.5, 2.0))
    band = uncertainty_band(curve, 0.05)
    lo, mid, hi = _by_loss(band.lower), _by_loss(curve), _by_loss(band.upper)
    for loss in mid:
        assert lo[loss] < mid[loss] < hi[loss]


def test_band_side_reported_when_empty():
    cfg = SolverConfig(real_max=50.0)
    top = float(reflectivity(50.0, 0.0)) / SKIN
    curve = solve_locus(top * 0.99, (0.0,), config=cfg)
    band = uncertainty_band(curve, 0.5, cfg)
    assert band.upper is None
    assert band.lower is not None
    assert [side for side, _ in band.errors] == ["upper"]


def test_band_rejects_negative_tolerance():
    curve = solve_locus(0.5, (0.0,))
    with pytest.raises(DomainError):
        uncertainty_band(curve, -0.1)


def test_curve_serialisation():
    curve = solve_locus(1.0, (16.0,))
    d = curve.to_dict()
    assert d["target_ratio"] == 1.0
    assert d["reference"] == {"real": 20.0, "loss": 16.0}
    assert d["points"][0][1] == 16.0
    assert d["omitted"] == 0
    assert isinstance(curve, LocusCurve)
    assert math.isfinite(d["points"][0][0])


def test_band_with_both_sides_empty_is_returned():
    curve = solve_locus(1.0)
    band = uncertainty_band(curve, 1.5)
    assert band.lower is None and band.upper is None
    assert [side for side, _ in band.errors] == ["lower", "upper"]
