"""Coupling-plane sweeps classifying each cell by the full spectrum.

Each grid cell evaluates the spectrum at the chosen phase's pole fixed
point (the classification authority) together with the analytic
zero-eigenvalue indicator B and the frequency-window roots, so analytic
and numeric pictures can be compared per cell. Cells are independent;
the scan may fan out across threads with results written to pre-assigned
slots, making the output identical for any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .model import ModelParams, Phase, trivial_fixed_point, validate_params
from .stability import MARGINAL_TOL, assess, boundary_value, omega_pm


class ScanError(RuntimeError):
    """A cell evaluation failed; the message carries the cell coordinates."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform inclusive-endpoint grid over the (lambda1, lambda2) plane."""

    l1_min: float = 0.0
    l1_max: float = 1.5
    l1_count: int = 61
    l2_min: float = 0.0
    l2_max: float = 1.5
    l2_count: int = 61


@dataclass(frozen=True)
class ScanCell:
    lambda1: float
    lambda2: float
    superradiant: bool
    max_growth_rate: float
    boundary_b: float
    omega_plus: float | None
    omega_minus: float | None


@dataclass(frozen=True)
class ScanResult:
    """Row-major cell list (lambda1 outer, lambda2 inner) plus boundary data."""

    phase: Phase
    grid: GridSpec
    params: ModelParams
    cells: list[ScanCell]
    boundary_curve: np.ndarray


def validate_grid(grid: GridSpec) -> GridSpec:
    for axis in ("l1", "l2"):
        lo = getattr(grid, f"{axis}_min")
        hi = getattr(grid, f"{axis}_max")
        count = getattr(grid, f"{axis}_count")
        if count < 2:
            raise ValueError(f"{axis}_count must be at least 2 (got {count})")
        if not (hi > lo >= 0):
            raise ValueError(f"{axis} window must satisfy max > min >= 0 (got [{lo}, {hi}])")
    return grid


def grid_values(grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.linspace(grid.l1_min, grid.l1_max, grid.l1_count),
        np.linspace(grid.l2_min, grid.l2_max, grid.l2_count),
    )


def _eval_cell(phase: Phase, l1: float, l2: float, p: ModelParams) -> ScanCell:
    q = replace(p, lambda1=float(l1), lambda2=float(l2))
    report = assess(trivial_fixed_point(phase, q), q)
    roots = omega_pm(phase, l1, l2, p)
    return ScanCell(
        lambda1=float(l1),
        lambda2=float(l2),
        superradiant=report.max_growth_rate > MARGINAL_TOL,
        max_growth_rate=report.max_growth_rate,
        boundary_b=boundary_value(phase, l1, l2, p),
        omega_plus=roots.omega_plus,
        omega_minus=roots.omega_minus,
    )


def scan(
    phase: Phase, grid: GridSpec, p: ModelParams, workers: int | None = None
) -> ScanResult:
    """Classify every grid cell; deterministic for any worker count.

    workers=None or 0 picks a worker count automatically; 1 runs serially.
    """
    validate_params(p)
    validate_grid(grid)
    l1s, l2s = grid_values(grid)
    if not workers:
        workers = min(os.cpu_count() or 1, 8)

    def eval_row(i: int) -> list[ScanCell]:
        row = []
        for j, l2 in enumerate(l2s):
            try:
                row.append(_eval_cell(phase, l1s[i], l2, p))
            except Exception as exc:
                raise ScanError(
                    f"cell ({i}, {j}) at lambda1={l1s[i]!r}, lambda2={l2!r} failed: {exc}"
                ) from exc
        return row

    if workers == 1:
        rows = [eval_row(i) for i in range(grid.l1_count)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(eval_row, range(grid.l1_count)))
    cells = [cell for row in rows for cell in row]
    curve = analytic_boundary_curve(
        phase, p, samples=201, l1_max=grid.l1_max, l2_max=grid.l2_max
    )
    return ScanResult(phase=phase, grid=grid, params=p, cells=cells, boundary_curve=curve)


def analytic_boundary_curve(
    phase: Phase,
    p: ModelParams,
    samples: int = 101,
    l1_max: float | None = None,
    l2_max: float | None = None,
) -> np.ndarray:
    """Polyline of B = 0 points, shape (k, 2), empty when no boundary exists.

    The locus solves s1*l1^2/w1 + s2*l2^2/w2 = -(kappa^2+omega_c^2)/(4*omega_c)
    exactly for one coupling as a function of the other: an elliptic arc for
    the normal phase (swept edge to edge by default) and a hyperbolic branch
    for the mixed phases (swept up to the window cap, default 1.5). The
    inverted phase has no real locus at positive cavity frequency.
    """
    validate_params(p)
    if samples < 2:
        raise ValueError("samples must be at least 2")
    beta = (p.kappa**2 + p.omega_c**2) / (4.0 * p.omega_c)
    if l1_max is None:
        l1_max = 1.5
    if l2_max is None:
        l2_max = 1.5

    def sqrt_clipped(r: np.ndarray) -> np.ndarray:
        # Endpoint roundoff can push the radicand a few ulps negative.
        return np.sqrt(np.maximum(r, 0.0))

    if phase is Phase.INVERTED:
        return np.empty((0, 2))
    if phase is Phase.NORMAL:
        arc_l2 = np.sqrt(p.omega2 * beta)
        l2 = np.linspace(0.0, arc_l2, samples)
        l1 = sqrt_clipped(p.omega1 * (beta - l2**2 / p.omega2))
    elif phase is Phase.MIXED1:
        l2 = np.linspace(0.0, l2_max, samples)
        l1 = sqrt_clipped(p.omega1 * (beta + l2**2 / p.omega2))
    else:  # MIXED2
        l1 = np.linspace(0.0, l1_max, samples)
        l2 = sqrt_clipped(p.omega2 * (beta + l1**2 / p.omega1))
    points = np.column_stack([l1, l2])
    keep = (points[:, 0] <= l1_max) & (points[:, 1] <= l2_max)
    return points[keep]
