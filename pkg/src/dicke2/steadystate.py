"""Steady states: superradiant branches, critical couplings, partial superradiance.

Setting the RHS to zero forces Jiy = 0 and a2 = kappa*a1/omega_c, which
leaves three equations in three unknowns once each spin is written in
shell-respecting polar form Jix = (n_i/2) sin(theta_i),
Jiz = -(n_i/2) cos(theta_i). The Newton solver below works in those
coordinates, so the spin-norm constraints hold by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, Phase, SystemState, eom_rhs, validate_params

NEWTON_MAX_ITER = 100
NEWTON_TOL = 1e-12
NEWTON_FD_STEP = 1e-7
_MAX_HALVINGS = 40
_DEGENERATE_A1 = 1e-8


class NewtonError(RuntimeError):
    """Newton iteration failed; carries the last iterate (a1, theta1, theta2)."""

    def __init__(self, message: str, last_iterate: np.ndarray):
        super().__init__(message)
        self.last_iterate = np.asarray(last_iterate, dtype=float)


@dataclass(frozen=True)
class FixedPointSolution:
    state: SystemState
    branch: str
    residual_norm: float
    newton_iterations: int


@dataclass(frozen=True)
class CriticalCoupling:
    """Magnitude of a critical coupling plus the sign bookkeeping of its branch.

    value is always the non-negative magnitude. The dynamics is invariant
    under flipping both couplings together with the cavity quadratures, so
    couplings are stored as magnitudes; sign labels which reflection of that
    symmetry the branch convention assigns to this phase/species slot.
    """

    value: float
    sign: int


def steady_residual(s, p: ModelParams) -> np.ndarray:
    """The steady-state equations are exactly the vanishing of the RHS."""
    return eom_rhs(s, p)


def _polar_state(u: np.ndarray, p: ModelParams) -> SystemState:
    a1, th1, th2 = u
    a2 = p.kappa * a1 / p.omega_c
    j1 = (p.n1 / 2.0 * np.sin(th1), 0.0, -p.n1 / 2.0 * np.cos(th1))
    j2 = (p.n2 / 2.0 * np.sin(th2), 0.0, -p.n2 / 2.0 * np.cos(th2))
    return SystemState(a1, a2, j1, j2)


def _reduced_residual(u: np.ndarray, p: ModelParams) -> np.ndarray:
    """Cavity imaginary part and the two spin-x steady-state equations."""
    a1, th1, th2 = u
    c1 = 2.0 * p.lambda1 / np.sqrt(p.n1)
    c2 = 2.0 * p.lambda2 / np.sqrt(p.n2)
    f_cav = (
        (p.kappa**2 + p.omega_c**2) / p.omega_c * a1
        + c1 * p.n1 / 2.0 * np.sin(th1)
        + c2 * p.n2 / 2.0 * np.sin(th2)
    )
    f1 = p.n1 / 2.0 * (p.omega1 * np.sin(th1) + 2.0 * c1 * a1 * np.cos(th1))
    f2 = p.n2 / 2.0 * (p.omega2 * np.sin(th2) + 2.0 * c2 * a1 * np.cos(th2))
    return np.array([f_cav, f1, f2])


def _fd_jacobian(u: np.ndarray, p: ModelParams, h: float) -> np.ndarray:
    jac = np.empty((3, 3))
    for k in range(3):
        up, um = u.copy(), u.copy()
        up[k] += h
        um[k] -= h
        jac[:, k] = (_reduced_residual(up, p) - _reduced_residual(um, p)) / (2.0 * h)
    return jac


def solve_superradiant(
    p: ModelParams,
    init: tuple[float, float, float] = (0.5, 0.5, 0.1),
    max_iter: int = NEWTON_MAX_ITER,
    tol: float = NEWTON_TOL,
) -> FixedPointSolution:
    """Damped Newton solve for a fixed point in polar spin coordinates.

    init is (theta1, theta2, a1_seed). Which branch is found depends on the
    seed; branches are not enumerated here. Solutions that land on a1 = 0
    are degenerate pole states and are reported with a "trivial" label.
    """
    validate_params(p)
    if p.lambda1 == 0 and p.lambda2 == 0:
        raise ValueError("at least one coupling must be nonzero")
    th1, th2, a1 = init
    u = np.array([a1, th1, th2], dtype=float)
    r = _reduced_residual(u, p)
    rnorm = np.max(np.abs(r))
    iterations = 0
    while rnorm >= tol:
        if iterations >= max_iter:
            raise NewtonError(
                f"no convergence after {max_iter} iterations (residual {rnorm:.3e})", u
            )
        jac = _fd_jacobian(u, p, NEWTON_FD_STEP)
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError as exc:
            raise NewtonError(f"singular Newton matrix: {exc}", u) from exc
        # Damp by halving until the residual norm stops increasing.
        scale = 1.0
        for _ in range(_MAX_HALVINGS):
            u_new = u + scale * step
            r_new = _reduced_residual(u_new, p)
            if np.max(np.abs(r_new)) <= rnorm:
                break
            scale *= 0.5
        else:
            raise NewtonError(f"damping stalled at residual {rnorm:.3e}", u)
        u, r = u_new, r_new
        rnorm = np.max(np.abs(r))
        iterations += 1
    state = _polar_state(u, p)
    full_res = float(np.max(np.abs(eom_rhs(state, p))))
    if full_res >= 1e-10:
        raise NewtonError(f"converged iterate fails the full residual bound ({full_res:.3e})", u)
    return FixedPointSolution(
        state=state,
        branch=_branch_label(state),
        residual_norm=full_res,
        newton_iterations=iterations,
    )


def _branch_label(state: SystemState) -> str:
    if abs(state.a1) < _DEGENERATE_A1:
        s1 = -1 if state.j1[2] < 0 else 1
        s2 = -1 if state.j2[2] < 0 else 1
        phase = Phase((s1, s2))
        return f"trivial:{phase.name.lower()}"
    tag = lambda x: "+" if x >= 0 else "-"
    return f"superradiant a1{tag(state.a1)} j1z{tag(state.j1[2])} j2z{tag(state.j2[2])}"


_PRINTED_SIGNS = {
    (Phase.NORMAL, 1): 1,
    (Phase.NORMAL, 2): 1,
    (Phase.INVERTED, 1): -1,
    (Phase.INVERTED, 2): -1,
    (Phase.MIXED1, 1): 1,
    (Phase.MIXED1, 2): -1,
    (Phase.MIXED2, 1): -1,
    (Phase.MIXED2, 2): 1,
}


def critical_lambda(
    phase: Phase, species: int, other_lambda: float, p: ModelParams
) -> CriticalCoupling | None:
    """Critical coupling of one species along the zero-eigenvalue boundary.

    Solves B = 0 (see stability.boundary_value) for the chosen species'
    coupling with the other held at other_lambda. None means no boundary
    exists along that axis (negative radicand) -- absence is a value, not
    an error. The returned value is always the magnitude; see
    CriticalCoupling for what the sign annotation records.
    """
    validate_params(p)
    if species not in (1, 2):
        raise ValueError("species must be 1 or 2")
    if other_lambda < 0:
        raise ValueError("coupling must be non-negative")
    s1, s2 = phase.signs
    if species == 1:
        si, so, wi, wo = s1, s2, p.omega1, p.omega2
    else:
        si, so, wi, wo = s2, s1, p.omega2, p.omega1
    beta = (p.kappa**2 + p.omega_c**2) / (4.0 * p.omega_c)
    radicand = -si * wi * beta - si * so * other_lambda**2 * wi / wo
    # On the knife edge the two terms cancel to a few ulps of either sign;
    # treat those as the radicand hitting zero rather than as absence.
    scale = wi * beta + other_lambda**2 * wi / wo
    if radicand < -1e-12 * scale:
        return None
    radicand = max(radicand, 0.0)
    return CriticalCoupling(float(np.sqrt(radicand)), _PRINTED_SIGNS[(phase, species)])


def partial_superradiant_jz(p: ModelParams, species: int = 2) -> float | None:
    """Jz of the superradiant species when the other is pinned at its south pole.

    Returns -n*omega*(kappa^2+omega_c^2) / (8*lambda^2*omega_c) for the
    chosen species, or None when that value leaves the spin shell (the
    partial-superradiant branch does not exist below threshold).
    """
    validate_params(p)
    if species not in (1, 2):
        raise ValueError("species must be 1 or 2")
    lam = p.lambda2 if species == 2 else p.lambda1
    omega = p.omega2 if species == 2 else p.omega1
    n = p.n2 if species == 2 else p.n1
    if lam <= 0:
        raise ValueError("the superradiant species must have a positive coupling")
    jz = -n * omega * (p.kappa**2 + p.omega_c**2) / (8.0 * lam**2 * p.omega_c)
    if abs(jz) > n / 2.0:
        return None
    return float(jz)


def critical_lambda1_given_j2z(p: ModelParams, j2z: float) -> float | None:
    """Species-1 critical coupling generalized to an arbitrary species-2 Jz.

    Evaluates sqrt(omega1*(kappa^2+omega_c^2)/(4*omega_c)
    + 2*lambda2^2*omega1*j2z/(n2*omega2)); None when the radicand is
    negative. At j2z = -n2/2 this reduces to the normal-phase critical
    coupling, and at the partial-superradiant j2z the radicand cancels to
    zero: the species-1 threshold vanishes once species 2 is superradiant.
    """
    validate_params(p)
    base = p.omega1 * (p.kappa**2 + p.omega_c**2) / (4.0 * p.omega_c)
    cross = 2.0 * p.lambda2**2 * p.omega1 * j2z / (p.n2 * p.omega2)
    radicand = base + cross
    if radicand < -1e-12 * (base + abs(cross)):
        return None
    return float(np.sqrt(max(radicand, 0.0)))
