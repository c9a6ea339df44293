"""Steady-motion residuals for momentum fields, and an equilibrium finder.

A candidate momentum field assigns reduced momenta ``gamma_bar`` to each
configuration.  A constant (configuration-independent) assignment solves
the steady equations exactly when the residual system below vanishes; the
residual components are indexed in the package-wide flat order.

Symmetric model, ``g = (g1..g5) = (Pi1, Pi2, Pi3, alpha, l)`` values::

    r1 = ((i2 - i3) g2 g3 - i2 g2 g5) / (i2 i3)            + u1
    r2 = ((i3 - i1) g3 g1 + i1 g1 g5) / (i3 i1)            + u2
    r3 = ((i1 - i2) g1 g2) / (i1 i2)                       + u3
    r4 = -(g3 - g5)/i3 + g5/j3                             + u4
    r5 =                                                     u5

Restoring-torque model, ``g = (g1..g8) = (Pi, Gamma, alpha, l)`` values::

    r1 = ((i2 - i3) g2 g3 - i2 g2 g8) / (i2 i3) + mgh (g5 x3 - g6 x2) + u1
    r2 = ((i3 - i1) g3 g1 + i1 g1 g8) / (i3 i1) + mgh (g6 x1 - g4 x3) + u2
    r3 = ((i1 - i2) g1 g2) / (i1 i2)            + mgh (g4 x2 - g5 x1) + u3
    r4 = (i2 g5 (g3 - g8) - i3 g6 g2) / (i2 i3)                       + u4
    r5 = (i3 g6 g1 - i1 g4 (g3 - g8)) / (i3 i1)                       + u5
    r6 = (i1 g4 g2 - i2 g5 g1) / (i1 i2)                              + u6
    r7 = -(g3 - g8)/i3 + g8/j3                                        + u7
    r8 =                                                                u8

with ``x = chi``.  The lift-free parts coincide with the equations of
motion evaluated at the same values, which the test suite asserts through
an independent route; the rotor-angle value (g4 for the symmetric model,
g7 for the restoring one) never appears because the angle is cyclic.  The
rotor-momentum lines constrain only the corresponding lift component.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .algebra import ConfigurationPoint
from .dynamics import ControlLaw, controlled_rhs
from .model import (
    GravityParams,
    InertiaParams,
    ModelKind,
    Se3RotorState,
    So3RotorState,
    se3_state_from_vector,
    se3_state_to_vector,
    so3_state_from_vector,
    so3_state_to_vector,
)
from .poisson import fd_steps

__all__ = [
    "hj_residual_so3",
    "hj_residual_se3",
    "solve_lift",
    "GammaBarField",
    "constant_field",
    "FieldReport",
    "residual_field_report",
    "EquilibriumError",
    "NewtonConvergenceError",
    "SingularJacobianError",
    "EquilibriumResult",
    "find_equilibrium",
]

NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 100
NEWTON_MAX_HALVINGS = 30


def _as_values(g, n: int, what: str) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.shape != (n,):
        raise ValueError(f"{what} must have shape ({n},), got {g.shape}")
    return g


def hj_residual_so3(
    gamma_bar, params: InertiaParams, lift=None
) -> np.ndarray:
    """Residual of the symmetric model's steady equations at fixed values.

    Parameters
    ----------
    gamma_bar : array_like, shape (5,)
        Candidate momentum values in (Pi1, Pi2, Pi3, alpha, l) order.
    lift : array_like, shape (5,), optional
        Lift components (u1..u5); omitted means zero.
    """
    g = _as_values(gamma_bar, 5, "gamma_bar")
    u = np.zeros(5) if lift is None else _as_values(lift, 5, "lift")
    i1, i2, i3 = (float(v) for v in params.i_bar)
    j3 = params.j3
    g1, g2, g3, _g4, g5 = g.tolist()
    return np.array(
        [
            ((i2 - i3) * g2 * g3 - i2 * g2 * g5) / (i2 * i3) + u[0],
            ((i3 - i1) * g3 * g1 + i1 * g1 * g5) / (i3 * i1) + u[1],
            ((i1 - i2) * g1 * g2) / (i1 * i2) + u[2],
            -(g3 - g5) / i3 + g5 / j3 + u[3],
            u[4],
        ]
    )


def hj_residual_se3(
    gamma_bar, params: InertiaParams, grav: GravityParams, lift=None
) -> np.ndarray:
    """Residual of the restoring-torque model's steady equations.

    Parameters
    ----------
    gamma_bar : array_like, shape (8,)
        Candidate values in (Pi, Gamma, alpha, l) order.
    lift : array_like, shape (8,), optional
        Lift components (u1..u8); omitted means zero.
    """
    g = _as_values(gamma_bar, 8, "gamma_bar")
    u = np.zeros(8) if lift is None else _as_values(lift, 8, "lift")
    i1, i2, i3 = (float(v) for v in params.i_bar)
    j3 = params.j3
    mgh = grav.mgh
    x1, x2, x3 = (float(v) for v in grav.chi)
    g1, g2, g3, g4, g5, g6, _g7, g8 = g.tolist()
    return np.array(
        [
            ((i2 - i3) * g2 * g3 - i2 * g2 * g8) / (i2 * i3)
            + mgh * (g5 * x3 - g6 * x2)
            + u[0],
            ((i3 - i1) * g3 * g1 + i1 * g1 * g8) / (i3 * i1)
            + mgh * (g6 * x1 - g4 * x3)
            + u[1],
            ((i1 - i2) * g1 * g2) / (i1 * i2) + mgh * (g4 * x2 - g5 * x1) + u[2],
            (i2 * g5 * (g3 - g8) - i3 * g6 * g2) / (i2 * i3) + u[3],
            (i3 * g6 * g1 - i1 * g4 * (g3 - g8)) / (i3 * i1) + u[4],
            (i1 * g4 * g2 - i2 * g5 * g1) / (i1 * i2) + u[5],
            -(g3 - g8) / i3 + g8 / j3 + u[6],
            u[7],
        ]
    )


def solve_lift(
    gamma_bar, params: InertiaParams, grav: Optional[GravityParams] = None
) -> np.ndarray:
    """The unique lift making the residual vanish at the given values.

    Every residual line is affine in its own lift component with unit
    coefficient, so the solution is the negated lift-free residual and
    resubstitution cancels exactly.

    Raises
    ------
    ValueError
        If `gamma_bar` has length 8 but no gravity parameters are given.
    """
    g = np.asarray(gamma_bar, dtype=float)
    if g.shape == (5,):
        return -hj_residual_so3(g, params)
    if g.shape == (8,):
        if grav is None:
            raise ValueError("gravity parameters required for 8-component values")
        return -hj_residual_se3(g, params, grav)
    raise ValueError(f"gamma_bar must have shape (5,) or (8,), got {g.shape}")


@dataclass
class GammaBarField:
    """Momentum values as a function of configuration."""

    kind: ModelKind
    fn: Callable[[ConfigurationPoint], np.ndarray]


def constant_field(kind: ModelKind, values) -> GammaBarField:
    """A field returning the same values at every configuration."""
    n = 5 if kind == ModelKind.SO3 else 8
    frozen = _as_values(values, n, "values")
    return GammaBarField(kind=kind, fn=lambda _config: frozen.copy())


@dataclass
class FieldReport:
    """Residual max-norms of a momentum field over sampled configurations."""

    per_config: list
    residuals: list
    max_norm: float


def residual_field_report(
    field: GammaBarField,
    configs: Sequence[ConfigurationPoint],
    params: InertiaParams,
    grav: Optional[GravityParams] = None,
    lift: Union[str, np.ndarray, Sequence[float]] = "zero",
) -> FieldReport:
    """Evaluate steady-equation residuals of a field over configurations.

    Parameters
    ----------
    lift : "zero", "solve", or array_like
        ``"zero"`` checks the uncontrolled equations, ``"solve"`` applies
        the per-configuration exact lift (useful as a probe of the solve
        path, since it must annihilate the residual), and an explicit
        array applies one fixed lift everywhere.
    """
    if not configs:
        raise ValueError("at least one configuration is required")
    n = 5 if field.kind == ModelKind.SO3 else 8
    if field.kind == ModelKind.SE3 and grav is None:
        raise ValueError("gravity parameters required for an se3 field")

    fixed_lift = None
    if not isinstance(lift, str):
        fixed_lift = _as_values(lift, n, "lift")
    elif lift not in ("zero", "solve"):
        raise ValueError(f"lift must be 'zero', 'solve', or an array, got {lift!r}")

    residuals = []
    norms = []
    for config in configs:
        g = _as_values(field.fn(config), n, "field values")
        if fixed_lift is not None:
            u = fixed_lift
        elif lift == "solve":
            u = solve_lift(g, params, grav)
        else:
            u = None
        if field.kind == ModelKind.SO3:
            r = hj_residual_so3(g, params, u)
        else:
            r = hj_residual_se3(g, params, grav, u)
        residuals.append(r)
        norms.append(float(np.max(np.abs(r))))
    return FieldReport(
        per_config=norms, residuals=residuals, max_norm=max(norms)
    )


class EquilibriumError(RuntimeError):
    """Base class for equilibrium-search failures."""


class NewtonConvergenceError(EquilibriumError):
    """The iteration ran out of budget or the damped step stalled."""

    def __init__(self, message, residual_norm=None, iterations=None):
        super().__init__(message)
        self.residual_norm = residual_norm
        self.iterations = iterations


class SingularJacobianError(EquilibriumError):
    """The Newton system has no well-posed solution at the current point."""


@dataclass(frozen=True)
class EquilibriumResult:
    """Converged equilibrium with its residual norm and iteration count."""

    state: Union[So3RotorState, Se3RotorState]
    residual_norm: float
    iterations: int


def _fd_jacobian(rhs, y: np.ndarray) -> np.ndarray:
    steps = fd_steps(y)
    n = len(y)
    jac = np.empty((n, n))
    for j in range(n):
        h = steps[j]
        yp = y.copy()
        yp[j] += h
        ym = y.copy()
        ym[j] -= h
        jac[:, j] = (rhs(yp) - rhs(ym)) / (2.0 * h)
    return jac


def _newton_direction(jac: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Solve ``jac @ delta = -f`` with structurally null slots removed.

    A cyclic variable contributes an exactly zero column (it moves
    nothing) and a locally constant equation an exactly zero row (nothing
    moves it); both arise from exact finite differencing of expressions
    that never mention the slot.  Such slots are struck from the linear
    system and their delta is zero.  Any remaining rank deficiency is a
    genuine failure and is reported rather than regularized away, since a
    least-squares continuation could march toward spurious roots.
    """
    row_live = np.any(jac != 0.0, axis=1)
    col_live = np.any(jac != 0.0, axis=0)
    if int(row_live.sum()) != int(col_live.sum()):
        raise SingularJacobianError(
            "Jacobian has unequal counts of structurally zero rows and columns; "
            "the Newton system is not square after reduction"
        )
    delta = np.zeros_like(f)
    if not row_live.any():
        return delta
    sub = jac[np.ix_(row_live, col_live)]
    try:
        delta_live = np.linalg.solve(sub, -f[row_live])
    except np.linalg.LinAlgError as err:
        raise SingularJacobianError(f"singular Newton Jacobian: {err}") from err
    delta[col_live] = delta_live
    return delta


def find_equilibrium(
    kind: ModelKind,
    params: InertiaParams,
    guess,
    *,
    grav: Optional[GravityParams] = None,
    control: Optional[ControlLaw] = None,
    tol: float = NEWTON_TOL,
    max_iter: int = NEWTON_MAX_ITER,
) -> EquilibriumResult:
    """Find a zero of the controlled equations by damped Newton iteration.

    The Jacobian is finite-differenced with the package-wide step rule;
    each step is halved (up to ``NEWTON_MAX_HALVINGS`` times) until the
    residual 2-norm decreases.  Convergence means residual max-norm below
    `tol`.  A guess that already satisfies the tolerance returns after
    zero iterations.

    Raises
    ------
    NewtonConvergenceError
        If `max_iter` is exhausted or no damped step makes progress; the
        exception carries the last residual norm and iteration count.
    SingularJacobianError
        If the reduced Newton system is singular.
    """
    if kind == ModelKind.SO3:
        to_vec, from_vec = so3_state_to_vector, so3_state_from_vector
        if not isinstance(guess, So3RotorState):
            raise ValueError("so3 search requires an So3RotorState guess")
    elif kind == ModelKind.SE3:
        to_vec, from_vec = se3_state_to_vector, se3_state_from_vector
        if not isinstance(guess, Se3RotorState):
            raise ValueError("se3 search requires an Se3RotorState guess")
        if grav is None:
            raise ValueError("gravity parameters required for the se3 model")
    else:
        raise ValueError(f"unknown model kind {kind!r}")

    rhs = controlled_rhs(kind, params, grav, control)
    y = to_vec(guess)
    f = rhs(y)
    iterations = 0
    while float(np.max(np.abs(f))) >= tol:
        if iterations >= max_iter:
            raise NewtonConvergenceError(
                f"no convergence after {max_iter} iterations; "
                f"last residual max-norm {np.max(np.abs(f)):.3e}",
                residual_norm=float(np.max(np.abs(f))),
                iterations=iterations,
            )
        jac = _fd_jacobian(rhs, y)
        delta = _newton_direction(jac, f)
        base = float(np.linalg.norm(f))
        scale = 1.0
        for _ in range(NEWTON_MAX_HALVINGS + 1):
            y_try = y + scale * delta
            f_try = rhs(y_try)
            if float(np.linalg.norm(f_try)) < base:
                break
            scale *= 0.5
        else:
            raise NewtonConvergenceError(
                "damped step failed to reduce the residual "
                f"(last residual max-norm {np.max(np.abs(f)):.3e})",
                residual_norm=float(np.max(np.abs(f))),
                iterations=iterations,
            )
        y, f = y_try, f_try
        iterations += 1
    return EquilibriumResult(
        state=from_vec(y),
        residual_norm=float(np.max(np.abs(f))),
        iterations=iterations,
    )
