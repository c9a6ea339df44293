"""Parameters, states, Hamiltonians, and momentum relations.

Two reduced models of a rigid carrier with a single internal rotor spinning
about the third body axis are supported:

* the symmetric model on ``so(3)* x R x R`` with phase point
  ``(Pi, alpha, l)``, where ``Pi`` is the total angular momentum in body
  coordinates, ``alpha`` the rotor relative angle, and ``l`` the rotor
  momentum conjugate to it;
* the restoring-torque model on ``se(3)* x R x R`` with phase point
  ``(Pi, Gamma, alpha, l)``, where ``Gamma`` is the gravity direction
  advected to the body frame.  The torque arises from an offset ``chi``
  between the reference center and the center of gravity, with strength
  ``mgh``.

All flattened coordinate vectors, CSV columns, and residual indices use one
fixed ordering: ``(Pi1, Pi2, Pi3, alpha, l)`` for the symmetric model and
``(Pi1, Pi2, Pi3, Gamma1, Gamma2, Gamma3, alpha, l)`` for the restoring one.

Locked inertias ``i_bar = (I1 + J1, I2 + J2, I3)`` combine carrier inertia
``I`` with the rotor's transverse inertia; ``j3`` is the rotor's axial
moment.  The raw carrier/rotor moments may be supplied alongside ``i_bar``
for bookkeeping, in which case they must be consistent with it.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra import as_vec3

__all__ = [
    "ModelKind",
    "InertiaParams",
    "GravityParams",
    "So3RotorState",
    "Se3RotorState",
    "AngularVelocities",
    "OrbitLabel",
    "omega_from_momenta",
    "momenta_from_velocities",
    "hamiltonian_so3",
    "hamiltonian_se3",
    "grad_h",
    "HamiltonianGradient",
    "casimirs",
    "so3_state_to_vector",
    "so3_state_from_vector",
    "se3_state_to_vector",
    "se3_state_from_vector",
]

RAW_INERTIA_TOL = 1e-12
CHI_NORM_WARN_TOL = 1e-9
CHI_NORM_REJECT_TOL = 1e-6


class ModelKind(enum.Enum):
    """Which reduced phase space a state or trajectory lives on."""

    SO3 = "so3"
    SE3 = "se3"


@dataclass(frozen=True)
class InertiaParams:
    """Locked inertia parameters of the carrier-rotor pair.

    Parameters
    ----------
    i_bar : array_like, shape (3,)
        Locked principal moments.  The first two include the rotor's
        transverse inertia; the third is the carrier's alone.
    j3 : float
        Axial moment of the rotor about its spin axis.
    i_carrier : array_like, shape (3,), optional
        Raw carrier principal moments, kept for bookkeeping only.
    j_rotor_transverse : tuple of two floats, optional
        Raw rotor transverse moments about the first two axes.

    Raises
    ------
    ValueError
        If any moment is non-positive, or the raw moments are present but
        inconsistent with ``i_bar``.
    """

    i_bar: np.ndarray
    j3: float
    i_carrier: Optional[np.ndarray] = None
    j_rotor_transverse: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "i_bar", as_vec3(self.i_bar))
        object.__setattr__(self, "j3", float(self.j3))
        if np.any(self.i_bar <= 0.0):
            raise ValueError(f"locked moments must be positive, got {self.i_bar}")
        if self.j3 <= 0.0:
            raise ValueError(f"rotor axial moment must be positive, got {self.j3}")
        if (self.i_carrier is None) != (self.j_rotor_transverse is None):
            raise ValueError(
                "raw moments i_carrier and j_rotor_transverse must be given together"
            )
        if self.i_carrier is not None:
            object.__setattr__(self, "i_carrier", as_vec3(self.i_carrier))
            jt = tuple(float(j) for j in self.j_rotor_transverse)
            if len(jt) != 2:
                raise ValueError("j_rotor_transverse must hold exactly two moments")
            object.__setattr__(self, "j_rotor_transverse", jt)
            if np.any(self.i_carrier <= 0.0) or jt[0] <= 0.0 or jt[1] <= 0.0:
                raise ValueError("raw moments must be positive")
            locked = np.array(
                [
                    self.i_carrier[0] + jt[0],
                    self.i_carrier[1] + jt[1],
                    self.i_carrier[2],
                ]
            )
            defect = np.max(np.abs(locked - self.i_bar))
            if defect > RAW_INERTIA_TOL:
                raise ValueError(
                    "raw moments inconsistent with locked moments: "
                    f"max deviation {defect:.3e}"
                )


@dataclass(frozen=True)
class GravityParams:
    """Restoring-torque parameters for the se(3)* model.

    ``chi`` is the body-frame direction from the reference center to the
    center of gravity and is stored normalized.  A norm off unity by more
    than ``CHI_NORM_WARN_TOL`` triggers renormalization with a warning;
    norms below ``CHI_NORM_REJECT_TOL`` are rejected as direction-free.
    ``mgh`` is the restoring coefficient (weight times moment arm) and may
    be zero, which decouples the advected direction from the momenta.
    """

    mgh: float
    chi: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))

    def __post_init__(self):
        object.__setattr__(self, "mgh", float(self.mgh))
        if not np.isfinite(self.mgh) or self.mgh < 0.0:
            raise ValueError(f"mgh must be finite and non-negative, got {self.mgh}")
        chi = as_vec3(self.chi)
        norm = float(np.linalg.norm(chi))
        if norm < CHI_NORM_REJECT_TOL:
            raise ValueError(f"chi norm {norm:.3e} is too small to define a direction")
        if abs(norm - 1.0) > CHI_NORM_WARN_TOL:
            warnings.warn(
                f"chi norm {norm:.12g} differs from 1; renormalizing",
                stacklevel=2,
            )
            chi = chi / norm
        object.__setattr__(self, "chi", chi)


@dataclass(frozen=True)
class So3RotorState:
    """Phase point (Pi, alpha, l) of the symmetric model."""

    pi: np.ndarray
    alpha: float = 0.0
    l: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "pi", as_vec3(self.pi))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "l", float(self.l))
        if not (np.isfinite(self.alpha) and np.isfinite(self.l)):
            raise ValueError("alpha and l must be finite")


@dataclass(frozen=True)
class Se3RotorState:
    """Phase point (Pi, Gamma, alpha, l) of the restoring-torque model.

    ``Gamma`` is not normalized here: its norm is a conserved label of the
    orbit and any drift in it is a diagnostic of integration quality, so
    the state stores whatever it is given.
    """

    pi: np.ndarray
    gamma: np.ndarray
    alpha: float = 0.0
    l: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "pi", as_vec3(self.pi))
        object.__setattr__(self, "gamma", as_vec3(self.gamma))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "l", float(self.l))
        if not (np.isfinite(self.alpha) and np.isfinite(self.l)):
            raise ValueError("alpha and l must be finite")


@dataclass(frozen=True)
class AngularVelocities:
    """Carrier angular velocity and rotor relative rate."""

    omega: np.ndarray
    alpha_dot: float


@dataclass(frozen=True)
class OrbitLabel:
    """Values of the conserved orbit labels for one state.

    Only the fields of the active kind are meaningful: ``pi_norm`` for the
    symmetric model, ``pi_dot_gamma`` and ``gamma_norm`` for the restoring
    one.  Inactive fields are ``None``.
    """

    kind: ModelKind
    pi_norm: Optional[float] = None
    pi_dot_gamma: Optional[float] = None
    gamma_norm: Optional[float] = None


def omega_from_momenta(state, params: InertiaParams) -> AngularVelocities:
    """Invert the momentum relations for body rates.

    Works for either model kind since both carry ``(pi, l)``.

    Returns
    -------
    AngularVelocities
        ``omega = (Pi1/i1, Pi2/i2, (Pi3 - l)/i3)`` and the rotor relative
        rate ``alpha_dot = l/j3 - (Pi3 - l)/i3``.
    """
    i1, i2, i3 = params.i_bar
    p = state.pi
    omega3 = (p[2] - state.l) / i3
    omega = np.array([p[0] / i1, p[1] / i2, omega3])
    alpha_dot = state.l / params.j3 - omega3
    return AngularVelocities(omega=omega, alpha_dot=alpha_dot)


def momenta_from_velocities(
    omega, alpha_dot: float, params: InertiaParams
) -> tuple[np.ndarray, float]:
    """Forward momentum relations: body rates to ``(Pi, l)``."""
    omega = as_vec3(omega)
    i1, i2, i3 = params.i_bar
    l = params.j3 * (omega[2] + float(alpha_dot))
    pi = np.array([i1 * omega[0], i2 * omega[1], i3 * omega[2] + l])
    return pi, l


def _kinetic_energy(pi: np.ndarray, l: float, params: InertiaParams) -> float:
    i1, i2, i3 = params.i_bar
    return 0.5 * (
        pi[0] ** 2 / i1
        + pi[1] ** 2 / i2
        + (pi[2] - l) ** 2 / i3
        + l**2 / params.j3
    )


def hamiltonian_so3(state: So3RotorState, params: InertiaParams) -> float:
    """Reduced energy of the symmetric model.

    ``H = (Pi1^2/i1 + Pi2^2/i2 + (Pi3 - l)^2/i3 + l^2/j3) / 2``; the
    rotor angle is cyclic and does not enter.
    """
    return _kinetic_energy(state.pi, state.l, params)


def hamiltonian_se3(
    state: Se3RotorState, params: InertiaParams, grav: GravityParams
) -> float:
    """Reduced energy of the restoring-torque model.

    The kinetic part coincides with :func:`hamiltonian_so3` on ``(Pi, l)``;
    the potential adds ``mgh * Gamma . chi``.
    """
    return _kinetic_energy(state.pi, state.l, params) + grav.mgh * float(
        np.dot(state.gamma, grav.chi)
    )


@dataclass(frozen=True)
class HamiltonianGradient:
    """Partial derivatives of the reduced energy at one state.

    ``d_gamma`` is ``None`` for the symmetric model.  ``d_alpha`` is always
    zero because the rotor angle is cyclic; it is kept explicit so callers
    can assemble full-dimension gradients without special cases.
    """

    d_pi: np.ndarray
    d_alpha: float
    d_l: float
    d_gamma: Optional[np.ndarray] = None


def grad_h(
    state, params: InertiaParams, grav: Optional[GravityParams] = None
) -> HamiltonianGradient:
    """Gradient of the reduced energy with respect to the phase variables.

    ``d_pi = (Pi1/i1, Pi2/i2, (Pi3 - l)/i3)``, ``d_l = l/j3 - (Pi3 - l)/i3``
    and, when a gravity model is attached, ``d_gamma = mgh * chi``.

    Raises
    ------
    ValueError
        If `state` carries an advected direction but no `grav` is given.
    """
    vel = omega_from_momenta(state, params)
    is_se3 = isinstance(state, Se3RotorState) or hasattr(state, "gamma")
    if is_se3:
        if grav is None:
            raise ValueError("gravity parameters required for an se3 state")
        d_gamma = grav.mgh * grav.chi
    else:
        d_gamma = None
    return HamiltonianGradient(
        d_pi=vel.omega, d_alpha=0.0, d_l=vel.alpha_dot, d_gamma=d_gamma
    )


def casimirs(state, kind: ModelKind) -> OrbitLabel:
    """Conserved orbit labels of the bracket geometry.

    ``|Pi|`` for the symmetric model; ``Pi . Gamma`` and ``|Gamma|`` for
    the restoring-torque model.  These are constants of motion for every
    Hamiltonian and every control lift acting along the reduced equations'
    geometric directions, so their drift measures integrator error.

    Raises
    ------
    ValueError
        If the state type does not match `kind`.
    """
    if kind == ModelKind.SO3:
        if not isinstance(state, So3RotorState):
            raise ValueError(f"kind {kind.value} requires an So3RotorState")
        return OrbitLabel(kind=kind, pi_norm=float(np.linalg.norm(state.pi)))
    if kind == ModelKind.SE3:
        if not isinstance(state, Se3RotorState):
            raise ValueError(f"kind {kind.value} requires an Se3RotorState")
        return OrbitLabel(
            kind=kind,
            pi_dot_gamma=float(np.dot(state.pi, state.gamma)),
            gamma_norm=float(np.linalg.norm(state.gamma)),
        )
    raise ValueError(f"unknown model kind {kind!r}")


def so3_state_to_vector(state: So3RotorState) -> np.ndarray:
    """Flatten to the canonical (Pi1, Pi2, Pi3, alpha, l) order."""
    return np.array([*state.pi, state.alpha, state.l])


def so3_state_from_vector(y) -> So3RotorState:
    y = np.asarray(y, dtype=float)
    if y.shape != (5,):
        raise ValueError(f"expected a 5-vector, got shape {y.shape}")
    return So3RotorState(pi=y[:3], alpha=y[3], l=y[4])


def se3_state_to_vector(state: Se3RotorState) -> np.ndarray:
    """Flatten to the canonical (Pi, Gamma, alpha, l) order."""
    return np.array([*state.pi, *state.gamma, state.alpha, state.l])


def se3_state_from_vector(y) -> Se3RotorState:
    y = np.asarray(y, dtype=float)
    if y.shape != (8,):
        raise ValueError(f"expected an 8-vector, got shape {y.shape}")
    return Se3RotorState(pi=y[:3], gamma=y[3:6], alpha=y[6], l=y[7])
