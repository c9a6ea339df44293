"""Randomized cross-check of the equations of motion against the brackets.

The hand-written right-hand sides in :mod:`gyrostat.dynamics` and the
bracket-reconstructed Hamiltonian vector fields in :mod:`gyrostat.poisson`
are two independent routes to the same derivative.  The audit samples
phase points with every component uniform in [-5, 5], drawn from the
pinned :class:`gyrostat.rng.SplitMix64` stream (components in coordinate
order within each sample), and reports the worst componentwise relative
discrepancy, with denominators floored at 1.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .dynamics import reduced_rhs_se3, reduced_rhs_so3
from .model import (
    GravityParams,
    InertiaParams,
    ModelKind,
    se3_state_from_vector,
    so3_state_from_vector,
)
from .poisson import (
    BracketKind,
    hamiltonian_field_se3,
    hamiltonian_field_so3,
    hamiltonian_vector_field_via_bracket,
)
from .rng import SplitMix64

__all__ = ["AUDIT_TOL", "SAMPLE_LOW", "SAMPLE_HIGH", "bracket_oracle_audit"]

AUDIT_TOL = 1e-6
SAMPLE_LOW = -5.0
SAMPLE_HIGH = 5.0


def bracket_oracle_audit(
    kind: ModelKind,
    params: InertiaParams,
    grav: Optional[GravityParams] = None,
    samples: int = 1000,
    seed: int = 42,
    tolerance: float = AUDIT_TOL,
) -> dict:
    """Compare the uncontrolled equations against the bracket oracle.

    The energy field is handed to the bracket without an analytic
    gradient, so the oracle side rests entirely on finite differences and
    shares no derivative code with the equations of motion.

    Returns a JSON-ready report with the worst relative discrepancy, the
    sample that produced it, and a pass flag against `tolerance`.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    rng = SplitMix64(seed)
    if kind == ModelKind.SO3:
        dim = 5
        h = hamiltonian_field_so3(params)
        bracket_kind = BracketKind.PRODUCT_SO3
    elif kind == ModelKind.SE3:
        if grav is None:
            raise ValueError("gravity parameters required for the se3 model")
        dim = 8
        h = hamiltonian_field_se3(params, grav)
        bracket_kind = BracketKind.PRODUCT_SE3
    else:
        raise ValueError(f"unknown model kind {kind!r}")

    worst = -1.0
    worst_sample = None
    worst_index = -1
    for index in range(samples):
        x = np.array(
            [rng.uniform(SAMPLE_LOW, SAMPLE_HIGH) for _ in range(dim)]
        )
        if kind == ModelKind.SO3:
            direct = reduced_rhs_so3(so3_state_from_vector(x), params)
        else:
            direct = reduced_rhs_se3(se3_state_from_vector(x), params, grav)
        via = hamiltonian_vector_field_via_bracket(bracket_kind, h, x)
        rel = float(
            np.max(np.abs(direct - via) / np.maximum(1.0, np.abs(direct)))
        )
        if rel > worst:
            worst = rel
            worst_sample = x
            worst_index = index
    return {
        "model": kind.value,
        "samples": samples,
        "seed": seed,
        "tolerance": tolerance,
        "max_rel_discrepancy": worst,
        "worst_sample_index": worst_index,
        "worst_sample": [float(v) for v in worst_sample],
        "passed": bool(worst < tolerance),
    }
