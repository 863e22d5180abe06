"""Vector states on matrix algebras.

A state is represented by its defining unit vector, never by a density
matrix; density matrices appear only transiently inside trace-norm
distances.  This keeps purity exact and makes unitary pullback a single
matrix-vector product.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULT, Numerics
from .errors import InvalidInputError, LevelError
from .linalg import (
    as_square_matrix,
    as_unit_vector,
    is_unitary,
    operator_norm,
    projector,
    trace_norm,
)


@dataclass(frozen=True)
class VectorState:
    """The pure state a -> <a v, v> defined by a unit vector v."""

    vector: np.ndarray

    def __post_init__(self):
        v = as_unit_vector(self.vector)
        v.setflags(write=False)
        object.__setattr__(self, "vector", v)

    @property
    def dim(self) -> int:
        return self.vector.shape[0]

    @property
    def level(self) -> int:
        """Truncation level when the dimension is a power of two."""
        d = self.dim
        if d & (d - 1) != 0:
            raise LevelError(f"dimension {d} is not a power of two")
        return d.bit_length() - 1


def evaluate(state: VectorState, a) -> complex:
    """Value of the state on an algebra element: <a v, v>."""
    a = as_square_matrix(a)
    if a.shape[0] != state.dim:
        raise InvalidInputError(
            f"element dimension {a.shape[0]} != state dimension {state.dim}"
        )
    return complex(np.vdot(state.vector, a @ state.vector))


def pullback(state: VectorState, u, settings: Numerics = DEFAULT) -> VectorState:
    """The state a -> state(u a u*), i.e. the vector state of u* v."""
    u = as_square_matrix(u)
    if u.shape[0] != state.dim:
        raise InvalidInputError(
            f"unitary dimension {u.shape[0]} != state dimension {state.dim}"
        )
    if not is_unitary(u, settings.unitary_tol):
        raise InvalidInputError("pullback needs a unitary")
    return VectorState(u.conj().T @ state.vector)


def state_distance(phi: VectorState, psi: VectorState) -> float:
    """Norm of the functional difference, as a trace-norm of projections.

    Equals 2 sqrt(1 - |<v_phi|v_psi>|^2) for vector states.
    """
    if phi.dim != psi.dim:
        raise InvalidInputError(f"dimension mismatch: {phi.dim} vs {psi.dim}")
    return trace_norm(projector(phi.vector) - projector(psi.vector))


@dataclass(frozen=True)
class SeparationWitness:
    """Difference of rank-one projections and its two expectations."""

    observable: np.ndarray
    first_value: float
    second_value: float
    norm: float


def separation_witness(xi, eta) -> SeparationWitness:
    """The observable P_xi - P_eta that pulls the two states apart.

    With c = |<xi|eta>| the expectations are 1 - c^2 in the first state and
    c^2 - 1 in the second, and the observable has norm sqrt(1 - c^2): close
    to orthogonality it almost realizes the full functional distance 2.
    """
    xi = as_unit_vector(xi)
    eta = as_unit_vector(eta)
    if xi.shape != eta.shape:
        raise InvalidInputError(
            f"dimension mismatch: {xi.shape[0]} vs {eta.shape[0]}"
        )
    a = projector(xi) - projector(eta)
    first = complex(np.vdot(xi, a @ xi))
    second = complex(np.vdot(eta, a @ eta))
    return SeparationWitness(
        observable=a,
        first_value=float(first.real),
        second_value=float(second.real),
        norm=operator_norm(a),
    )


def sup_gap(
    phi: VectorState,
    psi: VectorState,
    u,
    test_set: Sequence[np.ndarray],
    settings: Numerics = DEFAULT,
) -> float:
    """max over the test set of |phi(a) - psi(u a u*)|.

    Test elements must be contractions; the gap over any such finite set is
    dominated by the functional norm ||phi - psi o Ad u||.
    """
    u = as_square_matrix(u)
    if phi.dim != psi.dim or u.shape[0] != phi.dim:
        raise InvalidInputError("state and unitary dimensions must agree")
    pulled = u.conj().T @ psi.vector
    worst = 0.0
    for a in test_set:
        a = as_square_matrix(a)
        if operator_norm(a) > 1.0 + settings.contraction_slack:
            raise InvalidInputError("test elements must be contractions")
        gap = abs(complex(np.vdot(phi.vector, a @ phi.vector))
                  - complex(np.vdot(pulled, a @ pulled)))
        worst = max(worst, gap)
    return worst
