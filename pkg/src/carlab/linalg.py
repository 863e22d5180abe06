"""Dense complex linear algebra primitives.

Kronecker products, operator and trace norms, unitarity checks, and the
explicit plane / two-plane unitaries the rest of the package is built
from.  Norms are computed from Hermitian eigen-decompositions of a*a,
never from iterative methods, so repeated runs give identical values.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .config import DEFAULT, Numerics
from .errors import DomainError, InvalidInputError, SizeLimitError


def as_square_matrix(a) -> np.ndarray:
    """Coerce to a square complex128 matrix, rejecting non-finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise InvalidInputError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError("matrix has non-finite entries")
    return m


def as_unit_vector(v, tol: float = DEFAULT.unit_norm_tol) -> np.ndarray:
    """Coerce to a complex128 vector of unit Euclidean norm (within tol)."""
    w = np.asarray(v, dtype=np.complex128)
    if w.ndim != 1 or w.shape[0] < 1:
        raise InvalidInputError(f"expected a vector, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise InvalidInputError("vector has non-finite entries")
    nrm = np.linalg.norm(w)
    if abs(nrm - 1.0) > tol:
        raise InvalidInputError(f"vector norm {nrm!r} is not 1 within {tol}")
    return w


def kron(a, b, settings: Numerics = DEFAULT) -> np.ndarray:
    """Kronecker product with the configured dimension cap."""
    a = as_square_matrix(a)
    b = as_square_matrix(b)
    dim = a.shape[0] * b.shape[0]
    if dim > settings.max_dim:
        raise SizeLimitError(
            f"Kronecker product dimension {dim} exceeds cap {settings.max_dim}",
            estimated_size=dim,
        )
    return np.kron(a, b)


def operator_norm(a) -> float:
    """Largest singular value, via eigen-decomposition of a*a."""
    a = as_square_matrix(a)
    top = np.linalg.eigvalsh(a.conj().T @ a)[-1]
    return float(np.sqrt(max(top, 0.0)))


def trace_norm(a) -> float:
    """Sum of singular values, via Hermitian eigen-decomposition.

    Hermitian inputs (every in-package use: differences of projections)
    take the well-conditioned route through their own eigenvalues; going
    through a*a would square the condition number and inflate near-zero
    singular values to sqrt(eps).
    """
    a = as_square_matrix(a)
    if np.allclose(a, a.conj().T, rtol=0.0, atol=1e-13):
        return float(np.sum(np.abs(np.linalg.eigvalsh(a))))
    eigs = np.clip(np.linalg.eigvalsh(a.conj().T @ a), 0.0, None)
    return float(np.sum(np.sqrt(eigs)))


def is_unitary(a, tol: float | None = None, settings: Numerics = DEFAULT) -> bool:
    """True iff ||a*a - I|| <= tol in operator norm."""
    if tol is None:
        tol = settings.unitary_tol
    if tol <= 0:
        raise DomainError("unitarity tolerance must be positive")
    a = as_square_matrix(a)
    eye = np.eye(a.shape[0], dtype=np.complex128)
    return operator_norm(a.conj().T @ a - eye) <= tol


def projector(v) -> np.ndarray:
    """Rank-one orthogonal projection onto the span of a unit vector."""
    v = as_unit_vector(v)
    return np.outer(v, v.conj())


def rotation_unitary(t: float) -> np.ndarray:
    """The 2x2 real rotation with first column (t, sqrt(1-t^2)).

    Maps (1, 0) to (t, sqrt(1-t^2)) and satisfies ||I - u||^2 = 2 - 2t.
    """
    t = float(t)
    if not np.isfinite(t) or abs(t) > 1.0:
        raise DomainError(f"rotation parameter {t!r} outside [-1, 1]")
    s = np.sqrt(max(1.0 - t * t, 0.0))
    return np.array([[t, -s], [s, t]], dtype=np.complex128)


def plane_rotation(angle: float) -> np.ndarray:
    """The 2x2 real rotation by `angle` radians."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def two_plane_unitary(xi, eta) -> np.ndarray:
    """Unitary sending xi to eta, identity on the complement of their span.

    Acts as a rotation on span{xi, eta}; the excursion from the identity is
    as small as the exact-image constraint allows:
    ||I - u|| = sqrt(2 (1 - Re<xi|eta>)).

    For colinear inputs eta = c*xi the map is multiplication by c on the
    line C*xi and identity elsewhere (the continuous limit of the generic
    construction).
    """
    xi = as_unit_vector(xi)
    eta = as_unit_vector(eta)
    if xi.shape != eta.shape:
        raise InvalidInputError(
            f"dimension mismatch: {xi.shape[0]} vs {eta.shape[0]}"
        )
    d = xi.shape[0]
    c = np.vdot(xi, eta)
    resid = eta - c * xi
    s = np.linalg.norm(resid)
    u = np.eye(d, dtype=np.complex128)
    if s <= 1e-12:
        return u + (c - 1.0) * np.outer(xi, xi.conj())
    zeta = resid / s
    # in the {xi, zeta} plane: xi -> c*xi + s*zeta, zeta -> -s*xi + conj(c)*zeta
    u += np.outer(eta - xi, xi.conj())
    u += np.outer(-s * xi + np.conj(c) * zeta - zeta, zeta.conj())
    return u


def phase_align(xi, eta) -> np.ndarray:
    """Rescale eta by a unimodular phase so <xi|eta> becomes >= 0.

    Vector states forget global phases, so this is a free normalization
    when xi and eta stand for states rather than bare vectors.
    """
    xi = as_unit_vector(xi)
    eta = as_unit_vector(eta)
    t = np.vdot(xi, eta)
    if abs(t) < 1e-14:
        return eta
    return eta * (np.conj(t) / abs(t))


def phase_combination_norm(phase_pairs: Sequence[tuple[float, float]]) -> float:
    """max |1 - exp(i * sum of chosen phases)| over one choice per pair.

    The eigenphases of a tensor product of 2x2 normal factors are the sums
    of one eigenphase per factor, so this is the exact operator norm of
    (I - tensor product) given the per-factor eigenphase pairs.
    """
    if len(phase_pairs) > 24:
        raise SizeLimitError(
            f"{len(phase_pairs)} factors means 2^{len(phase_pairs)} sign patterns",
            estimated_size=2.0 ** len(phase_pairs),
        )
    sums = np.zeros(1)
    for p, q in phase_pairs:
        sums = np.concatenate([sums + p, sums + q])
    return float(np.max(np.abs(1.0 - np.exp(1j * sums))))


def rotation_block_norm(thetas: Sequence[float]) -> float:
    """||I - (tensor product of plane rotations by thetas)||, in closed form.

    Each rotation contributes eigenphases (+theta, -theta); the norm is the
    maximum of |1 - exp(i * sum)| over all sign patterns.
    """
    return phase_combination_norm([(float(t), -float(t)) for t in thetas])


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform random unit vector in C^dim."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed random unitary (QR of a complex Ginibre matrix)."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian_contraction(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random Hermitian matrix rescaled to operator norm exactly 1."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = (g + g.conj().T) / 2.0
    nrm = operator_norm(h)
    if nrm < 1e-12:
        return np.eye(dim, dtype=np.complex128)
    return h / nrm
