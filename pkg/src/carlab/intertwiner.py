"""Truncated product states and the rotation chains that intertwine them.

Each 2x2 factor gets the plane rotation carrying one angle vector to the
other; their tensor products form a chain of unitaries whose per-step and
block gaps are measured densely, computed in closed form from eigenphase
sign patterns, and compared against the overlap-product bound
sqrt(2 (1 - prod cos)).  The comparison is reported honestly: the bound
is known to fail for long blocks, so it is never asserted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULT, Numerics
from .errors import InvalidInputError, LevelError, NumericalInvariantError
from .linalg import (
    is_unitary,
    operator_norm,
    phase_combination_norm,
    plane_rotation,
    random_hermitian_contraction,
)
from .sequences import overlap_partial_products, validate_angles
from .states import VectorState, separation_witness, state_distance
from .truncation import embed, product_vector

PHASE_POLICIES = ("none", "eigenvalue-one")


def truncated_product_state(alpha, n: int, settings: Numerics = DEFAULT) -> VectorState:
    """Level-n truncation of the product state of angles alpha.

    The defining vector is the tensor product of (cos a_j, sin a_j) over
    the first n angles; values on elements embedded from lower levels
    depend only on the leading angles.
    """
    arr = validate_angles(alpha)
    if n < 1 or n > arr.size:
        raise InvalidInputError(f"need 1 <= n <= len(alpha), got n={n}")
    return VectorState(product_vector(arr[:n], settings))


def step_unitary(alpha_j: float, beta_j: float, phase_policy: str = "none") -> np.ndarray:
    """2x2 unitary carrying (cos a, sin a) to (cos b, sin b).

    "none" is the bare plane rotation; "eigenvalue-one" multiplies by a
    phase so the unitary fixes a vector, which changes how gaps accumulate
    across tensor products.
    """
    if phase_policy not in PHASE_POLICIES:
        raise InvalidInputError(f"unknown phase policy {phase_policy!r}")
    u = plane_rotation(float(beta_j) - float(alpha_j))
    if phase_policy == "eigenvalue-one":
        u = u * np.exp(1j * (float(alpha_j) - float(beta_j)))
    return u


def _step_phase_pair(theta: float, phase_policy: str) -> tuple[float, float]:
    """Eigenphases of the step unitary for angle gap theta = alpha - beta."""
    if phase_policy == "none":
        return (theta, -theta)
    return (0.0, 2.0 * theta)


@dataclass(frozen=True)
class ChainLevel:
    """One level of the chain with its gap data.

    `gap_to_prev` is the measured ||previous (x) I - current||, which
    collapses to the norm of I - (new factor); `overlap_bound` is the
    claimed estimate sqrt(2 (1 - cos theta_n)); `eigenphase_norm` is the
    exact closed form from the step's eigenphases.
    """

    n: int
    unitary: np.ndarray
    gap_to_prev: float
    overlap_bound: float
    eigenphase_norm: float


@dataclass(frozen=True)
class IntertwinerChain:
    """Tensor chain of step unitaries with per-level gap diagnostics."""

    alpha: np.ndarray
    beta: np.ndarray
    phase_policy: str
    levels: tuple[ChainLevel, ...]

    def level(self, n: int) -> ChainLevel:
        if not 1 <= n <= len(self.levels):
            raise LevelError(f"chain holds levels 1..{len(self.levels)}, asked {n}")
        return self.levels[n - 1]

    @property
    def thetas(self) -> np.ndarray:
        return self.alpha - self.beta


def build_chain(
    alpha,
    beta,
    levels: int,
    phase_policy: str = "none",
    settings: Numerics = DEFAULT,
) -> IntertwinerChain:
    """Build the chain of tensor products of step unitaries up to `levels`.

    Each chain element is verified to be unitary and to carry the prefix
    product vector of alpha onto that of beta (exactly for the bare
    rotations, up to the accumulated phase otherwise).
    """
    a = validate_angles(alpha)
    b = validate_angles(beta)
    if a.shape != b.shape:
        raise InvalidInputError(f"length mismatch: {a.size} vs {b.size}")
    if levels < 1 or levels > a.size:
        raise InvalidInputError(f"need 1 <= levels <= {a.size}, got {levels}")
    if levels > settings.max_level:
        raise LevelError(f"levels {levels} exceeds cap {settings.max_level}")

    records = []
    v = np.ones((1, 1), dtype=np.complex128)
    for n in range(1, levels + 1):
        u = step_unitary(a[n - 1], b[n - 1], phase_policy)
        v = np.kron(v, u)
        theta = float(a[n - 1] - b[n - 1])
        # previous (x) I - current = previous (x) (I - u), and tensoring with
        # a unitary preserves the operator norm
        gap = operator_norm(np.eye(2, dtype=np.complex128) - u)
        records.append(
            ChainLevel(
                n=n,
                unitary=v,
                gap_to_prev=gap,
                overlap_bound=float(np.sqrt(2.0 * (1.0 - np.cos(theta)))),
                eigenphase_norm=phase_combination_norm(
                    [_step_phase_pair(theta, phase_policy)]
                ),
            )
        )
    chain = IntertwinerChain(
        alpha=a, beta=b, phase_policy=phase_policy, levels=tuple(records)
    )
    _verify_chain(chain, settings)
    return chain


def _verify_chain(chain: IntertwinerChain, settings: Numerics) -> None:
    tol = 1e-9
    for record in chain.levels:
        if not is_unitary(record.unitary, tol):
            raise NumericalInvariantError(f"chain level {record.n} is not unitary")
        xi = product_vector(chain.alpha[: record.n], settings)
        eta = product_vector(chain.beta[: record.n], settings)
        image = record.unitary @ xi
        if chain.phase_policy == "none":
            err = np.linalg.norm(image - eta)
        else:
            err = abs(1.0 - abs(np.vdot(image, eta)))
        if err > tol:
            raise NumericalInvariantError(
                f"chain level {record.n} misses its carrier vector by {err:.3e}"
            )


def intertwining_gap(
    chain: IntertwinerChain,
    n: int,
    test_elements: Sequence[np.ndarray],
    settings: Numerics = DEFAULT,
) -> float:
    """max |phi_alpha(a) - phi_beta(v_n a v_n*)| over embedded test elements.

    Exact in exact arithmetic because the chain carries one prefix product
    vector onto the other; everything is evaluated through matrix-vector
    products only.
    """
    record = chain.level(n)
    xi = product_vector(chain.alpha[:n], settings)
    eta = product_vector(chain.beta[:n], settings)
    pulled = record.unitary.conj().T @ eta
    worst = 0.0
    for a in test_elements:
        big = embed(a, n, settings)
        lhs = np.vdot(xi, big @ xi)
        rhs = np.vdot(pulled, big @ pulled)
        worst = max(worst, abs(lhs - rhs))
    return float(worst)


def default_test_elements(
    level: int, seed: int = 0, n_random: int = 25, settings: Numerics = DEFAULT
) -> list[np.ndarray]:
    """Canonical matrix units plus seeded random Hermitian contractions."""
    dim = 1 << level
    if dim > settings.max_dim:
        raise LevelError(f"level {level} exceeds cap {settings.max_level}")
    rng = np.random.default_rng(seed)
    elements = []
    for i in range(dim):
        for j in range(dim):
            unit = np.zeros((dim, dim), dtype=np.complex128)
            unit[i, j] = 1.0
            elements.append(unit)
    for _ in range(n_random):
        elements.append(random_hermitian_contraction(dim, rng))
    return elements


@dataclass(frozen=True)
class BlockGap:
    """Measured vs closed-form gap of one chain block, with the bound flag."""

    start: int
    end: int
    measured: float
    eigenphase_norm: float
    overlap_bound: float
    exceeds_bound: bool


def block_gap(chain: IntertwinerChain, m: int, n: int, settings: Numerics = DEFAULT) -> BlockGap:
    """Compare ||v_m (x) I - v_n|| against its closed form and the bound.

    `measured` comes from a dense eigen-decomposition; `eigenphase_norm`
    from the sign-pattern formula over the block's factors; the bound is
    sqrt(2 (1 - prod cos)) over the same factors and is flagged, not
    asserted, whenever the measurement exceeds it.
    """
    if not 1 <= m < n <= len(chain.levels):
        raise LevelError(f"need 1 <= m < n <= {len(chain.levels)}")
    vm = embed(chain.level(m).unitary, n, settings)
    vn = chain.level(n).unitary
    measured = operator_norm(vm - vn)
    thetas = chain.thetas[m:n]
    spectral = phase_combination_norm(
        [_step_phase_pair(float(t), chain.phase_policy) for t in thetas]
    )
    prod = float(np.prod(np.cos(thetas)))
    bound = float(np.sqrt(2.0 * max(1.0 - prod, 0.0)))
    return BlockGap(
        start=m,
        end=n,
        measured=measured,
        eigenphase_norm=spectral,
        overlap_bound=bound,
        exceeds_bound=bool(measured > bound + 1e-12),
    )


def block_gaps(
    chain: IntertwinerChain, max_span: int = 6, settings: Numerics = DEFAULT
) -> list[BlockGap]:
    """All block gaps with span at most max_span, in (start, end) order."""
    out = []
    top = len(chain.levels)
    for m in range(1, top):
        for n in range(m + 1, min(m + max_span, top) + 1):
            out.append(block_gap(chain, m, n, settings))
    return out


@dataclass(frozen=True)
class SeparationRow:
    """Tail-state data at one level of the separation experiment."""

    n: int
    overlap: float
    state_distance: float
    witness_first: float
    witness_second: float
    witness_norm: float


def separation_rows(
    alpha,
    beta,
    start: int = 1,
    stop: int | None = None,
    settings: Numerics = DEFAULT,
) -> list[SeparationRow]:
    """Tail product vectors over factors start..n, their overlap, distance
    and separating witness, for each n up to `stop` (1-based, inclusive).

    The measured distance must match 2 sqrt(1 - overlap^2) within 1e-8 at
    every level; a violation is an invariant error, not a data point.
    """
    a = validate_angles(alpha)
    b = validate_angles(beta)
    if a.shape != b.shape:
        raise InvalidInputError(f"length mismatch: {a.size} vs {b.size}")
    if stop is None:
        stop = min(a.size, start + settings.max_level - 1)
    if not 1 <= start <= stop <= a.size:
        raise InvalidInputError(f"bad window [{start}, {stop}] for length {a.size}")
    rows = []
    products = overlap_partial_products(a, b, start - 1, stop)
    for n in range(start, stop + 1):
        xi = product_vector(a[start - 1 : n], settings)
        eta = product_vector(b[start - 1 : n], settings)
        # the cosine product equals <xi|eta> (checked elsewhere to 1e-10)
        # and stays exact where the vector inner product would cancel
        overlap = float(products[n - start])
        dist = state_distance(VectorState(xi), VectorState(eta))
        expected = 2.0 * np.sqrt(max(1.0 - overlap * overlap, 0.0))
        if abs(dist - expected) > 1e-8:
            raise NumericalInvariantError(
                f"distance/overlap duality off by {abs(dist - expected):.3e} at n={n}"
            )
        wit = separation_witness(xi, eta)
        rows.append(
            SeparationRow(
                n=n,
                overlap=overlap,
                state_distance=dist,
                witness_first=wit.first_value,
                witness_second=wit.second_value,
                witness_norm=wit.norm,
            )
        )
    return rows


def distance_crossing_level(
    alpha,
    beta,
    threshold: float = 1.9,
    start: int = 1,
    limit: int = 64,
) -> int | None:
    """First n with tail-state distance 2 sqrt(1 - P_n^2) above threshold.

    Runs on partial products alone, so it can scan far beyond the matrix
    cap; returns None when no admissible level crosses.
    """
    a = validate_angles(alpha)
    b = validate_angles(beta)
    if a.shape != b.shape:
        raise InvalidInputError(f"length mismatch: {a.size} vs {b.size}")
    stop = min(a.size, limit)
    if not 1 <= start <= stop:
        return None
    products = overlap_partial_products(a, b, start - 1, stop)
    distances = 2.0 * np.sqrt(np.clip(1.0 - products**2, 0.0, None))
    hits = np.nonzero(distances > threshold)[0]
    if hits.size == 0:
        return None
    return int(start + hits[0])
