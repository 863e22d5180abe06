"""Shared numeric caps and tolerances."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Numerics:
    """Caps and tolerances shared by every operation in the package.

    Matrices are dense complex128 throughout.  The dimension cap (4096 =
    2**12 factors) keeps eigen-decompositions trustworthy and memory
    bounded; everything above it is rejected rather than approximated.
    """

    max_dim: int = 4096
    max_level: int = 12
    unitary_tol: float = 1e-10
    unit_norm_tol: float = 1e-10
    contraction_slack: float = 1e-9
    witness_strictness: float = 1e-12


DEFAULT = Numerics()
