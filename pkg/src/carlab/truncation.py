"""Finite truncations of the infinite tensor power of 2x2 matrices.

Level n means the 2^n-dimensional full matrix algebra; lower levels embed
unitally by a -> a (x) I.  Tensor factor order is fixed left to right:
factor 1 is the outermost block of the Kronecker layout, so embeddings
and the intertwiner chains agree on indexing.
"""

from __future__ import annotations

import numpy as np

from .config import DEFAULT, Numerics
from .errors import LevelError, SizeLimitError
from .linalg import as_square_matrix
from .sequences import validate_angles


def level_dim(n: int, settings: Numerics = DEFAULT) -> int:
    """Dimension 2^n of the level-n truncation."""
    return 1 << check_level(n, settings)


def check_level(n: int, settings: Numerics = DEFAULT) -> int:
    """Validate a truncation level against the configured cap."""
    n = int(n)
    if not 0 <= n <= settings.max_level:
        raise LevelError(f"level {n} outside [0, {settings.max_level}]")
    return n


def level_of_dim(dim: int, settings: Numerics = DEFAULT) -> int:
    """The level whose truncation has the given dimension."""
    dim = int(dim)
    if dim >= 1 and dim & (dim - 1) == 0:
        return check_level(dim.bit_length() - 1, settings)
    raise LevelError(f"dimension {dim} is not a power of two")


def embed(a, n: int, settings: Numerics = DEFAULT) -> np.ndarray:
    """Embed a level-m element into level n >= m as a (x) I.

    Norm-preserving and multiplicative; embedding twice equals embedding
    once to the final level.
    """
    a = as_square_matrix(a)
    m = level_of_dim(a.shape[0], settings)
    n = check_level(n, settings)
    if m > n:
        raise LevelError(f"cannot embed level {m} into lower level {n}")
    if m == n:
        return a
    return np.kron(a, np.eye(1 << (n - m), dtype=np.complex128))


def product_vector(angles, settings: Numerics = DEFAULT) -> np.ndarray:
    """Kronecker product of the 2-vectors (cos a_j, sin a_j).

    A unit vector of dimension 2^len(angles); slicing the angle list first
    gives the tail vectors used in the separation experiments.
    """
    arr = validate_angles(angles)
    if arr.size == 0:
        raise LevelError("need at least one angle")
    if arr.size > settings.max_level:
        raise SizeLimitError(
            f"{arr.size} factors exceed the level cap {settings.max_level}",
            estimated_size=2.0 ** arr.size,
        )
    out = np.ones(1, dtype=np.complex128)
    for a in arr:
        out = np.kron(out, np.array([np.cos(a), np.sin(a)], dtype=np.complex128))
    return out
