"""Deterministic seed derivation for seeded experiment sweeps.

Per-trial seeds come from a splitmix64 stream keyed by the root seed, so
trial i always receives the same seed no matter how many trials run or
in which order they complete.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step; returns (next_state, output)."""
    state = (state + _GAMMA) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def derive_seeds(root: int, count: int) -> list[int]:
    """The first `count` per-trial seeds derived from `root`."""
    state = root & _MASK
    seeds = []
    for _ in range(count):
        state, value = splitmix64(state)
        seeds.append(value)
    return seeds


def rng_for_trial(root: int, trial: int) -> np.random.Generator:
    """Generator for one trial, independent of execution order."""
    return np.random.default_rng(derive_seeds(root, trial + 1)[-1])
