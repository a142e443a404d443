"""Shared helpers for the test suite."""

import numpy as np

import entmono as em


def werner(p: float) -> em.DensityMatrix:
    """p * |Phi+><Phi+| + (1 - p) * I/4."""
    bell = em.to_density(em.bell_state()).matrix
    return em.DensityMatrix(p * bell + (1.0 - p) * np.eye(4) / 4.0, (2, 2))


def random_local_unitaries(n: int, rng) -> list[np.ndarray]:
    return [em.random_unitary(2, rng) for _ in range(n)]


def apply_all_local(state, unitaries):
    for site, u in enumerate(unitaries):
        state = em.apply_local_unitary(state, u, site)
    return state
