"""Entanglement measures: negativity, concurrence, CREN and EoF.

Exact routes only, except where a measure is defined through a convex
roof and no closed form exists; there :func:`cren` delegates to the
ensemble-search optimizer and flags the result as inexact.

Conventions: negativity is the unnormalized trace-norm deficit
``||rho^T_A|| - 1`` (1 on a Bell pair); the halved variant is available
as :func:`negativity_halved`.  All entropies use log base 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log2, prod, sqrt

import numpy as np

from .exceptions import NumericalIntegrityError, UnsupportedRouteError
from .linalg import partial_trace, partial_transpose, schmidt_coefficients, trace_norm
from .numeric import get_policy
from .states import Bipartition, DensityMatrix, PureState, to_density

MEASURE_IDS = ("concurrence", "negativity", "cren", "eof")

_PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_YY = np.kron(_PAULI_Y, _PAULI_Y)


@dataclass(frozen=True)
class MeasureValue:
    """A nonnegative measure value with its identity and exactness flag."""

    value: float
    measure_id: str
    exact: bool

    def __post_init__(self):
        if self.measure_id not in MEASURE_IDS:
            raise ValueError(f"unknown measure id {self.measure_id!r}")
        object.__setattr__(self, "value", clamp_measure_value(self.value))


def clamp_measure_value(x: float, what: str = "measure value") -> float:
    """Clamp roundoff-negative values to 0; reject anything worse."""
    x = float(x)
    tol = get_policy().clamp_tol
    if x >= 0.0:
        return x
    if x >= -tol:
        return 0.0
    raise NumericalIntegrityError(f"{what} {x!r} is negative beyond tolerance {tol}")


def _as_density(state) -> DensityMatrix:
    if isinstance(state, PureState):
        return to_density(state)
    if isinstance(state, DensityMatrix):
        return state
    raise ValueError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def _check_cut(state, cut: Bipartition) -> None:
    if cut.n_subsystems != state.n_subsystems:
        raise ValueError(
            f"cut spans {cut.n_subsystems} subsystems but state has {state.n_subsystems}"
        )


def negativity(state, cut: Bipartition) -> MeasureValue:
    """Trace-norm deficit of the partial transpose across ``cut``."""
    rho = _as_density(state)
    _check_cut(rho, cut)
    value = trace_norm(partial_transpose(rho, cut.side_a)) - 1.0
    return MeasureValue(value, "negativity", exact=True)


def negativity_halved(state, cut: Bipartition) -> float:
    """The halved convention (1/2 on a Bell pair); derived accessor."""
    return 0.5 * negativity(state, cut).value


def concurrence_pure(psi: PureState, cut: Bipartition) -> MeasureValue:
    """sqrt(2 (1 - sum of squared Schmidt coefficients)).

    When one side of the cut is a single qubit this coincides with
    2*sqrt(det rho_A) of the qubit marginal.  Evaluated through the
    cross-term identity 2(1 - sum(lam^2)) = 4 sum_{i<j} lam_i lam_j,
    which keeps full absolute precision near separability (the direct
    form cancels to the square root of machine epsilon there).
    """
    if not isinstance(psi, PureState):
        raise ValueError("concurrence_pure needs a PureState")
    _check_cut(psi, cut)
    lam = schmidt_coefficients(psi, cut).coefficients
    lam = lam / lam.sum()
    tail = np.cumsum(lam[::-1])[::-1]  # tail[i] = sum of lam[i:]
    cross = float(np.sum(lam[:-1] * tail[1:]))
    return MeasureValue(2.0 * sqrt(max(cross, 0.0)), "concurrence", exact=True)


def spin_flip(rho: DensityMatrix) -> np.ndarray:
    """Two-qubit spin-flipped matrix (Y (x) Y) rho* (Y (x) Y)."""
    if not isinstance(rho, DensityMatrix) or rho.dims != (2, 2):
        raise ValueError("spin_flip is defined for two-qubit density matrices")
    return _YY @ rho.matrix.conj() @ _YY


def _sqrtm_psd(mat: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(mat)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def concurrence_two_qubit(rho: DensityMatrix) -> MeasureValue:
    """Closed-form two-qubit mixed-state concurrence.

    max(0, mu1 - mu2 - mu3 - mu4) with mu_i the descending square roots
    of the eigenvalues of rho * spin_flip(rho).  The mu_i are computed
    as singular values of sqrt(rho) (Y x Y) sqrt(rho)^T, which squares
    to the Hermitian form sqrt(rho) rho_tilde sqrt(rho): unlike an
    eigensolve of that product followed by square roots, the SVD keeps
    full absolute precision on vanishing mu_i (an eigensolve leaves
    them at the sqrt of machine epsilon, visibly breaking the rank-1
    agreement with the pure-state formula).
    """
    if not isinstance(rho, DensityMatrix) or rho.dims != (2, 2):
        raise ValueError("concurrence_two_qubit is defined for two-qubit density matrices")
    root = _sqrtm_psd(rho.matrix)
    mu = np.linalg.svd(root @ _YY @ root.conj(), compute_uv=False)
    value = mu[0] - mu[1] - mu[2] - mu[3]
    return MeasureValue(max(value, 0.0), "concurrence", exact=True)


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2(1-x), with h(0) = h(1) = 0."""
    x = float(x)
    slack = 1e-12
    if x < -slack or x > 1.0 + slack:
        raise ValueError(f"binary_entropy domain is [0, 1], got {x!r}")
    x = min(max(x, 0.0), 1.0)
    total = 0.0
    for p in (x, 1.0 - x):
        if p > 0.0:
            total -= p * log2(p)
    return total


def _eof_bound_check(value: float, min_side_dim: int) -> float:
    bound = log2(min_side_dim) + get_policy().clamp_tol
    if value > bound:
        raise NumericalIntegrityError(f"eof value {value!r} exceeds the ebit bound {bound!r}")
    return value


def eof_two_qubit(rho: DensityMatrix) -> MeasureValue:
    """Closed-form two-qubit EoF: h((1 + sqrt(1 - C^2)) / 2)."""
    c = concurrence_two_qubit(rho).value
    value = binary_entropy((1.0 + sqrt(max(1.0 - c * c, 0.0))) / 2.0)
    return MeasureValue(_eof_bound_check(value, 2), "eof", exact=True)


def eof_pure(psi: PureState, cut: Bipartition) -> MeasureValue:
    """Entanglement entropy: base-2 Shannon entropy of the Schmidt spectrum."""
    if not isinstance(psi, PureState):
        raise ValueError("eof_pure needs a PureState")
    _check_cut(psi, cut)
    lam = schmidt_coefficients(psi, cut).coefficients
    value = float(-np.sum(lam[lam > 0.0] * np.log2(lam[lam > 0.0])))
    d_a = prod(psi.dims[i] for i in cut.side_a)
    d_b = prod(psi.dims[i] for i in cut.side_b)
    return MeasureValue(_eof_bound_check(value, min(d_a, d_b)), "eof", exact=True)


def cren(state, cut: Bipartition, roof_config=None) -> MeasureValue:
    """Convex-roof extended negativity across ``cut``.

    Routes:

    - pure input: equals the negativity (exact);
    - two-qubit mixed input: equals the two-qubit concurrence (exact,
      since every pure member of a 2x2 ensemble has equal negativity and
      concurrence, so the two roofs coincide);
    - mixed input where one side of the cut has total dimension 2: the
      same coincidence makes the roof equal the concurrence roof, which
      is estimated numerically (upper bound, ``exact=False``);
    - any other mixed cut: no route, raises UnsupportedRouteError.
    """
    _check_cut(state, cut)
    if isinstance(state, PureState):
        return MeasureValue(negativity(state, cut).value, "cren", exact=True)
    rho = _as_density(state)
    if rho.dims == (2, 2):
        return MeasureValue(concurrence_two_qubit(rho).value, "cren", exact=True)
    d_a = prod(rho.dims[i] for i in cut.side_a)
    d_b = prod(rho.dims[i] for i in cut.side_b)
    if min(d_a, d_b) == 2:
        from .convexroof import convex_roof

        result = convex_roof(rho, cut, "concurrence", roof_config)
        return MeasureValue(result.value, "cren", exact=False)
    raise UnsupportedRouteError(
        f"no exact route for CREN of a mixed state across a {d_a}x{d_b} cut"
    )


def reduced_state(state, keep) -> DensityMatrix:
    """Marginal of a pure or mixed state on the ``keep`` subsystems."""
    return partial_trace(_as_density(state), keep)
