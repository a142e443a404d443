"""JSON state file format.

A state file is a JSON object:

    {"dims": [2, 2, 2], "kind": "pure",  "amplitudes": [[re, im], ...]}
    {"dims": [2, 2],    "kind": "mixed", "matrix": [[[re, im], ...], ...]}

Amplitudes are listed in flat (big-endian) basis order; the matrix is
row-major.  Field names are fixed.  Non-normalized input is rejected
unless ``renormalize=True`` (the CLI exposes this as ``--renormalize``).
"""

from __future__ import annotations

import json
from math import prod
from pathlib import Path

import numpy as np

from .states import DensityMatrix, PureState


def _pairs_to_complex(data, what: str) -> np.ndarray:
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise ValueError(f"{what} must be nested lists of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _complex_to_pairs(arr: np.ndarray) -> list:
    stacked = np.stack([arr.real, arr.imag], axis=-1)
    return stacked.tolist()


def state_to_json_dict(state) -> dict:
    """Serialize a PureState or DensityMatrix to the state-file schema."""
    if isinstance(state, PureState):
        return {
            "dims": list(state.dims),
            "kind": "pure",
            "amplitudes": _complex_to_pairs(state.amplitudes),
        }
    if isinstance(state, DensityMatrix):
        return {
            "dims": list(state.dims),
            "kind": "mixed",
            "matrix": _complex_to_pairs(state.matrix),
        }
    raise ValueError(f"cannot serialize object of type {type(state).__name__}")


def state_from_json_dict(data: dict, renormalize: bool = False):
    """Parse the state-file schema into a PureState or DensityMatrix."""
    if not isinstance(data, dict):
        raise ValueError("state file must contain a JSON object")
    missing = {"dims", "kind"} - set(data)
    if missing:
        raise ValueError(f"state file missing fields: {sorted(missing)}")
    dims = data["dims"]
    if not isinstance(dims, list) or not dims or not all(
        isinstance(d, int) and d >= 1 for d in dims
    ):
        raise ValueError(f"dims must be a list of positive integers, got {dims!r}")
    kind = data["kind"]
    d = prod(dims)
    if kind == "pure":
        if "amplitudes" not in data:
            raise ValueError('kind "pure" requires an "amplitudes" field')
        amps = _pairs_to_complex(data["amplitudes"], "amplitudes").reshape(-1)
        if amps.size != d:
            raise ValueError(f"expected {d} amplitudes, got {amps.size}")
        if renormalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise ValueError("cannot renormalize the zero vector")
            amps = amps / norm
        return PureState(amps, tuple(dims))
    if kind == "mixed":
        if "matrix" not in data:
            raise ValueError('kind "mixed" requires a "matrix" field')
        mat = _pairs_to_complex(data["matrix"], "matrix")
        if mat.shape != (d, d):
            raise ValueError(f"expected a {d}x{d} matrix, got shape {mat.shape}")
        if renormalize:
            tr = np.trace(mat).real
            if tr <= 0:
                raise ValueError("cannot renormalize a matrix with nonpositive trace")
            mat = mat / tr
        return DensityMatrix(mat, tuple(dims))
    raise ValueError(f'kind must be "pure" or "mixed", got {kind!r}')


def save_state(state, path) -> None:
    """Write a state to ``path`` in the JSON state format."""
    Path(path).write_text(json.dumps(state_to_json_dict(state)) + "\n", encoding="utf-8")


def load_state(path, renormalize: bool = False):
    """Read a state file; see :func:`state_from_json_dict`."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON in state file {path}: {exc}") from exc
    return state_from_json_dict(data, renormalize=renormalize)
