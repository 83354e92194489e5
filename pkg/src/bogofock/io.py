"""JSON formats: operator specs, Fock vectors and complex matrices.

Complex numbers are stored as [re, im] pairs.  An operator spec is

    {"window_cols": C, "tail_shift": t, "tail_pattern": [[...2x2...]],
     "block": [[...]] with C + t (+ zero padding) rows and C columns,
     "bogoliubov": true}
"""

from __future__ import annotations

import json

import numpy as np

from .fock import FockVector
from .selfdual import ATOL, BogoliubovOp, FiniteTypeOp, adjoint, identity, zero


class SpecError(ValueError):
    """Invalid operator spec; the message names the violated relation."""


def complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def matrix_to_json(mat):
    mat = np.atleast_2d(np.asarray(mat, dtype=complex))
    return [[complex_to_json(z) for z in row] for row in mat]


def _parse_number(x):
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(y, (int, float)) for y in x):
        return complex(x[0], x[1])
    raise SpecError(f"cannot parse number {x!r}: expected a real or [re, im]")


def matrix_from_json(rows, cols=None):
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise SpecError("matrix must be a list of rows")
    if rows and len({len(r) for r in rows}) != 1:
        raise SpecError("matrix rows have different lengths")
    n_cols = len(rows[0]) if rows else (cols or 0)
    out = np.zeros((len(rows), n_cols), complex)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            out[i, j] = _parse_number(x)
    return out


# ------------------------------------------------------------- operator specs
def relation_residuals(op: FiniteTypeOp) -> dict:
    """Residuals of the four component relations of V* V = 1 and of Gamma-reality.

    Keys are the relations written out; every value should vanish for a
    Bogoliubov operator.
    """
    v11, v12, v21, v22 = op.components
    one1, one2 = identity("K1"), identity("K2")
    out = {
        "V commutes with Gamma (real block)": float(np.max(np.abs(op.block.imag), initial=0.0)),
        "V11* V11 + V21* V21 = 1": (adjoint(v11) @ v11 + adjoint(v21) @ v21).max_abs_diff(one1),
        "V11* V12 + V21* V22 = 0": (adjoint(v11) @ v12 + adjoint(v21) @ v22).max_abs_diff(zero("K2", "K1")),
        "V12* V11 + V22* V21 = 0": (adjoint(v12) @ v11 + adjoint(v22) @ v21).max_abs_diff(zero("K1", "K2")),
        "V12* V12 + V22* V22 = 1": (adjoint(v12) @ v12 + adjoint(v22) @ v22).max_abs_diff(one2),
    }
    return out


def operator_from_spec(spec: dict) -> FiniteTypeOp:
    """Parse an operator spec dict (no isometry check)."""
    if not isinstance(spec, dict):
        raise SpecError("operator spec must be a JSON object")
    for key in ("window_cols", "tail_shift", "block"):
        if key not in spec:
            raise SpecError(f"missing field {key!r}")
    c = spec["window_cols"]
    t = spec["tail_shift"]
    if not isinstance(c, int) or not isinstance(t, int) or c < 0:
        raise SpecError("window_cols and tail_shift must be integers (window_cols >= 0)")
    if t % 2:
        raise SpecError("unsupported: odd index out of scope")
    if c % 2:
        raise SpecError("window_cols must be even")
    block = matrix_from_json(spec["block"], c)
    if block.shape[1] != c:
        raise SpecError(f"block has {block.shape[1]} columns, window_cols is {c}")
    rows = c + t
    if block.shape[0] < rows:
        raise SpecError(f"block has {block.shape[0]} rows, need at least window_cols + tail_shift = {rows}")
    if np.any(block[rows:]):
        raise SpecError("padding rows below window_cols + tail_shift must be zero")
    pattern = matrix_from_json(spec["tail_pattern"]) if spec.get("tail_pattern") is not None else np.eye(2)
    if pattern.shape != (2, 2):
        raise SpecError("tail_pattern must be 2 x 2")
    try:
        return FiniteTypeOp(block[:rows], t, pattern, "K", "K")
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


def bogoliubov_from_spec(spec: dict, atol=ATOL) -> BogoliubovOp:
    """Parse and validate; the error names the first violated relation and its residual."""
    shift = spec.get("tail_shift") if isinstance(spec, dict) else None
    if isinstance(shift, int) and shift < 0:
        raise SpecError("negative tail shift: not an isometry")
    op = operator_from_spec(spec)
    if not np.allclose(op.pattern, np.eye(2), atol=atol, rtol=0):
        raise SpecError("tail pattern must be the identity for a Bogoliubov operator")
    for name, res in relation_residuals(op).items():
        if res > atol:
            raise SpecError(f"relation violated: {name} (max residual {res:.3e})")
    return BogoliubovOp(op, atol=atol)


def operator_to_spec(op, bogoliubov=None) -> dict:
    if isinstance(op, BogoliubovOp):
        bogoliubov = True if bogoliubov is None else bogoliubov
        op = op.op
    spec = {
        "window_cols": op.window,
        "tail_shift": op.shift,
        "block": matrix_to_json(op.block),
        "bogoliubov": bool(bogoliubov),
    }
    if not np.allclose(op.pattern, np.eye(op.period), atol=0, rtol=0):
        spec["tail_pattern"] = matrix_to_json(op.pattern)
    return spec


def load_spec(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from exc


def load_operator(path, atol=ATOL):
    """Read an operator spec file; returns a BogoliubovOp when declared "bogoliubov"."""
    spec = load_spec(path)
    if spec.get("bogoliubov", False):
        return bogoliubov_from_spec(spec, atol)
    return operator_from_spec(spec)


def dump_operator(op, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(operator_to_spec(op), fh, indent=1)
        fh.write("\n")


# --------------------------------------------------------------- Fock vectors
def load_fock_vector(path) -> FockVector:
    with open(path, encoding="utf-8") as fh:
        return FockVector.from_json(json.load(fh))


def dump_fock_vector(vec: FockVector, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(vec.to_json(), fh)
        fh.write("\n")
