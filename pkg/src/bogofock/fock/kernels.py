"""Kernel selection and merging helpers.

The compiled kernels are used when the extension module is importable and
the environment variable ``BOGOFOCK_PURE_PYTHON`` is not set to ``1``.
"""

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if os.environ.get("BOGOFOCK_PURE_PYTHON") != "1":
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        pass
    else:
        _impl = _ckernels
        BACKEND = "cython"

#: amplitudes at or below this magnitude are dropped
PRUNE = 1e-15
#: modes are bits of a uint64 key
MAX_MODES = 64


def get_backend(name=None):
    """Return the kernel module for ``name`` ("python", "cython" or None for the active one)."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


def _prune(keys, amps, tol=PRUNE):
    keep = np.abs(amps) > tol
    return keys[keep], amps[keep]


def merge(keys, amps, tol=PRUNE):
    """Sort keys, sum duplicate amplitudes and drop entries with modulus <= tol."""
    if len(keys) == 0:
        return np.zeros(0, np.uint64), np.zeros(0, complex)
    order = np.argsort(keys, kind="stable")
    k = keys[order]
    a = amps[order]
    starts = np.flatnonzero(np.concatenate([[True], k[1:] != k[:-1]]))
    return _prune(k[starts], np.add.reduceat(a, starts), tol)


def merge_pairs(rem, out, amps):
    """Merge entries with equal (rem, out) key pairs."""
    if len(rem) == 0:
        return rem, out, amps
    order = np.lexsort((out, rem))
    r, o, a = rem[order], out[order], amps[order]
    new = np.concatenate([[True], (r[1:] != r[:-1]) | (o[1:] != o[:-1])])
    starts = np.flatnonzero(new)
    r, o, a = r[starts], o[starts], np.add.reduceat(a, starts)
    keep = np.abs(a) > PRUNE
    return r[keep], o[keep], a[keep]


def one_body(keys, amps, modes, coefs, create, backend=None):
    impl = get_backend(backend)
    modes = np.ascontiguousarray(modes, dtype=np.int64)
    coefs = np.ascontiguousarray(coefs, dtype=complex)
    if len(keys) == 0 or len(modes) == 0:
        return np.zeros(0, np.uint64), np.zeros(0, complex)
    return merge(*impl.one_body(keys, amps, modes, coefs, bool(create)))


def pair(keys, amps, ps, qs, coefs, create, backend=None):
    impl = get_backend(backend)
    ps = np.ascontiguousarray(ps, dtype=np.int64)
    qs = np.ascontiguousarray(qs, dtype=np.int64)
    coefs = np.ascontiguousarray(coefs, dtype=complex)
    if len(keys) == 0 or len(ps) == 0:
        return np.zeros(0, np.uint64), np.zeros(0, complex)
    return merge(*impl.pair(keys, amps, ps, qs, coefs, bool(create)))


def lift(keys, amps, colptr, rowind, vals, backend=None):
    """Exterior-algebra lift of a one-particle map given in CSC form.

    Column s of the map (rows ``rowind[colptr[s]:colptr[s+1]]``) is the image
    of mode s.  Every occupied mode of every state must have a column.
    """
    impl = get_backend(backend)
    colptr = np.ascontiguousarray(colptr, dtype=np.int64)
    rowind = np.ascontiguousarray(rowind, dtype=np.int64)
    vals = np.ascontiguousarray(vals, dtype=complex)
    rem = np.ascontiguousarray(keys, dtype=np.uint64)
    out = np.zeros(len(rem), np.uint64)
    a = np.ascontiguousarray(amps, dtype=complex)
    while len(rem) and np.any(rem):
        rem, out, a = merge_pairs(*impl.lift_step(rem, out, a, colptr, rowind, vals))
    return merge(out, a)
