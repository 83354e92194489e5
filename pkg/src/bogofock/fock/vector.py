"""Sparse vectors in the antisymmetric Fock space over K1."""

from __future__ import annotations

import numpy as np

from .kernels import MAX_MODES, merge


def modes_to_key(modes) -> int:
    key = 0
    for p in modes:
        if not 0 <= p < MAX_MODES:
            raise ValueError(f"mode {p} outside the supported range 0..{MAX_MODES - 1}")
        bit = 1 << int(p)
        if key & bit:
            raise ValueError(f"mode {p} occupied twice")
        key |= bit
    return key


def key_to_modes(key) -> tuple:
    key = int(key)
    out = []
    p = 0
    while key:
        if key & 1:
            out.append(p)
        key >>= 1
        p += 1
    return tuple(out)


def _sign_to_sorted(modes):
    """Sign of the permutation sorting ``modes`` ascending."""
    modes = list(modes)
    sign = 1
    for i in range(len(modes)):
        for j in range(i + 1, len(modes)):
            if modes[i] > modes[j]:
                sign = -sign
    return sign


class FockVector:
    """Finite linear combination of occupation states.

    The state with sorted modes (p_1 < ... < p_k) is a+_{p_1} ... a+_{p_k} Omega.
    Keys are uint64 bitmasks kept sorted and unique; amplitudes at or below
    1e-15 are pruned.
    """

    def __init__(self, keys=(), amps=(), merged=False):
        keys = np.asarray(keys, dtype=np.uint64).reshape(-1)
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        if keys.shape != amps.shape:
            raise ValueError("keys and amplitudes differ in length")
        if not merged:
            keys, amps = merge(keys, amps)
        keys = np.ascontiguousarray(keys)
        amps = np.ascontiguousarray(amps)
        keys.setflags(write=False)
        amps.setflags(write=False)
        self.keys = keys
        self.amps = amps

    # ------------------------------------------------------------ builders
    @classmethod
    def vacuum(cls):
        return cls([0], [1.0], merged=True)

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def basis(cls, modes, amp=1.0):
        """a+_{modes[0]} ... a+_{modes[-1]} Omega (any order; the sign is applied)."""
        return cls([modes_to_key(modes)], [amp * _sign_to_sorted(modes)])

    @classmethod
    def from_dict(cls, mapping):
        keys, amps = [], []
        for modes, amp in mapping.items():
            keys.append(modes_to_key(modes))
            amps.append(amp * _sign_to_sorted(modes))
        return cls(keys, amps)

    def to_dict(self):
        return {key_to_modes(k): complex(a) for k, a in zip(self.keys, self.amps)}

    @classmethod
    def from_json(cls, items):
        """Inverse of :meth:`to_json`."""
        return cls.from_dict({tuple(it["modes"]): complex(it["amp"][0], it["amp"][1]) for it in items})

    def to_json(self):
        return [
            {"modes": list(key_to_modes(k)), "amp": [float(a.real), float(a.imag)]}
            for k, a in zip(self.keys, self.amps)
        ]

    # --------------------------------------------------------- properties
    def __len__(self):
        return len(self.keys)

    def __repr__(self):
        items = ", ".join(f"{m}: {a:.4g}" for m, a in list(self.to_dict().items())[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"FockVector({{{items}{more}}})"

    @property
    def is_zero(self) -> bool:
        return len(self.keys) == 0

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def inner(self, other: "FockVector") -> complex:
        """<self, other>, antilinear in ``self``."""
        _, i, j = np.intersect1d(self.keys, other.keys, assume_unique=True, return_indices=True)
        return complex(np.vdot(self.amps[i], other.amps[j]))

    def particle_numbers(self):
        return np.bitwise_count(self.keys).astype(int)

    def max_particles(self) -> int:
        return int(self.particle_numbers().max(initial=0))

    def min_particles(self) -> int:
        if self.is_zero:
            return 0
        return int(self.particle_numbers().min())

    def max_mode(self) -> int:
        """Highest occupied mode, -1 for the vacuum or zero vector."""
        if self.is_zero:
            return -1
        k = int(self.keys.max())
        return k.bit_length() - 1

    def mode_bound(self) -> int:
        """Highest occupied mode over all entries, -1 if none."""
        if self.is_zero:
            return -1
        combined = int(np.bitwise_or.reduce(self.keys))
        return combined.bit_length() - 1

    # ---------------------------------------------------------- arithmetic
    def __add__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return FockVector(np.concatenate([self.keys, other.keys]), np.concatenate([self.amps, other.amps]))

    def __sub__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __mul__(self, scalar):
        if isinstance(scalar, FockVector):
            return NotImplemented
        return FockVector(self.keys, self.amps * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def distance(self, other) -> float:
        """||self - other|| computed without pruning small differences."""
        _, amps = merge(np.concatenate([self.keys, other.keys]), np.concatenate([self.amps, -other.amps]), tol=-1.0)
        return float(np.linalg.norm(amps))

    def allclose(self, other, atol=1e-12) -> bool:
        return self.distance(other) <= atol

    def normalized(self):
        return self / self.norm()


def linear_combination(vectors, coefs) -> FockVector:
    """sum_i coefs[i] * vectors[i]."""
    keys = [v.keys for v in vectors]
    amps = [c * v.amps for v, c in zip(vectors, coefs)]
    if not keys:
        return FockVector()
    return FockVector(np.concatenate(keys), np.concatenate(amps))
