"""Sparse fermionic Fock space over K1."""

from .kernels import BACKEND
from .ops import (
    annihilate,
    create,
    creation_annihilation,
    exp_pairs,
    field,
    lift,
    pair_annihilate,
    pair_create,
    parity,
    psi,
    psi_adjoint,
    transformed_annihilate,
    transformed_create,
)
from .vector import FockVector, linear_combination
from .wick import WickHamiltonian, vacuum_norm, wick_exp, wick_exp_adjoint

__all__ = [
    "BACKEND",
    "FockVector",
    "WickHamiltonian",
    "annihilate",
    "create",
    "creation_annihilation",
    "exp_pairs",
    "field",
    "lift",
    "linear_combination",
    "pair_annihilate",
    "pair_create",
    "parity",
    "psi",
    "psi_adjoint",
    "transformed_annihilate",
    "transformed_create",
    "vacuum_norm",
    "wick_exp",
    "wick_exp_adjoint",
]
