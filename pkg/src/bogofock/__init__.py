"""Implementing isometries for Bogoliubov endomorphisms of the CAR algebra.

Exact arithmetic on finite-type operators of the selfdual one-particle space,
a sparse Fock-space engine and the construction of the full family of
implementing isometries, with brute-force oracles for every identity.
"""

__version__ = "0.1.0"
