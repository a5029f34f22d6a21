"""Exact analysis of the de Bruijn process.

A continuous-time Markov chain on words of length L over {1..n}: from ``u``
the chain jumps to ``u[1:] + (a,)`` at a rate set by the final block of the
target word.  The package computes the stationary law, partition function,
spectrum and correlation functions exactly over the rationals, and checks
each closed form against an independent oracle.
"""
from .words import Block, RateError, RateSystem, Word, beta_index, block_factorize, shift_append
from .stationary import mu, mu_bar, partition_function, rho_bar, stationary_vector
from .spectrum import eigenvalue_multiset, spectrum_verify

__all__ = [
    "Block",
    "RateError",
    "RateSystem",
    "Word",
    "beta_index",
    "block_factorize",
    "eigenvalue_multiset",
    "mu",
    "mu_bar",
    "partition_function",
    "rho_bar",
    "shift_append",
    "spectrum_verify",
    "stationary_vector",
]
