"""weightlab: weight spectral sequences of normal crossing divisors.

Exact simplicial models of a pair (X, Y) with Y a normal crossing divisor,
the five weight double complexes and their spectral sequences, cycle
completion, duality checks, and the plumbing fast path for surfaces.
"""

__version__ = "0.1.0"
