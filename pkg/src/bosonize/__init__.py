"""Exact combinatorial bosonization toolkit.

Couples an Ising model and its dual into an eight-vertex model on the medial
graph, specializes to six-vertex / free-fermion points, and maps onward to
bipartite dimers, where Kasteleyn linear algebra takes over.  Every identity
in the chain is checkable against brute-force enumeration in exact arithmetic.
"""

__version__ = "0.1.0"
