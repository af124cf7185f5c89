"""polydiam: facet-path enumeration, chirotope SAT encoding, and polytope
edge-diameter bound propagation."""

__version__ = "0.1.0"
