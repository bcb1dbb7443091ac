"""modcomp package.

Classification of finite-group actions with planar four-point signature
(0; m1, m2, m3, m4): generating vectors, Aut(G) classes, braid orbits
(strata of modular companions), cut-system tilings, modified Cayley graphs
and partial isometries between companions.
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
