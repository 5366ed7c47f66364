"""Shear coordinates on the Farey tessellation.

Circle homeomorphisms fixing 0, 1 and infinity correspond to real-valued
functions on the edges of the Farey tessellation.  This package computes the
correspondence in both directions, runs the window criteria that detect
quasisymmetry and symmetry of the boundary map, and carries the decorated
(lambda-length) variant with its convergence checks.
"""

__version__ = "0.1.0"
