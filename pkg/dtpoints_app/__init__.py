"""
dtpoints - exact motivic Donaldson-Thomas series of points on affine 3-space.

The package expands the rank-r DT partition function as a power series in q
with coefficients in Z(T), T = L^(1/2), and checks it against every
independent route available:

- the closed product and its factorisation into rank-one pieces
- the wall-crossing quotient of the Feit-Fine series, also checked in the
  framed motivic quantum torus
- the plethystic exponential with signed Adams operations
- the Euler specialisation T -> -1 and MacMahon's function
- exhaustive enumeration of r-colored plane partitions by the S statistic
- finite-field counts of commuting matrices

It also carries the saddle-point asymptotics of S.

Main Components:
- ring: Laurent polynomials and canonical rational functions in T
- qseries: truncated q-series and the DT / Feit-Fine / plethystic series
- quiver: quivers, Euler forms, the quantum torus and framed stability
- planepart: plane partitions, trace statistics and exact distributions
- asymptotic: saddle-point solver and moment asymptotics
- oracles: brute-force finite-field counts
- verify: identity suites used by ``dtpoints verify``
- cli: command-line front end

Usage:
    from dtpoints_app.qseries import expand_dt

    series = expand_dt(2, 6)

License: MIT
"""

from .constants import APP_VERSION

__version__ = APP_VERSION
__license__ = "MIT"

__all__ = ["APP_VERSION"]
