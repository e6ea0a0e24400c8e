"""isokit: symbolic-numeric toolkit for isochronous centers of planar systems.

Reduces polynomial systems quadratic in y to Lienard type, generates exact
necessary isochronicity conditions, verifies Urabe functions and linearizing
coordinates, and confirms constant periods numerically.  A bundled catalog
of isochronous-center families serves as the regression corpus.
"""

__version__ = "0.1.0"
