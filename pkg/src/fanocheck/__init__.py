"""Exact-arithmetic checks for the numerology of Fano threefold rationality.

Modules:

* ``chow``      trilinear intersection forms on blowups of Fano threefolds
* ``linsys``    Riemann-Roch dimension counts and bounds for linear systems
* ``links``     enumeration of extremal contraction types after a flop
* ``torsors``   cyclic torsor-class bookkeeping and the gcd condition
* ``eulerchar`` Hilbert polynomials, Betti tables, Euler characteristics
* ``registry``  family-level data file (criteria, torsor setups, F1 models)
* ``cli``       verification suites with citation-annotated reports
"""

__version__ = "0.1.0"
