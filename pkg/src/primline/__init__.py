"""Primitive elements of the form beta(gamma + a) in cubic and quartic extensions.

Modules:
    arith    integer factorization and number-theoretic helpers
    field    log-indexed finite field tables
    charsum  numerical checks of character sum bounds and sieve counts
    sieve    exact-rational sieve criteria and the exception-list pipelines
    search   exhaustive line/translate deciders and campaigns
    cli      the ``primline`` command
"""

__version__ = "0.1.0"
