"""Numerical laboratory for Apéry-type series, multiple zeta/t-values and
colored MZVs of level 4, with double-double arithmetic throughout."""
from . import apery, cmzv, compositions, legendre, sums, words, xprec

__version__ = "0.1.0"

__all__ = ["apery", "cmzv", "compositions", "legendre", "sums", "words", "xprec", "__version__"]
