"""Exact-arithmetic verification engine for divisibility properties of
binomial and q-binomial coefficients."""

__version__ = "0.1.0"

from ._backend import BACKEND as KERNEL_BACKEND  # noqa: F401
