# cython: language_level=3
"""Compiled coefficient kernels; see _kernels.py for the reference versions."""


def mul_one_minus_qt(list c, Py_ssize_t t):
    """Multiply the coefficient list c by (1 - q**t)."""
    cdef Py_ssize_t n = len(c)
    cdef Py_ssize_t i
    cdef list out = c + [0] * t
    for i in range(n):
        out[i + t] = out[i + t] - c[i]
    return out


def div_one_minus_qt(list c, Py_ssize_t t):
    """Exactly divide the coefficient list c by (1 - q**t)."""
    cdef Py_ssize_t n = len(c)
    cdef Py_ssize_t i
    if n == 0:
        return []
    if n < t:
        raise ValueError("not divisible by 1 - q^t")
    cdef list q = c[:]
    for i in range(t, n):
        q[i] = q[i] + q[i - t]
    for i in range(n - t, n):
        if q[i] != 0:
            raise ValueError("not divisible by 1 - q^t")
    return q[: n - t]
