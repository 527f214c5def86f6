"""Taylor-series stepping for autonomous linear equations dx/dt = A x.

A step of length h stores v_k = (h A)^k x / k!, so x(t + theta h) is the
polynomial sum_k v_k theta^k for theta in [0, 1]. With h ||A|| <= 1 the terms
decay at least factorially; the series is cut once a term drops below
``TAYLOR_TOL`` relative to x. Intermediate output times and jump times are
then evaluated from the stored terms without further operator applications.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

TAYLOR_TOL = 1e-16
TAYLOR_KMAX = 80


def norm2(x: np.ndarray) -> float:
    """Squared 2-norm; numpy's pairwise summation keeps it reproducible."""
    return float(np.sum(x.real**2 + x.imag**2))


def operator_bound(matrix) -> float:
    """Upper bound sqrt(||M||_1 ||M||_inf) on the spectral norm."""
    a = abs(matrix)
    if sp.issparse(a):
        col = float(np.max(a.sum(axis=0))) if a.nnz else 0.0
        row = float(np.max(a.sum(axis=1))) if a.nnz else 0.0
    else:
        col = float(np.max(a.sum(axis=0)))
        row = float(np.max(a.sum(axis=1)))
    return float(np.sqrt(col * row))


def taylor_terms(apply, x: np.ndarray, h: float) -> list:
    """Series terms of exp(h A) x; ``apply(v)`` must return A v."""
    ref = norm2(x)
    terms = [x]
    v = x
    for k in range(1, TAYLOR_KMAX + 1):
        v = apply(v) * (h / k)
        terms.append(v)
        nv = norm2(v)
        if not np.isfinite(nv):
            raise FloatingPointError("non-finite Taylor term")
        if nv <= TAYLOR_TOL**2 * ref:
            return terms
    raise FloatingPointError("Taylor series did not converge; step too large for the operator bound")


def horner(terms: list, theta: float) -> np.ndarray:
    out = terms[-1]
    for v in reversed(terms[:-1]):
        out = out * theta + v
    return out
