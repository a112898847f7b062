"""Dense complex linear algebra used by the asymptotic formulas.

Thin wrappers over LAPACK (via numpy/scipy) that turn the exact
invertible/singular and rank dichotomies into explicit numerical tests.

Tolerances are module attributes so a caller (the CLI) can override them
globally; every function also accepts an explicit keyword.
"""
from __future__ import annotations

import warnings
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

PIVOT_TOL = 1e-10
NULLSPACE_TOL = 1e-8
MAX_EIG_DIM = 200


class SingularBlock(ValueError):
    """The block to eliminate failed the pivot test."""

    def __init__(self, C: Sequence[int], ratio: float):
        self.C = tuple(C)
        self.ratio = ratio
        super().__init__(f"block {list(self.C)} is numerically singular (pivot ratio {ratio:.3g})")


class RankError(ValueError):
    """Matrix does not have numerical corank exactly one."""


class ConvergenceError(RuntimeError):
    pass


def _as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"square matrix required, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def pivot_ratio(m) -> float:
    """Smallest over largest |pivot| of a partially pivoted LU factorization (0 if all vanish)."""
    a = _as_square(m)
    if a.shape[0] == 0:
        return 1.0
    with warnings.catch_warnings():
        # exact zero pivots are the expected outcome for singular blocks
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, _ = scipy.linalg.lu_factor(a, check_finite=False)
    piv = np.abs(np.diag(lu))
    top = piv.max()
    return float(piv.min() / top) if top > 0 else 0.0


def is_invertible(m, tol: float | None = None) -> bool:
    return pivot_ratio(m) > (PIVOT_TOL if tol is None else tol)


def schur_complement(
    C: Iterable[int], a, tol: float | None = None
) -> tuple[np.ndarray, tuple[int, ...]]:
    """``a_NN - a_NC a_CC^{-1} a_CN`` and the positions ``N`` it is indexed by."""
    a = _as_square(a)
    n = a.shape[0]
    C = sorted(set(C))
    if any(not 0 <= c < n for c in C):
        raise IndexError("Schur complement index outside the matrix")
    N = [i for i in range(n) if i not in set(C)]
    if not C:
        return a.copy(), tuple(N)
    acc = a[np.ix_(C, C)]
    ratio = pivot_ratio(acc)
    if not ratio > (PIVOT_TOL if tol is None else tol):
        raise SingularBlock(C, ratio)
    if not N:
        return np.zeros((0, 0), dtype=complex), ()
    x = np.linalg.solve(acc, a[np.ix_(C, N)])
    return a[np.ix_(N, N)] - a[np.ix_(N, C)] @ x, tuple(N)


def eigenvalues(m) -> np.ndarray:
    """All eigenvalues with multiplicity (LAPACK Hessenberg QR)."""
    a = _as_square(m)
    if a.shape[0] > MAX_EIG_DIM:
        raise ValueError(f"eigenvalue backend limited to n <= {MAX_EIG_DIM}")
    if a.shape[0] == 0:
        return np.zeros(0, dtype=complex)
    try:
        return np.linalg.eigvals(a).astype(complex)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc


def nullspace_vector(m, tol: float | None = None) -> np.ndarray:
    """Unit vector spanning the kernel of a matrix of numerical corank one."""
    a = _as_square(m)
    tol = NULLSPACE_TOL if tol is None else tol
    n = a.shape[0]
    if n == 0:
        raise RankError("empty matrix has no kernel vector")
    _, s, vh = np.linalg.svd(a)
    thresh = tol * s[0] if s[0] > 0 else 0.0
    if n > 1 and s[0] == 0:
        raise RankError("zero matrix has a kernel of dimension > 1")
    if s[-1] > thresh:
        raise RankError(f"matrix is nonsingular (sigma_min/sigma_max = {s[-1] / s[0]:.3g})")
    if n > 1 and s[-2] <= thresh:
        raise RankError("kernel has dimension > 1")
    return vh[-1].conj()


def poly_roots(p: Sequence[complex]) -> np.ndarray:
    """Roots of ``sum_k p[k] z^k`` (lowest degree first) from companion eigenvalues."""
    p = np.asarray(p, dtype=complex)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("coefficient vector required")
    if p[-1] == 0:
        raise ValueError("leading coefficient is zero")
    deg = p.size - 1
    if deg == 0:
        return np.zeros(0, dtype=complex)
    comp = np.zeros((deg, deg), dtype=complex)
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -p[:-1] / p[-1]
    return eigenvalues(comp)
