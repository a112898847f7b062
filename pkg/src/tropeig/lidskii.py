"""Perturbations ``Nil + eps b`` of nilpotent Jordan matrices.

Jordan cells are listed in decreasing size: ``m[0]`` cells of size ``q[0]``,
then ``m[1]`` cells of size ``q[1]``, and so on.  Each cell has ones on its
superdiagonal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .asymptotics import EigAsymptotics, LevelAsymptotics, PerturbedMatrix, sort_complex
from .semiring import TropMatrix


@dataclass(frozen=True)
class NilSpec:
    m: tuple[int, ...]
    q: tuple[int, ...]

    def __post_init__(self):
        m, q = tuple(int(x) for x in self.m), tuple(int(x) for x in self.q)
        if not m or len(m) != len(q):
            raise ValueError("m and q must be nonempty and of equal length")
        if any(x < 1 for x in m) or q[-1] < 1:
            raise ValueError("multiplicities and cell sizes must be positive")
        if any(a <= b for a, b in zip(q, q[1:])):
            raise ValueError("cell sizes must be strictly decreasing")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return sum(mi * qi for mi, qi in zip(self.m, self.q))

    @property
    def k(self) -> int:
        return len(self.q)

    def cells(self) -> list[tuple[int, int, int]]:
        """``(group, first index, size)`` for every Jordan cell, 0-based."""
        out, start = [], 0
        for g, (mi, qi) in enumerate(zip(self.m, self.q)):
            for _ in range(mi):
                out.append((g, start, qi))
                start += qi
        return out


def nil_matrix(spec: NilSpec) -> np.ndarray:
    N = np.zeros((spec.n, spec.n))
    for _, s, size in spec.cells():
        for i in range(s, s + size - 1):
            N[i, i + 1] = 1.0
    return N


def anil_exponents(spec: NilSpec) -> TropMatrix:
    """Exponents of ``Nil + eps b`` for a dense ``b``: 0 on the ones of Nil, 1 elsewhere."""
    N = nil_matrix(spec)
    return TropMatrix.from_rows([[0 if x else 1 for x in row] for row in N])


def vnil(spec: NilSpec) -> tuple[Fraction, ...]:
    out = []
    for _, _, size in spec.cells():
        out.extend(Fraction(i, size) for i in range(size))
    return tuple(out)


def nil_perturbation(spec: NilSpec, b) -> PerturbedMatrix:
    """First-order data of ``Nil + eps b``; the ones of Nil take coefficient 1."""
    b = np.asarray(b, dtype=complex)
    if b.shape != (spec.n, spec.n):
        raise ValueError(f"b must be {spec.n}x{spec.n}")
    N = nil_matrix(spec)
    a = np.where(N != 0, 1.0 + 0j, b)
    return PerturbedMatrix(a, anil_exponents(spec))


def phi(spec: NilSpec, b, ell: int) -> np.ndarray:
    """Bottom rows and first columns of ``b`` over the cells of the first ``ell`` groups."""
    b = np.asarray(b, dtype=complex)
    cells = [c for c in spec.cells() if c[0] < ell]
    rows = [s + size - 1 for _, s, size in cells]
    cols = [s for _, s, _ in cells]
    return b[np.ix_(rows, cols)]


def lidskii(spec: NilSpec, b) -> EigAsymptotics:
    """Eigenvalue equivalents ``xi eps^(1/q_ell)`` with ``xi^q_ell`` an eigenvalue of a Schur complement of the Phi matrices.

    A level whose Phi matrices fail the invertibility test is reported with
    ``r_invertible`` (for ``Phi_{ell-1}``) or ``t_invertible`` (for
    ``Phi_ell``) false and no equivalents.
    """
    b = np.asarray(b, dtype=complex)
    n = spec.n
    levels = []
    before = 0  # eigenvalues of larger order: cells of the earlier groups
    for ell in range(1, spec.k + 1):
        q, m = spec.q[ell - 1], spec.m[ell - 1]
        alpha = Fraction(1, q)
        size = m * q
        prev_ok = ell == 1 or linalg.is_invertible(phi(spec, b, ell - 1))
        cur = phi(spec, b, ell)
        cur_ok = linalg.is_invertible(cur)
        if not (prev_ok and cur_ok):
            levels.append(LevelAsymptotics(ell, alpha, size, prev_ok, cur_ok))
        else:
            s, _ = linalg.schur_complement(range(cur.shape[0] - m), cur)
            xis = []
            for lam in linalg.eigenvalues(s):
                root = complex(lam) ** (1.0 / q)
                xis.extend(root * np.exp(2j * np.pi * r / q) for r in range(q))
            levels.append(
                LevelAsymptotics(
                    ell, alpha, size, True, True, tuple(sort_complex(xis)), before, n - before - size
                )
            )
        before += size
    return EigAsymptotics(n, tuple(levels))
