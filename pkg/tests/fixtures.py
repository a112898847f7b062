"""Worked matrices shared by the tests and the files under data/."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from tropeig.asymptotics import FirstOrderCoeff, PerturbedMatrix
from tropeig.lidskii import NilSpec, nil_perturbation
from tropeig.semiring import ZERO, TropMatrix

INF = ZERO


def random_complex(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def four_node_exponents() -> TropMatrix:
    """Critical values 0, 2, 4 with classes {1,2}, {3}, {4}."""
    return TropMatrix.from_rows(
        [
            [INF, 0, INF, INF],
            [0, INF, 1, INF],
            [1, INF, INF, 2],
            [INF, INF, 4, 5],
        ]
    )


def four_node(a: np.ndarray) -> PerturbedMatrix:
    return PerturbedMatrix(a, four_node_exponents())


def cube_root() -> PerturbedMatrix:
    """Three eigenvalues of order eps^(-1/3) along the cube roots of unity."""
    A = TropMatrix.from_rows([[1, 0, 4], [INF, 1, -2], [1, 2, INF]])
    return PerturbedMatrix(np.ones((3, 3)), A)


def canonical_choice() -> PerturbedMatrix:
    """Eigenvector ratios depend on which min-plus eigenvector is used."""
    A = TropMatrix.from_rows([[0, 1, 3], [1, 2, INF], [3, INF, 2]])
    a = np.array([[1, 1, 1], [-2, 1, 0], [1, 0, 2]], dtype=complex)
    return PerturbedMatrix(a, A)


def puiseux_poly() -> list[FirstOrderCoeff]:
    """Y^3 + eps^5 Y^2 - eps^6 Y + eps^13, lowest degree first."""
    return [
        FirstOrderCoeff(1, Fraction(13)),
        FirstOrderCoeff(-1, Fraction(6)),
        FirstOrderCoeff(1, Fraction(5)),
        FirstOrderCoeff(1, Fraction(0)),
    ]


def puiseux_poly_small_middle() -> list[FirstOrderCoeff]:
    """Same polynomial with the Y^2 coefficient only known to be o(eps^3)."""
    c = puiseux_poly()
    c[2] = FirstOrderCoeff(0, Fraction(3))
    return c


WILKINSON = NilSpec((1, 1), (3, 2))


def wilkinson(b: np.ndarray) -> PerturbedMatrix:
    """``Nil(3,2) + eps b`` with ``b_31 = 0``."""
    b = np.array(b, dtype=complex)
    b[2, 0] = 0
    P = nil_perturbation(WILKINSON, b)
    rows = P.A.rows()
    rows[2][0] = INF
    return PerturbedMatrix(P.a, TropMatrix.from_rows(rows))


NINE = NilSpec((2, 1, 1), (3, 2, 1))


def nine_node(b: np.ndarray) -> PerturbedMatrix:
    """``Nil(3,3,2,1) + eps b`` with ``b_61 = b_64 = 0``."""
    b = np.array(b, dtype=complex)
    P = nil_perturbation(NINE, b)
    rows = P.A.rows()
    for j in (0, 3):
        rows[5][j] = INF
    return PerturbedMatrix(P.a, TropMatrix.from_rows(rows))


def seven_node(b: np.ndarray) -> PerturbedMatrix:
    """Sparse 7x7 matrix with groups at eps^(2/3) and eps^(3/4)."""
    b = np.asarray(b, dtype=complex)
    support = [(2, 3), (3, 1), (3, 4), (5, 6), (6, 7), (7, 1), (7, 4)]
    rows = [[INF] * 7 for _ in range(7)]
    a = np.zeros((7, 7), dtype=complex)
    for i, j in ((1, 2), (4, 5)):
        rows[i - 1][j - 1] = Fraction(0)
        a[i - 1, j - 1] = 1
    for i, j in support:
        rows[i - 1][j - 1] = Fraction(1)
        a[i - 1, j - 1] = b[i - 1, j - 1]
    return PerturbedMatrix(a, TropMatrix.from_rows(rows))
