"""First-order asymptotics of eigenvalues and eigenvectors of perturbed matrices.

A perturbed matrix is given by its leading coefficients ``a`` and leading
exponents ``A``, meaning ``(A_eps)_ij = a_ij eps^A_ij + o(eps^A_ij)``.  An
infinite exponent means the entry is identically zero.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .core import kleene_star, saturation_graph
from .critical import CriticalDecomposition, critical_sequence, gamma_equals_beta_blocks
from .graph import Digraph, sccs
from .poly import TropPoly, roots, trop_eval
from .semiring import ONE, ZERO, Scalar, TropMatrix, format_scalar, scalar

# relative size under which an eigenvalue of a singular t^ell counts as zero
ZERO_EIG_TOL = 1e-6
# relative eigenvalue separation required for a simple eigenvalue
SIMPLE_TOL = 1e-6
# relative size under which an entry of an eigenvector coefficient counts as zero
ENTRY_TOL = 1e-8


class Degenerate(ValueError):
    """First-order data do not determine the first-order asymptotics."""


class NonSimpleEigenvalue(ValueError):
    pass


class SingularLevel(ValueError):
    pass


class NoNonzeroAnchor(ValueError):
    pass


def _sort_key(z: complex) -> tuple[float, float]:
    ang = cmath.phase(z)
    if ang < 0:
        ang += 2 * math.pi
    # rounding keeps the order stable against last-bit noise
    return (round(abs(z), 9), round(ang, 9))


def sort_complex(zs) -> list[complex]:
    return sorted((complex(z) for z in zs), key=_sort_key)


# -- perturbed matrices ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PerturbedMatrix:
    a: np.ndarray
    A: TropMatrix

    def __post_init__(self):
        a = np.array(self.a, dtype=complex)
        if a.shape != (self.A.n, self.A.n):
            raise ValueError(f"coefficient matrix has shape {a.shape}, expected {(self.A.n, self.A.n)}")
        if not np.all(np.isfinite(a)):
            raise ValueError("coefficients must be finite")
        mask = np.array([[x == ZERO for x in row] for row in self.A.entries], dtype=bool).reshape(a.shape)
        a[mask] = 0
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return self.A.n

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PerturbedMatrix)
            and self.A == other.A
            and np.array_equal(self.a, other.a)
        )

    def to_json(self) -> dict:
        entries = []
        for i in range(self.n):
            for j in range(self.n):
                e = self.A.entries[i][j]
                if e == ZERO:
                    continue
                c = complex(self.a[i, j])
                entries.append(
                    {"i": i + 1, "j": j + 1, "coeff": [c.real, c.imag], "exp": format_scalar(e)}
                )
        return {"n": self.n, "entries": entries}

    @classmethod
    def from_json(cls, obj: dict) -> "PerturbedMatrix":
        n = int(obj["n"])
        if n < 1:
            raise ValueError("n must be positive")
        a = np.zeros((n, n), dtype=complex)
        A = [[ZERO] * n for _ in range(n)]
        seen = set()
        for e in obj["entries"]:
            i, j = int(e["i"]) - 1, int(e["j"]) - 1
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"entry ({i + 1}, {j + 1}) outside a {n}x{n} matrix")
            if (i, j) in seen:
                raise ValueError(f"duplicate entry ({i + 1}, {j + 1})")
            seen.add((i, j))
            c = e.get("coeff", [1.0, 0.0])
            a[i, j] = complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
            x = scalar(e.get("exp", "inf"))
            if x == -math.inf:
                raise ValueError("exponent -inf is not allowed")
            A[i][j] = x
        return cls(a, TropMatrix.from_rows(A))


def masked(a: np.ndarray, g: Digraph, labels: Sequence[int] | None = None) -> np.ndarray:
    """``a^G``: keep the entries on arcs of ``g``, zero elsewhere."""
    n = a.shape[0]
    pos = {lab: k for k, lab in enumerate(labels if labels is not None else range(n))}
    out = np.zeros_like(a)
    for i, j in g.arcs:
        out[pos[i], pos[j]] = a[pos[i], pos[j]]
    return out


# -- first-order Newton-Puiseux ---------------------------------------------


@dataclass(frozen=True)
class FirstOrderCoeff:
    """``f(eps) = coeff eps^exponent + o(eps^exponent)``; an infinite exponent means f = 0."""

    coeff: complex
    exponent: Scalar

    def __post_init__(self):
        e = scalar(self.exponent)
        object.__setattr__(self, "exponent", e)
        object.__setattr__(self, "coeff", 0j if e == ZERO else complex(self.coeff))


def newton_puiseux_first_order(coeffs: Sequence[FirstOrderCoeff]) -> list[FirstOrderCoeff]:
    """Leading terms of the roots of ``sum_j P_j(eps) Y^j`` from those of its coefficients.

    ``coeffs[j]`` describes ``P_j``; the polynomial must be monic.  Returns
    one entry per root, with multiplicity, ordered by exponent then
    coefficient.  Identically zero roots come last with an infinite exponent.
    """
    cs = [c if isinstance(c, FirstOrderCoeff) else FirstOrderCoeff(*c) for c in coeffs]
    n = len(cs) - 1
    if n < 1:
        raise ValueError("polynomial of degree >= 1 required")
    if cs[n].exponent != ONE or cs[n].coeff != 1:
        raise ValueError("polynomial must be monic (leading term 1 eps^0)")
    P = TropPoly(tuple(c.exponent for c in cs))
    p = [c.coeff for c in cs]
    c_roots = roots(P)
    if p[0] == 0 and P.coeffs[0] != ZERO:
        raise Degenerate("first-order data insufficient: constant coefficient is o(eps^P_0)")
    for i in range(1, n):
        if c_roots[i - 1] < c_roots[i] and p[n - i] == 0:
            raise Degenerate(
                f"first-order data insufficient: coefficient of Y^{n - i} vanishes at a breakpoint"
            )
    out: list[FirstOrderCoeff] = []
    for c in sorted(set(x for x in c_roots if x != ZERO)):
        val = trop_eval(P, c)
        support = [j for j in range(n + 1) if P.coeffs[j] != ZERO and P.coeffs[j] + j * c == val]
        lo, hi = min(support), max(support)
        poly = np.zeros(hi - lo + 1, dtype=complex)
        for j in support:
            poly[j - lo] = p[j]
        ys = linalg.poly_roots(poly)
        out.extend(FirstOrderCoeff(y, c) for y in sort_complex(ys))
    out.extend(FirstOrderCoeff(0, ZERO) for x in c_roots if x == ZERO)
    return out


# -- eigenvalues -------------------------------------------------------------


@dataclass(frozen=True)
class LevelAsymptotics:
    """Eigenvalue groups attached to one critical value.

    ``equivalents`` are the coefficients ``lambda`` of eigenvalues
    ``lambda eps^alpha``.  ``n_omega`` eigenvalues are of larger order and
    ``n_o`` of smaller order.  Counts are None when the level is singular.
    """

    level: int
    alpha: Fraction
    size: int
    r_invertible: bool
    t_invertible: bool
    equivalents: tuple[complex, ...] = ()
    n_omega: int | None = None
    n_o: int | None = None

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "alpha": format_scalar(self.alpha),
            "size": self.size,
            "r_invertible": self.r_invertible,
            "t_invertible": self.t_invertible,
            "equivalents": [
                {"lambda": [z.real, z.imag], "exponent": format_scalar(self.alpha)}
                for z in self.equivalents
            ],
            "omega": self.n_omega,
            "o": self.n_o,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LevelAsymptotics":
        return cls(
            int(obj["level"]),
            Fraction(obj["alpha"]),
            int(obj["size"]),
            bool(obj["r_invertible"]),
            bool(obj["t_invertible"]),
            tuple(complex(e["lambda"][0], e["lambda"][1]) for e in obj["equivalents"]),
            obj["omega"],
            obj["o"],
        )


@dataclass(frozen=True)
class EigAsymptotics:
    n: int
    levels: tuple[LevelAsymptotics, ...]

    def predictions(self) -> list[tuple[complex, Fraction]]:
        """All predicted equivalents ``(lambda, exponent)``."""
        return [(z, lv.alpha) for lv in self.levels for z in lv.equivalents]

    def exponents(self) -> list[Fraction]:
        return sorted(alpha for _, alpha in self.predictions())

    def to_json(self) -> dict:
        return {"n": self.n, "levels": [lv.to_json() for lv in self.levels]}

    @classmethod
    def from_json(cls, obj: dict) -> "EigAsymptotics":
        return cls(int(obj["n"]), tuple(LevelAsymptotics.from_json(x) for x in obj["levels"]))


def _level_blocks(dec: CriticalDecomposition, s1: np.ndarray, ell: int):
    """``(r_ok, t, t_positions)`` for level ``ell``; ``t`` is None when ``r`` is singular."""
    prev = dec.A.positions(sorted(dec.upto(ell - 1)))
    cur = dec.A.positions(sorted(dec.classes[ell - 1]))
    try:
        s, N = linalg.schur_complement(prev, s1)
    except linalg.SingularBlock:
        return False, None, cur
    where = {p: k for k, p in enumerate(N)}
    idx = [where[p] for p in cur]
    return True, s[np.ix_(idx, idx)], cur


def _nonzero_eigenvalues(t: np.ndarray, scale: float) -> tuple[bool, list[complex]]:
    """Invertibility of ``t`` and its eigenvalues that are not rounding residue.

    ``scale`` is the size of the data ``t`` was computed from; the pivot
    ratio alone is blind to a block that is uniformly of rounding size.
    """
    ev = linalg.eigenvalues(t)
    cut = ZERO_EIG_TOL * max(np.linalg.norm(t), scale, 1e-300)
    nz = [z for z in ev if abs(z) > cut]
    return linalg.is_invertible(t) and len(nz) == len(ev), nz


def eig_asymptotics(
    P: PerturbedMatrix, graph: Digraph | None = None, dec: CriticalDecomposition | None = None
) -> EigAsymptotics:
    """Eigenvalue equivalents ``lambda eps^alpha_ell`` level by level.

    ``graph`` defaults to the critical graph of the last normalized matrix;
    any saturation graph of one of its eigenvectors may be passed instead.
    """
    dec = dec or critical_sequence(P.A)
    G = graph if graph is not None else dec.crit_graphs[-1]
    s1 = masked(P.a, G, P.A.labels)
    scale = float(np.linalg.norm(s1))
    n = P.n
    levels = []
    for ell in range(1, dec.k + 1):
        alpha = dec.alphas[ell - 1]
        size = len(dec.classes[ell - 1])
        r_ok, t, _ = _level_blocks(dec, s1, ell)
        if not r_ok:
            levels.append(LevelAsymptotics(ell, alpha, size, False, False))
            continue
        t_ok, nz = _nonzero_eigenvalues(t, scale)
        before = len(dec.upto(ell - 1))
        levels.append(
            LevelAsymptotics(
                ell, alpha, size, True, t_ok, tuple(sort_complex(nz)), before, n - before - len(nz)
            )
        )
    return EigAsymptotics(n, tuple(levels))


@dataclass(frozen=True)
class GenericExponents:
    """Roots of the min-plus characteristic polynomial.

    They weakly majorize the true eigenvalue exponents and coincide with
    them for generic coefficients.  ``caveat`` is set when some level fails
    the disjoint circuit cover condition, so the level structure cannot
    confirm every exponent.
    """

    roots: tuple[Scalar, ...]
    caveat: bool


def generic_exponents(P: PerturbedMatrix | TropMatrix) -> GenericExponents:
    A = P.A if isinstance(P, PerturbedMatrix) else P
    rep = gamma_equals_beta_blocks(A, check=False)
    return GenericExponents(rep.gamma, not all(rep.covers))


# -- eigenvectors ------------------------------------------------------------


@dataclass(frozen=True)
class EigvecAsymptotics:
    """``(V_eps)_j / (V_eps)_anchor ~ w_j eps^(V_j - V_anchor)`` with ``w_anchor = 1``."""

    mu: complex
    level: int
    w: tuple[complex, ...]
    V: tuple[Scalar, ...]
    anchor: int
    zero_entries: tuple[int, ...]
    class_labels: frozenset = field(default=frozenset())

    def ratio_exponents(self) -> tuple[Scalar, ...]:
        va = self.V[self.anchor]
        return tuple(ZERO if v == ZERO else v - va for v in self.V)

    def to_json(self) -> dict:
        return {
            "mu": [self.mu.real, self.mu.imag],
            "level": self.level,
            "anchor": self.anchor + 1,
            "w": [[z.real, z.imag] for z in self.w],
            "V": [format_scalar(v) for v in self.V],
            "zero_entries": [i + 1 for i in self.zero_entries],
            "class": sorted(i + 1 for i in self.class_labels),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EigvecAsymptotics":
        return cls(
            complex(*obj["mu"]),
            int(obj["level"]),
            tuple(complex(*z) for z in obj["w"]),
            tuple(scalar(v) for v in obj["V"]),
            int(obj["anchor"]) - 1,
            tuple(i - 1 for i in obj["zero_entries"]),
            frozenset(i - 1 for i in obj.get("class", [])),
        )


def _pick_eigenvalue(t: np.ndarray, mu: complex) -> complex:
    ev = linalg.eigenvalues(t)
    scale = max(np.linalg.norm(t), 1.0)
    k = int(np.argmin(np.abs(ev - mu)))
    if abs(ev[k] - mu) > SIMPLE_TOL * scale:
        raise ValueError(f"{mu} is not an eigenvalue of t at this level")
    others = np.delete(ev, k)
    if others.size and np.min(np.abs(others - ev[k])) <= SIMPLE_TOL * scale:
        raise NonSimpleEigenvalue(f"{mu} is not a simple eigenvalue of t at this level")
    if abs(ev[k]) <= ZERO_EIG_TOL * scale:
        raise ValueError("mu must be a nonzero eigenvalue")
    return complex(ev[k])


def _canonical_class(dec: CriticalDecomposition, ell: int, t: np.ndarray, mu: complex) -> frozenset:
    """Critical class of the level-ell normalized matrix whose block of ``t`` has ``mu`` as eigenvalue."""
    cur = sorted(dec.classes[ell - 1])
    where = {lab: k for k, lab in enumerate(cur)}
    scale = max(np.linalg.norm(t), 1.0)
    hits = []
    for cls in sccs(dec.crit_graphs[ell - 1]):
        block = sorted(cls & dec.classes[ell - 1])
        if not block:
            continue
        idx = [where[lab] for lab in block]
        ev = linalg.eigenvalues(t[np.ix_(idx, idx)])
        hits.append((float(np.min(np.abs(ev - mu))), cls))
    hits.sort(key=lambda h: h[0])
    if not hits or hits[0][0] > SIMPLE_TOL * scale:
        raise ValueError("no critical block of t carries mu")
    if len(hits) > 1 and hits[1][0] <= SIMPLE_TOL * scale:
        raise NonSimpleEigenvalue("mu is an eigenvalue of several critical blocks of t")
    return hits[0][1]


def eigvec_asymptotics(
    P: PerturbedMatrix,
    ell: int,
    mu: complex,
    V: Sequence[Scalar] | None = None,
    dec: CriticalDecomposition | None = None,
) -> EigvecAsymptotics:
    """Leading behaviour of the eigenvector of the eigenvalue ``~ mu eps^alpha_ell``.

    ``V`` defaults to the canonical min-plus eigenvector: the star column of
    the smallest node of the critical class that carries ``mu``.
    """
    dec = dec or critical_sequence(P.A)
    if not 1 <= ell <= dec.k:
        raise IndexError(f"level {ell} outside 1..{dec.k}")
    s1 = masked(P.a, dec.crit_graphs[-1], P.A.labels)
    r_ok, t, _ = _level_blocks(dec, s1, ell)
    if not r_ok:
        raise SingularLevel(f"r at level {ell} is singular")
    mu = _pick_eigenvalue(t, complex(mu))
    Ah = dec.A_hat[ell - 1]
    cls = _canonical_class(dec, ell, t, mu)
    if V is None:
        S = kleene_star(Ah)
        j = Ah.position(min(cls))
        V = tuple(row[j] for row in S.entries)
    else:
        V = tuple(scalar(v) for v in V)
    sat = saturation_graph(Ah, V)
    n = P.n
    E = np.diag([0.0 if lab in dec.upto(ell - 1) else 1.0 for lab in P.A.labels])
    M = mu * E - masked(P.a, sat, P.A.labels)
    w = linalg.nullspace_vector(M)
    big = np.max(np.abs(w))
    zero = tuple(i for i in range(n) if abs(w[i]) <= ENTRY_TOL * big)
    nz = [i for i in range(n) if i not in zero]
    if not nz:
        raise NoNonzeroAnchor("kernel vector vanishes numerically")
    anchor = nz[0]
    w = w / w[anchor]
    w[list(zero)] = 0
    return EigvecAsymptotics(
        mu, ell, tuple(complex(z) for z in w), V, anchor, zero, frozenset(cls)
    )
