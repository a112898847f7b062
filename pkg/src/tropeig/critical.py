"""Critical values of an irreducible min-plus matrix.

Repeatedly takes the minimal circuit mean of the current matrix, marks its
critical nodes, and eliminates them by a normalized min-plus Schur
complement.  The resulting levels drive the eigenvalue asymptotics.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction

from .core import (
    _critical_nodes,
    _karp,
    _require_irreducible,
    critical_graph,
    kleene_star,
    min_circuit_mean,
    trop_schur,
)
from .graph import Digraph, has_disjoint_circuit_cover
from .poly import char_poly_roots
from .semiring import ONE, Scalar, TropMatrix


@dataclass(frozen=True)
class CriticalDecomposition:
    """Levels ``1..k`` stored at list indices ``0..k-1``; node sets use the labels of ``A``."""

    A: TropMatrix
    alphas: tuple[Fraction, ...]
    classes: tuple[frozenset, ...]
    A_levels: tuple[TropMatrix, ...]

    # per-level scalings and graphs are derived lazily; they cost more than the levels themselves
    @cached_property
    def D(self) -> tuple[tuple[Fraction, ...], ...]:
        out = []
        for ell in range(1, self.k + 1):
            d = []
            for lab in self.A.labels:
                m = self.level_of(lab)
                d.append(self.alphas[m - 1] if m < ell else self.alphas[ell - 1])
            out.append(tuple(d))
        return tuple(out)

    @cached_property
    def A_hat(self) -> tuple[TropMatrix, ...]:
        return tuple(self.A.scale_rows(d) for d in self.D)

    @cached_property
    def crit_graphs(self) -> tuple[Digraph, ...]:
        return tuple(critical_graph(Ah) for Ah in self.A_hat)

    @property
    def k(self) -> int:
        return len(self.alphas)

    @property
    def beta(self) -> tuple[Fraction, ...]:
        return tuple(a for a, c in zip(self.alphas, self.classes) for _ in c)

    def upto(self, ell: int) -> frozenset:
        """``C^ell``, the union of the first ``ell`` classes (``C^0`` is empty)."""
        return frozenset().union(*self.classes[:ell])

    def level_of(self, label) -> int:
        for ell, c in enumerate(self.classes, start=1):
            if label in c:
                return ell
        raise KeyError(label)


def _critical_node_labels(M: TropMatrix) -> tuple[Fraction, frozenset]:
    # Schur complements of irreducible matrices stay irreducible
    rho = _karp(M)
    Mt = M.shift(-rho)
    S = kleene_star(Mt)
    return rho, frozenset(M.labels[j] for j in _critical_nodes(Mt, S))


def critical_sequence(A: TropMatrix, check: bool = False) -> CriticalDecomposition:
    """Critical values, classes, diagonal scalings and order-ell critical graphs of ``A``.

    With ``check=True`` the structural identities relating the levels are
    asserted (Schur identity for the levels, zero circuit mean of each
    normalized matrix, node set and nesting of the critical graphs).
    """
    _require_irreducible(A)
    alphas, classes, levels = [], [], []
    cur = A
    done: frozenset = frozenset()
    while True:
        levels.append(cur)
        alpha, C = _critical_node_labels(cur)
        alphas.append(alpha)
        classes.append(C)
        done = done | C
        if len(done) == A.n:
            break
        cur = trop_schur(C, alpha, cur)

    dec = CriticalDecomposition(A, tuple(alphas), tuple(classes), tuple(levels))
    if check:
        _check(dec)
    return dec


def _check(dec: CriticalDecomposition) -> None:
    for a, b in zip(dec.alphas, dec.alphas[1:]):
        assert a < b, "critical values must increase strictly"
    for ell in range(1, dec.k + 1):
        Ah = dec.A_hat[ell - 1]
        assert min_circuit_mean(Ah) == ONE
        lhs = dec.A_levels[ell - 1]
        rhs = trop_schur(dec.upto(ell - 1), ONE, Ah).shift(dec.alphas[ell - 1])
        assert lhs == rhs, f"level {ell} does not match the normalized Schur complement"
        g = dec.crit_graphs[ell - 1]
        assert g.nodes == dec.upto(ell), f"critical graph of level {ell} has the wrong node set"
        if ell > 1:
            assert dec.crit_graphs[ell - 2].issubgraph(g), "critical graphs must be nested"


def critical_graph_order(dec: CriticalDecomposition, ell: int) -> Digraph:
    """``G^c_ell(A)``, the critical graph of the normalized matrix of level ``ell``."""
    if not 1 <= ell <= dec.k:
        raise IndexError(f"level {ell} outside 1..{dec.k}")
    return dec.crit_graphs[ell - 1]


def disjoint_circuit_cover(g: Digraph) -> bool:
    return has_disjoint_circuit_cover(g)


@dataclass(frozen=True)
class LevelReport:
    level: int
    alpha: Fraction
    size: int
    cover: bool  # both G^c_{ell-1} and G^c_ell have a disjoint circuit cover
    gamma_block: tuple[Scalar, ...]
    block_equal: bool  # gamma = beta on the block and on the prefix sum before it


@dataclass(frozen=True)
class GammaBetaReport:
    gamma: tuple[Scalar, ...]
    beta: tuple[Fraction, ...]
    covers: tuple[bool, ...] = field(default=())  # covers[ell] for ell = 0..k
    levels: tuple[LevelReport, ...] = field(default=())


def gamma_equals_beta_blocks(
    A: TropMatrix, dec: CriticalDecomposition | None = None, check: bool = True
) -> GammaBetaReport:
    """Compare the characteristic roots with the critical values, level by level.

    The cover condition and the block equality are computed independently;
    with ``check=True`` their equivalence, and the exact multiplicity of
    ``alpha_ell`` as a root when the condition holds, are asserted.
    """
    dec = dec or critical_sequence(A)
    gamma = char_poly_roots(A)
    beta = dec.beta
    covers = (True,) + tuple(has_disjoint_circuit_cover(g) for g in dec.crit_graphs)
    reports = []
    for ell in range(1, dec.k + 1):
        lo, hi = len(dec.upto(ell - 1)), len(dec.upto(ell))
        block = tuple(gamma[lo:hi])
        prefix_ok = sum(gamma[:lo], Fraction(0)) == sum(beta[:lo], Fraction(0))
        equal = prefix_ok and block == tuple(beta[lo:hi])
        cover = covers[ell - 1] and covers[ell]
        if check:
            assert cover == equal, f"cover condition and root equality disagree at level {ell}"
            if cover:
                mult = sum(1 for g in gamma if g == dec.alphas[ell - 1])
                assert mult == hi - lo, f"alpha_{ell} has root multiplicity {mult}, expected {hi - lo}"
        reports.append(LevelReport(ell, dec.alphas[ell - 1], hi - lo, cover, block, equal))
    return GammaBetaReport(tuple(gamma), beta, covers, tuple(reports))
