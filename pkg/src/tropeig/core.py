"""Min-plus spectral theory of irreducible matrices.

All node sets and graph arcs are expressed in the *labels* of the matrix
they were computed from, so results of Schur complements stay readable in
the numbering of the original problem.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx

from .graph import Digraph, sccs
from .semiring import (
    ONE,
    ZERO,
    DivergentStarError,
    ReducibleMatrixError,
    Scalar,
    TropMatrix,
    otimes,
)


def trop_matmul(A: TropMatrix, B: TropMatrix) -> TropMatrix:
    if A.n != B.n:
        raise ValueError(f"dimension mismatch: {A.n} vs {B.n}")
    n = A.n
    rows = []
    for i in range(n):
        Ai = A.entries[i]
        rows.append(
            tuple(min((otimes(Ai[k], B.entries[k][j]) for k in range(n)), default=ZERO) for j in range(n))
        )
    return TropMatrix(tuple(rows), A.labels)


def trop_matvec(A: TropMatrix, v: Sequence[Scalar]) -> tuple[Scalar, ...]:
    if len(v) != A.n:
        raise ValueError(f"dimension mismatch: {A.n} vs {len(v)}")
    return tuple(min((otimes(a, x) for a, x in zip(row, v)), default=ZERO) for row in A.entries)


def is_irreducible(A: TropMatrix) -> bool:
    if A.n == 0:
        return False
    g = nx.DiGraph()
    g.add_nodes_from(A.labels)
    g.add_edges_from(A.arcs())
    return nx.is_strongly_connected(g)


def _require_irreducible(A: TropMatrix) -> None:
    if not is_irreducible(A):
        raise ReducibleMatrixError()


def _int_rows(A: TropMatrix) -> tuple[list[list], int]:
    """Entries scaled to integers by a common denominator ``L``; None marks the zero."""
    L = 1
    for row in A.entries:
        for x in row:
            if type(x) is not float:
                L = math.lcm(L, Fraction(x).denominator)
    rows = [
        [None if type(x) is float else int(Fraction(x) * L) for x in row] for row in A.entries
    ]
    return rows, L


def min_circuit_mean(A: TropMatrix) -> Fraction:
    """Minimal circuit mean of an irreducible matrix (Karp's algorithm).

    ``D[k][v]`` is the least weight of a walk with exactly ``k`` arcs from
    node 0 to ``v``; then rho = min_v max_k (D[n][v] - D[k][v]) / (n - k).
    """
    _require_irreducible(A)
    return _karp(A)


def _karp(A: TropMatrix) -> Fraction:
    n = A.n
    E, L = _int_rows(A)
    D = [[None] * n for _ in range(n + 1)]
    D[0][0] = 0
    for k in range(1, n + 1):
        prev, cur = D[k - 1], D[k]
        for u in range(n):
            du = prev[u]
            if du is None:
                continue
            for v, w in enumerate(E[u]):
                if w is not None:
                    t = du + w
                    if cur[v] is None or t < cur[v]:
                        cur[v] = t
    best = ZERO
    for v in range(n):
        if D[n][v] is None:
            continue
        worst = max(
            Fraction(D[n][v] - D[k][v], (n - k) * L) for k in range(n) if D[k][v] is not None
        )
        best = min(best, worst)
    if best == ZERO:  # pragma: no cover - irreducible with n >= 1 always has a circuit
        raise ReducibleMatrixError("matrix has no circuit")
    return best


def kleene_star(A: TropMatrix) -> TropMatrix:
    """``I + A + A^2 + ...`` by Floyd-Warshall relaxation.

    Raises :class:`DivergentStarError` when some circuit has negative weight,
    i.e. when the star would have -inf entries.  Reducible input is fine;
    unreachable pairs stay at the min-plus zero.
    """
    n = A.n
    D, L = _int_rows(A)
    for i in range(n):
        if D[i][i] is None or D[i][i] > 0:
            D[i][i] = 0
    for k in range(n):
        Dk = D[k]
        for i in range(n):
            dik = D[i][k]
            if dik is None:
                continue
            Di = D[i]
            for j in range(n):
                dkj = Dk[j]
                if dkj is not None:
                    t = dik + dkj
                    if Di[j] is None or t < Di[j]:
                        Di[j] = t
        if D[k][k] < 0:
            raise DivergentStarError("Kleene star diverges: circuit of negative weight")
    if any(D[i][i] < 0 for i in range(n)):
        raise DivergentStarError("Kleene star diverges: circuit of negative weight")
    D = [[ZERO if x is None else Fraction(x, L) for x in row] for row in D]
    return TropMatrix(tuple(tuple(r) for r in D), A.labels)


def saturation_graph(A: TropMatrix, V: Sequence[Scalar]) -> Digraph:
    """Arcs (i, j) where the minimum defining ``(A V)_i`` is attained at ``j``."""
    AV = trop_matvec(A, V)
    lab = A.labels
    arcs = []
    for i, row in enumerate(A.entries):
        if AV[i] == ZERO:
            raise ValueError(f"row {lab[i]} of A (x) V is the min-plus zero")
        for j, a in enumerate(row):
            if a != ZERO and V[j] != ZERO and a + V[j] == AV[i]:
                arcs.append((lab[i], lab[j]))
    return Digraph(frozenset(lab), frozenset(arcs))


def _normalized(A: TropMatrix) -> tuple[Fraction, TropMatrix, TropMatrix]:
    rho = min_circuit_mean(A)
    At = A.shift(-rho)
    return rho, At, kleene_star(At)


def _critical_nodes(At: TropMatrix, S: TropMatrix) -> list[int]:
    # j is critical iff the least circuit weight through j, (At (x) At*)_jj, is 0
    n = At.n
    out = []
    for j in range(n):
        w = min((otimes(At.entries[j][k], S.entries[k][j]) for k in range(n)), default=ZERO)
        if w == ONE:
            out.append(j)
    return out


def _critical_from_sat(sat: Digraph) -> Digraph:
    # circuits of a saturation graph of an eigenvector are exactly the critical circuits
    nodes, arcs = set(), set()
    for comp in sccs(sat):
        inner = {(i, j) for (i, j) in sat.arcs if i in comp and j in comp}
        if inner:
            nodes |= comp
            arcs |= inner
    return Digraph(frozenset(nodes), frozenset(arcs))


def critical_graph(A: TropMatrix) -> Digraph:
    """Nodes and arcs lying on circuits of minimal mean."""
    _, At, S = _normalized(A)
    j0 = _critical_nodes(At, S)[0]
    V = [row[j0] for row in S.entries]
    return _critical_from_sat(saturation_graph(At, V))


def critical_classes(A: TropMatrix) -> list[frozenset]:
    return sccs(critical_graph(A))


def trop_eigenvectors(A: TropMatrix) -> list[tuple[Scalar, ...]]:
    """One generator of the eigenspace per critical class.

    The generator of a class is the star column of its smallest label.
    """
    _, At, S = _normalized(A)
    j0 = _critical_nodes(At, S)[0]
    V0 = [row[j0] for row in S.entries]
    classes = sccs(_critical_from_sat(saturation_graph(At, V0)))
    out = []
    for cls in classes:
        j = A.position(min(cls))
        out.append(tuple(row[j] for row in S.entries))
    return out


def trop_schur(C: Iterable[int], lam: Scalar, A: TropMatrix) -> TropMatrix:
    """Min-plus lambda-Schur complement of the labels ``C`` in ``A``.

    ``A_NN + A_NC (lam^-1 A_CC)* lam^-1 A_CN``; the result keeps the labels
    of ``N``.  Requires ``rho_min(A_CC) >= lam``.
    """
    C = set(C)
    if not C:
        return A
    if not C <= set(A.labels):
        raise KeyError("Schur complement index set is not a subset of the labels")
    if len(C) == A.n:
        raise ValueError("cannot eliminate every index")
    if lam == ZERO:
        raise ValueError("lambda must be finite")
    N = [lab for lab in A.labels if lab not in C]
    Cl = [lab for lab in A.labels if lab in C]
    try:
        S = kleene_star(A.sub(Cl).shift(-lam))
    except DivergentStarError as exc:
        raise DivergentStarError(f"rho_min(A_CC) < {lam}: Schur complement undefined") from exc
    ANC = A.block(N, Cl)
    ACN = A.block(Cl, N)
    c = len(Cl)
    # left factor A_NC (x) S, then times lam^-1 A_CN
    L = [
        [min((otimes(ANC[i][k], S.entries[k][j]) for k in range(c)), default=ZERO) for j in range(c)]
        for i in range(len(N))
    ]
    ANN = A.block(N, N)
    rows = []
    for i in range(len(N)):
        row = []
        for j in range(len(N)):
            via = min((otimes(L[i][k], otimes(ACN[k][j], -lam)) for k in range(c)), default=ZERO)
            row.append(min(ANN[i][j], via))
        rows.append(tuple(row))
    return TropMatrix(tuple(rows), tuple(N))
