"""Formal min-plus polynomials, their roots, and min-plus characteristic polynomials."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .graph import Digraph, has_disjoint_circuit_cover
from .semiring import ONE, ZERO, Scalar, TropMatrix, format_vector, scalar

BRUTE_FORCE_LIMIT = 12


@dataclass(frozen=True)
class TropPoly:
    """``P = min_k (P_k + k Y)``; ``coeffs[k]`` is the coefficient of ``Y^k``."""

    coeffs: tuple[Scalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(scalar(c) for c in self.coeffs))

    @property
    def degree(self):
        ks = [k for k, c in enumerate(self.coeffs) if c != ZERO]
        return ks[-1] if ks else float("-inf")

    @property
    def valuation(self):
        ks = [k for k, c in enumerate(self.coeffs) if c != ZERO]
        return ks[0] if ks else ZERO

    def __call__(self, y: Scalar) -> Scalar:
        return trop_eval(self, y)

    def to_json(self) -> dict:
        return {"coeffs": format_vector(self.coeffs)}

    @classmethod
    def from_json(cls, obj: dict) -> "TropPoly":
        return cls(tuple(obj["coeffs"]))


def trop_eval(P: TropPoly, y: Scalar) -> Scalar:
    best = ZERO
    for k, c in enumerate(P.coeffs):
        if c == ZERO:
            continue
        term = c if k == 0 else (ZERO if y == ZERO else c + k * y)
        best = min(best, term)
    return best


def hull_vertices(P: TropPoly) -> list[tuple[int, Fraction]]:
    """Vertices of the lower convex hull of the finite points ``(k, P_k)``."""
    pts = [(k, c) for k, c in enumerate(P.coeffs) if c != ZERO]
    hull: list[tuple[int, Fraction]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def convexify(P: TropPoly) -> TropPoly:
    """Coefficients of the lower convex hull sampled at the integers."""
    verts = hull_vertices(P)
    out = [ZERO] * len(P.coeffs)
    for (x1, y1), (x2, y2) in zip(verts, verts[1:]):
        for k in range(x1, x2):
            out[k] = y1 + Fraction(y2 - y1, x2 - x1) * (k - x1)
    if verts:
        out[verts[-1][0]] = verts[-1][1]
    return TropPoly(tuple(out))


def roots(P: TropPoly) -> tuple[Scalar, ...]:
    """Roots ``c_1 <= ... <= c_n`` with multiplicity; min-plus zero roots come last."""
    n = P.degree
    if n == float("-inf") or n < 1:
        raise ValueError("roots need a polynomial of degree >= 1")
    Q = convexify(P).coeffs
    out = []
    for i in range(1, n + 1):
        hi, lo = Q[n - i + 1], Q[n - i]
        out.append(ZERO if hi == ZERO or lo == ZERO else lo - hi)
    return tuple(sorted(out))


def poly_from_roots(c: Sequence[Scalar], lead: Scalar = ONE) -> TropPoly:
    """``lead (Y + c_1) ... (Y + c_n)`` expanded: coefficient of Y^(n-i) is lead + c_1 + ... + c_i."""
    cs = sorted(c)
    n = len(cs)
    coeffs = [ZERO] * (n + 1)
    acc = lead
    coeffs[n] = lead
    for i in range(1, n + 1):
        acc = ZERO if (acc == ZERO or cs[i - 1] == ZERO) else acc + cs[i - 1]
        coeffs[n - i] = acc
    return TropPoly(tuple(coeffs))


def weak_majorization(u: Sequence[Scalar], v: Sequence[Scalar]) -> bool:
    """``u`` weakly (super) majorized by ``v``: sorted prefix sums of ``u`` dominate those of ``v``."""
    if len(u) != len(v):
        raise ValueError("weak majorization needs sequences of equal length")
    su, sv = ONE, ONE
    for x, y in zip(sorted(u), sorted(v)):
        su = su + x
        sv = sv + y
        if su < sv:
            return False
    return True


# -- optimal assignment ----------------------------------------------------


def _hungarian(cost: list[list[Fraction]]) -> list[int]:
    """Minimum-cost perfect assignment on a dense finite square cost matrix.

    Shortest augmenting path version with row/column potentials, O(n^3),
    exact on rationals.  Returns ``sigma`` with row i assigned to column sigma[i].
    """
    n = len(cost)
    INF = None  # marker for "unset" slack, avoids mixing floats into exact arithmetic
    u = [Fraction(0)] * (n + 1)
    v = [Fraction(0)] * (n + 1)
    p = [0] * (n + 1)  # p[j]: row matched to column j (1-based, 0 = none)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta, j1 = INF, 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if minv[j] is INF or cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if delta is INF or minv[j] < delta:
                    delta, j1 = minv[j], j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    sigma = [0] * n
    for j in range(1, n + 1):
        sigma[p[j] - 1] = j - 1
    return sigma


def optimal_assignment(A: Sequence[Sequence[Scalar]]) -> tuple[Scalar, list[int] | None]:
    """Min-plus permanent and an optimal permutation (``None`` when no finite one exists)."""
    n = len(A)
    if n == 0:
        return ONE, []
    arcs = [(i, j) for i in range(n) for j in range(n) if A[i][j] != ZERO]
    g = Digraph.from_arcs(arcs, range(n))
    if not has_disjoint_circuit_cover(g):
        return ZERO, None
    finite = [A[i][j] for i, j in arcs]
    lo, hi = min(finite), max(finite)
    # any permutation through a big-M entry costs more than every finite one
    big = n * hi - (n - 1) * lo + 1
    cost = [[A[i][j] if A[i][j] != ZERO else big for j in range(n)] for i in range(n)]
    sigma = _hungarian(cost)
    total = sum((A[i][sigma[i]] for i in range(n)), Fraction(0))
    return total, sigma


def assignment_value(A: TropMatrix | Sequence[Sequence[Scalar]]) -> Scalar:
    """Min-plus permanent ``min_sigma sum_i A[i, sigma(i)]``."""
    rows = A.entries if isinstance(A, TropMatrix) else A
    return optimal_assignment(rows)[0]


# -- characteristic polynomial ----------------------------------------------


def char_poly_brute(A: TropMatrix, limit: int = BRUTE_FORCE_LIMIT) -> TropPoly:
    """``per(Y I + A)`` by k-th traces over all principal submatrices."""
    n = A.n
    if n > limit:
        raise ValueError(f"brute-force characteristic polynomial limited to n <= {limit}")
    E = A.entries
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    for size in range(1, n + 1):
        best = ZERO
        for J in combinations(range(n), size):
            sub = [[E[i][j] for j in J] for i in J]
            best = min(best, optimal_assignment(sub)[0])
        coeffs[n - size] = best
    return TropPoly(tuple(coeffs))


def _char_fun_line(A: TropMatrix, y: Fraction) -> tuple[int, Scalar]:
    """Supporting line ``(k, P_k)`` of ``y -> per(y I + A)`` at ``y``."""
    n = A.n
    E = A.entries
    M = [[(min(y, E[i][j]) if i == j else E[i][j]) for j in range(n)] for i in range(n)]
    val, sigma = optimal_assignment(M)
    k = sum(1 for i in range(n) if sigma[i] == i and y <= E[i][i])
    return k, val - k * y


def char_poly_vertices(A: TropMatrix) -> list[tuple[int, Fraction]]:
    """Vertices ``(k, Pbar_k)`` of the convexified characteristic polynomial.

    Uses only O(n) assignment problems: each evaluation of the concave
    function ``p(y) = per(y I + A)`` yields a tangent line, whose integer
    slope ``k`` and intercept are a hull vertex.  Between two known vertices
    we evaluate at the intersection of their lines; a strictly lower value
    reveals a new vertex in between, equality proves there is none.
    """
    n = A.n
    finite = [abs(x) for row in A.entries for x in row if x != ZERO]
    bound = 2 * n * (max(finite) if finite else Fraction(0)) + 1
    left = (n, ONE)  # p(y) = n y for y below every breakpoint
    right = _char_fun_line(A, Fraction(bound))
    found = {left, right}

    def refine(a, b):
        (ka, pa), (kb, pb) = a, b
        if ka - kb <= 1:
            return
        y = Fraction(pb - pa, ka - kb)
        k, c = _char_fun_line(A, y)
        if c + k * y >= pa + ka * y:
            return
        assert kb < k < ka, "tangent slope outside the bracketing vertices"
        found.add((k, c))
        refine(a, (k, c))
        refine((k, c), b)

    refine(left, right)
    return sorted(found)


def char_poly_roots(A: TropMatrix) -> tuple[Scalar, ...]:
    """Roots of the characteristic polynomial function of ``A``."""
    coeffs = [ZERO] * (A.n + 1)
    for k, c in char_poly_vertices(A):
        coeffs[k] = c
    return roots(TropPoly(tuple(coeffs)))
