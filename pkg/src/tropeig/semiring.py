"""Min-plus scalars and dense matrices over exact rationals.

Scalars are plain :class:`fractions.Fraction` values, with the formal zero
``ZERO = +inf`` represented by ``math.inf``.  ``Fraction`` and ``float('inf')``
compare and add consistently, so ``min`` and ``+`` are the semiring laws
without any wrapper class.  Python integers are unbounded, so exponent
arithmetic never overflows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[Fraction, float]

ZERO = math.inf  # additive identity, "0" of R_min
ONE = Fraction(0)  # multiplicative identity
NEG_INF = -math.inf  # only appears in the completed semiring


def scalar(x) -> Scalar:
    """Coerce an int, Fraction, string ("p/q", "inf") or exact float to a scalar."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not semiring scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if math.isinf(x):
            return x
        if math.isnan(x):
            raise ValueError("NaN is not a semiring scalar")
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity", "∞", "+∞"):
            return ZERO
        if s in ("-inf", "-infinity", "-∞"):
            return NEG_INF
        return Fraction(s)
    raise TypeError(f"cannot interpret {x!r} as a min-plus scalar")


def is_zero(x: Scalar) -> bool:
    return x == ZERO


def otimes(x: Scalar, y: Scalar) -> Scalar:
    """Semiring product; in the completed semiring (+inf) + (-inf) = +inf."""
    # finite scalars are Fractions, so only float operands can be the zero
    if (type(x) is float or type(y) is float) and (x == ZERO or y == ZERO):
        return ZERO
    return x + y


def inverse(x: Scalar) -> Scalar:
    if x == ZERO:
        raise ZeroDivisionError("the min-plus zero has no inverse")
    return -x


def format_scalar(x: Scalar) -> str:
    """Serialize as "inf", "-inf", an integer, or "p/q" in lowest terms."""
    if x == ZERO:
        return "inf"
    if x == NEG_INF:
        return "-inf"
    return str(Fraction(x))


def format_vector(v: Iterable[Scalar]) -> list[str]:
    return [format_scalar(x) for x in v]


class ReducibleMatrixError(ValueError):
    """Raised by spectral operations that need a strongly connected graph."""

    def __init__(self, msg: str = "irreducible matrix required"):
        super().__init__(msg)


class DivergentStarError(ValueError):
    """Kleene star with -inf entries (a circuit of negative weight)."""


@dataclass(frozen=True)
class TropMatrix:
    """Dense square min-plus matrix.

    ``labels`` name the rows/columns.  They default to ``0..n-1`` and are
    carried through submatrix extraction and Schur complements, so that
    results can be read in the numbering of the original matrix.
    """

    entries: tuple[tuple[Scalar, ...], ...]
    labels: tuple[int, ...] = ()

    def __post_init__(self):
        n = len(self.entries)
        if any(len(row) != n for row in self.entries):
            raise ValueError("TropMatrix must be square")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(n)))
        elif len(self.labels) != n or len(set(self.labels)) != n:
            raise ValueError("labels must be n distinct values")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], labels: Sequence[int] = ()) -> "TropMatrix":
        return cls(tuple(tuple(scalar(x) for x in row) for row in rows), tuple(labels))

    @classmethod
    def identity(cls, n: int) -> "TropMatrix":
        return cls(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        i, j = ij
        return self.entries[i][j]

    def __iter__(self):
        return iter(self.entries)

    def rows(self) -> list[list[Scalar]]:
        return [list(r) for r in self.entries]

    def position(self, label: int) -> int:
        return self.labels.index(label)

    def positions(self, labels: Iterable[int]) -> list[int]:
        index = {lab: k for k, lab in enumerate(self.labels)}
        return [index[lab] for lab in labels]

    def sub(self, labels: Iterable[int]) -> "TropMatrix":
        """Principal submatrix on the given labels (kept in this matrix's order)."""
        keep = set(labels)
        pos = [k for k, lab in enumerate(self.labels) if lab in keep]
        if len(pos) != len(keep):
            raise KeyError("unknown labels in submatrix request")
        return TropMatrix(
            tuple(tuple(self.entries[i][j] for j in pos) for i in pos),
            tuple(self.labels[k] for k in pos),
        )

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> list[list[Scalar]]:
        """Rectangular block addressed by labels, as a list of rows."""
        ri, ci = self.positions(rows), self.positions(cols)
        return [[self.entries[i][j] for j in ci] for i in ri]

    def relabel(self, labels: Sequence[int]) -> "TropMatrix":
        return TropMatrix(self.entries, tuple(labels))

    def map(self, f) -> "TropMatrix":
        return TropMatrix(tuple(tuple(f(x) for x in row) for row in self.entries), self.labels)

    def shift(self, mu: Scalar) -> "TropMatrix":
        """``mu (x) A``: add ``mu`` to every finite entry."""
        return self.map(lambda x: otimes(mu, x))

    def scale_rows(self, d: Sequence[Scalar]) -> "TropMatrix":
        """``diag(d)^{-1} (x) A``: subtract ``d[i]`` from row ``i``."""
        return TropMatrix(
            tuple(tuple(otimes(x, -d[i]) for x in row) for i, row in enumerate(self.entries)),
            self.labels,
        )

    def arcs(self) -> list[tuple[int, int]]:
        """Arcs of G(A), in label coordinates."""
        lab = self.labels
        return [
            (lab[i], lab[j])
            for i, row in enumerate(self.entries)
            for j, x in enumerate(row)
            if x != ZERO
        ]

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [format_vector(r) for r in self.entries]}

    @classmethod
    def from_json(cls, obj: dict) -> "TropMatrix":
        rows = obj["entries"]
        n = int(obj.get("n", len(rows)))
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"entries must be a {n}x{n} array")
        m = cls.from_rows(rows)
        if any(x == NEG_INF for row in m for x in row):
            raise ValueError("-inf is not allowed in a TropMatrix")
        return m

    def __str__(self) -> str:
        cells = [[format_scalar(x) for x in row] for row in self.entries]
        w = max((len(c) for row in cells for c in row), default=1)
        return "\n".join(" ".join(c.rjust(w) for c in row) for row in cells)
