"""Numerical check of predicted eigenvalue asymptotics against dense eigensolves."""
from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import linalg
from .asymptotics import EigAsymptotics, PerturbedMatrix
from .semiring import ZERO, format_scalar

DEFAULT_GRID = tuple(10.0 ** (-k / 2) for k in range(2, 9))  # 1e-1 .. 1e-4, half decades
SLOPE_TOL = 0.05
COEFF_TOL = 0.1
ORDER_MARGIN = 0.05
MAX_DECADES = 250  # keep |exponent * log10(eps)| inside double range
_UNMATCHABLE = 1e6


def instantiate(P: PerturbedMatrix, eps: float) -> np.ndarray:
    """``a_ij eps^A_ij``, with exact zeros where the exponent is infinite."""
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    n = P.n
    M = np.zeros((n, n), dtype=complex)
    decades = -math.log10(eps)
    for i in range(n):
        for j in range(n):
            e = P.A.entries[i][j]
            if e == ZERO:
                continue
            if abs(float(e)) * decades > MAX_DECADES:
                raise OverflowError(f"eps^{format_scalar(e)} leaves double range at eps={eps:g}")
            M[i, j] = P.a[i, j] * eps ** float(e)
    return M


def _phase_gap(z: complex, w: complex) -> float:
    return abs(math.remainder(cmath.phase(z) - cmath.phase(w), 2 * math.pi))


def _log_abs(z: complex) -> float:
    return math.log(abs(z)) if z != 0 else -math.inf


def fit_slope(log_eps: Sequence[float], log_val: Sequence[float]) -> float:
    """Least-squares slope of ``log|L|`` against ``log eps``; +inf for identically zero data."""
    x = np.asarray(log_eps, dtype=float)
    y = np.asarray(log_val, dtype=float)
    if np.all(np.isneginf(y)):
        return math.inf
    keep = np.isfinite(y)
    if keep.sum() < 2:
        return math.nan
    return float(np.polyfit(x[keep], y[keep], 1)[0])


@dataclass
class PredictionRecord:
    level: int
    lam: complex
    exponent: Fraction
    log_eps: list[float] = field(default_factory=list)
    values: list[complex] = field(default_factory=list)
    slope: float = math.nan
    coeff: complex = complex("nan")
    slope_err: float = math.nan
    coeff_err: float = math.nan
    passed: bool = False

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "lambda": [self.lam.real, self.lam.imag],
            "exponent": format_scalar(self.exponent),
            "slope": self.slope,
            "coeff": [self.coeff.real, self.coeff.imag],
            "slope_err": self.slope_err,
            "coeff_rel_err": self.coeff_err,
            "passed": self.passed,
        }


@dataclass
class GroupRecord:
    """Eigenvalues predicted only to be of larger (``omega``) or smaller (``o``) order."""

    level: int
    kind: str
    alpha: Fraction
    expected: int
    observed: int
    passed: bool

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "kind": self.kind,
            "alpha": format_scalar(self.alpha),
            "expected": self.expected,
            "observed": self.observed,
            "passed": self.passed,
        }


@dataclass
class VerificationReport:
    grid: list[float]
    skipped: list[tuple[float, str]]
    predictions: list[PredictionRecord]
    groups: list[GroupRecord]
    track_slopes: list[float]

    @property
    def passed(self) -> bool:
        return bool(self.predictions or self.groups) and all(
            r.passed for r in self.predictions
        ) and all(g.passed for g in self.groups)

    def to_json(self) -> dict:
        return {
            "grid": self.grid,
            "skipped": [{"eps": e, "reason": r} for e, r in self.skipped],
            "predictions": [r.to_json() for r in self.predictions],
            "groups": [g.to_json() for g in self.groups],
            "passed": self.passed,
        }

    def table(self) -> str:
        lines = [
            f"{'level':>5} {'exponent':>9} {'slope':>9} {'lambda':>24} {'fitted':>24} {'rel.err':>9}  status"
        ]
        for r in self.predictions:
            lam = f"{r.lam.real:+.6f}{r.lam.imag:+.6f}j"
            fit = f"{r.coeff.real:+.6f}{r.coeff.imag:+.6f}j"
            lines.append(
                f"{r.level:>5} {format_scalar(r.exponent):>9} {r.slope:>9.4f} {lam:>24} {fit:>24}"
                f" {r.coeff_err:>9.2e}  {'pass' if r.passed else 'FAIL'}"
            )
        for g in self.groups:
            rel = "larger" if g.kind == "omega" else "smaller"
            lines.append(
                f"{g.level:>5} {format_scalar(g.alpha):>9}  {g.observed}/{g.expected} eigenvalues of {rel} order"
                f"  {'pass' if g.passed else 'FAIL'}"
            )
        for e, why in self.skipped:
            lines.append(f"skipped eps={e:g}: {why}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines) + "\n"

    def csv(self) -> str:
        """``(prediction, level, exponent, log eps, log|L|)`` rows for each matched branch."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["prediction", "level", "exponent", "log_eps", "log_abs_eigenvalue"])
        for k, r in enumerate(self.predictions, start=1):
            for x, v in zip(r.log_eps, r.values):
                w.writerow([k, r.level, format_scalar(r.exponent), repr(x), repr(_log_abs(v))])
        return buf.getvalue()


def numeric_check(
    P: PerturbedMatrix,
    pred: EigAsymptotics,
    grid: Sequence[float] = DEFAULT_GRID,
    slope_tol: float = SLOPE_TOL,
    coeff_tol: float = COEFF_TOL,
    margin: float = ORDER_MARGIN,
) -> VerificationReport:
    """Match dense eigenvalues to predictions on each grid point, then fit exponents.

    At every ``eps`` the predicted values ``lambda eps^Lambda`` are assigned
    to distinct numerical eigenvalues by minimising the log-modulus gap plus
    the phase gap.  A prediction passes when the fitted slope is within
    ``slope_tol`` of ``Lambda`` and ``L eps^-Lambda`` at the smallest usable
    ``eps`` is within ``coeff_tol`` relative error of ``lambda``.
    Eigenvalues left unmatched are tracked by decreasing modulus and only
    checked for being of larger or smaller order than each level.
    """
    preds = [(lv.level, z, lv.alpha) for lv in pred.levels for z in lv.equivalents]
    records = [PredictionRecord(l, z, a) for l, z, a in preds]
    free_tracks: list[list[complex]] = []
    used, skipped = [], []
    for eps in sorted(grid, reverse=True):
        try:
            M = instantiate(P, eps)
            ev = linalg.eigenvalues(M)
        except (OverflowError, linalg.ConvergenceError) as exc:
            skipped.append((eps, str(exc)))
            continue
        le = math.log(eps)
        used.append(eps)
        cost = np.full((len(preds), len(ev)), _UNMATCHABLE)
        for p, (_, z, a) in enumerate(preds):
            target = math.log(abs(z)) + float(a) * le
            for q, L in enumerate(ev):
                if L != 0:
                    cost[p, q] = abs(math.log(abs(L)) - target) + _phase_gap(L, z)
        rows, cols = linear_sum_assignment(cost) if preds else ([], [])
        for p, q in zip(rows, cols):
            records[p].log_eps.append(le)
            records[p].values.append(complex(ev[q]))
        rest = sorted((complex(ev[q]) for q in range(len(ev)) if q not in set(cols)), key=abs, reverse=True)
        free_tracks.append(rest)

    log_eps = [math.log(e) for e in used]
    for r in records:
        if len(r.values) < 2:
            continue
        r.slope = fit_slope(r.log_eps, [_log_abs(v) for v in r.values])
        r.coeff = r.values[-1] * math.exp(-float(r.exponent) * r.log_eps[-1])
        r.slope_err = abs(r.slope - float(r.exponent))
        r.coeff_err = abs(r.coeff - r.lam) / abs(r.lam)
        r.passed = r.slope_err <= slope_tol and r.coeff_err <= coeff_tol

    n_free = len(free_tracks[0]) if free_tracks else 0
    free_slopes = [
        fit_slope(log_eps, [_log_abs(step[t]) for step in free_tracks]) for t in range(n_free)
    ]
    groups = []
    for lv in pred.levels:
        if lv.n_omega is None:
            continue
        others = [r.slope for r in records if r.level != lv.level] + free_slopes
        alpha = float(lv.alpha)
        big = sum(1 for s in others if s <= alpha - margin)
        small = sum(1 for s in others if s >= alpha + margin)
        groups.append(GroupRecord(lv.level, "omega", lv.alpha, lv.n_omega, big, big == lv.n_omega))
        groups.append(GroupRecord(lv.level, "o", lv.alpha, lv.n_o, small, small == lv.n_o))
    return VerificationReport(list(used), skipped, records, groups, free_slopes)
