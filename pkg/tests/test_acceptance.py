"""Acceptance criteria, one test per criterion, each reporting a single PASS/FAIL line."""
import cmath
import random
import time
from fractions import Fraction

import numpy as np

import fixtures as fx
import oracles
from strategies import random_irreducible, random_nilspec
from tropeig import linalg
from tropeig.asymptotics import eig_asymptotics, eigvec_asymptotics, newton_puiseux_first_order
from tropeig.core import min_circuit_mean, trop_schur
from tropeig.critical import critical_sequence, disjoint_circuit_cover, gamma_equals_beta_blocks
from tropeig.lidskii import lidskii, nil_perturbation
from tropeig.poly import (
    TropPoly,
    assignment_value,
    char_poly_brute,
    char_poly_roots,
    convexify,
    roots,
    weak_majorization,
)
from tropeig.semiring import ONE
from tropeig.verify import numeric_check

SUITE_SIZE = 200
CUBE = [cmath.exp(2j * cmath.pi * k / 3) for k in range(3)]


def _match(got, want, tol):
    """Largest relative error of a nearest-neighbour multiset matching (inf on size mismatch)."""
    want = list(want)
    if len(got) != len(want):
        return float("inf")
    worst = 0.0
    for z in got:
        k = int(np.argmin([abs(z - w) for w in want]))
        worst = max(worst, abs(z - want[k]) / max(abs(want[k]), 1e-300))
        want.pop(k)
    return worst


def test_criterion_1_critical_sequence(report):
    A = fx.four_node_exponents()
    dec = critical_sequence(A)
    exact = (
        dec.alphas == (0, 2, 4)
        and dec.classes == (frozenset({0, 1}), frozenset({2}), frozenset({3}))
        and dec.A_levels[1].rows() == [[2, 2], [4, 5]]
        and dec.A_levels[2].rows() == [[4]]
    )
    reps = 500
    t0 = time.perf_counter()
    for _ in range(reps):
        critical_sequence(A)
    per_call = (time.perf_counter() - t0) / reps
    ok = exact and per_call < 1e-3
    assert report("criterion 1", ok, f"exact values {exact}, {per_call * 1e3:.3f} ms per call (< 1 ms)")


def test_criterion_2_polynomial_fixture(report):
    P = TropPoly((13, 6, 5, 0))
    r, c = roots(P), convexify(P).coeffs
    ok = r == (3, 3, 7) and c == (13, 6, 3, 0)
    assert report("criterion 2", ok, f"roots {tuple(map(str, r))}, convexified {tuple(map(str, c))}")


def test_criterion_3_newton_puiseux(report):
    want = [(1, 3), (-1, 3), (1, 7)]

    def err(bs):
        if sorted(b.exponent for b in bs) != [3, 3, 7]:
            return float("inf")
        worst = 0.0
        for c0, e0 in want:
            worst = max(worst, min(abs(b.coeff - c0) for b in bs if b.exponent == e0))
        return worst

    a = newton_puiseux_first_order(fx.puiseux_poly())
    b = newton_puiseux_first_order(fx.puiseux_poly_small_middle())
    same = [(x.coeff, x.exponent) for x in a] == [(y.coeff, y.exponent) for y in b]
    ea, eb = err(a), err(b)
    ok = ea < 1e-9 and eb < 1e-9 and same
    assert report("criterion 3", ok, f"coefficient error {ea:.1e}, o(eps^3) variant identical: {same}")


def test_criterion_4_cube_root_example(report):
    t0 = time.perf_counter()
    P = fx.cube_root()
    res = eig_asymptotics(P)
    (lv,) = res.levels
    eq_err = _match(lv.equivalents, CUBE, 1e-9)
    vec_ok = True
    vec_err = 0.0
    for xi in CUBE:
        ev = eigvec_asymptotics(P, 1, xi)
        vec_ok &= ev.ratio_exponents() == (0, Fraction(-1, 3), Fraction(4, 3))
        vec_err = max(vec_err, max(abs(w - t) for w, t in zip(ev.w, (1, xi, xi**2))))
    rep = numeric_check(P, res)
    elapsed = time.perf_counter() - t0
    ok = lv.alpha == Fraction(-1, 3) and eq_err < 1e-9 and vec_ok and vec_err < 1e-9 and rep.passed and elapsed < 1
    assert report(
        "criterion 4",
        ok,
        f"eigenvalue error {eq_err:.1e}, eigenvector exponents {vec_ok} / coeff error {vec_err:.1e}, "
        f"numeric check {rep.passed}, {elapsed:.3f} s",
    )


def test_criterion_5_wilkinson(report):
    b = fx.random_complex(5, 0)
    P = fx.wilkinson(b)
    res = eig_asymptotics(P)
    (lv,) = res.levels
    # the coefficient sits at row 3, column 4 of the masked matrix
    target = b[2, 3] * b[4, 0]
    fifth = max(abs(z**5 - target) / abs(target) for z in lv.equivalents)
    rep = numeric_check(P, res)
    slopes = ", ".join(f"{r.slope:.3f}" for r in rep.predictions)
    coeffs = max(r.coeff_err for r in rep.predictions)
    ok = lv.alpha == Fraction(2, 5) and len(lv.equivalents) == 5 and fifth < 1e-7 and rep.passed
    assert report(
        "criterion 5",
        ok,
        f"xi^5 rel. error {fifth:.1e}; numeric check {rep.passed} (slopes {slopes} vs 0.4 +- 0.05, "
        f"max coeff error {coeffs:.3f})",
    )


def test_criterion_6_four_node_example(report):
    b = fx.random_complex(4, 1)
    a = lambda i, j: b[i - 1, j - 1]  # noqa: E731
    P = fx.four_node(b)
    res = eig_asymptotics(P)
    s = cmath.sqrt(a(1, 2) * a(2, 1))
    errs = [
        _match(res.levels[0].equivalents, [s, -s], 0),
        _match(res.levels[1].equivalents, [-a(3, 1) * a(2, 3) / a(2, 1)], 0),
        _match(res.levels[2].equivalents, [a(4, 3) * a(2, 1) * a(3, 4) / (a(2, 3) * a(3, 1))], 0),
    ]
    rep = numeric_check(P, res)
    ok = max(errs) < 1e-9 and rep.passed
    assert report("criterion 6", ok, f"closed-form error {max(errs):.1e}, numeric check {rep.passed}")


def test_criterion_7_nine_node_example(report):
    A = fx.nine_node(fx.random_complex(9, 2)).A
    dec = critical_sequence(A)
    gamma = char_poly_roots(A)
    per = assignment_value(A)
    ok = (
        dec.alphas == (Fraction(1, 3), Fraction(2, 5), Fraction(4, 5))
        and [len(c) for c in dec.classes] == [3, 5, 1]
        and not disjoint_circuit_cover(dec.crit_graphs[2])
        and per == 4
        and gamma[-1] == 1
    )
    assert report(
        "criterion 7",
        ok,
        f"alphas {tuple(map(str, dec.alphas))}, sizes {[len(c) for c in dec.classes]}, "
        f"cover at level 3 {disjoint_circuit_cover(dec.crit_graphs[2])}, per {per}, gamma_9 {gamma[-1]}",
    )


def test_criterion_8_seven_node_example(report):
    worst = 0.0
    alphas_ok = True
    for seed in range(20):
        b = fx.random_complex(7, 100 + seed)
        x = lambda i, j: b[i - 1, j - 1]  # noqa: E731
        res = eig_asymptotics(fx.seven_node(b))
        alphas_ok &= [lv.alpha for lv in res.levels] == [Fraction(2, 3), Fraction(3, 4)]
        l3 = x(2, 3) * x(3, 1)
        l4 = x(5, 6) * x(6, 7) * (x(7, 4) - x(7, 1) * x(3, 4) / x(3, 1))
        worst = max(
            worst,
            _match([z**3 for z in res.levels[0].equivalents], [l3] * 3, 0),
            _match([z**4 for z in res.levels[1].equivalents], [l4] * 4, 0),
        )
    ok = alphas_ok and worst < 1e-9
    assert report("criterion 8", ok, f"20 random b, exponents {alphas_ok}, closed-form error {worst:.1e}")


def test_criterion_9_canonical_choice(report):
    P = fx.canonical_choice()
    res = eig_asymptotics(P)
    got = sorted((lv.alpha, round(z.real, 12)) for lv in res.levels for z in lv.equivalents)
    ev = eigvec_asymptotics(P, 2, 2.0)
    w = np.array(ev.w) / ev.w[0]
    ok = got == [(0, 1.0), (2, 2.0), (2, 3.0)] and ev.V == (3, 2, 0) and np.allclose(w, [1, -2, 1], atol=1e-9)
    shown = [f"{z:g}*eps^{e}" for e, z in got]
    assert report("criterion 9", ok, f"equivalents {shown}, V {tuple(map(str, ev.V))}, w {np.round(w.real, 9).tolist()}")


# -- criterion 10: property suites ---------------------------------------------


def _suite(report, key, check, make):
    rng = random.Random(key)
    t0 = time.perf_counter()
    failures = 0
    for _ in range(SUITE_SIZE):
        if not check(make(rng)):
            failures += 1
    elapsed = time.perf_counter() - t0
    report(f"criterion {key}", failures == 0, f"{SUITE_SIZE - failures}/{SUITE_SIZE} instances, {elapsed:.1f} s")
    return failures, elapsed


def _matrix(rng, density=0.45):
    return random_irreducible(rng, rng.randint(1, 8), density)


def test_criterion_10_property_suites(report):
    total = 0.0
    results = {}

    def a(A):
        return char_poly_roots(A) == roots(char_poly_brute(A))

    def b(A):
        return weak_majorization(roots(char_poly_brute(A)), critical_sequence(A).beta)

    def c(A):
        rep = gamma_equals_beta_blocks(A, check=False)
        return all(lv.cover == lv.block_equal for lv in rep.levels)

    def d(args):
        A, a_num, C1, C2 = args
        trop = trop_schur(C1 | C2, ONE, A) == trop_schur(C2, ONE, trop_schur(C1, ONE, A))
        lhs, N = linalg.schur_complement(sorted(C1 | C2), a_num)
        s1, N1 = linalg.schur_complement(sorted(C1), a_num)
        pos = {p: k for k, p in enumerate(N1)}
        rhs, _ = linalg.schur_complement([pos[x] for x in sorted(C2)], s1)
        conv = np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9 * np.abs(lhs).max())
        return trop and conv

    def make_d(rng):
        n = rng.randint(3, 8)
        A = random_irreducible(rng, n, 0.5, lo=0, hi=8)
        idx = list(range(n))
        rng.shuffle(idx)
        k1 = rng.randint(1, n - 2)
        k2 = rng.randint(1, n - 1 - k1)
        g = np.random.default_rng(rng.getrandbits(32))
        return A, g.standard_normal((n, n)) + 1j * g.standard_normal((n, n)), set(idx[:k1]), set(idx[k1 : k1 + k2])

    def e(A):
        gs = critical_sequence(A).crit_graphs
        return all(g.issubgraph(h) for g, h in zip(gs, gs[1:]))

    def f(A):
        return min_circuit_mean(A) == oracles.min_circuit_mean(A.rows())

    def g(args):
        spec, bmat = args
        ref, gen = lidskii(spec, bmat), eig_asymptotics(nil_perturbation(spec, bmat))
        return len(ref.levels) == len(gen.levels) and all(
            x.alpha == y.alpha and _match(x.equivalents, y.equivalents, 0) < 1e-7
            for x, y in zip(ref.levels, gen.levels)
        )

    def make_g(rng):
        spec = random_nilspec(rng, max_n=8)
        gen = np.random.default_rng(rng.getrandbits(32))
        return spec, gen.standard_normal((spec.n, spec.n)) + 1j * gen.standard_normal((spec.n, spec.n))

    suites = {
        "10a": (a, lambda r: _matrix(r, 0.4)),
        "10b": (b, _matrix),
        "10c": (c, lambda r: _matrix(r, 0.3)),
        "10d": (d, make_d),
        "10e": (e, _matrix),
        "10f": (f, lambda r: _matrix(r, 0.35)),
        "10g": (g, make_g),
    }
    for key, (check, make) in suites.items():
        results[key], elapsed = _suite(report, key, check, make)
        total += elapsed
    ok = not any(results.values()) and total < 60
    assert report("criterion 10", ok, f"all suites, total {total:.1f} s (< 60 s)")
