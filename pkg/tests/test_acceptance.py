"""Acceptance criteria 1-11, all checked by exact rational equality.

Run ``pytest tests/test_acceptance.py -s`` (or ``python tests/test_acceptance.py``)
to see one PASS/FAIL line per criterion; the lines are also repeated in the
pytest terminal summary.
"""

import random
import sys

import pytest

from kvcalc import dbrackets, kv, necklace, symplectic
from kvcalc.cyclic import power_trace, trace
from kvcalc.lie import HypothesisFails, bracket, conjugate, exp_ad
from kvcalc.pbw import eulerian_projection
from kvcalc.randgen import random_cyclic, random_grouplike, random_lie, random_tder, small_q
from kvcalc.series import Alphabet, TensorSeries, exp, is_primitive

RESULTS = {}


def record(n, ok, detail):
    RESULTS[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


def sparse_series(A, N, rng, per_weight=3):
    terms = {}
    for k in range(1, N + 1):
        words = A.words(k)
        for _ in range(per_weight):
            terms[rng.choice(words)] = small_q(rng) or 1
    return TensorSeries(A, N, terms)


# 1 -----------------------------------------------------------------------------------------


def check_1():
    rng = random.Random(1)
    bad = 0
    for t in range(50):
        A = Alphabet.generic(1 + t % 4)
        a = sparse_series(A, 6, rng)
        parts = [eulerian_projection(a, m) for m in range(1, 7)]
        total = TensorSeries.zero(A, 6)
        for p in parts:
            total = total + p
        ok = total == a and is_primitive(parts[0])
        for m, p in enumerate(parts, start=1):
            for k in range(1, 7):
                q = eulerian_projection(p, k)
                ok &= (q == p) if k == m else not q
        bad += not ok
    return record(1, bad == 0, f"{50 - bad}/50 series decompose into orthogonal idempotent components")


# 2 -----------------------------------------------------------------------------------------


def check_2():
    bad = 0
    for t in range(25):
        A = Alphabet.generic(2) if t % 2 else Alphabet.surface(1, 1)
        u = random_lie(A, 8, 100 + t, density=0.25)
        g = random_grouplike(A, 8, 200 + t)
        v = conjugate(g, u)
        minwt = u.lowest_weight()
        for m in range(0, 8 // minwt + 1):
            bad += power_trace(u, m) != power_trace(v, m)
    return record(2, bad == 0, f"{bad} power-trace mismatches over 25 conjugate pairs")


# 3 -----------------------------------------------------------------------------------------


def check_3():
    N = 6
    bad_lin = bad_sym = 0
    for t in range(25):
        S = symplectic.SymplecticSpace(1 + t % 2)
        A = S.alphabet
        z = TensorSeries.letter(A, "x1", N) + random_lie(A, N, 300 + t, low=2, density=0.2)
        a = exp_ad(random_lie(A, N, 400 + t, density=0.3), z)
        g = symplectic.normalize_conjugacy_linear(z, a)
        bad_lin += conjugate(g, z) != a
        om = S.omega0(N)
        b = conjugate(random_grouplike(A, N, 500 + t), om)
        g = symplectic.normalize_conjugacy_symplectic(S, b)
        bad_sym += conjugate(g, om) != b
    negatives = 0
    S = symplectic.SymplecticSpace(1)
    om = S.omega0(N)
    x = TensorSeries.letter(S.alphabet, "x1", N)
    y = TensorSeries.letter(S.alphabet, "y1", N)
    for fn, args in (
        (symplectic.normalize_conjugacy_symplectic, (S, om.scale(3))),
        (symplectic.normalize_conjugacy_symplectic, (S, om + (x * x * y * y).with_cutoff(N))),
        (symplectic.normalize_conjugacy_linear, (x, x + y)),
        (symplectic.normalize_conjugacy_linear, (x, x.scale(2))),
    ):
        try:
            fn(*args)
        except symplectic.TracesDiffer:
            negatives += 1
    ok = bad_lin == bad_sym == 0 and negatives == 4
    return record(3, ok, f"linear {25 - bad_lin}/25, symplectic {25 - bad_sym}/25, negatives {negatives}/4 raise TracesDiffer")


# 4 -----------------------------------------------------------------------------------------


def check_4():
    rng = random.Random(4)
    bad = 0
    for t in range(25):
        S = symplectic.SymplecticSpace(1 + t % 2)
        m = rng.randint(3, 6)
        k = m - 2
        b = TensorSeries(S.alphabet, k, {rng.choice(S.alphabet.words(k)): small_q(rng) or 1 for _ in range(4)})
        a = bracket(S.omega0(m), b.with_cutoff(m))
        bb = symplectic.solve_omega_bracket(S, a)
        bad += bracket(S.omega0(m), bb.with_cutoff(m)) != a
    S = symplectic.SymplecticSpace(1)
    try:
        symplectic.solve_omega_bracket(S, S.omega0())
        rejected = False
    except HypothesisFails:
        rejected = True
    return record(4, bad == 0 and rejected, f"{25 - bad}/25 round trips, ω₀ rejected: {rejected}")


# 5 -----------------------------------------------------------------------------------------


def check_5():
    closed = all(v == c for g in (1, 2, 3) for l in range(1, 5) for v, c in [symplectic.trace_contraction_m0(g, l)])
    m1 = True
    for g in (1, 2, 3):
        S = symplectic.SymplecticSpace(g)
        x = S.vector({0: 1})
        for l in range(1, 5):
            m1 &= symplectic.m1_contraction(S, x, l) == x.with_cutoff(2 * l + 1).scale(symplectic.m1_coefficient(g, l))
    rng = random.Random(5)
    S = symplectic.SymplecticSpace(1)
    letters = [S.vector({i: 1}) for i in range(S.dim)]
    lemmas = 0
    for m, l in ((5, 3), (4, 2), (6, 3)):
        fn = symplectic.verify_lemma_51 if m % 2 else symplectic.verify_lemma_52
        for _ in range(10):
            lemmas += fn(S, [rng.choice(letters) for _ in range(m)], l)
    ok = closed and m1 and lemmas == 30
    return record(5, ok, f"m=0 closed form {closed}, m=1 coefficient {m1}, lemma checks {lemmas}/30")


# 6 -----------------------------------------------------------------------------------------


def check_6():
    bad = []
    for g, n in ((1, 0), (0, 2), (1, 1)):
        S = necklace.SurfaceAlgebra(g, n)
        N = 6
        f = kv.Framing((1,) * g, (-1,) * g, (1,) * n, n + (2 * g + n - 1))
        for t in range(10):
            ell = random_lie(S.alphabet, N - 2, 600 + t, density=0.4)
            u = kv.TangentialDerivation.inner(S, ell, N)
            d = kv.divergence(u)
            if d != trace(ell).with_cutoff(d.cutoff).scale(1 - 2 * g - n):
                bad.append(("div", g, n, t))
            jf = kv.j_f(kv.TangentialAutomorphism(u), f)
            if jf != trace(ell).with_cutoff(jf.cutoff).scale(-f.rot_gamma0):
                bad.append(("jf", g, n, t))
        for t in range(3):
            u, v = random_tder(S, 5, 700 + t), random_tder(S, 5, 800 + t)
            if kv.divergence(u.bracket(v)) != u.act_cyclic(kv.divergence(v)) - v.act_cyclic(kv.divergence(u)):
                bad.append(("div-cocycle", g, n, t))
            F, G = kv.TangentialAutomorphism(u), kv.TangentialAutomorphism(v)
            if kv.j_cocycle(F * G) != kv.j_cocycle(F) + F.act_cyclic(kv.j_cocycle(G)):
                bad.append(("j-cocycle", g, n, t))
    return record(6, not bad, "all cocycle identities and inner values hold" if not bad else f"failures {bad}")


# 7 -----------------------------------------------------------------------------------------


def center_mismatches(test_weights):
    out = []
    for g, n in ((1, 0), (0, 2), (1, 1)):
        S = necklace.SurfaceAlgebra(g, n)
        for k in range(0, 7):
            found = necklace.center_component(S, k, test_weights)
            if not necklace.same_span(found, necklace.predicted_center(S, k)):
                out.append((g, n, k, len(found)))
    return out


def check_7():
    bad = center_mismatches(list(range(1, 7)))
    detail = "all components match" if not bad else (
        f"mismatches (g, n, k, dim found) {bad}; with test weights <= 8: {center_mismatches(list(range(1, 9))) or 'all match'}"
    )
    return record(7, not bad, detail)


# 8 -----------------------------------------------------------------------------------------


def check_8():
    rng = random.Random(8)
    S = necklace.SurfaceAlgebra(1, 1)
    Pi = dbrackets.poisson_bivector(S)
    br = lambda a, b: necklace.goldman_bracket(S, a, b)
    agree = anti = jac = 0
    for _ in range(50):
        a = random_cyclic(S.alphabet, rng.randint(1, 6), rng)
        b = random_cyclic(S.alphabet, rng.randint(1, 6), rng)
        c = random_cyclic(S.alphabet, rng.randint(1, 4), rng)
        agree += br(a, b).terms == dbrackets.partial_map(Pi, [a, b]).terms
        anti += br(a, b) == -br(b, a)
        jac += not (br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b)))
    ok = agree == anti == jac == 50
    return record(8, ok, f"splicing vs ∂(Π) {agree}/50, antisymmetry {anti}/50, Jacobi {jac}/50")


# 9 -----------------------------------------------------------------------------------------


def check_9():
    pp = all(
        not dbrackets.schouten(P, P)
        for P in (dbrackets.poisson_bivector(necklace.SurfaceAlgebra(*gn)) for gn in ((1, 0), (0, 2), (1, 1), (2, 1)))
    )
    S = necklace.SurfaceAlgebra(1, 1)
    h0 = all(
        necklace.same_span(
            [r.to_cyclic(w) for r in dbrackets.cohomology(S, 0, w)["representatives"]],
            necklace.center_component(S, w, list(range(1, 7))),
        )
        for w in range(0, 7)
    )
    A = dbrackets.SuperAlphabet(S.alphabet)
    top = dbrackets.cohomology(S, 1, -2)
    h1_top = top["dim_H"] == 1 and [list(r.terms) for r in top["representatives"]] == [[(A.odd(S.z(1)),)]]
    h1_rest = all(dbrackets.cohomology(S, 1, w)["dim_H"] == 0 for w in range(-1, 3))
    ok = pp and h0 and h1_top and h1_rest
    return record(9, ok, f"[Π,Π]=0 {pp}, H⁰ = center {h0}, H¹(-2) = K|∂z| {h1_top}, H¹(-1..2) = 0 {h1_rest}")


# 10 ----------------------------------------------------------------------------------------


def check_10():
    details = []
    ok = True
    for gn, N in (((0, 2), 6), ((1, 0), 5)):
        S = necklace.SurfaceAlgebra(*gn)
        F = kv.solve_kv1(S, N).F
        kv1 = kv.check_kv1(F)
        special = kv.is_special_expansion(S, kv.theta_F_images(F))
        agree = kept = 0
        for t in range(10):
            if S.g == 0:
                # only even weights carry Lie elements in the z letters
                k = 2 + 2 * (t % 2)
            else:
                # odd t perturbs above what the cutoff can see
                k = N - 1 if t % 2 else 1 + t % (N - 2)
            G = kv.TangentialAutomorphism(F.u + random_tder(S, N, 900 + t, low=k, high=k))
            verdict = kv.check_kv1(G)
            kept += verdict
            agree += verdict == kv.is_special_expansion(S, kv.theta_F_images(G))
        ok &= kv1 and special and agree == 10
        details.append(f"{gn} N={N}: KV I {kv1}, special {special}, equivalence {agree}/10 ({kept} perturbations still solve KV I)")
    return record(10, ok, "; ".join(details))


# 11 ----------------------------------------------------------------------------------------


def check_11():
    ok = all(
        kv.theta_exp(S, kv.gamma0_word(S), 6) == exp(kv.xi(S, 6))
        for S in (necklace.SurfaceAlgebra(*gn) for gn in ((1, 0), (0, 2), (1, 1)))
    )
    return record(11, ok, "θ_exp(γ₀) = e^ξ through weight 6")


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9, check_10, check_11]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 8, 9, 10, 11])
def test_criterion(n):
    assert CHECKS[n - 1]()


@pytest.mark.xfail(
    strict=True,
    reason="with test weights <= 6, |z1^2 z2| and |z1 z2^2| for (g, n) = (0, 2) bracket to zero "
    "against every test word, so the weight-6 kernel is one dimension too big",
)
def test_criterion_7():
    assert check_7()


def test_criterion_7_wider_window():
    assert not center_mismatches(list(range(1, 9)))


if __name__ == "__main__":
    results = [check() for check in CHECKS]
    sys.exit(0 if all(results) else 1)
