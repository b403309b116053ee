import json

import pytest
from hypothesis import given, settings, strategies as st

from kvcalc.cyclic import CyclicSeries, trace
from kvcalc.kv import (
    Framing,
    FreeGroupWord,
    NotConjugate,
    NoSolutionAtWeight,
    TangentialAutomorphism,
    TangentialDerivation,
    boundary_membership,
    c_f,
    check_kv1,
    check_kv1_prime,
    check_kv2_prime,
    divergence,
    exp_images,
    gamma0_word,
    is_conjugate_special,
    is_special_expansion,
    is_tangential_expansion,
    j_cocycle,
    j_f,
    p_element,
    r_element,
    solve_kv1,
    theta_exp,
    theta_F,
    theta_F_images,
    xi,
)
from kvcalc.lie import bch, bracket, conjugate
from kvcalc.necklace import SurfaceAlgebra
from kvcalc.randgen import random_grouplike, random_lie, random_tder, rng_of
from kvcalc.rational import Q
from kvcalc.series import TensorSeries, exp, log

seeds = st.integers(0, 10**6)
SURFACES = [(1, 0), (0, 2), (1, 1)]


def framing_for(S, seed):
    rng = rng_of(seed)
    ra = [rng.randint(-2, 2) for _ in range(S.g)]
    rb = [rng.randint(-2, 2) for _ in range(S.g)]
    rg = [rng.randint(-2, 2) for _ in range(S.n)]
    return Framing(ra, rb, rg, sum(rg) - (1 - 2 * S.g - S.n))


def letter(S, name, N):
    return TensorSeries.letter(S.alphabet, name, N)


# framings and words


def test_poincare_hopf_enforced():
    Framing((0,), (0,), (0,), 2)
    with pytest.raises(ValueError):
        Framing((0,), (0,), (0,), 0)
    f = Framing.zero(2, 1)
    assert f.rot_gamma0 == 4
    assert Framing.from_json(json.loads(json.dumps(f.to_json()))) == f


def test_free_group_words_reduce():
    w = FreeGroupWord.parse("alpha1 beta1 beta1^-1 alpha1^-1")
    assert w.letters == ()
    S = SurfaceAlgebra(1, 0)
    v = FreeGroupWord.parse("alpha1 beta1")
    assert (v * v.inverse()).letters == ()
    assert gamma0_word(S).letters == (("alpha1", 1), ("beta1", 1), ("alpha1", -1), ("beta1", -1))


def test_theta_exp_examples():
    S = SurfaceAlgebra(1, 1)
    x = letter(S, "x1", 5)
    assert theta_exp(S, FreeGroupWord.parse("alpha1"), 5) == exp(x)
    assert theta_exp(S, FreeGroupWord.parse("alpha1^-1"), 5) == exp(-x)


@pytest.mark.parametrize("gn", SURFACES)
def test_theta_exp_gamma0_is_exp_xi(gn):
    S = SurfaceAlgebra(*gn)
    assert theta_exp(S, gamma0_word(S), 6) == exp(xi(S, 6))


# ξ, p, r


def test_xi_examples():
    S = SurfaceAlgebra(0, 2)
    assert xi(S, 6) == bch(letter(S, "z1", 6), letter(S, "z2", 6))
    S = SurfaceAlgebra(1, 0)
    assert xi(S, 6).weight_component(2) == bracket(letter(S, "x1", 2), letter(S, "y1", 2))
    for gn in SURFACES:
        S = SurfaceAlgebra(*gn)
        assert xi(S, 6).truncate(2) == S.omega(2)


def test_p_and_r_examples():
    S = SurfaceAlgebra(1, 1)
    assert not p_element(S, Framing.zero(1, 1))
    p = p_element(S, Framing((2,), (3,), (0,), 2))
    assert p.terms == {(S.x(1),): 3, (S.y(1),): -2}
    assert not r_element(SurfaceAlgebra(0, 3), 6)
    r = r_element(SurfaceAlgebra(1, 0), 4)
    assert r.weight_component(1).terms == {(0,): Q(1, 2), (1,): Q(1, 2)}
    assert r.weight_component(2).terms == {(0, 0): Q(1, 24), (1, 1): Q(1, 24)}
    assert r.weight_component(3).terms == {}
    assert r.weight_component(4).terms == {(0, 0, 0, 0): Q(-1, 2880), (1, 1, 1, 1): Q(-1, 2880)}


# derivations, divergence and cocycles


def test_zero_and_identity():
    S = SurfaceAlgebra(1, 1)
    u = TangentialDerivation.zero(S, 6)
    assert not divergence(u)
    assert not j_cocycle(TangentialAutomorphism(u))
    assert not c_f(random_tder(S, 6, 3), Framing.zero(1, 1))


def test_tangential_derivation_validation():
    S = SurfaceAlgebra(1, 0)
    with pytest.raises(ValueError):
        TangentialDerivation(S, 4, {0: letter(S, "y1", 4)})


@pytest.mark.parametrize("gn", SURFACES)
@given(seed=seeds)
@settings(max_examples=10)
def test_inner_values(gn, seed):
    S = SurfaceAlgebra(*gn)
    N = 6
    ell = random_lie(S.alphabet, N - 2, seed, density=0.4)
    u = TangentialDerivation.inner(S, ell, N)
    d = divergence(u)
    assert d == trace(ell).with_cutoff(d.cutoff).scale(1 - 2 * S.g - S.n)
    f = framing_for(S, seed)
    c = c_f(u, f)
    assert c == trace(ell).with_cutoff(c.cutoff).scale(sum(f.rot_gamma))
    F = TangentialAutomorphism(u)
    om = S.omega(N)
    assert F(om) == exp(-ell.with_cutoff(N)) * om * exp(ell.with_cutoff(N))
    jf = j_f(F, f)
    assert jf == trace(ell).with_cutoff(jf.cutoff).scale(-f.rot_gamma0)


def test_divergence_inner_example():
    S = SurfaceAlgebra(1, 1)
    x = letter(S, "x1", 5)
    d = divergence(TangentialDerivation.inner(S, x, 5))
    assert d.terms == {(S.x(1),): -2}


@pytest.mark.parametrize("gn", SURFACES)
@given(seed=seeds)
@settings(max_examples=8)
def test_divergence_cocycle(gn, seed):
    S = SurfaceAlgebra(*gn)
    u = random_tder(S, 5, seed)
    v = random_tder(S, 5, seed + 1)
    lhs = divergence(u.bracket(v))
    rhs = u.act_cyclic(divergence(v)) - v.act_cyclic(divergence(u))
    assert lhs == rhs


@pytest.mark.parametrize("gn", SURFACES)
@given(seed=seeds)
@settings(max_examples=6)
def test_j_group_cocycle(gn, seed):
    S = SurfaceAlgebra(*gn)
    F = TangentialAutomorphism(random_tder(S, 5, seed))
    G = TangentialAutomorphism(random_tder(S, 5, seed + 1))
    FG = F * G
    a = random_lie(S.alphabet, 5, seed + 2, density=0.3)
    assert FG(a) == F(G(a))
    assert j_cocycle(FG) == j_cocycle(F) + F.act_cyclic(j_cocycle(G))
    f = framing_for(S, seed)
    assert j_f(FG, f) == j_f(F, f) + F.act_cyclic(j_f(G, f))


@given(seed=seeds)
@settings(max_examples=10)
def test_c_f_linear(seed):
    S = SurfaceAlgebra(1, 2)
    f = framing_for(S, seed)
    u, v = random_tder(S, 5, seed), random_tder(S, 5, seed + 1)
    assert c_f(u + v.scale(3), f) == c_f(u, f) + c_f(v, f).scale(3)


@given(seed=seeds)
@settings(max_examples=10)
def test_conjugators(seed):
    S = SurfaceAlgebra(0, 3)
    N = 6
    F = TangentialAutomorphism(random_tder(S, N, seed))
    for j, f in enumerate(F.conjugators(), start=1):
        z = letter(S, f"z{j}", N)
        fj = f.with_cutoff(N)
        assert F(z) == exp(-fj) * z * exp(fj)


def test_json_round_trip():
    S = SurfaceAlgebra(1, 1)
    F = TangentialAutomorphism(random_tder(S, 5, 11))
    data = json.loads(json.dumps(F.to_json()))
    G = TangentialAutomorphism.from_json(data)
    assert G.u == F.u


# expansions


def test_theta_exp_tangential_not_special():
    S = SurfaceAlgebra(1, 1)
    ok, gs = is_tangential_expansion(S, exp_images(S, 5))
    assert ok and all(g == TensorSeries.one(S.alphabet, 5) for g in gs)
    assert not is_special_expansion(SurfaceAlgebra(1, 0), exp_images(SurfaceAlgebra(1, 0), 5))


@pytest.mark.parametrize("gn", [(0, 2), (1, 1)])
def test_conjugated_special_expansion(gn):
    S = SurfaceAlgebra(*gn)
    F = solve_kv1(S, 5).F
    images = theta_F_images(F)
    assert is_special_expansion(S, images)
    g = exp(TensorSeries.monomial(S.alphabet, (0,), 5))
    moved = {k: conjugate(g, v) for k, v in images.items()}
    assert is_tangential_expansion(S, moved)[0]
    assert not is_special_expansion(S, moved)
    assert is_conjugate_special(S, moved)


# KV equations


def test_identity_is_not_kv1():
    S = SurfaceAlgebra(0, 2)
    F = TangentialAutomorphism.identity(S, 6)
    assert not check_kv1(F)
    for N in (6, 8):
        with pytest.raises(NotConjugate):
            check_kv1_prime(TangentialAutomorphism.identity(S, N))


@pytest.mark.parametrize("gn,N", [((0, 2), 6), ((1, 0), 5), ((1, 1), 5)])
def test_solve_kv1(gn, N):
    S = SurfaceAlgebra(*gn)
    sol = solve_kv1(S, N)
    assert check_kv1(sol.F)
    assert sol.F(S.omega(N)) == xi(S, N)
    assert is_special_expansion(S, theta_F_images(sol.F))
    assert set(sol.nullities) == set(range(1, N - 1))
    ok, ell0 = check_kv1_prime(sol.F)
    assert ok and not ell0


def test_theta_F_on_words():
    S = SurfaceAlgebra(0, 2)
    F = solve_kv1(S, 6).F
    assert theta_F(F, gamma0_word(S)) == exp(S.omega(6))


@pytest.mark.parametrize("gn", [(0, 2), (1, 0)])
def test_kv1_prime_recovers_ell(gn):
    S = SurfaceAlgebra(*gn)
    N = 5
    F = solve_kv1(S, N).F
    ell = random_lie(S.alphabet, N - 2, 4, density=0.5)
    moved = TangentialAutomorphism.inner(S, -ell, N) * F
    ok, ell0 = check_kv1_prime(moved)
    x = xi(S, N)
    assert moved(S.omega(N)) == exp(-ell0) * x * exp(ell0)
    # e^{ℓ₀} e^{ℓ} commutes with ξ
    h = exp(ell0) * exp(ell.with_cutoff(N))
    assert h * x == x * h


def test_kv2_zero_input():
    S = SurfaceAlgebra(0, 2)
    F = TangentialAutomorphism.identity(S, 6)
    res = check_kv2_prime(F, Framing.zero(0, 2), TensorSeries.zero(S.alphabet, 6))
    assert res.ok
    assert all(c == 0 for h in res.h_j for c in h) and all(c == 0 for c in res.h)


def test_kv2_inner_fails_in_genus_one():
    S = SurfaceAlgebra(1, 1)
    ell = letter(S, "x1", 5) + letter(S, "z1", 5)
    F = TangentialAutomorphism.inner(S, ell, 5)
    res = check_kv2_prime(F, Framing((1,), (2,), (0,), 2), -ell)
    assert not res.ok and res.failed_weight == 1


@pytest.mark.parametrize("gn", [(0, 2), (0, 3), (1, 1)])
def test_solve_kv2(gn):
    S = SurfaceAlgebra(*gn)
    f = Framing.zero(*gn)
    sol = solve_kv1(S, 6, framing=f)
    assert check_kv1(sol.F)
    ok, ell0 = check_kv1_prime(sol.F)
    res = check_kv2_prime(sol.F, f, ell0)
    assert res.ok


def test_boundary_membership_finds_coefficients():
    S = SurfaceAlgebra(0, 2)
    N = 6
    z1 = letter(S, "z1", N)
    target = trace(z1 * z1).scale(3) - trace(xi(S, N) ** 2).scale(Q(1, 2))
    res = boundary_membership(S, target)
    assert res.ok
    assert res.h_j[0][2] == 3 and res.h[2] == Q(1, 2)


def test_perturbation_equivalence():
    S = SurfaceAlgebra(1, 0)
    N = 5
    F = solve_kv1(S, N).F
    for k, seed in [(1, 0), (2, 1), (3, 2), (4, 3), (4, 4)]:
        G = TangentialAutomorphism(F.u + random_tder(S, N, seed, low=k, high=k))
        assert check_kv1(G) == is_special_expansion(S, theta_F_images(G))
