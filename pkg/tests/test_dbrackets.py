import pytest
from hypothesis import given, settings, strategies as st

from kvcalc import linalg
from kvcalc.cyclic import CyclicSeries, trace
from kvcalc.dbrackets import (
    NotTangential,
    SuperAlphabet,
    SuperCyclicSeries,
    apply_degree_one,
    check_fully_tangential,
    cohomology,
    derivation_images,
    e_ideal_span,
    e_insert,
    generator_double_bracket,
    is_fully_tangential,
    partial_map,
    poisson_bivector,
    schouten,
    super_canonical,
)
from kvcalc.lie import bracket
from kvcalc.necklace import SurfaceAlgebra, center_component, goldman_bracket, same_span
from kvcalc.randgen import random_cyclic, random_lie, rng_of
from kvcalc.rational import Q
from kvcalc.series import TensorSeries

seeds = st.integers(0, 10**6)


def sup(A, words):
    return SuperCyclicSeries(A, words)


def test_generator_double_brackets():
    S = SurfaceAlgebra(1, 1)
    A = SuperAlphabet(S.alphabet)
    z, x, y = S.z(1), S.x(1), S.y(1)
    assert generator_double_bracket(A, A.odd(z), z) == {((), ()): 1}
    assert generator_double_bracket(A, z, A.odd(z)) == {((), ()): -1}
    assert not generator_double_bracket(A, A.odd(x), y)
    assert not generator_double_bracket(A, x, y)


def test_odd_periodic_words_vanish():
    S = SurfaceAlgebra(0, 1)
    A = SuperAlphabet(S.alphabet)
    dz = A.odd(S.z(1))
    assert super_canonical((dz, dz), A.s) is None
    assert super_canonical((dz,), A.s) == ((dz,), 1)


@pytest.mark.parametrize("gn", [(1, 0), (0, 2), (1, 1), (2, 1)])
def test_poisson_bivector_is_poisson(gn):
    S = SurfaceAlgebra(*gn)
    P = poisson_bivector(S)
    assert not schouten(P, P)


def test_schouten_example():
    S = SurfaceAlgebra(0, 1)
    A = SuperAlphabet(S.alphabet)
    z = S.z(1)
    dz = A.odd(z)
    assert not schouten(sup(A, {(z, dz, dz): 1}), sup(A, {(dz,): 1}))


@settings(max_examples=15)
@given(seeds)
def test_partial_of_poisson_is_goldman(seed):
    S = SurfaceAlgebra(1, 1)
    rng = rng_of(seed)
    P = poisson_bivector(S)
    a = random_cyclic(S.alphabet, rng.randint(1, 4), rng)
    b = random_cyclic(S.alphabet, rng.randint(1, 4), rng)
    assert partial_map(P, [a, b]).terms == goldman_bracket(S, a, b).terms


@settings(max_examples=15)
@given(seeds)
def test_hamiltonian_derivation_matches_goldman(seed):
    S = SurfaceAlgebra(1, 1)
    A = SuperAlphabet(S.alphabet)
    rng = rng_of(seed)
    a = random_cyclic(S.alphabet, rng.randint(1, 4), rng)
    b = random_cyclic(S.alphabet, rng.randint(1, 4), rng)
    ham = schouten(poisson_bivector(S), SuperCyclicSeries.from_cyclic(A, a))
    rep = TensorSeries._raw(S.alphabet, 20, dict(b.terms))
    acted = trace(TensorSeries._raw(S.alphabet, 20, apply_degree_one(ham, rep)))
    # [Π, |a|] is the derivation |b| -> {|b|, |a|}
    assert acted.terms == goldman_bracket(S, b, a).terms


def test_e_insert_is_inner_derivation():
    S = SurfaceAlgebra(1, 1)
    A = SuperAlphabet(S.alphabet)
    a = (S.x(1), S.z(1))
    E = e_insert(A, {a: 1})
    images = derivation_images(E)
    for g in range(A.s):
        letter = TensorSeries.monomial(S.alphabet, (g,), 6)
        aa = TensorSeries.monomial(S.alphabet, a, 6)
        img = TensorSeries(S.alphabet, 6, images.get(g, {}))
        assert img == bracket(aa, letter)


@settings(max_examples=15)
@given(seeds)
def test_e_insert_acts_trivially(seed):
    S = SurfaceAlgebra(1, 1)
    A = SuperAlphabet(S.alphabet)
    rng = rng_of(seed)
    word = tuple(rng.choice(range(A.s)) for _ in range(rng.randint(1, 3)))
    E = e_insert(A, {word: 1})
    c = random_cyclic(S.alphabet, rng.randint(1, 4), rng)
    assert not partial_map(E, [c])


def test_e_ideal_is_lie_ideal():
    S = SurfaceAlgebra(1, 1)
    A = SuperAlphabet(S.alphabet)
    a = CyclicSeries(S.alphabet, 3, {(S.x(1), S.y(1), S.y(1)): 1})
    E = e_insert(A, {(S.x(1), S.z(1)): 1})
    assert not schouten(SuperCyclicSeries.from_cyclic(A, a), E)
    br = schouten(poisson_bivector(S), E)
    assert br
    (k,) = set(br.degrees())
    (w,) = set(br.weights())
    assert linalg.in_span(e_ideal_span(A, k, w), br.terms)


def test_partial_of_dz_is_z_to_one():
    S = SurfaceAlgebra(1, 1)
    A = SuperAlphabet(S.alphabet)
    dz = sup(A, {(A.odd(S.z(1)),): 1})
    images = derivation_images(dz)
    assert images == {S.z(1): {(): 1}}
    c = CyclicSeries(S.alphabet, 4, {(S.x(1), S.z(1), S.y(1)): 1})
    assert partial_map(dz, [c]).terms == {(S.x(1), S.y(1)): 1}


def test_first_cohomology_one_puncture():
    S = SurfaceAlgebra(1, 1)
    A = SuperAlphabet(S.alphabet)
    top = cohomology(S, 1, -2)
    assert (top["dim_ker"], top["dim_im"], top["dim_H"]) == (1, 0, 1)
    (rep,) = top["representatives"]
    assert list(rep.terms) == [(A.odd(S.z(1)),)]
    for w in range(-1, 3):
        assert cohomology(S, 1, w)["dim_H"] == 0


@pytest.mark.parametrize("w", range(0, 7))
def test_zeroth_cohomology_is_center(w):
    S = SurfaceAlgebra(1, 1)
    res = cohomology(S, 0, w)
    reps = [r.to_cyclic(w) for r in res["representatives"]]
    assert same_span(reps, center_component(S, w, range(1, 7)))


def test_fully_tangential_examples():
    S = SurfaceAlgebra(1, 1)
    A = S.alphabet
    N = 6
    ell = TensorSeries.letter(A, "x1", N) + bracket(TensorSeries.letter(A, "y1", N), TensorSeries.letter(A, "z1", N))
    inner = {l: bracket(TensorSeries.monomial(A, (l,), N), ell) for l in range(len(A))}
    ok, wit = is_fully_tangential(S, inner, N)
    assert ok
    assert all(w == wit[0] for w in wit)

    a = CyclicSeries(A, 3, {(S.x(1), S.x(1), S.y(1)): 1})
    As = SuperAlphabet(A)
    ham = schouten(poisson_bivector(S), SuperCyclicSeries.from_cyclic(As, a))
    images = {g: TensorSeries(A, N, d) for g, d in derivation_images(ham).items()}
    assert is_fully_tangential(S, images, N)[0]

    euler = {l: TensorSeries.monomial(A, (l,), N).scale(A.weights[l]) for l in range(len(A))}
    ok, weight = is_fully_tangential(S, euler, N)
    assert not ok and weight == 2
    with pytest.raises(NotTangential):
        check_fully_tangential(S, euler, N)
    with pytest.raises(ValueError):
        is_fully_tangential(SurfaceAlgebra(0, 1), {}, N)
