"""Seeded random elements for property suites and experiments."""

import random

from .lie import lie_basis
from .rational import Q
from .series import TensorSeries, exp


def rng_of(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def small_q(rng, bound=3):
    num = rng.randint(-bound, bound)
    den = rng.choice((1, 1, 2, 3))
    return Q(num, den)


def random_series(alphabet, cutoff, seed=0, density=0.5, low=0):
    rng = rng_of(seed)
    terms = {}
    for k in range(low, cutoff + 1):
        for w in alphabet.words(k):
            if rng.random() < density:
                c = small_q(rng)
                if c:
                    terms[w] = c
    return TensorSeries(alphabet, cutoff, terms)


def random_lie(alphabet, cutoff, seed=0, low=1, high=None, density=0.7):
    """Random combination of Lyndon brackets with weights in ``[low, high]``."""
    rng = rng_of(seed)
    high = cutoff if high is None else min(high, cutoff)
    out = TensorSeries.zero(alphabet, cutoff)
    for k in range(low, high + 1):
        for b in lie_basis(alphabet, k, cutoff):
            if rng.random() < density:
                out = out + b.scale(small_q(rng))
    return out


def random_grouplike(alphabet, cutoff, seed=0, low=1):
    return exp(random_lie(alphabet, cutoff, seed, low=low))


def random_vector(S, seed=0):
    """Random element of the weight-1 span of a symplectic space."""
    rng = rng_of(seed)
    return S.vector({l: Q(rng.randint(-2, 2)) for l in range(S.dim)})


def nonzero_vector(S, seed=0):
    rng = rng_of(seed)
    while True:
        v = random_vector(S, rng)
        if v:
            return v


def random_cyclic(alphabet, weight, seed=0, terms=2):
    """Random homogeneous cyclic series with a few basis words."""
    from .cyclic import CyclicSeries
    from .necklace import cyclic_words

    rng = rng_of(seed)
    words = cyclic_words(alphabet, weight)
    data = {}
    for _ in range(terms):
        w = rng.choice(words)
        data[w] = data.get(w, 0) + rng.randint(-3, 3)
    return CyclicSeries(alphabet, weight, data)


def random_tder(S, cutoff, seed=0, low=1, high=None, density=0.5):
    """Random tangential derivation with degrees in ``[low, high]``."""
    from .kv import TangentialDerivation

    rng = rng_of(seed)
    A = S.alphabet
    high = cutoff - 1 if high is None else high
    images = {}
    for l in range(2 * S.g):
        images[l] = random_lie(A, cutoff, rng, low=low + 1, high=high + 1, density=density)
    gens = [random_lie(A, cutoff - 2, rng, low=low, high=high, density=density) for _ in range(S.n)]
    return TangentialDerivation(S, cutoff, images, gens)
