"""The graded Goldman (necklace) bracket on cyclic words of a surface algebra.

Letters ``x_i, y_i`` (weight 1) and ``z_j`` (weight 2). The bracket comes from
the skew-symmetric double bracket with ``{{x_i, y_i}} = 1⊗1``,
``{{y_i, x_i}} = -1⊗1`` and ``{{z_j, z_j}} = z_j⊗1 - 1⊗z_j``, all other
generator pairs zero. On cyclic words

    {|a|, |b|} = sum_{i,j} |u' a_{>i} a_{<i} u'' b_{>j} b_{<j}|,
    {{a_i, b_j}} = sum u'⊗u''.
"""

from dataclasses import dataclass, field
from functools import lru_cache

from . import linalg
from .cyclic import CyclicSeries, canonical_rotation, trace
from .rational import Q
from .series import Alphabet, AlphabetMismatch, TensorSeries


@dataclass(frozen=True)
class SurfaceAlgebra:
    g: int
    n: int
    alphabet: Alphabet = field(init=False)

    def __post_init__(self):
        if self.g < 0 or self.n < 0:
            raise ValueError("g and n must be non-negative")
        if self.g == 0 and self.n == 0:
            raise ValueError("the surface algebra needs at least one generator")
        object.__setattr__(self, "alphabet", Alphabet.surface(self.g, self.n))

    def x(self, i):
        return 2 * (i - 1)

    def y(self, i):
        return 2 * (i - 1) + 1

    def z(self, j):
        return 2 * self.g + j - 1

    def letter(self, l, cutoff):
        return TensorSeries._raw(self.alphabet, cutoff, {(l,): Q(1)})

    def omega0(self, cutoff=2):
        terms = {}
        for i in range(1, self.g + 1):
            terms[(self.x(i), self.y(i))] = Q(1)
            terms[(self.y(i), self.x(i))] = Q(-1)
        return TensorSeries(self.alphabet, cutoff, terms)

    def omega(self, cutoff=2):
        """``sum_i [x_i, y_i] + sum_j z_j``."""
        out = self.omega0(cutoff)
        for j in range(1, self.n + 1):
            out = out + self.letter(self.z(j), cutoff)
        return out

    def partner(self, l):
        """The letter paired with ``l`` and the sign of ``{{l, partner}}``."""
        if l < 2 * self.g:
            return (l + 1, Q(1)) if l % 2 == 0 else (l - 1, Q(-1))
        return None

    def cyclic_basis(self, k):
        return cyclic_words(self.alphabet, k)


@lru_cache(maxsize=None)
def _cyclic_words(weights, k):
    from .series import _words_of_weight

    return tuple(sorted({canonical_rotation(w) for w in _words_of_weight(weights, k)}))


def cyclic_words(alphabet, k):
    """Canonical cyclic words of weight ``k``."""
    return _cyclic_words(alphabet.weights, k)


def _letter_double_bracket(S, a, b):
    """``{{a, b}}`` for letters as a list of ``(coeff, left, right)``."""
    if a < 2 * S.g:
        p = S.partner(a)
        if p[0] == b:
            return ((p[1], (), ()),)
        return ()
    if a == b:
        return ((Q(1), (a,), ()), (Q(-1), (), (a,)))
    return ()


@lru_cache(maxsize=None)
def _word_bracket(S, a, b):
    out = {}
    for i, ai in enumerate(a):
        ra = a[i + 1:] + a[:i]
        for j, bj in enumerate(b):
            terms = _letter_double_bracket(S, ai, bj)
            if not terms:
                continue
            rb = b[j + 1:] + b[:j]
            for c, left, right in terms:
                key = canonical_rotation(left + ra + right + rb)
                out[key] = out.get(key, 0) + c
    return tuple((k, v) for k, v in out.items() if v)


def _bracket_cutoff(a, b):
    kw = a.alphabet.weight

    def lowest(c):
        ws = [kw(w) for w in c.terms if w]
        return min(ws) if ws else c.cutoff + 1

    return min(a.cutoff + lowest(b), b.cutoff + lowest(a)) - 2


def goldman_bracket(S, a, b):
    """``{|a|, |b|}`` by direct splicing; exact through the propagated cutoff."""
    if a.alphabet != S.alphabet or b.alphabet != S.alphabet:
        raise AlphabetMismatch("cyclic series live over a different surface algebra")
    N = _bracket_cutoff(a, b)
    kw = S.alphabet.weight
    out = {}
    for wa, ca in a.terms.items():
        if not wa:
            continue
        for wb, cb in b.terms.items():
            if not wb or kw(wa) + kw(wb) - 2 > N:
                continue
            for k, v in _word_bracket(S, wa, wb):
                out[k] = out.get(k, 0) + ca * cb * v
    return CyclicSeries._raw(S.alphabet, N, {k: v for k, v in out.items() if v})


def _basis_element(S, w):
    return CyclicSeries._raw(S.alphabet, S.alphabet.weight(w), {w: Q(1)})


def center_component(S, k, test_weights):
    """Weight-``k`` cyclic series bracketing to zero with every basis word of the test weights."""
    cols = []
    tests = [w for t in test_weights for w in S.cyclic_basis(t)]
    for w in S.cyclic_basis(k):
        vec = {}
        for t in tests:
            for key, v in _word_bracket(S, w, t):
                vec[(t, key)] = vec.get((t, key), 0) + v
        cols.append((w, {kk: vv for kk, vv in vec.items() if vv}))
    return [CyclicSeries(S.alphabet, k, v) for v in linalg.kernel(cols)]


def predicted_center(S, k):
    """Spanning set of ``|ω^m|`` and ``|z_j^m|`` at weight ``k``."""
    if k % 2:
        return []
    m = k // 2
    if m == 0:
        return [CyclicSeries(S.alphabet, 0, {(): 1})]
    out = [trace(S.omega(k) ** m)]
    for j in range(1, S.n + 1):
        out.append(trace(S.letter(S.z(j), k) ** m))
    return [c for c in out if c]


def same_span(first, second):
    """Whether two lists of series span the same space."""
    a = [c.terms for c in first]
    b = [c.terms for c in second]
    r = linalg.rank(a + b)
    return linalg.rank(a) == r == linalg.rank(b)


def is_central(S, c, test_weights):
    for t in test_weights:
        for w in S.cyclic_basis(t):
            if goldman_bracket(S, c, _basis_element(S, w).with_cutoff(max(t, c.cutoff))):
                return False
    return True
