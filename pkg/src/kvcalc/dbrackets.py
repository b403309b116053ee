"""Cyclic super-words, the Schouten bracket and non-commutative Poisson cohomology.

The superalgebra has the even letters of a surface algebra plus one odd letter
``θ_g`` (printed ``d<name>``) per generator, of weight ``-wt(g)``. Cyclic
words rotate with the Koszul sign ``|AB| = (-1)^{|A||B|} |BA|``. The only
nonzero generator double brackets are ``{{θ_g, g}} = 1⊗1`` and, by skew
symmetry, ``{{g, θ_g}} = -1⊗1``.
"""

from dataclasses import dataclass
from functools import lru_cache

from . import linalg
from .cyclic import CyclicSeries, canonical_rotation, period
from .lie import NoSolution, solve_ad
from .rational import Q, fmt_q
from .series import TensorSeries, apply_derivation


class NotTangential(ValueError):
    def __init__(self, msg, weight=None):
        super().__init__(msg)
        self.weight = weight


@dataclass(frozen=True)
class SuperAlphabet:
    """Even letters ``0..s-1`` of ``base`` and odd partners ``s..2s-1``."""

    base: object

    @property
    def s(self):
        return len(self.base)

    def odd(self, l):
        return l + self.s

    def is_odd(self, l):
        return l >= self.s

    def weight_of(self, l):
        s = self.s
        return -self.base.weights[l - s] if l >= s else self.base.weights[l]

    def weight(self, word):
        return sum(self.weight_of(l) for l in word)

    def degree(self, word):
        s = self.s
        return sum(1 for l in word if l >= s)

    def name(self, l):
        s = self.s
        return "d" + self.base.names[l - s] if l >= s else self.base.names[l]

    def index(self, name):
        if name.startswith("d") and name[1:] in self.base.names:
            return self.base.index(name[1:]) + self.s
        return self.base.index(name)

    def fmt_word(self, w):
        return " ".join(self.name(l) for l in w) if w else "1"


def _parity(word, s):
    return sum(1 for l in word if l >= s) & 1


@lru_cache(maxsize=500000)
def super_canonical(word, s):
    """``(canonical word, sign)`` with ``|word| = sign * |canonical|``, or None if zero."""
    word = tuple(word)
    if not word:
        return (), 1
    r = canonical_rotation(word)
    p = period(r)
    block_odd = _parity(r[:p], s)
    if block_odd and (len(r) // p) % 2 == 0:
        return None
    n = len(word)
    for k in range(n):
        if word[k:] + word[:k] == r:
            sign = -1 if (_parity(word[:k], s) and _parity(word[k:], s)) else 1
            return r, sign
    raise AssertionError("rotation not found")


class SuperCyclicSeries:
    """Finite linear combination of canonical cyclic super-words."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet, terms=None):
        self.alphabet = alphabet
        out = {}
        s = alphabet.s
        for w, c in (terms or {}).items():
            if not c:
                continue
            can = super_canonical(tuple(w), s)
            if can is None:
                continue
            r, sign = can
            out[r] = out.get(r, 0) + sign * Q(c)
        self.terms = {k: v for k, v in out.items() if v}

    @classmethod
    def _raw(cls, alphabet, terms):
        obj = cls.__new__(cls)
        obj.alphabet = alphabet
        obj.terms = terms
        return obj

    @classmethod
    def from_cyclic(cls, alphabet, c):
        """Degree-0 series from a cyclic series over the even letters."""
        return cls._raw(alphabet, dict(c.terms))

    def to_cyclic(self, cutoff=None):
        if any(self.alphabet.degree(w) for w in self.terms):
            raise ValueError("only degree-0 series are plain cyclic series")
        base = self.alphabet.base
        if cutoff is None:
            cutoff = max((base.weight(w) for w in self.terms), default=0)
        return CyclicSeries._raw(base, cutoff, dict(self.terms))

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            nv = out.get(k, 0) + v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return SuperCyclicSeries._raw(self.alphabet, out)

    def __neg__(self):
        return SuperCyclicSeries._raw(self.alphabet, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Q(c)
        if not c:
            return SuperCyclicSeries._raw(self.alphabet, {})
        return SuperCyclicSeries._raw(self.alphabet, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        return isinstance(other, SuperCyclicSeries) and not (self - other).terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def degrees(self):
        return sorted({self.alphabet.degree(w) for w in self.terms})

    def weights(self):
        return sorted({self.alphabet.weight(w) for w in self.terms})

    def __repr__(self):
        f = self.alphabet.fmt_word
        items = sorted(self.terms.items())
        parts = [f"{fmt_q(c)}*|{f(w)}|" for w, c in items[:12]]
        return f"SuperCyclicSeries({' + '.join(parts) or '0'})"

    def to_json(self):
        return {
            "cyclic": True,
            "super": True,
            "terms": [
                {"word": [self.alphabet.name(l) for l in w], "coeff": fmt_q(c)}
                for w, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
            ],
        }


def generator_double_bracket(alphabet, p, q):
    """``{{p, q}}`` on generators: ``{{θ_g, g}} = 1⊗1``, ``{{g, θ_g}} = -1⊗1``, else 0.

    Returned as a dict ``(left_word, right_word) -> coeff``.
    """
    s = alphabet.s
    if p >= s and q == p - s:
        return {((), ()): Q(1)}
    if p < s and q == p + s:
        return {((), ()): Q(-1)}
    return {}


def _pairing(p, q, s):
    if p >= s and q == p - s:
        return 1
    if p < s and q == p + s:
        return -1
    return 0


@lru_cache(maxsize=500000)
def _schouten_words(P, Qw, s):
    out = {}
    for i, c in enumerate(P):
        for j, d in enumerate(Qw):
            e = _pairing(c, d, s)
            if not e:
                continue
            if _parity(P[: i + 1], s) and _parity(P[i + 1:], s):
                e = -e
            if _parity(Qw[:j], s) and _parity(Qw[j:], s):
                e = -e
            w = P[i + 1:] + P[:i] + Qw[j + 1:] + Qw[:j]
            can = super_canonical(w, s)
            if can is None:
                continue
            r, sign = can
            out[r] = out.get(r, 0) + e * sign
    return tuple((k, v) for k, v in out.items() if v)


def schouten(P, Qs):
    """The Schouten bracket ``[P, Q]`` of cyclic super-series."""
    A = P.alphabet
    s = A.s
    out = {}
    for wp, cp in P.terms.items():
        for wq, cq in Qs.terms.items():
            for k, v in _schouten_words(wp, wq, s):
                out[k] = out.get(k, 0) + cp * cq * v
    return SuperCyclicSeries._raw(A, {k: v for k, v in out.items() if v})


def as_super(A, c):
    """Promote a :class:`CyclicSeries` (or pass through a super series)."""
    if isinstance(c, SuperCyclicSeries):
        return c
    return SuperCyclicSeries.from_cyclic(A, c)


def partial_map(P, args):
    """``∂(P)(a_1, ..., a_k) = [...[[P, a_k], a_{k-1}]..., a_1]``."""
    A = P.alphabet
    degs = P.degrees()
    if degs and degs != [len(args)]:
        raise ValueError(f"∂-degree {degs} does not match {len(args)} arguments")
    out = P
    for a in reversed(args):
        out = schouten(out, as_super(A, a))
    return out


def poisson_bivector(S):
    """``Π = sum_i |θ_{x_i} θ_{y_i}| + sum_j |z_j θ_{z_j} θ_{z_j}|``."""
    A = SuperAlphabet(S.alphabet)
    terms = {}
    for i in range(1, S.g + 1):
        terms[(A.odd(S.x(i)), A.odd(S.y(i)))] = 1
    for j in range(1, S.n + 1):
        z = S.z(j)
        terms[(z, A.odd(z), A.odd(z))] = 1
    return SuperCyclicSeries(A, terms)


def e_insert(A, alpha):
    """``|α E|`` with ``E = sum_g (g θ_g - θ_g g)``; ``alpha`` maps non-cyclic words to coefficients."""
    terms = {}
    for w, c in alpha.items():
        for g in range(A.s):
            for word, sign in (((g, A.odd(g)), 1), ((A.odd(g), g), -1)):
                key = tuple(w) + word
                terms[key] = terms.get(key, 0) + sign * c
    return SuperCyclicSeries(A, terms)


def derivation_images(P):
    """The derivation ``g -> U`` of a degree-1 series, from ``|U θ_g|``."""
    A = P.alphabet
    s = A.s
    out = {}
    for w, c in P.terms.items():
        odd = [k for k, l in enumerate(w) if l >= s]
        if len(odd) != 1:
            raise ValueError("derivation_images needs a series of ∂-degree 1")
        k = odd[0]
        g = w[k] - s
        u = w[k + 1:] + w[:k]
        out.setdefault(g, {})
        out[g][u] = out[g].get(u, 0) + c
    return out


def derivation_from_images(A, images):
    """``sum_g |φ(g) θ_g|`` for ``images: letter -> TensorSeries``."""
    terms = {}
    for g, img in images.items():
        g = A.base.index(g) if isinstance(g, str) else g
        for w, c in img.terms.items():
            key = w + (A.odd(g),)
            terms[key] = terms.get(key, 0) + c
    return SuperCyclicSeries(A, terms)


def apply_degree_one(P, a):
    """Act with a degree-1 series on a non-cyclic even series ``a`` as a derivation."""
    A = P.alphabet
    imgs = {
        g: TensorSeries._raw(A.base, a.cutoff + 10 ** 6, d) for g, d in derivation_images(P).items()
    }
    out = {}
    for w, c in a.terms.items():
        for k, l in enumerate(w):
            for v, d in imgs.get(l, TensorSeries.zero(A.base, 0)).terms.items():
                key = w[:k] + v + w[k + 1:]
                out[key] = out.get(key, 0) + c * d
    return {k: v for k, v in out.items() if v}


# basis enumeration and the quotient complex -------------------------------------------


@lru_cache(maxsize=None)
def _super_words(weights, k, w):
    """All (non-canonical) super words with ``k`` odd letters and weight ``w``."""
    s = len(weights)
    budget = w + k * max(weights)  # bound on the even weight
    out = []

    def rec(prefix, odd, wt_even, wt):
        if odd == k and wt == w and prefix:
            out.append(tuple(prefix))
        if odd == k and wt == w and not prefix:
            out.append(())
        for l in range(s):
            if wt_even + weights[l] <= budget:
                prefix.append(l)
                rec(prefix, odd, wt_even + weights[l], wt + weights[l])
                prefix.pop()
        if odd < k:
            for l in range(s):
                prefix.append(l + s)
                rec(prefix, odd + 1, wt_even, wt - weights[l])
                prefix.pop()

    if budget >= 0:
        rec([], 0, 0, 0)
    return tuple(sorted(set(out)))


def noncyclic_words(A, k, w):
    return _super_words(A.base.weights, k, w)


@lru_cache(maxsize=None)
def _cyclic_basis(weights, k, w):
    s = len(weights)
    out = set()
    for word in _super_words(weights, k, w):
        can = super_canonical(word, s)
        if can is not None:
            out.add(can[0])
    return tuple(sorted(out))


def cyclic_super_basis(A, k, w):
    return _cyclic_basis(A.base.weights, k, w)


def e_ideal_span(A, k, w):
    """Spanning vectors of ``|D^{k-1} E|`` at weight ``w``."""
    if k == 0:
        return []
    vecs = []
    for word in noncyclic_words(A, k - 1, w):
        v = e_insert(A, {word: Q(1)})
        if v:
            vecs.append(v.terms)
    return vecs


def _quotient(A, k, w):
    ech = linalg.Echelon(track=False)
    for i, v in enumerate(e_ideal_span(A, k, w)):
        ech.add(i, v)
    return ech


def cohomology(S, degree, weight):
    """Dimensions and representatives of ``H^degree`` of ``d = [Π, ·]`` at one weight.

    Weights are those of the super calculus, so ``d`` lowers weight by 2.
    """
    if degree not in (0, 1):
        raise ValueError("only degrees 0 and 1 are supported")
    A = SuperAlphabet(S.alphabet)
    Pi = poisson_bivector(S)

    def d(word):
        return schouten(Pi, SuperCyclicSeries._raw(A, {word: Q(1)}))

    target = _quotient(A, degree + 1, weight - 2)
    src_ideal = _quotient(A, degree, weight)
    cols = []
    for word in cyclic_super_basis(A, degree, weight):
        cols.append((word, target.residual(d(word).terms)))
    cocycles = [v for v in linalg.kernel(cols)]
    # cocycles modulo the ideal in the source
    zech = linalg.Echelon(track=False)
    for i, v in enumerate(e_ideal_span(A, degree, weight)):
        zech.add(("I", i), v)
    dim_ideal = len(zech)
    reps_candidates = []
    for i, v in enumerate(cocycles):
        if zech.add(("Z", i), v) is None:
            reps_candidates.append(v)
    dim_ker = len(zech) - dim_ideal
    dim_im = 0
    reps = []
    if degree == 0:
        reps = reps_candidates
    else:
        bech = linalg.Echelon(track=False)
        for i, v in enumerate(e_ideal_span(A, degree, weight)):
            bech.add(("I", i), v)
        for word in cyclic_super_basis(A, degree - 1, weight + 2):
            bech.add(("B", word), d(word).terms)
        dim_im = len(bech) - dim_ideal
        for i, v in enumerate(reps_candidates):
            if bech.add(("Z", i), v) is None:
                reps.append(v)
    del src_ideal
    return {
        "degree": degree,
        "weight": weight,
        "dim_ker": dim_ker,
        "dim_im": dim_im,
        "dim_H": dim_ker - dim_im,
        "representatives": [SuperCyclicSeries._raw(A, dict(r)) for r in reps],
    }


def cohomology_json(report):
    out = dict(report)
    out["representatives"] = [r.to_json() for r in report["representatives"]]
    return out


# tangentiality ---------------------------------------------------------------------


def is_fully_tangential(S, images, cutoff):
    """Witnesses ``a_j`` with ``φ(z_j) = [a_j, z_j]`` for ``j = 0..n``, ``z_0 = -ω``.

    ``images`` gives the derivation on generators (missing letters map to 0).
    Returns ``(True, witnesses)`` or ``(False, weight_of_first_failure)``.
    """
    if S.g == 0 and S.n == 1:
        raise ValueError("excluded case: the graded Goldman bracket vanishes for (g, n) = (0, 1)")
    zs = [S.letter(S.z(j), cutoff) for j in range(1, S.n + 1)]
    zs.append(-S.omega(cutoff))
    witnesses = []
    for z in zs:
        phz = apply_derivation(images, z, cutoff)
        try:
            u = solve_ad(z, phz)
        except NoSolution as exc:
            msg = str(exc)
            wt = int(msg.rsplit(" ", 1)[-1]) if msg.rsplit(" ", 1)[-1].isdigit() else None
            return False, wt
        witnesses.append(-u)
    return True, witnesses


def check_fully_tangential(S, images, cutoff):
    ok, info = is_fully_tangential(S, images, cutoff)
    if not ok:
        raise NotTangential(f"not fully tangential at weight {info}", info)
    return info
