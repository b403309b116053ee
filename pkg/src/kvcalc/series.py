"""Weight-truncated series in the completed free associative algebra.

A :class:`TensorSeries` is a finitely supported map ``word -> mpq`` together
with a cutoff ``N``: every stored word has weight at most ``N`` and nothing is
known about higher weights. Binary operations truncate at the smaller of the
two cutoffs. Words are tuples of letter indices into an :class:`Alphabet`.
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .rational import ONE, Q, as_q, factorial, fmt_q, parse_q


@dataclass(frozen=True)
class Alphabet:
    """Ordered generators with positive integer weights."""

    names: tuple
    weights: tuple

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be unique")
        if len(self.names) != len(self.weights) or any(w < 1 for w in self.weights):
            raise ValueError("every generator needs a weight >= 1")

    @classmethod
    def surface(cls, g, n):
        """x1 < y1 < ... < xg < yg < z1 < ... < zn with wt(x)=wt(y)=1, wt(z)=2."""
        names, weights = [], []
        for i in range(1, g + 1):
            names += [f"x{i}", f"y{i}"]
            weights += [1, 1]
        for j in range(1, n + 1):
            names.append(f"z{j}")
            weights.append(2)
        return cls(tuple(names), tuple(weights))

    @classmethod
    def generic(cls, d, weights=None):
        weights = tuple(weights) if weights is not None else (1,) * d
        return cls(tuple(f"b{k}" for k in range(1, d + 1)), weights)

    def __len__(self):
        return len(self.names)

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown generator {name!r}") from None

    def word(self, *names):
        if len(names) == 1 and isinstance(names[0], str) and " " in names[0]:
            names = names[0].split()
        return tuple(self.index(n) for n in names)

    def weight(self, word):
        w0 = self._uniform_weight
        if w0:
            return w0 * len(word)
        ws = self.weights
        return sum(ws[l] for l in word)

    @cached_property
    def _uniform_weight(self):
        return self.weights[0] if len(set(self.weights)) == 1 else 0

    @property
    def uniform(self):
        return all(w == 1 for w in self.weights)

    @property
    def max_weight(self):
        return max(self.weights)

    def words(self, k):
        """All words of weight exactly ``k``, in lexicographic order."""
        return _words_of_weight(self.weights, k)

    def fmt_word(self, word):
        return " ".join(self.names[l] for l in word) if word else "1"


@lru_cache(maxsize=None)
def _words_of_weight(weights, k):
    if k == 0:
        return ((),)
    out = []
    for l, w in enumerate(weights):
        if w <= k:
            out.extend((l,) + rest for rest in _words_of_weight(weights, k - w))
    return tuple(sorted(out))


class AlphabetMismatch(ValueError):
    pass


class _Sparse:
    """Shared linear structure: ``terms`` dict, ``cutoff``, ``alphabet``."""

    __slots__ = ("alphabet", "cutoff", "terms", "_bk")

    def __init__(self, alphabet, cutoff, terms=None):
        self.alphabet = alphabet
        self.cutoff = cutoff
        clean = {}
        if terms:
            for k, v in terms.items():
                if v and (cutoff is None or self._key_weight(k) <= cutoff):
                    clean[k] = as_q(v)
        self.terms = clean

    @classmethod
    def _raw(cls, alphabet, cutoff, terms):
        obj = cls.__new__(cls)
        obj.alphabet = alphabet
        obj.cutoff = cutoff
        obj.terms = terms
        return obj

    def _key_weight(self, key):
        return self.alphabet.weight(key)

    def _check(self, other):
        if type(other) is not type(self) and not (
            isinstance(other, _Sparse) and other._family() == self._family()
        ):
            raise TypeError(f"cannot combine {type(self).__name__} and {type(other).__name__}")
        if other.alphabet != self.alphabet:
            raise AlphabetMismatch("series live over different alphabets")

    def _family(self):
        return type(self)

    def _min_cut(self, other):
        if self.cutoff is None:
            return other.cutoff
        if other.cutoff is None:
            return self.cutoff
        return min(self.cutoff, other.cutoff)

    def _new(self, cutoff, terms):
        return self._raw(self.alphabet, cutoff, terms)

    def truncate(self, cutoff):
        if self.cutoff is not None and cutoff is not None and cutoff > self.cutoff:
            raise ValueError("cannot raise the cutoff of a truncated series")
        if cutoff == self.cutoff:
            return self._new(cutoff, dict(self.terms))
        kw = self._key_weight
        return self._new(cutoff, {k: v for k, v in self.terms.items() if kw(k) <= cutoff})

    def with_cutoff(self, cutoff):
        """Re-declare the cutoff; only sound for elements known exactly."""
        kw = self._key_weight
        return self._new(cutoff, {k: v for k, v in self.terms.items() if kw(k) <= cutoff})

    def __add__(self, other):
        if not isinstance(other, _Sparse):
            return self + self.scalar(other)
        self._check(other)
        cut = self._min_cut(other)
        kw = self._key_weight
        out = {k: v for k, v in self.terms.items() if cut is None or kw(k) <= cut}
        for k, v in other.terms.items():
            if cut is not None and kw(k) > cut:
                continue
            nv = out.get(k, 0) + v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return self._new(cut, out)

    __radd__ = __add__

    def __neg__(self):
        return self._new(self.cutoff, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = as_q(c)
        if not c:
            return self._new(self.cutoff, {})
        return self._new(self.cutoff, {k: c * v for k, v in self.terms.items()})

    def scalar(self, c):
        raise TypeError(f"{type(self).__name__} has no unit")

    def __eq__(self, other):
        if isinstance(other, (int, type(ONE))):
            other = self.scalar(other)
        if not isinstance(other, _Sparse):
            return NotImplemented
        if other.alphabet != self.alphabet:
            return False
        return not (self - other).terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coeff(self, key):
        return self.terms.get(key, Q(0))

    def weights(self):
        kw = self._key_weight
        return sorted({kw(k) for k in self.terms})

    def weight_component(self, k):
        if k < 0 or (self.cutoff is not None and k > self.cutoff):
            raise ValueError(f"weight {k} outside 0..{self.cutoff}")
        kw = self._key_weight
        return self._new(self.cutoff, {w: v for w, v in self.terms.items() if kw(w) == k})

    def lowest_weight(self):
        ws = self.weights()
        return ws[0] if ws else None

    def sorted_items(self):
        kw = self._key_weight
        return sorted(self.terms.items(), key=lambda kv: (kw(kv[0]), kv[0]))

    def is_homogeneous(self):
        return len(self.weights()) <= 1


class TensorSeries(_Sparse):
    """Element of the completed tensor algebra, truncated at ``cutoff``.

    ``==`` compares the two series through the smaller cutoff.
    """

    __slots__ = ()

    # construction -----------------------------------------------------------

    @classmethod
    def zero(cls, alphabet, cutoff):
        return cls._raw(alphabet, cutoff, {})

    @classmethod
    def one(cls, alphabet, cutoff):
        return cls(alphabet, cutoff, {(): 1})

    @classmethod
    def monomial(cls, alphabet, word, cutoff, coeff=1):
        if isinstance(word, str):
            word = alphabet.word(word)
        return cls(alphabet, cutoff, {tuple(word): coeff})

    @classmethod
    def letter(cls, alphabet, name, cutoff):
        return cls.monomial(alphabet, (alphabet.index(name),), cutoff)

    @classmethod
    def from_dict(cls, alphabet, cutoff, data):
        terms = {}
        for word, c in data.items():
            if isinstance(word, str):
                word = alphabet.word(word) if word.strip() not in ("", "1") else ()
            else:
                word = tuple(alphabet.index(l) if isinstance(l, str) else l for l in word)
            terms[word] = terms.get(word, 0) + as_q(c)
        return cls(alphabet, cutoff, terms)

    def _family(self):
        return TensorSeries

    def _new(self, cutoff, terms):
        # results of arithmetic lose any certification carried by a subclass
        return TensorSeries._raw(self.alphabet, cutoff, terms)

    def scalar(self, c):
        return TensorSeries(self.alphabet, self.cutoff, {(): c})

    def constant_term(self):
        return self.terms.get((), Q(0))

    # algebra ------------------------------------------------------------------

    def _buckets(self):
        # series are never mutated in place, so the grouping can be kept
        cached = getattr(self, "_bk", None)
        if cached is not None and cached[0] is self.terms:
            return cached[1]
        kw = self.alphabet.weight
        buckets = {}
        for w, c in self.terms.items():
            buckets.setdefault(kw(w), []).append((w, c))
        self._bk = (self.terms, buckets)
        return buckets

    def __mul__(self, other):
        if not isinstance(other, TensorSeries):
            if isinstance(other, _Sparse):
                return NotImplemented
            return self.scale(other)
        self._check(other)
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, _Sparse):
            return NotImplemented
        return self.scale(other)

    def __pow__(self, k):
        out = TensorSeries.one(self.alphabet, self.cutoff)
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, c):
        return self.scale(1 / as_q(c))

    def __repr__(self):
        if not self.terms:
            return f"TensorSeries(0; N={self.cutoff})"
        parts = []
        for w, c in self.sorted_items()[:12]:
            parts.append(f"{fmt_q(c)}*[{self.alphabet.fmt_word(w)}]")
        more = " + ..." if len(self.terms) > 12 else ""
        return f"TensorSeries({' + '.join(parts)}{more}; N={self.cutoff})"

    # serialization ------------------------------------------------------------

    def to_json(self):
        names = self.alphabet.names
        return {
            "cutoff": self.cutoff,
            "terms": [
                {"word": [names[l] for l in w], "coeff": fmt_q(c)}
                for w, c in self.sorted_items()
            ],
        }

    @classmethod
    def from_json(cls, data, alphabet):
        terms = {}
        for t in data["terms"]:
            w = tuple(alphabet.index(n) for n in t["word"])
            terms[w] = terms.get(w, 0) + parse_q(t["coeff"])
        return cls(alphabet, int(data["cutoff"]), terms)


def mul(a, b):
    """Concatenation product truncated at ``min(a.cutoff, b.cutoff)``."""
    N = a._min_cut(b)
    kw = a.alphabet.weight
    buckets = b._buckets()
    bws = sorted(buckets)
    out = {}
    get = out.get
    for w1, c1 in a.terms.items():
        room = N - kw(w1)
        for k in bws:
            if k > room:
                break
            for w2, c2 in buckets[k]:
                key = w1 + w2
                out[key] = get(key, 0) + c1 * c2
    return TensorSeries._raw(a.alphabet, N, {k: v for k, v in out.items() if v})


def weight_component(a, k):
    return a.weight_component(k)


# Hopf structure ---------------------------------------------------------------


class PairSeries(_Sparse):
    """Element of the completed tensor square, keyed by ``(word, word)`` pairs.

    Truncation is by total weight, so it runs on the same sparse engine as
    :class:`TensorSeries`.
    """

    __slots__ = ()

    def _key_weight(self, key):
        w = self.alphabet.weight
        return w(key[0]) + w(key[1])

    def scalar(self, c):
        return PairSeries(self.alphabet, self.cutoff, {((), ()): c})

    @classmethod
    def tensor(cls, a, b):
        """``a ⊗ b`` truncated by total weight."""
        N = a._min_cut(b)
        kw = a.alphabet.weight
        out = {}
        for w1, c1 in a.terms.items():
            room = N - kw(w1)
            for w2, c2 in b.terms.items():
                if kw(w2) <= room:
                    out[(w1, w2)] = c1 * c2
        return cls._raw(a.alphabet, N, out)

    def __mul__(self, other):
        if not isinstance(other, PairSeries):
            return self.scale(other)
        self._check(other)
        N = self._min_cut(other)
        kw = self._key_weight
        out = {}
        for (a1, a2), c1 in self.terms.items():
            room = N - kw((a1, a2))
            for (b1, b2), c2 in other.terms.items():
                if kw((b1, b2)) <= room:
                    key = (a1 + b1, a2 + b2)
                    out[key] = out.get(key, 0) + c1 * c2
        return PairSeries._raw(self.alphabet, N, {k: v for k, v in out.items() if v})

    def __rmul__(self, other):
        return self.scale(other)

    def __repr__(self):
        f = self.alphabet.fmt_word
        parts = [f"{fmt_q(c)}*[{f(k[0])} | {f(k[1])}]" for k, c in self.sorted_items()[:12]]
        return f"PairSeries({' + '.join(parts) or '0'}; N={self.cutoff})"


@lru_cache(maxsize=200000)
def _unshuffles(word):
    n = len(word)
    out = {}
    for mask in range(1 << n):
        left = tuple(word[i] for i in range(n) if mask >> i & 1)
        right = tuple(word[i] for i in range(n) if not mask >> i & 1)
        out[(left, right)] = out.get((left, right), 0) + 1
    return tuple(out.items())


def coproduct(a):
    """Δ with every generator primitive; truncated by total weight."""
    out = {}
    for w, c in a.terms.items():
        for key, mult in _unshuffles(w):
            out[key] = out.get(key, 0) + mult * c
    return PairSeries._raw(a.alphabet, a.cutoff, {k: v for k, v in out.items() if v})


def is_primitive(a):
    one = TensorSeries.one(a.alphabet, a.cutoff)
    return coproduct(a) == PairSeries.tensor(a, one) + PairSeries.tensor(one, a)


def is_grouplike(g):
    if g.constant_term() != 1:
        return False
    return coproduct(g) == PairSeries.tensor(g, g)


def exp(a):
    if a.constant_term():
        raise ValueError("exp needs a series without constant term")
    N = a.cutoff
    min_w = min(a.alphabet.weights)
    out = TensorSeries.one(a.alphabet, N)
    power = TensorSeries.one(a.alphabet, N)
    for k in range(1, N // min_w + 1):
        power = power * a
        if not power:
            break
        out = out + power.scale(Q(1, factorial(k)))
    return out


def log(g):
    if g.constant_term() != 1:
        raise ValueError("log needs a series with constant term 1")
    N = g.cutoff
    min_w = min(g.alphabet.weights)
    x = g - TensorSeries.one(g.alphabet, N)
    out = TensorSeries.zero(g.alphabet, N)
    power = TensorSeries.one(g.alphabet, N)
    for k in range(1, N // min_w + 1):
        power = power * x
        if not power:
            break
        out = out + power.scale(Q((-1) ** (k + 1), k))
    return out


def inverse_grouplike(g):
    """Inverse of a series with constant term 1."""
    N = g.cutoff
    one = TensorSeries.one(g.alphabet, N)
    x = one - g
    out, power = one, one
    for _ in range(N // min(g.alphabet.weights)):
        power = power * x
        if not power:
            break
        out = out + power
    return out


# substitution endomorphisms --------------------------------------------------


class Substitution:
    """Continuous algebra endomorphism given by the images of the generators.

    Letters without an explicit image are fixed. Applying to a series of
    cutoff ``N`` is exact through ``N`` as long as every image has no constant
    term and does not lower weight.
    """

    def __init__(self, alphabet, images, cutoff):
        self.alphabet = alphabet
        self.cutoff = cutoff
        self.images = {}
        for l in range(len(alphabet)):
            img = images.get(l, images.get(alphabet.names[l]))
            if img is None:
                img = TensorSeries.monomial(alphabet, (l,), cutoff)
            self.images[l] = img.truncate(min(cutoff, img.cutoff))

    def __call__(self, a):
        N = min(a.cutoff, self.cutoff)
        cache = {(): TensorSeries.one(self.alphabet, N)}
        imgs = {l: img.truncate(min(N, img.cutoff)) for l, img in self.images.items()}

        def image(word):
            if word in cache:
                return cache[word]
            # split off the last letter so prefixes are shared
            res = image(word[:-1]) * imgs[word[-1]]
            cache[word] = res
            return res

        out = TensorSeries.zero(self.alphabet, N)
        acc = {}
        for w, c in a.terms.items():
            for k, v in image(w).terms.items():
                acc[k] = acc.get(k, 0) + c * v
        return TensorSeries._raw(
            self.alphabet, N, {k: v for k, v in acc.items() if v}
        ) + out

    def inverse(self):
        """Inverse of a substitution whose images are ``letter + higher weight``."""
        A = self.alphabet
        N = self.cutoff
        letters = {l: TensorSeries.monomial(A, (l,), N) for l in range(len(A))}
        ys = dict(letters)
        for _ in range(N + 1):
            new = {}
            for l in ys:
                new[l] = ys[l] - (self(ys[l]) - letters[l])
            if all(new[l] == ys[l] for l in ys):
                break
            ys = new
        return Substitution(A, ys, N)


def apply_derivation(images, a, cutoff=None):
    """Leibniz extension of ``letter -> image`` to ``a``; missing letters map to 0.

    The default output cutoff is the largest weight through which the result
    is determined by the truncated inputs.
    """
    A = a.alphabet
    imgs = {(A.index(k) if isinstance(k, str) else k): v for k, v in images.items()}
    if cutoff is None:
        cutoff = a.cutoff
        for l, img in imgs.items():
            low = img.lowest_weight()
            shift = (low if low is not None else img.cutoff + 1) - A.weights[l]
            cutoff = min(cutoff, a.cutoff + shift, img.cutoff)
    out = {}
    kw = A.weight
    for w, c in a.terms.items():
        for k, l in enumerate(w):
            img = imgs.get(l)
            if img is None:
                continue
            pre, post = w[:k], w[k + 1:]
            room = cutoff - kw(pre) - kw(post)
            for v, d in img.terms.items():
                if kw(v) <= room:
                    key = pre + v + post
                    out[key] = out.get(key, 0) + c * d
    return TensorSeries._raw(A, cutoff, {k: v for k, v in out.items() if v})
