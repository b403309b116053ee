"""Cyclic words, the trace quotient and power traces of Lie elements."""

from functools import lru_cache

from . import linalg
from .rational import Q, factorial, fmt_q, parse_q
from .series import AlphabetMismatch, TensorSeries, _Sparse, exp


@lru_cache(maxsize=200000)
def canonical_rotation(word):
    """Lexicographically least rotation (Booth's algorithm)."""
    n = len(word)
    if n < 2:
        return tuple(word)
    s = word + word
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        i = f[j - k - 1]
        while i != -1 and s[j] != s[k + i + 1]:
            if s[j] < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if i == -1 and s[j] != s[k + i + 1]:
            if s[j] < s[k + i + 1]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return tuple(s[k:k + n])


def period(word):
    """Smallest ``p`` with ``word`` invariant under rotation by ``p``."""
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[p:] + word[:p] == word:
            return p
    return max(n, 1)


class CyclicSeries(_Sparse):
    """Element of ``|T| = T/[T,T]`` keyed by canonical rotations."""

    __slots__ = ()

    def __init__(self, alphabet, cutoff, terms=None):
        canon = {}
        for w, c in (terms or {}).items():
            k = canonical_rotation(tuple(w))
            canon[k] = canon.get(k, 0) + c
        super().__init__(alphabet, cutoff, canon)

    @classmethod
    def zero(cls, alphabet, cutoff):
        return cls._raw(alphabet, cutoff, {})

    @classmethod
    def from_dict(cls, alphabet, cutoff, data):
        return trace(TensorSeries.from_dict(alphabet, cutoff, data))

    def scalar(self, c):
        return CyclicSeries(self.alphabet, self.cutoff, {(): c})

    def __repr__(self):
        f = self.alphabet.fmt_word
        parts = [f"{fmt_q(c)}*|{f(w)}|" for w, c in self.sorted_items()[:12]]
        more = " + ..." if len(self.terms) > 12 else ""
        return f"CyclicSeries({' + '.join(parts) or '0'}{more}; N={self.cutoff})"

    def to_json(self):
        names = self.alphabet.names
        return {
            "cyclic": True,
            "cutoff": self.cutoff,
            "terms": [
                {"word": [names[l] for l in w], "coeff": fmt_q(c)}
                for w, c in self.sorted_items()
            ],
        }

    @classmethod
    def from_json(cls, data, alphabet):
        if not data.get("cyclic"):
            raise ValueError("not a cyclic series")
        terms = {}
        for t in data["terms"]:
            w = canonical_rotation(tuple(alphabet.index(n) for n in t["word"]))
            terms[w] = terms.get(w, 0) + parse_q(t["coeff"])
        return cls(alphabet, int(data["cutoff"]), terms)


def trace(a):
    """The projection ``a -> |a|``."""
    out = {}
    for w, c in a.terms.items():
        k = canonical_rotation(w)
        out[k] = out.get(k, 0) + c
    return CyclicSeries._raw(a.alphabet, a.cutoff, {k: v for k, v in out.items() if v})


def embed(c):
    """``|w| -> sum of all len(w) rotations of w``, counted with multiplicity."""
    out = {}
    for w, coeff in c.terms.items():
        n = len(w)
        if n == 0:
            out[()] = out.get((), 0) + coeff
            continue
        for k in range(n):
            r = w[k:] + w[:k]
            out[r] = out.get(r, 0) + coeff
    return TensorSeries._raw(c.alphabet, c.cutoff, {k: v for k, v in out.items() if v})


def right_partial(g, a):
    """``∂_g a``: the part of ``a`` ending in ``g``, with that letter removed.

    ``g`` is a letter index or name. The cutoff drops by ``wt(g)``.
    """
    A = a.alphabet
    if isinstance(g, str):
        g = A.index(g)
    if a.constant_term():
        raise ValueError("right_partial needs a series without constant term")
    cut = a.cutoff - A.weights[g]
    return TensorSeries._raw(A, max(cut, 0), {w[:-1]: c for w, c in a.terms.items() if w[-1] == g})


def power_trace(u, m):
    """``|u^m|`` at ``u``'s cutoff."""
    return trace(u ** m)


def exp_trace(u):
    return trace(exp(u))


def membership_in_power_span(u, targets, m):
    """Whether ``|u^m|`` lies in the span of ``|v^m|`` for ``v`` in ``targets``.

    Returns ``(True, coefficients)`` or ``(False, None)``. Everything is
    compared at the smallest cutoff involved.
    """
    for v in targets:
        if v.alphabet != u.alphabet:
            raise AlphabetMismatch("targets live over a different alphabet")
    N = min([u.cutoff] + [v.cutoff for v in targets])
    lhs = power_trace(u.truncate(N), m)
    cols = [(j, power_trace(v.truncate(N), m).terms) for j, v in enumerate(targets)]
    try:
        sol = linalg.solve(cols, lhs.terms)
    except linalg.NoSolution:
        return False, None
    return True, [sol.get(j, Q(0)) for j in range(len(targets))]


def exp_trace_from_powers(u):
    """``sum_m |u^m|/m!``, equal to ``|exp u|``."""
    N = u.cutoff
    total = CyclicSeries.zero(u.alphabet, N)
    p = TensorSeries.one(u.alphabet, N)
    for m in range(0, N // min(u.alphabet.weights) + 1):
        if m:
            p = p * u
        if not p:
            break
        total = total + trace(p).scale(Q(1, factorial(m)))
    return total
