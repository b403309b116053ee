"""Free Lie algebra layer: brackets, BCH, Lyndon bases and ad-equation solvers."""

from functools import lru_cache

from . import linalg
from .linalg import NoSolution
from .pbw import lie_projection
from .rational import Q, factorial
from .series import PairSeries, TensorSeries, coproduct, exp, inverse_grouplike, is_grouplike, is_primitive, log


class HypothesisFails(ValueError):
    """A trace hypothesis required by a solver does not hold."""


class PreconditionError(ValueError):
    pass


class LieElement(TensorSeries):
    """A tensor series certified primitive (checked on construction)."""

    __slots__ = ()

    def __init__(self, series, check=True):
        if check and (series.constant_term() or not is_primitive(series)):
            raise ValueError("series is not a Lie element")
        super().__init__(series.alphabet, series.cutoff, series.terms)


class GroupLike(TensorSeries):
    """A tensor series certified group-like (checked on construction)."""

    __slots__ = ()

    def __init__(self, series, check=True):
        if check and not is_grouplike(series):
            raise ValueError("series is not group-like")
        super().__init__(series.alphabet, series.cutoff, series.terms)

    def inverse(self):
        return GroupLike(inverse_grouplike(self), check=False)

    def log(self):
        return LieElement(log(self), check=False)


def bracket(a, b):
    return a * b - b * a


def bch(u, v):
    """``log(exp(u) exp(v))``."""
    return LieElement(log(exp(u) * exp(v)), check=False)


def conjugate(g, a):
    """``g a g^{-1}`` for a series ``g`` with constant term 1."""
    return g * a * inverse_grouplike(g)


def exp_ad(u, a):
    """``exp(ad u)(a) = e^u a e^{-u}``, summed as a bracket series."""
    out = a
    term = a
    N = min(a.cutoff, u.cutoff)
    for k in range(1, N + 1):
        term = bracket(u, term).scale(Q(1, k))
        if not term:
            break
        out = out + term
    return out


# Lyndon words -----------------------------------------------------------------


@lru_cache(maxsize=None)
def _lyndon_by_length(n_letters, max_len):
    """Duval's algorithm: Lyndon words of length <= max_len, generated in lex order."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == n_letters - 1:
            w.pop()
    return tuple(out)


def lyndon_words(alphabet, k):
    """Lyndon words of weight exactly ``k``, lexicographically ordered."""
    return _lyndon_of_weight(alphabet.weights, k)


@lru_cache(maxsize=None)
def _lyndon_of_weight(weights, k):
    ws = weights
    return tuple(
        sorted(w for w in _lyndon_by_length(len(ws), k) if sum(ws[l] for l in w) == k)
    )


def _is_lyndon(w):
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def standard_factorization(w):
    """``w = u v`` with ``v`` the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if _is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError("single letters have no standard factorization")


@lru_cache(maxsize=None)
def _lyndon_poly_terms(weights, w):
    if len(w) == 1:
        return {w: Q(1)}
    u, v = standard_factorization(w)
    pu = _lyndon_poly_terms(weights, u)
    pv = _lyndon_poly_terms(weights, v)
    out = {}
    for a, ca in pu.items():
        for b, cb in pv.items():
            out[a + b] = out.get(a + b, 0) + ca * cb
            out[b + a] = out.get(b + a, 0) - ca * cb
    return {k: c for k, c in out.items() if c}


def lyndon_bracket(alphabet, w, cutoff=None):
    """The bracketed polynomial of a Lyndon word."""
    cutoff = alphabet.weight(w) if cutoff is None else cutoff
    return TensorSeries(alphabet, cutoff, _lyndon_poly_terms(alphabet.weights, tuple(w)))


def lie_basis(alphabet, k, cutoff=None):
    return [lyndon_bracket(alphabet, w, cutoff) for w in lyndon_words(alphabet, k)]


def lie_dimension(alphabet, k):
    return len(lyndon_words(alphabet, k))


# ad-equations -------------------------------------------------------------------


def _columns(z, unknowns):
    return [(w, bracket(z, TensorSeries._raw(z.alphabet, z.cutoff, {w: Q(1)})).terms) for w in unknowns]


@lru_cache(maxsize=256)
def _ad_echelon(alphabet, z_items, k):
    """Echelon form of ``ad z`` on weight-``k`` words; reused across solves."""
    wz = alphabet.weight(z_items[0][0])
    z = TensorSeries(alphabet, k + wz, dict(z_items))
    return linalg.echelon(_columns(z, alphabet.words(k)))[0]


def solve_ad(z, b, constrain_to_lie=False):
    """Some ``u`` with ``[z, u] = b`` exactly through ``b``'s cutoff.

    Works weight by weight from the lowest-weight part of ``z``; the
    solution has zero coefficients on non-pivot words. With
    ``constrain_to_lie`` the ``K[[z]]`` part is stripped by the ``ϖ₁``
    projection, which commutes with ``ad z`` for Lie ``z``.
    """
    A = b.alphabet
    N = b.cutoff
    if not z:
        if b:
            raise NoSolution("[0, u] = b has no solution for b != 0")
        return TensorSeries.zero(A, N)
    wz = z.lowest_weight()
    z_low = z.weight_component(wz)
    z_high = z - z_low
    cut = max(N - wz, 0)
    u = TensorSeries.zero(A, cut)
    big = max(N, z.cutoff)
    zl = z_low.with_cutoff(big)
    for k in range(0, N - wz + 1):
        target = b.weight_component(k + wz) if k + wz <= N else None
        if target is None:
            continue
        rest = bracket(z_high.with_cutoff(big), u.with_cutoff(big))
        rhs = (target.with_cutoff(big) - rest.weight_component(k + wz)) if rest else target.with_cutoff(big)
        if not rhs:
            continue
        ech = _ad_echelon(A, tuple(sorted(z_low.terms.items())), k)
        sol = ech.express(rhs.terms)
        if sol is None:
            raise NoSolution(f"[z, u] = b has no solution at weight {k + wz}")
        u = u + TensorSeries(A, cut, sol)
    # the low-weight part of b that ad z cannot reach
    for k in range(0, min(wz, N + 1)):
        if b.weight_component(k):
            raise NoSolution(f"[z, u] = b has no solution at weight {k}")
    if constrain_to_lie:
        u_lie = lie_projection(u)
        big = max(N, z.cutoff)
        if bracket(z.with_cutoff(big), u_lie.with_cutoff(big)).truncate(N) != b:
            raise NoSolution("no Lie solution of [z, u] = b")
        return u_lie
    return u


def _admissible_shape(z):
    """z in V (one letter-weight, length 1) or in ∧²V (length 2, antisymmetric)."""
    if not z or z.constant_term():
        return None
    lengths = {len(w) for w in z.terms}
    if lengths == {1} and z.is_homogeneous():
        return "linear"
    if lengths == {2} and z.is_homogeneous():
        swapped = {(w[1], w[0]): c for w, c in z.terms.items()}
        if all(swapped.get(w, 0) == -c for w, c in z.terms.items()):
            return "wedge"
    return None


def _pair_words(alphabet, m):
    out = []
    for k in range(m + 1):
        for w1 in alphabet.words(k):
            for w2 in alphabet.words(m - k):
                out.append((w1, w2))
    return out


def centralizer_of_delta(z, m):
    """Basis of ``{u in (T⊗T)_m : [Δz, u] = 0}``."""
    if _admissible_shape(z) is None:
        raise PreconditionError("z must be a nonzero element of V or of ∧²V")
    A = z.alphabet
    wz = z.lowest_weight()
    big = m + wz
    dz = coproduct(z.with_cutoff(big))
    cols = []
    for key in _pair_words(A, m):
        e = PairSeries._raw(A, big, {key: Q(1)})
        cols.append((key, (dz * e - e * dz).terms))
    return [PairSeries(A, m, vec) for vec in linalg.kernel(cols)]


def delta_centralizer_span(z, m):
    """``z^i ⊗ z^j`` with total weight ``m`` (the predicted centralizer)."""
    wz = z.lowest_weight()
    if m % wz:
        return []
    p = m // wz
    zz = z.with_cutoff(m)
    return [PairSeries.tensor(zz ** i, zz ** (p - i)) for i in range(p + 1)]


def ad_normalizer_structure(z, m):
    """Basis of ``{a in T_m : [z, a] in L}``."""
    if _admissible_shape(z) is None:
        raise PreconditionError("z must be a nonzero element of V or of ∧²V")
    A = z.alphabet
    wz = z.lowest_weight()
    big = m + wz
    zz = z.with_cutoff(big)
    cols = []
    for w in A.words(m):
        br = bracket(zz, TensorSeries._raw(A, big, {w: Q(1)}))
        cols.append((w, (br - lie_projection(br)).terms))
    return [TensorSeries(A, m, vec) for vec in linalg.kernel(cols)]


def normalizer_expected_dimension(z, m):
    """``dim (L + K[[z]])_m``; ``z^p`` adds a dimension unless it is already Lie (p=1)."""
    wz = z.lowest_weight()
    extra = 1 if m % wz == 0 and m // wz != 1 else 0
    return lie_dimension(z.alphabet, m) + extra


def solve_x_divisibility(x, a, l_max=None):
    """``b`` with ``a = [x, b]`` given ``|a x^l| = 0`` for ``1 <= l <= l_max``.

    The trace hypothesis is checked within ``a``'s cutoff only.
    """
    from .cyclic import trace

    if _admissible_shape(x) != "linear":
        raise PreconditionError("x must be a nonzero linear element")
    N = a.cutoff
    wx = x.lowest_weight()
    if l_max is None:
        l_max = max(N // wx, 1)
    xx = x.with_cutoff(N)
    power = TensorSeries.one(a.alphabet, N)
    for l in range(1, l_max + 1):
        power = power * xx
        if not power:
            break
        tr = trace(a * power)
        if tr:
            raise HypothesisFails(f"|a x^{l}| != 0 (weight {tr.lowest_weight()})")
    return solve_ad(x, a)


def grouplike_from_lie(v):
    return GroupLike(exp(v), check=False)


__all__ = [
    "GroupLike",
    "HypothesisFails",
    "LieElement",
    "NoSolution",
    "PreconditionError",
    "ad_normalizer_structure",
    "bch",
    "bracket",
    "centralizer_of_delta",
    "conjugate",
    "delta_centralizer_span",
    "exp_ad",
    "factorial",
    "lie_basis",
    "lie_dimension",
    "lyndon_bracket",
    "lyndon_words",
    "normalizer_expected_dimension",
    "solve_ad",
    "solve_x_divisibility",
]
