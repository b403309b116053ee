"""Symplectic contractions on tensor powers of V and the two conjugacy normalizers.

``V`` is spanned by ``x1, y1, ..., xg, yg`` (all of weight 1) with pairing
``C(x_i, y_i) = 1 = -C(y_i, x_i)``. ``Q = Ker C`` in ``V⊗V`` and ``π`` is the
projection onto ``Q`` along ``ω₀ = sum_i [x_i, y_i]``.
"""

from dataclasses import dataclass, field

from . import linalg
from .cyclic import embed, trace
from .lie import HypothesisFails, GroupLike, NoSolution, bch, bracket, exp_ad, solve_ad
from .pbw import lie_projection
from .rational import Q
from .series import Alphabet, Substitution, TensorSeries, exp


class TracesDiffer(ValueError):
    """``|exp a|`` and ``|exp z|`` differ, so ``a`` cannot be conjugate to ``z``."""


class SolveFailure(RuntimeError):
    """A per-weight solve failed although its hypothesis held."""


@dataclass(frozen=True)
class SymplecticSpace:
    g: int
    alphabet: Alphabet = field(init=False)
    pairing: dict = field(init=False, repr=False)

    def __post_init__(self):
        if self.g < 1:
            raise ValueError("genus must be at least 1")
        A = Alphabet.surface(self.g, 0)
        pairing = {}
        for i in range(self.g):
            pairing[(2 * i, 2 * i + 1)] = Q(1)
            pairing[(2 * i + 1, 2 * i)] = Q(-1)
        object.__setattr__(self, "alphabet", A)
        object.__setattr__(self, "pairing", pairing)

    @property
    def dim(self):
        return 2 * self.g

    def omega0(self, cutoff=2):
        terms = {}
        for (a, b), c in self.pairing.items():
            terms[(a, b)] = c
        return TensorSeries(self.alphabet, cutoff, terms)

    def vector(self, coeffs, cutoff=1):
        """Linear element from ``{name_or_index: coeff}``."""
        A = self.alphabet
        terms = {}
        for k, c in coeffs.items():
            terms[(A.index(k) if isinstance(k, str) else k,)] = c
        return TensorSeries(A, cutoff, terms)

    def C(self, a, b):
        """Pairing on letters."""
        return self.pairing.get((a, b), Q(0))

    def pair(self, u, v):
        """Bilinear extension of ``C`` to linear elements."""
        total = Q(0)
        for (a,), ca in u.terms.items():
            for (b,), cb in v.terms.items():
                c = self.pairing.get((a, b))
                if c:
                    total += c * ca * cb
        return total

    def contract(self, a, pattern):
        """Apply a tensor product of ``"1"``, ``"C"`` and ``"pi"`` factors.

        ``pattern`` is read left to right; ``"1"`` consumes one tensor factor,
        ``"C"`` and ``"pi"`` consume two.
        """
        arity = sum(1 if p == "1" else 2 for p in pattern)
        for p in pattern:
            if p not in ("1", "C", "pi"):
                raise ValueError(f"unknown contraction factor {p!r}")
        two_g = Q(2 * self.g)
        om = [(w, c) for w, c in self.pairing.items()]
        out = {}
        for w, c in a.terms.items():
            if len(w) != arity:
                raise ValueError(f"pattern arity {arity} does not match a word of length {len(w)}")
            partial = {(): c}
            pos = 0
            for p in pattern:
                new = {}
                if p == "1":
                    l = w[pos]
                    for k, v in partial.items():
                        new[k + (l,)] = v
                    pos += 1
                elif p == "C":
                    s = self.pairing.get((w[pos], w[pos + 1]))
                    if s:
                        new = {k: v * s for k, v in partial.items()}
                    pos += 2
                else:
                    pair = (w[pos], w[pos + 1])
                    s = self.pairing.get(pair, 0)
                    for k, v in partial.items():
                        new[k + pair] = new.get(k + pair, 0) + v
                        if s:
                            for (e, f), co in om:
                                key = k + (e, f)
                                new[key] = new.get(key, 0) - v * s * co / two_g
                    pos += 2
                partial = {k: v for k, v in new.items() if v}
                if not partial:
                    break
            for k, v in partial.items():
                out[k] = out.get(k, 0) + v
        return TensorSeries._raw(a.alphabet, a.cutoff, {k: v for k, v in out.items() if v})

    def pi(self, a):
        return self.contract(a, ["pi"])

    def cyclic_sum(self, a):
        """``a`` viewed in ``|T|`` and embedded back as a rotation-invariant tensor."""
        return embed(trace(a))

    def omega_power(self, l):
        return self.omega0(2 * l) ** l

    def cont(self, vectors):
        """``C(u_1,u_2) C(u_3,u_4) ...`` for an even number of vectors."""
        total = Q(1)
        for i in range(0, len(vectors), 2):
            total *= self.pair(vectors[i], vectors[i + 1])
        return total


# closed forms --------------------------------------------------------------------


def trace_contraction_m0(g, l):
    """``C^{⊗l} |ω₀^l|`` computed by contraction; returns ``(value, closed_form)``."""
    S = SymplecticSpace(g)
    emb = S.cyclic_sum(S.omega_power(l))
    val = S.contract(emb, ["C"] * l).constant_term()
    closed = Q(l) * (Q(2 * g) ** l + (-1) ** l * 2 * g)
    return val, closed


def m1_coefficient(g, l):
    """Closed form of the scalar with ``(1⊗C^{⊗l})|a ω₀^l| = coeff · a`` for ``a ∈ V``."""
    return Q(2 * g) ** l + 2 * (-1) ** l * sum(Q(-2 * g) ** j for j in range(l))


def m1_contraction(S, a, l):
    emb = S.cyclic_sum(a.with_cutoff(2 * l + 1) * S.omega_power(l).with_cutoff(2 * l + 1))
    return S.contract(emb, ["1"] + ["C"] * l)


def omega_contraction_identity(S, x, l):
    """Both sides of ``(C^{⊗l}⊗1)(x ω₀^l) = (1⊗C^{⊗l})(ω₀^l x) = (-1)^l x``."""
    N = 2 * l + 1
    xx = x.with_cutoff(N)
    w = S.omega_power(l).with_cutoff(N)
    left = S.contract(xx * w, ["C"] * l + ["1"])
    right = S.contract(w * xx, ["1"] + ["C"] * l)
    return left, right, x.scale((-1) ** l)


def _words_product(S, factors):
    N = sum(len(next(iter(f.terms))) if f.terms else 0 for f in factors) or 1
    out = TensorSeries.one(S.alphabet, N)
    for f in factors:
        out = out * f.with_cutoff(N)
    return out


def phi_sum(S, u):
    """The sum over odd ``k`` shared by both lemma closed forms (lists are 0-based)."""
    m = len(u)
    total = None
    for k in range(1, m, 2):
        h = (k - 1) // 2
        sign = (-1) ** h
        w = [S.omega0()] * h
        c1 = S.cont(u[m - k: m - 1])
        c2 = S.cont(u[1:k])
        t = None
        if c1:
            t = _words_product(S, [u[m - 1]] + w + list(u[: m - k])).scale(sign * c1)
        if c2:
            t2 = _words_product(S, list(u[k:m]) + w + [u[0]]).scale(sign * c2)
            t = t2 if t is None else t + t2
        if t is not None:
            total = t if total is None else total + t
    return total if total is not None else TensorSeries.zero(S.alphabet, m)


def phi1(S, u):
    m = len(u)
    h = m // 2 - 1
    c = S.cont(u[1: m - 1])
    if not c:
        return TensorSeries.zero(S.alphabet, m)
    return _words_product(S, [u[m - 1]] + [S.omega0()] * h + [u[0]]).scale((-1) ** h * c)


def _qhq_projection(S, a, m):
    return S.contract(a, ["pi"] + ["1"] * (m - 4) + ["pi"])


def lemma_contraction_lhs(S, u, l):
    """``(π⊗1^{⊗m-4}⊗π)(1^{⊗m}⊗C^{⊗l}) |u_1...u_m ω₀^l|``."""
    m = len(u)
    prod = _words_product(S, list(u) + [S.omega0()] * l)
    emb = S.cyclic_sum(prod)
    return _qhq_projection(S, S.contract(emb, ["1"] * m + ["C"] * l), m)


def verify_lemma_51(S, u, l):
    m = len(u)
    if m < 5 or m % 2 == 0 or 2 * l < m + 1:
        raise ValueError("needs odd m >= 5 and l >= (m+1)/2")
    lhs = lemma_contraction_lhs(S, u, l)
    base = _words_product(S, list(u)).scale(Q(2 * S.g) ** l)
    rhs = _qhq_projection(S, base + phi_sum(S, u).scale((-1) ** l), m)
    return lhs == rhs


def verify_lemma_52(S, u, l):
    m = len(u)
    if m < 4 or m % 2 or 2 * l < m:
        raise ValueError("needs even m >= 4 and l >= m/2")
    lhs = lemma_contraction_lhs(S, u, l)
    base = _words_product(S, list(u)).scale(Q(2 * S.g) ** l)
    rhs = base + phi1(S, u).scale(Q(2 * l - m, 2) * (-1) ** l) + phi_sum(S, u).scale((-1) ** l)
    return lhs == _qhq_projection(S, rhs, m)


def q_block_basis(S, m):
    """Basis of ``Q⊗V^{⊗m-4}⊗Q`` as projected images of all words."""
    ech = linalg.Echelon(track=False)
    out = []
    for w in S.alphabet.words(m):
        v = _qhq_projection(S, TensorSeries._raw(S.alphabet, m, {w: Q(1)}), m)
        if ech.add(w, v.terms) is None:
            out.append(v)
    return out


def qhq_injectivity(S, m, ls):
    """Whether ``(a, b) -> [(π⊗1⊗π)(1^{⊗m}⊗C^{⊗l})|a ω₀^l + b ω₀^{l+1}|]_{l in ls}``
    forces ``a = 0`` for ``a ∈ Q⊗V^{⊗m-4}⊗Q``, ``b ∈ V^{⊗m-2}``."""
    qs = q_block_basis(S, m)
    bs = [TensorSeries._raw(S.alphabet, m - 2, {w: Q(1)}) for w in S.alphabet.words(m - 2)]
    cols = []
    for tag, elems, shift in (("a", qs, 0), ("b", bs, 1)):
        for i, e in enumerate(elems):
            vec = {}
            for l in ls:
                prod = _words_product(S, [e] + [S.omega0()] * (l + shift))
                img = S.contract(S.cyclic_sum(prod), ["1"] * m + ["C"] * l)
                img = _qhq_projection(S, img, m)
                for w, c in img.terms.items():
                    vec[(l, w)] = c
            cols.append(((tag, i), vec))
    for vec in linalg.kernel(cols):
        if any(k[0] == "a" for k in vec):
            return False
    return True


def verify_v3_splitting(g):
    """Dimensions of ``[ω₀,V]``, ``V⊗Q`` and their intersection inside ``V^{⊗3}``."""
    S = SymplecticSpace(g)
    A = S.alphabet
    om = S.omega0(3)
    first = [bracket(om, TensorSeries._raw(A, 3, {(l,): Q(1)})).terms for l in range(len(A))]
    second = []
    for w in A.words(3):
        second.append(S.contract(TensorSeries._raw(A, 3, {w: Q(1)}), ["1", "pi"]).terms)
    r1 = linalg.rank(first)
    r2 = linalg.rank(second)
    r12 = linalg.rank(first + second)
    inter = r1 + r2 - r12
    return {
        "dim_omega_V": r1,
        "dim_V_Q": r2,
        "dim_intersection": inter,
        "total": (2 * g) ** 3,
        "ok": inter == 0 and r12 == (2 * g) ** 3,
    }


# ω₀-divisibility -------------------------------------------------------------------


def solve_omega_bracket(S, a, l_range=range(1, 3)):
    """``b`` with ``[ω₀, b] = a`` for homogeneous ``a``, after checking ``|a ω₀^l| = 0``.

    The hypothesis is only checked for ``l`` in ``l_range``.
    """
    if not a:
        return TensorSeries.zero(a.alphabet, max(a.cutoff - 2, 0))
    if not a.is_homogeneous():
        raise ValueError("solve_omega_bracket needs a homogeneous element")
    m = a.lowest_weight()
    for l in l_range:
        N = m + 2 * l
        tr = trace(a.with_cutoff(N) * S.omega_power(l).with_cutoff(N))
        if tr:
            raise HypothesisFails(f"|a ω₀^{l}| != 0")
    try:
        b = solve_ad(S.omega0(m), a.with_cutoff(m))
    except NoSolution as exc:
        raise NoSolution(f"[ω₀, b] = a unsolvable in degree {m}") from exc
    return b.with_cutoff(max(a.cutoff - 2, 0))


# normalizers -------------------------------------------------------------------------


def _greedy_normalize(a, z, step_solver):
    """Conjugate ``a`` onto ``z`` weight by weight; returns ``v`` with
    ``e^v a e^{-v} = z`` through ``a``'s cutoff."""
    N = min(a.cutoff, z.cutoff)
    a = a.truncate(N)
    z = z.truncate(N)
    v = TensorSeries.zero(a.alphabet, N)
    for _ in range(N + 1):
        diff = a - z
        if not diff:
            break
        k = diff.lowest_weight()
        b = diff.weight_component(k).with_cutoff(k)
        try:
            u = step_solver(b)
        except (NoSolution, HypothesisFails) as exc:
            raise SolveFailure(f"no conjugating step at weight {k}: {exc}") from exc
        if not u:
            raise SolveFailure(f"discrepancy at weight {k} is not reachable")
        u = u.with_cutoff(N)
        a = exp_ad(u, a)
        v = bch(u, v)
    else:
        raise SolveFailure("normalization did not terminate")
    if a != z:
        raise SolveFailure("normalization did not converge")
    return v


def _check_traces(a, z):
    N = min(a.cutoff, z.cutoff)
    if trace(exp(a.truncate(N))) != trace(exp(z.truncate(N))):
        raise TracesDiffer("|exp a| != |exp z| within the cutoff")


def _linear_part(z):
    return {w[0]: c for w, c in z.terms.items() if len(w) == 1}


def normalize_conjugacy_linear(z, a):
    """Group-like ``g`` with ``g^{-1} a g = z`` for ``z`` with nonzero linear part."""
    A = a.alphabet
    N = min(a.cutoff, z.cutoff)
    lin = _linear_part(z)
    if not lin:
        raise ValueError("z needs a nonzero linear part")
    _check_traces(a, z)
    p = min(lin)
    wp = A.weights[p]
    z_lin = TensorSeries(A, N, {(l,): c for l, c in lin.items() if A.weights[l] == wp})
    rest = z.truncate(N) - z_lin
    if rest:
        # change of variables sending z_lin to z
        img = TensorSeries.monomial(A, (p,), N) + rest.scale(1 / lin[p])
        phi = Substitution(A, {p: img}, N)
        a_prime = phi.inverse()(a.truncate(N))
    else:
        phi = None
        a_prime = a.truncate(N)

    def step(b):
        return solve_ad(z_lin.with_cutoff(b.cutoff), b, constrain_to_lie=True)

    v = _greedy_normalize(a_prime, z_lin, step)
    g = exp(-v)
    if phi is not None:
        g = phi(g)
    return GroupLike(g, check=False)


def normalize_conjugacy_symplectic(S, a, l_range=range(1, 3), target=None):
    """Group-like ``g`` with ``g^{-1} a g = ω₀``.

    ``target`` replaces ``ω₀`` by any Lie series whose weight-2 part is ``ω₀``;
    every step still solves ``[ω₀, u] = b``.
    """
    N = a.cutoff if target is None else min(a.cutoff, target.cutoff)
    om = S.omega0(N) if target is None else target.truncate(N)
    if target is not None and om.weight_component(2) != S.omega0(2):
        raise ValueError("target must start with ω₀")
    a = a.truncate(N)
    _check_traces(a, om)

    def step(b):
        w = solve_omega_bracket(S, b, l_range)
        return lie_projection(w)

    v = _greedy_normalize(a, om, step)
    return GroupLike(exp(-v), check=False)
