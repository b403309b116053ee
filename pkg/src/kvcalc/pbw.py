"""PBW decomposition of the tensor algebra by Eulerian idempotents.

For a word ``w`` of length ``n`` the convolution power ``id^{*t}`` sends ``w``
to ``sum_tau binom(t + n - 1 - des(tau), n) * w∘tau``, the sum running over
permutations ``tau`` of the positions and ``des`` counting descents. The
coefficient of ``t^m`` in that polynomial is the Eulerian idempotent ``e_m``,
which projects onto the symmetrised image of ``Sym^m L``. ``e_1`` is the
convolution logarithm of the identity.
"""

from functools import lru_cache
from itertools import permutations

from .rational import Q, factorial
from .series import TensorSeries


@lru_cache(maxsize=None)
def _binomial_poly(n, d):
    """Coefficients in ``t`` of ``binom(t + n - 1 - d, n)``."""
    # prod_{i=0}^{n-1} (t + n - 1 - d - i) / n!
    coeffs = [Q(1)]
    for i in range(n):
        c = n - 1 - d - i
        new = [Q(0)] * (len(coeffs) + 1)
        for k, a in enumerate(coeffs):
            new[k] += a * c
            new[k + 1] += a
        coeffs = new
    f = factorial(n)
    return tuple(a / f for a in coeffs)


@lru_cache(maxsize=None)
def _perm_table(n):
    table = []
    for tau in permutations(range(n)):
        des = sum(1 for i in range(n - 1) if tau[i] > tau[i + 1])
        table.append((tau, des))
    return tuple(table)


@lru_cache(maxsize=100000)
def _eulerian_word(word):
    """All Eulerian components of one word: tuple indexed by m of dicts."""
    n = len(word)
    if n == 0:
        return ({(): Q(1)},)
    comps = [dict() for _ in range(n + 1)]
    for tau, des in _perm_table(n):
        coeffs = _binomial_poly(n, des)
        key = tuple(word[i] for i in tau)
        for m in range(1, n + 1):
            c = coeffs[m]
            if c:
                d = comps[m]
                d[key] = d.get(key, 0) + c
    return tuple({k: v for k, v in d.items() if v} for d in comps)


def eulerian_projection(a, m):
    """Component of ``a`` in the ``m``-th PBW summand (``m=1`` gives ϖ₁)."""
    out = {}
    for w, c in a.terms.items():
        comps = _eulerian_word(w)
        if m < len(comps):
            for k, v in comps[m].items():
                out[k] = out.get(k, 0) + c * v
    return TensorSeries._raw(a.alphabet, a.cutoff, {k: v for k, v in out.items() if v})


def lie_projection(a):
    return eulerian_projection(a, 1)


def symmetrize(factors):
    """``(1/m!) sum_sigma f_sigma(1) ... f_sigma(m)``; the PBW map on Sym^m."""
    if not factors:
        raise ValueError("symmetrize needs at least one factor")
    m = len(factors)
    total = None
    for sigma in permutations(range(m)):
        prod = factors[sigma[0]]
        for i in sigma[1:]:
            prod = prod * factors[i]
        total = prod if total is None else total + prod
    return total.scale(Q(1, factorial(m)))
