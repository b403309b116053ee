"""Sparse exact linear algebra over Q.

Vectors are plain dicts ``row_key -> mpq`` with no stored zeros. Columns are
processed in the order given; a column becomes a pivot when it is independent
of the columns before it, so solutions returned by :func:`solve` are supported
on the earliest possible columns and vanish on every non-pivot column.
"""

from .rational import Q, as_q


class NoSolution(ValueError):
    pass


def _axpy(y, a, x):
    """y += a*x in place."""
    for k, v in x.items():
        nv = y.get(k, 0) + a * v
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)


class Echelon:
    """Incrementally built echelon basis of a span of column vectors.

    Each pivot vector is reduced against the earlier ones, so reducing a
    vector by the pivots in insertion order leaves a residual that is zero on
    every pivot row. That residual is a normal form modulo the span.
    """

    def __init__(self, track=True):
        self.track = track
        self.rows = []  # pivot row keys
        self.vecs = []  # pivot vectors, normalised to 1 on their pivot row
        self.combos = []  # pivot vector as combination of the input columns
        self.pivot_keys = []  # column keys that became pivots
        self._row_index = {}

    def __len__(self):
        return len(self.vecs)

    def reduce(self, vec, combo=None):
        vec = dict(vec)
        combo = dict(combo) if combo is not None else ({} if self.track else None)
        for r, p, c in zip(self.rows, self.vecs, self.combos):
            a = vec.get(r)
            if a:
                _axpy(vec, -a, p)
                if combo is not None:
                    _axpy(combo, -a, c)
        return vec, combo

    def residual(self, vec):
        return self.reduce(vec, None if not self.track else {})[0]

    def add(self, key, vec):
        """Add a column; return the (zero) residual combo if it is dependent,
        or None if it became a pivot."""
        combo = {key: Q(1)} if self.track else None
        res, combo = self.reduce(vec, combo)
        if not res:
            return combo if combo is not None else {}
        r = min(res)
        inv = 1 / res[r]
        res = {k: v * inv for k, v in res.items()}
        if combo is not None:
            combo = {k: v * inv for k, v in combo.items()}
        self.rows.append(r)
        self.vecs.append(res)
        self.combos.append(combo if combo is not None else {})
        self.pivot_keys.append(key)
        return None

    def express(self, vec):
        """Coefficients (on input column keys) of ``vec`` in the span, or None."""
        res, combo = self.reduce(vec, {})
        if res:
            return None
        return {k: -v for k, v in combo.items() if v}


def _prepare(columns):
    return [(k, {r: as_q(v) for r, v in col.items() if v}) for k, col in columns]


def echelon(columns, track=True):
    ech = Echelon(track=track)
    kernel = []
    for key, col in _prepare(columns):
        dep = ech.add(key, col)
        if dep is not None:
            kernel.append(dep)
    return ech, kernel


def rank(vectors):
    ech = Echelon(track=False)
    for i, v in enumerate(vectors):
        ech.add(i, {r: as_q(c) for r, c in v.items() if c})
    return len(ech)


def kernel(columns):
    """Basis of {c : sum_k c_k * col_k = 0}, one vector per non-pivot column."""
    return echelon(columns)[1]


def solve(columns, rhs):
    """Some ``c`` with ``sum_k c_k col_k == rhs`` (zero on non-pivot columns).

    Raises :class:`NoSolution` when ``rhs`` is not in the column span.
    """
    ech, _ = echelon(columns)
    sol = ech.express({r: as_q(v) for r, v in rhs.items() if v})
    if sol is None:
        raise NoSolution("right-hand side is not in the span of the columns")
    return sol


def in_span(vectors, v):
    ech = Echelon(track=False)
    for i, u in enumerate(vectors):
        ech.add(i, u)
    return not ech.residual({r: as_q(c) for r, c in v.items() if c})
