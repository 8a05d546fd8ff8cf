"""Exact sparse linear algebra over Q: incremental reduced echelon forms."""

from __future__ import annotations

from .core import Q, vadd, vscale


class Echelon:
    """Reduced row echelon form built one vector at a time.

    Rows are normalized to have coefficient 1 at their pivot and 0 at every
    other pivot. The pivot of a new row is its earliest key under `order`.
    With track=True every row remembers which combination of the inserted
    vectors (by insertion index) produced it.
    """

    def __init__(self, order=None, track=False):
        self.order = order
        self.track = track
        self.rows = {}      # pivot -> row vector
        self.combos = {}    # pivot -> {input index: coef}
        self.count = 0

    def __len__(self):
        return len(self.rows)

    def _pivot(self, vec):
        if self.order is None:
            return min(vec)
        return min(vec, key=self.order)

    def reduce(self, vec, combo=None):
        """Residual of vec modulo the span (and the combination it used)."""
        r = dict(vec)
        for p in [p for p in r if p in self.rows]:
            c = r.get(p)
            if not c:
                continue
            vadd(r, self.rows[p], -c)
            if combo is not None:
                vadd(combo, self.combos[p], -c)
        return r

    def add(self, vec):
        """Insert vec; returns the new pivot, or None if vec was dependent."""
        idx = self.count
        self.count += 1
        combo = {idx: 1} if self.track else None
        r = self.reduce(vec, combo)
        if not r:
            self.last_relation = combo
            return None
        p = self._pivot(r)
        c = r[p]
        if c != 1:
            r = vscale(r, Q(1) / c)
            if combo is not None:
                combo = vscale(combo, Q(1) / c)
        for q, row in self.rows.items():
            cq = row.get(p)
            if cq:
                vadd(row, r, -cq)
                if self.track:
                    vadd(self.combos[q], combo, -cq)
        self.rows[p] = r
        if self.track:
            self.combos[p] = combo
        return p

    def contains(self, vec):
        return not self.reduce(vec)

    def coords(self, vec):
        """Coefficients of vec on the rows (keyed by pivot); vec must lie in the span."""
        r = self.reduce(vec)
        if r:
            raise ValueError("vector is not in the span")
        return {p: vec[p] for p in self.rows if vec.get(p)}

    def express(self, vec):
        """vec as a combination of the inserted vectors (by index)."""
        if not self.track:
            raise ValueError("echelon built without tracking")
        out = {}
        for p, c in self.coords(vec).items():
            vadd(out, self.combos[p], c)
        return out


def rank(vectors, order=None):
    e = Echelon(order)
    for v in vectors:
        e.add(v)
    return len(e)


def kernel_and_image(basis, apply, order=None):
    """For a linear map given on an ordered list of basis keys.

    Returns (pivot_keys, kernel_vectors): pivot_keys are the basis keys whose
    images are independent of the images of earlier keys (so their images
    span the image), and each other key e yields the kernel vector
    e - Σ c_b b over pivot keys b.
    """
    ech = Echelon(order, track=True)
    pivots = []
    kernel = []
    for k in basis:
        p = ech.add(apply(k))
        if p is not None:
            pivots.append(k)
        else:
            # the recorded relation is a combination of inputs mapping to 0
            kernel.append({basis[i]: c for i, c in ech.last_relation.items() if c})
    return pivots, kernel
