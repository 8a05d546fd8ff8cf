"""Scalars, graded spaces, multilinear operations, Koszul signs, shuffles.

Vectors are plain dicts {basis key: Fraction} internally; `Element` is the
frozen public wrapper. Basis keys are usually strings but may be any
hashable, comparable value (monomials are tuples).
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from math import comb

Q = Fraction


def rat(x):
    """Parse an int, Fraction or "p/q" string into an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational")
        return Fraction(s)
    raise TypeError(f"not an exact rational: {x!r}")


def fmt_rat(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------- vectors

def vadd(acc, vec, coef=1):
    """acc += coef*vec, in place, dropping zeros."""
    if not coef:
        return acc
    for k, c in vec.items():
        v = acc.get(k, 0) + coef * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc


def vscale(vec, coef):
    if not coef:
        return {}
    return {k: coef * c for k, c in vec.items()}


def vsum(vecs):
    out = {}
    for v in vecs:
        vadd(out, v)
    return out


def vsub(a, b):
    out = dict(a)
    return vadd(out, b, -1)


class Element(Mapping):
    """Finitely supported rational combination of basis keys (immutable)."""

    __slots__ = ("_t",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for k, c in items:
                c = rat(c)
                if c:
                    t[k] = t.get(k, 0) + c
                    if not t[k]:
                        del t[k]
        self._t = t

    @classmethod
    def basis(cls, key):
        return cls({key: 1})

    def __getitem__(self, k):
        return self._t[k]

    def __iter__(self):
        return iter(self._t)

    def __len__(self):
        return len(self._t)

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return dict(self._t) == {k: v for k, v in other.items() if v}
        if other == 0:
            return not self._t
        return NotImplemented

    def __add__(self, other):
        return Element(vadd(dict(self._t), other))

    def __sub__(self, other):
        return Element(vadd(dict(self._t), other, -1))

    def __neg__(self):
        return Element(vscale(self._t, -1))

    def __mul__(self, c):
        return Element(vscale(self._t, rat(c)))

    __rmul__ = __mul__

    def is_zero(self):
        return not self._t

    def degree(self, space):
        """Common degree of the support; raises if inhomogeneous, None for 0."""
        degs = {space.degree(k) for k in self._t}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element with degrees {sorted(degs)}")
        return degs.pop() if degs else None

    def format(self, space=None):
        return format_vector(self._t, space)

    def __repr__(self):
        return f"Element({self.format()})"


def format_vector(vec, space=None):
    if not vec:
        return "0"
    if space is not None:
        keys = sorted(vec, key=space.order_key)
        name = space.name
    else:
        keys = sorted(vec, key=lambda k: (str(type(k)), k))
        name = str
    parts = []
    for k in keys:
        c = vec[k]
        sgn = "-" if c < 0 else "+"
        a = abs(c)
        body = name(k) if a == 1 else f"{fmt_rat(a)} {name(k)}"
        parts.append((sgn, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sgn, body in parts[1:]:
        s += f" {sgn} {body}"
    return s


# ---------------------------------------------------------------- spaces

class GradedSpace:
    """Graded space with a finite named basis [(name, degree), ...]."""

    finite = True

    def __init__(self, basis=(), namer=None):
        self._namer = namer
        self._deg = {}
        self.basis = []
        for name, d in basis:
            if name in self._deg:
                raise ValueError(f"duplicate basis name {name!r}")
            if not isinstance(d, int):
                raise TypeError(f"degree of {name!r} must be an integer")
            self._deg[name] = d
            self.basis.append((name, d))
        self._by_deg = {}
        for name, d in sorted(self.basis, key=lambda b: (b[1], b[0])):
            self._by_deg.setdefault(d, []).append(name)

    def degree(self, key):
        return self._deg[key]

    def __contains__(self, key):
        return key in self._deg

    def in_degree(self, d):
        return self._by_deg.get(d, [])

    def degrees(self):
        return sorted(self._by_deg)

    def names(self):
        """Basis names in the global order (degree, name)."""
        return [n for d in self.degrees() for n in self._by_deg[d]]

    def name(self, key):
        return self._namer(key) if self._namer else str(key)

    def order_key(self, key):
        return (self._deg[key], key)

    def dim(self):
        return len(self.basis)

    def min_degree(self):
        return min(self._by_deg) if self._by_deg else 0

    def max_degree(self):
        return max(self._by_deg) if self._by_deg else 0

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and other.finite and \
            sorted(self.basis) == sorted(other.basis)

    def __hash__(self):
        return hash(tuple(sorted(self.basis)))

    def __repr__(self):
        return "GradedSpace(" + ", ".join(f"{n}:{d}" for n, d in self.basis) + ")"


class LazySpace:
    """Degreewise finite graded space whose basis is generated on demand.

    `enum(d)` lists the keys of degree d (in global order), `deg(k)` gives
    the degree of a key, `namer(k)` its printable name. Degrees are >= 1
    unless `min_deg` says otherwise. `order(k)` overrides the sort key
    (default (degree, key)).
    """

    finite = False

    def __init__(self, enum, deg, namer=str, min_deg=1, order=None):
        self._enum = enum
        self._degf = deg
        self._namer = namer
        self._order = order
        self._cache = {}
        self.min_deg = min_deg

    def degree(self, key):
        return self._degf(key)

    def in_degree(self, d):
        if d < self.min_deg:
            return []
        if d not in self._cache:
            self._cache[d] = list(self._enum(d))
        return self._cache[d]

    def degrees_upto(self, top):
        return [d for d in range(self.min_deg, top + 1) if self.in_degree(d)]

    def name(self, key):
        return self._namer(key)

    def order_key(self, key):
        if self._order is not None:
            return self._order(key)
        return (self._degf(key), key)

    def min_degree(self):
        return self.min_deg

    def __contains__(self, key):
        try:
            return key in self.in_degree(self._degf(key))
        except (KeyError, TypeError, ValueError):
            return False


def sort_keys(space, keys):
    return sorted(keys, key=space.order_key)


def vec_degree(vec, space):
    degs = {space.degree(k) for k in vec}
    if len(degs) > 1:
        raise ValueError(f"inhomogeneous element with degrees {sorted(degs)}")
    return degs.pop() if degs else None


# ---------------------------------------------------------------- permutations

class Permutation:
    """A bijection of {1..n}, stored by its images (1-based)."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation: {images}")
        self.images = images

    @classmethod
    def identity(cls, n):
        return cls(range(1, n + 1))

    def __len__(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i - 1]

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __lt__(self, other):
        return self.images < other.images

    def __repr__(self):
        return f"Permutation{self.images}"

    def compose(self, other):
        """(self ∘ other)(i) = self(other(i))."""
        return Permutation(self.images[j - 1] for j in other.images)

    def inverse(self):
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images, 1):
            inv[j - 1] = i
        return Permutation(inv)

    def apply(self, seq):
        """The reordered tuple (x_{σ(1)}, ..., x_{σ(n)})."""
        return tuple(seq[j - 1] for j in self.images)

    def sign(self):
        s = 1
        im = self.images
        for a in range(len(im)):
            for b in range(a + 1, len(im)):
                if im[a] > im[b]:
                    s = -s
        return s


def all_permutations(n):
    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))]


def adjacent_decomposition(sigma):
    """Adjacent transpositions (positions p, swapping p and p+1) that carry
    the sequence (1..n) to (σ(1)..σ(n)); found by bubble sort."""
    seq = list(sigma.images)
    swaps = []
    n = len(seq)
    for top in range(n - 1, 0, -1):
        for p in range(top):
            if seq[p] > seq[p + 1]:
                seq[p], seq[p + 1] = seq[p + 1], seq[p]
                swaps.append(p)
    swaps.reverse()
    return swaps


def _sign_along(swaps, degrees):
    """Replay adjacent swaps on the labelled tuple, collecting (-1)^{pq}."""
    cur = list(range(len(degrees)))
    odd = 0
    for p in swaps:
        a, b = cur[p], cur[p + 1]
        odd ^= (degrees[a] & 1) & (degrees[b] & 1)
        cur[p], cur[p + 1] = b, a
    return -1 if odd else 1


def koszul_sign(sigma, degrees):
    """ε(σ; x): sign of the substitution x1⊗…⊗xn ↦ x_{σ(1)}⊗…⊗x_{σ(n)}."""
    if not isinstance(sigma, Permutation):
        sigma = Permutation(sigma)
    degrees = list(degrees)
    if len(degrees) != len(sigma):
        raise ValueError(f"{len(degrees)} degrees for a permutation of {len(sigma)}")
    return _sign_along(adjacent_decomposition(sigma), degrees)


def chi(sigma, degrees):
    """χ(σ) = ε(σ)·sgn(σ)."""
    if not isinstance(sigma, Permutation):
        sigma = Permutation(sigma)
    return koszul_sign(sigma, degrees) * sigma.sign()


def reorder_sign(degrees, order):
    """Koszul sign of x ↦ (x[order[0]], x[order[1]], ...) with 0-based order;
    inversion count form of koszul_sign, for inner loops."""
    odd = 0
    n = len(order)
    for a in range(n):
        da = degrees[order[a]] & 1
        if not da:
            continue
        oa = order[a]
        for b in range(a + 1, n):
            if order[b] < oa and degrees[order[b]] & 1:
                odd ^= 1
    return -1 if odd else 1


def sort_with_sign(keys, degrees, sortkey=None, skew=False):
    """Sort a graded tuple into non-decreasing order.

    Returns (sign, sorted_keys) where sign is the Koszul sign (times sgn when
    skew) of the reordering, i.e. x_sorted = sign * x under graded (skew-)
    symmetry. Stable, so equal keys keep relative order.
    """
    idx = list(range(len(keys)))
    if sortkey is None:
        idx.sort(key=lambda i: keys[i])
    else:
        idx.sort(key=lambda i: sortkey(keys[i]))
    sgn = reorder_sign(degrees, idx)
    if skew:
        inv = 0
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                if idx[a] > idx[b]:
                    inv ^= 1
        if inv:
            sgn = -sgn
    return sgn, tuple(keys[i] for i in idx)


# ---------------------------------------------------------------- shuffles

def shuffles(i, j):
    """(i,j)-shuffles in lexicographic order of images."""
    if i < 0 or j < 0:
        raise ValueError("negative shuffle sizes")
    n = i + j
    out = []
    for first in itertools.combinations(range(1, n + 1), i):
        rest = [k for k in range(1, n + 1) if k not in first]
        out.append(Permutation(first + tuple(rest)))
    return out


def block_shuffles(*sizes):
    """Permutations σ of S_n with σ(1) = 1 that increase on each block of
    consecutive positions of the given sizes, in lexicographic order."""
    if len(sizes) == 1 and isinstance(sizes[0], (list, tuple)):
        sizes = tuple(sizes[0])
    if any(s < 1 for s in sizes):
        raise ValueError("block sizes must be >= 1")
    n = sum(sizes)
    out = []
    for p in multi_shuffles(sizes):
        if p.images and p.images[0] != 1:
            continue
        out.append(p)
    out.sort()
    return out


def multi_shuffles(sizes):
    """All permutations increasing on each consecutive block of positions."""
    n = sum(sizes)
    out = []

    def rec(b, remaining, acc):
        if b == len(sizes):
            out.append(Permutation(acc))
            return
        for chosen in itertools.combinations(remaining, sizes[b]):
            rest = [r for r in remaining if r not in chosen]
            rec(b + 1, rest, acc + list(chosen))

    rec(0, list(range(1, n + 1)), [])
    out.sort()
    return out


def num_shuffles(i, j):
    return comb(i + j, i)


# ---------------------------------------------------------------- truncation

@dataclass(frozen=True)
class Truncation:
    """Bounds for every computation: output degree, arity, word length."""

    max_degree: int = 12
    max_arity: int = 5
    max_weight: int = 8

    def __post_init__(self):
        for f in ("max_degree", "max_arity", "max_weight"):
            v = getattr(self, f)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{f} must be a positive integer, got {v!r}")

    def replace(self, **kw):
        d = dict(max_degree=self.max_degree, max_arity=self.max_arity,
                 max_weight=self.max_weight)
        d.update(kw)
        return Truncation(**d)


def tuples_of_degree_at_most(space, n, budget, top=None):
    """All n-tuples of basis keys with total degree <= budget.

    For finite spaces any degrees are allowed; lazy spaces are enumerated
    degree by degree (degrees >= min_degree).
    """
    if space.finite:
        degs = space.degrees()
        if not degs:
            return []
        lo = degs[0]
        pool = [(d, space.in_degree(d)) for d in degs]
    else:
        lo = space.min_degree()
        hi = budget - (n - 1) * lo
        pool = [(d, space.in_degree(d)) for d in range(lo, hi + 1)]
        pool = [(d, ks) for d, ks in pool if ks]
    out = []

    def rec(k, left, acc):
        if k == n:
            out.append(tuple(acc))
            return
        for d, ks in pool:
            if d + (n - k - 1) * lo > left:
                break
            for key in ks:
                acc.append(key)
                rec(k + 1, left - d, acc)
                acc.pop()

    rec(0, budget, [])
    return out


# ---------------------------------------------------------------- multilinear ops

def multilinear(fn, vecs):
    """Expand fn (on basis tuples, returning dicts) multilinearly."""
    out = {}
    if any(not v for v in vecs):
        return out
    for combo in itertools.product(*[list(v.items()) for v in vecs]):
        coef = 1
        keys = []
        for k, c in combo:
            coef *= c
            keys.append(k)
        r = fn(tuple(keys))
        if r:
            vadd(out, r, coef)
    return out


class MultiOp:
    """Graded multilinear map of fixed arity, given on basis tuples.

    Either `table` (dict: tuple of keys -> vector) or `rule` (callable on a
    tuple of keys, results are cached) defines it. With skew=True the map
    is graded skew-symmetric: only non-decreasing tuples (global order) are
    stored and other tuples are looked up with the χ sign.
    """

    def __init__(self, arity, degree, source, target=None, table=None,
                 rule=None, skew=False, check=True):
        if arity < 1:
            raise ValueError("arity must be >= 1")
        self.arity = arity
        self.degree = degree
        self.source = source
        self.target = target if target is not None else source
        self.skew = skew
        self._rule = rule
        self._table = {}
        self._cache = {}
        if table:
            for keys, val in table.items():
                keys = tuple(keys)
                if len(keys) != arity:
                    raise ValueError(f"entry {keys} has wrong arity for m{arity}")
                val = {k: rat(c) for k, c in dict(val).items() if rat(c)}
                if check:
                    self._check_entry(keys, val)
                if skew:
                    sgn, canon = self._canon(keys)
                    if sgn == 0:
                        if val:
                            raise ValueError(
                                f"skew-symmetry forces {keys} to vanish")
                        continue
                    val = vscale(val, sgn)
                    old = self._table.get(canon)
                    if old is not None and old != val:
                        raise ValueError(
                            f"entries for {keys} conflict with skew-symmetry")
                    keys = canon
                if val:
                    self._table[keys] = val

    def _check_entry(self, keys, val):
        for k in keys:
            if k not in self.source:
                raise ValueError(f"unknown basis element {k!r}")
        want = sum(self.source.degree(k) for k in keys) + self.degree
        for k in val:
            if k not in self.target:
                raise ValueError(f"unknown basis element {k!r}")
            if self.target.degree(k) != want:
                raise ValueError(
                    f"entry on {keys}: output {k!r} has degree "
                    f"{self.target.degree(k)}, expected {want}")

    def _canon(self, keys):
        """Canonical (sorted) tuple and sign s with f(keys) = s*f(canon)."""
        degs = [self.source.degree(k) for k in keys]
        sgn, canon = sort_with_sign(keys, degs, self.source.order_key, skew=True)
        # an odd-shifted repeat forces zero: equal even keys under skew symmetry
        for a in range(len(canon) - 1):
            if canon[a] == canon[a + 1] and self.source.degree(canon[a]) % 2 == 0:
                return 0, canon
        return sgn, canon

    def is_table(self):
        return self._rule is None

    def items(self):
        """Stored (canonical) entries, in global order of the input tuples."""
        if self._rule is not None:
            raise ValueError("rule-defined operation has no finite table")
        ok = self.source.order_key
        return sorted(self._table.items(), key=lambda kv: [ok(k) for k in kv[0]])

    def on_basis(self, keys):
        keys = tuple(keys)
        if self.skew:
            sgn, canon = self._canon(keys)
            if sgn == 0:
                return {}
            v = self._raw(canon)
            return v if sgn == 1 else vscale(v, -1)
        return self._raw(keys)

    def _raw(self, keys):
        if self._rule is None:
            return self._table.get(keys, {})
        v = self._cache.get(keys)
        if v is None:
            v = self._rule(keys)
            v = {k: c for k, c in v.items() if c}
            self._cache[keys] = v
        return v

    def __call__(self, *vecs):
        if len(vecs) != self.arity:
            raise ValueError(f"expected {self.arity} arguments")
        return multilinear(self.on_basis, vecs)

    def is_zero(self):
        return self._rule is None and not self._table

    def __eq__(self, other):
        if not isinstance(other, MultiOp) or not (self.is_table() and other.is_table()):
            return NotImplemented
        return (self.arity, self.degree, self._table) == \
            (other.arity, other.degree, other._table)

    __hash__ = None


def zero_op(arity, degree, source, target=None, skew=False):
    return MultiOp(arity, degree, source, target, table={}, skew=skew)


class LinearMap:
    """Graded linear map given on basis keys (cached), applied to vectors."""

    def __init__(self, source, target, degree, rule):
        self.source = source
        self.target = target
        self.degree = degree
        self._rule = rule
        self._cache = {}
        self.known_zero = False

    @classmethod
    def from_table(cls, source, target, degree, table):
        table = {k: {kk: rat(c) for kk, c in dict(v).items() if rat(c)}
                 for k, v in table.items()}
        return cls(source, target, degree, lambda k: table.get(k, {}))

    @classmethod
    def identity(cls, space):
        return cls(space, space, 0, lambda k: {k: Q(1)})

    @classmethod
    def zero(cls, source, target, degree):
        z = cls(source, target, degree, lambda k: {})
        z.known_zero = True
        return z

    def on_basis(self, key):
        v = self._cache.get(key)
        if v is None:
            v = self._rule(key)
            v = {k: c for k, c in v.items() if c}
            self._cache[key] = v
        return v

    def __call__(self, vec):
        out = {}
        for k, c in vec.items():
            r = self.on_basis(k)
            if r:
                vadd(out, r, c)
        return out

    def then(self, other):
        """other ∘ self."""
        return LinearMap(self.source, other.target, self.degree + other.degree,
                         lambda k: other(self.on_basis(k)))

    def __add__(self, other):
        return LinearMap(self.source, self.target, self.degree,
                         lambda k: vadd(dict(self.on_basis(k)), other.on_basis(k)))

    def __sub__(self, other):
        return LinearMap(self.source, self.target, self.degree,
                         lambda k: vadd(dict(self.on_basis(k)), other.on_basis(k), -1))

    def scaled(self, c):
        c = rat(c)
        return LinearMap(self.source, self.target, self.degree,
                         lambda k: vscale(self.on_basis(k), c))


class ChainComplex:
    """A graded space with a degree -1 differential."""

    def __init__(self, space, d=None):
        self.space = space
        self.d = d if d is not None else LinearMap.zero(space, space, -1)

    def basis_in(self, deg):
        return self.space.in_degree(deg)
