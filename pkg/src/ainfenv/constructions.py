"""Quillen chains, the Quillen Lie functor, free Lie algebras and PBW envelopes.

Everything lives on positively graded letters, so each degree is finite and
is computed lazily; nothing is truncated below the requested degree.

Free Lie algebras are realized inside the tensor algebra: a Lie element is a
vector of words, [a, b] = ab - (-1)^{|a||b|} ba, and a basis of each degree
is a fully reduced echelon form whose pivots (words) serve as keys. The
coordinate of a Lie element on a basis row is then simply its coefficient on
the row's pivot word.
"""

from __future__ import annotations

import itertools

from .core import (
    GradedSpace, LazySpace, LinearMap, MultiOp, Q, sort_with_sign, vadd, vscale, vsub,
)
from .homotopy import (
    AInfAlgebra, DGCoalgebra, LInfAlgebra, _Shifted, cobar, word_space,
)
from .linalg import Echelon, kernel_and_image


# ---------------------------------------------------------------- graded-commutative words

def wedge_sort(keys, degree, order_key):
    """Sort a graded-commutative word. Returns (sign, sorted keys), sign 0 if it vanishes."""
    sgn, out = sort_with_sign(tuple(keys), [degree(k) for k in keys], order_key)
    for a in range(len(out) - 1):
        if out[a] == out[a + 1] and degree(out[a]) & 1:
            return 0, out
    return sgn, out


def wedge_space(base, shift, namer=None):
    """Λ⁺ of the shifted letters s^shift(base): sorted tuples of base keys.

    The degree of a word is Σ (|x| + shift); letters of odd shifted degree
    appear at most once.
    """

    def ldeg(k):
        return base.degree(k) + shift

    empty = getattr(base, "finite", False) and not base.degrees()
    lo = 1 if empty else base.min_degree() + shift
    if lo < 1:
        raise ValueError("wedge words need shifted letters of degree >= 1")

    def deg(w):
        return sum(ldeg(k) for k in w)

    def enum(d):
        letters = []
        for e in range(lo, d + 1):
            letters.extend(base.in_degree(e - shift))
        letters.sort(key=base.order_key)
        out = []

        def rec(start, left, acc):
            if acc and left == 0:
                out.append(tuple(acc))
                return
            for idx in range(start, len(letters)):
                k = letters[idx]
                e = ldeg(k)
                if e > left:
                    continue
                acc.append(k)
                rec(idx + 1 if e & 1 else idx, left - e, acc)
                acc.pop()

        rec(0, d, [])
        out.sort(key=lambda w: [base.order_key(k) for k in w])
        return out

    if namer is None:
        pre = "s" if shift == 1 else ""

        def namer(w):
            return "∧".join(pre + base.name(k) for k in w)

    sp = LazySpace(enum, deg, namer, min_deg=lo,
                   order=lambda w: (deg(w), [base.order_key(k) for k in w]))
    sp.letter_degree = ldeg
    sp.base = base
    return sp


# ---------------------------------------------------------------- Quillen chains

def _decalage(L, keys):
    """Sign relating the bracket on sL to ℓ_k: parity of Σ_j (k-j)|sx_j|."""
    k = len(keys)
    e = 0
    for j, x in enumerate(keys, 1):
        e += (k - j) * (L.space.degree(x) + 1)
    return -1 if e & 1 else 1


def quillen_chains(L, t=None):
    """𝒞(L) = (Λ sL, δ) with δ_k removing k letters and inserting sℓ_k in front.

    δ_k(sx_1∧..∧sx_p) = Σ_{i_1<..<i_k} ε sℓ_k(x_{i_1},..,x_{i_k}) ∧ sx_1..^..^..sx_p,
    ε the Koszul sign of moving the chosen letters to the front times
    -(-1)^{Σ_j (k-j)|sx_{i_j}|}.
    """
    sp = L.space
    if sp.min_degree() < 1:
        raise ValueError("Quillen chains need an L∞ algebra in degrees >= 1")
    W = wedge_space(sp, 1, namer=lambda w: "∧".join("s" + sp.name(k) for k in w))
    ldeg = W.letter_degree
    okey = sp.order_key

    def delta(w):
        p = len(w)
        out = {}
        for k in L.arities():
            if k > p:
                break
            op = L.ops[k]
            for chosen in itertools.combinations(range(p), k):
                rest = [w[a] for a in range(p) if a not in chosen]
                picked = [w[a] for a in chosen]
                order = list(chosen) + [a for a in range(p) if a not in chosen]
                sgn, _ = sort_with_sign(tuple(order), [ldeg(w[a]) for a in order])
                # sort_with_sign returns the sign of sorting `order` back to the
                # identity, which equals the Koszul sign of the move to the front
                r = op.on_basis(tuple(picked))
                if not r:
                    continue
                sgn *= -_decalage(L, picked)
                for c, coef in r.items():
                    s2, word = wedge_sort((c,) + tuple(rest), ldeg, okey)
                    if s2:
                        vadd(out, {word: sgn * s2 * coef})
        return out

    def cop(w):
        p = len(w)
        out = {}
        for i in range(1, p):
            for first in itertools.combinations(range(p), i):
                order = list(first) + [a for a in range(p) if a not in first]
                sgn, _ = sort_with_sign(tuple(order), [ldeg(w[a]) for a in order])
                left = tuple(w[a] for a in first)
                right = tuple(w[a] for a in order[i:])
                vadd(out, {(left, right): Q(sgn)})
        return out

    C = DGCoalgebra(W, LinearMap(W, W, -1, delta), cop, cocommutative=True,
                    name=f"C({L.name})" if L.name else None)
    C.source = L
    return C


def chains_morphism(f, C1, C2):
    """𝒞(f): 𝒞(L_1) → 𝒞(L_2) for an L∞ morphism f with components f_k.

    sx_1∧..∧sx_p ↦ Σ over splittings into blocks (listed by least element)
    of ε · sf_{k_1}(x_{B_1}) ∧ .. ∧ sf_{k_r}(x_{B_r}), ε the Koszul sign of
    the regrouping times (-1)^{Σ_j (k-j)|sx_j|} for each block.
    """
    L1 = f.source
    W1, W2 = C1.space, C2.space
    ldeg = W1.letter_degree
    sp2 = f.target.space

    def block_parts(p):
        # set partitions of range(p), blocks in order of least element
        if p == 0:
            yield []
            return
        for part in block_parts(p - 1):
            for a in range(len(part)):
                yield part[:a] + [part[a] + [p - 1]] + part[a + 1:]
            yield part + [[p - 1]]

    def rule(w):
        out = {}
        for part in block_parts(len(w)):
            if any(len(b) not in f.comps for b in part):
                continue
            order = [a for b in part for a in b]
            sgn, _ = sort_with_sign(tuple(order), [ldeg(w[a]) for a in order])
            vecs = []
            for b in part:
                keys = tuple(w[a] for a in b)
                v = f.comps[len(b)].on_basis(keys)
                if not v:
                    break
                vecs.append((_decalage(L1, keys), v))
            else:
                terms = {(): Q(sgn)}
                for dec, v in vecs:
                    nxt = {}
                    for word, c in terms.items():
                        for y, cy in v.items():
                            s2, nw = wedge_sort(word + (y,), lambda k: sp2.degree(k) + 1,
                                                sp2.order_key)
                            if s2:
                                vadd(nxt, {nw: s2 * dec * c * cy})
                    terms = nxt
                vadd(out, terms)
        return out

    return LinearMap(W1, W2, 0, rule)


def check_coalgebra_map(F, C1, C2, top):
    """δ F = F δ on all words of degree <= top (residuals by word)."""
    bad = []
    for n in range(C1.space.min_degree(), top + 1):
        for w in C1.space.in_degree(n):
            res = vsub(C2.delta(F.on_basis(w)), F(C1.delta.on_basis(w)))
            if res:
                bad.append((w, res))
    return bad


# ---------------------------------------------------------------- free Lie algebras

class FreeLie:
    """Lie elements of T(gens) with a lazily computed basis per degree.

    `gens` is a graded space of generator keys (degrees >= 1). Words are
    tuples of generator keys. Optional `weight_cap` quotients by words that
    are longer (an ideal for both brackets and weight-nondecreasing
    differentials).
    """

    def __init__(self, gens, weight_cap=None, word_namer=None):
        if gens.min_degree() < 1:
            raise ValueError("free Lie algebras here need generators of degree >= 1")
        self.gens = gens
        self.weight_cap = weight_cap
        self.words = word_space(gens, weight_cap=weight_cap, namer=word_namer)
        self._ech = {}
        self._basis = {}
        self.space = LazySpace(self._enum, self.word_degree, self._name,
                               min_deg=gens.min_degree())
        self.space.free_lie = self

    def word_degree(self, w):
        return sum(self.gens.degree(a) for a in w)

    def _name(self, w):
        return self.words.name(w)

    def _okey(self, w):
        return [self.gens.order_key(a) for a in w]

    # -- tensor algebra side
    def tmul(self, u, v):
        out = {}
        cap = self.weight_cap
        for a, ca in u.items():
            for b, cb in v.items():
                w = a + b
                if cap is None or len(w) <= cap:
                    vadd(out, {w: ca * cb})
        return out

    def tbracket(self, u, v):
        """[u, v] in T for homogeneous u, v."""
        if not u or not v:
            return {}
        du = self.word_degree(next(iter(u)))
        dv = self.word_degree(next(iter(v)))
        out = self.tmul(u, v)
        sgn = -1 if (du * dv) & 1 else 1
        return vadd(out, self.tmul(v, u), -sgn)

    # -- Lie basis
    def echelon(self, d):
        e = self._ech.get(d)
        if e is None:
            e = Echelon(order=self._okey)
            for g in self.gens.in_degree(d):
                e.add({(g,): Q(1)})
            for e1 in range(self.gens.min_degree(), d):
                for g in self.gens.in_degree(e1):
                    for row in self._rows(d - e1):
                        e.add(self.tbracket({(g,): Q(1)}, row))
            self._ech[d] = e
        return e

    def _rows(self, d):
        if d < self.gens.min_degree():
            return []
        return [self.echelon(d).rows[p] for p in self._enum(d)]

    def _enum(self, d):
        b = self._basis.get(d)
        if b is None:
            if d < self.gens.min_degree():
                return []
            e = self.echelon(d)
            b = sorted(e.rows, key=self._okey)
            self._basis[d] = b
        return b

    def element(self, key):
        """The Lie basis element with pivot `key`, as a vector in T."""
        return self.echelon(self.word_degree(key)).rows[key]

    def to_tensor(self, vec):
        out = {}
        for k, c in vec.items():
            vadd(out, self.element(k), c)
        return out

    def coords(self, tvec):
        """Coordinates of a Lie element of T on the Lie basis (checked)."""
        out = {}
        by_deg = {}
        for w, c in tvec.items():
            by_deg.setdefault(self.word_degree(w), {})[w] = c
        for d, part in by_deg.items():
            vadd(out, self.echelon(d).coords(part))
        return out

    def bracket(self, a, b):
        return self.coords(self.tbracket(self.element(a), self.element(b)))

    def bracket_vectors(self, u, v):
        return self.coords(self.tbracket(self.to_tensor(u), self.to_tensor(v)))


class FreeLieDGL(LInfAlgebra):
    """(𝕃(V), ∂) with ∂ given on generators as Lie elements of T(V)."""

    def __init__(self, lie, dgen, name=None):
        self.lie = lie
        self._dgen = dgen
        self._dword = {}
        sp = lie.space
        ops = {
            1: MultiOp(1, -1, sp, rule=lambda ks: self.d_basis(ks[0]), skew=True),
            2: MultiOp(2, 0, sp, rule=lambda ks: lie.bracket(ks[0], ks[1]), skew=True),
        }
        super().__init__(sp, ops, name)

    def d_tensor_word(self, w):
        """The derivation ∂ on a word of T(V)."""
        v = self._dword.get(w)
        if v is not None:
            return v
        out = {}
        pre = 0
        gdeg = self.lie.gens.degree
        cap = self.lie.weight_cap
        for a, g in enumerate(w):
            sgn = -1 if pre & 1 else 1
            for word, c in self._dgen(g).items():
                nw = w[:a] + word + w[a + 1:]
                if cap is None or len(nw) <= cap:
                    vadd(out, {nw: sgn * c})
            pre += gdeg(g)
        self._dword[w] = out
        return out

    def d_tensor(self, tvec):
        out = {}
        for w, c in tvec.items():
            vadd(out, self.d_tensor_word(w), c)
        return out

    def d_basis(self, key):
        return self.lie.coords(self.d_tensor(self.lie.element(key)))

    def bracket_vectors(self, u, v):
        return self.lie.bracket_vectors(u, v)

    def bracket(self, u, v):
        return self.lie.bracket_vectors(u, v)

    def differential(self, u):
        out = {}
        for k, c in u.items():
            vadd(out, self.d_basis(k), c)
        return out


def quillen_lie(C, t=None):
    """ℒ(C) = (𝕃(s⁻¹C̄), ∂₁ + ∂₂) as a sub-DGL of the cobar construction.

    ∂₂(s⁻¹x) = ½ Σ (-1)^{|x_i|} [s⁻¹x_i, s⁻¹y_i] equals Σ (-1)^{|x_i|} s⁻¹x_i s⁻¹y_i
    in T(s⁻¹C̄) for cocommutative C, i.e. the cobar differential; both are
    computed and compared on each generator that is used.
    """
    if not C.cocommutative:
        raise ValueError("the Quillen Lie functor needs a cocommutative coalgebra")
    cs = C.space
    gens = _Shifted(cs, -1)
    lie = FreeLie(gens, word_namer=lambda w: " ".join("s⁻¹(" + cs.name(a) + ")" for a in w))
    half = Q(1, 2)

    def dgen(g):
        out = {}
        for c, coef in C.delta.on_basis(g).items():
            vadd(out, {(c,): -coef})
        quad = {}
        for (a, b), coef in C.coproduct(g).items():
            sgn = -1 if cs.degree(a) & 1 else 1
            vadd(quad, lie.tbracket({(a,): Q(1)}, {(b,): Q(1)}), sgn * coef * half)
        return vadd(out, quad)

    D = FreeLieDGL(lie, dgen, name=f"L({C.name})" if C.name else None)
    D.coalgebra = C
    return D


def cobar_of(C, t=None):
    return cobar(C, t)


# ---------------------------------------------------------------- adapted letters

_KIND_RANK = {"H": 0, "B": 1, "dB": 2}


class AdaptedDGL(LInfAlgebra):
    """A DGL rewritten on the basis B ⊕ dB ⊕ H of a contraction onto homology.

    Letters are ("B", b), ("dB", b) and ("H", name); in these letters the
    differential is b ↦ db and the homotopy is db ↦ -b.
    """

    def __init__(self, D, c, name=None):
        if not D.is_dgl():
            raise ValueError("adapted letters need a DGL (no ℓ_k with k >= 3)")
        if not hasattr(c, "adapted"):
            raise ValueError("contraction carries no adapted basis")
        self.dgl = D
        self.contraction = c
        dsp = D.space
        self._vec = {}
        self._where = {}
        for n, (tagged, _) in c.adapted.items():
            for idx, (kind, b, v) in enumerate(tagged):
                key = (kind, b)
                self._vec[key] = v
                self._where[key] = (n, idx)

        def deg(k):
            if k not in self._where:
                raise ValueError(f"adapted letter {k!r} is beyond degree {c.top}")
            return self._where[k][0]

        def enum(d):
            if d not in c.adapted:
                if c.top is not None and d > c.top:
                    raise ValueError(f"adapted letters are only known up to degree {c.top}")
                return []
            return sorted(((kind, b) for kind, b, _ in c.adapted[d][0]), key=order)

        def order(k):
            kind, b = k
            sub = b if kind == "H" else dsp.order_key(b)
            return (deg(k), _KIND_RANK[kind], sub)

        def namer(k):
            kind, b = k
            if kind == "H":
                return b
            nm = dsp.name(b)
            return nm if kind == "B" else f"d({nm})"

        sp = LazySpace(enum, deg, namer, min_deg=dsp.min_degree(), order=order)
        ops = {1: MultiOp(1, -1, sp, rule=lambda ks: self._d(ks[0]), skew=True),
               2: MultiOp(2, 0, sp, rule=lambda ks: self._br(ks[0], ks[1]), skew=True)}
        super().__init__(sp, ops, name)

    def vector(self, letter):
        """The letter as a vector of the original DGL."""
        return self._vec[letter]

    def coords(self, vec):
        """Letter coordinates of a homogeneous vector of the original DGL."""
        if not vec:
            return {}
        n = self.dgl.space.degree(next(iter(vec)))
        if n not in self.contraction.adapted:
            if self.contraction.top is None:
                return {}
            raise ValueError(f"adapted letters are only known up to degree {self.contraction.top}")
        tagged, ech = self.contraction.adapted[n]
        out = {}
        for idx, c in ech.express(vec).items():
            kind, b, _ = tagged[idx]
            vadd(out, {(kind, b): c})
        return out

    def to_original(self, vec):
        out = {}
        for k, c in vec.items():
            vadd(out, self._vec[k], c)
        return out

    def _d(self, k):
        kind, b = k
        if kind == "B":
            return {("dB", b): Q(1)}
        if kind == "dB":
            return {}
        return self.coords(self.dgl.differential(self._vec[k]))

    def _br(self, a, b):
        return self.coords(self.dgl.bracket(self._vec[a], self._vec[b]))


# ---------------------------------------------------------------- PBW envelopes

def _mono_namer(letters):
    def namer(w):
        return "·".join(letters.name(k) for k in w)
    return namer


class PBWAlgebra:
    """UL of a DGL on ordered monomials in the basis of L (letters of degree >= 1).

    Products are straightened with za = (-1)^{|a||z|} az + [z, a] for a < z
    and aa = ½[a, a] for odd a; both rules are memoized per (monomial, letter).
    """

    def __init__(self, lie, name=None):
        if not lie.is_dgl():
            raise ValueError("PBW envelopes need a DGL")
        self.lie = lie
        self.letters = lie.space
        self.space = wedge_space(self.letters, 0, namer=_mono_namer(self.letters))
        self.name = name
        self._ml = {}
        self._d = {}

    def _okey(self, k):
        return self.letters.order_key(k)

    def _bracket(self, a, b):
        return self.lie.on_basis(2, (a, b))

    def mul_letter(self, m, z):
        """Normal form of the monomial m times the letter z."""
        key = (m, z)
        v = self._ml.get(key)
        if v is not None:
            return v
        if not m:
            v = {(z,): Q(1)}
        else:
            a, rest = m[-1], m[:-1]
            ka, kz = self._okey(a), self._okey(z)
            deg = self.letters.degree
            if ka < kz or (a == z and not deg(a) & 1):
                v = {m + (z,): Q(1)}
            elif a == z:
                v = self.mul_vec_letters({rest: Q(1)}, vscale(self._bracket(a, a), Q(1, 2)))
            else:
                # rest·a·z = ± rest·z·a + rest·[a, z]
                sgn = -1 if (deg(a) * deg(z)) & 1 else 1
                v = {}
                for mono, c in self.mul_letter(rest, z).items():
                    vadd(v, self.mul_letter(mono, a), sgn * c)
                vadd(v, self.mul_vec_letters({rest: Q(1)}, self._bracket(a, z)))
        self._ml[key] = v
        return v

    def mul_vec_letters(self, u, lvec):
        """u times a linear combination of letters."""
        out = {}
        for m, c in u.items():
            for z, cz in lvec.items():
                vadd(out, self.mul_letter(m, z), c * cz)
        return out

    def mul_mono(self, m1, m2):
        cur = {m1: Q(1)}
        for z in m2:
            nxt = {}
            for m, c in cur.items():
                vadd(nxt, self.mul_letter(m, z), c)
            cur = nxt
        return cur

    def mul(self, u, v):
        out = {}
        for a, ca in u.items():
            for b, cb in v.items():
                vadd(out, self.mul_mono(a, b), ca * cb)
        return out

    def normal_form(self, word):
        """Ordered-monomial expansion of the product of a sequence of letters."""
        for k in word:
            if k not in self.letters:
                raise ValueError(f"unknown letter {k!r}")
        return self.mul_mono((), tuple(word))

    def d_mono(self, m):
        """The derivation extending ℓ_1, re-straightened."""
        v = self._d.get(m)
        if v is not None:
            return v
        v = {}
        pre = 0
        deg = self.letters.degree
        for a, z in enumerate(m):
            dz = self.lie.on_basis(1, (z,))
            if dz:
                left = self.mul_vec_letters({m[:a]: Q(1)}, dz)
                right = m[a + 1:]
                sgn = -1 if pre & 1 else 1
                for mono, c in left.items():
                    vadd(v, self.mul_mono(mono, right), sgn * c)
            pre += deg(z)
        self._d[m] = v
        return v

    def d(self, u):
        out = {}
        for m, c in u.items():
            vadd(out, self.d_mono(m), c)
        return out

    def iota(self, letter):
        return {(letter,): Q(1)}

    def as_ainf(self):
        sp = self.space
        ops = {2: MultiOp(2, 0, sp, rule=lambda ks: self.mul_mono(ks[0], ks[1]))}
        if 1 in self.lie.ops:
            ops[1] = MultiOp(1, -1, sp, rule=lambda ks: self.d_mono(ks[0]))
        return AInfAlgebra(sp, ops, name=self.name)


def universal_envelope_dgl(L, name=None):
    return PBWAlgebra(L, name=name or (f"U({L.name})" if L.name else None))


def pbw_normal_form(word, A):
    return A.normal_form(word)


# ---------------------------------------------------------------- test algebras

def random_dgl(rng, ngens=3, max_deg=6, weight_cap=4, coef=(-2, -1, 1, 2), density=0.7):
    """A random DGL (𝕃(v_1..v_r)/weight > cap, ∂) with ∂v_i a random cycle in 𝕃(v_<i).

    Generators get degrees in [1, max_deg], sorted, so ∂ lowers the generator
    index and ∂² = 0 holds by construction.
    """
    degs = sorted(rng.randint(1, max_deg) for _ in range(ngens))
    names = [f"v{a + 1}" for a in range(ngens)]
    dg = {}
    for a, (nm, dv) in enumerate(zip(names, degs)):
        dg[nm] = {}
        if a == 0 or dv < 2:
            continue
        sub = FreeLieDGL(FreeLie(GradedSpace(list(zip(names[:a], degs[:a]))), weight_cap),
                         lambda g: dg[g])
        keys = sub.space.in_degree(dv - 1)
        if not keys:
            continue
        _, cyc = kernel_and_image(keys, sub.d_basis, sub.space.order_key)
        z = {}
        for v in cyc:
            if rng.random() < density:
                vadd(z, v, rng.choice(coef))
        dg[nm] = sub.lie.to_tensor(z)
    lie = FreeLie(GradedSpace(list(zip(names, degs))), weight_cap)
    return FreeLieDGL(lie, lambda g: dg[g], name="random")


def tensor_dga(gens, dgen, max_weight):
    """T(V)/(words longer than max_weight) with ∂ given on generators by words."""
    gdeg = dict(gens)
    for g, words in dgen.items():
        for word in words:
            if sum(gdeg[a] for a in word) != gdeg[g] - 1:
                raise ValueError(f"d{g} has a term {word} of the wrong degree")
    letters = GradedSpace(list(gens))
    W = word_space(letters, weight_cap=max_weight,
                   namer=lambda w: "".join(w))

    def d1(ks):
        w = ks[0]
        out = {}
        pre = 0
        for a, g in enumerate(w):
            s = -1 if pre & 1 else 1
            for word, c in dgen.get(g, {}).items():
                nw = w[:a] + tuple(word) + w[a + 1:]
                if len(nw) <= max_weight:
                    vadd(out, {nw: s * Q(c)})
            pre += gdeg[g]
        return out

    def m2(ks):
        w = ks[0] + ks[1]
        return {w: Q(1)} if len(w) <= max_weight else {}

    return AInfAlgebra(W, {1: MultiOp(1, -1, W, rule=d1), 2: MultiOp(2, 0, W, rule=m2)})
