"""The universal enveloping A∞ algebra U_t(L) on ΛL.

For a DGL L with a contraction onto its homology H, write L = B ⊕ dB ⊕ H in
adapted letters. On PBW monomials of UL the commutative differential d_Λ
(b ↦ db) has the Koszul contraction onto ΛH with homotopy -(1/N)h, where h
is the odd derivation db ↦ b and N counts the letters from B ⊕ dB. The true
differential of UL differs from d_Λ by terms of lower word length, so the
perturbation lemma gives a contraction of UL onto ΛH, and the A∞ structure
of U_t is transferred from (UL, d, ·) along it.

A general L∞ algebra L is first replaced by the DGL ℒ𝒞(L), whose envelope
is Ω𝒞(L), contracted onto L itself (the class of -s⁻¹sx named x).
"""

from __future__ import annotations

from .core import (
    ChainComplex, LinearMap, MultiOp, Q, Truncation, format_vector, vadd, vscale, vsub,
)
from .constructions import (
    AdaptedDGL, PBWAlgebra, chains_morphism, quillen_chains, quillen_lie, wedge_sort,
    wedge_space,
)
from .homotopy import (
    AInfMorphism, LInfAlgebra, Report, _compositions, _input_tuples, _sorted_tuple,
    antisymmetrized, materialize,
)
from .transfer import (
    Contraction, homology_contraction, perturb_contraction, transfer_ainf, transfer_linf,
)


_STATS = {}


class EnvelopeError(RuntimeError):
    pass


def _mono_name(space):
    def namer(w):
        return "·".join(space.name(k) for k in w)
    return namer


def commutative_derivation(space, letter_rule, odd):
    """Derivation of Λ(letters) given on letters; `odd` for degree ±1 maps."""
    ldeg = space.letter_degree
    okey = space.base.order_key

    def rule(m):
        out = {}
        pre = 0
        for a, z in enumerate(m):
            img = letter_rule(z)
            if img:
                sgn = -1 if (odd and pre & 1) else 1
                for y, c in img.items():
                    s2, w = wedge_sort(m[:a] + (y,) + m[a + 1:], ldeg, okey)
                    if s2:
                        vadd(out, {w: sgn * s2 * c})
            pre += ldeg(z)
        return out

    return rule


class Envelope:
    """U_t(L): the A∞ structure on ΛH together with how it was built."""

    def __init__(self, **kw):
        self.__dict__.update(kw)

    @property
    def space(self):
        return self.structure.space

    def iota(self, h):
        return {(h,): Q(1)}

    def table_lines(self):
        return structure_lines(self.structure)


def structure_lines(A, prefix=None):
    """One line per nonzero entry, in the global order of input tuples."""
    sp = A.space
    sym = prefix or ("l" if A.skew else "m")
    out = []
    for k in A.arities():
        for keys, val in A.ops[k].items():
            args = ",".join(sp.name(x) for x in keys)
            out.append(f"{sym}{k}({args}) = {format_vector(val, sp)}")
    return out


def _letter_complex(L, c, t):
    if c is None:
        d = LinearMap(L.space, L.space, -1, lambda k: L.on_basis(1, (k,)))
        c = homology_contraction(ChainComplex(L.space, d), top=t.max_degree + 2)
    if not hasattr(c, "adapted"):
        raise EnvelopeError("the contraction must come from homology_contraction")
    return c


def _build(D, c, t, name=None):
    """The contraction of (UD, d) onto ΛH and the transferred structure."""
    hs = c.small.space
    for deg in hs.degrees():
        if deg < 1:
            raise EnvelopeError("envelopes need homology in degrees >= 1")
    adl = AdaptedDGL(D, c)
    U = PBWAlgebra(adl, name=f"U({name})" if name else None)
    usp = U.space
    lam = wedge_space(hs, 0, namer=_mono_name(hs))
    small_d = c.small.d

    def d_letter(z):
        kind, b = z
        if kind == "B":
            return {("dB", b): Q(1)}
        if kind == "H":
            return {("H", y): cf for y, cf in small_d.on_basis(b).items()}
        return {}

    def h_letter(z):
        kind, b = z
        return {("B", b): Q(1)} if kind == "dB" else {}

    d_lam = commutative_derivation(usp, d_letter, True)
    h_lam = commutative_derivation(usp, h_letter, True)

    def K0(m):
        n = sum(1 for z in m if z[0] != "H")
        if n == 0:
            return {}
        return vscale(h_lam(m), Q(-1, n))

    def i0(w):
        return {tuple(("H", y) for y in w): Q(1)}

    def q0(m):
        if all(z[0] == "H" for z in m):
            return {tuple(z[1] for z in m): Q(1)}
        return {}

    lam_d = commutative_derivation(lam, lambda y: small_d.on_basis(y), True)
    small0 = ChainComplex(lam) if getattr(small_d, "known_zero", False) or not _has_d(c) \
        else ChainComplex(lam, LinearMap(lam, lam, -1, lam_d))
    base = Contraction(ChainComplex(usp, LinearMap(usp, usp, -1, d_lam)), small0,
                       LinearMap(lam, usp, 0, i0), LinearMap(usp, lam, 0, q0),
                       LinearMap(usp, usp, 1, K0), name="koszul")
    tpert = LinearMap(usp, usp, -1, lambda m: vsub(U.d_mono(m), d_lam(m)))
    pc = perturb_contraction(base, tpert)
    # the perturbed small differential vanishes when H is minimal; check it
    top = t.max_degree + 1
    zero = all(not pc.small.d.on_basis(w) for n in range(1, top + 1)
               for w in lam.in_degree(n))
    if zero and not _has_d(c):
        pc = Contraction(pc.big, ChainComplex(lam), pc.i, pc.q, pc.K, name="perturbed")
    AU = U.as_ainf()
    S, J = transfer_ainf(pc, AU, t)
    return adl, U, base, pc, S, J


def _has_d(c):
    sp = c.small.space
    return any(c.small.d.on_basis(h) for h in sp.names())


def check_iota_ell(ell, S, t):
    """ι ℓ_n(x) = Σ_σ χ(σ) m_n(ιx_σ) on all in-bound tuples of H."""
    hs = ell.space
    rep = Report("iota l_n = sum chi m_n")
    for n in range(2, t.max_arity + 1):
        anti = antisymmetrized(S.ops[n]) if n in S.ops else None
        for x in _input_tuples(hs, n, t, n - 2):
            if not _sorted_tuple(hs, x):
                continue
            rep.checked += 1
            lhs = {(y,): c for y, c in ell.on_basis(n, x).items()}
            rhs = anti.on_basis(tuple((y,) for y in x)) if anti else {}
            res = vsub(lhs, rhs)
            if res:
                rep.violations.append((n, x, res))
    return rep


def _iota_K_check(adl, pc, t):
    """ι K = G ι on the letters of L (observation)."""
    rep = Report("iota K = G iota")
    for n in range(adl.space.min_degree(), t.max_degree + 1):
        for z in adl.space.in_degree(n):
            rep.checked += 1
            kz = {("B", z[1]): Q(-1)} if z[0] == "dB" else {}
            lhs = {(y,): c for y, c in kz.items()}
            res = vsub(lhs, pc.K.on_basis((z,)))
            if res:
                rep.violations.append((1, (z,), res))
    return rep


def envelope_of_dgl(L, c=None, t=None, name=None, verify=True):
    """U_t of a DGL L, with a contraction c of L onto its homology."""
    t = t or Truncation()
    if not L.is_dgl():
        raise EnvelopeError("envelope_of_dgl needs a DGL; use envelope_general")
    c = _letter_complex(L, c, t)
    adl, U, base, pc, S, J = _build(L, c, t, name or L.name)
    ell, I = transfer_linf(c, L, t)
    S_tab = materialize(S, t)
    e = Envelope(source=L, dgl=L, contraction=c, adapted=adl, pbw=U,
                 base_contraction=base, big_contraction=pc, lazy=S,
                 structure=S_tab, morphism=J, transferred=ell, linf_morphism=I,
                 truncation=t, name=name or L.name)
    if verify:
        _verify(e)
    return e


def _verify(e):
    t = e.truncation
    rep = check_iota_ell(e.transferred, e.lazy, t)
    e.iota_ell = rep
    if not rep.ok:
        n, x, res = rep.violations[0]
        names = ",".join(e.transferred.space.name(k) for k in x)
        raise EnvelopeError(f"iota l_n = sum chi m_n fails for l{n}({names}): residual "
                            f"{format_vector(res, e.space)}")
    e.iota_K = _iota_K_check(e.adapted, e.big_contraction, t)


def envelope_general(L, t=None, c_opt=None, name=None, verify=True):
    """U_t(L) for an L∞ algebra L in degrees >= 1, via ℒ𝒞(L) and Ω𝒞(L)."""
    t = t or Truncation()
    if L.space.min_degree() < 1:
        raise EnvelopeError("envelopes need an L∞ algebra in degrees >= 1")
    C = quillen_chains(L)
    D = quillen_lie(C)
    c = c_opt
    if c is None:
        prefer = {}
        for x in L.space.names():
            # the class of x is represented by -s⁻¹sx (conjugating by x ↦ -x
            # would flip ℓ_k by (-1)^{k+1})
            g = {((x,),): Q(-1)}
            if not D.differential(g):
                prefer.setdefault(L.space.degree(x), []).append((L.space.name(x), g))
        d = LinearMap(D.space, D.space, -1, lambda k: D.d_basis(k))
        c = homology_contraction(ChainComplex(D.space, d), top=t.max_degree + 2,
                                 prefer=prefer)
    adl, U, base, pc, S, J = _build(D, c, t, name or L.name)
    ell, I = transfer_linf(c, D, t)
    S_tab = materialize(S, t)
    e = Envelope(source=L, dgl=D, chains=C, contraction=c, adapted=adl, pbw=U,
                 base_contraction=base, big_contraction=pc, lazy=S,
                 structure=S_tab, morphism=J, transferred=ell, linf_morphism=I,
                 truncation=t, name=name or L.name)
    if verify:
        _verify(e)
        e.round_trip = _same_structure(materialize(ell, t), L, t)
    return e


def _same_structure(A, B, t):
    """Equal operations on all in-bound tuples (A, B on spaces with the same names)."""
    if sorted(A.space.names()) != sorted(B.space.names()):
        return False
    for n in range(1, t.max_arity + 1):
        for x in _input_tuples(B.space, n, t, n - 2):
            if A.on_basis(n, x) != B.on_basis(n, x):
                return False
    return True


def envelope(L, t=None, name=None):
    """envelope_of_dgl for DGLs with a finite basis, envelope_general otherwise."""
    if L.is_dgl() and getattr(L.space, "finite", False) and 1 in L.ops:
        return envelope_of_dgl(L, t=t, name=name)
    return envelope_general(L, t=t, name=name)


# ---------------------------------------------------------------- primitives

def primitives_linf(e, t=None):
    """ℓ_n = π ∘ (Σ_σ χ(σ) m_n∘σ) ∘ ι on the primitives H ⊆ ΛH."""
    t = t or e.truncation
    S = e.structure
    hs = e.transferred.space
    ops = {}
    for n in range(1, t.max_arity + 1):
        if n not in S.ops:
            continue
        anti = antisymmetrized(S.ops[n])
        table = {}
        for x in _input_tuples(hs, n, t, n - 2):
            if not _sorted_tuple(hs, x):
                continue
            v = anti.on_basis(tuple((y,) for y in x))
            out = {}
            for w, c in v.items():
                if len(w) != 1:
                    names = ",".join(hs.name(k) for k in x)
                    raise EnvelopeError(f"antisymmetrized m{n}({names}) leaves L: "
                                        f"term {S.space.name(w)}")
                out[w[0]] = c
            if out:
                table[x] = out
        if table:
            ops[n] = MultiOp(n, n - 2, hs, table=table, skew=True, check=False)
    return LInfAlgebra(hs, ops, name=e.name)


# ---------------------------------------------------------------- morphisms

def _bar_sign(degs):
    """(-1)^{Σ_l (n-l)|sx_l|}: f_n and its bar component F_n differ by this."""
    n = len(degs)
    return -1 if sum((n - l) * (d + 1) for l, d in enumerate(degs, 1)) & 1 else 1


def _lie_image(e1, e2, gen_map):
    """The DGL map ℒ𝒞(f) on letters of the adapted basis, as letter vectors."""
    adl1, adl2 = e1.adapted, e2.adapted
    lie1, lie2 = e1.dgl.lie, e2.dgl.lie
    cache = {}

    def on_letter(z):
        v = cache.get(z)
        if v is None:
            tv = lie1.to_tensor(adl1.vector(z))
            img = {}
            for word, c in tv.items():
                part = {(): c}
                for g in word:
                    part = lie2.tmul(part, gen_map(g))
                    if not part:
                        break
                vadd(img, part)
            v = adl2.coords(lie2.coords(img))
            cache[z] = v
        return v

    return on_letter


def _algebra_image(U2, on_letter):
    """Ω𝒞(f) on PBW monomials: the product of the letter images."""
    cache = {}

    def on_mono(m):
        v = cache.get(m)
        if v is None:
            v = {(): Q(1)}
            for z in m:
                lv = {(y,): c for y, c in on_letter(z).items()}
                v = U2.mul(v, lv)
                if not v:
                    break
            cache[m] = v
        return v

    return on_mono


def _projection_bar(e2):
    """Bar components P_n of the projection A∞ morphism UD_2 → U_t(L_2).

    With the tensor-trick homotopy H = Σ_j ±1^j⊗(-K)⊗(iq)^{rest} on T(sUD)
    and the perturbation δ = b_2, P_n = q ∘ pr_1 ∘ (δH)^{n-1} on words of
    length n.
    """
    pc = e2.big_contraction
    U = e2.pbw
    usp = U.space
    iq = {}

    def ip(k):
        v = iq.get(k)
        if v is None:
            v = pc.i(pc.q.on_basis(k))
            iq[k] = v
        return v

    def deg(k):
        return usp.degree(k) + 1

    def H(word_vec):
        out = {}
        for word, c in word_vec.items():
            pre = 0
            for j, k in enumerate(word):
                sgn = -1 if pre & 1 else 1
                left = {(): Q(1)}
                for a in word[:j]:
                    left = {w + (a,): cc for w, cc in left.items()}
                terms = {w + (y,): -cc * cy * sgn
                         for w, cc in left.items() for y, cy in pc.K.on_basis(k).items()}
                for a in word[j + 1:]:
                    img = ip(a)
                    terms = {w + (y,): cc * cy for w, cc in terms.items() for y, cy in img.items()}
                    if not terms:
                        break
                for w, cc in terms.items():
                    vadd(out, {w: cc * c})
                pre += deg(k)
        return out

    def delta(word_vec):
        out = {}
        for word, c in word_vec.items():
            pre = 0
            for r in range(len(word) - 1):
                a, b = word[r], word[r + 1]
                sgn = -1 if (pre + 1 + deg(a)) & 1 else 1
                for m, cm in U.mul_mono(a, b).items():
                    vadd(out, {word[:r] + (m,) + word[r + 2:]: sgn * cm * c})
                pre += deg(a)
        return out

    def P(word_vec):
        v = word_vec
        for _ in range(len(next(iter(word_vec))) - 1 if word_vec else 0):
            hv = H(v)
            if hv:
                _STATS["H"] = _STATS.get("H", 0) + 1
            v = delta(hv)
            if not v:
                return {}
        out = {}
        for (k,), c in v.items():
            vadd(out, pc.q.on_basis(k), c)
        return out

    P.H, P.delta, P.ip = H, delta, ip
    return P


def envelope_morphism(f, e1, e2, t=None):
    """U_t(f) = p_2 ∘ Ω𝒞(f) ∘ j_1 as an A∞ morphism U_t(L_1) → U_t(L_2).

    j_1 is the transferred morphism J of e1, Ω𝒞(f) the algebra map induced
    by 𝒞(f) on generators s⁻¹w ↦ s⁻¹𝒞(f)(w), p_2 the projection morphism of
    e2's contraction; all three are composed in bar form, where composition
    carries no signs.
    """
    t = t or e1.truncation
    for e in (e1, e2):
        if getattr(e, "chains", None) is None:
            raise EnvelopeError("envelope_morphism needs envelopes built by envelope_general")
    if f.source.space.names() != e1.source.space.names() or \
            f.target.space.names() != e2.source.space.names():
        raise EnvelopeError("the morphism does not match the envelopes' sources")
    C1, C2 = e1.chains, e2.chains
    F = chains_morphism(f, C1, C2)

    def gen_map(g):
        return {(w,): c for w, c in F.on_basis(g).items()}

    on_mono = _algebra_image(e2.pbw, _lie_image(e1, e2, gen_map))
    P = _projection_bar(e2)
    S1, J = e1.structure, e1.morphism
    sp1 = S1.space
    gcache = {}

    def G(keys):
        # bar component of Ω𝒞(f) ∘ J_n
        v = gcache.get(keys)
        if v is None:
            n = len(keys)
            jn = J.comps.get(n)
            raw = jn.on_basis(keys) if jn is not None else {}
            v = {}
            for m, c in raw.items():
                vadd(v, on_mono(m), c)
            if v:
                v = vscale(v, _bar_sign([sp1.degree(k) for k in keys]))
            gcache[keys] = v
        return v

    def comp_rule(keys):
        n = len(keys)
        out = {}
        for r in range(1, n + 1):
            for comp in _compositions(n, r):
                words = {(): Q(1)}
                pos = 0
                for i in comp:
                    g = G(keys[pos:pos + i])
                    pos += i
                    words = {w + (y,): c * cy for w, c in words.items() for y, cy in g.items()}
                    if not words:
                        break
                if words:
                    vadd(out, P(words))
        return vscale(out, _bar_sign([sp1.degree(k) for k in keys])) if out else out

    comps = {}
    for n in range(1, t.max_arity + 1):
        comps[n] = MultiOp(n, n - 1, sp1, e2.structure.space, rule=comp_rule)
    return AInfMorphism(S1, e2.structure, comps)
