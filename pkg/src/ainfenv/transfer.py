"""Contractions, homological perturbation and homotopy transfer.

A contraction (i, q, K) of a complex M onto N satisfies

    q i = 1,    d K + K d = i q - 1,    K K = K i = q K = 0.

Transfer recursions (A∞ side, contraction written (j, p, G)):

    Gλ_1 = j,
    λ_n  = Σ_k Σ_{i_1+..+i_k=n} (-1)^{α(i)} μ_k(Gλ_{i_1} ⊗ .. ⊗ Gλ_{i_k}),
    α(i) = Σ_{j<k} i_j (i_k - 1),
    m_n  = p λ_n,  J_n = G λ_n  (n >= 2),  J_1 = j,

with Gλ_i of degree i-1 acting on tensors by the Koszul rule. The L∞ side
is the same with the blocks of inputs running over unshuffles; each
splitting into blocks is taken once (blocks ordered by their least input),
weighted by χ of the unshuffle.
"""

from __future__ import annotations

from .core import (
    ChainComplex, GradedSpace, LinearMap, MultiOp, Q, chi, format_vector,
    multilinear, vadd, vscale,
)
from .homotopy import (
    AInfAlgebra, AInfMorphism, LInfAlgebra, LInfMorphism, Report,
    compositions, ordered_block_shuffles,
)
from .linalg import Echelon, kernel_and_image


class TransferError(RuntimeError):
    pass


# ---------------------------------------------------------------- contractions

class Contraction:
    """Deformation retract data (big, small, i, q, K)."""

    def __init__(self, big, small, i, q, K, name=None):
        self.big = big
        self.small = small
        self.i = i
        self.q = q
        self.K = K
        self.name = name

    # the A∞ names
    @property
    def j(self):
        return self.i

    @property
    def p(self):
        return self.q

    @property
    def G(self):
        return self.K

    def check(self, t, degrees=None):
        """Verify all contraction identities on basis elements of degree <= max_degree."""
        rep = Report("contraction")
        d, dn = self.big.d, self.small.d
        bsp, ssp = self.big.space, self.small.space
        if degrees is None:
            degrees = _degrees_upto(bsp, t.max_degree)
        sdegs = _degrees_upto(ssp, t.max_degree)
        for deg in sdegs:
            for h in ssp.in_degree(deg):
                rep.checked += 1
                v = vadd(dict(self.q(self.i.on_basis(h))), {h: 1}, -1)
                if v:
                    rep.violations.append(("qi=1", (h,), v))
                v = self.K(self.i.on_basis(h))
                if v:
                    rep.violations.append(("Ki=0", (h,), v))
                v = vadd(dict(d(self.i.on_basis(h))), self.i(dn.on_basis(h)), -1)
                if v:
                    rep.violations.append(("di=id", (h,), v))
        for deg in degrees:
            for x in bsp.in_degree(deg):
                rep.checked += 1
                e = {x: Q(1)}
                Kx = self.K.on_basis(x)
                lhs = vadd(d(Kx), self.K(d.on_basis(x)))
                rhs = vadd(self.i(self.q.on_basis(x)), e, -1)
                v = vadd(lhs, rhs, -1)
                if v:
                    rep.violations.append(("dK+Kd=iq-1", (x,), v))
                v = self.K(Kx)
                if v:
                    rep.violations.append(("KK=0", (x,), v))
                v = self.q(Kx)
                if v:
                    rep.violations.append(("qK=0", (x,), v))
                v = vadd(dict(self.q(d.on_basis(x))), dn(self.q.on_basis(x)), -1)
                if v:
                    rep.violations.append(("qd=dq", (x,), v))
        return rep


def _degrees_upto(space, top):
    if space.finite:
        return [d for d in space.degrees() if d <= top]
    return list(range(space.min_degree(), top + 1))


class Splitting:
    """big = B ⊕ dB ⊕ C, each part a dict degree -> list of vectors."""

    def __init__(self, B, dB, C):
        self.B = B
        self.dB = dB
        self.C = C


def _class_name(space, rep, pivot):
    if rep == {pivot: 1}:
        return pivot if isinstance(pivot, str) else space.name(pivot)
    return f"[{space.name(pivot)}]"


def homology_contraction(complex, t=None, top=None, keep=(), prefer=None):
    """Contraction of a degreewise finite complex onto its homology.

    Degree by degree: basis elements whose differentials are independent of
    those of earlier elements (global order) span B; the others give cycles
    z = e - Σ c b. Boundaries of B, and the cycles not in their span
    (first pivot wins), complete the adapted basis B ⊕ dB ⊕ H.

    Keys of B listed in `keep` stay in the small complex together with their
    boundaries (named "d(<name>)"), which gives contractions onto complexes
    that are not minimal. `prefer` maps a degree to a list of (name, cycle)
    used first as homology representatives.
    """
    prefer = prefer or {}
    keep = set(keep)
    sp = complex.space
    d = complex.d
    if sp.finite:
        degs = sp.degrees()
    else:
        if top is None:
            top = (t.max_degree if t else 12) + 1
        degs = [e for e in range(sp.min_degree(), top + 1) if sp.in_degree(e)]
    order = sp.order_key
    piv, ker = {}, {}
    for n in degs:
        piv[n], ker[n] = kernel_and_image(list(sp.in_degree(n)), d.on_basis, order)
    if not sp.finite and top + 1 not in piv:
        # boundaries into the top degree
        piv[top + 1], _ = kernel_and_image(list(sp.in_degree(top + 1)), d.on_basis, order)
    reps = {}
    hbasis = []
    adapted = {}
    rep_seen = set()
    kept_reps = {}

    def kname(b):
        return b if isinstance(b, str) else sp.name(b)

    dname = {b: f"d({kname(b)})" for n in degs for b in piv[n] if b in keep}
    small_d = {kname(b): {dname[b]: Q(1)} for b in dname}
    for n in degs:
        bnd = [d.on_basis(b) for b in piv.get(n + 1, [])]
        e = Echelon(order)
        for v in bnd:
            e.add(v)
        reps[n] = []
        for name, z in prefer.get(n, []):
            if d(z):
                raise TransferError(f"preferred representative {name} is not a cycle")
            if e.add(z) is not None:
                reps[n].append((name, dict(z)))
                hbasis.append((name, n))
        for z in ker[n]:
            pivot = e.add(z)
            if pivot is not None:
                # echelon pivots are distinct, so the names are too
                name = _class_name(sp, z, pivot)
                reps[n].append((name, z))
                hbasis.append((name, n))
        tagged = [("H", kname(b), {b: Q(1)}) if b in keep else ("B", b, {b: Q(1)})
                  for b in piv[n]]
        tagged += [("H", dname[b], v) if b in keep else ("dB", b, v)
                   for b, v in zip(piv.get(n + 1, []), bnd)]
        tagged += [("H", name, z) for name, z in reps[n]]
        for kind, name, v in tagged:
            if kind == "H" and name not in rep_seen:
                rep_seen.add(name)
                if (name, n) not in hbasis:
                    hbasis.append((name, n))
                kept_reps[name] = v
        ech = Echelon(order, track=True)
        for _, _, v in tagged:
            if ech.add(v) is None:
                raise TransferError(f"adapted basis is singular in degree {n}")
        if len(ech) != len(sp.in_degree(n)):
            raise TransferError(f"adapted basis has wrong size in degree {n}")
        adapted[n] = (tagged, ech)

    if keep - set(dname):
        raise TransferError(f"cannot keep non-B elements {sorted(keep - set(dname))}")
    small_sp = GradedSpace(hbasis)
    rep_of = dict(kept_reps)

    def split(x):
        n = sp.degree(x)
        tagged, ech = adapted[n]
        return [(tagged[idx], c) for idx, c in ech.express({x: Q(1)}).items()]

    def K_rule(x):
        out = {}
        if sp.degree(x) not in adapted:
            return out
        for (kind, b, _), c in split(x):
            if kind == "dB":
                vadd(out, {b: -c})
        return out

    def q_rule(x):
        out = {}
        if sp.degree(x) not in adapted:
            return out
        for (kind, name, _), c in split(x):
            if kind == "H":
                vadd(out, {name: c})
        return out

    i = LinearMap(small_sp, sp, 0, lambda h: dict(rep_of[h]))
    q = LinearMap(sp, small_sp, 0, q_rule)
    K = LinearMap(sp, sp, 1, K_rule)
    if small_d:
        small = ChainComplex(small_sp, LinearMap(small_sp, small_sp, -1,
                                                 lambda h: dict(small_d.get(h, {}))))
    else:
        small = ChainComplex(small_sp)
    c = Contraction(complex, small, i, q, K, name="homology")
    c.splitting_data = (piv, reps)
    c.adapted = adapted
    c.top = None if sp.finite else top
    return c


def splitting_from_contraction(c, top=None):
    """B = im(K d), dB = im(d K), C = im(i q), checked to be a direct sum."""
    sp = c.big.space
    d = c.big.d
    if sp.finite:
        degs = sp.degrees()
    else:
        degs = _degrees_upto(sp, top)
    B, dB, C = {}, {}, {}
    for n in degs:
        keys = sp.in_degree(n)
        parts = []
        for store, f in ((B, lambda x: c.K(d.on_basis(x))),
                         (dB, lambda x: d(c.K.on_basis(x))),
                         (C, lambda x: c.i(c.q.on_basis(x)))):
            e = Echelon(sp.order_key)
            vecs = []
            for x in keys:
                v = f(x)
                if e.add(v) is not None:
                    vecs.append(v)
            store[n] = vecs
            parts.extend(vecs)
        e = Echelon(sp.order_key)
        for v in parts:
            if e.add(v) is None:
                raise TransferError(f"B + dB + C is not direct in degree {n}")
        if len(e) != len(keys):
            raise TransferError(f"B + dB + C does not span degree {n}")
        for b in B[n]:
            if d(b) == {}:
                raise TransferError("d is not injective on B")
    return Splitting(B, dB, C)


def perturb_contraction(c, tpert, t=None, limit=64):
    """Basic perturbation lemma for a perturbation tpert of the big differential.

    A = Σ_m (t K)^m t;  i' = i + K A i,  q' = q + q A K,  K' = K + K A K,
    small differential d' = d_N + q A i. tpert K must be locally nilpotent.
    """
    K = c.K

    def A(v):
        out = {}
        cur = tpert(v)
        steps = 0
        while cur:
            vadd(out, cur)
            steps += 1
            if steps > limit:
                raise TransferError("perturbation is not nilpotent within bounds")
            cur = tpert(K(cur))
        return out

    big = ChainComplex(c.big.space, c.big.d + tpert)
    i2 = LinearMap(c.small.space, c.big.space, 0,
                   lambda h: vadd(dict(c.i.on_basis(h)), K(A(c.i.on_basis(h)))))
    q2 = LinearMap(c.big.space, c.small.space, 0,
                   lambda x: vadd(dict(c.q.on_basis(x)), c.q(A(K.on_basis(x)))))
    K2 = LinearMap(c.big.space, c.big.space, 1,
                   lambda x: vadd(dict(K.on_basis(x)), K(A(K.on_basis(x)))))
    dn = LinearMap(c.small.space, c.small.space, -1,
                   lambda h: vadd(dict(c.small.d.on_basis(h)), c.q(A(c.i.on_basis(h)))))
    small = ChainComplex(c.small.space, dn)
    return Contraction(big, small, i2, q2, K2, name="perturbed")


# ---------------------------------------------------------------- transfer

def _koszul_blocks(space, x, sizes):
    """Sign of applying maps of degree (size-1) blockwise to x (Koszul rule)."""
    odd = 0
    pos = 0
    pre = 0
    for s in sizes:
        if (s - 1) & 1 and pre & 1:
            odd ^= 1
        for k in x[pos:pos + s]:
            pre += space.degree(k)
        pos += s
    return -1 if odd else 1


def _alpha(comp):
    last = comp[-1] - 1
    return (sum(comp[:-1]) * last) & 1


def _check_complex(c, A):
    if c.big.space is not A.space and getattr(c.big.space, "finite", False) \
            and getattr(A.space, "finite", False) and c.big.space != A.space:
        raise TransferError("contraction and algebra live on different spaces")


def transfer_ainf(c, A, t=None):
    """Transferred A∞ structure on c.small and the morphism J (J_1 = j)."""
    _check_complex(c, A)
    ssp = c.small.space
    j, p, G = c.i, c.q, c.K
    higher = [k for k in A.arities() if k >= 2]
    lam_cache = {}
    glam_cache = {}

    def Glam(x):
        v = glam_cache.get(x)
        if v is None:
            if len(x) == 1:
                v = dict(j.on_basis(x[0]))
            else:
                v = G(lam(x))
            glam_cache[x] = v
        return v

    def lam(x):
        v = lam_cache.get(x)
        if v is not None:
            return v
        n = len(x)
        out = {}
        for k in higher:
            if k > n:
                break
            mu = A.ops[k]
            for comp in compositions(n, k):
                sign = -1 if _alpha(comp) else 1
                sign *= _koszul_blocks(ssp, x, comp)
                vecs, pos = [], 0
                for s in comp:
                    vecs.append(Glam(x[pos:pos + s]))
                    pos += s
                r = multilinear(mu.on_basis, vecs)
                if r:
                    vadd(out, r, sign)
        lam_cache[x] = out
        return out

    ops = {}
    if not c.small.d.known_zero:
        ops[1] = MultiOp(1, -1, ssp, rule=lambda ks: c.small.d.on_basis(ks[0]))
    comps = {1: MultiOp(1, 0, ssp, c.big.space, rule=lambda ks: j.on_basis(ks[0]))}
    top = t.max_arity if t else 8
    for n in range(2, top + 1):
        if not higher or n < min(higher):
            continue
        ops[n] = MultiOp(n, n - 2, ssp, rule=lambda ks: p(lam(tuple(ks))))
        comps[n] = MultiOp(n, n - 1, ssp, c.big.space, rule=lambda ks: G(lam(tuple(ks))))
    small = AInfAlgebra(ssp, ops)
    small.lam = lam
    J = AInfMorphism(small, A, comps)
    return small, J


def transfer_linf(c, L, t=None):
    """Transferred L∞ structure on c.small and the morphism I (I_1 = i)."""
    _check_complex(c, L)
    ssp = c.small.space
    i, q, K = c.i, c.q, c.K
    higher = [k for k in L.arities() if k >= 2]
    th_cache = {}
    kth_cache = {}

    def Kth(x):
        v = kth_cache.get(x)
        if v is None:
            if len(x) == 1:
                v = dict(i.on_basis(x[0]))
            else:
                v = K(theta(x))
            kth_cache[x] = v
        return v

    def theta(x):
        v = th_cache.get(x)
        if v is not None:
            return v
        n = len(x)
        degs = [ssp.degree(k) for k in x]
        out = {}
        for k in higher:
            if k > n:
                break
            ell = L.ops[k]
            for comp in compositions(n, k):
                base = -1 if _alpha(comp) else 1
                for tau in ordered_block_shuffles(comp):
                    y = tau.apply(x)
                    sign = base * chi(tau, degs) * _koszul_blocks(ssp, y, comp)
                    vecs, pos = [], 0
                    for s in comp:
                        vecs.append(Kth(y[pos:pos + s]))
                        pos += s
                    r = _ell_eval(L, k, ell, vecs)
                    if r:
                        vadd(out, r, sign)
        th_cache[x] = out
        return out

    ops = {}
    if not c.small.d.known_zero:
        ops[1] = MultiOp(1, -1, ssp, rule=lambda ks: c.small.d.on_basis(ks[0]), skew=True)
    comps = {1: MultiOp(1, 0, ssp, c.big.space, rule=lambda ks: i.on_basis(ks[0]), skew=True)}
    top = t.max_arity if t else 8
    for n in range(2, top + 1):
        if not higher or n < min(higher):
            continue
        ops[n] = MultiOp(n, n - 2, ssp, rule=lambda ks: q(theta(tuple(ks))), skew=True)
        comps[n] = MultiOp(n, n - 1, ssp, c.big.space,
                           rule=lambda ks: K(theta(tuple(ks))), skew=True)
    small = LInfAlgebra(ssp, ops)
    small.theta = theta
    I = LInfMorphism(small, L, comps)
    return small, I


def _ell_eval(L, k, ell, vecs):
    if k == 2 and hasattr(L, "bracket_vectors"):
        return L.bracket_vectors(vecs[0], vecs[1])
    return multilinear(ell.on_basis, vecs)


def contraction_summary(c, top):
    lines = []
    for n in _degrees_upto(c.small.space, top):
        for h in c.small.space.in_degree(n):
            lines.append(f"{h} ({n}) -> {format_vector(c.i.on_basis(h), c.big.space)}")
    return lines
