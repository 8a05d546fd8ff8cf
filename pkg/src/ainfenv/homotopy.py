"""A∞ and L∞ algebras, their morphisms, identity checks, bar and cobar.

Sign conventions (all validated by tests, see tests/test_homotopy.py):

* Stasheff:  Σ_{k,n} (-1)^{k+n+kn} m_{i-k+1}(1^n ⊗ m_k ⊗ 1^{i-k-n}) = 0.
* A∞ morphisms, with c_k = (-1)^{k(k-1)/2}:
      Σ (-1)^{r+st} c_s c_{r+1+t} f_{r+1+t}(1^r ⊗ m_s ⊗ 1^t)
        = Σ (-1)^{Σ_l (r-l)(i_l-1)} c_r c_{i_1}..c_{i_r} m_r(f_{i_1} ⊗ .. ⊗ f_{i_r}).
  This is the usual bar-construction identity, rewritten for the sign
  normalization of m_k used in the Stasheff identity above.
* L∞ morphisms, same c_k:
      Σ_{i+j=n+1} Σ_{σ∈S(i,n-i)} χ(σ) (-1)^{i(j-1)} c_i c_j f_j(ℓ_i(x_σ..), x_σ..)
        = Σ_k Σ_{i_1+..+i_k=n} Σ_τ χ(τ) (-1)^{Σ_l (k-l)(i_l-1)} c_k c_{i_1}..c_{i_k}
              ℓ_k(f_{i_1}(x_τ..) ⊗ .. ⊗ f_{i_k}(x_τ..)),
  τ running over unshuffles into blocks of sizes i_1..i_k whose block
  minima increase (each splitting counted once).
* Jacobi:    Σ_{i+j=n+1} Σ_{σ∈S(i,n-i)} χ(σ) (-1)^{i(j-1)} c_i c_j ℓ_j(ℓ_i(x_σ..), x_σ..) = 0.
  The factors c_k make the plain antisymmetrization ℓ_n = Σ_σ χ(σ) m_n∘σ of
  an algebra satisfying the Stasheff identity above an L∞ algebra; for
  DGLs (ℓ_1, ℓ_2 only) it is the usual Leibniz rule and Jacobi identity.
* Maps of tensors act with the Koszul rule: (f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import (
    LazySpace, LinearMap, MultiOp, Q, Truncation, format_vector, multilinear,
    multi_shuffles, shuffles, chi, tuples_of_degree_at_most, vadd, vscale,
)
from .linalg import Echelon


# ---------------------------------------------------------------- structures

class AInfAlgebra:
    """A graded space with operations m_k (dict arity -> MultiOp)."""

    skew = False

    def __init__(self, space, ops=None, name=None):
        self.space = space
        self.ops = {}
        for k, op in (ops or {}).items():
            if op is None or op.is_zero():
                continue
            if op.arity != k or op.degree != k - 2:
                raise ValueError(f"operation {k} must have arity {k} and degree {k - 2}")
            self.ops[k] = op
        self.name = name

    def arities(self):
        return sorted(self.ops)

    def op(self, k):
        return self.ops.get(k)

    def m(self, k, *vecs):
        op = self.ops.get(k)
        if op is None:
            return {}
        return op(*vecs)

    def on_basis(self, k, keys):
        op = self.ops.get(k)
        if op is None:
            return {}
        return op.on_basis(keys)

    def is_minimal(self):
        return 1 not in self.ops

    def max_arity(self):
        return max(self.ops) if self.ops else 0


class LInfAlgebra(AInfAlgebra):
    """A graded space with graded skew-symmetric brackets ℓ_k."""

    skew = True

    def __init__(self, space, ops=None, name=None):
        for k, op in (ops or {}).items():
            if op is not None and not op.skew:
                raise ValueError(f"bracket ℓ{k} must be declared skew-symmetric")
        super().__init__(space, ops, name)

    def ell(self, k, *vecs):
        return self.m(k, *vecs)

    # DGL conveniences; subclasses with a better representation override these
    def bracket(self, u, v):
        return self.m(2, u, v)

    def differential(self, u):
        return self.m(1, u)

    def is_dgl(self):
        return all(k <= 2 for k in self.ops)


def make_op(arity, space, table=None, rule=None, skew=False, target=None, degree=None):
    if degree is None:
        degree = arity - 2
    return MultiOp(arity, degree, space, target, table=table, rule=rule, skew=skew)


class AInfMorphism:
    """Components f_k (dict arity -> MultiOp of degree k-1)."""

    skew = False

    def __init__(self, source, target, comps):
        self.source = source
        self.target = target
        self.comps = {k: f for k, f in comps.items() if f is not None and not f.is_zero()}
        for k, f in self.comps.items():
            if f.arity != k or f.degree != k - 1:
                raise ValueError(f"component {k} must have arity {k} and degree {k - 1}")

    def f(self, k, *vecs):
        op = self.comps.get(k)
        return op(*vecs) if op is not None else {}

    def is_strict(self):
        return all(k == 1 for k in self.comps)


class LInfMorphism(AInfMorphism):
    skew = True


@dataclass
class Report:
    """Outcome of an identity check; violations are (arity, tuple, residual)."""

    kind: str
    violations: list = field(default_factory=list)
    checked: int = 0
    info: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def lines(self, space=None):
        if self.ok:
            return [f"{self.kind}: pass ({self.checked} tuples)"]
        out = [f"{self.kind}: FAIL ({len(self.violations)} violations)"]
        for i, tup, res in self.violations[:20]:
            names = ",".join(space.name(k) if space else str(k) for k in tup)
            out.append(f"  i={i} ({names}): residual {format_vector(res, space)}")
        return out


def _input_tuples(space, n, t, shift):
    """Basis n-tuples whose identity/output degree Σ|x| + shift stays within bounds."""
    return tuples_of_degree_at_most(space, n, t.max_degree - shift)


def _sorted_tuple(space, tup):
    ok = space.order_key
    return all(ok(tup[a]) <= ok(tup[a + 1]) for a in range(len(tup) - 1))


def _parity(space, keys):
    return sum(space.degree(k) for k in keys) & 1


# ---------------------------------------------------------------- Stasheff

def stasheff_residual(A, x):
    i = len(x)
    sp = A.space
    out = {}
    for k in A.arities():
        u = i - k + 1
        if k > i or u not in A.ops:
            continue
        outer = A.ops[u]
        inner = A.ops[k]
        for n in range(0, i - k + 1):
            sign = -1 if (k + n + k * n) & 1 else 1
            if (k & 1) and _parity(sp, x[:n]):
                sign = -sign
            mid = inner.on_basis(x[n:n + k])
            if not mid:
                continue
            pre, post = x[:n], x[n + k:]
            for c, coef in mid.items():
                r = outer.on_basis(pre + (c,) + post)
                if r:
                    vadd(out, r, sign * coef)
    return out


def check_stasheff(A, t, limit=None):
    rep = Report("stasheff")
    for i in range(1, t.max_arity + 1):
        for x in _input_tuples(A.space, i, t, i - 3):
            rep.checked += 1
            res = stasheff_residual(A, x)
            if res:
                rep.violations.append((i, x, res))
                if limit and len(rep.violations) >= limit:
                    return rep
    return rep


# ---------------------------------------------------------------- Jacobi

def jacobi_residual(L, x):
    n = len(x)
    sp = L.space
    degs = [sp.degree(k) for k in x]
    out = {}
    for i in L.arities():
        j = n + 1 - i
        if i > n or j not in L.ops:
            continue
        inner, outer = L.ops[i], L.ops[j]
        base = (-1 if (i * (j - 1)) & 1 else 1) * _c(i) * _c(j)
        for s in shuffles(i, n - i):
            y = s.apply(x)
            mid = inner.on_basis(y[:i])
            if not mid:
                continue
            sign = base * chi(s, degs)
            rest = y[i:]
            for c, coef in mid.items():
                r = outer.on_basis((c,) + rest)
                if r:
                    vadd(out, r, sign * coef)
    return out


def skew_violations(L):
    """Stored entries inconsistent with skew symmetry (table ops only)."""
    bad = []
    for k, op in L.ops.items():
        if not op.skew:
            bad.append((k, (), {}))
    return bad


def check_jacobi(L, t, limit=None):
    rep = Report("jacobi")
    for k, tup, res in skew_violations(L):
        rep.violations.append((k, tup, res))
    if rep.violations:
        return rep
    for n in range(1, t.max_arity + 1):
        for x in _input_tuples(L.space, n, t, n - 3):
            if not _sorted_tuple(L.space, x):
                continue
            rep.checked += 1
            res = jacobi_residual(L, x)
            if res:
                rep.violations.append((n, x, res))
                if limit and len(rep.violations) >= limit:
                    return rep
    return rep


# ---------------------------------------------------------------- antisymmetrization

def antisymmetrized(op):
    """Σ_σ χ(σ) op(x_σ(1), ..., x_σ(n)) as a skew rule-based MultiOp."""
    sp = op.source
    n = op.arity
    perms = list(itertools.permutations(range(n)))

    def rule(keys):
        degs = [sp.degree(k) for k in keys]
        out = {}
        for p in perms:
            sgn = _perm_chi(p, degs)
            r = op.on_basis(tuple(keys[a] for a in p))
            if r:
                vadd(out, r, sgn)
        return out

    return MultiOp(n, op.degree, sp, op.target, rule=rule, skew=True)


def _perm_chi(p, degs):
    """χ of the substitution x ↦ (x[p0], x[p1], ...), 0-based."""
    odd = 0
    for a in range(len(p)):
        for b in range(a + 1, len(p)):
            if p[a] > p[b]:
                odd ^= 1 ^ ((degs[p[a]] & 1) & (degs[p[b]] & 1))
    return -1 if odd else 1


def antisymmetrize(A):
    ops = {k: antisymmetrized(op) for k, op in A.ops.items()}
    return LInfAlgebra(A.space, ops, name=A.name)


def materialize(S, t):
    """Copy of S (algebra or morphism) with table operations on in-bound tuples."""
    if isinstance(S, AInfMorphism):
        src = S.source.space
        comps = {}
        for k, f in S.comps.items():
            if k > t.max_arity:
                continue
            table = {}
            for x in _input_tuples(src, k, t, k - 1):
                if S.skew and not _sorted_tuple(src, x):
                    continue
                v = f.on_basis(x)
                if v:
                    table[x] = v
            comps[k] = MultiOp(k, k - 1, src, f.target, table=table, skew=S.skew, check=False)
        return type(S)(S.source, S.target, comps)
    ops = {}
    for k, op in S.ops.items():
        if k > t.max_arity:
            continue
        table = {}
        for x in _input_tuples(S.space, k, t, k - 2):
            if S.skew and not _sorted_tuple(S.space, x):
                continue
            v = op.on_basis(x)
            if v:
                table[x] = v
        ops[k] = MultiOp(k, k - 2, S.space, table=table, skew=S.skew, check=False)
    return type(S)(S.space, ops, name=S.name) if type(S) in (AInfAlgebra, LInfAlgebra) \
        else (LInfAlgebra if S.skew else AInfAlgebra)(S.space, ops, name=S.name)


# ---------------------------------------------------------------- morphisms

def _compositions(n, k):
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def compositions(n, k):
    return list(_compositions(n, k))


def _c(k):
    return -1 if (k * (k - 1) // 2) & 1 else 1


def ainf_morphism_residual(f, x):
    """LHS - RHS of the morphism identity on the input tuple x (see module doc)."""
    A, B = f.source, f.target
    sp = A.space
    n = len(x)
    lhs = {}
    for s in A.arities():
        if s > n:
            continue
        for r in range(0, n - s + 1):
            tt = n - s - r
            fk = f.comps.get(r + 1 + tt)
            if fk is None:
                continue
            sign = -1 if (r + s * tt) & 1 else 1
            sign *= _c(s) * _c(r + 1 + tt)
            if (s & 1) and _parity(sp, x[:r]):
                sign = -sign
            mid = A.ops[s].on_basis(x[r:r + s])
            for c, coef in mid.items():
                v = fk.on_basis(x[:r] + (c,) + x[r + s:])
                if v:
                    vadd(lhs, v, sign * coef)
    rhs = {}
    for r in B.arities():
        if r > n:
            continue
        for comp in _compositions(n, r):
            if any(i not in f.comps for i in comp):
                continue
            s = sum((r - l) * (comp[l - 1] - 1) for l in range(1, r))
            sign = -1 if s & 1 else 1
            sign *= _c(r)
            for i in comp:
                sign *= _c(i)
            vecs, pos, odd = [], 0, 0
            for i in comp:
                if (i - 1) & 1 and _parity(sp, x[:pos]):
                    odd ^= 1
                vecs.append(f.comps[i].on_basis(x[pos:pos + i]))
                pos += i
            if odd:
                sign = -sign
            v = multilinear(B.ops[r].on_basis, vecs)
            if v:
                vadd(rhs, v, sign)
    return vadd(lhs, rhs, -1)


def linf_morphism_residual(f, x):
    L, M = f.source, f.target
    sp = L.space
    n = len(x)
    degs = [sp.degree(k) for k in x]
    lhs = {}
    for i in L.arities():
        j = n + 1 - i
        if i > n or j not in f.comps:
            continue
        base = (-1 if (i * (j - 1)) & 1 else 1) * _c(i) * _c(j)
        for s in shuffles(i, n - i):
            y = s.apply(x)
            mid = L.ops[i].on_basis(y[:i])
            if not mid:
                continue
            sign = base * chi(s, degs)
            for c, coef in mid.items():
                v = f.comps[j].on_basis((c,) + y[i:])
                if v:
                    vadd(lhs, v, sign * coef)
    rhs = {}
    for k in M.arities():
        if k > n:
            continue
        for comp in _compositions(n, k):
            if any(i not in f.comps for i in comp):
                continue
            e = sum((k - l) * (comp[l - 1] - 1) for l in range(1, k))
            base = -1 if e & 1 else 1
            base *= _c(k)
            for i in comp:
                base *= _c(i)
            for tau in ordered_block_shuffles(comp):
                y = tau.apply(x)
                sign = base * chi(tau, degs)
                vecs, pos, odd = [], 0, 0
                for i in comp:
                    if (i - 1) & 1 and _parity(sp, y[:pos]):
                        odd ^= 1
                    vecs.append(f.comps[i].on_basis(y[pos:pos + i]))
                    pos += i
                if odd:
                    sign = -sign
                v = multilinear(M.ops[k].on_basis, vecs)
                if v:
                    vadd(rhs, v, sign)
    return vadd(lhs, rhs, -1)


def ordered_block_shuffles(sizes):
    """Unshuffles increasing on each block whose block minima increase.

    Each unordered splitting of {1..n} into blocks of the given sizes (with
    blocks listed by their least element) appears exactly once.
    """
    out = []
    for p in multi_shuffles(sizes):
        im = p.images
        mins, pos = [], 0
        for s in sizes:
            mins.append(im[pos])
            pos += s
        if all(mins[a] < mins[a + 1] for a in range(len(mins) - 1)):
            out.append(p)
    return out


def check_morphism(f, t, limit=None):
    rep = Report("morphism")
    resid = linf_morphism_residual if f.skew else ainf_morphism_residual
    src = f.source.space
    for n in range(1, t.max_arity + 1):
        for x in _input_tuples(src, n, t, n - 2):
            if f.skew and not _sorted_tuple(src, x):
                continue
            rep.checked += 1
            res = resid(f, x)
            if res:
                rep.violations.append((n, x, res))
                if limit and len(rep.violations) >= limit:
                    break
    rep.info["strict"] = f.is_strict()
    rep.info["quasi_isomorphism"] = is_quasi_isomorphism(f, t)
    return rep


def homology_dims(space, d, top, bottom=None):
    """Degreewise homology dimensions of (space, d) for degrees <= top."""
    if bottom is None:
        bottom = space.min_degree()
    out = {}
    for deg in range(bottom, top + 1):
        here = space.in_degree(deg)
        rk_out = _rank_of(d, here)
        rk_in = _rank_of(d, space.in_degree(deg + 1))
        dim = len(here) - rk_out - rk_in
        if dim:
            out[deg] = dim
    return out


def _rank_of(d, keys):
    e = Echelon()
    for k in keys:
        e.add(d(k))
    return len(e)


def is_quasi_isomorphism(f, t):
    """Whether f_1 induces an isomorphism on homology in degrees <= max_degree."""
    A, B = f.source, f.target
    dA = (lambda k: A.on_basis(1, (k,)))
    dB = (lambda k: B.on_basis(1, (k,)))
    f1 = f.comps.get(1)
    lo = min(A.space.min_degree(), B.space.min_degree())
    for deg in range(lo, t.max_degree + 1):
        src = A.space.in_degree(deg)
        tgt = B.space.in_degree(deg)
        # cycles of A in this degree, modulo boundaries
        zA = _cycles(src, dA)
        bA = [dA(k) for k in A.space.in_degree(deg + 1)]
        zB = _cycles(tgt, dB)
        bB = [dB(k) for k in B.space.in_degree(deg + 1)]
        hA = _quotient_basis(zA, bA)
        hB_dim = _rank(zB + bB) - _rank(bB)
        if len(hA) != hB_dim:
            return False
        imgs = [f1(z) if f1 else {} for z in hA]
        if _rank(bB + imgs) - _rank(bB) != len(hA):
            return False
    return True


def _cycles(keys, d):
    from .linalg import kernel_and_image
    _, ker = kernel_and_image(list(keys), d)
    return ker


def _rank(vecs):
    e = Echelon()
    for v in vecs:
        e.add(v)
    return len(e)


def _quotient_basis(vecs, sub):
    e = Echelon()
    for v in sub:
        e.add(v)
    out = []
    for v in vecs:
        if e.add(v) is not None:
            out.append(v)
    return out


def identity_morphism(A):
    sp = A.space
    one = MultiOp(1, 0, sp, rule=lambda k: {k[0]: Q(1)}, skew=A.skew)
    cls = LInfMorphism if A.skew else AInfMorphism
    return cls(A, A, {1: one})


# ---------------------------------------------------------------- coalgebras

class DGCoalgebra:
    """Coaugmented conilpotent dg coalgebra on a degreewise finite basis.

    `space` holds the reduced part C̄ (the counit/unit line is implicit),
    `delta` is the codifferential on C̄ (a LinearMap of degree -1) and
    `coproduct(key)` returns the reduced comultiplication as a dict
    {(left key, right key): coef}.
    """

    def __init__(self, space, delta, coproduct, cocommutative=False, name=None):
        self.space = space
        self.delta = delta
        self._cop = coproduct
        self._cop_cache = {}
        self.cocommutative = cocommutative
        self.conilpotent = True
        self.name = name

    def coproduct(self, key):
        v = self._cop_cache.get(key)
        if v is None:
            v = self._cop(key)
            self._cop_cache[key] = v
        return v

    def coproduct_vec(self, vec):
        out = {}
        for k, c in vec.items():
            vadd(out, self.coproduct(k), c)
        return out


def _keys_upto(space, top):
    if space.finite:
        return [k for d in space.degrees() if d <= top for k in space.in_degree(d)]
    return [k for d in range(space.min_degree(), top + 1) for k in space.in_degree(d)]


def check_coalgebra(C, t):
    """δ² = 0, coassociativity, coderivation rule and (if flagged) cocommutativity."""
    rep = Report("dg-coalgebra")
    sp = C.space
    for k in _keys_upto(sp, t.max_degree):
        rep.checked += 1
        dd = C.delta(C.delta.on_basis(k))
        if dd:
            rep.violations.append(("d^2", (k,), dd))
        cop = C.coproduct(k)
        # (Δ̄⊗1)Δ̄ = (1⊗Δ̄)Δ̄ on triples
        left, right = {}, {}
        for (a, b), c in cop.items():
            for (a1, a2), c1 in C.coproduct(a).items():
                vadd(left, {(a1, a2, b): c * c1})
            for (b1, b2), c2 in C.coproduct(b).items():
                vadd(right, {(a, b1, b2): c * c2})
        diff = vadd(left, right, -1)
        if diff:
            rep.violations.append(("coassociativity", (k,), diff))
        # Δ̄δ = (δ⊗1 + 1⊗δ)Δ̄  (primitive pieces drop out in the reduced form)
        lhs = C.coproduct_vec(C.delta.on_basis(k))
        rhs = {}
        for (a, b), c in cop.items():
            for a2, ca in C.delta.on_basis(a).items():
                vadd(rhs, {(a2, b): c * ca})
            sgn = -1 if sp.degree(a) & 1 else 1
            for b2, cb in C.delta.on_basis(b).items():
                vadd(rhs, {(a, b2): sgn * c * cb})
        # terms of δ landing on a primitive-splitting part: δ(k) may contain
        # the empty word contribution, which is not represented in C̄
        diff = vadd(lhs, rhs, -1)
        if diff:
            rep.violations.append(("coderivation", (k,), diff))
        if C.cocommutative:
            tw = {}
            for (a, b), c in cop.items():
                sgn = -1 if (sp.degree(a) & sp.degree(b)) & 1 else 1
                vadd(tw, {(b, a): sgn * c})
            diff = vadd(tw, cop, -1)
            if diff:
                rep.violations.append(("cocommutativity", (k,), diff))
    return rep


# ---------------------------------------------------------------- words

def word_space(letters, weight_cap=None, namer=None, sep="|"):
    """Tensor words on a graded alphabet, as a LazySpace.

    Letters of degree < 1 are only allowed together with a weight cap.
    """
    lo = letters.min_degree()
    if lo < 1 and weight_cap is None:
        raise ValueError("unbounded word growth: letters of degree < 1 need a weight cap")
    if lo < 1 and not letters.finite:
        raise ValueError("letters of degree < 1 must form a finite alphabet")

    def deg(w):
        return sum(letters.degree(a) for a in w)

    def letter_degrees(top):
        if letters.finite:
            return [e for e in letters.degrees() if lo < 1 or e <= top]
        return [e for e in range(lo, top + 1) if letters.in_degree(e)]

    def enum(d):
        out = []
        degs = letter_degrees(d)

        def rec(left, acc):
            if acc and left == 0:
                out.append(tuple(acc))
            if weight_cap is not None and len(acc) >= weight_cap:
                return
            for e in degs:
                if lo >= 1 and e > left:
                    break
                for a in letters.in_degree(e):
                    acc.append(a)
                    rec(left - e, acc)
                    acc.pop()

        rec(d, [])
        out.sort(key=lambda w: [letters.order_key(a) for a in w])
        return out

    if namer is None:
        def namer(w):
            return "[" + sep.join(letters.name(a) for a in w) + "]"
    mindeg = lo if lo >= 1 else lo * weight_cap
    return LazySpace(enum, deg, namer, min_deg=mindeg)


# ---------------------------------------------------------------- bar construction

# weight of |sx| in the décalage part of the bar sign
BAR_SHIFTED_DECALAGE = True


def bar(A, t):
    """B A = (T(sA), δ): words of A-basis keys standing for sx_1|...|sx_p."""
    sp = A.space
    if sp.min_degree() < 0 and t.max_weight is None:
        raise ValueError("unbounded word growth")
    letters = _Shifted(sp, 1)
    W = word_space(letters, weight_cap=t.max_weight if sp.min_degree() < 0 else None,
                   namer=lambda w: "[" + "|".join("s" + sp.name(a) for a in w) + "]")

    def delta(w):
        p = len(w)
        sdeg = [sp.degree(a) + 1 for a in w]
        out = {}
        for a in A.arities():
            op = A.ops[a]
            for i in range(0, p - a + 1):
                e = 1 + sum(sdeg[:i])
                for l in range(1, a + 1):
                    wgt = sdeg[i + l - 1] if BAR_SHIFTED_DECALAGE else sdeg[i + l - 1] - 1
                    e += (a - l) * wgt
                sign = -1 if e & 1 else 1
                r = op.on_basis(w[i:i + a])
                pre, post = w[:i], w[i + a:]
                for c, coef in r.items():
                    vadd(out, {pre + (c,) + post: sign * coef})
        return out

    def cop(w):
        return {(w[:c], w[c:]): Q(1) for c in range(1, len(w))}

    C = DGCoalgebra(W, LinearMap(W, W, -1, delta), cop, cocommutative=False,
                    name=f"B({A.name})" if A.name else None)
    C.source_algebra = A
    return C


class _Shifted:
    """Suspension (shift>0) or desuspension of a space, same keys."""

    def __init__(self, space, shift):
        self.base = space
        self.shift = shift
        self.finite = space.finite

    def degree(self, k):
        return self.base.degree(k) + self.shift

    def in_degree(self, d):
        return self.base.in_degree(d - self.shift)

    def degrees(self):
        return [d + self.shift for d in self.base.degrees()]

    def min_degree(self):
        return self.base.min_degree() + self.shift

    def order_key(self, k):
        return self.base.order_key(k)

    def name(self, k):
        return self.base.name(k)

    def __contains__(self, k):
        return k in self.base


def check_bar(C, t, limit=None):
    """δ² = 0 on B A for words of degree <= max_degree and length <= max_weight."""
    rep = Report("bar d^2")
    sp = C.space
    for d in range(sp.min_degree(), t.max_degree + 1):
        for w in sp.in_degree(d):
            if len(w) > t.max_weight:
                continue
            rep.checked += 1
            dd = C.delta(C.delta.on_basis(w))
            if dd:
                rep.violations.append((len(w), w, dd))
                if limit and len(rep.violations) >= limit:
                    return rep
    return rep


# ---------------------------------------------------------------- cobar construction

def cobar(C, t=None):
    """Ω C = (T(s⁻¹C̄), d₁ + d₂) as an A∞ algebra with m₁ = d, m₂ = concatenation."""
    cs = C.space
    if cs.min_degree() < 2:
        raise ValueError("cobar needs the reduced coalgebra concentrated in degrees >= 2")
    gens = _Shifted(cs, -1)
    W = word_space(gens, namer=lambda w: " ".join("s⁻¹" + cs.name(a) for a in w) or "1")

    def d_gen(g):
        out = {}
        for c, coef in C.delta.on_basis(g).items():
            vadd(out, {(c,): -coef})
        for (a, b), coef in C.coproduct(g).items():
            sgn = -1 if cs.degree(a) & 1 else 1
            vadd(out, {(a, b): sgn * coef})
        return out

    dg = {}

    def d_word(w):
        out = {}
        pre_deg = 0
        for a, g in enumerate(w):
            if g not in dg:
                dg[g] = d_gen(g)
            sign = -1 if pre_deg & 1 else 1
            for word, coef in dg[g].items():
                vadd(out, {w[:a] + word + w[a + 1:]: sign * coef})
            pre_deg += cs.degree(g) - 1
        return out

    m1 = MultiOp(1, -1, W, rule=lambda ks: d_word(ks[0]))
    m2 = MultiOp(2, 0, W, rule=lambda ks: {ks[0] + ks[1]: Q(1)})
    A = AInfAlgebra(W, {1: m1, 2: m2}, name=f"Ω({C.name})" if C.name else None)
    A.generators = gens
    A.coalgebra = C
    return A


def check_dga_differential(A, t):
    """d² = 0 on all words of degree <= max_degree of a cobar/tensor DGA."""
    rep = Report("d^2")
    sp = A.space
    for d in range(sp.min_degree(), t.max_degree + 1):
        for w in sp.in_degree(d):
            rep.checked += 1
            dd = A.m(1, A.on_basis(1, (w,)))
            if dd:
                rep.violations.append((1, (w,), dd))
    return rep
