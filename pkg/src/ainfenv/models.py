"""Rational models: the example catalog, Sullivan and Quillen models read off
an envelope, and the Whitehead / Massey-Pontryagin certificate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .core import (
    GradedSpace, MultiOp, Q, Truncation, format_vector, tuples_of_degree_at_most,
    vadd, vsub,
)
from .constructions import quillen_chains, quillen_lie, wedge_sort, wedge_space
from .envelope import Envelope, primitives_linf
from .homotopy import LInfAlgebra, Report, _perm_chi, _sorted_tuple, homology_dims


class ModelError(RuntimeError):
    pass


# ---------------------------------------------------------------- catalog

CATALOG = ("odd_sphere", "even_sphere", "cpk", "em_product")


def example(name, *params):
    """L∞ models of the catalog spaces (homotopy Lie algebras of ΩX)."""
    if name == "odd_sphere":
        (n,) = _ints(name, params, 1)
        if n < 3 or n % 2 == 0:
            raise ModelError("odd_sphere needs an odd n >= 3")
        return LInfAlgebra(GradedSpace([("x", n - 1)]), {}, name=f"odd_sphere {n}")
    if name == "even_sphere":
        (n,) = _ints(name, params, 1)
        if n < 2 or n % 2:
            raise ModelError("even_sphere needs an even n >= 2")
        sp = GradedSpace([("x", n - 1), ("y", 2 * n - 2)])
        l2 = MultiOp(2, 0, sp, table={("x", "x"): {"y": Q(1)}}, skew=True)
        return LInfAlgebra(sp, {2: l2}, name=f"even_sphere {n}")
    if name == "cpk":
        (k,) = _ints(name, params, 1)
        if k < 1:
            raise ModelError("cpk needs k >= 1")
        sp = GradedSpace([("x", 1), ("y", 2 * k)])
        op = MultiOp(k + 1, k - 1, sp,
                     table={("x",) * (k + 1): {"y": Q(1, math.factorial(k + 1))}}, skew=True)
        return LInfAlgebra(sp, {k + 1: op}, name=f"cpk {k}")
    if name == "em_product":
        ns = _ints(name, params, None)
        if not ns or any(n < 2 for n in ns):
            raise ModelError("em_product needs degrees n_i >= 2")
        sp = GradedSpace([(f"x{a + 1}", n - 1) for a, n in enumerate(ns)])
        return LInfAlgebra(sp, {}, name="em_product " + " ".join(map(str, ns)))
    raise ModelError(f"unknown example {name!r} (choose from {', '.join(CATALOG)})")


def _ints(name, params, count):
    try:
        vals = [int(p) for p in params]
    except (TypeError, ValueError):
        raise ModelError(f"{name}: parameters must be integers") from None
    if count is not None and len(vals) != count:
        raise ModelError(f"{name} takes {count} integer parameter(s)")
    return vals


def _linf_of(src, t):
    if isinstance(src, Envelope):
        return primitives_linf(src, t)
    return src


# ---------------------------------------------------------------- Sullivan

@dataclass
class SullivanModel:
    """(ΛV, d): generators v dual to sx in upper degree |x| + 1."""

    generators: GradedSpace
    dual_of: dict
    d: dict
    report: Report = None

    def lines(self):
        sp = self.generators
        alg = wedge_space(sp, 0, namer=lambda w: "·".join(sp.name(k) for k in w))
        out = []
        for v in sp.names():
            out.append(f"d{v} = {format_vector(self.d.get(v, {}), alg)}")
        return out


def _pairing_weight(word):
    """⟨v_{x_1}⋯v_{x_n}, sx_1∧⋯∧sx_n⟩ for a sorted word: the product of multiplicity factorials."""
    w = 1
    for _, grp in itertools.groupby(word):
        w *= math.factorial(len(list(grp)))
    return w


def sullivan_model(src, t=None):
    """Dualize the pairing ⟨d_n v, sx_1∧..∧sx_n⟩ = ε Σ_σ χ(σ) ⟨v, s m_n(x_σ)⟩.

    ε is the parity of Σ_{j<n} (n-j)|x_j|; m_n are the envelope's operations
    (or, given an L∞ algebra, Σ_σ χ(σ) m_n∘σ is replaced by ℓ_n).
    """
    t = t or Truncation()
    if isinstance(src, Envelope):
        L = src.transferred
        ops = src.structure.ops

        def anti(n, x):
            out = {}
            if n not in ops:
                return out
            degs = [L.space.degree(k) for k in x]
            for p in itertools.permutations(range(n)):
                vadd(out, ops[n].on_basis(tuple((x[a],) for a in p)), _perm_chi(p, degs))
            # single terms may leave L, the χ-weighted sum may not
            if any(len(w) != 1 for w in out):
                raise ModelError("the envelope's antisymmetrized operation leaves L")
            return {w[0]: c for w, c in out.items()}
    else:
        L = src

        def anti(n, x):
            return L.on_basis(n, x)

    sp = L.space
    if not sp.finite:
        raise ModelError("Sullivan models need a finite type L∞ algebra")
    if sp.degrees() and sp.degrees()[0] < 1:
        raise ModelError("Sullivan models need L in degrees >= 1")
    vname = {x: f"v_{sp.name(x)}" for x in sp.names()}
    V = GradedSpace([(vname[x], sp.degree(x) + 1) for x in sp.names()])
    d = {vname[x]: {} for x in sp.names()}
    top = max(sp.degrees()) if sp.degrees() else 0
    for n in range(1, t.max_arity + 1):
        for x in tuples_of_degree_at_most(sp, n, top - n + 2):
            if not _sorted_tuple(sp, x):
                continue
            if any(x[a] == x[a + 1] and sp.degree(x[a]) % 2 == 0 for a in range(n - 1)):
                continue  # sx odd and repeated: the wedge word vanishes
            val = anti(n, x)
            if not val:
                continue
            e = sum((n - j) * sp.degree(x[j - 1]) for j in range(1, n))
            sgn = -1 if e & 1 else 1
            mono = tuple(vname[k] for k in x)
            w = _pairing_weight(x)
            for z, c in val.items():
                vadd(d[vname[z]], {mono: sgn * c / w})
    model = SullivanModel(V, {vname[x]: x for x in sp.names()}, d)
    model.report = check_sullivan(model, t)
    return model


def check_sullivan(model, t):
    """d² = 0 on generators (d extended as an odd derivation of ΛV)."""
    V = model.generators
    rep = Report("sullivan d^2")

    def d_mono(m):
        out = {}
        pre = 0
        for a, v in enumerate(m):
            sgn = -1 if pre & 1 else 1
            for w, c in model.d.get(v, {}).items():
                prod = m[:a] + w + m[a + 1:]
                s2, srt = wedge_sort(prod, V.degree, V.order_key)
                if s2:
                    vadd(out, {srt: sgn * s2 * c})
            pre += V.degree(v)
        return out

    for v in V.names():
        rep.checked += 1
        dd = {}
        for m, c in model.d.get(v, {}).items():
            vadd(dd, d_mono(m), c)
        if dd:
            rep.violations.append((1, (v,), dd))
    return rep


# ---------------------------------------------------------------- Quillen

@dataclass
class QuillenModel:
    dgl: object
    report: Report
    homology: dict
    expected: dict

    @property
    def ok(self):
        return self.report.ok and self.homology == self.expected


def quillen_model(src, t=None, top=8):
    """(𝕃(s⁻¹Λ⁺sL), ∂₁ + ∂₂) = ℒ𝒞(L) with L the primitives of the envelope."""
    t = t or Truncation()
    L = _linf_of(src, t)
    D = quillen_lie(quillen_chains(L))
    rep = Report("quillen d^2")
    for n in range(D.space.min_degree(), top + 1):
        for k in D.space.in_degree(n):
            rep.checked += 1
            dd = D.differential(D.d_basis(k))
            if dd:
                rep.violations.append((1, (k,), dd))
    dims = homology_dims(D.space, D.d_basis, top, bottom=D.space.min_degree())
    dims = {n: v for n, v in dims.items() if v}
    want = {}
    for x in L.space.names():
        n = L.space.degree(x)
        if n <= top:
            want[n] = want.get(n, 0) + 1
    return QuillenModel(D, rep, dims, want)


# ---------------------------------------------------------------- Whitehead / Massey

@dataclass
class WhiteheadCertificate:
    tuple: tuple
    epsilon: int
    lhs: dict
    rhs: dict
    residual: dict
    literal_residual: dict = field(default_factory=dict)
    hypothesis: str = ""

    @property
    def verdict(self):
        return "equal" if not self.residual else "residual"

    def lines(self, space=None):
        names = ",".join(self.tuple)
        out = [f"tuple: ({names})", f"epsilon: {self.epsilon:+d}",
               f"hypothesis: {self.hypothesis}",
               f"lhs h(eps*l{len(self.tuple)}): {format_vector(self.lhs, space)}",
               f"rhs sum chi*eps_sigma*m{len(self.tuple)}: {format_vector(self.rhs, space)}",
               f"verdict: {self.verdict}"]
        if self.residual:
            out.append(f"residual: {format_vector(self.residual, space)}")
        return out


def whitehead_massey_certificate(L, e, xs, t=None):
    """Both sides of h(ε ℓ_n(x_1..x_n)) = Σ_σ χ(σ) ε_σ m_n(y_σ(1)..y_σ(n)), y = ι x.

    ε is the parity of Σ_{j<n} (n-j)|x_j|. The chain of equalities closes
    only with ε_σ = ε for every σ, which is what the right side uses; the
    residual of the σ-dependent reading (degrees taken in the order x_σ) is
    reported as `literal_residual`.
    """
    t = t or e.truncation
    xs = tuple(xs)
    n = len(xs)
    sp = L.space
    for x in xs:
        if x not in sp:
            raise ModelError(f"unknown element {x!r}")
    S = e.structure
    # hypothesis: m_k = 0 for k <= n-2 (for n = 3 it is not needed)
    if n >= 4:
        for k in range(1, n - 1):
            if k in S.ops:
                for tup in itertools.product(xs, repeat=k):
                    if S.ops[k].on_basis(tuple((y,) for y in tup)):
                        raise ModelError(f"hypothesis fails: m{k} does not vanish on the y's")
        hyp = f"m_k = 0 for k <= {n - 2} on the y's"
    elif n == 3:
        hyp = "not needed for n = 3"
    else:
        hyp = "none for n = 2"
    degs = [sp.degree(x) for x in xs]
    eps = -1 if sum((n - j) * degs[j - 1] for j in range(1, n)) & 1 else 1
    lhs = {(w,): eps * c for w, c in L.on_basis(n, xs).items()}
    rhs = {}
    lit = {}
    op = S.ops.get(n)
    if op is not None:
        for p in itertools.permutations(range(n)):
            r = op.on_basis(tuple((xs[a],) for a in p))
            if not r:
                continue
            chi = _perm_chi(p, degs)
            ep = -1 if sum((n - j) * degs[p[j - 1]] for j in range(1, n)) & 1 else 1
            vadd(rhs, r, chi * eps)
            vadd(lit, r, chi * ep)
    return WhiteheadCertificate(xs, eps, lhs, rhs, vsub(lhs, rhs), vsub(lhs, lit), hyp)
