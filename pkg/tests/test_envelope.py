import random

import pytest

from ainfenv import algebra_file
from ainfenv.core import GradedSpace, MultiOp, Q, Truncation, tuples_of_degree_at_most, vadd, vsub
from ainfenv.constructions import random_dgl
from ainfenv import envelope as E
from ainfenv.envelope import (
    EnvelopeError, check_iota_ell, envelope, envelope_general, envelope_morphism,
    envelope_of_dgl, primitives_linf,
)
from ainfenv.homotopy import (
    LInfAlgebra, LInfMorphism, check_morphism, check_stasheff, identity_morphism, materialize,
)
from ainfenv.models import example

T = Truncation(8, 4, 8)


def test_abelian_envelope_is_the_symmetric_algebra():
    e = envelope(example("em_product", 2, 3), t=T)
    S = e.structure
    assert S.arities() == [2]
    # x1 is odd, so its square vanishes
    assert S.ops[2].on_basis((("x1",), ("x1",))) == {}
    assert S.ops[2].on_basis((("x2",), ("x1",))) == {("x1", "x2"): 1}
    assert S.ops[2].on_basis((("x2",), ("x2",))) == {("x2", "x2"): 1}


def test_two_routes_agree_on_abelian_algebras():
    L = example("odd_sphere", 3)
    a = envelope_general(L, t=T).structure
    b = envelope_of_dgl(L, t=T).structure
    assert a.arities() == b.arities()
    for k in a.arities():
        assert dict(a.ops[k].items()) == dict(b.ops[k].items())


def test_dgl_file_envelope():
    af = algebra_file.load("docs/examples/nilpotent_dgl.yaml")
    t = Truncation(10, 4, 8)
    e = envelope_of_dgl(af.structure, t=t)
    assert e.iota_ell.ok and e.iota_K.ok
    assert check_stasheff(e.structure, t).ok
    ell = materialize(e.transferred, t)
    assert ell.on_basis(3, ("a", "a", "a")) == {"e": -6}


def test_iota_identity_and_iota_K_on_random_dgls():
    for seed in range(8):
        D = random_dgl(random.Random(100 + seed), ngens=3)
        e = envelope_of_dgl(D, t=T)
        assert e.iota_ell.ok and e.iota_ell.checked > 0
        assert e.iota_K.ok
        # a corrupted m2 on a pair of primitives violates the identity
        for keys, val in e.structure.ops[2].items():
            if all(len(w) == 1 for w in keys) and keys[0] != keys[1]:
                bad = {**val, keys[0] + keys[1]: val.get(keys[0] + keys[1], 0) + 1}
                ops = dict(e.structure.ops)
                table = {x: v for x, v in ops[2].items()}
                table[keys] = {w: c for w, c in bad.items() if c}
                ops[2] = MultiOp(2, 0, e.space, table=table, check=False)
                S2 = type(e.structure)(e.space, ops)
                assert not check_iota_ell(e.transferred, S2, T).ok
                break


def test_general_route_on_dgls():
    # seeds whose minimal model is small, with l2 and (seed 23) l3 nonzero
    t = Truncation(7, 4, 8)
    for seed in (1, 6, 19, 23):
        D = random_dgl(random.Random(seed), ngens=2)
        L = materialize(envelope_of_dgl(D, t=t).transferred, t)
        assert L.ops
        e = envelope_general(L, t=t)
        assert e.iota_ell.ok and e.round_trip


def test_primitives():
    t = Truncation(10, 4, 8)
    P = primitives_linf(envelope(example("cpk", 2), t=t), t)
    assert P.on_basis(3, ("x", "x", "x")) == {"y": Q(1, 6)}
    assert primitives_linf(envelope(example("em_product", 3, 4), t=T), T).arities() == []
    D = random_dgl(random.Random(2), ngens=2)
    e = envelope_of_dgl(D, t=T)
    P = primitives_linf(e, T)
    ell = materialize(e.transferred, T)
    for n in range(2, 5):
        for keys, val in ell.ops.get(n, MultiOp(n, n - 2, ell.space)).items():
            assert P.on_basis(n, keys) == val


def test_envelope_errors():
    sp = GradedSpace([("z", 0)])
    with pytest.raises(EnvelopeError):
        envelope_general(LInfAlgebra(sp, {}), t=T)
    with pytest.raises(EnvelopeError):
        envelope_of_dgl(example("cpk", 2), t=T)


# ---------------------------------------------------------------- morphisms

def linf_map(L1, L2, comps):
    return LInfMorphism(L1, L2, {k: MultiOp(k, k - 1, L1.space, L2.space, table=tb, skew=True)
                                 for k, tb in comps.items()})


def test_envelope_morphism_identity():
    for case in [("even_sphere", 2), ("cpk", 1), ("em_product", 2, 3)]:
        L = example(*case)
        t = Truncation(7, 4, 8)
        e = envelope(L, t=t)
        U = envelope_morphism(identity_morphism(L), e, e, t)
        assert check_morphism(U, t).ok
        for d in range(1, 8):
            for m in e.space.in_degree(d):
                assert U.comps[1].on_basis((m,)) == {m: 1}


def test_envelope_morphism_zero():
    L1, L2 = example("em_product", 2, 3), example("em_product", 3)
    t = Truncation(7, 4, 8)
    e1, e2 = envelope(L1, t=t), envelope(L2, t=t)
    U = envelope_morphism(LInfMorphism(L1, L2, {}), e1, e2, t)
    assert check_morphism(U, t).ok
    for k, f in U.comps.items():
        for keys in tuples_of_degree_at_most(e1.space, k, 5):
            assert f.on_basis(keys) == {}


def test_envelope_morphism_summand_inclusion():
    L1, L2 = example("em_product", 3), example("em_product", 3, 5)
    t = Truncation(8, 4, 8)
    e1, e2 = envelope(L1, t=t), envelope(L2, t=t)
    f = linf_map(L1, L2, {1: {("x1",): {"x1": 1}}})
    U = envelope_morphism(f, e1, e2, t)
    assert check_morphism(U, t).ok
    for m in [("x1",), ("x1", "x1"), ("x1", "x1", "x1"), ("x1",) * 4]:
        assert U.comps[1].on_basis((m,)) == {m: 1}
    # strict in effect: the higher components vanish in the truncation
    for k in (2, 3, 4):
        for keys in tuples_of_degree_at_most(e1.space, k, 8):
            assert U.comps[k].on_basis(keys) == {}


def test_envelope_morphism_non_strict():
    L = example("em_product", 2, 4)
    t = Truncation(8, 4, 8)
    e = envelope(L, t=t)
    f = linf_map(L, L, {1: {("x1",): {"x1": 2}, ("x2",): {"x2": 1}},
                        2: {("x1", "x1"): {"x2": 3}}})
    assert check_morphism(f, t).ok
    U = envelope_morphism(f, e, e, t)
    assert check_morphism(U, t).ok
    assert U.comps[2].on_basis((("x1",), ("x1",))) != {}
    # a strict map into the even sphere, and a graded scaling of it
    L1, L2 = example("em_product", 3), example("even_sphere", 2)
    e1, e2 = envelope(L1, t=t), envelope(L2, t=t)
    f = linf_map(L1, L2, {1: {("x1",): {"y": 1}}})
    assert check_morphism(envelope_morphism(f, e1, e2, t), t).ok
    f = linf_map(L2, L2, {1: {("x",): {"x": 2}, ("y",): {"y": 4}}})
    assert check_morphism(envelope_morphism(f, e2, e2, t), t).ok


def test_bar_homotopy_identity():
    # b1 H + H b1 = (ip)^{⊗2} - 1 on words of length 2, b1 = -m1
    t = Truncation(7, 4, 8)
    for case in [("even_sphere", 2), ("cpk", 2), ("em_product", 2, 3)]:
        e = envelope_general(example(*case), t=t)
        P = E._projection_bar(e)
        U = e.pbw
        usp = U.space

        def b1(wv):
            out = {}
            for w, c in wv.items():
                pre = 0
                for j, k in enumerate(w):
                    sgn = -1 if pre & 1 else 1
                    for m, cm in U.d_mono(k).items():
                        vadd(out, {w[:j] + (m,) + w[j + 1:]: -sgn * cm * c})
                    pre += usp.degree(k) + 1
            return out

        keys = [k for d in range(1, 5) for k in usp.in_degree(d)]
        for a1 in keys:
            for a2 in keys:
                w = {(a1, a2): Q(1)}
                lhs = vadd(b1(P.H(w)), P.H(b1(w)))
                ipw = {}
                for y1, c1 in P.ip(a1).items():
                    for y2, c2 in P.ip(a2).items():
                        vadd(ipw, {(y1, y2): c1 * c2})
                assert lhs == vsub(ipw, w), (case, a1, a2)
