import random

import pytest

from ainfenv.core import ChainComplex, GradedSpace, LinearMap, MultiOp, Q, Truncation
from ainfenv.homotopy import (
    AInfAlgebra, antisymmetrize, check_jacobi, check_morphism, check_stasheff,
    materialize,
)
from ainfenv.constructions import random_dgl, tensor_dga
from ainfenv.transfer import (
    Contraction, TransferError, homology_contraction, perturb_contraction,
    splitting_from_contraction, transfer_ainf, transfer_linf,
)

from conftest import random_complex, two_level

T = Truncation(8, 4, 8)


def complex_of(basis, table):
    sp = GradedSpace(basis)
    return ChainComplex(sp, LinearMap.from_table(sp, sp, -1, table))


def test_zero_differential():
    C = complex_of([("a", 0), ("b", 1)], {})
    c = homology_contraction(C)
    assert c.small.space.names() == ["a", "b"]
    assert c.i({"a": 1}) == {"a": 1} and c.q({"b": 1}) == {"b": 1}
    assert c.K({"a": 1, "b": 1}) == {}
    s = splitting_from_contraction(c)
    assert not any(s.B.values()) and not any(s.dB.values())
    assert sum(len(v) for v in s.C.values()) == 2


def test_acyclic_pair():
    C = complex_of([("a", 1), ("b", 0)], {"a": {"b": 1}})
    c = homology_contraction(C)
    assert c.small.space.dim() == 0
    assert c.K({"b": 1}) == {"a": -1}  # dK + Kd = -1 on b
    assert c.check(T).ok
    s = splitting_from_contraction(c)
    assert s.B[1] in ([{"a": 1}], [{"a": -1}]) and s.dB[0] in ([{"b": 1}], [{"b": -1}])
    assert not s.C[0]


def test_three_dimensional_example():
    C = complex_of([("a", 1), ("b", 0), ("c", 0)], {"a": {"b": 1}})
    c = homology_contraction(C)
    assert c.small.space.names() == ["c"]
    assert c.K({"b": 1}) == {"a": -1} and c.K({"a": 1, "c": 1}) == {}
    assert c.check(T).ok
    s = splitting_from_contraction(c)
    assert s.C[0] == [{"c": 1}]


def test_random_contractions():
    for seed in range(60):
        rng = random.Random(1000 + seed)
        C = random_complex(rng)
        c = homology_contraction(C)
        assert c.check(T).ok
        splitting_from_contraction(c)


def test_homology_names_are_unique():
    # two cycles with the same earliest key
    C = complex_of([("a", 1), ("b", 1), ("c", 1), ("z", 0)], {})
    C2 = complex_of([("a", 1), ("b", 1), ("c", 2), ("d", 2)],
                    {"c": {"a": 1, "b": 1}, "d": {"a": 1, "b": 1}})
    for X in (C, C2):
        c = homology_contraction(X)
        assert c.check(T).ok
        assert len(set(c.small.space.names())) == c.small.space.dim()


def test_perturbation():
    for seed in range(40):
        rng = random.Random(2000 + seed)
        X, tp = two_level(rng, maxdim=4)
        c0 = homology_contraction(X)
        p = perturb_contraction(c0, tp)
        assert p.check(T).ok
    # tpert = 0 changes nothing
    X, _ = two_level(random.Random(7), maxdim=4)
    c0 = homology_contraction(X)
    zero = LinearMap.zero(X.space, X.space, -1)
    p = perturb_contraction(c0, zero)
    for x in X.space.names():
        assert p.K.on_basis(x) == c0.K.on_basis(x)
        assert p.q.on_basis(x) == c0.q.on_basis(x)
    for h in c0.small.space.names():
        assert p.i.on_basis(h) == c0.i.on_basis(h)
        assert p.small.d.on_basis(h) == {}


def test_perturbation_closed_form():
    # a -> b (d), c -> d (d), tpert: c -> b; two-term geometric series
    sp = GradedSpace([("a", 1), ("b", 0), ("c", 1), ("d", 0)])
    X = ChainComplex(sp, LinearMap.from_table(sp, sp, -1, {"a": {"b": 1}}))
    c0 = homology_contraction(X)
    assert sorted(c0.small.space.names()) == ["c", "d"]
    tp = LinearMap.from_table(sp, sp, -1, {"c": {"d": 1}})
    p = perturb_contraction(c0, tp)
    assert p.check(T).ok
    assert p.small.d.on_basis("c") == {"d": 1}
    tp2 = LinearMap.from_table(sp, sp, -1, {"c": {"b": 1}})
    p2 = perturb_contraction(c0, tp2)
    assert p2.check(T).ok
    # i'(c) = c + K t c = c - a
    assert p2.i.on_basis("c") == {"c": 1, "a": -1}


def test_non_nilpotent_perturbation_is_rejected():
    sp = GradedSpace([("a", 1), ("b", 0)])
    X = ChainComplex(sp, LinearMap.from_table(sp, sp, -1, {"a": {"b": 1}}))
    c0 = homology_contraction(X)
    tp = LinearMap.from_table(sp, sp, -1, {"a": {"b": -2}})
    p = perturb_contraction(c0, tp)
    with pytest.raises(TransferError):
        p.K.on_basis("b")


def cp2_like_dga():
    """T(a, b)/(weight > 4) with db = aa."""
    return tensor_dga([("a", 1), ("b", 3)], {"b": {("a", "a"): 1}}, 4)


def test_transfer_trivial_cases():
    # no higher operations: nothing transfers
    C = random_complex(random.Random(5))
    A = AInfAlgebra(C.space, {1: MultiOp(1, -1, C.space, rule=lambda k: C.d.on_basis(k[0]))})
    small, J = transfer_ainf(homology_contraction(C), A, T)
    assert all(k == 1 for k in small.ops)
    # K = 0 with i = q = id: the structure is restricted on the nose
    sp = GradedSpace([("x", 1), ("y", 2), ("z", 3), ("w", 4)])
    m2 = MultiOp(2, 0, sp, table={("x", "x"): {"y": 1}, ("x", "y"): {"z": 1}, ("y", "x"): {"z": 1}})
    m3 = MultiOp(3, 1, sp, table={("x", "x", "x"): {"w": Q(1, 3)}})
    A = AInfAlgebra(sp, {2: m2, 3: m3})
    c = homology_contraction(ChainComplex(sp))
    small, J = transfer_ainf(c, A, T)
    for n in (2, 3):
        for keys, val in A.ops[n].items():
            assert small.on_basis(n, keys) == val
    L = antisymmetrize(A)
    small_l, _ = transfer_linf(c, L, T)
    for n in (2, 3):
        for keys in [("x",) * n, ("x", "y", "x")[:n]]:
            assert small_l.on_basis(n, keys) == L.on_basis(n, keys)


def test_tensor_dga_checks_degrees():
    with pytest.raises(ValueError):
        tensor_dga([("a", 1), ("b", 2)], {"b": {("a", "a"): 1}}, 4)


def test_transferred_structures_and_morphisms():
    t = Truncation(7, 4, 8)
    A = cp2_like_dga()
    d = LinearMap(A.space, A.space, -1, lambda k: A.on_basis(1, (k,)))
    c = homology_contraction(ChainComplex(A.space, d), top=t.max_degree + 1)
    small, J = transfer_ainf(c, A, t)
    S = materialize(small, t)
    assert check_stasheff(S, t).ok
    assert check_morphism(J, t).ok
    for seed in range(6):
        D = random_dgl(random.Random(seed), ngens=3)
        c = homology_contraction(ChainComplex(D.space, LinearMap(D.space, D.space, -1,
                                                                 D.d_basis)), top=9)
        ell, I = transfer_linf(c, D, t)
        assert check_jacobi(materialize(ell, t), t).ok
        assert check_morphism(I, Truncation(6, 3, 8)).ok


def test_contraction_check_detects_errors():
    C = complex_of([("a", 1), ("b", 0)], {"a": {"b": 1}})
    c = homology_contraction(C)
    badK = LinearMap.from_table(C.space, C.space, 1, {"b": {"a": 1}})
    bad = Contraction(c.big, c.small, c.i, c.q, badK)
    tags = {v[0] for v in bad.check(T).violations}
    assert "dK+Kd=iq-1" in tags
