"""The ten acceptance criteria, one test each."""

import itertools
import math
import random

from ainfenv import cli
from ainfenv.constructions import random_dgl
from ainfenv.core import Q, Truncation
from ainfenv.envelope import (
    check_iota_ell, envelope, envelope_of_dgl, primitives_linf,
)
from ainfenv.homotopy import bar, check_bar, check_jacobi, check_stasheff, materialize
from ainfenv.models import example, quillen_model, sullivan_model, whitehead_massey_certificate
from ainfenv.transfer import homology_contraction, perturb_contraction

from conftest import random_complex, replace_entry, two_level

CATALOG_CASES = [
    ("odd_sphere", 3), ("odd_sphere", 5), ("even_sphere", 2), ("even_sphere", 4),
    ("cpk", 1), ("cpk", 2), ("cpk", 3), ("em_product", 2, 3), ("em_product", 3, 5, 2),
]

# dw = c v^{k+1} for CP^k, frozen from the brute-force pairing oracle below
SULLIVAN_GOLDEN = {1: Q(-1, 4), 2: Q(-1, 36), 3: Q(1, 576)}


def cpk_trunc(k):
    return Truncation(4 * k + 2, k + 2, 8)


_cache = {}


def cpk_envelope(k):
    if k not in _cache:
        _cache[k] = envelope(example("cpk", k), t=cpk_trunc(k))
    return _cache[k]


def primitive_part(v):
    return {w: c for w, c in v.items() if len(w) == 1}


def cpk_values_ok(S, k, t):
    """m_{k+1}(x..x) = y/(k+1)!², no other m_n(x..x), no other primitive output on primitives."""
    x = ("x",)
    want = {("y",): Q(1, math.factorial(k + 1) ** 2)}
    for n in range(1, t.max_arity + 1):
        got = S.ops[n].on_basis((x,) * n) if n in S.ops else {}
        if got != (want if n == k + 1 else {}):
            return False
    for n in S.arities():
        for keys, val in S.ops[n].items():
            if all(len(w) == 1 for w in keys) and primitive_part(val):
                if (n, keys) != (k + 1, (x,) * (k + 1)):
                    return False
    return True


CATALOG_TRUNC = Truncation(10, 5, 8)


def catalog_envelope(case):
    if case not in _cache:
        _cache[case] = envelope(example(*case), t=CATALOG_TRUNC)
    return _cache[case]


def random_dgl_envelopes(count=20, t=Truncation(10, 4, 8)):
    key = ("dgl", count)
    if key not in _cache:
        out = []
        for seed in range(count):
            rng = random.Random(seed)
            D = random_dgl(rng, ngens=rng.randint(2, 4), max_deg=6)
            out.append(envelope_of_dgl(D, t=t))
        _cache[key] = out
    return _cache[key]


# ---------------------------------------------------------------- 1

def test_criterion_01_cpk_envelope_numbers():
    for k in (1, 2, 3):
        e = cpk_envelope(k)
        assert cpk_values_ok(e.structure, k, cpk_trunc(k)), k


# ---------------------------------------------------------------- 2

def test_criterion_02_sphere_envelopes():
    for n in (3, 5, 7):
        t = Truncation(4 * n, 4, 8)
        e = envelope(example("odd_sphere", n), t=t)
        # only the commutative product x^a · x^b = x^{a+b}
        assert e.structure.arities() == [2]
        for keys, val in e.structure.ops[2].items():
            assert val == {keys[0] + keys[1]: 1}
    for n in (2, 4):
        t = Truncation(4 * n, 4, 8)
        e = envelope(example("even_sphere", n), t=t)
        assert e.structure.ops[2].on_basis((("x",), ("x",))) == {("y",): Q(1, 2)}
        for k in e.structure.arities():
            assert k == 2 or all(not primitive_part(v) for _, v in e.structure.ops[k].items())


# ---------------------------------------------------------------- 3

def test_criterion_03_iota_identity_on_random_dgls():
    t = Truncation(10, 4, 8)
    envs = random_dgl_envelopes(20, t)
    assert len(envs) >= 20
    total = 0
    for e in envs:
        assert e.source.lie.gens.dim() <= 4
        assert max(e.source.lie.gens.degrees()) <= 6
        rep = check_iota_ell(e.transferred, e.lazy, t)
        assert rep.ok, rep.lines(e.space)
        total += rep.checked
    assert total > 0


# ---------------------------------------------------------------- 4

def test_criterion_04_transferred_identities():
    cases = [(cpk_envelope(k), cpk_trunc(k)) for k in (1, 2, 3)]
    for name, n in (("odd_sphere", 3), ("even_sphere", 2), ("even_sphere", 4)):
        t = Truncation(4 * n, 4, 8)
        cases.append((envelope(example(name, n), t=t), t))
    t = Truncation(10, 4, 8)
    cases += [(e, t) for e in random_dgl_envelopes(20, t)]
    for e, t in cases:
        assert check_stasheff(e.structure, t).ok
        assert check_jacobi(materialize(e.transferred, t), t).ok
        assert check_bar(bar(e.structure, t), t).ok


# ---------------------------------------------------------------- 5

def test_criterion_05_contraction_axioms():
    t = Truncation(8, 4, 8)
    for seed in range(50):
        rng = random.Random(seed)
        C = random_complex(rng, maxdim=12)
        assert all(len(C.space.in_degree(n)) <= 12 for n in C.space.degrees())
        assert homology_contraction(C).check(t).ok
        X, tp = two_level(rng, maxdim=4)
        assert all(len(X.space.in_degree(n)) <= 12 for n in X.space.degrees())
        c0 = homology_contraction(X)
        assert c0.check(t).ok
        assert perturb_contraction(c0, tp).check(t).ok


# ---------------------------------------------------------------- 6

def test_criterion_06_primitives_round_trip():
    for case in CATALOG_CASES:
        L = example(*case)
        t = CATALOG_TRUNC
        P = primitives_linf(catalog_envelope(case), t)
        assert sorted(P.space.names()) == sorted(L.space.names())
        for x in P.space.names():
            assert P.space.degree(x) == L.space.degree(x)
        for n in range(1, t.max_arity + 1):
            for x in itertools.product(L.space.names(), repeat=n):
                if sum(L.space.degree(k) for k in x) + n - 2 > t.max_degree:
                    continue
                assert P.on_basis(n, x) == L.on_basis(n, x), (case, n, x)


# ---------------------------------------------------------------- 7

def pairing_oracle(e, k):
    """⟨dw, sx∧..∧sx⟩ / ⟨v^{k+1}, sx∧..∧sx⟩ by summing over all of S_{k+1}."""
    n = k + 1
    xdeg = 1
    m = e.structure.ops[n]
    total = Q(0)
    for p in itertools.permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if p[a] > p[b])
        sgn = (-1) ** inv
        koszul = (-1) ** (inv * xdeg * xdeg)
        total += koszul * sgn * m.on_basis((("x",),) * n).get(("y",), 0)
    eps = (-1) ** sum((n - j) * xdeg for j in range(1, n))
    return eps * total / math.factorial(n)


def test_criterion_07_sullivan_cpk():
    for k in (1, 2, 3):
        e = cpk_envelope(k)
        assert pairing_oracle(e, k) == SULLIVAN_GOLDEN[k]
        sm = sullivan_model(e, cpk_trunc(k))
        assert sorted(sm.generators.names()) == ["v_x", "v_y"]
        assert sm.generators.degree("v_x") == 2 and sm.generators.degree("v_y") == 2 * k + 1
        assert sm.d["v_x"] == {}
        assert sm.d["v_y"] == {("v_x",) * (k + 1): SULLIVAN_GOLDEN[k]}
        assert sm.report.ok


# ---------------------------------------------------------------- 8

def test_criterion_08_quillen_models():
    for case in CATALOG_CASES:
        q = quillen_model(catalog_envelope(case), CATALOG_TRUNC, top=8)
        assert q.report.ok, case
        assert q.homology == q.expected, case


# ---------------------------------------------------------------- 9

def test_criterion_09_whitehead_certificates(tmp_path, capsys):
    f = tmp_path / "cp2.yaml"
    assert cli.run(["example", "cpk", "2"]) == 0
    f.write_text(capsys.readouterr().out)
    assert cli.run(["certify-whitehead", str(f), "--tuple", "x,x,x",
                    "--max-degree", "10", "--max-arity", "4"]) == 0
    assert "verdict: equal" in capsys.readouterr().out.splitlines()
    t = Truncation(10, 4, 8)
    count = 0
    for e in random_dgl_envelopes(20, t):
        L = materialize(e.transferred, t)
        hs = L.space
        for x in itertools.product(hs.names(), repeat=2):
            if hs.degree(x[0]) + hs.degree(x[1]) > t.max_degree:
                continue
            assert whitehead_massey_certificate(L, e, x, t).verdict == "equal"
            count += 1
    assert count > 100


# ---------------------------------------------------------------- 10

def corruptions(c):
    return (-c, c + 1, 2 * c)


def test_criterion_10_negative_controls():
    # criterion 1: the input constant and the envelope's m_{k+1}(x..x)
    for k in (1, 2, 3):
        t = cpk_trunc(k)
        L = example("cpk", k)
        xs = ("x",) * (k + 1)
        (c,) = L.on_basis(k + 1, xs).values()
        for bad in corruptions(c):
            L2 = replace_entry(L, k + 1, xs, {"y": bad})
            assert not cpk_values_ok(envelope(L2, t=t).structure, k, t)
        e = cpk_envelope(k)
        (c,) = e.structure.ops[k + 1].on_basis((("x",),) * (k + 1)).values()
        for bad in corruptions(c):
            S2 = replace_entry(e.structure, k + 1, (("x",),) * (k + 1), {("y",): bad})
            assert not cpk_values_ok(S2, k, t)
            assert not check_iota_ell(e.transferred, S2, t).ok
    # criterion 2: the even sphere bracket and the envelope's m_2(x,x)
    t = Truncation(8, 4, 8)
    L = example("even_sphere", 2)
    for bad in corruptions(Q(1)):
        e2 = envelope(replace_entry(L, 2, ("x", "x"), {"y": bad}), t=t)
        assert e2.structure.ops[2].on_basis((("x",), ("x",))) != {("y",): Q(1, 2)}
    e = envelope(L, t=t)
    for bad in corruptions(Q(1, 2)):
        S2 = replace_entry(e.structure, 2, (("x",), ("x",)), {("y",): bad})
        assert not check_iota_ell(e.transferred, S2, t).ok
    # criterion 9: every constant the CP² certificate reads
    e = cpk_envelope(2)
    t = cpk_trunc(2)
    L = materialize(e.transferred, t)
    xxx = ("x", "x", "x")
    assert whitehead_massey_certificate(L, e, xxx, t).verdict == "equal"
    (c,) = L.on_basis(3, xxx).values()
    for bad in corruptions(c):
        L2 = replace_entry(L, 3, xxx, {"y": bad})
        assert whitehead_massey_certificate(L2, e, xxx, t).verdict == "residual"
    (c,) = e.structure.ops[3].on_basis((("x",),) * 3).values()
    for bad in corruptions(c):
        e.structure, keep = replace_entry(e.structure, 3, (("x",),) * 3, {("y",): bad}), e.structure
        try:
            assert whitehead_massey_certificate(L, e, xxx, t).verdict == "residual"
        finally:
            e.structure = keep
    # criterion 9, n = 2: every nonzero bracket constant of a random DGL envelope
    t = Truncation(10, 4, 8)
    flipped = 0
    for e in random_dgl_envelopes(20, t)[:5]:
        L = materialize(e.transferred, t)
        if 2 not in L.ops:
            continue
        for keys, val in L.ops[2].items():
            for z, c in val.items():
                L2 = replace_entry(L, 2, keys, {**val, z: -c})
                assert whitehead_massey_certificate(L2, e, keys, t).verdict == "residual"
                flipped += 1
    assert flipped > 0
