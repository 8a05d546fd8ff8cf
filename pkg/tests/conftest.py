"""Shared helpers: random complexes, structure corruption."""

import random

from ainfenv.core import ChainComplex, GradedSpace, LinearMap, MultiOp, Q, vadd
from ainfenv.homotopy import LInfAlgebra, AInfAlgebra
from ainfenv.linalg import kernel_and_image

COEFS = (-3, -2, -1, 1, 2, 3)


def random_complex(rng, lo=0, hi=3, maxdim=12, density=0.5):
    """A random complex with dim ≤ maxdim per degree; d_n lands in ker d_{n-1}."""
    basis = []
    for n in range(lo, hi + 1):
        basis += [(f"e{n}_{a}", n) for a in range(rng.randint(0, maxdim))]
    sp = GradedSpace(basis)
    table = {}
    for n in range(lo + 1, hi + 1):
        below = sp.in_degree(n - 1)
        _, cycles = kernel_and_image(below, lambda k: table.get(k, {}), sp.order_key)
        # the pivot keys are not cycles; the whole of below is if d_{n-1} = 0
        for x in sp.in_degree(n):
            v = {}
            if rng.random() < density:
                table[x] = v
                continue
            for z in cycles:
                if rng.random() < density:
                    vadd(v, z, rng.choice(COEFS))
            table[x] = v
    d = LinearMap.from_table(sp, sp, -1, table)
    return ChainComplex(sp, d)


def two_level(rng, **kw):
    """Level 0: a random complex E and a copy A of B shifted down by one (d_A = -d_B).
    Level 1: a random complex B. The perturbation t = ι + d0 φ - φ d0 with
    ι(b) = a and φ: B → E random.

    (d0 + t)² = 0 and t lowers the level, so tK is nilpotent for a blockwise K;
    ι makes the perturbed small differential nonzero whenever H(B) ≠ 0.
    """
    b = random_complex(rng, **kw)
    e = random_complex(rng, **kw)
    basis = [(f"a{k}", b.space.degree(k) - 1) for k in b.space.names()]
    basis += [(f"b{k}", b.space.degree(k)) for k in b.space.names()]
    basis += [(f"e{k}", e.space.degree(k)) for k in e.space.names()]
    sp = GradedSpace(basis)
    table = {}
    for k in b.space.names():
        table[f"a{k}"] = {f"a{z}": -c for z, c in b.d.on_basis(k).items()}
        table[f"b{k}"] = {f"b{z}": c for z, c in b.d.on_basis(k).items()}
    for k in e.space.names():
        table[f"e{k}"] = {f"e{z}": c for z, c in e.d.on_basis(k).items()}
    phi = {}
    for k in b.space.names():
        v = {}
        for z in e.space.in_degree(b.space.degree(k)):
            if rng.random() < 0.4:
                v[f"e{z}"] = Q(rng.choice(COEFS))
        phi[f"b{k}"] = v
    d0 = LinearMap.from_table(sp, sp, -1, table)
    P = LinearMap.from_table(sp, sp, 0, phi)

    def t_rule(x):
        out = dict(d0(P.on_basis(x)))
        vadd(out, P(d0.on_basis(x)), -1)
        if x[0] == "b":
            vadd(out, {"a" + x[1:]: Q(1)})
        return out

    return ChainComplex(sp, d0), LinearMap(sp, sp, -1, t_rule)


def replace_entry(S, n, keys, val):
    """Copy of a table structure with the arity-n entry on keys replaced by val."""
    ops = {}
    for k, op in S.ops.items():
        table = {x: dict(v) for x, v in op.items()}
        if k == n:
            table[tuple(keys)] = val
        ops[k] = MultiOp(k, k - 2, S.space, table=table, skew=S.skew, check=False)
    if n not in ops:
        ops[n] = MultiOp(n, n - 2, S.space, table={tuple(keys): val}, skew=S.skew, check=False)
    cls = LInfAlgebra if S.skew else AInfAlgebra
    return cls(S.space, ops, name=S.name)


def rngs(count, base=0):
    return [random.Random(base + s) for s in range(count)]
