"""Command line front end: `ainfenv <subcommand> ...`.

Exit codes: 0 pass, 1 identity or certificate failure, 2 usage or input error.
Truncation: --max-degree/--max-arity/--max-weight, else the file's truncation
block, else AINFENV_TRUNCATION="D,A,W", else 12,5,8.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import algebra_file as af
from .core import ChainComplex, LinearMap, Truncation, format_vector
from .envelope import EnvelopeError, envelope_general, envelope_of_dgl, structure_lines
from .homotopy import antisymmetrize, check_jacobi, check_stasheff, materialize
from .models import (
    CATALOG, ModelError, example, quillen_model, sullivan_model,
    whitehead_massey_certificate,
)
from .transfer import TransferError, homology_contraction, transfer_ainf, transfer_linf

ENV_VAR = "AINFENV_TRUNCATION"


class UsageError(Exception):
    pass


def default_truncation(environ=None):
    env = (environ if environ is not None else os.environ).get(ENV_VAR)
    if not env:
        return Truncation()
    try:
        d, a, w = (int(p) for p in env.split(","))
        return Truncation(d, a, w)
    except ValueError:
        raise UsageError(f"{ENV_VAR} must be 'max_degree,max_arity,max_weight', got {env!r}") from None


def _truncation(args, fileobj):
    t = fileobj.truncation if fileobj is not None and fileobj.truncation else default_truncation()
    kw = {}
    for f in ("max_degree", "max_arity", "max_weight"):
        v = getattr(args, f, None)
        if v is not None:
            kw[f] = v
    try:
        return t.replace(**kw) if kw else t
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read(path, check=True):
    try:
        if path == "-":
            return af.loads(sys.stdin.read(), check=check)
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return af.loads(text, check=check)


def _check_bounds(S, t):
    for x in S.space.names():
        if S.space.degree(x) > t.max_degree:
            raise UsageError(f"bound overflow: {x} has degree {S.space.degree(x)} "
                             f"> max_degree {t.max_degree}")


def _out(lines):
    for line in lines:
        print(line)


# ---------------------------------------------------------------- subcommands

def cmd_verify(args):
    f = _read(args.file, check=False)
    t = _truncation(args, f)
    S = f.structure
    rep = check_jacobi(S, t) if S.skew else check_stasheff(S, t)
    _out(rep.lines(S.space))
    return 0 if rep.ok else 1


def cmd_antisymmetrize(args):
    f = _read(args.file)
    if f.structure.skew:
        raise UsageError("antisymmetrize needs an ainf or dga file")
    t = _truncation(args, f)
    L = materialize(antisymmetrize(f.structure), t)
    rep = check_jacobi(L, t)
    print(f"# {rep.lines(L.space)[0]}")
    sys.stdout.write(af.dumps(L, kind="linf", name=f.name))
    return 0 if rep.ok else 1


def cmd_transfer(args):
    f = _read(args.file)
    t = _truncation(args, f)
    S = f.structure
    _check_bounds(S, t)
    d = LinearMap(S.space, S.space, -1, lambda k: S.on_basis(1, (k,)) if 1 in S.ops else {})
    c = homology_contraction(ChainComplex(S.space, d))
    if S.skew:
        small, _ = transfer_linf(c, S, t)
        small = materialize(small, t)
        rep = check_jacobi(small, t)
        kind = "linf"
    else:
        small, _ = transfer_ainf(c, S, t)
        small = materialize(small, t)
        rep = check_stasheff(small, t)
        kind = "ainf"
    print(f"# {rep.lines(small.space)[0]}")
    sys.stdout.write(af.dumps(small, kind=kind, name=f.name))
    return 0 if rep.ok else 1


def _envelope(f, t):
    S = f.structure
    if not S.skew:
        raise UsageError("envelopes are built from linf or dgl files")
    _check_bounds(S, t)
    if f.kind == "dgl":
        return envelope_of_dgl(S, t=t, name=f.name)
    return envelope_general(S, t=t, name=f.name)


def cmd_envelope(args):
    f = _read(args.file)
    t = _truncation(args, f)
    e = _envelope(f, t)
    if args.emit:
        sys.stdout.write(af.dumps(e.structure, kind="ainf", name=e.name, t=t))
        return 0
    print(f"# envelope of {e.name or 'input'}: degree <= {t.max_degree}, arity <= {t.max_arity}")
    print(f"# {e.iota_ell.lines()[0]}")
    print(f"# {e.iota_K.lines()[0]}")
    if getattr(e, "round_trip", None) is not None:
        print(f"# round trip: {'equal' if e.round_trip else 'different'}")
    rep = check_stasheff(e.structure, t)
    print(f"# {rep.lines(e.space)[0]}")
    _out(structure_lines(e.structure))
    return 0 if rep.ok and e.iota_ell.ok else 1


def cmd_sullivan(args):
    f = _read(args.file)
    t = _truncation(args, f)
    e = _envelope(f, t)
    sm = sullivan_model(e, t)
    for v in sm.generators.names():
        print(f"# {v}: degree {sm.generators.degree(v)}, dual to s{sm.dual_of[v]}")
    _out(sm.lines())
    print(f"# {sm.report.lines()[0]}")
    return 0 if sm.report.ok else 1


def cmd_quillen(args):
    f = _read(args.file)
    t = _truncation(args, f)
    e = _envelope(f, t)
    top = args.top
    q = quillen_model(e, t, top=top)
    D = q.dgl
    for n in range(D.lie.gens.min_degree(), top + 1):
        for g in D.lie.gens.in_degree(n):
            key = (g,)
            print(f"d({D.space.name(key)}) = {format_vector(D.d_basis(key), D.space)}")
    print(f"# {q.report.lines()[0]}")
    dims = ", ".join(f"{n}: {v}" for n, v in sorted(q.homology.items()))
    print(f"# homology dimensions (degree <= {top}): {{{dims}}}")
    print(f"# dimensions of L: {'match' if q.homology == q.expected else 'differ'}")
    return 0 if q.ok else 1


def cmd_example(args):
    L = example(args.name, *args.params)
    sys.stdout.write(af.dumps(L, kind="linf", name=L.name))
    return 0


def cmd_certify(args):
    f = _read(args.file)
    t = _truncation(args, f)
    e = _envelope(f, t)
    L = materialize(e.transferred, t)
    names = [s.strip() for s in args.tuple.split(",") if s.strip()]
    if len(names) < 2:
        raise UsageError("--tuple needs at least two elements")
    cert = whitehead_massey_certificate(L, e, names, t)
    _out(cert.lines(e.space))
    return 0 if cert.verdict == "equal" else 1


# ---------------------------------------------------------------- parser

def _add_trunc(p):
    p.add_argument("--max-degree", type=int, dest="max_degree")
    p.add_argument("--max-arity", type=int, dest="max_arity")
    p.add_argument("--max-weight", type=int, dest="max_weight")


def build_parser():
    ap = argparse.ArgumentParser(prog="ainfenv", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, fn, help, file=True):
        p = sub.add_parser(name, help=help)
        if file:
            p.add_argument("file", help="AlgebraFile path, or - for standard input")
        _add_trunc(p)
        p.set_defaults(fn=fn)
        return p

    add("verify", cmd_verify, "check the Stasheff / Jacobi identities")
    add("antisymmetrize", cmd_antisymmetrize, "the L∞ algebra l_n = Σ χ(σ) m_n∘σ")
    add("transfer", cmd_transfer, "transfer onto homology")
    p = add("envelope", cmd_envelope, "the enveloping A∞ algebra U_t")
    p.add_argument("--emit", action="store_true", help="write the structure as an AlgebraFile")
    add("sullivan", cmd_sullivan, "Sullivan model read off the envelope")
    p = add("quillen", cmd_quillen, "Quillen model read off the envelope")
    p.add_argument("--top", type=int, default=8, help="degree bound for the checks (default 8)")
    p = add("example", cmd_example, "print a catalog L∞ model", file=False)
    p.add_argument("name", choices=CATALOG)
    p.add_argument("params", nargs="*")
    p = add("certify-whitehead", cmd_certify, "Whitehead / Massey-Pontryagin certificate")
    p.add_argument("--tuple", required=True, help="comma separated basis names")
    return ap


def run(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.fn(args)
    except af.IdentityError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1
    except (UsageError, af.AlgebraFileError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EnvelopeError, TransferError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
