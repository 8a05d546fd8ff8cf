"""The AlgebraFile text format: a YAML document describing a finite A∞/L∞
structure with exact rational structure constants.

    kind: linf            # linf | ainf | dgl | dga
    name: cpk 2           # optional
    basis:
    - [x, 1]
    - [y, 4]
    ops:
    - [3, [x, x, x], [[y, 1/6]]]
    truncation: {max_degree: 12, max_arity: 5, max_weight: 8}   # optional

Coefficients are written as strings "p/q" (or integers). For skew kinds
(linf, dgl) an entry may be given on any ordering of its inputs; it is
stored on the sorted tuple with the χ sign. See docs/algebra_file.md.
"""

from __future__ import annotations

from fractions import Fraction

import yaml

from .core import GradedSpace, MultiOp, Truncation, fmt_rat, sort_with_sign
from .homotopy import AInfAlgebra, LInfAlgebra, check_jacobi, check_stasheff

KINDS = ("linf", "ainf", "dgl", "dga")


class AlgebraFileError(ValueError):
    """Parse or validation error, with a position when one is known."""

    def __init__(self, msg, mark=None):
        if mark is not None:
            msg = f"line {mark.line + 1}, column {mark.column + 1}: {msg}"
        super().__init__(msg)


class IdentityError(AlgebraFileError):
    def __init__(self, report, space):
        self.report = report
        super().__init__(report.lines(space)[1] if len(report.lines(space)) > 1
                         else report.lines(space)[0])


class AlgebraFile:
    """A parsed file: the structure plus kind, name and optional truncation."""

    def __init__(self, kind, structure, truncation=None, name=None):
        self.kind = kind
        self.structure = structure
        self.truncation = truncation
        self.name = name


# ---------------------------------------------------------------- loading

def _scalar(node, what):
    if not isinstance(node, yaml.ScalarNode):
        raise AlgebraFileError(f"{what} must be a scalar", node.start_mark)
    return node.value


def _seq(node, what):
    if not isinstance(node, yaml.SequenceNode):
        raise AlgebraFileError(f"{what} must be a list", node.start_mark)
    return node.value


def _int(node, what):
    v = _scalar(node, what)
    try:
        return int(v)
    except ValueError:
        raise AlgebraFileError(f"{what} must be an integer, got {v!r}", node.start_mark) from None


def _rational(node):
    v = _scalar(node, "coefficient")
    try:
        return Fraction(v.strip())
    except (ValueError, ZeroDivisionError):
        raise AlgebraFileError(f"bad rational {v!r} (write p/q)", node.start_mark) from None


def loads(text, check=True, t=None):
    """Parse an AlgebraFile; with check=True the defining identities are verified."""
    try:
        root = yaml.compose(text)
    except yaml.MarkedYAMLError as exc:
        raise AlgebraFileError(exc.problem or "syntax error", exc.problem_mark) from None
    if root is None:
        raise AlgebraFileError("empty document")
    if not isinstance(root, yaml.MappingNode):
        raise AlgebraFileError("the document must be a mapping", root.start_mark)
    fields = {}
    for knode, vnode in root.value:
        key = _scalar(knode, "field name")
        if key in fields:
            raise AlgebraFileError(f"duplicate field {key!r}", knode.start_mark)
        if key not in ("kind", "name", "basis", "ops", "truncation"):
            raise AlgebraFileError(f"unknown field {key!r}", knode.start_mark)
        fields[key] = vnode
    for req in ("kind", "basis"):
        if req not in fields:
            raise AlgebraFileError(f"missing field {req!r}", root.start_mark)
    kind = _scalar(fields["kind"], "kind")
    if kind not in KINDS:
        raise AlgebraFileError(f"kind must be one of {', '.join(KINDS)}", fields["kind"].start_mark)
    name = _scalar(fields["name"], "name") if "name" in fields else None

    basis = []
    seen = {}
    for item in _seq(fields["basis"], "basis"):
        pair = _seq(item, "basis entry")
        if len(pair) != 2:
            raise AlgebraFileError("basis entries are [name, degree]", item.start_mark)
        nm = _scalar(pair[0], "basis name")
        if nm in seen:
            raise AlgebraFileError(f"duplicate basis name {nm!r}", pair[0].start_mark)
        seen[nm] = _int(pair[1], "degree")
        basis.append((nm, seen[nm]))
    space = GradedSpace(basis)

    trunc = None
    if "truncation" in fields:
        tn = fields["truncation"]
        if not isinstance(tn, yaml.MappingNode):
            raise AlgebraFileError("truncation must be a mapping", tn.start_mark)
        kw = {}
        for knode, vnode in tn.value:
            k = _scalar(knode, "truncation field")
            if k not in ("max_degree", "max_arity", "max_weight"):
                raise AlgebraFileError(f"unknown truncation field {k!r}", knode.start_mark)
            kw[k] = _int(vnode, k)
        try:
            trunc = Truncation(**kw)
        except ValueError as exc:
            raise AlgebraFileError(str(exc), tn.start_mark) from None

    skew = kind in ("linf", "dgl")
    tables = {}
    for item in _seq(fields["ops"], "ops") if "ops" in fields else []:
        parts = _seq(item, "op entry")
        if len(parts) != 3:
            raise AlgebraFileError("op entries are [arity, [inputs], [[output, coefficient], ...]]",
                                   item.start_mark)
        k = _int(parts[0], "arity")
        if k < 1:
            raise AlgebraFileError("arity must be >= 1", parts[0].start_mark)
        if kind in ("dgl", "dga") and k > 2:
            raise AlgebraFileError(f"a {kind} has operations of arity 1 and 2 only",
                                   parts[0].start_mark)
        ins = []
        for nnode in _seq(parts[1], "inputs"):
            nm = _scalar(nnode, "input")
            if nm not in seen:
                raise AlgebraFileError(f"unknown basis element {nm!r}", nnode.start_mark)
            ins.append(nm)
        if len(ins) != k:
            raise AlgebraFileError(f"{len(ins)} inputs for arity {k}", parts[1].start_mark)
        out = {}
        for pnode in _seq(parts[2], "outputs"):
            pair = _seq(pnode, "output term")
            if len(pair) != 2:
                raise AlgebraFileError("output terms are [name, coefficient]", pnode.start_mark)
            nm = _scalar(pair[0], "output")
            if nm not in seen:
                raise AlgebraFileError(f"unknown basis element {nm!r}", pair[0].start_mark)
            want = sum(seen[a] for a in ins) + k - 2
            if seen[nm] != want:
                raise AlgebraFileError(f"output {nm!r} has degree {seen[nm]}, "
                                       f"m{k} of these inputs has degree {want}", pair[0].start_mark)
            c = _rational(pair[1])
            out[nm] = out.get(nm, 0) + c
        key = tuple(ins)
        if key in tables.setdefault(k, {}):
            raise AlgebraFileError(f"duplicate entry for {k}-ary op on {ins}", item.start_mark)
        tables[k][key] = {a: c for a, c in out.items() if c}

    ops = {}
    for k, table in tables.items():
        try:
            op = MultiOp(k, k - 2, space, table=_skew_table(table, space) if skew else table,
                         skew=skew)
        except ValueError as exc:
            raise AlgebraFileError(str(exc)) from None
        if not op.is_zero():
            ops[k] = op
    cls = LInfAlgebra if skew else AInfAlgebra
    structure = cls(space, ops, name=name)
    af = AlgebraFile(kind, structure, trunc, name)
    if check:
        verify(af, t)
    return af


def _skew_table(table, space):
    """Move every entry to its sorted tuple; conflicting duplicates are an error."""
    out = {}
    for keys, val in table.items():
        sgn, srt = sort_with_sign(keys, [space.degree(k) for k in keys],
                                  space.order_key, skew=True)
        new = {a: sgn * c for a, c in val.items()}
        if srt in out and out[srt] != new:
            raise AlgebraFileError(f"entries on {list(keys)} and its reordering disagree")
        out[srt] = new
    return out


def verify(af, t=None):
    """The identity check of the file's kind; raises IdentityError on the first violation."""
    t = t or af.truncation or Truncation()
    S = af.structure
    rep = check_jacobi(S, t, limit=1) if S.skew else check_stasheff(S, t, limit=1)
    if not rep.ok:
        raise IdentityError(rep, S.space)
    return rep


def load(path_or_file, check=True, t=None):
    if hasattr(path_or_file, "read"):
        return loads(path_or_file.read(), check, t)
    with open(path_or_file, encoding="utf-8") as fh:
        return loads(fh.read(), check, t)


# ---------------------------------------------------------------- emitting

def _basis_keys(space, t):
    if getattr(space, "finite", False):
        return space.names()
    top = t.max_degree if t else 12
    return [k for d in range(space.min_degree(), top + 1) for k in space.in_degree(d)]


def dumps(structure, kind=None, name=None, t=None):
    """Canonical text: basis in the global order, ops by arity then input tuple."""
    S = structure
    sp = S.space
    kind = kind or ("linf" if S.skew else "ainf")
    keys = _basis_keys(sp, t)
    names = {k: sp.name(k) for k in keys}

    def order(k):
        return (sp.degree(k), names[k])

    keys = sorted(keys, key=order)
    lines = [f"kind: {kind}"]
    nm = name if name is not None else S.name
    if nm:
        lines.append(f"name: {_quote(str(nm))}")
    lines.append("basis:")
    for k in keys:
        lines.append(f"- [{_quote(names[k])}, {sp.degree(k)}]")
    entries = []
    for k in S.arities():
        rows = [(ins, val) for ins, val in S.ops[k].items() if all(a in names for a in ins)]
        rows.sort(key=lambda r: [order(a) for a in r[0]])
        for ins, val in rows:
            terms = ", ".join(f"[{_quote(names[a])}, {_quote(fmt_rat(c), force=True)}]"
                              for a, c in sorted(val.items(), key=lambda kv: order(kv[0]))
                              if a in names)
            args = ", ".join(_quote(names[a]) for a in ins)
            entries.append(f"- [{k}, [{args}], [{terms}]]")
    if entries:
        lines.append("ops:")
        lines.extend(entries)
    else:
        lines.append("ops: []")
    if t is not None:
        lines.append(f"truncation: {{max_degree: {t.max_degree}, max_arity: {t.max_arity}, "
                     f"max_weight: {t.max_weight}}}")
    return "\n".join(lines) + "\n"


def _quote(s, force=False):
    """Double-quote unless the string is a plain word (scalars are read raw)."""
    if not force and s and all(ch.isalnum() or ch in "_" for ch in s) and not s[0].isdigit():
        return s
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def dump(structure, path, **kw):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(structure, **kw))
