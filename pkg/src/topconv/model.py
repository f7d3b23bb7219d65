"""Parser and emitter for the line-oriented model-file format.

A document has bracketed section headers and ``key = value`` entries;
values are whitespace-separated tokens, repeated keys accumulate rows,
row order never matters, and ``#`` starts a comment.  The full grammar
with examples lives in docs/format.md.  Parsing resolves everything it
can (group tables, filter bases, cross references) and reports the first
problem with its line and column; a lattice whose tables parse but break
a lattice law is kept as a deferred diagnostic so suite runners can turn
it into a failing verdict instead of a crash.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .fuzzy import (
    Carrier,
    FiniteGroup,
    FuzzySet,
    GroupError,
    builtin_group,
    make_group,
    square_carrier,
)
from .lattice import (
    LatticeError,
    ResiduatedLattice,
    build_boolean,
    build_chain,
    build_from_tables,
)
from .tfilter import NotABase, TFilter, generate

_SECTIONS = ("lattice", "group", "filters", "convergence", "uniform", "suites")


class ModelError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class ModelDocument:
    """A parsed and resolved model file.

    ``lattice_spec`` / ``group_spec`` keep the declaration shape so that
    emit -> parse round-trips to an equal document.
    """

    lattice: ResiduatedLattice | None
    lattice_error: str | None
    lattice_spec: tuple
    group: FiniteGroup | None
    group_spec: tuple
    filters: dict[str, TFilter] = field(default_factory=dict)
    filter_rows: dict[str, tuple[tuple[str, ...], ...]] = field(default_factory=dict)
    convergence_kind: str = "discrete"
    convergence_pairs: tuple[tuple[str, str], ...] = ()
    uniform_kind: str = "from-group"
    uniform_members: tuple[str, ...] = ()
    suites: tuple[str, ...] = ("all-theorems",)
    name: str = "<model>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModelDocument):
            return NotImplemented
        return (
            self.lattice_spec == other.lattice_spec
            and self.group_spec == other.group_spec
            and self.filters == other.filters
            and self.convergence_kind == other.convergence_kind
            and sorted(self.convergence_pairs) == sorted(other.convergence_pairs)
            and self.uniform_kind == other.uniform_kind
            and sorted(self.uniform_members) == sorted(other.uniform_members)
            and tuple(self.suites) == tuple(other.suites)
        )


def _tokenize(text: str):
    """Yield (line_no, section, key, tokens, key_column) entries."""
    section = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        col = len(line) - len(line.lstrip()) + 1
        m = re.fullmatch(r"\[([a-z-]+)\]", stripped)
        if m:
            section = m.group(1)
            if section not in _SECTIONS:
                raise ModelError(f"unknown section [{section}]", line_no, col)
            yield line_no, section, None, None, col
            continue
        if section is None:
            raise ModelError("entry before any section header", line_no, col)
        if "=" not in stripped:
            raise ModelError("expected 'key = value'", line_no, col)
        key, value = stripped.split("=", 1)
        yield line_no, section, key.strip(), value.strip(), col


def parse_model(text: str, name: str = "<model>") -> ModelDocument:
    sections: dict[str, list[tuple[int, str, str, int]]] = {s: [] for s in _SECTIONS}
    seen: set[str] = set()
    for line_no, section, key, value, col in _tokenize(text):
        if key is None:
            seen.add(section)
            continue
        sections[section].append((line_no, key, value, col))

    if "lattice" not in seen:
        raise ModelError("missing [lattice] section", 1)
    lattice, lattice_error, lattice_spec = _parse_lattice(sections["lattice"])
    group, group_spec = _parse_group(sections["group"]) if "group" in seen else (None, ("none",))

    doc = ModelDocument(
        lattice=lattice,
        lattice_error=lattice_error,
        lattice_spec=lattice_spec,
        group=group,
        group_spec=group_spec,
        name=name,
    )
    if "filters" in seen:
        _parse_filters(doc, sections["filters"])
    if "convergence" in seen:
        _parse_convergence(doc, sections["convergence"])
    if "uniform" in seen:
        _parse_uniform(doc, sections["uniform"])
    if "suites" in seen:
        for line_no, key, value, col in sections["suites"]:
            if key != "run":
                raise ModelError(f"unknown suites key {key!r}", line_no, col)
            doc.suites = tuple(value.split())
    return doc


def _entries_to_dict(entries, multi=()):
    out: dict[str, list[tuple[int, str, int]]] = {}
    for line_no, key, value, col in entries:
        out.setdefault(key, []).append((line_no, value, col))
    for key, vals in out.items():
        if key not in multi and len(vals) > 1:
            raise ModelError(f"duplicate key {key!r}", vals[1][0])
    return out


def _parse_lattice(entries):
    kv = _entries_to_dict(entries, multi=("star",))
    kind = _single(kv, "kind", "lattice")
    spec: tuple
    try:
        if kind == "chain":
            n = int(_single(kv, "n", "lattice"))
            flavor = _single(kv, "flavor", "lattice")
            spec = ("chain", n, flavor)
            return build_chain(n, flavor), None, spec
        if kind == "boolean":
            k = int(_single(kv, "k", "lattice"))
            spec = ("boolean", k)
            return build_boolean(k), None, spec
        if kind == "tables":
            return _parse_lattice_tables(kv)
    except LatticeError as exc:
        # deferred diagnostic: the document stays usable for reporting
        return None, str(exc), ("tables", "invalid")
    line = entries[0][0] if entries else 1
    raise ModelError(f"unknown lattice kind {kind!r}", line)


def _parse_lattice_tables(kv):
    labels = tuple(_single(kv, "elements", "lattice").split())
    index = {lab: i for i, lab in enumerate(labels)}
    leq_pairs = []
    line_no, value, col = kv["leq"][0] if "leq" in kv else (1, "", 1)
    for token in value.split():
        if "<=" not in token:
            raise ModelError(f"leq pair {token!r} must look like a<=b", line_no, col)
        a, b = token.split("<=", 1)
        if a not in index or b not in index:
            raise ModelError(f"unknown element in leq pair {token!r}", line_no, col)
        leq_pairs.append((index[a], index[b]))
    star_rows: dict[int, list[int]] = {}
    for line_no, value, col in kv.get("star", []):
        if ":" not in value:
            raise ModelError("star row must look like 'elem: v v v'", line_no, col)
        head, rest = value.split(":", 1)
        head = head.strip()
        if head not in index:
            raise ModelError(f"unknown element {head!r} in star row", line_no, col)
        row = rest.split()
        if len(row) != len(labels):
            raise ModelError(
                f"star row for {head!r} has {len(row)} entries, expected {len(labels)}",
                line_no,
                col,
            )
        for tok in row:
            if tok not in index:
                raise ModelError(f"unknown element {tok!r} in star row", line_no, col)
        star_rows[index[head]] = [index[tok] for tok in row]
    missing = [labels[i] for i in range(len(labels)) if i not in star_rows]
    if missing:
        raise ModelError(f"missing star rows for {', '.join(missing)}", line_no)
    table = [star_rows[i] for i in range(len(labels))]
    spec = (
        "tables",
        labels,
        tuple(sorted(leq_pairs)),
        tuple(tuple(r) for r in table),
    )
    try:
        return build_from_tables(labels, leq_pairs, table), None, spec
    except LatticeError as exc:
        return None, str(exc), spec


def _parse_group(entries):
    kv = _entries_to_dict(entries, multi=("row",))
    kind = _single(kv, "kind", "group")
    if kind == "builtin":
        name = _single(kv, "name", "group")
        try:
            return builtin_group(name), ("builtin", name)
        except GroupError as exc:
            line = kv["name"][0][0]
            raise ModelError(str(exc), line) from None
    if kind == "tables":
        labels = tuple(_single(kv, "elements", "group").split())
        index = {lab: i for i, lab in enumerate(labels)}
        rows: dict[int, list[int]] = {}
        last_line = entries[0][0]
        for line_no, value, col in kv.get("row", []):
            last_line = line_no
            if ":" not in value:
                raise ModelError("group row must look like 'elem: v v v'", line_no, col)
            head, rest = value.split(":", 1)
            head = head.strip()
            toks = rest.split()
            if head not in index:
                raise ModelError(f"unknown element {head!r}", line_no, col)
            if len(toks) != len(labels):
                raise ModelError(
                    f"group row for {head!r} has {len(toks)} entries, expected {len(labels)}",
                    line_no,
                    col,
                )
            for tok in toks:
                if tok not in index:
                    raise ModelError(f"unknown element {tok!r}", line_no, col)
            rows[index[head]] = [index[tok] for tok in toks]
        if len(rows) != len(labels):
            raise ModelError("missing group rows", last_line)
        table = [rows[i] for i in range(len(labels))]
        try:
            return make_group(labels, table), ("tables", labels, tuple(map(tuple, table)))
        except GroupError as exc:
            raise ModelError(str(exc), last_line) from None
    raise ModelError(f"unknown group kind {kind!r}", entries[0][0])


def _parse_filters(doc: ModelDocument, entries) -> None:
    if doc.lattice is None:
        return
    if doc.group is None:
        raise ModelError("filters need a [group] section", entries[0][0])
    lat = doc.lattice
    base_carrier = doc.group.carrier
    sq = square_carrier(base_carrier)
    for line_no, name, value, col in entries:
        rows = [r.split() for r in value.split(";")]
        n = len(rows[0]) if rows else 0
        if n == base_carrier.size:
            carrier = base_carrier
        elif n == sq.size:
            carrier = sq
        else:
            raise ModelError(
                f"filter row length {n} matches neither |X|={base_carrier.size} "
                f"nor |XxX|={sq.size}",
                line_no,
                col,
            )
        sets = []
        for row in rows:
            if len(row) != n:
                raise ModelError("ragged filter rows", line_no, col)
            vals = []
            for tok in row:
                if tok not in lat.label_index:
                    raise ModelError(f"unknown lattice element {tok!r}", line_no, col)
                vals.append(lat.label_index[tok])
            sets.append(FuzzySet(lat, carrier, tuple(vals)))
        try:
            doc.filters[name] = generate(lat, carrier, sets)
        except NotABase as exc:
            raise ModelError(f"filter {name!r} is not a base: {exc}", line_no, col) from None
        doc.filter_rows[name] = tuple(tuple(r) for r in rows)


def _parse_convergence(doc: ModelDocument, entries) -> None:
    kv = _entries_to_dict(entries, multi=("pairs",))
    kind = _single(kv, "kind", "convergence")
    if kind not in ("discrete", "indiscrete", "explicit"):
        raise ModelError(f"unknown convergence kind {kind!r}", entries[0][0])
    doc.convergence_kind = kind
    pairs = []
    for line_no, value, col in kv.get("pairs", []):
        for token in value.split():
            if ":" not in token:
                raise ModelError(f"pair {token!r} must look like filter:point", line_no, col)
            fname, point = token.split(":", 1)
            if fname not in doc.filters:
                raise ModelError(f"unresolved filter reference {fname!r}", line_no, col)
            if doc.group is None or point not in doc.group.carrier.labels:
                raise ModelError(f"unknown point {point!r}", line_no, col)
            pairs.append((fname, point))
    if kind == "explicit" and not pairs:
        raise ModelError("explicit convergence needs at least one pairs entry", entries[0][0])
    doc.convergence_pairs = tuple(pairs)


def _parse_uniform(doc: ModelDocument, entries) -> None:
    kv = _entries_to_dict(entries, multi=("members",))
    kind = _single(kv, "kind", "uniform")
    if kind not in ("from-group", "explicit"):
        raise ModelError(f"unknown uniform kind {kind!r}", entries[0][0])
    doc.uniform_kind = kind
    members = []
    for line_no, value, col in kv.get("members", []):
        for token in value.split():
            if token not in doc.filters:
                raise ModelError(f"unresolved filter reference {token!r}", line_no, col)
            if doc.group is not None:
                sq = square_carrier(doc.group.carrier)
                if doc.filters[token].carrier != sq:
                    raise ModelError(
                        f"uniform member {token!r} is not a filter on XxX", line_no, col
                    )
            members.append(token)
    doc.uniform_members = tuple(members)


def _single(kv, key, section):
    if key not in kv:
        raise ModelError(f"[{section}] is missing key {key!r}", 1)
    return kv[key][0][1]


# ---------------------------------------------------------------------------
# emission


def emit_model(doc: ModelDocument) -> str:
    """Canonical text for a document; parse(emit(d)) == d."""
    lines = ["[lattice]"]
    spec = doc.lattice_spec
    if spec[0] == "chain":
        lines += [f"kind = chain", f"n = {spec[1]}", f"flavor = {spec[2]}"]
    elif spec[0] == "boolean":
        lines += [f"kind = boolean", f"k = {spec[1]}"]
    else:
        _, labels, leq_pairs, table = spec
        lines.append("kind = tables")
        lines.append("elements = " + " ".join(labels))
        lines.append(
            "leq = " + " ".join(f"{labels[a]}<={labels[b]}" for a, b in leq_pairs)
        )
        for i, row in enumerate(table):
            lines.append(f"star = {labels[i]}: " + " ".join(labels[v] for v in row))
    if doc.group is not None:
        lines.append("")
        lines.append("[group]")
        if doc.group_spec[0] == "builtin":
            lines += ["kind = builtin", f"name = {doc.group_spec[1]}"]
        else:
            _, labels, table = doc.group_spec
            lines.append("kind = tables")
            lines.append("elements = " + " ".join(labels))
            for i, row in enumerate(table):
                lines.append(f"row = {labels[i]}: " + " ".join(labels[v] for v in row))
    if doc.filter_rows:
        lines.append("")
        lines.append("[filters]")
        for name in sorted(doc.filter_rows):
            rows = doc.filter_rows[name]
            lines.append(f"{name} = " + " ; ".join(" ".join(r) for r in rows))
    lines.append("")
    lines.append("[convergence]")
    lines.append(f"kind = {doc.convergence_kind}")
    if doc.convergence_pairs:
        lines.append(
            "pairs = " + " ".join(f"{f}:{p}" for f, p in sorted(doc.convergence_pairs))
        )
    lines.append("")
    lines.append("[uniform]")
    lines.append(f"kind = {doc.uniform_kind}")
    if doc.uniform_members:
        lines.append("members = " + " ".join(sorted(doc.uniform_members)))
    lines.append("")
    lines.append("[suites]")
    lines.append("run = " + " ".join(doc.suites))
    return "\n".join(lines) + "\n"
