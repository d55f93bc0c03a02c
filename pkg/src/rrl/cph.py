"""Line-oriented ``.cph`` text format for colored partite hypergraphs.

::

    cph <r> <k> [complex|uniform]
    parts <n_1> ... <n_r>
    bounds <b_1> ... <b_k>          # optional, defaults to the largest class per arity
    colors <I> <|C_I|>              # one line per index set, I written as 0,2
    invisible <I>                   # complexes only: color 0 of I is invisible
    map <I> <m_0> ... <m_{n-1}>     # complexes only: local color -> mother color
    edge <I> <v_1> ... <v_|I|> <c>  # edges not listed have color 0

Rendering lists nonzero edges only, index-major then lexicographic, so
``parse(render(G)) == G`` and ``render(parse(text)) == render(G)`` byte for byte.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .core import ColoredHypergraph, Params, SimplicialComplex, UniformColoredGraph, index_sets
from .errors import ParseError


def fmt_index(I) -> str:
    return ",".join(str(i) for i in I)


def parse_index(tok: str) -> tuple:
    try:
        return tuple(sorted(int(x) for x in tok.split(",")))
    except ValueError as exc:
        raise ParseError(f"bad index set {tok!r}") from exc


def render(G: ColoredHypergraph) -> str:
    kind = ""
    if isinstance(G, UniformColoredGraph):
        kind = " uniform"
    elif isinstance(G, SimplicialComplex):
        kind = " complex"
    p = G.params
    lines = [f"cph {p.r} {p.k}{kind}", "parts " + " ".join(map(str, p.part_sizes)),
             "bounds " + " ".join(map(str, p.b))]
    for I in p.index_sets():
        lines.append(f"colors {fmt_index(I)} {G.class_sizes[I]}")
    if isinstance(G, SimplicialComplex):
        for I in p.index_sets():
            if I in G.invisible:
                lines.append(f"invisible {fmt_index(I)}")
        for I in p.index_sets():
            if I in G.to_mother:
                lines.append(f"map {fmt_index(I)} " + " ".join(map(str, G.to_mother[I])))
    for I in p.index_sets():
        t = G.tables[I]
        for verts in zip(*np.nonzero(t)):
            vs = " ".join(str(int(v)) for v in verts)
            lines.append(f"edge {fmt_index(I)} {vs} {int(t[verts])}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> ColoredHypergraph:
    rows = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows or rows[0][0] != "cph" or len(rows[0]) not in (3, 4):
        raise ParseError("missing 'cph r k' header")
    try:
        r, k = int(rows[0][1]), int(rows[0][2])
    except ValueError as exc:
        raise ParseError("bad header") from exc
    kind = rows[0][3] if len(rows[0]) == 4 else "graph"
    if kind not in ("graph", "complex", "uniform"):
        raise ParseError(f"unknown kind {kind!r}")
    parts = bounds = None
    sizes, invisible, to_mother, edges = {}, set(), {}, []
    for row in rows[1:]:
        tag, args = row[0], row[1:]
        try:
            if tag == "parts":
                parts = tuple(int(x) for x in args)
            elif tag == "bounds":
                bounds = tuple(int(x) for x in args)
            elif tag == "colors":
                sizes[parse_index(args[0])] = int(args[1])
            elif tag == "invisible":
                invisible.add(parse_index(args[0]))
            elif tag == "map":
                to_mother[parse_index(args[0])] = tuple(int(x) for x in args[1:])
            elif tag == "edge":
                I = parse_index(args[0])
                if len(args) != len(I) + 2:
                    raise ParseError(f"edge line for {I} needs {len(I)} vertices and a color")
                edges.append((I, tuple(int(x) for x in args[1:-1]), int(args[-1])))
            else:
                raise ParseError(f"unknown line tag {tag!r}")
        except (IndexError, ValueError) as exc:
            raise ParseError(f"malformed line: {' '.join(row)}") from exc
    if parts is None or len(parts) != r:
        raise ParseError("missing or malformed 'parts' line")
    for I in index_sets(r, k):
        sizes.setdefault(I, 1)
    if bounds is None:
        bounds = tuple(max(sizes[I] for I in index_sets(r, k) if len(I) == a) for a in range(1, k + 1))
    params = Params(r, k, bounds, parts)
    tables = {I: np.zeros(params.shape(I), dtype=np.int64) for I in params.index_sets()}
    for I, verts, c in edges:
        if I not in tables:
            raise ParseError(f"edge of unknown index {I}")
        try:
            tables[I][verts] = c
        except IndexError as exc:
            raise ParseError(f"vertex out of range in edge {I} {verts}") from exc
    if kind == "graph":
        if invisible or to_mother:
            raise ParseError("invisible/map lines need kind 'complex' or 'uniform'")
        return ColoredHypergraph(params, tables, sizes)
    cls = UniformColoredGraph if kind == "uniform" else SimplicialComplex
    return cls(params, tables, sizes, invisible=frozenset(invisible), to_mother=to_mother)


def load(path) -> ColoredHypergraph:
    return parse(Path(path).read_text())


def dump(G: ColoredHypergraph, path) -> None:
    Path(path).write_text(render(G))
