"""Forbidden families and the ``.fam`` text format.

::

    fam
    builtin triangle-free                     # or no-visible-top-edge-class:<c>
    member                                    # explicit members, any number
    cph ...                                   # an embedded .cph document
    end

A graph satisfies the family when no member has a copy in it; that property
is hereditary because a copy inside an induced subgraph is a copy in the
whole graph.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import cph
from .core import ColoredHypergraph, SimplicialComplex, UniformColoredGraph
from .counting import exact_count, find_copy
from .errors import ParseError

BUILTINS = ("triangle-free", "no-visible-top-edge-class")


def triangle(r: int, parts: tuple, color: int = 1, top_size: int = 2) -> UniformColoredGraph:
    """One triangle on three parts of an ``r``-partite 2-graph, edges of mother color ``color``."""
    tables = {}
    for I in itertools.combinations(range(r), 2):
        t = np.zeros((1, 1), dtype=np.int64)
        if set(I) <= set(parts):
            t[0, 0] = 1
        tables[I] = t
    return UniformColoredGraph.from_top(r, 2, 1, tables, 2, to_mother={I: (-1, color) for I in tables},
                                        b_k=top_size)


def single_top_edge(r: int, k: int, I: tuple, color: int, top_size: int) -> UniformColoredGraph:
    tables = {}
    for J in itertools.combinations(range(r), k):
        t = np.zeros((1,) * k, dtype=np.int64)
        if J == I:
            t[(0,) * k] = 1
        tables[J] = t
    return UniformColoredGraph.from_top(r, k, 1, tables, 2, to_mother={J: (-1, color) for J in tables},
                                        b_k=top_size)


@dataclass
class Family:
    builtin: str | None = None
    members: list = field(default_factory=list)

    def members_for(self, G: ColoredHypergraph, h_max: int | None = None) -> list:
        """Explicit members plus the built-in members that fit ``G``, ordered by ``h``."""
        out = list(self.members)
        if self.builtin:
            top = max(G.class_sizes[I] for I in G.top_index_sets())
            out += _builtin_members(self.builtin, G.r, G.k, top)
        out = [F for F in out if F.r == G.r and F.k == G.k]
        if h_max is not None:
            out = [F for F in out if F.h <= h_max]
        return sorted(out, key=lambda F: F.h)

    def first_copy(self, G: ColoredHypergraph, h_max: int | None = None):
        """``(member, map)`` for the first member with a copy in ``G``, else ``None``."""
        for F in self.members_for(G, h_max):
            if _fits(G, F):
                phi = find_copy(G, F)
                if phi is not None:
                    return F, phi
        return None

    def satisfies(self, G: ColoredHypergraph) -> bool:
        for F in self.members_for(G):
            if _fits(G, F) and exact_count(G, F) > 0:
                return False
        return True

    def render(self) -> str:
        lines = ["fam"]
        if self.builtin:
            lines.append(f"builtin {self.builtin}")
        for F in self.members:
            lines.append("member")
            lines.append(cph.render(F).rstrip("\n"))
            lines.append("end")
        return "\n".join(lines) + "\n"


@functools.lru_cache(maxsize=256)
def _builtin_members(builtin: str, r: int, k: int, top: int) -> tuple:
    name, _, arg = builtin.partition(":")
    if name == "triangle-free":
        if k != 2 or r < 3:
            raise ParseError("triangle-free needs a 2-bound graph with at least 3 parts")
        return tuple(triangle(r, p, 1, max(top, 2)) for p in itertools.combinations(range(r), 3))
    if name == "no-visible-top-edge-class":
        c = int(arg)
        if c >= top:
            return ()
        return tuple(single_top_edge(r, k, I, c, max(top, 2)) for I in itertools.combinations(range(r), k))
    raise ParseError(f"unknown built-in family {name!r}")


def _fits(G, F) -> bool:
    """Members whose mother colors lie outside ``G``'s classes cannot occur."""
    for e, mc in F.visible_edges():
        if mc >= G.class_sizes[e.index]:
            return False
    return True


def parse_family(text: str) -> Family:
    lines = text.splitlines()
    body = [ln for ln in lines if ln.split("#", 1)[0].strip()]
    if not body or body[0].split()[0] != "fam":
        raise ParseError("missing 'fam' header")
    fam = Family()
    i = 1
    while i < len(body):
        tok = body[i].split("#", 1)[0].split()
        if tok[0] == "builtin":
            if len(tok) != 2 or tok[1].partition(":")[0] not in BUILTINS:
                raise ParseError(f"bad builtin line {body[i]!r}")
            fam.builtin = tok[1]
            i += 1
        elif tok[0] == "member":
            j = i + 1
            while j < len(body) and body[j].split()[0] != "end":
                j += 1
            if j == len(body):
                raise ParseError("member without 'end'")
            G = cph.parse("\n".join(body[i + 1:j]))
            if not isinstance(G, SimplicialComplex):
                raise ParseError("family members must be 'complex' or 'uniform' documents")
            fam.members.append(G)
            i = j + 1
        else:
            raise ParseError(f"unknown family line {body[i]!r}")
    return fam


def load_family(path) -> Family:
    return parse_family(Path(path).read_text())
