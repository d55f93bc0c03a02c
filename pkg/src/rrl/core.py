"""Colored r-partite k-bound hypergraphs, total colors and simplicial complexes.

Parts are labelled ``0 .. r-1``.  An index set is a sorted tuple of part
labels; every edge of index ``I`` picks exactly one vertex in each part of
``I``.  Colors of index-``I`` edges live in a dense integer table whose axes
follow the members of ``I`` in increasing order.

Total colors are plain tuples aligned with :func:`subsets` -- the nonempty
subsets of ``I`` ordered by size, then lexicographically -- so the last entry
is always the face color of the edge itself and ``tc[:-1]`` is its frame.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import InvalidParams, InvalidRestriction, InvalidVertex

IndexSet = tuple  # sorted tuple of part labels


@functools.lru_cache(maxsize=None)
def index_sets(r: int, k: int) -> tuple:
    """All index sets with 1 <= |I| <= k, arity-major then lexicographic."""
    return tuple(c for a in range(1, k + 1) for c in itertools.combinations(range(r), a))


@functools.lru_cache(maxsize=None)
def subsets(I: tuple) -> tuple:
    """Nonempty subsets of ``I`` in the canonical total-color order."""
    return tuple(c for a in range(1, len(I) + 1) for c in itertools.combinations(I, a))


@functools.lru_cache(maxsize=None)
def proper_subsets(I: tuple) -> tuple:
    return subsets(I)[:-1]


@functools.lru_cache(maxsize=None)
def restriction_positions(I: tuple, J: tuple) -> tuple:
    """Positions inside a total color of ``I`` that form the total color of ``J``."""
    if not J or not set(J) <= set(I):
        raise InvalidRestriction(f"{J} is not a nonempty subset of {I}")
    order = {S: n for n, S in enumerate(subsets(I))}
    return tuple(order[S] for S in subsets(J))


def restrict_colors(I: tuple, colors: Sequence[int], J: tuple) -> tuple:
    """Restrict a total (or frame) color of ``I`` to the subset ``J``."""
    return tuple(colors[p] for p in restriction_positions(I, J))


def as_index(I) -> tuple:
    t = tuple(sorted(int(i) for i in I))
    if len(set(t)) != len(t):
        raise InvalidParams(f"index set {I!r} repeats a part")
    return t


def broadcast_table(t: np.ndarray, J: tuple, I: tuple, shape_I: tuple) -> np.ndarray:
    shape = [1] * len(I)
    pos = {i: n for n, i in enumerate(I)}
    for j, n in zip(J, t.shape):
        shape[pos[j]] = n
    return np.broadcast_to(t.reshape(shape), shape_I)


@dataclass(frozen=True)
class Params:
    """Part count ``r``, uniformity bound ``k``, per-arity color bounds ``b`` and part sizes."""

    r: int
    k: int
    b: tuple
    part_sizes: tuple

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        object.__setattr__(self, "part_sizes", tuple(int(x) for x in self.part_sizes))
        if not (self.r >= self.k >= 1):
            raise InvalidParams(f"need r >= k >= 1, got r={self.r}, k={self.k}")
        if len(self.b) != self.k or min(self.b) < 1:
            raise InvalidParams(f"b must hold k={self.k} positive bounds, got {self.b}")
        if len(self.part_sizes) != self.r or min(self.part_sizes) < 1:
            raise InvalidParams(f"part_sizes must hold r={self.r} positive sizes")

    @classmethod
    def uniform(cls, r: int, k: int, n: int, b=None) -> "Params":
        b = (2,) * k if b is None else tuple(b)
        return cls(r, k, b, (n,) * r)

    def index_sets(self) -> tuple:
        return index_sets(self.r, self.k)

    def shape(self, I: tuple) -> tuple:
        return tuple(self.part_sizes[i] for i in I)

    def edge_count(self, I: tuple) -> int:
        return int(np.prod(self.shape(I), dtype=np.int64))

    def with_sizes(self, part_sizes) -> "Params":
        return Params(self.r, self.k, self.b, tuple(part_sizes))


class Edge(NamedTuple):
    """One vertex per part of ``index``; ``verts[n]`` lives in part ``index[n]``."""

    index: tuple
    verts: tuple

    @classmethod
    def from_dict(cls, assignment: Mapping[int, int]) -> "Edge":
        I = as_index(assignment)
        return cls(I, tuple(int(assignment[i]) for i in I))

    def as_dict(self) -> dict:
        return dict(zip(self.index, self.verts))


def restrict_edge(e: Edge, J) -> Edge:
    """``e|_J``: keep only the vertices of the parts in ``J``."""
    J = tuple(sorted(J))
    if not J or not set(J) <= set(e.index):
        raise InvalidRestriction(f"cannot restrict edge of index {e.index} to {J}")
    pos = {i: n for n, i in enumerate(e.index)}
    return Edge(J, tuple(e.verts[pos[j]] for j in J))


@dataclass(frozen=True)
class TotalColor:
    """Colors of every nonempty sub-edge of an index-``I`` edge."""

    index: tuple
    entries: tuple

    def as_dict(self) -> dict:
        return dict(zip(subsets(self.index), self.entries))

    @property
    def top(self) -> int:
        return self.entries[-1]

    @property
    def frame(self) -> tuple:
        return self.entries[:-1]

    def restrict(self, J) -> "TotalColor":
        J = tuple(sorted(J))
        return TotalColor(J, restrict_colors(self.index, self.entries, J))


@dataclass(frozen=True, eq=False)
class ColoredHypergraph:
    """A k-bound colored r-partite hypergraph with dense per-index color tables."""

    params: Params
    tables: Mapping
    class_sizes: Mapping
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        p = self.params
        tables, sizes = {}, {}
        for I in p.index_sets():
            if I not in self.tables:
                raise InvalidParams(f"missing color table for index {I}")
            t = np.ascontiguousarray(self.tables[I], dtype=np.int64)
            if t.shape != p.shape(I):
                raise InvalidParams(f"table {I} has shape {t.shape}, expected {p.shape(I)}")
            t.setflags(write=False)
            tables[I] = t
            n = int(self.class_sizes[I])
            if not 1 <= n <= p.b[len(I) - 1]:
                raise InvalidParams(f"class {I} has {n} colors, bound b_{len(I)}={p.b[len(I) - 1]}")
            if t.size and (t.min() < 0 or t.max() >= n):
                raise InvalidParams(f"color out of range at index {I}")
            sizes[I] = n
        object.__setattr__(self, "tables", tables)
        object.__setattr__(self, "class_sizes", sizes)

    # construction ---------------------------------------------------------

    @classmethod
    def constant(cls, params: Params, color: int = 0, class_sizes=None) -> "ColoredHypergraph":
        sizes = class_sizes or {I: color + 1 for I in params.index_sets()}
        tables = {I: np.full(params.shape(I), color, dtype=np.int64) for I in params.index_sets()}
        return cls(params, tables, dict(sizes))

    def replace(self, tables=None, class_sizes=None, params=None):
        t = dict(self.tables)
        t.update(tables or {})
        s = dict(self.class_sizes)
        s.update(class_sizes or {})
        return ColoredHypergraph(params or self.params, t, s)

    # queries -------------------------------------------------------------

    @property
    def r(self) -> int:
        return self.params.r

    @property
    def k(self) -> int:
        return self.params.k

    def index_sets(self) -> tuple:
        return self.params.index_sets()

    def top_index_sets(self) -> tuple:
        return tuple(I for I in self.index_sets() if len(I) == self.k)

    def color(self, e: Edge) -> int:
        self.check_edge(e)
        return int(self.tables[e.index][e.verts])

    def __getitem__(self, e: Edge) -> int:
        return self.color(e)

    def check_edge(self, e: Edge) -> None:
        if e.index not in self.tables:
            raise InvalidVertex(f"no edges of index {e.index}")
        for i, v in zip(e.index, e.verts):
            if not 0 <= v < self.params.part_sizes[i]:
                raise InvalidVertex(f"vertex {v} outside part {i}")

    def edges(self, I: tuple) -> Iterator[Edge]:
        for verts in itertools.product(*(range(n) for n in self.params.shape(I))):
            yield Edge(I, verts)

    def color_counts(self) -> dict:
        """``c_i(G) = max_{|I|=i} |C_I|`` for each arity ``i``."""
        out = {}
        for I, n in self.class_sizes.items():
            out[len(I)] = max(out.get(len(I), 0), n)
        return out

    def total_edges(self) -> int:
        return sum(self.params.edge_count(I) for I in self.index_sets())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ColoredHypergraph) or type(other) is not type(self):
            return NotImplemented
        return (
            self.params == other.params
            and self.class_sizes == other.class_sizes
            and all(np.array_equal(self.tables[I], other.tables[I]) for I in self.index_sets())
            and self._extra_key() == other._extra_key()
        )

    def __hash__(self):
        return id(self)

    def _extra_key(self):
        return None

    # dense helpers ---------------------------------------------------------

    def broadcast(self, J: tuple, I: tuple) -> np.ndarray:
        """Table of ``J`` viewed as an array over the edges of ``I`` (``J`` subset of ``I``)."""
        return broadcast_table(self.tables[J], J, I, self.params.shape(I))

    def tc_array(self, I: tuple) -> np.ndarray:
        """Row ``n`` is the total color of the ``n``-th index-``I`` edge (row-major)."""
        key = ("tc", I)
        if key not in self._cache:
            cols = [self.broadcast(J, I).reshape(-1) for J in subsets(I)]
            arr = np.stack(cols, axis=1)
            arr.setflags(write=False)
            self._cache[key] = arr
        return self._cache[key]

    def density_table(self, I: tuple) -> "DensityTable":
        key = ("dens", I)
        if key not in self._cache:
            self._cache[key] = DensityTable.from_rows(self.tc_array(I))
        return self._cache[key]


def count_rows(arr: np.ndarray) -> dict:
    """Map each distinct row of a 2-d integer array to its multiplicity."""
    if arr.shape[0] == 0:
        return {}
    if arr.shape[1] == 0:
        return {(): arr.shape[0]}
    rows, counts = np.unique(arr, axis=0, return_counts=True)
    return {tuple(int(x) for x in row): int(c) for row, c in zip(rows, counts)}


@dataclass(frozen=True)
class DensityTable:
    """Counts of total colors and of frames for one index set."""

    total: int
    tc_counts: Mapping
    frame_counts: Mapping

    @classmethod
    def from_rows(cls, rows: np.ndarray) -> "DensityTable":
        tcs = count_rows(rows)
        frames: dict = {}
        for tc, c in tcs.items():
            frames[tc[:-1]] = frames.get(tc[:-1], 0) + c
        return cls(int(rows.shape[0]), tcs, frames)

    def density(self, tc: tuple):
        """``d(tc[-1] | tc[:-1])`` or ``None`` when the frame has zero mass."""
        f = self.frame_counts.get(tuple(tc[:-1]), 0)
        if f == 0:
            return None
        return Fraction(self.tc_counts.get(tuple(tc), 0), f)

    def probability(self, tc: tuple) -> Fraction:
        return Fraction(self.tc_counts.get(tuple(tc), 0), self.total)

    def realized(self) -> list:
        return sorted(self.tc_counts)


def total_color(G: ColoredHypergraph, e: Edge) -> TotalColor:
    """``G<e>``: colors of all nonempty sub-edges of ``e``."""
    G.check_edge(e)
    return TotalColor(e.index, tuple(int(G.tables[J][restrict_edge(e, J).verts]) for J in subsets(e.index)))


def frame_color(G: ColoredHypergraph, e: Edge) -> tuple:
    return total_color(G, e).frame


@dataclass(frozen=True, eq=False)
class SimplicialComplex(ColoredHypergraph):
    """Colored graph whose invisible edges are closed upward.

    ``invisible`` lists the index sets whose color 0 is the invisible color.
    ``to_mother`` maps, per index set, each local color id to a color id of the
    mother graph (``-1`` for the invisible slot); absent entries mean identity.
    """

    invisible: frozenset = frozenset()
    to_mother: Mapping = field(default_factory=dict)

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "invisible", frozenset(tuple(I) for I in self.invisible))
        tm = {}
        for I, m in dict(self.to_mother).items():
            m = tuple(int(x) for x in m)
            if len(m) != self.class_sizes[I]:
                raise InvalidParams(f"to_mother[{I}] must list {self.class_sizes[I]} ids")
            tm[tuple(I)] = m
        object.__setattr__(self, "to_mother", tm)

    def _extra_key(self):
        return (self.invisible, tuple(sorted(self.to_mother.items())))

    @property
    def h(self) -> int:
        sizes = set(self.params.part_sizes)
        if len(sizes) != 1:
            raise InvalidParams("complex parts have unequal sizes")
        return sizes.pop()

    def is_visible_color(self, I: tuple, c: int) -> bool:
        return not (I in self.invisible and c == 0)

    def mother_color(self, I: tuple, c: int):
        """Mother-graph color for a local color, or ``None`` if invisible."""
        if not self.is_visible_color(I, c):
            return None
        m = self.to_mother.get(I)
        return int(c) if m is None else m[c]

    def mother_table(self, I: tuple) -> np.ndarray:
        """Table of mother colors with ``-1`` marking invisible edges."""
        t = self.tables[I]
        m = self.to_mother.get(I)
        out = t.copy() if m is None else np.asarray(m, dtype=np.int64)[t]
        if I in self.invisible:
            out = np.where(t == 0, -1, out)
        return out

    def visible_edges(self, I: tuple | None = None) -> list:
        """``[(edge, mother_color)]`` over visible edges, index-major, lexicographic."""
        key = ("visible", I)
        if key not in self._cache:
            out = []
            for J in (self.index_sets() if I is None else (I,)):
                mt = self.mother_table(J)
                for verts in zip(*np.nonzero(mt >= 0)):
                    verts = tuple(int(v) for v in verts)
                    out.append((Edge(J, verts), int(mt[verts])))
            self._cache[key] = out
        return list(self._cache[key])


@dataclass(frozen=True)
class ComplexReport:
    valid: bool
    violations: list
    injection_errors: list

    def __bool__(self):
        return self.valid


def _closure_sources(S: SimplicialComplex) -> list:
    """Index sets whose invisible edges force invisibility above them.

    In a uniform graph the single lower-arity color means "no constraint"
    rather than "absent", so only top classes take part.
    """
    out = [I for I in S.index_sets() if I in S.invisible]
    if isinstance(S, UniformColoredGraph):
        out = [I for I in out if len(I) == S.k]
    return out


def validate_complex(S: SimplicialComplex, mother: ColoredHypergraph | None = None) -> ComplexReport:
    """Check upward-closed invisibility and, given a mother graph, the color injection."""
    violations = []
    for I in _closure_sources(S):
        for verts in zip(*np.nonzero(S.tables[I] == 0)):
            low = Edge(I, tuple(int(v) for v in verts))
            for Istar in S.index_sets():
                if len(Istar) <= len(I) or not set(I) <= set(Istar):
                    continue
                up = S.tables[Istar]
                sl = tuple(low.verts[I.index(i)] if i in I else slice(None) for i in Istar)
                sub = up[sl]
                vis = np.ones(sub.shape, bool) if Istar not in S.invisible else sub != 0
                free = [i for i in Istar if i not in I]
                for rest in zip(*np.nonzero(vis)):
                    assign = dict(zip(I, low.verts))
                    assign.update(zip(free, (int(v) for v in rest)))
                    violations.append((low, Edge.from_dict(assign)))
    injection_errors = []
    if mother is not None:
        for I in S.index_sets():
            seen = {}
            for c in range(S.class_sizes[I]):
                m = S.mother_color(I, c)
                if m is None:
                    continue
                if not 0 <= m < mother.class_sizes[I]:
                    injection_errors.append((I, c, m, "outside mother class"))
                elif m in seen:
                    injection_errors.append((I, c, m, f"collides with local color {seen[m]}"))
                else:
                    seen[m] = c
    return ComplexReport(not violations and not injection_errors, violations, injection_errors)


def close_invisibility(S: SimplicialComplex) -> SimplicialComplex:
    """Make every edge above an invisible edge invisible, where its class allows it."""
    tables = {I: np.array(S.tables[I]) for I in S.index_sets()}
    sources = set(_closure_sources(S))
    for I in S.index_sets():
        if I not in S.invisible:
            continue
        shape = S.params.shape(I)
        for J in proper_subsets(I):
            if J in sources:
                tables[I][broadcast_table(tables[J], J, I, shape) == 0] = 0
    return type(S)(S.params, tables, S.class_sizes, invisible=S.invisible, to_mother=S.to_mother)


@dataclass(frozen=True, eq=False)
class UniformColoredGraph(SimplicialComplex):
    """k-uniform graph: lower classes hold one invisible color, top classes at most one."""

    def __post_init__(self):
        super().__post_init__()
        for I in self.index_sets():
            if len(I) < self.k:
                if self.class_sizes[I] != 1 or I not in self.invisible:
                    raise InvalidParams(f"lower class {I} must be a single invisible color")

    @classmethod
    def from_top(cls, r: int, k: int, h: int, top_tables: Mapping, top_size: int,
                 invisible_top: bool = True, to_mother: Mapping | None = None, b_k=None) -> "UniformColoredGraph":
        """Build from top-arity tables over ``h`` vertices per part; other tables are invisible."""
        b_k = b_k or top_size
        params = Params(r, k, (1,) * (k - 1) + (b_k,), (h,) * r)
        tables, sizes, inv = {}, {}, set()
        for I in params.index_sets():
            if len(I) < k:
                tables[I] = np.zeros(params.shape(I), dtype=np.int64)
                sizes[I] = 1
                inv.add(I)
            else:
                tables[I] = np.asarray(top_tables.get(I, np.zeros(params.shape(I))), dtype=np.int64)
                sizes[I] = top_size
                if invisible_top:
                    inv.add(I)
        tm = {}
        for I, m in (to_mother or {}).items():
            tm[tuple(I)] = tuple(m)
        for I in params.index_sets():
            if len(I) < k:
                tm[I] = (-1,)
        return cls(params, tables, sizes, invisible=frozenset(inv), to_mother=tm)

    def mother_color(self, I: tuple, c: int):
        if len(I) < self.k:
            return None
        return super().mother_color(I, c)
