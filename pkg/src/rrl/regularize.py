"""Regularization ``G/^s phi`` and relative densities.

Regularizing at arity ``s`` recolors every edge ``e`` with ``|I| <= s`` by
the vector of colors of ``e`` itself and of ``e + f`` for every ``f`` spanned
by the image of the map in parts outside ``I`` with ``|f| <= s + 1 - |I|``.
Vectors are hash-consed into dense ids in sorted-vector order; the first
vector entry is the previous color, which is how regularized colors are
traced back to the base graph (``origin``).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .core import ColoredHypergraph, DensityTable, Params, subsets
from .errors import EmptyCondition, InvalidArity
from .sampling import MapVector, PartitionwiseMap


@dataclass(frozen=True, eq=False)
class RegularizedGraph:
    """A regularized graph together with the way back to its base graph."""

    base: ColoredHypergraph
    graph: ColoredHypergraph
    origin: dict
    vectors: dict = field(default_factory=dict)

    def base_color(self, I: tuple, c: int) -> int:
        """``H[c*]``: the base color shared by every edge of regularized color ``c``."""
        return int(self.origin[I][c])

    def base_colors(self, I: tuple, colors, frame: bool = False) -> tuple:
        """Map a regularized total (or frame) color of ``I`` to the base graph."""
        subs = subsets(I)[:-1] if frame else subsets(I)
        return tuple(int(self.origin[J][c]) for J, c in zip(subs, colors))

    @classmethod
    def identity(cls, G: ColoredHypergraph) -> "RegularizedGraph":
        return cls(G, G, {I: np.arange(G.class_sizes[I]) for I in G.index_sets()})


def _as_regularized(G) -> RegularizedGraph:
    return G if isinstance(G, RegularizedGraph) else RegularizedGraph.identity(G)


def regularization_vectors(G: ColoredHypergraph, s: int, phi: PartitionwiseMap, I: tuple) -> np.ndarray:
    """Vector colors of all index-``I`` edges, one row per edge (row-major)."""
    cols = [G.tables[I].reshape(-1)]
    rest = [p for p in range(G.r) if p not in I]
    for j in range(1, s + 2 - len(I)):
        for J in itertools.combinations(rest, j):
            U = tuple(sorted(I + J))
            table = G.tables[U]
            for f in itertools.product(*(phi.image_set(p) for p in J)):
                at = dict(zip(J, f))
                sl = tuple(at[p] if p in at else slice(None) for p in U)
                cols.append(np.ascontiguousarray(table[sl]).reshape(-1))
    return np.stack(cols, axis=1)


def regularize(G, s: int, phi: PartitionwiseMap) -> RegularizedGraph:
    """``G/^s phi``.  ``G`` may itself be a :class:`RegularizedGraph` (stages compose)."""
    R = _as_regularized(G)
    H = R.graph
    if not 1 <= s < H.k:
        raise InvalidArity(f"need 1 <= s < k={H.k}, got s={s}")
    phi.check(H.params)
    tables, sizes, origin, vectors = {}, {}, dict(R.origin), dict(R.vectors)
    for I in H.index_sets():
        if len(I) > s:
            continue
        vec = regularization_vectors(H, s, phi, I)
        uniq, inverse = np.unique(vec, axis=0, return_inverse=True)
        tables[I] = inverse.reshape(H.params.shape(I))
        sizes[I] = int(uniq.shape[0])
        origin[I] = np.asarray(R.origin[I])[uniq[:, 0]]
        vectors[I] = uniq
    b = list(H.params.b)
    for I, n in sizes.items():
        b[len(I) - 1] = max(b[len(I) - 1], n)
    params = Params(H.r, H.k, tuple(b), H.params.part_sizes)
    graph = H.replace(tables=tables, class_sizes=sizes, params=params)
    return RegularizedGraph(R.base, graph, origin, vectors)


def regularize_vector(G, phis: MapVector) -> RegularizedGraph:
    """``((G/^{k-1} phi_{k-1}) /^{k-2} phi_{k-2}) ... /^1 phi_1``."""
    R = _as_regularized(G)
    k = R.graph.k
    if len(phis) != k - 1:
        raise InvalidArity(f"map vector must have k-1={k - 1} entries, got {len(phis)}")
    for s in range(k - 1, 0, -1):
        R = regularize(R, s, phis[s - 1])
    return R


def color_bound(b, m: int, r: int, i: int) -> int:
    """``B_i(b, m) = prod_{j=0}^{k-i} b_{i+j} ** (C(r, j) m^j)``."""
    k = len(b)
    out = 1
    for j in range(0, k - i + 1):
        out *= int(b[i + j - 1]) ** (comb(r, j) * m ** j)
    return out


@dataclass(frozen=True)
class DensityQuery:
    """Target color at ``index`` conditioned on a frame (entries over proper subsets)."""

    index: tuple
    target: int
    frame: tuple


def mixed_table(G: ColoredHypergraph, F: ColoredHypergraph, I: tuple) -> DensityTable:
    """Counts of (frame in ``F``, color in ``G``) over index-``I`` edges."""
    if F is G:
        return G.density_table(I)
    key = ("mixed", I)
    hit = F._cache.get(key)
    if hit is not None and hit[0] is G:
        return hit[1]
    rows = np.concatenate([F.tc_array(I)[:, :-1], G.tables[I].reshape(-1, 1)], axis=1)
    table = DensityTable.from_rows(rows)
    F._cache[key] = (G, table)
    return table


def relative_density(G: ColoredHypergraph, q: DensityQuery, frame_graph: ColoredHypergraph | None = None) -> Fraction:
    """``d_G(target | frame)`` by exact enumeration.

    With ``frame_graph`` the frame is read in that graph (typically a
    regularization of ``G``) while the target color is read in ``G``.
    """
    table = mixed_table(G, frame_graph if frame_graph is not None else G, q.index)
    d = table.density(tuple(q.frame) + (q.target,))
    if d is None:
        raise EmptyCondition(f"frame {q.frame} has zero mass at index {q.index}")
    return d


def density_or_none(G: ColoredHypergraph, I: tuple, tc: tuple, frame_graph=None):
    table = mixed_table(G, frame_graph if frame_graph is not None else G, I)
    return table.density(tuple(tc))


def total_color_probability(G: ColoredHypergraph, I: tuple, tc: tuple) -> Fraction:
    """``P_e[G<e> = tc]`` over uniform index-``I`` edges."""
    return G.density_table(I).probability(tuple(tc))


def chain_rule_product(G: ColoredHypergraph, I: tuple, tc: tuple) -> Fraction:
    """``prod_{J subset I} d_G(c_J | (c_J')_{J' proper subset J})``; zero if some factor is zero or undefined.

    This product telescopes to ``P[G<e> = tc]`` when ``|I| <= 2``.  From
    three parts on the lower faces of an edge are not conditionally
    independent given their own frames, and the two sides can differ.
    """
    entries = dict(zip(subsets(I), tc))
    out = Fraction(1)
    for J in subsets(I):
        sub = tuple(entries[K] for K in subsets(J))
        d = G.density_table(J).density(sub)
        if not d:
            return Fraction(0)
        out *= d
    return out
