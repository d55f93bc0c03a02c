"""Brute-force oracles and small-instance builders shared by the tests."""
import itertools
from fractions import Fraction

import numpy as np

from rrl.core import ColoredHypergraph, Params, proper_subsets, subsets


def random_colored(rng: np.random.Generator, r: int, k: int, n, b) -> ColoredHypergraph:
    """Every class gets a random size in ``[1, b_|I|]`` and uniform random colors."""
    sizes = (n,) * r if np.isscalar(n) else tuple(n)
    params = Params(r, k, tuple(b), sizes)
    tables, cls = {}, {}
    for I in params.index_sets():
        c = int(rng.integers(1, b[len(I) - 1] + 1))
        cls[I] = c
        tables[I] = rng.integers(0, c, size=params.shape(I))
    return ColoredHypergraph(params, tables, cls)


def all_edges(params: Params, I: tuple):
    return itertools.product(*(range(params.part_sizes[i]) for i in I))


def sub_edge(I: tuple, verts: tuple, J: tuple) -> tuple:
    return tuple(v for i, v in zip(I, verts) if i in J)


def brute_total_color(G: ColoredHypergraph, I: tuple, verts: tuple) -> tuple:
    return tuple(int(G.tables[J][sub_edge(I, verts, J)]) for J in subsets(I))


def brute_density(G: ColoredHypergraph, I: tuple, target: int, frame: tuple, frame_graph=None):
    """``P[G(e) = target | F(boundary e) = frame]`` by looping over all edges; ``None`` on empty frames."""
    F = frame_graph if frame_graph is not None else G
    hit = tot = 0
    for v in all_edges(G.params, I):
        if tuple(int(F.tables[J][sub_edge(I, v, J)]) for J in proper_subsets(I)) == tuple(frame):
            tot += 1
            hit += int(G.tables[I][v]) == target
    return None if tot == 0 else Fraction(hit, tot)


def brute_copy_probability(G: ColoredHypergraph, F) -> Fraction:
    """Average over every partitionwise map of the all-visible-edges-copied indicator."""
    h = F.h
    vis = F.visible_edges()
    per_part = [list(itertools.product(range(n), repeat=h)) for n in G.params.part_sizes]
    good = total = 0
    for images in itertools.product(*per_part):
        total += 1
        ok = True
        for e, mc in vis:
            if G.tables[e.index][tuple(images[i][w] for i, w in zip(e.index, e.verts))] != mc:
                ok = False
                break
        good += ok
    return Fraction(good, total)


def brute_regularize(G: ColoredHypergraph, s: int, images) -> ColoredHypergraph:
    """Recolor by explicit color vectors, ids assigned in sorted vector order."""
    tables, sizes = {}, {}
    b = list(G.params.b)
    for I in G.index_sets():
        if len(I) > s:
            continue
        rest = [p for p in range(G.r) if p not in I]
        vecs = {}
        for v in all_edges(G.params, I):
            vec = [int(G.tables[I][v])]
            for j in range(1, s + 2 - len(I)):
                for J in itertools.combinations(rest, j):
                    U = tuple(sorted(I + J))
                    for f in itertools.product(*(sorted(set(images[p])) for p in J)):
                        at = dict(zip(I, v))
                        at.update(zip(J, f))
                        vec.append(int(G.tables[U][tuple(at[p] for p in U)]))
            vecs[v] = tuple(vec)
        order = {vec: n for n, vec in enumerate(sorted(set(vecs.values())))}
        t = np.zeros(G.params.shape(I), dtype=np.int64)
        for v, vec in vecs.items():
            t[v] = order[vec]
        tables[I] = t
        sizes[I] = len(order)
        b[len(I) - 1] = max(b[len(I) - 1], len(order))
    params = Params(G.r, G.k, tuple(b), G.params.part_sizes)
    return G.replace(tables=tables, class_sizes=sizes, params=params)


def brute_condition_i(G: ColoredHypergraph, delta, h: int = 1) -> bool:
    """Condition (i) over every upward-closed complex on ``h`` vertices per part, checked literally."""
    from rrl.regularity import pattern_edges

    edges = pattern_edges(G.r, G.k, h)
    per_part = [list(itertools.product(range(n), repeat=h)) for n in G.params.part_sizes]
    maps = list(itertools.product(*per_part))
    # colors seen by each map on each pattern edge
    seen = [[int(G.tables[I][tuple(m[i][w] for i, w in zip(I, verts))]) for I, verts in edges] for m in maps]
    pos = {e: n for n, e in enumerate(edges)}
    choices = [[None] + list(range(G.class_sizes[I])) for I, _ in edges]
    for assign in itertools.product(*choices):
        ok = True
        for n, (I, verts) in enumerate(edges):
            if assign[n] is None:
                continue
            for J in proper_subsets(I):
                if assign[pos[(J, sub_edge(I, verts, J))]] is None:
                    ok = False
        if not ok:
            continue
        vis = [n for n in range(len(edges)) if assign[n] is not None]
        p = Fraction(sum(all(row[n] == assign[n] for n in vis) for row in seen), len(maps))
        lo = hi = Fraction(1)
        for n in vis:
            I, verts = edges[n]
            tc = tuple(assign[pos[(J, sub_edge(I, verts, J))]] for J in subsets(I))
            frame_mass = G.density_table(I).frame_counts.get(tc[:-1], 0)
            d = Fraction(G.density_table(I).tc_counts.get(tc, 0), frame_mass) if frame_mass else Fraction(0)
            dl = delta.exact(I, tc)
            lo *= max(Fraction(0), d - dl)
            hi *= min(Fraction(1), d + dl)
        if not lo <= p <= hi:
            return False
    return True


def random_forbidden(rng: np.random.Generator, G: ColoredHypergraph, h: int, p_visible: float = 0.6):
    """Random complex on ``h`` vertices per part whose visible colors are mother colors of ``G``."""
    from rrl.core import SimplicialComplex, close_invisibility

    b = tuple(x + 1 for x in G.params.b)
    params = Params(G.r, G.k, b, (h,) * G.r)
    tables, sizes, tm = {}, {}, {}
    for I in params.index_sets():
        c = G.class_sizes[I]
        sizes[I] = c + 1
        tm[I] = (-1,) + tuple(range(c))
        vis = rng.random(params.shape(I)) < p_visible
        tables[I] = np.where(vis, rng.integers(1, c + 1, size=params.shape(I)), 0)
    S = SimplicialComplex(params, tables, sizes, invisible=frozenset(params.index_sets()), to_mother=tm)
    return close_invisibility(S)
