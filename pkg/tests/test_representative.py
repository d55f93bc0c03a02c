import itertools
import math

import numpy as np
import pytest

from rrl.core import ColoredHypergraph, Params, subsets
from rrl.harness import blowup
from rrl.regularize import RegularizedGraph, regularize_vector
from rrl.representative import (NULL, a_vectors, build_d_colors, build_table, default_eps1, default_L, draw_count,
                                is_ordinary_frame, replay_table)
from rrl.rng import RngStream
from rrl.sampling import random_map_vector

from helpers import random_colored


def regularized(G, m, seed):
    return regularize_vector(G, random_map_vector(G.params, (m,) * (G.k - 1), RngStream(seed)))


def brute_draw_count(r, k, L):
    return sum(len(a_vectors(I, L)) for a in range(1, k + 1) for I in itertools.combinations(range(r), a))


def test_draw_count_example():
    assert draw_count(2, 2, (2, 3)) == 16


def test_draw_count_formula_matches_enumeration():
    rng = np.random.default_rng(0)
    for _ in range(20):
        k = int(rng.integers(1, 4))
        r = int(rng.integers(k, 5))
        L = tuple(int(x) for x in rng.integers(1, 4, size=k))
        assert draw_count(r, k, L) == brute_draw_count(r, k, L)


def test_transcript_length(nprng):
    for _ in range(5):
        G = random_colored(nprng, 3, 2, 3, (2, 2))
        table = build_table(regularized(G, 1, 3), (2, 2), 7)
        assert len(table.transcript) == draw_count(3, 2, (2, 2))


def test_single_color_graph():
    G = ColoredHypergraph.constant(Params.uniform(3, 2, 3, (1, 1)))
    table = build_table(regularized(G, 1, 1), (2, 3), 5)
    assert all(c == 0 for I in table.d for c in table.d[I].values())
    for I in G.index_sets():
        tc = (0,) * (2 ** len(I) - 1)
        assert 1 <= table.theta(I, tc) <= table.L[len(I) - 1]
        assert table.vartheta(I, tc) == tc


def test_theta_zero_when_color_absent():
    G = ColoredHypergraph(Params(2, 1, (2,), (2, 2)), {(0,): np.zeros(2), (1,): np.zeros(2)}, {(0,): 2, (1,): 1})
    table = build_table(RegularizedGraph.identity(G), (3,), 0)
    assert table.theta((0,), (1,)) == 0
    assert table.vartheta((0,), (1,)) is NULL
    assert not NULL and repr(NULL) == "NULL"


def all_total_colors(G, I):
    return itertools.product(*(range(G.class_sizes[J]) for J in subsets(I)))


def test_theta_injective_and_top_fixpoint(nprng):
    for trial in range(10):
        G = random_colored(nprng, 2, 2, 4, (2, 3))
        table = build_table(regularized(G, 1, trial), (3, 3), trial)
        for I in G.index_sets():
            seen = {}
            for tc in all_total_colors(G, I):
                th = table.theta_vector(I, tc)
                assert all(0 <= a <= table.L[len(J) - 1] for a, J in zip(th, subsets(I)))
                if 0 in th:
                    assert table.vartheta(I, tc) is NULL
                    continue
                assert th not in seen, (tc, seen.get(th))
                seen[th] = tc
                vt = table.vartheta(I, tc)
                if len(I) == G.k:
                    assert vt[-1] == tc[-1]
                # every representative entry maps back to the color it represents
                assert table.reg.base_colors(I, vt) == tc


def test_empty_fiber_marks_unrealizable():
    # both pairs through part 0 copy the part-0 vertex, so their colors always agree
    p = Params(3, 3, (1, 2, 1), (2, 2, 2))
    v0 = np.array([[0, 0], [1, 1]])
    tables = {(0,): np.zeros(2), (1,): np.zeros(2), (2,): np.zeros(2), (0, 1): v0, (0, 2): v0,
              (1, 2): np.zeros((2, 2)), (0, 1, 2): np.zeros((2, 2, 2))}
    sizes = {I: 1 for I in p.index_sets()}
    sizes[(0, 1)] = sizes[(0, 2)] = 2
    G = ColoredHypergraph(p, tables, sizes)
    empty = 0
    for seed in range(20):
        table = build_table(RegularizedGraph.identity(G), (1, 2, 1), seed)
        assert len(table.transcript) == draw_count(3, 3, (1, 2, 1))
        for I, a, edge, color in table.transcript:
            if edge is None:
                empty += 1
                assert len(I) == 3 and table.d[I][a] is None and color is None
        # mixed pair colors never occur, so their total color has no representative
        assert table.theta((0, 1, 2), (0, 0, 0, 0, 1, 0, 0)) == 0
        for tc in G.density_table((0, 1, 2)).realized():
            vt = table.vartheta((0, 1, 2), tc)
            assert vt is NULL or vt == tc
    assert empty > 0


def test_replay_and_determinism(nprng):
    G = random_colored(nprng, 3, 2, 3, (2, 2))
    R = regularized(G, 1, 4)
    a = build_table(R, (2, 2), 99)
    b = build_table(R, (2, 2), 99)
    assert a.render() == b.render()
    c = replay_table(R, a.render())
    assert c.d == a.d
    for I in G.index_sets():
        for tc in G.density_table(I).realized():
            assert c.theta(I, tc) == a.theta(I, tc)


def test_d_colors_follow_block_densities():
    pat = ColoredHypergraph(Params(2, 1, (2,), (2, 1)), {(0,): np.array([0, 1]), (1,): np.zeros(1)},
                            {(0,): 2, (1,): 1})
    G = blowup(pat, (1, 1)).replace(tables={(0,): np.array([0, 1, 1, 1])}, params=Params(2, 1, (2,), (4, 1)))
    R = RegularizedGraph.identity(G)
    counts = np.zeros(2)
    n = 1000
    for seed in range(n):
        counts[build_d_colors(R, (1,), seed).d[(0,)][(1,)]] += 1
    sigma = math.sqrt(n * 0.25 * 0.75)
    assert abs(counts[0] - n / 4) <= 3 * sigma


def test_defaults():
    assert default_L((2, 3), 0.5) == (32, 48)
    assert default_eps1(0.1) == pytest.approx(1e-5)
    L = default_L((4, 4), 0.01, budget=5000, r=3)
    assert draw_count(3, 2, L) <= 5000


def test_is_ordinary_frame_examples(nprng):
    G = ColoredHypergraph.constant(Params.uniform(2, 2, 3, (1, 1)))
    table = build_table(regularized(G, 1, 0), (2, 2), 0)
    frame = table.vartheta((0, 1), (0, 0), frame=True)
    assert is_ordinary_frame(table, (0, 1), frame, 1e-3, 0.1, 0.5)
    assert is_ordinary_frame(table, (0, 1), frame, 1e-3, 0.0, math.inf)
    assert not is_ordinary_frame(table, (0, 1), NULL, 1e-3, 0.1, 0.5)
    # a regularization that separates edge densities: nonzero deviation fails at gamma = 0
    p = Params(2, 2, (1, 2), (2, 2))
    H = ColoredHypergraph(p, {(0,): np.zeros(2), (1,): np.zeros(2), (0, 1): np.array([[1, 1], [0, 0]])},
                          {(0,): 1, (1,): 1, (0, 1): 2})
    from rrl.sampling import PartitionwiseMap
    R = regularize_vector(H, (PartitionwiseMap(((0,), (0,))),))
    table = build_table(R, (4, 4), 3)
    for fr in {tuple(r[:-1]) for r in R.graph.tc_array((0, 1)).tolist()}:
        assert not is_ordinary_frame(table, (0, 1), fr, 1.0, 0.0, math.inf)
        # squared deviations sum to 1/2 at every frame, so gamma = 1.5 suffices: (1.5 / 2)^2 >= 1/2
        assert is_ordinary_frame(table, (0, 1), fr, 1.0, 1.5, math.inf)
