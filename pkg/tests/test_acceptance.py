"""End-to-end acceptance criteria; each test records one pass/fail line in the terminal summary."""
import itertools
import math
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from helpers import brute_copy_probability, random_colored, random_forbidden
from test_editor import case_rule_oracle, low_density_instance, tiny_instances
from rrl import cph
from rrl.core import ColoredHypergraph, Params, subsets
from rrl.counting import copy_probability, map_copies
from rrl.editor import CASE_KEEP, edit_size_report, modify
from rrl.family import Family, triangle
from rrl.harness import blowup, farness_packing, random_graph, random_triangle_free
from rrl.pipeline import PipelineConfig, removal_pipeline
from rrl.regularity import fit_delta, non_ordinary_bound
from rrl.regularize import (RegularizedGraph, chain_rule_product, color_bound, regularize, regularize_vector,
                            total_color_probability)
from rrl.representative import build_table, draw_count
from rrl.rng import RngStream
from rrl.sampling import random_map, random_map_vector
from rrl.stats import wilson_interval
from rrl.tester import PropertyOracle, TesterConfig, rounds_for, run_tester

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
TRIANGLE_FREE = Family("triangle-free")


def test_one_sided_error(acceptance):
    oracle = PropertyOracle.from_family(TRIANGLE_FREE)
    cfg = TesterConfig(0.1, 2)
    start = time.perf_counter()
    rejections = runs = 0
    for i in range(20):
        G = random_triangle_free(20, 0.3 + 0.02 * i, 1000 + i)  # 60 vertices in total
        assert oracle.satisfies(G)
        for j in range(50):
            rejections += run_tester(G, oracle, cfg, 10_000 * i + j).rejected
            runs += 1
    elapsed = time.perf_counter() - start
    ok = runs == 1000 and rejections == 0 and elapsed < 30
    acceptance(1, ok, f"{rejections} rejections in {runs} runs, {elapsed:.1f}s")
    assert ok


def test_tester_power(acceptance):
    start = time.perf_counter()
    N = 60
    G = random_graph(Params(3, 2, (1, 2), (N, N, N)), (0.5, 0.5), 2024)
    packing = farness_packing(G, triangle(3, (0, 1, 2))).lower_bound
    oracle = PropertyOracle.from_family(TRIANGLE_FREE)
    cfg = TesterConfig(0.1, 1)
    rejected = sum(run_tester(G, oracle, cfg, s).rejected for s in range(200))
    lo, hi = wilson_interval(rejected, 200)
    elapsed = time.perf_counter() - start
    ok = packing >= 0.05 * 3 * N * N and hi >= 0.9 and elapsed < 60
    acceptance(2, ok, f"packing {packing} >= {0.05 * 3 * N * N:.0f}, rejected {rejected}/200 "
                      f"(95% interval {lo:.3f}..{hi:.3f}), {elapsed:.1f}s")
    assert ok


def test_round_count_arithmetic(acceptance):
    expected = {0.5: 6, 0.1: 30, 0.03: 100}
    got = {c: rounds_for(c) for c in expected}
    bounds = {c: (1 - Fraction(str(c))) ** n for c, n in got.items()}
    ok = got == expected and all(b <= math.exp(-3) < 0.1 for b in bounds.values())
    acceptance(3, ok, " ".join(f"c={c}:{n} rounds, (1-c)^n={float(bounds[c]):.4f}" for c, n in got.items()))
    assert ok


def test_counting_oracle_equivalence(acceptance):
    start = time.perf_counter()
    rng = np.random.default_rng(4)
    exact_ok = 0
    for _ in range(50):
        r = int(rng.integers(1, 4))
        k = int(rng.integers(1, r + 1))
        G = random_colored(rng, r, k, int(rng.integers(1, 5)), (2,) * k)
        F = random_forbidden(rng, G, int(rng.integers(1, 3)))
        exact_ok += copy_probability(G, F).value == brute_copy_probability(G, F)
    covered = 0
    for t in range(100):
        G = random_colored(rng, 3, 2, 4, (2, 2))
        F = random_forbidden(rng, G, int(rng.integers(1, 3)), p_visible=0.5)
        truth = copy_probability(G, F).value
        lo, hi = copy_probability(G, F, "sampled", 2000, t).interval
        covered += lo <= truth <= hi
    elapsed = time.perf_counter() - start
    ok = exact_ok == 50 and covered >= 93 and elapsed < 120
    acceptance(4, ok, f"exact {exact_ok}/50 equal, sampled interval covered {covered}/100, {elapsed:.1f}s")
    assert ok


def test_chain_rule_identity(acceptance):
    rng = np.random.default_rng(5)
    failing, checked, worst, arities = set(), 0, None, set()
    for n in range(100):
        r = int(rng.integers(1, 4))
        k = int(rng.integers(1, r + 1))
        G = random_colored(rng, r, k, int(rng.integers(1, 4)), (2,) * k)
        for I in G.index_sets():
            for tc in itertools.product(*(range(G.class_sizes[J]) for J in subsets(I))):
                checked += 1
                p, q = total_color_probability(G, I, tc), chain_rule_product(G, I, tc)
                if p != q:
                    failing.add(n)
                    arities.add(len(I))
                    worst = worst or (len(I), p, q)
    ok = not failing
    detail = f"{checked} total colors checked, {len(failing)} of 100 instances violate the identity"
    if worst:
        detail += (f", failing arities {sorted(arities)}"
                   f" (first at |I|={worst[0]}: P={worst[1]} vs product={worst[2]})")
    acceptance(5, ok, detail)
    assert ok


def test_regularization_contracts(acceptance):
    start = time.perf_counter()
    rng = np.random.default_rng(6)
    unchanged = bounded = 0
    for n in range(100):
        k = int(rng.integers(2, 4))
        r = int(rng.integers(k, 4))
        G = random_colored(rng, r, k, int(rng.integers(1, 4)), tuple(int(x) for x in rng.integers(1, 4, size=k)))
        s = int(rng.integers(1, k))
        m = int(rng.integers(1, 3))
        R = regularize(G, s, random_map(G.params, m, RngStream(n)))
        unchanged += all(np.array_equal(R.graph.tables[I], G.tables[I]) for I in G.index_sets() if len(I) > s)
        counts = R.graph.color_counts()
        bounded += all(counts[i] <= color_bound(G.params.b, m, r, i) for i in range(1, s + 1))
    elapsed = time.perf_counter() - start
    ok = unchanged == 100 and bounded == 100 and elapsed < 30
    acceptance(6, ok, f"higher arities unchanged {unchanged}/100, color bound {bounded}/100, {elapsed:.1f}s")
    assert ok


def test_non_ordinary_bound_on_blowups(acceptance):
    rng = np.random.default_rng(7)
    held, worst = 0, 0.0
    for n in range(20):
        r = int(rng.integers(2, 4))
        pattern = random_colored(rng, r, 2, 2, (2, 2))
        H = blowup(pattern, int(rng.integers(2, 4)))
        fit = fit_delta(H, 1)
        assert fit.report.verified
        rep = non_ordinary_bound(H, fit.delta, fit.epsilon_fit)
        held += rep.holds
        worst = max([worst] + [float(p) / b for p, b, _ in rep.rows.values() if b > 0])
    ok = held == 20
    acceptance(7, ok, f"bound held on {held}/20 blow-ups, largest measured/bound ratio {worst:.3f}")
    assert ok


def test_representative_machinery(acceptance):
    rng = np.random.default_rng(8)
    lengths = 0
    for n in range(20):
        k = int(rng.integers(1, 4))
        r = int(rng.integers(k, 4))
        L = tuple(int(x) for x in rng.integers(1, 4, size=k))
        G = random_colored(rng, r, k, 2, (2,) * k)
        R = RegularizedGraph.identity(G)
        lengths += len(build_table(R, L, n).transcript) == draw_count(r, k, L)
    injective = fixpoint = instances = 0
    for n in range(10):
        G = random_colored(rng, 2, 2, 3, (2, 3))
        R = regularize_vector(G, random_map_vector(G.params, (1,), RngStream(n)))
        total = sum(math.prod(R.graph.class_sizes[J] for J in subsets(I)) for I in G.index_sets())
        if total > 200:
            continue
        instances += 1
        table = build_table(R, (3, 3), n)
        inj = fix = True
        for I in G.index_sets():
            seen = set()
            for tc in itertools.product(*(range(R.graph.class_sizes[J]) for J in subsets(I))):
                th = table.theta_vector(I, tc)
                if 0 in th:
                    continue
                inj &= th not in seen
                seen.add(th)
                if len(I) == G.k:
                    fix &= table.vartheta(I, tc)[-1] == tc[-1]
        injective += inj
        fixpoint += fix
    ok = lengths == 20 and instances > 0 and injective == fixpoint == instances
    acceptance(8, ok, f"transcript lengths {lengths}/20, theta injective {injective}/{instances}, "
                      f"top fixpoint {fixpoint}/{instances}")
    assert ok


def test_editor_contracts(acceptance):
    eps, eps1 = 0.3, 0.05
    locality = idempotent = 0
    for G, table in tiny_instances(50):
        res = modify(table, eps, eps1)
        locality += edit_size_report(res, eps).subset_ok
        again = modify(table, eps, eps1)
        settled = all(np.all(t == CASE_KEEP) for t in res.cases.values())
        idempotent += again.H_prime == res.H_prime and (not settled or res.H_prime == G)
    constant_ok = True
    for color in (0, 1, 2):
        G = ColoredHypergraph.constant(Params.uniform(3, 2, 4, (color + 1, color + 1)), color)
        R = regularize_vector(G, random_map_vector(G.params, (1,), RngStream(color)))
        constant_ok &= modify(build_table(R, (4, 4), color), 0.1, 1e-3).H_prime == G
    H = low_density_instance()
    table = build_table(RegularizedGraph.identity(H), (1, 20), 4)
    res = modify(table, 0.1, 1e-3)
    oracle, _ = case_rule_oracle(table, 0.1, 1e-3)
    planted_ok = all(np.array_equal(res.H_prime.tables[I], oracle[I]) for I in H.index_sets())
    ok = locality == idempotent == 50 and constant_ok and planted_ok
    acceptance(9, ok, f"locality {locality}/50, fixpoint {idempotent}/50, constant graphs "
                      f"{'unchanged' if constant_ok else 'edited'}, planted edit "
                      f"{'matches' if planted_ok else 'differs from'} the case-rule oracle")
    assert ok


def test_removal_dichotomy(acceptance):
    pattern = cph.load(CONFIGS / "pattern_black.cph")
    blown = blowup(pattern, 3)
    free = random_triangle_free(6, 0.5, 31)
    cfg = PipelineConfig()
    copies = edits = identical = 0
    for seed in (1, 2, 3):
        res = removal_pipeline(blown, TRIANGLE_FREE, 0.2, cfg, seed)
        w = res.witness
        copies += res.branch == "copy" and w is not None and map_copies(blown, w.member, w.estimate.witness)
        identical += res.lines() == removal_pipeline(blown, TRIANGLE_FREE, 0.2, cfg, seed).lines()
        res = removal_pipeline(free, TRIANGLE_FREE, 0.2, cfg, seed)
        edits += res.branch == "edit" and res.G_prime == free
        identical += res.lines() == removal_pipeline(free, TRIANGLE_FREE, 0.2, cfg, seed).lines()
    ok = copies == 3 and edits == 3 and identical == 6
    acceptance(10, ok, f"copy branch with verified witness {copies}/3, zero-edit branch {edits}/3, "
                       f"identical reruns {identical}/6")
    assert ok
