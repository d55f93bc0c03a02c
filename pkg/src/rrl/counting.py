"""Copy probabilities ``P_phi[G(phi(e)) = F(e) for all visible e]``, padding and colorability search.

Exact counting contracts one 0/1 indicator tensor per visible edge of ``F``
over the variables ``(part, local vertex)`` with ``numpy.einsum``; variables
that no visible edge touches contribute their part size as a factor.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import ColoredHypergraph, Params, SimplicialComplex, UniformColoredGraph, proper_subsets
from .errors import BudgetExceeded, InvalidPadding, InvalidParams
from .rng import as_stream
from .sampling import PartitionwiseMap
from .stats import hoeffding_radius

LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
EXACT_BUDGET = 10 ** 12


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("RRL_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class CopyEstimate:
    value: object  # Fraction in exact mode, float otherwise
    mode: str
    samples: int
    witness: PartitionwiseMap | None = None
    interval: tuple = (0.0, 1.0)
    maps: int = 0

    @property
    def map_count(self):
        """Probability times the number of maps, i.e. the number of copying maps."""
        return self.value * self.maps


def _constraints(G: ColoredHypergraph, F: SimplicialComplex) -> list:
    if F.r != G.r or F.k != G.k:
        raise InvalidParams("forbidden graph and host must share r and k")
    h = F.h
    out = []
    for e, mc in F.visible_edges():
        if not 0 <= mc < G.class_sizes[e.index]:
            raise InvalidParams(f"mother color {mc} outside class {e.index} of the host")
        out.append((e.index, tuple(i * h + w for i, w in zip(e.index, e.verts)), mc))
    return out


def _einsum_count(G, cons, h, var0_slice=None) -> int:
    sizes = {}
    for i, n in enumerate(G.params.part_sizes):
        for w in range(h):
            sizes[i * h + w] = n
    ops, subs, used = [], [], set()
    for I, vars_, mc in cons:
        t = (G.tables[I] == mc).astype(np.int64)
        if var0_slice is not None and 0 in vars_:
            sl = [slice(None)] * len(vars_)
            sl[vars_.index(0)] = var0_slice
            t = t[tuple(sl)]
        ops.append(t)
        subs.append("".join(LETTERS[v] for v in vars_))
        used.update(vars_)
    free = 1
    for v, n in sizes.items():
        if v not in used:
            free *= (var0_slice.stop - var0_slice.start) if (v == 0 and var0_slice is not None) else n
    if not ops:
        return free
    expr = ",".join(subs) + "->"
    # path search only pays off once the operands are sizeable
    big = sum(t.size for t in ops) > 4096
    return int(np.einsum(expr, *ops, optimize=big)) * free


def exact_count(G: ColoredHypergraph, F: SimplicialComplex) -> int:
    """Number of maps ``phi in Phi(h)`` under which every visible edge of ``F`` is copied."""
    cons = _constraints(G, F)
    h = F.h
    threads = worker_count()
    n0 = G.params.part_sizes[0]
    if threads == 1 or n0 < 2 or not any(0 in v for _, v, _ in cons):
        return _einsum_count(G, cons, h)
    bounds = np.linspace(0, n0, min(threads, n0) + 1).astype(int)
    chunks = [slice(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(lambda s: _einsum_count(G, cons, h, s), chunks))


def find_copy(G: ColoredHypergraph, F: SimplicialComplex) -> PartitionwiseMap | None:
    """First copying map in lexicographic variable order, by backtracking."""
    cons = _constraints(G, F)
    h = F.h
    nvars = G.r * h
    by_last: dict = {}
    for I, vars_, mc in cons:
        by_last.setdefault(max(vars_), []).append((I, vars_, mc))
    assign = [0] * nvars

    def rec(v):
        if v == nvars:
            return True
        for x in range(G.params.part_sizes[v // h]):
            assign[v] = x
            if all(G.tables[I][tuple(assign[u] for u in vars_)] == mc for I, vars_, mc in by_last.get(v, ())):
                if rec(v + 1):
                    return True
        return False

    if not rec(0):
        return None
    return PartitionwiseMap(tuple(tuple(assign[i * h:(i + 1) * h]) for i in range(G.r)))


def map_copies(G: ColoredHypergraph, F: SimplicialComplex, phi: PartitionwiseMap) -> bool:
    return all(G.tables[I][tuple(phi.images[v // F.h][v % F.h] for v in vars_)] == mc
               for I, vars_, mc in _constraints(G, F))


def copy_probability(G: ColoredHypergraph, F: SimplicialComplex, mode: str = "exact", samples: int = 10_000,
                     rng=None, budget: int = EXACT_BUDGET, confidence: float = 0.95) -> CopyEstimate:
    h = F.h
    maps = math.prod(n ** h for n in G.params.part_sizes)
    if mode == "exact":
        if maps > budget:
            raise BudgetExceeded(f"{maps} maps exceed the exact budget {budget}")
        count = exact_count(G, F)
        p = Fraction(count, maps)
        witness = find_copy(G, F) if count else None
        return CopyEstimate(p, "exact", maps, witness, (p, p), maps)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    cons = _constraints(G, F)
    stream = as_stream(rng, "copies")
    imgs = np.stack([stream.child(i).integers(n, size=(samples, h)) for i, n in enumerate(G.params.part_sizes)],
                    axis=1)  # samples x r x h
    ok = np.ones(samples, bool)
    for I, vars_, mc in cons:
        ok &= G.tables[I][tuple(imgs[:, v // h, v % h] for v in vars_)] == mc
    hits = int(ok.sum())
    p = hits / samples
    t = hoeffding_radius(samples, 1 - confidence)
    witness = None
    if hits:
        n = int(np.argmax(ok))
        witness = PartitionwiseMap(tuple(tuple(int(x) for x in imgs[n, i]) for i in range(G.r)))
    return CopyEstimate(p, "sampled", samples, witness, (max(0.0, p - t), min(1.0, p + t)), maps)


def isolated_padding(F: SimplicialComplex, h0: int) -> SimplicialComplex:
    """Add isolated vertices so every part has ``h0``; new edges are all invisible."""
    h = F.h
    if h > h0:
        raise InvalidPadding(f"h(F)={h} exceeds h0={h0}")
    if h == h0:
        return F
    params = F.params.with_sizes((h0,) * F.r)
    tables, sizes, tm, inv = {}, {}, {}, set(F.invisible)
    b = list(F.params.b)
    for I in F.index_sets():
        t = np.array(F.tables[I])
        n = F.class_sizes[I]
        m = F.to_mother.get(I)
        if I not in F.invisible:
            t = t + 1
            mother = tuple(range(n)) if m is None else m
            tm[I] = (-1,) + tuple(mother)
            n += 1
            inv.add(I)
            b[len(I) - 1] = max(b[len(I) - 1], n)
        elif m is not None:
            tm[I] = m
        full = np.zeros(params.shape(I), dtype=np.int64)
        full[tuple(slice(0, h) for _ in I)] = t
        tables[I] = full
        sizes[I] = n
    params = Params(params.r, params.k, tuple(b), params.part_sizes)
    cls = UniformColoredGraph if isinstance(F, UniformColoredGraph) else SimplicialComplex
    return cls(params, tables, sizes, invisible=frozenset(inv), to_mother=tm)


@dataclass
class ColorabilityInstance:
    """Lower color budgets ``b'`` and, per top index, allowed top colors given an ``S``-frame."""

    b_prime: tuple  # b'_1 .. b'_{k-1}
    g: dict = field(default_factory=dict)  # top I -> {frame: set of colors} or callable

    def allowed(self, I: tuple, frame: tuple, color: int) -> bool:
        gi = self.g.get(I)
        if gi is None:
            return True
        colors = gi(frame) if callable(gi) else gi.get(frame, ())
        return color in colors


def colorable_search(members, inst: ColorabilityInstance):
    """First member ``F'`` (in the given order) with a certifying complex ``S``, else ``None``.

    ``S`` colors every sub-edge of a visible top edge of ``F'`` with a color in
    ``[b'_|J|]`` and leaves everything else invisible; each visible top edge
    ``e`` needs ``F'(e) in g_I(S(boundary e))``.
    """
    for F in members:
        S = _certify(F, inst)
        if S is not None:
            return F, S
    return None


def _certify(F: SimplicialComplex, inst: ColorabilityInstance):
    k, h = F.k, F.h
    tops = [(e, mc) for e, mc in F.visible_edges() if len(e.index) == k]
    need = set()
    for e, _ in tops:
        for J in proper_subsets(e.index):
            need.add((J, tuple(v for i, v in zip(e.index, e.verts) if i in J)))
    order = sorted(need, key=lambda x: (len(x[0]), x[0], x[1]))
    slot = {x: n for n, x in enumerate(order)}
    checks: dict = {}
    for e, mc in tops:
        subs_ = [slot[(J, tuple(v for i, v in zip(e.index, e.verts) if i in J))] for J in proper_subsets(e.index)]
        checks.setdefault(max(subs_) if subs_ else -1, []).append((e.index, subs_, mc))
    if any(not inst.allowed(I, (), mc) for I, _, mc in checks.get(-1, ())):
        return None
    color = [0] * len(order)

    def rec(n):
        if n == len(order):
            return True
        J = order[n][0]
        for c in range(inst.b_prime[len(J) - 1]):
            color[n] = c
            if all(inst.allowed(I, tuple(color[s] for s in subs_), mc) for I, subs_, mc in checks.get(n, ())):
                if rec(n + 1):
                    return True
        return False

    if not rec(0):
        return None
    params = Params(F.r, k, tuple(inst.b_prime) + (F.params.b[-1],), (h,) * F.r)
    tables = {I: np.zeros(params.shape(I), dtype=np.int64) for I in params.index_sets()}
    for (J, verts), n in slot.items():
        tables[J][verts] = color[n] + 1
    sizes, tm = {}, {}
    for I in params.index_sets():
        if len(I) < k:
            sizes[I] = inst.b_prime[len(I) - 1] + 1
            tm[I] = (-1,) + tuple(range(inst.b_prime[len(I) - 1]))
        else:
            tables[I] = np.array(F.tables[I])
            sizes[I] = F.class_sizes[I]
            if I in F.to_mother:
                tm[I] = F.to_mother[I]
    inv = {I for I in params.index_sets() if len(I) < k} | {I for I in F.invisible if len(I) == k}
    params = Params(F.r, k, tuple(max(params.b[i], max(sizes[I] for I in params.index_sets() if len(I) == i + 1))
                                  for i in range(k)), params.part_sizes)
    return SimplicialComplex(params, tables, sizes, invisible=frozenset(inv), to_mother=tm)
