"""One-sided-error property tester and the reduction from non-partite monotone properties."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .core import ColoredHypergraph, Params, SimplicialComplex, UniformColoredGraph
from .errors import InvalidParams, InvalidVertex, SampleTooLarge
from .rng import RngStream, as_stream


def rounds_for(c) -> int:
    """``ceil(3 / c)`` evaluated on the decimal value of ``c``."""
    q = Fraction(str(c))
    if not 0 < q <= 1:
        raise InvalidParams(f"c must lie in (0, 1], got {c}")
    return math.ceil(3 / q)


@dataclass(frozen=True)
class TesterConfig:
    __test__ = False  # keep pytest from collecting it

    c: float
    h0: int
    trials: int | None = None

    def __post_init__(self):
        rounds_for(self.c)
        if self.h0 < 1:
            raise InvalidParams("h0 must be at least 1")
        if self.trials is not None and self.trials < 1:
            raise InvalidParams("trials must be positive")

    @property
    def rounds(self) -> int:
        return self.trials if self.trials is not None else rounds_for(self.c)


def induced_subgraph(G: ColoredHypergraph, W) -> SimplicialComplex:
    """Sub-structure on the vertex lists ``W[i]``; vertex ``j`` of part ``i`` is ``W[i][j]``."""
    W = [tuple(int(v) for v in part) for part in W]
    if len(W) != G.r:
        raise InvalidVertex(f"need one vertex list per part ({G.r})")
    for i, part in enumerate(W):
        if not part:
            raise InvalidVertex(f"empty vertex list for part {i}")
        if len(set(part)) != len(part):
            raise InvalidVertex(f"repeated vertex in part {i}")
        if any(not 0 <= v < G.params.part_sizes[i] for v in part):
            raise InvalidVertex(f"vertex outside part {i}")
    params = G.params.with_sizes(tuple(len(p) for p in W))
    tables = {I: G.tables[I][np.ix_(*(W[i] for i in I))] for I in G.index_sets()}
    if isinstance(G, SimplicialComplex):
        cls = UniformColoredGraph if isinstance(G, UniformColoredGraph) else SimplicialComplex
        return cls(params, tables, G.class_sizes, invisible=G.invisible, to_mother=G.to_mother)
    return SimplicialComplex(params, tables, G.class_sizes)


@dataclass
class PropertyOracle:
    """A labelled-isomorphism-invariant, hereditary property of colored graphs."""

    satisfies: Callable
    name: str = "property"

    @classmethod
    def register(cls, satisfies: Callable, name: str = "property", generator: Callable | None = None,
                 rng=None, pairs: int = 64) -> "PropertyOracle":
        """Spot-check heredity and relabelling invariance on ``pairs`` random graphs.

        ``generator(stream)`` must return a graph; without one no check runs.
        """
        oracle = cls(satisfies, name)
        if generator is None:
            return oracle
        stream = as_stream(rng, "oracle-check", name)
        for t in range(pairs):
            sub = stream.child(t)
            G = generator(sub.child("graph"))
            sat = bool(satisfies(G))
            perm = [sub.child("perm", i).permutation(n) for i, n in enumerate(G.params.part_sizes)]
            if bool(satisfies(induced_subgraph(G, perm))) != sat:
                raise InvalidParams(f"oracle {name!r} is not invariant under relabelling")
            if sat:
                W = []
                for i, n in enumerate(G.params.part_sizes):
                    m = 1 + sub.child("size", i).integers(n)
                    W.append(sorted(int(v) for v in sub.child("W", i).sample_without_replacement(n, m)))
                if not satisfies(induced_subgraph(G, W)):
                    raise InvalidParams(f"oracle {name!r} is not hereditary")
        return oracle

    @classmethod
    def from_family(cls, family, name: str = "family-free") -> "PropertyOracle":
        return cls(family.satisfies, name)


@dataclass
class Witness:
    W: tuple
    subgraph: SimplicialComplex
    round: int


@dataclass
class TesterOutcome:
    accepted: bool
    rounds_run: int
    rounds_planned: int
    witness: Witness | None = None
    transcript: list = field(default_factory=list)

    @property
    def rejected(self) -> bool:
        return not self.accepted


def sample_sets(G: ColoredHypergraph, h0: int, stream: RngStream) -> tuple:
    """``h0`` distinct vertices per part, each list sorted."""
    if h0 > min(G.params.part_sizes):
        raise SampleTooLarge(f"h0={h0} exceeds the smallest part ({min(G.params.part_sizes)})")
    return tuple(tuple(sorted(int(v) for v in stream.child(i).sample_without_replacement(n, h0)))
                 for i, n in enumerate(G.params.part_sizes))


def run_tester(G: ColoredHypergraph, oracle: PropertyOracle, cfg: TesterConfig, rng=None,
               early_exit: bool = True) -> TesterOutcome:
    """Accept iff every sampled induced ``h0``-vertex substructure satisfies the oracle."""
    base = as_stream(rng, "tester")
    stream = RngStream(base.seed, base.path, [])
    planned = cfg.rounds
    witness = None
    run = 0
    for t in range(planned):
        W = sample_sets(G, cfg.h0, stream.child("round", t))
        run += 1
        S = induced_subgraph(G, W)
        if not oracle.satisfies(S):
            if witness is None:
                witness = Witness(W, S, t)
            if early_exit:
                break
    return TesterOutcome(witness is None, run, planned, witness, stream.transcript)


@dataclass
class Reduction:
    graph: UniformColoredGraph
    part_of: tuple  # vertex -> part
    local_id: tuple  # vertex -> index inside its part
    kept: int
    deleted: int
    bound: int  # r * r^(k-2) * N^k


def monotone_reduction(edges, N: int, r: int, k: int, rng=None) -> Reduction:
    """Split ``N`` vertices into ``r`` balanced random parts and keep only partitionwise edges."""
    if r < k:
        raise InvalidParams("need r >= k")
    stream = as_stream(rng, "reduction")
    perm = stream.permutation(N) if N else np.zeros(0, dtype=np.int64)
    part_of = [0] * N
    for pos, v in enumerate(perm):
        part_of[int(v)] = pos % r
    members = [[v for v in range(N) if part_of[v] == i] for i in range(r)]
    local = [0] * N
    for part in members:
        for j, v in enumerate(part):
            local[v] = j
    sizes = tuple(max(1, len(p)) for p in members)
    params = Params(r, k, (1,) * (k - 1) + (2,), sizes)
    tables = {I: np.zeros(params.shape(I), dtype=np.int64) for I in params.index_sets()}
    kept = deleted = 0
    seen = set()
    for e in edges:
        e = tuple(sorted(int(v) for v in e))
        if len(e) != k or len(set(e)) != k or e in seen:
            raise InvalidParams(f"bad or repeated edge {e}")
        seen.add(e)
        parts = [part_of[v] for v in e]
        if len(set(parts)) < k:
            deleted += 1
            continue
        order = sorted(range(k), key=lambda n: parts[n])
        I = tuple(parts[n] for n in order)
        tables[I][tuple(local[e[n]] for n in order)] = 1
        kept += 1
    sizes_cls = {I: (2 if len(I) == k else 1) for I in params.index_sets()}
    inv = frozenset(params.index_sets())
    tm = {I: (-1,) for I in params.index_sets() if len(I) < k}
    G = UniformColoredGraph(params, tables, sizes_cls, invisible=inv, to_mother=tm)
    return Reduction(G, tuple(part_of), tuple(local), kept, deleted, r * r ** (k - 2) * N ** k)
