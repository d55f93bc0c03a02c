"""Instance generators, farness certificates and config-driven experiments."""
from __future__ import annotations

import configparser
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import cph
from .core import ColoredHypergraph, Params, SimplicialComplex
from .counting import _constraints, copy_probability
from .errors import BudgetExceeded, InvalidParams, RRLError, StageError
from .exact import to_fraction
from .family import Family, load_family, parse_family
from .rng import as_stream

SCHEMA = "rrl-report/1"
SIZE_BUDGET = 10 ** 7


# -- generators -------------------------------------------------------------


def _check_size(params: Params, budget: int) -> None:
    cells = sum(params.edge_count(I) for I in params.index_sets())
    if cells > budget:
        raise BudgetExceeded(f"{cells} table cells exceed the size budget {budget}")


def constant_graph(params: Params, color: int = 0, budget: int = SIZE_BUDGET) -> ColoredHypergraph:
    _check_size(params, budget)
    return ColoredHypergraph.constant(params, color)


def random_graph(params: Params, probs, rng, lower: dict | None = None, budget: int = SIZE_BUDGET) -> ColoredHypergraph:
    """Top edges colored i.i.d. from ``probs``; arity ``a < k`` from ``lower[a]`` (default single color)."""
    _check_size(params, budget)
    stream = as_stream(rng, "random-graph")
    dists = {params.k: probs}
    dists.update(lower or {})
    tables, sizes = {}, {}
    for I in params.index_sets():
        p = dists.get(len(I))
        if p is None:
            tables[I] = np.zeros(params.shape(I), dtype=np.int64)
            sizes[I] = 1
            continue
        p = np.asarray([float(x) for x in p])
        if np.any(p < 0) or sum(to_fraction(x) for x in p) != 1:
            raise InvalidParams(f"color probabilities must be nonnegative and sum to 1, got {list(p)}")
        u = stream.child(",".join(map(str, I))).random(size=params.shape(I))
        tables[I] = np.searchsorted(np.cumsum(p)[:-1], u, side="right").astype(np.int64)
        sizes[I] = len(p)
    b = tuple(max(params.b[a - 1], max(sizes[I] for I in params.index_sets() if len(I) == a))
              for a in range(1, params.k + 1))
    return ColoredHypergraph(Params(params.r, params.k, b, params.part_sizes), tables, sizes)


def blowup(pattern: ColoredHypergraph, block) -> ColoredHypergraph:
    """Replace every pattern vertex of part ``i`` by ``block[i]`` copies with inherited colors."""
    blocks = (block,) * pattern.r if np.isscalar(block) else tuple(block)
    if len(blocks) != pattern.r or min(blocks) < 1:
        raise InvalidParams("one positive block size per part is required")
    sizes = tuple(n * b for n, b in zip(pattern.params.part_sizes, blocks))
    params = pattern.params.with_sizes(sizes)
    _check_size(params, SIZE_BUDGET)
    maps = [np.arange(n) // b for n, b in zip(sizes, blocks)]
    tables = {I: pattern.tables[I][np.ix_(*(maps[i] for i in I))] for I in pattern.index_sets()}
    return ColoredHypergraph(params, tables, pattern.class_sizes)


def plant(base: ColoredHypergraph, F: SimplicialComplex, count: int, rng) -> ColoredHypergraph:
    """Overwrite ``count`` vertex-disjoint copies of ``F`` into ``base``."""
    h = F.h
    if count * h > min(base.params.part_sizes):
        raise InvalidParams("not enough vertices for vertex-disjoint copies")
    stream = as_stream(rng, "plant")
    picks = [stream.child(i).sample_without_replacement(n, count * h) for i, n in enumerate(base.params.part_sizes)]
    tables = {I: np.array(base.tables[I]) for I in base.index_sets()}
    cons = _constraints(base, F)
    for t in range(count):
        img = [picks[i][t * h:(t + 1) * h] for i in range(base.r)]
        for I, vars_, mc in cons:
            tables[I][tuple(int(img[v // h][v % h]) for v in vars_)] = mc
    return base.replace(tables=tables)


def random_triangle_free(n: int, p: float, rng, r: int = 3) -> ColoredHypergraph:
    """Random tripartite 2-graph with no black triangle: edges 1-2 only between vertices without a common neighbour."""
    if r != 3:
        raise InvalidParams("triangle-free generator builds tripartite graphs")
    stream = as_stream(rng, "triangle-free")
    params = Params(3, 2, (1, 2), (n, n, n))
    a01 = (stream.child("01").random(size=(n, n)) < p).astype(np.int64)
    a02 = (stream.child("02").random(size=(n, n)) < p).astype(np.int64)
    common = (a01.T @ a02) > 0
    a12 = ((stream.child("12").random(size=(n, n)) < p) & ~common).astype(np.int64)
    tables = {(0,): np.zeros(n, np.int64), (1,): np.zeros(n, np.int64), (2,): np.zeros(n, np.int64),
              (0, 1): a01, (0, 2): a02, (1, 2): a12}
    return ColoredHypergraph(params, tables, {(0,): 1, (1,): 1, (2,): 1, (0, 1): 2, (0, 2): 2, (1, 2): 2})


@dataclass
class GeneratorSpec:
    kind: str
    r: int = 3
    k: int = 2
    n: int = 8
    probs: tuple = (0.5, 0.5)
    color: int = 0
    pattern: ColoredHypergraph | None = None
    block: object = 1
    base: ColoredHypergraph | None = None
    forbidden: SimplicialComplex | None = None
    count: int = 1
    seed: int = 0


def generate(spec: GeneratorSpec) -> ColoredHypergraph:
    rng = as_stream(spec.seed, "generate", spec.kind)
    if spec.kind == "constant":
        return constant_graph(Params.uniform(spec.r, spec.k, spec.n, (spec.color + 1,) * spec.k), spec.color)
    if spec.kind == "random":
        params = Params.uniform(spec.r, spec.k, spec.n, (1,) * (spec.k - 1) + (len(spec.probs),))
        return random_graph(params, spec.probs, rng)
    if spec.kind == "blowup":
        if spec.pattern is None:
            raise InvalidParams("blowup needs a pattern")
        return blowup(spec.pattern, spec.block)
    if spec.kind == "planted":
        if spec.base is None or spec.forbidden is None:
            raise InvalidParams("planted needs a base graph and a forbidden graph")
        return plant(spec.base, spec.forbidden, spec.count, rng)
    if spec.kind == "triangle-free":
        return random_triangle_free(spec.n, spec.probs[-1], rng)
    raise InvalidParams(f"unknown generator kind {spec.kind!r}")


# -- farness ---------------------------------------------------------------


@dataclass
class FarnessCertificate:
    lower_bound: int
    method: str
    details: dict = field(default_factory=dict)


def farness_exact(G: ColoredHypergraph, satisfies, budget: int = 200_000) -> FarnessCertificate:
    """Fewest top-edge recolorings reaching a satisfying graph (search by edit count)."""
    tops = [(I, v) for I in G.top_index_sets() for v in itertools.product(*(range(n) for n in G.params.shape(I)))]
    space = math.prod(G.class_sizes[I] ** G.params.edge_count(I) for I in G.top_index_sets())
    if space > budget:
        raise BudgetExceeded(f"recoloring space {space} exceeds budget {budget}")
    tried = 0
    for d in range(len(tops) + 1):
        for chosen in itertools.combinations(tops, d):
            alts = [[c for c in range(G.class_sizes[I]) if c != G.tables[I][v]] for I, v in chosen]
            for colors in itertools.product(*alts):
                tried += 1
                tables = {I: np.array(G.tables[I]) for I in G.top_index_sets()}
                for (I, v), c in zip(chosen, colors):
                    tables[I][v] = c
                if satisfies(G.replace(tables=tables)):
                    return FarnessCertificate(d, "exact", {"candidates": tried})
    raise RuntimeError("no recoloring satisfies the property")


def iter_copies(G: ColoredHypergraph, F: SimplicialComplex, blocked: dict | None = None):
    """Copying maps in lexicographic order, as tuples of images per variable ``(part, local vertex)``.

    ``blocked[I]`` (boolean tables, read live) excludes edges from use.
    """
    cons = _constraints(G, F)
    h = F.h
    nvars = G.r * h
    at_last: dict = {}
    for I, vars_, mc in cons:
        at_last.setdefault(max(vars_), []).append((I, vars_, mc))
    assign = [0] * nvars

    def candidates(v):
        mask = np.ones(G.params.part_sizes[v // h], bool)
        for I, vars_, mc in at_last.get(v, ()):
            idx = tuple(slice(None) if u == v else assign[u] for u in vars_)
            mask &= G.tables[I][idx] == mc
            if blocked is not None and I in blocked:
                mask &= ~blocked[I][idx]
        return np.nonzero(mask)[0]

    def rec(v):
        if v == nvars:
            yield tuple(assign)
            return
        for x in candidates(v):
            assign[v] = int(x)
            yield from rec(v + 1)

    yield from rec(0)


def farness_packing(G: ColoredHypergraph, F: SimplicialComplex) -> FarnessCertificate:
    """Greedy maximal family of copies of ``F`` with pairwise disjoint visible top edges."""
    if any(len(e.index) < F.k for e, _ in F.visible_edges()):
        raise InvalidParams("packing needs a forbidden graph whose visible edges are all top edges")
    cons = _constraints(G, F)
    used = {I: np.zeros(G.params.shape(I), bool) for I in G.top_index_sets()}
    copies = []
    for assign in iter_copies(G, F, used):
        edges = {(I, tuple(assign[u] for u in vars_)) for I, vars_, _ in cons}
        if any(used[I][v] for I, v in edges):
            continue
        for I, v in edges:
            used[I][v] = True
        copies.append(assign)
    return FarnessCertificate(len(copies), "disjoint-packing", {"copies": copies})


# -- experiments -------------------------------------------------------------


class Report:
    """Ordered ``key = value`` lines with a schema header."""

    def __init__(self):
        self.items: list = []

    def add(self, key: str, value) -> None:
        self.items.append((key, _fmt_value(value)))

    def extend(self, prefix: str, lines) -> None:
        for ln in lines:
            k, _, v = ln.partition(" = ")
            self.items.append((f"{prefix}.{k}", v))

    def render(self) -> str:
        return f"schema = {SCHEMA}\n" + "".join(f"{k} = {v}\n" for k, v in self.items)


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except RRLError as exc:
        raise StageError(name, exc) from exc


def _graph_from_section(sec, seed: int, base_dir: Path) -> ColoredHypergraph:
    kind = sec.get("kind", "random")
    if "input" in sec:
        return cph.load(base_dir / sec["input"])
    probs = tuple(float(x) for x in sec.get("probs", "0.5 0.5").split())
    spec = GeneratorSpec(kind=kind, r=sec.getint("r", 3), k=sec.getint("k", 2), n=sec.getint("n", 8),
                         probs=probs, color=sec.getint("color", 0), block=sec.getint("block", 1),
                         count=sec.getint("count", 1), seed=seed)
    if kind == "blowup":
        spec.pattern = cph.load(base_dir / sec["pattern"])
    if kind == "planted":
        spec.base = cph.load(base_dir / sec["base"]) if "base" in sec else random_graph(
            Params.uniform(spec.r, spec.k, spec.n, (1,) * (spec.k - 1) + (len(probs),)), probs,
            as_stream(seed, "planted-base"))
        spec.forbidden = cph.load(base_dir / sec["forbidden"])
    return generate(spec)


def _family_from_section(sec, base_dir: Path) -> Family:
    if "path" in sec:
        return load_family(base_dir / sec["path"])
    return parse_family(f"fam\nbuiltin {sec.get('builtin', 'triangle-free')}\n")


def run_experiment(config, base_dir=None) -> Report:
    """Run the experiment described by an INI file path or text; identical configs give identical reports."""
    from .pipeline import PipelineConfig, edit_stage, removal_pipeline
    from .tester import PropertyOracle, TesterConfig, run_tester

    parser = configparser.ConfigParser()
    text = config
    if isinstance(config, Path) or (isinstance(config, str) and "\n" not in config and Path(config).exists()):
        base_dir = Path(config).parent if base_dir is None else base_dir
        text = Path(config).read_text()
    base_dir = Path(base_dir or ".")
    parser.read_string(text)
    exp = parser["experiment"]
    kind = exp.get("kind")
    seed = exp.getint("seed", 0)
    rep = Report()
    rep.add("experiment.kind", kind)
    rep.add("experiment.seed", seed)
    gen = parser["generate"] if parser.has_section("generate") else parser["DEFAULT"]
    for key in sorted(gen):
        rep.add(f"generate.{key}", gen[key])
    instances = gen.getint("instances", 1)
    fam = _family_from_section(parser["family"] if parser.has_section("family") else parser["DEFAULT"], base_dir)

    if kind == "tester":
        t = parser["tester"]
        cfg = TesterConfig(t.getfloat("c"), t.getint("h0"), t.getint("trials", fallback=None))
        runs = t.getint("runs", 1)
        oracle = PropertyOracle.from_family(fam)
        rejections = 0
        satisfying = 0
        for i in range(instances):
            G = _stage("generate", _graph_from_section, gen, seed + i, base_dir)
            satisfying += int(_stage("oracle", oracle.satisfies, G))
            for j in range(runs):
                out = _stage("tester", run_tester, G, oracle, cfg, as_stream(seed, "run", i, j))
                rejections += int(out.rejected)
        rep.add("tester.rounds", cfg.rounds)
        rep.add("tester.instances", instances)
        rep.add("tester.satisfying_instances", satisfying)
        rep.add("tester.runs", instances * runs)
        rep.add("tester.rejections", rejections)
    elif kind == "editor":
        eps = parser["editor"].getfloat("epsilon", 0.1) if parser.has_section("editor") else 0.1
        for i in range(instances):
            G = _stage("generate", _graph_from_section, gen, seed + i, base_dir)
            G_prime, result, size, diag = _stage("editor", edit_stage, G, eps, PipelineConfig(),
                                                 as_stream(seed, "editor", i))
            for key in sorted(diag):
                rep.add(f"instance{i}.{key}", diag[key])
            rep.extend(f"instance{i}.edit", size.lines())
            changed = sum(int((G_prime.tables[I] != G.tables[I]).sum()) for I in G.top_index_sets())
            rep.add(f"instance{i}.edited_top_edges", changed)
    elif kind == "removal":
        eps = parser["editor"].getfloat("epsilon", 0.1) if parser.has_section("editor") else 0.1
        for i in range(instances):
            G = _stage("generate", _graph_from_section, gen, seed + i, base_dir)
            res = _stage("pipeline", removal_pipeline, G, fam, eps, PipelineConfig(), as_stream(seed, "pipeline", i))
            rep.extend(f"instance{i}", res.lines())
            if res.witness is not None and res.witness.estimate.mode == "exact":
                est = _stage("counting", copy_probability, G, res.witness.member, "sampled", 20_000,
                             as_stream(seed, "check", i))
                lo, hi = est.interval
                rep.add(f"instance{i}.check.sampled", est.value)
                rep.add(f"instance{i}.check.interval", f"{lo!r} {hi!r}")
                rep.add(f"instance{i}.check.contains_exact", lo <= float(res.witness.estimate.value) <= hi)
    elif kind == "counting":
        c = parser["counting"] if parser.has_section("counting") else parser["DEFAULT"]
        samples = c.getint("samples", 10_000)
        for i in range(instances):
            G = _stage("generate", _graph_from_section, gen, seed + i, base_dir)
            for n, F in enumerate(fam.members_for(G)):
                ex = _stage("counting", copy_probability, G, F, "exact")
                sm = _stage("counting", copy_probability, G, F, "sampled", samples, as_stream(seed, "count", i, n))
                rep.add(f"instance{i}.member{n}.exact", ex.value)
                rep.add(f"instance{i}.member{n}.sampled", sm.value)
                rep.add(f"instance{i}.member{n}.interval", f"{sm.interval[0]!r} {sm.interval[1]!r}")
    elif kind == "farness":
        for i in range(instances):
            G = _stage("generate", _graph_from_section, gen, seed + i, base_dir)
            members = fam.members_for(G)
            for n, F in enumerate(members):
                cert = _stage("farness", farness_packing, G, F)
                rep.add(f"instance{i}.member{n}.packing", cert.lower_bound)
    else:
        raise StageError("config", InvalidParams(f"unknown experiment kind {kind!r}"))
    return rep
