"""Regularity certificates, their verification and fitting, and ordinary color sets.

A certificate ``delta`` assigns a slack to every total color.  A graph is
``(eps, k, h)``-regular under ``delta`` when (i) every ``h``-vertex complex
embeds with probability inside the product of ``d +- delta`` intervals of its
visible edges and (ii) ``E_e[delta(G<e>)] <= eps / |C_I|`` for every index.

Verification enumerates (or samples) every map ``phi in Phi(h)`` once and
records the colors of all edges of the complete ``h``-per-part pattern.  Only
connected complexes whose used vertices form a prefix of each part are
checked: embedding events of vertex-disjoint components are independent, so
a disconnected complex passes whenever its components do, and relabelling
vertices inside a part changes neither side of (i).  Complexes using a total
color that ``G`` never realizes have probability 0 and an interval that
contains 0, so they are skipped as well.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import ColoredHypergraph, proper_subsets, restrict_colors, subsets
from .errors import BudgetExceeded, PreconditionUnverified
from .exact import Power, float_up, to_fraction
from .regularize import RegularizedGraph, mixed_table, regularize, regularize_vector
from .rng import as_stream
from .sampling import random_map, random_map_vector
from .stats import hoeffding_radius, z_value

MAP_BUDGET = 1 << 18
COMPLEX_BUDGET = 200_000


class DeltaCertificate:
    """Slack per total color; unlisted colors get ``default``."""

    def __init__(self, values=None, default: float = 0.0):
        self.values = {tuple(I): dict(v) for I, v in (values or {}).items()}
        self.default = float(default)

    def get(self, I: tuple, tc: tuple) -> float:
        return self.values.get(I, {}).get(tuple(tc), self.default)

    def exact(self, I: tuple, tc: tuple) -> Fraction:
        """The stored value as the rational its shortest decimal repr denotes."""
        return to_fraction(self.get(I, tc))

    def set(self, I: tuple, tc: tuple, value: float) -> None:
        if not value >= 0 or math.isinf(value):
            raise ValueError("delta values must be finite and nonnegative")
        self.values.setdefault(I, {})[tuple(tc)] = float(value)

    def copy(self) -> "DeltaCertificate":
        return DeltaCertificate(self.values, self.default)

    def expectation(self, G: ColoredHypergraph, I: tuple) -> Fraction:
        """``E_{e in Omega_I}[delta(G<e>)]``, exactly."""
        table = G.density_table(I)
        s = sum(c * self.exact(I, tc) for tc, c in table.tc_counts.items())
        return Fraction(s) / table.total

    def render(self) -> str:
        out = [f"default {self.default!r}"]
        for I in sorted(self.values, key=lambda J: (len(J), J)):
            for tc in sorted(self.values[I]):
                v = self.values[I][tc]
                if v != self.default:
                    out.append(f"delta {','.join(map(str, I))} {' '.join(map(str, tc))} {v!r}")
        return "\n".join(out) + "\n"

    @classmethod
    def parse(cls, text: str) -> "DeltaCertificate":
        d = cls()
        for line in text.splitlines():
            tok = line.split()
            if not tok:
                continue
            if tok[0] == "default":
                d.default = float(tok[1])
            elif tok[0] == "delta":
                I = tuple(int(x) for x in tok[1].split(","))
                d.set(I, tuple(int(x) for x in tok[2:-1]), float(tok[-1]))
        return d


# -- map patterns ---------------------------------------------------------


def pattern_edges(r: int, k: int, h: int) -> tuple:
    """All edges ``(I, verts)`` of the complete ``h``-per-part pattern, arity-major."""
    out = []
    for a in range(1, k + 1):
        for I in itertools.combinations(range(r), a):
            for verts in itertools.product(range(h), repeat=a):
                out.append((I, verts))
    return tuple(out)


def map_count(G: ColoredHypergraph, h: int) -> int:
    return math.prod(n ** h for n in G.params.part_sizes)


class MapPatterns:
    """Distinct colorings of the complete pattern induced by maps, with multiplicities."""

    def __init__(self, G: ColoredHypergraph, h: int, mode: str = "exact", map_budget: int = MAP_BUDGET,
                 samples: int = 20_000, rng=None):
        if h < 1:
            raise ValueError("h must be at least 1")
        self.edges = pattern_edges(G.r, G.k, h)
        self.column = {e: n for n, e in enumerate(self.edges)}
        self.mode = mode
        p = G.params
        if mode == "exact":
            total = map_count(G, h)
            if total > map_budget:
                raise BudgetExceeded(f"{total} maps exceed the exact budget {map_budget}")
            imgs = [np.array(list(itertools.product(range(n), repeat=h)), dtype=np.int64) for n in p.part_sizes]
            grid = tuple(len(a) for a in imgs)
            cols = []
            for I, verts in self.edges:
                idx = []
                for pos, part in enumerate(I):
                    shape = [1] * G.r
                    shape[part] = grid[part]
                    idx.append(imgs[part][:, verts[pos]].reshape(shape))
                cols.append(np.broadcast_to(G.tables[I][tuple(idx)], grid).reshape(-1))
        elif mode == "sampled":
            stream = as_stream(rng, "maps")
            total = int(samples)
            imgs = [stream.child(i).integers(n, size=(total, h)) for i, n in enumerate(p.part_sizes)]
            cols = [G.tables[I][tuple(imgs[part][:, v] for part, v in zip(I, verts))] for I, verts in self.edges]
        else:
            raise ValueError(f"unknown mode {mode!r}")
        rows = np.stack(cols, axis=1)
        self.rows, self.weights = np.unique(rows, axis=0, return_counts=True)
        self.total = total
        self._proj: dict = {}

    def counts(self, cols: tuple) -> dict:
        """Multiplicity of each coloring of the given pattern columns."""
        if cols not in self._proj:
            sub = self.rows[:, list(cols)]
            keys, inv = np.unique(sub, axis=0, return_inverse=True)
            w = np.bincount(inv.reshape(-1), weights=self.weights, minlength=len(keys))
            self._proj[cols] = {tuple(int(x) for x in key): int(round(c)) for key, c in zip(keys, w)}
        return self._proj[cols]


@dataclass(frozen=True)
class Candidate:
    """A connected complex: visible pattern edges with their mother colors."""

    cols: tuple
    colors: tuple
    tcs: tuple  # (I, total color) per visible edge, in column order

    def describe(self, edges) -> tuple:
        return tuple((edges[c], col) for c, col in zip(self.cols, self.colors))


def candidate_complexes(G: ColoredHypergraph, h: int, budget: int = COMPLEX_BUDGET) -> list:
    """Connected, prefix-labelled complexes all of whose total colors ``G`` realizes."""
    edges = pattern_edges(G.r, G.k, h)
    col = {e: n for n, e in enumerate(edges)}
    subs = []
    for I, verts in edges:
        pos = dict(zip(I, verts))
        subs.append(tuple(col[(J, tuple(pos[j] for j in J))] for J in subsets(I)[:-1]))
    allowed = {}
    for I in G.index_sets():
        opts: dict = {}
        for tc in G.density_table(I).tc_counts:
            opts.setdefault(tc[:-1], []).append(tc[-1])
        allowed[I] = {f: tuple(sorted(v)) for f, v in opts.items()}
    prev_vertex = {}
    for n, (I, verts) in enumerate(edges):
        if len(I) == 1 and verts[0] > 0:
            prev_vertex[n] = col[(I, (verts[0] - 1,))]
    out = []
    color = [-1] * len(edges)

    def connected(vis):
        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for n in vis:
            I, verts = edges[n]
            nodes = [(i, v) for i, v in zip(I, verts)]
            for a in nodes[1:]:
                parent[find(a)] = find(nodes[0])
            find(nodes[0])
        return len({find(x) for x in parent}) == 1

    def rec(n):
        if n == len(edges):
            vis = tuple(i for i, c in enumerate(color) if c >= 0)
            if vis and connected(vis):
                if len(out) >= budget:
                    raise BudgetExceeded(f"more than {budget} candidate complexes")
                tcs = []
                for i in vis:
                    I = edges[i][0]
                    tcs.append((I, tuple(color[j] for j in subs[i]) + (color[i],)))
                out.append(Candidate(vis, tuple(color[i] for i in vis), tuple(tcs)))
            return
        rec(n + 1)
        if any(color[j] < 0 for j in subs[n]):
            return
        if n in prev_vertex and color[prev_vertex[n]] < 0:
            return
        I = edges[n][0]
        for c in allowed[I].get(tuple(color[j] for j in subs[n]), ()):
            color[n] = c
            rec(n + 1)
            color[n] = -1

    rec(0)
    return out


# -- verification ---------------------------------------------------------


@dataclass
class Violation:
    complex: tuple  # ((I, verts), mother color) pairs
    observed: object
    interval: tuple


@dataclass
class RegularityReport:
    epsilon: float
    epsilon_fit: Fraction
    condition_i_violations: list
    condition_ii_margins: dict  # I -> (E[delta], eps / |C_I|)
    mode: str
    maps: int
    complexes: int
    confidence: float = 1.0
    radius: float = 0.0
    delta: DeltaCertificate | None = None

    @property
    def condition_ii_ok(self) -> bool:
        return all(e <= allowed for e, allowed in self.condition_ii_margins.values())

    @property
    def verified(self) -> bool:
        return not self.condition_i_violations and self.condition_ii_ok

    def lines(self) -> list:
        out = [f"mode = {self.mode}", f"epsilon = {self.epsilon!r}",
               f"epsilon_fit = {float_up(self.epsilon_fit)!r}", f"maps = {self.maps}",
               f"complexes = {self.complexes}", f"confidence = {self.confidence!r}",
               f"radius = {self.radius!r}", f"violations = {len(self.condition_i_violations)}"]
        for I, (e, allowed) in sorted(self.condition_ii_margins.items(), key=lambda x: (len(x[0]), x[0])):
            out.append(f"margin.{','.join(map(str, I))} = {float(e)!r} <= {float(allowed)!r}")
        out.append(f"verified = {str(self.verified).lower()}")
        return out


def interval(G: ColoredHypergraph, delta: DeltaCertificate, tcs, cache=None) -> tuple:
    """``prod (d_G(tc) -+ delta(tc))`` as an exact closed interval."""
    lo, hi = Fraction(1), Fraction(1)
    for I, tc in tcs:
        key = (I, tc)
        if cache is not None and key in cache:
            a, b = cache[key]
        else:
            d = G.density_table(I).density(tc) or Fraction(0)  # zero-mass frame: the event is empty
            dl = delta.exact(I, tc)
            a, b = max(Fraction(0), d - dl), min(Fraction(1), d + dl)
            if cache is not None:
                cache[key] = (a, b)
        lo *= a
        hi *= b
    return lo, hi


def epsilon_fit(G: ColoredHypergraph, delta: DeltaCertificate) -> Fraction:
    """``max_I |C_I| * E_e[delta(G<e>)]``."""
    return max(G.class_sizes[I] * delta.expectation(G, I) for I in G.index_sets())


class _Checker:
    """Shared state for verifying and fitting one graph at one ``h``."""

    def __init__(self, G, h, mode, map_budget, complex_budget, samples, rng):
        self.G = G
        self.patterns = MapPatterns(G, h, mode, map_budget, samples, rng)
        self.cands = candidate_complexes(G, h, complex_budget)
        self.prob = []
        for c in self.cands:
            n = self.patterns.counts(c.cols).get(c.colors, 0)
            self.prob.append(Fraction(n, self.patterns.total))

    def violations(self, delta, alpha=None):
        cache: dict = {}
        t = 0.0 if alpha is None else hoeffding_radius(self.patterns.total, alpha, len(self.cands))
        out = []
        for c, p in zip(self.cands, self.prob):
            lo, hi = interval(self.G, delta, c.tcs, cache)
            if t == 0.0:
                bad = not lo <= p <= hi
            else:
                bad = float(p) + t < float(lo) or float(p) - t > float(hi)
            if bad:
                out.append((c, p, (lo, hi)))
        return out, t


def _report(G, checker, delta, eps, confidence) -> RegularityReport:
    sampled = checker.patterns.mode == "sampled"
    viol, t = checker.violations(delta, 1 - confidence if sampled else None)
    eps_q = to_fraction(eps)
    margins = {I: (delta.expectation(G, I), eps_q / G.class_sizes[I]) for I in G.index_sets()}
    edges = checker.patterns.edges
    return RegularityReport(
        epsilon=float(eps), epsilon_fit=epsilon_fit(G, delta),
        condition_i_violations=[Violation(c.describe(edges), p, iv) for c, p, iv in viol],
        condition_ii_margins=margins, mode=checker.patterns.mode, maps=checker.patterns.total,
        complexes=len(checker.cands), confidence=confidence if sampled else 1.0, radius=t, delta=delta)


def verify_regularity(G: ColoredHypergraph, h: int, delta: DeltaCertificate, eps, mode: str = "exact", *,
                      map_budget: int = MAP_BUDGET, complex_budget: int = COMPLEX_BUDGET, samples: int = 20_000,
                      confidence: float = 0.95, rng=None) -> RegularityReport:
    """Check conditions (i) and (ii) of ``(eps, k, h)``-regularity for the certificate ``delta``."""
    checker = _Checker(G, h, mode, map_budget, complex_budget, samples, rng)
    return _report(G, checker, delta, eps, confidence)


@dataclass
class FitResult:
    delta: DeltaCertificate
    epsilon_fit: float
    report: RegularityReport

    def __iter__(self):
        return iter((self.delta, self.epsilon_fit))


def _inflate(G, delta, tcs, target, t_cap: float = 1.0) -> bool:
    """Add the least uniform slack to the given total colors so ``target`` fits the interval."""
    keys = sorted(set(tcs))
    base = {key: delta.get(*key) for key in keys}

    def fits(t):
        trial = delta.copy()
        for key in keys:
            trial.set(*key, base[key] + t)
        lo, hi = interval(G, trial, tcs)
        return lo <= target <= hi

    if fits(0.0):
        return True
    if not fits(t_cap):
        return False
    lo_t, hi_t = 0.0, t_cap
    for _ in range(64):
        mid = (lo_t + hi_t) / 2
        if mid in (lo_t, hi_t):
            break
        if fits(mid):
            hi_t = mid
        else:
            lo_t = mid
    for key in keys:
        delta.set(*key, base[key] + hi_t)
    return True


def fit_delta(G: ColoredHypergraph, h: int = 1, mode: str = "exact", *, map_budget: int = MAP_BUDGET,
              complex_budget: int = COMPLEX_BUDGET, samples: int = 20_000, confidence: float = 0.95,
              rng=None) -> FitResult:
    """Heuristic certificate: single-edge residuals first, then uniform inflation of violated complexes."""
    checker = _Checker(G, h, mode, map_budget, complex_budget, samples, rng)
    delta = DeltaCertificate()
    for I in G.index_sets():
        table = G.density_table(I)
        for tc in table.realized():
            tcs = tuple((J, restrict_colors(I, tc, J)) for J in subsets(I))
            _inflate_top(G, delta, tcs, table.probability(tc))
    viol, _ = checker.violations(delta)
    for c, p, _iv in viol:
        _inflate(G, delta, list(c.tcs), p)
    eps_fit = float_up(epsilon_fit(G, delta))
    return FitResult(delta, eps_fit, _report(G, checker, delta, eps_fit, confidence))


def _inflate_top(G, delta, tcs, target) -> None:
    """Single-edge complex: widen only the slack of its top total color."""
    top = tcs[-1]
    base = delta.get(*top)

    def fits(t):
        trial = delta.copy()
        trial.set(*top, base + t)
        lo, hi = interval(G, trial, tcs)
        return lo <= target <= hi

    if fits(0.0) or not fits(1.0):
        return
    lo_t, hi_t = 0.0, 1.0
    for _ in range(64):
        mid = (lo_t + hi_t) / 2
        if mid in (lo_t, hi_t):
            break
        if fits(mid):
            hi_t = mid
        else:
            lo_t = mid
    delta.set(*top, base + hi_t)


# -- ordinary color sets --------------------------------------------------


def ordinary_membership(G: ColoredHypergraph, I: tuple, colors, delta: DeltaCertificate, alpha,
                        frame: bool = False) -> bool:
    """Membership of a total color (or a frame) of ``I`` in the ordinary set ``O^alpha``.

    Every restriction to ``I* subset I`` (proper subsets only for a frame) needs
    ``d >= alpha^(1/3) / |C_{I*}|`` and ``delta <= alpha^(2/3) / |C_{I*}|``;
    zero-mass frames fail the density test.
    """
    a = Power.of(alpha)
    d_thr, s_thr = Power(a.base, a.p, 3 * a.q), Power(a.base, 2 * a.p, 3 * a.q)
    subs = proper_subsets(I) if frame else subsets(I)
    for J in subs:
        tc = restrict_colors(I, colors, J)
        n = G.class_sizes[J]
        d = G.density_table(J).density(tc)
        if d is None or not d_thr.le(d * n):
            return False
        if not s_thr.ge(delta.exact(J, tc) * n):
            return False
    return True


@dataclass
class OrdinaryBoundReport:
    rows: dict  # I -> (measured probability, bound as float, holds)

    @property
    def holds(self) -> bool:
        return all(ok for _, _, ok in self.rows.values())


def measure_non_ordinary(H: ColoredHypergraph, I: tuple, delta: DeltaCertificate, eps) -> Fraction:
    """``P_e[H<e> not in O^eps TC_I(H)]`` by exact enumeration."""
    table = H.density_table(I)
    bad = sum(c for tc, c in table.tc_counts.items() if not ordinary_membership(H, I, tc, delta, eps))
    return Fraction(bad, table.total)


def non_ordinary_bound(H: ColoredHypergraph, delta: DeltaCertificate, eps, *, verify: bool = True,
                       **budgets) -> OrdinaryBoundReport:
    """Measure ``P[H<e> not ordinary] <= 2^{|I|+1} eps^{1/3}`` for every index.

    The bound presupposes ``(eps, k, 1)``-regularity under ``delta``; with
    ``verify`` set that is checked first.
    """
    if verify:
        rep = verify_regularity(H, 1, delta, eps, **budgets)
        if not rep.verified:
            raise PreconditionUnverified("certificate does not verify (eps, k, 1)-regularity")
    e = to_fraction(eps)
    rows = {}
    for I in H.index_sets():
        p = measure_non_ordinary(H, I, delta, e)
        scale = 2 ** (len(I) + 1)
        holds = (p / scale) ** 3 <= e
        rows[I] = (p, scale * float(e) ** (1 / 3), holds)
    return OrdinaryBoundReport(rows)


# -- mean-square condition -------------------------------------------------


@dataclass
class MeanSquareEstimate:
    index: tuple
    mean: float
    stderr: float
    samples: int
    exact: bool = False

    def holds(self, eps, class_size: int, confidence: float = 0.95) -> bool:
        z = 0.0 if self.exact else z_value(confidence)
        return self.mean - z * self.stderr <= (float(eps) / class_size) ** 2


def mean_square_deviation(G: ColoredHypergraph, R: RegularizedGraph, I: tuple) -> float:
    """``E_{e*} sum_c (d_{G/phi}(c | frame*) - d_G(c | G-frame))^2`` for one regularization."""
    F = R.graph
    mixed = mixed_table(G, F, I)
    plain = G.density_table(I)
    n = G.class_sizes[I]
    total = 0.0
    for frame, cnt in mixed.frame_counts.items():
        gframe = R.base_colors(I, frame, frame=True)
        gmass = plain.frame_counts[gframe]
        s = 0.0
        for c in range(n):
            a = mixed.tc_counts.get(frame + (c,), 0) / cnt
            b = plain.tc_counts.get(gframe + (c,), 0) / gmass
            s += (a - b) ** 2
        total += cnt * s
    return total / mixed.total


def _ms_for_map(G, phi, cache):
    key = tuple(phi.image_set(i) for i in range(G.r))
    if key not in cache:
        R = regularize(G, G.k - 1, phi)
        cache[key] = {I: mean_square_deviation(G, R, I) for I in G.index_sets()}
    return cache[key]


def mean_square_condition(G: ColoredHypergraph, L: int, samples: int, rng=None) -> dict:
    """Monte-Carlo estimate over ``phi in Phi(L)`` of the mean-square deviation, per index."""
    if L < 1:
        raise ValueError("L must be at least 1")
    if G.k == 1:
        return {I: MeanSquareEstimate(I, 0.0, 0.0, 0, True) for I in G.index_sets()}
    stream = as_stream(rng, "mean-square")
    cache: dict = {}
    vals = {I: [] for I in G.index_sets()}
    for s in range(samples):
        phi = random_map(G.params, L, stream.child(s))
        for I, v in _ms_for_map(G, phi, cache).items():
            vals[I].append(v)
    out = {}
    for I, v in vals.items():
        arr = np.asarray(v)
        se = float(arr.std(ddof=1) / math.sqrt(len(arr))) if len(arr) > 1 else math.inf
        out[I] = MeanSquareEstimate(I, float(arr.mean()), se, len(arr))
    return out


def mean_square_exact(G: ColoredHypergraph, L: int, budget: int = MAP_BUDGET) -> dict:
    """Exact average over every map in ``Phi(L)``."""
    if G.k == 1:
        return {I: MeanSquareEstimate(I, 0.0, 0.0, 0, True) for I in G.index_sets()}
    total = map_count(G, L)
    if total > budget:
        raise BudgetExceeded(f"{total} maps exceed budget {budget}")
    from .sampling import PartitionwiseMap
    cache: dict = {}
    acc = {I: 0.0 for I in G.index_sets()}
    per_part = [list(itertools.product(range(n), repeat=L)) for n in G.params.part_sizes]
    for images in itertools.product(*per_part):
        for I, v in _ms_for_map(G, PartitionwiseMap(images), cache).items():
            acc[I] += v
    return {I: MeanSquareEstimate(I, acc[I] / total, 0.0, total, True) for I in G.index_sets()}


def mean_square_holds(G: ColoredHypergraph, estimates: dict, eps, confidence: float = 0.95) -> bool:
    return all(est.holds(eps, G.class_sizes[I], confidence) for I, est in estimates.items())


# -- search -----------------------------------------------------------------


@dataclass
class SearchResult:
    phis: tuple
    regularized: RegularizedGraph | None
    fit: FitResult | None
    reached: bool
    sizes: tuple
    attempts: int
    skipped: int
    mean_square: dict | None = None

    @property
    def not_reached(self) -> bool:
        return not self.reached

    @property
    def report(self) -> RegularityReport | None:
        return None if self.fit is None else self.fit.report


def size_schedule(k: int, max_size: int, rounds: int):
    """``(1,..,1)``, then double one coordinate at a time, round-robin."""
    m = [1] * (k - 1)
    yield tuple(m)
    if k == 1:
        return
    j = 0
    for _ in range(rounds):
        for _ in range(k - 1):
            if m[j] * 2 <= max_size:
                break
            j = (j + 1) % (k - 1)
        else:
            return
        m[j] *= 2
        j = (j + 1) % (k - 1)
        yield tuple(m)


def regularity_search(G, eps, h: int = 1, L_fn=None, *, trials: int = 16, max_size: int = 4, rounds: int = 8,
                      mode: str = "exact", map_budget: int = MAP_BUDGET, complex_budget: int = COMPLEX_BUDGET,
                      samples: int = 20_000, ms_samples: int = 200, confidence: float = 0.95,
                      rng=None) -> SearchResult:
    """Iterative deepening over map-vector sizes; the first draw with ``eps_fit <= eps`` wins.

    With ``L_fn`` the mean-square condition at ``L_fn(sizes)`` must hold too.
    Otherwise the draw with the smallest fitted epsilon is returned, flagged
    as not reached.
    """
    base = G.base if isinstance(G, RegularizedGraph) else G
    stream = as_stream(rng, "search")
    best = None
    attempts = skipped = 0
    target = to_fraction(eps)
    for sizes in size_schedule(base.k, max_size, rounds):
        for t in range(trials if base.k > 1 else 1):
            sub = stream.child(*sizes, t)
            phis = random_map_vector(base.params, sizes, sub)
            R = regularize_vector(G, phis)
            attempts += 1
            try:
                fit = fit_delta(R.graph, h, mode, map_budget=map_budget, complex_budget=complex_budget,
                                samples=samples, confidence=confidence, rng=sub.child("fit"))
            except BudgetExceeded:
                skipped += 1
                continue
            ok = fit.report.verified and Fraction(fit.epsilon_fit) <= target
            ms = None
            if ok and L_fn is not None:
                ms = mean_square_condition(R.graph, L_fn(sizes), ms_samples, sub.child("ms"))
                ok = mean_square_holds(R.graph, ms, eps, confidence)
            result = SearchResult(phis, R, fit, ok, sizes, attempts, skipped, ms)
            if ok:
                return result
            if best is None or fit.epsilon_fit < best.fit.epsilon_fit:
                best = result
    if best is None:
        return SearchResult((), None, None, False, (), attempts, skipped)
    best.attempts, best.skipped, best.reached = attempts, skipped, False
    return best
