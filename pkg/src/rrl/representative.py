"""Sampled color representatives: the ``d``-colors, the lookup maps ``theta`` and ``vartheta``.

For every vector ``a = (a_J)_{J subset I}`` with ``a_J in [L_|J|]`` a
representative color ``d_I(a)`` of the regularized graph ``H/psi`` is drawn
by picking a uniform edge whose regularized frame equals
``(d_J(a|_J))_{J proper}``.  ``theta`` then sends a total color of ``H`` to
a vector ``a`` whose representatives project back onto it, or to 0 when no
such choice exists; ``vartheta`` reads the representatives off that vector
and returns :data:`NULL` whenever ``theta`` hit 0.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import ColoredHypergraph, proper_subsets, restrict_colors, subsets
from .exact import Power, to_fraction
from .regularity import DeltaCertificate, ordinary_membership
from .regularize import RegularizedGraph, mixed_table
from .rng import RngStream, as_stream


class _Null:
    """The null representative; it belongs to no color class."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NULL"

    def __bool__(self):
        return False


NULL = _Null()


def draw_count(r: int, k: int, L) -> int:
    """``|A| = sum_i C(r, i) prod_{j <= i} L_j^{C(i, j)}``: number of representative draws."""
    return sum(math.comb(r, i) * math.prod(L[j - 1] ** math.comb(i, j) for j in range(1, i + 1))
               for i in range(1, k + 1))


def default_L(b_prime, eps, budget: int | None = None, r: int | None = None) -> tuple:
    """``L_i = ceil(8 b'_i / eps)``, halving the largest entry until ``|A|`` fits ``budget``."""
    e = to_fraction(eps)
    L = [math.ceil(Fraction(8 * b) / e) for b in b_prime]
    if budget is not None:
        if r is None:
            raise ValueError("r is needed to apply a draw budget")
        while draw_count(r, len(L), L) > budget and max(L) > 1:
            j = max(range(len(L)), key=lambda i: (L[i], i))
            L[j] = max(1, L[j] // 2)
    return tuple(L)


def default_eps1(eps) -> float:
    return 1e-3 * float(eps) ** 2


def a_vectors(I: tuple, L) -> list:
    """All ``a in A_I`` as tuples aligned with :func:`subsets`, in product order."""
    return list(itertools.product(*(range(1, L[len(J) - 1] + 1) for J in subsets(I))))


@dataclass
class RepresentativeTable:
    reg: RegularizedGraph
    L: tuple
    d: dict
    transcript: list
    seed: int
    path: tuple
    theta_cache: dict = field(default_factory=dict)
    ordinary_cache: dict = field(default_factory=dict)

    @property
    def H(self) -> ColoredHypergraph:
        return self.reg.base

    @property
    def Hstar(self) -> ColoredHypergraph:
        return self.reg.graph

    def d_color(self, I: tuple, a: tuple):
        return self.d[I].get(tuple(a))

    def theta(self, I: tuple, tc: tuple) -> int:
        """``theta_I`` of a total color of ``H``; 0 when some lower entry is 0 or ``L*`` is empty."""
        key = (I, tuple(tc))
        if key in self.theta_cache:
            return self.theta_cache[key]
        a = []
        for J in proper_subsets(I):
            aj = self.theta(J, restrict_colors(I, tc, J))
            if aj == 0:
                self.theta_cache[key] = 0
                return 0
            a.append(aj)
        origin = self.reg.origin[I]
        Lstar = []
        for aI in range(1, self.L[len(I) - 1] + 1):
            c = self.d[I].get(tuple(a) + (aI,))
            if c is not None and int(origin[c]) == tc[-1]:
                Lstar.append(aI)
        if not Lstar:
            val = 0
        elif len(Lstar) == 1:
            val = Lstar[0]
        else:
            stream = RngStream(self.seed, self.path + ("theta", _fmt(I), " ".join(map(str, tc))))
            val = Lstar[stream.integers(len(Lstar))]
        self.theta_cache[key] = val
        return val

    def theta_vector(self, I: tuple, colors, frame: bool = False) -> tuple:
        subs = proper_subsets(I) if frame else subsets(I)
        return tuple(self.theta(J, restrict_colors(I, colors, J)) for J in subs)

    def vartheta(self, I: tuple, colors, frame: bool = False):
        """Representative total color (or frame) of ``H/psi``, or :data:`NULL`."""
        th = self.theta_vector(I, colors, frame)
        if any(a == 0 for a in th):
            return NULL
        subs = proper_subsets(I) if frame else subsets(I)
        return tuple(self.d[J][restrict_colors(I, th, J)] for J in subs)

    def render(self) -> str:
        lines = [f"representative {self.seed} {'/'.join(self.path)}", "L " + " ".join(map(str, self.L))]
        for I, a, edge, color in self.transcript:
            e = "-" if edge is None else str(edge)
            c = "-" if color is None else str(color)
            lines.append(f"draw {_fmt(I)} {' '.join(map(str, a))} {e} {c}")
        return "\n".join(lines) + "\n"


def _fmt(I) -> str:
    return ",".join(map(str, I))


def build_d_colors(reg: RegularizedGraph, L, rng) -> RepresentativeTable:
    """Draw every ``d_I(a)`` by arity; empty fibers are recorded as ``None``."""
    stream = as_stream(rng, "representative")
    Hs = reg.graph
    L = tuple(int(x) for x in L)
    if len(L) != Hs.k or min(L) < 1:
        raise ValueError(f"L must hold k={Hs.k} positive integers")
    d: dict = {}
    transcript = []
    for I in Hs.index_sets():
        rows = Hs.tc_array(I)
        frames = rows[:, :-1]
        fibers: dict = {}
        if frames.shape[1]:
            keys, inv = np.unique(frames, axis=0, return_inverse=True)
            inv = inv.reshape(-1)
            order = np.argsort(inv, kind="stable")
            bounds = np.searchsorted(inv[order], np.arange(len(keys) + 1))
            for n, key in enumerate(keys):
                fibers[tuple(int(x) for x in key)] = order[bounds[n]:bounds[n + 1]]
        else:
            fibers[()] = np.arange(rows.shape[0])
        sub = stream.child("d", _fmt(I))
        d[I] = {}
        for a in a_vectors(I, L):
            frame = []
            for J in proper_subsets(I):
                frame.append(d[J].get(restrict_colors(I, a, J)))
            fiber = None if any(c is None for c in frame) else fibers.get(tuple(frame))
            if fiber is None or len(fiber) == 0:
                d[I][a] = None
                transcript.append((I, a, None, None))
                continue
            edge = int(fiber[sub.integers(len(fiber))])
            color = int(rows[edge, -1])
            d[I][a] = color
            transcript.append((I, a, edge, color))
    return RepresentativeTable(reg, L, d, transcript, stream.seed, stream.path)


def build_theta(table: RepresentativeTable) -> RepresentativeTable:
    """Evaluate ``theta`` on every realized total color of ``H`` (further values are computed lazily)."""
    H = table.H
    for I in H.index_sets():
        for tc in H.density_table(I).realized():
            table.theta(I, tc)
    return table


def build_table(reg: RegularizedGraph, L, rng) -> RepresentativeTable:
    return build_theta(build_d_colors(reg, L, rng))


def replay_table(reg: RegularizedGraph, text: str) -> RepresentativeTable:
    """Rebuild a table from :meth:`RepresentativeTable.render` output without fresh draws."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    seed = int(lines[0][1])
    path = tuple(lines[0][2].split("/")) if len(lines[0]) > 2 else ()
    L = tuple(int(x) for x in lines[1][1:])
    d: dict = {I: {} for I in reg.graph.index_sets()}
    transcript = []
    for tok in lines[2:]:
        I = tuple(int(x) for x in tok[1].split(","))
        a = tuple(int(x) for x in tok[2:-2])
        edge = None if tok[-2] == "-" else int(tok[-2])
        color = None if tok[-1] == "-" else int(tok[-1])
        d[I][a] = color
        transcript.append((I, a, edge, color))
    return build_theta(RepresentativeTable(reg, L, d, transcript, seed, path))


def is_ordinary_frame(table: RepresentativeTable, I: tuple, frame_star, eps1, gamma, alpha,
                      delta_star: DeltaCertificate | None = None) -> bool:
    """``(eps1, gamma, alpha)``-ordinarity of a regularized frame ``frame_star`` of ``I``.

    (i) ``frame_star`` lies in ``O^eps1`` of the regularized graph under ``delta_star``;
    (ii) for every ``J subset I`` the squared deviations between the mixed density
    (frame read in ``H/psi``) and the plain density of ``H`` (frame mapped back)
    sum to at most ``(gamma / |C_J(H)|)^2``; (iii) every color ``c`` with
    ``d_H(c | H[frame_star]) >= alpha / |C_I(H)|`` has a representative.
    ``alpha`` may be ``inf`` to drop (iii).  Zero-mass frames are never ordinary.
    """
    if frame_star is NULL:
        return False
    frame_star = tuple(frame_star)
    g, a = Power.of(gamma), Power.of(alpha)
    key = (I, frame_star, g, a, to_fraction(eps1), id(delta_star))
    if key in table.ordinary_cache:
        return table.ordinary_cache[key]
    ok = _ordinary_frame(table, I, frame_star, eps1, g, a, delta_star or DeltaCertificate())
    table.ordinary_cache[key] = ok
    return ok


def _ordinary_frame(table, I, frame_star, eps1, g, a, delta_star) -> bool:
    H, Hs, reg = table.H, table.Hstar, table.reg
    if not ordinary_membership(Hs, I, frame_star + (0,), delta_star, eps1, frame=True):
        return False
    g2 = g.pow(2)
    for J in subsets(I):
        fJ = frame_star if J == I else restrict_colors(I, frame_star, J)[:-1]
        mixed = mixed_table(H, Hs, J)
        plain = H.density_table(J)
        base_frame = reg.base_colors(J, fJ, frame=True)
        n = H.class_sizes[J]
        s = Fraction(0)
        for c in range(n):
            dm = mixed.density(fJ + (c,))
            dp = plain.density(base_frame + (c,))
            if dm is None or dp is None:
                return False
            s += (dm - dp) ** 2
        if not g2.ge(s * n * n):
            return False
    if not a.infinite:
        base_frame = reg.base_colors(I, frame_star, frame=True)
        plain = H.density_table(I)
        n = H.class_sizes[I]
        for c in range(n):
            dp = plain.density(base_frame + (c,))
            if dp is None:
                return False
            if a.le(dp * n) and table.vartheta(I, base_frame + (c,)) is NULL:
                return False
    return True
