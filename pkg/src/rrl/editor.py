"""Arity-by-arity recoloring of ``H`` guided by a representative table.

Each edge ``e`` of arity ``s`` sees the already rewritten frame
``c = H'(boundary e)`` and its old color ``H(e)``:

* case 1  -- ``vartheta(c)`` is ordinary and ``d_H(H(e) | c) >= eps^(1/3) / |C_I|``: keep;
* case 1' -- ordinary but the old color is rare: take the smallest color of density ``>= 1 / |C_I|``;
* case 2  -- not ordinary: take the smallest color whose completed total color has an
  ordinary representative.

The decision depends only on ``(c, H(e))``, so it is made once per distinct pair.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import ColoredHypergraph, proper_subsets, subsets
from .errors import EditorStuck
from .exact import Power, to_fraction
from .regularity import DeltaCertificate, ordinary_membership
from .representative import NULL, RepresentativeTable, is_ordinary_frame

CASE_KEEP, CASE_RARE, CASE_REPAIR = 1, 2, 3
CASE_NAMES = {CASE_KEEP: "1", CASE_RARE: "1'", CASE_REPAIR: "2"}


@dataclass
class EditResult:
    H: ColoredHypergraph
    H_prime: ColoredHypergraph
    cases: dict  # I -> int8 table of case codes
    decisions: dict  # I -> {(frame, old color): (case, new color)}
    stuck: list  # (I, frame, old color, reason)
    certificate_failures: list  # (I, total color of H')
    ordinariness: dict = field(default_factory=dict)

    def face_edit_fraction(self, I: tuple) -> Fraction:
        changed = int(np.count_nonzero(self.H_prime.tables[I] != self.H.tables[I]))
        return Fraction(changed, self.H.tables[I].size)

    def total_color_change_fraction(self, I: tuple) -> Fraction:
        return Fraction(int(np.count_nonzero(self.total_color_changed(I))), self.H.tables[I].size)

    def total_color_changed(self, I: tuple) -> np.ndarray:
        shape = self.H.params.shape(I)
        out = np.zeros(shape, bool)
        for J in subsets(I):
            diff = self.H_prime.tables[J] != self.H.tables[J]
            out |= _broadcast(diff, J, I, shape)
        return out

    @property
    def per_index_edit_fraction(self) -> dict:
        return {I: self.face_edit_fraction(I) for I in self.H.index_sets()}

    def histogram(self, I: tuple) -> dict:
        vals, counts = np.unique(self.ordinariness[I], return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}

    def case_summary(self) -> dict:
        out = Counter()
        for I, t in self.cases.items():
            for code, n in zip(*np.unique(t, return_counts=True)):
                out[CASE_NAMES[int(code)]] += int(n)
        return dict(sorted(out.items()))


def _broadcast(t, J, I, shape):
    view = [1] * len(I)
    for j, n in zip(J, t.shape):
        view[I.index(j)] = n
    return np.broadcast_to(t.reshape(view), shape)


def _frames(tables: dict, params, I: tuple) -> np.ndarray:
    shape = params.shape(I)
    cols = [_broadcast(tables[J], J, I, shape).reshape(-1) for J in proper_subsets(I)]
    if not cols:
        return np.zeros((int(np.prod(shape)), 0), dtype=np.int64)
    return np.stack(cols, axis=1)


def modify(table: RepresentativeTable, eps, eps1, delta_star: DeltaCertificate | None = None,
           strict: bool = False) -> EditResult:
    """Run the sweep ``S_1 .. S_k`` and return the recolored graph with its case log."""
    H = table.H
    Hs = table.Hstar
    delta_star = delta_star or DeltaCertificate()
    e = to_fraction(eps)
    gamma, alpha = Power(e, 2, 3), Power(e, 1, 3)
    tables = {I: np.array(H.tables[I]) for I in H.index_sets()}
    cases, decisions, stuck, failures = {}, {}, [], []

    def rep_ordinary(I, tc):
        vt = table.vartheta(I, tc)
        return vt is not NULL and ordinary_membership(Hs, I, vt, delta_star, eps1)

    for I in H.index_sets():
        frames = _frames(tables, H.params, I)
        old = H.tables[I].reshape(-1)
        pairs = np.concatenate([frames, old[:, None]], axis=1)
        keys, inv = np.unique(pairs, axis=0, return_inverse=True)
        inv = inv.reshape(-1)
        dens = H.density_table(I)
        n = H.class_sizes[I]
        new_of_key = np.empty(len(keys), dtype=np.int64)
        case_of_key = np.empty(len(keys), dtype=np.int8)
        decisions[I] = {}
        for idx, key in enumerate(keys):
            frame = tuple(int(x) for x in key[:-1])
            c = int(key[-1])
            vt = table.vartheta(I, frame, frame=True)
            ordinary = vt is not NULL and is_ordinary_frame(table, I, vt, eps1, gamma, alpha, delta_star)
            if ordinary:
                d = dens.density(frame + (c,))
                if d is not None and alpha.le(d * n):
                    case, new = CASE_KEEP, c
                else:
                    case = CASE_RARE
                    new = next((x for x in range(n) if (dens.density(frame + (x,)) or 0) * n >= 1), None)
                    if new is None:
                        stuck.append((I, frame, c, "no color of density >= 1/|C_I| under this frame"))
            else:
                case = CASE_REPAIR
                new = next((x for x in range(n) if rep_ordinary(I, frame + (x,))), None)
                if new is None:
                    stuck.append((I, frame, c, "no color completes an ordinary representative"))
            if new is None:
                if strict:
                    raise EditorStuck(f"index {I}, frame {frame}, color {c}: {stuck[-1][3]}")
                new = c
            if not rep_ordinary(I, frame + (new,)):
                failures.append((I, frame + (new,)))
            decisions[I][(frame, c)] = (case, new)
            new_of_key[idx] = new
            case_of_key[idx] = case
        shape = H.params.shape(I)
        tables[I] = new_of_key[inv].reshape(shape)
        cases[I] = case_of_key[inv].reshape(shape)
    H_prime = H.replace(tables=tables)
    result = EditResult(H, H_prime, cases, decisions, stuck, sorted(set(failures)))
    result.ordinariness = {I: ordinariness_table(cases, H.params, I) for I in H.index_sets()}
    return result


def ordinariness_table(cases: dict, params, I: tuple) -> np.ndarray:
    """Largest ``s`` such that every sub-edge of arity ``<= s`` fired case 1."""
    shape = params.shape(I)
    out = np.full(shape, len(I), dtype=np.int64)
    for J in subsets(I):
        bad = _broadcast(cases[J] != CASE_KEEP, J, I, shape)
        out = np.where(bad, np.minimum(out, len(J) - 1), out)
    return out


def ordinariness(result: EditResult, e) -> int:
    return int(result.ordinariness[e.index][e.verts])


@dataclass
class EditSizeReport:
    fractions: dict  # top I -> P[H'(e) != H(e)]
    tc_fractions: dict  # every I -> P[H'<e> != H<e>]
    non_ordinary: dict  # top I -> P[Ordinariness(e) < k]
    subset_ok: bool
    target: float

    @property
    def within_target(self) -> bool:
        t = to_fraction(self.target)
        return all(f <= t for f in self.fractions.values())

    def lines(self) -> list:
        out = [f"target = {self.target!r}", f"subset_ok = {str(self.subset_ok).lower()}"]
        for I, f in self.fractions.items():
            name = ",".join(map(str, I))
            out.append(f"fraction.{name} = {f.numerator}/{f.denominator}")
            out.append(f"non_ordinary.{name} = {self.non_ordinary[I].numerator}/{self.non_ordinary[I].denominator}")
        out.append(f"within_target = {str(self.within_target).lower()}")
        return out


def edit_size_report(result: EditResult, eps) -> EditSizeReport:
    """Edit fractions and the inclusion ``{changed total color} subset {Ordinariness < |I|}``."""
    H = result.H
    fractions, non_ord, tcf = {}, {}, {}
    ok = True
    for I in H.index_sets():
        changed = result.total_color_changed(I)
        low = result.ordinariness[I] < len(I)
        ok &= not bool(np.any(changed & ~low))
        tcf[I] = Fraction(int(changed.sum()), changed.size)
        if len(I) == H.k:
            fractions[I] = result.face_edit_fraction(I)
            non_ord[I] = Fraction(int(low.sum()), low.size)
    return EditSizeReport(fractions, tcf, non_ord, ok, float(eps))


def lift(G: ColoredHypergraph, H_prime: ColoredHypergraph) -> ColoredHypergraph:
    """Copy the top-arity tables of ``H'`` into ``G`` (regularization keeps top classes)."""
    return G.replace(tables={I: H_prime.tables[I] for I in G.top_index_sets()})
