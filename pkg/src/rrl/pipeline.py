"""Edit-or-count driver: either a small recoloring removes every forbidden copy, or a copy is exhibited."""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import ColoredHypergraph
from .counting import CopyEstimate, copy_probability
from .editor import EditResult, EditSizeReport, edit_size_report, lift, modify
from .errors import BudgetExceeded
from .family import Family
from .regularity import DeltaCertificate, regularity_search
from .regularize import RegularizedGraph
from .representative import build_table, default_eps1, default_L
from .rng import as_stream
from .sampling import format_map


@dataclass
class PipelineConfig:
    h: int = 1
    eps1: float | None = None
    draw_budget: int = 20_000
    trials: int = 4
    max_size: int = 2
    rounds: int = 2
    map_budget: int = 1 << 16
    complex_budget: int = 20_000
    h_max: int | None = None
    count_mode: str = "exact"
    count_samples: int = 20_000
    count_budget: int = 10 ** 9


@dataclass
class CopyWitness:
    member: object
    estimate: CopyEstimate


@dataclass
class PipelineResult:
    branch: str  # "edit", "copy" or "best-effort"
    G_prime: ColoredHypergraph | None
    edit: EditResult | None
    edit_size: EditSizeReport | None
    witness: CopyWitness | None
    diagnostics: dict = field(default_factory=dict)

    def lines(self) -> list:
        out = [f"branch = {self.branch}"]
        for key in sorted(self.diagnostics):
            out.append(f"{key} = {self.diagnostics[key]}")
        if self.edit_size is not None:
            out += [f"edit.{ln}" for ln in self.edit_size.lines()]
        if self.witness is not None:
            est = self.witness.estimate
            out.append(f"witness.h = {self.witness.member.h}")
            out.append(f"witness.probability = {est.value}")
            out.append(f"witness.mode = {est.mode}")
            if est.witness is not None:
                out.append("witness.map = " + format_map(est.witness).strip().replace("\n", " | "))
        return out


def _search(G, eps, cfg, stream):
    res = regularity_search(G, eps, cfg.h, trials=cfg.trials, max_size=cfg.max_size, rounds=cfg.rounds,
                            map_budget=cfg.map_budget, complex_budget=cfg.complex_budget, rng=stream)
    if res.regularized is None:
        return RegularizedGraph.identity(G), DeltaCertificate(), res
    return res.regularized, res.fit.delta, res


def edit_stage(G: ColoredHypergraph, eps, cfg: PipelineConfig | None = None, rng=None):
    """Regularize twice, build a representative table, edit ``H`` and lift the edit onto ``G``.

    Returns ``(G', EditResult, EditSizeReport, diagnostics)``.
    """
    cfg = cfg or PipelineConfig()
    stream = as_stream(rng, "edit-stage")
    diag: dict = {}
    eps1 = cfg.eps1 if cfg.eps1 is not None else default_eps1(eps)
    outer, _, out_res = _search(G, eps, cfg, stream.child("outer"))
    H = outer.graph
    inner, delta_star, in_res = _search(H, eps1, cfg, stream.child("inner"))
    diag["outer.reached"] = str(out_res.reached).lower()
    diag["outer.sizes"] = " ".join(map(str, out_res.sizes))
    diag["inner.reached"] = str(in_res.reached).lower()
    diag["inner.sizes"] = " ".join(map(str, in_res.sizes))
    if in_res.fit is not None:
        diag["inner.epsilon_fit"] = repr(in_res.fit.epsilon_fit)
    b_prime = tuple(H.color_counts()[i] for i in range(1, H.k + 1))
    L = default_L(b_prime, eps, cfg.draw_budget, H.r)
    diag["L"] = " ".join(map(str, L))
    diag["eps1"] = repr(eps1)
    table = build_table(inner, L, stream.child("table"))
    result = modify(table, eps, eps1, delta_star)
    size = edit_size_report(result, eps)
    G_prime = lift(G, result.H_prime)
    diag["editor.stuck"] = len(result.stuck)
    diag["editor.certificate_failures"] = len(result.certificate_failures)
    diag["editor.cases"] = " ".join(f"{k}:{v}" for k, v in result.case_summary().items())
    return G_prime, result, size, diag


def removal_pipeline(G: ColoredHypergraph, family: Family, eps, cfg: PipelineConfig | None = None,
                     rng=None) -> PipelineResult:
    """Try the edit branch first; fall back to exhibiting a copy in ``G``.

    Order: an already family-free ``G`` is returned unedited.  Otherwise ``H``
    (a regularization of ``G``) and ``H/psi`` are searched for, a
    representative table is built, ``H`` is edited and the top tables are
    lifted into ``G'``.  If ``G'`` is family-free within the edit target the
    edit branch wins; otherwise the first member with positive copy
    probability in ``G`` is reported.
    """
    cfg = cfg or PipelineConfig()
    stream = as_stream(rng, "pipeline")
    diag: dict = {}
    if family.first_copy(G, cfg.h_max) is None:
        diag["reason"] = "family-free input"
        return PipelineResult("edit", G, None, None, None, diag)

    G_prime, result, size, more = edit_stage(G, eps, cfg, stream)
    diag.update(more)
    if size.within_target and family.first_copy(G_prime, cfg.h_max) is None:
        return PipelineResult("edit", G_prime, result, size, None, diag)

    for F in family.members_for(G, cfg.h_max):
        try:
            est = copy_probability(G, F, cfg.count_mode, cfg.count_samples, stream.child("count"),
                                   budget=cfg.count_budget)
        except BudgetExceeded:
            est = copy_probability(G, F, "sampled", cfg.count_samples, stream.child("count"))
        if est.value > 0:
            return PipelineResult("copy", G_prime, result, size, CopyWitness(F, est), diag)
    diag["reason"] = "no edit within target and no copy observed"
    return PipelineResult("best-effort", G_prime, result, size, None, diag)
