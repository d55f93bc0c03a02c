"""Command line interface: ``rrl <command> ...``.

Exit codes: 0 ok, 1 rejection or violation, 2 usage or input error,
3 budget exceeded.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import cph
from .core import as_index
from .counting import copy_probability
from .errors import BudgetExceeded, RRLError, StageError
from .family import load_family
from .harness import GeneratorSpec, farness_exact, farness_packing, generate, run_experiment
from .regularity import DeltaCertificate, fit_delta, regularity_search, verify_regularity
from .regularize import DensityQuery, regularize, relative_density
from .sampling import parse_map
from .tester import PropertyOracle, TesterConfig, run_tester

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _ints(s: str) -> tuple:
    return tuple(int(x) for x in s.replace(",", " ").split())


def cmd_gen(a) -> int:
    spec = GeneratorSpec(kind=a.kind, r=a.r, k=a.k, n=a.n, probs=tuple(float(x) for x in a.probs.split(",")),
                         color=a.color, block=a.block, count=a.count, seed=a.seed)
    if a.pattern:
        spec.pattern = cph.load(a.pattern)
    if a.base:
        spec.base = cph.load(a.base)
    if a.forbidden:
        spec.forbidden = cph.load(a.forbidden)
    _emit(cph.render(generate(spec)), a.output)
    return EXIT_OK


def cmd_density(a) -> int:
    G = cph.load(a.input)
    I = as_index(_ints(a.index))
    q = DensityQuery(I, a.target, _ints(a.frame or ""))
    F = cph.load(a.frame_input) if a.frame_input else None
    print(relative_density(G, q, F))
    return EXIT_OK


def cmd_regularize(a) -> int:
    G = cph.load(a.input)
    phi = parse_map(Path(a.map).read_text(), G.r)
    _emit(cph.render(regularize(G, a.s, phi).graph), a.output)
    return EXIT_OK


def cmd_reg_verify(a) -> int:
    G = cph.load(a.input)
    delta = DeltaCertificate.parse(Path(a.delta).read_text()) if a.delta else DeltaCertificate()
    rep = verify_regularity(G, a.h, delta, a.epsilon, a.mode, samples=a.samples, rng=a.seed)
    _emit("".join(ln + "\n" for ln in rep.lines()), a.report)
    return EXIT_OK if rep.verified else EXIT_FAIL


def cmd_reg_fit(a) -> int:
    G = cph.load(a.input)
    fit = fit_delta(G, a.h, a.mode, samples=a.samples, rng=a.seed)
    if a.delta_out:
        Path(a.delta_out).write_text(fit.delta.render())
    _emit("".join(ln + "\n" for ln in fit.report.lines()), a.report)
    return EXIT_OK if fit.report.verified else EXIT_FAIL


def cmd_reg_search(a) -> int:
    G = cph.load(a.input)
    res = regularity_search(G, a.epsilon, a.h, trials=a.trials, max_size=a.max_size, rounds=a.rounds, rng=a.seed)
    lines = [f"reached = {str(res.reached).lower()}", f"sizes = {' '.join(map(str, res.sizes))}",
             f"attempts = {res.attempts}", f"skipped = {res.skipped}"]
    if res.fit is not None:
        lines += res.fit.report.lines()
    _emit("".join(ln + "\n" for ln in lines), a.report)
    if res.regularized is not None and a.output:
        cph.dump(res.regularized.graph, a.output)
    return EXIT_OK if res.reached else EXIT_FAIL


def cmd_edit(a) -> int:
    from .pipeline import PipelineConfig, removal_pipeline

    G = cph.load(a.input)
    fam = load_family(a.family)
    res = removal_pipeline(G, fam, a.epsilon, PipelineConfig(), a.seed)
    _emit("".join(ln + "\n" for ln in res.lines()), a.report)
    if a.output and res.G_prime is not None:
        cph.dump(res.G_prime, a.output)
    return EXIT_OK if res.branch == "edit" else EXIT_FAIL


def cmd_count(a) -> int:
    G = cph.load(a.input)
    F = cph.load(a.forbidden)
    est = copy_probability(G, F, a.mode, a.samples, a.seed)
    print(f"probability = {est.value}")
    print(f"interval = {est.interval[0]} {est.interval[1]}")
    print(f"maps = {est.maps}")
    return EXIT_OK


def cmd_test(a) -> int:
    G = cph.load(a.input)
    oracle = PropertyOracle.from_family(load_family(a.family))
    out = run_tester(G, oracle, TesterConfig(a.c, a.h0, a.trials), a.seed)
    print(f"accepted = {str(out.accepted).lower()}")
    print(f"rounds = {out.rounds_run}/{out.rounds_planned}")
    if out.witness is not None:
        print("witness = " + " | ".join(" ".join(map(str, p)) for p in out.witness.W))
        if a.witness_out:
            cph.dump(out.witness.subgraph, a.witness_out)
    return EXIT_OK if out.accepted else EXIT_FAIL


def cmd_far(a) -> int:
    G = cph.load(a.input)
    fam = load_family(a.family)
    if a.method == "exact":
        cert = farness_exact(G, fam.satisfies, a.budget)
    else:
        cert = max((farness_packing(G, F) for F in fam.members_for(G)), key=lambda c: c.lower_bound)
    print(f"method = {cert.method}")
    print(f"lower_bound = {cert.lower_bound}")
    return EXIT_OK


def cmd_run(a) -> int:
    rep = run_experiment(Path(a.config))
    _emit(rep.render(), a.report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rrl", description="Colored partite hypergraph regularity toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *, seed=True):
        sp = sub.add_parser(name)
        sp.set_defaults(func=fn)
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        return sp

    s = add("gen", cmd_gen)
    s.add_argument("--kind", default="random",
                   choices=["constant", "random", "blowup", "planted", "triangle-free"])
    s.add_argument("--r", type=int, default=3)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--n", type=int, default=8)
    s.add_argument("--probs", default="0.5,0.5")
    s.add_argument("--color", type=int, default=0)
    s.add_argument("--block", type=int, default=1)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--pattern")
    s.add_argument("--base")
    s.add_argument("--forbidden")
    s.add_argument("--output", "-o")

    s = add("density", cmd_density, seed=False)
    s.add_argument("--input", required=True)
    s.add_argument("--index", required=True, help="parts of the edge, e.g. 0,1")
    s.add_argument("--target", type=int, required=True)
    s.add_argument("--frame", help="colors of the proper sub-edges, by arity then lexicographically")
    s.add_argument("--frame-input", help="read the frame in this graph (e.g. a regularization)")

    s = add("regularize", cmd_regularize, seed=False)
    s.add_argument("--input", required=True)
    s.add_argument("--map", required=True)
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--output", "--out", "-o")

    for name, fn in (("reg-verify", cmd_reg_verify), ("reg-fit", cmd_reg_fit)):
        s = add(name, fn)
        s.add_argument("--input", required=True)
        s.add_argument("--h", type=int, default=1)
        s.add_argument("--mode", choices=["exact", "sampled"], default="exact")
        s.add_argument("--samples", type=int, default=20_000)
        s.add_argument("--report")
        if name == "reg-verify":
            s.add_argument("--delta")
            s.add_argument("--epsilon", type=float, required=True)
        else:
            s.add_argument("--delta-out")

    s = add("reg-search", cmd_reg_search)
    s.add_argument("--input", required=True)
    s.add_argument("--epsilon", type=float, required=True)
    s.add_argument("--h", type=int, default=1)
    s.add_argument("--trials", type=int, default=16)
    s.add_argument("--max-size", type=int, default=4)
    s.add_argument("--rounds", type=int, default=8)
    s.add_argument("--report")
    s.add_argument("--output", "-o")

    s = add("edit", cmd_edit)
    s.add_argument("--input", required=True)
    s.add_argument("--family", required=True)
    s.add_argument("--epsilon", type=float, required=True)
    s.add_argument("--report")
    s.add_argument("--output", "-o")

    s = add("count", cmd_count)
    s.add_argument("--input", required=True)
    s.add_argument("--forbidden", required=True)
    s.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    s.add_argument("--samples", type=int, default=10_000)

    s = add("test", cmd_test)
    s.add_argument("--input", required=True)
    s.add_argument("--family", "--property", dest="family", required=True)
    s.add_argument("--witness-out")
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--h0", type=int, required=True)
    s.add_argument("--trials", type=int)

    s = add("far", cmd_far, seed=False)
    s.add_argument("--input", required=True)
    s.add_argument("--family", required=True)
    s.add_argument("--method", choices=["exact", "packing"], default="packing")
    s.add_argument("--budget", type=int, default=200_000)

    s = add("run", cmd_run, seed=False)
    s.add_argument("config")
    s.add_argument("--report")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return a.func(a)
    except StageError as exc:
        print(f"error in stage {exc.stage}: {exc.original}", file=sys.stderr)
        return EXIT_BUDGET if isinstance(exc.original, BudgetExceeded) else EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (RRLError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
