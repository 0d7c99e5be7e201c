"""Command-line front end: irrarray {count,enumerate,sample,evaluate,optimize,sweep}.

Exit codes: 0 success, 2 usage or invalid input, 3 degenerate evaluation.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from irrarray.beamforming import ARCHITECTURES
from irrarray.errors import EvaluationError
from irrarray.optimizer import (
    Evaluator,
    GaConfig,
    exhaustive_search,
    ga_search,
    objective,
    write_trace_csv,
)
from irrarray.scenario import Scenario
from irrarray.tiling import (
    ThinnedSpace,
    build_dictionary,
    count_domino,
    count_thinned,
    enumerate_exact_covers,
    read_configs,
    sci_truncated,
    write_configs,
)

EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE = 0, 2, 3
DEGENERATE_LIMIT = 0.10


class UsageError(Exception):
    pass


def _dump_json(obj, path) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def _architectures(scenario, arg):
    archs = scenario.architectures if not arg else [a.strip().upper() for a in arg.split(",") if a.strip()]
    bad = [a for a in archs if a not in ARCHITECTURES]
    if bad:
        raise UsageError(f"unknown architecture(s) {bad}; choose from {list(ARCHITECTURES)}")
    return archs


def _load_scenario(args) -> Scenario:
    sc = Scenario.load(args.scenario) if args.scenario else Scenario.from_dict()
    if getattr(args, "output_dir", None):
        sc = sc.replace(output_dir=str(args.output_dir))
    return sc


def _labelled_configs(scenario, paths):
    """(label, config) pairs from config files, or the scenario's named arrays."""
    if not paths:
        return list(scenario.array_configs().items())
    out = []
    for p in paths:
        cfgs = read_configs(p)
        stem = Path(p).stem
        for i, c in enumerate(cfgs):
            c.validate()
            out.append((stem if len(cfgs) == 1 else f"{stem}[{i}]", c))
    return out


# -- subcommands --------------------------------------------------------
def cmd_count(args) -> int:
    if args.kind == "domino":
        n = count_domino(args.N, args.M)
    elif args.kind == "thinned":
        if args.S is None:
            raise UsageError("thinned count needs S")
        n = count_thinned(args.N, args.M, args.S)
    else:
        raise UsageError(f"no closed-form count for {args.kind!r}")
    print(n)
    if args.sci:
        print(sci_truncated(n, args.digits))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    q = build_dictionary((args.N, args.M), args.kind)
    cfgs = enumerate_exact_covers(q, cap=args.cap, rng_seed=args.seed)
    write_configs(cfgs, args.out if args.out else sys.stdout)
    return EXIT_OK


def cmd_sample(args) -> int:
    space = ThinnedSpace(args.N, args.M, args.S, args.count, args.seed)
    cfgs = [space[i] for i in range(len(space))]
    write_configs(cfgs, args.out if args.out else sys.stdout)
    return EXIT_OK


def _evaluate_rows(scenario, archs, labelled, n_real, seed, eta):
    ev = Evaluator(scenario, n_real, seed, eta)
    results = []
    worst = 0.0
    for label, cfg in labelled:
        for arch in archs:
            e = ev.evaluate(cfg, arch)
            worst = max(worst, e.skipped_fraction)
            results.append((label, cfg, arch, e))
    return ev, results, worst


def cmd_evaluate(args) -> int:
    scenario = _load_scenario(args)
    archs = _architectures(scenario, args.architectures)
    labelled = _labelled_configs(scenario, args.configs)
    eta = scenario["eta_dB"] if args.eta is None else args.eta
    ev, results, worst = _evaluate_rows(scenario, archs, labelled, args.n_realizations, args.seed, [eta])

    report = {
        "scenario": scenario.name,
        "eta_dB": float(eta),
        "seeds": list(ev.seeds),
        "results": [],
    }
    for label, cfg, arch, e in results:
        report["results"].append({
            "label": label,
            "config": cfg.to_dict(),
            "architecture": arch,
            "loss_dB": float(scenario["feed_loss_dB"][cfg.kind]),
            "mean_sum_se": e.mean_se(0),
            "mean_sll_dB": e.phi,
            "mean_stream_sll_dB": float(e.sll_dB.mean()),
            "skipped_seeds": list(e.skipped),
            "realizations": [
                {"sum_se": float(e.sum_se[i, 0]), "rates": [float(r) for r in e.rates[i, 0]],
                 "sll_dB": [float(s) for s in e.sll_dB[i]]}
                for i in range(e.n_ok)
            ],
        })
    out = scenario.output_dir()
    out.mkdir(parents=True, exist_ok=True)
    _dump_json(report, out / "report.json")
    with open(out / "report.csv", "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh)
        wr.writerow(["label", "kind", "architecture", "eta_dB", "mean_sum_se", "mean_sll_dB", "n_ok", "n_skipped"])
        for label, cfg, arch, e in results:
            wr.writerow([label, cfg.kind, arch, repr(float(eta)), repr(e.mean_se(0)), repr(e.phi), e.n_ok, len(e.skipped)])
    for label, cfg, arch, e in results:
        print(f"{label:12s} {arch:4s} sum SE {e.mean_se(0):8.3f} b/s/Hz  SLL {e.phi:7.2f} dB")
    if worst > DEGENERATE_LIMIT:
        print(f"error: {worst:.0%} of realizations degenerate", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def _search_space(scenario, kind, S):
    """Configuration space for a scenario array name or a raw kind."""
    N, M = scenario.board
    arrays = scenario["arrays"]
    spec = dict(arrays[kind]) if kind in arrays else {"kind": kind}
    if S is not None:
        spec["S"] = S
    seed = int(spec.get("seed", scenario["seeds"]["arrays"]))
    k = spec["kind"]
    if k in ("domino", "tetromino"):
        return enumerate_exact_covers(build_dictionary((N, M), k), cap=scenario["enumeration_cap"], rng_seed=seed)
    if k == "thinned":
        if "S" not in spec and "fill" not in spec:
            raise UsageError("thinned search needs --S")
        return ThinnedSpace(N, M, scenario.thinned_S(spec), scenario["thinned_space_size"], seed)
    raise UsageError(f"cannot search over kind {k!r}")


def cmd_optimize(args) -> int:
    scenario = _load_scenario(args)
    arch = _architectures(scenario, args.architecture)[0]
    space = _search_space(scenario, args.kind, args.S)
    if len(space) == 0:
        raise UsageError("empty configuration space")
    ev = Evaluator(scenario, args.n_realizations, args.seed)
    spec = ev.reference(args.beta)
    fitness = ev.fitness(arch, spec)
    gacfg = GaConfig.from_dict(scenario["ga"], i_max=args.i_max, seed=args.ga_seed if args.ga_seed is not None else scenario["seeds"]["ga"])
    res = ga_search(space, gacfg, fitness)
    r_mean, phi = ev.summary(res.best_config, arch)
    summary = {
        "kind": args.kind,
        "architecture": arch,
        "beta": spec.beta,
        "r_ref": spec.r_ref,
        "phi_ref_dB": spec.phi_ref_dB,
        "space_size": len(space),
        "chromosome_bits": res.bits,
        "generations": res.generations,
        "evaluations": res.evaluations,
        "best_index": res.best_index,
        "mean_sum_se": r_mean,
        "mean_sll_dB": phi,
        "objective": objective(r_mean, phi, spec),
    }
    if args.exhaustive:
        bi, bf, _ = exhaustive_search(space, fitness)
        summary.update(exhaustive_best_index=bi, exhaustive_best_objective=bf, ga_matches_exhaustive=bool(res.best_fitness == bf))
    out = scenario.output_dir()
    out.mkdir(parents=True, exist_ok=True)
    Path(out / "best_config.json").write_text(res.best_config.to_json() + "\n", encoding="utf-8")
    write_trace_csv(res, out / "trace.csv")
    _dump_json(summary, out / "result.json")
    print(f"best index {res.best_index}: sum SE {r_mean:.3f}, SLL {phi:.2f} dB, objective {summary['objective']:.6f}")
    if args.exhaustive:
        print(f"exhaustive best index {summary['exhaustive_best_index']}: objective {summary['exhaustive_best_objective']:.6f}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    scenario = _load_scenario(args)
    archs = _architectures(scenario, args.architectures)
    labelled = _labelled_configs(scenario, args.configs)
    etas = scenario["eta_sweep_dB"] if args.eta is None else args.eta
    n_real = scenario["sweep_realizations"] if args.n_realizations is None else args.n_realizations
    out = Path(args.out) if args.out else scenario.output_dir() / "sweep.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    worst = 0.0
    with open(out, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh)
        wr.writerow(["label", "kind", "architecture", "eta_dB", "mean_sum_se", "ci95_sum_se", "n_ok"])
        if etas:
            _, results, worst = _evaluate_rows(scenario, archs, labelled, n_real, args.seed, etas)
            for label, cfg, arch, e in results:
                for j, eta in enumerate(e.eta_dB):
                    se = e.sum_se[:, j]
                    ci = 1.96 * se.std(ddof=1) / np.sqrt(len(se)) if len(se) > 1 else 0.0
                    wr.writerow([label, cfg.kind, arch, repr(eta), repr(float(se.mean())), repr(float(ci)), len(se)])
    print(f"wrote {out}")
    if worst > DEGENERATE_LIMIT:
        print(f"error: {worst:.0%} of realizations degenerate", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


# -- parser -------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="irrarray", description="Irregular phased array configuration and MU-MIMO evaluation")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="size of a configuration space")
    c.add_argument("kind", choices=["domino", "thinned"])
    c.add_argument("N", type=int)
    c.add_argument("M", type=int)
    c.add_argument("S", type=int, nargs="?")
    c.add_argument("--sci", action="store_true", help="also print truncated scientific notation")
    c.add_argument("--digits", type=int, default=2)
    c.set_defaults(func=cmd_count)

    e = sub.add_parser("enumerate", help="exact-cover tilings as NDJSON")
    e.add_argument("kind", choices=["domino", "tetromino"])
    e.add_argument("N", type=int)
    e.add_argument("M", type=int)
    e.add_argument("--cap", type=int, default=None)
    e.add_argument("--seed", type=int, default=None, help="shuffle dictionary rows")
    e.add_argument("-o", "--out")
    e.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("sample", help="random thinned arrays as NDJSON")
    s.add_argument("N", type=int)
    s.add_argument("M", type=int)
    s.add_argument("S", type=int)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_sample)

    def common(q):
        q.add_argument("scenario", nargs="?", help="scenario YAML (default: built-in)")
        q.add_argument("--output-dir")
        q.add_argument("--n-realizations", type=int)
        q.add_argument("--seed", type=int, help="first channel seed")

    v = sub.add_parser("evaluate", help="Monte-Carlo SE / SLL report")
    common(v)
    v.add_argument("--configs", nargs="*", default=[])
    v.add_argument("--architectures", help="comma-separated, e.g. FD,HFC")
    v.add_argument("--eta", type=float)
    v.set_defaults(func=cmd_evaluate)

    o = sub.add_parser("optimize", help="GA search of one array kind")
    common(o)
    o.add_argument("--kind", required=True, help="scenario array name or domino/tetromino/thinned")
    o.add_argument("--beta", type=float, required=True)
    o.add_argument("--S", type=int)
    o.add_argument("--architecture", default="FD")
    o.add_argument("--i-max", type=int)
    o.add_argument("--ga-seed", type=int)
    o.add_argument("--exhaustive", action="store_true", help="also search the whole space")
    o.set_defaults(func=cmd_optimize)

    w = sub.add_parser("sweep", help="sum SE versus SNR")
    common(w)
    w.add_argument("--configs", nargs="*", default=[])
    w.add_argument("--architectures")
    w.add_argument("--eta", type=float, nargs="*")
    w.add_argument("-o", "--out")
    w.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, FileNotFoundError, KeyError) as exc:
        print(f"irrarray {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EvaluationError as exc:
        print(f"irrarray {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
