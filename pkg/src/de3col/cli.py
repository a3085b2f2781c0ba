"""Command line front end: ``generate``, ``solve`` and ``bench``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench
from .graph import DimacsFormatError, GraphType, generate, load_dimacs, save_dimacs
from .solver import ConfigError, SolverConfig, solve


def _write(path: str, data: bytes):
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)


def _solver_args(p: argparse.ArgumentParser):
    p.add_argument("--np", type=int, default=15, help="population size (default 15)")
    p.add_argument("--fes-max", type=int, default=300_000, help="evaluation budget (default 300000)")
    p.add_argument("--pls", type=float, default=0.02, help="local search probability (default 0.02)")
    p.add_argument("--sigma-init", type=float, default=30.0, help="initial mutation strengths (default 30.0)")
    p.add_argument("--eps0", type=float, default=1e-3, help="mutation strength floor (default 0.001)")
    p.add_argument("--no-ls", action="store_true", help="disable local search")


def _config(args, seed: int = 0) -> SolverConfig:
    return SolverConfig(
        np=args.np, fes_max=args.fes_max, p_ls=args.pls, sigma_init=args.sigma_init,
        eps0=args.eps0, seed=seed, ls_enabled=not args.no_ls,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="de3col", description="Graph 3-coloring with self-adaptive DE.")
    sub = parser.add_subparsers(dest="command", required=True)

    types = [t.value for t in GraphType]

    g = sub.add_parser("generate", help="write a random 3-colorable graph in DIMACS format")
    g.add_argument("--type", required=True, choices=types)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True, help="output file, '-' for stdout")

    s = sub.add_parser("solve", help="run the solver once on a DIMACS graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--seed", type=int, required=True)
    _solver_args(s)
    s.add_argument("--trace", help="write the convergence trace CSV here")

    b = sub.add_parser("bench", help="SR/AES over an edge-density sweep")
    b.add_argument("--type", required=True, choices=types)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--p-min", type=float, required=True)
    b.add_argument("--p-max", type=float, required=True)
    b.add_argument("--p-step", type=float, required=True)
    b.add_argument("--runs", type=int, default=25)
    b.add_argument("--gen-seed", type=int, default=5)
    b.add_argument("--base-seed", type=int, default=0)
    b.add_argument("--out", required=True, help="CSV file, '-' for stdout")
    b.add_argument("--ablation", action="store_true", help="run without and with local search")
    b.add_argument("--jobs", type=int, default=1, help="worker processes (results do not depend on it)")
    b.add_argument("-v", "--verbose", action="store_true", help="report each density on stderr")
    _solver_args(b)
    return parser


def _cmd_generate(args) -> int:
    g = generate(args.type, args.n, args.p, args.seed)
    _write(args.out, save_dimacs(g))
    return 0


def _cmd_solve(args) -> int:
    try:
        text = Path(args.graph).read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read {args.graph}: {exc.strerror}") from None
    g = load_dimacs(text)
    result = solve(g, _config(args, args.seed))
    print(f"success={int(result.success)} evals={result.evals} best_penalty={result.best_penalty}")
    if args.trace:
        _write(args.trace, bench.emit_trace(result))
    return 0


def _cmd_bench(args) -> int:
    if args.runs < 1:
        raise ConfigError("--runs must be at least 1")
    ps = bench.p_range(args.p_min, args.p_max, args.p_step)
    if any(not 0 <= p <= 1 for p in ps):
        raise ConfigError("edge probabilities must lie in [0, 1]")
    cfg = _config(args)

    def progress(row):
        if args.verbose:
            print(f"p={row.p:g} SR={row.SR:.4f} AES={bench._fmt_aes(row.AES)}", file=sys.stderr)

    kw = dict(runs=args.runs, gen_seed=args.gen_seed, base_seed=args.base_seed,
              jobs=args.jobs, progress=progress)
    if args.ablation:
        data = bench.emit_ablation_csv(bench.ablation(args.type, args.n, ps, cfg, **kw))
    else:
        data = bench.emit_csv(bench.sweep(args.type, args.n, ps, cfg, **kw))
    _write(args.out, data)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"generate": _cmd_generate, "solve": _cmd_solve, "bench": _cmd_bench}[args.command]
    try:
        return handler(args)
    except (DimacsFormatError, ValueError) as exc:
        print(f"de3col {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
