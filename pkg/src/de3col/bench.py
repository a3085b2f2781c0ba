"""Experiment harness: multi-seed campaigns, density sweeps, the local
search ablation, and CSV output.

SR is the fraction of runs that reached a proper coloring; AES is the mean
evaluation count over the successful runs only and is left empty when no
run succeeded.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .graph import Graph, GraphType, generate
from .solver import RunResult, SolverConfig, solve

__all__ = [
    "RunResult",
    "BenchRow",
    "BenchReport",
    "AblationReport",
    "REFERENCE_DENSITIES",
    "p_range",
    "aggregate",
    "run_campaign",
    "sweep",
    "ablation",
    "emit_csv",
    "emit_ablation_csv",
    "emit_trace",
]


def p_range(p_min: float, p_max: float, p_step: float) -> list[float]:
    """Inclusive grid ``p_min, p_min + p_step, ..., p_max`` without float drift."""
    if p_step <= 0:
        raise ValueError("p_step must be positive")
    if p_max < p_min:
        raise ValueError("p_max is smaller than p_min")
    count = int(np.floor((p_max - p_min) / p_step + 1e-9)) + 1
    return [round(p_min + k * p_step, 10) for k in range(count)]


# reference density grid for n=1000 sweeps
REFERENCE_DENSITIES = p_range(0.004, 0.014, 0.001)


@dataclass(frozen=True)
class BenchRow:
    p: float
    runs: int
    successes: int
    SR: float
    AES: float | None
    checksum: str = ""


@dataclass
class BenchReport:
    type: GraphType
    n: int
    gen_seed: int
    config: SolverConfig
    base_seed: int = 0
    rows: list[BenchRow] = field(default_factory=list)
    results: dict[float, list[RunResult]] = field(default_factory=dict, repr=False)


@dataclass
class AblationReport:
    none: BenchReport
    ls: BenchReport

    def averages(self) -> dict[str, float | None]:
        out = {}
        for arm, rep in (("none", self.none), ("ls", self.ls)):
            sr = [r.SR for r in rep.rows]
            aes = [r.AES for r in rep.rows if r.AES is not None]
            out[f"SR_{arm}"] = float(np.mean(sr)) if sr else None
            out[f"AES_{arm}"] = float(np.mean(aes)) if aes else None
        return out


def aggregate(p: float, results: Sequence[RunResult], checksum: str = "") -> BenchRow:
    runs = len(results)
    wins = [r.evals for r in results if r.success]
    return BenchRow(
        p=p, runs=runs, successes=len(wins),
        SR=len(wins) / runs if runs else 0.0,
        AES=float(np.mean(wins)) if wins else None,
        checksum=checksum,
    )


def _run_one(args):
    g, cfg = args
    return solve(g, cfg)


def run_campaign(g: Graph, cfg: SolverConfig, runs: int, base_seed: int = 0, jobs: int = 1) -> list[RunResult]:
    """Independent runs with seeds ``base_seed .. base_seed + runs - 1``.

    The result order follows the seeds whatever ``jobs`` is.
    """
    if runs < 1:
        raise ValueError("runs must be at least 1")
    tasks = [(g, replace(cfg, seed=base_seed + k)) for k in range(runs)]
    if jobs <= 1 or runs == 1:
        return [_run_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, tasks))


def sweep(
    type: GraphType | str,
    n: int,
    p_values: Sequence[float],
    cfg: SolverConfig,
    runs: int = 25,
    gen_seed: int = 5,
    base_seed: int = 0,
    jobs: int = 1,
    progress: Callable[[BenchRow], None] | None = None,
) -> BenchReport:
    """One generated instance per density, one campaign per instance."""
    gtype = GraphType.parse(type)
    report = BenchReport(gtype, n, gen_seed, cfg, base_seed)
    for p in p_values:
        g = generate(gtype, n, p, gen_seed)
        results = run_campaign(g, cfg, runs, base_seed, jobs)
        row = aggregate(p, results, g.checksum())
        report.rows.append(row)
        report.results[p] = results
        if progress is not None:
            progress(row)
    return report


def ablation(
    type: GraphType | str,
    n: int,
    p_values: Sequence[float],
    cfg: SolverConfig,
    runs: int = 25,
    gen_seed: int = 5,
    base_seed: int = 0,
    jobs: int = 1,
    progress: Callable[[BenchRow], None] | None = None,
) -> AblationReport:
    """The same sweep without ("none") and with ("ls") local search.

    Both arms see identical graphs and identical run seeds.
    """
    kw = dict(runs=runs, gen_seed=gen_seed, base_seed=base_seed, jobs=jobs, progress=progress)
    none = sweep(type, n, p_values, replace(cfg, ls_enabled=False), **kw)
    ls = sweep(type, n, p_values, replace(cfg, ls_enabled=True), **kw)
    return AblationReport(none, ls)


def _fmt_p(p: float) -> str:
    return f"{p:g}"


def _fmt_sr(sr: float) -> str:
    return f"{sr:.4f}"


def _fmt_aes(aes: float | None) -> str:
    return "" if aes is None else f"{aes:.2f}"


def _csv_bytes(header, rows) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().encode("ascii")


def emit_csv(report: BenchReport) -> bytes:
    header = ["type", "n", "p", "runs", "successes", "SR", "AES"]
    rows = [
        [report.type.value, report.n, _fmt_p(r.p), r.runs, r.successes, _fmt_sr(r.SR), _fmt_aes(r.AES)]
        for r in report.rows
    ]
    return _csv_bytes(header, rows)


def emit_ablation_csv(report: AblationReport) -> bytes:
    """Paired layout: one row per density plus a closing ``avg`` row."""
    header = ["type", "n", "p", "runs",
              "successes_none", "SR_none", "AES_none", "successes_ls", "SR_ls", "AES_ls"]
    rows = []
    for a, b in zip(report.none.rows, report.ls.rows):
        rows.append([
            report.none.type.value, report.none.n, _fmt_p(a.p), a.runs,
            a.successes, _fmt_sr(a.SR), _fmt_aes(a.AES),
            b.successes, _fmt_sr(b.SR), _fmt_aes(b.AES),
        ])
    if rows:
        avg = report.averages()
        rows.append([
            report.none.type.value, report.none.n, "avg", report.none.rows[0].runs,
            "", _fmt_sr(avg["SR_none"]), _fmt_aes(avg["AES_none"]),
            "", _fmt_sr(avg["SR_ls"]), _fmt_aes(avg["AES_ls"]),
        ])
    return _csv_bytes(header, rows)


def emit_trace(result: RunResult) -> bytes:
    rows = [[int(e), int(b), f"{m:.4f}"] for e, b, m in result.trace.tolist()]
    return _csv_bytes(["evals", "best_uncolored", "mean_uncolored"], rows)
