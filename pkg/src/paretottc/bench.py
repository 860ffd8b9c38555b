"""Timing harness: inverse-TTC enumeration against brute force on random profiles."""

from __future__ import annotations

import csv
import logging
import math
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .enumerator import brute_force_frontier, itea
from .errors import EmptyInput, FrontierMismatch
from .instances import derive_seed, random_profile
from .model import SCAN_CAP, check_scan_cap

log = logging.getLogger(__name__)

METHODS = {"itea": itea, "brute": brute_force_frontier}
CSV_HEADER = (
    "n",
    "instance",
    "seed",
    "method",
    "frontier_size",
    "ttc_calls",
    "states_visited",
    "wall_time_us",
    "timeout",
)


@dataclass(frozen=True)
class BenchConfig:
    n_min: int = 3
    n_max: int = 9
    instances_per_n: int = 100
    base_seed: int = 0
    methods: tuple[str, ...] = ("itea", "brute")
    output: Optional[str] = None
    time_limit: float = 600.0  # seconds per (instance, method)
    workers: Optional[int] = None  # None -> os.cpu_count()

    def __post_init__(self):
        if not 1 <= self.n_min <= self.n_max:
            raise ValueError(f"bad n range {self.n_min}..{self.n_max}")
        check_scan_cap(self.n_max, SCAN_CAP)
        if self.instances_per_n < 1:
            raise ValueError("instances_per_n must be at least 1")
        unknown = set(self.methods) - set(METHODS)
        if unknown or not self.methods:
            raise ValueError(f"methods must be a non-empty subset of {sorted(METHODS)}")

    @property
    def n_range(self) -> range:
        return range(self.n_min, self.n_max + 1)

    def worker_count(self) -> int:
        return self.workers or os.cpu_count() or 1


@dataclass(frozen=True)
class BenchRecord:
    n: int
    instance: int
    seed: int
    method: str
    frontier_size: int
    ttc_calls: int
    states_visited: int
    wall_time_us: int
    timeout: bool = False

    @property
    def sort_key(self):
        return (self.n, self.instance, self.method)


def instance_seed(base_seed: int, n: int, index: int) -> int:
    return derive_seed(base_seed, n, index)


def _run_instance(n: int, index: int, base_seed: int, methods: Sequence[str], time_limit: float):
    seed = instance_seed(base_seed, n, index)
    profile = random_profile(n, seed)
    records = []
    reference = None
    for method in methods:
        start = time.perf_counter()
        frontier = METHODS[method](profile, classes=False)
        elapsed = time.perf_counter() - start
        if reference is None:
            reference = (method, frontier.members)
        elif frontier.members != reference[1]:
            raise FrontierMismatch(
                f"n={n} instance={index} seed={seed}: {method} found {len(frontier.members)} "
                f"PO allocations, {reference[0]} found {len(reference[1])}"
            )
        records.append(
            BenchRecord(
                n=n,
                instance=index,
                seed=seed,
                method=method,
                frontier_size=len(frontier.members),
                ttc_calls=frontier.stats.ttc_calls,
                states_visited=frontier.stats.states_visited,
                wall_time_us=round(elapsed * 1e6),
                timeout=elapsed > time_limit,
            )
        )
    return records


def _warm_up(n_values: Iterable[int], methods: Sequence[str]) -> None:
    for n in n_values:
        profile = random_profile(n, derive_seed(0xBE7C4, n))
        for method in methods:
            METHODS[method](profile, classes=False)


def run_benchmark(config: BenchConfig) -> list[BenchRecord]:
    """Run every requested method on ``instances_per_n`` seeded profiles per n.

    Methods must agree on the frontier of every instance, else FrontierMismatch.
    Timeouts are flagged on the record after the fact; runs are never interrupted.
    """
    workers = config.worker_count()
    tasks = [(n, i) for n in config.n_range for i in range(config.instances_per_n)]
    args = (config.base_seed, tuple(config.methods), config.time_limit)
    log.info("benchmark: %d instances, %d worker(s)", len(tasks), workers)
    records = []
    if workers == 1:
        for n in config.n_range:
            _warm_up([n], config.methods)
            for i in range(config.instances_per_n):
                records.extend(_run_instance(n, i, *args))
            log.info("n=%d done", n)
    else:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_warm_up, initargs=(list(config.n_range), tuple(config.methods))
        ) as pool:
            futures = [pool.submit(_run_instance, n, i, *args) for n, i in tasks]
            for fut in futures:
                records.extend(fut.result())
    records.sort(key=lambda r: r.sort_key)
    if config.output:
        emit_csv(records, config.output)
    return records


def emit_csv(records: Sequence[BenchRecord], path) -> Path:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for r in sorted(records, key=lambda r: r.sort_key):
                row = asdict(r)
                row["timeout"] = int(r.timeout)
                writer.writerow([row[k] for k in CSV_HEADER])
    except OSError as exc:
        raise OSError(f"cannot write benchmark CSV {path}: {exc}") from exc
    return path


def read_csv(path) -> list[BenchRecord]:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        out = []
        for row in reader:
            kwargs = {}
            for f in fields(BenchRecord):
                value = row[f.name]
                if f.name == "method":
                    kwargs[f.name] = value
                elif f.name == "timeout":
                    kwargs[f.name] = value == "1"
                else:
                    kwargs[f.name] = int(value)
            out.append(BenchRecord(**kwargs))
    return out


@dataclass(frozen=True)
class SummaryRow:
    n: int
    method: str
    count: int
    mean_us: float
    median_us: float
    min_us: int
    max_us: int
    mean_frontier: float
    mean_ttc_calls: float
    ratio: float  # mean |P| / n!
    timeouts: int


SUMMARY_HEADER = tuple(f.name for f in fields(SummaryRow))


def summarize(records: Sequence[BenchRecord]) -> list[SummaryRow]:
    if not records:
        raise EmptyInput("no benchmark records to summarize")
    groups = {}
    for r in records:
        groups.setdefault((r.n, r.method), []).append(r)
    rows = []
    for (n, method), group in sorted(groups.items()):
        times = [r.wall_time_us for r in group]
        mean_frontier = statistics.fmean(r.frontier_size for r in group)
        rows.append(
            SummaryRow(
                n=n,
                method=method,
                count=len(group),
                mean_us=statistics.fmean(times),
                median_us=statistics.median(times),
                min_us=min(times),
                max_us=max(times),
                mean_frontier=mean_frontier,
                mean_ttc_calls=statistics.fmean(r.ttc_calls for r in group),
                ratio=mean_frontier / math.factorial(n),
                timeouts=sum(r.timeout for r in group),
            )
        )
    return rows


def _cells(row: SummaryRow) -> list[str]:
    return [
        str(row.n),
        row.method,
        str(row.count),
        f"{row.mean_us:.1f}",
        f"{row.median_us:.1f}",
        str(row.min_us),
        str(row.max_us),
        f"{row.mean_frontier:.2f}",
        f"{row.mean_ttc_calls:.2f}",
        f"{row.ratio:.6f}",
        str(row.timeouts),
    ]


def render_summary(rows: Sequence[SummaryRow], workers: Optional[int] = None) -> str:
    table = [list(SUMMARY_HEADER)] + [_cells(r) for r in rows]
    widths = [max(len(line[k]) for line in table) for k in range(len(SUMMARY_HEADER))]
    out = ["  ".join(cell.rjust(w) for cell, w in zip(line, widths)) for line in table]
    if workers is not None:
        out.append(f"workers: {workers}")
    return "\n".join(out) + "\n"


def summary_csv(rows: Sequence[SummaryRow]) -> str:
    lines = [",".join(SUMMARY_HEADER)] + [",".join(_cells(r)) for r in rows]
    return "\n".join(lines) + "\n"


def write_chart(rows: Sequence[SummaryRow], path, workers: Optional[int] = None) -> Path:
    """Mean wall time against n, one polyline per method, log-scale y axis, as SVG."""
    path = Path(path)
    width, height, pad = 640, 400, 60
    ns = sorted({r.n for r in rows})
    lo = math.log10(max(1.0, min(r.mean_us for r in rows)))
    hi = math.log10(max(r.mean_us for r in rows))
    lo, hi = math.floor(lo), math.ceil(hi) if hi > lo else math.floor(lo) + 1

    def x(n):
        if len(ns) == 1:
            return width / 2
        return pad + (n - ns[0]) * (width - 2 * pad) / (ns[-1] - ns[0])

    def y(us):
        return height - pad - (math.log10(max(us, 1.0)) - lo) * (height - 2 * pad) / (hi - lo)

    colours = {"itea": "#1f77b4", "brute": "#d62728"}
    title = "Mean wall time per instance"
    if workers is not None:
        title += f" ({workers} worker{'s' if workers != 1 else ''})"
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<text x="{width / 2}" y="24" text-anchor="middle" font-size="15">{title}</text>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
    ]
    for n in ns:
        parts.append(f'<text x="{x(n):.1f}" y="{height - pad + 18}" text-anchor="middle" font-size="12">{n}</text>')
    for e in range(lo, hi + 1):
        parts.append(
            f'<text x="{pad - 6}" y="{y(10 ** e) + 4:.1f}" text-anchor="end" font-size="12">1e{e} us</text>'
        )
    parts.append(f'<text x="{width / 2}" y="{height - 16}" text-anchor="middle" font-size="13">n</text>')
    for k, method in enumerate(sorted({r.method for r in rows})):
        pts = sorted((r.n, r.mean_us) for r in rows if r.method == method)
        colour = colours.get(method, "#2ca02c")
        coords = " ".join(f"{x(n):.1f},{y(us):.1f}" for n, us in pts)
        parts.append(f'<polyline fill="none" stroke="{colour}" stroke-width="2" points="{coords}"/>')
        parts.append(
            f'<text x="{width - pad - 70}" y="{pad + 16 * k}" fill="{colour}" font-size="13">{method}</text>'
        )
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n")
    return path
