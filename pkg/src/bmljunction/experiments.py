"""Deterministic sampling, batch sweeps, and table aggregation.

Every run is a pure function of (n, p, seed, budget); sweeps therefore give
byte-identical CSV output regardless of worker count, with rows emitted in
specification order (n-major, then p, then seed).
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .analysis import count_segments, find_cycle, per_color_segments
from .direct import DirectState, direct_from_cars
from .errors import ResourceLimit
from .normalized import to_normalized
from .rng import BLUE_STREAM_SALT, SplitMix64, as_fraction, partial_sample, round_half_up

CSV_HEADER = ("n,p,seed,transient,period,speed,red_segments,blue_segments,"
              "total_segments,longest_segment,m_min_block,violations_on_cycle,status")

STATUS_OK = "ok"
STATUS_LIMIT = "resource_limit"


def decimal5(x: Fraction) -> str:
    """Render a non-negative rational with 5 fractional digits, ties up."""
    scaled = math.floor(x * 100000 + Fraction(1, 2))
    return f"{scaled // 100000}.{scaled % 100000:05d}"


@dataclass(frozen=True)
class RunRecord:
    """One completed (or budget-limited) junction run.

    total_segments is the segment count in the single-color convention of
    the summary tables (see per_color_segments); red_segments and
    blue_segments carry the raw per-color run counts.
    """

    n: int
    p: Fraction
    seed: int
    transient: int | None
    period: int | None
    speed: Fraction | None
    red_segments: int | None
    blue_segments: int | None
    total_segments: int | None
    longest_segment: int | None
    m_min_block: int | None
    violations_on_cycle: int | None
    status: str

    @property
    def complete(self) -> bool:
        return self.status == STATUS_OK

    def csv_row(self) -> list[str]:
        def cell(v):
            return "" if v is None else str(v)

        return [
            str(self.n), decimal5(self.p), str(self.seed),
            cell(self.transient), cell(self.period),
            "" if self.speed is None else decimal5(self.speed),
            cell(self.red_segments), cell(self.blue_segments),
            cell(self.total_segments), cell(self.longest_segment),
            cell(self.m_min_block), cell(self.violations_on_cycle),
            self.status,
        ]


@dataclass(frozen=True)
class SweepSpec:
    ns: tuple[int, ...]
    ps: tuple[Fraction, ...]
    seeds: tuple[int, ...]
    budget: int | None = None
    out: str | Path | None = None

    def __post_init__(self):
        if not self.ns or not self.ps:
            raise ValueError("n and p lists must be non-empty")
        if self.budget is not None and self.budget < 1:
            raise ValueError("budget must be at least 1")

    def triples(self) -> list[tuple[int, Fraction, int]]:
        return [(n, p, seed) for n in self.ns for p in self.ps for seed in self.seeds]


def sample_junction(n: int, p, seed: int) -> DirectState:
    """round(p*n) cars per color, junction never doubly occupied.

    Red positions come from a partial shuffle driven by splitmix64(seed);
    blue positions from splitmix64(seed XOR salt), drawn from the full index
    range minus the junction when red already took it (a slight, documented
    non-uniformity that keeps the junction single).
    """
    p = as_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("density must lie in [0, 1]")
    k = round_half_up(p * n)
    red = partial_sample(list(range(n)), k, SplitMix64(seed))
    red_set = set(red)
    blue_pool = [i for i in range(n) if i != 0] if 0 in red_set else list(range(n))
    if k > len(blue_pool):
        raise ValueError("no room for blue cars outside the occupied junction")
    blue = partial_sample(blue_pool, k, SplitMix64(seed ^ BLUE_STREAM_SALT))
    return direct_from_cars(n, red_set, set(blue))


def run_experiment(n: int, p, seed: int, budget: int | None = None) -> RunRecord:
    """Sample, normalize, find the cycle, and measure it at the entry state."""
    p = as_fraction(p)
    m0 = to_normalized(sample_junction(n, p, seed))
    try:
        rep = find_cycle(m0, max_steps=budget)
    except ResourceLimit:
        return RunRecord(n, p, seed, None, None, None, None, None, None,
                         None, None, None, STATUS_LIMIT)
    seg = count_segments(rep.entry_state)
    return RunRecord(
        n, p, seed, rep.transient, rep.period, rep.speed_red,
        seg.red_segments, seg.blue_segments, per_color_segments(seg), seg.longest,
        rep.m_min_block, rep.violations_on_cycle, STATUS_OK,
    )


def _run_triple(args) -> RunRecord:
    n, p, seed, budget = args
    return run_experiment(n, p, seed, budget)


def sweep(spec: SweepSpec, workers: int = 1) -> list[RunRecord]:
    """Run every (n, p, seed) triple and write the CSV if spec.out is set."""
    jobs = [(n, p, seed, spec.budget) for n, p, seed in spec.triples()]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_triple, jobs))
    else:
        records = [_run_triple(j) for j in jobs]
    if spec.out is not None:
        write_csv(records, spec.out)
    return records


def write_csv(records: list[RunRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        for rec in records:
            writer.writerow(rec.csv_row())


@dataclass(frozen=True)
class AggregateRow:
    n: int
    mean_speed: float
    mean_total_segments: float
    mean_longest: float
    segments_per_n: float
    segments_per_sqrt_n: float
    runs_used: int


def aggregate(records: list[RunRecord]) -> list[AggregateRow]:
    """Per-n means of the completed records (all records must share p)."""
    recs = [r for r in records if r.complete]
    if not recs:
        raise ValueError("no complete records to aggregate")
    if len({r.p for r in recs}) != 1:
        raise ValueError("records mix densities; aggregate one p at a time")
    rows = []
    for n in sorted({r.n for r in recs}):
        grp = [r for r in recs if r.n == n]
        cnt = len(grp)
        mean_speed = sum((r.speed for r in grp), Fraction(0)) / cnt
        mean_segs = Fraction(sum(r.total_segments for r in grp), cnt)
        mean_longest = Fraction(sum(r.longest_segment for r in grp), cnt)
        rows.append(AggregateRow(
            n, float(mean_speed), float(mean_segs), float(mean_longest),
            float(mean_segs) / n, float(mean_segs) / math.sqrt(n), cnt,
        ))
    return rows


def format_table(rows: list[AggregateRow]) -> str:
    header = (f"{'n':>8}  {'speed':>9}  {'segments':>9}  {'longest':>9}  "
              f"{'segs/n':>9}  {'segs/sqrt(n)':>12}")
    lines = [header]
    for row in rows:
        lines.append(
            f"{row.n:>8d}  {row.mean_speed:>9.5f}  {row.mean_total_segments:>9.2f}  "
            f"{row.mean_longest:>9.2f}  {row.segments_per_n:>9.5f}  "
            f"{row.segments_per_sqrt_n:>12.5f}"
        )
    return "\n".join(lines)
