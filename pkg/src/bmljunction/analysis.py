"""Cycle detection, cycle-exact speeds, segment statistics, density bounds,
and the mechanical checker for the stable-state structure claims.

The orbit of a junction state is eventually periodic, and the pointer returns
to its slot only after whole laps, so the period is always a multiple of n.
find_cycle exploits this: full states are compared lap-aligned, using a
power-of-two ladder of snapshots (Brent-style: bounded memory, full-state
equality, never hash-only). Speeds come out as exact rationals from push
accounting; the test suite checks them against move counting in the cross
model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

from .engine import JunctionEngine
from .errors import EmptyInterval, HypothesisNotMet, ResourceLimit
from .normalized import NormalizedState
from .rng import as_fraction, round_half_up


class SegmentStats(NamedTuple):
    red_segments: int
    blue_segments: int
    total_segments: int
    longest: int


class NamedCheck(NamedTuple):
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class CycleReport:
    """Exact description of the eventual periodic orbit.

    transient: first turn t0 whose state lies on the orbit.
    period: minimal M with state(t0+M) == state(t0), full (r, b, s) equality.
    speed_*: per-car moves per turn over one period, exact.
    m_min_block: smallest min(s_R, s_B) over the pointer's arrivals at
        violation blocks within one period (see iter_hypothesis_states);
        equals the on-orbit violation count at every arrival, and 0 for
        free-flowing orbits.
    violations_on_cycle: violation count on the orbit (constant there).
    entry_state: the state at t0.
    """

    transient: int
    period: int
    speed_red: Fraction
    speed_blue: Fraction
    m_min_block: int
    violations_on_cycle: int
    entry_state: NormalizedState


@dataclass(frozen=True)
class StructureReport:
    """Named results of the stable-state structure checks at an arrival."""

    s_r: int
    s_b: int
    m: int
    big_m: int
    checks: dict[str, bool]

    @property
    def all_passed(self) -> bool:
        return all(self.checks.values())


def _runs_cyclic(cells) -> tuple[int, int]:
    """(number of maximal cyclic runs, longest run) of a 0/1 sequence."""
    n = len(cells)
    total = sum(cells)
    if total == 0:
        return 0, 0
    if total == n:
        return 1, n
    start = cells.index(False)
    count = 0
    longest = 0
    cur = 0
    for step in range(1, n + 1):
        if cells[(start + step) % n]:
            cur += 1
        else:
            if cur:
                count += 1
                if cur > longest:
                    longest = cur
                cur = 0
    return count, longest


def count_segments(m: NormalizedState) -> SegmentStats:
    red_count, red_longest = _runs_cyclic(m.r)
    blue_count, blue_longest = _runs_cyclic(m.b)
    return SegmentStats(red_count, blue_count, red_count + blue_count,
                        max(red_longest, blue_longest))


def per_color_segments(seg: SegmentStats) -> int:
    """Segment count in the single-color convention of the summary tables.

    Red and blue segment counts coincide on every non-free-flowing orbit (the
    stable structure alternates one red run per blue run), so "the number of
    segments" is well defined there; free-flowing states may differ by a few,
    and the rounded mean is reported.
    """
    return (seg.red_segments + seg.blue_segments + 1) // 2


def speed_bound(p) -> Fraction:
    """Speed ceiling min(1, 1/(2p)): one car per turn through the junction."""
    p = as_fraction(p)
    if not 0 < p < 1:
        raise ValueError("density must lie strictly between 0 and 1")
    return min(Fraction(1), Fraction(1, 2) / p)


def c_of_p(p) -> int:
    """floor(p / (1 - 2p)), the residual violation budget below density 1/2."""
    p = as_fraction(p)
    if not 0 < p < Fraction(1, 2):
        raise ValueError("defined for densities strictly below 1/2")
    return math.floor(p / (1 - 2 * p))


def m_bounds(n: int, p) -> tuple[int, int]:
    """Inclusive interval of minimal-block sizes m compatible with n and p.

    Requires c <= n + m (car-count ceiling) and (2m/(2m+1))n + m <= c
    (car-count floor), for c = 2*round(p*n) cars, solved exactly over the
    integers with no linearization.
    """
    p = as_fraction(p)
    c = 2 * round_half_up(p * n)
    lo = max(0, c - n)

    def fits(m: int) -> bool:
        return Fraction(2 * m * n, 2 * m + 1) + m <= c

    if not fits(lo):
        raise EmptyInterval(f"no block size satisfies both bounds for n={n}, p={p}")
    hi = lo
    while fits(hi + 1):
        hi += 1
    return lo, hi


def _free_flow_report(m0: NormalizedState, eng: JunctionEngine, budget: int) -> CycleReport:
    n = m0.n
    transient = eng.last_push_t + 1
    if transient + n > budget:
        raise ResourceLimit(
            f"flow settles only after {transient} turns, over budget {budget}",
            steps_done=transient + n, violations=0,
        )
    entry = NormalizedState(
        n,
        tuple(x == 1 for x in eng.r),
        tuple(x == 1 for x in eng.b),
        (m0.s - transient) % n,
    )
    one = Fraction(1)
    return CycleReport(transient, n, one, one, 0, 0, entry)


def find_cycle(m0: NormalizedState, max_steps: int | None = None) -> CycleReport:
    """Locate the orbit exactly and measure it over one full period."""
    n = m0.n
    cars_r = m0.red_count
    cars_b = m0.blue_count
    budget = max_steps if max_steps is not None else 50 * n * (1 + cars_r + cars_b)

    eng = JunctionEngine.from_state(m0)
    if eng.flowing:
        return _free_flow_report(m0, eng, budget)

    hare = eng.copy()
    # Snapshot ladder at laps 0, 1, 2, 4, 8, ...: (lap, key, cum_red, cum_blue).
    # All snapshots below the first matching one are strictly pre-orbit, so
    # the first match pins the minimal lap period.
    anchors = [(0, hare.occupancy_key(), 0, 0)]
    next_snap = 1
    lap = 0
    lam = None
    base = None
    while True:
        hare.advance(n)
        lap += 1
        if hare.flowing:
            return _free_flow_report(m0, hare, budget)
        key = hare.occupancy_key()
        for a_lap, a_key, a_red, a_blue in anchors:
            if key == a_key:
                lam, base = lap - a_lap, (a_lap, a_red, a_blue)
                break
        if lam is not None:
            break
        if lap == next_snap:
            anchors.append((lap, key, hare.cum_red_pushed, hare.cum_blue_pushed))
            next_snap *= 2
        if hare.t > 2 * budget + 2 * n:
            raise ResourceLimit(
                f"no recurrence within {hare.t} turns (budget {budget})",
                steps_done=hare.t, violations=len(hare.viol),
            )

    period = lam * n
    base_lap, base_red, base_blue = base
    pushed_red = hare.cum_red_pushed - base_red
    pushed_blue = hare.cum_blue_pushed - base_blue
    speed_red = Fraction(period * cars_r - pushed_red, period * cars_r) if cars_r else Fraction(1)
    speed_blue = Fraction(period * cars_b - pushed_blue, period * cars_b) if cars_b else Fraction(1)

    # Exact transient: walk two cursors one period apart until they agree;
    # occupancy can only change at pushes, so hop between push turns. The
    # leading cursor records arrivals, which end up covering exactly the
    # period window [transient, transient + period).
    y = JunctionEngine.from_state(m0)
    y.arrivals = []
    y.advance(period)
    x = JunctionEngine.from_state(m0)
    while x.occupancy_key() != y.occupancy_key():
        d = min(x.turns_until_push(), y.turns_until_push()) + 1
        x.advance(d)
        y.advance(d)
    transient = x.t
    if transient + period > budget:
        raise ResourceLimit(
            f"transient {transient} + period {period} over budget {budget}",
            steps_done=transient + period, violations=len(x.viol),
        )
    m_values = [mm for (tt, mm) in y.arrivals if tt >= transient]
    m_min_block = min(m_values) if m_values else 0
    return CycleReport(transient, period, speed_red, speed_blue,
                       m_min_block, len(x.viol), x.to_state())


def iter_hypothesis_states(m0: NormalizedState, period: int) -> Iterator[NormalizedState]:
    """Yield every arrival state over one period, starting from an on-orbit
    state.

    An arrival is a turn whose blue push does not continue a push cascade
    (the previous turn pushed nothing, or pushed red): the pointer has just
    reached a violation block, and both colors have runs ending one place
    left of it. Lazy: the caller typically feeds each state into
    stable_structure_report.
    """
    eng = JunctionEngine.from_state(m0)
    remaining = period
    prev_push_blue_at = None
    held_first = None  # a blue push at t=0 may continue last period's cascade
    while remaining > 0:
        d = eng.turns_until_push()
        if d is None or d >= remaining:
            eng.advance(remaining)
            break
        if d:
            eng.advance(d)
            remaining -= d
        s = eng.s
        blue_push = not eng.b[s]  # a push fires this turn; red iff b[s]
        state = None
        if blue_push and prev_push_blue_at != eng.t - 1:
            if eng.t == 0:
                held_first = eng.to_state()
            else:
                state = eng.to_state()
        prev_push_blue_at = eng.t if blue_push else None
        eng.advance(1)
        remaining -= 1
        if state is not None:
            yield state
    if held_first is not None and prev_push_blue_at != period - 1:
        # the periodic predecessor turn did not push blue, so the very first
        # push really was an arrival
        yield held_first


def stable_structure_report(state: NormalizedState) -> StructureReport:
    """Check the stable-state structure claims at an arrival state.

    The state must be on its orbit and at an arrival (both the caller's
    responsibility; see iter_hypothesis_states) and show the entry pattern:
    no blue car on the pointer place, red and blue runs both ending one
    place left of it. Raises HypothesisNotMet if the pattern is absent. The
    pointer place may hold a red car: the red run then continues through it
    into the low end of the region.
    """
    n, r, b, s = state.n, state.r, state.b, state.s
    prev = (s - 1) % n
    if b[s] or not (r[prev] and b[prev]):
        raise HypothesisNotMet("no violation block ends beside the pointer")

    s_r = 1
    while s_r < n and r[(prev - s_r) % n]:
        s_r += 1
    s_b = 1
    while s_b < n and b[(prev - s_b) % n]:
        s_b += 1
    m = min(s_r, s_b)
    big_m = max(s_r, s_b)

    def at(k: int) -> int:
        # place k of the rotated frame in which the pointer is place 0
        return (s + k) % n

    checks: dict[str, bool] = {}

    window_ok = True
    for k in range(n - big_m, n):
        window_ok &= r[at(k)] == (k >= n - s_r)
        window_ok &= b[at(k)] == (k >= n - s_b)
    checks["window_exact"] = window_ok

    e = at(n - big_m - 1)
    checks["window_left_empty"] = not r[e] and not b[e]

    # Region below the window, scanned leftwards: an empty place, then a red
    # run, then a blue run, repeating; the final group may be a bare red run
    # reaching the pointer place and wrapping into the window's red run.
    # Legal transitions while moving left are E->R, R->R|B, B->B|E.
    single_type = True
    alternation = True
    prev_sym = None
    next_sym = {"E": "R", "R": "B", "B": "E"}
    for k in range(n - big_m - 1, -1, -1):
        i = at(k)
        if r[i] and b[i]:
            single_type = False
            alternation = False
            break
        sym = "R" if r[i] else ("B" if b[i] else "E")
        if prev_sym is None:
            if sym != "E":
                alternation = False
                break
        elif sym == prev_sym:
            if sym == "E":
                alternation = False
                break
        elif next_sym[prev_sym] != sym:
            alternation = False
            break
        prev_sym = sym
    else:
        # ending on a red place means the run wraps through the pointer
        # (legal); a blue run cannot, since the pointer place has no blue car
        if prev_sym == "B":
            alternation = False
    checks["region_single_type"] = single_type
    checks["region_alternation"] = alternation

    # Every maximal run of either color is at least m long (wrapping runs
    # included, which covers the red run through the pointer).
    def min_run_length(cells) -> int:
        total = sum(cells)
        if total in (0, n):
            return total
        start = cells.index(False)
        shortest = n
        cur = 0
        for step in range(1, n + 1):
            if cells[(start + step) % n]:
                cur += 1
            elif cur:
                shortest = min(shortest, cur)
                cur = 0
        return shortest

    checks["region_min_run"] = (min_run_length(list(state.r)) >= m
                                and min_run_length(list(state.b)) >= m)

    seg = count_segments(state)
    checks["equal_segment_counts"] = seg.red_segments == seg.blue_segments

    cars = state.red_count + state.blue_count
    checks["car_count_upper"] = cars <= n + m
    checks["car_count_lower"] = Fraction(2 * m * n, 2 * m + 1) + m <= cars
    checks["segment_count_bound"] = seg.total_segments <= Fraction(n, m) + 1

    return StructureReport(s_r, s_b, m, big_m, checks)


def verify_theorem_suite(m0: NormalizedState, p) -> list[NamedCheck]:
    """Run find_cycle and check the speed/segment guarantees for density p."""
    p = as_fraction(p)
    n = m0.n
    rep = find_cycle(m0)
    speed = rep.speed_red
    seg_stats = count_segments(rep.entry_state)
    segs = seg_stats.total_segments
    checks = [
        NamedCheck("equal_speeds", rep.speed_red == rep.speed_blue,
                   f"red {rep.speed_red} vs blue {rep.speed_blue}"),
        NamedCheck("speed_le_ceiling", speed <= speed_bound(p),
                   f"speed {speed} vs ceiling {speed_bound(p)}"),
        NamedCheck("speed_ge_violation_floor",
                   speed >= Fraction(n, n + rep.violations_on_cycle),
                   f"speed {speed} vs n/(n+|V|) with |V|={rep.violations_on_cycle}"),
    ]
    half = Fraction(1, 2)
    if p < half:
        c = c_of_p(p)
        checks.append(NamedCheck("speed_ge_residual_floor",
                                 speed >= 1 - Fraction(c, n),
                                 f"speed {speed} vs 1 - {c}/{n}"))
        if p < Fraction(1, 3):
            checks.append(NamedCheck("speed_exactly_one", speed == 1, f"speed {speed}"))
    elif p > half:
        _, m_hi = m_bounds(n, p)
        checks.append(NamedCheck("speed_ge_block_floor",
                                 speed >= Fraction(n, n + m_hi),
                                 f"speed {speed} vs n/(n+{m_hi})"))
        seg_cap = 2 * p / (2 * p - 1)
        checks.append(NamedCheck("segments_bounded",
                                 segs <= seg_cap,
                                 f"{segs} segments vs cap {seg_cap}"))
    else:
        checks.append(NamedCheck("speed_ge_sqrt_floor",
                                 (1 - speed) ** 2 * n <= 1,
                                 f"speed {speed} vs 1 - 1/sqrt({n})"))
        # The sqrt cap is stated for the single-color segment count.
        pc = per_color_segments(seg_stats)
        checks.append(NamedCheck("segments_le_sqrt",
                                 pc * pc <= n,
                                 f"{pc} per-color segments vs sqrt({n})"))
    return checks
