"""Self-check suites: model equivalence, monotone invariants, and the
speed/segment guarantees. Used by the CLI `verify` command and reused by the
acceptance tests at their larger sample sizes.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .analysis import verify_theorem_suite
from .direct import DirectState, direct_from_cars, direct_step
from .engine import JunctionEngine
from .normalized import NormalizedState, from_normalized, to_normalized
from .rng import SplitMix64, partial_sample
from .experiments import sample_junction


@dataclass(frozen=True)
class Counterexample:
    n: int
    seed: int | None
    step: int
    digest: str
    what: str

    def __str__(self):
        seed = "exhaustive" if self.seed is None else f"seed={self.seed}"
        return f"n={self.n} {seed} step={self.step} state={self.digest}: {self.what}"


def state_digest(m: NormalizedState) -> str:
    bits = bytes(1 if x else 0 for x in m.r) + bytes(1 if x else 0 for x in m.b)
    return hashlib.sha256(f"{m.n}:{m.s}:".encode() + bits).hexdigest()[:16]


def _check_trajectory(d0: DirectState, turns: int, seed: int | None) -> Counterexample | None:
    """Direct stepping and normalized stepping must agree at every turn."""
    eng = JunctionEngine.from_state(to_normalized(d0))
    d = d0
    for t in range(1, turns + 1):
        eng.advance(1)
        m = eng.to_state()
        d, _ = direct_step(d)
        if from_normalized(m) != d:
            return Counterexample(d0.n, seed, t, state_digest(m), "model mismatch")
    return None


def _small_subsets(n: int, max_cars: int):
    for size in range(min(max_cars, n) + 1):
        yield from combinations(range(n), size)


def equivalence_suite(max_n: int = 7, samples: int = 200, seed: int = 0,
                      rand_max_n: int = 64) -> list[Counterexample]:
    """Exhaustive small states plus random larger ones, 3n turns each."""
    failures: list[Counterexample] = []
    for n in range(1, max_n + 1):
        subsets = list(_small_subsets(n, 3))
        for red in subsets:
            for blue in subsets:
                if 0 in red and 0 in blue:
                    continue
                cex = _check_trajectory(direct_from_cars(n, red, blue), 3 * n, None)
                if cex:
                    failures.append(cex)
                    return failures
    rng = SplitMix64(seed)
    for i in range(samples):
        n = 2 + rng.below(rand_max_n - 1)
        k_red = rng.below(n + 1)
        red = partial_sample(list(range(n)), k_red, SplitMix64(rng.next_u64()))
        pool = [j for j in range(n) if j != 0] if 0 in red else list(range(n))
        k_blue = rng.below(len(pool) + 1)
        blue = partial_sample(pool, k_blue, SplitMix64(rng.next_u64()))
        cex = _check_trajectory(direct_from_cars(n, red, blue), 3 * n, i)
        if cex:
            failures.append(cex)
            return failures
    return failures


def _violation_count(r: bytearray, b: bytearray, n: int) -> int:
    return sum(1 for i in range(n) if r[i - 1] and (b[i] or b[i - 1]))


def _segment_count(cells, n: int) -> int:
    total = sum(cells)
    if total in (0, n):
        return 1 if total else 0
    return sum(1 for i in range(n) if cells[i] and not cells[i - 1])


def _gap_count(r, b, n: int, k: int) -> int:
    occ = [rr or bb for rr, bb in zip(r, b)]
    if not any(occ):
        return n
    start = occ.index(True)
    count = 0
    cur = 0
    for step in range(1, n + 1):
        if not occ[(start + step) % n]:
            cur += 1
        else:
            if cur >= k:
                count += cur - k + 1
            cur = 0
    return count


_DENSITIES = tuple(Fraction(x, 10) for x in range(2, 9))


def invariants_suite(samples: int = 100, max_n: int = 256, seed: int = 0,
                     gap_widths: tuple[int, ...] = (2, 3, 5)) -> list[Counterexample]:
    """Violation count, per-color segment counts, and gap counts must never
    increase along a trajectory. Metrics only change at pushes, so checking
    after each push covers every turn."""
    failures: list[Counterexample] = []
    rng = SplitMix64(seed)
    for i in range(samples):
        n = 8 + rng.below(max_n - 7)
        p = _DENSITIES[i % len(_DENSITIES)]
        run_seed = rng.next_u64()
        m0 = to_normalized(sample_junction(n, p, run_seed))
        eng = JunctionEngine.from_state(m0)

        state = {
            "viol": _violation_count(eng.r, eng.b, n),
            "red": _segment_count(eng.r, n),
            "blue": _segment_count(eng.b, n),
            "gaps": {k: _gap_count(eng.r, eng.b, n, k) for k in gap_widths if k <= n},
        }
        bad: list[str] = []
        remaining = 4 * n
        while remaining > 0 and not bad:
            d = eng.turns_until_push()
            if d is None or d >= remaining:
                eng.advance(remaining)
                break
            eng.advance(d + 1)
            remaining -= d + 1
            now_viol = _violation_count(eng.r, eng.b, n)
            now_red = _segment_count(eng.r, n)
            now_blue = _segment_count(eng.b, n)
            if now_viol > state["viol"]:
                bad.append(f"violations rose {state['viol']} -> {now_viol}")
            if now_red > state["red"] or now_blue > state["blue"]:
                bad.append("segment count rose")
            for k, prev in state["gaps"].items():
                now_gap = _gap_count(eng.r, eng.b, n, k)
                if now_gap > prev:
                    bad.append(f"gap_count({k}) rose {prev} -> {now_gap}")
                state["gaps"][k] = now_gap
            state["viol"], state["red"], state["blue"] = now_viol, now_red, now_blue
        if bad:
            failures.append(Counterexample(n, run_seed, eng.t,
                                           state_digest(eng.to_state()), "; ".join(bad)))
    return failures


_THEOREM_GRID = tuple(Fraction(s) for s in ("1/4", "2/5", "12/25", "1/2", "13/25", "3/5"))


def theorems_suite(samples: int = 50, seed: int = 0) -> list[Counterexample]:
    """Cycle-exact speed and segment guarantees over a (n, p) grid."""
    failures: list[Counterexample] = []
    rng = SplitMix64(seed)
    sizes = (64, 128, 256)
    for i in range(samples):
        n = sizes[i % len(sizes)]
        p = _THEOREM_GRID[(i // len(sizes)) % len(_THEOREM_GRID)]
        run_seed = rng.next_u64()
        m0 = to_normalized(sample_junction(n, p, run_seed))
        for check in verify_theorem_suite(m0, p):
            if not check.passed:
                failures.append(Counterexample(n, run_seed, 0, state_digest(m0),
                                               f"{check.name}: {check.detail}"))
    return failures
