"""Acceptance suite: one test per exit criterion, each printing a PASS line.

The heavy table criteria run many full cycle searches at n = 10^4 and
dominate the suite's runtime (tens of minutes in total); everything is
single-threaded and deterministic.
"""

import math
from fractions import Fraction

from bmljunction import (OutcomeKind, c_of_p, classify_run, count_segments,
                         find_cycle, iter_hypothesis_states, m_bounds,
                         run_experiment, sample_junction, speed_bound,
                         stable_structure_report, to_normalized, torus_random,
                         torus_step, write_frame)
from bmljunction.experiments import CSV_HEADER, SweepSpec, sweep
from bmljunction.rng import SplitMix64
from bmljunction.verify import equivalence_suite, invariants_suite


def _report(num, name):
    print(f"ACCEPTANCE {num} ({name}): PASS")


def test_criterion_1_model_equivalence():
    failures = equivalence_suite(max_n=7, samples=10_000, seed=20260810,
                                 rand_max_n=64)
    assert failures == [], failures[:3]
    _report(1, "model equivalence, exhaustive n<=7 plus 10^4 random n<=64")


def test_criterion_2_monotonicity():
    failures = invariants_suite(samples=1000, max_n=256, seed=7,
                                gap_widths=(2, 3, 5))
    assert failures == [], failures[:3]
    _report(2, "violations, segment counts and gap counts never increase")


def test_criterion_3_speed_bounds():
    rng = SplitMix64(303)
    densities = tuple(Fraction(x, 10) for x in range(2, 9))
    checked = 0
    for i in range(200):
        n = 16 + rng.below(113)
        p = densities[i % len(densities)]
        rep = find_cycle(to_normalized(sample_junction(n, p, rng.next_u64())))
        assert rep.speed_red == rep.speed_blue
        assert rep.speed_red <= speed_bound(p)
        assert rep.speed_red >= Fraction(n, n + rep.violations_on_cycle)
        checked += 1
    assert checked == 200
    _report(3, "equal speeds, ceiling min(1,1/2p), violation floor; 200 configs")


def test_criterion_4_low_density_exact_speed():
    for n in (64, 256, 1024):
        for seed in range(100):
            rep = find_cycle(to_normalized(sample_junction(n, "0.25", seed)))
            assert rep.speed_red == 1 and rep.speed_blue == 1, (n, seed)
    _report(4, "p=0.25 reaches speed exactly 1 on 300 runs")


def test_criterion_5_table_p048():
    n, p = 1000, Fraction("0.48")
    assert c_of_p(p) == 12
    records = [run_experiment(n, p, seed) for seed in range(30)]
    assert all(r.complete for r in records)
    mean_speed = sum((r.speed for r in records), Fraction(0)) / len(records)
    assert mean_speed >= Fraction("0.999"), float(mean_speed)
    mean_segs = Fraction(sum(r.total_segments for r in records), len(records))
    ratio = mean_segs / n
    assert Fraction("0.029") <= ratio <= Fraction("0.045"), float(ratio)
    floor = 1 - Fraction(12, n)
    assert all(r.speed >= floor for r in records)
    _report(5, f"p=0.48 table: mean speed {float(mean_speed):.5f}, "
               f"segs/n {float(ratio):.4f}")


def test_criterion_6_table_p052():
    n, p = 10_000, Fraction("0.52")
    assert m_bounds(n, p) == (400, 412)
    records = [run_experiment(n, p, seed) for seed in range(10)]
    assert all(r.complete for r in records)
    for r in records:
        assert Fraction("0.9604") <= r.speed <= Fraction("0.96154"), float(r.speed)
        assert r.total_segments <= 26
        assert 400 <= r.m_min_block <= 412, r.m_min_block
    mean_segs = Fraction(sum(r.total_segments for r in records), len(records))
    assert 3 <= mean_segs <= 15, float(mean_segs)
    _report(6, f"p=0.52 table: speeds in bracket, mean segs {float(mean_segs):.1f}, "
               f"m in [400,412]")


def test_criterion_7_table_p050():
    n, p = 10_000, Fraction("0.5")
    records = [run_experiment(n, p, seed) for seed in range(30)]
    assert all(r.complete for r in records)
    for r in records:
        assert r.speed >= Fraction("0.99"), float(r.speed)
        assert r.total_segments <= 100, r.total_segments
    mean_segs = Fraction(sum(r.total_segments for r in records), len(records))
    ratio = float(mean_segs) / math.sqrt(n)
    assert 0.35 <= ratio <= 0.51, ratio
    _report(7, f"p=0.50 table: speeds >= 0.99, mean segs/sqrt(n) {ratio:.3f}")


def test_criterion_8_stable_structure():
    cases = [(n, p) for p in ("0.52", "0.6") for n in (512, 2048)]
    runs = 0
    seed = 0
    while runs < 50:
        n, p = cases[runs % len(cases)]
        seed += 1
        rep = find_cycle(to_normalized(sample_junction(n, p, seed)))
        states = list(iter_hypothesis_states(rep.entry_state, rep.period))
        assert states, (n, p, seed)
        lo = math.ceil(Fraction(2 * rep.m_min_block * n, 2 * rep.m_min_block + 1)) \
            + rep.m_min_block
        for state in states:
            report = stable_structure_report(state)
            assert report.all_passed, (n, p, seed, report)
            assert report.m == rep.m_min_block
            seg = count_segments(state)
            assert seg.red_segments == seg.blue_segments
            cars = state.red_count + state.blue_count
            assert lo <= cars <= n + rep.m_min_block
        runs += 1
    _report(8, "stable structure checks pass at every arrival; 50 runs")


def test_criterion_9_torus_phenomenology():
    n, budget = 64, 100_000
    flow = jam = 0
    flow_grids = []
    jam_grids = []
    for seed in range(20):
        g = torus_random(n, "0.2", seed)
        out = classify_run(g, budget)
        if out.kind is OutcomeKind.FREE_FLOW:
            flow += 1
            flow_grids.append((g, out.turns_elapsed))
    for seed in range(20):
        g = torus_random(n, "0.5", seed)
        out = classify_run(g, budget)
        if out.kind is OutcomeKind.JAMMED:
            jam += 1
            jam_grids.append((g, out.turns_elapsed))
    assert flow >= 18, f"only {flow}/20 free-flowing at p=0.2"
    assert jam >= 18, f"only {jam}/20 jammed at p=0.5"
    # classification stability over 3n further turns
    for g, turns in flow_grids[:3]:
        cars = g.red_count + g.blue_count
        for _ in range(turns):
            g, _ = torus_step(g)
        for _ in range(3 * n):
            g, mc = torus_step(g)
            assert mc.red_moves + mc.blue_moves == cars
    for g, turns in jam_grids[:3]:
        for _ in range(turns):
            g, _ = torus_step(g)
        for _ in range(3 * n):
            g, mc = torus_step(g)
            assert mc.red_moves + mc.blue_moves == 0
    _report(9, f"torus: {flow}/20 free-flow at p=0.2, {jam}/20 jammed at p=0.5, "
               "classifications stable")


def test_criterion_10_format_fidelity(tmp_path):
    import numpy as np
    from bmljunction.torus import TorusGrid

    empty = TorusGrid(2, np.zeros((2, 2), dtype=np.uint8))
    path = tmp_path / "empty.ppm"
    write_frame(empty, path)
    assert path.read_bytes() == b"P6\n2 2\n255\n" + b"\xff" * 12

    cells = np.zeros((2, 2), dtype=np.uint8)
    cells[0, 0] = 1
    path2 = tmp_path / "red.ppm"
    write_frame(TorusGrid(2, cells), path2)
    assert path2.read_bytes()[11:14] == b"\xff\x00\x00"

    for n in (3, 8):
        g = torus_random(n, "0.3", 1)
        p3 = tmp_path / f"{n}.ppm"
        write_frame(g, p3)
        assert p3.stat().st_size == len(f"P6\n{n} {n}\n255\n") + 3 * n * n

    seeds = tuple(range(5))
    outs = []
    for i, workers in enumerate((1, 2, 1)):
        out = tmp_path / f"sweep{i}.csv"
        sweep(SweepSpec(ns=(48,), ps=(Fraction(1, 2),), seeds=seeds, out=out),
              workers=workers)
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    assert outs[0].startswith(CSV_HEADER.encode())
    _report(10, "PPM frames bit-exact; CSV byte-identical across reruns/workers")
