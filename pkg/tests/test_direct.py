import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bmljunction import (JunctionDoublyOccupied, MoveCount, direct_from_cars,
                         direct_run, direct_step)


def occupied(cells):
    return {i for i, x in enumerate(cells) if x}


class TestConstruction:
    def test_empty(self):
        s = direct_from_cars(4, set(), set())
        assert occupied(s.row) == set() and occupied(s.col) == set()

    def test_explicit(self):
        s = direct_from_cars(4, {3}, {0})
        assert occupied(s.row) == {3} and occupied(s.col) == {0}

    def test_junction_conflict(self):
        with pytest.raises(JunctionDoublyOccupied):
            direct_from_cars(4, {0}, {0})

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            direct_from_cars(4, {4}, set())


class TestStep:
    def test_empty_unchanged(self):
        s = direct_from_cars(4, set(), set())
        s2, mc = direct_step(s)
        assert s2 == s and mc == MoveCount(0, 0)

    def test_red_blocked_blue_exits(self):
        s2, mc = direct_step(direct_from_cars(4, {3}, {0}))
        assert occupied(s2.row) == {3} and occupied(s2.col) == {1}
        assert mc == MoveCount(0, 1)

    def test_run_moves_together(self):
        s2, mc = direct_step(direct_from_cars(5, {1, 2, 3}, set()))
        assert occupied(s2.row) == {2, 3, 4}
        assert mc == MoveCount(3, 0)

    def test_blue_blocked_by_red_junction(self):
        # red enters the junction first, blocking the blue car behind it
        s2, mc = direct_step(direct_from_cars(3, {2}, {2}))
        assert occupied(s2.row) == {0} and occupied(s2.col) == {2}
        assert mc == MoveCount(1, 0)

    def test_full_red_ring_rotates(self):
        s = direct_from_cars(3, {0, 1, 2}, set())
        s2, mc = direct_step(s)
        assert occupied(s2.row) == {0, 1, 2} and mc.red_moves == 3

    def test_full_ring_stuck_behind_junction_blue(self):
        # blue sits in the junction; the red run ending at n-1 cannot enter
        s = direct_from_cars(4, {1, 2, 3}, {0})
        s2, mc = direct_step(s)
        assert occupied(s2.row) == {1, 2, 3}
        assert mc.red_moves == 0


class TestRun:
    def test_zero_turns_identity(self):
        s = direct_from_cars(4, {3}, {0})
        s2, mc = direct_run(s, 0)
        assert s2 == s and mc == MoveCount(0, 0)

    def test_two_turns(self):
        s2, _ = direct_run(direct_from_cars(4, {3}, {0}), 2)
        assert occupied(s2.row) == {0} and occupied(s2.col) == {2}

    def test_cyclic_return(self):
        s = direct_from_cars(5, {1, 2, 3}, set())
        s2, mc = direct_run(s, 5)
        assert s2 == s and mc == MoveCount(15, 0)

    def test_negative_turns(self):
        with pytest.raises(ValueError):
            direct_run(direct_from_cars(3, set(), set()), -1)


@st.composite
def direct_states(draw, max_n=16):
    n = draw(st.integers(min_value=2, max_value=max_n))
    red = draw(st.sets(st.integers(0, n - 1), max_size=n))
    blue = draw(st.sets(st.integers(0, n - 1), max_size=n))
    if 0 in red:
        blue.discard(0)
    return direct_from_cars(n, red, blue)


@given(direct_states())
@settings(max_examples=80, deadline=None)
def test_car_conservation_and_junction_exclusivity(s):
    cur = s
    red, blue = s.red_count, s.blue_count
    for _ in range(8):
        cur, _ = direct_step(cur)
        assert cur.red_count == red and cur.blue_count == blue
        assert not (cur.row[0] and cur.col[0])


@given(direct_states())
@settings(max_examples=80, deadline=None)
def test_runs_never_split(s):
    def runs(cells):
        n = len(cells)
        if all(cells) or not any(cells):
            return 1 if any(cells) else 0
        return sum(1 for i in range(n) if cells[i] and not cells[i - 1])

    cur = s
    prev_red, prev_blue = runs(s.row), runs(s.col)
    for _ in range(3 * s.n):
        cur, _ = direct_step(cur)
        now_red, now_blue = runs(cur.row), runs(cur.col)
        assert now_red <= prev_red and now_blue <= prev_blue
        prev_red, prev_blue = now_red, now_blue


@given(direct_states())
@settings(max_examples=40, deadline=None)
def test_step_is_pure(s):
    a, mca = direct_step(s)
    b, mcb = direct_step(s)
    assert a == b and mca == mcb
