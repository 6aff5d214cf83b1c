"""Cross-shaped junction model: one cyclic red row and one cyclic blue column
sharing cell 0 (the junction).

This is the literal, O(n)-per-turn formulation used as ground truth. Red cars
move right (index +1), blue cars move "up" (also index +1 on the column). A
car moves when the cell ahead is free, or when the same-colored car ahead
moves too, so maximal runs advance as blocks and never split. The only cell
where the colors interact is the junction: a run whose head would enter the
junction stays put while the other color occupies it. Red moves first each
turn; blue then sees the post-move red occupancy of the junction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import JunctionDoublyOccupied


class MoveCount(NamedTuple):
    red_moves: int
    blue_moves: int


@dataclass(frozen=True)
class DirectState:
    """Occupancy snapshot. row[0] and col[0] are the same physical cell."""

    n: int
    row: tuple[bool, ...]
    col: tuple[bool, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if len(self.row) != self.n or len(self.col) != self.n:
            raise ValueError("row/col length must equal n")
        if self.row[0] and self.col[0]:
            raise JunctionDoublyOccupied("junction cell holds both a red and a blue car")

    @property
    def red_count(self) -> int:
        return sum(self.row)

    @property
    def blue_count(self) -> int:
        return sum(self.col)


def direct_from_cars(n: int, red_positions: Iterable[int], blue_positions: Iterable[int]) -> DirectState:
    """Build a state from explicit index sets."""
    red = set(red_positions)
    blue = set(blue_positions)
    for idx in red | blue:
        if not 0 <= idx < n:
            raise IndexError(f"car position {idx} outside [0, {n})")
    row = tuple(i in red for i in range(n))
    col = tuple(i in blue for i in range(n))
    return DirectState(n, row, col)


def _shift_lane(cells: tuple[bool, ...], junction_blocked: bool) -> tuple[tuple[bool, ...], int]:
    """Advance every maximal run of one lane by one cell.

    junction_blocked: the other color sits in the junction, so the run ending
    just left of it (at index n-1) stays put. Runs elsewhere can only be
    headed by an empty cell, hence always move; a full lane rotates freely
    (the other color cannot be in the junction then).
    """
    n = len(cells)
    if not any(cells):
        return cells, 0
    blocked = [False] * n
    if junction_blocked and cells[n - 1]:
        i = n - 1
        # Cannot wrap: the junction is held by the other color, so cells[0] is free.
        while i >= 0 and cells[i]:
            blocked[i] = True
            i -= 1
    nxt = [False] * n
    moved = 0
    for i in range(n):
        if not cells[i]:
            continue
        if blocked[i]:
            nxt[i] = True
        else:
            nxt[(i + 1) % n] = True
            moved += 1
    return tuple(nxt), moved


def direct_step(s: DirectState) -> tuple[DirectState, MoveCount]:
    """One turn: red substep, then blue substep against the updated junction."""
    new_row, red_moves = _shift_lane(s.row, s.col[0])
    new_col, blue_moves = _shift_lane(s.col, new_row[0])
    return DirectState(s.n, new_row, new_col), MoveCount(red_moves, blue_moves)


def direct_run(s: DirectState, turns: int) -> tuple[DirectState, MoveCount]:
    """Compose direct_step `turns` times, accumulating move counts."""
    if turns < 0:
        raise ValueError("turns must be non-negative")
    red_total = 0
    blue_total = 0
    cur = s
    for _ in range(turns):
        cur, mc = direct_step(cur)
        red_total += mc.red_moves
        blue_total += mc.blue_moves
    return cur, MoveCount(red_total, blue_total)
