"""Full 2D variant model on an n x n torus.

Red cars move right along their row, blue cars move up their column; each
color's maximal runs advance as blocks (a run moves iff the cell ahead of its
head is empty), red substep first, blue substep against the updated grid.
Used to reproduce the self-organization / gridlock phenomenology and to dump
frame images.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .direct import MoveCount
from .errors import DensityTooHigh
from .rng import SplitMix64, as_fraction, partial_sample, round_half_up

EMPTY, RED, BLUE = 0, 1, 2

_PALETTE = np.array([[255, 255, 255], [255, 0, 0], [0, 0, 255]], dtype=np.uint8)


class OutcomeKind(enum.Enum):
    FREE_FLOW = "free_flow"
    JAMMED = "jammed"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class RunOutcome:
    kind: OutcomeKind
    turns_elapsed: int
    final_speed_estimate: Fraction


@dataclass(eq=False)
class TorusGrid:
    """Row index grows downward, column index rightward; treat as immutable."""

    n: int
    cells: np.ndarray

    def __post_init__(self):
        if self.cells.shape != (self.n, self.n):
            raise ValueError("cells must be an n x n array")

    @property
    def red_count(self) -> int:
        return int((self.cells == RED).sum())

    @property
    def blue_count(self) -> int:
        return int((self.cells == BLUE).sum())

    def key(self) -> bytes:
        return self.cells.tobytes()


def torus_random(n: int, p, seed: int) -> TorusGrid:
    """Fill a torus to total car density p, split evenly between colors.

    p counts all cars (round(p*n^2/2) of each color on distinct cells,
    splitmix64-driven); the observed flow/jam transition then sits near
    p ~ 0.3 at n = 64, matching the phenomenology this module reproduces.
    """
    p = as_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("density must lie in [0, 1]")
    k = round_half_up(p * n * n / 2)
    if 2 * k > n * n:
        raise DensityTooHigh(f"{2 * k} cars do not fit on {n * n} cells")
    cells = np.zeros((n, n), dtype=np.uint8)
    picked = partial_sample(list(range(n * n)), 2 * k, SplitMix64(seed))
    for idx in picked[:k]:
        cells[idx // n, idx % n] = RED
    for idx in picked[k:]:
        cells[idx // n, idx % n] = BLUE
    return TorusGrid(n, cells)


def _movable_runs(color: np.ndarray, occupied: np.ndarray, axis: int, ahead_shift: int) -> np.ndarray:
    """Cars of one color whose run head faces an empty cell.

    ahead_shift is the np.roll shift that brings the cell ahead of position x
    onto x along the movement axis. Movability propagates backwards through
    runs until a fixpoint; full lanes rotate freely.
    """
    ahead_free = ~np.roll(occupied, ahead_shift, axis=axis)
    movable = color & ahead_free
    while True:
        grown = movable | (color & np.roll(movable, ahead_shift, axis=axis))
        if (grown == movable).all():
            break
        movable = grown
    # A lane fully occupied by one color has no run head; it rotates freely
    # (the other color cannot block it, having no cell in that lane).
    if axis == 1:
        full = color.all(axis=1)
        if full.any():
            movable[full, :] = True
    else:
        full = color.all(axis=0)
        if full.any():
            movable[:, full] = True
    return movable


def torus_step(g: TorusGrid) -> tuple[TorusGrid, MoveCount]:
    """One turn: all red runs advance right, then all blue runs advance up."""
    red = g.cells == RED
    blue = g.cells == BLUE

    movable_r = _movable_runs(red, red | blue, axis=1, ahead_shift=-1)
    new_red = np.roll(red & movable_r, 1, axis=1) | (red & ~movable_r)
    red_moves = int(movable_r.sum())

    movable_b = _movable_runs(blue, new_red | blue, axis=0, ahead_shift=1)
    new_blue = np.roll(blue & movable_b, -1, axis=0) | (blue & ~movable_b)
    blue_moves = int(movable_b.sum())

    assert not (new_red & new_blue).any()
    cells = np.where(new_red, RED, np.where(new_blue, BLUE, EMPTY)).astype(np.uint8)
    return TorusGrid(g.n, cells), MoveCount(red_moves, blue_moves)


def classify_run(g: TorusGrid, max_turns: int, *, frames_dir=None, frame_every: int | None = None) -> RunOutcome:
    """Step until the run resolves.

    Free flow: every car moved in each of n consecutive turns and the grid at
    the window's end equals the grid at its start (full speed is then
    periodic forever). Jammed: a turn with zero moves (a fixed point).
    Otherwise undetermined at the budget, with the speed averaged over the
    last n turns. Optionally dumps a frame every frame_every turns.
    """
    n = g.n
    if max_turns < n:
        raise ValueError("max_turns must be at least n")
    cars = g.red_count + g.blue_count
    if frames_dir is not None and frame_every:
        write_frame(g, Path(frames_dir) / f"{0:08d}.ppm")
    if cars == 0:
        return RunOutcome(OutcomeKind.FREE_FLOW, 0, Fraction(1))
    window: deque[int] = deque(maxlen=n)
    streak = 0
    snapshot = b""
    cur = g
    prev_key = g.key()
    for turn in range(1, max_turns + 1):
        cur, mc = torus_step(cur)
        if frames_dir is not None and frame_every and turn % frame_every == 0:
            write_frame(cur, Path(frames_dir) / f"{turn:08d}.ppm")
        moves = mc.red_moves + mc.blue_moves
        window.append(moves)
        if moves == 0:
            return RunOutcome(OutcomeKind.JAMMED, turn, Fraction(0))
        if moves == cars:
            if streak == 0:
                snapshot = prev_key
            streak += 1
            if streak == n:
                if cur.key() == snapshot:
                    return RunOutcome(OutcomeKind.FREE_FLOW, turn, Fraction(1))
                streak = 0
        else:
            streak = 0
        prev_key = cur.key()
    return RunOutcome(OutcomeKind.UNDETERMINED, max_turns,
                      Fraction(sum(window), cars * len(window)))


def write_frame(g: TorusGrid, path) -> None:
    """Binary PPM, one pixel per cell: red/blue cars on white."""
    header = f"P6\n{g.n} {g.n}\n255\n".encode("ascii")
    body = _PALETTE[g.cells].tobytes()
    with open(path, "wb") as fh:
        fh.write(header + body)
