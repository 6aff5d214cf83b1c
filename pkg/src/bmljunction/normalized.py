"""Time-normalized junction: cars sit still and the junction pointer moves.

Two indicator rows r, b of length n are stacked over the same places, plus a
junction pointer s. Each turn the pointer moves one place left (s -> s-1 mod
n); occupancy changes only when a car is "pushed": if the junction place holds
a blue car and the place left of it holds a red car, that red car (and the
whole red run behind it) slides one place left, realised as clearing r[s-1]
and filling the first empty red slot left-cyclically. Symmetrically for a
blue car sitting under a red one next to an empty junction. This formulation
is step-for-step equivalent to the cross model under the index embedding
implemented by to_normalized / from_normalized.

Indices wrap mod n everywhere; i-1 at i=0 means n-1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .direct import DirectState


class PushKind(enum.Enum):
    RED_PUSHED = "red"
    BLUE_PUSHED = "blue"
    NONE = "none"


class PushEvent(NamedTuple):
    kind: PushKind
    vacated_index: int | None
    filled_index: int | None


@dataclass(frozen=True)
class NormalizedState:
    n: int
    r: tuple[bool, ...]
    b: tuple[bool, ...]
    s: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if len(self.r) != self.n or len(self.b) != self.n:
            raise ValueError("indicator length must equal n")
        if not 0 <= self.s < self.n:
            raise ValueError("junction pointer out of range")
        if self.r[self.s] and self.b[self.s]:
            raise ValueError("junction place holds two cars")

    @property
    def red_count(self) -> int:
        return sum(self.r)

    @property
    def blue_count(self) -> int:
        return sum(self.b)


@dataclass(frozen=True)
class ViolationSet:
    """Places whose local pattern will force a push when the junction arrives.

    v_b: i with r[i-1] and b[i-1] set but b[i] clear (a blue car will be pushed).
    v_r: i with r[i-1] and b[i] set (a red car will be pushed).
    x:   indicator over all places of membership in either set.
    """

    v_b: frozenset[int]
    v_r: frozenset[int]
    x: tuple[bool, ...]

    @property
    def size(self) -> int:
        return len(self.v_b) + len(self.v_r)


def normalized_from_cars(n: int, red_positions: Iterable[int], blue_positions: Iterable[int],
                         s: int | None = None) -> NormalizedState:
    """Convenience constructor; the pointer defaults to n-1."""
    red = set(red_positions)
    blue = set(blue_positions)
    for idx in red | blue:
        if not 0 <= idx < n:
            raise IndexError(f"car position {idx} outside [0, {n})")
    return NormalizedState(
        n,
        tuple(i in red for i in range(n)),
        tuple(i in blue for i in range(n)),
        n - 1 if s is None else s,
    )


def to_normalized(d: DirectState) -> NormalizedState:
    """Embed a cross state; the junction cell lands at pointer position n-1."""
    n = d.n
    r = tuple(d.row[(i + 1) % n] for i in range(n))
    b = tuple(d.col[(i + 1) % n] for i in range(n))
    return NormalizedState(n, r, b, n - 1)


def from_normalized(m: NormalizedState) -> DirectState:
    """Invert the embedding: place s maps back to the junction cell 0."""
    n, s = m.n, m.s
    row = tuple(m.r[(j + s) % n] for j in range(n))
    col = tuple(m.b[(j + s) % n] for j in range(n))
    return DirectState(n, row, col)


def _first_empty_left(cells: list[bool], start: int, n: int) -> int:
    """First index with no car at start-1, start-2, ... (cyclic). The caller
    guarantees one exists (the junction place of the pushed color is empty)."""
    i = (start - 1) % n
    while cells[i]:
        i = (i - 1) % n
    return i


def normalized_step(m: NormalizedState) -> tuple[NormalizedState, PushEvent]:
    """One turn of the pointer-moving dynamics."""
    n, s = m.n, m.s
    prev = (s - 1) % n
    r = list(m.r)
    b = list(m.b)
    if b[s] and r[prev]:
        filled = _first_empty_left(r, prev, n)
        r[prev] = False
        r[filled] = True
        ev = PushEvent(PushKind.RED_PUSHED, prev, filled)
    elif not b[s] and r[prev] and b[prev]:
        filled = _first_empty_left(b, prev, n)
        b[prev] = False
        b[filled] = True
        ev = PushEvent(PushKind.BLUE_PUSHED, prev, filled)
    else:
        ev = PushEvent(PushKind.NONE, None, None)
    return NormalizedState(n, tuple(r), tuple(b), prev), ev


def violations(m: NormalizedState) -> ViolationSet:
    n, r, b = m.n, m.r, m.b
    v_b = frozenset(i for i in range(n) if r[(i - 1) % n] and b[(i - 1) % n] and not b[i])
    v_r = frozenset(i for i in range(n) if r[(i - 1) % n] and b[i])
    x = tuple(i in v_b or i in v_r for i in range(n))
    return ViolationSet(v_b, v_r, x)


def is_free_flowing(m: NormalizedState) -> bool:
    """True when no car will ever wait at the junction.

    Checked two ways (single occupancy everywhere plus no red immediately
    left of a blue, versus emptiness of the violation sets); the asserted
    agreement guards the violation bookkeeping.
    """
    n, r, b = m.n, m.r, m.b
    single = all(not (r[i] and b[i]) for i in range(n))
    no_tail = all(not (b[i] and r[(i - 1) % n]) for i in range(n))
    free = single and no_tail
    v = violations(m)
    assert free == (v.size == 0), "free-flow conditions disagree with violation sets"
    return free


def gap_count(m: NormalizedState, k: int) -> int:
    """Number of cyclic windows of width k that are empty in both rows."""
    n = m.n
    if not 2 <= k <= n:
        raise ValueError("window width must satisfy 2 <= k <= n")
    occ = [m.r[i] or m.b[i] for i in range(n)]
    if not any(occ):
        return n
    start = occ.index(True)
    count = 0
    cur = 0
    for step in range(1, n + 1):
        i = (start + step) % n
        if not occ[i]:
            cur += 1
        else:
            if cur >= k:
                count += cur - k + 1
            cur = 0
    return count
