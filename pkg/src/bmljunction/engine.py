"""Event-driven stepper for the time-normalized junction.

Between pushes nothing but the pointer changes, so turns where the junction
sits on no violation are skipped in O(log n): the pointer jumps straight to
the next violation below it. Occupancy, per-color sorted lists of empty
slots, and the sorted violation list are updated incrementally at each push
(a push can only change violation membership at the vacated/filled cells and
their right neighbours).

This accelerator is behaviourally invisible: its trajectories must match
normalized_step exactly (the test suite enforces this, and paranoid mode
recomputes every derived structure from scratch after each push).
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right

from .normalized import NormalizedState, PushKind

# on_push callbacks receive (engine, kind, s, vacated, filled, run_len) with
# the engine still in its pre-push state; engine.t is the firing turn.


class JunctionEngine:
    __slots__ = (
        "n", "r", "b", "s", "t",
        "red_empty", "blue_empty", "viol",
        "cum_red_pushed", "cum_blue_pushed", "last_push_t", "last_push_blue",
        "arrivals", "paranoid",
    )

    def __init__(self):
        # Build via from_state / copy.
        pass

    @classmethod
    def from_state(cls, m: NormalizedState, paranoid: bool = False) -> "JunctionEngine":
        eng = cls()
        eng.n = m.n
        eng.r = bytearray(1 if x else 0 for x in m.r)
        eng.b = bytearray(1 if x else 0 for x in m.b)
        eng.s = m.s
        eng.t = 0
        eng.red_empty = [i for i in range(m.n) if not m.r[i]]
        eng.blue_empty = [i for i in range(m.n) if not m.b[i]]
        eng.viol = [i for i in range(m.n) if eng._violation_at(i)]
        eng.cum_red_pushed = 0
        eng.cum_blue_pushed = 0
        eng.last_push_t = -1
        eng.last_push_blue = False
        eng.arrivals = None
        eng.paranoid = paranoid
        return eng

    def copy(self) -> "JunctionEngine":
        eng = JunctionEngine()
        eng.n = self.n
        eng.r = bytearray(self.r)
        eng.b = bytearray(self.b)
        eng.s = self.s
        eng.t = self.t
        eng.red_empty = list(self.red_empty)
        eng.blue_empty = list(self.blue_empty)
        eng.viol = list(self.viol)
        eng.cum_red_pushed = self.cum_red_pushed
        eng.cum_blue_pushed = self.cum_blue_pushed
        eng.last_push_t = self.last_push_t
        eng.last_push_blue = self.last_push_blue
        eng.arrivals = None if self.arrivals is None else list(self.arrivals)
        eng.paranoid = self.paranoid
        return eng

    def to_state(self) -> NormalizedState:
        return NormalizedState(
            self.n,
            tuple(x == 1 for x in self.r),
            tuple(x == 1 for x in self.b),
            self.s,
        )

    def occupancy_key(self) -> bytes:
        return bytes(self.r) + bytes(self.b)

    @property
    def flowing(self) -> bool:
        return not self.viol

    def _violation_at(self, i: int) -> bool:
        prev = i - 1 if i else self.n - 1
        return bool(self.r[prev] and (self.b[i] or self.b[prev]))

    def turns_until_push(self) -> int | None:
        """Turns before the next push fires (0 = this turn); None if flowing."""
        if not self.viol:
            return None
        pos = bisect_right(self.viol, self.s) - 1
        if pos >= 0:
            return self.s - self.viol[pos]
        return self.s + self.n - self.viol[-1]

    def _push_turn(self, on_push) -> None:
        n = self.n
        s = self.s
        r = self.r
        b = self.b
        prev = s - 1 if s else n - 1
        red = b[s]  # membership in viol guarantees r[prev]
        if red:
            kind = PushKind.RED_PUSHED
            lane, empties = r, self.red_empty
        else:
            kind = PushKind.BLUE_PUSHED
            lane, empties = b, self.blue_empty
        vacated = prev
        pos = bisect_left(empties, vacated)
        filled = empties[pos - 1] if pos > 0 else empties[-1]
        run_len = vacated - filled if vacated > filled else vacated - filled + n
        if not red and self.arrivals is not None and not (
                self.last_push_blue and self.last_push_t == self.t - 1):
            # the pointer arrived at a violation block (this blue push does
            # not continue a cascade): both runs end at `vacated`, and the
            # min of their lengths is the block depth
            s_b = run_len
            red_empty = self.red_empty
            if red_empty:
                rpos = bisect_left(red_empty, vacated)
                re = red_empty[rpos - 1] if rpos > 0 else red_empty[-1]
                s_r = vacated - re if vacated > re else vacated - re + n
            else:
                s_r = n
            self.arrivals.append((self.t, s_r if s_r < s_b else s_b))
        if on_push is not None:
            on_push(self, kind, s, vacated, filled, run_len)
        # The vacated slot takes the filled slot's place in the sorted list:
        # there is no empty slot between them, so this is an in-place swap
        # except when the search wrapped past index 0.
        if pos > 0:
            empties[pos - 1] = vacated
        else:
            del empties[-1]
            empties.insert(0, vacated)
        lane[vacated] = 0
        lane[filled] = 1
        # Changing r at j can flip violation membership only at j+1; changing
        # b at j, at j and j+1.
        if red:
            self.cum_red_pushed += run_len
            touched = (s, filled + 1 if filled + 1 < n else 0)
        else:
            self.cum_blue_pushed += run_len
            touched = (vacated, s, filled, filled + 1 if filled + 1 < n else 0)
        viol = self.viol
        for i in touched:
            im1 = i - 1 if i else n - 1
            now = r[im1] and (b[i] or b[im1])
            pos = bisect_left(viol, i)
            present = pos < len(viol) and viol[pos] == i
            if now:
                if not present:
                    viol.insert(pos, i)
            elif present:
                del viol[pos]
        self.last_push_t = self.t
        self.last_push_blue = not red
        self.t += 1
        self.s = prev
        if self.paranoid:
            self._verify()

    def advance(self, turns: int, on_push=None) -> None:
        """Run exactly `turns` turns, firing on_push at every push."""
        n = self.n
        viol = self.viol
        r = self.r
        b = self.b
        while turns > 0:
            s = self.s
            prev = s - 1 if s else n - 1
            if r[prev] and (b[s] or b[prev]):
                self._push_turn(on_push)
                turns -= 1
                if on_push is None:
                    # push cascades have uniform per-turn effects; replay
                    # them in bulk while that holds
                    while turns > 1:
                        k = self._cascade_batch(turns)
                        if not k:
                            break
                        turns -= k
                continue
            if not viol:
                self.t += turns
                self.s = (s - turns) % n
                return
            pos = bisect_right(viol, s) - 1
            d = s - viol[pos] if pos >= 0 else s + n - viol[-1]
            if d >= turns:
                self.t += turns
                self.s = (s - turns) % n
                return
            self.t += d
            self.s = (s - d) % n
            turns -= d

    def _cascade_batch(self, max_turns: int) -> int:
        """Execute up to max_turns cascade-continuation pushes at once.

        Applicable when the pending turn pushes the same color as the push
        one turn ago and the next K pushes are uniform: the pushed run slides
        left one place per turn, vacating a contiguous range and filling the
        contiguous empty gap below it, while the junction crosses a solid
        run of the opposing color (red case) or freshly vacated places (blue
        case). Returns the number of turns consumed, 0 when not applicable
        (wrapping ranges and irregular cases fall back to per-push turns).
        """
        s = self.s
        if s < 2:
            return 0
        n = self.n
        r = self.r
        b = self.b
        prev = s - 1
        if not (self.last_push_t == self.t - 1 and r[prev]):
            return 0
        red = bool(b[s])
        if red == self.last_push_blue:  # continuation must keep the color
            return 0
        if not red and not b[prev]:
            return 0
        lane, empties = (r, self.red_empty) if red else (b, self.blue_empty)
        pos = bisect_left(empties, prev)
        if pos == 0:
            return 0  # fill search wraps; take the slow path
        fpos = pos - 1
        f0 = empties[fpos]
        run_len = prev - f0

        # opposing-color constraint along the junction's path
        if red:
            opp = self.blue_empty
            if opp:
                opos = bisect_left(opp, s)
                oe = opp[opos - 1] if opos > 0 else opp[-1] - n
                opp_run = s - oe  # blue run ending at s
            else:
                opp_run = n
        else:
            # blue continuation: bounded by the red run over the blue one
            ropp = self.red_empty
            if ropp:
                rpos = bisect_left(ropp, prev)
                re = ropp[rpos - 1] if rpos > 0 else ropp[-1] - n
                opp_run = prev - re  # red run ending at s-1
            else:
                opp_run = n
        k = min(max_turns, run_len, opp_run, s - 1, f0, fpos + 1)
        if k >= 2 and empties[fpos - k + 1] != f0 - k + 1:
            # the empty gap below f0 is shorter than k; binary search it
            # (consecutive-prefix property: sorted distinct values below f0)
            lo_g, hi_g = 1, k - 1
            while lo_g < hi_g:
                mid = (lo_g + hi_g + 1) // 2
                if empties[fpos - mid + 1] == f0 - mid + 1:
                    lo_g = mid
                else:
                    hi_g = mid - 1
            k = lo_g
        if k < 2:
            return 0

        # occupancy: vacate [s-k, s-1], fill [f0-k+1, f0]
        lane[s - k:s] = b"\x00" * k
        lane[f0 - k + 1:f0 + 1] = b"\x01" * k

        # sorted empties: drop the filled gap, add the vacated range
        assert empties[fpos - k + 1] == f0 - k + 1
        del empties[fpos - k + 1:fpos + 1]
        ipos = bisect_left(empties, s - k)
        empties[ipos:ipos] = range(s - k, s)

        if red:
            self.cum_red_pushed += k * run_len
        else:
            self.cum_blue_pushed += k * run_len

        # violations eaten by the junction: every place in [s-k+1, s] pushed
        viol = self.viol
        vlo = bisect_left(viol, s - k + 1)
        assert vlo + k <= len(viol) and viol[vlo + k - 1] == s
        del viol[vlo:vlo + k]
        # fill side: places just right of newly occupied cells may turn into
        # violations; bulk-insert when the span is uniform
        if red:
            # V(i) = b[i] or b[i-1] over i in [f0-k+2, f0+1] (r[i-1] now set)
            span = bytes(b[f0 - k + 1:f0 + 2])
            cnt = span.count(1)
            if cnt == len(span):
                self._bulk_viol_insert(f0 - k + 2, f0 + 1)
            elif cnt:
                for i in range(f0 - k + 2, f0 + 2):
                    if b[i] or b[i - 1]:
                        self._viol_insert(i)
        else:
            # V(i) = r[i-1] over i in [f0-k+2, f0] (b[i] now set)
            span = bytes(r[f0 - k + 1:f0])
            cnt = span.count(1)
            if cnt == len(span) and cnt:
                self._bulk_viol_insert(f0 - k + 2, f0)
            elif cnt:
                for i in range(f0 - k + 2, f0 + 1):
                    if r[i - 1]:
                        self._viol_insert(i)
        # boundary cells around the batch get an individual recheck
        if red:
            touched = (s - k,)
        else:
            touched = (s - k, f0 - k + 1, f0 + 1 if f0 + 1 < n else 0)
        for i in touched:
            im1 = i - 1 if i else n - 1
            now = r[im1] and (b[i] or b[im1])
            p = bisect_left(viol, i)
            present = p < len(viol) and viol[p] == i
            if now:
                if not present:
                    viol.insert(p, i)
            elif present:
                del viol[p]

        self.t += k
        self.s = s - k
        self.last_push_t = self.t - 1
        if self.paranoid:
            self._verify()
        return k

    def _viol_insert(self, i: int) -> None:
        viol = self.viol
        p = bisect_left(viol, i)
        if p >= len(viol) or viol[p] != i:
            viol.insert(p, i)

    def _bulk_viol_insert(self, lo: int, hi: int) -> None:
        """Insert the integer range [lo, hi] (none of it present)."""
        viol = self.viol
        p = bisect_left(viol, lo)
        viol[p:p] = range(lo, hi + 1)

    def _verify(self) -> None:
        n = self.n
        assert self.red_empty == [i for i in range(n) if not self.r[i]]
        assert self.blue_empty == [i for i in range(n) if not self.b[i]]
        assert self.viol == [i for i in range(n) if self._violation_at(i)]
        assert not (self.r[self.s] and self.b[self.s])
