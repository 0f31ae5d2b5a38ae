"""Queries over the built index.

Every operation reduces to the same trick. Contacts are cycles of length
arity through Psi, one position per section, and each section keeps its
groups in increasing symbol order. So "started no later than t" is a
single position comparison against the right edge of a start-time group,
and "still open after t" is one against an end-time group. The three
time semantics (an instant, an interval the contact must cover, an
interval it merely has to touch) only move those two cut points.

Positions are 1-based throughout, matching the bitmaps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Contact


@dataclass(frozen=True)
class TimeSemantics:
    """A point or interval of query time plus how intervals are meant.

    kind is one of instant, strong (contact alive the whole interval) or
    weak (alive at some moment of it). Intervals are half-open [t, t_end).
    """

    kind: str
    t: int
    t_end: int | None = None

    def __post_init__(self):
        if self.kind not in ("instant", "strong", "weak"):
            raise ValueError(f"unknown time semantics {self.kind!r}")
        if self.kind == "instant":
            if self.t_end is not None:
                raise ValueError("an instant has no end time")
        elif self.t_end is None:
            raise ValueError(f"{self.kind} semantics needs an interval")

    @classmethod
    def instant(cls, t: int) -> "TimeSemantics":
        return cls("instant", t)

    @classmethod
    def strong(cls, t: int, t_end: int) -> "TimeSemantics":
        return cls("strong", t, t_end)

    @classmethod
    def weak(cls, t: int, t_end: int) -> "TimeSemantics":
        return cls("weak", t, t_end)

    def cuts(self) -> tuple[int, int]:
        """The two comparison points (start side, end side)."""
        if self.kind == "instant":
            return self.t, self.t
        if self.kind == "strong":
            return self.t, self.t_end - 1
        return self.t_end - 1, self.t


def _check_sem(idx, sem: TimeSemantics) -> tuple[int, int]:
    if sem.kind == "instant":
        if not 1 <= sem.t <= idx.tau:
            raise ValueError(f"instant {sem.t} outside [1, {idx.tau}]")
    else:
        if not 1 <= sem.t < (sem.t_end or 0) <= idx.tau + 1:
            raise ValueError(
                f"interval [{sem.t}, {sem.t_end}) not within [1, {idx.tau + 1})")
    return sem.cuts()


def symbol_range(idx, c: int) -> tuple[int, int]:
    """Positions [l, r] of symbol c's group."""
    if not 1 <= c <= idx.sigma:
        raise ValueError(f"symbol id {c} outside [1, {idx.sigma}]")
    l = idx.D.select1(c)
    r = idx.D.select1(c + 1) - 1 if c < idx.sigma else idx.arity * idx.n
    return l, r


def _right_bound(idx, c: int) -> int:
    if c == 0:
        return 0
    if c >= idx.sigma:
        return idx.arity * idx.n
    return idx.D.select1(c + 1) - 1


def _rt_start(idx, value: int) -> int:
    """Right edge of the last start-time group with symbol value <= value."""
    return _right_bound(idx, idx.am.getmap_floor(value, 3))


def _rt_end(idx, value: int) -> int:
    """Same for end times."""
    return _right_bound(idx, idx.am.getmap_floor(value, 4))


def time_bounds(idx, t: int) -> tuple[int, int | None]:
    """(start cut, end cut) for instant t; the end cut is None without
    an end-time section."""
    if idx.arity == 4:
        return _rt_start(idx, t), _rt_end(idx, t)
    return _rt_start(idx, t), None


def pattern_range(idx, ids) -> tuple[int, int]:
    """Positions [l, r] in the first id's section whose rotations start
    with the given id sequence; l > r means no match.

    Group order makes the composed symbol ids monotone along a group, so
    each extra id refines the range with two binary searches over the
    walk depth reached so far.
    """
    ids = list(ids)
    if not ids:
        raise ValueError("empty pattern")
    l, r = symbol_range(idx, ids[0])
    depth = 0
    for c in ids[1:]:
        if l > r:
            return l, r
        depth += 1

        def key(i, _d=depth):
            v = i
            for _ in range(_d):
                v = idx.psi.access(v)
            return idx.D.rank1(v)

        lo, hi = l, r + 1
        while lo < hi:
            mid = (lo + hi) // 2
            if key(mid) < c:
                lo = mid + 1
            else:
                hi = mid
        first = lo
        hi = r + 1
        while lo < hi:
            mid = (lo + hi) // 2
            if key(mid) <= c:
                lo = mid + 1
            else:
                hi = mid
        l, r = first, lo - 1
    return l, r


def _section3_window(idx, p1: int, p2: int):
    """(lo, hi, z_floor) for the cut points: live contacts have their
    start-section position inside [lo, hi], and when z_floor is set their
    end-section position must lie beyond it.

    Contacts without a stored end behave as if open until the lifetime
    (incremental) or for exactly one step (point), which folds the end
    test into the window itself.
    """
    base = 2 * idx.n
    if idx.semantics == "interval":
        return base + 1, _rt_start(idx, p1), _rt_end(idx, p2)
    if idx.semantics == "incremental":
        if p2 >= idx.tau:
            return base + 1, base, None
        return base + 1, _rt_start(idx, p1), None
    lo = max(_rt_start(idx, p2 - 1) + 1, base + 1)
    return lo, _rt_start(idx, p1), None


def _source_of(idx, pos1: int) -> int:
    return idx.am.getunmap(idx.D.rank1(pos1), 1)


def _target_of(idx, pos2: int) -> int:
    return idx.am.getunmap(idx.D.rank1(pos2), 2)


def direct_neighbors(idx, u: int, sem: TimeSemantics) -> list[int]:
    """Distinct targets of contacts from u alive under sem, ascending."""
    if idx.n == 0:
        return []
    p1, p2 = _check_sem(idx, sem)
    if not 1 <= u <= idx.nu:
        return []
    c = idx.am.getmap(u, 1)
    if c == 0:
        return []
    l, r = symbol_range(idx, c)
    lo, hi, zfloor = _section3_window(idx, p1, p2)
    psi = idx.psi
    out = set()
    for pv in psi.range(l, r):
        y = psi.access(pv)
        if not lo <= y <= hi:
            continue
        if zfloor is not None and psi.access(y) <= zfloor:
            continue
        out.add(_target_of(idx, pv))
    return sorted(out)


def reverse_neighbors(idx, v: int, sem: TimeSemantics) -> list[int]:
    """Distinct sources of contacts into v alive under sem, ascending."""
    if idx.n == 0:
        return []
    p1, p2 = _check_sem(idx, sem)
    if not 1 <= v <= idx.nu:
        return []
    c = idx.am.getmap(v, 2)
    if c == 0:
        return []
    l, r = symbol_range(idx, c)
    lo, hi, zfloor = _section3_window(idx, p1, p2)
    psi = idx.psi
    out = set()
    for y in psi.range(l, r):
        if not lo <= y <= hi:
            continue
        if zfloor is None:
            pos1 = psi.access(y)
        else:
            z = psi.access(y)
            if z <= zfloor:
                continue
            pos1 = psi.access(z)
        out.add(_source_of(idx, pos1))
    return sorted(out)


def active_edge(idx, u: int, v: int, sem: TimeSemantics) -> bool:
    """Whether some contact u -> v is alive under sem."""
    if idx.n == 0:
        return False
    p1, p2 = _check_sem(idx, sem)
    if not (1 <= u <= idx.nu and 1 <= v <= idx.nu):
        return False
    c1 = idx.am.getmap(u, 1)
    c2 = idx.am.getmap(v, 2)
    if c1 == 0 or c2 == 0:
        return False
    l, r = pattern_range(idx, (c1, c2))
    lo, hi, zfloor = _section3_window(idx, p1, p2)
    psi = idx.psi
    for i in range(l, r + 1):
        y = psi.access(psi.access(i))
        if not lo <= y <= hi:
            continue
        if zfloor is not None and psi.access(y) <= zfloor:
            continue
        return True
    return False


def snapshot(idx, sem: TimeSemantics, contacts: bool = False):
    """Edges alive under sem as sorted distinct (u, v) pairs.

    Interval snapshots cover the strong reading only; asking to merely
    touch the interval is rejected. With contacts=True the underlying
    contact tuples come back instead of collapsed edges.
    """
    if idx.n == 0:
        return []
    if sem.kind == "weak":
        raise ValueError("snapshot supports instants and covered intervals only")
    p1, p2 = _check_sem(idx, sem)
    lo, hi, zfloor = _section3_window(idx, p1, p2)
    if lo > hi:
        return []
    psi = idx.psi
    out = set()
    for off, nxt in enumerate(psi.range(lo, hi)):
        if zfloor is None:
            pos1 = nxt
        else:
            if nxt <= zfloor:
                continue
            pos1 = psi.access(nxt)
        u = _source_of(idx, pos1)
        v = _target_of(idx, psi.access(pos1))
        if contacts:
            ts = idx.am.getunmap(idx.D.rank1(lo + off), 3)
            if zfloor is None:
                out.add((u, v, ts))
            else:
                out.add((u, v, ts, idx.am.getunmap(idx.D.rank1(nxt), 4)))
        else:
            out.add((u, v))
    return sorted(out)


def _check_event_time(idx, t: int, t_end: int | None) -> int:
    if t_end is None:
        if not 1 <= t <= idx.tau:
            raise ValueError(f"instant {t} outside [1, {idx.tau}]")
        return t + 1
    if not 1 <= t < t_end <= idx.tau + 1:
        raise ValueError(f"interval [{t}, {t_end}) not within [1, {idx.tau + 1})")
    return t_end


def _edges_in(idx, lo: int, hi: int, end_section: bool):
    """Distinct edges whose start (or end) position falls in [lo, hi]."""
    psi = idx.psi
    out = set()
    for nxt in psi.range(lo, hi):
        if end_section:
            pos1 = nxt
        elif idx.arity == 4:
            pos1 = psi.access(nxt)
        else:
            pos1 = nxt
        out.add((_source_of(idx, pos1), _target_of(idx, psi.access(pos1))))
    return sorted(out)


def activated_edges(idx, t: int, t_end: int | None = None):
    """Distinct edges with a contact starting in [t, t_end), sorted.
    A single t means starting exactly at t."""
    if idx.n == 0:
        return []
    t_end = _check_event_time(idx, t, t_end)
    lo = max(_rt_start(idx, t - 1) + 1, 2 * idx.n + 1)
    hi = _rt_start(idx, t_end - 1)
    if lo > hi:
        return []
    return _edges_in(idx, lo, hi, end_section=False)


def deactivated_edges(idx, t: int, t_end: int | None = None):
    """Distinct edges with a contact ending in [t, t_end), sorted."""
    if idx.n == 0:
        return []
    if idx.semantics == "incremental":
        raise ValueError("contacts never end under incremental semantics")
    t_end = _check_event_time(idx, t, t_end)
    if idx.semantics == "point":
        # a one-step contact ending in [t, t_end) started one step earlier
        lo_ts, hi_ts = max(t - 1, 1), t_end - 1
        if lo_ts >= hi_ts:
            return []
        return activated_edges(idx, lo_ts, hi_ts)
    lo = max(_rt_end(idx, t - 1) + 1, 3 * idx.n + 1)
    hi = _rt_end(idx, t_end - 1)
    if lo > hi:
        return []
    return _edges_in(idx, lo, hi, end_section=True)


def reconstruct_contact(idx, i: int) -> Contact:
    """The contact whose rotation cycle passes through position i."""
    total = idx.arity * idx.n
    if not 1 <= i <= total:
        raise ValueError(f"position {i} outside [1, {total}]")
    pos = i
    for _ in range(idx.arity):
        if pos <= idx.n:
            break
        pos = idx.psi.access(pos)
    terms = []
    for section in range(1, idx.arity + 1):
        terms.append(idx.am.getunmap(idx.D.rank1(pos), section))
        if section < idx.arity:
            pos = idx.psi.access(pos)
    return Contact(*terms)
