"""Metric constraints over time points: bound windows, simple temporal
problems (STP), their disjunctive extension (TCSP), and the two
translations that connect interval relations to endpoint constraints.

All quantities are exact rationals in canonical units of minutes.
Strict inequalities are carried as explicit flags and propagated with
lexicographic (value, strictness) arithmetic in the shortest-path
computation; there are no epsilon approximations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .allen import BaseRelation, Relation


class ScaleBoundExceeded(ValueError):
    """An instance is larger than the supported desk-scale search bound."""


Rational = Fraction


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class BoundWindow:
    """An interval of admissible values for a point difference, with
    per-bound strictness; None means unbounded on that side."""

    lo: Optional[Fraction]
    hi: Optional[Fraction]
    lo_strict: bool = False
    hi_strict: bool = False

    def __post_init__(self):
        lo = None if self.lo is None else _frac(self.lo)
        hi = None if self.hi is None else _frac(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        # infinite bounds are open by convention
        if lo is None:
            object.__setattr__(self, "lo_strict", True)
        if hi is None:
            object.__setattr__(self, "hi_strict", True)
        if lo is not None and hi is not None:
            if lo > hi:
                raise ValueError(f"empty window: lo {lo} > hi {hi}")
            if lo == hi and (self.lo_strict or self.hi_strict):
                raise ValueError("a zero-width window must be closed on both sides")

    @classmethod
    def closed(cls, lo, hi) -> "BoundWindow":
        return cls(_frac(lo), _frac(hi))

    @classmethod
    def exact(cls, v) -> "BoundWindow":
        v = _frac(v)
        return cls(v, v)

    @classmethod
    def above(cls, lo, strict: bool = True) -> "BoundWindow":
        return cls(_frac(lo), None, lo_strict=strict)

    @classmethod
    def at_most(cls, hi, lo=0, lo_strict: bool = True, hi_strict: bool = False) -> "BoundWindow":
        return cls(_frac(lo), _frac(hi), lo_strict=lo_strict, hi_strict=hi_strict)

    @property
    def unbounded(self) -> bool:
        return self.lo is None and self.hi is None

    @property
    def is_point(self) -> bool:
        return self.lo is not None and self.lo == self.hi

    def contains(self, v) -> bool:
        v = _frac(v)
        if self.lo is not None and (v < self.lo or (v == self.lo and self.lo_strict)):
            return False
        if self.hi is not None and (v > self.hi or (v == self.hi and self.hi_strict)):
            return False
        return True

    def intersect(self, other: "BoundWindow") -> Optional["BoundWindow"]:
        """The common window, or None when the overlap is empty."""
        lo, los = self.lo, self.lo_strict
        if other.lo is not None and (lo is None or other.lo > lo
                                     or (other.lo == lo and other.lo_strict)):
            lo, los = other.lo, other.lo_strict
        hi, his = self.hi, self.hi_strict
        if other.hi is not None and (hi is None or other.hi < hi
                                     or (other.hi == hi and other.hi_strict)):
            hi, his = other.hi, other.hi_strict
        if lo is not None and hi is not None:
            if lo > hi or (lo == hi and (los or his)):
                return None
        return BoundWindow(lo, hi, los, his)

    def overlaps(self, other: "BoundWindow") -> bool:
        return self.intersect(other) is not None

    def __str__(self) -> str:
        left = "(" if self.lo_strict else "["
        right = ")" if self.hi_strict else "]"
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "inf" if self.hi is None else str(self.hi)
        return f"{left}{lo}, {hi}{right}"


FOREVER = BoundWindow(None, None)
POSITIVE = BoundWindow.above(0)


@dataclass(frozen=True)
class TimePoint:
    """A real-valued time variable: an interval endpoint or a free point."""

    id: str
    interval: Optional[str] = None
    role: str = "anon"  # "start" | "end" | "anon"

    def __post_init__(self):
        if self.role not in ("start", "end", "anon"):
            raise ValueError(f"bad role {self.role!r}")
        if (self.role == "anon") != (self.interval is None):
            raise ValueError("endpoint roles require an interval, anon forbids one")


def start_of(interval: str) -> str:
    return f"{interval}.start"


def end_of(interval: str) -> str:
    return f"{interval}.end"


# ---------------------------------------------------------------------------
# bounds: (value, strict) pairs for t_to - t_from <= value; None = +infinity

Bound = tuple[Optional[Fraction], bool]
_INF: Bound = (None, True)
_ZERO: Bound = (Fraction(0), False)


def _badd(a: Bound, b: Bound) -> Bound:
    if a[0] is None or b[0] is None:
        return _INF
    return (a[0] + b[0], a[1] or b[1])


def _btighter(a: Bound, b: Bound) -> Bound:
    """The stronger of two upper bounds; at equal values strict wins."""
    if a[0] is None:
        return b
    if b[0] is None:
        return a
    if a[0] != b[0]:
        return a if a[0] < b[0] else b
    return a if a[1] else b


def _window_to_bounds(w: BoundWindow) -> tuple[Bound, Bound]:
    """(forward, backward) upper bounds for a window on t_to - t_from."""
    fwd: Bound = _INF if w.hi is None else (w.hi, w.hi_strict)
    bwd: Bound = _INF if w.lo is None else (-w.lo, w.lo_strict)
    return fwd, bwd


class STP:
    """A simple temporal problem: one window per ordered point pair,
    represented internally as a matrix of upper bounds on differences.

    Instances are immutable.  `stp_close` returns the minimal network,
    in which every window is the tightest implied one, or a network
    flagged inconsistent when the distance graph has a negative cycle.
    """

    __slots__ = ("points", "_index", "_u", "inconsistent", "minimal")

    def __init__(self, points: Sequence[str], matrix, inconsistent: bool = False,
                 minimal: bool = False):
        object.__setattr__(self, "points", tuple(points))
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.points)})
        object.__setattr__(self, "_u", tuple(tuple(row) for row in matrix))
        object.__setattr__(self, "inconsistent", inconsistent)
        object.__setattr__(self, "minimal", minimal)
        if len(self._index) != len(self.points):
            raise ValueError("duplicate point ids")

    def __setattr__(self, name, value):
        raise AttributeError("STP is immutable")

    @classmethod
    def build(cls, points: Sequence[str],
              constraints: Iterable[tuple[str, str, BoundWindow]] = ()) -> "STP":
        """Construct from (from, to, window) triples; repeated windows on
        a pair conjoin by intersection."""
        points = tuple(points)
        index = {p: i for i, p in enumerate(points)}
        n = len(points)
        u = [[_INF] * n for _ in range(n)]
        for i in range(n):
            u[i][i] = _ZERO
        for frm, to, w in constraints:
            if frm not in index:
                raise KeyError(f"unknown point {frm!r}")
            if to not in index:
                raise KeyError(f"unknown point {to!r}")
            i, j = index[frm], index[to]
            fwd, bwd = _window_to_bounds(w)
            u[i][j] = _btighter(u[i][j], fwd)
            u[j][i] = _btighter(u[j][i], bwd)
        return cls(points, u)

    def with_constraints(self, constraints: Iterable[tuple[str, str, BoundWindow]],
                         new_points: Sequence[str] = ()) -> "STP":
        points = self.points + tuple(p for p in new_points if p not in self._index)
        n = len(points)
        u = [[_INF] * n for _ in range(n)]
        for i in range(n):
            u[i][i] = _ZERO
        old = len(self.points)
        for i in range(old):
            for j in range(old):
                u[i][j] = self._u[i][j]
        index = {p: i for i, p in enumerate(points)}
        for frm, to, w in constraints:
            i, j = index[frm], index[to]
            fwd, bwd = _window_to_bounds(w)
            u[i][j] = _btighter(u[i][j], fwd)
            u[j][i] = _btighter(u[j][i], bwd)
        return STP(points, u)

    def window(self, frm: str, to: str) -> BoundWindow:
        """The window currently recorded for t_to - t_from."""
        if self.inconsistent:
            raise ValueError("windows are undefined on an inconsistent network")
        i, j = self._index[frm], self._index[to]
        fwd, bwd = self._u[i][j], self._u[j][i]
        hi, hi_strict = (None, True) if fwd[0] is None else (fwd[0], fwd[1])
        lo, lo_strict = (None, True) if bwd[0] is None else (-bwd[0], bwd[1])
        if lo is not None and hi is not None:
            if lo > hi or (lo == hi and (lo_strict or hi_strict)):
                raise ValueError(f"pair {frm!r}/{to!r} admits no value; close the network")
        return BoundWindow(lo, hi, lo_strict, hi_strict)

    def has_point(self, p: str) -> bool:
        return p in self._index

    def restricted(self, points: Sequence[str]) -> "STP":
        """The sub-network on the given points, dropping every bound that
        mentions a discarded point (paths through them are not kept)."""
        keep = [self._index[p] for p in points]
        u = [[self._u[i][j] for j in keep] for i in keep]
        return STP(points, u, inconsistent=self.inconsistent)

    def __eq__(self, other) -> bool:
        return (isinstance(other, STP) and self.points == other.points
                and self._u == other._u and self.inconsistent == other.inconsistent)

    def __hash__(self) -> int:
        return hash((self.points, self._u, self.inconsistent))

    def __repr__(self) -> str:
        flag = " inconsistent" if self.inconsistent else ""
        return f"STP(<{len(self.points)} points>{flag})"


def stp_close(s: STP) -> STP:
    """All-pairs shortest paths over the distance graph.

    Returns the minimal network: every pair carries its tightest implied
    window.  A cycle of negative total weight, or zero weight with a
    strict leg, flags the result inconsistent.
    """
    n = len(s.points)
    u = [list(row) for row in s._u]
    for k in range(n):
        uk = u[k]
        for i in range(n):
            uik = u[i][k]
            if uik[0] is None:
                continue
            ui = u[i]
            for j in range(n):
                ui[j] = _btighter(ui[j], _badd(uik, uk[j]))
    for i in range(n):
        v, strict = u[i][i]
        if v is not None and (v < 0 or (v == 0 and strict)):
            return STP(s.points, u, inconsistent=True)
    return STP(s.points, u, minimal=True)


@dataclass(frozen=True)
class MetricConstraint:
    """A disjunctive metric constraint: the difference must fall in one
    of several windows.  Windows are normalized sorted and disjoint."""

    frm: str
    to: str
    windows: tuple[BoundWindow, ...]

    def __post_init__(self):
        if not self.windows:
            raise ValueError("a constraint needs at least one window")
        object.__setattr__(self, "windows", _normalize_windows(self.windows))


def _normalize_windows(windows: Sequence[BoundWindow]) -> tuple[BoundWindow, ...]:
    def key(w: BoundWindow):
        unbounded = w.lo is None
        return (0 if unbounded else 1, w.lo if not unbounded else 0, not w.lo_strict)

    merged: list[BoundWindow] = []
    for w in sorted(windows, key=key):
        if merged:
            last = merged[-1]
            joinable = False
            if last.hi is None:
                joinable = True
            elif w.lo is None:
                joinable = True
            elif w.lo < last.hi or (w.lo == last.hi and not (w.lo_strict and last.hi_strict)):
                joinable = True
            if joinable:
                if last.hi is None or (w.hi is not None and w.hi <= last.hi):
                    hi, his = last.hi, last.hi_strict
                else:
                    hi, his = w.hi, w.hi_strict
                merged[-1] = BoundWindow(last.lo, hi, last.lo_strict, his)
                continue
        merged.append(w)
    return tuple(merged)


@dataclass(frozen=True)
class TCSP:
    points: tuple[str, ...]
    constraints: tuple[MetricConstraint, ...]


MAX_TCSP_WINDOWS = 4
MAX_TCSP_DISJUNCTIVE = 12


def tcsp_consistent(t: TCSP) -> tuple[bool, Optional[STP]]:
    """Search window selections for a consistent STP.

    Selections are explored in deterministic order: constraints sorted by
    (from, to) id pair, windows in normalized order; the first surviving
    combination is returned as witness.  Instances beyond the desk-scale
    bounds (4 windows per constraint, 12 disjunctive constraints) are
    rejected.
    """
    for c in t.constraints:
        if len(c.windows) > MAX_TCSP_WINDOWS:
            raise ScaleBoundExceeded(
                f"constraint {c.frm}->{c.to} has {len(c.windows)} windows")
    disjunctive = [c for c in t.constraints if len(c.windows) > 1]
    if len(disjunctive) > MAX_TCSP_DISJUNCTIVE:
        raise ScaleBoundExceeded(f"{len(disjunctive)} disjunctive constraints")

    ordered = sorted(t.constraints, key=lambda c: (c.frm, c.to))
    base = STP.build(t.points)

    def search(k: int, acc: STP) -> Optional[STP]:
        closed = stp_close(acc)
        if closed.inconsistent:
            return None
        if k == len(ordered):
            return closed
        c = ordered[k]
        for w in c.windows:
            found = search(k + 1, acc.with_constraints([(c.frm, c.to, w)]))
            if found is not None:
                return found
        return None

    witness = search(0, base)
    return (witness is not None), witness


# ---------------------------------------------------------------------------
# Allen <-> metric translations

def allen_atom_to_points(atom: BaseRelation, x: str, y: str) -> tuple[tuple[str, str, BoundWindow], ...]:
    """The defining endpoint constraints of an atom, as (from, to, window)
    triples over the canonical start/end point ids of the two intervals."""
    xs, xe, ys, ye = start_of(x), end_of(x), start_of(y), end_of(y)
    eq = BoundWindow.exact(0)
    pos = POSITIVE
    table = {
        BaseRelation.b: [(xe, ys, pos)],
        BaseRelation.bi: [(ye, xs, pos)],
        BaseRelation.m: [(xe, ys, eq)],
        BaseRelation.mi: [(ye, xs, eq)],
        BaseRelation.o: [(xs, ys, pos), (ys, xe, pos), (xe, ye, pos)],
        BaseRelation.oi: [(ys, xs, pos), (xs, ye, pos), (ye, xe, pos)],
        BaseRelation.d: [(ys, xs, pos), (xe, ye, pos)],
        BaseRelation.di: [(xs, ys, pos), (ye, xe, pos)],
        BaseRelation.s: [(xs, ys, eq), (xe, ye, pos)],
        BaseRelation.si: [(xs, ys, eq), (ye, xe, pos)],
        BaseRelation.f: [(xe, ye, eq), (ys, xs, pos)],
        BaseRelation.fi: [(xe, ye, eq), (xs, ys, pos)],
        BaseRelation.e: [(xs, ys, eq), (xe, ye, eq)],
    }
    return tuple(table[atom])


def _endpoint_submatrix(s: STP, pts: Sequence[str]):
    idx = [s._index[p] for p in pts]
    return [[s._u[i][j] for j in idx] for i in idx]


def _consistent_overlay(sub, extra) -> bool:
    """Overlay extra (i, j, Bound-forward, Bound-backward) constraints on a
    small bound matrix and test for a negative cycle."""
    n = len(sub)
    u = [row[:] for row in sub]
    for i, j, fwd, bwd in extra:
        u[i][j] = _btighter(u[i][j], fwd)
        u[j][i] = _btighter(u[j][i], bwd)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                u[i][j] = _btighter(u[i][j], _badd(u[i][k], u[k][j]))
    for i in range(n):
        v, strict = u[i][i]
        if v is not None and (v < 0 or (v == 0 and strict)):
            return False
    return True


def metric_to_allen(s: STP, x: str, y: str) -> Relation:
    """The atoms compatible with a minimal STP's implied windows.

    A minimal simple temporal network is globally consistent, so joint
    satisfiability of an atom's endpoint constraints can be decided on
    the four-point projection alone.
    """
    if not s.minimal or s.inconsistent:
        raise ValueError("metric_to_allen requires a minimal consistent network")
    pts = (start_of(x), end_of(x), start_of(y), end_of(y))
    for p in pts:
        if not s.has_point(p):
            raise KeyError(f"interval endpoint {p!r} not in network")
    sub = _endpoint_submatrix(s, pts)
    local = {p: i for i, p in enumerate(pts)}
    mask = 0
    for atom in BaseRelation:
        extra = []
        for frm, to, w in allen_atom_to_points(atom, x, y):
            fwd, bwd = _window_to_bounds(w)
            extra.append((local[frm], local[to], fwd, bwd))
        if _consistent_overlay(sub, extra):
            mask |= 1 << atom
    return Relation(mask)


def format_constraint(frm: str, to: str, w: BoundWindow) -> str:
    return f"{to} - {frm} in {w}"


def format_stp(s: STP) -> str:
    """One line per informative point pair, pairs in sorted id order."""
    if s.inconsistent:
        return "inconsistent\n"
    names = sorted(s.points)
    lines = []
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            w = s.window(a, b)
            if not w.unbounded:
                lines.append(format_constraint(a, b, w))
    return "\n".join(lines) + "\n" if lines else ""
