"""The procedural-text object model and the rules that compile a recipe
into hybrid constraint networks, one per combination of optional
branches.

Encoding rules, numbered for reference throughout this package:

  R1  preliminaries precede the first step, unordered among themselves
  R2  text order: each step is after-or-met-by its predecessor
  R3  "meanwhile" replaces the text-order default with {d,f}
  R4  quantitative durations become endpoint windows
  R5  "until <state>" makes the action meet the state interval
  R6  mixed duration: R5 plus a duration capped at the stated bound
  R7  "last N of <ref>": a timer finishing the reference; the action
      starts the timer
  R8  sporadic repetition: the container strictly contains the action

Alternation and count markers carry no algebraic constraints; they
survive as markers for workflow loop rendering.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .allen import Relation
from .hybrid import HybridNetwork
from .metric import BoundWindow, end_of, start_of


class PhenomenonTag(enum.Enum):
    QUALITATIVE_DURATION = "qualitative-duration"
    PRECISE_QUANTITATIVE_DURATION = "precise-quantitative-duration"
    IMPRECISE_QUANTITATIVE_DURATION = "imprecise-quantitative-duration"
    TOTAL_ORDER = "total-order"
    PARTIAL_ORDER = "partial-order"
    SIMULTANEITY = "simultaneity"
    INDETERMINATE_REPETITION = "indeterminate-repetition"
    ALTERNATION = "alternation"
    SPORADIC_REPETITION = "sporadic-repetition"
    EXCLUSIVE_DISJUNCTION = "exclusive-disjunction"


Span = tuple[int, int]


@dataclass(frozen=True)
class ActionNode:
    id: str
    verb: str
    objects: tuple[str, ...] = ()
    span: Optional[Span] = None
    kind: str = "step"  # "preliminary" | "step"
    meanwhile: bool = False

    def __post_init__(self):
        if self.kind not in ("preliminary", "step"):
            raise ValueError(f"bad action kind {self.kind!r}")
        if self.meanwhile and self.kind != "step":
            raise ValueError("meanwhile applies to steps only")


@dataclass(frozen=True)
class StateNode:
    id: str
    predicate: str
    span: Optional[Span] = None


@dataclass(frozen=True)
class TimerNode:
    id: str
    window: BoundWindow

    def __post_init__(self):
        if self.window.lo is None or self.window.lo <= 0:
            raise ValueError("timer durations must be positively bounded below")


@dataclass(frozen=True)
class RepetitionMarker:
    target: str
    mode: str  # "sporadic" | "alternation" | "count"
    ref: Optional[str] = None  # container, partner, or until-state id
    count: Optional[int] = None

    def __post_init__(self):
        if self.mode in ("sporadic", "alternation"):
            if self.ref is None or self.count is not None:
                raise ValueError(f"{self.mode} markers take a reference id only")
        elif self.mode == "count":
            if (self.ref is None) == (self.count is None):
                raise ValueError("count markers take a count or an until-state id")
        else:
            raise ValueError(f"bad marker mode {self.mode!r}")


@dataclass(frozen=True)
class AlternativeBranch:
    id: str
    members: tuple[str, ...]
    guard: str = ""


@dataclass(frozen=True)
class Recipe:
    title: str
    preliminaries: tuple[ActionNode, ...] = ()
    steps: tuple[ActionNode, ...] = ()
    states: tuple[StateNode, ...] = ()
    timers: tuple[TimerNode, ...] = ()
    relations: tuple[tuple[str, Relation, str], ...] = ()
    markers: tuple[RepetitionMarker, ...] = ()
    branches: tuple[AlternativeBranch, ...] = ()
    durations: tuple[tuple[str, BoundWindow], ...] = ()
    until_links: tuple[tuple[str, str], ...] = ()
    last_links: tuple[tuple[str, str, str], ...] = ()  # (action, timer, ref)

    def __post_init__(self):
        ids = [n.id for n in self.preliminaries] + [n.id for n in self.steps] \
            + [n.id for n in self.states] + [n.id for n in self.timers]
        seen = set()
        for i in ids:
            if i in seen:
                raise ValueError(f"duplicate id {i!r}")
            seen.add(i)
        for p in self.preliminaries:
            if p.kind != "preliminary":
                raise ValueError(f"{p.id!r} listed as preliminary but kind is {p.kind!r}")
        for s in self.steps:
            if s.kind != "step":
                raise ValueError(f"{s.id!r} listed as step but kind is {s.kind!r}")

        def need(i):
            if i not in seen:
                raise ValueError(f"unknown id {i!r}")

        for a, _, b in self.relations:
            need(a), need(b)
        for m in self.markers:
            need(m.target)
            if m.ref is not None:
                need(m.ref)
        for a, s in self.until_links:
            need(a), need(s)
        for a, t, ref in self.last_links:
            need(a), need(t), need(ref)
        claimed = set()
        branch_ids = set()
        for br in self.branches:
            if br.id in branch_ids:
                raise ValueError(f"duplicate branch id {br.id!r}")
            branch_ids.add(br.id)
            for m in br.members:
                need(m)
                if m in claimed:
                    raise ValueError(f"{m!r} belongs to two branches")
                claimed.add(m)
        for kind in ("preliminary", "step"):
            spans = sorted(n.span for n in self.preliminaries + self.steps
                           if n.kind == kind and n.span is not None)
            for (a, b), (c, d) in zip(spans, spans[1:]):
                if c < b:
                    raise ValueError(f"overlapping {kind} spans {a, b} and {c, d}")

    def find(self, id_: str):
        for group in (self.preliminaries, self.steps, self.states, self.timers):
            for n in group:
                if n.id == id_:
                    return n
        raise KeyError(id_)


# ---------------------------------------------------------------------------
# duration phrases

_NUMBER = r"(?:\d+\.\d+|\d+/\d+|\d+)"
_DURATION_RE = re.compile(
    rf"^\s*(?P<about>about\s+)?(?P<a>{_NUMBER})\s*"
    rf"(?:(?:-|–|—|to)\s*(?P<b>{_NUMBER})\s*)?"
    rf"(?P<unit>minutes?|mins?|hours?|hrs?|h)\s*$",
    re.IGNORECASE,
)

_UNIT_MINUTES = {"min": 1, "mins": 1, "minute": 1, "minutes": 1,
                 "h": 60, "hr": 60, "hrs": 60, "hour": 60, "hours": 60}

ABOUT_FACTOR = Fraction(1, 5)


def _parse_duration(text: str):
    m = _DURATION_RE.match(text)
    if m is None:
        raise ValueError(f"cannot parse duration phrase {text!r}")
    unit = _UNIT_MINUTES[m.group("unit").lower()]
    a = Fraction(m.group("a")) * unit
    b = Fraction(m.group("b")) * unit if m.group("b") else None
    about = m.group("about") is not None
    if about and b is not None:
        raise ValueError(f"'about' does not combine with a range: {text!r}")
    if a <= 0 or (b is not None and b <= a):
        raise ValueError(f"bad duration bounds in {text!r}")
    return a, b, about


def encode_duration(text: str, about_factor: Fraction = ABOUT_FACTOR) -> BoundWindow:
    """Normalize a duration phrase to a window in minutes.

    "N unit" is exact, "N-M unit" closed, "about N unit" widened by the
    given factor on each side.
    """
    a, b, about = _parse_duration(text)
    if about:
        return BoundWindow.closed(a * (1 - about_factor), a * (1 + about_factor))
    return BoundWindow.closed(a, b if b is not None else a)


def duration_cap(text: str) -> Fraction:
    """The stated upper bound of a phrase, unwidened; used by the mixed
    duration rule R6 where the number is a maximum."""
    a, b, _ = _parse_duration(text)
    return b if b is not None else a


# ---------------------------------------------------------------------------
# encoding

_R1 = Relation.parse("{b}")
_R2 = Relation.parse("{bi,mi}")
_R3 = Relation.parse("{d,f}")
_R5 = Relation.parse("{m}")
_R7_TIMER = Relation.parse("{f}")
_R7_ACTION = Relation.parse("{s}")
_R8 = Relation.parse("{di}")

_CONCURRENT = Relation.parse("{o,oi,d,di,s,si,f,fi,e}")


def _chain_steps(r: Recipe, excluded: set[str]) -> list[ActionNode]:
    """Steps participating in the text-order chain: branch members,
    sporadic or alternating actions and last-of steps are positioned by
    their own rules, not by document order."""
    skip = set(excluded)
    for br in r.branches:
        skip |= set(br.members)
    for m in r.markers:
        if m.mode == "sporadic":
            skip.add(m.target)
        elif m.mode == "alternation":
            skip.add(m.target)
            skip.add(m.ref)
    for action, _, _ in r.last_links:
        skip.add(action)
    return [s for s in r.steps if s.id not in skip]


def _scenario_labels(branches: Sequence[AlternativeBranch]):
    ids = sorted(br.id for br in branches)
    combos = []
    for k in range(len(ids) + 1):
        for combo in itertools.combinations(ids, k):
            combos.append(combo)
    combos.sort(key=lambda c: (len(c), c))
    return [("base" if not c else "+".join(c), frozenset(c)) for c in combos]


def encode_recipe(r: Recipe) -> list[tuple[str, HybridNetwork]]:
    """One (label, network) pair per branch combination, the base
    scenario first; rules R1 through R8 applied as documented above."""
    by_branch = {br.id: br for br in r.branches}
    out = []
    for label, chosen in _scenario_labels(r.branches):
        excluded = set()
        for bid, br in by_branch.items():
            if bid not in chosen:
                excluded |= set(br.members)
        out.append((label, _encode_scenario(r, excluded)))
    return out


def _encode_scenario(r: Recipe, excluded: set[str]) -> HybridNetwork:
    used_by = {}
    for action, sid in r.until_links:
        used_by.setdefault(sid, set()).add(action)
    for action, tid, _ in r.last_links:
        used_by.setdefault(tid, set()).add(action)

    def dropped(i: str) -> bool:
        if i in excluded:
            return True
        users = used_by.get(i)
        return users is not None and users <= excluded

    intervals = [p.id for p in r.preliminaries] \
        + [s.id for s in r.steps if s.id not in excluded] \
        + [t.id for t in r.timers if not dropped(t.id)] \
        + [s.id for s in r.states if not dropped(s.id)]
    live = set(intervals)

    allen = []
    chain = _chain_steps(r, excluded)
    if chain and chain[0].meanwhile:
        raise ValueError(f"step {chain[0].id!r} is marked meanwhile but has no antecedent")
    if chain:
        for p in r.preliminaries:
            allen.append((p.id, _R1, chain[0].id))
    explicit_pairs = {frozenset((a, b)) for a, _, b in r.relations
                      if a in live and b in live}
    for prev, nxt in zip(chain, chain[1:]):
        if frozenset((prev.id, nxt.id)) in explicit_pairs:
            continue
        allen.append((nxt.id, _R3 if nxt.meanwhile else _R2, prev.id))
    for action, sid in r.until_links:
        if action in live and sid in live:
            allen.append((action, _R5, sid))
    for action, tid, ref in r.last_links:
        if action in live and tid in live and ref in live:
            allen.append((tid, _R7_TIMER, ref))
            allen.append((action, _R7_ACTION, tid))
    for m in r.markers:
        if m.mode == "sporadic" and m.target in live and m.ref in live:
            allen.append((m.ref, _R8, m.target))
    for a, rel, b in r.relations:
        if a in live and b in live:
            allen.append((a, rel, b))

    merged = {}
    for a, rel, b in allen:
        key = (a, b) if a <= b else (b, a)
        cell = rel if key == (a, b) else rel.converse()
        merged[key] = merged[key] & cell if key in merged else cell
        if merged[key].is_empty:
            raise ValueError(f"contradictory relations between {key[0]!r} and {key[1]!r}")

    metric = []
    for aid, w in r.durations:
        if aid in live:
            metric.append((start_of(aid), end_of(aid), w))
    for t in r.timers:
        if t.id in live:
            metric.append((start_of(t.id), end_of(t.id), t.window))

    return HybridNetwork.build(
        intervals,
        [(a, cell, b) for (a, b), cell in merged.items()],
        metric,
    )


def phenomena_coverage(r: Recipe) -> frozenset[PhenomenonTag]:
    tags = set()
    windows = [w for _, w in r.durations] + [t.window for t in r.timers]
    for w in windows:
        if w.is_point:
            tags.add(PhenomenonTag.PRECISE_QUANTITATIVE_DURATION)
        else:
            tags.add(PhenomenonTag.IMPRECISE_QUANTITATIVE_DURATION)
    if r.until_links:
        tags.add(PhenomenonTag.QUALITATIVE_DURATION)
    all_members = set().union(*(set(br.members) for br in r.branches)) if r.branches else set()
    if len(_chain_steps(r, all_members)) >= 2:
        tags.add(PhenomenonTag.TOTAL_ORDER)
    if len(r.preliminaries) >= 2:
        tags.add(PhenomenonTag.PARTIAL_ORDER)
    if any(s.meanwhile for s in r.steps) or any(
            rel <= _CONCURRENT for _, rel, _ in r.relations):
        tags.add(PhenomenonTag.SIMULTANEITY)
    for m in r.markers:
        if m.mode == "sporadic":
            tags.add(PhenomenonTag.SPORADIC_REPETITION)
        elif m.mode == "alternation":
            tags.add(PhenomenonTag.ALTERNATION)
        elif m.mode == "count" and m.count is None:
            tags.add(PhenomenonTag.INDETERMINATE_REPETITION)
    if r.branches:
        tags.add(PhenomenonTag.EXCLUSIVE_DISJUNCTION)
    return frozenset(tags)
