"""Revision-based adaptation: substitute an ingredient by removing its
actions from the network, grafting a domain-knowledge sub-network onto
anchor nodes, and restoring consistency while keeping as much of the
original recipe as possible.

Constraints carry provenance tags.  Domain knowledge is hard and is
never touched; recipe constraints are soft and may be relaxed (replaced
by the tautology) when they conflict with the knowledge.  `revise`
retains a cardinality-maximal consistent soft subset, breaking ties
toward lexicographically smaller constraint ids.  Edits mapping the
outcome back onto the source text are span-based only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .allen import FULL, Relation
from .annotation import RecipeSyntaxError, _expect, _expect_id, _tokenize
from .hybrid import HybridNetwork, hybrid_atomic_consistent
from .metric import (
    BoundWindow,
    ScaleBoundExceeded,
    end_of,
    start_of,
)
from .recipe import (
    ActionNode,
    Recipe,
    StateNode,
    TimerNode,
    encode_duration,
    encode_recipe,
)

MAX_REVISION_SOFT = 24

_R5 = Relation.parse("{m}")

_NEGATED_POSITIVE = BoundWindow(None, 0, True, True)


def _negated(w: BoundWindow) -> BoundWindow:
    return BoundWindow(None if w.hi is None else -w.hi,
                       None if w.lo is None else -w.lo,
                       w.hi_strict, w.lo_strict)


@dataclass(frozen=True)
class TaggedConstraint:
    """One constraint with provenance.  The id is deterministic: the
    two endpoint ids in lexicographic order plus the provenance layer,
    so identical pipelines always produce identical ids."""

    id: str
    kind: str  # "allen" | "metric"
    frm: str
    to: str
    cell: Optional[Relation] = None
    window: Optional[BoundWindow] = None
    provenance: str = "recipe-soft"

    def __post_init__(self):
        if self.provenance not in ("domain-hard", "recipe-soft"):
            raise ValueError(f"bad provenance {self.provenance!r}")
        if self.kind == "allen":
            if self.cell is None or self.window is not None:
                raise ValueError("allen constraint needs a cell only")
        elif self.kind == "metric":
            if self.window is None or self.cell is not None:
                raise ValueError("metric constraint needs a window only")
        else:
            raise ValueError(f"bad kind {self.kind!r}")

    @staticmethod
    def _layer(provenance: str) -> str:
        return "hard" if provenance == "domain-hard" else "soft"

    @classmethod
    def allen(cls, a: str, cell: Relation, b: str,
              provenance: str) -> "TaggedConstraint":
        if b < a:
            a, b, cell = b, a, cell.converse()
        return cls(f"{a}~{b}:{cls._layer(provenance)}", "allen", a, b,
                   cell=cell, provenance=provenance)

    @classmethod
    def metric(cls, frm: str, to: str, window: BoundWindow,
               provenance: str) -> "TaggedConstraint":
        if to < frm:
            frm, to, window = to, frm, _negated(window)
        return cls(f"{frm}~{to}:{cls._layer(provenance)}", "metric", frm, to,
                   window=window, provenance=provenance)

    def __str__(self) -> str:
        body = (f"{self.frm} {self.cell} {self.to}" if self.kind == "allen"
                else f"{self.to} - {self.frm} in {self.window}")
        return f"[{self.id}] {body}"


@dataclass(frozen=True)
class TaggedNetwork:
    """A hybrid network whose constraints are individually addressable.

    `new_nodes` lists injected action nodes as (id, label) pairs and
    `anchors` the recipe nodes the knowledge attaches to; both exist so
    revision outcomes can be mapped back onto the source text.
    """

    network: HybridNetwork
    constraints: tuple[TaggedConstraint, ...]
    new_nodes: tuple[tuple[str, str], ...] = ()
    anchors: tuple[str, ...] = ()

    def __post_init__(self):
        ids = [c.id for c in self.constraints]
        if len(set(ids)) != len(ids):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise ValueError(f"duplicate constraint id {dup!r}")

    @classmethod
    def build(cls, intervals: Sequence[str],
              constraints: Iterable[TaggedConstraint],
              anon_points: Sequence[str] = (),
              new_nodes: Sequence[tuple[str, str]] = (),
              anchors: Sequence[str] = ()) -> "TaggedNetwork":
        constraints = tuple(sorted(constraints, key=lambda c: c.id))
        network = _network_from(intervals, anon_points, constraints)
        return cls(network, constraints, tuple(new_nodes), tuple(anchors))

    def soft_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.constraints
                     if c.provenance == "recipe-soft")


def _network_from(intervals: Sequence[str], anon_points: Sequence[str],
                  constraints: Iterable[TaggedConstraint]) -> HybridNetwork:
    allen = []
    metric = []
    for c in constraints:
        if c.kind == "allen":
            allen.append((c.frm, c.cell, c.to))
        else:
            metric.append((c.frm, c.to, c.window))
    return HybridNetwork.build(intervals, allen, metric, anon_points)


def tag_soft(h: HybridNetwork) -> list[TaggedConstraint]:
    """Extract every stated constraint of a raw network as recipe-soft.

    Tautological cells and the structural start-before-end links are
    not constraints and are skipped; rebuilding a network from the
    extraction reproduces the original.
    """
    out = []
    for i, a in enumerate(h.intervals):
        for b in h.intervals[i + 1:]:
            cell = h.relation(a, b)
            if cell != FULL:
                out.append(TaggedConstraint.allen(a, cell, b, "recipe-soft"))
    pts = h.stp.points
    for i, x in enumerate(pts):
        for y in pts[i + 1:]:
            frm, to = min(x, y), max(x, y)
            w = h.stp.window(frm, to)
            if w.unbounded:
                continue
            if (frm.endswith(".end") and to.endswith(".start")
                    and frm[:-4] == to[:-6] and w == _NEGATED_POSITIVE):
                continue
            out.append(TaggedConstraint.metric(frm, to, w, "recipe-soft"))
    return out


def remove_entities(h: HybridNetwork, ids: Iterable[str]) -> HybridNetwork:
    """Drop the named intervals, their endpoints and every constraint
    mentioning them."""
    gone = set(ids)
    unknown = gone - set(h.intervals)
    if unknown:
        raise KeyError(f"unknown id {min(unknown)!r}")
    return h.restricted([i for i in h.intervals if i not in gone])


# ---------------------------------------------------------------------------
# domain knowledge

@dataclass(frozen=True)
class DomainKnowledge:
    """A named sub-network to graft onto a recipe: new nodes, hard
    constraints among them and toward anchors, plus the entities the
    substitution removes."""

    name: str
    removals: tuple[str, ...] = ()
    anchors: tuple[str, ...] = ()
    steps: tuple[ActionNode, ...] = ()
    states: tuple[StateNode, ...] = ()
    timers: tuple[TimerNode, ...] = ()
    relations: tuple[tuple[str, Relation, str], ...] = ()
    durations: tuple[tuple[str, BoundWindow], ...] = ()
    until_links: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        new = [n.id for n in self.steps + self.states + self.timers]
        if len(set(new)) != len(new):
            raise ValueError("duplicate node id in knowledge")
        known = set(new) | set(self.anchors)
        for a, _, b in self.relations:
            if a not in known or b not in known:
                missing = a if a not in known else b
                raise ValueError(f"relation mentions unknown id {missing!r}")
            if a not in set(new) and b not in set(new):
                raise ValueError(
                    f"relation {a!r}/{b!r} touches no knowledge node")
        for nid, _ in list(self.durations) + list(self.until_links):
            if nid not in set(new):
                raise ValueError(f"duration/link on unknown node {nid!r}")

    def new_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.steps + self.timers + self.states)


def parse_knowledge(source: str) -> DomainKnowledge:
    """Parse the knowledge file format: a `knowledge "<name>"` header,
    then `anchor`, `remove`, `step`, `timer` and `rel` lines with the
    recipe DSL's syntax.  Knowledge steps are not chained: only the
    stated relations hold."""
    name = None
    removals: list[str] = []
    anchors: list[str] = []
    steps: list[ActionNode] = []
    states: list[StateNode] = []
    timers: list[TimerNode] = []
    relations: list[tuple[str, Relation, str]] = []
    durations: list[tuple[str, BoundWindow]] = []
    until_links: list[tuple[str, str]] = []
    declared: set[str] = set()

    for lineno, line in enumerate(source.split("\n"), start=1):
        tokens = _tokenize(line, lineno)
        if not tokens:
            continue
        kind, head = tokens[0]
        if kind != "word":
            raise RecipeSyntaxError(f"unexpected {tokens[0][1]!r}", lineno)
        if name is None and head != "knowledge":
            raise RecipeSyntaxError("no knowledge header", lineno)

        if head == "knowledge":
            if name is not None:
                raise RecipeSyntaxError("second knowledge header", lineno)
            name = _expect(tokens, 1, "string", "a quoted name", lineno)

        elif head in ("anchor", "remove"):
            target = _expect_id(tokens, 1, "an id", lineno)
            if len(tokens) > 2:
                raise RecipeSyntaxError(f"trailing tokens after {head}", lineno)
            (anchors if head == "anchor" else removals).append(target)

        elif head == "step":
            id_ = _expect_id(tokens, 1, "an id", lineno)
            text = _expect(tokens, 2, "string", "quoted text", lineno)
            if id_ in declared:
                raise RecipeSyntaxError(f"duplicate id {id_!r}", lineno)
            declared.add(id_)
            words = text.split()
            if not words:
                raise RecipeSyntaxError("empty step text", lineno)
            steps.append(ActionNode(id_, words[0], tuple(words[1:])))
            idx = 3
            while idx < len(tokens):
                word = _expect(tokens, idx, "word", "a step clause", lineno)
                if word == "for":
                    idx += 1
                    parts = []
                    while idx < len(tokens) and tokens[idx][0] == "word" \
                            and tokens[idx][1] != "until":
                        parts.append(tokens[idx][1])
                        idx += 1
                    try:
                        durations.append((id_, encode_duration(" ".join(parts))))
                    except ValueError as exc:
                        raise RecipeSyntaxError(str(exc), lineno) from None
                elif word == "until":
                    predicate = _expect(tokens, idx + 1, "string",
                                        "a quoted state after 'until'", lineno)
                    idx += 2
                    states.append(StateNode(f"{id_}.until", predicate))
                    until_links.append((id_, f"{id_}.until"))
                else:
                    raise RecipeSyntaxError(f"unknown step clause {word!r}", lineno)

        elif head == "timer":
            id_ = _expect_id(tokens, 1, "an id", lineno)
            parts = [v for k, v in tokens[2:] if k == "word"]
            if len(parts) != len(tokens) - 2 or not parts:
                raise RecipeSyntaxError("'timer <id> <duration>' expected", lineno)
            if id_ in declared:
                raise RecipeSyntaxError(f"duplicate id {id_!r}", lineno)
            declared.add(id_)
            try:
                timers.append(TimerNode(id_, encode_duration(" ".join(parts))))
            except ValueError as exc:
                raise RecipeSyntaxError(str(exc), lineno) from None

        elif head == "rel":
            a = _expect_id(tokens, 1, "an id", lineno)
            braces = _expect(tokens, 2, "braces", "a relation set", lineno)
            b = _expect_id(tokens, 3, "an id", lineno)
            try:
                rel = Relation.parse(braces)
            except ValueError as exc:
                raise RecipeSyntaxError(str(exc), lineno) from None
            if rel.is_empty:
                raise RecipeSyntaxError("empty relation set", lineno)
            relations.append((a, rel, b))

        else:
            raise RecipeSyntaxError(f"unknown directive {head!r}", lineno)

    if name is None:
        raise RecipeSyntaxError("no knowledge header")
    return DomainKnowledge(
        name=name,
        removals=tuple(removals),
        anchors=tuple(anchors),
        steps=tuple(steps),
        states=tuple(states),
        timers=tuple(timers),
        relations=tuple(relations),
        durations=tuple(durations),
        until_links=tuple(until_links),
    )


def inject(h: HybridNetwork, k: DomainKnowledge) -> TaggedNetwork:
    """Union the knowledge sub-network into the recipe network.  The
    result tags the knowledge constraints domain-hard and everything
    pre-existing recipe-soft; consistency is revise's job, not ours."""
    existing = set(h.intervals)
    for a in k.anchors:
        if a not in existing:
            raise KeyError(f"anchor {a!r} not in network")
    new_ids = k.new_ids()
    clash = existing & set(new_ids)
    if clash:
        raise ValueError(f"knowledge node {min(clash)!r} already in network")

    constraints = tag_soft(h)
    for a, rel, b in k.relations:
        constraints.append(TaggedConstraint.allen(a, rel, b, "domain-hard"))
    for action, state in k.until_links:
        constraints.append(TaggedConstraint.allen(action, _R5, state,
                                                  "domain-hard"))
    for nid, w in k.durations:
        constraints.append(TaggedConstraint.metric(start_of(nid), end_of(nid),
                                                   w, "domain-hard"))
    for t in k.timers:
        constraints.append(TaggedConstraint.metric(start_of(t.id), end_of(t.id),
                                                   t.window, "domain-hard"))
    labels = tuple((s.id, " ".join((s.verb,) + s.objects)) for s in k.steps)
    return TaggedNetwork.build(tuple(h.intervals) + new_ids, constraints,
                               h.anon_points, labels, k.anchors)


# ---------------------------------------------------------------------------
# revision

@dataclass(frozen=True)
class RevisionResult:
    revised: HybridNetwork
    retained: tuple[str, ...]
    relaxed: tuple[str, ...]
    witness: HybridNetwork
    tagged: TaggedNetwork


def revise(t: TaggedNetwork) -> RevisionResult:
    """Retain a maximum-cardinality subset of the soft constraints that
    is consistent together with all hard ones; relaxed constraints are
    simply absent from the revised network (the tautology).

    Ties break toward keeping lexicographically smaller ids, realized
    by an include-first depth-first search in ascending id order with
    cardinality bounding.
    """
    intervals = t.network.intervals
    anon = t.network.anon_points
    hard = [c for c in t.constraints if c.provenance == "domain-hard"]
    soft = [c for c in t.constraints if c.provenance == "recipe-soft"]

    def result_for(chosen, witness):
        retained = tuple(c.id for c in chosen)
        relaxed = tuple(sorted(set(c.id for c in soft) - set(retained)))
        return RevisionResult(_network_from(intervals, anon, hard + chosen),
                              retained, relaxed, witness, t)

    ok, witness = hybrid_atomic_consistent(
        _network_from(intervals, anon, hard + soft))
    if ok:
        return result_for(soft, witness)

    if len(soft) > MAX_REVISION_SOFT:
        raise ScaleBoundExceeded(
            f"{len(soft)} soft constraints exceed the revision bound "
            f"of {MAX_REVISION_SOFT}")
    ok, base_witness = hybrid_atomic_consistent(
        _network_from(intervals, anon, hard))
    if not ok:
        raise ValueError("domain knowledge is self-contradictory")

    best: Optional[list[TaggedConstraint]] = None
    best_witness = base_witness

    def dfs(i, chosen, witness):
        nonlocal best, best_witness
        ceiling = len(chosen) + len(soft) - i
        if best is not None and ceiling <= len(best):
            return
        if i == len(soft):
            best = list(chosen)
            best_witness = witness
            return
        candidate = chosen + [soft[i]]
        ok, w = hybrid_atomic_consistent(
            _network_from(intervals, anon, hard + candidate))
        if ok:
            dfs(i + 1, candidate, w)
        dfs(i + 1, chosen, witness)

    dfs(0, [], base_witness)
    return result_for(best, best_witness)


def format_revision(r: RevisionResult) -> str:
    lines = [f"retained {len(r.retained)} of {len(r.retained) + len(r.relaxed)}"
             " soft constraints"]
    lines += [f"  kept    {cid}" for cid in r.retained]
    lines += [f"  relaxed {cid}" for cid in r.relaxed]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# text edits

@dataclass(frozen=True)
class Edit:
    span: tuple[int, int]
    op: str  # "delete" | "insert-after" | "flag-review"
    payload: str = ""


_OP_ORDER = {"delete": 0, "insert-after": 1, "flag-review": 2}


def _span_table(r: Recipe) -> dict[str, tuple[int, int]]:
    table = {}
    for node in r.preliminaries + r.steps + r.states:
        if node.span is not None:
            table[node.id] = node.span
    return table


def _interval_of_point(p: str) -> str:
    for suffix in (".start", ".end"):
        if p.endswith(suffix):
            return p[:-len(suffix)]
    return p


def adapt_text_edits(result: RevisionResult, source: Recipe) -> tuple[Edit, ...]:
    """Map a revision back onto the recipe text as span-based edits:
    deletions for removed nodes, insert-after markers carrying the
    injected node labels at the first anchor, and review flags on the
    spans of relaxed constraints.  No text is generated."""
    spans = _span_table(source)
    present = set(result.revised.intervals)
    edits = []

    recipe_ids = [n.id for n in
                  source.preliminaries + source.steps + source.states]
    for nid in recipe_ids:
        if nid not in present and nid in spans:
            edits.append(Edit(spans[nid], "delete"))

    anchor_span = next((spans[a] for a in result.tagged.anchors if a in spans),
                       None)
    if anchor_span is not None:
        for nid, label in result.tagged.new_nodes:
            if nid in present:
                edits.append(Edit(anchor_span, "insert-after", label))

    by_id = {c.id: c for c in result.tagged.constraints}
    for cid in result.relaxed:
        c = by_id[cid]
        ends = (c.frm, c.to) if c.kind == "allen" else (
            _interval_of_point(c.frm), _interval_of_point(c.to))
        flagged = sorted(spans[e] for e in ends if e in spans)
        if flagged:
            edits.append(Edit(flagged[0], "flag-review", cid))

    return tuple(sorted(edits, key=lambda e: (e.span, _OP_ORDER[e.op],
                                              e.payload)))


def adapt_recipe(r: Recipe, k: DomainKnowledge) -> tuple[RevisionResult,
                                                         tuple[Edit, ...]]:
    """Whole pipeline on the base scenario: encode, remove the
    substituted entities, inject the knowledge, revise, map to edits."""
    _, h = encode_recipe(r)[0]
    result = revise(inject(remove_entities(h, k.removals), k))
    return result, adapt_text_edits(result, r)


def format_edits(edits: Iterable[Edit]) -> str:
    lines = [f"{e.span[0]}..{e.span[1]} {e.op}"
             + (f" {e.payload}" if e.payload else "")
             for e in edits]
    return "\n".join(lines) + ("\n" if lines else "")
