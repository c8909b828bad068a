"""Front-end parsers: a TimeML-subset markup reader and the plain-text
recipe DSL, both carrying text spans back to the source so edits can be
mapped onto it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .allen import QCN, Relation
from .metric import BoundWindow
from .recipe import (
    ActionNode,
    AlternativeBranch,
    Recipe,
    RepetitionMarker,
    StateNode,
    TimerNode,
    duration_cap,
    encode_duration,
)


class AnnotationError(ValueError):
    """Markup error; `offset` is the byte position in the input."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"offset {offset}: {message}")
        self.offset = offset


class RecipeSyntaxError(ValueError):
    """DSL error; `line` is 1-based, or None for whole-file problems."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


# ---------------------------------------------------------------------------
# TimeML subset

@dataclass(frozen=True)
class Event:
    eid: str
    eclass: str
    text: str
    span: tuple[int, int]


@dataclass(frozen=True)
class Instance:
    eiid: str
    event_id: str
    tense: str
    aspect: str
    pos: str


@dataclass(frozen=True)
class Signal:
    sid: str
    text: str
    span: tuple[int, int]


@dataclass(frozen=True)
class TLink:
    event_instance_id: str
    signal_id: Optional[str]
    related_to_event: str
    rel_type: str


@dataclass(frozen=True)
class AnnotatedDoc:
    source: str
    text: str  # the input with markup removed; spans index into this
    events: tuple[Event, ...]
    instances: tuple[Instance, ...]
    signals: tuple[Signal, ...]
    tlinks: tuple[TLink, ...]


_KNOWN_TAGS = {"EVENT", "MAKEINSTANCE", "SIGNAL", "TLINK"}
_WRAPPING = {"EVENT", "SIGNAL"}
_REQUIRED = {
    "EVENT": ("eid", "class"),
    "MAKEINSTANCE": ("eiid", "eventID", "tense", "aspect", "pos"),
    "SIGNAL": ("sid",),
    "TLINK": ("eventInstanceID", "relatedToEvent", "relType"),
}

_ATTR_RE = re.compile(r'([A-Za-z][A-Za-z0-9]*)\s*=\s*"([^"]*)"')


def _parse_attrs(body: str, offset: int) -> dict[str, str]:
    attrs = dict(_ATTR_RE.findall(body))
    stripped = _ATTR_RE.sub("", body).replace("/", "").strip()
    if stripped:
        raise AnnotationError(f"malformed attributes near {stripped.split()[0]!r}", offset)
    return attrs


def parse_timeml(source: str) -> AnnotatedDoc:
    """Scan tag soup limited to EVENT, MAKEINSTANCE, SIGNAL and TLINK.

    EVENT and SIGNAL wrap covered text; MAKEINSTANCE and TLINK are
    self-closing.  Tags may span line breaks.  Every problem is reported
    with the byte offset of the offending tag.
    """
    events: list[Event] = []
    instances: list[Instance] = []
    signals: list[Signal] = []
    tlinks: list[tuple[TLink, int]] = []
    text_parts: list[str] = []
    text_len = 0
    open_tag: Optional[tuple[str, dict, int, int]] = None  # name, attrs, text start, offset

    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch != "<":
            text_parts.append(ch)
            text_len += 1
            i += 1
            continue
        end = source.find(">", i)
        if end < 0:
            raise AnnotationError("unterminated tag", i)
        inner = source[i + 1:end].strip()
        closing = inner.startswith("/")
        if closing:
            inner = inner[1:].strip()
        self_closing = inner.endswith("/")
        m = re.match(r"[A-Za-z][A-Za-z0-9]*", inner)
        if not m:
            raise AnnotationError("tag without a name", i)
        name = m.group(0)
        if name not in _KNOWN_TAGS:
            raise AnnotationError(f"unknown tag {name!r}", i)
        body = inner[m.end():]

        if closing:
            if open_tag is None or open_tag[0] != name:
                raise AnnotationError(f"unexpected closing tag {name!r}", i)
            tag_name, attrs, start, tag_off = open_tag
            covered = "".join(text_parts[start:])
            covered_span = (start, text_len)
            if tag_name == "EVENT":
                events.append(Event(attrs["eid"], attrs["class"], covered, covered_span))
            else:
                signals.append(Signal(attrs["sid"], covered, covered_span))
            open_tag = None
        else:
            if open_tag is not None:
                raise AnnotationError(f"tag {name!r} nested inside open {open_tag[0]!r}", i)
            attrs = _parse_attrs(body, i)
            for req in _REQUIRED[name]:
                if req not in attrs:
                    raise AnnotationError(f"{name} is missing attribute {req!r}", i)
            if name in _WRAPPING:
                if self_closing:
                    raise AnnotationError(f"{name} must wrap text", i)
                open_tag = (name, attrs, text_len, i)
            else:
                if not self_closing:
                    raise AnnotationError(f"{name} must be self-closing", i)
                if name == "MAKEINSTANCE":
                    instances.append(Instance(attrs["eiid"], attrs["eventID"],
                                              attrs["tense"], attrs["aspect"],
                                              attrs["pos"]))
                else:
                    tlinks.append((TLink(attrs["eventInstanceID"],
                                         attrs.get("signalID"),
                                         attrs["relatedToEvent"],
                                         attrs["relType"]), i))
        i = end + 1

    if open_tag is not None:
        raise AnnotationError(f"unclosed tag {open_tag[0]!r}", open_tag[3])

    for collection, key in ((events, "eid"), (instances, "eiid"), (signals, "sid")):
        seen = set()
        for item in collection:
            value = getattr(item, key)
            if value in seen:
                raise AnnotationError(f"duplicate {key} {value!r}", 0)
            seen.add(value)

    event_ids = {e.eid for e in events}
    instance_ids = {m.eiid for m in instances}
    signal_ids = {s.sid for s in signals}
    for m_ in instances:
        if m_.event_id not in event_ids:
            raise AnnotationError(f"MAKEINSTANCE refers to absent event {m_.event_id!r}", 0)
    for link, off in tlinks:
        if link.event_instance_id not in instance_ids:
            raise AnnotationError(
                f"TLINK refers to absent instance {link.event_instance_id!r}", off)
        if link.related_to_event not in instance_ids:
            raise AnnotationError(
                f"TLINK refers to absent instance {link.related_to_event!r}", off)
        if link.signal_id is not None and link.signal_id not in signal_ids:
            raise AnnotationError(f"TLINK refers to absent signal {link.signal_id!r}", off)

    return AnnotatedDoc(source, "".join(text_parts), tuple(events),
                        tuple(instances), tuple(signals),
                        tuple(link for link, _ in tlinks))


DEFAULT_RELTYPE_MAP: dict[str, Relation] = {
    "BEFORE": Relation.parse("{b}"),
    "AFTER": Relation.parse("{bi}"),
    "IBEFORE": Relation.parse("{m}"),
    "IAFTER": Relation.parse("{mi}"),
    "INCLUDES": Relation.parse("{di}"),
    "IS_INCLUDED": Relation.parse("{d}"),
    "SIMULTANEOUS": Relation.parse("{e}"),
    "IDENTITY": Relation.parse("{e}"),
    "BEGINS": Relation.parse("{s}"),
    "BEGUN_BY": Relation.parse("{si}"),
    "ENDS": Relation.parse("{f}"),
    "ENDED_BY": Relation.parse("{fi}"),
}


def doc_to_qcn(doc: AnnotatedDoc, mapping: Optional[dict[str, Relation]] = None) -> QCN:
    """One interval per event instance; each TLINK constrains its
    instance against the instance it relates to.

    Intervals take the underlying event's id when that event has a
    single instance (the common case and the one the snippet uses),
    otherwise the instance id.
    """
    if mapping is None:
        mapping = DEFAULT_RELTYPE_MAP
    per_event: dict[str, int] = {}
    for inst in doc.instances:
        per_event[inst.event_id] = per_event.get(inst.event_id, 0) + 1
    name = {inst.eiid: inst.event_id if per_event[inst.event_id] == 1 else inst.eiid
            for inst in doc.instances}

    constraints = []
    for link in doc.tlinks:
        rel = mapping.get(link.rel_type)
        if rel is None:
            raise ValueError(f"no Allen image for relType {link.rel_type!r}")
        if rel.is_empty:
            raise ValueError(f"relType {link.rel_type!r} maps to the empty relation")
        constraints.append((name[link.event_instance_id], rel,
                            name[link.related_to_event]))
    return QCN.build([name[inst.eiid] for inst in doc.instances], constraints)


# ---------------------------------------------------------------------------
# recipe DSL

_ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*")


def _tokenize(line: str, lineno: int) -> list[tuple[str, str]]:
    """Split a DSL line into (kind, value) tokens: word, string or
    braces; `#` outside quotes starts a comment."""
    tokens = []
    i = 0
    n = len(line)
    while i < n:
        ch = line[i]
        if ch.isspace():
            i += 1
        elif ch == "#":
            break
        elif ch == '"':
            end = line.find('"', i + 1)
            if end < 0:
                raise RecipeSyntaxError("unterminated string", lineno)
            tokens.append(("string", line[i + 1:end]))
            i = end + 1
        elif ch == "{":
            end = line.find("}", i + 1)
            if end < 0:
                rest = line[i + 1:].split("#", 1)[0]
                if rest.strip():
                    raise RecipeSyntaxError("unterminated relation set", lineno)
                tokens.append(("word", "{"))  # block opener at end of line
                break
            tokens.append(("braces", line[i:end + 1]))
            i = end + 1
        elif ch == "}":
            tokens.append(("word", "}"))
            i += 1
        else:
            j = i
            while j < n and not line[j].isspace() and line[j] not in '"{}#':
                j += 1
            tokens.append(("word", line[i:j]))
            i = j
    return tokens


def _expect(tokens, idx, kind, what, lineno):
    if idx >= len(tokens) or tokens[idx][0] != kind:
        raise RecipeSyntaxError(f"expected {what}", lineno)
    return tokens[idx][1]


def _expect_id(tokens, idx, what, lineno):
    value = _expect(tokens, idx, "word", what, lineno)
    if not _ID_RE.fullmatch(value):
        raise RecipeSyntaxError(f"bad identifier {value!r}", lineno)
    return value


def _action_from_text(id_, text, span, kind, meanwhile, lineno):
    words = text.split()
    if not words:
        raise RecipeSyntaxError("empty action text", lineno)
    return ActionNode(id_, words[0], tuple(words[1:]), span, kind, meanwhile)


def parse_recipe_dsl(source: str) -> Recipe:
    """Parse the line-oriented recipe DSL; see the README for the
    grammar.  Spans on actions are the character ranges of their lines."""
    title = None
    prelims: list[ActionNode] = []
    steps: list[ActionNode] = []
    states: list[StateNode] = []
    timers: list[TimerNode] = []
    relations: list[tuple[str, Relation, str]] = []
    markers: list[RepetitionMarker] = []
    branches: list[AlternativeBranch] = []
    durations: list[tuple[str, BoundWindow]] = []
    until_links: list[tuple[str, str]] = []
    last_links: list[tuple[str, str, str]] = []
    declared: set[str] = set()

    branch: Optional[tuple[str, str, list[str], int]] = None  # id, guard, members, line

    def declare(id_, lineno):
        if id_ in declared:
            raise RecipeSyntaxError(f"duplicate id {id_!r}", lineno)
        declared.add(id_)

    offset = 0
    for lineno, line in enumerate(source.split("\n"), start=1):
        span = (offset, offset + len(line))
        offset += len(line) + 1
        tokens = _tokenize(line, lineno)
        if not tokens:
            continue
        kind, head = tokens[0]
        if kind != "word":
            raise RecipeSyntaxError(f"unexpected {tokens[0][1]!r}", lineno)
        if title is None and head != "recipe":
            raise RecipeSyntaxError("no recipe header", lineno)

        if head == "recipe":
            if title is not None:
                raise RecipeSyntaxError("second recipe header", lineno)
            title = _expect(tokens, 1, "string", "a quoted title", lineno)
            if len(tokens) > 2:
                raise RecipeSyntaxError("trailing tokens after title", lineno)

        elif head == "prelim":
            if branch is not None:
                raise RecipeSyntaxError("prelim not allowed inside alt", lineno)
            id_ = _expect_id(tokens, 1, "an id", lineno)
            text = _expect(tokens, 2, "string", "quoted text", lineno)
            if len(tokens) > 3:
                raise RecipeSyntaxError("trailing tokens after prelim", lineno)
            declare(id_, lineno)
            prelims.append(_action_from_text(id_, text, span, "preliminary",
                                             False, lineno))

        elif head == "step":
            id_ = _expect_id(tokens, 1, "an id", lineno)
            text = _expect(tokens, 2, "string", "quoted text", lineno)
            meanwhile = False
            for_phrase = None
            until_text = None
            last_phrase = None
            last_ref = None
            idx = 3
            while idx < len(tokens):
                word = _expect(tokens, idx, "word", "a step clause", lineno)
                if word == "meanwhile":
                    meanwhile = True
                    idx += 1
                elif word == "for":
                    idx += 1
                    parts = []
                    while idx < len(tokens) and tokens[idx][0] == "word" \
                            and tokens[idx][1] not in ("until", "last", "meanwhile"):
                        parts.append(tokens[idx][1])
                        idx += 1
                    if not parts:
                        raise RecipeSyntaxError("'for' needs a duration", lineno)
                    for_phrase = " ".join(parts)
                elif word == "until":
                    until_text = _expect(tokens, idx + 1, "string",
                                         "a quoted state after 'until'", lineno)
                    idx += 2
                elif word == "last":
                    idx += 1
                    parts = []
                    while idx < len(tokens) and tokens[idx][0] == "word" \
                            and tokens[idx][1] != "of":
                        parts.append(tokens[idx][1])
                        idx += 1
                    if not parts:
                        raise RecipeSyntaxError("'last' needs a duration", lineno)
                    if idx >= len(tokens) or tokens[idx][1] != "of":
                        raise RecipeSyntaxError("'last <dur> of <id>' expected", lineno)
                    last_phrase = " ".join(parts)
                    last_ref = _expect_id(tokens, idx + 1, "a reference id", lineno)
                    idx += 2
                else:
                    raise RecipeSyntaxError(f"unknown step clause {word!r}", lineno)
            if meanwhile and not steps:
                raise RecipeSyntaxError("first step cannot be 'meanwhile'", lineno)
            declare(id_, lineno)
            steps.append(_action_from_text(id_, text, span, "step", meanwhile, lineno))
            if branch is not None:
                branch[2].append(id_)
            try:
                if for_phrase is not None and until_text is not None:
                    durations.append((id_, BoundWindow.at_most(duration_cap(for_phrase))))
                elif for_phrase is not None:
                    durations.append((id_, encode_duration(for_phrase)))
                if last_phrase is not None:
                    timer_id = f"{id_}.timer"
                    declare(timer_id, lineno)
                    timers.append(TimerNode(timer_id, encode_duration(last_phrase)))
                    last_links.append((id_, timer_id, last_ref))
            except ValueError as exc:
                if isinstance(exc, RecipeSyntaxError):
                    raise
                raise RecipeSyntaxError(str(exc), lineno) from None
            if until_text is not None:
                state_id = f"{id_}.until"
                declare(state_id, lineno)
                states.append(StateNode(state_id, until_text, span))
                until_links.append((id_, state_id))

        elif head == "timer":
            id_ = _expect_id(tokens, 1, "an id", lineno)
            parts = [v for k, v in tokens[2:] if k == "word"]
            if len(parts) != len(tokens) - 2 or not parts:
                raise RecipeSyntaxError("'timer <id> <duration>' expected", lineno)
            declare(id_, lineno)
            try:
                timers.append(TimerNode(id_, encode_duration(" ".join(parts))))
            except ValueError as exc:
                raise RecipeSyntaxError(str(exc), lineno) from None

        elif head == "rel":
            a = _expect_id(tokens, 1, "an id", lineno)
            braces = _expect(tokens, 2, "braces", "a relation set", lineno)
            b = _expect_id(tokens, 3, "an id", lineno)
            if len(tokens) > 4:
                raise RecipeSyntaxError("trailing tokens after rel", lineno)
            try:
                rel = Relation.parse(braces)
            except ValueError as exc:
                raise RecipeSyntaxError(str(exc), lineno) from None
            if rel.is_empty:
                raise RecipeSyntaxError("empty relation set", lineno)
            relations.append((a, rel, b))

        elif head == "sporadic":
            target = _expect_id(tokens, 1, "an id", lineno)
            if _expect(tokens, 2, "word", "'in'", lineno) != "in":
                raise RecipeSyntaxError("'sporadic <id> in <id>' expected", lineno)
            container = _expect_id(tokens, 3, "an id", lineno)
            markers.append(RepetitionMarker(target, "sporadic", ref=container))

        elif head == "alternate":
            target = _expect_id(tokens, 1, "an id", lineno)
            if _expect(tokens, 2, "word", "'with'", lineno) != "with":
                raise RecipeSyntaxError("'alternate <id> with <id>' expected", lineno)
            partner = _expect_id(tokens, 3, "an id", lineno)
            markers.append(RepetitionMarker(target, "alternation", ref=partner))

        elif head == "alt":
            if branch is not None:
                raise RecipeSyntaxError("alt blocks do not nest", lineno)
            bid = _expect_id(tokens, 1, "a branch id", lineno)
            idx = 2
            guard = ""
            if idx < len(tokens) and tokens[idx][0] == "string":
                guard = tokens[idx][1]
                idx += 1
            if idx != len(tokens) - 1 or tokens[idx] != ("word", "{"):
                raise RecipeSyntaxError("alt block must open with '{'", lineno)
            branch = (bid, guard, [], lineno)

        elif head == "}":
            if branch is None:
                raise RecipeSyntaxError("'}' without open alt block", lineno)
            bid, guard, members, _ = branch
            branches.append(AlternativeBranch(bid, tuple(members), guard))
            branch = None

        else:
            raise RecipeSyntaxError(f"unknown directive {head!r}", lineno)

    if title is None:
        raise RecipeSyntaxError("no recipe header")
    if branch is not None:
        raise RecipeSyntaxError(f"unclosed alt block {branch[0]!r}", branch[3])

    return Recipe(
        title=title,
        preliminaries=tuple(prelims),
        steps=tuple(steps),
        states=tuple(states),
        timers=tuple(timers),
        relations=tuple(relations),
        markers=tuple(markers),
        branches=tuple(branches),
        durations=tuple(durations),
        until_links=tuple(until_links),
        last_links=tuple(last_links),
    )


# ---------------------------------------------------------------------------
# canonical serialization

def _format_minutes(value) -> str:
    return f"{value} min"


def _format_window_phrase(w: BoundWindow) -> str:
    if w.lo is None or w.hi is None or w.lo_strict or w.hi_strict:
        raise ValueError(f"window {w} has no DSL duration form")
    if w.is_point:
        return _format_minutes(w.lo)
    return f"{w.lo}-{w.hi} min"


def serialize_recipe_dsl(r: Recipe) -> str:
    """Emit the canonical DSL form: fixed directive order, durations in
    minutes.  parse-serialize round-trips are stable from the second
    pass on."""
    for m in r.markers:
        if m.mode == "count":
            raise ValueError("count markers have no DSL form")
    durations = dict(r.durations)
    until = dict(r.until_links)
    last = {a: (t, ref) for a, t, ref in r.last_links}
    auto_timers = {t for _, t, _ in r.last_links}
    member_of = {}
    for br in r.branches:
        for mem in br.members:
            member_of[mem] = br.id

    def step_line(s: ActionNode) -> str:
        text = " ".join((s.verb,) + s.objects)
        parts = [f'step {s.id} "{text}"']
        if s.meanwhile:
            parts.append("meanwhile")
        if s.id in durations:
            w = durations[s.id]
            if s.id in until and w.lo == 0 and w.lo_strict and w.hi is not None:
                parts.append(f"for {_format_minutes(w.hi)}")
            elif s.id in until:
                raise ValueError(
                    f"mixed duration on {s.id!r} is not of the form (0, N]")
            else:
                parts.append(f"for {_format_window_phrase(w)}")
        if s.id in until:
            predicate = next(st.predicate for st in r.states if st.id == until[s.id])
            parts.append(f'until "{predicate}"')
        if s.id in last:
            timer_id, ref = last[s.id]
            w = next(t.window for t in r.timers if t.id == timer_id)
            parts.append(f"last {_format_window_phrase(w)} of {ref}")
        return " ".join(parts)

    lines = [f'recipe "{r.title}"']
    for p in r.preliminaries:
        text = " ".join((p.verb,) + p.objects)
        lines.append(f'prelim {p.id} "{text}"')
    for s in r.steps:
        if s.id not in member_of:
            lines.append(step_line(s))
    for t in r.timers:
        if t.id not in auto_timers:
            lines.append(f"timer {t.id} {_format_window_phrase(t.window)}")
    branch_rels = {br.id: [] for br in r.branches}
    for a, rel, b in r.relations:
        owner = member_of.get(a) or member_of.get(b)
        if owner is not None:
            branch_rels[owner].append((a, rel, b))
        else:
            lines.append(f"rel {a} {rel} {b}")
    for m in r.markers:
        if m.mode == "sporadic":
            lines.append(f"sporadic {m.target} in {m.ref}")
        elif m.mode == "alternation":
            lines.append(f"alternate {m.target} with {m.ref}")
    for br in sorted(r.branches, key=lambda br: br.id):
        guard = f' "{br.guard}"' if br.guard else ""
        lines.append(f"alt {br.id}{guard} {{")
        for s in r.steps:
            if s.id in br.members:
                lines.append(f"  {step_line(s)}")
        for a, rel, b in branch_rels[br.id]:
            lines.append(f"  rel {a} {rel} {b}")
        lines.append("}")
    return "\n".join(lines) + "\n"
