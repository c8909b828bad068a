"""Allen's interval algebra: base relations, disjunctive relations, and
qualitative constraint networks with path-consistency closure.

Intervals are convex spans of time with start < end.  Any two intervals
stand in exactly one of 13 base relations, determined by the ordering of
their four endpoints.  Partial knowledge is a *set* of base relations
(a disjunction); networks label interval pairs with such sets and are
tightened by intersecting each label with the composition of any two-leg
path around it.

The composition table below was generated from exhaustive enumeration of
endpoint weak orders and is embedded as a constant; the test suite
re-derives it independently.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence


class BaseRelation(enum.IntEnum):
    """The 13 atomic interval relations, in canonical order.

    The integer value is the canonical index used for tie-breaking and
    serialization everywhere in this package.
    """

    b = 0    # before
    bi = 1   # after
    m = 2    # meets
    mi = 3   # met-by
    o = 4    # overlaps
    oi = 5   # overlapped-by
    d = 6    # during
    di = 7   # contains
    s = 8    # starts
    si = 9   # started-by
    f = 10   # finishes
    fi = 11  # finished-by
    e = 12   # equals

    @property
    def converse(self) -> "BaseRelation":
        return _CONVERSE[self]

    @classmethod
    def parse(cls, token: str) -> "BaseRelation":
        """Resolve a canonical name or an accepted alias (<, >, p, a, pi, eq, =)."""
        name = _ALIASES.get(token, token)
        try:
            return cls[name]
        except KeyError:
            raise ValueError(f"unknown base relation {token!r}") from None


_ALIASES = {"<": "b", "p": "b", ">": "bi", "a": "bi", "pi": "bi", "eq": "e", "=": "e"}

_CONVERSE = {
    BaseRelation.b: BaseRelation.bi, BaseRelation.bi: BaseRelation.b,
    BaseRelation.m: BaseRelation.mi, BaseRelation.mi: BaseRelation.m,
    BaseRelation.o: BaseRelation.oi, BaseRelation.oi: BaseRelation.o,
    BaseRelation.d: BaseRelation.di, BaseRelation.di: BaseRelation.d,
    BaseRelation.s: BaseRelation.si, BaseRelation.si: BaseRelation.s,
    BaseRelation.f: BaseRelation.fi, BaseRelation.fi: BaseRelation.f,
    BaseRelation.e: BaseRelation.e,
}

N_ATOMS = 13
FULL_MASK = (1 << N_ATOMS) - 1

# COMPOSITION[i][j] is the bitmask of atoms k such that x i y and y j z
# admit x k z for some endpoint configuration.  Generated once from the
# endpoint-order enumeration oracle; do not edit by hand.
COMPOSITION = (
    (1, 8191, 1, 341, 1, 341, 341, 1, 1, 1, 341, 1, 1),
    (8191, 2, 1130, 2, 1130, 2, 1130, 2, 1130, 2, 2, 2, 2),
    (1, 682, 1, 7168, 1, 336, 336, 1, 4, 4, 336, 1, 4),
    (2197, 2, 4864, 2, 1120, 2, 1120, 2, 1120, 2, 8, 8, 8),
    (1, 682, 1, 672, 21, 8176, 336, 2197, 16, 2192, 336, 21, 16),
    (2197, 2, 2192, 2, 8176, 42, 1120, 682, 1120, 42, 32, 672, 32),
    (1, 2, 1, 2, 341, 1130, 64, 8191, 64, 1130, 64, 341, 64),
    (2197, 682, 2192, 672, 2192, 672, 8176, 128, 2192, 128, 672, 128, 128),
    (1, 2, 1, 8, 21, 1120, 64, 2197, 256, 4864, 64, 21, 256),
    (2197, 2, 2192, 8, 2192, 32, 1120, 128, 4864, 512, 32, 128, 512),
    (1, 2, 4, 2, 336, 42, 64, 682, 64, 42, 1024, 7168, 1024),
    (1, 682, 4, 672, 16, 672, 336, 128, 16, 128, 7168, 2048, 2048),
    (1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096),
)

def _converse_mask(mask: int) -> int:
    out = 0
    for atom in BaseRelation:
        if mask & (1 << atom):
            out |= 1 << atom.converse
    return out


_CONV_TABLE = tuple(_converse_mask(1 << i) for i in range(N_ATOMS))


def _compose_mask(m1: int, m2: int) -> int:
    out = 0
    i = 0
    while m1 >> i:
        if m1 & (1 << i):
            row = COMPOSITION[i]
            j = 0
            while m2 >> j:
                if m2 & (1 << j):
                    out |= row[j]
                j += 1
        i += 1
    return out


@dataclass(frozen=True, order=False)
class Relation:
    """A disjunctive set of base relations between two intervals.

    The empty set is the contradiction; the full 13-atom set carries no
    information.  Internally a 13-bit mask indexed by canonical order.
    """

    mask: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask <= FULL_MASK:
            raise ValueError(f"relation mask out of range: {self.mask}")

    @classmethod
    def of(cls, *atoms: BaseRelation | str) -> "Relation":
        mask = 0
        for a in atoms:
            if isinstance(a, str):
                a = BaseRelation.parse(a)
            mask |= 1 << a
        return cls(mask)

    @classmethod
    def parse(cls, text: str) -> "Relation":
        """Parse a brace-delimited atom set such as ``{b,m}`` or ``{<, eq}``."""
        text = text.strip()
        if not (text.startswith("{") and text.endswith("}")):
            raise ValueError(f"relation must be brace-delimited: {text!r}")
        body = text[1:-1].strip()
        if not body:
            return EMPTY
        return cls.of(*(tok.strip() for tok in body.split(",")))

    @property
    def atoms(self) -> tuple[BaseRelation, ...]:
        return tuple(a for a in BaseRelation if self.mask & (1 << a))

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    @property
    def is_atomic(self) -> bool:
        return self.mask != 0 and self.mask & (self.mask - 1) == 0

    def __contains__(self, atom: BaseRelation) -> bool:
        return bool(self.mask & (1 << atom))

    def __iter__(self) -> Iterator[BaseRelation]:
        return iter(self.atoms)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __or__(self, other: "Relation") -> "Relation":
        return Relation(self.mask | other.mask)

    def __and__(self, other: "Relation") -> "Relation":
        return Relation(self.mask & other.mask)

    def __le__(self, other: "Relation") -> bool:
        return self.mask & ~other.mask == 0

    def converse(self) -> "Relation":
        out = 0
        for i in range(N_ATOMS):
            if self.mask & (1 << i):
                out |= _CONV_TABLE[i]
        return Relation(out)

    def compose(self, other: "Relation") -> "Relation":
        return Relation(_compose_mask(self.mask, other.mask))

    def __str__(self) -> str:
        return "{" + ",".join(a.name for a in self.atoms) + "}"

    def __repr__(self) -> str:
        return f"Relation.parse({str(self)!r})"


EMPTY = Relation(0)
FULL = Relation(FULL_MASK)
IDENTITY = Relation.of(BaseRelation.e)


Endpoints = tuple[Fraction, Fraction]
Realization = dict[str, Endpoints]


def base_relation_of(x: Endpoints, y: Endpoints) -> BaseRelation:
    """The unique atom holding between two realized intervals.

    Both intervals must satisfy start < end; the 13 atoms then partition
    all endpoint configurations.
    """
    xs, xe = x
    ys, ye = y
    if xs >= xe or ys >= ye:
        raise ValueError("intervals must satisfy start < end")
    if xe < ys:
        return BaseRelation.b
    if ye < xs:
        return BaseRelation.bi
    if xe == ys:
        return BaseRelation.m
    if ye == xs:
        return BaseRelation.mi
    if xs == ys and xe == ye:
        return BaseRelation.e
    if xs == ys:
        return BaseRelation.s if xe < ye else BaseRelation.si
    if xe == ye:
        return BaseRelation.f if xs > ys else BaseRelation.fi
    if ys < xs and xe < ye:
        return BaseRelation.d
    if xs < ys and ye < xe:
        return BaseRelation.di
    return BaseRelation.o if xs < ys else BaseRelation.oi


class QCN:
    """A qualitative constraint network over named intervals.

    The constraint matrix is converse-symmetric with {e} on the diagonal;
    cells are Relations.  Instances are immutable; tightening operations
    return new networks.
    """

    __slots__ = ("intervals", "_index", "_matrix")

    def __init__(self, intervals: Sequence[str], matrix: Sequence[Sequence[int]] | None = None):
        intervals = tuple(intervals)
        if len(set(intervals)) != len(intervals):
            raise ValueError("duplicate interval ids")
        n = len(intervals)
        if matrix is None:
            matrix = [[FULL_MASK] * n for _ in range(n)]
            for i in range(n):
                matrix[i][i] = 1 << BaseRelation.e
        rows = tuple(tuple(row) for row in matrix)
        for i in range(n):
            if rows[i][i] != 1 << BaseRelation.e:
                raise ValueError("diagonal cells must be {e}")
            for j in range(n):
                if rows[j][i] != _converse_mask(rows[i][j]):
                    raise ValueError("constraint matrix must be converse-symmetric")
        object.__setattr__(self, "intervals", intervals)
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(intervals)})
        object.__setattr__(self, "_matrix", rows)

    def __setattr__(self, name, value):
        raise AttributeError("QCN is immutable")

    @classmethod
    def build(cls, intervals: Sequence[str],
              constraints: Sequence[tuple[str, Relation, str]] = ()) -> "QCN":
        """Construct a network, intersecting repeated constraints on a pair."""
        net = cls(intervals)
        m = [list(row) for row in net._matrix]
        idx = net._index
        for a, rel, b in constraints:
            if a not in idx or b not in idx:
                missing = a if a not in idx else b
                raise KeyError(f"unknown interval {missing!r}")
            i, j = idx[a], idx[b]
            if i == j:
                if BaseRelation.e not in rel:
                    raise ValueError(f"self-constraint on {a!r} excludes equality")
                continue
            m[i][j] &= rel.mask
            m[j][i] = _converse_mask(m[i][j])
        return cls(intervals, m)

    def cell(self, a: str, b: str) -> Relation:
        return Relation(self._matrix[self._index[a]][self._index[b]])

    def with_cell(self, a: str, b: str, rel: Relation) -> "QCN":
        i, j = self._index[a], self._index[b]
        if i == j:
            raise ValueError("cannot replace a diagonal cell")
        m = [list(row) for row in self._matrix]
        m[i][j] = rel.mask
        m[j][i] = _converse_mask(rel.mask)
        return QCN(self.intervals, m)

    def restricted(self, keep: Sequence[str]) -> "QCN":
        """The induced subnetwork on the given intervals (order preserved)."""
        keep = tuple(keep)
        idx = [self._index[k] for k in keep]
        m = [[self._matrix[i][j] for j in idx] for i in idx]
        return QCN(keep, m)

    @property
    def inconsistent(self) -> bool:
        return any(0 in row for row in self._matrix)

    def __len__(self) -> int:
        return len(self.intervals)

    def __eq__(self, other) -> bool:
        return (isinstance(other, QCN) and self.intervals == other.intervals
                and self._matrix == other._matrix)

    def __hash__(self) -> int:
        return hash((self.intervals, self._matrix))

    def __repr__(self) -> str:
        return f"QCN({list(self.intervals)!r}, <{len(self)}x{len(self)}>)"

    @classmethod
    def _raw(cls, intervals, matrix) -> "QCN":
        # bypass invariant checks for matrices produced by trusted internal code
        self = object.__new__(cls)
        rows = tuple(tuple(row) for row in matrix)
        object.__setattr__(self, "intervals", tuple(intervals))
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(intervals)})
        object.__setattr__(self, "_matrix", rows)
        return self


def close(net: QCN) -> QCN:
    """Path-consistency closure: the largest fixpoint of
    C[i][j] <- C[i][j] & compose(C[i][k], C[k][j]) over all triples.

    Output cells are subsets of input cells and the operation is
    idempotent.  An empty cell marks the network inconsistent; closure
    stops there and returns the partially tightened network.
    """
    n = len(net.intervals)
    m = [list(row) for row in net._matrix]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            mi_ = m[i]
            for j in range(n):
                if i == j:
                    continue
                cur = mi_[j]
                for k in range(n):
                    if k == i or k == j:
                        continue
                    tightened = cur & _compose_mask(mi_[k], m[k][j])
                    if tightened != cur:
                        cur = tightened
                        if cur == 0:
                            mi_[j] = 0
                            m[j][i] = 0
                            return QCN._raw(net.intervals, m)
                if cur != mi_[j]:
                    mi_[j] = cur
                    m[j][i] = _converse_mask(cur)
                    changed = True
    return QCN._raw(net.intervals, m)


def atomic_consistent(net: QCN) -> tuple[bool, Optional[QCN]]:
    """Search for an atomic refinement (one atom per cell) that survives
    closure, backtracking over atom choices in canonical order.

    Path consistency alone is incomplete for general Allen networks, but
    it is complete for atomic ones, so a closed atomic network is
    realizable.  Returns (True, scenario) or (False, None).
    """
    start = close(net)
    if start.inconsistent:
        return False, None
    n = len(start.intervals)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def refine(current: QCN) -> Optional[QCN]:
        target = None
        for i, j in pairs:
            mask = current._matrix[i][j]
            if mask & (mask - 1):
                target = (i, j)
                break
        if target is None:
            return current
        i, j = target
        mask = current._matrix[i][j]
        for a in range(N_ATOMS):
            bit = 1 << a
            if not mask & bit:
                continue
            m = [list(row) for row in current._matrix]
            m[i][j] = bit
            m[j][i] = _CONV_TABLE[a]
            tightened = close(QCN._raw(current.intervals, m))
            if tightened.inconsistent:
                continue
            found = refine(tightened)
            if found is not None:
                return found
        return None

    scenario = refine(start)
    if scenario is None:
        return False, None
    return True, scenario


REALIZE_MAX_INTERVALS = 4


@lru_cache(maxsize=8)
def _order_profiles(n: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """All weak orders of the 2n endpoints (start0, end0, start1, ...) with
    start < end per interval, paired with the atom induced for every
    interval pair (i, j), i < j, in pair order.

    Enumeration inserts endpoints one at a time into an ordered chain of
    equivalence blocks, pruning placements that put an end at or before
    its start.
    """
    total = 2 * n
    pair_list = [(i, j) for i in range(n) for j in range(i + 1, n)]
    profiles: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def place(k: int, blocks: list[list[int]], where: dict[int, list[int]]) -> None:
        if k == total:
            ranks = [0] * total
            for pos, blk in enumerate(blocks):
                for endpoint in blk:
                    ranks[endpoint] = pos
            atoms = []
            for i, j in pair_list:
                x = (Fraction(ranks[2 * i]), Fraction(ranks[2 * i + 1]))
                y = (Fraction(ranks[2 * j]), Fraction(ranks[2 * j + 1]))
                atoms.append(int(base_relation_of(x, y)))
            profiles.append((tuple(ranks), tuple(atoms)))
            return
        first = 0
        if k % 2 == 1:  # end endpoints go strictly after their start's block
            first = blocks.index(where[k - 1]) + 1
        for pos in range(first, len(blocks) + 1):
            new_block = [k]
            blocks.insert(pos, new_block)
            where[k] = new_block
            place(k + 1, blocks, where)
            blocks.pop(pos)
            if pos < len(blocks):
                blocks[pos].append(k)
                where[k] = blocks[pos]
                place(k + 1, blocks, where)
                blocks[pos].pop()
        del where[k]

    place(0, [], {})
    return tuple(profiles)


def realize_small(net: QCN) -> Optional[Realization]:
    """Brute-force realization oracle for networks of at most 4 intervals.

    Enumerates every weak order over the 2n endpoints and returns the
    first witness satisfying all cells, or None.  Independent of the
    composition table and of closure; used to ground their semantics.
    """
    n = len(net.intervals)
    if n > REALIZE_MAX_INTERVALS:
        raise ValueError(f"realization oracle limited to {REALIZE_MAX_INTERVALS} intervals")
    if n == 0:
        return {}
    pair_list = [(i, j) for i in range(n) for j in range(i + 1, n)]
    cells = [net._matrix[i][j] for i, j in pair_list]
    for ranks, atoms in _order_profiles(n):
        if all(cells[p] & (1 << atoms[p]) for p in range(len(pair_list))):
            return {
                name: (Fraction(ranks[2 * i]), Fraction(ranks[2 * i + 1]))
                for i, name in enumerate(net.intervals)
            }
    return None


def format_qcn(net: QCN) -> str:
    """Serialize a network: header line listing the intervals, then one
    line per informative upper-triangle cell with ids in sorted order.

    Tautology cells are omitted; atoms print in canonical order.  The
    format round-trips bit-exactly through parse_qcn.
    """
    names = sorted(net.intervals)
    lines = ["intervals " + " ".join(names)]
    for pos, a in enumerate(names):
        for b in names[pos + 1:]:
            rel = net.cell(a, b)
            if rel.mask != FULL_MASK:
                lines.append(f"{a} {b} {rel}")
    return "\n".join(lines) + "\n"


def parse_qcn(text: str) -> QCN:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("intervals"):
        raise ValueError("expected an 'intervals' header line")
    names = lines[0].split()[1:]
    constraints = []
    for ln in lines[1:]:
        match = re.fullmatch(r"(\S+)\s+(\S+)\s+(\{.*\})", ln)
        if not match:
            raise ValueError(f"bad constraint line: {ln!r}")
        a, b, rel = match.groups()
        constraints.append((a, Relation.parse(rel), b))
    return QCN.build(names, constraints)
