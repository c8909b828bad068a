"""Brute-force oracles used by the test suite.

Everything here is deliberately written against the raw endpoint
semantics, not against the package's own tables or enumeration code, so
that the two can check each other.
"""

from fractions import Fraction
from itertools import product

ATOM_NAMES = ("b", "bi", "m", "mi", "o", "oi", "d", "di", "s", "si", "f", "fi", "e")


def _atom_defs(xs, xe, ys, ye):
    return {
        "b": xe < ys,
        "bi": ye < xs,
        "m": xe == ys,
        "mi": ye == xs,
        "o": xs < ys < xe < ye,
        "oi": ys < xs < ye < xe,
        "d": ys < xs and xe < ye,
        "di": xs < ys and ye < xe,
        "s": xs == ys and xe < ye,
        "si": xs == ys and ye < xe,
        "f": xe == ye and ys < xs,
        "fi": xe == ye and xs < ys,
        "e": xs == ys and xe == ye,
    }


def atom_by_definition(x, y):
    """The atom holding between realized intervals, from the defining
    endpoint predicates; asserts that exactly one predicate fires."""
    holds = [name for name, ok in _atom_defs(x[0], x[1], y[0], y[1]).items() if ok]
    assert len(holds) == 1, f"atoms not a partition at {x}, {y}: {holds}"
    return holds[0]


def three_interval_configs():
    """Every realizable endpoint configuration of three intervals, up to
    order-isomorphism: integer endpoints drawn from 0..5 with start < end.

    Six values suffice because three intervals have six endpoints, so any
    weak order over them embeds into 0..5.
    """
    for vals in product(range(6), repeat=6):
        xs, xe, ys, ye, zs, ze = vals
        if xs < xe and ys < ye and zs < ze:
            yield (xs, xe), (ys, ye), (zs, ze)


def composition_by_enumeration():
    """The full 169-entry composition table derived from enumeration:
    maps (atom1, atom2) to the frozenset of atoms observed for (x, z)
    over all configurations with atom1(x, y) and atom2(y, z)."""
    table = {}
    for x, y, z in three_interval_configs():
        r1 = atom_by_definition(x, y)
        r2 = atom_by_definition(y, z)
        r3 = atom_by_definition(x, z)
        table.setdefault((r1, r2), set()).add(r3)
    assert len(table) == 169
    return {k: frozenset(v) for k, v in table.items()}


def realizable_atom_triples():
    """All (r_xy, r_yz, r_xz) atom triples realizable by three intervals."""
    triples = set()
    for x, y, z in three_interval_configs():
        triples.add((atom_by_definition(x, y),
                     atom_by_definition(y, z),
                     atom_by_definition(x, z)))
    return triples


def indu_pairs_by_enumeration():
    """All realizable (atom, duration sign) pairs for two intervals,
    endpoints on a 0..7 grid (fine enough to separate every duration
    comparison that two intervals can exhibit)."""
    pairs = set()
    for xs, xe, ys, ye in product(range(8), repeat=4):
        if xs < xe and ys < ye:
            atom = atom_by_definition((xs, xe), (ys, ye))
            dx, dy = xe - xs, ye - ys
            sign = "<" if dx < dy else (">" if dx > dy else "=")
            pairs.add((atom, sign))
    return pairs


def indu_triples_by_enumeration():
    """Realizable ((atom, sign), (atom, sign), (atom, sign)) triples for
    (x,y), (y,z), (x,z) over a 0..7 endpoint grid."""
    triples = set()
    for xs, xe in [(a, b) for a in range(8) for b in range(a + 1, 8)]:
        for ys, ye in [(a, b) for a in range(8) for b in range(a + 1, 8)]:
            axy = atom_by_definition((xs, xe), (ys, ye))
            sxy = _sign(xe - xs, ye - ys)
            for zs, ze in [(a, b) for a in range(8) for b in range(a + 1, 8)]:
                ayz = atom_by_definition((ys, ye), (zs, ze))
                syz = _sign(ye - ys, ze - zs)
                axz = atom_by_definition((xs, xe), (zs, ze))
                sxz = _sign(xe - xs, ze - zs)
                triples.add(((axy, sxy), (ayz, syz), (axz, sxz)))
    return triples


def _sign(a, b):
    return "<" if a < b else (">" if a > b else "=")


def stp_minimal_by_paths(points, upper):
    """Minimal upper bounds for a small STP by exhaustive simple-path
    enumeration over the distance graph.

    `upper` maps (i, j) to a (value, strict) pair bounding t_j - t_i;
    missing pairs are unbounded.  Returns the tightest bound for every
    ordered pair as a dict, or None when some cycle is negative (weight
    below zero, or zero with a strict leg).
    """
    n = len(points)
    inf = (None, True)

    def add(a, b):
        if a[0] is None or b[0] is None:
            return inf
        return (a[0] + b[0], a[1] or b[1])

    def tighter(a, b):
        if a[0] is None:
            return b
        if b[0] is None:
            return a
        if a[0] != b[0]:
            return a if a[0] < b[0] else b
        return a if a[1] else b

    def edge(i, j):
        return upper.get((points[i], points[j]), inf)

    # negative cycle check over all simple cycles
    import itertools
    for size in range(2, n + 1):
        for cycle in itertools.permutations(range(n), size):
            w = (Fraction(0), False)
            legs = list(cycle) + [cycle[0]]
            for a, b in zip(legs, legs[1:]):
                w = add(w, edge(a, b))
            if w[0] is not None and (w[0] < 0 or (w[0] == 0 and w[1])):
                return None

    best = {}
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            b = edge(i, j)
            for size in range(1, n - 1):
                for mid in itertools.permutations([k for k in range(n) if k not in (i, j)], size):
                    w = edge(i, mid[0])
                    for a, c in zip(mid, mid[1:]):
                        w = add(w, edge(a, c))
                    w = add(w, edge(mid[-1], j))
                    b = tighter(b, w)
            best[(points[i], points[j])] = b
    return best
