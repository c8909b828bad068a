from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chronotext.allen import (
    FULL,
    FULL_MASK,
    QCN,
    Relation,
    atomic_consistent,
    close,
)
from chronotext.hybrid import HybridNetwork, hybrid_atomic_consistent, hybrid_close
from chronotext.metric import STP, BoundWindow, POSITIVE


F = Fraction
R = Relation.parse


class TestBuild:
    def test_linkage_present(self):
        h = HybridNetwork.build(["a", "b"])
        closed = hybrid_close(h)
        assert closed.duration_window("a") == POSITIVE

    def test_missing_endpoints_rejected(self):
        qcn = QCN.build(["a"])
        stp = STP.build(["a.start"])
        with pytest.raises(ValueError):
            HybridNetwork(qcn, stp)

    def test_accessors(self):
        h = HybridNetwork.build(
            ["a", "b"],
            allen_constraints=[("a", R("{b}"), "b")],
            metric_constraints=[("a.end", "b.start", BoundWindow.closed(5, 10))],
        )
        assert h.relation("a", "b") == R("{b}")
        assert h.relation("b", "a") == R("{bi}")
        assert h.point_window("a.end", "b.start") == BoundWindow.closed(5, 10)

    def test_anon_points_carried(self):
        h = HybridNetwork.build(["a"], anon_points=["x0"],
                                metric_constraints=[("a.end", "x0", BoundWindow.exact(3))])
        closed = hybrid_close(h)
        assert closed.point_window("a.end", "x0") == BoundWindow.exact(3)


class TestHybridClose:
    def test_state_meets_with_duration_cap(self):
        # the action meets its result state and lasts at most 25 minutes
        h = HybridNetwork.build(
            ["bake", "is_brown"],
            allen_constraints=[("bake", R("{m}"), "is_brown")],
            metric_constraints=[("bake.start", "bake.end", BoundWindow.at_most(25))],
        )
        closed = hybrid_close(h)
        assert not closed.inconsistent
        assert closed.point_window("bake.end", "is_brown.start") == BoundWindow.exact(0)
        assert closed.duration_window("bake") == BoundWindow.at_most(25)

    def test_fixed_timer_against_shorter_duration(self):
        h = HybridNetwork.build(
            ["timer", "bake"],
            allen_constraints=[("timer", R("{e}"), "bake")],
            metric_constraints=[
                ("timer.start", "timer.end", BoundWindow.exact(60)),
                ("bake.start", "bake.end", BoundWindow.closed(10, 20)),
            ],
        )
        assert hybrid_close(h).inconsistent

    def test_metric_layer_refines_relations(self):
        # endpoint equalities force "finishes" without any Allen input
        h = HybridNetwork.build(
            ["t", "bake"],
            metric_constraints=[
                ("bake.start", "t.start", BoundWindow.exact(45)),
                ("bake.end", "t.end", BoundWindow.exact(0)),
                ("bake.start", "bake.end", BoundWindow.exact(60)),
            ],
        )
        closed = hybrid_close(h)
        assert not closed.inconsistent
        assert closed.relation("t", "bake") == R("{f}")

    def test_qualitative_layer_tightens_windows(self):
        h = HybridNetwork.build(
            ["a", "b"],
            allen_constraints=[("a", R("{m}"), "b")],
        )
        closed = hybrid_close(h)
        assert closed.point_window("a.end", "b.start") == BoundWindow.exact(0)

    def test_idempotent(self):
        nets = [
            HybridNetwork.build(["a", "b"], [("a", R("{b,m,o}"), "b")]),
            HybridNetwork.build(
                ["x", "y", "z"],
                [("x", R("{m}"), "y"), ("y", R("{b,m}"), "z")],
                [("x.start", "x.end", BoundWindow.closed(1, 2))],
            ),
        ]
        for h in nets:
            once = hybrid_close(h)
            assert hybrid_close(once) == once


masks = st.integers(1, FULL_MASK).map(Relation)


@st.composite
def allen_only_hybrids(draw):
    n = draw(st.integers(2, 4))
    ids = [f"i{k}" for k in range(n)]
    cons = []
    for a in range(n):
        for b in range(a + 1, n):
            if draw(st.booleans()):
                cons.append((ids[a], draw(masks), ids[b]))
    return HybridNetwork.build(ids, cons)


class TestAllenOnlyReduction:
    @settings(max_examples=60, deadline=None)
    @given(allen_only_hybrids())
    def test_close_reduces_to_qualitative_closure(self, h):
        assert hybrid_close(h).qcn == close(h.qcn)

    @settings(max_examples=40, deadline=None)
    @given(allen_only_hybrids())
    def test_atomic_search_matches_qualitative_search(self, h):
        ok_h, wit_h = hybrid_atomic_consistent(h)
        ok_q, wit_q = atomic_consistent(h.qcn)
        assert ok_h == ok_q
        if ok_h:
            assert wit_h.qcn == wit_q


class TestHybridAtomicConsistent:
    def test_metric_prunes_first_candidate(self):
        # s requires the left interval to be shorter; equal fixed durations
        # leave only e
        h = HybridNetwork.build(
            ["a", "b"],
            allen_constraints=[("a", R("{s,e}"), "b")],
            metric_constraints=[
                ("a.start", "a.end", BoundWindow.exact(10)),
                ("b.start", "b.end", BoundWindow.exact(10)),
            ],
        )
        ok, witness = hybrid_atomic_consistent(h)
        assert ok
        assert witness.relation("a", "b") == R("{e}")
        assert witness.qcn == close(witness.qcn)

    def test_no_scenario_survives_metric(self):
        h = HybridNetwork.build(
            ["a", "b"],
            allen_constraints=[("a", R("{s}"), "b")],
            metric_constraints=[
                ("a.start", "a.end", BoundWindow.exact(10)),
                ("b.start", "b.end", BoundWindow.exact(10)),
            ],
        )
        ok, witness = hybrid_atomic_consistent(h)
        assert not ok and witness is None

    def test_witness_scenario_is_atomic_and_refines_input(self):
        h = HybridNetwork.build(
            ["x", "y", "z"],
            allen_constraints=[("x", R("{b,m}"), "y"), ("y", R("{b,m,o}"), "z")],
        )
        ok, witness = hybrid_atomic_consistent(h)
        assert ok
        closed = hybrid_close(h)
        ids = witness.intervals
        for i, a in enumerate(ids):
            for b in ids[i + 1:]:
                assert witness.relation(a, b).is_atomic
                assert witness.relation(a, b) <= closed.relation(a, b)


class TestRestriction:
    def test_restricted_drops_interval_and_its_constraints(self):
        h = HybridNetwork.build(
            ["a", "b", "c"],
            allen_constraints=[("a", R("{b}"), "b"), ("b", R("{b}"), "c")],
            metric_constraints=[("a.end", "b.start", BoundWindow.exact(5))],
        )
        cut = h.restricted(["a", "c"])
        assert cut.intervals == ("a", "c")
        assert cut.relation("a", "c") == FULL
        closed = hybrid_close(cut)
        assert closed.point_window("a.end", "c.start") == BoundWindow(None, None)
