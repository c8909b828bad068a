"""Metric reasoning over time points: windows, shortest paths, disjunctions."""

from fractions import Fraction

from chronotext import (
    BoundWindow, MetricConstraint, STP, TCSP, end_of, format_stp,
    metric_to_allen, start_of, stp_close, tcsp_consistent,
)

# "simmer 2-3 hours" pins the length of one interval to a window.
stp = STP.build(
    [start_of("simmer"), end_of("simmer"), start_of("serve"), end_of("serve")],
    [
        (start_of("simmer"), end_of("simmer"), BoundWindow.closed(120, 180)),
        (start_of("serve"), end_of("serve"), BoundWindow.closed(10, 15)),
        # serving begins 5 to 20 minutes after the simmering ends
        (end_of("simmer"), start_of("serve"), BoundWindow.closed(5, 20)),
    ],
)
closed = stp_close(stp)
print(format_stp(closed))
print("serve starts", closed.window(start_of("simmer"), start_of("serve")),
      "minutes after the simmer starts")
print("implied interval relation:", metric_to_allen(closed, "simmer", "serve"))

# Windows go inconsistent the same way cycles go negative.
bad = STP.build(["x", "y", "z"], [
    ("x", "y", BoundWindow.exact(3)),
    ("y", "z", BoundWindow.exact(3)),
    ("x", "z", BoundWindow.closed(1, 2)),
])
print("\nover-constrained chain consistent?", not stp_close(bad).inconsistent)

# A disjunctive constraint: rest the dough either briefly or overnight.
tcsp = TCSP(
    points=("knead", "bake"),
    constraints=(MetricConstraint("knead", "bake", (
        BoundWindow.closed(20, 40),
        BoundWindow.closed(Fraction(600), Fraction(720)),
    )),),
)
ok, witness = tcsp_consistent(tcsp)
print("\ndisjunctive rest time satisfiable?", ok)
print("picked window:", witness.window("knead", "bake"))
