"""
Interval relations with qualitative duration comparisons.

A plain Allen constraint says nothing about how long the two intervals
are relative to each other; pairing each base relation with a duration
sign (<, =, >) fixes that, at the price of a validity rule: whatever is
strictly inside another interval is also strictly shorter.
"""

from chronotext import (
    BaseRelation, INDUAtom, INDUNetwork, INDURelation, Relation, indu_close,
    project_allen, valid_atoms,
)

print(len(valid_atoms()), "valid atoms out of 13 x 3 combinations")
print("is d^> allowed?", INDUAtom(BaseRelation.d, ">").valid)

# A fixed-length helper interval turns a qualitative algebra into a poor
# man's metric one: relate 'bake' to a literal 'one hour' with sign =.
any_equal = INDURelation.of(*[(a, "=") for a in BaseRelation
                              if INDUAtom(a, "=").valid])
net = INDUNetwork.build(
    ["remove_cover", "fifteen_minutes", "bake", "one_hour"],
    [
        ("bake", any_equal, "one_hour"),
        # the cover comes off at the start of a 15-minute timer that
        # finishes exactly when the bake does
        ("remove_cover", INDURelation.of(("s", "<")), "fifteen_minutes"),
        ("fifteen_minutes", INDURelation.of(("f", "<")), "bake"),
    ],
)
closed = indu_close(net)
print("consistent:", not closed.inconsistent)
print("remove_cover vs bake:",
      ", ".join(str(a) for a in closed.cell("remove_cover", "bake")))

# Dropping the signs recovers the underlying Allen network.
qcn = project_allen(closed)
print("projected cell:", qcn.cell("remove_cover", "bake"))
