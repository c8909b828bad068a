"""
Qualitative interval reasoning from the ground up: relations, composition,
and path-consistency closure on a small constraint network.
"""

from chronotext import QCN, Relation, atomic_consistent, close, format_qcn

# Thirteen base relations; a Relation is any subset of them.
before = Relation.parse("{b}")
during_or_finishes = Relation.parse("{d,f}")
print("converse of", during_or_finishes, "is", during_or_finishes.converse())
print("composition {m};{m} =", Relation.parse("{m}").compose(Relation.parse("{m}")))

# The opening of a hotdish: garlic is minced strictly before browning,
# the pasta is prepared alongside it, and everything lands in one pan.
net = QCN.build(
    ["mince_garlic", "brown", "prepare_pasta", "combine"],
    [
        ("mince_garlic", before, "brown"),
        ("prepare_pasta", during_or_finishes, "brown"),
        ("combine", Relation.parse("{bi,mi}"), "prepare_pasta"),
        ("combine", Relation.parse("{bi,mi}"), "brown"),
    ],
)

closed = close(net)
print()
print(format_qcn(closed))
print("consistent:", not closed.inconsistent)

# Closure tightens cells but can leave disjunctions; a full scenario
# commits every pair to a single base relation.
ok, scenario = atomic_consistent(net)
print()
print("one concrete ordering of the whole preparation:")
print(format_qcn(scenario))
