"""
Adapting a recipe to an ingredient substitution by revision.

Swapping canned kidney beans for dry lentils invalidates one action
(the beans no longer need draining) and requires new ones (lentils
must cook, then be drained, before joining the pot).  The domain
knowledge is injected as hard constraints; the recipe's own structure
is soft.  Revision keeps as much of the recipe as possible.
"""

from pathlib import Path

from chronotext import (
    adapt_recipe, format_edits, format_revision, parse_knowledge,
    parse_recipe_dsl,
)

root = Path(__file__).resolve().parent.parent
recipe_text = (root / "fixtures" / "lutheran.rcp").read_text()
recipe = parse_recipe_dsl(recipe_text)
knowledge = parse_knowledge((root / "fixtures" / "lentils.know").read_text())

print("knowledge:", knowledge.name)
print("removes:", ", ".join(knowledge.removals))
print("adds:", ", ".join(s.id for s in knowledge.steps))
print()

result, edits = adapt_recipe(recipe, knowledge)
print(format_revision(result))
print("new ordering honoured:",
      result.witness.relation("cook_lentils", "drain_lentils"))

print()
print("edits against the source text (byte offsets):")
print(format_edits(edits))

# Each span points into the original script; a delete keeps the text
# honest about the vanished action, inserts carry the new labels.
for e in edits:
    lo, hi = e.span
    print(f"  {e.op:12s} at {recipe_text[lo:hi].splitlines()[0]!r}")
