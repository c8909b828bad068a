"""Render a recipe as an operational flow graph in Graphviz dot."""

from pathlib import Path

from chronotext import emit_dot, parse_recipe_dsl, recipe_workflow

root = Path(__file__).resolve().parent.parent

# A single-scenario recipe: parallel prep work shows up as a band of
# actions between an and-split and an and-join.
hotdish = parse_recipe_dsl((root / "fixtures" / "lutheran.rcp").read_text())
print(emit_dot(recipe_workflow(hotdish)))

# Alternatives become exclusive splits, sporadic actions become loops
# whose body pairs the action with a no-op (you may stir, or not, at
# any pass).
relish = parse_recipe_dsl((root / "fixtures" / "hot_relish.rcp").read_text())
graph = recipe_workflow(relish)
print(emit_dot(graph))

kinds = sorted({n.kind for n in graph.nodes})
print("// node kinds used:", ", ".join(kinds))
