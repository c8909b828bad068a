"""Parse a recipe script, encode it as a hybrid network, ask questions."""

from pathlib import Path

from chronotext import (
    encode_recipe, format_hybrid, hybrid_close, parse_recipe_dsl,
    phenomena_coverage, start_of,
)

source = (Path(__file__).resolve().parent.parent / "fixtures" / "lutheran.rcp").read_text()
print(source)

recipe = parse_recipe_dsl(source)
print("phenomena:", ", ".join(sorted(t.value for t in phenomena_coverage(recipe))))
print()

# One network per scenario; this recipe has no alternatives, so there is
# exactly one, labelled "base".
(label, network), = encode_recipe(recipe)
closed = hybrid_close(network)
print(f"scenario {label} consistent:", not closed.inconsistent)

# Qualitative questions read straight off the closed matrix.
print("garlic vs pasta:", closed.relation("mince_garlic", "prepare_pasta"))
print("combine vs pasta:", closed.relation("combine", "prepare_pasta"))
print("cover removal vs bake:", closed.relation("remove_cover", "bake"))

# Metric ones come from the point network underneath.
print("bake duration:", closed.duration_window("bake"))
print("uncovered time:", closed.duration_window("remove_cover.timer"))
print("pasta start lag:",
      closed.point_window(start_of("brown"), start_of("prepare_pasta")))

print()
print(format_hybrid(closed))
