"""Spatial relations as conjunctions of primitive literals.

Shows a preposition learned from one demonstrated pair, relation
extraction over a scene, and the pose solver that places objects.
"""

from tabletalk.spatial import (
    Box, SpatialStore, builtin_compositions, canonical_pose,
)

store = SpatialStore()
for comp in builtin_compositions():
    store.add(comp)

boxes = {
    "cup": Box.from_center((0.3, 0.0, 0.05), (0.1, 0.1, 0.1)),
    "plate": Box.from_center((0.0, 0.0, 0.05), (0.1, 0.1, 0.1)),
    "tray": Box((-0.5, -0.5, -0.05), (0.5, 0.5, 0.0)),
}

print("Demonstrate 'right' with the cup right of the plate:")
comp = store.learn_from_example("right", "cup", "plate", boxes)
for lit in comp.literals:
    print("  literal:", lit.kind, lit.axis or "", lit.value or "")

print("\nholds('right', cup, plate):",
      store.holds("right", "cup", "plate", boxes))
print("holds('right', plate, cup):",
      store.holds("right", "plate", "cup", boxes))

print("\nAll relations in the scene:")
for triple in sorted(store.extract_relations(boxes)):
    print("  ", triple)

print("\nSolve a pose: put a small box right of the plate, avoiding the cup.")
pose = canonical_pose(
    store.get("right"), boxes["plate"], (0.1, 0.1, 0.1),
    [boxes["cup"]], hover=(0.0, 0.0, 0.5),
    bounds=Box((-1.0, -1.0, 0.0), (1.0, 1.0, 0.6)),
)
print("  pose:", pose)
ghost = Box.from_center(pose, (0.1, 0.1, 0.1))
print("  satisfies the relation:", store.get("right").holds_boxes(ghost, boxes["plate"]))
print("  clear of the cup:", not ghost.overlaps(boxes["cup"]))
