import itertools

import numpy as np
import pytest

from tabletalk.spatial import (
    Box, Literal, NoFreePose, NoLiteralHolds, SpatialComposition, SpatialStore,
    axis_aligned, axis_greater, builtin_compositions, canonical_pose,
    composition_from_example, contained_in, literal_holds, within_distance,
)


def box(cx, cy, cz, ex=0.1, ey=0.1, ez=0.1):
    return Box.from_center((cx, cy, cz), (ex, ey, ez))


# Independent geometric oracle used to check literal_holds: works straight
# off the corner coordinates, no shared helpers.
def oracle_on(a: Box, b: Box) -> bool:
    resting = abs(a.lo[2] - b.hi[2]) <= 0.01 + 1e-9
    x_olap = min(a.hi[0], b.hi[0]) > max(a.lo[0], b.lo[0])
    y_olap = min(a.hi[1], b.hi[1]) > max(a.lo[1], b.lo[1])
    return resting and x_olap and y_olap


def oracle_right_of(a: Box, b: Box) -> bool:
    return (a.lo[0] >= b.hi[0]
            and abs((a.lo[1] + a.hi[1]) / 2 - (b.lo[1] + b.hi[1]) / 2) <= 0.05
            and abs((a.lo[2] + a.hi[2]) / 2 - (b.lo[2] + b.hi[2]) / 2) <= 0.05)


RIGHT = SpatialComposition(
    "right", (axis_greater("x"), axis_aligned("y"), axis_aligned("z"))
)
ON = builtin_compositions()[0]


class TestLiterals:
    def test_box_rejects_degenerate_extent(self):
        with pytest.raises(ValueError):
            Box((0, 0, 0), (1, 0, 1))

    def test_on_matches_geometric_oracle(self):
        base = box(0, 0, 0.05, 0.3, 0.3, 0.1)
        cases = [
            box(0, 0, 0.15),          # resting atop
            box(0.05, 0.05, 0.15),    # offset but overlapping
            box(0.5, 0, 0.15),        # off to the side
            box(0, 0, 0.3),           # floating above
        ]
        for a in cases:
            assert ON.holds_boxes(a, base) == oracle_on(a, base)

    def test_right_of_matches_geometric_oracle(self):
        b = box(0, 0, 0.1)
        for dx in (-0.3, 0.0, 0.11, 0.3):
            for dy in (0.0, 0.2):
                a = box(dx, dy, 0.1)
                assert RIGHT.holds_boxes(a, b) == oracle_right_of(a, b)

    def test_right_of_false_when_left(self):
        a = box(-0.3, 0, 0.1)
        b = box(0, 0, 0.1)
        assert not RIGHT.holds_boxes(a, b)

    def test_contained_in(self):
        region = Box((0, 0, 0), (1, 1, 1))
        assert literal_holds(contained_in(), box(0.5, 0.5, 0.5), region)
        assert not literal_holds(contained_in(), box(1.2, 0.5, 0.5), region)

    def test_distance_literals(self):
        a = box(0, 0, 0)
        b = box(0.3, 0, 0)
        assert literal_holds(within_distance(0.31), a, b)
        assert not literal_holds(within_distance(0.29), a, b)
        assert literal_holds(Literal("beyond-distance", value=0.29), a, b)

    def test_tolerances_must_be_positive(self):
        with pytest.raises(ValueError):
            Literal("axis-aligned", axis="x", value=0.0)
        with pytest.raises(ValueError):
            Literal("within-distance", value=-1.0)


class TestLearning:
    def test_demonstrated_right_yields_axis_literals(self):
        # Enumeration oracle: check every learnable literal by hand.
        a = box(0.3, 0.0, 0.1)
        b = box(0.0, 0.0, 0.1)
        comp = composition_from_example("right", a, b)
        expected = {
            ("axis-greater", "x", None),
            ("axis-aligned", "y", 0.05),
            ("axis-aligned", "z", 0.05),
        }
        got = {(l.kind, l.axis, l.value) for l in comp.literals}
        assert got == expected

    def test_coincident_boxes_have_no_literal(self):
        a = box(0, 0, 0.1)
        with pytest.raises(NoLiteralHolds):
            composition_from_example("x", a, box(0, 0, 0.1))

    def test_learned_composition_holds_on_its_own_demo(self):
        a = box(0.0, 0.4, 0.1)
        b = box(0.0, 0.0, 0.1)
        comp = composition_from_example("behind", a, b)
        assert comp.holds_boxes(a, b)

    def test_second_demo_intersects_literals(self):
        store = SpatialStore()
        boxes = {"a": box(0.3, 0.0, 0.1), "b": box(0.0, 0.0, 0.1)}
        store.learn_from_example("right", "a", "b", boxes)
        # Second demo breaks the z alignment; only shared literals survive.
        boxes2 = {"a": box(0.3, 0.0, 0.4), "b": box(0.0, 0.0, 0.1)}
        comp = store.learn_from_example("right", "a", "b", boxes2)
        kinds = {(l.kind, l.axis) for l in comp.literals}
        assert ("axis-aligned", "z") not in kinds
        assert ("axis-greater", "x") in kinds

    def test_identity_pair_rejected(self):
        store = SpatialStore()
        with pytest.raises(ValueError):
            store.learn_from_example("right", "a", "a", {"a": box(0, 0, 0)})


class TestExtraction:
    def test_extract_equals_pairwise_holds_closure(self):
        store = SpatialStore()
        for comp in builtin_compositions():
            store.add(comp)
        store.add(RIGHT)
        boxes = {
            "a": box(0.0, 0.0, 0.05),
            "b": box(0.2, 0.0, 0.05),
            "c": box(0.2, 0.0, 0.15),
            "slab": Box((-0.5, -0.5, -0.1), (0.5, 0.5, 0.0)),
        }
        got = store.extract_relations(boxes)
        # Brute-force closure is the oracle.
        expected = set()
        for cid in store.ids():
            for a, b in itertools.permutations(boxes, 2):
                if store.get(cid).holds_boxes(boxes[a], boxes[b]):
                    expected.add((cid, a, b))
        assert got == expected
        assert ("on", "c", "b") in got

    def test_empty_world(self):
        store = SpatialStore()
        store.add(RIGHT)
        assert store.extract_relations({}) == set()

    def test_holds_requires_known_entities(self):
        store = SpatialStore()
        store.add(RIGHT)
        with pytest.raises(KeyError):
            store.holds("right", "a", "b", {"a": box(0, 0, 0)})
        with pytest.raises(ValueError):
            store.holds("right", "a", "a", {"a": box(0, 0, 0)})


WORKSPACE = Box((-1.25, -0.6, 0.0), (1.25, 1.0, 0.6))


class TestCanonicalPose:
    def test_on_empty_table_is_table_centroid(self):
        table = Box((-0.6, 0.15, -0.02), (0.6, 0.75, 0.0))
        hover = (table.center[0], table.center[1], 0.5)
        pose = canonical_pose(ON, table, (0.1, 0.1, 0.2), [], hover, WORKSPACE)
        assert pose[0] == pytest.approx(0.0, abs=1e-6)
        assert pose[1] == pytest.approx(0.45, abs=1e-6)

    def test_right_of_is_minimal_offset_and_sound(self):
        b = box(0.0, 0.3, 0.1)
        hover = (0.0, 0.3, 0.5)
        pose = canonical_pose(RIGHT, b, (0.1, 0.1, 0.2), [], hover, WORKSPACE)
        ghost = Box.from_center(pose, (0.1, 0.1, 0.2))
        assert RIGHT.holds_boxes(ghost, b)
        # Grid-search oracle: no satisfying lattice pose sits closer to hover.
        d = np.linalg.norm(np.array(pose) - np.array(hover))
        for x in np.arange(-1.2, 1.2, 0.05):
            for z in (0.1, 0.15):
                cand = Box.from_center((x, 0.3, z), (0.1, 0.1, 0.2))
                if RIGHT.holds_boxes(cand, b):
                    dist = np.linalg.norm(np.array((x, 0.3, z)) - np.array(hover))
                    assert dist >= d - 1e-6

    def test_avoids_obstacles(self):
        b = box(0.0, 0.3, 0.1)
        blocker = box(0.15, 0.3, 0.1)  # sits right where the minimal pose was
        hover = (0.0, 0.3, 0.5)
        pose = canonical_pose(RIGHT, b, (0.1, 0.1, 0.2), [blocker], hover,
                              WORKSPACE)
        ghost = Box.from_center(pose, (0.1, 0.1, 0.2))
        assert RIGHT.holds_boxes(ghost, b)
        assert not ghost.overlaps(blocker)

    def test_fully_occupied_raises(self):
        region = Box((0.0, 0.0, 0.0), (0.1, 0.1, 0.1))
        comp = SpatialComposition("in", (contained_in(),))
        blocker = Box((-0.05, -0.05, -0.05), (0.15, 0.15, 0.15))
        with pytest.raises(NoFreePose):
            canonical_pose(comp, region, (0.08, 0.08, 0.08), [blocker],
                           (0.05, 0.05, 0.5), WORKSPACE)

    def test_translation_invariance_of_holds(self):
        a = box(0.2, 0.1, 0.1)
        b = box(0.0, 0.1, 0.1)
        shift = np.array([0.3, -0.2, 0.1])
        a2 = Box(tuple(np.array(a.lo) + shift), tuple(np.array(a.hi) + shift))
        b2 = Box(tuple(np.array(b.lo) + shift), tuple(np.array(b.hi) + shift))
        for comp in (RIGHT, ON):
            assert comp.holds_boxes(a, b) == comp.holds_boxes(a2, b2)
