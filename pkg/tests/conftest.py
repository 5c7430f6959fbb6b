import pytest

from tabletalk.spatial import Box
from tabletalk.world import Location, WorldObject, WorldState

COLORS = {
    "red": (1.0, 0.0, 0.0),
    "blue": (0.0, 0.0, 1.0),
    "green": (0.0, 1.0, 0.0),
    "yellow": (1.0, 1.0, 0.0),
    "purple": (0.6, 0.0, 0.8),
    "brown": (0.45, 0.25, 0.1),
}
SHAPES = {
    "cylinder": (1.0, 0.0, 0.0, 0.0),
    "triangle": (0.0, 1.0, 0.0, 0.0),
    "block": (0.0, 0.0, 1.0, 0.0),
    "sphere": (0.0, 0.0, 0.0, 1.0),
    "steak": (0.5, 0.0, 0.5, 0.3),
}
SIZES = {"large": 1.0, "small": 0.2}


def make_object(oid, x=0.0, y=0.3, z=0.1, extent=(0.1, 0.1, 0.2),
                color="red", shape="cylinder", size="large", state=()):
    return WorldObject(
        id=oid,
        position=(x, y, z),
        extent=extent,
        features={
            "color": COLORS[color],
            "size": (SIZES[size],),
            "shape": SHAPES[shape],
        },
        sim_state=frozenset(state),
    )


def standard_locations():
    return {
        "table": Location("table", Box((-0.6, 0.15, -0.02), (0.6, 0.75, 0.0))),
        "pantry": Location("pantry", Box((-1.1, 0.1, 0.0), (-0.7, 0.6, 0.4)),
                           frozenset({"closed"})),
        "garbage": Location("garbage", Box((-1.1, -0.5, 0.0), (-0.7, 0.0, 0.4)),
                            frozenset({"open"})),
        "stove": Location("stove", Box((0.7, 0.1, 0.0), (1.1, 0.6, 0.05)),
                          frozenset({"off", "closed"})),
    }


def make_world(objects):
    return WorldState(
        objects={o.id: o for o in objects},
        locations=standard_locations(),
    )


@pytest.fixture
def two_object_world():
    return make_world([
        make_object("red-cyl", x=-0.2, y=0.3, z=0.1),
        make_object("blue-tri", x=0.2, y=0.3, z=0.05, extent=(0.1, 0.1, 0.1),
                    color="blue", shape="triangle", size="small"),
    ])
