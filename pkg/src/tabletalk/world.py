"""Deterministic simulated tabletop.

Objects are axis-aligned boxes with color/size/shape feature vectors and
state flags; four named locations (pantry, garbage, table, stove) carry
simulated functionality. Primitive actions transform the state by value;
a stove that is on cooks whatever rests on it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Union

from tabletalk import spatial
from tabletalk.spatial import Box, NoFreePose, SpatialStore

LOCATION_NAMES = ("garbage", "pantry", "stove", "table")
DOOR_LOCATIONS = ("pantry", "garbage", "stove")  # carry one of open/closed
BURNER_LOCATIONS = ("stove",)                    # carry one of on/off

FEATURE_DIMS = {"color": 3, "size": 1, "shape": 4}

# Arm hover point: where a held object sits, above every location region.
ARM_HOVER = (0.0, 0.45, 0.5)
WORKSPACE = Box((-1.25, -0.6, 0.0), (1.25, 1.0, 0.6))

# An object rests on the stove when its bottom face is within 1 cm of the
# stove region top and its center lies over the region.
COOK_CONTACT_TOL = 0.01


class MalformedScenario(ValueError):
    def __init__(self, source, field):
        self.source = source
        self.field = field
        super().__init__(f"{source}: bad or missing field {field!r}")


class UnavailableAction(RuntimeError):
    def __init__(self, action, reason):
        self.action = action
        self.reason = reason
        super().__init__(f"{describe_action(action)}: {reason}")


@dataclass(frozen=True)
class WorldObject:
    id: str
    position: tuple[float, float, float]   # center of the bounding volume
    extent: tuple[float, float, float]
    features: Mapping[str, tuple[float, ...]]
    sim_state: frozenset[str] = frozenset()

    def __post_init__(self):
        if any(e <= 0 for e in self.extent):
            raise ValueError(f"{self.id}: bounding volume must have positive extent")
        if set(self.features) != set(FEATURE_DIMS):
            raise ValueError(f"{self.id}: features must be exactly color, size, shape")
        for attr, dim in FEATURE_DIMS.items():
            if len(self.features[attr]) != dim:
                raise ValueError(f"{self.id}: {attr} needs {dim} components")

    @property
    def box(self) -> Box:
        return Box.from_center(self.position, self.extent)


@dataclass(frozen=True)
class Location:
    name: str
    region: Box
    sim_state: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.name not in LOCATION_NAMES:
            raise ValueError(f"unknown location {self.name!r}")
        door = self.sim_state & {"open", "closed"}
        burner = self.sim_state & {"on", "off"}
        if self.name in DOOR_LOCATIONS:
            if len(door) != 1:
                raise ValueError(f"{self.name}: needs exactly one of open/closed")
        elif door:
            raise ValueError(f"{self.name}: carries no door flag")
        if self.name in BURNER_LOCATIONS:
            if len(burner) != 1:
                raise ValueError(f"{self.name}: needs exactly one of on/off")
        elif burner:
            raise ValueError(f"{self.name}: carries no burner flag")
        extra = self.sim_state - {"open", "closed", "on", "off"}
        if extra:
            raise ValueError(f"{self.name}: unknown flags {sorted(extra)}")

    @property
    def box(self) -> Box:
        return self.region


# Primitive actions.

@dataclass(frozen=True)
class PointTo:
    obj: str


@dataclass(frozen=True)
class PickUp:
    obj: str


@dataclass(frozen=True)
class PutDown:
    obj: str
    rel: str     # spatial composition id
    target: str  # object or location


@dataclass(frozen=True)
class Open:
    loc: str


@dataclass(frozen=True)
class Close:
    loc: str


@dataclass(frozen=True)
class TurnOn:
    loc: str


@dataclass(frozen=True)
class TurnOff:
    loc: str


PrimitiveAction = Union[PointTo, PickUp, PutDown, Open, Close, TurnOn, TurnOff]


def describe_action(action: PrimitiveAction) -> str:
    if isinstance(action, PointTo):
        return f"pointTo({action.obj})"
    if isinstance(action, PickUp):
        return f"pickUp({action.obj})"
    if isinstance(action, PutDown):
        return f"putDown({action.obj},{action.rel},{action.target})"
    if isinstance(action, Open):
        return f"open({action.loc})"
    if isinstance(action, Close):
        return f"close({action.loc})"
    if isinstance(action, TurnOn):
        return f"turnOn({action.loc})"
    if isinstance(action, TurnOff):
        return f"turnOff({action.loc})"
    raise TypeError(f"not an action: {action!r}")


def acted_on(action: PrimitiveAction) -> str:
    """The entity an action touches, for access recording."""
    if isinstance(action, (PointTo, PickUp, PutDown)):
        return action.obj
    return action.loc


@dataclass(frozen=True)
class WorldState:
    objects: Mapping[str, WorldObject]
    locations: Mapping[str, Location]
    arm: str | None = None   # id of the held object, or None when empty
    clock: int = 0

    def entity_box(self, key: str) -> Box:
        if key in self.objects:
            return self.objects[key].box
        if key in self.locations:
            return self.locations[key].region
        raise spatial.UnknownEntity(key)

    def boxes(self) -> dict[str, Box]:
        out = {oid: o.box for oid, o in self.objects.items()}
        out.update({name: l.region for name, l in self.locations.items()})
        return out

    def has_entity(self, key: str) -> bool:
        return key in self.objects or key in self.locations

    def flags(self, key: str) -> frozenset[str]:
        if key in self.objects:
            return self.objects[key].sim_state
        if key in self.locations:
            return self.locations[key].sim_state
        raise spatial.UnknownEntity(key)


@dataclass(frozen=True)
class PerceptEntry:
    id: str
    kind: str  # "object" | "location"
    features: Mapping[str, tuple[float, ...]]
    position: tuple[float, float, float]
    bounding_volume: Box
    sim_state: frozenset[str]


def percept_snapshot(state: WorldState) -> list[PerceptEntry]:
    """One entry per object and location, ordered by id. Pure read."""
    entries = []
    for oid in sorted(state.objects):
        obj = state.objects[oid]
        entries.append(
            PerceptEntry(oid, "object", dict(obj.features), obj.position,
                         obj.box, obj.sim_state)
        )
    for name in sorted(state.locations):
        loc = state.locations[name]
        entries.append(
            PerceptEntry(name, "location", {}, loc.region.center,
                         loc.region, loc.sim_state)
        )
    return sorted(entries, key=lambda e: e.id)


def resting_on_stove(obj: WorldObject, stove: Location) -> bool:
    box = obj.box
    top = stove.region.hi[2]
    if abs(box.lo[2] - top) > COOK_CONTACT_TOL + spatial.EPS:
        return False
    cx, cy, _ = box.center
    return (
        stove.region.lo[0] <= cx <= stove.region.hi[0]
        and stove.region.lo[1] <= cy <= stove.region.hi[1]
    )


def _apply_cooking(objects: dict[str, WorldObject],
                   locations: Mapping[str, Location]) -> dict[str, WorldObject]:
    stove = locations.get("stove")
    if stove is None or "on" not in stove.sim_state:
        return objects
    out = dict(objects)
    for oid, obj in objects.items():
        if "cooked" not in obj.sim_state and resting_on_stove(obj, stove):
            out[oid] = replace(obj, sim_state=obj.sim_state | {"cooked"})
    return out


def apply_action(state: WorldState, action: PrimitiveAction,
                 spatial_store: SpatialStore | None = None) -> WorldState:
    """Apply one primitive; returns a new state with the clock advanced.

    Raises UnavailableAction when the action's precondition fails, which
    signals the policy layer to re-plan or meshing to reject.
    """
    objects = dict(state.objects)
    locations = dict(state.locations)
    arm = state.arm

    if isinstance(action, PointTo):
        if action.obj not in objects and action.obj not in locations:
            raise UnavailableAction(action, "no such entity")

    elif isinstance(action, PickUp):
        if action.obj not in objects:
            raise UnavailableAction(action, "not a manipulable object")
        if arm is not None:
            raise UnavailableAction(action, f"arm is holding {arm}")
        objects[action.obj] = replace(objects[action.obj], position=ARM_HOVER)
        arm = action.obj

    elif isinstance(action, PutDown):
        if arm != action.obj:
            raise UnavailableAction(action, "arm is not holding that object")
        if not state.has_entity(action.target):
            raise UnavailableAction(action, "no such target")
        if action.target == action.obj:
            raise UnavailableAction(action, "cannot place relative to itself")
        if spatial_store is None or action.rel not in spatial_store:
            raise UnavailableAction(action, f"unknown relation {action.rel!r}")
        comp = spatial_store.get(action.rel)
        obj = objects[action.obj]
        obstacles = [o.box for oid, o in objects.items() if oid != action.obj]
        target_box = state.entity_box(action.target)
        # The arm hovers over the target before descending, so pose ties
        # break toward the spot right below it.
        hover = (target_box.center[0], target_box.center[1], ARM_HOVER[2])
        try:
            pose = spatial.canonical_pose(
                comp, target_box, obj.extent, obstacles, hover, WORKSPACE,
            )
        except NoFreePose as exc:
            raise UnavailableAction(action, f"no free pose: {exc}") from exc
        objects[action.obj] = replace(obj, position=pose)
        arm = None

    elif isinstance(action, (Open, Close)):
        loc = locations.get(action.loc)
        if loc is None or not (loc.sim_state & {"open", "closed"}):
            raise UnavailableAction(action, "nothing to open or close there")
        want, have = (("closed", "open") if isinstance(action, Open)
                      else ("open", "closed"))
        if want not in loc.sim_state:
            raise UnavailableAction(action, f"already {have}")
        locations[action.loc] = replace(
            loc, sim_state=(loc.sim_state - {want}) | {have}
        )

    elif isinstance(action, (TurnOn, TurnOff)):
        loc = locations.get(action.loc)
        if loc is None or not (loc.sim_state & {"on", "off"}):
            raise UnavailableAction(action, "no switch there")
        want, have = (("off", "on") if isinstance(action, TurnOn) else ("on", "off"))
        if want not in loc.sim_state:
            raise UnavailableAction(action, f"already {have}")
        locations[action.loc] = replace(
            loc, sim_state=(loc.sim_state - {want}) | {have}
        )

    else:
        raise TypeError(f"not an action: {action!r}")

    objects = _apply_cooking(objects, locations)
    return WorldState(objects, locations, arm, state.clock + 1)


# Scenario documents: canonical JSON, bit-exact on load -> save -> load.

def _require(doc, field, source):
    if field not in doc:
        raise MalformedScenario(source, field)
    return doc[field]


def _vec(doc, field, n, source):
    v = _require(doc, field, source)
    if not isinstance(v, list) or len(v) != n or not all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in v
    ):
        raise MalformedScenario(source, field)
    return tuple(float(x) for x in v)


def scenario_from_dict(doc: Mapping, source: str = "<scenario>") -> WorldState:
    objects: dict[str, WorldObject] = {}
    for entry in _require(doc, "objects", source):
        oid = _require(entry, "id", source)
        size = _require(entry, "size", source)
        if not isinstance(size, (int, float)) or isinstance(size, bool):
            raise MalformedScenario(source, "size")
        try:
            obj = WorldObject(
                id=oid,
                position=_vec(entry, "position", 3, source),
                extent=_vec(entry, "extent", 3, source),
                features={
                    "color": _vec(entry, "color", 3, source),
                    "size": (float(size),),
                    "shape": _vec(entry, "shape", 4, source),
                },
                sim_state=frozenset(entry.get("state", [])),
            )
        except ValueError as exc:
            raise MalformedScenario(source, str(exc)) from exc
        if oid in objects:
            raise MalformedScenario(source, f"duplicate object id {oid!r}")
        objects[oid] = obj
    locations: dict[str, Location] = {}
    for entry in _require(doc, "locations", source):
        name = _require(entry, "name", source)
        region = _require(entry, "region", source)
        if not isinstance(region, list) or len(region) != 6:
            raise MalformedScenario(source, "region")
        try:
            loc = Location(
                name=name,
                region=Box(tuple(map(float, region[:3])),
                           tuple(map(float, region[3:]))),
                sim_state=frozenset(entry.get("state", [])),
            )
        except ValueError as exc:
            raise MalformedScenario(source, str(exc)) from exc
        locations[name] = loc
    return WorldState(objects=objects, locations=locations, arm=None, clock=0)


def scenario_to_dict(state: WorldState) -> dict:
    return {
        "objects": [
            {
                "id": o.id,
                "position": list(o.position),
                "extent": list(o.extent),
                "color": list(o.features["color"]),
                "size": o.features["size"][0],
                "shape": list(o.features["shape"]),
                "state": sorted(o.sim_state),
            }
            for o in (state.objects[k] for k in sorted(state.objects))
        ],
        "locations": [
            {
                "name": l.name,
                "region": list(l.region.lo) + list(l.region.hi),
                "state": sorted(l.sim_state),
            }
            for l in (state.locations[k] for k in sorted(state.locations))
        ],
    }


def canonical_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_scenario(path: str | Path) -> WorldState:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedScenario(str(path), f"invalid document: {exc}") from exc
    return scenario_from_dict(doc, source=str(path))


def save_scenario(state: WorldState, path: str | Path) -> None:
    Path(path).write_text(canonical_json(scenario_to_dict(state)), encoding="utf-8")
