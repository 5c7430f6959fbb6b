"""Verb task knowledge: goal templates over argument slots, policies over
primitives, availability conditions, instantiation, execution, and the
schema learning that derives templates and argument defaults from paired
imperative/goal teaching.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from tabletalk import world as worldmod
from tabletalk.spatial import SpatialStore
from tabletalk.world import (
    Close, Open, PickUp, PutDown, TurnOn, UnavailableAction, WorldState,
)

log = logging.getLogger(__name__)

DOBJ = "direct-object"
PPOBJ = "pp-object"
REL = "spatial-relation"
INSTR = "instrument"
ROLES = (DOBJ, PPOBJ, REL, INSTR)

STEP_LIMIT = 32


class EmptyFiller(ValueError):
    pass


class StepLimitExceeded(RuntimeError):
    pass


class UnalignedGoal(ValueError):
    pass


def role_ref(role: str) -> str:
    return "$" + role


def is_role(term: str) -> bool:
    return term.startswith("$")


def role_of(term: str) -> str:
    return term[1:]


@dataclass(frozen=True)
class GoalAtom:
    """One goal conjunct: a spatial relation, a state flag, or a grasp."""

    kind: str                 # "rel" | "flag" | "held"
    a: str                    # subject term (role ref or entity id)
    b: str | None = None      # relation partner
    rel: str | None = None    # composition term (role ref or composition id)
    flag: str | None = None

    def roles(self) -> set[str]:
        out = set()
        for term in (self.a, self.b, self.rel):
            if term is not None and is_role(term):
                out.add(role_of(term))
        return out

    def ground(self, binding: Mapping[str, str]) -> "GoalAtom":
        def g(term):
            if term is not None and is_role(term):
                return binding[role_of(term)]
            return term
        return GoalAtom(self.kind, g(self.a), g(self.b), g(self.rel), self.flag)


def rel_atom(rel: str, a: str, b: str) -> GoalAtom:
    return GoalAtom("rel", a=a, b=b, rel=rel)


def flag_atom(flag: str, a: str) -> GoalAtom:
    return GoalAtom("flag", a=a, flag=flag)


def held_atom(a: str) -> GoalAtom:
    return GoalAtom("held", a=a)


@dataclass(frozen=True)
class TaskNetwork:
    """A verb's task concept: slots, goal template, policy, defaults."""

    verb: str
    slots: tuple[str, ...]
    goal: tuple[GoalAtom, ...]
    policy: str   # "pick-up" | "achieve-relations" | "open-door" | "close-door"
    defaults: tuple[tuple[str, str], ...] = ()

    def required_roles(self) -> list[str]:
        needed: set[str] = set()
        for atom in self.goal:
            needed |= atom.roles()
        return [r for r in ROLES if r in needed]

    def default_for(self, role: str) -> str | None:
        for r, v in self.defaults:
            if r == role:
                return v
        return None

    def pp_role(self) -> str:
        return INSTR if INSTR in self.slots else PPOBJ


@dataclass(frozen=True)
class TaskInstantiation:
    verb: str
    binding: Mapping[str, str]
    goal_instance: tuple[GoalAtom, ...]
    policy: str


@dataclass
class InstantiationSet:
    """Interpretations of one verb use; incomplete roles drive a goal query."""

    instances: list[TaskInstantiation]
    missing: list[str]


def builtin_networks() -> dict[str, TaskNetwork]:
    """Pre-encoded primitive verbs."""
    return {
        "pick": TaskNetwork(
            "pick", (DOBJ,), (held_atom(role_ref(DOBJ)),), "pick-up"
        ),
        "put": TaskNetwork(
            "put", (DOBJ, REL, PPOBJ),
            (rel_atom(role_ref(REL), role_ref(DOBJ), role_ref(PPOBJ)),),
            "achieve-relations",
        ),
        "open": TaskNetwork(
            "open", (DOBJ,), (flag_atom("open", role_ref(DOBJ)),), "open-door"
        ),
        "close": TaskNetwork(
            "close", (DOBJ,), (flag_atom("closed", role_ref(DOBJ)),), "close-door"
        ),
    }


def instantiate(net: TaskNetwork, fillers: Mapping[str, Iterable[str]],
                use_defaults: bool = True) -> InstantiationSet:
    """Cartesian product of filler sets over the template's roles.

    Roles absent from the fillers draw on the network defaults when allowed;
    otherwise they are reported as missing, which drives a goal-description
    query rather than an error.
    """
    pools: list[tuple[str, list[str]]] = []
    missing: list[str] = []
    for role in net.required_roles():
        if role in fillers:
            values = sorted(set(fillers[role]))
            if not values:
                raise EmptyFiller(role)
            pools.append((role, values))
            continue
        default = net.default_for(role) if use_defaults else None
        if default is not None:
            pools.append((role, [default]))
        else:
            missing.append(role)
    if missing:
        return InstantiationSet([], missing)
    instances = []
    for combo in itertools.product(*(vals for _, vals in pools)):
        binding = {role: value for (role, _), value in zip(pools, combo)}
        instances.append(
            TaskInstantiation(
                net.verb, binding,
                tuple(atom.ground(binding) for atom in net.goal),
                net.policy,
            )
        )
    return InstantiationSet(instances, [])


def goal_atom_holds(atom: GoalAtom, state: WorldState,
                    spatial_store: SpatialStore) -> bool:
    if atom.kind == "held":
        return state.arm == atom.a
    if atom.kind == "flag":
        return state.has_entity(atom.a) and atom.flag in state.flags(atom.a)
    if atom.kind == "rel":
        if not (state.has_entity(atom.a) and state.has_entity(atom.b)):
            return False
        if atom.a == atom.b or atom.rel not in spatial_store:
            return False
        return spatial_store.holds(atom.rel, atom.a, atom.b, state.boxes())
    raise ValueError(atom.kind)


def goal_holds(inst: TaskInstantiation, state: WorldState,
               spatial_store: SpatialStore) -> bool:
    return all(goal_atom_holds(a, state, spatial_store) for a in inst.goal_instance)


def _needs_stove(inst: TaskInstantiation) -> bool:
    return any(a.kind == "flag" and a.flag == "cooked" for a in inst.goal_instance)


def is_available(inst: TaskInstantiation, state: WorldState,
                 spatial_store: SpatialStore) -> bool:
    """Availability condition: executable in the current state."""
    b = inst.binding
    if inst.policy == "pick-up":
        return b[DOBJ] in state.objects and state.arm is None
    if inst.policy in ("open-door", "close-door"):
        want = "closed" if inst.policy == "open-door" else "open"
        return (
            b[DOBJ] in state.locations
            and want in state.locations[b[DOBJ]].sim_state
        )
    if inst.policy == "achieve-relations":
        dobj = b.get(DOBJ)
        if dobj not in state.objects:
            return False
        if state.arm not in (None, dobj):
            return False
        for atom in inst.goal_instance:
            if atom.kind == "rel":
                if atom.rel not in spatial_store:
                    return False
                if atom.a == atom.b or not state.has_entity(atom.b):
                    return False
            if atom.kind == "flag" and atom.flag == "cooked":
                if atom.a not in state.objects:
                    return False
        if _needs_stove(inst):
            # Cooking is afforded by the stove alone.
            partners = [a.b for a in inst.goal_instance if a.kind == "rel"]
            if "stove" not in partners:
                return False
        return True
    raise ValueError(f"unknown policy {inst.policy!r}")


def role_value_available(net: TaskNetwork, role: str, value: str,
                         state: WorldState, spatial_store: SpatialStore) -> bool:
    """Could `value` fill `role` in some currently available instantiation?

    Mirrors is_available without enumerating full bindings; the pair is
    cross-checked by tests.
    """
    if net.policy == "pick-up":
        return role == DOBJ and value in state.objects and state.arm is None
    if net.policy in ("open-door", "close-door"):
        want = "closed" if net.policy == "open-door" else "open"
        return (
            role == DOBJ
            and value in state.locations
            and want in state.locations[value].sim_state
        )
    if net.policy == "achieve-relations":
        if role == DOBJ:
            return value in state.objects and state.arm in (None, value)
        if role == REL:
            return value in spatial_store
        if role == INSTR and _net_cooks(net):
            return value == "stove"
        if role in (PPOBJ, INSTR):
            return state.has_entity(value)
        return False
    raise ValueError(f"unknown policy {net.policy!r}")


def _net_cooks(net: TaskNetwork) -> bool:
    return any(a.kind == "flag" and a.flag == "cooked" for a in net.goal)


def available_tasks(state: WorldState, networks: Mapping[str, TaskNetwork],
                    spatial_store: SpatialStore) -> list[TaskInstantiation]:
    """Every ground instantiation whose availability condition holds now."""
    entities = sorted(state.objects) + sorted(state.locations)
    out = []
    for verb in sorted(networks):
        net = networks[verb]
        pools = []
        for role in net.required_roles():
            if role == REL:
                pools.append((role, spatial_store.ids()))
            elif role == DOBJ and net.policy in ("open-door", "close-door"):
                pools.append((role, sorted(state.locations)))
            elif role == DOBJ:
                pools.append((role, sorted(state.objects)))
            else:
                pools.append((role, entities))
        for combo in itertools.product(*(vals for _, vals in pools)):
            binding = {role: value for (role, _), value in zip(pools, combo)}
            inst = TaskInstantiation(
                net.verb, binding,
                tuple(atom.ground(binding) for atom in net.goal),
                net.policy,
            )
            if is_available(inst, state, spatial_store):
                out.append(inst)
    return out


@dataclass
class ExecutionResult:
    state: WorldState
    trace: tuple
    status: str       # "achieved" | "failed"
    reason: str = ""


def _sorted_goal(inst: TaskInstantiation) -> list[GoalAtom]:
    # Establish spatial support before state flags (cooking needs the stove).
    return sorted(inst.goal_instance, key=lambda a: 0 if a.kind == "rel" else 1)


def _next_primitive(inst: TaskInstantiation, state: WorldState,
                    spatial_store: SpatialStore):
    if inst.policy == "pick-up":
        if state.arm is None:
            return PickUp(inst.binding[DOBJ])
        return None
    if inst.policy == "open-door":
        return Open(inst.binding[DOBJ])
    if inst.policy == "close-door":
        return Close(inst.binding[DOBJ])
    for atom in _sorted_goal(inst):
        if goal_atom_holds(atom, state, spatial_store):
            continue
        if atom.kind == "rel":
            if state.arm == atom.a:
                return PutDown(atom.a, atom.rel, atom.b)
            if state.arm is None:
                return PickUp(atom.a)
            return None
        if atom.kind == "flag" and atom.flag == "cooked":
            stove = state.locations.get("stove")
            if stove is None:
                return None
            obj = state.objects.get(atom.a)
            if obj is None:
                return None
            if not worldmod.resting_on_stove(obj, stove):
                if state.arm == atom.a:
                    return PutDown(atom.a, "on", "stove")
                if state.arm is None:
                    return PickUp(atom.a)
                return None
            if "off" in stove.sim_state:
                return TurnOn("stove")
            return None
        return None
    return None


def execute(inst: TaskInstantiation, state: WorldState,
            spatial_store: SpatialStore) -> ExecutionResult:
    """Run the policy until the goal instance holds or nothing applies."""
    trace = []
    for _ in range(STEP_LIMIT):
        if goal_holds(inst, state, spatial_store):
            return ExecutionResult(state, tuple(trace), "achieved")
        action = _next_primitive(inst, state, spatial_store)
        if action is None:
            return ExecutionResult(state, tuple(trace), "failed", "no primitive applies")
        try:
            state = worldmod.apply_action(state, action, spatial_store)
        except UnavailableAction as exc:
            return ExecutionResult(state, tuple(trace), "failed", str(exc))
        trace.append(action)
    raise StepLimitExceeded(inst.verb)


# Schema learning from paired imperative/goal teaching -----------------

@dataclass(frozen=True)
class TeachingArgs:
    """Ground argument structure of one sentence, after resolution."""

    dobj: str | None = None
    rel: str | None = None
    ppobj: str | None = None
    state: str | None = None


def learn_goal_schema(verb: str, imperative: TeachingArgs,
                      goal: TeachingArgs) -> TaskNetwork:
    """Build a verb's network by generalizing the goal against the imperative.

    Every ground term the imperative named becomes a role variable; terms
    appearing only in the goal stay as schema constants until a later
    contrasting example turns them into defaults.
    """
    if imperative.dobj is None or goal.dobj is None:
        raise UnalignedGoal(f"{verb}: imperative and goal need a theme object")
    if imperative.dobj not in (goal.dobj, goal.ppobj):
        raise UnalignedGoal(
            f"{verb}: goal does not mention the imperative's object"
        )
    has_flag = goal.state is not None
    pp_role = INSTR if (has_flag and goal.ppobj is not None) else PPOBJ

    def obj_term(value: str) -> str:
        if value == imperative.dobj:
            return role_ref(DOBJ)
        if imperative.ppobj is not None and value == imperative.ppobj:
            return role_ref(pp_role)
        return value

    atoms: list[GoalAtom] = []
    if goal.rel is not None and goal.ppobj is not None:
        rel_term = (
            role_ref(REL)
            if imperative.rel is not None and goal.rel == imperative.rel
            else goal.rel
        )
        atoms.append(rel_atom(rel_term, obj_term(goal.dobj), obj_term(goal.ppobj)))
    if has_flag:
        atoms.append(flag_atom(goal.state, obj_term(goal.dobj)))
    if not atoms:
        raise UnalignedGoal(f"{verb}: goal describes nothing to achieve")

    roles: set[str] = set()
    for atom in atoms:
        roles |= atom.roles()
    slots = tuple(r for r in ROLES if r in roles)
    return TaskNetwork(verb, slots, tuple(atoms), "achieve-relations")


def defaults_from_contrast(net: TaskNetwork, imperative: TeachingArgs,
                           goal: TeachingArgs) -> list[tuple[str, str]]:
    """Default (role, value) pairs: roles the short alternation left out
    whose values the goal description supplies."""
    supplied = {
        REL: imperative.rel,
        net.pp_role(): imperative.ppobj,
    }
    available = {REL: goal.rel, net.pp_role(): goal.ppobj}
    out = []
    for role in net.required_roles():
        if role == DOBJ:
            continue
        if supplied.get(role) is None and available.get(role) is not None:
            out.append((role, available[role]))
    return out


def augment_default(net: TaskNetwork, role: str, value: str) -> TaskNetwork:
    """Record a default filler for an unexpressed role; idempotent."""
    current = net.default_for(role)
    if current == value:
        return net
    if current is not None:
        log.warning(
            "%s: replacing default %s=%s with %s", net.verb, role, current, value
        )
    defaults = tuple((r, v) for r, v in net.defaults if r != role) + ((role, value),)
    return replace(net, defaults=defaults)


# Serialization into the lexicon file --------------------------------

def atom_to_dict(atom: GoalAtom) -> dict:
    d: dict = {"kind": atom.kind, "a": atom.a}
    if atom.b is not None:
        d["b"] = atom.b
    if atom.rel is not None:
        d["rel"] = atom.rel
    if atom.flag is not None:
        d["flag"] = atom.flag
    return d


def atom_from_dict(d: Mapping) -> GoalAtom:
    return GoalAtom(d["kind"], d["a"], d.get("b"), d.get("rel"), d.get("flag"))


def network_to_dict(net: TaskNetwork) -> dict:
    return {
        "verb": net.verb,
        "slots": list(net.slots),
        "goal": [atom_to_dict(a) for a in net.goal],
        "policy": net.policy,
        "defaults": {r: v for r, v in net.defaults},
    }


def network_from_dict(d: Mapping) -> TaskNetwork:
    return TaskNetwork(
        d["verb"],
        tuple(d["slots"]),
        tuple(atom_from_dict(a) for a in d["goal"]),
        d["policy"],
        tuple(sorted(d.get("defaults", {}).items())),
    )
