import pytest

from conftest import make_object, make_world
from tabletalk.spatial import SpatialComposition, SpatialStore, \
    axis_aligned, axis_greater, builtin_compositions
from tabletalk.tasks import (
    DOBJ, EmptyFiller, INSTR, PPOBJ, REL, TaskNetwork, TeachingArgs,
    UnalignedGoal, augment_default, available_tasks, builtin_networks,
    defaults_from_contrast, execute, flag_atom, goal_holds, instantiate,
    is_available, learn_goal_schema, network_from_dict, network_to_dict,
    rel_atom, role_ref, role_value_available,
)
from tabletalk.world import PickUp, PutDown, TurnOn, describe_action


def store():
    s = SpatialStore()
    for comp in builtin_compositions():
        s.add(comp)
    s.add(SpatialComposition(
        "right", (axis_greater("x"), axis_aligned("y"), axis_aligned("z"))
    ))
    return s


def move_network():
    return TaskNetwork(
        "move", (DOBJ, PPOBJ, REL),
        (rel_atom(role_ref(REL), role_ref(DOBJ), role_ref(PPOBJ)),),
        "achieve-relations",
    )


class TestInstantiate:
    def test_single_combination(self):
        net = move_network()
        out = instantiate(net, {DOBJ: {"a"}, PPOBJ: {"b"}, REL: {"right"}})
        assert len(out.instances) == 1
        inst = out.instances[0]
        assert inst.goal_instance[0].rel == "right"
        assert inst.goal_instance[0].a == "a"
        assert inst.goal_instance[0].b == "b"

    def test_cartesian_product_cardinality(self):
        net = move_network()
        out = instantiate(net, {DOBJ: {"a", "b"}, PPOBJ: {"c", "d"},
                                REL: {"right"}})
        assert len(out.instances) == 4

    def test_missing_role_with_default(self):
        net = augment_default(move_network(), REL, "on")
        out = instantiate(net, {DOBJ: {"a"}, PPOBJ: {"table"}})
        assert not out.missing
        assert out.instances[0].goal_instance[0].rel == "on"

    def test_missing_role_without_default(self):
        out = instantiate(move_network(), {DOBJ: {"a"}, PPOBJ: {"table"}})
        assert out.missing == [REL]
        assert out.instances == []

    def test_defaults_disabled(self):
        net = augment_default(move_network(), REL, "on")
        out = instantiate(net, {DOBJ: {"a"}, PPOBJ: {"table"}},
                          use_defaults=False)
        assert out.missing == [REL]

    def test_empty_filler_raises(self):
        with pytest.raises(EmptyFiller):
            instantiate(move_network(), {DOBJ: set(), PPOBJ: {"b"},
                                         REL: {"right"}})


class TestAvailability:
    def test_open_binds_closed_door_locations_only(self, two_object_world):
        nets = {"open": builtin_networks()["open"]}
        insts = available_tasks(two_object_world, nets, store())
        assert sorted(i.binding[DOBJ] for i in insts) == ["pantry", "stove"]

    def test_no_pick_when_arm_full(self, two_object_world):
        from tabletalk.world import apply_action
        held = apply_action(two_object_world, PickUp("red-cyl"))
        nets = {"pick": builtin_networks()["pick"]}
        assert available_tasks(held, nets, store()) == []

    def test_empty_world(self):
        from tabletalk.world import WorldState
        empty = WorldState(objects={}, locations={})
        assert available_tasks(empty, builtin_networks(), store()) == []

    def test_role_query_agrees_with_enumeration(self, two_object_world):
        st = store()
        nets = builtin_networks()
        nets["move"] = move_network()
        insts = available_tasks(two_object_world, nets, st)
        for verb, net in nets.items():
            occurring = {
                (role, value)
                for inst in insts if inst.verb == verb
                for role, value in inst.binding.items()
            }
            for role in net.required_roles():
                domain = (list(two_object_world.objects)
                          + list(two_object_world.locations) + st.ids())
                for value in domain:
                    fast = role_value_available(net, role, value,
                                                two_object_world, st)
                    slow = (role, value) in occurring
                    assert fast == slow, (verb, role, value)


class TestExecute:
    def test_move_trace(self, two_object_world):
        st = store()
        net = move_network()
        inst = instantiate(net, {DOBJ: {"red-cyl"}, PPOBJ: {"blue-tri"},
                                 REL: {"right"}}).instances[0]
        assert is_available(inst, two_object_world, st)
        result = execute(inst, two_object_world, st)
        assert result.status == "achieved"
        assert [describe_action(a) for a in result.trace] == [
            "pickUp(red-cyl)",
            "putDown(red-cyl,right,blue-tri)",
        ]
        # Independent goal check against the final state.
        assert goal_holds(inst, result.state, st)

    def test_goal_already_true_empty_trace(self, two_object_world):
        st = store()
        net = move_network()
        inst = instantiate(net, {DOBJ: {"red-cyl"}, PPOBJ: {"table"},
                                 REL: {"on"}}).instances[0]
        assert goal_holds(inst, two_object_world, st)
        result = execute(inst, two_object_world, st)
        assert result.status == "achieved"
        assert result.trace == ()

    def test_blocked_target_fails(self):
        st = store()
        # The pantry interior is walled off by a slab that fills it.
        blocker = make_object("slab", x=-0.9, y=0.35, z=0.2,
                              extent=(0.398, 0.498, 0.398), color="brown",
                              shape="block")
        mover = make_object("red-cyl", x=0.0, y=0.3, z=0.1)
        world = make_world([blocker, mover])
        net = move_network()
        inst = instantiate(net, {DOBJ: {"red-cyl"}, PPOBJ: {"pantry"},
                                 REL: {"in"}}).instances[0]
        result = execute(inst, world, st)
        assert result.status == "failed"

    def test_cook_policy(self, two_object_world):
        st = store()
        net = TaskNetwork(
            "cook", (DOBJ, REL, INSTR),
            (rel_atom(role_ref(REL), role_ref(DOBJ), role_ref(INSTR)),
             flag_atom("cooked", role_ref(DOBJ))),
            "achieve-relations",
        )
        inst = instantiate(net, {DOBJ: {"red-cyl"}, INSTR: {"stove"},
                                 REL: {"on"}}).instances[0]
        result = execute(inst, two_object_world, st)
        assert result.status == "achieved"
        kinds = [type(a) for a in result.trace]
        assert kinds == [PickUp, PutDown, TurnOn]
        assert "cooked" in result.state.objects["red-cyl"].sim_state

    def test_cook_requires_stove_instrument(self, two_object_world):
        net = TaskNetwork(
            "cook", (DOBJ, REL, INSTR),
            (rel_atom(role_ref(REL), role_ref(DOBJ), role_ref(INSTR)),
             flag_atom("cooked", role_ref(DOBJ))),
            "achieve-relations",
        )
        inst = instantiate(net, {DOBJ: {"red-cyl"}, INSTR: {"pantry"},
                                 REL: {"in"}}).instances[0]
        assert not is_available(inst, two_object_world, store())


class TestSchemaLearning:
    def test_fully_variabilized_schema(self):
        imp = TeachingArgs(dobj="green-block", rel="right", ppobj="table")
        goal = TeachingArgs(dobj="green-block", rel="right", ppobj="table")
        net = learn_goal_schema("move", imp, goal)
        atom = net.goal[0]
        assert atom.rel == role_ref(REL)
        assert atom.a == role_ref(DOBJ)
        assert atom.b == role_ref(PPOBJ)
        assert net.defaults == ()

    def test_goal_only_terms_stay_constant(self):
        imp = TeachingArgs(dobj="red-cyl")
        goal = TeachingArgs(dobj="red-cyl", rel="in", ppobj="pantry")
        net = learn_goal_schema("store", imp, goal)
        atom = net.goal[0]
        assert atom.rel == "in"
        assert atom.b == "pantry"
        assert atom.a == role_ref(DOBJ)

    def test_instrument_role_for_state_goals(self):
        imp = TeachingArgs(dobj="steak", rel="on", ppobj="stove")
        goal = TeachingArgs(dobj="steak", rel="on", ppobj="stove", state="cooked")
        net = learn_goal_schema("cook", imp, goal)
        assert INSTR in net.slots
        assert PPOBJ not in net.slots
        flags = [a for a in net.goal if a.kind == "flag"]
        assert flags and flags[0].flag == "cooked"

    def test_disjoint_objects_rejected(self):
        imp = TeachingArgs(dobj="red-cyl")
        goal = TeachingArgs(dobj="blue-tri", rel="on", ppobj="table")
        with pytest.raises(UnalignedGoal):
            learn_goal_schema("move", imp, goal)

    def test_schema_round_trip_reproduces_goal(self, two_object_world):
        imp = TeachingArgs(dobj="red-cyl", rel="right", ppobj="blue-tri")
        goal = TeachingArgs(dobj="red-cyl", rel="right", ppobj="blue-tri")
        net = learn_goal_schema("move", imp, goal)
        out = instantiate(net, {DOBJ: {"red-cyl"}, PPOBJ: {"blue-tri"},
                                REL: {"right"}})
        atom = out.instances[0].goal_instance[0]
        assert (atom.rel, atom.a, atom.b) == ("right", "red-cyl", "blue-tri")


class TestDefaults:
    def test_contrast_supplies_missing_roles(self):
        net = move_network()
        imp = TeachingArgs(dobj="green-block", ppobj="table")
        goal = TeachingArgs(dobj="green-block", rel="on", ppobj="table")
        assert defaults_from_contrast(net, imp, goal) == [(REL, "on")]

    def test_augment_idempotent(self):
        net = augment_default(move_network(), REL, "on")
        again = augment_default(net, REL, "on")
        assert again == net

    def test_augment_overwrites_with_warning(self, caplog):
        net = augment_default(move_network(), REL, "on")
        import logging
        with caplog.at_level(logging.WARNING):
            net2 = augment_default(net, REL, "in")
        assert net2.default_for(REL) == "in"
        assert any("replacing default" in r.message for r in caplog.records)

    def test_serialization_round_trip(self):
        net = augment_default(move_network(), REL, "on")
        assert network_from_dict(network_to_dict(net)) == net
