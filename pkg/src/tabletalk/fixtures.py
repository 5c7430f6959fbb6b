"""Shipped scenes, lexicons, corpus, and teaching scripts.

Builders return plain scenario/lexicon documents (the same schema the
data files carry) so experiments have a single deterministic source.
The scene ladder adds distractors of increasing perceptual ambiguity:
level 1 holds only the referenced objects, level 2 adds perceptually
distinct distractors, level 3 same-color different-shape ones, and
level 4 distractors sharing both color and shape, told apart by size
or position alone.
"""

from __future__ import annotations

from tabletalk import tasks as taskmod
from tabletalk.spatial import (
    SpatialComposition, axis_aligned, axis_greater, axis_less,
    composition_to_dict,
)
from tabletalk.tasks import DOBJ, PPOBJ, REL, TaskNetwork, rel_atom, role_ref

COLOR_VECTORS = {
    "red": [1.0, 0.0, 0.0],
    "blue": [0.0, 0.0, 1.0],
    "green": [0.0, 1.0, 0.0],
    "yellow": [1.0, 1.0, 0.0],
    "purple": [0.6, 0.0, 0.8],
    "brown": [0.45, 0.25, 0.1],
}
SHAPE_VECTORS = {
    "cylinder": [1.0, 0.0, 0.0, 0.0],
    "triangle": [0.0, 1.0, 0.0, 0.0],
    "block": [0.0, 0.0, 1.0, 0.0],
    "sphere": [0.0, 0.0, 0.0, 1.0],
    "steak": [0.5, 0.0, 0.5, 0.3],
}
SIZE_VECTORS = {"large": 1.0, "small": 0.2}

RIGHT = SpatialComposition(
    "right", (axis_greater("x"), axis_aligned("y"), axis_aligned("z"))
)
LEFT = SpatialComposition(
    "left", (axis_less("x"), axis_aligned("y"), axis_aligned("z"))
)


def _obj(oid, pos, extent, color, shape, size, state=()):
    return {
        "id": oid,
        "position": list(pos),
        "extent": list(extent),
        "color": COLOR_VECTORS[color],
        "size": SIZE_VECTORS[size],
        "shape": SHAPE_VECTORS[shape],
        "state": sorted(state),
        # authoring words, stripped before the document is finalized
        "_words": {"color": color, "shape": shape, "size": size},
    }


def _locations():
    return [
        {"name": "garbage", "region": [-1.1, -0.5, 0.0, -0.7, 0.0, 0.4],
         "state": ["open"]},
        {"name": "pantry", "region": [-1.1, 0.1, 0.0, -0.7, 0.6, 0.4],
         "state": ["closed"]},
        {"name": "stove", "region": [0.7, 0.1, 0.0, 1.1, 0.6, 0.05],
         "state": ["closed", "off"]},
        {"name": "table", "region": [-0.6, 0.15, -0.02, 0.6, 0.75, 0.0],
         "state": []},
    ]


def _scene(objects):
    words = {o["id"]: o.pop("_words") for o in objects}
    doc = {"objects": objects, "locations": _locations()}
    return doc, words


def two_object_scene():
    """Minimal scene: a large red cylinder and a blue triangle."""
    return _scene([
        _obj("red-cyl", (-0.2, 0.3, 0.1), (0.1, 0.1, 0.2),
             "red", "cylinder", "large"),
        _obj("blue-tri", (0.2, 0.3, 0.05), (0.1, 0.1, 0.1),
             "blue", "triangle", "small"),
    ])


def clarification_scene():
    """Four objects forcing the three-step identification ladder: two blue
    cylinders of equal size (one in the pantry), a blue block, a red one."""
    return _scene([
        _obj("blue-cyl-a", (-0.9, 0.35, 0.05), (0.1, 0.1, 0.1),
             "blue", "cylinder", "small"),
        _obj("blue-cyl-b", (0.1, 0.3, 0.05), (0.1, 0.1, 0.1),
             "blue", "cylinder", "small"),
        _obj("blue-block", (0.35, 0.3, 0.05), (0.1, 0.1, 0.1),
             "blue", "block", "small"),
        _obj("red-cyl", (-0.2, 0.3, 0.1), (0.1, 0.1, 0.2),
             "red", "cylinder", "large"),
    ])


def ambiguity_scene(level: int):
    """Scenes 1..4 of increasing perceptual ambiguity."""
    if level not in (1, 2, 3, 4):
        raise ValueError("ambiguity level must be 1..4")
    objects = [
        _obj("red-cyl", (-0.2, 0.30, 0.10), (0.1, 0.1, 0.2),
             "red", "cylinder", "large"),
        _obj("blue-tri", (-0.9, 0.35, 0.05), (0.1, 0.1, 0.1),
             "blue", "triangle", "small"),
        _obj("green-block", (-0.2, 0.55, 0.075), (0.15, 0.15, 0.15),
             "green", "block", "large"),
    ]
    if level == 2:
        objects += [
            _obj("dx-yellow-sphere", (-0.9, -0.25, 0.05), (0.1, 0.1, 0.1),
                 "yellow", "sphere", "small"),
            _obj("dx-brown-steak", (0.9, 0.35, 0.075), (0.15, 0.1, 0.05),
                 "brown", "steak", "small"),
            _obj("dx-purple-sphere", (0.45, 0.6, 0.05), (0.1, 0.1, 0.1),
                 "purple", "sphere", "small"),
        ]
    elif level == 3:
        objects += [
            _obj("dx-red-sphere", (-0.9, -0.25, 0.05), (0.1, 0.1, 0.1),
                 "red", "sphere", "small"),
            _obj("dx-blue-block", (0.9, 0.35, 0.1), (0.1, 0.1, 0.1),
                 "blue", "block", "small"),
            _obj("dx-green-tri", (0.45, 0.6, 0.05), (0.1, 0.1, 0.1),
                 "green", "triangle", "small"),
        ]
    elif level == 4:
        objects += [
            _obj("dx-red-cyl", (-0.9, -0.25, 0.05), (0.05, 0.05, 0.1),
                 "red", "cylinder", "small"),
            _obj("dx-blue-tri", (0.9, 0.35, 0.125), (0.15, 0.15, 0.15),
                 "blue", "triangle", "large"),
            _obj("dx-green-block", (-0.78, 0.2, 0.0375),
                 (0.075, 0.075, 0.075), "green", "block", "small"),
        ]
    return _scene(objects)


def task_scene():
    """Four objects for the verb alternation runs."""
    return _scene([
        _obj("red-cyl", (-0.3, 0.3, 0.1), (0.1, 0.1, 0.2),
             "red", "cylinder", "large"),
        _obj("blue-tri", (0.0, 0.3, 0.05), (0.1, 0.1, 0.1),
             "blue", "triangle", "small"),
        _obj("green-block", (0.3, 0.3, 0.075), (0.15, 0.15, 0.15),
             "green", "block", "large"),
        _obj("steak", (0.0, 0.55, 0.025), (0.15, 0.1, 0.05),
             "brown", "steak", "small"),
    ])


# Lexicons ---------------------------------------------------------------

def _move_network() -> TaskNetwork:
    net = TaskNetwork(
        "move", (DOBJ, PPOBJ, REL),
        (rel_atom(role_ref(REL), role_ref(DOBJ), role_ref(PPOBJ)),),
        "achieve-relations",
    )
    return taskmod.augment_default(net, REL, "on")


def core_lexicon(include_left: bool = True, include_move: bool = True) -> dict:
    entries = []
    for word, vec in COLOR_VECTORS.items():
        entries.append({"word": word, "kind": "percept", "attribute": "color",
                        "vectors": [vec]})
    for word, vec in SHAPE_VECTORS.items():
        entries.append({"word": word, "kind": "percept", "attribute": "shape",
                        "vectors": [vec]})
    for word, value in SIZE_VECTORS.items():
        entries.append({"word": word, "kind": "percept", "attribute": "size",
                        "vectors": [[value]]})
    entries.append({"word": "right", "kind": "spatial",
                    "composition": composition_to_dict(RIGHT)})
    if include_left:
        entries.append({"word": "left", "kind": "spatial",
                        "composition": composition_to_dict(LEFT)})
    if include_move:
        entries.append({"word": "move", "kind": "task",
                        "network": taskmod.network_to_dict(_move_network())})
    return {"entries": entries}


def reference_lexicon() -> dict:
    return core_lexicon(include_left=True, include_move=True)


def task_lexicon() -> dict:
    # "left" is taught during the move training script.
    return core_lexicon(include_left=False, include_move=False)


# Instruction corpus -----------------------------------------------------

def reference_corpus() -> dict:
    """25 utterances over three objects; the form census is 12 personal
    pronouns, 4 demonstrative pronouns, 3 demonstrative phrases, and 14
    descriptive noun phrases."""
    A, B, C = "red-cyl", "blue-tri", "green-block"
    e = []

    def entry(text, res, goal=None, extra_gold=None):
        item = {"text": text, "res": res}
        if goal:
            item["goal"] = goal
        if extra_gold:
            item["extra_gold"] = extra_gold
        e.append(item)

    entry("the large green block is behind the large red cylinder.",
          [{"path": "left", "form": "definite-NP", "gold": C},
           {"path": "right", "form": "definite-NP", "gold": A}])
    entry("is the small blue triangle behind the large red cylinder?",
          [{"path": "left", "form": "definite-NP", "gold": B},
           {"path": "right", "form": "definite-NP", "gold": A}])
    entry("pick up the large red cylinder.",
          [{"path": "dobj", "form": "definite-NP", "gold": A}])
    entry("put it to the right of the large green block.",
          [{"path": "dobj", "form": "personal-pronoun", "gold": A},
           {"path": "pp0", "form": "definite-NP", "gold": C}])
    entry("what color is it?",
          [{"path": "re", "form": "personal-pronoun", "gold": A}])
    entry("what shape is it?",
          [{"path": "re", "form": "personal-pronoun", "gold": A}])
    entry("this is large.",
          [{"path": "re", "form": "demonstrative-pronoun", "gold": A}])
    entry("pick up the small blue triangle.",
          [{"path": "dobj", "form": "definite-NP", "gold": B}])
    entry("put it down to the right of the large red cylinder.",
          [{"path": "dobj", "form": "personal-pronoun", "gold": B},
           {"path": "pp0", "form": "definite-NP", "gold": A}])
    entry("is it to the right of the red cylinder?",
          [{"path": "left", "form": "personal-pronoun", "gold": B},
           {"path": "right", "form": "definite-NP", "gold": A}])
    entry("the size of it is tiny.",
          [{"path": "re", "form": "personal-pronoun", "gold": B}])
    entry("move it to the left of the large green block.",
          [{"path": "dobj", "form": "personal-pronoun", "gold": B},
           {"path": "pp0", "form": "definite-NP", "gold": C}])
    entry("store it in the pantry.",
          [{"path": "dobj", "form": "personal-pronoun", "gold": A}],
          goal="the goal is the red cylinder is in the pantry.",
          extra_gold={"subject": A})
    entry("store the large green block.",
          [{"path": "dobj", "form": "definite-NP", "gold": C}],
          goal="the goal is the large green block is in the pantry.",
          extra_gold={"subject": C})
    entry("pick this up.",
          [{"path": "dobj", "form": "demonstrative-pronoun", "gold": C}])
    entry("put it on the stove.",
          [{"path": "dobj", "form": "personal-pronoun", "gold": C}])
    entry("what color is that block?",
          [{"path": "re", "form": "demonstrative-NP", "gold": C}])
    entry("is that block on the stove?",
          [{"path": "left", "form": "demonstrative-NP", "gold": C}])
    entry("move that block to the table.",
          [{"path": "dobj", "form": "demonstrative-NP", "gold": C}])
    entry("pick it up.",
          [{"path": "dobj", "form": "personal-pronoun", "gold": C}])
    entry("put that to the right of the small blue triangle.",
          [{"path": "dobj", "form": "demonstrative-pronoun", "gold": C},
           {"path": "pp0", "form": "definite-NP", "gold": B}])
    entry("what shape is it?",
          [{"path": "re", "form": "personal-pronoun", "gold": C}])
    entry("is it to the left of the large red cylinder?",
          [{"path": "left", "form": "personal-pronoun", "gold": C},
           {"path": "right", "form": "definite-NP", "gold": A}])
    entry("that is large.",
          [{"path": "re", "form": "demonstrative-pronoun", "gold": C}])
    entry("put the small blue triangle in the pantry.",
          [{"path": "dobj", "form": "definite-NP", "gold": B}])

    return {
        "census": {
            "personal-pronoun": 12,
            "demonstrative-pronoun": 4,
            "demonstrative-NP": 3,
            "definite-NP": 14,
        },
        "entries": e,
    }


def validate_census(corpus: dict) -> None:
    counts: dict[str, int] = {}
    for entry in corpus["entries"]:
        for res in entry["res"]:
            counts[res["form"]] = counts.get(res["form"], 0) + 1
    if counts != corpus["census"]:
        raise ValueError(f"census mismatch: {counts} != {corpus['census']}")


# Verb teaching scripts and alternation instances -------------------------

TRAINING_SCRIPTS = {
    "move": [
        "move the green block to the right of the red cylinder.",
        "the goal is the green block is to the right of the red cylinder.",
        "move the green block to the table.",
        "the goal is the green block is on the table.",
        "move the red cylinder to the left of the blue triangle.",
        "the red cylinder is to the left of the blue triangle.",
        "move the steak to the left of the red cylinder.",
        "move the blue triangle to the garbage.",
        "move the steak to the pantry.",
    ],
    "store": [
        "store the red cylinder in the pantry.",
        "the goal is the red cylinder is in the pantry.",
        "store the green block.",
        "the goal is the green block is in the pantry.",
    ],
    "cook": [
        "cook the steak on the stove.",
        "the goal is the steak is cooked on the stove.",
        "what color is the steak?",
        "is the steak on the stove?",
        "cook the green block.",
        "the goal is the green block is cooked on the stove.",
        "cook the red cylinder on the stove.",
        "cook the blue triangle.",
        "pick up the steak.",
        "put the steak on the table.",
        "cook the steak.",
        "is the steak on the stove?",
        "put the steak on the table.",
        "pick up the green block.",
    ],
}

TRAINING_ORDER = ("move", "store", "cook")

ALTERNATION_VERBS = ("pick", "put", "move", "store", "cook")

INSTANCE_SENTENCES = {
    ("pick", 1): "pick up the red cylinder.",
    ("put", 1): "put the red cylinder on the table.",
    ("move", 1): "move the red cylinder to the right of the blue triangle.",
    ("move", 2): "move the red cylinder to the table.",
    ("store", 1): "store the red cylinder in the pantry.",
    ("store", 2): "store the red cylinder.",
    ("cook", 1): "cook the steak on the stove.",
    ("cook", 2): "cook the steak.",
}

INSTANCE_GOALS = {
    "move": "the goal is the red cylinder is on the table.",
    "store": "the goal is the red cylinder is in the pantry.",
    "cook": "the goal is the steak is cooked on the stove.",
}
