"""Grounded comprehension: index words to referent sets, run the staged
reference-resolution pipeline under configurable context ablations, and
mesh interpretations against currently available tasks.

The resolution stages, in order: cognitive status, resolution type,
candidate set selection by surface form, visual filter, spatial filter,
task filter, partial ordering by status, and final selection.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from tabletalk import grammar, tasks as taskmod
from tabletalk.grammar import (
    Answer, AttributeQuery, GoalDescription, Imperative, ReferringExpression,
    SpatialVerify, Teach,
    DEMONSTRATIVE_NP, DEMONSTRATIVE_PRONOUN, INDEFINITE_NP, PERSONAL_PRONOUN,
)
from tabletalk.memory import AttentionSets, GroundingMemory, PERCEPT, SPATIAL
from tabletalk.spatial import SpatialStore
from tabletalk.tasks import DOBJ, REL, TaskNetwork
from tabletalk.world import LOCATION_NAMES, PerceptEntry, WorldState

RESOLVED = "resolved"
AMBIGUOUS = "ambiguous"
EMPTY = "empty"

MODEL_NAMES = ("p", "p+t", "p+t+a", "p+t+a+d")


@dataclass(frozen=True)
class ModelConfig:
    """Context ablation flags; perceptual semantics is always on."""

    use_task_filter: bool = True
    use_attention: bool = True
    use_dialog_focus: bool = True
    use_experience_defaults: bool = True

    @staticmethod
    def from_name(name: str) -> "ModelConfig":
        parts = set(name.split("+"))
        unknown = parts - {"p", "t", "a", "d", "e"}
        if "p" not in parts or unknown:
            raise ValueError(f"unknown model {name!r}")
        return ModelConfig(
            use_task_filter="t" in parts,
            use_attention="a" in parts,
            use_dialog_focus="d" in parts,
        )

    @property
    def name(self) -> str:
        out = "p"
        if self.use_task_filter:
            out += "+t"
        if self.use_attention:
            out += "+a"
        if self.use_dialog_focus:
            out += "+d"
        return out


@dataclass(frozen=True)
class ReferentSet:
    kind: str                       # "objects" | "spatial" | "task"
    members: tuple[str, ...]
    source_words: tuple[str, ...] = ()
    applied_filters: tuple[str, ...] = ()
    resolution_type: str = "unique"  # "unique" | "any"


@dataclass(frozen=True)
class Resolution:
    status: str                    # resolved | ambiguous | empty
    referent: str | None
    rset: ReferentSet


class NeedsWord(Exception):
    """A word with no stored grounding was encountered mid-resolution."""

    def __init__(self, word: str, kind: str):
        self.word = word
        self.kind = kind
        super().__init__(f"unknown {kind} word {word!r}")


@dataclass
class Context:
    """Point-in-time comprehension context."""

    state: WorldState
    snapshot: Mapping[str, PerceptEntry]
    attention: AttentionSets
    memory: GroundingMemory
    spatial_store: SpatialStore
    networks: Mapping[str, TaskNetwork]
    config: ModelConfig
    rng: random.Random

    def boxes(self):
        return self.state.boxes()


@dataclass(frozen=True)
class VerbContext:
    net: TaskNetwork
    role: str


def resolution_type_for(form: str) -> str:
    return "any" if form == INDEFINITE_NP else "unique"


def _candidate_levels(form: str, ctx: Context) -> list[tuple[str, tuple[str, ...]]]:
    """Candidate sets to try, most specific first.

    Surface form picks the set (focus for personal pronouns, attended for
    demonstratives, percept for full noun phrases); disabled context flags
    degrade the choice to the percept set, and an empty or fully filtered
    set falls through to the next level.
    """
    att = ctx.attention
    percept = ("percept", tuple(sorted(att.o_percept)))
    if form == PERSONAL_PRONOUN:
        if not ctx.config.use_dialog_focus:
            return [percept]
        levels = [("stack", tuple(sorted(att.o_stack)))]
        if ctx.config.use_attention:
            levels.append(("attend", tuple(sorted(att.o_attend))))
        levels.append(percept)
        return levels
    if form in (DEMONSTRATIVE_PRONOUN, DEMONSTRATIVE_NP):
        if not ctx.config.use_attention:
            return [percept]
        return [("attend", tuple(sorted(att.o_attend))), percept]
    return [percept]


def visual_filter(candidates: Sequence[str], descriptors: Sequence[str],
                  ctx: Context) -> list[str]:
    """Drop candidates lacking any descriptor's perceptual symbol.

    Location names act as identity descriptors; locations carry no feature
    vectors, so any perceptual word rules them out.
    """
    out = list(candidates)
    for word in descriptors:
        if word in LOCATION_NAMES:
            out = [c for c in out if c == word]
            continue
        symbol = ctx.memory.lookup(word, PERCEPT)
        if symbol is None:
            raise NeedsWord(word, "attribute")
        kept = []
        for c in out:
            entry = ctx.snapshot[c]
            if entry.kind != "object":
                continue
            got = ctx.memory.classify(symbol.attribute, entry.features[symbol.attribute])
            if got == symbol:
                kept.append(c)
        out = kept
    return out


def spatial_filter(candidates: Sequence[str],
                   modifier: tuple[str, ReferringExpression],
                   ctx: Context) -> list[str]:
    """Keep candidates satisfying the relation with some modifier referent."""
    prep, embedded = modifier
    comp_id = ctx.memory.lookup(prep, SPATIAL)
    if comp_id is None:
        raise NeedsWord(prep, "preposition")
    anchor = resolve_re(embedded, ctx, verb_ctx=None)
    anchors = anchor.rset.members
    if not anchors:
        return []
    boxes = ctx.boxes()
    return [
        c for c in candidates
        if any(
            b != c and ctx.spatial_store.holds(comp_id, c, b, boxes)
            for b in anchors
        )
    ]


def task_filter(candidates: Sequence[str], verb_ctx: VerbContext,
                ctx: Context) -> list[str]:
    """Keep candidates occurring in some available instantiation of the verb."""
    return [
        c for c in candidates
        if taskmod.role_value_available(
            verb_ctx.net, verb_ctx.role, c, ctx.state, ctx.spatial_store
        )
    ]


def _attribute_presence_filter(candidates: Sequence[str], ctx: Context) -> list[str]:
    return [c for c in candidates if ctx.snapshot[c].kind == "object"]


def status_tier(entity: str, ctx: Context) -> int:
    """Cognitive status: focus > activated > merely identifiable."""
    att = ctx.attention
    if ctx.config.use_dialog_focus and entity in att.o_stack:
        return 2
    if ctx.config.use_attention and entity in att.o_active:
        return 1
    return 0


def select(members: Sequence[str], resolution_type: str, ctx: Context,
           rset: ReferentSet) -> Resolution:
    """Final selection over a filtered candidate set."""
    ordered = sorted(members, key=lambda c: (-status_tier(c, ctx), c))
    rset = replace(rset, members=tuple(ordered))
    if not ordered:
        return Resolution(EMPTY, None, rset)
    if resolution_type == "any":
        return Resolution(RESOLVED, ctx.rng.choice(sorted(ordered)), rset)
    if len(ordered) == 1:
        return Resolution(RESOLVED, ordered[0], rset)
    top = status_tier(ordered[0], ctx)
    tops = [c for c in ordered if status_tier(c, ctx) == top]
    if top > 0 and len(tops) == 1:
        return Resolution(RESOLVED, tops[0], rset)
    # Ties within one status tier ask rather than guess.
    return Resolution(AMBIGUOUS, None, rset)


def resolve_re(re: ReferringExpression, ctx: Context,
               verb_ctx: VerbContext | None = None,
               require_attribute: bool = False) -> Resolution:
    """Run the resolution stages for one referring expression."""
    rtype = resolution_type_for(re.form)
    filters: list[str] = ["status", f"type:{rtype}"]
    last_rset = ReferentSet("objects", (), tuple(re.descriptors), tuple(filters), rtype)
    for level_name, level in _candidate_levels(re.form, ctx):
        applied = list(filters) + [f"candidates:{level_name}"]
        survivors = list(level)
        if require_attribute:
            survivors = _attribute_presence_filter(survivors, ctx)
        if re.descriptors:
            survivors = visual_filter(survivors, re.descriptors, ctx)
            applied.append("visual")
        if re.spatial is not None:
            survivors = spatial_filter(survivors, re.spatial, ctx)
            applied.append("spatial")
        if ctx.config.use_task_filter and verb_ctx is not None:
            survivors = task_filter(survivors, verb_ctx, ctx)
            applied.append("task")
        last_rset = ReferentSet(
            "objects", tuple(sorted(survivors)), tuple(re.descriptors),
            tuple(applied), rtype,
        )
        if survivors:
            applied.append("order")
            return select(survivors, rtype, ctx,
                          replace(last_rset, applied_filters=tuple(applied)))
    return Resolution(EMPTY, None, last_rset)


def refine(pending: Sequence[str], descriptors: Sequence[str],
           modifier, ctx: Context, rtype: str,
           rset: ReferentSet) -> tuple[list[str], Resolution]:
    """Re-filter a pending candidate set with answer-supplied constraints."""
    survivors = list(pending)
    if descriptors:
        survivors = visual_filter(survivors, descriptors, ctx)
    if modifier is not None:
        survivors = spatial_filter(survivors, modifier, ctx)
    rset = replace(
        rset,
        members=tuple(sorted(survivors)),
        applied_filters=rset.applied_filters + ("refine",),
    )
    return survivors, select(survivors, rtype, ctx, rset)


def index_preposition(word: str, ctx: Context) -> ReferentSet:
    comp = ctx.memory.lookup(word, SPATIAL)
    members = (comp,) if comp is not None else ()
    return ReferentSet("spatial", members, (word,), ("index",))


def index_verb(word: str, ctx: Context) -> ReferentSet:
    net = ctx.networks.get(word)
    members = (word,) if net is not None else ()
    return ReferentSet("task", members, (word,), ("index",))


# Comprehension outcomes ------------------------------------------------

@dataclass(frozen=True)
class MeshTrace:
    """Cardinalities of the interpretation set and its available subset."""

    interpretations: int
    available: int
    resolutions: tuple[tuple[str, Resolution], ...] = ()


@dataclass(frozen=True)
class ExecuteTask:
    inst: taskmod.TaskInstantiation
    trace: MeshTrace


@dataclass(frozen=True)
class AskWhichObject:
    """An object-identification query for an unresolved expression."""

    path: str
    re: ReferringExpression
    pending: tuple[str, ...]
    rset: ReferentSet
    trace: MeshTrace


@dataclass(frozen=True)
class AskGoal:
    verb: str
    missing: tuple[str, ...]       # empty for an entirely novel verb
    args: taskmod.TeachingArgs
    trace: MeshTrace


@dataclass(frozen=True)
class StartLearning:
    word: str
    kind: str                      # "attribute" | "preposition" | "verb"


@dataclass(frozen=True)
class Respond:
    text: str
    resolutions: tuple[tuple[str, Resolution], ...] = ()


@dataclass(frozen=True)
class TrainPercept:
    attribute: str
    vector: tuple[float, ...]
    word: str
    obj: str
    resolutions: tuple[tuple[str, Resolution], ...] = ()


@dataclass(frozen=True)
class LearnPreposition:
    word: str
    a: str
    b: str
    resolutions: tuple[tuple[str, Resolution], ...] = ()


Outcome = (ExecuteTask | AskWhichObject | AskGoal | StartLearning | Respond
           | TrainPercept | LearnPreposition)


def _resolve_or_override(re, ctx, verb_ctx, path, overrides,
                         require_attribute=False) -> Resolution:
    if path in overrides:
        rid = overrides[path]
        return Resolution(
            RESOLVED, rid,
            ReferentSet("objects", (rid,), tuple(re.descriptors), ("override",),
                        resolution_type_for(re.form)),
        )
    return resolve_re(re, ctx, verb_ctx, require_attribute=require_attribute)


def comprehend(sentence: grammar.ParsedSentence, ctx: Context,
               overrides: Mapping[str, str] | None = None) -> Outcome:
    """Interpret one parsed sentence against the current context.

    `overrides` carries referents already pinned down by an earlier
    clarification subdialog, keyed by expression path.
    """
    overrides = overrides or {}
    if isinstance(sentence, Imperative):
        return _comprehend_imperative(sentence, ctx, overrides)
    if isinstance(sentence, AttributeQuery):
        return _comprehend_attribute_query(sentence, ctx, overrides)
    if isinstance(sentence, Teach):
        return _comprehend_teach(sentence, ctx, overrides)
    if isinstance(sentence, SpatialVerify):
        return _comprehend_verify(sentence, ctx, overrides)
    if isinstance(sentence, GoalDescription):
        return Respond("OK.")
    if isinstance(sentence, Answer):
        return Respond("I do not understand.")
    raise TypeError(f"not a sentence: {sentence!r}")


def _mesh(resolutions) -> MeshTrace:
    n = 1
    for _, res in resolutions:
        n *= max(len(res.rset.members), 0)
    return MeshTrace(n, n, tuple(resolutions))


def _comprehend_imperative(sentence: Imperative, ctx: Context,
                           overrides) -> Outcome:
    net = ctx.networks.get(sentence.verb)

    # Prepositions index before referents; an unknown one starts learning.
    for prep, _ in sentence.pps:
        if prep is not None and not index_preposition(prep, ctx).members:
            return StartLearning(prep, "preposition")

    dobj_re = sentence.dobj
    pps = sentence.pps
    if net is not None and net.pp_role() not in net.required_roles() and pps:
        # Verbs without an argument slot for the phrase (pick): the
        # preposition modifies the object expression instead.
        prep, modifier_re = pps[0]
        if prep is not None:
            dobj_re = dobj_re.with_extra(spatial=(prep, modifier_re))
        pps = ()

    resolutions: list[tuple[str, Resolution]] = []
    try:
        res = _resolve_or_override(
            dobj_re, ctx,
            VerbContext(net, DOBJ) if net else None, "dobj", overrides,
        )
    except NeedsWord as exc:
        return StartLearning(exc.word, exc.kind)
    resolutions.append(("dobj", res))
    if res.status == AMBIGUOUS:
        return AskWhichObject("dobj", dobj_re, res.rset.members, res.rset,
                              _mesh(resolutions))
    if res.status == EMPTY:
        return Respond("I do not see that.", tuple(resolutions))

    pp_args: list[tuple[str | None, str]] = []
    for i, (prep, re) in enumerate(pps):
        role = net.pp_role() if net else taskmod.PPOBJ
        path = f"pp{i}"
        try:
            pres = _resolve_or_override(
                re, ctx, VerbContext(net, role) if net else None, path, overrides
            )
        except NeedsWord as exc:
            return StartLearning(exc.word, exc.kind)
        resolutions.append((path, pres))
        if pres.status == AMBIGUOUS:
            return AskWhichObject(path, re, pres.rset.members, pres.rset,
                                  _mesh(resolutions))
        if pres.status == EMPTY:
            return Respond("I do not see that.", tuple(resolutions))
        pp_args.append((prep, pres.referent))

    rel_word = next((p for p, _ in pp_args if p is not None), None)
    args = taskmod.TeachingArgs(
        dobj=resolutions[0][1].referent,
        rel=ctx.memory.lookup(rel_word, SPATIAL) if rel_word else None,
        ppobj=next((o for _, o in pp_args), None),
    )
    if net is None:
        return AskGoal(sentence.verb, (), args, _mesh(resolutions))

    fillers: dict[str, set[str]] = {DOBJ: {args.dobj}}
    if args.ppobj is not None:
        fillers[net.pp_role()] = {args.ppobj}
    if args.rel is not None:
        fillers[REL] = {args.rel}
    inst_set = taskmod.instantiate(
        net, fillers, use_defaults=ctx.config.use_experience_defaults
    )
    if inst_set.missing:
        return AskGoal(sentence.verb, tuple(inst_set.missing), args,
                       _mesh(resolutions))
    live = [
        i for i in inst_set.instances
        if taskmod.is_available(i, ctx.state, ctx.spatial_store)
    ]
    trace = MeshTrace(len(inst_set.instances), len(live), tuple(resolutions))
    if len(live) == 1:
        return ExecuteTask(live[0], trace)
    if not live:
        return Respond("I cannot do that.")
    return AskWhichObject("dobj", dobj_re,
                          tuple(sorted({i.binding[DOBJ] for i in live})),
                          resolutions[0][1].rset, trace)


def _comprehend_attribute_query(sentence: AttributeQuery, ctx: Context,
                                overrides) -> Outcome:
    try:
        res = _resolve_or_override(sentence.re, ctx, None, "re", overrides,
                                   require_attribute=True)
    except NeedsWord as exc:
        return StartLearning(exc.word, exc.kind)
    if res.status == AMBIGUOUS:
        return AskWhichObject("re", sentence.re, res.rset.members, res.rset,
                              _mesh([("re", res)]))
    if res.status == EMPTY:
        return Respond("I do not see that.", (("re", res),))
    entry = ctx.snapshot[res.referent]
    symbol = ctx.memory.classify(sentence.attribute,
                                 entry.features[sentence.attribute])
    word = ctx.memory.word_for_symbol(symbol) if symbol else None
    return Respond(f"{word}." if word else "I do not know.", (("re", res),))


def _comprehend_teach(sentence: Teach, ctx: Context, overrides) -> Outcome:
    attribute = sentence.attribute
    if attribute is None:
        symbol = ctx.memory.lookup(sentence.word, PERCEPT)
        if symbol is None:
            return StartLearning(sentence.word, "attribute")
        attribute = symbol.attribute
    try:
        res = _resolve_or_override(sentence.re, ctx, None, "re", overrides,
                                   require_attribute=True)
    except NeedsWord as exc:
        return StartLearning(exc.word, exc.kind)
    if res.status == AMBIGUOUS:
        return AskWhichObject("re", sentence.re, res.rset.members, res.rset,
                              _mesh([("re", res)]))
    if res.status == EMPTY:
        return Respond("I do not see that.", (("re", res),))
    entry = ctx.snapshot[res.referent]
    return TrainPercept(attribute, entry.features[attribute], sentence.word,
                        res.referent, (("re", res),))


def _comprehend_verify(sentence: SpatialVerify, ctx: Context,
                       overrides) -> Outcome:
    comp = ctx.memory.lookup(sentence.prep, SPATIAL)
    resolutions = []
    for path, re in (("left", sentence.left), ("right", sentence.right)):
        try:
            res = _resolve_or_override(re, ctx, None, path, overrides)
        except NeedsWord as exc:
            return StartLearning(exc.word, exc.kind)
        if res.status == AMBIGUOUS:
            return AskWhichObject(path, re, res.rset.members, res.rset,
                                  _mesh(resolutions + [(path, res)]))
        if res.status == EMPTY:
            return Respond("I do not see that.", tuple(resolutions))
        resolutions.append((path, res))
    a = resolutions[0][1].referent
    b = resolutions[1][1].referent
    if comp is None:
        if sentence.question:
            return StartLearning(sentence.prep, "preposition")
        return LearnPreposition(sentence.prep, a, b, tuple(resolutions))
    if a == b:
        return Respond("No.", tuple(resolutions))
    holds = ctx.spatial_store.holds(comp, a, b, ctx.boxes())
    return Respond("Yes." if holds else "No.", tuple(resolutions))
