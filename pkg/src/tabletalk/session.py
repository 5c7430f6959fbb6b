"""One instruction session: the interaction model.

Maintains the segment stack whose open segments define the in-focus set,
runs comprehension on each instructor turn, opens clarification and
teaching subdialogs, integrates incremental answers, executes tasks, and
writes an append-only transcript.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path

from tabletalk import comprehend as compmod, grammar, lexicon as lexmod
from tabletalk import memory as memmod, tasks as taskmod, world as worldmod
from tabletalk.comprehend import (
    AMBIGUOUS, AskGoal, AskWhichObject, Context, ExecuteTask, LearnPreposition,
    ModelConfig, RESOLVED, Respond, StartLearning, TrainPercept,
)
from tabletalk.grammar import (
    Answer, GoalDescription, Imperative, ParsedSentence, SpatialVerify, Teach,
    Unparseable,
)
from tabletalk.memory import GroundingMemory, PERCEPT, SPATIAL, TASK
from tabletalk.spatial import SpatialStore, builtin_compositions
from tabletalk.world import WorldState, acted_on, describe_action


@dataclass
class Event:
    kind: str          # "utterance" | "action" | "learning"
    tick: int
    speaker: str | None = None
    text: str | None = None
    action: object | None = None
    referents: set[str] = field(default_factory=set)


@dataclass
class Segment:
    purpose: str
    status: str = "open"   # open | achieved | abandoned
    events: list[Event] = field(default_factory=list)
    referents: set[str] = field(default_factory=set)


@dataclass
class Query:
    kind: str  # object-identification | goal-description | training-request
    text: str
    constraints: tuple[str, ...] = ()


def generate_object_query(constraints, memory: GroundingMemory) -> Query:
    """Identification question from the constraints gathered so far.

    With none: "Which object?"; otherwise the accumulated adjectives
    prefix the head, and a shape word takes the head position, yielding
    the escalating "Which blue object?" / "Which blue cylinder?" ladder.
    """
    adjectives = []
    head = "object"
    for word in constraints:
        symbol = memory.lookup(word, PERCEPT)
        if symbol is not None and symbol.attribute == "shape":
            head = word
        else:
            adjectives.append(word)
    middle = " ".join(adjectives + [head])
    return Query("object-identification", f"Which {middle}?",
                 tuple(constraints))


@dataclass
class PendingRef:
    """An unresolved expression awaiting identifying answers."""

    sentence: ParsedSentence
    path: str
    re: grammar.ReferringExpression
    members: tuple[str, ...]
    rset: compmod.ReferentSet
    overrides: dict
    descriptors: list[str] = field(default_factory=list)
    modifiers: list = field(default_factory=list)
    queries: int = 0
    query: Query | None = None


@dataclass
class PendingGoal:
    sentence: Imperative
    verb: str
    missing: tuple[str, ...]
    args: taskmod.TeachingArgs


@dataclass
class PendingWord:
    word: str
    kind: str
    sentence: ParsedSentence | None
    overrides: dict


class Session:
    """A single strictly alternating instructor/agent dialog."""

    def __init__(self, state: WorldState, config: ModelConfig | None = None,
                 seed: int = 0, active_n: int = memmod.DEFAULT_ACTIVE_N):
        self.state = state
        self.config = config or ModelConfig()
        self.memory = GroundingMemory(active_n=active_n)
        self.spatial_store = SpatialStore()
        for comp in builtin_compositions():
            self.spatial_store.add(comp)
            self.memory.bind(comp.id, SPATIAL, comp.id)
        self.networks: dict[str, taskmod.TaskNetwork] = taskmod.builtin_networks()
        for verb in self.networks:
            self.memory.bind(verb, TASK, verb)
        self.rng = random.Random(seed)
        self.tick = 0
        self.stack: list[Segment] = []
        self.closed_segments: list[Segment] = []
        self.transcript: list[str] = []
        self.pending_ref: PendingRef | None = None
        self.pending_goal: PendingGoal | None = None
        self.pending_word: PendingWord | None = None
        self.resolution_log: list[tuple[str, str, int]] = []  # (path, id, queries)
        self.object_queries = 0
        self.goal_queries = 0
        self.training_requests = 0
        self.instructor_turns = 0
        self.agent_questions = 0
        self._out: list[str] = []

    # Setup ----------------------------------------------------------------

    def load_lexicon(self, path: str | Path) -> None:
        lexmod.load_lexicon(path, self.memory, self.spatial_store, self.networks)

    def load_lexicon_doc(self, doc: dict) -> None:
        lexmod.load_lexicon_doc(doc, self.memory, self.spatial_store,
                                self.networks)

    def reset_world(self, state: WorldState) -> None:
        """Swap in a fresh world; session knowledge and recency persist."""
        self.state = state

    def point(self, object_id: str) -> None:
        """An instructor pointing gesture: accesses the entity."""
        self.state = worldmod.apply_action(
            self.state, worldmod.PointTo(object_id), self.spatial_store
        )
        self.record_action(worldmod.PointTo(object_id))

    # Segment stack ----------------------------------------------------------

    def push_segment(self, purpose: str) -> Segment:
        seg = Segment(purpose)
        self.stack.append(seg)
        return seg

    def pop_segment(self, status: str = "achieved") -> Segment:
        seg = self.stack.pop()
        seg.status = status
        self.closed_segments.append(seg)
        return seg

    def stack_referents(self) -> set[str]:
        out: set[str] = set()
        for seg in self.stack:
            out |= seg.referents
        return out

    def touch(self, *ids) -> None:
        if self.stack:
            self.stack[-1].referents.update(i for i in ids if i)

    # Events and transcript ----------------------------------------------------

    def _event(self, event: Event) -> None:
        if self.stack:
            self.stack[-1].events.append(event)
            self.stack[-1].referents |= event.referents

    def record_utterance(self, speaker: str, text: str) -> None:
        self._event(Event("utterance", self.tick, speaker=speaker, text=text))
        self.transcript.append(f"{self.tick}\t{speaker}\t{text}")
        self.tick += 1

    def record_action(self, action) -> None:
        target = acted_on(action)
        self._event(Event("action", self.tick, action=action, referents={target}))
        self.transcript.append(f"{self.tick}\tACT\t{describe_action(action)}")
        self.memory.record_access(target, self.tick)
        self.tick += 1

    def record_learning(self, text: str, referents=()) -> None:
        self._event(Event("learning", self.tick, text=text,
                          referents=set(referents)))
        self.tick += 1

    def say(self, text: str) -> None:
        self.record_utterance("A", text)
        self._out.append(text)

    def ask(self, query: Query) -> None:
        self.agent_questions += 1
        if query.kind == "object-identification":
            self.object_queries += 1
        elif query.kind == "goal-description":
            self.goal_queries += 1
        else:
            self.training_requests += 1
        self.say(query.text)

    # Context -------------------------------------------------------------------

    def context(self) -> Context:
        snapshot = {e.id: e for e in worldmod.percept_snapshot(self.state)}
        att = memmod.attention(
            self.memory, snapshot.keys(), self.stack_referents(), now=self.tick
        )
        return Context(
            state=self.state, snapshot=snapshot, attention=att,
            memory=self.memory, spatial_store=self.spatial_store,
            networks=self.networks, config=self.config, rng=self.rng,
        )

    def has_pending(self) -> bool:
        return any(p is not None for p in
                   (self.pending_ref, self.pending_goal, self.pending_word))

    # Turn handling ----------------------------------------------------------------

    def handle_turn(self, text: str) -> list[str]:
        self._out = []
        try:
            sentence = grammar.parse(text)
        except Unparseable:
            self.record_utterance("I", text)
            self.say("I don't understand.")
            return self._out
        self.instructor_turns += 1

        if self.pending_ref is not None and isinstance(sentence, Answer):
            self.record_utterance("I", text)
            self._integrate_answer(sentence)
            return self._out
        if (self.pending_goal is not None and self.pending_ref is None
                and isinstance(sentence, GoalDescription)):
            self.record_utterance("I", text)
            self._finish_goal(sentence)
            return self._out
        if self.pending_word is not None and self._teaches_pending_word(sentence):
            self.record_utterance("I", text)
            self._finish_word(sentence)
            return self._out

        if self.has_pending():
            self._abandon_pending()
        self.push_segment(self._purpose_for(sentence))
        self.record_utterance("I", text)
        outcome = compmod.comprehend(sentence, self.context())
        self._dispatch(outcome, sentence, {})
        return self._out

    @staticmethod
    def _purpose_for(sentence: ParsedSentence) -> str:
        if isinstance(sentence, Imperative):
            return f"execute-task({sentence.verb})"
        if isinstance(sentence, Teach):
            return f"learn-word({sentence.word})"
        if isinstance(sentence, SpatialVerify) and not sentence.question:
            return "learn-word(spatial)"
        return "answer-query"

    def _abandon_pending(self) -> None:
        self.pending_ref = None
        self.pending_goal = None
        self.pending_word = None
        while self.stack:
            self.pop_segment("abandoned")

    # Outcome dispatch ---------------------------------------------------------------

    def _log_resolutions(self, resolutions, queries_for: dict | None = None) -> None:
        queries_for = queries_for or {}
        for path, res in resolutions:
            if res.status != RESOLVED:
                continue
            self.touch(res.referent)
            if res.rset.applied_filters == ("override",):
                continue  # already logged when its subdialog closed
            self.resolution_log.append(
                (path, res.referent, queries_for.get(path, 0))
            )

    def _dispatch(self, outcome, sentence, overrides) -> None:
        if isinstance(outcome, Respond):
            self._log_resolutions(outcome.resolutions)
            self.say(outcome.text)
            self._close_turn()
        elif isinstance(outcome, TrainPercept):
            self._log_resolutions(outcome.resolutions)
            self.memory.add_training_example(
                outcome.attribute, outcome.vector, outcome.word
            )
            self.record_learning(f"{outcome.word}={outcome.attribute}",
                                 [outcome.obj])
            self.say("OK.")
            self._close_turn()
        elif isinstance(outcome, LearnPreposition):
            self._log_resolutions(outcome.resolutions)
            self._learn_preposition(outcome.word, outcome.a, outcome.b)
            self.say("OK.")
            self._close_turn()
        elif isinstance(outcome, ExecuteTask):
            self._log_resolutions(outcome.trace.resolutions)
            self._run_task(outcome.inst)
            self._close_turn()
        elif isinstance(outcome, AskWhichObject):
            self._log_resolutions(
                [r for r in outcome.trace.resolutions if r[0] != outcome.path]
            )
            self._open_reference_query(outcome, sentence, overrides)
        elif isinstance(outcome, AskGoal):
            self._log_resolutions(outcome.trace.resolutions)
            self.pending_goal = PendingGoal(
                sentence, outcome.verb, outcome.missing, outcome.args
            )
            self.push_segment(f"teach-goal({outcome.verb})")
            self.ask(Query("goal-description", "What is the goal?"))
        elif isinstance(outcome, StartLearning):
            self.pending_word = PendingWord(
                outcome.word, outcome.kind, sentence, dict(overrides)
            )
            self.push_segment(f"learn-word({outcome.word})")
            if outcome.kind == "preposition":
                text = f"I do not know what {outcome.word} means. Show me an example."
            else:
                text = f"I do not know what {outcome.word} means. Describe it to me."
            self.ask(Query("training-request", text))
        else:
            raise TypeError(f"unexpected outcome {outcome!r}")

    def _close_turn(self) -> None:
        self.pending_ref = None
        self.pending_goal = None
        self.pending_word = None
        while self.stack:
            self.pop_segment("achieved")

    def _learn_preposition(self, word: str, a: str, b: str) -> None:
        comp_id = self.memory.lookup(word, SPATIAL) or self.spatial_store.mint_id(word)
        self.spatial_store.learn_from_example(comp_id, a, b, self.state.boxes())
        self.memory.bind(word, SPATIAL, comp_id)
        self.record_learning(f"{word}=spatial:{comp_id}", [a, b])

    def _run_task(self, inst: taskmod.TaskInstantiation) -> None:
        result = taskmod.execute(inst, self.state, self.spatial_store)
        self.state = result.state
        for action in result.trace:
            self.record_action(action)
        if result.status != "achieved":
            self.say("I cannot do that.")

    # Clarification subdialog -----------------------------------------------------

    def _open_reference_query(self, outcome: AskWhichObject, sentence,
                              overrides) -> None:
        pending = PendingRef(
            sentence=sentence, path=outcome.path, re=outcome.re,
            members=outcome.pending, rset=outcome.rset,
            overrides=dict(overrides),
            descriptors=list(outcome.re.descriptors),
            modifiers=[outcome.re.spatial] if outcome.re.spatial else [],
        )
        self.pending_ref = pending
        self.push_segment(f"resolve-reference({outcome.path})")
        self._ask_object_query(pending)

    def _ask_object_query(self, pending: PendingRef) -> None:
        query = generate_object_query(pending.descriptors, self.memory)
        pending.query = query
        pending.queries += 1
        self.ask(query)

    def _integrate_answer(self, answer: Answer) -> None:
        pending = self.pending_ref
        assert pending is not None
        new_desc = [d for d in answer.descriptors if d not in pending.descriptors]
        new_mod = answer.spatial if (
            answer.spatial is not None and answer.spatial not in pending.modifiers
        ) else None
        ctx = self.context()
        usable = bool(new_desc) or new_mod is not None
        survivors: list[str] = list(pending.members)
        resolution = None
        if usable:
            try:
                survivors, resolution = compmod.refine(
                    pending.members, new_desc, new_mod, ctx,
                    pending.rset.resolution_type, pending.rset,
                )
            except compmod.NeedsWord:
                usable = False
        if usable and not survivors:
            usable = False
        if usable and (len(survivors) == len(pending.members)
                       and resolution.status == AMBIGUOUS):
            usable = False
        if not usable:
            # The answer narrowed nothing; ask again.
            self._ask_object_query(pending)
            return
        pending.descriptors.extend(new_desc)
        if new_mod is not None:
            pending.modifiers.append(new_mod)
        if resolution.status == RESOLVED:
            self.touch(resolution.referent)
            self.resolution_log.append(
                (pending.path, resolution.referent, pending.queries)
            )
            overrides = dict(pending.overrides)
            overrides[pending.path] = resolution.referent
            sentence = pending.sentence
            self.pending_ref = None
            self.pop_segment("achieved")  # resolve-reference
            self._resume(sentence, overrides)
        else:
            pending.members = tuple(survivors)
            pending.rset = resolution.rset
            self._ask_object_query(pending)

    def _resume(self, sentence, overrides) -> None:
        if isinstance(sentence, GoalDescription):
            self._finish_goal(sentence, overrides)
            return
        outcome = compmod.comprehend(sentence, self.context(), overrides)
        self._dispatch(outcome, sentence, overrides)

    # Goal teaching -----------------------------------------------------------------

    def _goal_args(self, goal: GoalDescription,
                   overrides) -> taskmod.TeachingArgs | None:
        ctx = self.context()
        res = compmod._resolve_or_override(goal.subject, ctx, None, "subject",
                                           overrides)
        if res.status == AMBIGUOUS:
            out = AskWhichObject("subject", goal.subject, res.rset.members,
                                 res.rset, compmod.MeshTrace(0, 0, ()))
            self._open_reference_query(out, goal, overrides)
            return None
        if res.status != RESOLVED:
            self.say("I do not see that.")
            return None
        subject = res.referent
        self.touch(subject)
        obj = None
        if goal.object is not None:
            ores = compmod._resolve_or_override(goal.object, ctx, None, "object",
                                                overrides)
            if ores.status == AMBIGUOUS:
                out = AskWhichObject("object", goal.object, ores.rset.members,
                                     ores.rset, compmod.MeshTrace(0, 0, ()))
                self._open_reference_query(out, goal, overrides)
                return None
            if ores.status != RESOLVED:
                self.say("I do not see that.")
                return None
            obj = ores.referent
            self.touch(obj)
        rel = self.memory.lookup(goal.prep, SPATIAL) if goal.prep else None
        if goal.prep and rel is None:
            self._dispatch(StartLearning(goal.prep, "preposition"), goal, overrides)
            return None
        return taskmod.TeachingArgs(dobj=subject, rel=rel, ppobj=obj,
                                    state=goal.state)

    def _finish_goal(self, goal: GoalDescription, overrides=None) -> None:
        pending = self.pending_goal
        if pending is None:
            self.say("OK.")
            return
        goal_args = self._goal_args(goal, overrides or {})
        if goal_args is None:
            return  # nested subdialog opened, or the goal was not grounded
        self.pending_goal = None
        verb = pending.verb
        try:
            if not pending.missing:
                net = taskmod.learn_goal_schema(verb, pending.args, goal_args)
                self.networks[verb] = net
                self.memory.bind(verb, TASK, verb)
                self.record_learning(f"schema({verb})")
            else:
                net = self.networks[verb]
                for role, value in taskmod.defaults_from_contrast(
                    net, pending.args, goal_args
                ):
                    net = taskmod.augment_default(net, role, value)
                self.networks[verb] = net
                self.record_learning(f"defaults({verb})")
        except taskmod.UnalignedGoal:
            self.say("That goal does not match the command.")
            self._close_turn()
            return
        net = self.networks[verb]
        self.pop_segment("achieved")  # teach-goal

        # Complete the pending instance with the goal-supplied values.
        fillers: dict[str, set] = {taskmod.DOBJ: {pending.args.dobj}}
        if pending.args.ppobj is not None:
            fillers[net.pp_role()] = {pending.args.ppobj}
        if pending.args.rel is not None:
            fillers[taskmod.REL] = {pending.args.rel}
        for role in net.required_roles():
            if role in fillers:
                continue
            value = goal_args.rel if role == taskmod.REL else goal_args.ppobj
            if value is not None:
                fillers[role] = {value}
        inst_set = taskmod.instantiate(net, fillers, use_defaults=True)
        live = [
            i for i in inst_set.instances
            if taskmod.is_available(i, self.state, self.spatial_store)
        ]
        if len(live) != 1:
            self.say("I cannot do that.")
            self._close_turn()
            return
        self._run_task(live[0])
        self._close_turn()

    # Word teaching --------------------------------------------------------------------

    def _teaches_pending_word(self, sentence) -> bool:
        pending = self.pending_word
        if pending is None:
            return False
        if pending.kind == "preposition":
            return (isinstance(sentence, SpatialVerify)
                    and not sentence.question
                    and sentence.prep == pending.word)
        return (isinstance(sentence, Teach)
                and sentence.word == pending.word
                and sentence.attribute is not None)

    def _finish_word(self, sentence) -> None:
        pending = self.pending_word
        assert pending is not None
        outcome = compmod.comprehend(sentence, self.context())
        if isinstance(outcome, (LearnPreposition, TrainPercept)):
            self.pending_word = None
            if isinstance(outcome, LearnPreposition):
                self._learn_preposition(outcome.word, outcome.a, outcome.b)
            else:
                self.memory.add_training_example(
                    outcome.attribute, outcome.vector, outcome.word
                )
                self.record_learning(f"{outcome.word}={outcome.attribute}",
                                     [outcome.obj])
            self._log_resolutions(outcome.resolutions)
            self.pop_segment("achieved")  # learn-word
            self.say("OK.")
            if pending.sentence is not None:
                self._resume(pending.sentence, pending.overrides)
        else:
            self._dispatch(outcome, sentence, pending.overrides)

    # Introspection for the harness ------------------------------------------------------

    def has_open_query(self) -> bool:
        return self.has_pending()

    def pending_query(self) -> Query | None:
        if self.pending_ref is not None:
            return self.pending_ref.query
        if self.pending_word is not None:
            return Query("training-request", self.pending_word.word)
        if self.pending_goal is not None:
            return Query("goal-description", "What is the goal?")
        return None
