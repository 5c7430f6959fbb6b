"""Experiment harness: replay the instruction corpus under context
ablations across the scene ambiguity ladder, and run the verb alternation
comparison with and without experience-derived defaults.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from pathlib import Path

from tabletalk import fixtures
from tabletalk.comprehend import ModelConfig, MODEL_NAMES
from tabletalk.session import PendingRef, Session
from tabletalk.world import canonical_json, scenario_from_dict

MAX_EXCHANGES = 24  # per utterance; resolution must converge well before


class ResolutionFailure(AssertionError):
    def __init__(self, utterance, path, expected, got):
        self.utterance = utterance
        super().__init__(
            f"{utterance!r}: {path} resolved to {got!r}, expected {expected!r}"
        )


class NoDiscriminatingCue(RuntimeError):
    pass


class ScriptedInstructor:
    """Deterministic stand-in for the human: answers identification
    queries with the single next most discriminating unused cue, in the
    fixed order color, shape, size, then location; answers goal queries
    with the scripted goal sentence."""

    CUE_ORDER = ("color", "shape", "size", "spatial")

    def __init__(self, words: dict[str, dict[str, str]], state_fn):
        self.words = words            # object id -> {color,shape,size} words
        self.state_fn = state_fn      # () -> current WorldState
        self._episode = None
        self._given: list[str] = []

    def _contained_location(self, obj_id: str) -> str | None:
        state = self.state_fn()
        obj = state.objects.get(obj_id)
        if obj is None:
            return None
        box = obj.box
        for name in sorted(state.locations):
            region = state.locations[name].region
            if all(box.lo[i] >= region.lo[i] - 1e-9
                   and box.hi[i] <= region.hi[i] + 1e-9 for i in range(3)):
                return name
        return None

    def _match_set(self, constraints: list[str], modifiers) -> list[str]:
        """Objects matching the cues the dialog has put on the table."""
        by_dim = {}
        for dim in ("color", "shape", "size"):
            by_dim.update({w: dim for o in self.words.values()
                           for w in [o[dim]]})
        out = []
        for oid, words in self.words.items():
            ok = all(
                words.get(by_dim.get(c, "")) == c
                for c in constraints if c in by_dim
            )
            if ok:
                for prep, loc_re in modifiers or []:
                    loc = loc_re.descriptors[-1] if loc_re.descriptors else None
                    if prep == "in" and self._contained_location(oid) != loc:
                        ok = False
            if ok:
                out.append(oid)
        return out

    def answer_identification(self, pending: PendingRef, gold: str) -> str:
        if self._episode is not pending:
            self._episode = pending
            self._given = []
        match = self._match_set(list(pending.descriptors), pending.modifiers)
        gold_words = self.words[gold]
        for dim in self.CUE_ORDER:
            if dim in self._given:
                continue
            if dim == "spatial":
                loc = self._contained_location(gold)
                if loc is None:
                    continue
                removes = [m for m in match
                           if m != gold and self._contained_location(m) != loc]
                if not removes:
                    continue
                self._given.append(dim)
                return f"the one in the {loc}."
            word = gold_words[dim]
            removes = [m for m in match if self.words[m][dim] != word]
            if not removes:
                continue
            self._given.append(dim)
            if dim == "shape":
                return f"the {word}."
            return f"the {word} one."
        raise NoDiscriminatingCue(gold)

    def respond(self, session: Session, gold: dict[str, str],
                goal: str | None = None, demo: str | None = None) -> str:
        if session.pending_ref is not None:
            pending = session.pending_ref
            if pending.path not in gold:
                raise NoDiscriminatingCue(f"no gold for path {pending.path}")
            return self.answer_identification(pending, gold[pending.path])
        if session.pending_word is not None:
            if demo is None:
                raise NoDiscriminatingCue(
                    f"no demonstration for {session.pending_word.word}"
                )
            return demo
        if session.pending_goal is not None:
            if goal is None:
                raise NoDiscriminatingCue(
                    f"no goal sentence for {session.pending_goal.verb}"
                )
            return goal
        raise RuntimeError("nothing pending")


# Reference resolution experiment ----------------------------------------

@dataclass
class ReRow:
    model: str
    scenario: int
    queries: int
    per_re: list[tuple[str, str, int]] = field(default_factory=list)
    correct: bool = True


def build_re_session(scenario: int, model: str, seed: int,
                     lexicon_doc: dict | None = None) -> tuple[Session, dict]:
    doc, words = fixtures.ambiguity_scene(scenario)
    state = scenario_from_dict(doc)
    config = ModelConfig.from_name(model)
    session = Session(state, config=config, seed=seed)
    session.load_lexicon_doc(lexicon_doc or fixtures.reference_lexicon())
    return session, words


def run_re_experiment(scenario: int, model: str, seed: int = 0,
                      corpus: dict | None = None,
                      lexicon_doc: dict | None = None) -> ReRow:
    corpus = corpus or fixtures.reference_corpus()
    fixtures.validate_census(corpus)
    session, words = build_re_session(scenario, model, seed, lexicon_doc)
    oracle = ScriptedInstructor(words, lambda: session.state)
    row = ReRow(model, scenario, 0)
    for entry in corpus["entries"]:
        gold = {r["path"]: r["gold"] for r in entry["res"]}
        gold.update(entry.get("extra_gold", {}))
        log_start = len(session.resolution_log)
        session.handle_turn(entry["text"])
        exchanges = 0
        while session.has_pending():
            exchanges += 1
            if exchanges > MAX_EXCHANGES:
                raise ResolutionFailure(entry["text"], "?", "convergence", "loop")
            answer = oracle.respond(session, gold, goal=entry.get("goal"))
            session.handle_turn(answer)
        logged = {path: (rid, q)
                  for path, rid, q in session.resolution_log[log_start:]}
        for res in entry["res"]:
            got = logged.get(res["path"])
            if got is None or got[0] != res["gold"]:
                raise ResolutionFailure(
                    entry["text"], res["path"], res["gold"],
                    got[0] if got else None,
                )
            row.per_re.append((entry["text"], res["path"], got[1]))
    row.queries = session.object_queries
    return row


def run_re_matrix(seed: int = 0, corpus: dict | None = None,
                  lexicon_doc: dict | None = None) -> list[ReRow]:
    return [
        run_re_experiment(scenario, model, seed, corpus, lexicon_doc)
        for model in MODEL_NAMES
        for scenario in (1, 2, 3, 4)
    ]


# Verb alternation experiment ----------------------------------------------

@dataclass
class AltRow:
    config: str
    verb: str
    alternation: int
    instance: int
    interactions: int


@dataclass
class AltReport:
    config: str
    training: dict[str, int]
    rows: list[AltRow]


def _interaction_count(session: Session, before: tuple[int, int]) -> int:
    return (session.instructor_turns - before[0]
            + session.agent_questions - before[1])


def run_alternation_experiment(config: str, seed: int = 0,
                               instances: int = 8,
                               lexicon_doc: dict | None = None) -> AltReport:
    if config not in ("+e", "-e"):
        raise ValueError("config must be +e or -e")
    doc, words = fixtures.task_scene()
    state = scenario_from_dict(doc)
    session = Session(state, config=ModelConfig.from_name("p+t+a+d"), seed=seed)
    session.load_lexicon_doc(lexicon_doc or fixtures.task_lexicon())

    # Training runs identically for both configs: the lesion applies only
    # to how the test phase fills unexpressed arguments.
    training: dict[str, int] = {}
    for verb in fixtures.TRAINING_ORDER:
        before = (session.instructor_turns, session.agent_questions)
        for line in fixtures.TRAINING_SCRIPTS[verb]:
            session.handle_turn(line)
        if session.has_pending():
            raise RuntimeError(f"training for {verb} left a pending query")
        training[verb] = _interaction_count(session, before)

    session.config = replace(
        session.config, use_experience_defaults=(config == "+e")
    )
    rng = random.Random(seed)
    rows: list[AltRow] = []
    for verb in fixtures.ALTERNATION_VERBS:
        for i in range(instances):
            fresh_doc, _ = fixtures.task_scene()
            session.reset_world(scenario_from_dict(fresh_doc))
            alternation = 1 if verb in ("pick", "put") else rng.choice([1, 2])
            before = (session.instructor_turns, session.agent_questions)
            out = session.handle_turn(
                fixtures.INSTANCE_SENTENCES[(verb, alternation)]
            )
            exchanges = 0
            while session.has_pending():
                exchanges += 1
                if exchanges > MAX_EXCHANGES:
                    raise RuntimeError(f"{verb} instance did not converge")
                out += session.handle_turn(fixtures.INSTANCE_GOALS[verb])
            if any("cannot" in line for line in out):
                raise RuntimeError(f"{verb} instance failed: {out}")
            rows.append(AltRow(config, verb, alternation, i,
                               _interaction_count(session, before)))
    return AltReport(config, training, rows)


# Scripted dialog replay ----------------------------------------------------

def replay_clarification_dialog(seed: int = 0) -> str:
    """Replay the four-turn identification dialog; returns the transcript.

    The instructor starts with a bare pronoun and supplies one cue per
    question until the pantry's blue cylinder is picked up.
    """
    doc, words = fixtures.clarification_scene()
    session = Session(scenario_from_dict(doc),
                      ModelConfig.from_name("p+t+a+d"), seed=seed)
    session.load_lexicon_doc(fixtures.reference_lexicon())
    oracle = ScriptedInstructor(words, lambda: session.state)
    session.handle_turn("pick it up.")
    guard = 0
    while session.has_pending():
        guard += 1
        if guard > MAX_EXCHANGES:
            raise RuntimeError("dialog did not converge")
        session.handle_turn(oracle.respond(session, {"dobj": "blue-cyl-a"}))
    return "\n".join(session.transcript) + "\n"


def replay_script(scenario_key: str, lines, model: str = "p+t+a+d",
                  seed: int = 0, lexicon_doc: dict | None = None) -> str:
    """Feed a scripted turn sequence to a fresh session; returns the
    transcript."""
    from tabletalk.data import scenario_path
    from tabletalk.world import load_scenario

    session = Session(load_scenario(scenario_path(scenario_key)),
                      ModelConfig.from_name(model), seed=seed)
    session.load_lexicon_doc(lexicon_doc or fixtures.reference_lexicon())
    for line in lines:
        session.handle_turn(line)
    return "\n".join(session.transcript) + "\n"


# Report emission -------------------------------------------------------------

def re_matrix_table(rows: list[ReRow]) -> str:
    lines = ["model\tscenario\tqueries\tcorrect"]
    for r in rows:
        lines.append(f"{r.model}\t{r.scenario}\t{r.queries}\t{r.correct}")
    return "\n".join(lines) + "\n"


def re_matrix_doc(rows: list[ReRow]) -> dict:
    return {
        "cells": [
            {"model": r.model, "scenario": r.scenario, "queries": r.queries,
             "correct": r.correct,
             "per_re": [{"utterance": u, "path": p, "queries": q}
                        for u, p, q in r.per_re]}
            for r in rows
        ]
    }


def alt_report_table(report: AltReport) -> str:
    lines = [f"# training interactions: "
             + ", ".join(f"{v}={n}" for v, n in sorted(report.training.items())),
             "config\tverb\talternation\tinstance\tinteractions"]
    for r in report.rows:
        lines.append(f"{r.config}\t{r.verb}\t{r.alternation}"
                     f"\t{r.instance}\t{r.interactions}")
    return "\n".join(lines) + "\n"


def alt_report_doc(report: AltReport) -> dict:
    return {
        "config": report.config,
        "training": report.training,
        "instances": [
            {"verb": r.verb, "alternation": r.alternation,
             "instance": r.instance, "interactions": r.interactions}
            for r in report.rows
        ],
    }


def write_report(doc: dict, path: str | Path) -> None:
    Path(path).write_text(canonical_json(doc), encoding="utf-8")
