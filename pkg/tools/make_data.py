"""Regenerate the shipped data files from the fixture builders."""

import json
from pathlib import Path

from tabletalk import fixtures
from tabletalk.world import canonical_json, scenario_from_dict, scenario_to_dict

DATA = Path(__file__).resolve().parent.parent / "src" / "tabletalk" / "data"


def strip_words(builder, *args):
    doc, _ = builder(*args)
    # Normalize to the canonical entity ordering.
    return scenario_to_dict(scenario_from_dict(doc))


def main():
    DATA.mkdir(exist_ok=True)
    out = {
        "scenario_two_object.json": strip_words(fixtures.two_object_scene),
        "scenario_clarification.json": strip_words(fixtures.clarification_scene),
        "scenario_tasks.json": strip_words(fixtures.task_scene),
        "lexicon_reference.json": fixtures.reference_lexicon(),
        "lexicon_tasks.json": fixtures.task_lexicon(),
        "corpus_reference.json": fixtures.reference_corpus(),
    }
    for level in (1, 2, 3, 4):
        out[f"scenario_ambiguity_{level}.json"] = strip_words(
            fixtures.ambiguity_scene, level
        )
    for name, doc in sorted(out.items()):
        (DATA / name).write_text(canonical_json(doc), encoding="utf-8")
        print("wrote", DATA / name)


if __name__ == "__main__":
    main()
