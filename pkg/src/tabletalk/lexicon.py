"""Lexicon bootstrap files.

Same canonical structured-text format as scenario documents. Entries
pre-train attribute classifiers, register spatial compositions, and load
serialized verb networks so experiments start from a known lexicon.
"""

from __future__ import annotations

import json
from pathlib import Path

from tabletalk import spatial as spatmod, tasks as taskmod
from tabletalk.memory import GroundingMemory, SPATIAL, TASK
from tabletalk.spatial import SpatialStore
from tabletalk.world import canonical_json


class MalformedLexicon(ValueError):
    pass


def load_lexicon(path: str | Path, memory: GroundingMemory,
                 spatial_store: SpatialStore,
                 networks: dict[str, taskmod.TaskNetwork]) -> None:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    load_lexicon_doc(doc, memory, spatial_store, networks, source=str(path))


def load_lexicon_doc(doc: dict, memory: GroundingMemory,
                     spatial_store: SpatialStore,
                     networks: dict[str, taskmod.TaskNetwork],
                     source: str = "<lexicon>") -> None:
    path = source
    for entry in doc.get("entries", []):
        kind = entry.get("kind")
        word = entry.get("word")
        if not word or not kind:
            raise MalformedLexicon(f"{path}: entry needs word and kind")
        if kind == "percept":
            for vec in entry.get("vectors", []):
                memory.add_training_example(entry["attribute"], vec, word)
        elif kind == "spatial":
            comp = spatmod.composition_from_dict(entry["composition"])
            spatial_store.add(comp)
            memory.bind(word, SPATIAL, comp.id)
        elif kind == "task":
            net = taskmod.network_from_dict(entry["network"])
            networks[net.verb] = net
            memory.bind(word, TASK, net.verb)
        else:
            raise MalformedLexicon(f"{path}: unknown kind {kind!r}")


def lexicon_to_dict(memory: GroundingMemory, spatial_store: SpatialStore,
                    networks: dict[str, taskmod.TaskNetwork]) -> dict:
    entries = []
    by_symbol: dict = {}
    for (word, kind), binding in sorted(memory.bindings.items()):
        if kind == "percept":
            by_symbol[binding.payload] = word
    grouped: dict[str, list] = {}
    for attr, clf in sorted(memory.classifiers.items()):
        for vec, sym in clf.examples:
            grouped.setdefault(by_symbol.get(sym, sym.label), []).append((attr, vec))
    for word in sorted(grouped):
        attr = grouped[word][0][0]
        entries.append({
            "word": word,
            "kind": "percept",
            "attribute": attr,
            "vectors": [list(vec) for a, vec in grouped[word]],
        })
    for (word, kind), binding in sorted(memory.bindings.items()):
        if kind == SPATIAL and binding.payload in spatial_store:
            entries.append({
                "word": word,
                "kind": "spatial",
                "composition": spatmod.composition_to_dict(
                    spatial_store.get(binding.payload)
                ),
            })
        elif kind == TASK and binding.payload in networks:
            entries.append({
                "word": word,
                "kind": "task",
                "network": taskmod.network_to_dict(networks[binding.payload]),
            })
    return {"entries": entries}


def save_lexicon(path: str | Path, memory: GroundingMemory,
                 spatial_store: SpatialStore,
                 networks: dict[str, taskmod.TaskNetwork]) -> None:
    Path(path).write_text(
        canonical_json(lexicon_to_dict(memory, spatial_store, networks)),
        encoding="utf-8",
    )
