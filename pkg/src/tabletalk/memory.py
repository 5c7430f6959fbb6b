"""Long-term grounding memory.

Per-attribute kNN classifiers over perceptual symbols, word-to-payload
bindings (perceptual symbol, spatial composition id, or task id), and
recency-based activation that yields the active and attended object sets.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from tabletalk.world import FEATURE_DIMS

PERCEPT = "percept"
SPATIAL = "spatial"
TASK = "task"

ACTIVATION_DECAY = 0.5   # exponent of the power-law recency decay
DEFAULT_ACTIVE_N = 3     # size of the active set


class NoClassifier(KeyError):
    pass


class DimensionMismatch(ValueError):
    pass


class NonMonotoneTick(ValueError):
    pass


@dataclass(frozen=True)
class PerceptualSymbol:
    attribute: str
    label: str


class AttributeClassifier:
    """Incremental kNN over one attribute's feature space."""

    def __init__(self, attribute: str, k: int = 1):
        if attribute not in FEATURE_DIMS:
            raise NoClassifier(attribute)
        if k < 1 or k % 2 == 0:
            raise ValueError("k must be a small odd positive integer")
        self.attribute = attribute
        self.dims = FEATURE_DIMS[attribute]
        self.k = k
        self.examples: list[tuple[tuple[float, ...], PerceptualSymbol]] = []

    def add_example(self, vector, symbol: PerceptualSymbol) -> None:
        vec = tuple(float(x) for x in vector)
        if len(vec) != self.dims:
            raise DimensionMismatch(
                f"{self.attribute} expects {self.dims} dims, got {len(vec)}"
            )
        self.examples.append((vec, symbol))

    def classify(self, vector) -> PerceptualSymbol | None:
        """Majority label among the k nearest examples; None when untrained.

        Ties break toward the label with smaller mean distance, then
        lexicographically.
        """
        if not self.examples:
            return None
        vec = np.asarray(vector, dtype=float)
        if vec.shape != (self.dims,):
            raise DimensionMismatch(
                f"{self.attribute} expects {self.dims} dims, got {vec.shape}"
            )
        dists = [
            (float(np.linalg.norm(vec - np.asarray(ex))), sym)
            for ex, sym in self.examples
        ]
        dists.sort(key=lambda t: (t[0], t[1].label))
        top = dists[: min(self.k, len(dists))]
        votes = Counter(sym.label for _, sym in top)
        best = max(votes.values())
        contenders = [label for label, n in votes.items() if n == best]
        if len(contenders) == 1:
            return next(sym for _, sym in top if sym.label == contenders[0])
        mean_d = {
            label: float(np.mean([d for d, s in top if s.label == label]))
            for label in contenders
        }
        winner = min(contenders, key=lambda label: (mean_d[label], label))
        return next(sym for _, sym in top if sym.label == winner)


@dataclass(frozen=True)
class WordBinding:
    """One word-to-referent map: the word's modal payload of a given kind."""

    word: str
    kind: str          # percept | spatial | task
    payload: object    # PerceptualSymbol | composition id | verb id


class GroundingMemory:
    """Classifiers, word bindings, and access-recency records."""

    def __init__(self, k: int = 1, active_n: int = DEFAULT_ACTIVE_N):
        self.classifiers = {attr: AttributeClassifier(attr, k) for attr in FEATURE_DIMS}
        self.bindings: dict[tuple[str, str], WordBinding] = {}
        self.access_ticks: dict[str, list[int]] = {}
        self.active_n = active_n
        self._label_counts = {attr: 0 for attr in FEATURE_DIMS}

    # Word bindings ----------------------------------------------------

    def lookup(self, word: str, kind: str):
        """Payload bound to (word, kind), or None on a miss."""
        binding = self.bindings.get((word, kind))
        return binding.payload if binding else None

    def bind(self, word: str, kind: str, payload) -> WordBinding:
        binding = WordBinding(word, kind, payload)
        self.bindings[(word, kind)] = binding
        return binding

    def word_for_symbol(self, symbol: PerceptualSymbol) -> str | None:
        for (word, kind), binding in sorted(self.bindings.items()):
            if kind == PERCEPT and binding.payload == symbol:
                return word
        return None

    def percept_words(self) -> dict[str, PerceptualSymbol]:
        return {
            word: binding.payload
            for (word, kind), binding in self.bindings.items()
            if kind == PERCEPT
        }

    # Perceptual training ----------------------------------------------

    def classify(self, attribute: str, vector) -> PerceptualSymbol | None:
        if attribute not in self.classifiers:
            raise NoClassifier(attribute)
        return self.classifiers[attribute].classify(vector)

    def add_training_example(self, attribute: str, vector, word: str) -> PerceptualSymbol:
        """Append an example; mints a fresh symbol and binding for new words."""
        if attribute not in self.classifiers:
            raise NoClassifier(attribute)
        symbol = self.lookup(word, PERCEPT)
        if symbol is None:
            symbol = PerceptualSymbol(
                attribute, f"{attribute}-{self._label_counts[attribute]}"
            )
            self._label_counts[attribute] += 1
            self.bind(word, PERCEPT, symbol)
        elif symbol.attribute != attribute:
            raise DimensionMismatch(
                f"{word!r} is already a {symbol.attribute} word"
            )
        self.classifiers[attribute].add_example(vector, symbol)
        return symbol

    # Recency activation -----------------------------------------------

    def record_access(self, obj: str, tick: int) -> None:
        ticks = self.access_ticks.setdefault(obj, [])
        if ticks and tick < ticks[-1]:
            raise NonMonotoneTick(f"{obj}: tick {tick} after {ticks[-1]}")
        if not ticks or ticks[-1] != tick:
            ticks.append(tick)

    def activation(self, obj: str, now: int) -> float:
        # Accesses at or after `now` count as just-happened.
        ticks = self.access_ticks.get(obj, [])
        return sum(max(now - t + 1, 1) ** -ACTIVATION_DECAY for t in ticks)

    def top_active(self, n: int, now: int) -> list[str]:
        """The n highest-activation objects, most active first."""
        if n <= 0:
            return []
        scored = [
            (self.activation(obj, now), obj)
            for obj in self.access_ticks
            if self.access_ticks[obj]
        ]
        scored.sort(key=lambda t: (-t[0], t[1]))
        return [obj for _, obj in scored[:n]]


@dataclass(frozen=True)
class AttentionSets:
    """Focus, active, attended, and perceivable entity sets for one tick."""

    o_stack: frozenset[str]
    o_active: tuple[str, ...]
    o_attend: frozenset[str]
    o_percept: frozenset[str]


def attention(memory: GroundingMemory, percept_ids, o_stack,
              n: int | None = None, now: int = 0) -> AttentionSets:
    """Compute the attention sets against the current percept snapshot."""
    percept = frozenset(percept_ids)
    stack = frozenset(o_stack) & percept
    active = tuple(
        obj for obj in memory.top_active(n if n is not None else memory.active_n, now)
        if obj in percept
    )
    return AttentionSets(
        o_stack=stack,
        o_active=active,
        o_attend=stack | frozenset(active),
        o_percept=percept,
    )
