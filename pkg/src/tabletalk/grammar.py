"""Deterministic recursive-descent grammar for the instruction language.

Covers imperatives, attribute queries, teaching assertions, goal
descriptions, spatial statements and questions, and the incremental
answers an instructor gives to clarification questions. Referring
expressions are classified by surface form.
"""

from __future__ import annotations

from dataclasses import dataclass

PERSONAL_PRONOUN = "personal-pronoun"
DEMONSTRATIVE_PRONOUN = "demonstrative-pronoun"
DEMONSTRATIVE_NP = "demonstrative-NP"
DEFINITE_NP = "definite-NP"
INDEFINITE_NP = "indefinite-NP"

DETERMINERS = {"the", "a", "an", "this", "that"}
PRONOUNS = {"it"}
PARTICLES = {"up", "down", "out"}
ATTRIBUTES = {"color", "shape", "size"}
STATE_WORDS = {"cooked", "open", "closed", "on", "off"}
EMPTY_HEADS = {"object", "one", "thing"}
COPULA = "is"

# Surface prepositions; multiword frames normalize to a single lemma.
PREPOSITIONS = {
    "on", "in", "at", "near", "under", "over", "above", "below",
    "beside", "behind", "left", "right", "front", "to",
}
MULTIWORD_PREPS = [
    (("to", "the", "right", "of"), "right"),
    (("to", "the", "left", "of"), "left"),
    (("on", "the", "right", "of"), "right"),
    (("on", "the", "left", "of"), "left"),
    (("in", "front", "of"), "front"),
    (("on", "top", "of"), "on"),
    (("right", "of"), "right"),
    (("left", "of"), "left"),
    (("next", "to"), "beside"),
]

# Fixed inflection table; applied in verb position only.
VERB_LEMMAS = {
    "picks": "pick", "picked": "pick",
    "puts": "put",
    "moves": "move", "moved": "move",
    "stores": "store", "stored": "store",
    "cooks": "cook", "cooked": "cook",
    "opens": "open", "opened": "open",
    "closes": "close", "closed": "close",
}


class Unparseable(ValueError):
    def __init__(self, text: str, position: int, why: str = ""):
        self.text = text
        self.position = position
        super().__init__(f"cannot parse {text!r} at token {position}" +
                         (f": {why}" if why else ""))


@dataclass(frozen=True)
class ReferringExpression:
    form: str
    descriptors: tuple[str, ...] = ()
    head: str | None = None
    spatial: tuple[str, "ReferringExpression"] | None = None

    def __post_init__(self):
        if self.form in (PERSONAL_PRONOUN, DEMONSTRATIVE_PRONOUN):
            if self.descriptors or self.spatial:
                raise ValueError("pronouns carry no descriptors or modifiers")
        elif not self.descriptors and self.spatial is None:
            raise ValueError(f"{self.form} needs a descriptor or spatial modifier")

    def with_extra(self, descriptors=(), spatial=None) -> "ReferringExpression":
        """A copy carrying additional constraints from an answer."""
        return ReferringExpression(
            form=self.form,
            descriptors=self.descriptors + tuple(descriptors),
            head=self.head,
            spatial=spatial if spatial is not None else self.spatial,
        )


@dataclass(frozen=True)
class Imperative:
    verb: str
    dobj: ReferringExpression
    pps: tuple[tuple[str | None, ReferringExpression], ...] = ()


@dataclass(frozen=True)
class AttributeQuery:
    attribute: str
    re: ReferringExpression


@dataclass(frozen=True)
class Teach:
    word: str
    re: ReferringExpression
    attribute: str | None = None


@dataclass(frozen=True)
class GoalDescription:
    subject: ReferringExpression
    state: str | None = None
    prep: str | None = None
    object: ReferringExpression | None = None


@dataclass(frozen=True)
class Answer:
    descriptors: tuple[str, ...] = ()
    spatial: tuple[str, ReferringExpression] | None = None


@dataclass(frozen=True)
class SpatialVerify:
    left: ReferringExpression
    prep: str
    right: ReferringExpression
    question: bool = True


ParsedSentence = Imperative | AttributeQuery | Teach | GoalDescription | Answer | SpatialVerify


def tokenize(text: str) -> list[str]:
    words = text.strip().lower().split()
    out = []
    for w in words:
        w = w.strip(".?!,")
        if w:
            out.append(w)
    return out


def classify_surface_form(tokens: list[str]) -> str:
    """Surface form from the determiner/pronoun table."""
    if not tokens:
        raise Unparseable("", 0, "empty noun phrase")
    first = tokens[0]
    if first in PRONOUNS:
        return PERSONAL_PRONOUN
    if first in ("this", "that"):
        return DEMONSTRATIVE_PRONOUN if len(tokens) == 1 else DEMONSTRATIVE_NP
    if first == "the":
        return DEFINITE_NP
    if first in ("a", "an"):
        return INDEFINITE_NP
    # Bare plurals and unknown determiners fall back to definite.
    return DEFINITE_NP


class _Cursor:
    def __init__(self, tokens: list[str], text: str):
        self.tokens = tokens
        self.text = text
        self.i = 0

    def peek(self, ahead: int = 0) -> str | None:
        j = self.i + ahead
        return self.tokens[j] if j < len(self.tokens) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise Unparseable(self.text, self.i, "unexpected end")
        self.i += 1
        return tok

    def done(self) -> bool:
        return self.i >= len(self.tokens)

    def fail(self, why: str):
        raise Unparseable(self.text, self.i, why)


def _match_prep(cur: _Cursor) -> str | None:
    """Consume a prepositional frame at the cursor, returning its lemma."""
    for frame, lemma in MULTIWORD_PREPS:
        if all(cur.peek(k) == w for k, w in enumerate(frame)):
            cur.i += len(frame)
            return lemma
    tok = cur.peek()
    if tok in PREPOSITIONS:
        cur.i += 1
        return tok
    return None


def _starts_prep(cur: _Cursor) -> bool:
    mark = cur.i
    lemma = _match_prep(cur)
    cur.i = mark
    return lemma is not None


def _parse_np(cur: _Cursor, allow_pp: bool = True) -> ReferringExpression:
    tok = cur.peek()
    if tok is None:
        cur.fail("expected a noun phrase")
    if tok in PRONOUNS:
        cur.next()
        return ReferringExpression(PERSONAL_PRONOUN)
    if tok in ("this", "that"):
        cur.next()
        nxt = cur.peek()
        if nxt is None or nxt == COPULA or nxt in PARTICLES or _starts_prep(cur):
            return ReferringExpression(DEMONSTRATIVE_PRONOUN)
        words = _np_word_run(cur)
        return _np_from_words(DEMONSTRATIVE_NP, words, cur, allow_pp)
    if tok in ("the", "a", "an"):
        form = DEFINITE_NP if tok == "the" else INDEFINITE_NP
        cur.next()
        words = _np_word_run(cur)
        return _np_from_words(form, words, cur, allow_pp)
    # Bare noun phrase (no determiner): definite fallback.
    words = _np_word_run(cur)
    if not words:
        cur.fail(f"expected a noun phrase, found {tok!r}")
    return _np_from_words(DEFINITE_NP, words, cur, allow_pp)


def _np_word_run(cur: _Cursor) -> list[str]:
    """Descriptor and head words up to a preposition, copula, or end."""
    words = []
    while True:
        tok = cur.peek()
        if tok is None or tok == COPULA or tok in PARTICLES or tok in DETERMINERS:
            break
        if _starts_prep(cur):
            break
        words.append(cur.next())
    return words


def _np_from_words(form, words, cur: _Cursor, allow_pp: bool) -> ReferringExpression:
    if not words:
        cur.fail("noun phrase needs a head word")
    head = words[-1]
    descriptors = tuple(w for w in words if w not in EMPTY_HEADS)
    spatial = None
    if allow_pp and _starts_prep(cur):
        mark = cur.i
        prep = _match_prep(cur)
        nxt = cur.peek()
        if nxt is not None and (nxt in DETERMINERS or nxt in PRONOUNS):
            embedded = _parse_np(cur, allow_pp=False)
            spatial = (prep, embedded)
        else:
            cur.i = mark
    try:
        return ReferringExpression(form, descriptors, head, spatial)
    except ValueError as exc:
        raise Unparseable(cur.text, cur.i, str(exc)) from exc


def parse(text: str) -> ParsedSentence:
    """Parse one utterance; deterministic, raises Unparseable on failure."""
    tokens = tokenize(text)
    if not tokens:
        raise Unparseable(text, 0, "empty utterance")
    cur = _Cursor(tokens, text)

    if tokens[0] == "what":
        return _parse_attribute_query(cur)
    if tokens[0] == COPULA:
        return _parse_verify_question(cur)
    if tokens[0] == "the" and cur.peek(1) == "goal" and cur.peek(2) == COPULA:
        return _parse_goal(cur)
    if (
        tokens[0] == "the"
        and cur.peek(1) in ATTRIBUTES
        and cur.peek(2) == "of"
    ):
        return _parse_attribute_teach(cur)
    if COPULA in tokens:
        return _parse_copular(cur)
    if tokens[0] in DETERMINERS or tokens[0] in PRONOUNS:
        return _parse_answer(cur)
    return _parse_imperative(cur)


def _parse_attribute_query(cur: _Cursor) -> AttributeQuery:
    cur.next()  # what
    attr = cur.next()
    if attr not in ATTRIBUTES:
        cur.fail(f"unknown attribute {attr!r}")
    if cur.next() != COPULA:
        cur.fail("expected 'is'")
    re = _parse_np(cur)
    if not cur.done():
        cur.fail("trailing words")
    return AttributeQuery(attr, re)


def _parse_verify_question(cur: _Cursor) -> SpatialVerify:
    cur.next()  # is
    left = _parse_np(cur, allow_pp=False)
    prep = _match_prep(cur)
    if prep is None:
        cur.fail("expected a preposition")
    right = _parse_np(cur)
    if not cur.done():
        cur.fail("trailing words")
    return SpatialVerify(left, prep, right, question=True)


def _parse_goal(cur: _Cursor) -> GoalDescription:
    cur.i += 3  # the goal is
    subject = _parse_np(cur, allow_pp=False)
    state = None
    prep = None
    obj = None
    if cur.peek() == COPULA:
        cur.next()
    if cur.peek() in STATE_WORDS and not _starts_prep(cur):
        state = cur.next()
    if not cur.done():
        prep = _match_prep(cur)
        if prep is None:
            cur.fail("expected a preposition or state word")
        obj = _parse_np(cur)
    if not cur.done():
        cur.fail("trailing words")
    if state is None and prep is None:
        cur.fail("goal describes neither a state nor a relation")
    return GoalDescription(subject, state, prep, obj)


def _parse_attribute_teach(cur: _Cursor) -> Teach:
    cur.next()  # the
    attr = cur.next()
    cur.next()  # of
    re = _parse_np(cur, allow_pp=False)
    if cur.next() != COPULA:
        cur.fail("expected 'is'")
    word = cur.next()
    if not cur.done():
        cur.fail("trailing words")
    return Teach(word, re, attribute=attr)


def _parse_copular(cur: _Cursor):
    """NP is ... : a spatial statement or a teaching assertion."""
    left = _parse_np(cur, allow_pp=False)
    if cur.next() != COPULA:
        cur.fail("expected 'is'")
    if _starts_prep(cur):
        prep = _match_prep(cur)
        right = _parse_np(cur)
        if not cur.done():
            cur.fail("trailing words")
        return SpatialVerify(left, prep, right, question=False)
    word = cur.next()
    if not cur.done():
        cur.fail("trailing words")
    return Teach(word, left, attribute=None)


def _parse_answer(cur: _Cursor) -> Answer:
    re = _parse_np(cur)
    if not cur.done():
        cur.fail("trailing words")
    return Answer(descriptors=re.descriptors, spatial=re.spatial)


def _parse_imperative(cur: _Cursor) -> Imperative:
    verb = cur.next()
    verb = VERB_LEMMAS.get(verb, verb)
    if cur.peek() in PARTICLES:
        cur.next()
    dobj = _parse_np(cur, allow_pp=False)
    if cur.peek() in PARTICLES:
        cur.next()
    pps = []
    while not cur.done():
        prep = _match_prep(cur)
        if prep is None:
            cur.fail("expected a preposition")
        if prep == "to" and _starts_prep(cur):
            # "to the right of" fallback when spacing split the frame
            prep = _match_prep(cur)
        re = _parse_np(cur)
        # "to" marks a bare direction with no spatial relation.
        pps.append((None if prep == "to" else prep, re))
    return Imperative(verb, dobj, tuple(pps))
