"""Rule-based language engine: fuzzy phrase repair, frame extraction,
validation against an intent schema, and assumption filling.

The engine's lexicon pairs intent-bearing concept phrases ("surrender
value") with slot-bearing keyword phrases and value patterns (a policy id
looks like three letters followed by seven digits).  ``correct`` repairs
near-miss recognizer output at the character level; ``extract_frame``
reduces any phrasing of a question to one canonical frame.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .tokens import TokenSeq, tokenize

VALID = "valid"
INVALID = "invalid"
ASSUMED = "assumed"

NO_INTENT = "no_intent"
AMBIGUOUS_INTENT = "ambiguous_intent"
MISSING_SLOT = "missing_slot"


class UnknownIntentError(Exception):
    pass


@dataclass(frozen=True)
class SlotSpec:
    phrases: tuple[TokenSeq, ...] = ()
    pattern: re.Pattern | None = None
    uppercase_value: bool = False


@dataclass(frozen=True)
class ConceptLexicon:
    """Surface phrases for intents and slots; first phrase is canonical."""

    key_concepts: dict[str, tuple[TokenSeq, ...]]
    key_words: dict[str, SlotSpec]

    def entries(self) -> list[tuple[str, TokenSeq, TokenSeq]]:
        """(owner id, phrase, canonical phrase) in lexicon order."""
        out = []
        for intent, phrases in self.key_concepts.items():
            for phrase in phrases:
                out.append((intent, phrase, phrases[0]))
        for slot, spec in self.key_words.items():
            for phrase in spec.phrases:
                out.append((slot, phrase, spec.phrases[0]))
        return out


@dataclass(frozen=True)
class IntentSpec:
    required: tuple[str, ...] = ()
    optional: tuple[str, ...] = ()
    template: str = ""


@dataclass(frozen=True)
class IntentSchema:
    intents: dict[str, IntentSpec]


@dataclass(frozen=True)
class AgentContext:
    agent_id: str
    policies: tuple[str, ...] = ()
    last_commission_date: str | None = None
    last_commission_amount: float | None = None


@dataclass(frozen=True)
class QueryFrame:
    """Canonical meaning of one query: intent, slot values, validity.

    ``source`` records the corrected token sequence the frame came from
    and is excluded from equality, so variant phrasings of one question
    compare equal.
    """

    intent: str | None
    slots: dict[str, str] = field(default_factory=dict)
    status: str = INVALID
    reason: str | None = None
    assumed: tuple[str, ...] = ()
    source: TokenSeq = field(default=(), compare=False)


def missing_slot_reason(slot: str) -> str:
    return f"{MISSING_SLOT}:{slot}"


def load_lexicon(path: str | Path) -> tuple[ConceptLexicon, IntentSchema]:
    """Read the combined lexicon/schema file.

    The file is an INI document with one ``[intent <id>]`` section per
    intent (keys: phrases, requires, optional, template) and one
    ``[slot <id>]`` section per slot (keys: phrases, pattern, canon).
    Phrase lists are separated by ``;``.
    """
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise FileNotFoundError(path)

    concepts: dict[str, tuple[TokenSeq, ...]] = {}
    slots: dict[str, SlotSpec] = {}
    intents: dict[str, IntentSpec] = {}
    for section in parser.sections():
        kind, _, name = section.partition(" ")
        name = name.strip()
        body = parser[section]
        if kind == "intent" and name:
            phrases = _phrase_list(body.get("phrases", ""))
            if not phrases:
                raise ValueError(f"intent {name!r} lists no phrases")
            concepts[name] = phrases
            intents[name] = IntentSpec(
                required=_id_list(body.get("requires", "")),
                optional=_id_list(body.get("optional", "")),
                template=body.get("template", name).strip(),
            )
        elif kind == "slot" and name:
            pattern = body.get("pattern", "").strip()
            slots[name] = SlotSpec(
                phrases=_phrase_list(body.get("phrases", "")),
                pattern=re.compile(pattern) if pattern else None,
                uppercase_value=body.get("canon", "").strip() == "upper",
            )
        else:
            raise ValueError(f"unrecognized lexicon section [{section}]")

    schema = IntentSchema(intents=intents)
    for intent, spec in intents.items():
        for slot in spec.required + spec.optional:
            if slot not in slots:
                raise ValueError(f"intent {intent!r} references undefined slot {slot!r}")
    return ConceptLexicon(key_concepts=concepts, key_words=slots), schema


def _phrase_list(raw: str) -> tuple[TokenSeq, ...]:
    return tuple(tokenize(part) for part in raw.split(";") if tokenize(part))


def _id_list(raw: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in raw.replace(";", ",").split(",") if part.strip())


def char_edit_distance(a: str, b: str, cutoff: int | None = None) -> int:
    """Character-level Levenshtein distance; may overshoot past ``cutoff``."""
    if cutoff is not None and abs(len(a) - len(b)) > cutoff:
        return abs(len(a) - len(b))
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        if cutoff is not None and min(cur) > cutoff:
            return cutoff + 1
        prev = cur
    return prev[len(b)]


def correct(observed: TokenSeq, lex: ConceptLexicon, max_edit: int = 2) -> TokenSeq:
    """Replace spans that nearly match a lexicon phrase with its canonical form.

    Spans are contiguous token runs compared to phrases at the character
    level; the longest matching span wins, then the lowest distance, then
    the earliest lexicon entry.  Non-matching tokens pass through.  The
    scan is iterated to a fixed point so the operation is idempotent.
    """
    entries = lex.entries()
    if not entries:
        return observed
    max_span = max(len(phrase) for _, phrase, _ in entries) + max_edit

    def one_pass(tokens: TokenSeq) -> TokenSeq:
        out: list[str] = []
        i = 0
        while i < len(tokens):
            best = None  # (-span_len, distance, entry_order, canonical)
            for span_len in range(1, min(max_span, len(tokens) - i) + 1):
                span = " ".join(tokens[i:i + span_len])
                for order, (_, phrase, canonical) in enumerate(entries):
                    dist = char_edit_distance(span, " ".join(phrase), cutoff=max_edit)
                    if dist <= max_edit:
                        key = (-span_len, dist, order, canonical)
                        if best is None or key < best:
                            best = key
            if best is None:
                out.append(tokens[i])
                i += 1
            else:
                out.extend(best[3])
                i += -best[0]
        return tuple(out)

    seen = {observed}
    tokens = observed
    for _ in range(16):  # replacement shrinks spans in practice; cap for safety
        nxt = one_pass(tokens)
        if nxt == tokens or nxt in seen:
            return nxt
        seen.add(nxt)
        tokens = nxt
    return tokens


def _find_phrases(tokens: TokenSeq, phrases: tuple[TokenSeq, ...]) -> bool:
    for phrase in phrases:
        k = len(phrase)
        if k == 0:
            continue
        for i in range(len(tokens) - k + 1):
            if tokens[i:i + k] == phrase:
                return True
    return False


def extract_frame(corrected: TokenSeq, lex: ConceptLexicon, schema: IntentSchema) -> QueryFrame:
    """Reduce a corrected token sequence to a canonical query frame.

    Exactly one key concept must occur; slots fill from value patterns
    (and phrase-valued keywords) anywhere in the sequence, so word order
    never matters.  Zero or multiple concepts yield an invalid frame
    rather than an error.
    """
    found = [intent for intent, phrases in lex.key_concepts.items()
             if _find_phrases(corrected, phrases)]
    if not found:
        return QueryFrame(intent=None, status=INVALID, reason=NO_INTENT, source=corrected)
    if len(found) > 1:
        return QueryFrame(intent=None, status=INVALID, reason=AMBIGUOUS_INTENT, source=corrected)

    intent = found[0]
    slots: dict[str, str] = {}
    for slot, spec in lex.key_words.items():
        if spec.pattern is not None:
            for tok in corrected:
                if spec.pattern.fullmatch(tok):
                    slots[slot] = tok.upper() if spec.uppercase_value else tok
                    break
        elif spec.phrases and _find_phrases(corrected, spec.phrases):
            slots[slot] = " ".join(spec.phrases[0])

    frame = QueryFrame(intent=intent, slots=slots, status=VALID, source=corrected)
    return validate_frame(frame, schema)


def validate_frame(f: QueryFrame, schema: IntentSchema) -> QueryFrame:
    """Mark the frame Valid, or Invalid naming the first missing required slot."""
    if f.status == ASSUMED or (f.status == INVALID and f.reason in (NO_INTENT, AMBIGUOUS_INTENT)):
        return f
    if f.intent is None:
        return replace(f, status=INVALID, reason=NO_INTENT)
    spec = schema.intents.get(f.intent)
    if spec is None:
        raise UnknownIntentError(f"intent {f.intent!r} is not in the schema")
    for slot in spec.required:
        if slot not in f.slots:
            return replace(f, status=INVALID, reason=missing_slot_reason(slot))
    return replace(f, status=VALID, reason=None)


def understand(
    observed: TokenSeq,
    lex: ConceptLexicon,
    schema: IntentSchema,
    ctx: AgentContext | None = None,
    max_edit: int = 2,
) -> QueryFrame:
    """Full engine pass: repair, extract, validate, fill assumptions."""
    corrected = correct(observed, lex, max_edit)
    frame = validate_frame(extract_frame(corrected, lex, schema), schema)
    return fill_assumptions(frame, ctx)


def fill_assumptions(f: QueryFrame, ctx: AgentContext | None) -> QueryFrame:
    """Fill a missing policy id when the caller owns exactly one policy.

    Anything other than a frame invalid for a missing ``policy_id`` with a
    unique candidate passes through unchanged; the engine never guesses
    between alternatives.
    """
    if ctx is None or f.status != INVALID or not f.reason:
        return f
    if f.reason != missing_slot_reason("policy_id"):
        return f
    if len(ctx.policies) != 1:
        return f
    slots = dict(f.slots)
    slots["policy_id"] = ctx.policies[0]
    return replace(f, slots=slots, status=ASSUMED, reason=None, assumed=("policy_id",))
