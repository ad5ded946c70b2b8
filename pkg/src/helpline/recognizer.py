"""Recognition-engine simulator: word-level noise channel plus grammar decoder.

The acoustic layer is replaced by a seeded channel that corrupts the true
token sequence; the decoder then searches the grammar automaton for the
language member closest to the corrupted observation.  A pure-wildcard
grammar therefore degenerates to a passthrough recognizer, while a tight
grammar snaps observations back onto the few strings it allows.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .automaton import WILDCARD, Arc, WordAutomaton, topo_order
from .tokens import TokenSeq


class EmptyVocabError(Exception):
    """A substitution or insertion was drawn but no candidate word exists."""


@dataclass(frozen=True)
class NoiseModel:
    """Independent per-word corruption channel.

    Each true word is deleted with probability ``p_del`` or substituted
    with probability ``p_sub`` (using its confusion-table entry when one
    exists, otherwise a uniform draw from ``vocab``); after every
    position an extra uniform vocabulary word is inserted with
    probability ``p_ins``.  Identical seed and inputs give identical
    output.
    """

    p_sub: float = 0.0
    p_del: float = 0.0
    p_ins: float = 0.0
    confusion_table: dict[str, tuple[str, ...]] = field(default_factory=dict)
    vocab: tuple[str, ...] = ()
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_sub + self.p_del <= 1.0:
            raise ValueError("p_sub + p_del must lie in [0, 1]")
        if not 0.0 <= self.p_ins <= 1.0:
            raise ValueError("p_ins must lie in [0, 1]")


@dataclass(frozen=True)
class RecognitionResult:
    hypothesis: TokenSeq
    cost: int | None
    accepted: bool
    mode: str | None = None


def apply_noise(truth: TokenSeq, nm: NoiseModel) -> TokenSeq:
    """Corrupt a token sequence; deterministic for a fixed model seed."""
    rng = random.Random(nm.seed)

    def uniform_word() -> str:
        if not nm.vocab:
            raise EmptyVocabError("noise model has an empty vocabulary")
        return nm.vocab[rng.randrange(len(nm.vocab))]

    out: list[str] = []
    for word in truth:
        u = rng.random()
        if u < nm.p_del:
            pass
        elif u < nm.p_del + nm.p_sub:
            confusable = nm.confusion_table.get(word)
            if confusable:
                out.append(confusable[rng.randrange(len(confusable))])
            else:
                out.append(uniform_word())
        else:
            out.append(word)
        if rng.random() < nm.p_ins:
            out.append(uniform_word())
    return tuple(out)


def default_threshold(observed: TokenSeq) -> int:
    """Reject hypotheses costing more than half the observed length."""
    return math.ceil(0.5 * len(observed))


def decode(
    a: WordAutomaton,
    observed: TokenSeq,
    reject_threshold: float = math.inf,
    mode: str | None = None,
) -> RecognitionResult:
    """Minimum-edit-distance decoding of ``observed`` against the grammar.

    Finds the language member closest to the observation under unit-cost
    word edits, with wildcard arcs absorbing observed tokens verbatim at
    zero cost.  Ties break toward the shorter, then lexicographically
    smaller, hypothesis.  Dynamic programming over (automaton position x
    observed prefix); the language is never enumerated.
    """
    if reject_threshold < 0:
        raise ValueError("reject_threshold must be >= 0")

    best = _search(a, observed)
    if best is None or best[0] > reject_threshold:
        return RecognitionResult(hypothesis=(), cost=None, accepted=False, mode=mode)
    cost, _, hypothesis = best
    return RecognitionResult(hypothesis=hypothesis, cost=cost, accepted=True, mode=mode)


# A DP value is (cost, hypothesis length, hypothesis tokens); tuple order
# implements the tie-breaking rule and is preserved under suffix extension.
_Value = tuple[int, int, TokenSeq]


def _search(a: WordAutomaton, observed: TokenSeq) -> _Value | None:
    if not a.finals:
        return None
    out = a.outgoing()

    # Positions: states in topological order, each followed by transit
    # markers for its outgoing wildcard arcs.  All same-prefix moves go
    # strictly forward in this order, so one sweep per prefix suffices.
    positions: list[int | Arc] = []
    for state in topo_order(a):
        positions.append(state)
        positions.extend(arc for arc in out[state] if arc[1] == WILDCARD)

    n = len(observed)
    cur: dict[int | Arc, _Value] = {a.start: (0, 0, ())}
    for j in range(n + 1):
        # moves that stay at prefix j
        for pos in positions:
            val = cur.get(pos)
            if val is None:
                continue
            cost, hyp_len, hyp = val
            if isinstance(pos, int):
                for arc in out[pos]:
                    if arc[1] == WILDCARD:
                        _relax(cur, arc, val)  # enter the wildcard arc
                    else:
                        _relax(cur, arc[2], (cost + 1, hyp_len + 1, hyp + (arc[1],)))
            else:
                _relax(cur, pos[2], val)  # leave the wildcard arc
        if j == n:
            break
        # moves that consume observed[j]
        tok = observed[j]
        nxt: dict[int | Arc, _Value] = {}
        for pos, (cost, hyp_len, hyp) in cur.items():
            if isinstance(pos, int):
                _relax(nxt, pos, (cost + 1, hyp_len, hyp))  # stray observed token
                for arc in out[pos]:
                    if arc[1] == WILDCARD:
                        continue
                    step = 0 if arc[1] == tok else 1
                    _relax(nxt, arc[2], (cost + step, hyp_len + 1, hyp + (arc[1],)))
            else:
                _relax(nxt, pos, (cost, hyp_len + 1, hyp + (tok,)))  # absorb verbatim
        cur = nxt

    candidates = [cur[f] for f in a.finals if f in cur]
    return min(candidates) if candidates else None


def _relax(table: dict, pos, value: _Value) -> None:
    old = table.get(pos)
    if old is None or value < old:
        table[pos] = value


def recognize(
    mode: str,
    grammars: dict[str, WordAutomaton],
    truth: TokenSeq,
    nm: NoiseModel,
    reject_threshold: float | None = None,
) -> RecognitionResult:
    """Run the simulated engine for one mode: corrupt, then decode."""
    key = mode.lower()
    if key not in grammars:
        raise KeyError(f"no grammar loaded for mode {mode!r}")
    observed = apply_noise(truth, nm)
    if reject_threshold is None:
        reject_threshold = default_threshold(observed)
    return decode(grammars[key], observed, reject_threshold, mode=mode.upper())
