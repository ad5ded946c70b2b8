"""String distance and grammar-coverage scoring."""

from __future__ import annotations

from .automaton import WordAutomaton, matches
from .tokens import TokenSeq


class EmptyCorpusError(Exception):
    pass


def word_edit_distance(a: TokenSeq, b: TokenSeq) -> int:
    """Word-level Levenshtein distance with unit costs."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, wa in enumerate(a, start=1):
        cur = [i]
        for j, wb in enumerate(b, start=1):
            cur.append(min(
                prev[j] + 1,
                cur[j - 1] + 1,
                prev[j - 1] + (wa != wb),
            ))
        prev = cur
    return prev[len(b)]


def ux_score(a: WordAutomaton, natural_corpus: list[TokenSeq]) -> float:
    """Fraction of corpus utterances the grammar accepts (wildcards active)."""
    if not natural_corpus:
        raise EmptyCorpusError("cannot score an empty corpus")
    hits = sum(1 for utt in natural_corpus if matches(a, utt))
    return hits / len(natural_corpus)
