"""Word-token normalization shared by every stage of the pipeline."""

from __future__ import annotations

import string

TokenSeq = tuple[str, ...]

_PUNCT = str.maketrans("", "", string.punctuation)


def tokenize(text: str) -> TokenSeq:
    """Normalize free text into a word-token sequence.

    Lowercases, splits on whitespace, and drops punctuation characters from
    every token, so "Policy TRS1027465." becomes ("policy", "trs1027465").
    Tokens that consist only of punctuation disappear.
    """
    out = []
    for raw in text.lower().split():
        tok = raw.translate(_PUNCT)
        if tok:
            out.append(tok)
    return tuple(out)


def is_normalized(tokens: TokenSeq) -> bool:
    """True when every token is non-empty and free of whitespace."""
    return all(tok and not any(c.isspace() for c in tok) for tok in tokens)
