"""Parser for the XML-style speech-grammar dialect.

A grammar document looks like::

    <GRAMMAR>
     <RULE NAME="F_2" TOPLEVEL="ACTIVE">
      <RULEREF NAME="DonotCare"/>
      <RULEREF NAME="KeyConcept"/>
      <RULEREF NAME="DonotCare"/>
     </RULE>
     <RULE NAME="KeyConcept">
      <P> Surrender Value </P>
      <P> Maturity Value </P>
     </RULE>
    </GRAMMAR>

Dialect semantics:

* a run of consecutive ``<P>`` children forms a single alternation group
  (one phrase is chosen from the run);
* ``<o> ... </o>`` is an optional group and may nest;
* bare text between tags is a literal word sequence;
* ``<RULEREF NAME="X"/>`` splices in rule ``X``; the builtin name
  ``DonotCare`` is a wildcard standing for any, possibly empty, token run;
* exactly one rule carries ``TOPLEVEL="ACTIVE"``;
* rule references must form an acyclic graph (checked at compile time,
  see :mod:`helpline.automaton`).

Tag and attribute names are case-sensitive; ``<p>`` is not ``<P>``.
Phrase text and bare words are normalized with :func:`helpline.tokens.tokenize`.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Union

from .tokens import TokenSeq, tokenize

WILDCARD_RULE = "DonotCare"


class GrammarError(Exception):
    """Base class for grammar parsing and compilation failures."""


class MalformedDocumentError(GrammarError):
    """The document is not well-formed or violates the dialect structure."""


class DuplicateRuleNameError(GrammarError):
    pass


class NoToplevelRuleError(GrammarError):
    pass


class MultipleToplevelRulesError(GrammarError):
    pass


class UnresolvedRuleRefError(GrammarError):
    pass


class RecursiveRuleError(GrammarError):
    pass


@dataclass(frozen=True)
class Words:
    tokens: TokenSeq


@dataclass(frozen=True)
class RuleRef:
    name: str


@dataclass(frozen=True)
class OptionalGroup:
    items: tuple["Item", ...]


@dataclass(frozen=True)
class PhraseAlt:
    phrases: tuple[TokenSeq, ...]


Item = Union[Words, RuleRef, OptionalGroup, PhraseAlt]


@dataclass(frozen=True)
class Rule:
    name: str
    toplevel: bool
    body: tuple[Item, ...]


@dataclass(frozen=True)
class GrammarAst:
    rules: tuple[Rule, ...]

    def toplevel(self) -> Rule:
        for rule in self.rules:
            if rule.toplevel:
                return rule
        raise NoToplevelRuleError("grammar has no toplevel rule")

    def rule(self, name: str) -> Rule:
        for rule in self.rules:
            if rule.name == name:
                return rule
        raise UnresolvedRuleRefError(f"no rule named {name!r}")

    def has_rule(self, name: str) -> bool:
        return any(rule.name == name for rule in self.rules)


def parse_grammar(text: str) -> GrammarAst:
    """Parse a grammar document into its AST.

    Raises MalformedDocumentError on tag-level problems,
    DuplicateRuleNameError, and NoToplevelRuleError /
    MultipleToplevelRulesError on toplevel-marker problems. Unresolved
    rule references are tolerated here and rejected by ``compile``.
    """
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise MalformedDocumentError(f"document is not well-formed: {exc}") from exc

    if root.tag != "GRAMMAR":
        raise MalformedDocumentError(f"root element must be <GRAMMAR>, got <{root.tag}>")
    if root.text and root.text.strip():
        raise MalformedDocumentError("bare text is not allowed directly under <GRAMMAR>")

    rules: list[Rule] = []
    seen: set[str] = set()
    for child in root:
        if child.tag != "RULE":
            raise MalformedDocumentError(f"only <RULE> may appear under <GRAMMAR>, got <{child.tag}>")
        if child.tail and child.tail.strip():
            raise MalformedDocumentError("bare text is not allowed directly under <GRAMMAR>")
        name = child.get("NAME")
        if not name:
            raise MalformedDocumentError("<RULE> requires a NAME attribute")
        if name == WILDCARD_RULE:
            raise MalformedDocumentError(f"rule name {WILDCARD_RULE!r} is reserved for the builtin wildcard")
        if name in seen:
            raise DuplicateRuleNameError(f"rule {name!r} defined twice")
        seen.add(name)
        toplevel = child.get("TOPLEVEL") == "ACTIVE"
        rules.append(Rule(name=name, toplevel=toplevel, body=_parse_items(child)))

    n_top = sum(1 for rule in rules if rule.toplevel)
    if n_top == 0:
        raise NoToplevelRuleError("grammar must contain exactly one TOPLEVEL=\"ACTIVE\" rule")
    if n_top > 1:
        raise MultipleToplevelRulesError("grammar contains more than one toplevel rule")
    return GrammarAst(rules=tuple(rules))


def _parse_items(elem: ET.Element) -> tuple[Item, ...]:
    """Build the item sequence for a rule body or an <o> group.

    Consecutive <P> children collapse into one PhraseAlt; any literal word
    run or non-<P> element in between closes the group.
    """
    items: list[Item] = []
    pending_phrases: list[TokenSeq] = []

    def flush_phrases() -> None:
        if pending_phrases:
            items.append(PhraseAlt(phrases=tuple(pending_phrases)))
            pending_phrases.clear()

    def add_text(text: str | None) -> None:
        tokens = tokenize(text) if text else ()
        if tokens:
            flush_phrases()
            items.append(Words(tokens=tokens))

    add_text(elem.text)
    for child in elem:
        if child.tag == "P":
            if len(child):
                raise MalformedDocumentError("<P> may contain only phrase text")
            phrase = tokenize(child.text or "")
            if not phrase:
                raise MalformedDocumentError("<P> must contain a non-empty phrase")
            pending_phrases.append(phrase)
        elif child.tag == "RULEREF":
            flush_phrases()
            name = child.get("NAME")
            if not name:
                raise MalformedDocumentError("<RULEREF> requires a NAME attribute")
            if (child.text and child.text.strip()) or len(child):
                raise MalformedDocumentError("<RULEREF> must be empty")
            items.append(RuleRef(name=name))
        elif child.tag == "o":
            flush_phrases()
            items.append(OptionalGroup(items=_parse_items(child)))
        else:
            raise MalformedDocumentError(f"unexpected element <{child.tag}> in rule body")
        add_text(child.tail)
    flush_phrases()
    return tuple(items)
