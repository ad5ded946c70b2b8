"""Word-level acyclic automata compiled from grammar ASTs.

``compile_grammar_ast`` expands rule references inline, eliminates the
epsilon arcs introduced by optionals and alternations, and trims the
result, so a ``WordAutomaton`` is always an epsilon-free DAG whose arcs
carry either a word token or the wildcard symbol ``*`` (one wildcard arc
stands for any, possibly empty, run of tokens).

Language questions are answered two ways:

* ``matches`` simulates the automaton directly, giving wildcard arcs
  their "absorb anything" reading;
* ``enumerate_language`` / ``count_language`` first rewrite wildcards
  according to a policy (collapse to nothing, or keep a literal ``*``
  marker), determinize the DAG, and then walk it.  Determinizing makes
  path counting equal string counting even for ambiguous grammars.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable

from .grammar import (
    GrammarAst,
    Item,
    OptionalGroup,
    PhraseAlt,
    RecursiveRuleError,
    RuleRef,
    UnresolvedRuleRefError,
    WILDCARD_RULE,
    Words,
)
from .tokens import TokenSeq

WILDCARD = "*"

COLLAPSE = "collapse"
MARKER = "marker"
_POLICIES = (COLLAPSE, MARKER)

Arc = tuple[int, str, int]


@dataclass(frozen=True)
class WordAutomaton:
    """Acyclic word acceptor: states 0..num_states-1, labeled arcs, finals."""

    num_states: int
    start: int
    finals: frozenset[int]
    arcs: tuple[Arc, ...]

    def outgoing(self) -> dict[int, list[Arc]]:
        out: dict[int, list[Arc]] = {s: [] for s in range(self.num_states)}
        for arc in self.arcs:
            out[arc[0]].append(arc)
        return out


def compile_grammar_ast(ast: GrammarAst) -> WordAutomaton:
    """Compile an AST into a trimmed, epsilon-free word automaton.

    Raises UnresolvedRuleRefError for references to undefined rules and
    RecursiveRuleError when the rule-reference graph has a cycle.
    """
    _check_references(ast)

    states = [0, 1]
    arcs: list[tuple[int, str | None, int]] = []  # None label = epsilon

    def new_state() -> int:
        states.append(len(states))
        return len(states) - 1

    def build_items(items: Iterable[Item], src: int) -> int:
        cur = src
        for item in items:
            cur = build_item(item, cur)
        return cur

    def build_item(item: Item, src: int) -> int:
        if isinstance(item, Words):
            cur = src
            for tok in item.tokens:
                nxt = new_state()
                arcs.append((cur, tok, nxt))
                cur = nxt
            return cur
        if isinstance(item, PhraseAlt):
            end = new_state()
            for phrase in item.phrases:
                cur = src
                for tok in phrase:
                    nxt = new_state()
                    arcs.append((cur, tok, nxt))
                    cur = nxt
                arcs.append((cur, None, end))
            return end
        if isinstance(item, OptionalGroup):
            inner_end = build_items(item.items, src)
            end = new_state()
            arcs.append((inner_end, None, end))
            arcs.append((src, None, end))
            return end
        if isinstance(item, RuleRef):
            if item.name == WILDCARD_RULE:
                end = new_state()
                arcs.append((src, WILDCARD, end))
                return end
            return build_items(ast.rule(item.name).body, src)
        raise TypeError(f"unknown grammar item {item!r}")

    start, final = 0, 1
    body_end = build_items(ast.toplevel().body, start)
    arcs.append((body_end, None, final))

    return _normalize(len(states), start, {final}, arcs)


def _check_references(ast: GrammarAst) -> None:
    deps: dict[str, list[str]] = {}
    for rule in ast.rules:
        deps[rule.name] = [
            item.name
            for item in _walk_items(rule.body)
            if isinstance(item, RuleRef) and item.name != WILDCARD_RULE
        ]
        for name in deps[rule.name]:
            if not ast.has_rule(name):
                raise UnresolvedRuleRefError(f"rule {rule.name!r} references undefined rule {name!r}")

    state: dict[str, int] = {}  # 1 = on stack, 2 = done

    def visit(name: str, trail: tuple[str, ...]) -> None:
        if state.get(name) == 2:
            return
        if state.get(name) == 1:
            cycle = " -> ".join(trail + (name,))
            raise RecursiveRuleError(f"recursive rule reference: {cycle}")
        state[name] = 1
        for dep in deps[name]:
            visit(dep, trail + (name,))
        state[name] = 2

    for rule in ast.rules:
        visit(rule.name, ())


def _walk_items(items: Iterable[Item]) -> Iterable[Item]:
    for item in items:
        yield item
        if isinstance(item, OptionalGroup):
            yield from _walk_items(item.items)


def _normalize(
    num_states: int,
    start: int,
    finals: set[int],
    arcs: list[tuple[int, str | None, int]],
) -> WordAutomaton:
    """Eliminate epsilon arcs, trim, and renumber states canonically."""
    eps: dict[int, list[int]] = {}
    labeled: dict[int, list[tuple[str, int]]] = {}
    for src, label, dst in arcs:
        if label is None:
            eps.setdefault(src, []).append(dst)
        else:
            labeled.setdefault(src, []).append((label, dst))

    closure_cache: dict[int, frozenset[int]] = {}

    def closure(s: int) -> frozenset[int]:
        got = closure_cache.get(s)
        if got is None:
            acc = {s}
            stack = [s]
            while stack:
                for nxt in eps.get(stack.pop(), ()):
                    if nxt not in acc:
                        acc.add(nxt)
                        stack.append(nxt)
            got = closure_cache[s] = frozenset(acc)
        return got

    new_arcs: set[Arc] = set()
    new_finals: set[int] = set()
    for s in range(num_states):
        cl = closure(s)
        if cl & finals:
            new_finals.add(s)
        for t in cl:
            for label, dst in labeled.get(t, ()):
                new_arcs.add((s, label, dst))

    return _trim(num_states, start, new_finals, new_arcs)


def _trim(num_states: int, start: int, finals: set[int], arcs: set[Arc]) -> WordAutomaton:
    fwd: dict[int, list[Arc]] = {}
    back: dict[int, list[int]] = {}
    for arc in arcs:
        fwd.setdefault(arc[0], []).append(arc)
        back.setdefault(arc[2], []).append(arc[0])

    reachable = {start}
    stack = [start]
    while stack:
        for _, _, dst in fwd.get(stack.pop(), ()):
            if dst not in reachable:
                reachable.add(dst)
                stack.append(dst)

    coreachable = set(finals)
    stack = list(finals)
    while stack:
        for src in back.get(stack.pop(), ()):
            if src not in coreachable:
                coreachable.add(src)
                stack.append(src)

    live = reachable & coreachable
    live.add(start)  # keep the start even for an empty language

    # deterministic renumbering: BFS from start following sorted arc labels
    order = [start]
    index = {start: 0}
    qi = 0
    while qi < len(order):
        s = order[qi]
        qi += 1
        for _, label, dst in sorted(a for a in fwd.get(s, ()) if a[2] in live):
            if dst not in index:
                index[dst] = len(order)
                order.append(dst)

    kept = sorted(
        (index[src], label, index[dst])
        for src, label, dst in arcs
        if src in index and dst in index
    )
    new_finals = frozenset(index[f] for f in finals if f in index)
    auto = WordAutomaton(
        num_states=len(order),
        start=0,
        finals=new_finals,
        arcs=tuple(kept),
    )
    topo_order(auto)  # raises on a cycle; compiled automata must be DAGs
    return auto


def topo_order(a: WordAutomaton) -> list[int]:
    """Topological order of the automaton states; raises ValueError on cycles."""
    indeg = [0] * a.num_states
    out = a.outgoing()
    for _, _, dst in a.arcs:
        indeg[dst] += 1
    ready = sorted(s for s in range(a.num_states) if indeg[s] == 0)
    order: list[int] = []
    while ready:
        s = ready.pop()
        order.append(s)
        for _, _, dst in out[s]:
            indeg[dst] -= 1
            if indeg[dst] == 0:
                ready.append(dst)
    if len(order) != a.num_states:
        raise ValueError("automaton contains a cycle")
    return order


def matches(a: WordAutomaton, s: TokenSeq) -> bool:
    """True iff ``s`` is in the automaton's language.

    A wildcard arc matches any, possibly empty, run of tokens.  Active
    configurations are plain states plus "inside a wildcard arc" markers.
    """
    out = a.outgoing()

    def close(states: set[int], transits: set[Arc]) -> None:
        stack = list(states)
        while stack:
            for arc in out[stack.pop()]:
                if arc[1] == WILDCARD:
                    transits.add(arc)
                    if arc[2] not in states:
                        states.add(arc[2])
                        stack.append(arc[2])

    states = {a.start}
    transits: set[Arc] = set()
    close(states, transits)
    for tok in s:
        next_states: set[int] = set()
        next_transits: set[Arc] = set(transits)  # absorb the token in place
        for st in states:
            for arc in out[st]:
                if arc[1] == tok:
                    next_states.add(arc[2])
        next_states.update(arc[2] for arc in next_transits)
        states, transits = next_states, next_transits
        close(states, transits)
        if not states and not transits:
            return False
    return bool(states & a.finals)


def _policy_dfa(a: WordAutomaton, wildcard_policy: str) -> WordAutomaton:
    """Rewrite wildcards per policy and determinize (subset construction)."""
    if wildcard_policy not in _POLICIES:
        raise ValueError(f"wildcard_policy must be one of {_POLICIES}, got {wildcard_policy!r}")
    if not a.finals:
        return WordAutomaton(num_states=1, start=0, finals=frozenset(), arcs=())

    eps: dict[int, list[int]] = {}
    labeled: dict[int, list[tuple[str, int]]] = {}
    for src, label, dst in a.arcs:
        if label == WILDCARD and wildcard_policy == COLLAPSE:
            eps.setdefault(src, []).append(dst)
        else:
            labeled.setdefault(src, []).append((label, dst))

    def closure(states: frozenset[int]) -> frozenset[int]:
        acc = set(states)
        stack = list(states)
        while stack:
            for nxt in eps.get(stack.pop(), ()):
                if nxt not in acc:
                    acc.add(nxt)
                    stack.append(nxt)
        return frozenset(acc)

    start = closure(frozenset([a.start]))
    index: dict[frozenset[int], int] = {start: 0}
    queue = [start]
    arcs: list[Arc] = []
    finals: set[int] = set()
    qi = 0
    while qi < len(queue):
        subset = queue[qi]
        qi += 1
        if subset & a.finals:
            finals.add(index[subset])
        moves: dict[str, set[int]] = {}
        for st in subset:
            for label, dst in labeled.get(st, ()):
                moves.setdefault(label, set()).add(dst)
        for label in sorted(moves):
            target = closure(frozenset(moves[label]))
            if target not in index:
                index[target] = len(queue)
                queue.append(target)
            arcs.append((index[subset], label, index[target]))
    return WordAutomaton(
        num_states=len(queue),
        start=0,
        finals=frozenset(finals),
        arcs=tuple(sorted(arcs)),
    )


def enumerate_language(
    a: WordAutomaton,
    wildcard_policy: str = COLLAPSE,
    limit: int | None = None,
) -> tuple[list[TokenSeq], bool]:
    """All distinct strings of the language, shortest-then-lexicographic.

    Returns ``(strings, truncated)``; ``truncated`` is True when ``limit``
    cut the listing short.  Under the ``collapse`` policy wildcard arcs
    contribute nothing; under ``marker`` they contribute a literal ``*``.
    """
    if limit is not None and limit < 1:
        raise ValueError("limit must be >= 1")
    dfa = _policy_dfa(a, wildcard_policy)
    out = dfa.outgoing()

    results: list[TokenSeq] = []
    heap: list[tuple[int, TokenSeq, int]] = [(0, (), dfa.start)]
    while heap:
        length, tokens, state = heapq.heappop(heap)
        if state in dfa.finals:
            if limit is not None and len(results) == limit:
                return results, True
            results.append(tokens)
        for _, label, dst in out[state]:
            heapq.heappush(heap, (length + 1, tokens + (label,), dst))
    return results, False


def count_language(a: WordAutomaton, wildcard_policy: str = COLLAPSE) -> int:
    """Number of distinct strings in the language, via path counting.

    Computed on the determinized automaton, where accepting paths and
    accepted strings are in bijection; no strings are materialized.
    """
    dfa = _policy_dfa(a, wildcard_policy)
    if not dfa.finals:
        return 0
    out = dfa.outgoing()
    counts = [0] * dfa.num_states
    for state in reversed(topo_order(dfa)):
        n = 1 if state in dfa.finals else 0
        for _, _, dst in out[state]:
            n += counts[dst]
        counts[state] = n
    return counts[dfa.start]
