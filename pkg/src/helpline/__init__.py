"""Grammar-constrained spoken-query pipeline simulator.

The package composes a simulated speech front end (noise channel plus
grammar-automaton decoder) with a rule-based language engine that repairs
mis-recognitions and reduces queries to canonical frames, an answer
backend over a mock insurance dataset, and a seeded experiment harness
for the recognition-accuracy vs. phrasing-coverage tradeoff.
"""

from .automaton import (
    COLLAPSE,
    MARKER,
    WILDCARD,
    WordAutomaton,
    compile_grammar_ast,
    count_language,
    enumerate_language,
    matches,
)
from .backend import AnswerText, PolicyRecord, answer, load_agents, load_policies, lookup_policy
from .grammar import GrammarAst, parse_grammar
from .harness import (
    ExperimentConfig,
    ExperimentReport,
    ModeReport,
    load_config,
    parse_report,
    render_report,
    run_experiment,
)
from .metrics import ux_score, word_edit_distance
from .nlu import (
    AgentContext,
    ConceptLexicon,
    IntentSchema,
    QueryFrame,
    correct,
    extract_frame,
    fill_assumptions,
    load_lexicon,
    understand,
    validate_frame,
)
from .recognizer import NoiseModel, RecognitionResult, apply_noise, decode, recognize
from .sms import SmsGateway, SmsReceipt, StubSmsGateway, send_sms
from .tokens import TokenSeq, tokenize

__version__ = "0.1.0"

__all__ = [
    "COLLAPSE",
    "MARKER",
    "WILDCARD",
    "AgentContext",
    "AnswerText",
    "ConceptLexicon",
    "ExperimentConfig",
    "ExperimentReport",
    "GrammarAst",
    "IntentSchema",
    "ModeReport",
    "NoiseModel",
    "PolicyRecord",
    "QueryFrame",
    "RecognitionResult",
    "SmsGateway",
    "SmsReceipt",
    "StubSmsGateway",
    "TokenSeq",
    "WordAutomaton",
    "answer",
    "apply_noise",
    "compile_grammar_ast",
    "correct",
    "count_language",
    "decode",
    "enumerate_language",
    "extract_frame",
    "fill_assumptions",
    "load_agents",
    "load_config",
    "load_lexicon",
    "load_policies",
    "lookup_policy",
    "matches",
    "parse_grammar",
    "parse_report",
    "recognize",
    "render_report",
    "run_experiment",
    "send_sms",
    "tokenize",
    "understand",
    "ux_score",
    "validate_frame",
    "word_edit_distance",
]
