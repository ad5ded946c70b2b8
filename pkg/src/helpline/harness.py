"""Seeded experiment harness measuring accuracy against grammar coverage.

One experiment runs every configured grammar mode over the same noisy
trials: sample a true query from the in-grammar corpus, corrupt it,
decode it against the mode's grammar, push the hypothesis through the
language engine, and compare the resulting frame with the frame of the
clean truth.  Per-trial seeds are derived as ``seed XOR trial index``, so
reports are byte-reproducible and trials could run in any order.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import random
import statistics
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .automaton import COLLAPSE, compile_grammar_ast, count_language
from .backend import load_agents
from .grammar import parse_grammar
from .metrics import ux_score, word_edit_distance
from .nlu import ASSUMED, VALID, AgentContext, load_lexicon, understand
from .recognizer import NoiseModel, decode, default_threshold, apply_noise
from .tokens import TokenSeq, tokenize


class ConfigError(Exception):
    """Malformed experiment configuration; names the offending field."""

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class ExperimentConfig:
    grammars: dict[str, Path]
    lexicon: Path
    policies: Path | None
    agents: Path | None
    agent_id: str | None
    in_grammar_corpus: Path
    natural_corpus: Path
    p_sub: float
    p_del: float
    p_ins: float
    confusion: Path | None
    vocab: Path | None
    trials: int
    seed: int
    reject_threshold: float | None  # None = half the observed length
    max_edit: int
    table_name: str = "report.txt"
    json_name: str = "report.json"


@dataclass(frozen=True)
class ModeReport:
    mode: str
    language_count: int
    ux_score: float
    trials: int
    accepted_trials: int
    mean_distance: float | None
    median_distance: float | None
    frame_accuracy: float
    valid_frames: int
    invalid_frames: int


@dataclass(frozen=True)
class ExperimentReport:
    seed: int
    trials: int
    config_hash: str
    modes: dict[str, ModeReport] = field(default_factory=dict)


def load_config(path: str | Path) -> ExperimentConfig:
    """Read an experiment config file (INI with sections
    [grammars], [noise], [corpus], [engine], [output])."""
    path = Path(path)
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise ConfigError(str(path), "config file not found")
    base = path.parent

    def resolve(section: str, key: str, required: bool = True) -> Path | None:
        raw = parser.get(section, key, fallback="").strip()
        if not raw:
            if required:
                raise ConfigError(f"{section}.{key}", "missing required file entry")
            return None
        resolved = (base / raw).resolve() if not Path(raw).is_absolute() else Path(raw)
        if not resolved.exists():
            raise ConfigError(f"{section}.{key}", f"file does not exist: {resolved}")
        return resolved

    def number(section: str, key: str, conv, default=None):
        raw = parser.get(section, key, fallback=None)
        if raw is None or not raw.strip():
            if default is None:
                raise ConfigError(f"{section}.{key}", "missing required value")
            return default
        try:
            return conv(raw.strip())
        except ValueError as exc:
            raise ConfigError(f"{section}.{key}", str(exc)) from exc

    if "grammars" not in parser or not parser["grammars"]:
        raise ConfigError("grammars", "at least one grammar mode is required")
    grammars = {}
    for mode in parser["grammars"]:
        grammars[mode.lower()] = resolve("grammars", mode)

    raw_threshold = parser.get("engine", "reject_threshold", fallback="auto").strip()
    if raw_threshold in ("", "auto"):
        threshold = None
    else:
        try:
            threshold = float(raw_threshold)
        except ValueError as exc:
            raise ConfigError("engine.reject_threshold", str(exc)) from exc
        if threshold < 0:
            raise ConfigError("engine.reject_threshold", "must be >= 0 or auto")

    cfg = ExperimentConfig(
        grammars=grammars,
        lexicon=resolve("engine", "lexicon"),
        policies=resolve("engine", "policies", required=False),
        agents=resolve("engine", "agents", required=False),
        agent_id=parser.get("engine", "agent", fallback="").strip() or None,
        in_grammar_corpus=resolve("corpus", "in_grammar"),
        natural_corpus=resolve("corpus", "natural"),
        p_sub=number("noise", "p_sub", float, 0.0),
        p_del=number("noise", "p_del", float, 0.0),
        p_ins=number("noise", "p_ins", float, 0.0),
        confusion=resolve("noise", "confusion", required=False),
        vocab=resolve("noise", "vocab", required=False),
        trials=number("noise", "trials", int),
        seed=number("noise", "seed", int),
        reject_threshold=threshold,
        max_edit=number("engine", "max_edit", int, 2),
        table_name=parser.get("output", "table", fallback="report.txt").strip(),
        json_name=parser.get("output", "json", fallback="report.json").strip(),
    )
    if cfg.trials < 1:
        raise ConfigError("noise.trials", "must be >= 1")
    if cfg.max_edit < 0:
        raise ConfigError("engine.max_edit", "must be >= 0")
    if not 0.0 <= cfg.p_sub + cfg.p_del <= 1.0:
        raise ConfigError("noise.p_sub", "p_sub + p_del must lie in [0, 1]")
    if not 0.0 <= cfg.p_ins <= 1.0:
        raise ConfigError("noise.p_ins", "must lie in [0, 1]")
    return cfg


def load_corpus(path: str | Path) -> list[TokenSeq]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip() and not line.startswith("#"):
            out.append(tokenize(line))
    return out


def load_confusion_table(path: str | Path) -> dict[str, tuple[str, ...]]:
    """Two-column file: word<TAB>confusable[,confusable...]."""
    table: dict[str, tuple[str, ...]] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        word, _, rest = line.partition("\t")
        confusables = tuple(c.strip() for c in rest.split(",") if c.strip())
        if not word.strip() or not confusables:
            raise ValueError(f"malformed confusion line: {line!r}")
        table[word.strip()] = confusables
    return table


def _config_hash(cfg: ExperimentConfig) -> str:
    blob = json.dumps({
        "grammars": sorted(cfg.grammars),
        "p_sub": cfg.p_sub, "p_del": cfg.p_del, "p_ins": cfg.p_ins,
        "trials": cfg.trials, "seed": cfg.seed,
        "reject_threshold": cfg.reject_threshold, "max_edit": cfg.max_edit,
        "agent": cfg.agent_id,
    }, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    lexicon, schema = load_lexicon(cfg.lexicon)
    automata = {mode: compile_grammar_ast(parse_grammar(p.read_text(encoding="utf-8")))
                for mode, p in cfg.grammars.items()}
    in_corpus = load_corpus(cfg.in_grammar_corpus)
    natural = load_corpus(cfg.natural_corpus)
    if not in_corpus:
        raise ConfigError("corpus.in_grammar", "corpus file is empty")
    if not natural:
        raise ConfigError("corpus.natural", "corpus file is empty")

    confusion = load_confusion_table(cfg.confusion) if cfg.confusion else {}
    if cfg.vocab:
        vocab = tuple(cfg.vocab.read_text(encoding="utf-8").split())
    else:
        vocab = tuple(sorted({tok for utt in in_corpus for tok in utt}))

    ctx: AgentContext | None = None
    if cfg.agents:
        agents = load_agents(cfg.agents)
        if cfg.agent_id:
            if cfg.agent_id not in agents:
                raise ConfigError("engine.agent", f"unknown agent {cfg.agent_id!r}")
            ctx = agents[cfg.agent_id]
        elif agents:
            ctx = next(iter(agents.values()))

    ground_frames = [
        understand(truth, lexicon, schema, ctx, cfg.max_edit) for truth in in_corpus
    ]

    # One noisy observation per trial, shared by every mode: differences
    # between modes then come from decoding alone.
    observations: list[tuple[int, TokenSeq]] = []
    for t in range(cfg.trials):
        rng = random.Random(cfg.seed ^ t)
        idx = rng.randrange(len(in_corpus))
        nm = NoiseModel(
            p_sub=cfg.p_sub, p_del=cfg.p_del, p_ins=cfg.p_ins,
            confusion_table=confusion, vocab=vocab, seed=rng.getrandbits(64),
        )
        observations.append((idx, apply_noise(in_corpus[idx], nm)))

    modes: dict[str, ModeReport] = {}
    for mode in sorted(automata):
        auto = automata[mode]
        distances: list[int] = []
        accepted = 0
        accurate = 0
        valid = 0
        for idx, observed in observations:
            truth = in_corpus[idx]
            threshold = cfg.reject_threshold
            if threshold is None:
                threshold = default_threshold(observed)
            result = decode(auto, observed, threshold, mode=mode.upper())
            if result.accepted:
                accepted += 1
                distances.append(word_edit_distance(result.hypothesis, truth))
                frame = understand(result.hypothesis, lexicon, schema, ctx, cfg.max_edit)
                if frame == ground_frames[idx]:
                    accurate += 1
                if frame.status in (VALID, ASSUMED):
                    valid += 1
        modes[mode] = ModeReport(
            mode=mode.upper(),
            language_count=count_language(auto, COLLAPSE),
            ux_score=ux_score(auto, natural),
            trials=cfg.trials,
            accepted_trials=accepted,
            mean_distance=round(statistics.mean(distances), 6) if distances else None,
            median_distance=float(statistics.median(distances)) if distances else None,
            frame_accuracy=accurate / cfg.trials,
            valid_frames=valid,
            invalid_frames=cfg.trials - valid,
        )
    return ExperimentReport(
        seed=cfg.seed,
        trials=cfg.trials,
        config_hash=_config_hash(cfg),
        modes=modes,
    )


_COLUMNS = [
    ("mode", "{}"),
    ("language_count", "{}"),
    ("ux_score", "{:.4f}"),
    ("trials", "{}"),
    ("accepted_trials", "{}"),
    ("mean_distance", "{:.4f}"),
    ("median_distance", "{:.2f}"),
    ("frame_accuracy", "{:.4f}"),
    ("valid_frames", "{}"),
    ("invalid_frames", "{}"),
]


def render_report(r: ExperimentReport, format: str = "table") -> str:
    """Render a report as an aligned table or a round-trippable JSON document."""
    if format == "json":
        payload = {
            "seed": r.seed,
            "trials": r.trials,
            "config_hash": r.config_hash,
            "modes": {
                mode: asdict(mr) for mode, mr in sorted(r.modes.items())
            },
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if format != "table":
        raise ValueError(f"unknown report format {format!r}")

    headers = [name for name, _ in _COLUMNS]
    rows = []
    for mode in sorted(r.modes):
        mr = r.modes[mode]
        row = []
        for name, fmt in _COLUMNS:
            value = getattr(mr, name)
            row.append("-" if value is None else fmt.format(value))
        rows.append(row)
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    lines = [
        f"seed={r.seed} trials={r.trials} config={r.config_hash}",
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
    ]
    for row in rows:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> ExperimentReport:
    """Inverse of ``render_report(..., format="json")``."""
    payload = json.loads(text)
    modes = {mode: ModeReport(**data) for mode, data in payload["modes"].items()}
    return ExperimentReport(
        seed=payload["seed"],
        trials=payload["trials"],
        config_hash=payload["config_hash"],
        modes=modes,
    )
