"""Command-line front ends.

``helpline ask`` runs one query through the whole pipeline (simulated
recognition, language engine, answer lookup, optional SMS delivery) and
exits 0 when answered, 2 on an invalid query, 3 on recognition
rejection.  ``helpline experiment run`` executes a configured experiment
and writes the report files.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .automaton import compile_grammar_ast
from .backend import InvalidFrameError, NotFoundError, answer, load_agents, load_policies
from .grammar import parse_grammar
from .harness import load_config, load_confusion_table, render_report, run_experiment
from .nlu import INVALID, correct, load_lexicon, understand
from .recognizer import NoiseModel, recognize
from .sms import SmsGateway, send_sms
from .tokens import tokenize

EXIT_ANSWERED = 0
EXIT_INVALID_QUERY = 2
EXIT_RECOGNITION_REJECTED = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="helpline")
    sub = parser.add_subparsers(dest="command", required=True)

    ask = sub.add_parser("ask", help="answer one spoken-style query")
    ask.add_argument("--grammar", required=True, help="grammar file for the chosen mode")
    ask.add_argument("--mode", required=True, choices=["f1", "f2", "f3"])
    ask.add_argument("--lexicon", required=True, help="combined lexicon/schema file")
    ask.add_argument("--data", required=True, help="policy records file")
    ask.add_argument("--query", required=True, help="the true spoken query text")
    ask.add_argument("--agents", help="agent contexts file")
    ask.add_argument("--agent", help="agent id for context-dependent answers")
    ask.add_argument("--sms-gateway", help="base URL of a sendsms gateway")
    ask.add_argument("--sms-to", help="destination phone number")
    ask.add_argument("--sms-user", default="tester")
    ask.add_argument("--sms-password", default="foobar")
    ask.add_argument("--max-edit", type=int, default=2, help="correction strength of the language engine")
    ask.add_argument("--threshold", type=float, default=None, help="decode rejection threshold (default: half the observed length)")
    ask.add_argument("--p-sub", type=float, default=0.0)
    ask.add_argument("--p-del", type=float, default=0.0)
    ask.add_argument("--p-ins", type=float, default=0.0)
    ask.add_argument("--confusion", help="confusion table for the noise channel")
    ask.add_argument("--seed", type=int, default=0)
    ask.set_defaults(func=cmd_ask)

    experiment = sub.add_parser("experiment", help="seeded tradeoff experiments")
    exp_sub = experiment.add_subparsers(dest="experiment_command", required=True)
    run = exp_sub.add_parser("run", help="run an experiment from a config file")
    run.add_argument("--config", required=True)
    run.add_argument("--out", required=True, help="directory for report files")
    run.set_defaults(func=cmd_experiment_run)

    return parser


def cmd_ask(args: argparse.Namespace) -> int:
    automaton = compile_grammar_ast(parse_grammar(Path(args.grammar).read_text(encoding="utf-8")))
    lexicon, schema = load_lexicon(args.lexicon)
    store = load_policies(args.data)

    ctx = None
    if args.agents:
        agents = load_agents(args.agents)
        if args.agent:
            ctx = agents.get(args.agent)
            if ctx is None:
                print(f"unknown agent {args.agent!r}", file=sys.stderr)
                return EXIT_INVALID_QUERY
        elif agents:
            ctx = next(iter(agents.values()))

    truth = tokenize(args.query)
    confusion = load_confusion_table(args.confusion) if args.confusion else {}
    vocab = tuple(sorted(set(truth))) or ("blah",)
    nm = NoiseModel(
        p_sub=args.p_sub, p_del=args.p_del, p_ins=args.p_ins,
        confusion_table=confusion, vocab=vocab, seed=args.seed,
    )
    result = recognize(args.mode, {args.mode: automaton}, truth, nm, args.threshold)
    if not result.accepted:
        print(f"[{args.mode}] recognition rejected")
        return EXIT_RECOGNITION_REJECTED
    print(f"[{args.mode}] recognized: {' '.join(result.hypothesis)}  (cost {result.cost})")

    corrected = correct(result.hypothesis, lexicon, args.max_edit)
    frame = understand(result.hypothesis, lexicon, schema, ctx, args.max_edit)
    print(f"corrected:  {' '.join(corrected)}")
    print(f"frame:      intent={frame.intent} slots={frame.slots} status={frame.status}"
          + (f" reason={frame.reason}" if frame.reason else ""))
    if frame.status == INVALID:
        print("query is invalid; no answer")
        return EXIT_INVALID_QUERY

    try:
        reply = answer(frame, store, ctx, schema)
    except (NotFoundError, InvalidFrameError) as exc:
        print(f"no answer: {exc}")
        return EXIT_INVALID_QUERY
    print(f"answer:     {reply.text}")

    if args.sms_gateway and args.sms_to:
        gateway = SmsGateway(base_url=args.sms_gateway, username=args.sms_user, password=args.sms_password)
        receipt = send_sms(gateway, args.sms_to, reply)
        print(f"sms:        {receipt.status} (status code {receipt.status_code})")
    return EXIT_ANSWERED


def cmd_experiment_run(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    report = run_experiment(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    table = render_report(report, "table")
    (out / cfg.table_name).write_text(table, encoding="utf-8")
    (out / cfg.json_name).write_text(render_report(report, "json"), encoding="utf-8")
    print(table, end="")
    print(f"wrote {out / cfg.table_name} and {out / cfg.json_name}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
