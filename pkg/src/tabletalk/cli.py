"""Command line entry points: experiment runs, dialog replay, session serving."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from tabletalk import experiments
from tabletalk.comprehend import MODEL_NAMES


def _add_common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lexicon", type=Path, default=None,
                   help="lexicon file overriding the shipped one")
    p.add_argument("--out", type=Path, default=None,
                   help="write a machine-readable report here")


def _load_doc(path):
    return json.loads(path.read_text(encoding="utf-8")) if path else None


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tabletalk",
        description="Situated comprehension experiments and sessions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run-re", help="reference resolution ablation matrix")
    p.add_argument("--model", choices=MODEL_NAMES + ("all",), default="all")
    p.add_argument("--scenario", choices=["1", "2", "3", "4", "all"],
                   default="all")
    p.add_argument("--corpus", type=Path, default=None,
                   help="corpus file (defaults to the shipped corpus)")
    _add_common(p)

    p = sub.add_parser("run-alt", help="verb alternation comparison")
    p.add_argument("--config", choices=["+e", "-e", "both"], default="both")
    _add_common(p)

    p = sub.add_parser("replay", help="replay a scripted dialog")
    p.add_argument("--scenario", default="clarification")
    p.add_argument("--model", choices=MODEL_NAMES, default="p+t+a+d")
    p.add_argument("--script", type=Path, default=None,
                   help="file with one instructor turn per line")
    _add_common(p)

    p = sub.add_parser("serve", help="serve interactive sessions")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--scenario", default="two-object")
    p.add_argument("--model", choices=MODEL_NAMES, default="p+t+a+d")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lexicon", type=Path, default=None)

    args = parser.parse_args(argv)

    if args.command == "run-re":
        corpus = None
        if args.corpus is not None:
            corpus = json.loads(args.corpus.read_text(encoding="utf-8"))
        models = MODEL_NAMES if args.model == "all" else (args.model,)
        scenarios = (1, 2, 3, 4) if args.scenario == "all" else (int(args.scenario),)
        lexicon = _load_doc(args.lexicon)
        rows = [
            experiments.run_re_experiment(scenario, model, args.seed, corpus,
                                          lexicon)
            for model in models for scenario in scenarios
        ]
        sys.stdout.write(experiments.re_matrix_table(rows))
        if args.out:
            experiments.write_report(experiments.re_matrix_doc(rows), args.out)
        return 0

    if args.command == "run-alt":
        configs = ("+e", "-e") if args.config == "both" else (args.config,)
        lexicon = _load_doc(args.lexicon)
        docs = []
        for config in configs:
            report = experiments.run_alternation_experiment(
                config, args.seed, lexicon_doc=lexicon)
            sys.stdout.write(experiments.alt_report_table(report))
            docs.append(experiments.alt_report_doc(report))
        if args.out:
            experiments.write_report({"runs": docs}, args.out)
        return 0

    if args.command == "replay":
        if args.script is not None:
            lines = [l for l in args.script.read_text(encoding="utf-8").splitlines()
                     if l.strip()]
            transcript = experiments.replay_script(args.scenario, lines,
                                                   args.model, args.seed,
                                                   _load_doc(args.lexicon))
        else:
            transcript = experiments.replay_clarification_dialog(args.seed)
        sys.stdout.write(transcript)
        if args.out:
            args.out.write_text(transcript, encoding="utf-8")
        return 0

    if args.command == "serve":
        from tabletalk import server
        server.main(args.port, args.scenario, args.model, args.seed,
                    _load_doc(args.lexicon))
        return 0

    raise AssertionError


if __name__ == "__main__":
    sys.exit(main())
