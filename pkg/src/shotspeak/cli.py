"""Command-line interface.

Subcommands: ingest, fit, explain, wordalise, evaluate, model-card, serve.
All state flows through the same ShotStore the HTTP service uses, so CLI
output and service responses agree by construction.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import cards, evaluation, glm, llm, textgen
from .config import AppConfig, load_config, override_data_root
from .exceptions import ShotspeakError
from .service import NotFoundError, ShotStore, create_app


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shotspeak",
        description="Expected-goals models with explanations and generated shot commentary.",
    )
    parser.add_argument("--config", help="path to an INI config file")
    parser.add_argument("--data-root", help="override the data root directory")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="parse provider files into the canonical shots CSV")
    p_ingest.add_argument("competition")
    p_ingest.add_argument(
        "--fetch",
        nargs=2,
        metavar=("PROVIDER_COMP_ID", "PROVIDER_SEASON_ID"),
        help="download the competition from the open-data repository first",
    )

    p_fit = sub.add_parser("fit", help="fit the per-competition model and write the model file")
    p_fit.add_argument("competition")

    p_explain = sub.add_parser("explain", help="print a shot's explanation document")
    p_explain.add_argument("shot_id")

    p_word = sub.add_parser("wordalise", help="generate commentary for a shot")
    p_word.add_argument("shot_id")
    p_word.add_argument("--case", default="case4", help="case1..case5 (default case4)")
    p_word.add_argument("--debug", action="store_true", help="also print the prompt messages")

    p_eval = sub.add_parser("evaluate", help="run the engagement/accuracy evaluation")
    p_eval.add_argument("--competition", required=True)
    p_eval.add_argument("--match", help="restrict to one match id")
    p_eval.add_argument("--cases", nargs="+", default=["1", "2", "3", "4", "5"])
    p_eval.add_argument("--runs", type=int, default=None)
    p_eval.add_argument("--output", help="write the chart-ready JSON here")

    sub.add_parser("model-card", help="write the model card markdown")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8008)
    p_serve.add_argument("--static-dir", help="serve a built web UI from this directory")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(message)s")

    try:
        config = load_config(args.config)
        config = override_data_root(config, args.data_root)
        return _dispatch(args, config)
    except NotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except ShotspeakError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args: argparse.Namespace, config: AppConfig) -> int:
    if args.command == "ingest":
        if args.fetch:
            from .ingest import fetch_competition

            fetch_competition(
                config.data_root, args.competition, int(args.fetch[0]), int(args.fetch[1])
            )
        store = ShotStore(config)
        shots = store.ingest(args.competition)
        eligible = sum(1 for s in shots if s.has_freeze_frame)
        print(
            f"ingested {len(shots)} shots ({eligible} with freeze frames) -> "
            f"{config.shots_csv_path(args.competition)}"
        )
        return 0

    if args.command == "fit":
        store = ShotStore(config)
        model = store.fit(args.competition)
        print(glm.format_model_summary(model))
        print(f"model written to {config.model_path(args.competition)}")
        return 0

    if args.command == "explain":
        store = ShotStore(config)
        context = store.shot_context(args.shot_id)
        document = {
            "competition_id": context.competition_id,
            "feature_values": context.vector.as_dict(),
            "explanation": context.explanation.to_dict(),
        }
        print(json.dumps(document, indent=2, sort_keys=True))
        return 0

    if args.command == "wordalise":
        store = ShotStore(config)
        context = store.shot_context(args.shot_id)
        bands = store.bands(context.competition_id)
        synth = textgen.synthesize(
            context.explanation, context.shot, bands, context.vector, store.word_tables
        )
        bundle = textgen.assemble_prompt(
            textgen.Case.parse(args.case), synth, context.vector, store.assets
        )
        if args.debug:
            print(json.dumps(bundle.to_wire(), indent=2))
        result = llm.chat(bundle, config.llm)
        print(result.text)
        return 0

    if args.command == "evaluate":
        store = ShotStore(config)
        shots = store.shots(args.competition)
        if args.match:
            shots = [s for s in shots if s.match_id == args.match]
            if not shots:
                raise NotFoundError(f"match not found: {args.match!r}")
        items = store.eval_items(shots, args.competition)
        provider = llm.make_provider(config.llm)
        results = evaluation.run_evaluation(
            items,
            args.cases,
            judge=provider,
            n_runs=args.runs or config.evaluation_runs,
            features=config.evaluation_features,
            generator=provider,
            assets=store.assets,
        )
        print(evaluation.format_results_table(results), end="")
        if args.output:
            from pathlib import Path

            Path(args.output).write_text(
                json.dumps(evaluation.results_chart_data(results), indent=2) + "\n"
            )
            print(f"chart data written to {args.output}")
        return 0

    if args.command == "model-card":
        store = ShotStore(config)
        competitions = store.competitions()
        if not competitions:
            raise NotFoundError(f"no competitions under {config.data_root}")
        models = [store.model(cid) for cid in competitions]
        bands = {cid: store.bands(cid) for cid in competitions}
        markdown = cards.generate_model_card(models, store.assets, config, bands)
        config.model_cards_dir.mkdir(parents=True, exist_ok=True)
        path = config.model_cards_dir / "model_card.md"
        path.write_text(markdown)
        print(f"model card written to {path}")
        return 0

    if args.command == "serve":
        import uvicorn

        app = create_app(config, static_dir=args.static_dir)
        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
