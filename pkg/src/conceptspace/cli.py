"""Command-line surface for the concept engine.

Five subcommands cover the pipeline: ``init`` creates an empty store from a
space config, ``learn`` folds latent-code files into it, ``classify`` ranks
concepts for new items, ``inspect`` reports store contents, and ``eval``
scores representation files against their recorded generative factors.

Machine-readable output (assignment logs, rankings, reports) goes to
standard output as JSON Lines; progress notes and errors go to standard
error. Exit status is 0 exactly when the command finished without error.
"""

import argparse
import json
import os
import random
import sys
from typing import List, Optional, Tuple

import numpy as np

from .concepts import classify, concept_overlap, project_concept
from .errors import ConceptSpaceError, ValidationError
from .geometry import Point
from .ingestion import (
    RgbColor,
    interpolation_betweenness_report,
    load_latent_codes,
    rgb_to_hsb,
    shuffle_vectors,
    smoothness_from_records,
)
from .learning import LearnerConfig, LearnerState, fit_stream
from .store import (
    atomic_write_json,
    load_config,
    load_json,
    load_store,
    save_store,
    space_from_doc,
    store_to_doc,
)

__all__ = ["main", "build_parser"]

CONFIG_ENV_VAR = "CONCEPTSPACE_CONFIG"


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")


def _note(message: str) -> None:
    sys.stderr.write(message + "\n")


def _config_path(args) -> str:
    path = args.config or os.environ.get(CONFIG_ENV_VAR)
    if not path:
        raise ValidationError(
            f"no space config given: pass --config or set {CONFIG_ENV_VAR}"
        )
    return path


def _region_doc(region) -> dict:
    from .store import _region_to_doc

    return _region_to_doc(region)


def cmd_init(args) -> int:
    space, learner = load_config(_config_path(args))
    if os.path.exists(args.store) and not args.force:
        raise ValidationError(f"store {args.store!r} already exists (use --force to replace)")
    state = LearnerState(space=space)
    atomic_write_json(store_to_doc(state, learner), args.store)
    _note(f"initialized empty store {args.store} with {len(space.domains)} domain(s)")
    return 0


def _load_points(paths, space, order: str, seed: int) -> List[Tuple[str, Point]]:
    records = []
    for path in paths:
        records.extend(load_latent_codes(path, space))
    by_item = {}
    first_seen = {}
    for rec in records:
        first_seen.setdefault(rec.item_id, len(first_seen))
        by_item.setdefault(rec.item_id, {})[rec.domain_id] = rec.vector
    points = [
        (item_id, Point(coords))
        for item_id, coords in sorted(by_item.items(), key=lambda kv: first_seen[kv[0]])
    ]
    if order == "shuffled":
        random.Random(seed).shuffle(points)
    return points


def cmd_learn(args) -> int:
    state, learner = load_store(args.store)
    cfg = LearnerConfig(
        theta_new=learner.theta_new if args.theta is None else args.theta,
        eta=learner.eta if args.eta is None else args.eta,
        r0=learner.r0 if args.r0 is None else args.r0,
        max_concepts=learner.max_concepts,
    )
    points = _load_points(args.files, state.space, args.order, args.seed)
    if not points:
        _note("no records in input; store unchanged")
        return 0
    ids = [item_id for item_id, _ in points]
    state, log = fit_stream(state, [p for _, p in points], cfg, ids=ids)
    save_store(state, cfg, args.store)
    for entry in log:
        _emit(
            {
                "index": entry.index,
                "item_id": entry.item_id,
                "concept_id": entry.concept_id,
                "created": entry.created,
                "score": entry.score,
            }
        )
    created = sum(1 for entry in log if entry.created)
    _note(
        f"learned {len(log)} observation(s): {created} new concept(s),"
        f" store now holds {len(state.concepts)}"
    )
    return 0


def _parse_color(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValidationError(f"--color expects R,G,B with 8-bit components, got {text!r}")
    try:
        r, g, b = (int(p.strip()) for p in parts)
    except ValueError:
        raise ValidationError(f"--color expects integers, got {text!r}") from None
    hue, sat, bri = rgb_to_hsb(RgbColor.from_8bit(r, g, b))
    return np.array([hue / 360.0, sat, bri])


def _classification_doc(item_id: str, ranked, top: Optional[int]) -> dict:
    rows = ranked if top is None else ranked[:top]
    return {
        "item_id": item_id,
        "ranked": [
            {
                "concept_id": row.concept_id,
                "label": row.label,
                "strict": row.strict,
                "score": row.score,
                "per_domain": {d: m for d, m in sorted(row.per_domain.items())},
            }
            for row in rows
        ],
    }


def cmd_classify(args) -> int:
    state, _ = load_store(args.store)
    if args.color is not None and args.file is not None:
        raise ValidationError("give either a latent-code file or --color, not both")
    if args.color is None and args.file is None:
        raise ValidationError("nothing to classify: give a latent-code file or --color")
    if not state.concepts:
        _note("store holds no concepts; empty report")
        return 0
    if args.color is not None:
        point = Point({args.color_domain: _parse_color(args.color)})
        ranked = classify(point, state.concepts, state.space)
        _emit(_classification_doc("color", ranked, args.top))
        return 0
    points = _load_points([args.file], state.space, "input", 0)
    for item_id, point in points:
        ranked = classify(point, state.concepts, state.space)
        _emit(_classification_doc(item_id, ranked, args.top))
    return 0


def cmd_inspect(args) -> int:
    state, _ = load_store(args.store)
    concepts = {c.id: c for c in state.concepts}
    if args.overlaps:
        ordered = sorted(state.concepts, key=lambda c: c.created_at)
        for i, a in enumerate(ordered):
            for b in ordered[i + 1 :]:
                verdicts = concept_overlap(a, b)
                if verdicts and all(verdicts.values()):
                    _emit({"a": a.id, "b": b.id, "domains": sorted(verdicts)})
        return 0
    if args.concept is None:
        if args.project is not None:
            raise ValidationError("--project needs --concept to name the concept")
        for c in sorted(state.concepts, key=lambda c: c.created_at):
            _emit(
                {
                    "id": c.id,
                    "label": c.label,
                    "count": c.count,
                    "domains": sorted(c.domain_ids),
                }
            )
        _note(f"{len(state.concepts)} concept(s) in {args.store}")
        return 0
    concept = concepts.get(args.concept)
    if concept is None:
        raise ValidationError(f"no concept with id {args.concept!r}")
    if args.project is not None:
        region = project_concept(concept, args.project)
        _emit(
            {
                "concept_id": concept.id,
                "domain": args.project,
                "region": None if region is None else _region_doc(region),
            }
        )
        return 0
    _emit(
        {
            "id": concept.id,
            "label": concept.label,
            "count": concept.count,
            "created_at": concept.created_at,
            "regions": {d: _region_doc(concept.regions[d]) for d in sorted(concept.regions)},
        }
    )
    return 0


def cmd_eval(args) -> int:
    if not (args.smoothness or args.betweenness):
        raise ValidationError("choose at least one of --smoothness / --betweenness")
    space = None
    if args.config:
        space, _ = space_from_doc(load_json(args.config))
    records = load_latent_codes(args.file, space)
    if args.domain is not None:
        records = [rec for rec in records if rec.domain_id == args.domain]
    else:
        domains = {rec.domain_id for rec in records}
        if len(domains) > 1:
            raise ValidationError(
                f"file mixes domains {sorted(domains)}; pick one with --domain"
            )
    keys = args.keys.split(",") if args.keys else None
    if args.smoothness:
        value = smoothness_from_records(records, keys)
        _emit({"metric": "smoothness", "value": value, "records": len(records)})
        if args.baseline:
            shuffled = shuffle_vectors(records, seed=args.seed)
            _emit(
                {
                    "metric": "smoothness_shuffled_baseline",
                    "value": smoothness_from_records(shuffled, keys),
                    "records": len(records),
                }
            )
    if args.betweenness:
        report = interpolation_betweenness_report(
            records,
            keys=keys,
            n_pairs=args.pairs,
            slack=args.slack,
            seed=args.seed,
        )
        _emit(
            {
                "metric": "betweenness",
                "fraction_satisfied": report.fraction_satisfied,
                "pairs_checked": report.pairs_checked,
                "mean_deviation": report.mean_deviation,
            }
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conceptspace",
        description="Geometric concept engine: learn, classify and inspect "
        "convex-region concepts over metric domains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_init = sub.add_parser("init", help="create an empty concept store from a space config")
    p_init.add_argument("--config", help=f"space config path (default: ${CONFIG_ENV_VAR})")
    p_init.add_argument("--store", required=True, help="store file to create")
    p_init.add_argument("--force", action="store_true", help="replace an existing store")
    p_init.set_defaults(func=cmd_init)

    p_learn = sub.add_parser("learn", help="fold latent-code files into the store")
    p_learn.add_argument("--store", required=True)
    p_learn.add_argument("files", nargs="+", help="latent-code files (JSON Lines)")
    p_learn.add_argument("--theta", type=float, default=None, help="new-concept threshold")
    p_learn.add_argument("--eta", type=float, default=None, help="region adaptation rate")
    p_learn.add_argument("--r0", type=float, default=None, help="radius of new regions")
    p_learn.add_argument("--seed", type=int, default=0, help="seed for --order shuffled")
    p_learn.add_argument(
        "--order",
        choices=("input", "shuffled"),
        default="input",
        help="process items in input order or a seeded shuffle",
    )
    p_learn.set_defaults(func=cmd_learn)

    p_classify = sub.add_parser("classify", help="rank concepts for new items")
    p_classify.add_argument("--store", required=True)
    p_classify.add_argument("file", nargs="?", help="latent-code file (JSON Lines)")
    p_classify.add_argument("--color", help="classify one R,G,B color (8-bit components)")
    p_classify.add_argument(
        "--color-domain",
        default="color",
        help="domain id that holds color coordinates (default: color)",
    )
    p_classify.add_argument("--top", type=int, default=None, help="report only the best N")
    p_classify.set_defaults(func=cmd_classify)

    p_inspect = sub.add_parser("inspect", help="report store contents")
    p_inspect.add_argument("--store", required=True)
    p_inspect.add_argument("--concept", default=None, help="show one concept in full")
    p_inspect.add_argument(
        "--project", default=None, help="with --concept: show its region in this domain"
    )
    p_inspect.add_argument(
        "--overlaps",
        action="store_true",
        help="list concept pairs whose regions overlap in every shared domain",
    )
    p_inspect.set_defaults(func=cmd_inspect)

    p_eval = sub.add_parser(
        "eval", help="score a latent-code file against its recorded factors"
    )
    p_eval.add_argument("file", help="latent-code file with numeric meta entries")
    p_eval.add_argument("--smoothness", action="store_true", help="rank-correlation check")
    p_eval.add_argument("--betweenness", action="store_true", help="interpolation check")
    p_eval.add_argument("--config", default=None, help="space config to validate against")
    p_eval.add_argument("--domain", default=None, help="restrict to one domain id")
    p_eval.add_argument("--keys", default=None, help="comma-separated factor meta keys")
    p_eval.add_argument("--pairs", type=int, default=200, help="pairs sampled for betweenness")
    p_eval.add_argument("--slack", type=float, default=0.3, help="betweenness tolerance factor")
    p_eval.add_argument("--seed", type=int, default=0, help="sampling seed")
    p_eval.add_argument(
        "--baseline",
        action="store_true",
        help="also report smoothness of a seeded vector shuffle (null model)",
    )
    p_eval.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConceptSpaceError as exc:
        _note(f"error: {exc}")
        return 1
    except OSError as exc:
        _note(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
