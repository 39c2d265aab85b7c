"""Command-line surface: gen-data, train, export, traverse."""

import argparse
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from .export import export_latents, export_traversals
from .shapes import generate_dataset, load_dataset, save_dataset
from .train import TrainerConfig, TrainingDiverged, load_checkpoint, train

__all__ = ["main", "build_parser"]


def cmd_gen_data(args) -> int:
    samples = generate_dataset(args.n, args.seed, args.side)
    save_dataset(samples, args.out)
    print(f"wrote {len(samples)} samples to {args.out}", file=sys.stderr)
    return 0


def _config_from_args(args) -> TrainerConfig:
    kwargs = {
        f.name: getattr(args, f.name)
        for f in fields(TrainerConfig)
        if getattr(args, f.name, None) is not None
    }
    return TrainerConfig(**kwargs)


def cmd_train(args) -> int:
    dataset = load_dataset(args.data)
    config = _config_from_args(args)
    known = None
    if args.decor_key is not None:
        known = np.array([float(getattr(s, args.decor_key)) for s in dataset])
    result = train(config, dataset, out_dir=args.out_dir, known_dims=known)
    final = result.curves.recognition[-1]
    print(
        f"trained {config.epochs} epoch(s); recognition loss {final:.4f}; "
        f"checkpoint {result.checkpoint_path}",
        file=sys.stderr,
    )
    return 0


def cmd_export(args) -> int:
    _, disc, _, _ = load_checkpoint(args.checkpoint)
    dataset = load_dataset(args.data)
    count = export_latents(disc, dataset, args.out)
    print(f"wrote {count} latent-code records to {args.out}", file=sys.stderr)
    return 0


def cmd_traverse(args) -> int:
    gen, _, config, _ = load_checkpoint(args.checkpoint)
    grid = export_traversals(
        gen, config, args.out, axis=args.axis, steps=args.steps, seed=args.seed
    )
    print(f"wrote {grid.shape[1]}x{grid.shape[0]} traversal grid to {args.out}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infogan-trainer",
        description="Train an adversarial model with code reconstruction on "
        "synthetic 2D shapes and export latent codes for the concept engine.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen-data", help="render a synthetic shape corpus")
    p_gen.add_argument("--n", type=int, required=True, help="sample count")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--side", type=int, default=32, help="image side length")
    p_gen.add_argument("--out", required=True, help="output .npz file")
    p_gen.set_defaults(func=cmd_gen_data)

    p_train = sub.add_parser("train", help="train on a rendered corpus")
    p_train.add_argument("--data", required=True, help="corpus .npz from gen-data")
    p_train.add_argument("--out-dir", required=True, help="checkpoint directory")
    p_train.add_argument("--n-latent", dest="n_latent", type=int, default=None)
    p_train.add_argument("--n-categorical", dest="n_categorical", type=int, default=None)
    p_train.add_argument(
        "--latent-distribution",
        dest="latent_distribution",
        choices=("uniform", "gaussian"),
        default=None,
    )
    p_train.add_argument("--noise-dim", dest="noise_dim", type=int, default=None)
    p_train.add_argument("--lambda-mi", dest="lambda_mi", type=float, default=None)
    p_train.add_argument("--lambda-decor", dest="lambda_decor", type=float, default=None)
    p_train.add_argument("--epochs", type=int, default=None)
    p_train.add_argument("--batch-size", dest="batch_size", type=int, default=None)
    p_train.add_argument("--seed", type=int, default=None)
    p_train.add_argument("--lr", type=float, default=None)
    p_train.add_argument(
        "--decor-key",
        choices=("x", "y", "rotation", "size"),
        default=None,
        help="dataset parameter to use as the known dimension for decorrelation",
    )
    p_train.set_defaults(func=cmd_train)

    p_export = sub.add_parser("export", help="write latent codes for a corpus")
    p_export.add_argument("--checkpoint", required=True)
    p_export.add_argument("--data", required=True)
    p_export.add_argument("--out", required=True, help="latent-code JSONL file")
    p_export.set_defaults(func=cmd_export)

    p_traverse = sub.add_parser("traverse", help="render a code traversal grid")
    p_traverse.add_argument("--checkpoint", required=True)
    p_traverse.add_argument("--out", required=True, help="PGM image path")
    p_traverse.add_argument("--axis", type=int, default=None, help="sweep one code only")
    p_traverse.add_argument("--steps", type=int, default=8)
    p_traverse.add_argument("--seed", type=int, default=0)
    p_traverse.set_defaults(func=cmd_traverse)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TrainingDiverged as exc:
        print(f"error: {exc} (checkpoint: {exc.checkpoint_path})", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
