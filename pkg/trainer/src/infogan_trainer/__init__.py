"""Adversarial shape trainer: synthetic corpus, training, latent export."""

from .export import export_latents, export_traversals, write_pgm
from .losses import decorrelation_penalty
from .models import Discriminator, Generator
from .shapes import CLASSES, ShapeSample, generate_dataset, load_dataset, save_dataset
from .train import (
    TrainerConfig,
    TrainingCurves,
    TrainingDiverged,
    TrainResult,
    load_checkpoint,
    sample_codes,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "CLASSES",
    "Discriminator",
    "Generator",
    "ShapeSample",
    "TrainerConfig",
    "TrainingCurves",
    "TrainingDiverged",
    "TrainResult",
    "decorrelation_penalty",
    "export_latents",
    "export_traversals",
    "generate_dataset",
    "load_checkpoint",
    "load_dataset",
    "sample_codes",
    "save_dataset",
    "train",
    "write_pgm",
]
