"""Feature extraction and external representation intake."""

from .color import RgbColor, hsb_to_rgb, image_to_color_point, read_ppm, rgb_to_hsb
from .diagnostics import (
    BetweennessReport,
    interpolation_betweenness_report,
    shuffle_vectors,
    smoothness_from_records,
    smoothness_score,
)
from .latents import (
    LatentCodeRecord,
    assemble_points,
    dump_latent_codes,
    load_latent_codes,
)

__all__ = [
    "RgbColor",
    "rgb_to_hsb",
    "hsb_to_rgb",
    "image_to_color_point",
    "read_ppm",
    "LatentCodeRecord",
    "load_latent_codes",
    "dump_latent_codes",
    "assemble_points",
    "smoothness_score",
    "smoothness_from_records",
    "interpolation_betweenness_report",
    "BetweennessReport",
    "shuffle_vectors",
]
