"""Hard-coded color feature extraction.

Images become a single 3-vector in the color domain: hue, saturation and
brightness averaged over the foreground pixels, with hue averaged on the
circle so that near-red hues on either side of 0 degrees do not cancel to
cyan. The hue conversion works in degrees and keeps the eight corner colors
of the RGB cube exact.

Inside points, hue is stored normalized to [0, 1) so the three color
dimensions share a scale. Note the stored hue dimension is treated as
linear by the metric, so wrap-around reds (10 vs 350 degrees) look distant;
that is a documented limitation of this version.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import NoForegroundError, ValidationError

__all__ = [
    "RgbColor",
    "rgb_to_hsb",
    "hsb_to_rgb",
    "image_to_color_point",
    "read_ppm",
]


@dataclass(frozen=True)
class RgbColor:
    """An RGB triple with unit-range components."""

    r: float
    g: float
    b: float

    def __post_init__(self):
        for name in ("r", "g", "b"):
            v = float(getattr(self, name))
            if not (0.0 <= v <= 1.0):
                raise ValidationError(f"color component {name}={v!r} outside [0, 1]")
            object.__setattr__(self, name, v)

    @classmethod
    def from_8bit(cls, r: int, g: int, b: int) -> "RgbColor":
        for v in (r, g, b):
            if not (0 <= int(v) <= 255):
                raise ValidationError(f"8-bit color component {v!r} outside [0, 255]")
        return cls(r / 255.0, g / 255.0, b / 255.0)


def rgb_to_hsb(c: RgbColor):
    """Convert to (hue degrees in [0, 360), saturation, brightness).

    Brightness is the max component, saturation the chroma relative to it,
    and hue follows the dominant-component sector formula. Gray inputs
    (zero chroma) report hue 0 by convention.
    """
    mx = max(c.r, c.g, c.b)
    mn = min(c.r, c.g, c.b)
    chroma = mx - mn
    brightness = mx
    saturation = 0.0 if mx == 0.0 else chroma / mx
    if chroma == 0.0:
        hue = 0.0
    elif mx == c.r:
        hue = 60.0 * (((c.g - c.b) / chroma) % 6.0)
    elif mx == c.g:
        hue = 60.0 * ((c.b - c.r) / chroma + 2.0)
    else:
        hue = 60.0 * ((c.r - c.g) / chroma + 4.0)
    if hue >= 360.0:
        hue -= 360.0
    return hue, saturation, brightness


def hsb_to_rgb(h: float, s: float, b: float) -> RgbColor:
    """Inverse of :func:`rgb_to_hsb`; expects the same ranges it produces."""
    h, s, b = float(h), float(s), float(b)
    if not (0.0 <= h < 360.0):
        raise ValidationError(f"hue {h!r} outside [0, 360)")
    if not (0.0 <= s <= 1.0):
        raise ValidationError(f"saturation {s!r} outside [0, 1]")
    if not (0.0 <= b <= 1.0):
        raise ValidationError(f"brightness {b!r} outside [0, 1]")
    chroma = b * s
    x = chroma * (1.0 - abs((h / 60.0) % 2.0 - 1.0))
    m = b - chroma
    sector = int(h // 60.0) % 6
    r1, g1, b1 = (
        (chroma, x, 0.0),
        (x, chroma, 0.0),
        (0.0, chroma, x),
        (0.0, x, chroma),
        (x, 0.0, chroma),
        (chroma, 0.0, x),
    )[sector]
    return RgbColor(r1 + m, g1 + m, b1 + m)


def _pixel_rows(pixels) -> np.ndarray:
    """Coerce an image to an (N, 3) float array of unit-range RGB rows."""
    if isinstance(pixels, np.ndarray):
        arr = np.asarray(pixels, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValidationError(f"expected a non-empty (H, W, 3) pixel array, got {arr.shape}")
        arr = arr.reshape(-1, 3)
    else:
        rows = [
            [(px.r, px.g, px.b) if isinstance(px, RgbColor) else tuple(px) for px in row]
            for row in pixels
        ]
        if not rows or not rows[0]:
            raise ValidationError("expected a non-empty pixel grid")
        arr = np.asarray(rows, dtype=np.float64).reshape(-1, 3)
    if not np.all((arr >= 0.0) & (arr <= 1.0)):
        raise ValidationError("pixel components must lie in [0, 1]")
    return arr


def image_to_color_point(pixels, background, tol: float = 0.05) -> np.ndarray:
    """Mean foreground color as a (hue/360, saturation, brightness) vector.

    Foreground pixels are those whose largest componentwise difference from
    the background color exceeds ``tol``. Hue is averaged circularly (via
    unit vectors), so hues straddling 0 degrees average to red, not cyan.
    Raises NoForegroundError when every pixel matches the background.
    """
    arr = _pixel_rows(pixels)
    if isinstance(background, RgbColor):
        bg = np.array([background.r, background.g, background.b])
    else:
        bg = np.asarray(background, dtype=np.float64)
        if bg.shape != (3,) or not np.all((bg >= 0.0) & (bg <= 1.0)):
            raise ValidationError("background must be an RGB triple in [0, 1]")
    tol = float(tol)
    if tol < 0:
        raise ValidationError(f"tolerance must be >= 0, got {tol}")

    mask = np.max(np.abs(arr - bg), axis=1) > tol
    foreground = arr[mask]
    if foreground.shape[0] == 0:
        raise NoForegroundError("every pixel matches the background color")

    hx = hy = s_sum = b_sum = 0.0
    for r, g, b in foreground:
        h_deg, s, v = rgb_to_hsb(RgbColor(r, g, b))
        rad = math.radians(h_deg)
        hx += math.cos(rad)
        hy += math.sin(rad)
        s_sum += s
        b_sum += v
    n = foreground.shape[0]
    if math.hypot(hx, hy) < 1e-12:
        mean_hue = 0.0  # hues cancel exactly; pick the convention value
    else:
        mean_hue = math.degrees(math.atan2(hy, hx)) % 360.0
        if mean_hue >= 360.0:  # roundoff can land the modulo on 360 itself
            mean_hue = 0.0
    return np.array([mean_hue / 360.0, s_sum / n, b_sum / n])


def _ppm_tokens(data: bytes):
    """Yield header tokens, skipping '#' comments, tracking the byte offset."""
    i = 0
    while i < len(data):
        ch = data[i : i + 1]
        if ch.isspace():
            i += 1
        elif ch == b"#":
            while i < len(data) and data[i : i + 1] != b"\n":
                i += 1
        else:
            start = i
            while i < len(data) and not data[i : i + 1].isspace() and data[i : i + 1] != b"#":
                i += 1
            yield data[start:i].decode("ascii"), i


def read_ppm(source) -> np.ndarray:
    """Read a portable pixmap (P3 or P6) into an (H, W, 3) unit-range array."""
    if hasattr(source, "read"):
        data = source.read()
    else:
        data = Path(source).read_bytes()
    if isinstance(data, str):
        data = data.encode("ascii")

    tokens = _ppm_tokens(data)
    try:
        magic, _ = next(tokens)
        width, _ = next(tokens)
        height, _ = next(tokens)
        maxval, end = next(tokens)
        width, height, maxval = int(width), int(height), int(maxval)
    except (StopIteration, ValueError):
        raise ValidationError("truncated or malformed pixmap header") from None
    if magic not in ("P3", "P6"):
        raise ValidationError(f"unsupported pixmap magic {magic!r} (want P3 or P6)")
    if width < 1 or height < 1 or not (0 < maxval < 65536):
        raise ValidationError(f"bad pixmap geometry {width}x{height} maxval {maxval}")

    n = width * height * 3
    if magic == "P3":
        try:
            values = [int(tok) for tok, _ in tokens]
        except ValueError:
            raise ValidationError("non-integer sample in P3 pixmap") from None
        if len(values) != n:
            raise ValidationError(f"expected {n} samples, got {len(values)}")
        samples = np.array(values, dtype=np.float64)
    else:
        raw = data[end + 1 :]  # single whitespace byte separates header from raster
        if maxval < 256:
            if len(raw) < n:
                raise ValidationError(f"expected {n} raster bytes, got {len(raw)}")
            samples = np.frombuffer(raw[:n], dtype=np.uint8).astype(np.float64)
        else:
            if len(raw) < 2 * n:
                raise ValidationError(f"expected {2 * n} raster bytes, got {len(raw)}")
            samples = np.frombuffer(raw[: 2 * n], dtype=">u2").astype(np.float64)
    if np.any(samples > maxval):
        raise ValidationError("pixmap sample exceeds the declared maxval")
    return (samples / maxval).reshape(height, width, 3)
