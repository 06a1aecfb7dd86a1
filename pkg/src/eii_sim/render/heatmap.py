"""PGM and PNG heatmaps of pattern grids.

Rows run from the largest amplitude at the top to the smallest at the bottom; columns run
along increasing detuning.
"""

import logging
from pathlib import Path
from typing import Tuple, Union

import numpy as np
from PIL import Image

from ..sweep.types import PatternGrid

logger = logging.getLogger("eii-sim.render.heatmap")

# Colour stops of the fixed viridis-like table, evenly spaced on [0, 1]
VIRIDIS_STOPS = ("#440154", "#3b528b", "#21918c", "#5ec962", "#fde725")

PathLike = Union[str, Path]


def _hex_to_rgb(code: str) -> Tuple[int, int, int]:
    code = code.lstrip("#")
    return tuple(int(code[k : k + 2], 16) for k in (0, 2, 4))


def colormap_table(name: str) -> np.ndarray:
    """
    256-entry RGB lookup table.

    Args:
        name: "gray" or "viridis"

    Returns:
        uint8 array of shape (256, 3)
    """
    levels = np.linspace(0.0, 1.0, 256)
    if name == "gray":
        channel = np.arange(256, dtype=np.uint8)
        return np.stack([channel] * 3, axis=1)
    if name != "viridis":
        raise ValueError(f"Unknown colormap {name!r}; expected gray or viridis")
    stops = np.array([_hex_to_rgb(code) for code in VIRIDIS_STOPS], dtype=float)
    positions = np.linspace(0.0, 1.0, len(VIRIDIS_STOPS))
    table = np.stack([np.interp(levels, positions, stops[:, c]) for c in range(3)], axis=1)
    return np.floor(table + 0.5).astype(np.uint8)


def pixel_levels(grid: PatternGrid, clamp: Tuple[float, float] = (0.0, 1.0)) -> np.ndarray:
    """
    Map p00 linearly onto 8-bit levels.

    Values are clipped to the clamp range; NaN cells map to 0.

    Returns:
        uint8 array of shape (n_amp, n_eps), largest amplitude first
    """
    lo, hi = clamp
    if not lo < hi:
        raise ValueError(f"Clamp range must satisfy low < high, got {clamp}")
    values = grid.p00.T[::-1]
    scaled = (np.clip(values, lo, hi) - lo) / (hi - lo)
    scaled = np.where(np.isfinite(scaled), scaled, 0.0)
    return np.ascontiguousarray(np.floor(scaled * 255.0 + 0.5).astype(np.uint8))


def write_heatmap(
    grid: PatternGrid,
    path: PathLike,
    format: str = "pgm",
    colormap: str = "gray",
    clamp: Tuple[float, float] = (0.0, 1.0),
) -> None:
    """
    Write a grid as an 8-bit binary PGM or an RGB PNG.

    Args:
        grid: Non-empty pattern grid
        path: Destination file
        format: "pgm" or "png"
        colormap: "gray" or "viridis"; PGM is always gray
        clamp: Value range mapped onto 0..255
    """
    if grid.p00.size == 0:
        raise ValueError("Cannot render an empty grid")
    levels = pixel_levels(grid, clamp)

    if format == "pgm":
        if colormap != "gray":
            raise ValueError("PGM output is grayscale; use png for a colormap")
        Image.fromarray(levels).save(path, format="PPM")
    elif format == "png":
        rgb = colormap_table(colormap)[levels]
        Image.fromarray(rgb).save(path, format="PNG")
    else:
        raise ValueError(f"Unknown heatmap format {format!r}; expected pgm or png")
    logger.info(f"Wrote {levels.shape[1]}x{levels.shape[0]} {format} heatmap to {path}")
