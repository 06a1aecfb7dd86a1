"""Long-format CSV emission of pattern grids."""

import csv
import json
import logging
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from ..sweep.types import CellFailure, PatternGrid

logger = logging.getLogger("eii-sim.render.csv_writer")

HEADER = ("eps0_ghz_over_2pi", "amp_ghz_over_2pi", "p00")

PathLike = Union[str, Path]


def _preamble(grid: PatternGrid) -> List[str]:
    provenance = grid.provenance
    lines = [
        f"# eii-simulator {provenance.get('version', 'unknown')}",
        f"# quantity: {provenance.get('quantity', 'p00')}",
        f"# spec: {json.dumps(provenance.get('spec', {}), sort_keys=True)}",
        f"# n_max: {provenance.get('n_max', 0)}",
        f"# clamp_events: {grid.clamp_events}",
        f"# nan_cells: {len(grid.failures)}",
    ]
    lines.extend(f"# nan {f.i_eps} {f.i_amp}: {f.reason}" for f in grid.failures)
    return lines


def write_csv(grid: PatternGrid, path: PathLike) -> None:
    """
    Write a grid in long format, eps-major then amp.

    Floats are written as their shortest round-trip decimal; failed cells as ``nan`` with their
    reason listed in the ``#`` preamble.

    Args:
        grid: Pattern grid
        path: Destination file
    """
    with open(path, "w", encoding="utf-8", newline="") as f:
        for line in _preamble(grid):
            f.write(line + "\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(HEADER)
        for i, eps in enumerate(grid.eps_values):
            for j, amp in enumerate(grid.amp_values):
                writer.writerow((repr(float(eps)), repr(float(amp)), repr(float(grid.p00[i, j]))))
    logger.info(f"Wrote {grid.p00.size} cells to {path}")


def read_csv(path: PathLike) -> PatternGrid:
    """
    Rebuild a grid from a file written by ``write_csv``.

    Returns:
        PatternGrid with axes, matrix, NaN reasons and clamp count
    """
    comments: List[str] = []
    with open(path, encoding="utf-8", newline="") as f:
        data_lines = []
        for line in f:
            if line.startswith("#"):
                comments.append(line[1:].strip())
            else:
                data_lines.append(line)
    reader = csv.reader(data_lines)
    header = next(reader)
    if tuple(header) != HEADER:
        raise ValueError(f"Unexpected CSV header {header}")
    rows = [(float(a), float(b), float(c)) for a, b, c in reader]

    eps_values = np.array(list(dict.fromkeys(r[0] for r in rows)))
    amp_values = np.array(list(dict.fromkeys(r[1] for r in rows)))
    p00 = np.array([r[2] for r in rows]).reshape(len(eps_values), len(amp_values))

    failures, clamp_events, provenance = [], 0, {}
    for comment in comments:
        key, _, value = comment.partition(": ")
        if key.startswith("nan "):
            _, i, j = key.split()
            failures.append(CellFailure(i_eps=int(i), i_amp=int(j), reason=value))
        elif key == "clamp_events":
            clamp_events = int(value)
        elif key == "spec":
            provenance["spec"] = json.loads(value)
        elif key == "n_max":
            provenance["n_max"] = int(value)
        elif key == "quantity":
            provenance["quantity"] = value
        elif key.startswith("eii-simulator "):
            provenance["version"] = key.split(" ", 1)[1]

    return PatternGrid(
        eps_values=eps_values,
        amp_values=amp_values,
        p00=p00,
        provenance=provenance,
        failures=failures,
        clamp_events=clamp_events,
    )


def write_series(header: Tuple[str, str], rows: List[Tuple[float, float]], path_or_stream) -> None:
    """Write a two-column series (time or amplitude versus p00)."""
    writer = csv.writer(path_or_stream, lineterminator="\n")
    writer.writerow(header)
    for x, y in rows:
        writer.writerow((repr(float(x)), repr(float(y))))


def summary_line(summary: Dict[str, object], elapsed: float) -> str:
    """One-line pattern summary in key=value form."""
    parts = [f"{key}={summary[key]}" for key in sorted(summary)]
    return " ".join(parts + [f"wall_time_s={elapsed:.3f}"])
