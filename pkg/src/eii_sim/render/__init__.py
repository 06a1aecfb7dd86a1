"""Configuration ingestion and output emission."""

from .csv_writer import read_csv, write_csv
from .heatmap import colormap_table, pixel_levels, write_heatmap
from .json_report import dumps
from .run_config import ConfigParseError, OutputSpec, RunConfig, parse_config

__all__ = [
    "ConfigParseError",
    "OutputSpec",
    "RunConfig",
    "colormap_table",
    "dumps",
    "parse_config",
    "pixel_levels",
    "read_csv",
    "write_csv",
    "write_heatmap",
]
