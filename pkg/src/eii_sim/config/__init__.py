"""Configuration system for the EII simulator using environment variables."""

from .config import SectionName, get_config, get_section_config, get_worker_count
