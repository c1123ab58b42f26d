"""Run configuration, experiment suites, artifacts and manifests."""
from __future__ import annotations

from .config import COMMANDS, OUTPUT_ENV, RunConfig, parse_config, parse_flags, read_config_file
from .manifest import Assertion, ExitCode, FileEntry, RunManifest
from .output import Outputs, anchor, quantity_table, to_json, with_quantity
from .suites import Suite, Suites, run

__all__ = [
    "anchor",
    "Assertion",
    "COMMANDS",
    "ExitCode",
    "FileEntry",
    "OUTPUT_ENV",
    "Outputs",
    "parse_config",
    "quantity_table",
    "parse_flags",
    "read_config_file",
    "run",
    "RunConfig",
    "RunManifest",
    "Suite",
    "Suites",
    "to_json",
    "with_quantity",
]
