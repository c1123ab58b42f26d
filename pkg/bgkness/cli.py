"""Command-line interface.

Every command accepts the keys of the run configuration as `--key value` flags, optionally on top
of a `--config` file of `key = value` lines.
"""
from pathlib import Path
from typing import Optional

import typer

from .errors import ParameterError
from .log import LOG
from .runs import COMMANDS, ExitCode, Suites, parse_config, run

CLI = typer.Typer(help="Numerical experiments on a BGK gas between two thermal reservoirs.")

PASSTHROUGH = {"allow_extra_args": True, "ignore_unknown_options": True}


def _make_command(command: str):
    def execute(
        ctx: typer.Context,
        config: Optional[Path] = typer.Option(  # noqa: B008
            None, "--config", help="File of 'key = value' lines, overridden by flags."
        ),
        log: bool = typer.Option(False, "--log/--no-log", help="Progress bars and reports."),
    ):
        try:
            cfg = parse_config(command, path=config, flags=list(ctx.args))
        except ParameterError as exc:
            LOG.error(str(exc))
            raise typer.Exit(int(ExitCode.UsageError)) from None

        manifest = run(cfg, log=log)
        if manifest.error:
            LOG.error(manifest.error)
        for assertion in manifest.failed():
            LOG.error(f"FAILED {assertion.name}: {assertion.detail}")
        raise typer.Exit(int(manifest.exit_code))

    execute.__doc__ = Suites.get(command).__doc__
    return execute


for _command in COMMANDS:
    CLI.command(_command, context_settings=PASSTHROUGH)(_make_command(_command))
