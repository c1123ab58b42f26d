"""Run configuration: a flat key=value file overridden by command-line flags."""
from __future__ import annotations

import os
import re
from pathlib import Path
from typing import Annotated, Literal, get_args

import msgspec

from ..errors import ConfigError
from ..model import ModelParams, VelocityGrid

Command = Literal["ness", "contraction", "spectrum", "rates", "evolve", "verify-bounds", "dms"]

COMMANDS: tuple[str, ...] = get_args(Command)

OUTPUT_ENV = "BGKNESS_OUTPUT_DIR"

Positive = Annotated[float, msgspec.Meta(gt=0)]
Count = Annotated[int, msgspec.Meta(ge=1)]


class RunConfig(msgspec.Struct, forbid_unknown_fields=True, kw_only=True):
    """All parameters of a run. Only the model parameters are required."""

    command: Command
    alpha: Annotated[float, msgspec.Meta(ge=0, le=1)]
    t1: Positive
    t2: Positive

    n_modes: Annotated[int, msgspec.Meta(ge=1, le=512)] = 8
    """Fourier truncation K."""
    n_basis: Annotated[int, msgspec.Meta(ge=3, le=64)] = 24
    """Velocity basis size M."""
    n_velocity: Annotated[int, msgspec.Meta(ge=16)] = 512
    cutoff: Annotated[float, msgspec.Meta(ge=0)] = 0.0
    """Velocity cutoff; 0 chooses one from the temperatures."""

    tol: Positive = 1e-12
    max_iter: Count = 10_000
    kmax: Count = 8
    convention: Literal["torus", "circle"] = "torus"

    dt: Positive = 0.05
    t_end: Positive = 20.0
    scheme: Literal["lie", "strang"] = "strang"
    record_every: Count = 1
    linearized: bool = True
    preset: Literal["mode", "random", "density"] = "mode"
    amplitude: Positive = 1.0
    basis_index: Annotated[int, msgspec.Meta(ge=0)] = 2
    wavenumber: Annotated[int, msgspec.Meta(ge=0)] = 1

    r: Annotated[float, msgspec.Meta(ge=0, lt=1)] = 0.5
    samples: Count = 10_000
    seed: Annotated[int, msgspec.Meta(ge=0)] = 0
    output_dir: str = "runs"

    def __post_init__(self):
        if self.t_end < self.dt:
            raise ValueError(f"field `t_end` ({self.t_end}) is shorter than dt ({self.dt})")

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.alpha, self.t1, self.t2)

    def grid(self, moments: int | None = None) -> VelocityGrid:
        """Velocity grid from `cutoff`, or one resolving f∞ moments up to `moments`."""
        if self.cutoff > 0:
            return VelocityGrid.uniform(self.cutoff, self.n_velocity)
        if moments is not None:
            return VelocityGrid.for_moments(self.params, moments, max(self.n_velocity, 1024))
        return VelocityGrid.for_params(self.params, self.n_velocity)

    def to_dict(self) -> dict:
        return msgspec.structs.asdict(self)


LINE = re.compile(r"^\s*([A-Za-z_][\w-]*)\s*=\s*(.*?)\s*$")
KEY_IN_PATH = re.compile(r"\$\.(\w+)")
KEY_IN_MESSAGE = re.compile(r"field `(\w+)`")


def _key(name: str) -> str:
    return name.strip().lstrip("-").replace("-", "_")


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse `key = value` lines; blank lines and lines starting with # are skipped."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file '{path}' does not exist.")

    values = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        match = LINE.match(line)
        if match is None:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got '{line.strip()}'.")
        values[_key(match.group(1))] = match.group(2)
    return values


def parse_flags(args: list[str]) -> dict[str, str]:
    """`--key value` and `--key=value` pairs into a dict."""
    values = {}
    i = 0
    while i < len(args):
        arg = args[i]
        if not arg.startswith("--"):
            raise ConfigError(f"Expected a '--key value' flag, got '{arg}'.")
        if "=" in arg:
            key, value = arg.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(args) or args[i + 1].startswith("--"):
                raise ConfigError(f"Flag '{arg}' is missing its value ({_key(arg)}).")
            key, value = arg, args[i + 1]
            i += 2
        values[_key(key)] = value
    return values


def _config_error(exc: Exception) -> ConfigError:
    msg = str(exc)
    key = None
    if match := KEY_IN_PATH.search(msg):
        key = match.group(1)
    elif match := KEY_IN_MESSAGE.search(msg):
        key = match.group(1)
    prefix = f"Invalid config key '{key}'" if key else "Invalid config"
    return ConfigError(f"{prefix}: {msg}")


def parse_config(
    command: str,
    path: str | Path | None = None,
    flags: list[str] | dict[str, str] | None = None,
) -> RunConfig:
    """Merge file values and flags (which take precedence), then validate.

    Values may be strings; they are coerced to the declared types. Without an explicit
    `output_dir`, the directory named by BGKNESS_OUTPUT_DIR is used, or `runs`.
    """
    values: dict = read_config_file(path) if path is not None else {}
    if isinstance(flags, dict):
        values.update({_key(k): v for k, v in flags.items()})
    elif flags:
        values.update(parse_flags(flags))

    values.setdefault("output_dir", os.environ.get(OUTPUT_ENV, "runs"))
    values["command"] = command

    try:
        cfg = msgspec.convert(values, RunConfig, strict=False)
    except msgspec.ValidationError as exc:
        raise _config_error(exc) from None

    return cfg
