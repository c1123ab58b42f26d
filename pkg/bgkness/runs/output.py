"""Writers for run artifacts: CSV tables through pyarrow, JSON reports through msgspec."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import msgspec
import numpy as np
import pyarrow as pa
from pyarrow import csv

from ..log import LOG


def _encode_default(obj):
    """JSON fallback for numpy values and complex numbers."""
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise NotImplementedError(f"Cannot encode objects of type {type(obj)}.")


ENCODER = msgspec.json.Encoder(enc_hook=_encode_default, order="deterministic")


def to_json(obj) -> bytes:
    return msgspec.json.format(ENCODER.encode(obj), indent=2) + b"\n"


ANCHORS = {
    # picard and contraction
    "picard-residual": "Lem:fixP",
    "contraction-factor": "Lem:CMT",
    "contraction-upper": "Lem:CMT",
    # a-priori bounds
    "density-lower-bound": "Eq:(ST3)",
    "steady-min-density": "Eq:(ST3)",
    "pointwise-lower-bound": "Eq:(plb)",
    "corpus-min-density": "Eq:(plb)",
    "fourth-moment-deviation": "Eq:(ST2)",
    "fourth-moment-bound": "Eq:(ST2)",
    "integrability-lhs": "Eq:(STU)",
    "integrability-rhs": "Eq:(STU)",
    "sup-density": "Lem:upper",
    "holder-chain-line": "Lem:upper",
    "holder-chain-torus": "Lem:upper",
    # basis, blocks and rates
    "explicit-rate-prefactor": "Thm:expl",
    "explicit-rate-lambda": "Thm:expl",
    "explicit-rate-refined": "Thm:expl",
    "mixing-parameter": "Thm:expl",
    "certified-rate": "Eq:(modno)",
    "mode-spectral-gap": "Eq:(modno)",
    "c-alpha": "Eq:(lowh)",
    "recurrence-a1": "Eq:(L1L2)",
    "gain-b2": "Eq:(L1L2)",
    "quadratic-form-gap": "Lem:mco",
    "coercivity-min-rate": "Eq:(diss1)",
    # evolution
    "decay-norm": "Eq:(hyp)",
}
"""Anchor of the analysis each reported quantity comes from."""

PREFIX_ANCHORS = {"dms-": "Thm:hypo"}


def anchor(quantity: str) -> str:
    if quantity in ANCHORS:
        return ANCHORS[quantity]
    for prefix, label in PREFIX_ANCHORS.items():
        if quantity.startswith(prefix):
            return label
    raise KeyError(f"No anchor registered for quantity {quantity!r}.")


def with_quantity(table: pa.Table, quantity: str | list[str]) -> pa.Table:
    """Prepend the `quantity` column naming what each row reports, and its `anchor`."""
    if isinstance(quantity, str):
        quantity = [quantity] * table.num_rows
    table = table.add_column(0, "anchor", pa.array([anchor(q) for q in quantity], pa.string()))
    return table.add_column(0, "quantity", pa.array(quantity, pa.string()))


def quantity_table(values: dict[str, float]) -> pa.Table:
    """One row per named scalar."""
    table = pa.table({"value": pa.array([float(v) for v in values.values()], pa.float64())})
    return with_quantity(table, list(values))


@dataclass
class Outputs:
    """Output directory and the files written to it, in order."""

    directory: Path
    prefix: str
    files: list[Path] = field(default_factory=list)

    def __post_init__(self):
        self.directory = Path(self.directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def path(self, name: str, suffix: str) -> Path:
        return self.directory / f"{self.prefix}-{name}.{suffix}"

    def write_csv(self, name: str, table: pa.Table) -> Path:
        path = self.path(name, "csv")
        csv.write_csv(table, path)
        self.files.append(path)
        LOG.debug(f"Wrote {table.num_rows} rows to '{path}'.")
        return path

    def write_json(self, name: str, obj) -> Path:
        path = self.path(name, "json")
        path.write_bytes(to_json(obj))
        self.files.append(path)
        LOG.debug(f"Wrote report to '{path}'.")
        return path
