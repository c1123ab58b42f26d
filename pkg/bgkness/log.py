"""Console logging and rich views of numerical reports and result tables."""
from __future__ import annotations

import logging
import sys
from numbers import Real

import numpy as np
import pyarrow as pa
import pyarrow.types as pat
from rich import box, get_console
from rich.padding import Padding
from rich.panel import Panel
from rich.pretty import Pretty
from rich.table import Table
from rich.text import Text

CONSOLE = get_console()

BOX = box.HORIZONTALS

DIGITS = 6


class LevelFormatter(logging.Formatter):
    """Prefixes the location line of each record with a color for its level."""

    FORMAT = "{asctime} {levelname:<7} | {name}.{module}.{funcName}:{lineno}\n{message}"

    COLORS = {
        logging.DEBUG: "\x1b[2m",
        logging.INFO: "\x1b[38;20m",
        logging.WARNING: "\x1b[33;1m",
        logging.ERROR: "\x1b[31;1m",
        logging.CRITICAL: "\x1b[41;1m",
    }

    def __init__(self, color: bool = True, datefmt: str = "%H:%M:%S"):
        super().__init__(self.FORMAT, style="{", datefmt=datefmt)
        self.color = color

    def format(self, record):
        msg = super().format(record)
        if not self.color:
            return msg
        header, _, body = msg.partition("\n")
        return f"{self.COLORS.get(record.levelno, '')}{header}\x1b[0m\n{body}"


def get_logger(name: str = "bgkness", level=logging.INFO, color: bool = True) -> logging.Logger:
    """The package logger, with a single stdout handler however often this is called."""
    logger = logging.getLogger(name)
    logger.setLevel(level)
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stdout)
        handler.setFormatter(LevelFormatter(color=color and sys.stdout.isatty()))
        logger.addHandler(handler)
    return logger


LOG = get_logger()


def pformat(obj, console=None, strip: bool = False) -> str:
    """Render any object as the rich console would print it."""
    console = console or CONSOLE
    with console.capture() as capture:
        console.print(obj, end="")
    result = capture.get()
    return result.strip() if strip else result


def scalar_view(x, digits: int = DIGITS):
    """Compact representation of numbers, numpy scalars and small arrays."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (Real, np.floating, np.integer)):
        x = x.item() if hasattr(x, "item") else x
        return x if isinstance(x, int) else float(f"{x:.{digits}g}")
    if isinstance(x, np.ndarray) and x.size <= 8:
        return [scalar_view(v, digits) for v in x.ravel()]
    if isinstance(x, np.ndarray):
        return f"array{x.shape}"
    return x


def dict_view(
    d: dict, title: str = "", expand: bool = False, width=None, padding=1, **kwds
) -> Padding:
    """Panel of a report's named quantities."""
    view = Pretty({k: scalar_view(v) for k, v in d.items()}, **kwds)
    return Padding(Panel(view, expand=expand, title=title, width=width, box=BOX), padding)


def result_view(tbl: pa.Table, title: str | None = None, max_rows: int = 12) -> Padding:
    """Head and tail of a result table, numeric columns right-aligned."""
    if tbl.num_rows > max_rows:
        half = max_rows // 2
        rows = tbl.slice(0, half).to_pylist() + [None] + tbl.slice(tbl.num_rows - half).to_pylist()
    else:
        rows = tbl.to_pylist()

    caption = Text.from_markup(f"[bold]{tbl.num_rows:,}[/] rows")
    table = Table(title=title, caption=caption, title_justify="left", box=BOX)
    for field in tbl.schema:
        numeric = pat.is_floating(field.type) or pat.is_integer(field.type)
        table.add_column(field.name, justify="right" if numeric else "left", no_wrap=True)

    def cell(x):
        if x is None:
            return ""
        if isinstance(x, float):
            return f"{x:.{DIGITS}g}"
        return str(x)

    for row in rows:
        if row is None:
            table.add_row(*["⋮"] * tbl.num_columns)
        else:
            table.add_row(*[cell(x) for x in row.values()])

    return Padding(table, 1)
