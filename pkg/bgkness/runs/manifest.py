"""The run manifest: configuration, artifact checksums and assertion outcomes."""
from __future__ import annotations

from datetime import datetime, timezone
from enum import IntEnum
from pathlib import Path
from typing import Literal

import msgspec

from ..log import dict_view
from ..utils import sha256sum
from .config import RunConfig
from .output import to_json


class ExitCode(IntEnum):
    Pass = 0
    AssertionFailure = 1
    UsageError = 2
    DomainError = 3


class Assertion(msgspec.Struct):
    name: str
    passed: bool
    detail: str = ""


class FileEntry(msgspec.Struct):
    name: str
    sha256: str
    size: int

    @classmethod
    def of(cls, path: Path) -> FileEntry:
        return cls(name=path.name, sha256=sha256sum(path), size=path.stat().st_size)


Status = Literal["pass", "fail", "usage-error", "domain-error"]


def timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class RunManifest(msgspec.Struct, kw_only=True):
    config: RunConfig
    version: str
    started: str
    finished: str = ""
    files: list[FileEntry] = msgspec.field(default_factory=list)
    assertions: list[Assertion] = msgspec.field(default_factory=list)
    status: Status = "pass"
    error: str | None = None
    """Diagnostic of the error that aborted the run, verbatim."""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def exit_code(self) -> ExitCode:
        return {
            "pass": ExitCode.Pass,
            "fail": ExitCode.AssertionFailure,
            "usage-error": ExitCode.UsageError,
            "domain-error": ExitCode.DomainError,
        }[self.status]

    def failed(self) -> list[Assertion]:
        return [a for a in self.assertions if not a.passed]

    def write(self, path: Path) -> Path:
        path.write_bytes(to_json(self))
        return path

    def __rich__(self):
        return dict_view(
            {
                "command": self.config.command,
                "status": self.status,
                "assertions": len(self.assertions),
                "failed": [a.name for a in self.failed()],
                "files": [f.name for f in self.files],
                "error": self.error,
            },
            title="Run manifest",
        )
