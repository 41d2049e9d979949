"""Provenance records written next to every dataset."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Any


@dataclass(frozen=True, slots=True)
class ManifestEntry:
    """Diagnostics of one emitted data row.

    Attributes:
        row: Index of the row in the dataset (header excluded).
        d: Deviation of the row.
        t: Temperature of the row.
        status: "ok" or the name of the error that stopped the row.
        diagnostics: Residuals, iterations and step sizes.
        seconds: Wall-clock time spent on the row.
    """

    row: int
    d: float
    t: float
    status: str = "ok"
    diagnostics: dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    def _to_dict(self) -> dict:
        return {
            "row": self.row,
            "d": self.d,
            "t": self.t,
            "status": self.status,
            "diagnostics": self.diagnostics,
            "seconds": self.seconds,
        }

    @classmethod
    def _from_dict(cls, data: dict) -> ManifestEntry:
        return cls(
            row=data["row"],
            d=data["d"],
            t=data["t"],
            status=data.get("status", "ok"),
            diagnostics=data.get("diagnostics", {}),
            seconds=data.get("seconds", 0.0),
        )


@dataclass(frozen=True, slots=True)
class RunManifest:
    """Sidecar manifest of a CLI run.

    Attributes:
        command: Subcommand that produced the dataset.
        version: Package version.
        created: Start of the run (UTC).
        config: Flat dotted-key configuration snapshot.
        arguments: Command-line arguments of the run.
        entries: One entry per emitted row.
        seconds: Total wall-clock time.
    """

    command: str
    version: str
    created: datetime
    config: dict[str, Any]
    arguments: dict[str, Any] = field(default_factory=dict)
    entries: list[ManifestEntry] = field(default_factory=list)
    seconds: float = 0.0

    def _to_dict(self) -> dict:
        return {
            "command": self.command,
            "version": self.version,
            "created": self.created.isoformat(timespec="seconds"),
            "config": self.config,
            "arguments": self.arguments,
            "entries": [entry._to_dict() for entry in self.entries],
            "seconds": self.seconds,
        }

    @classmethod
    def _from_dict(cls, data: dict) -> RunManifest:
        return cls(
            command=data["command"],
            version=data["version"],
            created=datetime.fromisoformat(data["created"]),
            config=data["config"],
            arguments=data.get("arguments", {}),
            entries=[ManifestEntry._from_dict(e) for e in data.get("entries", [])],
            seconds=data.get("seconds", 0.0),
        )
