"""Run configuration and bit-stable CSV output."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from pathlib import Path

COMMANDS = ("spectrum", "eigvec", "classical", "wkb", "scaling", "localize", "dos")
PRESETS = ("fig1", "fig2", "gap13", "doublet", "scar", "weyl")


class ConfigError(ValueError):
    """Invalid run configuration; `key` names the offending option."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass
class RunConfig:
    command: str
    lam: float | None = None
    n: int | None = None
    lambda_list: list[float] = field(default_factory=list)
    n_list: list[int] = field(default_factory=list)
    out: str | None = None
    resolution: int = 256
    sector: str = "both"
    preset: str | None = None
    level: int = 0
    count: int | None = None
    bins: int = 50
    n_components: int = 20

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError("command", f"unknown command {self.command!r}")
        if self.lam is not None and self.lam < 0:
            raise ConfigError("lambda", f"must be >= 0, got {self.lam}")
        if self.n is not None and self.n < 1:
            raise ConfigError("n", f"must be >= 1, got {self.n}")
        for name, lst in (("lambda_list", self.lambda_list), ("n_list", self.n_list)):
            if lst:
                if list(lst) != sorted(set(lst)):
                    raise ConfigError(name, "must be strictly increasing")
        if self.resolution < 64 or self.resolution & (self.resolution - 1):
            raise ConfigError(
                "resolution", f"must be a power of two >= 64, got {self.resolution}"
            )
        if self.sector not in ("even", "odd", "both"):
            raise ConfigError("sector", f"must be even, odd or both, got {self.sector!r}")
        if self.preset is not None and self.preset not in PRESETS:
            raise ConfigError("preset", f"unknown preset {self.preset!r}")
        if self.bins < 8:
            raise ConfigError("bins", f"must be >= 8, got {self.bins}")
        return self

    def echo(self) -> str:
        """Canonical JSON echo, sufficient to reproduce the run.

        The output path is omitted so rendered tables depend only on the
        physics configuration.
        """
        fields = {k: v for k, v in asdict(self).items() if k != "out"}
        return json.dumps(fields, sort_keys=True, separators=(",", ":"))


def fmt(x) -> str:
    """Serialize one cell; floats carry 17 significant digits (round-trip safe)."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int,)):
        return str(x)
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


@dataclass
class OutputTable:
    name: str
    columns: list[str]
    rows: list[tuple]
    header: dict = field(default_factory=dict)

    def render(self) -> str:
        lines = []
        for key in self.header:
            lines.append(f"# {key}: {self.header[key]}")
        lines.append(",".join(self.columns))
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"ragged row in table {self.name}")
            lines.append(",".join(fmt(x) for x in row))
        return "\n".join(lines) + "\n"


def write_table(table: OutputTable, path) -> None:
    """Write one table as CSV with '#' provenance header, LF endings."""
    data = table.render().encode()
    Path(path).write_bytes(data)
