"""Flat key-value experiment configs and CSV output with provenance headers.

Every emitted CSV starts with a '#'-prefixed comment block holding the
resolved configuration, so a file can always be traced back to (and re-run
from) the exact invocation that produced it.  Floats are printed with 17
significant digits to make byte-level determinism checkable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["ExperimentConfig", "format_value", "write_csv", "read_csv_header", "read_csv"]

_HEADER_MAGIC = "lossybloch config v1"


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _parse_value(text: str):
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


@dataclass
class ExperimentConfig:
    """One resolved CLI invocation: subcommand plus its flat parameters."""

    command: str
    params: dict = field(default_factory=dict)
    out_dir: str = "."
    seed: int | None = None

    def to_lines(self):
        lines = [f"command = {self.command}", f"out_dir = {self.out_dir}"]
        if self.seed is not None:
            lines.append(f"seed = {self.seed}")
        for key in sorted(self.params):
            lines.append(f"{key} = {format_value(self.params[key])}")
        return lines

    def to_text(self) -> str:
        return "\n".join(self.to_lines()) + "\n"

    @classmethod
    def from_lines(cls, lines) -> "ExperimentConfig":
        command, out_dir, seed = None, ".", None
        params = {}
        for raw in lines:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"malformed config line: {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key == "command":
                command = value
            elif key == "out_dir":
                out_dir = value
            elif key == "seed":
                seed = int(value)
            else:
                params[key] = _parse_value(value)
        if command is None:
            raise ValueError("config has no 'command' key")
        return cls(command=command, params=params, out_dir=out_dir, seed=seed)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"config file not found: {path}")
        return cls.from_lines(path.read_text().splitlines())


def write_csv(path, config: ExperimentConfig, columns, rows):
    """Write rows under a provenance header; floats at 17 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(f"# {_HEADER_MAGIC}\n")
        for line in config.to_lines():
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")


def read_csv_header(path) -> ExperimentConfig:
    """Re-parse the provenance header of an emitted CSV."""
    lines = []
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith(f"# {_HEADER_MAGIC}"):
            raise ValueError(f"{path} has no provenance header")
        for raw in fh:
            if not raw.startswith("#"):
                break
            lines.append(raw[1:].strip())
    return ExperimentConfig.from_lines(lines)


def read_csv(path):
    """Return (config, columns, list-of-row-value-lists) of an emitted CSV."""
    config_lines, columns, rows = [], None, []
    with open(path) as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if line.startswith("#"):
                config_lines.append(line[1:].strip())
                continue
            if columns is None:
                columns = line.split(",")
                continue
            if line:
                rows.append([_parse_value(v) for v in line.split(",")])
    config_lines = [l for l in config_lines if l != _HEADER_MAGIC]
    return ExperimentConfig.from_lines(config_lines), columns, rows
