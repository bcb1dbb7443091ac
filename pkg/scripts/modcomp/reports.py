"""Report assembly and the json / text / csv / dot renderers.

A report is a header (tool version, element-ordering fingerprint, config
echo) followed by one section per pipeline stage. Nothing time- or
host-dependent goes into a report, so identical runs render identical bytes.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from . import __version__
from .errors import ModcompError
from .groups import ORDERING_VERSION, GroupTable


class OutputFormat(str, enum.Enum):
    JSON = "json"
    TEXT = "text"
    CSV = "csv"
    DOT = "dot"


@dataclass
class Report:
    command: str
    header: dict[str, Any]
    sections: list[tuple[str, dict[str, Any]]] = field(default_factory=list)
    table: list[list[Any]] | None = None
    dot: str | None = None

    def add(self, stage: str, **data: Any) -> dict[str, Any]:
        self.sections.append((stage, data))
        return data

    def section(self, stage: str) -> dict[str, Any]:
        for name, data in self.sections:
            if name == stage:
                return data
        raise KeyError(stage)


def report_header(command: str, config: Mapping[str, Any], G: GroupTable | None = None) -> dict[str, Any]:
    header = {
        "tool": "modcomp",
        "version": __version__,
        "command": command,
        "ordering": ORDERING_VERSION,
        "config": dict(config),
    }
    if G is not None:
        header["group"] = G.name
        header["order"] = G.order
        header["fingerprint"] = G.fingerprint
    return header


def _plain(value: Any) -> Any:
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def render_json(report: Report) -> str:
    body = {
        "header": _plain(report.header),
        "stages": [{"stage": name, **_plain(data)} for name, data in report.sections],
    }
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


def _text_value(value: Any) -> str:
    value = _plain(value)
    if isinstance(value, str):
        return value
    return json.dumps(value, separators=(", ", ": "))


def render_text(report: Report) -> str:
    """One section per stage, laid out like a calculation log."""
    lines = [f"# modcomp {report.header['version']} {report.command}"]
    lines.append(f"# ordering {report.header['ordering']}")
    if "fingerprint" in report.header:
        lines.append(f"# group {report.header['group']} |G| = {report.header['order']} "
                     f"fingerprint {report.header['fingerprint']}")
    config = " ".join(f"{k}={_text_value(v)}" for k, v in sorted(report.header["config"].items()))
    lines.append(f"# config {config}")
    for name, data in report.sections:
        lines.append("")
        lines.append(f"== {name} ==")
        for key, value in data.items():
            value = _plain(value)
            if isinstance(value, list) and value and all(isinstance(v, (list, dict)) for v in value):
                lines.append(f"{key}:")
                lines.extend(f"  {_text_value(v)}" for v in value)
            else:
                lines.append(f"{key}: {_text_value(value)}")
    return "\n".join(lines) + "\n"


def render_csv(report: Report) -> str:
    if report.table is None:
        raise ModcompError(f"{report.command} has no tabular output; use --format json or text")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for row in report.table:
        writer.writerow("" if cell is None else _plain(cell) for cell in row)
    return buffer.getvalue()


def render_dot(report: Report) -> str:
    if report.dot is None:
        raise ModcompError(f"{report.command} has no graph output; dot is available for tiling and cayley")
    return report.dot if report.dot.endswith("\n") else report.dot + "\n"


RENDERERS = {
    OutputFormat.JSON: render_json,
    OutputFormat.TEXT: render_text,
    OutputFormat.CSV: render_csv,
    OutputFormat.DOT: render_dot,
}


def render(report: Report, fmt: OutputFormat | str) -> str:
    return RENDERERS[OutputFormat(fmt)](report)
