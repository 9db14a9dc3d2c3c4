"""Dataset rows and their CSV representation."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field


def format_value(v) -> str:
    """Floats at 17 significant digits (lossless for doubles), everything else via ``str``."""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float) or hasattr(v, "dtype"):
        return format(float(v), ".17g")
    return str(v)


def parse_value(s: str):
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


@dataclass(frozen=True)
class ExperimentRecord:
    """One row of a figure dataset: input parameters (angles in degrees) and outputs."""

    experiment_id: str
    parameters: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    seed: int | None = None

    def columns(self) -> list[str]:
        return list(self.parameters) + list(self.outputs)

    def row(self) -> list[str]:
        return [format_value(v) for v in (*self.parameters.values(), *self.outputs.values())]

    @classmethod
    def from_row(cls, experiment_id, header, row, n_parameters, seed=None) -> "ExperimentRecord":
        values = [parse_value(s) for s in row]
        params = dict(zip(header[:n_parameters], values[:n_parameters]))
        outs = dict(zip(header[n_parameters:], values[n_parameters:]))
        return cls(experiment_id, params, outs, seed)


def write_csv(records, stream) -> None:
    """Write records sharing one schema, header first, rows in order."""
    records = list(records)
    if not records:
        return
    header = records[0].columns()
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for rec in records:
        if rec.columns() != header:
            raise ValueError(f"record columns {rec.columns()} do not match header {header}")
        writer.writerow(rec.row())


def to_csv(records) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()
