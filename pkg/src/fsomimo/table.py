"""The CSV dialect shared by the command line and the validation report.

Comma separated, ``\\n`` line endings, header always present. Numeric cells
are written in scientific notation with 12 significant digits
(``2.82094791774e-01``); text cells are written verbatim.
"""

from dataclasses import dataclass, field
import csv
import io
import math
import numbers

__all__ = ["CsvTable", "format_cell", "parse_csv"]


def format_cell(value):
    if isinstance(value, str):
        return value
    if isinstance(value, numbers.Real):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.11e}"
    raise TypeError(f"cannot render {type(value).__name__} cell {value!r}")


@dataclass
class CsvTable:
    header: tuple
    rows: list = field(default_factory=list)

    def __post_init__(self):
        self.header = tuple(self.header)
        for row in self.rows:
            self._check(row)

    def _check(self, row):
        if len(row) != len(self.header):
            raise ValueError(f"row has {len(row)} cells, header has {len(self.header)}")

    def append(self, row):
        row = tuple(row)
        self._check(row)
        self.rows.append(row)

    def column(self, name):
        k = self.header.index(name)
        return [row[k] for row in self.rows]

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([format_cell(c) for c in row])
        return buf.getvalue()


def _parse_cell(text):
    try:
        return float(text)
    except ValueError:
        return text


def parse_csv(text):
    """Inverse of :meth:`CsvTable.to_csv`; numeric-looking cells become floats."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    return CsvTable(header, [tuple(_parse_cell(c) for c in row) for row in reader])
