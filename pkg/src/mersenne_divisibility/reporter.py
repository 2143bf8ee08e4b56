"""
Output writers for sweep records and summaries.

Records are streamed as JSON lines, CSV (with a header row) or a rich table.
Field order follows ``SWEEP_FIELDS`` in every format so outputs diff cleanly.
"""

import csv
import json
import logging
from typing import Any, List, Optional, TextIO

from rich.console import Console
from rich.table import Table

from .models import SWEEP_FIELDS, SweepRecord, SweepSummary


logger = logging.getLogger(__name__)


class RecordWriter:
    """Base class for record writers."""

    def __init__(self, output: TextIO):
        self.output = output

    def begin(self) -> None:
        """Write anything that precedes the first record."""

    def write(self, record: SweepRecord) -> None:
        raise NotImplementedError("Subclasses must implement write method")

    def end(self) -> None:
        """Write anything that follows the last record."""


class JsonLinesWriter(RecordWriter):
    """One JSON object per line."""

    def write(self, record: SweepRecord) -> None:
        self.output.write(json.dumps(record.to_dict()) + "\n")


class CsvWriter(RecordWriter):
    """CSV with a header row; booleans as true/false, a missing poly verdict as an empty cell."""

    def __init__(self, output: TextIO):
        super().__init__(output)
        self._writer = csv.writer(output, lineterminator="\n")

    def begin(self) -> None:
        self._writer.writerow(SWEEP_FIELDS)

    def write(self, record: SweepRecord) -> None:
        self._writer.writerow([_csv_cell(value) for value in record.to_dict().values()])


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


class TableWriter(RecordWriter):
    """Rich table, rendered once all records are in."""

    def __init__(self, output: TextIO):
        super().__init__(output)
        self._rows: List[SweepRecord] = []

    def write(self, record: SweepRecord) -> None:
        self._rows.append(record)

    def end(self) -> None:
        table = Table(title="Sweep Records")
        for name in SWEEP_FIELDS:
            table.add_column(name, justify="right" if name in ("a", "m", "k", "d", "elapsed_micros") else "center")

        for record in self._rows:
            style = None if record.is_consistent() else "bold red"
            table.add_row(*[_table_cell(value) for value in record.to_dict().values()], style=style)

        Console(file=self.output, highlight=False).print(table)


def _table_cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


class Reporter:
    """Streams records through the writer for the configured format."""

    writers = {
        "json": JsonLinesWriter,
        "csv": CsvWriter,
        "table": TableWriter,
    }

    def __init__(self, format: str, output: TextIO):
        """Initialize reporter for ``format`` writing to ``output``."""
        if format not in self.writers:
            raise ValueError(f"Unsupported output format: {format}")
        self.format = format
        self.writer = self.writers[format](output)
        self.written = 0

    def begin(self) -> None:
        self.writer.begin()

    def write(self, record: SweepRecord) -> None:
        self.writer.write(record)
        self.written += 1

    def end(self) -> None:
        self.writer.end()
        logger.debug(f"wrote {self.written} {self.format} records")

    def get_supported_formats(self) -> List[str]:
        """Get list of supported output formats."""
        return list(self.writers.keys())


def create_default_reporter(format: str, output: TextIO) -> Reporter:
    """Create a reporter instance."""
    return Reporter(format, output)


def summary_table(summary: SweepSummary) -> Table:
    """Summary counts as a two-column rich table."""
    table = Table(title="Sweep Summary")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="magenta")

    table.add_row("Total Records", str(summary.total))
    table.add_row("Divides", str(summary.divides))
    table.add_row("Does Not Divide", str(summary.non_divides))
    table.add_row("Skipped (guard)", str(summary.skipped))
    table.add_row("Mismatches", str(summary.mismatches))
    if summary.duration is not None:
        table.add_row("Runtime", f"{summary.duration:.2f}s")
    return table


def show_summary(summary: SweepSummary, console: Optional[Console] = None) -> None:
    """Print the summary table to ``console`` (stderr by default)."""
    (console or Console(stderr=True)).print(summary_table(summary))

