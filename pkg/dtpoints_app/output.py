"""
JSON and CSV writers for command results.

Output goes to stdout unless a path is given. Rows and keys are written in
the order the caller supplies, so repeated runs produce identical bytes.
"""

import csv
import io
import json
import sys
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

from dtpoints_app.constants import OutputFormats
from dtpoints_app.errors import InvalidConstructionError
from dtpoints_app.logger import get_logger

logger = get_logger(__name__)


def render_json(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def render_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def emit(text: str, out: Path | None = None) -> None:
    """Write ``text`` to ``out`` or stdout."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info("Wrote %s", out)


def write_result(
    fmt: str,
    data: Any,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    out: Path | None = None,
) -> None:
    """Emit ``data`` as JSON or ``rows`` as CSV, whichever ``fmt`` names."""
    if fmt == OutputFormats.JSON:
        emit(render_json(data), out)
    elif fmt == OutputFormats.CSV:
        emit(render_csv(columns, rows), out)
    else:
        raise InvalidConstructionError(f"unknown output format {fmt!r}")
