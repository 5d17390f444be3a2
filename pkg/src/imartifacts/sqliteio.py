"""Read-only access to evidence SQLite databases.

Databases are opened immutable so the original file bytes are never
touched: no journal recovery, no WAL checkpoint, no lock files.  A WAL
sidecar next to the database therefore stays unapplied; callers get a
warning so the report records that state.
"""

from __future__ import annotations

import os
import sqlite3
from pathlib import Path

from .model import ExtractionError

__all__ = ["MissingTable", "NotSqlite", "open_immutable", "row_value", "table_names"]

SQLITE_MAGIC = b"SQLite format 3\x00"


class NotSqlite(ExtractionError):
    """File lacks the SQLite file header."""


class MissingTable(ExtractionError):
    """A required table is absent from the database."""


def open_immutable(path: str | Path, warnings: list[str] | None = None) -> sqlite3.Connection:
    """Open a database file read-only and immutable.

    Verifies the file magic first so a bad path fails with NotSqlite
    instead of a confusing driver error.  Appends a warning when a WAL
    sidecar is present, since immutable mode does not apply it.
    """
    path = os.fspath(path)
    try:
        with open(path, "rb") as handle:
            magic = handle.read(len(SQLITE_MAGIC))
    except OSError as exc:
        raise NotSqlite("cannot read %s: %s" % (path, exc)) from exc
    if magic != SQLITE_MAGIC:
        raise NotSqlite("not a SQLite database: %s" % path)
    if warnings is not None and os.path.exists(path + "-wal"):
        warnings.append("wal-present-not-applied: %s" % path)
    uri = "file:%s?mode=ro&immutable=1" % Path(path).as_posix()
    connection = sqlite3.connect(uri, uri=True)
    connection.row_factory = sqlite3.Row
    return connection


def table_names(connection: sqlite3.Connection) -> dict[str, str]:
    """Map casefolded table names to their stored spelling."""
    rows = connection.execute("SELECT name FROM sqlite_master WHERE type = 'table'")
    return {row["name"].casefold(): row["name"] for row in rows}


def row_value(row: sqlite3.Row, *names: str, default=None):
    """Fetch the first present column among names, tolerating absence."""
    keys = {key.casefold(): key for key in row.keys()}
    for name in names:
        key = keys.get(name.casefold())
        if key is not None:
            return row[key]
    return default
