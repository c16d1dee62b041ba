"""
Count table parser.
Reads the CSV and JSON forms written by CountTable back into a CountTable.
"""

import csv
import io
import json
from pathlib import Path
from typing import Dict

from stacksort_bijection.core.enumerate_verify import CountRow, CountTable
from stacksort_bijection.utils.logger import get_logger

logger = get_logger(__name__)


def parse_table_csv(text: str) -> CountTable:
    """
    Parse CSV output of CountTable.to_csv.

    Leading `# key: value` lines carry the metadata; the header is
    n,t,<statistics...>,count and an empty t means no sortability bound.
    """
    meta: Dict[str, str] = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    if not body:
        raise ValueError("table has no header row")

    reader = csv.reader(io.StringIO("\n".join(body)))
    header = next(reader)
    if header[:2] != ["n", "t"] or header[-1] != "count":
        raise ValueError(f"unexpected table header {header}")
    statistics = header[2:-1]

    rows = []
    for record in reader:
        if len(record) != len(header):
            raise ValueError(f"row {record} does not match header {header}")
        rows.append(CountRow(
            n=int(record[0]),
            t=int(record[1]) if record[1] else None,
            stats={name: int(v) for name, v in zip(statistics, record[2:-1])},
            count=int(record[-1]),
        ))

    return CountTable(
        patterns=meta.get("patterns", "").split(),
        extra=meta.get("extra", "").split(),
        statistics=statistics,
        rows=rows,
        generated_at=meta.get("generated_at", ""),
        tool_version=meta.get("tool_version", ""),
    )


def parse_table_json(text: str) -> CountTable:
    return CountTable.model_validate(json.loads(text))


def parse_table_file(file_path: str) -> CountTable:
    """
    Parse a saved count table, choosing the format by extension.

    Args:
        file_path: Path to a .csv or .json file

    Returns:
        CountTable equal to the one that was written
    """
    try:
        logger.info(f"Parsing count table: {file_path}")
        text = Path(file_path).read_text(encoding="utf-8")
        if Path(file_path).suffix.lower() == ".json":
            table = parse_table_json(text)
        else:
            table = parse_table_csv(text)
        logger.info(f"Parsed {len(table.rows)} rows from {Path(file_path).name}")
        return table
    except Exception as e:
        logger.error(f"Error parsing count table {file_path}: {str(e)}")
        raise
