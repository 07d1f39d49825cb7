"""Handles writing all run output files"""

import json
from io import TextIOWrapper
from typing import Iterable, List

import zstandard as zstd

from src.events.event_constants import RECORD_COLUMNS
from src.state.books import RunBook


def dumps(item: dict) -> str:
    """Deterministic single-line JSON (sorted keys, repr floats)."""
    return json.dumps(item, sort_keys=True)


def write_jsonl(filename: str, items: Iterable[dict]) -> None:
    """Write one JSON object per line; a .zst suffix compresses the whole stream."""
    combined_data = "".join(dumps(item) + "\n" for item in items)
    if filename.endswith(".zst"):
        compressor = zstd.ZstdCompressor()
        compressed_data = compressor.compress(combined_data.encode("UTF-8"))
        with open(filename, "wb") as f:
            f.write(compressed_data)
    else:
        with open(filename, "w", encoding="UTF-8") as f:
            f.write(combined_data)


def read_jsonl(filename: str) -> List[dict]:
    """Read a (optionally zstd-compressed) JSONL file."""
    blobs = []
    if filename.endswith(".zst"):
        with open(filename, "rb") as f:
            decompressor = zstd.ZstdDecompressor()
            with decompressor.stream_reader(f) as reader:
                txt_stream = TextIOWrapper(reader, encoding="UTF-8")
                for line in txt_stream:
                    line = line.strip()
                    if line:
                        blobs.append(json.loads(line))
    else:
        with open(filename, "r", encoding="UTF-8") as f:
            for line in f:
                line = line.strip()
                if line:
                    blobs.append(json.loads(line))
    return blobs


def write_records_jsonl(filename: str, header: dict, book: RunBook) -> None:
    """Header line followed by one line per RunRecord."""
    write_jsonl(filename, [header] + [r.to_json() for r in book.records])


def _csv_cell(value) -> str:
    if isinstance(value, (list, tuple)):
        return " ".join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def csv_header_lines(header: dict) -> List[str]:
    """'# key: value' comment lines; nested values are written as JSON."""
    lines = []
    for key in sorted(header):
        value = header[key]
        if isinstance(value, (dict, list)):
            value = dumps(value)
        lines.append(f"# {key}: {value}\n")
    return lines


def write_records_csv(filename: str, header: dict, book: RunBook) -> None:
    """Commented header, column row, then one row per record. List columns are space separated."""
    with open(filename, "w", encoding="UTF-8") as f:
        f.writelines(csv_header_lines(header))
        f.write(",".join(RECORD_COLUMNS) + "\n")
        for record in book.records:
            row = record.to_json()
            f.write(",".join(_csv_cell(row[col]) for col in RECORD_COLUMNS) + "\n")


def read_records_csv(filename: str):
    """Return (header dict of strings, list of row dicts of strings)."""
    header, rows, columns = {}, [], None
    with open(filename, "r", encoding="UTF-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                header[key] = value
            elif columns is None:
                columns = line.split(",")
            elif line:
                rows.append(dict(zip(columns, line.split(","))))
    return header, rows


def write_table_csv(filename: str, header: dict, columns: List[str], rows: List[list]) -> None:
    """Generic commented-header CSV (comparison tables)."""
    with open(filename, "w", encoding="UTF-8") as f:
        f.writelines(csv_header_lines(header))
        f.write(",".join(columns) + "\n")
        for row in rows:
            f.write(",".join(_csv_cell(v) for v in row) + "\n")


def write_json(filename: str, item: dict) -> None:
    """Indented, key-sorted JSON file."""
    with open(filename, "w", encoding="UTF-8") as f:
        f.write(json.dumps(item, indent=4, sort_keys=True))
        f.write("\n")
