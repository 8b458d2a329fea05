"""Atomic report writers: TSV tables and JSON documents."""
import json
import math
import os
import tempfile
from pathlib import Path


def format_value(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            return str(value)
        return repr(value)
    return str(value)


def write_atomic(path, text):
    """Write ``text`` to ``path`` via a temp file in the same directory and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def tsv_text(header, rows):
    lines = ["\t".join(header)]
    for row in rows:
        if isinstance(row, dict):
            row = [row.get(h) for h in header]
        lines.append("\t".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def write_tsv(path, header, rows):
    return write_atomic(path, tsv_text(header, rows))


def write_json(path, obj):
    return write_atomic(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def read_text(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()
