"""CSV and JSON output with fixed formatting.

Floats in CSV files are written with 17 significant digits so a file
round-trips to the same doubles; JSON documents use sorted keys.  Equal
inputs therefore give byte-identical files.
"""
import csv
import io
import json
import math


def fmt(v):
    return format(float(v), ".17g")


def write_csv(path_or_buf, header, rows):
    """Write a header row then ``rows`` of numbers."""
    own = isinstance(path_or_buf, (str, bytes)) or hasattr(path_or_buf, "__fspath__")
    fh = open(path_or_buf, "w", newline="") if own else path_or_buf
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    finally:
        if own:
            fh.close()


def read_csv(path):
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        return header, [[float(v) for v in row] for row in r]


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(obj):
    """JSON text; non-finite floats become the strings "inf"/"nan"."""
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(dumps(obj))


def frames_to_csv(path_or_buf, frames):
    """Rows ``(t, x, u)`` for every grid point of every frame."""
    def rows():
        for fr in frames:
            for xi, ui in zip(fr.x, fr.u.values):
                yield fr.t, xi, ui
    write_csv(path_or_buf, ("t", "x", "u"), rows())


def frames_to_string(frames):
    buf = io.StringIO()
    frames_to_csv(buf, frames)
    return buf.getvalue()
