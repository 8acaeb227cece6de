import io as _io
import json
import math

import numpy as np
from hypothesis import given, strategies as st

from repmut.closedform import solve_frame
from repmut.io import dumps, fmt, frames_to_string, read_csv, write_csv
from repmut.profiles import Gaussian


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_seventeen_digits_round_trip(v):
    assert float(fmt(v)) == v


def test_csv_round_trip(tmp_path):
    path = tmp_path / "a.csv"
    rows = [(0.1, 1 / 3), (2.0, math.pi)]
    write_csv(str(path), ("a", "b"), rows)
    header, back = read_csv(str(path))
    assert header == ["a", "b"] and back == [list(r) for r in rows]


def test_json_is_sorted_and_handles_infinity():
    text = dumps({"b": math.inf, "a": [1.0, math.nan]})
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": [1.0, "nan"], "b": "inf"}


def test_frames_csv_layout():
    fr = solve_frame(Gaussian(), 0.5, n=4)
    lines = frames_to_string([fr]).splitlines()
    assert lines[0] == "t,x,u" and len(lines) == 5
    t, x, u = map(float, lines[1].split(","))
    assert t == 0.5 and x == fr.x[0] and u == fr.u.values[0]


def test_write_to_buffer():
    buf = _io.StringIO()
    write_csv(buf, ("x",), [(np.float64(1.5),)])
    assert buf.getvalue() == "x\n1.5\n"
