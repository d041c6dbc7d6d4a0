import os
import json

import pandas as pd

from lib.storage_writer import (
    _compress_json,
    _decompress_json,
    read_json_gz,
    write_frame_csv,
    write_json,
    write_json_gz,
    write_text,
)


def test_write_json_gz(mocker):
    """
    Tests that the gzip writer creates the parent directory and writes compressed bytes.
    """
    mocker.patch("os.makedirs")
    mock_open = mocker.patch("builtins.open", mocker.mock_open())

    path = write_json_gz("/test/output/model-naive.json.gz", {"intercept": -2.0})

    assert os.makedirs.call_count == 1
    mock_open.assert_called_once_with("/test/output/model-naive.json.gz", "wb")
    written = mock_open().write.call_args[0][0]
    assert isinstance(written, bytes)
    assert _decompress_json(written) == {"intercept": -2.0}
    assert path == "/test/output/model-naive.json.gz"


def test_compression_is_deterministic():
    """Key order and the gzip timestamp must not leak into the bytes."""
    assert _compress_json({"b": 1, "a": [1.5, 2]}) == _compress_json({"a": [1.5, 2], "b": 1})


def test_json_gz_round_trip_on_disk(tmp_path):
    path = str(tmp_path / "nested" / "doc.json.gz")
    write_json_gz(path, {"scores": [0.25, -0.25]})
    assert read_json_gz(path) == {"scores": [0.25, -0.25]}


def test_write_json_and_text(tmp_path):
    json_path = write_json(str(tmp_path / "report.json"), {"z": 1, "a": 2})
    with open(json_path, encoding="utf-8") as f:
        raw = f.read()
    assert raw.index('"a"') < raw.index('"z"')
    assert json.loads(raw) == {"a": 2, "z": 1}

    text_path = write_text(str(tmp_path / "report.txt"), "line")
    with open(text_path, encoding="utf-8") as f:
        assert f.read() == "line\n"


def test_write_frame_csv(tmp_path):
    path = write_frame_csv(str(tmp_path / "out" / "table.csv"), pd.DataFrame({"a": [0.5, 1.0], "b": ["x", "y"]}))
    with open(path, "rb") as f:
        assert f.read() == b"a,b\n0.5,x\n1.0,y\n"
