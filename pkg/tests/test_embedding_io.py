import numpy as np
import pytest

from neighbor2vec import FormatError
from neighbor2vec.embedding_io import read_binary, read_text, write_binary, write_text


def test_text_round_trip_exact(tmp_path, rng):
    m = (rng.normal(size=(17, 9)) * 100).astype(np.float32)
    p = tmp_path / "emb.txt"
    write_text(m, p)
    assert np.array_equal(read_text(p), m)


def test_text_header_and_ids(tmp_path):
    m = np.arange(6, dtype=np.float32).reshape(3, 2)
    p = tmp_path / "emb.txt"
    write_text(m, p)
    lines = p.read_text().splitlines()
    assert lines[0] == "3 2"
    assert lines[1].split()[0] == "0"
    assert len(lines) == 4


def test_text_rows_any_order(tmp_path):
    p = tmp_path / "emb.txt"
    p.write_text("2 2\n1 3 4\n0 1 2\n")
    m = read_text(p)
    assert np.allclose(m, [[1, 2], [3, 4]])


def test_text_missing_row(tmp_path):
    p = tmp_path / "emb.txt"
    p.write_text("2 2\n0 1 2\n")
    with pytest.raises(FormatError, match="missing rows"):
        read_text(p)


def test_text_bad_width(tmp_path):
    p = tmp_path / "emb.txt"
    p.write_text("1 3\n0 1 2\n")
    with pytest.raises(FormatError, match="expected node id plus 3"):
        read_text(p)


def test_binary_round_trip(tmp_path, rng):
    m = rng.normal(size=(11, 5)).astype(np.float32)
    p = tmp_path / "emb.bin"
    write_binary(m, p)
    assert np.array_equal(read_binary(p), m)


def test_binary_layout(tmp_path):
    m = np.array([[1.0, 2.0]], np.float32)
    p = tmp_path / "emb.bin"
    write_binary(m, p)
    raw = p.read_bytes()
    assert len(raw) == 8 + 8
    assert np.frombuffer(raw[:8], "<u4").tolist() == [1, 2]
    assert np.frombuffer(raw[8:], "<f4").tolist() == [1.0, 2.0]


def test_binary_truncated(tmp_path):
    p = tmp_path / "emb.bin"
    p.write_bytes(np.array([2, 2], "<u4").tobytes() + b"\x00" * 4)
    with pytest.raises(FormatError, match="expected 4 values"):
        read_binary(p)
