"""Matrix serialization round-trips and deterministic CSV formatting."""

import numpy as np
import pytest

from hybridcond.matio import (
    MAGIC,
    format_cell,
    load_matrix_binary,
    save_matrix_binary,
    save_matrix_csv,
    write_csv,
)


class TestBinaryFormat:
    def test_roundtrip(self, tmp_path, rng):
        a = rng.standard_normal((7, 4))
        path = tmp_path / "m.bin"
        save_matrix_binary(path, a)
        back = load_matrix_binary(path)
        assert np.array_equal(a, back)

    def test_header_layout(self, tmp_path):
        a = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
        path = tmp_path / "m.bin"
        save_matrix_binary(path, a)
        raw = path.read_bytes()
        assert raw[:8] == MAGIC
        assert int.from_bytes(raw[8:16], "little") == 3
        assert int.from_bytes(raw[16:24], "little") == 2
        assert len(raw) == 24 + 6 * 8
        assert np.frombuffer(raw[24:32], dtype="<f8")[0] == 1.0

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"NOTMAGIC" + b"\x00" * 32)
        with pytest.raises(OSError):
            load_matrix_binary(path)

    def test_truncation_rejected(self, tmp_path):
        a = np.ones((4, 4))
        path = tmp_path / "m.bin"
        save_matrix_binary(path, a)
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(OSError):
            load_matrix_binary(path)


class TestCsv:
    def test_matrix_csv_roundtrips_through_loadtxt(self, tmp_path, rng):
        a = rng.standard_normal((5, 3))
        path = tmp_path / "m.csv"
        save_matrix_csv(path, a)
        back = np.loadtxt(path, delimiter=",")
        assert np.array_equal(a, back)

    def test_format_cell_values(self):
        assert format_cell(0.1) == "0.1"
        assert format_cell(float("inf")) == "inf"
        assert format_cell(True) == "1"
        assert format_cell(False) == "0"
        assert format_cell(3) == "3"
        assert format_cell("flagged") == "flagged"

    def test_write_csv_deterministic(self, tmp_path):
        rows = [[0.1, float("inf"), "x"], [0.2, 1.0, ""]]
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv(p1, ["u", "v", "flag"], rows)
        write_csv(p2, ["u", "v", "flag"], rows)
        assert p1.read_bytes() == p2.read_bytes()
        text = p1.read_text().splitlines()
        assert text[0] == "u,v,flag"
        assert text[1] == "0.1,inf,x"

    def test_write_csv_rejects_ragged_rows(self, tmp_path):
        with pytest.raises(ValueError):
            write_csv(tmp_path / "r.csv", ["a", "b"], [[1.0]])


class TestLabeledMatrix:
    def test_roundtrip_with_provenance(self, tmp_path, rng):
        from hybridcond.matio import load_labeled_matrix, save_labeled_matrix

        a = rng.standard_normal((6, 6))
        a = 0.5 * (a + a.T)
        path = tmp_path / "hessian.bin"
        save_labeled_matrix(path, a, {"beta": 0.4, "preconditioned": False})
        back, info = load_labeled_matrix(path)
        assert np.array_equal(a, back)
        assert info == {"beta": 0.4, "preconditioned": False}
