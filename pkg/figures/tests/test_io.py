import json
import shutil
from pathlib import Path

import numpy as np
import pytest

from figplot.io import SchemaError, read_bound, read_table


def _copy_pair(csv_path, dest_dir, stem="copy"):
    csv_path = Path(csv_path)
    dest = dest_dir / f"{stem}.csv"
    shutil.copy(csv_path, dest)
    shutil.copy(csv_path.with_suffix(".json"), dest.with_suffix(".json"))
    return dest


def test_read_sensitivity_table(exports):
    cols, meta = read_table(exports["sensitivity"][0], "sensitivity")
    assert meta["schema_version"] == 1
    assert meta["kind"] == "sensitivity"
    assert isinstance(cols["f_hz"], np.ndarray)
    assert isinstance(cols["g_min"], np.ndarray)
    assert isinstance(cols["regime"], list)  # non-numeric column stays text
    assert np.all(np.diff(cols["f_hz"]) > 0)
    assert np.all(cols["g_min"] > 0)


def test_read_budget_table(exports):
    cols, _ = read_table(exports["budget"][0], "budget")
    for name in ("f_hz", "sxx_imp", "sxx_th", "sxx_ba", "sxx_tot",
                 "saa_det", "saa_sql"):
        assert isinstance(cols[name], np.ndarray)


def test_missing_sidecar(tmp_path):
    orphan = tmp_path / "orphan.csv"
    orphan.write_text("f_hz,g_min\n1.0,2.0\n")
    with pytest.raises(SchemaError, match="missing sidecar"):
        read_table(orphan, "sensitivity")


def test_unsupported_schema_version(exports, tmp_path):
    dest = _copy_pair(exports["sensitivity"][0], tmp_path)
    sidecar = dest.with_suffix(".json")
    meta = json.loads(sidecar.read_text())
    meta["schema_version"] = 2
    sidecar.write_text(json.dumps(meta))
    with pytest.raises(SchemaError, match="schema version 2"):
        read_table(dest, "sensitivity")


def test_kind_mismatch(exports):
    with pytest.raises(SchemaError, match="kind"):
        read_table(exports["budget"][0], "sensitivity")


def test_header_mismatch(exports, tmp_path):
    dest = _copy_pair(exports["sensitivity"][0], tmp_path)
    lines = dest.read_text().splitlines()
    lines[0] = lines[0].replace("g_min", "gmin")
    dest.write_text("\n".join(lines) + "\n")
    with pytest.raises(SchemaError, match="header"):
        read_table(dest, "sensitivity")


def test_ragged_rows(exports, tmp_path):
    dest = _copy_pair(exports["sensitivity"][0], tmp_path)
    with open(dest, "a", encoding="utf-8") as fh:
        fh.write("1.0,2.0\n")
    with pytest.raises(SchemaError, match="ragged"):
        read_table(dest, "sensitivity")


def test_no_rows(exports, tmp_path):
    dest = _copy_pair(exports["sensitivity"][0], tmp_path)
    header = dest.read_text().splitlines()[0]
    dest.write_text(header + "\n")
    with pytest.raises(SchemaError, match="no data rows"):
        read_table(dest, "sensitivity")


def test_read_bound_markers(exports):
    for path in exports["bounds"]:
        bound = read_bound(path)
        assert bound["label"]
        assert bound["approximate"] is True  # shipped stand-ins say so
        assert np.all(np.diff(bound["f_hz"]) > 0)
        assert np.all(bound["g_bound"] > 0)


def test_read_bound_defaults(tmp_path):
    path = tmp_path / "plain.csv"
    path.write_text("f_hz,g_bound\n1.0,1e-22\n10.0,1e-22\n")
    bound = read_bound(path)
    assert bound["label"] == "plain"  # falls back to the file stem
    assert bound["approximate"] is False


def test_read_bound_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("freq,limit\n1.0,1e-22\n")
    with pytest.raises(SchemaError, match="f_hz,g_bound"):
        read_bound(path)


def test_read_bound_bad_row(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("f_hz,g_bound\n1.0,1e-22,extra\n")
    with pytest.raises(SchemaError, match="bad row"):
        read_bound(path)


def test_read_bound_empty(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("# label: nothing here\n")
    with pytest.raises(SchemaError, match="no bound data"):
        read_bound(path)
