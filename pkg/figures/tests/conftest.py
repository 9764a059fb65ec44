import json
import shutil
import subprocess
import sys
from pathlib import Path

import matplotlib
import pytest

matplotlib.use("Agg")

REPO = Path(__file__).parents[2]
BOUNDS_DIR = REPO / "src" / "optodm" / "data"

SIDES_CM = (20.0, 10.0, 5.0, 2.5)
YEAR_S = 31557600.0
POWERS_MW = (0.1, 1.0, 10.0)


def _forecast(workdir: Path, name: str, cfg_text: str, subcmd: str,
              extra=()) -> Path:
    cfg = workdir / f"{name}.cfg"
    cfg.write_text(cfg_text, encoding="utf-8")
    outdir = workdir / f"run_{name}"
    cmd = [sys.executable, "-m", "optodm.cli", subcmd,
           "--config", str(cfg), "--out", str(outdir), *extra]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return outdir


def _collect(src: Path, stem: str, dest_dir: Path, new_stem: str) -> Path:
    for suffix in (".csv", ".json"):
        shutil.copy(src / f"{stem}{suffix}", dest_dir / f"{new_stem}{suffix}")
    return dest_dir / f"{new_stem}.csv"


@pytest.fixture(scope="session")
def exports(tmp_path_factory):
    """Tables produced by the forecasting CLI, consumed here as files only."""
    work = tmp_path_factory.mktemp("exports")
    out = {"sensitivity": [], "budget": [], "budget_labels": []}

    grid = "[grid]\nf_min_hz = 800\nf_max_hz = 20000\npoints_per_decade = 80\n"
    for side in SIDES_CM:
        mem = f"[membrane]\nside_cm = {side}\n"
        for tag, est in (("coh", ""),
                         ("yr", f"[estimator]\ntau_s = {YEAR_S}\n")):
            name = f"l{side:g}_{tag}"
            run = _forecast(work, name, mem + grid + est, "gmin")
            out["sensitivity"].append(
                _collect(run, "sensitivity", work, name))

    run = _forecast(work, "mm", grid, "gmin", extra=["--multimode"])
    out["multimode"] = _collect(run, "sensitivity_multimode", work,
                                "multimode")

    out["b_channel"] = []
    for tag, est in (("coh", ""),
                     ("yr", f"[estimator]\ntau_s = {YEAR_S}\n")):
        name = f"bch_{tag}"
        run = _forecast(work, name, grid + est, "gmin",
                        extra=["--channel", "b"])
        out["b_channel"].append(_collect(run, "sensitivity", work, name))

    for p_mw in POWERS_MW:
        name = f"p{p_mw:g}"
        run = _forecast(work, name, f"[readout]\npower_mw = {p_mw}\n",
                        "budget")
        out["budget"].append(_collect(run, "budget", work, name))
        out["budget_labels"].append(f"{p_mw:g} mW")

    run = _forecast(work, "ref", "", "budget")
    shutil.copy(run / "budget_summary.json", work / "summary.json")
    out["summary"] = work / "summary.json"
    out["bounds"] = sorted(BOUNDS_DIR.glob("bound_*_bl.csv"))
    return out


@pytest.fixture()
def summary(exports):
    return json.loads(Path(exports["summary"]).read_text())


@pytest.fixture(autouse=True)
def _close_figures():
    yield
    import matplotlib.pyplot as plt

    plt.close("all")
