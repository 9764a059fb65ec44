"""Figure builders.

Both entry points consume only the documented table columns; derived
display quantities (amplitude spectral densities, the displacement-referred
quantum-limit line, backaction/thermal ratios) are column arithmetic, never
recomputed physics.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .io import read_bound, read_table


def _labels_for(files, labels):
    if labels is None:
        return [Path(f).stem for f in files]
    if len(labels) != len(files):
        raise ValueError(f"{len(labels)} labels for {len(files)} files")
    return list(labels)


def plot_sensitivity(files, out=None, bounds=(), labels=None,
                     inset_f_hz=None, inset_span_hz=None, title=None):
    """Log-log coupling reach versus frequency for one or more exported
    sensitivity tables.

    A secondary mass axis is derived from the tables' own mass_ev column;
    bound curves shade their excluded regions; an optional inset zooms on
    a named frequency (default span 0.1% of it).  Returns the figure.
    """
    import matplotlib.pyplot as plt

    if not files:
        raise ValueError("no input tables")
    names = _labels_for(files, labels)
    fig, ax = plt.subplots(figsize=(7.5, 5.0), constrained_layout=True)

    curves = []
    mass_per_hz = None
    for path, name in zip(files, names):
        cols, _ = read_table(path, "sensitivity")
        multimode = bool(np.any(cols["mode_count"] > 1))
        style = dict(linestyle="--", linewidth=1.0) if multimode else \
            dict(linestyle="-", linewidth=1.2)
        ax.loglog(cols["f_hz"], cols["g_min"],
                  label=name + (" (multimode)" if multimode else ""), **style)
        curves.append(cols)
        if mass_per_hz is None:
            mass_per_hz = float(np.median(cols["mass_ev"] / cols["f_hz"]))

    f_lo = min(float(c["f_hz"].min()) for c in curves)
    f_hi = max(float(c["f_hz"].max()) for c in curves)
    ylim = ax.get_ylim()
    for bound_path in bounds:
        bound = read_bound(bound_path)
        lo = max(f_lo, float(bound["f_hz"][0]))
        hi = min(f_hi, float(bound["f_hz"][-1]))
        if lo >= hi:
            continue
        f_grid = np.geomspace(lo, hi, 200)
        g_grid = np.interp(f_grid, bound["f_hz"], bound["g_bound"])
        tag = bound["label"] + (" (approx.)" if bound["approximate"] else "")
        ax.fill_between(f_grid, g_grid, ylim[1] * 1e3, alpha=0.15,
                        color="0.4", linewidth=0.0)
        ax.plot(f_grid, g_grid, color="0.3", linewidth=0.8, label=tag)
    ax.set_ylim(ylim)  # keep the data-driven window after shading

    secondary = ax.secondary_xaxis(
        "top", functions=(lambda f: f * mass_per_hz,
                          lambda m: m / mass_per_hz))
    secondary.set_xlabel("mass (eV)")
    ax.set_xlabel("frequency (Hz)")
    ax.set_ylabel("coupling reach $g$")
    ax.grid(True, which="both", alpha=0.25)
    ax.legend(fontsize="small", ncol=2)
    if title:
        ax.set_title(title)

    if inset_f_hz is not None:
        span = (inset_span_hz if inset_span_hz is not None
                else 1e-3 * inset_f_hz)
        if span <= 0:
            raise ValueError(f"inset span must be > 0, got {span}")
        win = (inset_f_hz - span / 2.0, inset_f_hz + span / 2.0)
        axins = ax.inset_axes([0.58, 0.58, 0.38, 0.38])
        for cols in curves:
            sel = (cols["f_hz"] >= win[0]) & (cols["f_hz"] <= win[1])
            if np.any(sel):
                axins.semilogy(cols["f_hz"][sel], cols["g_min"][sel],
                               linewidth=1.0)
        axins.axvline(inset_f_hz, color="0.5", linestyle=":", linewidth=0.8)
        axins.set_xlim(*win)
        axins.tick_params(labelsize=7)
        ax.indicate_inset_zoom(axins, edgecolor="0.5")

    if out is not None:
        fig.savefig(out, dpi=150)
    return fig


def plot_budget(files, out=None, labels=None, title=None):
    """Paired panels (log-log above, log-linear below) of the displacement
    budgets in one or more exported tables.

    Curves are amplitude spectral densities (square root of the PSD
    columns).  The quantum-limit overlay comes from column arithmetic:
    the response magnitude squared is sxx_tot/saa_det, so the displacement-
    referred limit is saa_sql * sxx_tot / saa_det.  The annotation reports
    each table's backaction-to-thermal ratio (sxx_ba/sxx_th, constant over
    frequency) and where the family crosses unity.  Returns (figure, info).
    """
    import matplotlib.pyplot as plt

    if not files:
        raise ValueError("no input tables")
    names = _labels_for(files, labels)
    fig, (ax_log, ax_lin) = plt.subplots(
        2, 1, figsize=(7.5, 7.0), sharex=True, constrained_layout=True)

    ratios: dict[str, float] = {}
    sql_drawn = False
    for path, name in zip(files, names):
        cols, _ = read_table(path, "budget")
        f = cols["f_hz"]
        total = np.sqrt(cols["sxx_tot"])
        color = ax_log.loglog(f, total, linewidth=1.3,
                              label=f"{name} total")[0].get_color()
        ax_log.loglog(f, np.sqrt(cols["sxx_imp"]), linewidth=0.8,
                      linestyle="-.", color=color, alpha=0.7)
        ax_log.loglog(f, np.sqrt(cols["sxx_ba"]), linewidth=0.8,
                      linestyle="--", color=color, alpha=0.7)
        ax_log.loglog(f, np.sqrt(cols["sxx_th"]), linewidth=0.9,
                      linestyle=":", color="0.2", alpha=0.8,
                      label="thermal" if not sql_drawn else None)
        ax_lin.semilogx(f, total, linewidth=1.3, color=color)
        if not sql_drawn:
            sxx_sql = cols["saa_sql"] * cols["sxx_tot"] / cols["saa_det"]
            for panel in (ax_log, ax_lin):
                panel.plot(f, np.sqrt(sxx_sql), color="k", linewidth=0.9,
                           label="quantum limit" if panel is ax_log else None)
            sql_drawn = True
        ratios[name] = float(np.median(cols["sxx_ba"] / cols["sxx_th"]))

    ordered = sorted(ratios.items(), key=lambda kv: kv[1])
    crossover = None
    for (lo_name, lo_r), (hi_name, hi_r) in zip(ordered, ordered[1:]):
        if lo_r <= 1.0 <= hi_r:
            crossover = (lo_name, hi_name)
            break
    note = "\n".join(f"{name}: $S_{{ba}}/S_{{th}}$ = {r:.2g}"
                     for name, r in ratios.items())
    if crossover:
        note += f"\nbackaction = thermal between {crossover[0]} " \
                f"and {crossover[1]}"
    ax_log.annotate(note, xy=(0.02, 0.02), xycoords="axes fraction",
                    fontsize=7, va="bottom",
                    bbox=dict(boxstyle="round", fc="white", alpha=0.75))

    ax_log.set_ylabel("displacement (m/$\\sqrt{\\mathrm{Hz}}$), log")
    ax_lin.set_ylabel("displacement (m/$\\sqrt{\\mathrm{Hz}}$), linear")
    ax_lin.set_xlabel("frequency (Hz)")
    for panel in (ax_log, ax_lin):
        panel.grid(True, which="both", alpha=0.25)
    ax_log.legend(fontsize="small", ncol=2)
    if title:
        ax_log.set_title(title)

    if out is not None:
        fig.savefig(out, dpi=150)
    return fig, {"ba_th_ratio": ratios, "crossover_between": crossover}
