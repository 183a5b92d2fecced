"""The three result figures: anneal profiles, prediction scatter, and the
local-minimum-depth sweep.  Inputs are the CSV/JSON files written by the
qpt-bounds CLI (schema version 1)."""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class SchemaError(Exception):
    """Input file does not match the expected schema."""


STYLE = {
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
}

SWEEP_COLUMNS = ["s", "e0", "e1", "gap", "fidelity", "de0_ds"]
SCATTER_COLUMNS = ["seed", "class", "s_min", "g_min", "bound_lo", "bound_hi",
                   "s_prime", "delta_e_t", "ndpt_s_cross", "fidelity_jump"]
WMIS_COLUMNS = ["w_l", "delta_e_t", "s_min_exact", "bound_lo", "bound_hi",
                "bound_hi_sym", "ndpt_s_cross"]

CLASS_COLORS = {"qpt": "tab:blue", "no_qpt": "tab:red",
                "undecidable": "tab:orange"}


def _read_csv(path, required, optional=()):
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input file {path} not found")
    with path.open() as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing columns {missing}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows, header


def _read_report(path):
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"report file {path} not found")
    obj = json.loads(path.read_text())
    if obj.get("schema") != 1:
        raise SchemaError(f"{path}: unsupported schema {obj.get('schema')!r}")
    for key in ("s_star", "profiles"):
        if key not in obj:
            raise SchemaError(f"{path}: missing key {key!r}")
    return obj


def _f(value):
    return float(value) if value not in ("", None) else None


def plot_profiles(sweep_csv, report_json, out_path) -> Path:
    """Three stacked panels: ground energy with the perturbative lines and
    the localized-energy band, solution fidelity, and the spectral gap;
    the crossing-bound interval is shaded in all panels."""
    rows, _ = _read_csv(sweep_csv, SWEEP_COLUMNS)
    rep = _read_report(report_json)
    s = np.array([float(r["s"]) for r in rows])
    e0 = np.array([float(r["e0"]) for r in rows])
    gap = np.array([float(r["gap"]) for r in rows])
    fid = np.array([float(r["fidelity"]) for r in rows])

    p = rep["profiles"]
    c, d = p["c"], p["d"]
    e_deloc = -c * (1 - s) + s * p["mean_energy"]
    e_global = s * p["e0_t"]
    e_local_lo = -c * (1 - s) * p["dmax"] / d + s * p["e_v_t"]
    e_local_hi = c * (1 - s) * (p["phi"] / d - 1) + s * p["e_v_t"]
    lo, hi = rep["s_star"]
    hi_shade = rep.get("s_star_sym") or hi

    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(3, 1, figsize=(5.0, 7.2), sharex=True)
        ax = axes[0]
        ax.plot(s, e0, "k-", lw=1.4, label="ground energy")
        ax.plot(s, e_deloc, "-", color="tab:green", lw=1.0, label="delocalized")
        ax.plot(s, e_global, "--", color="tab:blue", lw=1.0, label="global min")
        ax.fill_between(s, e_local_lo, e_local_hi, color="tab:orange",
                        alpha=0.4, label="local min band")
        ax.set_ylabel("energy")
        ax.legend(loc="best", fontsize=7)

        axes[1].plot(s, fid, "-", color="tab:purple", lw=1.2)
        axes[1].set_ylabel("solution fidelity")
        axes[1].set_ylim(-0.05, 1.05)
        jump = rep.get("fidelity_jump")
        if jump is not None:
            axes[1].axvline(jump, color="k", ls=":", lw=0.8)

        axes[2].semilogy(s[gap > 0], gap[gap > 0], "-", color="tab:red", lw=1.2)
        axes[2].set_ylabel("spectral gap")
        axes[2].set_xlabel("schedule s")
        s_min = rep.get("s_min")
        if s_min is not None:
            axes[2].axvline(s_min, color="k", ls=":", lw=0.8)

        for ax in axes:
            ax.axvspan(lo, hi_shade, color="red", alpha=0.15, hatch="//",
                       lw=0)
        fig.align_ylabels(axes)
        fig.tight_layout()
        out = Path(out_path)
        fig.savefig(out)
        plt.close(fig)
    return out


def plot_scatter(batch_csv, out_path) -> Path:
    """Predicted crossing interval (error bars) against the observed gap
    minimum, class-colored, with the second-order NDPT predictions
    overlaid as crosses when present."""
    rows, header = _read_csv(batch_csv, [c for c in SCATTER_COLUMNS
                                         if c != "ndpt_s_cross"])
    has_ndpt = "ndpt_s_cross" in header
    if not has_ndpt:
        print("warning: ndpt_s_cross column missing; crosses omitted",
              file=sys.stderr)

    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 5.0))
        seen = set()
        for r in rows:
            x = _f(r["s_min"])
            lo, hi = _f(r["bound_lo"]), _f(r["bound_hi"])
            if x is None or lo is None or hi is None:
                continue
            cls = r["class"]
            color = CLASS_COLORS.get(cls, "gray")
            mid = 0.5 * (lo + hi)
            label = cls if cls not in seen else None
            seen.add(cls)
            ax.errorbar([x], [mid], yerr=[[mid - lo], [hi - mid]],
                        fmt="o", ms=2.5, color=color, capsize=3, lw=1.0,
                        label=label)
            if has_ndpt:
                nd = _f(r["ndpt_s_cross"])
                if nd is not None:
                    ax.plot([x], [nd], "x", color="tab:green", ms=5, mew=1.2)
        lim = [0.0, 1.0]
        ax.plot(lim, lim, "r--", lw=1.0)
        ax.set_xlim(*lim)
        ax.set_ylim(*lim)
        ax.set_xlabel("observed gap-minimum location")
        ax.set_ylabel("predicted crossing interval")
        ax.legend(loc="upper left", fontsize=7)
        fig.tight_layout()
        out = Path(out_path)
        fig.savefig(out)
        plt.close(fig)
    return out


def plot_wl_sweep(wmis_csv, out_path) -> Path:
    """Gap-minimum location against the local-minimum depth parameter:
    bound intervals with plain (narrow caps) and symmetry-tightened (wide
    caps) upper ends, exact values as triangles, NDPT as stars."""
    rows, header = _read_csv(wmis_csv, WMIS_COLUMNS[:6])
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.2, 4.0))
        w = np.array([float(r["w_l"]) for r in rows])
        lo = np.array([float(r["bound_lo"]) for r in rows])
        hi = np.array([float(r["bound_hi"]) for r in rows])
        hi_sym = np.array([float(r["bound_hi_sym"]) for r in rows])
        mid = 0.5 * (lo + hi)
        ax.errorbar(w, mid, yerr=np.vstack([mid - lo, hi - mid]),
                    fmt="none", color="tab:green", capsize=2, lw=1.0,
                    label="bounds (degree)")
        mid_sym = 0.5 * (lo + hi_sym)
        ax.errorbar(w, mid_sym, yerr=np.vstack([mid_sym - lo, hi_sym - mid_sym]),
                    fmt="none", color="tab:olive", capsize=5, lw=1.0,
                    label="bounds (symmetry)")
        exact = [(float(r["w_l"]), _f(r["s_min_exact"])) for r in rows
                 if _f(r["s_min_exact"]) is not None]
        if exact:
            xs, ys = zip(*exact)
            ax.plot(xs, ys, "^", color="tab:red", ms=6, label="exact")
        if "ndpt_s_cross" in header:
            nd = [(float(r["w_l"]), _f(r["ndpt_s_cross"])) for r in rows
                  if _f(r.get("ndpt_s_cross")) is not None]
            if nd:
                xs, ys = zip(*nd)
                ax.plot(xs, ys, "*", color="tab:blue", ms=7, label="2nd-order NDPT")
        ax.set_xlabel("local-minimum weight w_L")
        ax.set_ylabel("gap-minimum location")
        ax.legend(loc="best", fontsize=7)
        fig.tight_layout()
        out = Path(out_path)
        fig.savefig(out)
        plt.close(fig)
    return out
