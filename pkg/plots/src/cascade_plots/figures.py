"""The five figure kinds, one per harness experiment family.

Each renderer draws only what its CSVs contain; slopes and asymptotes for
guide lines are read from the CSV headers the harness wrote.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import Table, TableError, read_table  # noqa: E402

FIGURE_KINDS = ("spectrum", "anomaly", "rates", "regularized", "shell")


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: Tuple[Path, ...]
    out: Path
    logx: bool = True
    logy: bool = True

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; "
                             f"choose one of {FIGURE_KINDS}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        object.__setattr__(self, "inputs",
                           tuple(Path(p) for p in self.inputs))
        out = Path(self.out)
        if out.suffix.lower() not in (".png", ".svg"):
            raise ValueError(f"output must be .png or .svg, got {out.name}")
        object.__setattr__(self, "out", out)


def _guide(ax, x, slope, amplitude, label):
    x = np.asarray([np.min(x), np.max(x)])
    ax.plot(x, amplitude * x ** slope, "k--", lw=1.0, label=label)


def _draw_spectrum(ax, tables: Sequence[Table]):
    for tab in tables:
        kappa = tab.col("kappa")
        drew = False
        for name in tab.columns:
            if not name.startswith("E_"):
                continue
            vals = tab.col(name)
            pos = vals > 0.0
            ax.plot(kappa[pos], vals[pos], label=name[2:])
            drew = True
        if not drew:
            raise TableError(f"{tab.path}: no E_* spectrum columns")
        if "slope_inviscid" in tab.header:
            s = tab.header_float("slope_inviscid")
            amp = tab.col("E_inviscid")[0]
            _guide(ax, kappa, s, amp, f"slope {s:g}")
    ax.set_xlabel("kappa")
    ax.set_ylabel("E(kappa)")


def _draw_anomaly(ax, tables: Sequence[Table]):
    for tab in tables:
        nu = tab.col("nu")
        avg = tab.col("avg_dissipation")
        order = np.argsort(nu)[::-1]
        ax.plot(nu[order], avg[order], "o-", label=tab.path.stem)
        eps = tab.header_float("epsilon")
        ax.axhline(eps, color="k", ls="--", lw=1.0)
    ax.set_xscale("log")
    ax.invert_xaxis()  # read the vanishing-viscosity limit left to right
    ax.set_xlabel("nu")
    ax.set_ylabel("time-averaged dissipation")


def _draw_rates(ax, tables: Sequence[Table]):
    for tab in tables:
        nu = tab.col("nu")
        dist = tab.col("sq_distance")
        ax.plot(nu, dist, "o", ms=3.5, label=tab.path.stem)
        if "fitted_exponent" in tab.header:
            s = tab.header_float("fitted_exponent")
            _guide(ax, nu, s, dist[np.argmax(nu)] / np.max(nu) ** s,
                   f"nu^{s:.2f}")
    ax.set_xlabel("nu")
    ax.set_ylabel("squared L2 distance")


def _draw_regularized(ax, tables: Sequence[Table]):
    for tab in tables:
        xi = tab.col("xi")
        w = tab.col("w")
        if "delta" in tab.columns:
            for d in np.unique(tab.col("delta")):
                sel = tab.col("delta") == d
                ax.plot(xi[sel], w[sel], label=f"delta = {d:g}")
        else:
            label = tab.header.get("delta", tab.path.stem)
            ax.plot(xi, w, label=f"delta = {label}")
    ax.set_xlabel("xi")
    ax.set_ylabel("W_delta")


def _draw_shell(ax, tables: Sequence[Table]):
    for tab in tables:
        j = tab.col("j")
        a = tab.col("a")
        pos = a > 0.0
        ax.semilogy(j[pos], a[pos], "o-", ms=3.5, base=2,
                    label=tab.path.stem)
        if "inertial_slope" in tab.header:
            s = tab.header_float("inertial_slope")
            jj = np.asarray([j[pos][0], j[pos][-1]])
            ax.semilogy(jj, a[pos][0] * 2.0 ** (s * (jj - jj[0])),
                        "k--", lw=1.0, base=2, label=f"2^({s:.3f} j)")
    ax.set_xlabel("shell index j")
    ax.set_ylabel("a_j")


_DRAWERS = {
    "spectrum": (_draw_spectrum, True, True),
    "anomaly": (_draw_anomaly, False, False),
    "rates": (_draw_rates, True, True),
    "regularized": (_draw_regularized, False, False),
    "shell": (_draw_shell, False, False),
}


def render(spec: FigureSpec) -> Path:
    """Render one figure; returns the output path.

    Raises TableError before any file is written if an input is missing or
    malformed.  Output is deterministic for identical inputs.
    """
    tables = [read_table(p) for p in spec.inputs]
    drawer, logx, logy = _DRAWERS[spec.kind]
    # fixed hash salt keeps SVG element ids (and so the bytes) reproducible
    plt.rcParams["svg.hashsalt"] = "cascade-plots"
    fig, ax = plt.subplots(figsize=(6.0, 4.0), dpi=120)
    try:
        drawer(ax, tables)
        if logx and spec.logx:
            ax.set_xscale("log")
        if logy and spec.logy:
            ax.set_yscale("log")
        ax.legend(loc="best", fontsize=8)
        fig.tight_layout()
        spec.out.parent.mkdir(parents=True, exist_ok=True)
        if spec.out.suffix.lower() == ".svg":
            fig.savefig(spec.out, metadata={"Date": None})
        else:
            fig.savefig(spec.out)
    finally:
        plt.close(fig)
    return spec.out
