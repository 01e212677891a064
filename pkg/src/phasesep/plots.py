"""Figure rendering for the experiment reports (file output only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_SAVE_KW = {"dpi": 130, "bbox_inches": "tight", "metadata": {"Software": None}}


def sweep_figure(records, path) -> None:
    """Diffuse energy against the sharp line energy, and their ratio, per eps."""
    fig, (ax_energy, ax_ratio) = plt.subplots(1, 2, figsize=(8.4, 3.4))
    if records:
        eps = [r.eps for r in records]
        ax_energy.plot(eps, [r.mm_value for r in records], "o-", label="diffuse")
        ax_energy.plot(eps, [r.sharp_line_energy for r in records], "s--",
                       label="2k x isoline length")
        ax_energy.set_xlabel("eps")
        ax_energy.set_ylabel("energy")
        ax_energy.invert_xaxis()
        ax_energy.legend(frameon=False)
        ax_ratio.plot(eps, [r.ratio for r in records], "o-", color="k")
        ax_ratio.axhline(1.0, lw=0.8, ls=":", color="gray")
        ax_ratio.set_xlabel("eps")
        ax_ratio.set_ylabel("diffuse / sharp ratio")
        ax_ratio.invert_xaxis()
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def membrane_figure(report, path) -> None:
    """Stacked energy components, diffuse next to the thresholded sharp split."""
    fig, ax = plt.subplots(figsize=(4.6, 3.4))
    labels = ["diffuse", "sharp"]
    bending = [report.willmore_diffuse, report.willmore_sharp]
    line = [report.mm_value, report.line_energy_sharp]
    ax.bar(labels, bending, label="bending")
    ax.bar(labels, line, bottom=bending, label="interface")
    ax.axhline(report.hypothesis_bound, lw=0.9, ls="--", color="crimson",
               label="bending hypothesis bound")
    ax.set_ylabel("energy")
    flag = "ok" if report.hypothesis_ok else "VIOLATED"
    ax.set_title(f"bending hypothesis {flag}", fontsize=10)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def varying_figure(report, path) -> None:
    """Area and measure-function-pair gaps along the perturbation family."""
    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    index = range(1, len(report.area_gaps) + 1)
    ax.semilogy(index, report.area_gaps, "o-", label="area gap")
    for name, gaps in report.mfp_gaps.items():
        positive = [max(g, 1e-18) for g in gaps]
        ax.semilogy(index, positive, "--", alpha=0.7, label=f"mfp gap: {name}")
    ax.set_xlabel("family member")
    ax.set_ylabel("gap to the limit")
    ax.set_xticks(list(index))
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
