# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
SVG box plots of ν per pattern-type combination.

Boxes are drawn from precomputed statistics with Axes.bxp so the picture
matches stats.json exactly. A fixed hash salt and an empty date keep the SVG
output identical across runs.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING

import matplotlib

matplotlib.use("Agg")

from matplotlib import rcParams  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

if TYPE_CHECKING:
    from .bench import ExperimentResult

logger = logging.getLogger(__name__)

rcParams["svg.hashsalt"] = "polyrelax"


def _slug(label: str) -> str:
    return label.replace("+", "_").replace(":", "_").lower()


def _draw(records: list[dict], title: str, path: Path) -> Path:
    fig = Figure(figsize=(max(4.0, 1.1 * len(records) + 2.0), 4.0))
    ax = fig.subplots()
    ax.bxp(records, showfliers=True)
    ax.set_ylabel("ν")
    ax.set_title(title)
    ax.set_ylim(bottom=0.0)
    ax.grid(axis="y", linestyle=":", linewidth=0.5)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    return path


def write_boxplots(result: ExperimentResult, out_dir: str | Path) -> dict[str, Path]:
    """
    Writes one SVG per combination (with the reference box beside it when
    available) and an overview plot with every combination.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    name = result.exponent_set.name
    reference = result.reference_stats.to_bxp("reference") if result.reference_stats else None
    paths: dict[str, Path] = {}
    for label, stats in result.stats.items():
        records = [stats.to_bxp(label)] + ([reference] if reference else [])
        paths[f"plot:{label}"] = _draw(records, f"{name}: {label}", out_dir / f"boxplot_{_slug(label)}.svg")
    overview = [stats.to_bxp(label) for label, stats in result.stats.items()]
    if reference:
        overview.append(reference)
    paths["plot:all"] = _draw(overview, name, out_dir / "boxplot_all.svg")
    logger.info("wrote %d box plots to %s", len(paths), out_dir)
    return paths
