"""Pinned plot style: fixed rc parameters so regenerated images are byte-identical."""

import matplotlib

GOLDEN = 0.61803398875
FIG_WIDTH = 4.8

PARAMS = {
    "figure.figsize": (FIG_WIDTH, FIG_WIDTH * GOLDEN),
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "font.size": 9,
    "font.family": "DejaVu Sans",
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "legend.frameon": False,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.4,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "image.cmap": "viridis",
}

#: metadata stamped into every image; fixed so re-renders stay byte-identical
IMAGE_METADATA = {"Software": "mirrorcut-plots"}


def apply() -> None:
    matplotlib.use("Agg")
    matplotlib.rcParams.update(PARAMS)
