"""Three-panel heatmap of pair entanglement for three input states.

Inputs: three square heatmap CSVs (vacuum, correlated two-mode squeezed,
correlations stripped).  All panels share one color scale anchored at zero
so the panels stay comparable.
"""

import sys

import matplotlib.pyplot as plt
import numpy as np

from . import style
from .common import FigureSpec, input_output_parser, read_heatmap, run_script, save

PANEL_TITLES = ("(a) vacuum", "(b) two-mode squeezed", "(c) correlations stripped")


def render(spec: FigureSpec) -> None:
    grids = [read_heatmap(path) for path in spec.inputs]
    style.apply()
    vmax = max(float(g.max()) for g in grids)
    fig, axes = plt.subplots(1, 3, figsize=(3 * style.FIG_WIDTH * 0.62,
                                            style.FIG_WIDTH * 0.62))
    image = None
    for ax, grid, title in zip(axes, grids, PANEL_TITLES):
        m = grid.shape[0]
        extent = (0.5, m + 0.5, 0.5, m + 0.5)
        image = ax.imshow(grid.T, origin="lower", vmin=0.0, vmax=vmax,
                          extent=extent, interpolation="nearest")
        ax.set_title(title)
        ax.set_xlabel("left mode $n$")
        ax.set_xticks(np.arange(1, m + 1))
        ax.set_yticks(np.arange(1, m + 1))
    axes[0].set_ylabel(r"right mode $m$")
    fig.colorbar(image, ax=list(axes), shrink=0.85, label=r"$E_\mathcal{N}$")
    save(fig, spec.output)
    plt.close(fig)


def main(argv=None) -> int:
    args = input_output_parser(__doc__.splitlines()[0], n_inputs=3).parse_args(argv)
    return run_script(render, FigureSpec("fig6", tuple(args.inputs), args.output))


if __name__ == "__main__":
    sys.exit(main())
