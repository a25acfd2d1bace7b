"""Phase plot of the particle-production ratio for the lowest output modes.

Input schema: columns ``phi``, ``n``, ``ratio`` (one row per phase and mode).
"""

import sys

import matplotlib.pyplot as plt
import numpy as np

from . import style
from .common import FigureSpec, input_output_parser, read_records, run_script, save

LINE_STYLES = {1: "-", 2: "--", 3: "-."}


def render(spec: FigureSpec) -> None:
    data = read_records(spec.inputs[0], ("phi", "n", "ratio"))
    style.apply()
    fig, ax = plt.subplots()
    for n in sorted(set(int(v) for v in data["n"])):
        mask = data["n"] == n
        order = np.argsort(data["phi"][mask])
        ax.plot(data["phi"][mask][order], data["ratio"][mask][order],
                LINE_STYLES.get(n, ":"), color="black", label=f"mode pair {n}")
    ax.set_xlabel(r"coherent phase $\varphi$")
    ax.set_ylabel("particles out / particles in")
    ax.set_xlim(data["phi"].min(), data["phi"].max())
    ax.axhline(1.0, color="0.7", linewidth=0.8, zorder=0)
    ax.legend()
    fig.tight_layout()
    save(fig, spec.output)
    plt.close(fig)


def main(argv=None) -> int:
    args = input_output_parser(__doc__.splitlines()[0]).parse_args(argv)
    return run_script(render, FigureSpec("fig2", tuple(args.inputs), args.output))


if __name__ == "__main__":
    sys.exit(main())
