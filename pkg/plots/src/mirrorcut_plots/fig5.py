"""Lowest-pair entanglement vs squeezing strength, one curve per occupation.

Input schema: columns ``nbar``, ``s``, ``e_n``.
"""

import sys

import matplotlib.pyplot as plt
import numpy as np

from . import style
from .common import FigureSpec, input_output_parser, read_records, run_script, save

# coolest to hottest
LINE_CYCLE = (":", "-.", "--", "-")


def render(spec: FigureSpec) -> None:
    data = read_records(spec.inputs[0], ("nbar", "s", "e_n"))
    style.apply()
    fig, ax = plt.subplots()
    for i, nbar in enumerate(sorted(set(data["nbar"]))):
        mask = data["nbar"] == nbar
        order = np.argsort(data["s"][mask])
        label = rf"$\bar{{n}} = {nbar:g}$"
        ax.plot(data["s"][mask][order], data["e_n"][mask][order],
                LINE_CYCLE[i % len(LINE_CYCLE)], color="black", label=label)
    ax.set_xlabel("squeezing strength $s$")
    ax.set_ylabel(r"$E_\mathcal{N}(u_1, \bar{u}_1)$")
    ax.set_ylim(bottom=0)
    ax.legend()
    fig.tight_layout()
    save(fig, spec.output)
    plt.close(fig)


def main(argv=None) -> int:
    args = input_output_parser(__doc__.splitlines()[0]).parse_args(argv)
    return run_script(render, FigureSpec("fig5", tuple(args.inputs), args.output))


if __name__ == "__main__":
    sys.exit(main())
