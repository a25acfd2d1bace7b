"""Lowest-pair entanglement vs initial occupation, one curve per state family.

Input schema: columns ``family``, ``initial_n``, ``e_n``.
"""

import csv
import sys

import matplotlib.pyplot as plt
import numpy as np

from . import style
from .common import FigureSpec, SchemaError, input_output_parser, run_script, save

FAMILY_STYLES = {
    "thermal": ("-", "thermal"),
    "coherent": (":", "coherent"),
    "squeezed_theta0": ("--", r"squeezed, $\theta = 0$"),
    "squeezed_theta_half": ("-.", r"squeezed, $\theta = \pi/2$"),
}


def render(spec: FigureSpec) -> None:
    path = spec.inputs[0]
    with open(path, newline="") as handle:
        rows = list(csv.DictReader(handle))
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    for col in ("family", "initial_n", "e_n"):
        if col not in rows[0]:
            raise SchemaError(f"{path}: missing column(s) {col}")
    style.apply()
    fig, ax = plt.subplots()
    for family, (line, label) in FAMILY_STYLES.items():
        pts = [(float(r["initial_n"]), float(r["e_n"])) for r in rows
               if r["family"] == family]
        if not pts:
            continue
        pts.sort()
        xs, ys = np.array(pts).T
        ax.plot(xs, ys, line, color="black", label=label)
    ax.set_xlabel(r"initial occupation $\langle n \rangle$")
    ax.set_ylabel(r"$E_\mathcal{N}(u_1, \bar{u}_1)$")
    ax.set_ylim(bottom=0)
    ax.legend()
    fig.tight_layout()
    save(fig, spec.output)
    plt.close(fig)


def main(argv=None) -> int:
    args = input_output_parser(__doc__.splitlines()[0]).parse_args(argv)
    return run_script(render, FigureSpec("fig4", tuple(args.inputs), args.output))


if __name__ == "__main__":
    sys.exit(main())
