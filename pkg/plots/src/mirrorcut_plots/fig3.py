"""Bar chart of the phase-averaged particle yield per output mode pair.

Input schema: columns ``n``, ``percent`` (one row per mode).
"""

import sys

import matplotlib.pyplot as plt

from . import style
from .common import FigureSpec, input_output_parser, read_records, run_script, save


def render(spec: FigureSpec) -> None:
    data = read_records(spec.inputs[0], ("n", "percent"))
    style.apply()
    fig, ax = plt.subplots()
    ax.bar(data["n"], data["percent"], width=0.8, color="0.35")
    ax.set_xlabel("output mode pair $n$")
    ax.set_ylabel("percent of initial particles")
    ax.set_xticks([int(n) for n in data["n"]])
    fig.tight_layout()
    save(fig, spec.output)
    plt.close(fig)


def main(argv=None) -> int:
    args = input_output_parser(__doc__.splitlines()[0]).parse_args(argv)
    return run_script(render, FigureSpec("fig3", tuple(args.inputs), args.output))


if __name__ == "__main__":
    sys.exit(main())
