"""Command-line front end: parse a run configuration, dispatch an experiment,
and write its records deterministically as CSV (and optionally JSON).

Exit codes: 0 success, 2 configuration error, 3 runtime error.  Output bytes
depend only on the configuration, never on wall time or thread count.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import experiments as ex
from . import gaussian
from .modes import CavityGeometry

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

LOG_BASES = {"e": math.e, "2": 2.0, "10": 10.0}

EXPERIMENTS = ("fig2", "fig3", "fig4", "fig5", "fig6", "sweep", "converge", "validate")


class ConfigError(Exception):
    """Configuration problem; the message names the offending field."""


def parse_angle(text: str) -> float:
    """Angle in radians; accepts pi-suffixed multiples such as 'pi' or '0.75pi'."""
    t = str(text).strip().lower()
    if t.endswith("pi"):
        head = t[:-2].strip()
        if head in ("", "+"):
            return math.pi
        if head == "-":
            return -math.pi
        try:
            return float(head) * math.pi
        except ValueError:
            raise ConfigError(f"angle: invalid literal {text!r}") from None
    try:
        return float(t)
    except ValueError:
        raise ConfigError(f"angle: invalid literal {text!r}") from None


def parse_split(text: str) -> Fraction:
    """Mirror position as an exact fraction of the cavity length, e.g. '1/2'."""
    try:
        frac = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"split: invalid fraction {text!r}") from None
    if not 0 < frac < 1:
        raise ConfigError(f"split: must lie strictly inside (0, 1), got {frac}")
    return frac


def _parse_float_list(text: str, name: str) -> list[float]:
    try:
        return [float(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"{name}: invalid number list {text!r}") from None


def _parse_int_list(text: str, name: str) -> list[int]:
    try:
        return [int(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"{name}: invalid integer list {text!r}") from None


@dataclass(frozen=True)
class Grid:
    """Inclusive linear grid for one swept parameter."""

    start: float
    stop: float
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ConfigError(f"grid count must be >= 1, got {self.count}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError(f"grid bounds must be finite, got ({self.start}, {self.stop})")
        if self.start > self.stop:
            raise ConfigError(f"grid start must be <= stop, got ({self.start}, {self.stop})")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def to_dict(self) -> dict:
        return {"start": self.start, "stop": self.stop, "count": self.count}


@dataclass
class RunConfig:
    """Everything one run needs; serializable for provenance and round-trip."""

    experiment: str
    R: float = 2.0
    split: Fraction = Fraction(1, 2)
    lam: int = 64
    log_base: str = "e"
    out: str | None = None
    json_out: str | None = None
    fmt: str = "csv"
    threads: int = 1
    params: dict = field(default_factory=dict)
    grids: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment: unknown experiment {self.experiment!r}")
        if not self.R > 0:
            raise ConfigError(f"R: cavity length must be positive, got {self.R}")
        if not 0 < self.split < 1:
            raise ConfigError(f"split: must lie strictly inside (0, 1), got {self.split}")
        if self.lam < 1:
            raise ConfigError(f"lambda: cutoff must be >= 1, got {self.lam}")
        if self.log_base not in LOG_BASES:
            raise ConfigError(f"log-base: must be one of {tuple(LOG_BASES)}, got {self.log_base!r}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format: must be csv or json, got {self.fmt!r}")
        if self.threads < 1:
            raise ConfigError(f"MIRRORCUT_THREADS: must be >= 1, got {self.threads}")
        for name, bound in (("rho", 0.0), ("nbar", 0.0)):
            value = self.params.get(name)
            if value is not None and value < bound:
                raise ConfigError(f"{name}: must be >= {bound}, got {value}")
        for name in ("k", "kprime", "n_max", "m"):
            value = self.params.get(name)
            if value is not None and value < 1:
                raise ConfigError(f"{name}: must be >= 1, got {value}")
        for name in ("n_max", "m"):
            value = self.params.get(name)
            if value is not None and value > self.lam:
                raise ConfigError(f"{name}: must be <= lambda ({self.lam}), got {value}")
        for name in ("k", "kprime"):
            value = self.params.get(name)
            if value is not None and value > 2 * self.lam:
                raise ConfigError(f"{name}: must be <= 2*lambda ({2 * self.lam}), got {value}")

    @property
    def base(self) -> float:
        return LOG_BASES[self.log_base]

    def geometry(self) -> CavityGeometry:
        return CavityGeometry(R=self.R, r_frac=self.split)

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "R": self.R,
            "split": f"{self.split.numerator}/{self.split.denominator}",
            "lam": self.lam,
            "log_base": self.log_base,
            "out": self.out,
            "json_out": self.json_out,
            "fmt": self.fmt,
            "threads": self.threads,
            "params": dict(self.params),
            "grids": {name: grid.to_dict() for name, grid in self.grids.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        return cls(
            experiment=data["experiment"],
            R=data.get("R", 2.0),
            split=parse_split(data.get("split", "1/2")),
            lam=data.get("lam", 64),
            log_base=data.get("log_base", "e"),
            out=data.get("out"),
            json_out=data.get("json_out"),
            fmt=data.get("fmt", "csv"),
            threads=data.get("threads", 1),
            params=dict(data.get("params", {})),
            grids={name: Grid(**grid) for name, grid in data.get("grids", {}).items()},
        )


# ---------------------------------------------------------------------------
# artifact writers

def _format_cell(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _json_value(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


def emit(records, fmt: str, path, columns=None) -> None:
    """Write sweep records to ``path`` as CSV (17 significant digits, LF line
    endings) or as a JSON array; overwrites idempotently."""
    rows = [r.flat() for r in records]
    if columns is None:
        columns = list(rows[0].keys()) if rows else []
    if fmt == "csv":
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_format_cell(row[col]) for col in columns])
    elif fmt == "json":
        data = [{col: _json_value(row[col]) for col in columns} for row in rows]
        with open(path, "w") as handle:
            json.dump(data, handle, indent=1)
            handle.write("\n")
    else:
        raise ConfigError(f"format: unknown format {fmt!r}")


def emit_grid(grid: ex.HeatmapGrid, fmt: str, path) -> None:
    """Write a heatmap as a square CSV block (columns m1..mM, row label n)."""
    m = grid.m
    columns = ["n"] + [f"m{j}" for j in range(1, m + 1)]
    if fmt == "csv":
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(columns)
            for n in range(m):
                writer.writerow([str(n + 1)] + [_format_cell(v) for v in grid.values[n]])
    elif fmt == "json":
        data = {"initial": grid.initial, "m": m,
                "values": [[float(v) for v in row] for row in grid.values]}
        with open(path, "w") as handle:
            json.dump(data, handle, indent=1)
            handle.write("\n")
    else:
        raise ConfigError(f"format: unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to exit code 2
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="mirrorcut",
                     description="Split-cavity Gaussian-state experiments; writes CSV/JSON artifacts.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--R", type=float, default=2.0, help="cavity length (default 2)")
    common.add_argument("--split", default="1/2",
                        help="mirror position as an exact fraction p/q of R (default 1/2)")
    common.add_argument("--lambda", dest="lam", type=int, default=64,
                        help="mode cutoff per side (default 64)")
    common.add_argument("--log-base", choices=tuple(LOG_BASES), default="e",
                        help="logarithm base for entanglement values (default e)")
    common.add_argument("--out", default=None, help="output path (default <experiment>.csv)")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv",
                        help="format of the primary artifact (default csv)")
    common.add_argument("--json", dest="json_out", default=None,
                        help="also write a JSON mirror of the records to this path")

    sub = parser.add_subparsers(dest="experiment", required=True)

    p = sub.add_parser("fig2", parents=[common],
                       help="particle ratio vs coherent phase for low output modes")
    p.add_argument("--k", type=int, default=1, help="prepared input mode (default 1)")
    p.add_argument("--n-max", type=int, default=3, help="highest output mode (default 3)")
    p.add_argument("--phi-steps", type=int, default=97, help="phase grid points on [0, pi]")

    p = sub.add_parser("fig3", parents=[common],
                       help="phase-averaged particle ratio per output mode pair")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n-max", type=int, default=10)

    p = sub.add_parser("fig4", parents=[common],
                       help="lowest-pair entanglement vs initial occupation per state family")
    p.add_argument("--points", type=int, default=101, help="grid points (default 101)")
    p.add_argument("--n-initial-max", type=float, default=0.5,
                   help="largest initial occupation (default 0.5)")

    p = sub.add_parser("fig5", parents=[common],
                       help="lowest-pair entanglement vs squeezing for several occupations")
    p.add_argument("--nbars", default="0,5,10,15", help="comma list of thermal occupations")
    p.add_argument("--s-max", type=float, default=3.0)
    p.add_argument("--s-points", type=int, default=61)
    p.add_argument("--theta", default="0", help="squeezing angle (radians or e.g. 0.5pi)")

    p = sub.add_parser("fig6", parents=[common],
                       help="entanglement heatmap over low output pairs")
    p.add_argument("--state", choices=ex.INITIAL_STATES_FIG6, default="vacuum")
    p.add_argument("--s", type=float, default=0.75)
    p.add_argument("--theta", default="pi")
    p.add_argument("--m", type=int, default=6, help="heatmap extent per side (default 6)")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--kprime", type=int, default=2)

    p = sub.add_parser("sweep", parents=[common],
                       help="generic 1-D sweep of a state parameter")
    p.add_argument("--family", choices=ex.SWEEP_FAMILIES, required=True)
    p.add_argument("--param", choices=("nbar", "rho", "phi", "s", "theta"), required=True)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--nbar", type=float, default=0.0)
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--phi", default="0")
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--theta", default="0")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--kprime", type=int, default=2)

    p = sub.add_parser("converge", parents=[common],
                       help="track an observable along a truncation ladder")
    p.add_argument("--lambdas", default="16,32,64,128", help="comma list, ascending")
    p.add_argument("--observable", choices=ex.OBSERVABLES, default="vacuum_negativity")

    p = sub.add_parser("validate", parents=[common],
                       help="report symplectic-eigenvalue deficits of the split vacuum")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        experiment=args.experiment,
        R=args.R,
        split=parse_split(args.split),
        lam=args.lam,
        log_base=args.log_base,
        out=args.out,
        json_out=args.json_out,
        fmt=args.fmt,
        threads=_threads_from_env(),
    )
    if args.experiment == "fig2":
        cfg.params = {"k": args.k, "n_max": args.n_max}
        cfg.grids = {"phi": Grid(0.0, math.pi, args.phi_steps)}
    elif args.experiment == "fig3":
        cfg.params = {"k": args.k, "n_max": args.n_max}
    elif args.experiment == "fig4":
        cfg.grids = {"initial_n": Grid(0.0, args.n_initial_max, args.points)}
    elif args.experiment == "fig5":
        cfg.params = {"nbars": _parse_float_list(args.nbars, "nbars"),
                      "theta": parse_angle(args.theta)}
        cfg.grids = {"s": Grid(0.0, args.s_max, args.s_points)}
    elif args.experiment == "fig6":
        cfg.params = {"state": args.state, "s": args.s, "theta": parse_angle(args.theta),
                      "m": args.m, "k": args.k, "kprime": args.kprime}
    elif args.experiment == "sweep":
        cfg.params = {"family": args.family, "param": args.param,
                      "nbar": args.nbar, "rho": args.rho, "phi": parse_angle(args.phi),
                      "s": args.s, "theta": parse_angle(args.theta),
                      "k": args.k, "kprime": args.kprime}
        cfg.grids = {args.param: Grid(args.start, args.stop, args.count)}
    elif args.experiment == "converge":
        cfg.params = {"lambdas": _parse_int_list(args.lambdas, "lambdas"),
                      "observable": args.observable}
    cfg.validate()
    return cfg


def _threads_from_env() -> int:
    raw = os.environ.get("MIRRORCUT_THREADS", "1")
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"MIRRORCUT_THREADS: invalid integer {raw!r}") from None


# ---------------------------------------------------------------------------
# dispatch

def _dispatch(cfg: RunConfig):
    """Run the configured experiment; returns (records_or_grid, columns_or_None)."""
    geom = cfg.geometry()
    p = cfg.params
    if cfg.experiment == "fig2":
        records = ex.coherent_phase_sweep(geom, cfg.lam, p["k"],
                                          cfg.grids["phi"].values(), n_max=p["n_max"])
        return records, list(ex.FIG2_COLUMNS)
    if cfg.experiment == "fig3":
        records = ex.phase_averaged_coherent(geom, cfg.lam, p["k"], n_max=p["n_max"])
        return records, list(ex.FIG3_COLUMNS)
    if cfg.experiment == "fig4":
        records = ex.negativity_vs_particles(geom, cfg.lam, cfg.grids["initial_n"].values(),
                                             base=cfg.base, workers=cfg.threads)
        return records, list(ex.FIG4_COLUMNS)
    if cfg.experiment == "fig5":
        records = ex.squeezing_temperature_scan(geom, cfg.lam, p["nbars"],
                                                cfg.grids["s"].values(), theta=p["theta"],
                                                base=cfg.base, workers=cfg.threads)
        return records, list(ex.FIG5_COLUMNS)
    if cfg.experiment == "fig6":
        grid = ex.entanglement_distribution(geom, cfg.lam, p["state"], p["m"], s=p["s"],
                                            theta=p["theta"], k=p["k"], kprime=p["kprime"],
                                            base=cfg.base, workers=cfg.threads)
        return grid, None
    if cfg.experiment == "sweep":
        swept = next(iter(cfg.grids))
        records = ex.generic_sweep(geom, cfg.lam, p["family"], p["param"],
                                   cfg.grids[swept].values(),
                                   fixed={k: p[k] for k in ("nbar", "rho", "phi", "s",
                                                            "theta", "k", "kprime")},
                                   base=cfg.base, workers=cfg.threads)
        return records, list(ex.SWEEP_COLUMNS)
    if cfg.experiment == "converge":
        records = ex.convergence_study(geom, p["lambdas"], p["observable"], base=cfg.base)
        return records, list(ex.CONVERGE_COLUMNS)
    raise ConfigError(f"experiment: unknown experiment {cfg.experiment!r}")


def _run_validate(cfg: RunConfig) -> None:
    """Print symplectic deficits of the transformed vacuum (full and low pairs)."""
    geom = cfg.geometry()
    transform = ex.dense_transform(geom, cfg.lam)
    state = gaussian.apply_transform(gaussian.vacuum(2 * cfg.lam), transform)
    report = gaussian.validate(state)
    print(f"lambda: {cfg.lam}")
    print(f"full-state min symplectic eigenvalue: "
          f"{format(report.min_symplectic_eigenvalue, '.17g')}")
    print(f"full-state worst deficit: {format(report.worst_deficit, '.17g')}")
    worst_pair = 0.0
    for n in range(1, min(6, cfg.lam) + 1):
        for m in range(1, min(6, cfg.lam) + 1):
            red = gaussian.reduce(state, (n, cfg.lam + m))
            worst_pair = max(worst_pair, gaussian.validate(red).worst_deficit)
    print(f"worst low-pair deficit (modes <= 6): {format(worst_pair, '.17g')}")


def run(argv=None) -> int:
    """Entry point used by the console script; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config_from_args(args)
    except ConfigError as err:
        print(f"mirrorcut: configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as err:  # --help
        return int(err.code or 0)

    try:
        if cfg.experiment == "validate":
            _run_validate(cfg)
            return EXIT_OK
        result, columns = _dispatch(cfg)
        out = cfg.out or f"{cfg.experiment}.csv"
        if isinstance(result, ex.HeatmapGrid):
            emit_grid(result, cfg.fmt, out)
            if cfg.json_out:
                emit_grid(result, "json", cfg.json_out)
        else:
            emit(result, cfg.fmt, out, columns=columns)
            if cfg.json_out:
                emit(result, "json", cfg.json_out, columns=columns)
    except ConfigError as err:
        print(f"mirrorcut: configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ValueError, ex.UnsupportedGeometryError) as err:
        print(f"mirrorcut: runtime error: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
