"""Closed-form observables of the split transform and the sweep drivers.

Every closed form here has a dense counterpart (build the full transfer
matrix, propagate the state, read off blocks); the two routes are kept
independent so that each can check the other.  Sweep points are independent
of each other: drivers accept a ``workers`` argument and may fan points out
to a thread pool, but records are always emitted in sweep-index order and
are bitwise identical to a serial run.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import gaussian
from .modes import (LEFT, RIGHT, CavityGeometry, SymplecticTransform,
                    TruncationConfig, build_transform, input_frequency,
                    side_frequency, symplectic_defect, v_coeff)


class UnsupportedGeometryError(ValueError):
    """Raised when a closed form is only valid for a midpoint split."""


@dataclass(eq=False)
class SweepRecord:
    """One experiment row: sweep index, input parameters, computed observables."""

    index: int
    experiment: str
    params: dict
    outputs: dict

    def __post_init__(self) -> None:
        for key, value in self.outputs.items():
            if isinstance(value, float) and not math.isfinite(value):
                raise ValueError(f"non-finite output {key}={value} in record {self.index}")

    def flat(self) -> dict:
        row = {"index": self.index, "experiment": self.experiment}
        row.update(self.params)
        row.update(self.outputs)
        return row


@dataclass(eq=False)
class HeatmapGrid:
    """Square grid of pair entanglement: entry (n-1, m-1) is left mode n vs right mode m."""

    values: np.ndarray
    initial: str
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise ValueError(f"heatmap must be square, got shape {self.values.shape}")
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise ValueError("heatmap entries must be finite and >= 0")

    @property
    def m(self) -> int:
        return self.values.shape[0]


# ---------------------------------------------------------------------------
# cached coefficient tables and dense transform

@dataclass(frozen=True, eq=False)
class ModeTables:
    """Precomputed frequencies and overlap tables at one truncation."""

    lam: int
    omega_in: np.ndarray    # (2 lam,)  input frequencies
    w_left: np.ndarray      # (lam,)    left sub-cavity frequencies
    w_right: np.ndarray
    v_left: np.ndarray      # (lam, 2 lam) overlap coefficients
    v_right: np.ndarray


@lru_cache(maxsize=64)
def mode_tables(geom: CavityGeometry, lam: int) -> ModeTables:
    n_in = 2 * lam
    omega_in = np.array([input_frequency(geom, l) for l in range(1, n_in + 1)])
    w_left = np.array([side_frequency(geom, LEFT, n) for n in range(1, lam + 1)])
    w_right = np.array([side_frequency(geom, RIGHT, n) for n in range(1, lam + 1)])
    v_left = np.array([[v_coeff(geom, LEFT, n, l) for l in range(1, n_in + 1)]
                       for n in range(1, lam + 1)])
    v_right = np.array([[v_coeff(geom, RIGHT, n, l) for l in range(1, n_in + 1)]
                        for n in range(1, lam + 1)])
    return ModeTables(lam, omega_in, w_left, w_right, v_left, v_right)


@lru_cache(maxsize=16)
def dense_transform(geom: CavityGeometry, lam: int) -> SymplecticTransform:
    return build_transform(geom, TruncationConfig(lam))


def _pmap(fn, items, workers: int = 1) -> list:
    """Order-preserving map; independent points may run on a thread pool."""
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# coherent states: first-moment particle production

def coherent_particles_closed_form(geom: CavityGeometry, n: int, k: int, rho: float,
                                   phi: float, side: str = LEFT) -> float:
    """First-moment contribution to the occupation of output mode ``n`` on one side.

    For an input coherent state of amplitude ``rho`` and phase ``phi`` in
    mode ``k``:  ``2 rho^2 V_nk^2 (omega_n^2 cos^2 phi + Omega_k^2 sin^2 phi)``.
    """
    v = v_coeff(geom, side, n, k)
    w = side_frequency(geom, side, n)
    om_k = input_frequency(geom, k)
    cos_phi, sin_phi = math.cos(phi), math.sin(phi)
    return 2.0 * rho * rho * v * v * (w * w * cos_phi * cos_phi
                                      + om_k * om_k * sin_phi * sin_phi)


FIG2_COLUMNS = ("index", "experiment", "phi", "n", "k", "lam", "ratio")


def coherent_phase_sweep(geom: CavityGeometry, lam: int, k: int, phi_values,
                         n_max: int = 3) -> list[SweepRecord]:
    """Produced-over-initial particle ratio per low output mode vs coherent phase.

    The ratio sums both sides of the split and divides by the initial
    occupation ``rho^2/2``; it is independent of ``rho``.
    """
    if not 1 <= k <= 2 * lam:
        raise ValueError(f"input mode k must be in 1..{2 * lam}, got {k}")
    if not 1 <= n_max <= lam:
        raise ValueError(f"n_max must be in 1..{lam}, got {n_max}")
    records = []
    index = 0
    for phi in phi_values:
        for n in range(1, n_max + 1):
            both = (coherent_particles_closed_form(geom, n, k, 1.0, phi, LEFT)
                    + coherent_particles_closed_form(geom, n, k, 1.0, phi, RIGHT))
            records.append(SweepRecord(index, "fig2",
                                       {"phi": float(phi), "n": n, "k": k, "lam": lam},
                                       {"ratio": both / 0.5}))
            index += 1
    return records


FIG3_COLUMNS = ("index", "experiment", "n", "k", "lam",
                "ratio", "percent", "vacuum_pair_particles")


def vacuum_pair_particles(geom: CavityGeometry, lam: int, n: int) -> float:
    """Occupation of ``u_n`` plus ``ubar_n`` after splitting the vacuum."""
    t = mode_tables(geom, lam)
    if not 1 <= n <= lam:
        raise ValueError(f"mode n must be in 1..{lam}, got {n}")
    out = 0.0
    for v_row, w in ((t.v_left[n - 1], t.w_left[n - 1]),
                     (t.v_right[n - 1], t.w_right[n - 1])):
        vv = v_row * v_row
        out += float(vv.sum() * w * w + (vv * t.omega_in * t.omega_in).sum()) - 0.5
    return out


def phase_averaged_coherent(geom: CavityGeometry, lam: int, k: int,
                            n_max: int = 10) -> list[SweepRecord]:
    """Phase-averaged particle ratio per output mode pair.

    Averaging the coherent phase turns cos^2/sin^2 into 1/2 analytically, so
    the ratio per mode pair is ``2 [V_nk^2 (omega_n^2 + Omega_k^2)]`` summed
    over both sides.  The vacuum (second-moment) contribution is reported
    separately; it is not part of the ratio.
    """
    if not 1 <= k <= 2 * lam:
        raise ValueError(f"input mode k must be in 1..{2 * lam}, got {k}")
    if not 1 <= n_max <= lam:
        raise ValueError(f"n_max must be in 1..{lam}, got {n_max}")
    om_k = input_frequency(geom, k)
    records = []
    for i, n in enumerate(range(1, n_max + 1)):
        total = 0.0
        for side in (LEFT, RIGHT):
            v = v_coeff(geom, side, n, k)
            w = side_frequency(geom, side, n)
            total += v * v * (w * w + om_k * om_k)
        ratio = total / 0.5
        records.append(SweepRecord(i, "fig3", {"n": n, "k": k, "lam": lam},
                                   {"ratio": ratio, "percent": 100.0 * ratio,
                                    "vacuum_pair_particles": vacuum_pair_particles(geom, lam, n)}))
    return records


# ---------------------------------------------------------------------------
# nonvacuum covariance blocks in closed form

_WHICH_SIDES = {"sigma": (LEFT, LEFT), "gamma": (LEFT, RIGHT), "sigmabar": (RIGHT, RIGHT)}


def _row(t: ModeTables, side: str, n: int) -> tuple[np.ndarray, float]:
    if not 1 <= n <= t.lam:
        raise ValueError(f"output mode must be in 1..{t.lam}, got {n}")
    if side == LEFT:
        return t.v_left[n - 1], float(t.w_left[n - 1])
    return t.v_right[n - 1], float(t.w_right[n - 1])


def _coupling_term(vi: np.ndarray, wi: float, vj: np.ndarray, wj: float,
                   omega_in: np.ndarray, a: int, b: int, sab: np.ndarray) -> np.ndarray:
    """Contribution ``S_ia sigma_ab S_jb`` of one nonvacuum input block."""
    om_a, om_b = omega_in[a - 1], omega_in[b - 1]
    pref = 4.0 * vi[a - 1] * vj[b - 1]
    return pref * np.array([
        [wi * wj * sab[0, 0], wi * om_b * sab[0, 1]],
        [om_a * wj * sab[1, 0], om_a * om_b * sab[1, 1]],
    ])


def _vacuum_tail(vi: np.ndarray, wi: float, vj: np.ndarray, wj: float,
                 omega_in: np.ndarray, skip: tuple[int, ...]) -> np.ndarray:
    """Vacuum contribution ``sum_l S_il S_jl`` over input modes not in ``skip``."""
    prods = vi * vj
    qq = prods.sum()
    pp = (prods * omega_in * omega_in).sum()
    for a in skip:
        qq -= prods[a - 1]
        pp -= prods[a - 1] * omega_in[a - 1] * omega_in[a - 1]
    return np.array([[4.0 * wi * wj * qq, 0.0], [0.0, 4.0 * pp]])


def single_mode_output_blocks(geom: CavityGeometry, lam: int, sigma_in_kk,
                              k: int, i: int, j: int, which: str = "sigma") -> np.ndarray:
    """2x2 output covariance block when a single input mode ``k`` is nonvacuum.

    ``which`` selects the left/left (``sigma``), left/right (``gamma``) or
    right/right (``sigmabar``) sector; ``i`` and ``j`` are the output mode
    indices inside that sector.
    """
    if which not in _WHICH_SIDES:
        raise ValueError(f"which must be one of {tuple(_WHICH_SIDES)}, got {which!r}")
    if not 1 <= k <= 2 * lam:
        raise ValueError(f"input mode k must be in 1..{2 * lam}, got {k}")
    t = mode_tables(geom, lam)
    side_i, side_j = _WHICH_SIDES[which]
    vi, wi = _row(t, side_i, i)
    vj, wj = _row(t, side_j, j)
    sigma_kk = np.asarray(sigma_in_kk, dtype=float)
    if sigma_kk.shape != (2, 2):
        raise ValueError(f"sigma_in_kk must be 2x2, got {sigma_kk.shape}")
    return (_coupling_term(vi, wi, vj, wj, t.omega_in, k, k, sigma_kk)
            + _vacuum_tail(vi, wi, vj, wj, t.omega_in, (k,)))


def two_mode_output_blocks(geom: CavityGeometry, lam: int, sigma_in_pair,
                           k: int, kprime: int, i: int, j: int,
                           which: str = "sigma") -> np.ndarray:
    """2x2 output covariance block when input modes ``k < kprime`` are nonvacuum.

    ``sigma_in_pair`` is the 4x4 covariance of the two input modes in block
    order (k, kprime); its cross blocks feed the four coupling terms.
    """
    if which not in _WHICH_SIDES:
        raise ValueError(f"which must be one of {tuple(_WHICH_SIDES)}, got {which!r}")
    if not 1 <= k < kprime <= 2 * lam:
        raise ValueError(f"need 1 <= k < kprime <= {2 * lam}, got ({k}, {kprime})")
    sig = np.asarray(sigma_in_pair, dtype=float)
    if sig.shape != (4, 4):
        raise ValueError(f"sigma_in_pair must be 4x4, got {sig.shape}")
    t = mode_tables(geom, lam)
    side_i, side_j = _WHICH_SIDES[which]
    vi, wi = _row(t, side_i, i)
    vj, wj = _row(t, side_j, j)
    args = (vi, wi, vj, wj, t.omega_in)
    return (_coupling_term(*args, k, k, sig[0:2, 0:2])
            + _coupling_term(*args, kprime, kprime, sig[2:4, 2:4])
            + _coupling_term(*args, k, kprime, sig[0:2, 2:4])
            + _coupling_term(*args, kprime, k, sig[2:4, 0:2])
            + _vacuum_tail(*args, (k, kprime)))


def squeezed_thermal_sigma11(geom: CavityGeometry, lam: int, nbar: float, s: float,
                             theta: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reduced covariance blocks of the lowest output pair for a squeezed
    thermal input in the first mode, in closed form.

    Returns ``(sigma_11, gamma_11, sigmabar_11)``.  Valid only for a midpoint
    split, where the left/right overlap rows agree except for a sign on the
    resonant second input mode; that makes ``gamma_11`` equal to ``sigma_11``
    with the second summand negated, and ``sigmabar_11 = sigma_11``.
    """
    if not geom.is_midpoint:
        raise UnsupportedGeometryError(
            f"closed form requires a midpoint split, got r = {geom.r_frac} R")
    t = mode_tables(geom, lam)
    w1 = float(t.w_left[0])
    om1 = float(t.omega_in[0])
    ch, sh = math.cosh(2 * s), math.sinh(2 * s)
    c2, s2 = math.cos(2 * theta), math.sin(2 * theta)
    v11 = t.v_left[0, 0]
    head = 4.0 * v11 * v11 * (2 * nbar + 1) * np.array([
        [w1 * w1 * (ch - c2 * sh), w1 * om1 * s2 * sh],
        [w1 * om1 * s2 * sh, om1 * om1 * (ch + c2 * sh)],
    ])
    vv = t.v_left[0] * t.v_left[0]
    tail_qq = 4.0 * w1 * w1 * vv[1:].sum()
    tail_pp = 4.0 * (vv[1:] * t.omega_in[1:] * t.omega_in[1:]).sum()
    flip_qq = 8.0 * w1 * w1 * vv[1]
    flip_pp = 8.0 * vv[1] * t.omega_in[1] * t.omega_in[1]
    sigma11 = head + np.array([[tail_qq, 0.0], [0.0, tail_pp]])
    gamma11 = head + np.array([[tail_qq - flip_qq, 0.0], [0.0, tail_pp - flip_pp]])
    return sigma11, gamma11, sigma11.copy()


def squeezed_thermal_particles(geom: CavityGeometry, lam: int, n: int, nbar: float,
                               s: float, theta: float) -> float:
    """Occupation of output mode ``u_n`` for a squeezed thermal input in mode 1."""
    t = mode_tables(geom, lam)
    if not 1 <= n <= lam:
        raise ValueError(f"output mode n must be in 1..{lam}, got {n}")
    w = float(t.w_left[n - 1])
    om1 = float(t.omega_in[0])
    ch, sh = math.cosh(2 * s), math.sinh(2 * s)
    c2 = math.cos(2 * theta)
    vn1 = t.v_left[n - 1, 0]
    head = vn1 * vn1 * (2 * nbar + 1) * ((ch - c2 * sh) * w * w + (ch + c2 * sh) * om1 * om1)
    vv = t.v_left[n - 1] * t.v_left[n - 1]
    tail = float((vv[1:] * (w * w + t.omega_in[1:] * t.omega_in[1:])).sum())
    return head + tail - 0.5


# ---------------------------------------------------------------------------
# pair entanglement built from the closed-form blocks

def _pair_state(sigma_nn: np.ndarray, gamma_nm: np.ndarray,
                sigmabar_mm: np.ndarray) -> gaussian.GaussianState:
    cov = np.block([[sigma_nn, gamma_nm], [gamma_nm.T, sigmabar_mm]])
    return gaussian.GaussianState(2, np.zeros(4), cov)


def pair_negativity_single_mode(geom: CavityGeometry, lam: int, sigma_in_kk, k: int,
                                n: int, m: int, base: float = math.e) -> float:
    """Entanglement of output pair (u_n, ubar_m) for one nonvacuum input mode."""
    sig = single_mode_output_blocks(geom, lam, sigma_in_kk, k, n, n, "sigma")
    gam = single_mode_output_blocks(geom, lam, sigma_in_kk, k, n, m, "gamma")
    bar = single_mode_output_blocks(geom, lam, sigma_in_kk, k, m, m, "sigmabar")
    return gaussian.log_negativity(_pair_state(sig, gam, bar), base=base)


def pair_negativity_two_mode(geom: CavityGeometry, lam: int, sigma_in_pair, k: int,
                             kprime: int, n: int, m: int, base: float = math.e) -> float:
    """Entanglement of output pair (u_n, ubar_m) for two nonvacuum input modes."""
    sig = two_mode_output_blocks(geom, lam, sigma_in_pair, k, kprime, n, n, "sigma")
    gam = two_mode_output_blocks(geom, lam, sigma_in_pair, k, kprime, n, m, "gamma")
    bar = two_mode_output_blocks(geom, lam, sigma_in_pair, k, kprime, m, m, "sigmabar")
    return gaussian.log_negativity(_pair_state(sig, gam, bar), base=base)


def vacuum_pair_negativity(geom: CavityGeometry, lam: int, n: int = 1, m: int = 1,
                           base: float = math.e) -> float:
    """Entanglement of output pair (u_n, ubar_m) for the vacuum input."""
    return pair_negativity_single_mode(geom, lam, np.eye(2), 1, n, m, base=base)


FIG4_COLUMNS = ("index", "experiment", "family", "param", "lam",
                "initial_n", "e_n")

FAMILIES_FIG4 = ("thermal", "coherent", "squeezed_theta0", "squeezed_theta_half")


def _family_block(family: str, initial_n: float) -> tuple[float, np.ndarray]:
    """Input-mode parameter and covariance block matching a target occupation."""
    if family == "thermal":
        return initial_n, gaussian.squeezed_thermal_block(initial_n, 0.0, 0.0)
    if family == "coherent":
        return math.sqrt(2.0 * initial_n), np.eye(2)
    if family == "squeezed_theta0":
        s = math.asinh(math.sqrt(initial_n))
        return s, gaussian.squeezed_thermal_block(0.0, s, 0.0)
    if family == "squeezed_theta_half":
        s = math.asinh(math.sqrt(initial_n))
        return s, gaussian.squeezed_thermal_block(0.0, s, math.pi / 2)
    raise ValueError(f"unknown state family {family!r}")


def negativity_vs_particles(geom: CavityGeometry, lam: int, initial_n_values,
                            base: float = math.e, workers: int = 1) -> list[SweepRecord]:
    """Lowest-pair entanglement vs initial occupation for single-mode families.

    Families: thermal, coherent (same covariance as the vacuum, so its curve
    is flat), and squeezed vacuum at the two principal squeezing angles.
    """
    mode_tables(geom, lam)
    points = [(family, float(x)) for family in FAMILIES_FIG4 for x in initial_n_values]

    def evaluate(point):
        family, initial_n = point
        param, block = _family_block(family, initial_n)
        e_n = pair_negativity_single_mode(geom, lam, block, 1, 1, 1, base=base)
        return family, param, initial_n, e_n

    records = []
    for index, (family, param, initial_n, e_n) in enumerate(_pmap(evaluate, points, workers)):
        records.append(SweepRecord(index, "fig4",
                                   {"family": family, "param": param, "lam": lam,
                                    "initial_n": initial_n},
                                   {"e_n": e_n}))
    return records


FIG5_COLUMNS = ("index", "experiment", "nbar", "s", "theta", "lam", "e_n", "s_star")


def squeezing_threshold(geom: CavityGeometry, lam: int, nbar: float,
                        theta: float = 0.0, s_max: float = 3.0, base: float = math.e,
                        tol: float = 1e-4, coarse: int = 61):
    """Smallest squeezing at which the lowest pair becomes entangled.

    Grid scan on ``[0, s_max]`` followed by bisection to ``tol``.  Returns
    ``None`` when no grid point is entangled (threshold beyond ``s_max``).
    """
    def e_of(s: float) -> float:
        block = gaussian.squeezed_thermal_block(nbar, s, theta)
        return pair_negativity_single_mode(geom, lam, block, 1, 1, 1, base=base)

    grid = np.linspace(0.0, s_max, coarse)
    entangled = [e_of(float(s)) > 0.0 for s in grid]
    if not any(entangled):
        return None
    first = entangled.index(True)
    if first == 0:
        return 0.0
    lo, hi = float(grid[first - 1]), float(grid[first])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if e_of(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def squeezing_temperature_scan(geom: CavityGeometry, lam: int, nbars, s_values,
                               theta: float = 0.0, base: float = math.e,
                               workers: int = 1) -> list[SweepRecord]:
    """Lowest-pair entanglement vs squeezing for a list of thermal occupations.

    Each record carries the refined entanglement threshold ``s_star`` of its
    occupation; -1.0 marks a threshold beyond the scanned range.
    """
    mode_tables(geom, lam)
    s_values = [float(s) for s in s_values]
    s_max = max(s_values) if s_values else 0.0

    def evaluate(point):
        nbar, s = point
        block = gaussian.squeezed_thermal_block(nbar, s, theta)
        return pair_negativity_single_mode(geom, lam, block, 1, 1, 1, base=base)

    records = []
    index = 0
    for nbar in nbars:
        nbar = float(nbar)
        star = squeezing_threshold(geom, lam, nbar, theta=theta, s_max=s_max, base=base)
        star = -1.0 if star is None else star
        points = [(nbar, s) for s in s_values]
        for s, e_n in zip(s_values, _pmap(evaluate, points, workers)):
            records.append(SweepRecord(index, "fig5",
                                       {"nbar": nbar, "s": s, "theta": theta, "lam": lam},
                                       {"e_n": e_n, "s_star": star}))
            index += 1
    return records


INITIAL_STATES_FIG6 = ("vacuum", "tms", "stripped")


def entanglement_distribution(geom: CavityGeometry, lam: int, initial: str, m_max: int,
                              s: float = 0.75, theta: float = math.pi, k: int = 1,
                              kprime: int = 2, base: float = math.e,
                              workers: int = 1) -> HeatmapGrid:
    """Entanglement of every low output pair (u_n, ubar_m), n, m <= m_max.

    ``initial`` selects the input state: the vacuum, a two-mode squeezed
    vacuum in modes (k, kprime), or the same state with its cross
    correlations removed (thermal marginals only).
    """
    if initial not in INITIAL_STATES_FIG6:
        raise ValueError(f"initial must be one of {INITIAL_STATES_FIG6}, got {initial!r}")
    if not 1 <= m_max <= lam:
        raise ValueError(f"m_max must be in 1..{lam}, got {m_max}")
    mode_tables(geom, lam)
    pairs = [(n, m) for n in range(1, m_max + 1) for m in range(1, m_max + 1)]

    if initial == "vacuum":
        def evaluate(pair):
            n, m = pair
            return pair_negativity_single_mode(geom, lam, np.eye(2), k, n, m, base=base)
    else:
        diag, off = gaussian.two_mode_squeezed_blocks(s, theta)
        if initial == "stripped":
            off = np.zeros((2, 2))
        sigma_pair = np.block([[diag, off], [off.T, diag]])

        def evaluate(pair):
            n, m = pair
            return pair_negativity_two_mode(geom, lam, sigma_pair, k, kprime, n, m, base=base)

    values = np.array(_pmap(evaluate, pairs, workers)).reshape(m_max, m_max)
    return HeatmapGrid(values, initial,
                       {"s": s, "theta": theta, "k": k, "kprime": kprime, "lam": lam})


# ---------------------------------------------------------------------------
# truncation convergence

CONVERGE_COLUMNS = ("index", "experiment", "observable", "lam", "value", "delta_prev")

OBSERVABLES = ("vacuum_negativity", "coherent_particles", "squeezed_particles",
               "total_particles", "symplectic_defect")


def _observable_value(geom: CavityGeometry, lam: int, observable: str,
                      base: float) -> float:
    if observable == "vacuum_negativity":
        return vacuum_pair_negativity(geom, lam, base=base)
    if observable == "coherent_particles":
        # total occupation of u_1: vacuum part plus the displacement part
        fm = coherent_particles_closed_form(geom, 1, 1, 1.0, 0.0, LEFT)
        t = mode_tables(geom, lam)
        vv = t.v_left[0] * t.v_left[0]
        w1 = float(t.w_left[0])
        second = float(vv.sum() * w1 * w1 + (vv * t.omega_in * t.omega_in).sum()) - 0.5
        return fm + second
    if observable == "squeezed_particles":
        return squeezed_thermal_particles(geom, lam, 1, nbar=1.0, s=0.5, theta=0.0)
    if observable == "total_particles":
        # summed over every output mode; expected to grow without bound in lam
        t = mode_tables(geom, lam)
        total = 0.0
        for v_tab, w_tab in ((t.v_left, t.w_left), (t.v_right, t.w_right)):
            vv = v_tab * v_tab
            total += float((vv * (w_tab[:, None] ** 2 + t.omega_in[None, :] ** 2)).sum())
        return total - lam
    if observable == "symplectic_defect":
        return symplectic_defect(dense_transform(geom, lam))
    raise ValueError(f"unknown observable {observable!r}; pick one of {OBSERVABLES}")


def convergence_study(geom: CavityGeometry, lams, observable: str,
                      base: float = math.e) -> list[SweepRecord]:
    """Track one observable along an ascending truncation ladder.

    ``delta_prev`` is the absolute change from the previous rung (0.0 on the
    first row).
    """
    lams = [int(lam) for lam in lams]
    if lams != sorted(lams) or len(set(lams)) != len(lams):
        raise ValueError(f"truncation ladder must be strictly ascending, got {lams}")
    records = []
    previous = None
    for index, lam in enumerate(lams):
        value = _observable_value(geom, lam, observable, base)
        delta = 0.0 if previous is None else abs(value - previous)
        records.append(SweepRecord(index, "converge",
                                   {"observable": observable, "lam": lam},
                                   {"value": value, "delta_prev": delta}))
        previous = value
    return records


SWEEP_COLUMNS = ("index", "experiment", "family", "param", "value", "lam",
                 "initial_n", "e_n", "pair_particles")

SWEEP_FAMILIES = ("thermal", "coherent", "squeezed", "tms", "stripped")


def generic_sweep(geom: CavityGeometry, lam: int, family: str, param: str, values,
                  fixed: dict | None = None, base: float = math.e,
                  workers: int = 1) -> list[SweepRecord]:
    """One-dimensional sweep of a state parameter for a chosen input family.

    Per point: initial occupation of the prepared input mode(s), lowest-pair
    entanglement, and the occupation of the lowest output pair.
    """
    if family not in SWEEP_FAMILIES:
        raise ValueError(f"unknown family {family!r}; pick one of {SWEEP_FAMILIES}")
    fixed = dict(fixed or {})
    defaults = {"nbar": 0.0, "rho": 0.0, "phi": 0.0, "s": 0.0,
                "theta": 0.0, "k": 1, "kprime": 2}
    defaults.update(fixed)
    if param not in ("nbar", "rho", "phi", "s", "theta"):
        raise ValueError(f"cannot sweep parameter {param!r}")
    mode_tables(geom, lam)

    def evaluate(value):
        p = dict(defaults)
        p[param] = float(value)
        k, kprime = int(p["k"]), int(p["kprime"])
        if family in ("tms", "stripped"):
            diag, off = gaussian.two_mode_squeezed_blocks(p["s"], p["theta"])
            if family == "stripped":
                off = np.zeros((2, 2))
            sigma_pair = np.block([[diag, off], [off.T, diag]])
            initial_n = 0.5 * (diag[0, 0] + diag[1, 1]) / 2.0 - 0.5
            e_n = pair_negativity_two_mode(geom, lam, sigma_pair, k, kprime, 1, 1, base=base)
            sig = two_mode_output_blocks(geom, lam, sigma_pair, k, kprime, 1, 1, "sigma")
            bar = two_mode_output_blocks(geom, lam, sigma_pair, k, kprime, 1, 1, "sigmabar")
            pair_particles = 0.25 * (np.trace(sig) - 2.0) + 0.25 * (np.trace(bar) - 2.0)
        else:
            if family == "thermal":
                block = gaussian.squeezed_thermal_block(p["nbar"], 0.0, 0.0)
                initial_n = p["nbar"]
            elif family == "coherent":
                block = np.eye(2)
                initial_n = 0.5 * p["rho"] ** 2
            else:
                block = gaussian.squeezed_thermal_block(p["nbar"], p["s"], p["theta"])
                initial_n = 0.5 * ((2 * p["nbar"] + 1) * math.cosh(2 * p["s"]) - 1)
            e_n = pair_negativity_single_mode(geom, lam, block, k, 1, 1, base=base)
            sig = single_mode_output_blocks(geom, lam, block, k, 1, 1, "sigma")
            bar = single_mode_output_blocks(geom, lam, block, k, 1, 1, "sigmabar")
            pair_particles = 0.25 * (np.trace(sig) - 2.0) + 0.25 * (np.trace(bar) - 2.0)
            if family == "coherent":
                pair_particles += (coherent_particles_closed_form(geom, 1, k, p["rho"], p["phi"], LEFT)
                                   + coherent_particles_closed_form(geom, 1, k, p["rho"], p["phi"], RIGHT))
        return float(initial_n), float(e_n), float(pair_particles)

    records = []
    for index, (value, result) in enumerate(zip(values, _pmap(evaluate, list(values), workers))):
        initial_n, e_n, pair_particles = result
        records.append(SweepRecord(index, "sweep",
                                   {"family": family, "param": param,
                                    "value": float(value), "lam": lam,
                                    "initial_n": initial_n},
                                   {"e_n": e_n, "pair_particles": pair_particles}))
    return records
