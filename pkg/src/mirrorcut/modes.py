"""Mode structure of a Dirichlet cavity that is suddenly split by a mirror.

A cavity of length ``R`` supports standing waves with angular frequencies
``pi*l/R``.  When a perfect mirror appears at ``x = r``, the field continues
as standing waves of the two sub-cavities (left modes ``u_n``, right modes
``ubar_n``).  For an instantaneous insertion the two mode families are
related by a linear Bogoliubov map, which in quadrature variables is a real
matrix acting on interleaved ``(Q, P)`` pairs.  This module computes the
overlap coefficients of that map and assembles the truncated transfer
matrix.

All values here are pure functions of immutable inputs and safe to share
across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

LEFT = "left"
RIGHT = "right"
SIDES = (LEFT, RIGHT)


@dataclass(frozen=True)
class CavityGeometry:
    """Cavity of length ``R`` with a split point at ``r = (p/q) * R``.

    The split point is stored as an exact rational fraction of ``R`` so that
    frequency coincidences between old and new modes can be decided in
    integer arithmetic; the two branches of the overlap formula differ
    structurally and must never be selected by floating-point comparison.
    """

    R: float = 2.0
    r_frac: Fraction = Fraction(1, 2)

    def __post_init__(self) -> None:
        if not self.R > 0:
            raise ValueError(f"cavity length R must be positive, got {self.R}")
        frac = Fraction(self.r_frac)
        if not 0 < frac < 1:
            raise ValueError(f"split fraction must lie strictly inside (0, 1), got {frac}")
        object.__setattr__(self, "r_frac", frac)

    @property
    def r(self) -> float:
        """Length of the left sub-cavity."""
        return self.R * self.r_frac.numerator / self.r_frac.denominator

    @property
    def rbar(self) -> float:
        """Length of the right sub-cavity, ``R - r``."""
        return self.R - self.r

    @property
    def is_midpoint(self) -> bool:
        return self.r_frac == Fraction(1, 2)


@dataclass(frozen=True)
class TruncationConfig:
    """Mode-ladder cutoff: ``lam`` output modes per side, ``2*lam`` input modes."""

    lam: int = 64

    def __post_init__(self) -> None:
        if self.lam < 1:
            raise ValueError(f"cutoff must be a positive integer, got {self.lam}")

    @property
    def n_inputs(self) -> int:
        return 2 * self.lam


@dataclass(frozen=True, eq=False)
class SymplecticTransform:
    """Truncated quadrature transfer matrix of the mirror insertion.

    Rows are ``(Q, P)`` pairs of the output modes, left sub-cavity first
    (``u_1 .. u_lam``) then right (``ubar_1 .. ubar_lam``); columns are the
    input modes ``U_1 .. U_{2 lam}``.  The matrix is only approximately
    symplectic: truncation removes part of every output mode's overlap tail,
    worst for the highest modes.
    """

    matrix: np.ndarray
    lam: int
    geometry: CavityGeometry


def _check_side(side: str) -> None:
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")


def _check_index(value: int, name: str) -> None:
    if value < 1:
        raise ValueError(f"mode index {name} must be >= 1, got {value}")


def input_frequency(geom: CavityGeometry, l: int) -> float:
    """Angular frequency ``pi*l/R`` of input mode ``l`` of the undivided cavity."""
    _check_index(l, "l")
    return math.pi * l / geom.R


def side_frequency(geom: CavityGeometry, side: str, n: int) -> float:
    """Angular frequency of mode ``n`` of the left or right sub-cavity."""
    _check_side(side)
    _check_index(n, "n")
    length = geom.r if side == LEFT else geom.rbar
    return math.pi * n / length


def is_resonant(geom: CavityGeometry, side: str, n: int, l: int) -> bool:
    """Exact test for an input/output frequency coincidence.

    Left side: ``Omega_l == omega_n``  iff ``l*p == n*q``.
    Right side: ``Omega_l == omegabar_n`` iff ``l*(q - p) == n*q``.
    """
    _check_side(side)
    _check_index(n, "n")
    _check_index(l, "l")
    p, q = geom.r_frac.numerator, geom.r_frac.denominator
    if side == LEFT:
        return l * p == n * q
    return l * (q - p) == n * q


def _sin_pi_frac(num: int, den: int) -> float:
    """``sin(pi * num/den)`` with the phase reduced exactly modulo 2*pi.

    Returns 0.0 exactly when ``num/den`` is an integer, so structural zeros
    of the overlap (e.g. even input modes at a midpoint split) survive in
    floating point.
    """
    m = num % (2 * den)
    if m % den == 0:
        return 0.0
    return math.sin(math.pi * m / den)


def v_coeff(geom: CavityGeometry, side: str, n: int, l: int) -> float:
    """Overlap coefficient between input mode ``l`` and output mode ``n``.

    The non-resonant expression has a removable singularity where the
    frequencies coincide; the resonant branch is its limit and is selected
    via :func:`is_resonant`.  The right side carries an extra alternating
    sign on resonance.
    """
    _check_side(side)
    om_in = input_frequency(geom, l)
    w = side_frequency(geom, side, n)
    p, q = geom.r_frac.numerator, geom.r_frac.denominator
    if side == LEFT:
        length = geom.r
        root = math.sqrt(geom.R * length * om_in * w)
        if is_resonant(geom, side, n, l):
            return length / (2.0 * root)
        sine = _sin_pi_frac(l * p, q)
        return (-1) ** n * n * math.pi * sine / (length * root * (om_in * om_in - w * w))
    length = geom.rbar
    root = math.sqrt(geom.R * length * om_in * w)
    if is_resonant(geom, side, n, l):
        return (-1) ** (n + l) * length / (2.0 * root)
    sine = _sin_pi_frac(l * p, q)
    return -n * math.pi * sine / (length * root * (om_in * om_in - w * w))


def alpha_beta(geom: CavityGeometry, side: str, n: int, l: int) -> tuple[float, float]:
    """Bogoliubov coefficient pair ``(alpha, beta)`` for one mode overlap.

    ``alpha = (Omega_l + omega) V`` and ``beta = (Omega_l - omega) V``; on
    resonance beta vanishes identically, so it is returned as exactly 0.0.
    """
    v = v_coeff(geom, side, n, l)
    om_in = input_frequency(geom, l)
    w = side_frequency(geom, side, n)
    if is_resonant(geom, side, n, l):
        return (om_in + w) * v, 0.0
    return (om_in + w) * v, (om_in - w) * v


def s_block(geom: CavityGeometry, side: str, n: int, l: int) -> np.ndarray:
    """2x2 quadrature block ``2 V diag(omega_n, Omega_l)`` of the transfer matrix.

    Equals ``diag(alpha - beta, alpha + beta)``; both off-diagonal entries
    are exactly zero.
    """
    v = v_coeff(geom, side, n, l)
    om_in = input_frequency(geom, l)
    w = side_frequency(geom, side, n)
    return np.array([[2.0 * v * w, 0.0], [0.0, 2.0 * v * om_in]])


def build_transform(geom: CavityGeometry, trunc: TruncationConfig) -> SymplecticTransform:
    """Assemble the truncated 4*lam x 4*lam transfer matrix from its mode blocks."""
    lam = trunc.lam
    S = np.zeros((4 * lam, 4 * lam))
    for row, (side, n) in enumerate(output_modes(lam)):
        r0 = 2 * row
        for l in range(1, 2 * lam + 1):
            S[r0:r0 + 2, 2 * l - 2:2 * l] = s_block(geom, side, n, l)
    return SymplecticTransform(matrix=S, lam=lam, geometry=geom)


def output_modes(lam: int):
    """Yield ``(side, n)`` labels in output row order: left 1..lam, right 1..lam."""
    for n in range(1, lam + 1):
        yield LEFT, n
    for n in range(1, lam + 1):
        yield RIGHT, n


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form J for interleaved (Q, P) ordering."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_defect(transform: SymplecticTransform, n_low: int = 1) -> float:
    """Largest violation of ``S J S^T = J`` on the lowest output-mode rows.

    Only rows of modes ``u_1..u_{n_low}`` and ``ubar_1..ubar_{n_low}`` are
    inspected; high-mode rows never converge at fixed truncation because
    their overlap tails are cut.
    """
    S = transform.matrix
    lam = transform.lam
    if not 1 <= n_low <= lam:
        raise ValueError(f"n_low must be in 1..{lam}, got {n_low}")
    J = symplectic_form(2 * lam)
    defect = S @ J @ S.T - J
    rows = []
    for n in range(n_low):
        rows.extend((2 * n, 2 * n + 1, 2 * lam + 2 * n, 2 * lam + 2 * n + 1))
    return float(np.abs(defect[rows, :]).max())


def write_matrix_csv(matrix: np.ndarray, path) -> None:
    """Dump a matrix as CSV for debugging: one row per line, 17 significant digits."""
    m = np.asarray(matrix, dtype=float)
    with open(path, "w", newline="") as handle:
        for row in m:
            handle.write(",".join(format(x, ".17g") for x in row))
            handle.write("\n")
