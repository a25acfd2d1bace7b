"""Gaussian states as first moments plus a covariance matrix, and their observables.

Quadratures interleave as ``(Q_1, P_1, Q_2, P_2, ...)`` and conventions are
fixed so the vacuum covariance is the identity.  States are value objects:
every operation returns a fresh state and never mutates its input, so
instances are safe to share across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .modes import SymplecticTransform, symplectic_form

#: numerical slack below the vacuum symplectic eigenvalue that still counts
#: as physical (double-precision spectra of large matrix products)
PHYSICALITY_SLACK = 1e-9


class InvalidStateError(ValueError):
    """Raised when a covariance matrix is too unphysical to evaluate."""


@dataclass
class _ClampCounter:
    """Tally of numerical clamps applied near separability boundaries."""

    negative_discriminant: int = 0
    nu_above_one: int = 0

    def reset(self) -> None:
        self.negative_discriminant = 0
        self.nu_above_one = 0


clamp_counter = _ClampCounter()


@dataclass(eq=False)
class GaussianState:
    """N-mode Gaussian state: first moments (length 2N) and covariance (2N x 2N).

    Physicality (all symplectic eigenvalues >= 1) is *not* enforced on
    construction: a truncated split transform pushes its highest output
    modes slightly outside the physical cone, and :func:`validate` is the
    tool that quantifies this instead of hiding it.
    """

    n_modes: int
    first_moments: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        if self.n_modes < 1:
            raise ValueError(f"need at least one mode, got {self.n_modes}")
        self.first_moments = np.asarray(self.first_moments, dtype=float)
        self.cov = np.asarray(self.cov, dtype=float)
        d = 2 * self.n_modes
        if self.first_moments.shape != (d,):
            raise ValueError(f"first moments must have shape ({d},), got {self.first_moments.shape}")
        if self.cov.shape != (d, d):
            raise ValueError(f"covariance must have shape ({d}, {d}), got {self.cov.shape}")

    def copy(self) -> "GaussianState":
        return GaussianState(self.n_modes, self.first_moments.copy(), self.cov.copy())

    def block(self, i: int, j: int) -> np.ndarray:
        """2x2 covariance block between 1-based modes ``i`` and ``j`` (a view)."""
        self._check_mode(i)
        self._check_mode(j)
        return self.cov[2 * i - 2:2 * i, 2 * j - 2:2 * j]

    def _check_mode(self, k: int) -> None:
        if not 1 <= k <= self.n_modes:
            raise IndexError(f"mode index {k} out of range 1..{self.n_modes}")


@dataclass(frozen=True)
class ModePair:
    """Ordered pair of distinct 1-based mode indices."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a < 1 or self.b < 1:
            raise IndexError(f"mode indices must be >= 1, got ({self.a}, {self.b})")
        if self.a == self.b:
            raise ValueError(f"mode pair must be distinct, got ({self.a}, {self.b})")


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a physicality check; ``worst_deficit`` is 0 for valid states."""

    ok: bool
    max_asymmetry: float
    min_symplectic_eigenvalue: float
    worst_deficit: float


def vacuum(n_modes: int) -> GaussianState:
    """Ground state of every mode: zero means, identity covariance."""
    return GaussianState(n_modes, np.zeros(2 * n_modes), np.eye(2 * n_modes))


def set_coherent(state: GaussianState, k: int, rho: float, phi: float) -> GaussianState:
    """Displace mode ``k`` to a coherent state of amplitude ``rho`` and phase ``phi``.

    Only the first moments change: ``<Q_k> = rho cos(phi)``,
    ``<P_k> = rho sin(phi)``.  The covariance block stays whatever it was
    (the vacuum identity for a freshly constructed state).
    """
    state._check_mode(k)
    if rho < 0:
        raise ValueError(f"coherent amplitude must be >= 0, got {rho}")
    out = state.copy()
    out.first_moments[2 * k - 2] = rho * math.cos(phi)
    out.first_moments[2 * k - 1] = rho * math.sin(phi)
    return out


def squeezed_thermal_block(nbar: float, s: float, theta: float) -> np.ndarray:
    """Covariance block of a squeezed thermal mode.

    ``nbar`` is the thermal occupation, ``s`` the squeezing strength and
    ``theta`` the squeezing angle; this is the most general single-mode
    Gaussian covariance with zero first moments.
    """
    if nbar < 0:
        raise ValueError(f"thermal occupation must be >= 0, got {nbar}")
    ch, sh = math.cosh(2 * s), math.sinh(2 * s)
    c2, s2 = math.cos(2 * theta), math.sin(2 * theta)
    return (2 * nbar + 1) * np.array([[ch - c2 * sh, s2 * sh], [s2 * sh, ch + c2 * sh]])


def set_squeezed_thermal(state: GaussianState, k: int, nbar: float, s: float,
                         theta: float) -> GaussianState:
    """Put mode ``k`` in a squeezed thermal state (zero first moments)."""
    state._check_mode(k)
    out = state.copy()
    out.first_moments[2 * k - 2:2 * k] = 0.0
    out.cov[2 * k - 2:2 * k, 2 * k - 2:2 * k] = squeezed_thermal_block(nbar, s, theta)
    return out


def two_mode_squeezed_blocks(s: float, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal covariance blocks of a two-mode squeezed vacuum."""
    diag = math.cosh(2 * s) * np.eye(2)
    off = -abs(math.sinh(2 * s)) * np.array([[math.cos(theta), math.sin(theta)],
                                             [math.sin(theta), -math.cos(theta)]])
    return diag, off


def set_two_mode_squeezed(state: GaussianState, k: int, kprime: int, s: float,
                          theta: float) -> GaussianState:
    """Put modes ``k < kprime`` in a two-mode squeezed vacuum."""
    state._check_mode(k)
    state._check_mode(kprime)
    if not k < kprime:
        raise ValueError(f"need k < kprime, got ({k}, {kprime})")
    diag, off = two_mode_squeezed_blocks(s, theta)
    out = state.copy()
    out.first_moments[2 * k - 2:2 * k] = 0.0
    out.first_moments[2 * kprime - 2:2 * kprime] = 0.0
    out.block(k, k)[:] = diag
    out.block(kprime, kprime)[:] = diag
    out.block(k, kprime)[:] = off
    out.block(kprime, k)[:] = off.T
    return out


def strip_correlations(state: GaussianState, k: int, kprime: int) -> GaussianState:
    """Replace the joint state of ``k`` and ``kprime`` by the product of its marginals.

    Zeroes the off-diagonal covariance blocks between the two modes;
    diagonal blocks and everything else stay untouched.
    """
    state._check_mode(k)
    state._check_mode(kprime)
    out = state.copy()
    out.block(k, kprime)[:] = 0.0
    out.block(kprime, k)[:] = 0.0
    return out


def apply_transform(state: GaussianState, transform) -> GaussianState:
    """Propagate a state through a quadrature transfer matrix.

    Accepts a :class:`~mirrorcut.modes.SymplecticTransform` or a raw matrix.
    First moments map as ``x -> S x`` and the covariance as ``S sigma S^T``;
    for the split transform the output modes are ordered
    ``u_1..u_lam, ubar_1..ubar_lam``.
    """
    S = transform.matrix if isinstance(transform, SymplecticTransform) else np.asarray(transform, float)
    if S.ndim != 2 or S.shape[1] != 2 * state.n_modes:
        raise ValueError(
            f"transform expects {S.shape[1] // 2} input modes, state has {state.n_modes}")
    return GaussianState(S.shape[0] // 2, S @ state.first_moments, S @ state.cov @ S.T)


def reduce(state: GaussianState, pair) -> GaussianState:
    """Two-mode marginal on the given :class:`ModePair` (or 2-tuple) of modes."""
    if not isinstance(pair, ModePair):
        pair = ModePair(*pair)
    state._check_mode(pair.a)
    state._check_mode(pair.b)
    idx = [2 * pair.a - 2, 2 * pair.a - 1, 2 * pair.b - 2, 2 * pair.b - 1]
    return GaussianState(2, state.first_moments[idx], state.cov[np.ix_(idx, idx)])


def mean_particle_number(state: GaussianState, mode: int) -> float:
    """Mean occupation of one mode.

    Thermal part ``(Tr sigma_kk - 2)/4`` plus the displacement part
    ``(<Q>^2 + <P>^2)/2``.  Slightly negative values can occur for
    truncation-damaged high modes and are reported as-is.
    """
    state._check_mode(mode)
    i = 2 * mode - 2
    trace = state.cov[i, i] + state.cov[i + 1, i + 1]
    q, p = state.first_moments[i], state.first_moments[i + 1]
    return 0.25 * (trace - 2.0) + 0.5 * (q * q + p * p)


def _det2(m: np.ndarray) -> float:
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def log_negativity(state: GaussianState, base: float = math.e) -> float:
    """Entanglement between the two modes of a two-mode Gaussian state.

    Computed from the smallest symplectic eigenvalue ``nu`` of the partially
    transposed covariance: ``E = max(0, -log nu)``.  ``base`` rescales the
    logarithm; the ``E > 0`` threshold is base-independent.  Assumes a valid
    (physical) two-mode state; badly unphysical input raises
    :class:`InvalidStateError`, while tiny numerical excursions near the
    separability boundary are clamped to 0 and tallied in
    ``clamp_counter``.
    """
    if state.n_modes != 2:
        raise ValueError(f"log negativity is defined for 2-mode states, got {state.n_modes} modes")
    if base <= 0 or base == 1.0:
        raise ValueError(f"log base must be positive and != 1, got {base}")
    a = _det2(state.cov[0:2, 0:2])
    b = _det2(state.cov[2:4, 2:4])
    c = _det2(state.cov[0:2, 2:4])
    delta = a + b - 2.0 * c
    det4 = float(np.linalg.det(state.cov))
    disc = delta * delta - 4.0 * det4
    if disc < 0.0:
        if disc < -1e-12 * max(1.0, delta * delta):
            raise InvalidStateError(
                f"partial-transpose discriminant is negative ({disc:.3e}); state is not physical")
        clamp_counter.negative_discriminant += 1
        disc = 0.0
    nu_sq = 0.5 * (delta - math.sqrt(disc))
    if nu_sq <= 0.0:
        raise InvalidStateError(
            f"partial-transpose symplectic eigenvalue collapsed (nu^2 = {nu_sq:.3e})")
    nu = math.sqrt(nu_sq)
    if nu >= 1.0:
        if nu <= 1.0 + 1e-12:
            clamp_counter.nu_above_one += 1
        return 0.0
    return -math.log(nu) / math.log(base)


def symplectic_eigenvalues(state: GaussianState) -> np.ndarray:
    """Symplectic spectrum of the covariance, ascending, one value per mode.

    Physical states have every value >= 1 in the vacuum = identity
    convention.
    """
    if not np.all(np.isfinite(state.cov)):
        raise ValueError("covariance contains non-finite entries")
    J = symplectic_form(state.n_modes)
    eigv = np.linalg.eigvals(J @ state.cov)
    nus = np.sort(np.abs(eigv))
    # eigenvalues of J sigma come in +/- i nu pairs; keep one per pair
    return nus[::2].copy()


def validate(state: GaussianState, slack: float = PHYSICALITY_SLACK) -> ValidationReport:
    """Check covariance symmetry and the uncertainty bound (nu >= 1 - slack)."""
    asym = float(np.abs(state.cov - state.cov.T).max())
    scale = max(1.0, float(np.abs(state.cov).max()))
    nus = symplectic_eigenvalues(state)
    nu_min = float(nus.min())
    deficit = max(0.0, 1.0 - nu_min)
    ok = asym <= slack * scale and deficit <= slack
    return ValidationReport(ok=ok, max_asymmetry=asym,
                            min_symplectic_eigenvalue=nu_min, worst_deficit=deficit)


def to_json(state: GaussianState) -> str:
    """Serialize a state to JSON with 17-significant-digit floats."""
    fm = ", ".join(format(x, ".17g") for x in state.first_moments)
    cov = ", ".join(format(x, ".17g") for x in state.cov.ravel())
    return ('{"n_modes": %d, "first_moments": [%s], "cov": [%s]}'
            % (state.n_modes, fm, cov))


def from_json(text: str) -> GaussianState:
    """Inverse of :func:`to_json`."""
    data = json.loads(text)
    n = int(data["n_modes"])
    fm = np.array(data["first_moments"], dtype=float)
    cov = np.array(data["cov"], dtype=float).reshape(2 * n, 2 * n)
    return GaussianState(n, fm, cov)
