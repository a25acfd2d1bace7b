"""Acceptance suite: one test per release criterion, each at its pinned tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to get one pass/fail line
per criterion (a ``PASS  <criterion>`` line is printed on success; pytest
reports the failure otherwise).
"""

import math
import time

import numpy as np
import pytest

from mirrorcut import experiments as ex
from mirrorcut import gaussian
from mirrorcut.modes import CavityGeometry, TruncationConfig, build_transform, symplectic_defect

PI = math.pi
MID = CavityGeometry()
LAM = 64


def _report(name):
    print(f"\nPASS  {name}")


@pytest.fixture(scope="module")
def transform64():
    return ex.dense_transform(MID, LAM)


def _rel_err(a, b):
    return np.abs(np.asarray(a) - np.asarray(b)).max() / max(1.0, np.abs(b).max())


def _random_single_block(rng):
    return gaussian.squeezed_thermal_block(rng.uniform(0, 3), rng.uniform(0, 1.5),
                                           rng.uniform(0, 2 * PI))


def test_criterion_closed_form_dense_equivalence(transform64):
    """Closed forms vs full matrix pipeline: 1e-12 relative on >= 100 random
    points per formula, under 30 s at lam = 64."""
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    S = transform64.matrix

    # single-mode nonvacuum blocks
    for _ in range(100):
        k = int(rng.integers(1, 2 * LAM + 1))
        i = int(rng.integers(1, LAM + 1))
        j = int(rng.integers(1, LAM + 1))
        which = ("sigma", "gamma", "sigmabar")[int(rng.integers(3))]
        block_in = _random_single_block(rng)
        state = gaussian.vacuum(2 * LAM)
        state.cov[2 * k - 2:2 * k, 2 * k - 2:2 * k] = block_in
        out = gaussian.apply_transform(state, transform64)
        oi = i + (LAM if which == "sigmabar" else 0)
        oj = j + (0 if which == "sigma" else LAM)
        dense = out.cov[2 * oi - 2:2 * oi, 2 * oj - 2:2 * oj]
        closed = ex.single_mode_output_blocks(MID, LAM, block_in, k, i, j, which)
        assert _rel_err(closed, dense) < 1e-12

    # two-mode nonvacuum blocks
    for _ in range(100):
        k = int(rng.integers(1, 2 * LAM))
        kprime = int(rng.integers(k + 1, 2 * LAM + 1))
        i = int(rng.integers(1, LAM + 1))
        j = int(rng.integers(1, LAM + 1))
        which = ("sigma", "gamma", "sigmabar")[int(rng.integers(3))]
        diag, off = gaussian.two_mode_squeezed_blocks(rng.uniform(0, 1.2),
                                                      rng.uniform(0, 2 * PI))
        scale = 1.0 + 2.0 * rng.uniform(0, 1.0)
        sigma4 = scale * np.block([[diag, off], [off.T, diag]])
        state = gaussian.vacuum(2 * LAM)
        for (a, b), blk in (((k, k), sigma4[0:2, 0:2]), ((k, kprime), sigma4[0:2, 2:4]),
                            ((kprime, k), sigma4[2:4, 0:2]), ((kprime, kprime), sigma4[2:4, 2:4])):
            state.cov[2 * a - 2:2 * a, 2 * b - 2:2 * b] = blk
        out = gaussian.apply_transform(state, transform64)
        oi = i + (LAM if which == "sigmabar" else 0)
        oj = j + (0 if which == "sigma" else LAM)
        dense = out.cov[2 * oi - 2:2 * oi, 2 * oj - 2:2 * oj]
        closed = ex.two_mode_output_blocks(MID, LAM, sigma4, k, kprime, i, j, which)
        assert _rel_err(closed, dense) < 1e-12

    # coherent first-moment production
    for _ in range(100):
        k = int(rng.integers(1, 2 * LAM + 1))
        n = int(rng.integers(1, LAM + 1))
        rho, phi = rng.uniform(0, 3), rng.uniform(0, 2 * PI)
        x_in = np.zeros(4 * LAM)
        x_in[2 * k - 2] = rho * math.cos(phi)
        x_in[2 * k - 1] = rho * math.sin(phi)
        x_out = S @ x_in
        dense = 0.5 * (x_out[2 * n - 2] ** 2 + x_out[2 * n - 1] ** 2)
        closed = ex.coherent_particles_closed_form(MID, n, k, rho, phi)
        assert abs(closed - dense) <= 1e-12 * max(1.0, abs(dense))

    # squeezed-thermal reduced blocks of the lowest pair
    for _ in range(100):
        nbar, s, theta = rng.uniform(0, 3), rng.uniform(0, 1.5), rng.uniform(0, 2 * PI)
        state = gaussian.set_squeezed_thermal(gaussian.vacuum(2 * LAM), 1, nbar, s, theta)
        out = gaussian.apply_transform(state, transform64)
        sigma11, gamma11, sigmabar11 = ex.squeezed_thermal_sigma11(MID, LAM, nbar, s, theta)
        assert _rel_err(sigma11, out.block(1, 1)) < 1e-12
        assert _rel_err(gamma11, out.block(1, LAM + 1)) < 1e-12
        assert _rel_err(sigmabar11, out.block(LAM + 1, LAM + 1)) < 1e-12

    # squeezed-thermal particle numbers
    for _ in range(100):
        nbar, s, theta = rng.uniform(0, 3), rng.uniform(0, 1.5), rng.uniform(0, 2 * PI)
        n = int(rng.integers(1, LAM + 1))
        state = gaussian.set_squeezed_thermal(gaussian.vacuum(2 * LAM), 1, nbar, s, theta)
        out = gaussian.apply_transform(state, transform64)
        closed = ex.squeezed_thermal_particles(MID, LAM, n, nbar, s, theta)
        dense = gaussian.mean_particle_number(out, n)
        assert abs(closed - dense) <= 1e-12 * max(1.0, abs(dense))

    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"equivalence suite took {elapsed:.1f}s"
    _report("closed-form/dense equivalence (5 formulas x 100 points, 1e-12)")


def test_criterion_coherent_particle_ratios(transform64):
    """In-phase coherent input, mode 1: both-side particle ratios match the
    analytic constants to 1e-9; modes 1+2 nearly double the particle count."""
    analytic = {1: 128 / (9 * PI**2), 2: 1024 / (225 * PI**2)}

    # closed-form sweep values
    records = ex.coherent_phase_sweep(MID, LAM, 1, [0.0], n_max=2)
    for r in records:
        assert abs(r.outputs["ratio"] - analytic[r.params["n"]]) < 1e-9

    # independent brute-force oracle: transform the full moment vector
    x_in = np.zeros(4 * LAM)
    x_in[0] = 1.0  # rho = 1, phi = 0, k = 1
    x_out = transform64.matrix @ x_in
    for n in (1, 2):
        left = 0.5 * (x_out[2 * n - 2] ** 2 + x_out[2 * n - 1] ** 2)
        right = 0.5 * (x_out[2 * LAM + 2 * n - 2] ** 2 + x_out[2 * LAM + 2 * n - 1] ** 2)
        assert abs((left + right) / 0.5 - analytic[n]) < 1e-9

    total = analytic[1] + analytic[2]
    assert abs(sum(r.outputs["ratio"] for r in records) - total) < 1e-9
    assert 1.85 < total < 1.95  # almost twofold increase from two modes alone
    _report("coherent phi=0 ratios: 128/(9 pi^2), 1024/(225 pi^2), sum ~1.90 (1e-9)")


def test_criterion_phase_averaged_gain():
    """Random-phase coherent input: modes 1+2 carry ~114.5% of the initial
    particles (first-moment part), within 0.5 percentage points."""
    records = ex.phase_averaged_coherent(MID, LAM, 1, n_max=2)
    percent = sum(r.outputs["percent"] for r in records)
    assert abs(percent - 114.5) <= 0.5
    for r in records:  # vacuum contribution is reported, not folded in
        assert "vacuum_pair_particles" in r.outputs
    _report(f"phase-averaged gain: modes 1+2 = {percent:.2f}% (114.5 +/- 0.5)")


def test_criterion_thermal_sudden_death():
    """Lowest-pair entanglement of a thermal input dies between nbar = 0.1
    and 0.3; crossing located by bisection to 1e-3 in under 10 s."""
    start = time.perf_counter()

    def entanglement(nbar):
        block = gaussian.squeezed_thermal_block(nbar, 0.0, 0.0)
        return ex.pair_negativity_single_mode(MID, LAM, block, 1, 1, 1)

    lo, hi = 0.0, 1.0
    assert entanglement(lo) > 0.0
    assert entanglement(hi) == 0.0
    while hi - lo > 1e-3:
        mid = 0.5 * (lo + hi)
        if entanglement(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    crossing = 0.5 * (lo + hi)
    elapsed = time.perf_counter() - start
    assert 0.1 <= crossing <= 0.3, f"crossing at {crossing}"
    assert elapsed < 10.0, f"bisection took {elapsed:.1f}s"
    _report(f"thermal sudden death at nbar = {crossing:.4f} in [0.1, 0.3]")


def test_criterion_coherent_invariance(transform64):
    """Coherent and vacuum inputs give bitwise-identical pair entanglement
    for every low pair: first moments never touch the covariance path."""
    out_vac = gaussian.apply_transform(gaussian.vacuum(2 * LAM), transform64)
    coherent = gaussian.set_coherent(gaussian.vacuum(2 * LAM), 1, 2.2, 0.9)
    out_coh = gaussian.apply_transform(coherent, transform64)
    np.testing.assert_array_equal(out_coh.cov, out_vac.cov)
    for n in range(1, 7):
        for m in range(1, 7):
            e_vac = gaussian.log_negativity(gaussian.reduce(out_vac, (n, LAM + m)))
            e_coh = gaussian.log_negativity(gaussian.reduce(out_coh, (n, LAM + m)))
            assert e_coh == e_vac
    _report("coherent invariance: E_N identical to vacuum for all n, m <= 6")


def test_criterion_squeezing_revival():
    """For nbar in {5, 10, 15} a finite squeezing threshold restores
    entanglement, and thresholds do not decrease with temperature."""
    stars = {}
    for nbar in (5.0, 10.0, 15.0):
        star = ex.squeezing_threshold(MID, LAM, nbar, theta=0.0, s_max=3.0)
        assert star is not None, f"no threshold below s = 3 for nbar = {nbar}"
        block = gaussian.squeezed_thermal_block(nbar, star + 0.05, 0.0)
        assert ex.pair_negativity_single_mode(MID, LAM, block, 1, 1, 1) > 0.0
        stars[nbar] = star
    assert stars[5.0] <= stars[10.0] <= stars[15.0]
    _report(f"squeezing revival thresholds s*: {stars[5.0]:.3f} <= "
            f"{stars[10.0]:.3f} <= {stars[15.0]:.3f}")


def test_criterion_pair_distribution_structure():
    """Entanglement maps at s = 0.75, theta = pi: correlated input boosts the
    lowest pair, stripped input kills it, the vacuum map is symmetric, and
    the correlated map's asymmetry mirrors under an angle flip."""
    vac = ex.entanglement_distribution(MID, LAM, "vacuum", 6)
    tms = ex.entanglement_distribution(MID, LAM, "tms", 6, s=0.75, theta=PI)
    stripped = ex.entanglement_distribution(MID, LAM, "stripped", 6, s=0.75, theta=PI)

    assert tms.values[0, 0] > vac.values[0, 0]
    assert stripped.values[0, 0] <= 1e-10
    assert np.abs(vac.values - vac.values.T).max() <= 1e-10
    assert abs(tms.values[0, 1] - tms.values[1, 0]) > 0.05  # asymmetric pair map
    mirrored = ex.entanglement_distribution(MID, LAM, "tms", 6, s=0.75, theta=2 * PI)
    assert np.abs(mirrored.values - tms.values.T).max() <= 1e-10
    _report("pair-distribution structure: boost, strip-death, symmetry, mirror")


def test_criterion_gamma_sign_flip(transform64):
    """Dense-pipeline cross block gamma_11 equals sigma_11 with the second
    input-mode summand negated, at a midpoint split, to 1e-12."""
    t = ex.mode_tables(MID, LAM)
    v12_sq = t.v_left[0, 1] ** 2
    flip = np.diag([8 * v12_sq * t.w_left[0] ** 2,
                    8 * v12_sq * t.omega_in[1] ** 2])
    rng = np.random.default_rng(7)
    for _ in range(10):
        nbar, s, theta = rng.uniform(0, 3), rng.uniform(0, 1.5), rng.uniform(0, 2 * PI)
        state = gaussian.set_squeezed_thermal(gaussian.vacuum(2 * LAM), 1, nbar, s, theta)
        out = gaussian.apply_transform(state, transform64)
        sigma11 = out.block(1, 1)
        gamma11 = out.block(1, LAM + 1)
        assert _rel_err(gamma11, sigma11 - flip) < 1e-12
    _report("gamma_11 equals sigma_11 with the second summand negated (1e-12)")


def test_criterion_convergence_suite():
    """Observable increments shrink along the 16-32-64-128 ladder, and so
    does the low-mode symplectic defect of the truncated transform."""
    ladder = (16, 32, 64, 128)
    for observable in ("vacuum_negativity", "coherent_particles", "squeezed_particles"):
        records = ex.convergence_study(MID, ladder, observable)
        deltas = [r.outputs["delta_prev"] for r in records[1:]]
        assert deltas[0] > deltas[1] > deltas[2], f"{observable}: {deltas}"

    defects = [symplectic_defect(build_transform(MID, TruncationConfig(lam)))
               for lam in ladder]
    assert defects[0] > defects[1] > defects[2] > defects[3]
    _report("convergence: observable deltas and symplectic defect both shrink")
