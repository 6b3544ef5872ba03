"""Cumulant estimation, lag assembly and co-array MUSIC.

The vectorized cumulant estimator is checked against a literal
loop-and-pairings oracle, and the full pipeline against both analytic
(closed-form) cumulants and a plain physical-ULA MUSIC reference.
"""

import math
from itertools import product

import numpy as np
import pytest

from coarraylab.coarray import analyze_segment, case_virtual_positions, foeca
from coarraylab.estimator import (
    CumulantBank,
    assemble_foeca,
    match_nearest,
    rmse,
    sample_cumulants,
    ss_music,
)
from coarraylab.geometry import SensorArray, build_fogna, build_ula
from coarraylab.optimizer import optimize
from coarraylab.signalsim import SourceScene, manifold, simulate

CONJ_SLOTS = {
    1: (False, False, False, True),
    2: (False, True, False, True),
    3: (True, True, True, False),
}


def naive_cumulants(x, case):
    """Literal four-index loop over the moment/pairing expansion."""
    slots = CONJ_SLOTS[case]
    n = x.shape[0]
    out = np.zeros((n, n, n, n), dtype=complex)
    for quad in product(range(n), repeat=4):
        args = [x[i].conj() if c else x[i] for i, c in zip(quad, slots)]
        pair = lambda i, j: np.mean(args[i] * args[j])
        out[quad] = (
            np.mean(args[0] * args[1] * args[2] * args[3])
            - pair(0, 1) * pair(2, 3)
            - pair(0, 2) * pair(1, 3)
            - pair(0, 3) * pair(1, 2)
        )
    return out


def analytic_bank(array, angles_deg, power=1.0):
    """Closed-form noiseless cumulant tensors for BPSK sources."""
    cases = []
    for case in (1, 2, 3):
        v = case_virtual_positions(array, case).reshape((array.n_sensors,) * 4)
        tensor = np.zeros(v.shape, dtype=complex)
        for theta in angles_deg:
            tensor += -2 * power**2 * np.exp(1j * np.pi * v * math.sin(math.radians(theta)))
        cases.append(tensor)
    return CumulantBank(cases[0], cases[1], cases[2], n_snapshots=0)


class TestSampleCumulants:
    def test_matches_naive_oracle(self):
        rng = np.random.default_rng(123)
        x = rng.standard_normal((3, 60)) + 1j * rng.standard_normal((3, 60))
        bank = sample_cumulants(x)
        for case in (1, 2, 3):
            assert np.allclose(bank.case(case), naive_cumulants(x, case), atol=1e-12)

    def test_bpsk_kurtosis_is_exact(self):
        # a noiseless BPSK stream gives the -2*power^2 cumulant exactly
        # at any K: every fourth power and second moment is deterministic
        rng = np.random.default_rng(5)
        s = rng.choice([-1.0, 1.0], size=(1, 16))
        bank = sample_cumulants(s)
        for case in (1, 2, 3):
            assert bank.case(case)[0, 0, 0, 0] == pytest.approx(-2.0)

    def test_gaussian_entries_vanish(self):
        rng = np.random.default_rng(7)
        x = (rng.standard_normal((3, 100_000)) + 1j * rng.standard_normal((3, 100_000))) / np.sqrt(2)
        bank = sample_cumulants(x)
        for case in (1, 2, 3):
            assert np.max(np.abs(bank.case(case))) < 0.05

    def test_case3_is_conjugate_of_case1(self):
        arr = build_ula(3)
        snap = simulate(arr, SourceScene((25.0,), seed=4), 5.0, 2000)
        bank = sample_cumulants(snap)
        assert np.array_equal(bank.case3, bank.case1.conj())

    def test_single_source_case2_model(self):
        arr = SensorArray((0, 1))
        snap = simulate(arr, SourceScene((30.0,), seed=6), math.inf, 64)
        bank = sample_cumulants(snap)
        v = case_virtual_positions(arr, 2).reshape(2, 2, 2, 2)
        model = -2 * np.exp(1j * np.pi * v * 0.5)
        assert np.allclose(bank.case2, model, atol=1e-12)

    def test_rejects_short_input(self):
        with pytest.raises(ValueError):
            sample_cumulants(np.ones((2, 1), dtype=complex))


class TestAssemble:
    def test_counts_match_coarray_multiplicity(self):
        arr = build_fogna((4, 2, 1))
        snap = simulate(arr, SourceScene((10.0,), seed=9), 10.0, 500)
        meas = assemble_foeca(sample_cumulants(snap), arr)
        multiset = foeca(arr)
        assert meas.lc == analyze_segment(multiset).lc
        for lag in range(-meas.lc, meas.lc + 1):
            assert meas.counts[lag + meas.lc] == multiset.multiplicity(lag)

    def test_single_broadside_source_constant(self):
        arr = SensorArray((0, 1, 3))
        snap = simulate(arr, SourceScene((0.0,), seed=10), math.inf, 32)
        meas = assemble_foeca(sample_cumulants(snap), arr)
        assert np.allclose(meas.values, -2.0, atol=1e-12)

    def test_two_sensor_phase_model(self):
        arr = SensorArray((0, 1))
        snap = simulate(arr, SourceScene((30.0,), seed=11), math.inf, 64)
        meas = assemble_foeca(sample_cumulants(snap), arr)
        model = -2 * np.exp(1j * np.pi * meas.lags * 0.5)
        assert np.allclose(meas.values, model, atol=1e-12)

    def test_analytic_bank_reproduces_phases(self):
        arr = SensorArray((0, 1, 2))
        theta = 23.0
        meas = assemble_foeca(analytic_bank(arr, [theta]), arr)
        model = -2 * np.exp(1j * np.pi * meas.lags * math.sin(math.radians(theta)))
        assert np.max(np.abs(meas.values - model)) < 1e-10

    def test_conjugate_symmetry_enforced(self):
        arr = build_fogna((4, 2, 1))
        snap = simulate(arr, SourceScene((-15.0, 40.0), seed=12), 0.0, 2000)
        meas = assemble_foeca(sample_cumulants(snap), arr)
        assert np.allclose(meas.values, meas.values[::-1].conj())


class TestSsMusic:
    def test_single_source_on_grid(self):
        arr = SensorArray((0, 1, 2, 5, 8))
        meas = assemble_foeca(analytic_bank(arr, [10.0]), arr)
        est = ss_music(meas, 1, grid_step_deg=0.05)
        assert est.angles_deg[0] == pytest.approx(10.0, abs=1e-6)
        assert est.rank_ok

    def test_orientation_not_mirrored(self):
        arr = SensorArray((0, 1, 2))
        meas = assemble_foeca(analytic_bank(arr, [20.0]), arr)
        est = ss_music(meas, 1)
        assert est.angles_deg[0] == pytest.approx(20.0, abs=1e-3)

    def test_rank_flag_degenerate(self):
        arr = SensorArray((0, 1, 2, 5, 8))
        meas = assemble_foeca(analytic_bank(arr, [10.0]), arr)
        est = ss_music(meas, 2)
        assert not est.rank_ok

    def test_capacity_check(self):
        arr = SensorArray((0, 1))
        meas = assemble_foeca(analytic_bank(arr, [0.0]), arr)
        with pytest.raises(ValueError):
            ss_music(meas, meas.lc + 1)

    def test_two_close_sources_match_physical_ula(self):
        # dual route: the 7-sensor design's virtual subarray has 79
        # elements, so classical MUSIC on a real 79-sensor ULA with the
        # same sources is an independent reference
        truths = (-30.0, 30.0)
        arr = build_fogna(optimize(7).best_params)
        snap = simulate(arr, SourceScene(truths, seed=21), 10.0, 10_000)
        meas = assemble_foeca(sample_cumulants(snap), arr)
        est = ss_music(meas, 2, subarray_len=79)
        assert np.allclose(est.angles_deg, truths, atol=0.5)

        ula = build_ula(79)
        snap_u = simulate(ula, SourceScene(truths, seed=21), 10.0, 10_000)
        x = snap_u.data
        r = x @ x.conj().T / x.shape[1]
        eigvals, eigvecs = np.linalg.eigh(r)
        noise = eigvecs[:, :-2]
        grid = np.arange(-89.95, 90.0, 0.05)
        steering = np.exp(1j * np.pi * np.arange(79)[:, None] * np.sin(np.deg2rad(grid)))
        spec = 1.0 / np.sum(np.abs(noise.conj().T @ steering) ** 2, axis=0)
        peaks = np.argsort(spec)[::-1]
        ref = sorted(grid[peaks[:2]])
        assert np.allclose(est.angles_deg, ref, atol=0.2)


class TestRmse:
    def test_exact_estimates(self):
        assert rmse([([1.0, 2.0], [1.0, 2.0])]) == 0.0

    def test_single_degree_error(self):
        assert rmse([([1.0], [0.0])]) == pytest.approx(1.0)

    def test_two_trials(self):
        assert rmse([([0.0], [0.0]), ([2.0], [0.0])]) == pytest.approx(math.sqrt(2.0))

    def test_matching_is_nearest(self):
        errors = match_nearest([9.0, 1.1], [1.0, 10.0])
        assert errors == pytest.approx([-0.1, 1.0])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            rmse([])

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            rmse([([1.0], [1.0, 2.0])])
