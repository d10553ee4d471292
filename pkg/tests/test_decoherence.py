import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from cavityqed.decoherence import (BathParams, ProbeConfig, _jump_times, calibrate_r2_phase, damped_rabi_probability,
                                   ideal_probe_response, nbar_from_p1, p1_from_nbar, probe_excited_probability,
                                   probe_photon, qnd_trajectory, run_ensemble)
from cavityqed.errors import CalibrationError, ConfigError
from cavityqed.hilbert import RngStream


def generator(nbar, kappa=1.0):
    """Rate matrix of the two-state master equation, columns = from-state."""
    up, down = kappa * nbar, kappa * (1 + nbar)
    return np.array([[-up, down], [up, -down]])


def steady_p1(nbar):
    return (expm(generator(nbar) * 200.0) @ np.array([1.0, 0.0]))[1]


class TestNbar:
    def test_zero(self):
        assert nbar_from_p1(0.0) == 0.0

    def test_five_percent(self):
        nbar = nbar_from_p1(0.05)
        assert nbar == pytest.approx(0.05 / 0.90, rel=1e-15)
        assert steady_p1(nbar) == pytest.approx(0.05, abs=1e-12)

    def test_quarter(self):
        assert nbar_from_p1(0.25) == pytest.approx(0.5)
        assert steady_p1(0.5) == pytest.approx(0.25, abs=1e-12)

    @pytest.mark.parametrize("p1", [1 / 3, 0.5, -0.01])
    def test_out_of_range(self, p1):
        with pytest.raises(ConfigError):
            nbar_from_p1(p1)

    @given(st.floats(0, 0.33))
    def test_round_trip(self, p1):
        assert p1_from_nbar(nbar_from_p1(p1)) == pytest.approx(p1, abs=1e-12)

    def test_bath_validation(self):
        with pytest.raises(ConfigError):
            BathParams(kappa=0.0)
        with pytest.raises(ConfigError):
            BathParams(p1=0.05, nbar=0.2)
        b = BathParams(kappa=2.0, p1=0.25)
        assert (b.birth_rate, b.death_rate) == (1.0, 3.0)

    def test_occupancy_matches_master_equation(self):
        b = BathParams(kappa=3.0, p1=0.1)
        for t in (0.0, 0.05, 0.3, 2.0):
            want = (expm(generator(b.nbar, 3.0) * t) @ np.array([0.0, 1.0]))[1]
            assert b.occupancy(t, 1.0) == pytest.approx(want, abs=1e-12)


IDEAL = ProbeConfig()


class TestTrajectory:
    def test_dead_bath(self):
        rec = qnd_trajectory(BathParams(p1=0.0), IDEAL, 2.0, 0, RngStream(1))
        assert rec.jump_times == []
        assert len(rec.probe_times) == 200
        assert all(o == "g" for _, o in rec.probe_times)

    def test_lossless_cavity(self):
        rec = qnd_trajectory(BathParams(kappa=1e-12, p1=0.05), IDEAL, 5.0, 1, RngStream(2))
        assert rec.jump_times == []
        assert all(o == "e" for _, o in rec.probe_times)

    def test_record_invariants(self):
        rec = qnd_trajectory(BathParams(kappa=20.0, p1=0.2), IDEAL, 3.0, 1, RngStream(3))
        times = [t for t, _ in rec.jump_times]
        assert len(times) > 5
        assert np.all(np.diff(times) > 0) and times[-1] <= 3.0
        events = [e for _, e in rec.jump_times]
        assert events[0] == "death"
        assert all(a != b for a, b in zip(events, events[1:]))
        # ideal probes read the true photon number
        for t, o in rec.probe_times:
            assert (o == "e") == bool(rec.photon_number(t))

    def test_deterministic(self):
        bath = BathParams(kappa=10.0, p1=0.1)
        probe = ProbeConfig(dark_count_prob=0.05, detection_efficiency=0.9)
        a = qnd_trajectory(bath, probe, 2.0, 0, RngStream(99, (4,)))
        b = qnd_trajectory(bath, probe, 2.0, 0, RngStream(99, (4,)))
        assert a == b
        c = qnd_trajectory(bath, probe, 2.0, 0, RngStream(100, (4,)))
        assert a != c

    @pytest.mark.parametrize("n", [2, -1])
    def test_bad_initial(self, n):
        with pytest.raises(ConfigError):
            qnd_trajectory(BathParams(), IDEAL, 1.0, n, RngStream(0))

    def test_bad_duration(self):
        with pytest.raises(ConfigError):
            qnd_trajectory(BathParams(), IDEAL, 0.0, 0, RngStream(0))


class TestProbe:
    def test_truth_table_ideal(self):
        p0, p1 = ideal_probe_response(IDEAL)
        assert p0 == pytest.approx(0, abs=1e-15) and p1 == pytest.approx(1, abs=1e-15)
        rng = RngStream(5)
        assert all(probe_photon(0, IDEAL, rng) == "g" for _ in range(200))
        assert all(probe_photon(1, IDEAL, rng) == "e" for _ in range(200))

    def test_calibrated_phase(self):
        # after R1 and a pi/2 dispersive kick the empty-cavity atom sits at
        # (e^{i pi/2}|e> + |g>)/sqrt(2); nulling e needs phase -pi/2
        assert calibrate_r2_phase(math.pi / 2) == pytest.approx(-math.pi / 2, abs=1e-14)

    def test_parity_meter(self):
        phi = calibrate_r2_phase(math.pi / 2)
        assert probe_excited_probability(2, math.pi / 2, phi) == pytest.approx(0, abs=1e-15)

    def test_efficiency(self):
        probe = ProbeConfig(detection_efficiency=0.8)
        rng = RngStream(8)
        n = 100_000
        hits = sum(probe_photon(1, probe, rng) == "e" for _ in range(n))
        assert abs(hits / n - 0.8) < 3 * math.sqrt(0.8 * 0.2 / n)

    def test_dark_counts(self):
        probe = ProbeConfig(dark_count_prob=0.1)
        rng = RngStream(9)
        n = 50_000
        hits = sum(probe_photon(0, probe, rng) == "e" for _ in range(n))
        assert abs(hits / n - 0.1) < 3 * math.sqrt(0.1 * 0.9 / n)

    def test_uncalibrated(self):
        with pytest.raises(CalibrationError):
            ideal_probe_response(ProbeConfig(r2_phase=0.3))
        with pytest.raises(CalibrationError):
            probe_photon(1, ProbeConfig(r2_phase=0.3), RngStream(0))

    def test_bad_probabilities(self):
        with pytest.raises(ConfigError):
            ProbeConfig(dark_count_prob=1.5)
        with pytest.raises(ConfigError):
            ProbeConfig(probe_interval=0.0)

    def test_photon_out_of_model(self):
        with pytest.raises(ValueError):
            probe_photon(2, IDEAL, RngStream(0))


@pytest.mark.slow
def test_jump_process_matches_master_equation():
    bath = BathParams(kappa=1 / 0.13, p1=0.05)
    checkpoints = np.linspace(0.02, 0.6, 10)
    n_traj = 100_000
    master = RngStream(2024, (1,))
    occupied = np.zeros(checkpoints.size)
    for k in range(n_traj):
        # jump times only; probes are irrelevant for occupancy
        times = _jump_times(bath, 0.6, 1, master.substream(k))
        occupied += (1 + np.searchsorted(times, checkpoints, side="right")) % 2
    freq = occupied / n_traj
    want = bath.p1 + (1 - bath.p1) * np.exp(-bath.kappa * (1 + 2 * bath.nbar) * checkpoints)
    sigma = np.sqrt(want * (1 - want) / n_traj)
    assert np.all(np.abs(freq - want) < 3 * sigma), (freq - want) / sigma


def test_probe_outcomes_do_not_affect_jumps():
    """Birth probability per probe interval, split by the preceding outcome at n=0."""
    bath = BathParams(kappa=5.0, p1=0.2)
    probe = ProbeConfig(dark_count_prob=0.3)
    master = RngStream(7)
    births = {"e": 0, "g": 0}
    trials = {"e": 0, "g": 0}
    for k in range(1500):
        rec = qnd_trajectory(bath, probe, 2.0, 0, master.substream(k))
        jt = np.array([t for t, _ in rec.jump_times])
        for t, outcome in rec.probe_times[:-1]:
            if rec.photon_number(t) != 0:
                continue
            trials[outcome] += 1
            births[outcome] += int(np.any((jt > t) & (jt <= t + probe.probe_interval)))
    p = {o: births[o] / trials[o] for o in "eg"}
    se = math.sqrt(sum(p[o] * (1 - p[o]) / trials[o] for o in "eg"))
    assert trials["e"] > 10_000
    assert abs(p["e"] - p["g"]) < 3 * se


class TestEnsemble:
    def test_small_ensemble_matches_rates(self):
        bath = BathParams(kappa=1 / 0.13, p1=0.05)
        s = run_ensemble(bath, IDEAL, 2.0, 5000, RngStream(11))
        assert abs(s.occupancy - 0.05) < 3 * s.occupancy_stderr
        want = 1 / bath.death_rate
        assert abs(s.dwell_time - want) < 3 * s.dwell_time_stderr
        assert s.mismatches_at_0 == 0 and s.mismatches_at_1 == 0

    def test_reproducible(self):
        bath = BathParams()
        a = run_ensemble(bath, IDEAL, 1.0, 300, RngStream(5))
        b = run_ensemble(bath, IDEAL, 1.0, 300, RngStream(5))
        assert a == b

    def test_dark_count_mismatch_rate(self):
        probe = ProbeConfig(dark_count_prob=0.01)
        s = run_ensemble(BathParams(), probe, 2.0, 500, RngStream(6))
        rate = s.mismatches_at_0 / s.probes_at_0
        assert abs(rate - 0.01) < 3 * math.sqrt(0.01 * 0.99 / s.probes_at_0)


class TestDampedRabi:
    def test_start(self):
        assert damped_rabi_probability(0.0, 3.0, 1.0) == 1.0

    def test_long_time_mixture(self):
        assert damped_rabi_probability(50.0, 3.0, 1.0) == pytest.approx(0.5, abs=1e-10)

    def test_envelope(self):
        Omega, T2 = 2 * math.pi * 94e3, 40e-6
        t = 2 * math.pi * np.arange(30) / Omega
        got = damped_rabi_probability(t, Omega, T2)
        assert np.max(np.abs(got - (0.5 + 0.5 * np.exp(-t / T2)))) < 1e-9

    def test_undamped_limit(self):
        Omega = 1.3
        t = np.linspace(0, 40, 1000)
        got = damped_rabi_probability(t, Omega, 1e18)
        assert np.max(np.abs(got - (1 + np.cos(Omega * t)) / 2)) < 1e-12

    def test_bad_t2(self):
        with pytest.raises(ValueError):
            damped_rabi_probability(1.0, 1.0, 0.0)
