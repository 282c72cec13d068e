"""End-to-end extraction scenario: predictions, runs, sweeps, threshold."""

import dataclasses

import numpy as np
import pytest

from diracsea.free_field import free_energy
from diracsea.lattice import make_grid, norm
from diracsea.potential import TravelingWavePotential, extraction_from_packet
from diracsea.scenarios import (Check, ExtractionParams, ScenarioReport,
                                predicted_delta_packet,
                                predicted_packet_current, run_extraction,
                                sweep_g, sweep_slope, threshold_g,
                                two_mode_packet)

TWO_PI = 2.0 * np.pi


@pytest.fixture
def grid():
    return make_grid(128, TWO_PI)


class TestTwoModePacket:
    def test_energy(self, grid):
        f = two_mode_packet(1.0, 2.0, grid)
        assert free_energy(f) == pytest.approx(1.5, abs=1e-12)

    def test_normalized(self, grid):
        f = two_mode_packet(1.0, 2.0, grid)
        assert norm(f) == pytest.approx(1.0, abs=1e-12)

    def test_current_matches_prediction_later(self, grid):
        from diracsea.free_field import free_propagate
        from diracsea.observables import current_density
        f = free_propagate(two_mode_packet(1.0, 2.0, grid), 0.7)
        J = current_density(f, q=1.0)
        expected = predicted_packet_current(1.0, 2.0, 1.0, TWO_PI,
                                            grid.z, 0.7)
        assert np.max(np.abs(J - expected)) <= 1e-12

    def test_invalid_momenta_rejected(self, grid):
        with pytest.raises(ValueError):
            two_mode_packet(1.0, 1.0, grid)
        with pytest.raises(ValueError):
            two_mode_packet(-1.0, 2.0, grid)
        with pytest.raises(ValueError):
            two_mode_packet(1.0, 2.5, grid)


class TestPredictions:
    def test_current_special_points(self):
        q, L = 1.5, TWO_PI
        # on the crest z = t the two modes interfere constructively
        assert predicted_packet_current(1.0, 2.0, q, L, 0.3, 0.3) == \
            pytest.approx(2.0 * q / L, abs=1e-14)
        # half a beat away they cancel to the single-mode background
        assert predicted_packet_current(1.0, 2.0, q, L, 0.3 + np.pi, 0.3) == \
            pytest.approx(0.0, abs=1e-14)

    def test_delta_packet_closed_form(self):
        assert predicted_delta_packet(ExtractionParams(g=4.0)) == \
            pytest.approx(-2.0, abs=1e-14)
        assert predicted_delta_packet(ExtractionParams(g=0.0)) == 0.0
        # linear in g
        a = predicted_delta_packet(ExtractionParams(g=3.0))
        b = predicted_delta_packet(ExtractionParams(g=6.0))
        assert b == pytest.approx(2.0 * a, rel=1e-14)

    def test_delta_packet_against_dense_quadrature(self):
        # work integral W = -int V dJ/dz dz dt with the analytic current
        p, pp, g, q, L, t_f = 1.0, 2.0, 4.0, 1.0, TWO_PI, TWO_PI
        dp = pp - p
        V = extraction_from_packet(p, pp, g, q, L, t_f)
        n = 2048
        hz, ht = L / n, t_f / n
        z = -L / 2 + (np.arange(n) + 0.5) * hz
        total = 0.0
        for k in range(n):
            t = (k + 0.5) * ht
            dJdz = -(q / L) * dp * np.sin(dp * (z - t))
            total += float(np.sum(V.evaluate(z, t) * dJdz)) * hz * ht
        assert predicted_delta_packet(
            ExtractionParams(p=p, p_prime=pp, g=g, q=q, length=L, t_f=t_f)
        ) == pytest.approx(total, abs=1e-10)

    def test_threshold(self):
        assert threshold_g(ExtractionParams()) == pytest.approx(3.0, rel=1e-14)
        # doubling the drive duration halves the threshold
        assert threshold_g(ExtractionParams(t_f=2 * TWO_PI)) == \
            pytest.approx(1.5, rel=1e-14)

    def test_relative_energy_vanishes_at_threshold(self):
        g_star = threshold_g(ExtractionParams())
        initial = 3.0 / 2.0
        assert initial + predicted_delta_packet(
            ExtractionParams(g=g_star)) == pytest.approx(0.0, abs=1e-12)


class TestExtractionParams:
    def test_defaults(self):
        params = ExtractionParams()
        assert params.delta_p == pytest.approx(1.0)
        assert params.dt == pytest.approx(TWO_PI / 256)

    def test_validation(self):
        with pytest.raises(ValueError):
            ExtractionParams(p=2.0, p_prime=2.0)
        with pytest.raises(ValueError):
            ExtractionParams(p=-1.0)
        with pytest.raises(ValueError):
            ExtractionParams(g=-0.1)
        with pytest.raises(ValueError):
            ExtractionParams(n_z=7)
        with pytest.raises(ValueError):
            ExtractionParams(r_max=64)
        with pytest.raises(ValueError):
            ExtractionParams(p=0.5)
        with pytest.raises(ValueError):
            ExtractionParams(t_f=0.0)
        with pytest.raises(ValueError):
            ExtractionParams(dt=-0.1)


class TestRunExtraction:
    def test_base_case_extracts(self):
        report = run_extraction(ExtractionParams())
        assert report.ok
        assert report.measured_delta_packet == pytest.approx(-2.0, rel=1e-8)
        assert report.predicted_delta_packet == pytest.approx(-2.0, rel=1e-12)
        assert report.E_rel_final == pytest.approx(-0.5, abs=1e-7)
        assert report.threshold_g == pytest.approx(3.0, rel=1e-12)
        assert report.max_abs_potential == pytest.approx(4.0 / TWO_PI,
                                                         rel=1e-12)
        assert max(report.pauli_after) <= 1e-10

    def test_weak_drive_stays_positive(self):
        report = run_extraction(ExtractionParams(g=1.0))
        assert report.ok
        assert report.E_rel_final == pytest.approx(1.0, abs=1e-7)

    def test_report_checks(self):
        report = run_extraction(ExtractionParams())
        names = {c.name for c in report.checks}
        assert names == {"delta_vacuum_zero", "packet_matches_prediction",
                         "pauli_before", "pauli_after"}
        assert tuple(report.failed_checks()) == ()

    def test_threshold_bracketing(self):
        below = run_extraction(ExtractionParams(g=2.9))
        above = run_extraction(ExtractionParams(g=3.1))
        assert below.E_rel_final > 0.0
        assert above.E_rel_final < 0.0
        assert below.E_rel_final == pytest.approx(0.05, abs=1e-7)
        assert above.E_rel_final == pytest.approx(-0.05, abs=1e-7)


class TestSweep:
    def test_doubling_g_doubles_extraction(self):
        params = ExtractionParams()
        reports = sweep_g(params, [1.0, 2.0, 4.0, 8.0])
        measured = [r.ledger.delta_packet for r in reports]
        expected = [-0.5, -1.0, -2.0, -4.0]
        for m, e in zip(measured, expected):
            assert m == pytest.approx(e, rel=1e-8)

    def test_slope_and_intercept(self):
        reports = sweep_g(ExtractionParams(), [1.0, 2.0, 4.0, 8.0])
        slope, intercept = sweep_slope(reports)
        assert slope == pytest.approx(-0.5, rel=1e-6)
        assert abs(intercept) <= 1e-8

    def test_monotone_in_g(self):
        reports = sweep_g(ExtractionParams(), [1.0, 2.0, 4.0])
        deltas = [r.ledger.delta_packet for r in reports]
        assert deltas[0] > deltas[1] > deltas[2]

    def test_empty_sweep_rejected(self):
        with pytest.raises(ValueError):
            sweep_g(ExtractionParams(), [])

    def test_slope_needs_two_points(self):
        reports = sweep_g(ExtractionParams(), [1.0])
        with pytest.raises(ValueError):
            sweep_slope(reports)


class TestCheckAndReport:
    def test_check_passed(self):
        assert Check("x", 0.5, 1.0).passed
        assert Check("x", 1.0, 1.0).passed
        assert not Check("x", 1.5, 1.0).passed

    def test_zero_drive_report(self):
        report = run_extraction(ExtractionParams(g=0.0))
        assert report.ok
        assert report.measured_delta_packet == pytest.approx(0.0, abs=1e-12)
        assert report.max_abs_potential == 0.0
        assert report.E_rel_final == pytest.approx(1.5, abs=1e-10)
