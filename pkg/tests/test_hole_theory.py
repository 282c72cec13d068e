"""Filled-sea ensembles: construction, evolution, audits, and the ledger."""

import numpy as np
import pytest

from diracsea.free_field import ModeIndex, free_energy, free_propagate
from diracsea.hole_theory import (EnergyLedger, OrbitalEnsemble, Packet,
                                  VacuumMode, add_positive_packet,
                                  build_vacuum, energy_ledger,
                                  ensemble_free_energy, evolve_ensemble,
                                  pauli_audit, relative_energy,
                                  vacuum_reference_energy)
from diracsea.lattice import inner_product, make_grid
from diracsea.potential import (ConstantPotential, TabulatedPotential,
                                ZeroPotential, extraction_from_packet)
from diracsea.scenarios import two_mode_packet

TWO_PI = 2.0 * np.pi
INV_SQRT2 = 1.0 / np.sqrt(2.0)


@pytest.fixture
def grid():
    return make_grid(128, TWO_PI)


def gram_offdiag(ens):
    off, _ = pauli_audit(ens)
    return off


class TestBuildVacuum:
    def test_small_sea_energies_and_labels(self, grid):
        sea = build_vacuum(grid, 2)
        assert len(sea) == 4
        assert list(sea.energies) == [-1.0, -1.0, -2.0, -2.0]
        assert sea.labels == (VacuumMode(1), VacuumMode(-1),
                              VacuumMode(2), VacuumMode(-2))
        assert sea.r_max == 2
        assert sea.time == 0.0

    def test_orthonormal(self, grid):
        sea = build_vacuum(grid, 6)
        off, diag = pauli_audit(sea)
        assert off <= 1e-12
        assert diag <= 1e-12

    def test_empty_sea(self, grid):
        sea = build_vacuum(grid, 0)
        assert len(sea) == 0
        assert pauli_audit(sea) == (0.0, 0.0)

    def test_cutoff_beyond_grid_rejected(self, grid):
        with pytest.raises(ValueError):
            build_vacuum(grid, grid.n_z // 2)


class TestVacuumReferenceEnergy:
    def test_matches_direct_sum(self):
        L = TWO_PI
        for r_max in (0, 1, 2, 5, 16):
            total = sum(2 * (-(TWO_PI / L) * k) for k in range(1, r_max + 1))
            assert vacuum_reference_energy(r_max, L) == pytest.approx(
                total, abs=1e-12)

    def test_known_values(self):
        assert vacuum_reference_energy(2, TWO_PI) == pytest.approx(-6.0)
        assert vacuum_reference_energy(1, TWO_PI) == pytest.approx(-2.0)
        assert vacuum_reference_energy(0, TWO_PI) == 0.0

    def test_length_scaling(self):
        assert vacuum_reference_energy(3, 2 * TWO_PI) == pytest.approx(
            0.5 * vacuum_reference_energy(3, TWO_PI))


class TestAddPositivePacket:
    def test_two_mode_packet_field(self, grid):
        sea = build_vacuum(grid, 8)
        ens = add_positive_packet(sea, {1: INV_SQRT2, 2: INV_SQRT2})
        assert len(ens) == 17
        assert isinstance(ens.labels[-1], Packet)
        ref = two_mode_packet(1.0, 2.0, grid)
        diff_u = np.max(np.abs(ens.orbitals[-1].upper - ref.upper))
        diff_l = np.max(np.abs(ens.orbitals[-1].lower - ref.lower))
        assert diff_u <= 1e-14 and diff_l <= 1e-14
        assert ens.energies[-1] == pytest.approx(1.5, abs=1e-12)

    def test_orthonormal_after_addition(self, grid):
        sea = build_vacuum(grid, 8)
        ens = add_positive_packet(sea, {1: INV_SQRT2, 2: INV_SQRT2})
        off, diag = pauli_audit(ens)
        assert off <= 1e-12
        assert diag <= 1e-12

    def test_single_mode_energy(self, grid):
        sea = build_vacuum(grid, 4)
        ens = add_positive_packet(sea, {1: 1.0})
        assert ens.energies[-1] == pytest.approx(1.0, abs=1e-12)

    def test_mode_index_keys(self, grid):
        sea = build_vacuum(grid, 4)
        ens = add_positive_packet(sea, {ModeIndex(1, 2): 1.0})
        assert ens.energies[-1] == pytest.approx(2.0, abs=1e-12)

    def test_unnormalized_rejected(self, grid):
        sea = build_vacuum(grid, 4)
        with pytest.raises(ValueError):
            add_positive_packet(sea, {1: 0.5, 2: 0.5})

    def test_negative_branch_key_rejected(self, grid):
        sea = build_vacuum(grid, 4)
        with pytest.raises(ValueError):
            add_positive_packet(sea, {ModeIndex(-1, 2): 1.0})

    def test_zero_mode_rejected(self, grid):
        sea = build_vacuum(grid, 4)
        with pytest.raises(ValueError):
            add_positive_packet(sea, {0: 1.0})

    def test_beyond_nyquist_rejected(self, grid):
        sea = build_vacuum(grid, 4)
        with pytest.raises(ValueError):
            add_positive_packet(sea, {grid.n_z // 2: 1.0})


class TestEnergies:
    def test_ensemble_free_energy(self, grid):
        sea = build_vacuum(grid, 2)
        assert ensemble_free_energy(sea) == pytest.approx(-6.0, abs=1e-12)
        ens = add_positive_packet(sea, {1: INV_SQRT2, 2: INV_SQRT2})
        assert ensemble_free_energy(ens) == pytest.approx(-4.5, abs=1e-12)
        assert ensemble_free_energy(build_vacuum(grid, 0)) == 0.0

    def test_relative_energy(self, grid):
        sea = build_vacuum(grid, 8)
        assert relative_energy(sea, 8, TWO_PI) == pytest.approx(0.0, abs=1e-12)
        ens = add_positive_packet(sea, {1: INV_SQRT2, 2: INV_SQRT2})
        assert relative_energy(ens, 8, TWO_PI) == pytest.approx(1.5, abs=1e-12)

    def test_relative_energy_mismatch_rejected(self, grid):
        sea = build_vacuum(grid, 8)
        with pytest.raises(ValueError):
            relative_energy(sea, 7, TWO_PI)
        with pytest.raises(ValueError):
            relative_energy(sea, 8, TWO_PI + 0.5)

    def test_stored_energies_match_spectral(self, grid):
        # free_energy recomputed from the fields agrees with the running
        # per-orbital tallies after a modest drive
        sea = build_vacuum(grid, 4)
        ens = add_positive_packet(sea, {1: INV_SQRT2, 2: INV_SQRT2})
        V = extraction_from_packet(1.0, 2.0, 0.5, 1.0, TWO_PI, 1.0)
        out = evolve_ensemble(ens, V, 1.0, 1.0 / 64)
        for orb, stored in zip(out.orbitals, out.energies):
            assert free_energy(orb) == pytest.approx(stored, abs=1e-10)


class TestEvolveEnsemble:
    def test_zero_potential_is_free_streaming(self, grid):
        sea = build_vacuum(grid, 4)
        ens = add_positive_packet(sea, {1: INV_SQRT2, 2: INV_SQRT2})
        out = evolve_ensemble(ens, ZeroPotential(), 0.8, 0.1)
        assert out.time == pytest.approx(0.8)
        assert out.labels == ens.labels
        for before, after in zip(ens.orbitals, out.orbitals):
            ref = free_propagate(before, 0.8)
            assert np.max(np.abs(after.upper - ref.upper)) <= 1e-12
            assert np.max(np.abs(after.lower - ref.lower)) <= 1e-12
        assert np.allclose(out.energies, ens.energies, atol=1e-14)

    def test_vacuum_untouched_by_extraction_drive(self, grid):
        sea = build_vacuum(grid, 8)
        ens = add_positive_packet(sea, {1: INV_SQRT2, 2: INV_SQRT2})
        V = extraction_from_packet(1.0, 2.0, 4.0, 1.0, TWO_PI, TWO_PI)
        out = evolve_ensemble(ens, V, TWO_PI, TWO_PI / 256)
        deps = out.energies - ens.energies
        for d, label in zip(deps, out.labels):
            if isinstance(label, VacuumMode):
                assert abs(d) <= 1e-10

    def test_orthonormality_preserved(self, grid):
        sea = build_vacuum(grid, 8)
        ens = add_positive_packet(sea, {1: INV_SQRT2, 2: INV_SQRT2})
        V = extraction_from_packet(1.0, 2.0, 4.0, 1.0, TWO_PI, TWO_PI)
        out = evolve_ensemble(ens, V, TWO_PI, TWO_PI / 256)
        off, diag = pauli_audit(out)
        assert off <= 1e-10
        assert diag <= 1e-10

    def test_resumed_evolution_uses_shifted_clock(self, grid):
        # evolving to t1 then to t1+t2 equals one pass to t1+t2
        sea = build_vacuum(grid, 2)
        ens = add_positive_packet(sea, {1: INV_SQRT2, 2: INV_SQRT2})
        V = extraction_from_packet(1.0, 2.0, 4.0, 1.0, TWO_PI, TWO_PI)
        dt = TWO_PI / 512
        one_pass = evolve_ensemble(ens, V, 3.0, dt)
        two_pass = evolve_ensemble(evolve_ensemble(ens, V, 1.25, dt),
                                   V, 1.75, dt)
        assert two_pass.time == pytest.approx(one_pass.time)
        for a, b in zip(one_pass.orbitals, two_pass.orbitals):
            assert np.max(np.abs(a.upper - b.upper)) <= 1e-10
            assert np.max(np.abs(a.lower - b.lower)) <= 1e-10
        assert np.allclose(one_pass.energies, two_pass.energies, atol=1e-10)


class TestPauliAudit:
    def test_duplicate_orbital_detected(self, grid):
        sea = build_vacuum(grid, 2)
        dup = OrbitalEnsemble(grid,
                              sea.orbitals + (sea.orbitals[0],),
                              sea.labels + (sea.labels[0],),
                              np.append(sea.energies, sea.energies[0]),
                              sea.r_max, sea.time)
        off, diag = pauli_audit(dup)
        assert off == pytest.approx(1.0, abs=1e-12)
        assert diag <= 1e-12

    def test_single_orbital(self, grid):
        sea = build_vacuum(grid, 2)
        one = OrbitalEnsemble(grid, sea.orbitals[:1], sea.labels[:1],
                              sea.energies[:1], sea.r_max, sea.time)
        off, diag = pauli_audit(one)
        assert off == 0.0
        assert diag <= 1e-12


class TestEnergyLedger:
    def test_zero_potential_ledger_is_null(self, grid):
        sea = build_vacuum(grid, 4)
        ens = add_positive_packet(sea, {1: INV_SQRT2, 2: INV_SQRT2})
        out = evolve_ensemble(ens, ZeroPotential(), 1.0, 0.05)
        led = energy_ledger(ens, out, 4, TWO_PI)
        assert np.max(np.abs(led.delta_eps)) <= 1e-14
        assert led.delta_vacuum == pytest.approx(0.0, abs=1e-13)
        assert led.delta_packet == pytest.approx(0.0, abs=1e-13)
        assert led.E_rel_initial == pytest.approx(1.5, abs=1e-12)
        assert led.E_rel_final == pytest.approx(1.5, abs=1e-12)

    def test_identities_hold_exactly(self, grid):
        sea = build_vacuum(grid, 8)
        ens = add_positive_packet(sea, {1: INV_SQRT2, 2: INV_SQRT2})
        V = extraction_from_packet(1.0, 2.0, 4.0, 1.0, TWO_PI, TWO_PI)
        out = evolve_ensemble(ens, V, TWO_PI, TWO_PI / 256)
        led = energy_ledger(ens, out, 8, TWO_PI)
        assert led.delta_total == led.delta_packet + led.delta_vacuum
        assert led.E_rel_final == led.E_rel_initial + led.delta_total

    def test_extraction_values(self, grid):
        sea = build_vacuum(grid, 8)
        ens = add_positive_packet(sea, {1: INV_SQRT2, 2: INV_SQRT2})
        V = extraction_from_packet(1.0, 2.0, 4.0, 1.0, TWO_PI, TWO_PI)
        out = evolve_ensemble(ens, V, TWO_PI, TWO_PI / 256)
        led = energy_ledger(ens, out, 8, TWO_PI)
        assert led.delta_packet == pytest.approx(-2.0, rel=1e-8)
        assert abs(led.delta_vacuum) <= 1e-8
        assert led.E_rel_final == pytest.approx(-0.5, abs=1e-7)

    def test_label_mismatch_rejected(self, grid):
        sea4 = build_vacuum(grid, 4)
        sea2 = build_vacuum(grid, 2)
        with pytest.raises(ValueError):
            energy_ledger(sea4, sea2, 4, TWO_PI)


class TestVacuumInvariance:
    def test_constant_potential(self, grid):
        sea = build_vacuum(grid, 8)
        V = ConstantPotential(v0=3.0, t_off=2.0)
        out = evolve_ensemble(sea, V, 2.0, 0.05)
        assert np.max(np.abs(out.energies - sea.energies)) <= 1e-8

    def test_random_tabulated_potential(self, grid):
        rng = np.random.default_rng(7)
        ts = np.linspace(0.0, 1.0, 9)
        vals = rng.normal(0.0, 0.5, size=(9, 32))
        V = TabulatedPotential(t_samples=ts, values=vals, length=TWO_PI,
                               t_off=1.0)
        sea = build_vacuum(grid, 8)
        out = evolve_ensemble(sea, V, 1.0, 1.0 / 128)
        assert np.max(np.abs(out.energies - sea.energies)) <= 1e-8
        off, diag = pauli_audit(out)
        assert off <= 1e-10
        assert diag <= 1e-10
