import numpy as np
import pytest

from swapgain.entfrac import (
    BellLabel,
    FamilyParams,
    bell_state,
    make_rho_ab,
    make_rho_bc,
    singlet_fraction_magic,
)
from swapgain.qcore import (
    I2,
    I4,
    partial_trace,
    partial_transpose,
    projector,
    tensor_product,
    validate_density,
)
from swapgain.swap import (
    CORRECTION_TABLE,
    bell_diagonal_nogo_check,
    canonical_correction,
    deterministic_swap,
    phi_branch_closed,
    psi_branch_closed,
    swap_general,
)

from helpers import random_density

rng = np.random.default_rng(5501)

P_GRID = np.linspace(0.1, 1.0, 10)
A_GRID = np.linspace(0.05, 0.95, 19)


def family_n(p, a):
    return 2 * p * p * a * (1 - a) + 2 * p * (1 - p) * a


def psi_f_expected(p, a):
    return max(2 * p * p * a * (1 - a), p * (1 - p) * a) / family_n(p, a)


def phi_f_expected(p, a):
    return max((1 - 2 * p + 2 * p * p) / 2, (1 - a) * (1 - p) * p) / (1 - family_n(p, a))


def averaged_matrix_low_a(p, a):
    # deterministic-swap average matrix in the region where only the Psi
    # branches are kept
    return np.array(
        [
            [-2 * a * (-1 + p) * p, 0, 0, 0],
            [0, 1 + a * (-2 + p) * p + a**2 * p**2, a * (-1 + a) * p**2, 0],
            [0, a * (-1 + a) * p**2, -a * (-1 + a) * p**2, 0],
            [0, 0, 0, 0],
        ],
        dtype=complex,
    )


def averaged_matrix_mid_a(p, a):
    return np.array(
        [
            [-(1 + a) * (-1 + p) * p, 0, 0, 0],
            [0, 1 - 2 * p + (1 + a) * p**2, 2 * a * (-1 + a) * p**2, 0],
            [0, 2 * a * (-1 + a) * p**2, -(-1 + a) * p**2, 0],
            [0, 0, 0, (-1 + a) * (-1 + p) * p],
        ],
        dtype=complex,
    )


def averaged_matrix_high_a(p, a):
    return np.array(
        [
            [(-1 + a) * (-1 + p) * p, 0, 0, 0],
            [0, 1 + 2 * (-1 + a) * p - (-1 + a**2) * p**2, a * (-1 + a) * p**2, 0],
            [0, a * (-1 + a) * p**2, (-1 + a) ** 2 * p**2, 0],
            [0, 0, 0, (-1 + a) * (-1 + p) * p],
        ],
        dtype=complex,
    )


class TestSwapGeneral:
    def test_perfect_resources(self):
        phi = projector(bell_state(BellLabel.PHI_PLUS))
        ensemble = swap_general(phi, phi)
        for branch in ensemble.branches:
            assert branch.probability == pytest.approx(0.25, abs=1e-12)
            assert branch.singlet_fraction == pytest.approx(1.0, abs=1e-10)

    def test_psi_outcome_probability_at_reference(self):
        q = FamilyParams(0.75, 0.5)
        ensemble = swap_general(make_rho_ab(q), make_rho_bc(q))
        p_psi = (
            ensemble.branch(BellLabel.PSI_PLUS).probability
            + ensemble.branch(BellLabel.PSI_MINUS).probability
        )
        assert p_psi == pytest.approx(0.46875, abs=1e-12)

    def test_noise_in_noise_out(self):
        ensemble = swap_general(I4 / 4, I4 / 4)
        for branch in ensemble.branches:
            assert branch.probability == pytest.approx(0.25, abs=1e-12)
            np.testing.assert_allclose(branch.state, I4 / 4, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            swap_general(np.eye(2) / 2, I4 / 4)

    def test_zero_probability_branches_flagged(self):
        vacuum = projector([1, 0, 0, 0])
        ensemble = swap_general(vacuum, vacuum)
        for label in (BellLabel.PSI_PLUS, BellLabel.PSI_MINUS):
            branch = ensemble.branch(label)
            assert not branch.usable
            assert branch.probability == 0.0
        assert sum(b.probability for b in ensemble.branches) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_probabilities_and_unconditional_state(self):
        for _ in range(20):
            rho_ab = random_density(rng, 4)
            rho_bc = random_density(rng, 4)
            ensemble = swap_general(rho_ab, rho_bc)
            total = sum(b.probability for b in ensemble.branches)
            assert total == pytest.approx(1.0, abs=1e-10)
            joint = tensor_product(rho_ab, rho_bc)
            projected = np.zeros((16, 16), dtype=complex)
            for label in BellLabel:
                proj = tensor_product(
                    I2, tensor_product(projector(bell_state(label)), I2)
                )
                projected += proj @ joint @ proj
            unconditional = partial_trace(projected, (2, 2, 2, 2), {0, 3})
            np.testing.assert_allclose(
                ensemble.average_state, unconditional, atol=1e-10
            )


class TestClosedForms:
    def test_psi_branch_reference_values(self):
        branch = psi_branch_closed(FamilyParams(0.75, 0.5))
        assert branch.probability == pytest.approx(0.46875, abs=1e-12)
        assert branch.singlet_fraction == pytest.approx(0.6, abs=1e-12)

    def test_psi_branch_second_point(self):
        branch = psi_branch_closed(FamilyParams(0.75, 0.2))
        assert branch.singlet_fraction == pytest.approx(0.18 / 0.255, abs=1e-12)

    def test_psi_branch_crosses_half_at_two_thirds(self):
        below = psi_branch_closed(FamilyParams(0.75, 2 / 3 - 1e-6)).singlet_fraction
        above = psi_branch_closed(FamilyParams(0.75, 2 / 3 + 1e-6)).singlet_fraction
        assert below > 0.5 > above

    def test_phi_branch_reference_values(self):
        branch = phi_branch_closed(FamilyParams(0.75, 0.5))
        assert branch.probability == pytest.approx(0.53125, abs=1e-12)
        assert branch.singlet_fraction == pytest.approx(10 / 17, abs=1e-12)

    def test_phi_branch_below_one_third_sub_half_and_separable(self):
        for a in (0.05, 0.15, 0.25, 0.33):
            branch = phi_branch_closed(FamilyParams(0.75, a))
            assert branch.singlet_fraction < 0.5
            pt_eigs = np.linalg.eigvalsh(partial_transpose(branch.state, (2, 2), 1))
            assert pt_eigs.min() >= -1e-10

    def test_phi_state_normalization_and_fraction(self):
        for p in P_GRID:
            for a in A_GRID:
                branch = phi_branch_closed(FamilyParams(p, a))
                assert branch.state.trace() == pytest.approx(1.0, abs=1e-12)
                assert singlet_fraction_magic(branch.state) == pytest.approx(
                    branch.singlet_fraction, abs=1e-10
                )

    def test_closed_forms_match_first_principles_on_grid(self):
        for p in P_GRID:
            for a in A_GRID:
                q = FamilyParams(p, a)
                ensemble = swap_general(make_rho_ab(q), make_rho_bc(q))
                psi = psi_branch_closed(q)
                phi = phi_branch_closed(q)
                for label, closed in (
                    (BellLabel.PSI_PLUS, psi),
                    (BellLabel.PSI_MINUS, psi),
                    (BellLabel.PHI_PLUS, phi),
                    (BellLabel.PHI_MINUS, phi),
                ):
                    branch = ensemble.branch(label)
                    assert branch.probability == pytest.approx(
                        closed.probability / 2, abs=1e-10
                    )
                    assert branch.singlet_fraction == pytest.approx(
                        closed.singlet_fraction, abs=1e-10
                    )


class TestCanonicalCorrection:
    def test_psi_minus_support(self):
        q = FamilyParams(0.75, 0.5)
        ensemble = swap_general(make_rho_ab(q), make_rho_bc(q))
        corrected = canonical_correction(ensemble.branch(BellLabel.PSI_MINUS)).state
        support = np.column_stack([bell_state(BellLabel.PSI_MINUS), [1, 0, 0, 0]])
        residual = corrected - support @ (support.conj().T @ corrected @ support) @ support.conj().T
        assert np.abs(residual).max() < 1e-12

    def test_family_branches_match_closed_forms_entrywise(self):
        q = FamilyParams(0.6, 0.3)
        ensemble = swap_general(make_rho_ab(q), make_rho_bc(q))
        psi = psi_branch_closed(q)
        phi = phi_branch_closed(q)
        for label, closed in (
            (BellLabel.PSI_PLUS, psi),
            (BellLabel.PSI_MINUS, psi),
            (BellLabel.PHI_PLUS, phi),
            (BellLabel.PHI_MINUS, phi),
        ):
            corrected = canonical_correction(ensemble.branch(label)).state
            np.testing.assert_allclose(corrected, closed.state, atol=1e-10)

    def test_preserves_singlet_fraction(self):
        count = 0
        while count < 200:
            ensemble = swap_general(random_density(rng, 4), random_density(rng, 4))
            for branch in ensemble.branches:
                if not branch.usable:
                    continue
                corrected = canonical_correction(branch).state
                assert singlet_fraction_magic(corrected) == pytest.approx(
                    branch.singlet_fraction, abs=1e-12
                )
                count += 1

    def test_phi_correction_lands_on_psi_minus(self):
        q = FamilyParams(0.75, 0.5)
        ensemble = swap_general(make_rho_ab(q), make_rho_bc(q))
        corrected = canonical_correction(ensemble.branch(BellLabel.PHI_PLUS)).state
        psi_minus = bell_state(BellLabel.PSI_MINUS)
        assert np.real(psi_minus.conj() @ corrected @ psi_minus) == pytest.approx(
            10 / 17, abs=1e-12
        )

    def test_correction_table_shape(self):
        for label, (u_a, u_c) in CORRECTION_TABLE.items():
            np.testing.assert_allclose(u_a, I2)
            np.testing.assert_allclose(u_c @ u_c.conj().T, I2, atol=1e-15)
        np.testing.assert_allclose(CORRECTION_TABLE[BellLabel.PSI_MINUS][1], I2)


class TestDeterministicSwap:
    @pytest.mark.parametrize(
        "a,expected",
        [(0.5, 0.59375), (0.2, 0.5525), (0.8, 0.5525)],
    )
    def test_average_fraction_by_region(self, a, expected):
        result = deterministic_swap(FamilyParams(0.75, a))
        assert result.singlet_fraction == pytest.approx(expected, abs=1e-12)

    def test_reference_point_cross_check(self):
        # N*F_psi + (1-N)*F_phi at (0.75, 0.5)
        assert 0.46875 * 0.6 + 0.53125 * (10 / 17) == pytest.approx(0.59375, abs=1e-15)

    @pytest.mark.parametrize("a", [0.1, 0.2, 0.3333])
    def test_low_region_matrix(self, a):
        result = deterministic_swap(FamilyParams(0.75, a))
        np.testing.assert_allclose(result.state, averaged_matrix_low_a(0.75, a), atol=1e-10)
        expected_f = 0.5 - a**2 * 0.75**2 + a * 0.75 * (-1 + 2 * 0.75)
        assert result.singlet_fraction == pytest.approx(expected_f, abs=1e-12)

    @pytest.mark.parametrize("a", [0.35, 0.5, 0.65])
    def test_mid_region_matrix(self, a):
        p = 0.75
        result = deterministic_swap(FamilyParams(p, a))
        np.testing.assert_allclose(result.state, averaged_matrix_mid_a(p, a), atol=1e-10)
        expected_f = 0.5 - p + (1 + 2 * a - 2 * a**2) * p**2
        assert result.singlet_fraction == pytest.approx(expected_f, abs=1e-12)

    @pytest.mark.parametrize("a", [0.667, 0.8, 0.9])
    def test_high_region_matrix(self, a):
        p = 0.75
        result = deterministic_swap(FamilyParams(p, a))
        np.testing.assert_allclose(result.state, averaged_matrix_high_a(p, a), atol=1e-10)
        expected_f = 0.5 + (-1 + a) * p - (-1 + a**2) * p**2
        assert result.singlet_fraction == pytest.approx(expected_f, abs=1e-12)

    def test_average_at_least_half_on_grid(self):
        for a in A_GRID:
            result = deterministic_swap(FamilyParams(0.75, a))
            assert result.singlet_fraction >= 0.5 - 1e-12
            validate_density(result.state)

    def test_general_p_regions_follow_branch_conditions(self):
        # regions come from F > 1/2 per branch, not from hard-coded 1/3, 2/3
        for p in (0.4, 0.6, 0.9):
            for a in (0.05, 0.3, 0.5, 0.7, 0.95):
                q = FamilyParams(p, a)
                psi, phi = psi_branch_closed(q), phi_branch_closed(q)
                expected = psi.probability * max(
                    psi.singlet_fraction, 0.5
                ) + phi.probability * max(phi.singlet_fraction, 0.5)
                assert deterministic_swap(q).singlet_fraction == pytest.approx(
                    expected, abs=1e-12
                )


class TestBellDiagonalNoGo:
    def test_werner_inputs(self):
        # Werner state with singlet weight 0.8, uniform on the rest
        weights = (0.2 / 3, 0.8, 0.2 / 3, 0.2 / 3)
        max_branch, (f_ab, f_bc) = bell_diagonal_nogo_check(weights, weights)
        assert f_ab == pytest.approx(0.8, abs=1e-12)
        assert max_branch < 0.8

    def test_pure_singlet_edge(self):
        weights = (0.0, 1.0, 0.0, 0.0)
        max_branch, (f_ab, f_bc) = bell_diagonal_nogo_check(weights, weights)
        assert max_branch == pytest.approx(1.0, abs=1e-10)
        assert f_ab == pytest.approx(1.0, abs=1e-12)

    def test_two_bell_mixture(self):
        weights = (0.7, 0.3, 0.0, 0.0)
        max_branch, (f_ab, f_bc) = bell_diagonal_nogo_check(weights, weights)
        assert max_branch <= 0.7 + 1e-10
