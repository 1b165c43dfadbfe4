import math

import numpy as np
import pytest

import mmlab as M


@pytest.fixture(scope="module")
def osc8_parts(osc8):
    system, pair = osc8
    freq = M.transition_frequencies(system)
    return system, pair, freq


class TestCommutator:
    def test_truncated_oscillator_diagonal(self, osc8_parts):
        _, pair, _ = osc8_parts
        comm = M.commutator(pair.x, pair.p)
        diag = np.diag(comm)
        # trace-zero identity forces the corner entry to -(N-1) i hbar
        assert np.max(np.abs(diag[:7] - 1j)) <= 1e-12
        assert abs(diag[7] - (-7j)) <= 1e-12
        assert abs(np.trace(comm)) <= 1e-9 * 8

    def test_equal_arguments_commute(self, osc8_parts):
        _, pair, _ = osc8_parts
        assert np.all(M.commutator(pair.x, pair.x) == 0)

    def test_trace_identity_random_pairs(self):
        rng = np.random.default_rng(17)
        for _ in range(5):
            a = rng.standard_normal((20, 20)) + 1j * rng.standard_normal((20, 20))
            b = rng.standard_normal((20, 20)) + 1j * rng.standard_normal((20, 20))
            assert abs(np.trace(M.commutator(a, b))) <= 1e-9 * 20

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            M.commutator(np.eye(2), np.eye(3))


class TestHeisenbergSum:
    def test_oscillator_interior(self, osc8_parts):
        _, pair, freq = osc8_parts
        assert M.heisenberg_sum(pair.x, freq, 1.0, 1, 1) == pytest.approx(1.0, abs=1e-12)

    def test_ground_state_negative_indices_vanish(self, osc8_parts):
        _, pair, freq = osc8_parts
        assert M.heisenberg_sum(pair.x, freq, 1.0, 0, 1) == pytest.approx(1.0, abs=1e-12)

    def test_window_violation(self, osc8_parts):
        _, pair, freq = osc8_parts
        with pytest.raises(ValueError):
            M.heisenberg_sum(pair.x, freq, 1.0, 7, 1)
        with pytest.raises(ValueError):
            M.heisenberg_sum(pair.x, freq, 1.0, -1, 1)


class TestImposeHeisenbergReality:
    def test_amplitudes_lose_state_dependence(self, osc8_parts):
        _, pair, _ = osc8_parts
        table = M.to_amplitude_table(pair.x, (1, 5), 1)
        constrained = M.impose_heisenberg_reality(table)
        values = [constrained.entries[(n, 1)] for n in range(1, 6)]
        assert max(abs(v - values[0]) for v in values) <= 1e-12
        # oracle: the projection averages the +1 diagonal together with the
        # conjugated -1 diagonal over the recorded window
        pool = [math.sqrt(n / 2.0) for n in range(1, 6)]
        pool += [math.sqrt((n + 1) / 2.0) for n in range(1, 6)]
        expected = sum(pool) / len(pool)
        assert constrained.entries[(3, 1)].real == pytest.approx(expected, abs=1e-12)
        assert constrained.entries[(3, -1)].real == pytest.approx(expected, abs=1e-12)

    def test_result_satisfies_both_constraints(self, osc8_parts):
        _, pair, _ = osc8_parts
        table = M.to_amplitude_table(pair.x, (0, 7), 1)
        constrained = M.impose_heisenberg_reality(table)
        assert constrained.hermitian_consistent
        assert constrained.heisenberg_real

    def test_state_independence_along_each_diagonal(self, osc8_parts):
        _, pair, _ = osc8_parts
        table = M.to_amplitude_table(pair.x, (0, 7), 1)
        constrained = M.impose_heisenberg_reality(table)
        for band in (1, -1):
            values = [v for (n, a), v in constrained.entries.items() if a == band]
            assert max(abs(v - values[0]) for v in values) <= 1e-12

    def test_fixed_point(self, osc8_parts):
        _, pair, _ = osc8_parts
        table = M.to_amplitude_table(pair.x, (1, 5), 1)
        once = M.impose_heisenberg_reality(table)
        twice = M.impose_heisenberg_reality(once)
        for key, value in once.entries.items():
            assert abs(twice.entries[key] - value) <= 1e-14

    def test_rejects_inconsistent_table(self, osc8_parts):
        _, pair, _ = osc8_parts
        x = np.array(pair.x)
        x[0, 1] += 1e-3  # break hermiticity
        table = M.to_amplitude_table(x, (0, 7), 1)
        assert not table.hermitian_consistent
        with pytest.raises(ValueError):
            M.impose_heisenberg_reality(table)

    def test_constrained_sum_collapses_to_zero(self, osc8_parts):
        _, pair, freq = osc8_parts
        table = M.to_amplitude_table(pair.x, (0, 7), 1)
        constrained = M.impose_heisenberg_reality(table)
        for n in range(1, 7):
            assert abs(M.heisenberg_sum(constrained, freq, 1.0, n, 1)) <= 1e-12


class TestBornJordanAndModifiedSums:
    def test_oscillator_values(self, osc8_parts):
        _, pair, freq = osc8_parts
        for n in range(7):
            assert M.born_jordan_sum(pair.x, freq, 1.0, n, 1) == pytest.approx(1.0, abs=1e-12)
            assert M.modified_sum(pair.x, freq, 1.0, n, 1) == pytest.approx(1.0, abs=1e-12)

    def test_diagonal_matrix_gives_zero(self):
        system = M.SpectralSystem(M.PhysicalConstants(), np.array([0.0, 1.0, 3.0]))
        freq = M.transition_frequencies(system)
        x = np.diag([0.3, -0.2, 1.0]).astype(complex)
        assert M.born_jordan_sum(x, freq, 1.0, 1, 1) == 0.0

    def test_hermitian_equivalence_random(self):
        rng = np.random.default_rng(23)
        x = rng.standard_normal((10, 10)) + 1j * rng.standard_normal((10, 10))
        x = 0.5 * (x + x.conj().T)
        system = M.SpectralSystem(
            M.PhysicalConstants(), np.sort(rng.uniform(0.0, 5.0, size=10))
        )
        freq = M.transition_frequencies(system)
        for n in range(7):
            a = M.born_jordan_sum(x, freq, 1.0, n, 3)
            b = M.modified_sum(x, freq, 1.0, n, 3)
            assert abs(a - b) <= 1e-12

    def test_rephasing_invariance(self, osc8_parts):
        _, pair, freq = osc8_parts
        rng = np.random.default_rng(31)
        base = [M.born_jordan_sum(pair.x, freq, 1.0, n, 1) for n in range(7)]
        for _ in range(25):
            d = np.exp(1j * rng.uniform(0, 2 * math.pi, size=8))
            xr = d[:, None] * np.asarray(pair.x) * d.conj()[None, :]
            for n in range(7):
                assert abs(M.born_jordan_sum(xr, freq, 1.0, n, 1) - base[n]) <= 1e-12


class TestNearestNeighborRewrite:
    def test_lowest_states(self, osc8_parts):
        _, pair, _ = osc8_parts
        assert M.nearest_neighbor_rewrite(pair.x, 1.0, 1.0, 0) == pytest.approx(
            1.0 / math.sqrt(2.0), abs=1e-10
        )
        assert M.nearest_neighbor_rewrite(pair.x, 1.0, 1.0, 1) == pytest.approx(
            math.sqrt(6.0) / 2.0, abs=1e-10
        )

    def test_approaches_hbar_only_slowly(self, osc64):
        _, pair = osc64
        value = M.nearest_neighbor_rewrite(pair.x, 1.0, 1.0, 20)
        expected = 0.5 * (math.sqrt(21.0 * 22.0) - math.sqrt(20.0 * 19.0))
        assert value == pytest.approx(expected, abs=1e-10)
        assert abs(value - 1.0) > 1e-4  # still off hbar at n = 20

    def test_rejects_wide_band_matrices(self, quartic40):
        _, pair = quartic40
        with pytest.raises(ValueError):
            M.nearest_neighbor_rewrite(pair.x, 1.0, 1.0, 0)


class TestCommutatorDiagonalSum:
    def test_matches_commutator(self, osc8_parts):
        _, pair, _ = osc8_parts
        comm = M.commutator(pair.x, pair.p)
        for n in range(7):
            value = M.commutator_diagonal_sum(pair.x, pair.p, n, 1)
            assert abs(value - comm[n, n]) <= 1e-12

    def test_equal_arguments(self, osc8_parts):
        _, pair, _ = osc8_parts
        assert M.commutator_diagonal_sum(pair.x, pair.x, 2, 1) == 0j

    def test_zero_band_limit(self, osc8_parts):
        _, pair, _ = osc8_parts
        assert M.commutator_diagonal_sum(pair.x, pair.p, 2, 0) == 0j


class TestLoopIntegral:
    def test_ground_state_value(self, osc8_parts):
        _, pair, freq = osc8_parts
        value = M.loop_integral_diagonal(pair.x, pair.p, freq, 0, 2 * math.pi)
        assert value == pytest.approx(math.pi, abs=1e-12)

    def test_first_excited_value(self, osc8_parts):
        # direct-sum oracle: T m sum_a w(n, n-a)^2 |X(n, n-a)|^2
        system, pair, freq = osc8_parts
        n = 1
        oracle = 0.0
        for k in range(8):
            oracle += freq[n, k] ** 2 * abs(pair.x[n, k]) ** 2
        oracle *= 2 * math.pi
        value = M.loop_integral_diagonal(pair.x, pair.p, freq, n, 2 * math.pi)
        assert value == pytest.approx(oracle, abs=1e-12)
        assert value == pytest.approx(3 * math.pi, abs=1e-12)

    def test_matches_classical_action_scale(self, osc8_parts):
        # over one period the loop integral reproduces 2 pi E_n / omega
        system, pair, freq = osc8_parts
        for n in range(7):
            value = M.loop_integral_diagonal(pair.x, pair.p, freq, n, 2 * math.pi)
            assert value.real == pytest.approx(2 * math.pi * system.energies[n], rel=1e-12)

    def test_conjugate_form(self, osc8_parts):
        _, pair, freq = osc8_parts
        for n in range(8):
            direct = M.loop_integral_diagonal(pair.x, pair.p, freq, n, 2 * math.pi)
            conj = M.loop_integral_diagonal_conjugate(pair.x, pair.p, freq, n, 2 * math.pi)
            assert abs(conj - direct.conjugate()) <= 1e-12

    def test_invalid_arguments(self, osc8_parts):
        _, pair, freq = osc8_parts
        with pytest.raises(ValueError):
            M.loop_integral_diagonal(pair.x, pair.p, freq, 9, 2 * math.pi)
        with pytest.raises(ValueError):
            M.loop_integral_diagonal(pair.x, pair.p, freq, 0, -1.0)


class TestStateDifference:
    def test_interior_states_give_two_pi_hbar(self, osc8_parts):
        _, pair, _ = osc8_parts
        for n in range(7):
            value = M.loop_integral_state_difference(pair.x, pair.p, n)
            assert value == pytest.approx(2 * math.pi, abs=1e-12)

    def test_real_for_hermitian_input_even_at_the_edge(self, osc8_parts):
        _, pair, _ = osc8_parts
        for n in range(8):
            value = M.loop_integral_state_difference(pair.x, pair.p, n)
            assert abs(value.imag) <= 1e-10 * abs(value)


class TestBornDifference:
    def test_constant_family_vanishes(self):
        term = {(r, c): 2.5 + 0.5j for r in range(6) for c in range(6)}
        for alpha in (-2, -1, 0, 1, 2):
            assert M.born_difference(term, 3, alpha) == 0j

    def test_linear_row_family(self):
        c = 0.7
        term = {(r, col): c * r for r in range(10) for col in range(10)}
        # rule: term(n + alpha, n) - term(n, n - alpha) = c * alpha
        assert M.born_difference(term, 4, 1) == pytest.approx(c)
        assert M.born_difference(term, 4, 3) == pytest.approx(3 * c)

    def test_total_reproduces_commutator_diagonal(self, osc8_parts):
        _, pair, _ = osc8_parts
        term = {
            (r, c): complex(pair.p[r, c] * pair.x[c, r])
            for r in range(8)
            for c in range(8)
        }
        for n in range(1, 7):
            total = sum(M.born_difference(term, n, a) for a in (-1, 0, 1))
            target = M.commutator_diagonal_sum(pair.x, pair.p, n, 1)
            assert abs(total - target) <= 1e-12
            assert total == pytest.approx(1j, abs=1e-12)

    def test_missing_entries_read_as_zero(self):
        assert M.born_difference({}, 0, 1) == 0j


class TestFullReport:
    def test_oscillator_report_values(self, osc64):
        system, pair = osc64
        report = M.full_report(system, pair)
        assert report.window == (0, 62)
        assert report.alpha_max == 1
        for row in report.rows:
            assert abs(row.residual_eq25) <= 1e-10
            assert abs(row.residual_eq14) <= 1e-10
        assert report.rows[0].residual_bj_alternative == pytest.approx(
            1.0 / math.sqrt(2.0) - 1.0, abs=1e-10
        )
        assert report.offdiag_max <= 1e-10
        assert abs(report.trace_commutator) <= 1e-9 * 64
        assert report.edge_diag == pytest.approx(-63j, abs=1e-8)

    def test_single_state_system_rejected(self, constants):
        system, pair = M.build_oscillator(constants, 1)
        with pytest.raises(ValueError):
            M.full_report(system, pair)

    def test_deterministic(self, osc8):
        system, pair = osc8
        first = M.full_report(system, pair)
        second = M.full_report(system, pair)
        assert first == second

    def test_quartic_rows_mark_rewrite_undefined(self, quartic40):
        system, pair = quartic40
        report = M.full_report(system, pair, alpha_max=9)
        assert report.window == (0, 30)
        assert all(math.isnan(row.bj_alternative) for row in report.rows)
        for row in report.rows:
            assert abs(row.residual_eq25) <= 1e-8
            assert abs(row.residual_commutator) <= 1e-8

    def test_rephasing_leaves_commutator_rows(self, osc8):
        system, pair = osc8
        rng = np.random.default_rng(41)
        base = np.diag(M.commutator(pair.x, pair.p))
        base_banded = [M.commutator_diagonal_sum(pair.x, pair.p, n, 1) for n in range(7)]
        for _ in range(10):
            d = np.exp(1j * rng.uniform(0, 2 * math.pi, size=8))
            xr = d[:, None] * np.asarray(pair.x) * d.conj()[None, :]
            pr = d[:, None] * np.asarray(pair.p) * d.conj()[None, :]
            assert np.max(np.abs(np.diag(M.commutator(xr, pr)) - base)) <= 1e-12
            for n in range(7):
                banded = M.commutator_diagonal_sum(xr, pr, n, 1)
                assert abs(banded - base_banded[n]) <= 1e-12
