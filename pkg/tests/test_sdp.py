"""SDP solver, hypothesis-testing entropy, diamond distance."""

import numpy as np
import pytest

import thermocap as tc

from conftest import (
    erasure_channel,
    lp_hypothesis_value,
    random_channel,
    random_density,
    random_hermitian,
)


class TestHermitianBasis:
    @pytest.mark.parametrize("dim", [2, 3, 5])
    def test_orthonormal_and_complete(self, dim):
        basis = tc.hermitian_basis(dim)
        assert len(basis) == dim * dim
        for i, a in enumerate(basis):
            assert np.abs(a - a.conj().T).max() == 0.0
            for j, b in enumerate(basis):
                inner = np.trace(a @ b).real
                assert inner == pytest.approx(1.0 if i == j else 0.0, abs=1e-12)

    def test_expansion_reconstructs(self):
        rng = np.random.default_rng(11)
        h = random_hermitian(rng, 4)
        rebuilt = sum(np.trace(b @ h).real * b for b in tc.hermitian_basis(4))
        assert np.abs(rebuilt - h).max() < 1e-12


class TestSolveSdp:
    def test_min_trace_above_identity(self):
        # min tr X with X - S = 1, S >= 0, i.e. X >= 1: optimum tr = dim
        problem = tc.SdpProblem(
            blocks=(("x", 2), ("s", 2)),
            cost={"x": np.eye(2)},
            eq_rows=tuple(tc.matrix_equality_rows({"x": 1.0, "s": -1.0}, np.eye(2), 2)),
        )
        sol = tc.solve_sdp(problem)
        assert sol.status == "optimal"
        assert sol.primal_value == pytest.approx(2.0, abs=1e-6)
        assert np.linalg.eigvalsh(sol.blocks["x"]).min() >= 1.0 - 1e-6

    def test_matrix_equality_pins_block(self):
        rng = np.random.default_rng(3)
        u, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
        target = (u * [1.0, 2.0, 3.5]) @ u.conj().T
        problem = tc.SdpProblem(
            blocks=(("x", 3),),
            cost={"x": np.eye(3)},
            eq_rows=tuple(tc.matrix_equality_rows({"x": 1.0}, target, 3)),
        )
        sol = tc.solve_sdp(problem)
        assert np.abs(sol.blocks["x"] - target).max() < 1e-5
        assert sol.primal_value == pytest.approx(6.5, abs=1e-6)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_largest_eigenvalue(self, seed):
        rng = np.random.default_rng(seed)
        a = random_hermitian(rng, 4)
        problem = tc.SdpProblem(
            blocks=(("rho", 4),),
            cost={"rho": a},
            eq_rows=(({"rho": np.eye(4)}, 1.0),),
            sense="max",
        )
        sol = tc.solve_sdp(problem)
        assert sol.primal_value == pytest.approx(np.linalg.eigvalsh(a).max(), abs=1e-6)

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_strong_duality_random_instances(self, seed):
        # built to have strictly feasible primal and dual points
        rng = np.random.default_rng(100 + seed)
        dims = [3, 2]
        m = 4
        rows_a = [
            {name: random_hermitian(rng, d) for name, d in zip("xz", dims)}
            for _ in range(m)
        ]
        x0 = {name: random_density(rng, d) + 0.1 * np.eye(d) for name, d in zip("xz", dims)}
        rhs = [
            sum(np.trace(row[name] @ x0[name]).real for name in row) for row in rows_a
        ]
        y0 = rng.normal(size=m)
        cost = {}
        for k, (name, d) in enumerate(zip("xz", dims)):
            s0 = random_density(rng, d) + 0.1 * np.eye(d)
            cost[name] = sum(y0[i] * rows_a[i][name] for i in range(m)) + s0
        problem = tc.SdpProblem(
            blocks=(("x", 3), ("z", 2)),
            cost=cost,
            eq_rows=tuple(zip(rows_a, rhs)),
        )
        sol = tc.solve_sdp(problem, eps=1e-7)
        assert sol.status == "optimal"
        assert abs(sol.primal_value - sol.dual_value) <= 2e-7 * (
            1.0 + abs(sol.primal_value) + abs(sol.dual_value)
        )
        assert sol.primal_residual <= 1e-7
        assert sol.dual_residual <= 1e-7
        for name, d in zip("xz", dims):
            assert np.linalg.eigvalsh(sol.blocks[name]).min() >= -1e-8

    def test_inequality_rows_become_slacks(self):
        # min x subject to x >= 3 on a 1x1 block
        problem = tc.SdpProblem(
            blocks=(("x", 1),),
            cost={"x": np.ones((1, 1))},
            ineq_rows=(({"x": -np.ones((1, 1))}, -3.0),),
        )
        sol = tc.solve_sdp(problem)
        assert sol.primal_value == pytest.approx(3.0, abs=1e-6)
        assert "_slack0" not in sol.blocks

    def test_max_sense(self):
        problem = tc.SdpProblem(
            blocks=(("x", 3), ("s", 3)),
            cost={"x": np.eye(3)},
            eq_rows=tuple(tc.matrix_equality_rows({"x": 1.0, "s": 1.0}, np.eye(3), 3)),
            sense="max",
        )
        sol = tc.solve_sdp(problem)
        assert sol.primal_value == pytest.approx(3.0, abs=1e-6)

    def test_infeasible_trace_detected(self):
        problem = tc.SdpProblem(
            blocks=(("x", 2),),
            cost={"x": np.eye(2)},
            eq_rows=(({"x": np.eye(2)}, -1.0),),
        )
        with pytest.raises(tc.InfeasibleError):
            tc.solve_sdp(problem)

    def test_block_budget(self):
        with pytest.raises(tc.BudgetExceededError):
            tc.solve_sdp(
                tc.SdpProblem(blocks=(("x", 257),), cost={"x": np.eye(257)})
            )

    def test_bad_inputs_rejected(self):
        with pytest.raises(tc.ValidationError):
            tc.solve_sdp(
                tc.SdpProblem(blocks=(("x", 2), ("x", 2)), cost={"x": np.eye(2)})
            )
        with pytest.raises(tc.ValidationError):
            tc.solve_sdp(tc.SdpProblem(blocks=(("x", 2),), cost={"y": np.eye(2)}))
        with pytest.raises(tc.ValidationError):
            tc.solve_sdp(
                tc.SdpProblem(blocks=(("x", 2),), cost={"x": np.array([[0, 1], [0, 0]])})
            )
        with pytest.raises(tc.ValidationError):
            tc.solve_sdp(
                tc.SdpProblem(blocks=(("x", 2),), cost={"x": np.eye(2)}, sense="best")
            )


class TestHypothesisTestingEntropy:
    @pytest.mark.parametrize("eps", [0.01, 0.1, 0.3])
    def test_equal_states(self, eps):
        rho = random_density(np.random.default_rng(7), 3)
        val = tc.hypothesis_testing_entropy(rho, rho, eps)
        assert val == pytest.approx(-np.log(1.0 - eps), abs=1e-6)

    def test_orthogonal_pure_states_infinite(self):
        rho = np.diag([1.0, 0.0]).astype(complex)
        gamma = np.diag([0.0, 1.0]).astype(complex)
        assert tc.hypothesis_testing_entropy(rho, gamma, 0.1) == np.inf

    def test_kernel_capture_threshold(self):
        # gamma kernel carries 0.95 of rho: infinite iff 1 - eps <= 0.95
        rho = np.diag([0.95, 0.05, 0.0]).astype(complex)
        gamma = np.diag([0.0, 0.5, 0.5]).astype(complex)
        assert tc.hypothesis_testing_entropy(rho, gamma, 0.1) == np.inf
        finite = tc.hypothesis_testing_entropy(rho, gamma, 0.01)
        # remaining 0.04 of rho weight costs 0.5 per unit from the support
        assert finite == pytest.approx(-np.log(0.5 * 0.04 / 0.05), abs=1e-6)

    @pytest.mark.parametrize("seed,eps", [(0, 0.1), (1, 0.3), (2, 0.1)])
    def test_commuting_lp_oracle(self, seed, eps):
        rng = np.random.default_rng(40 + seed)
        p = rng.dirichlet(np.ones(4))
        g = rng.dirichlet(np.ones(4))
        val = tc.hypothesis_testing_entropy(np.diag(p), np.diag(g), eps)
        assert val == pytest.approx(-np.log(lp_hypothesis_value(p, g, eps)), abs=1e-6)

    def test_data_processing(self):
        rng = np.random.default_rng(5)
        rho = random_density(rng, 2)
        gamma = random_density(rng, 2) + 0.05 * np.eye(2)
        gamma = gamma / np.trace(gamma).real
        ch = random_channel(rng, 2, 2, n_kraus=2)
        before = tc.hypothesis_testing_entropy(rho, gamma, 0.1)
        after = tc.hypothesis_testing_entropy(ch.apply(rho), ch.apply(gamma), 0.1)
        assert after <= before + 1e-6

    def test_monotone_in_eps(self):
        rng = np.random.default_rng(9)
        rho = random_density(rng, 3)
        gamma = random_density(rng, 3) + 0.02 * np.eye(3)
        gamma = gamma / np.trace(gamma).real
        values = [
            tc.hypothesis_testing_entropy(rho, gamma, e)
            for e in (0.01, 0.05, 0.1, 0.3)
        ]
        for lo, hi in zip(values, values[1:]):
            assert hi >= lo - 1e-7

    def test_domain_errors(self):
        rho = np.eye(2) / 2
        with pytest.raises(tc.ValidationError):
            tc.hypothesis_testing_entropy(rho, rho, 0.0)
        with pytest.raises(tc.ValidationError):
            tc.hypothesis_testing_entropy(rho, rho, 1.0)
        with pytest.raises(tc.DimensionMismatchError):
            tc.hypothesis_testing_entropy(rho, np.eye(3) / 3, 0.1)


def sampled_diamond_lower_bound(ch_a, ch_b, rng, n_samples=60):
    """Trace-norm output difference maximized over sampled referenced inputs.

    Applies (Delta (x) id) to pure states on input (x) reference through the
    Choi difference; any sample is a lower bound on the diamond distance.
    """
    d = ch_a.dim_in
    delta = (ch_a.choi - ch_b.choi).reshape(ch_a.dim_out, d, ch_a.dim_out, d)
    vectors = [
        rng.normal(size=d * d) + 1j * rng.normal(size=d * d) for _ in range(n_samples)
    ]
    vectors.append(np.eye(d).ravel().astype(complex))  # maximally entangled
    best = 0.0
    for v in vectors:
        v = v / np.linalg.norm(v)
        psi4 = np.outer(v, v.conj()).reshape(d, d, d, d)
        out = np.einsum("aibj,ikjl->akbl", delta, psi4).reshape(
            ch_a.dim_out * d, ch_a.dim_out * d
        )
        best = max(best, tc.trace_norm(out))
    return best


class TestDiamondDistance:
    def test_equal_channels_exactly_zero(self):
        ch = erasure_channel(h=np.zeros((2, 2)))
        assert tc.diamond_distance(ch, ch) == 0.0

    def test_identity_vs_phase_flip(self):
        ident = tc.channel_from_kraus([np.eye(2)])
        flip = tc.channel_from_kraus([np.diag([1.0, -1.0])])
        val = tc.diamond_distance(ident, flip)
        assert val == pytest.approx(2.0, abs=1e-6)
        # the sampled bound attains 2 here (already at unreferenced |+>)
        brute = sampled_diamond_lower_bound(ident, flip, np.random.default_rng(0))
        assert brute == pytest.approx(2.0, abs=1e-9)
        assert brute <= val + 1e-6

    def test_symmetry_bit_exact(self):
        rng = np.random.default_rng(21)
        a = random_channel(rng, 2, 2, n_kraus=2)
        b = random_channel(rng, 2, 2, n_kraus=3)
        assert tc.diamond_distance(a, b) == tc.diamond_distance(b, a)

    def test_sampled_lower_bound_random_pair(self):
        rng = np.random.default_rng(33)
        a = random_channel(rng, 2, 2, n_kraus=2)
        b = random_channel(rng, 2, 2, n_kraus=2)
        val = tc.diamond_distance(a, b)
        assert sampled_diamond_lower_bound(a, b, rng) <= val + 1e-6

    def test_choi_trace_norm_lower_bound(self):
        rng = np.random.default_rng(8)
        a = random_channel(rng, 2, 3, n_kraus=2)
        b = random_channel(rng, 2, 3, n_kraus=2)
        val = tc.diamond_distance(a, b)
        assert tc.trace_norm(a.choi - b.choi) / 2.0 <= val + 1e-6

    def test_triangle_inequality(self):
        rng = np.random.default_rng(13)
        a, b, c = (random_channel(rng, 2, 2, n_kraus=2) for _ in range(3))
        dab = tc.diamond_distance(a, b)
        dbc = tc.diamond_distance(b, c)
        dac = tc.diamond_distance(a, c)
        assert dac <= dab + dbc + 2e-6

    def test_dimension_guards(self):
        a = tc.channel_from_kraus([np.eye(2)])
        b = tc.channel_from_kraus([np.eye(3)])
        with pytest.raises(tc.DimensionMismatchError):
            tc.diamond_distance(a, b)
        big = tc.channel_from_kraus([np.eye(17)])
        with pytest.raises(tc.BudgetExceededError):
            tc.diamond_distance(big, big)
