"""State layer: validation, entropies, Gibbs weights, free energy, partial trace."""

import numpy as np
import pytest
from scipy.linalg import expm

import thermocap as tc

from conftest import random_density, random_hermitian, random_pure

LN2 = np.log(2.0)


class TestMakeDensity:
    def test_maximally_mixed_accepted(self):
        rho = tc.make_density(np.eye(2, dtype=complex) / 2)
        assert np.allclose(rho, np.eye(2) / 2, atol=1e-14)

    def test_pure_state_accepted(self):
        rho = tc.make_density(np.diag([1.0, 0.0]).astype(complex))
        assert np.allclose(rho, np.diag([1, 0]), atol=1e-14)

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(tc.NotPSDError) as exc:
            tc.make_density(np.diag([1.0, -0.2]) / 0.8)
        # margin reports the offending eigenvalue magnitude
        assert exc.value.margin == pytest.approx(0.25, rel=1e-10)

    def test_non_hermitian_rejected(self):
        mat = np.array([[0.5, 0.3], [0.0, 0.5]], dtype=complex)
        with pytest.raises(tc.NotHermitianError):
            tc.make_density(mat)

    def test_wrong_trace_rejected(self):
        with pytest.raises(tc.NotUnitTraceError) as exc:
            tc.make_density(np.eye(2, dtype=complex))
        assert exc.value.margin == pytest.approx(1.0, rel=1e-10)

    def test_tiny_negative_eigenvalue_clipped(self):
        rho = tc.make_density(np.diag([1.0 + 1e-10, -1e-10]).astype(complex))
        ev = np.linalg.eigvalsh(rho)
        assert ev.min() >= 0
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("seed,dim", [(0, 2), (1, 3), (2, 5), (3, 8)])
    def test_random_gram_accepted(self, seed, dim):
        rho = tc.make_density(random_density(np.random.default_rng(seed), dim))
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)


class TestEntropy:
    def test_pure_state_zero(self):
        assert tc.von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0

    def test_maximally_mixed(self):
        assert tc.von_neumann_entropy(np.eye(2) / 2) == pytest.approx(LN2, abs=1e-14)

    def test_three_quarters_one_quarter(self):
        # -(3/4)ln(3/4) - (1/4)ln(1/4), evaluated independently
        assert tc.von_neumann_entropy(np.diag([0.75, 0.25])) == pytest.approx(
            0.5623351446188083, abs=1e-12
        )

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_additive_on_products(self, seed):
        rng = np.random.default_rng(seed)
        rho = random_density(rng, 3)
        sig = random_density(rng, 4)
        joint = tc.von_neumann_entropy(np.kron(rho, sig))
        split = tc.von_neumann_entropy(rho) + tc.von_neumann_entropy(sig)
        assert abs(joint - split) <= 1e-8

    @pytest.mark.parametrize("seed,dim", [(0, 2), (1, 4), (2, 7)])
    def test_range(self, seed, dim):
        s = tc.von_neumann_entropy(random_density(np.random.default_rng(seed), dim))
        assert 0.0 <= s <= np.log(dim) + 1e-12

    def test_basis_invariance(self):
        rng = np.random.default_rng(7)
        rho = random_density(rng, 4)
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        u, _ = np.linalg.qr(g)
        assert tc.von_neumann_entropy(u @ rho @ u.conj().T) == pytest.approx(
            tc.von_neumann_entropy(rho), abs=1e-10
        )


class TestRelativeEntropy:
    def test_self_is_zero(self):
        rho = random_density(np.random.default_rng(0), 3)
        assert tc.relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-10)

    def test_disjoint_support_infinite(self):
        assert tc.relative_entropy(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == np.inf

    def test_unnormalized_reference(self):
        # D(1/2 || identity) = -ln 2: second argument has trace 2
        assert tc.relative_entropy(np.eye(2) / 2, np.eye(2)) == pytest.approx(
            -LN2, abs=1e-12
        )

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4, 5, 6, 7])
    def test_nonnegative_for_subnormalized_reference(self, seed):
        rng = np.random.default_rng(seed)
        dim = int(rng.integers(2, 6))
        rho = random_density(rng, dim)
        gam = random_density(rng, dim) * rng.uniform(0.2, 1.0)
        assert tc.relative_entropy(rho, gam) >= 0.0

    def test_zero_iff_equal_normalized(self):
        rng = np.random.default_rng(3)
        rho = random_density(rng, 3)
        sig = random_density(rng, 3)
        assert tc.relative_entropy(rho, sig) > 1e-4

    def test_dimension_mismatch(self):
        with pytest.raises(tc.DimensionMismatchError):
            tc.relative_entropy(np.eye(2) / 2, np.eye(3))


class TestGibbsWeight:
    def test_zero_hamiltonian(self):
        g = tc.gibbs_weight(np.zeros((2, 2)), tc.ThermoContext(beta=3.7))
        assert np.allclose(g, np.eye(2), atol=1e-14)
        assert np.trace(g).real == pytest.approx(2.0)

    def test_diagonal(self):
        g = tc.gibbs_weight(np.diag([0.0, 1.5]), tc.ThermoContext(beta=2.0))
        assert np.allclose(g, np.diag([1.0, np.exp(-3.0)]), atol=1e-14)

    @pytest.mark.parametrize("seed,dim", [(0, 2), (1, 3), (2, 5), (3, 8), (4, 13)])
    def test_matches_scaling_and_squaring(self, seed, dim):
        rng = np.random.default_rng(seed)
        h = random_hermitian(rng, dim)
        beta = rng.uniform(0.3, 2.5)
        ours = tc.gibbs_weight(h, tc.ThermoContext(beta=beta))
        oracle = expm(-beta * h)
        assert np.max(np.abs(ours - oracle)) <= 1e-10

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_gibbs_state_normalized(self, seed):
        rng = np.random.default_rng(seed)
        h = random_hermitian(rng, 4)
        rho = tc.gibbs_state(h, tc.ThermoContext(beta=1.3))
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.eigvalsh(rho).min() > 0


class TestFreeEnergy:
    def test_maximally_mixed_flat_hamiltonian(self):
        f = tc.free_energy(np.eye(2) / 2, np.zeros((2, 2)), tc.ThermoContext(beta=1.0))
        assert f == pytest.approx(-LN2, abs=1e-12)

    def test_pure_ground_state(self):
        f = tc.free_energy(
            np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), tc.ThermoContext(beta=1.0)
        )
        assert f == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_gibbs_state_gives_log_partition(self, seed):
        rng = np.random.default_rng(seed)
        h = random_hermitian(rng, 4)
        beta = rng.uniform(0.5, 2.0)
        ctx = tc.ThermoContext(beta=beta)
        z = np.trace(expm(-beta * h)).real
        f = tc.free_energy(tc.gibbs_state(h, ctx), h, ctx)
        assert f == pytest.approx(-np.log(z) / beta, abs=1e-9)

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4, 5])
    def test_gibbs_state_minimizes(self, seed):
        rng = np.random.default_rng(seed)
        h = random_hermitian(rng, 3)
        ctx = tc.ThermoContext(beta=1.0)
        f_gibbs = tc.free_energy(tc.gibbs_state(h, ctx), h, ctx)
        for _ in range(20):
            f = tc.free_energy(random_density(rng, 3), h, ctx)
            assert f >= f_gibbs - 1e-10


class TestPartialTrace:
    def test_product_state(self):
        rng = np.random.default_rng(0)
        rho = random_density(rng, 2)
        sig = random_density(rng, 3)
        out = tc.partial_trace(np.kron(rho, sig), [2, 3], keep=[0])
        assert np.allclose(out, rho, atol=1e-12)

    def test_maximally_entangled_marginal(self):
        v = np.zeros(4, dtype=complex)
        v[0] = v[3] = 1 / np.sqrt(2)
        out = tc.partial_trace(np.outer(v, v.conj()), [2, 2], keep=[0])
        assert np.allclose(out, np.eye(2) / 2, atol=1e-12)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_composition_order(self, seed):
        # tracing B then C equals tracing BC at once
        rng = np.random.default_rng(seed)
        mat = random_density(rng, 2 * 3 * 2)
        at_once = tc.partial_trace(mat, [2, 3, 2], keep=[0])
        step1 = tc.partial_trace(mat, [2, 3, 2], keep=[0, 1])
        step2 = tc.partial_trace(step1, [2, 3], keep=[0])
        assert np.allclose(at_once, step2, atol=1e-12)

    def test_preserves_trace_and_positivity(self):
        rng = np.random.default_rng(5)
        mat = random_density(rng, 6)
        out = tc.partial_trace(mat, [2, 3], keep=[1])
        assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.eigvalsh(out).min() >= -1e-12

    def test_keep_second_factor(self):
        rng = np.random.default_rng(6)
        rho = random_density(rng, 3)
        sig = random_density(rng, 4)
        out = tc.partial_trace(np.kron(rho, sig), [3, 4], keep=[1])
        assert np.allclose(out, sig, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(tc.DimensionMismatchError):
            tc.partial_trace(np.eye(6), [2, 2], keep=[0])


class TestTraceDistance:
    def test_identical_states(self):
        rho = random_density(np.random.default_rng(0), 3)
        assert tc.trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-14)

    def test_orthogonal_pure_states(self):
        assert tc.trace_distance(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == pytest.approx(
            1.0, abs=1e-14
        )

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_matches_eigenvalue_sum(self, seed):
        rng = np.random.default_rng(seed)
        rho = random_density(rng, 2)
        sig = random_density(rng, 2)
        oracle = 0.5 * np.sum(np.abs(np.linalg.eigvalsh(rho - sig)))
        assert tc.trace_distance(rho, sig) == pytest.approx(oracle, abs=1e-12)

    def test_symmetry_and_triangle(self):
        rng = np.random.default_rng(9)
        a, b, c = (random_density(rng, 3) for _ in range(3))
        assert tc.trace_distance(a, b) == pytest.approx(tc.trace_distance(b, a), abs=1e-12)
        assert tc.trace_distance(a, c) <= tc.trace_distance(a, b) + tc.trace_distance(b, c) + 1e-12


class TestEigendecomposition:
    @pytest.mark.parametrize("dim", [2, 16, 128, 512])
    def test_reconstruction_trace_norm(self, dim):
        rng = np.random.default_rng(dim)
        a = random_hermitian(rng, dim)
        lam, u = tc.eigh_hermitian(a)
        err = a - (u * lam) @ u.conj().T
        assert np.sum(np.linalg.svd(err, compute_uv=False)) <= 1e-9 * dim

    def test_reconstruction_large(self):
        # trace norm bounded by sqrt(dim) * frobenius, avoiding an svd at this size
        dim = 4096
        rng = np.random.default_rng(dim)
        a = random_hermitian(rng, dim)
        lam, u = tc.eigh_hermitian(a)
        err = a - (u * lam) @ u.conj().T
        bound = np.sqrt(dim) * np.linalg.norm(err)
        assert bound <= 1e-9 * dim


class TestTensorHelpers:
    def test_kron_power(self):
        rng = np.random.default_rng(1)
        a = random_density(rng, 2)
        assert np.allclose(tc.kron_power(a, 3), np.kron(np.kron(a, a), a), atol=1e-14)

    def test_lift_hamiltonian_two_copies(self):
        h = np.diag([0.0, 1.0])
        lifted = tc.lift_hamiltonian(h, 2)
        assert np.allclose(lifted, np.kron(h, np.eye(2)) + np.kron(np.eye(2), h))

    def test_lift_hamiltonian_spectrum(self):
        h = np.diag([0.0, 1.0])
        ev = np.sort(np.linalg.eigvalsh(tc.lift_hamiltonian(h, 3)))
        assert np.allclose(ev, [0, 1, 1, 1, 2, 2, 2, 3])

    @pytest.mark.parametrize("seed", [0, 1])
    def test_permute_factors_swap(self, seed):
        rng = np.random.default_rng(seed)
        a = random_density(rng, 2)
        b = random_density(rng, 3)
        swapped = tc.permute_factors(np.kron(a, b), [2, 3], [1, 0])
        assert np.allclose(swapped, np.kron(b, a), atol=1e-13)

    def test_permute_vector_factors_cycle(self):
        rng = np.random.default_rng(2)
        vecs = [rng.normal(size=d) + 1j * rng.normal(size=d) for d in (2, 3, 4)]
        full = np.kron(np.kron(vecs[0], vecs[1]), vecs[2])
        # output factor j is input factor perm[j]
        out = tc.permute_vector_factors(full, [2, 3, 4], [2, 0, 1])
        expect = np.kron(np.kron(vecs[2], vecs[0]), vecs[1])
        assert np.allclose(out, expect, atol=1e-13)
