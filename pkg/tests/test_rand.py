import numpy as np
import pytest

from divlab.rand import (
    derive_rng,
    ginibre,
    random_density,
    random_haar_unitary,
    random_hermitian,
    random_positive_definite,
)


class TestDeterminism:
    def test_same_seed_bit_identical(self):
        for maker in (
            lambda s: random_haar_unitary(4, s),
            lambda s: random_hermitian(4, s),
            lambda s: random_positive_definite(4, (0.5, 2.0), s),
            lambda s: random_density(4, 3, s),
            lambda s: ginibre(4, 2, s),
        ):
            assert np.array_equal(maker(42), maker(42))

    def test_different_seeds_differ(self):
        assert not np.array_equal(random_hermitian(4, 1), random_hermitian(4, 2))

    def test_derived_paths_independent(self):
        a = derive_rng(7, 0, 1).standard_normal(8)
        b = derive_rng(7, 0, 2).standard_normal(8)
        c = derive_rng(7, 1, 1).standard_normal(8)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_passthrough_generator(self):
        rng = derive_rng(5)
        assert derive_rng(rng) is rng
        with pytest.raises(ValueError):
            derive_rng(rng, 1)


class TestHaarUnitary:
    def test_dim_one_unit_modulus(self):
        u = random_haar_unitary(1, 3)
        assert u.shape == (1, 1)
        assert abs(abs(u[0, 0]) - 1.0) < 1e-12

    @pytest.mark.parametrize("dim", [2, 3, 6])
    def test_unitarity(self, dim):
        u = random_haar_unitary(dim, 17)
        assert np.linalg.norm(u @ u.conj().T - np.eye(dim)) < 1e-10

    def test_monte_carlo_twirl(self):
        # empirical mean of U e1 e1* U* is the maximally mixed state
        dim, n = 3, 10_000
        acc = np.zeros((dim, dim), dtype=complex)
        for i in range(n):
            u = random_haar_unitary(dim, derive_rng(2024, i))
            acc += np.outer(u[:, 0], u[:, 0].conj())
        acc /= n
        assert np.abs(acc - np.eye(dim) / dim).max() < 0.02


class TestEnsembles:
    def test_density_invariants(self):
        rho = random_density(4, 4, 8)
        assert abs(np.trace(rho).real - 1.0) < 1e-12
        assert np.linalg.eigvalsh(rho).min() >= 0.0

    def test_density_rank(self):
        rho = random_density(4, 2, 9)
        w = np.linalg.eigvalsh(rho)
        assert (w > 1e-12).sum() == 2

    def test_density_scalar_case(self):
        rho = random_density(1, 1, 10)
        assert np.allclose(rho, [[1.0]])

    def test_positive_definite_spectrum_range(self):
        a = random_positive_definite(3, (0.5, 2.0), 11)
        w = np.linalg.eigvalsh(a)
        assert w.min() >= 0.5 - 1e-12 and w.max() <= 2.0 + 1e-12

    def test_invalid_rank_and_range(self):
        with pytest.raises(ValueError):
            random_density(3, 0, 1)
        with pytest.raises(ValueError):
            random_density(3, 4, 1)
        with pytest.raises(ValueError):
            random_positive_definite(3, (0.0, 1.0), 1)

    def test_hermitian(self):
        h = random_hermitian(5, 12)
        assert np.allclose(h, h.conj().T)
