import numpy as np
import pytest

from divlab.channels import (
    KrausChannel,
    channel_from_json,
    channel_to_json,
    depolarizing,
    haar_twirl_second_factor,
    partial_trace_channel,
    random_cptp,
    unitary_mixing,
    verify_uhlmann_identity,
)
from divlab.linalg import partial_trace, tensor
from divlab.rand import derive_rng, random_density, random_haar_unitary


class TestKrausChannel:
    def test_identity_channel(self):
        ch = KrausChannel.from_ops([np.eye(3)])
        rho = random_density(3, 3, 1)
        assert np.allclose(ch.apply(rho), rho)

    def test_completeness_enforced(self):
        with pytest.raises(ValueError, match="trace preserving"):
            KrausChannel.from_ops([0.5 * np.eye(2)])

    def test_trace_preserved(self):
        for seed in range(10):
            ch = random_cptp(3, 2, seed)
            rho = random_density(3, 3, 100 + seed)
            out = ch.apply(rho)
            assert abs(np.trace(out).real - 1.0) <= 1e-11
            assert np.linalg.eigvalsh(out).min() >= -1e-11

    def test_unital_fixed_point(self):
        u1 = random_haar_unitary(3, 5)
        u2 = random_haar_unitary(3, 6)
        ch = unitary_mixing([u1, u2])
        assert np.allclose(ch.apply(np.eye(3) / 3), np.eye(3) / 3)

    def test_dimension_mismatch(self):
        ch = KrausChannel.from_ops([np.eye(2)])
        with pytest.raises(ValueError, match="dimension"):
            ch.apply(np.eye(3))


class TestConstructors:
    def test_depolarizing_endpoints(self):
        rho = random_density(3, 3, 7)
        assert np.allclose(depolarizing(3, 0.0).apply(rho), rho)
        assert np.allclose(depolarizing(3, 1.0).apply(rho), np.eye(3) / 3)

    def test_depolarizing_interpolates(self):
        rho = random_density(2, 2, 8)
        lam = 0.37
        expected = (1 - lam) * rho + lam * np.eye(2) / 2
        assert np.allclose(depolarizing(2, lam).apply(rho), expected)

    def test_depolarizing_validates_lambda(self):
        with pytest.raises(ValueError):
            depolarizing(2, 1.5)

    def test_unitary_mixing_single(self):
        u = random_haar_unitary(3, 9)
        rho = random_density(3, 3, 10)
        assert np.allclose(unitary_mixing([u]).apply(rho), u @ rho @ u.conj().T)

    def test_partial_trace_channel_matches_direct(self):
        rho = random_density(6, 6, 11)
        ch2 = partial_trace_channel(2, 3, 2)
        ch1 = partial_trace_channel(2, 3, 1)
        assert np.allclose(ch2.apply(rho), partial_trace(rho, 2, (2, 3)))
        assert np.allclose(ch1.apply(rho), partial_trace(rho, 1, (2, 3)))

    def test_partial_trace_channel_inverts_tensoring(self):
        rho = random_density(2, 2, 12)
        tau = random_density(3, 3, 13)
        ch = partial_trace_channel(2, 3, 2)
        assert np.abs(ch.apply(tensor(rho, tau)) - rho).max() <= 1e-11


class TestRandomCptp:
    def test_env_one_is_unitary_conjugation(self):
        ch = random_cptp(3, 1, 21)
        assert len(ch.kraus_ops) == 1
        u = ch.kraus_ops[0]
        assert np.linalg.norm(u @ u.conj().T - np.eye(3)) <= 1e-10

    @pytest.mark.parametrize("env", [1, 2, 4])
    def test_completeness(self, env):
        ch = random_cptp(3, env, 22 + env)
        total = sum(k.conj().T @ k for k in ch.kraus_ops)
        assert np.linalg.norm(total - np.eye(3)) <= 1e-10

    def test_dilation_oracle(self):
        # Kraus action equals Tr_env U (rho (x) |0><0|) U* computed independently
        for seed in range(5):
            ch = random_cptp(2, 3, 300 + seed)
            rho = random_density(2, 2, 400 + seed)
            dil = ch.dilation
            lifted = dil.unitary @ tensor(rho, dil.env_state) @ dil.unitary.conj().T
            expected = partial_trace(lifted, 2, (2, 3))
            assert np.abs(ch.apply(rho) - expected).max() <= 1e-10

    def test_seeded_determinism(self):
        a = random_cptp(2, 2, 5)
        b = random_cptp(2, 2, 5)
        for ka, kb in zip(a.kraus_ops, b.kraus_ops):
            assert np.array_equal(ka, kb)


class TestHaarTwirl:
    def test_product_block_form(self):
        a = random_density(2, 2, 31)
        b = random_density(3, 3, 32)
        out = haar_twirl_second_factor(tensor(a, b), (2, 3))
        expected = tensor(a * (np.trace(b).real / 3), np.eye(3))
        assert np.abs(out - expected).max() <= 1e-12

    def test_identity_fixed(self):
        assert np.allclose(haar_twirl_second_factor(np.eye(6), (2, 3)), np.eye(6))

    def test_idempotent(self):
        y = np.asarray(random_density(6, 6, 33))
        once = haar_twirl_second_factor(y, (2, 3))
        twice = haar_twirl_second_factor(once, (2, 3))
        assert np.abs(twice - once).max() <= 1e-12

    def test_monte_carlo_oracle(self):
        # closed form vs 10^4 Haar samples at n = m = 2
        y = random_density(4, 4, 34)
        closed = haar_twirl_second_factor(y, (2, 2))
        acc = np.zeros((4, 4), dtype=complex)
        n = 10_000
        for i in range(n):
            u = random_haar_unitary(2, derive_rng(999, i))
            big = tensor(np.eye(2), u)
            acc += big @ y @ big.conj().T
        acc /= n
        assert np.linalg.norm(acc - closed) < 0.02


class TestUhlmannIdentity:
    def test_identity_channel_via_dilation(self):
        ch = random_cptp(2, 1, 41)  # env 1: unitary conjugation, trivially dilated
        rho = random_density(2, 2, 42)
        assert verify_uhlmann_identity(ch, rho)

    def test_random_channels(self):
        for seed in range(5):
            ch = random_cptp(2, 2, 500 + seed)
            rho = random_density(2, 2, 600 + seed)
            assert verify_uhlmann_identity(ch, rho, tol=1e-9)

    def test_corrupted_dilation_fails(self):
        ch = random_cptp(2, 2, 43)
        bad_u = ch.dilation.unitary.copy()
        bad_u[:, [0, 1]] = bad_u[:, [1, 0]]  # still unitary, wrong dilation
        from divlab.channels import StinespringData

        corrupted = KrausChannel(
            kraus_ops=ch.kraus_ops,
            dim_in=ch.dim_in,
            dim_out=ch.dim_out,
            dilation=StinespringData(
                unitary=bad_u, env_dim=2, env_state=ch.dilation.env_state
            ),
        )
        rho = random_density(2, 2, 44)
        assert not verify_uhlmann_identity(corrupted, rho)

    def test_missing_dilation(self):
        ch = KrausChannel.from_ops([np.eye(2)])
        with pytest.raises(ValueError, match="dilation"):
            verify_uhlmann_identity(ch, random_density(2, 2, 45))


def test_channel_json_roundtrip():
    ch = random_cptp(2, 3, 51)
    back = channel_from_json(channel_to_json(ch))
    assert back.dim_in == ch.dim_in and back.dim_out == ch.dim_out
    for ka, kb in zip(ch.kraus_ops, back.kraus_ops):
        assert np.array_equal(ka, kb)


def test_channel_json_validates_dims():
    obj = channel_to_json(random_cptp(2, 2, 52))
    obj["dim_in"] = 3
    with pytest.raises(ValueError):
        channel_from_json(obj)
