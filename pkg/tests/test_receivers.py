"""Decision rules against brute-force oracles and degenerate-case identities."""

import numpy as np
import pytest

from stablemimo import (
    NoiseModel,
    ReceiverKind,
    aor_decode,
    enumerate_codebook,
    gar_decode,
    mdr_decode,
    ml_decode,
    sample_channel,
    sample_noise_block,
)
from stablemimo.receivers import batch_aor, batch_gar, batch_mdr, batch_ml


@pytest.fixture(scope="module")
def codebook():
    return enumerate_codebook("alamouti", "bpsk")


def random_instance(codebook, model, alpha, n_r, rho, rng):
    h = sample_channel(n_r, codebook.n_t, rng)
    tx = int(rng.integers(len(codebook)))
    w, genie = sample_noise_block(model, alpha, n_r, codebook.t_s, rng)
    y = np.sqrt(rho) * h @ codebook.codewords[tx] + w
    return y, h, genie, tx


# Straightforward reimplementations used as oracles.

def oracle_mdr(y, h, rho, cb):
    metrics = [np.sum(np.abs(y - np.sqrt(rho) * h @ s) ** 2) for s in cb.codewords]
    return int(np.argmin(metrics))


def oracle_gar(y, h, genie, rho, cb):
    metrics = []
    for s in cb.codewords:
        r = y - np.sqrt(rho) * h @ s
        if genie.ndim == 1:
            m = sum(
                np.sum(np.abs(r[:, k]) ** 2) / genie[k] for k in range(r.shape[1])
            )
        else:
            m = np.sum(np.abs(r) ** 2 / genie)
        metrics.append(m)
    return int(np.argmin(metrics))


def oracle_aor_product(y, h, rho, cb, model):
    # product-of-norms form of the rule
    metrics = []
    for s in cb.codewords:
        r = y - np.sqrt(rho) * h @ s
        if model is NoiseModel.SHARED:
            m = np.prod([np.linalg.norm(r[:, k]) for k in range(r.shape[1])])
        else:
            m = np.prod(np.abs(r))
        metrics.append(m)
    return int(np.argmin(metrics))


def oracle_ml(y, h, rho, cb, model, table):
    metrics = []
    for s in cb.codewords:
        r = y - np.sqrt(rho) * h @ s
        if np.sum(np.abs(r) ** 2) == 0.0:
            return int(np.argmin([np.sum(np.abs(y - np.sqrt(rho) * h @ c) ** 2)
                                  for c in cb.codewords]))
        if model is NoiseModel.SHARED:
            m = sum(
                table.log_pdf(np.linalg.norm(r[:, k])) for k in range(r.shape[1])
            )
        else:
            m = np.sum(table.log_pdf(np.abs(r).ravel()))
        metrics.append(m)
    return int(np.argmax(metrics))


class TestNoiselessDecoding:
    @pytest.mark.parametrize("rho", [1.0, 4.0, 100.0])
    def test_all_receivers_return_tx(self, codebook, table_a143_d2, rho):
        rng = np.random.default_rng(31)
        for _ in range(10):
            h = sample_channel(1, 2, rng)
            tx = int(rng.integers(4))
            y = np.sqrt(rho) * h @ codebook.codewords[tx]
            genie = np.abs(rng.normal(size=2)) + 0.1
            assert mdr_decode(y, h, rho, codebook) == tx
            assert gar_decode(y, h, genie, rho, codebook) == tx
            assert aor_decode(y, h, rho, codebook, NoiseModel.SHARED) == tx
            assert ml_decode(y, h, rho, codebook, NoiseModel.SHARED,
                             table_a143_d2) == tx


class TestOracleAgreement:
    def test_gar_model1_matches_bruteforce(self, codebook):
        rng = np.random.default_rng(32)
        for _ in range(200):
            y, h, genie, _ = random_instance(
                codebook, NoiseModel.SHARED, 0.8, 2, 3.0, rng
            )
            assert gar_decode(y, h, genie, rho=3.0, codebook=codebook) == oracle_gar(
                y, h, genie, 3.0, codebook
            )

    def test_gar_model2_matches_bruteforce(self, codebook):
        rng = np.random.default_rng(33)
        for _ in range(200):
            y, h, genie, _ = random_instance(
                codebook, NoiseModel.IID, 0.8, 2, 3.0, rng
            )
            assert gar_decode(y, h, genie, 3.0, codebook) == oracle_gar(
                y, h, genie, 3.0, codebook
            )

    def test_mdr_matches_bruteforce(self, codebook):
        rng = np.random.default_rng(34)
        for _ in range(200):
            y, h, _, _ = random_instance(codebook, NoiseModel.SHARED, 1.43, 2, 2.0, rng)
            assert mdr_decode(y, h, 2.0, codebook) == oracle_mdr(y, h, 2.0, codebook)

    def test_aor_log_sum_equals_product_form(self, codebook):
        rng = np.random.default_rng(35)
        for model in (NoiseModel.SHARED, NoiseModel.IID):
            for _ in range(100):
                y, h, _, _ = random_instance(codebook, model, 0.5, 2, 5.0, rng)
                assert aor_decode(y, h, 5.0, codebook, model) == oracle_aor_product(
                    y, h, 5.0, codebook, model
                )

    def test_ml_matches_bruteforce(self, codebook, table_a143_d2):
        rng = np.random.default_rng(36)
        for _ in range(100):
            y, h, _, _ = random_instance(codebook, NoiseModel.IID, 1.43, 1, 5.0, rng)
            got = ml_decode(y, h, 5.0, codebook, NoiseModel.IID, table_a143_d2)
            assert got == oracle_ml(y, h, 5.0, codebook, NoiseModel.IID, table_a143_d2)


class TestDegenerateIdentities:
    def test_equal_genie_matches_mdr(self, codebook):
        rng = np.random.default_rng(37)
        for _ in range(200):
            y, h, _, _ = random_instance(codebook, NoiseModel.SHARED, 0.7, 2, 2.0, rng)
            genie = np.full(2, float(rng.uniform(0.2, 5.0)))
            assert gar_decode(y, h, genie, 2.0, codebook) == mdr_decode(
                y, h, 2.0, codebook
            )

    def test_single_slot_aor_matches_mdr(self):
        cb = enumerate_codebook("uncoded", "bpsk")
        rng = np.random.default_rng(38)
        for _ in range(200):
            y, h, _, _ = random_instance(cb, NoiseModel.SHARED, 0.7, 2, 2.0, rng)
            assert aor_decode(y, h, 2.0, cb, NoiseModel.SHARED) == mdr_decode(
                y, h, 2.0, cb
            )

    def test_scale_invariance(self, codebook):
        rng = np.random.default_rng(39)
        for _ in range(100):
            y, h, genie, _ = random_instance(
                codebook, NoiseModel.SHARED, 0.9, 2, 2.0, rng
            )
            c = float(rng.uniform(0.1, 30.0))
            assert mdr_decode(y, h, 2.0, codebook) == mdr_decode(
                c * y, c * h, 2.0, codebook
            )
            assert gar_decode(y, h, genie, 2.0, codebook) == gar_decode(
                c * y, c * h, genie, 2.0, codebook
            )
            assert aor_decode(y, h, 2.0, codebook, NoiseModel.SHARED) == aor_decode(
                c * y, c * h, 2.0, codebook, NoiseModel.SHARED
            )

    def test_gaussian_ml_agrees_with_whitened_euclidean(self, codebook):
        # alpha=2, all subordinators 1: the density metric reduces to the
        # Euclidean rule up to a log-radius term that only matters at
        # near-ties, so agreement is checked where margins are healthy
        from stablemimo import build_amplitude_table
        from stablemimo.amplitude import noise_amplitude_spec

        table = build_amplitude_table(noise_amplitude_spec(2.0, 2))
        rng = np.random.default_rng(40)
        n = 10_000
        rho = 100.0
        h = sample_channel(1, 2, rng, size=n)
        tx = rng.integers(0, 4, size=n)
        w, genie = sample_noise_block(NoiseModel.SHARED, 2.0, 1, 2, rng, size=n)
        y = np.sqrt(rho) * np.einsum("brn,bnt->brt", h, codebook.codewords[tx]) + w
        ml = batch_ml(y, h, rho, codebook, NoiseModel.SHARED, table)
        gar = batch_gar(y, h, genie, rho, codebook)
        assert np.mean(ml == gar) >= 0.999


class TestAdversarialImpulse:
    def test_mdr_flips_gar_survives(self, codebook):
        # one huge-impulse column dominates the Euclidean metric
        rng = np.random.default_rng(41)
        found = False
        for _ in range(500):
            h = sample_channel(2, 2, rng)
            tx = int(rng.integers(4))
            genie = np.array([1.0, 1e6])
            g = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
            w = np.sqrt(genie)[None, :] * g
            y = np.sqrt(4.0) * h @ codebook.codewords[tx] + w
            mdr = mdr_decode(y, h, 4.0, codebook)
            gar = gar_decode(y, h, genie, 4.0, codebook)
            if mdr != tx and gar == tx:
                # verify by direct metric evaluation
                assert oracle_mdr(y, h, 4.0, codebook) == mdr
                assert oracle_gar(y, h, genie, 4.0, codebook) == tx
                found = True
                break
        assert found


class TestValidation:
    def test_missing_genie(self, codebook):
        y = np.zeros((1, 2), dtype=complex)
        h = np.ones((1, 2), dtype=complex)
        with pytest.raises(ValueError):
            gar_decode(y, h, None, 1.0, codebook)

    def test_table_dimension_mismatch(self, codebook, table_a143_d2):
        y = np.zeros((2, 2), dtype=complex)
        h = np.ones((2, 2), dtype=complex)
        # model I with n_r=2 needs d=4
        with pytest.raises(ValueError, match="dimension"):
            ml_decode(y, h, 1.0, codebook, NoiseModel.SHARED, table_a143_d2)

    def test_receiver_kind_validation(self, table_a143_d2):
        with pytest.raises(ValueError):
            ReceiverKind(kind="zf")
        with pytest.raises(ValueError):
            ReceiverKind(kind="ml")
        ReceiverKind(kind="ml", model=NoiseModel.IID, table=table_a143_d2)
        ReceiverKind(kind="aor")


class TestBatchScalarAgreement:
    def test_batch_matches_scalar(self, codebook, table_a143_d2):
        rng = np.random.default_rng(42)
        n = 64
        h = sample_channel(1, 2, rng, size=n)
        tx = rng.integers(0, 4, size=n)
        w, genie = sample_noise_block(NoiseModel.SHARED, 1.43, 1, 2, rng, size=n)
        rho = 7.0
        y = np.sqrt(rho) * np.einsum("brn,bnt->brt", h, codebook.codewords[tx]) + w
        b_mdr = batch_mdr(y, h, rho, codebook)
        b_gar = batch_gar(y, h, genie, rho, codebook)
        b_aor = batch_aor(y, h, rho, codebook, NoiseModel.SHARED)
        b_ml = batch_ml(y, h, rho, codebook, NoiseModel.SHARED, table_a143_d2)
        for i in range(n):
            assert b_mdr[i] == mdr_decode(y[i], h[i], rho, codebook)
            assert b_gar[i] == gar_decode(y[i], h[i], genie[i], rho, codebook)
            assert b_aor[i] == aor_decode(y[i], h[i], rho, codebook, NoiseModel.SHARED)
            assert b_ml[i] == ml_decode(
                y[i], h[i], rho, codebook, NoiseModel.SHARED, table_a143_d2
            )
