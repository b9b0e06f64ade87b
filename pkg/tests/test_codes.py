"""Constellations, Alamouti construction, codebooks, channel and synthesis."""

import numpy as np
import pytest

from stablemimo import (
    NoiseModel,
    TrialContext,
    alamouti_encode,
    enumerate_codebook,
    sample_channel,
    sample_trial,
    synthesize_rx,
)
from stablemimo.codes import CONSTELLATIONS


class TestAlamouti:
    def test_bpsk_one_one(self):
        s = alamouti_encode(1.0, 1.0)
        assert np.array_equal(s, np.array([[1.0, -1.0], [1.0, 1.0]]))

    def test_orthogonality(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            s1, s2 = rng.normal(size=2) + 1j * rng.normal(size=2)
            s = alamouti_encode(s1, s2)
            power = abs(s1) ** 2 + abs(s2) ** 2
            assert np.allclose(s @ s.conj().T, power * np.eye(2))
            assert np.linalg.norm(s) ** 2 == pytest.approx(2.0 * power)

    def test_bpsk_differences_scaled_unitary(self):
        cb = enumerate_codebook("alamouti", "bpsk")
        scales = set()
        for i in range(4):
            for j in range(4):
                if i == j:
                    continue
                d = cb.codewords[i] - cb.codewords[j]
                g = d @ d.conj().T
                c = g[0, 0].real
                assert np.allclose(g, c * np.eye(2), atol=1e-12)
                assert c > 0
                scales.add(round(c, 9))
        assert scales == {4.0, 8.0}


class TestCodebook:
    def test_alamouti_bpsk(self):
        cb = enumerate_codebook("alamouti", "bpsk")
        assert len(cb) == 4
        assert cb.bits_per_codeword == 2
        assert cb.n_t == 2 and cb.t_s == 2

    def test_alamouti_qpsk(self):
        cb = enumerate_codebook("alamouti", "qpsk")
        assert len(cb) == 16
        assert cb.bits_per_codeword == 4

    def test_uncoded_bpsk(self):
        cb = enumerate_codebook("uncoded", "bpsk")
        assert len(cb) == 2
        assert cb.n_t == cb.t_s == 1

    def test_unsupported(self):
        with pytest.raises(ValueError):
            enumerate_codebook("vblast", "bpsk")
        with pytest.raises(ValueError):
            enumerate_codebook("alamouti", "64qam")

    def test_unit_average_energy(self):
        for name, con in CONSTELLATIONS.items():
            assert np.mean(np.abs(con["symbols"]) ** 2) == pytest.approx(1.0), name

    def test_gray_labels_qpsk(self):
        con = CONSTELLATIONS["qpsk"]
        labels = con["labels"]
        # ring neighbours (sorted by angle) differ in exactly one bit
        order = np.argsort(np.angle(con["symbols"]))
        for a, b in zip(order, np.roll(order, -1)):
            assert np.sum(labels[a] != labels[b]) == 1

    def test_bit_distance_matrix(self):
        cb = enumerate_codebook("alamouti", "bpsk")
        assert cb.bit_distance[0, 0] == 0
        assert cb.bit_distance.max() == 2
        assert np.array_equal(cb.bit_distance, cb.bit_distance.T)


class TestSynthesis:
    def test_noiseless(self):
        cb = enumerate_codebook("alamouti", "bpsk")
        rng = np.random.default_rng(1)
        h = sample_channel(2, 2, rng)
        ctx = TrialContext(h=h, w=np.zeros((2, 2)), genie=np.ones(2), rho=1.0, tx_index=3)
        assert np.allclose(synthesize_rx(ctx, cb), h @ cb.codewords[3])

    def test_zero_rho(self):
        cb = enumerate_codebook("alamouti", "bpsk")
        w = np.random.default_rng(2).normal(size=(1, 2)) * (1 + 1j)
        ctx = TrialContext(h=np.ones((1, 2)), w=w, genie=np.ones(2), rho=0.0, tx_index=0)
        assert np.array_equal(synthesize_rx(ctx, cb), w)

    def test_scalar_scaling(self):
        cb = enumerate_codebook("alamouti", "bpsk")
        s = alamouti_encode(1.0, 1.0)
        ctx = TrialContext(h=np.eye(2), w=np.zeros((2, 2)), genie=np.ones(2),
                           rho=4.0, tx_index=0)
        assert np.allclose(synthesize_rx(ctx, cb), 2.0 * s)

    def test_dimension_mismatch(self):
        cb = enumerate_codebook("alamouti", "bpsk")
        ctx = TrialContext(h=np.ones((1, 3)), w=np.zeros((1, 2)), genie=np.ones(2),
                           rho=1.0, tx_index=0)
        with pytest.raises(ValueError):
            synthesize_rx(ctx, cb)


class TestChannel:
    def test_statistics(self):
        rng = np.random.default_rng(3)
        h = sample_channel(1, 1, rng, size=10**6).ravel()
        assert abs(np.mean(np.abs(h) ** 2) - 1.0) < 0.01
        corr = np.corrcoef(h.real, h.imag)[0, 1]
        assert abs(corr) < 0.01

    def test_sample_trial_shapes(self):
        cb = enumerate_codebook("alamouti", "bpsk")
        rng = np.random.default_rng(4)
        ctx = sample_trial(cb, NoiseModel.SHARED, 0.9, 3, 10.0, rng)
        assert ctx.h.shape == (3, 2)
        assert ctx.w.shape == (3, 2)
        assert ctx.genie.shape == (2,)
        ctx = sample_trial(cb, NoiseModel.IID, 0.9, 3, 10.0, rng)
        assert ctx.genie.shape == (3, 2)
