"""Channel model, constellations and space-time codeword construction.

Received blocks follow Y = sqrt(rho) * H * S + W with H an N_r x N_t
Rayleigh-fading matrix (i.i.d. circularly symmetric complex Gaussian,
unit variance per entry), S drawn uniformly from an enumerated codeword
set, and W an impulsive noise block.  Constellations are normalized to
unit average symbol energy so rho is the per-antenna SNR scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .stable import NoiseModel, sample_noise_block

_SQRT2 = np.sqrt(2.0)

# Gray-labelled unit-energy constellations: bit tuples -> symbols
CONSTELLATIONS = {
    "bpsk": {
        "bits_per_symbol": 1,
        "symbols": np.array([1.0 + 0.0j, -1.0 + 0.0j]),
        "labels": np.array([[0], [1]], dtype=np.uint8),
    },
    "qpsk": {
        "bits_per_symbol": 2,
        "symbols": np.array(
            [1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j], dtype=complex
        )
        / _SQRT2,
        "labels": np.array([[0, 0], [0, 1], [1, 1], [1, 0]], dtype=np.uint8),
    },
}


@dataclass(frozen=True)
class Codebook:
    """Enumerated space-time code: all codeword matrices plus bit labels."""

    kind: str
    constellation: str
    n_t: int
    t_s: int
    symbols: np.ndarray
    codewords: np.ndarray  # (n_codewords, n_t, t_s) complex
    bit_labels: np.ndarray  # (n_codewords, bits_per_codeword) uint8
    bits_per_codeword: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "bits_per_codeword", self.bit_labels.shape[1])
        if len(self.codewords) != 2**self.bits_per_codeword:
            raise ValueError("codeword count must be 2**bits_per_codeword")
        # pairwise Hamming distances, used to count bit errors per decision
        diff = self.bit_labels[:, None, :] != self.bit_labels[None, :, :]
        object.__setattr__(self, "bit_distance", diff.sum(axis=2))

    def __len__(self):
        return len(self.codewords)


def alamouti_encode(s1: complex, s2: complex) -> np.ndarray:
    """2x2 Alamouti codeword [[s1, -conj(s2)], [s2, conj(s1)]]."""
    return np.array(
        [[s1, -np.conj(s2)], [s2, np.conj(s1)]], dtype=complex
    )


def enumerate_codebook(kind: str, constellation: str = "bpsk") -> Codebook:
    """Enumerate all codewords of the given code over a constellation.

    Supported kinds: "alamouti" (2x2 orthogonal block code) and "uncoded"
    (single antenna, one symbol per block).
    """
    try:
        con = CONSTELLATIONS[constellation]
    except KeyError:
        raise ValueError(f"unsupported constellation: {constellation!r}") from None
    symbols = con["symbols"]
    labels = con["labels"]
    m = len(symbols)

    if kind == "alamouti":
        codewords = np.empty((m * m, 2, 2), dtype=complex)
        bit_labels = np.empty((m * m, 2 * con["bits_per_symbol"]), dtype=np.uint8)
        for i in range(m):
            for j in range(m):
                codewords[i * m + j] = alamouti_encode(symbols[i], symbols[j])
                bit_labels[i * m + j] = np.concatenate([labels[i], labels[j]])
        return Codebook(
            kind=kind,
            constellation=constellation,
            n_t=2,
            t_s=2,
            symbols=symbols,
            codewords=codewords,
            bit_labels=bit_labels,
        )
    if kind == "uncoded":
        codewords = symbols.reshape(m, 1, 1).astype(complex)
        return Codebook(
            kind=kind,
            constellation=constellation,
            n_t=1,
            t_s=1,
            symbols=symbols,
            codewords=codewords,
            bit_labels=labels.copy(),
        )
    raise ValueError(f"unsupported code kind: {kind!r}")


@dataclass(frozen=True)
class TrialContext:
    """One trial's realization: channel, noise, genie record, SNR, tx index."""

    h: np.ndarray
    w: np.ndarray
    genie: np.ndarray
    rho: float
    tx_index: int


def sample_channel(n_r: int, n_t: int, rng: np.random.Generator, size=None):
    """I.i.d. CN(0, 1) channel entries (variance 1/2 per real part)."""
    shape = (n_r, n_t) if size is None else (size, n_r, n_t)
    return (rng.normal(size=shape) + 1j * rng.normal(size=shape)) / _SQRT2


def sample_trial(
    codebook: Codebook,
    model: NoiseModel,
    alpha: float,
    n_r: int,
    rho: float,
    rng: np.random.Generator,
) -> TrialContext:
    """Draw one full trial realization in the fixed order H, tx, W."""
    h = sample_channel(n_r, codebook.n_t, rng)
    tx_index = int(rng.integers(len(codebook)))
    w, genie = sample_noise_block(model, alpha, n_r, codebook.t_s, rng)
    return TrialContext(h=h, w=w, genie=genie, rho=rho, tx_index=tx_index)


def synthesize_rx(ctx: TrialContext, codebook: Codebook) -> np.ndarray:
    """Received block Y = sqrt(rho) * H * S + W for the trial's codeword."""
    s = codebook.codewords[ctx.tx_index]
    if ctx.h.shape[1] != s.shape[0] or ctx.w.shape != (ctx.h.shape[0], s.shape[1]):
        raise ValueError(
            f"dimension mismatch: h {ctx.h.shape}, s {s.shape}, w {ctx.w.shape}"
        )
    return np.sqrt(ctx.rho) * ctx.h @ s + ctx.w
