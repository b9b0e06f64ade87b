"""Closed-form error-rate asymptotics and coding-gain analysis.

High-SNR pairwise error probabilities take the form (G_c * rho)^(-G_d).
For the genie-aided receiver the diversity order is alpha*N_t/2; the
minimum-distance receiver is stuck at alpha/2 regardless of antenna
counts, with a coding gain penalized by N_r^(-2/alpha) when the noise is
i.i.d. across antennas.  Coding gains are evaluated in log-gamma
arithmetic; the printed digamma derivatives and the alpha-threshold root
finder quantify how the MDR gain responds to antenna counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import digamma, erfc, gammaln

from .codes import Codebook
from .stable import NoiseModel


def q_function(x):
    """Gaussian tail probability Q(x) = P(N(0,1) > x)."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def q_function_craig(x: float) -> float:
    """Q(x) via the finite-integral representation over (0, pi/2)."""
    val, _ = integrate.quad(
        lambda th: math.exp(-x * x / (2.0 * math.sin(th) ** 2)),
        0.0,
        math.pi / 2.0,
        epsabs=1e-14,
        epsrel=1e-12,
    )
    return val / math.pi


def _check_antennas(n_t: int, n_r: int, alpha: float):
    if n_t < 1 or n_r < 1:
        raise ValueError("antenna counts must be >= 1")
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha must be in (0, 2), got {alpha}")
    if n_r - alpha / 2.0 <= 0.0:
        raise ValueError("n_r - alpha/2 must be positive")


def log_coding_gain_gar(n_t: float, n_r: float, alpha: float) -> float:
    """log G for the genie-aided receiver; antenna counts may be real."""
    a = alpha
    log_b1 = (
        -0.5 * math.log(4.0 * math.pi)
        + gammaln((a * n_t + 1.0) / 2.0)
        - gammaln(a * n_t / 2.0 + 1.0)
    )
    log_b2 = (
        gammaln(1.0 + a / 2.0)
        + gammaln(n_r - a / 2.0)
        - gammaln(1.0 - a / 2.0)
        - gammaln(n_r)
        + (a / 2.0) * math.log(4.0)
    )
    return -2.0 / (a * n_t) * log_b1 - 2.0 / a * log_b2


def coding_gain_gar(n_t: int, n_r: int, alpha: float) -> float:
    """Coding gain of the genie-aided receiver (linear scale)."""
    _check_antennas(n_t, n_r, alpha)
    return math.exp(log_coding_gain_gar(n_t, n_r, alpha))


def log_coding_gain_mdr(
    n_t: float, n_r: float, alpha: float, model: NoiseModel = NoiseModel.SHARED
) -> float:
    """log G for the minimum-distance receiver; antenna counts may be real."""
    a = alpha
    log_b = (
        math.log(n_t)
        - 0.5 * math.log(4.0 * math.pi)
        + gammaln((1.0 + a) / 2.0)
        + gammaln(n_r * n_t - a / 2.0)
        - gammaln(1.0 - a / 2.0)
        - gammaln(n_r * n_t)
        + (a / 2.0) * math.log(4.0)
    )
    out = -2.0 / a * log_b
    if model is NoiseModel.IID:
        out -= (2.0 / a) * math.log(n_r)
    return out


def coding_gain_mdr(
    n_t: int, n_r: int, alpha: float, model: NoiseModel = NoiseModel.SHARED
) -> float:
    """Coding gain of the minimum-distance receiver (linear scale)."""
    _check_antennas(n_t, n_r, alpha)
    return math.exp(log_coding_gain_mdr(n_t, n_r, alpha, model))


@dataclass(frozen=True)
class PepAsymptote:
    """High-SNR pairwise error probability (G_c * rho)^(-G_d)."""

    coding_gain: float
    diversity_order: float
    receiver: str
    model: NoiseModel

    def __post_init__(self):
        if self.coding_gain <= 0.0 or self.diversity_order <= 0.0:
            raise ValueError("coding gain and diversity order must be positive")

    def evaluate(self, rho):
        return (self.coding_gain * np.asarray(rho, dtype=float)) ** (
            -self.diversity_order
        )


def pep_asymptote(
    receiver: str, model: NoiseModel, n_t: int, n_r: int, alpha: float
) -> PepAsymptote:
    """Bundle coding gain and diversity order for a receiver/model pair."""
    if receiver == "gar":
        if model is not NoiseModel.SHARED:
            raise ValueError(
                "no closed-form asymptote for the genie-aided receiver with "
                "i.i.d. noise"
            )
        return PepAsymptote(
            coding_gain=coding_gain_gar(n_t, n_r, alpha),
            diversity_order=alpha * n_t / 2.0,
            receiver=receiver,
            model=model,
        )
    if receiver == "mdr":
        return PepAsymptote(
            coding_gain=coding_gain_mdr(n_t, n_r, alpha, model),
            diversity_order=alpha / 2.0,
            receiver=receiver,
            model=model,
        )
    raise ValueError(f"no asymptote for receiver {receiver!r}")


def dlog_gain(receiver: str, wrt: str, n_t: int, n_r: int, alpha: float) -> float:
    """Closed-form digamma derivative of a log coding gain.

    Supported: (gar, n_r), (mdr, n_r), (mdr, n_t).  The genie-aided
    derivative in n_t has no closed form; use dlog_gain_numeric.
    """
    _check_antennas(n_t, n_r, alpha)
    a = alpha
    if receiver == "gar" and wrt == "n_r":
        return -(2.0 / a) * (digamma(n_r - a / 2.0) - digamma(n_r))
    if receiver == "mdr" and wrt == "n_r":
        return -(2.0 * n_t / a) * (
            digamma(n_r * n_t - a / 2.0) - digamma(n_r * n_t)
        )
    if receiver == "mdr" and wrt == "n_t":
        return -(2.0 / a) * (
            1.0 / n_t + n_r * (digamma(n_r * n_t - a / 2.0) - digamma(n_r * n_t))
        )
    raise ValueError(
        f"no closed-form derivative for ({receiver!r}, {wrt!r}); "
        "use dlog_gain_numeric"
    )


def dlog_gain_numeric(
    receiver: str, wrt: str, n_t: int, n_r: int, alpha: float, step: float = 1e-4
) -> float:
    """Central finite difference of a log coding gain in a real antenna count."""
    _check_antennas(n_t, n_r, alpha)
    if receiver == "gar":
        fn = lambda nt, nr: log_coding_gain_gar(nt, nr, alpha)
    elif receiver == "mdr":
        fn = lambda nt, nr: log_coding_gain_mdr(nt, nr, alpha)
    else:
        raise ValueError(f"unknown receiver {receiver!r}")
    if wrt == "n_t":
        return (fn(n_t + step, n_r) - fn(n_t - step, n_r)) / (2.0 * step)
    if wrt == "n_r":
        return (fn(n_t, n_r + step) - fn(n_t, n_r - step)) / (2.0 * step)
    raise ValueError(f"unknown variable {wrt!r}")


@dataclass(frozen=True)
class AlphaThresholds:
    """Exponent thresholds of the three MDR gain-vs-N_t regimes."""

    n_r: int
    alpha0: float
    alpha1: float

    def __post_init__(self):
        if not 0.0 < self.alpha0 < self.alpha1 < 2.0:
            raise ValueError("thresholds must satisfy 0 < alpha0 < alpha1 < 2")


def find_alpha_thresholds(
    n_r: int, nt_lo: int = 2, nt_hi: int = 10, tol: float = 1e-6
) -> AlphaThresholds:
    """Locate the exponents separating the MDR gain's monotonicity regimes.

    Below alpha0 the gain decreases across every adjacent transmit-antenna
    pair in [nt_lo, nt_hi]; above alpha1 it increases across every pair;
    in between it is concave (rises then falls).  Each boundary is the
    bisection root of the worst adjacent log-gain difference.
    """
    if n_r < 1:
        raise ValueError("n_r must be >= 1")
    pairs = [(nt, nt + 1) for nt in range(nt_lo, nt_hi)]

    def diffs(alpha):
        return np.array(
            [
                log_coding_gain_mdr(b, n_r, alpha) - log_coding_gain_mdr(a, n_r, alpha)
                for a, b in pairs
            ]
        )

    def bisect(fn, lo, hi):
        flo, fhi = fn(lo), fn(hi)
        if flo >= 0.0 or fhi <= 0.0:
            raise ValueError(
                f"threshold not bracketed on ({lo}, {hi}): f(lo)={flo:.3g}, "
                f"f(hi)={fhi:.3g}"
            )
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if fn(mid) < 0.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    lo, hi = 0.05, 1.999
    alpha0 = bisect(lambda a: float(np.max(diffs(a))), lo, hi)
    alpha1 = bisect(lambda a: float(np.min(diffs(a))), lo, hi)
    return AlphaThresholds(n_r=n_r, alpha0=alpha0, alpha1=alpha1)


def conditional_pep_gar(h, genie, rho, s, s_prime) -> float:
    """Conditional pairwise error probability of the whitened receiver.

    Q of sqrt(rho * ||H (S - S') A||^2 / 2) with A = diag(1/sqrt(A_k));
    value in [0, 1/2].
    """
    genie = np.asarray(genie, dtype=float)
    if np.any(genie <= 0.0):
        raise ValueError("genie record must be positive")
    delta = np.asarray(s) - np.asarray(s_prime)
    cols = np.asarray(h) @ delta
    arg_sq = rho * float(np.sum(np.abs(cols) ** 2 / genie[None, :])) / 2.0
    return float(q_function(math.sqrt(arg_sq)))


def conditional_pep_mdr_bound(h, genie, rho, s, s_prime) -> float:
    """Upper bound on the minimum-distance receiver's conditional PEP.

    Replaces every subordinator by the block maximum A_max, giving
    Q(sqrt(rho * ||H (S - S')||^2 / (2 A_max))).
    """
    genie = np.asarray(genie, dtype=float)
    if np.any(genie <= 0.0):
        raise ValueError("genie record must be positive")
    a_max = float(np.max(genie))
    delta = np.asarray(s) - np.asarray(s_prime)
    norm_sq = float(np.sum(np.abs(np.asarray(h) @ delta) ** 2))
    return float(q_function(math.sqrt(rho * norm_sq / (2.0 * a_max))))


def difference_scale(codebook: Codebook) -> np.ndarray:
    """Per-pair scale c with (S-S')(S-S')^H = c*I (nan for non-unitary pairs)."""
    k = len(codebook)
    out = np.full((k, k), np.nan)
    eye = np.eye(codebook.n_t)
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            d = codebook.codewords[i] - codebook.codewords[j]
            g = d @ d.conj().T
            c = g[0, 0].real
            if np.allclose(g, c * eye, atol=1e-12):
                out[i, j] = c
    return out


def union_bound_ber(codebook: Codebook, asymptote: PepAsymptote, rho) -> np.ndarray:
    """Union-bound BER from the pairwise asymptote.

    BER(rho) ~ (1/K) * sum over ordered pairs of
    (G_c * c_pair * rho)^(-G_d) * bit_errors / bits_per_codeword, where
    c_pair is each pair's difference-matrix scale (the asymptote assumes
    a unit-scale unitary difference, so c enters as an SNR offset).
    """
    rho = np.asarray(rho, dtype=float)
    scale = difference_scale(codebook)
    if np.isnan(scale[~np.eye(len(codebook), dtype=bool)]).any():
        raise ValueError("codebook has non-unitary codeword differences")
    k = len(codebook)
    total = np.zeros_like(rho)
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            pep = (asymptote.coding_gain * scale[i, j] * rho) ** (
                -asymptote.diversity_order
            )
            total += pep * codebook.bit_distance[i, j]
    return total / (k * codebook.bits_per_codeword)
