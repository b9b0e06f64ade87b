"""Decision rules mapping a received block to a codeword index.

Four receivers are provided:

* GAR  - genie-aided: whitens the noise with the (normally unknown)
  subordinator values, then minimizes Euclidean distance.  The genie
  record's shape selects the dependence structure: per-column values
  whiten column-wise, per-entry values whiten entry-wise (Hadamard).
* MDR  - plain minimum Euclidean distance, optimal only for Gaussian noise.
* ML   - maximizes summed log amplitude densities of residual norms,
  evaluated from a cached density table (per column for the shared
  model, per entry for the i.i.d. model).
* AOR  - minimizes summed log residual norms; needs no noise parameters.

All rules are deterministic; exact metric ties resolve to the lowest
codeword index.  A codeword whose residual vanishes identically wins
immediately (for ML this replaces the ill-defined log of a zero-radius
amplitude density; for AOR it is the natural -inf metric).

Batched variants operate on stacked trials and are the Monte Carlo hot
path; the scalar wrappers match them by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .amplitude import AmplitudePdfTable
from .codes import Codebook
from .stable import NoiseModel

RECEIVER_KINDS = ("gar", "mdr", "ml", "aor")


@dataclass(frozen=True)
class ReceiverKind:
    """Receiver selector: discriminant, noise model, optional density table."""

    kind: str
    model: NoiseModel = NoiseModel.SHARED
    table: AmplitudePdfTable | None = None

    def __post_init__(self):
        if self.kind not in RECEIVER_KINDS:
            raise ValueError(f"unknown receiver kind: {self.kind!r}")
        if self.kind == "ml" and self.table is None:
            raise ValueError("ml receiver requires an amplitude pdf table")


def _check_ml_table(table: AmplitudePdfTable, model: NoiseModel, n_r: int):
    want = 2 * n_r if model is NoiseModel.SHARED else 2
    if table.spec.d != want:
        raise ValueError(
            f"table dimension {table.spec.d} does not match model "
            f"{model.value} with n_r={n_r} (want d={want})"
        )


def batch_residuals(y, h, rho, codebook: Codebook):
    """Residuals Y - sqrt(rho) H S for every codeword.

    y: (B, n_r, t_s), h: (B, n_r, n_t) -> (B, K, n_r, t_s).
    """
    hs = np.einsum("brn,knt->bkrt", h, codebook.codewords)
    return y[:, None, :, :] - np.sqrt(rho) * hs


def batch_mdr(y, h, rho, codebook: Codebook):
    r = batch_residuals(y, h, rho, codebook)
    metric = (np.abs(r) ** 2).sum(axis=(2, 3))
    return np.argmin(metric, axis=1)


def batch_gar(y, h, genie, rho, codebook: Codebook):
    r = batch_residuals(y, h, rho, codebook)
    sq = np.abs(r) ** 2
    if genie.ndim == 2:  # (B, t_s): shared subordinator per column
        metric = (sq.sum(axis=2) / genie[:, None, :]).sum(axis=2)
    elif genie.ndim == 3:  # (B, n_r, t_s): per-entry
        metric = (sq / genie[:, None, :, :]).sum(axis=(2, 3))
    else:
        raise ValueError("genie record must be per-column or per-entry")
    return np.argmin(metric, axis=1)


def batch_aor(y, h, rho, codebook: Codebook, model: NoiseModel):
    r = batch_residuals(y, h, rho, codebook)
    sq = np.abs(r) ** 2
    with np.errstate(divide="ignore"):
        if model is NoiseModel.SHARED:
            metric = np.log(sq.sum(axis=2)).sum(axis=2)
        else:
            metric = np.log(sq).sum(axis=(2, 3))
    return np.argmin(metric, axis=1)


def batch_ml(y, h, rho, codebook: Codebook, model: NoiseModel, table: AmplitudePdfTable):
    _check_ml_table(table, model, y.shape[1])
    r = batch_residuals(y, h, rho, codebook)
    sq = np.abs(r) ** 2
    if model is NoiseModel.SHARED:
        radii = np.sqrt(sq.sum(axis=2))
    else:
        radii = np.sqrt(sq)
    with np.errstate(divide="ignore"):
        log_f = table.log_pdf(radii.ravel()).reshape(radii.shape)
    metric = log_f.sum(axis=tuple(range(2, log_f.ndim)))
    # a codeword that fits the block exactly wins outright; the relative
    # threshold absorbs float cancellation noise in the residual
    total = sq.sum(axis=(2, 3))
    exact = total <= 1e-20 * total.max(axis=1, keepdims=True)
    if np.any(exact):
        metric = np.where(exact, np.inf, metric)
    return np.argmax(metric, axis=1)


def gar_decode(y, h, genie, rho, codebook: Codebook) -> int:
    """Whitened Euclidean decision; requires the genie record."""
    if genie is None:
        raise ValueError("gar_decode requires the genie record")
    genie = np.asarray(genie, dtype=float)
    return int(batch_gar(y[None], h[None], genie[None], rho, codebook)[0])


def mdr_decode(y, h, rho, codebook: Codebook) -> int:
    """Minimum Euclidean distance decision."""
    return int(batch_mdr(y[None], h[None], rho, codebook)[0])


def ml_decode(
    y,
    h,
    rho,
    codebook: Codebook,
    model: NoiseModel,
    table: AmplitudePdfTable,
) -> int:
    """Maximum summed log amplitude density of residuals."""
    return int(batch_ml(y[None], h[None], rho, codebook, model, table)[0])


def aor_decode(y, h, rho, codebook: Codebook, model: NoiseModel) -> int:
    """Minimum summed log residual norm; noise-parameter free."""
    return int(batch_aor(y[None], h[None], rho, codebook, model)[0])
