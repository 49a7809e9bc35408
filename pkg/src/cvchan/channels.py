"""Gaussian channels as covariance-matrix maps gamma -> X^T gamma X + Y.

Complete positivity is certified at construction time through the matrix
condition Y + iJ - i X^T J X >= 0.  Channel values are immutable; applying
a channel never mutates its input state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .symplectic import (
    DimensionError,
    matrix_from_rowmajor,
    matrix_to_rowmajor,
    symplectic_eigenvalues,
    symplectic_form,
)
from .states import GaussianState

#: Slack on the complete-positivity certificate eigenvalue.
TOL_CP = 1e-10
#: Regularizer for symplectic spectra of singular noise matrices.
NOISE_EPS = 1e-10


class CompletePositivityError(ValueError):
    """The (X, Y) pair does not define a completely positive channel."""


class ChannelSpecError(ValueError):
    """A channel description file is invalid; ``field`` names the culprit."""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"channel spec field '{field}': {reason}")


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    """Immutable channel value (X, Y) with its CP certificate.

    ``kind`` is one of "classical", "thermal", "lossy", "custom"; the
    constructor parameters (eta, nbar) are retained for the kinds that
    have them so closed-form functionals can consume them directly.
    """

    n: int
    x: np.ndarray
    y: np.ndarray
    kind: str
    eta: np.ndarray | None
    nbar: np.ndarray | None
    cp_eigenvalue: float

    def is_identity(self, tol: float = TOL_CP) -> bool:
        eye = np.eye(2 * self.n)
        return bool(np.max(np.abs(self.x - eye)) <= tol and np.max(np.abs(self.y)) <= tol)


def cp_certificate_eigenvalue(x: np.ndarray, y: np.ndarray) -> float:
    """Minimum eigenvalue of the Hermitian matrix Y + iJ - i X^T J X."""
    n = x.shape[0] // 2
    j = symplectic_form(n)
    herm = y + 1j * j - 1j * (x.T @ j @ x)
    return float(np.linalg.eigvalsh(herm)[0])


def make_channel(
    x: np.ndarray,
    y: np.ndarray,
    tol: float = TOL_CP,
    kind: str = "custom",
    eta: np.ndarray | None = None,
    nbar: np.ndarray | None = None,
) -> GaussianChannel:
    """Validate and build a Gaussian channel from its matrix pair.

    Raises ``CompletePositivityError`` when the certificate eigenvalue
    falls below -tol, and rejects asymmetric or indefinite Y.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape[0] % 2 != 0:
        raise DimensionError(f"X must be 2n x 2n, got shape {x.shape}")
    if y.shape != x.shape:
        raise DimensionError(f"Y must match X, got {y.shape} vs {x.shape}")
    asym = float(np.max(np.abs(y - y.T)))
    if asym > tol * max(1.0, float(np.max(np.abs(y)))):
        raise CompletePositivityError(f"Y is not symmetric (residual {asym:.3e})")
    y_min = float(np.linalg.eigvalsh(y)[0])
    if y_min < -tol:
        raise CompletePositivityError(f"Y has a negative eigenvalue ({y_min:.3e})")
    cp_min = cp_certificate_eigenvalue(x, y)
    if cp_min < -tol:
        raise CompletePositivityError(
            f"complete positivity violated: certificate eigenvalue {cp_min:.3e}"
        )
    return GaussianChannel(
        n=x.shape[0] // 2,
        x=x,
        y=y,
        kind=kind,
        eta=None if eta is None else np.asarray(eta, dtype=float),
        nbar=None if nbar is None else np.asarray(nbar, dtype=float),
        cp_eigenvalue=cp_min,
    )


def classical_noise(y: np.ndarray, tol: float = TOL_CP) -> GaussianChannel:
    """Additive classical Gaussian noise: gamma -> gamma + Y, Y >= 0."""
    y = np.asarray(y, dtype=float)
    return make_channel(np.eye(y.shape[0]), y, tol=tol, kind="classical")


def thermal_noise(eta, nbar) -> GaussianChannel:
    """Beamsplitter coupling to thermal reservoirs.

    Per mode: X = sqrt(eta_k) I2 and Y = (2 nbar_k + 1)(1 - eta_k) I2 with
    transmittivity eta_k in [0, 1] and reservoir occupation nbar_k >= 0.
    """
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    nbar = np.atleast_1d(np.asarray(nbar, dtype=float))
    if nbar.size == 1 and eta.size > 1:
        nbar = np.full(eta.size, float(nbar[0]))
    if eta.shape != nbar.shape:
        raise DimensionError(f"eta and nbar must align, got {eta.shape} vs {nbar.shape}")
    if np.any((eta < 0.0) | (eta > 1.0)):
        raise ValueError("transmittivities must lie in [0, 1]")
    if np.any(nbar < 0.0):
        raise ValueError("reservoir occupations must be nonnegative")
    x = np.diag(np.repeat(np.sqrt(eta), 2))
    y = np.diag(np.repeat((2.0 * nbar + 1.0) * (1.0 - eta), 2))
    return make_channel(x, y, kind="thermal", eta=eta, nbar=nbar)


def lossy(eta) -> GaussianChannel:
    """Pure loss (attenuation): the zero-temperature thermal channel."""
    ch = thermal_noise(eta, np.zeros(np.atleast_1d(np.asarray(eta)).size))
    return GaussianChannel(
        n=ch.n, x=ch.x, y=ch.y, kind="lossy", eta=ch.eta, nbar=ch.nbar, cp_eigenvalue=ch.cp_eigenvalue
    )


def _direct_sum(blocks: Sequence[np.ndarray]) -> np.ndarray:
    size = sum(b.shape[0] for b in blocks)
    out = np.zeros((size, size))
    at = 0
    for b in blocks:
        out[at : at + b.shape[0], at : at + b.shape[0]] = b
        at += b.shape[0]
    return out


def tensor(channels: Sequence[GaussianChannel]) -> GaussianChannel:
    """Tensor product of channels, realized by direct sums of X and Y."""
    if len(channels) == 0:
        raise ValueError("tensor product of an empty channel list")
    x = _direct_sum([c.x for c in channels])
    y = _direct_sum([c.y for c in channels])
    kinds = {c.kind for c in channels}
    if kinds == {"classical"}:
        kind = "classical"
        eta = nbar = None
    elif kinds <= {"thermal", "lossy"}:
        kind = "lossy" if kinds == {"lossy"} else "thermal"
        eta = np.concatenate([c.eta for c in channels])
        nbar = np.concatenate([c.nbar for c in channels])
    else:
        kind = "custom"
        eta = nbar = None
    return make_channel(x, y, kind=kind, eta=eta, nbar=nbar)


def apply(channel: GaussianChannel, state: GaussianState) -> GaussianState:
    """Channel action: gamma -> X^T gamma X + Y and m -> X^T m."""
    if state.n != channel.n:
        raise DimensionError(f"channel acts on {channel.n} modes, state has {state.n}")
    gamma = channel.x.T @ state.gamma @ channel.x + channel.y
    gamma = 0.5 * (gamma + gamma.T)
    m = channel.x.T @ state.m
    return GaussianState(gamma, m, state.omega)


def apply_cov(channel: GaussianChannel, gamma: np.ndarray) -> np.ndarray:
    """Covariance-only channel action; no physicality re-validation."""
    out = channel.x.T @ gamma @ channel.x + channel.y
    return 0.5 * (out + out.T)


def noise_spectrum(channel: GaussianChannel, eps: float = NOISE_EPS) -> np.ndarray:
    """Symplectic spectrum of the noise matrix Y, ascending.

    Singular Y is handled by the epsilon-regularized Williamson route:
    the spectrum of Y + eps I is computed and reported as the limit values
    (entries at the eps scale correspond to exact zeros).  The channel
    itself keeps the exact Y; the regularizer never enters the action.
    """
    y = channel.y
    if float(np.linalg.eigvalsh(y)[0]) < eps:
        y = y + eps * np.eye(y.shape[0])
    return symplectic_eigenvalues(y)


def channel_to_record(channel: GaussianChannel) -> dict:
    """Structured-text record of a channel; inverse of ``channel_from_record``."""
    record: dict = {"n_modes": channel.n, "kind": channel.kind}
    if channel.eta is not None:
        record["eta"] = [float(v) for v in channel.eta]
    if channel.nbar is not None:
        record["nbar"] = [float(v) for v in channel.nbar]
    if channel.kind in ("custom",):
        record["X"] = matrix_to_rowmajor(channel.x)
    if channel.kind in ("classical", "custom"):
        record["Y"] = matrix_to_rowmajor(channel.y)
    return record


def channel_from_record(record: dict) -> GaussianChannel:
    """Build a channel from its record, naming the offending field on error."""
    if "n_modes" not in record:
        raise ChannelSpecError("n_modes", "missing")
    try:
        n = int(record["n_modes"])
    except (TypeError, ValueError):
        raise ChannelSpecError("n_modes", "must be an integer") from None
    if n < 1:
        raise ChannelSpecError("n_modes", "must be >= 1")
    kind = record.get("kind")
    if kind not in ("classical", "thermal", "lossy", "custom"):
        raise ChannelSpecError("kind", f"unknown kind {kind!r}")

    def matrix_field(name: str) -> np.ndarray:
        try:
            return matrix_from_rowmajor(record[name], 2 * n, 2 * n)
        except (TypeError, ValueError, DimensionError) as exc:
            raise ChannelSpecError(name, str(exc)) from None

    def vector_field(name: str) -> np.ndarray:
        value = np.asarray(record.get(name, []), dtype=float)
        if value.shape != (n,):
            raise ChannelSpecError(name, f"expected {n} entries, got shape {value.shape}")
        return value

    try:
        if kind == "classical":
            if "Y" not in record:
                raise ChannelSpecError("Y", "missing for a classical channel")
            return classical_noise(matrix_field("Y"))
        if kind == "thermal":
            return thermal_noise(vector_field("eta"), vector_field("nbar"))
        if kind == "lossy":
            return lossy(vector_field("eta"))
        if "X" not in record:
            raise ChannelSpecError("X", "missing for a custom channel")
        if "Y" not in record:
            raise ChannelSpecError("Y", "missing for a custom channel")
        return make_channel(matrix_field("X"), matrix_field("Y"))
    except CompletePositivityError as exc:
        raise ChannelSpecError("Y" if kind == "classical" else "X/Y", str(exc)) from None
    except (ValueError, DimensionError) as exc:
        if isinstance(exc, ChannelSpecError):
            raise
        raise ChannelSpecError("eta/nbar" if kind in ("thermal", "lossy") else "X/Y", str(exc)) from None


def load_channel(path) -> GaussianChannel:
    """Read a channel spec file (JSON record) from disk."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            record = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ChannelSpecError("<file>", f"invalid JSON: {exc}") from None
    return channel_from_record(record)
