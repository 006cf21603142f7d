"""Decoders for the multiblock channel: ML over a finite codebook, naive
lattice decoding (closest point in the infinite shifted scaled lattice), and
the per-block thin-QR reduction that maps an n_r > n system to square form.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, SingularChannel
from .lattice import DEFAULT_BUDGET, PreparedCVP, realify


@dataclass
class DecodeResult:
    coords: Optional[list]      # lattice coordinates, None for pure-ML results
    index: Optional[int]        # codeword index, None for lattice decoding
    metric: float               # sum_i ||Y_i - H_i Xhat_i||^2 of the decision
    nodes: int                  # enumeration / comparison effort
    approximate: bool = False   # True when the budget forced a Babai answer


def _check_full_rank(H):
    sv = np.linalg.svd(H, compute_uv=False)
    if np.any(sv[..., -1] <= 1e-12 * max(1.0, float(sv.max()))):
        raise SingularChannel("fading block numerically rank deficient")


def ml_decode(Y, H, codebook):
    """argmin over codewords of sum_i ||Y_i - H_i X_i||^2, ties broken by the
    lowest codeword index."""
    if len(codebook) == 0:
        raise ValueError("codebook is empty")
    Y = np.asarray(Y, dtype=complex)
    H = np.asarray(H, dtype=complex)
    diffs = Y[None, :, :, :] - H[None, :, :, :] @ codebook.matrices
    metrics = np.sum(np.abs(diffs) ** 2, axis=(1, 2, 3))
    idx = int(np.argmin(metrics))
    return DecodeResult(coords=list(codebook.coords[idx]), index=idx,
                        metric=float(metrics[idx]), nodes=len(codebook))


class LatticeDecoder:
    """Naive lattice decoder for a fixed (H, alpha, L, shift): closest point
    of shift + alpha L to Y under the faded metric.  Preparing once amortizes
    the LLL reduction over many received words."""

    def __init__(self, H, alpha, lat, shift=None):
        H = np.asarray(H, dtype=complex)
        k, n_r, n = H.shape
        if n_r < n:
            # the faded infinite lattice is not discrete here; only ML applies
            raise DomainError("lattice decoding requires n_r >= n")
        _check_full_rank(H)
        self.H = H
        self.alpha = alpha
        self.lat = lat
        self.shift = (np.zeros((k, n, n), dtype=complex) if shift is None
                      else np.asarray(shift, dtype=complex))
        faded = np.einsum("irc,jicd->jird", H, alpha * lat.blocks)
        self.basis_rows = realify(faded)
        self.prepared = PreparedCVP(self.basis_rows)
        self._shift_rx = realify(np.einsum("irc,icd->ird", H, self.shift))

    def decode(self, Y, budget=DEFAULT_BUDGET):
        target = realify(np.asarray(Y, dtype=complex)) - self._shift_rx
        metric, coords, nodes, exact = self.prepared.closest(target, budget)
        xhat = self.shift + self.alpha * self.lat.point(coords)
        direct = float(np.sum(np.abs(np.asarray(Y) - self.H @ xhat) ** 2))
        return DecodeResult(coords=coords, index=None, metric=direct,
                            nodes=nodes, approximate=not exact)

    def decodes_to(self, Y, coords, budget=DEFAULT_BUDGET):
        """Fast error check: True iff the decoder would return `coords`.
        Equivalent to decode(...) == coords up to ties of measure zero; only
        searches for a strictly better point than the hypothesized one."""
        Y = np.asarray(Y, dtype=complex)
        xhyp = self.shift + self.alpha * self.lat.point(coords)
        resid = float(np.sum(np.abs(Y - self.H @ xhyp) ** 2))
        target = (realify(Y) - self._shift_rx
                  - np.asarray(coords, float) @ self.basis_rows)
        found, nodes = self.prepared.exists_closer(target, resid, budget)
        return not found, nodes


def lattice_decode(Y, H, alpha, lat, shift=None, budget=DEFAULT_BUDGET):
    """One-shot naive lattice decoding; see LatticeDecoder."""
    return LatticeDecoder(H, alpha, lat, shift).decode(Y, budget)


def qr_reduce(Y, H):
    """Per-block thin QR: H_i = Q_i' R_i' with R_i' upper triangular n x n and
    positive real diagonal; Y_i' = Q_i'^dag Y_i.  Distances to lattice points
    are preserved: ||H_i X|| = ||R_i' X||."""
    Y = np.asarray(Y, dtype=complex)
    H = np.asarray(H, dtype=complex)
    k, n_r, n = H.shape
    if n_r <= n:
        raise ValueError("qr_reduce applies to n_r > n")
    _check_full_rank(H)
    Yp = np.empty((k, n, Y.shape[2]), dtype=complex)
    Rp = np.empty((k, n, n), dtype=complex)
    for i in range(k):
        Q, R = np.linalg.qr(H[i], mode="reduced")
        phases = np.diag(R).copy()
        mags = np.abs(phases)
        if np.any(mags <= 1e-12 * mags.max()):
            raise SingularChannel("rank-deficient block in QR reduction")
        u = phases / mags
        R = R * u.conj()[:, None]
        Q = Q * u[None, :]
        Rp[i] = R
        Yp[i] = Q.conj().T @ Y[i]
    return Yp, Rp


def mismatched_bound(H, X):
    """Lower bound sum_j lambda_j l_j <= ||H X||^2 with the eigenvalues of
    H^dag H ascending and those of X X^dag descending."""
    H = np.asarray(H, dtype=complex)
    X = np.asarray(X, dtype=complex)
    lam = np.linalg.eigvalsh(H.conj().T @ H)
    lam = np.clip(lam, 0.0, None)                 # ascending
    ell = np.linalg.eigvalsh(X @ X.conj().T)[::-1]
    ell = np.clip(ell, 0.0, None)                 # descending
    return float(lam @ ell)
