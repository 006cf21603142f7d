"""Finite power-constrained codes carved from scaled, shifted lattices.

The scaling constant matches the ball-volume / covolume budget for the
target rate; the shift is found by randomized search (the averaging
argument guarantees existence of a good shift, not how to find one).
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CarveFailed
from .lattice import points_in_ball, realify
from .rng import philox

log = logging.getLogger(__name__)


def log_c_nk(n, k):
    """ln C_{n,k} with C_{n,k} = (pi n k)^{n^2 k} / (n^2 k)!, in log space."""
    m = n * n * k
    return m * math.log(math.pi * n * k) - math.lgamma(m + 1)


def c_nk_root(n, k):
    """C_{n,k}^{1/(n^2 k)}."""
    return math.exp(log_c_nk(n, k) / (n * n * k))


def c_nk_root_stirling(n, k):
    """Stirling form pi*e/n * (2 pi n^2 k)^{-1/(2 n^2 k)} of the same root."""
    m = n * n * k
    return math.pi * math.e / n * (2 * math.pi * m) ** (-1.0 / (2 * m))


def scaling_alpha(P, R, n, k, vol):
    """Scaling alpha with alpha^2 = C_{n,k}^{1/n^2k} P / (2^{R/n} vol^{1/n^2k})."""
    if min(P, n, k, vol) <= 0:
        raise ValueError("P, n, k, vol must be positive")
    m = n * n * k
    log_alpha2 = (log_c_nk(n, k) / m + math.log(P)
                  - (R / n) * math.log(2.0) - math.log(vol) / m)
    return math.sqrt(math.exp(log_alpha2))


@dataclass
class Codebook:
    """Power-constrained code: the points of B(sqrt(Pnk)) in shift + alpha L,
    stored both as matrices and as exact lattice coordinates."""

    lattice: object
    alpha: float
    shift: np.ndarray           # (k, n, n)
    rate_target: float
    power: float
    coords: np.ndarray          # (m, r) int
    matrices: np.ndarray = field(repr=False)  # (m, k, n, n)

    def __len__(self):
        return len(self.coords)

    @property
    def realized_rate(self):
        return math.log2(len(self.coords)) / (self.lattice.n * self.lattice.k)


def count_points_in_ball(lat, alpha, shift, radius, budget=10 ** 8):
    """Number of points of (shift + alpha L) in the closed ball B(radius),
    together with their lattice coordinates."""
    basis = alpha * lat.real_basis
    center = -realify(np.asarray(shift, dtype=complex))
    coords, metrics, _ = points_in_ball(basis, center, radius, budget)
    return len(coords), coords, metrics


def carve(lat, P, R, trials, seed, budget=10 ** 8, truncate_margin=2):
    """Search `trials` uniform shifts in the fundamental parallelotope of
    alpha L for one whose translate packs >= 2^floor(R n k) ball points."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n, k = lat.n, lat.k
    alpha = scaling_alpha(P, R, n, k, lat.volume)
    radius = math.sqrt(P * n * k)
    target = 2 ** math.floor(R * n * k)
    gen = philox(seed, 0xCA)

    best = None
    for _ in range(trials):
        fractions = gen.random(lat.rank)
        shift = alpha * np.tensordot(fractions, lat.blocks, axes=(0, 0))
        count, coords, _ = count_points_in_ball(lat, alpha, shift, radius, budget)
        if best is None or count > best[0]:
            best = (count, shift, coords)
    count, shift, coords = best
    if count < target:
        raise CarveFailed(
            f"best shift packs {count} points, target {target}", best_count=count)

    mats = shift[None, :, :, :] + alpha * lat.points(coords)
    # the power constraint is exact, no tolerance: drop boundary overshoot
    energies = np.sum(np.abs(mats) ** 2, axis=(1, 2, 3))
    keep = energies <= P * n * k
    coords, mats, energies = coords[keep], mats[keep], energies[keep]
    if len(coords) < target:
        raise CarveFailed(
            f"power filter left {len(coords)} points, target {target}",
            best_count=int(len(coords)))

    cap = 2 ** (math.ceil(R * n * k) + truncate_margin)
    if len(coords) > cap:
        log.info("truncating codebook from %d to %d lowest-energy codewords",
                 len(coords), cap)
        order = np.argsort(energies, kind="stable")[:cap]
        order = np.sort(order)
        coords, mats = coords[order], mats[order]

    return Codebook(lattice=lat, alpha=alpha, shift=shift, rate_target=R,
                    power=P, coords=coords, matrices=mats)


def save_codebook(book, path):
    from .lattice import _fmt_complex
    lat = book.lattice
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"n = {lat.n}\nk = {lat.k}\nrank = {lat.rank}\n")
        fh.write(f"alpha = {book.alpha!r}\nP = {book.power!r}\nR = {book.rate_target!r}\n")
        fh.write(f"realized_rate = {book.realized_rate!r}\n")
        fh.write("\n")
        shift_mat = np.concatenate(book.shift, axis=1)
        for row in shift_mat:
            fh.write(" ".join(_fmt_complex(z) for z in row) + "\n")
        for mat_blocks in book.matrices:
            fh.write("\n")
            mat = np.concatenate(mat_blocks, axis=1)
            for row in mat:
                fh.write(" ".join(_fmt_complex(z) for z in row) + "\n")
