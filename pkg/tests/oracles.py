"""Test-side brute-force oracles, deliberately independent of the package's
enumeration machinery."""

import itertools

import numpy as np


def brute_shortest(basis_rows, box=3):
    """Exhaustive SVP over the coordinate box [-box, box]^r."""
    B = np.asarray(basis_rows, dtype=float)
    r = B.shape[0]
    grid = np.array(list(itertools.product(range(-box, box + 1), repeat=r)))
    grid = grid[np.any(grid != 0, axis=1)]
    norms = np.sum((grid @ B) ** 2, axis=1)
    idx = int(np.argmin(norms))
    return float(norms[idx]), grid[idx]


def brute_closest(basis_rows, target):
    """Exhaustive CVP: search the integer box around the least-squares
    solution whose half-width r0 / sigma_min provably contains the optimum
    (r0 = Babai residual, sigma_min = smallest singular value)."""
    B = np.asarray(basis_rows, dtype=float)
    t = np.asarray(target, dtype=float)
    r = B.shape[0]
    pinv = np.linalg.pinv(B.T)          # maps ambient -> coordinates
    z_ls = pinv @ t
    z_babai = np.rint(z_ls)
    r0 = np.linalg.norm(z_babai @ B - t)
    # per-coordinate containment: |z_i - z_ls_i| <= r0 * ||row_i(pinv)||
    widths = r0 * np.linalg.norm(pinv, axis=1) + 1e-9
    ranges = [range(int(np.ceil(z - w)), int(np.floor(z + w)) + 1)
              for z, w in zip(z_ls, widths)]
    best = (float("inf"), None)
    chunk = []
    for cand in itertools.product(*ranges):
        chunk.append(cand)
        if len(chunk) == 65536:
            best = _scan(np.array(chunk), B, t, best)
            chunk = []
    if chunk:
        best = _scan(np.array(chunk), B, t, best)
    assert best[1] is not None
    return best


def _scan(Z, B, t, best):
    d = Z @ B - t
    norms = np.sum(d * d, axis=1)
    idx = int(np.argmin(norms))
    if norms[idx] < best[0]:
        return float(norms[idx]), Z[idx]
    return best
