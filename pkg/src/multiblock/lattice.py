"""Matrix lattices in the space of k blocks of n x n complex matrices.

Realification convention: a complex matrix tuple maps to a real vector by
iterating blocks in order, each block in column-major order, emitting
(Re, Im) per complex entry.  The Gram matrix of that real vector equals
Re Tr(X Y^dagger), so all geometry runs on the realified basis.

Shortest vectors and closest points use Schnorr-Euchner enumeration with
LLL(0.99) preprocessing; list mode enumerates every point of a ball.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (BudgetExceeded, DegenerateLattice, EmptyBall,
                     SingularChannel)
from .rng import complex_gaussian, philox

DEFAULT_BUDGET = 10 ** 8
LLL_DELTA = 0.99
LLL_ETA = 0.51


def realify(blocks):
    """(..., k, rows, cols) complex -> (..., 2*k*rows*cols) real."""
    blocks = np.asarray(blocks)
    colmajor = np.swapaxes(blocks, -1, -2)
    flat = colmajor.reshape(colmajor.shape[:-3] + (-1,))
    out = np.empty(flat.shape[:-1] + (2 * flat.shape[-1],))
    out[..., 0::2] = flat.real
    out[..., 1::2] = flat.imag
    return out


def pdet(blocks):
    """Product of block determinants."""
    return complex(np.prod(np.linalg.det(np.asarray(blocks))))


class MatrixLattice:
    """Lattice with basis matrices B_1..B_r, each k blocks of n x n.

    Immutable after construction; enumeration uses per-call state.
    """

    def __init__(self, blocks, validate=True):
        blocks = np.asarray(blocks, dtype=complex)
        if blocks.ndim != 4 or blocks.shape[2] != blocks.shape[3]:
            raise ValueError("expected basis of shape (r, k, n, n)")
        self.blocks = blocks
        self.rank, self.k, self.n, _ = blocks.shape
        self.real_basis = realify(blocks)
        self.gram = self.real_basis @ self.real_basis.T
        eig = np.linalg.eigvalsh(self.gram)
        if validate and eig[0] <= 1e-10 * eig[-1]:
            raise DegenerateLattice(
                f"Gram matrix numerically singular (eigs {eig[0]:.3e}..{eig[-1]:.3e})")
        self.volume = float(np.sqrt(abs(np.linalg.det(self.gram))))

    @property
    def full(self):
        return self.rank == 2 * self.n * self.n * self.k

    def matrix(self, j):
        """Basis matrix j as an n x nk matrix."""
        return np.concatenate(self.blocks[j], axis=1)

    def matrices(self):
        return np.concatenate(self.blocks, axis=2)

    def point(self, coords):
        """Lattice point with the given integer coordinates, as blocks."""
        return np.tensordot(np.asarray(coords, dtype=float), self.blocks, axes=(0, 0))

    def points(self, coord_rows):
        return np.tensordot(np.asarray(coord_rows, dtype=float), self.blocks, axes=(1, 0))

    def scale(self, alpha):
        return MatrixLattice(alpha * self.blocks, validate=False)

    def __repr__(self):
        return (f"MatrixLattice(n={self.n}, k={self.k}, rank={self.rank}, "
                f"vol={self.volume:.6g})")


def field_lattice(field):
    """Canonical embedding of the ring of integers of a totally complex
    field, as a rank-2k lattice of 1x1 blocks."""
    k = field.k
    blocks = np.empty((field.degree, k, 1, 1), dtype=complex)
    for j in range(field.degree):
        w = field.element([1 if t == j else 0 for t in range(field.degree)])
        blocks[j, :, 0, 0] = field.canonical_embed(w)
    return MatrixLattice(blocks)


# ---------------------------------------------------------------------------
# LLL reduction

def lll_reduce(basis, delta=LLL_DELTA, eta=LLL_ETA):
    """LLL-reduce the rows of `basis`.  Returns (reduced, U) with
    reduced = U @ basis and U unimodular (as a list of integer rows)."""
    b = np.array(basis, dtype=float)
    r = b.shape[0]
    U = [[1 if i == j else 0 for j in range(r)] for i in range(r)]

    def gso():
        ortho = np.zeros_like(b)
        mu = np.zeros((r, r))
        norms = np.zeros(r)
        for i in range(r):
            v = b[i].copy()
            for j in range(i):
                mu[i, j] = (b[i] @ ortho[j]) / norms[j] if norms[j] > 0 else 0.0
                v -= mu[i, j] * ortho[j]
            ortho[i] = v
            norms[i] = v @ v
        return mu, norms

    mu, norms = gso()
    k = 1
    while k < r:
        for j in range(k - 1, -1, -1):
            if abs(mu[k, j]) > eta:
                q = round(mu[k, j])
                b[k] -= q * b[j]
                U[k] = [uk - q * uj for uk, uj in zip(U[k], U[j])]
                mu, norms = gso()
        if norms[k] >= (delta - mu[k, k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[[k, k - 1]] = b[[k - 1, k]]
            U[k], U[k - 1] = U[k - 1], U[k]
            mu, norms = gso()
            k = max(k - 1, 1)
    return b, U


# ---------------------------------------------------------------------------
# Schnorr-Euchner enumeration

class _Search:
    """One enumeration run over ||R z - y||^2 <= radius2."""

    __slots__ = ("leaves", "best_z", "best_metric", "nodes", "exhausted")

    def __init__(self):
        self.leaves = []
        self.best_z = None
        self.best_metric = None
        self.nodes = 0
        self.exhausted = False


def _enumerate(R, y, radius2, budget, mode="min", exclude_zero=False,
               early_exit_below=None, collect_limit=None):
    """Depth-first Schnorr-Euchner search.

    mode "min": track the single best leaf, shrinking the radius.
    mode "list": record every leaf with metric <= radius2 (radius fixed).
    early_exit_below: stop at the first non-zero leaf strictly below this
    metric (used for fast error detection).
    """
    r = R.shape[0]
    Rl = R.tolist()
    diag = [Rl[i][i] for i in range(r)]
    yl = [float(v) for v in y]
    out = _Search()
    C = float(radius2)
    bound_slack = 1e-9 * max(C, 1.0) if mode == "list" else 0.0

    z = [0] * r
    step = [0] * r
    dist = [0.0] * r      # accumulated metric from levels above
    center = [0.0] * r

    def prepare(level):
        p = yl[level]
        row = Rl[level]
        for j in range(level + 1, r):
            p -= row[j] * z[j]
        c = p / diag[level]
        center[level] = c
        z[level] = int(round(c))
        step[level] = 1 if c >= z[level] else -1

    level = r - 1
    dist[level] = 0.0
    prepare(level)
    while True:
        out.nodes += 1
        if out.nodes > budget:
            raise BudgetExceeded(f"enumeration exceeded {budget} nodes", best=out)
        t = (center[level] - z[level]) * diag[level]
        new_dist = dist[level] + t * t
        if new_dist <= C + bound_slack:
            if level > 0:
                level -= 1
                dist[level] = new_dist
                prepare(level)
                continue
            # leaf
            is_zero = not any(z)
            if not (exclude_zero and is_zero):
                if mode == "list":
                    out.leaves.append((list(z), new_dist))
                    if collect_limit is not None and len(out.leaves) > collect_limit:
                        raise BudgetExceeded("ball contains too many points", best=out)
                else:
                    if out.best_metric is None or new_dist < out.best_metric:
                        out.best_metric = new_dist
                        out.best_z = list(z)
                        C = new_dist
                    if (early_exit_below is not None and not is_zero
                            and new_dist < early_exit_below):
                        return out
            z[level] += step[level]
            step[level] = -step[level] - (1 if step[level] > 0 else -1)
        else:
            level += 1
            if level == r:
                out.exhausted = True
                return out
            z[level] += step[level]
            step[level] = -step[level] - (1 if step[level] > 0 else -1)


class PreparedCVP:
    """LLL reduction and QR factorization of a fixed basis, reused across
    many targets (one preparation per basis, one cheap projection per call)."""

    def __init__(self, basis_rows):
        self.reduced, self.U = lll_reduce(basis_rows)
        A = self.reduced.T
        Q, R = np.linalg.qr(A, mode="reduced")
        signs = np.sign(np.diag(R))
        signs[signs == 0] = 1.0
        self.R = R * signs[:, None]
        self.Q = Q * signs[None, :]
        self.rank = self.reduced.shape[0]

    def project(self, target):
        t = np.asarray(target, dtype=float)
        y = self.Q.T @ t
        offset2 = float(t @ t - y @ y)
        return y, max(offset2, 0.0)

    def closest(self, target, budget=DEFAULT_BUDGET, early_exit_below=None):
        """CVP; returns (metric2, coords, nodes, exact_flag).  On budget
        exhaustion the best leaf so far (Babai or better) is returned with
        exact_flag False."""
        y, offset2 = self.project(target)
        try:
            res = _enumerate(self.R, y, np.inf, budget, mode="min",
                             early_exit_below=(None if early_exit_below is None
                                               else early_exit_below - offset2))
            exact = True
        except BudgetExceeded as exc:
            res = exc.best
            exact = False
            if res.best_z is None:
                raise
        return (res.best_metric + offset2, _apply_u(res.best_z, self.U),
                res.nodes, exact)

    def exists_closer(self, target, than_metric, budget=DEFAULT_BUDGET):
        """True iff some nonzero-coordinate point lies strictly closer to the
        target than sqrt(than_metric)."""
        y, offset2 = self.project(target)
        thr = than_metric - offset2
        if thr <= 0:
            return False, 0
        res = _enumerate(self.R, y, thr * (1 - 1e-12), budget, mode="min",
                         exclude_zero=True, early_exit_below=thr * (1 - 1e-12))
        found = res.best_z is not None and any(res.best_z)
        return found, res.nodes

    def shortest(self, budget=DEFAULT_BUDGET):
        y = np.zeros(self.rank)
        start = float(min(np.sum(self.reduced ** 2, axis=1))) * (1 + 1e-12) + 1e-12
        try:
            res = _enumerate(self.R, y, start, budget, mode="min", exclude_zero=True)
        except BudgetExceeded as exc:
            best = exc.best
            if best.best_z is not None:
                exc.best = (best.best_metric, _apply_u(best.best_z, self.U),
                            best.nodes)
            raise
        return res.best_metric, _apply_u(res.best_z, self.U), res.nodes

    def ball(self, center, radius, budget=DEFAULT_BUDGET, collect_limit=None):
        """All points z B with ||z B - center|| <= radius (closed ball)."""
        y, offset2 = self.project(center)
        bound = radius * radius - offset2
        if bound < 0:
            return np.zeros((0, self.rank), dtype=int), np.zeros(0), 0
        res = _enumerate(self.R, y, bound, budget, mode="list",
                         collect_limit=collect_limit)
        if not res.leaves:
            return np.zeros((0, self.rank), dtype=int), np.zeros(0), res.nodes
        coords = np.array([_apply_u(z, self.U) for z, _ in res.leaves], dtype=int)
        metrics = np.array([m + offset2 for _, m in res.leaves])
        return coords, metrics, res.nodes


def shortest_vector(basis_rows, budget=DEFAULT_BUDGET):
    """Exact SVP on the rows of basis_rows.  Returns (norm2, coords, nodes)."""
    return PreparedCVP(basis_rows).shortest(budget)


def closest_point(basis_rows, target, budget=DEFAULT_BUDGET, early_exit_below=None):
    """One-shot CVP; see PreparedCVP.closest."""
    return PreparedCVP(basis_rows).closest(target, budget, early_exit_below)


def exists_closer_point(basis_rows, target, than_metric, budget=DEFAULT_BUDGET):
    """One-shot form of PreparedCVP.exists_closer."""
    return PreparedCVP(basis_rows).exists_closer(target, than_metric, budget)


def points_in_ball(basis_rows, center, radius, budget=DEFAULT_BUDGET,
                   collect_limit=None):
    """One-shot form of PreparedCVP.ball."""
    return PreparedCVP(basis_rows).ball(center, radius, budget, collect_limit)


def _apply_u(z, U):
    r = len(U)
    out = [0] * r
    for zi, row in zip(z, U):
        if zi:
            for j in range(r):
                out[j] += zi * row[j]
    return out


# ---------------------------------------------------------------------------
# invariants

@dataclass
class InvariantReport:
    name: str
    n: int
    k: int
    rank: int
    volume: float
    hermite: float
    shortest_vector: list
    det_min: float
    det_min_certificate: str
    det_min_radius: float
    delta: float
    rh_lower: float


def hermite_invariant(lat, budget=DEFAULT_BUDGET):
    """min ||X||^2 / Vol^{2/rank} over nonzero lattice points, plus witness
    coordinates and node count."""
    norm2, coords, nodes = shortest_vector(lat.real_basis, budget)
    return norm2 / lat.volume ** (2.0 / lat.rank), coords, nodes


def min_pdet(lat, radius, budget=DEFAULT_BUDGET):
    """Upper bound on det_min: the smallest |pdet| over nonzero points of the
    closed ball of the given radius.  Completeness over the infinite lattice
    is not claimed."""
    coords, _, _ = points_in_ball(lat.real_basis, np.zeros(lat.real_basis.shape[1]),
                                  radius, budget)
    nonzero = coords[np.any(coords != 0, axis=1)]
    if len(nonzero) == 0:
        raise EmptyBall(f"no nonzero lattice point within radius {radius}")
    pts = lat.points(nonzero)
    dets = np.abs(np.prod(np.linalg.det(pts), axis=1))
    idx = int(np.argmin(dets))
    return float(dets[idx]), list(nonzero[idx])


def normalized_min_det(lat, det_min):
    """det_min after rescaling the lattice to unit covolume."""
    return det_min / lat.volume ** (lat.n * lat.k / lat.rank)


def fade(lat, H):
    """Lattice with basis H_d B_1, ..., H_d B_r for square blocks H_i."""
    H = np.asarray(H, dtype=complex)
    if H.shape != (lat.k, lat.n, lat.n):
        raise ValueError(f"expected {lat.k} blocks of shape {lat.n}x{lat.n}")
    dets = np.linalg.det(H)
    if np.any(np.abs(dets) <= 1e-12):
        raise SingularChannel("singular fading block")
    faded = np.einsum("irc,jicd->jird", H, lat.blocks)
    return MatrixLattice(faded, validate=False)


def hadamard_check(blocks):
    """Both sides of |pdet(X)| <= (||X||^2 / nk)^{nk/2}."""
    blocks = np.asarray(blocks, dtype=complex)
    k, n, _ = blocks.shape
    lhs = abs(pdet(blocks))
    norm2 = float(np.sum(np.abs(blocks) ** 2))
    m = n * k
    rhs = (norm2 / m) ** (m / 2.0)
    return lhs, rhs


def form_eval(form, X):
    """Evaluate the homogeneous forms: f1 = sum |x|^2 (degree 2),
    f2 = prod |x_i| over k scalar blocks (degree k), f3 = prod |det X_i|
    (degree nk)."""
    X = np.asarray(X, dtype=complex)
    if form == "f1":
        return float(np.sum(np.abs(X) ** 2))
    if form == "f2":
        if X.ndim == 1:
            return float(np.prod(np.abs(X)))
        if X.ndim == 3 and X.shape[1] == X.shape[2] == 1:
            return float(np.prod(np.abs(X[:, 0, 0])))
        raise ValueError("f2 requires n = 1")
    if form == "f3":
        if X.ndim != 3 or X.shape[1] != X.shape[2]:
            raise ValueError("f3 requires square blocks")
        return float(abs(pdet(X)))
    raise ValueError(f"unknown form {form!r}")


def homogeneous_minimum(form, lat, radius=None, budget=DEFAULT_BUDGET):
    """Per-lattice homogeneous minimum: min |F(X)| over nonzero points after
    rescaling the lattice to unit covolume.  For f1 this is the Hermite
    invariant (exact), for f2 the normalized minimum product distance and for
    f3 the normalized minimum determinant (enumerated upper bounds within the
    stated radius); suprema over all lattices are out of scope."""
    unit = lat.scale(lat.volume ** (-1.0 / lat.rank))
    if form == "f1":
        norm2, _, _ = shortest_vector(unit.real_basis, budget)
        return norm2
    if form == "f2" and lat.n != 1:
        raise ValueError("f2 requires n = 1")
    if radius is None:
        radius = 1.5 * np.sqrt(lat.n * lat.k) * max(1.0, unit.volume ** (1.0 / lat.rank))
    coords, _, _ = points_in_ball(unit.real_basis,
                                  np.zeros(unit.real_basis.shape[1]),
                                  radius, budget)
    nonzero = coords[np.any(coords != 0, axis=1)]
    if len(nonzero) == 0:
        raise EmptyBall(f"no nonzero lattice point within radius {radius}")
    pts = unit.points(nonzero)
    return float(min(form_eval(form, p) for p in pts))


def invariant_report(lat, name="", det_min=None, certificate="algebraic",
                     radius=None, budget=DEFAULT_BUDGET):
    """Bundle the geometric invariants of one lattice.  det_min either comes
    from an algebraic certificate (NVD orders) or from ball enumeration, in
    which case it is only an upper bound."""
    h, witness, _ = hermite_invariant(lat, budget)
    if radius is None:
        radius = 1.5 * np.sqrt(lat.n * lat.k)
    if det_min is None:
        det_min, _ = min_pdet(lat, radius, budget)
        certificate = "enumerated-upper-bound"
    delta = normalized_min_det(lat, det_min)
    rh_lower = lat.n * lat.k * delta ** (2.0 / (lat.n * lat.k))
    return InvariantReport(
        name=name, n=lat.n, k=lat.k, rank=lat.rank, volume=lat.volume,
        hermite=h, shortest_vector=witness, det_min=det_min,
        det_min_certificate=certificate, det_min_radius=radius,
        delta=delta, rh_lower=rh_lower)


def sample_pdet1_fade(n, k, gen, min_rel_sv=0.05):
    """One random fade with pdet = 1: complex Gaussian blocks, rejection
    sampled against bad conditioning, rescaled to unit product determinant."""
    while True:
        H = complex_gaussian(gen, (k, n, n))
        sv = np.linalg.svd(H, compute_uv=False)
        if sv[..., -1].min() >= min_rel_sv * sv[..., 0].max():
            break
    p = pdet(H)
    H = H / (p ** (1.0 / (n * k)))
    return H


def reduced_hermite_probe(lat, samples, seed, budget=DEFAULT_BUDGET):
    """Empirical min of h(HL) over sampled pdet-1 fades; a consistency probe
    for the closed-form lower bound, not an exact infimum."""
    best = np.inf
    for t in range(samples):
        gen = philox(seed, 0x7E, t)
        H = sample_pdet1_fade(lat.n, lat.k, gen)
        h, _, _ = hermite_invariant(fade(lat, H), budget)
        best = min(best, h)
    return best


# ---------------------------------------------------------------------------
# plain-text export

def _fmt_complex(z):
    return f"{z.real:.17g}{z.imag:+.17g}j"


def save_lattice(lat, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"n = {lat.n}\nk = {lat.k}\nrank = {lat.rank}\n")
        for j in range(lat.rank):
            fh.write("\n")
            mat = lat.matrix(j)
            for row in mat:
                fh.write(" ".join(_fmt_complex(z) for z in row) + "\n")


def load_lattice(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    header, *stanzas = [b for b in text.split("\n\n") if b.strip()]
    meta = {}
    for line in header.splitlines():
        key, value = line.split("=")
        meta[key.strip()] = int(value)
    n, k, rank = meta["n"], meta["k"], meta["rank"]
    blocks = np.empty((rank, k, n, n), dtype=complex)
    for j, stanza in enumerate(stanzas):
        rows = [[complex(tok) for tok in line.split()]
                for line in stanza.strip().splitlines()]
        mat = np.array(rows)
        for i in range(k):
            blocks[j, i] = mat[:, i * n:(i + 1) * n]
    return MatrixLattice(blocks, validate=False)
