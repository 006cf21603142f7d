"""Special functions and the closed-form rate, capacity, gap and exponent
expressions for the multiblock scheme.

Conventions: capacity and rates are in bits per complex channel use; the
large-deviation machinery (v_delta, the exponent K) works in nats, matching
its defining equations, with conversions confined to the API boundary.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import channel
from .errors import DomainError
from .rng import complex_gaussian, philox

EULER_GAMMA = 0.5772156649015328606
LOG2 = math.log(2.0)

# Root-discriminant growth constant of the Martinet tower of totally complex
# fields, and the asymptotic Odlyzko lower bound |d|^{1/2k} >= 22.3.
MARTINET_G = 92.368
ODLYZKO_BOUND = 22.3

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def digamma(x):
    """psi(x) for x > 0: recurrence up to x >= 8, then the asymptotic series.
    Absolute error below 1e-12."""
    if x <= 0:
        raise DomainError("digamma requires x > 0")
    acc = 0.0
    while x < 8.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = (-1.0 / 12.0 + inv2 * (1.0 / 120.0 + inv2 * (-1.0 / 252.0 + inv2 * (
        1.0 / 240.0 + inv2 * (-1.0 / 132.0 + inv2 * (691.0 / 32760.0
                                                     + inv2 * (-1.0 / 12.0)))))))
    return acc + math.log(x) - 0.5 / x + inv2 * series


def lngamma(x):
    """ln Gamma(x) for x > 0 by the Lanczos approximation (g = 7, 9 terms)."""
    if x <= 0:
        raise DomainError("lngamma requires x > 0")
    if x < 0.5:
        return math.log(math.pi / math.sin(math.pi * x)) - lngamma(1.0 - x)
    x -= 1.0
    a = _LANCZOS_COEF[0]
    for i in range(1, 9):
        a += _LANCZOS_COEF[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return 0.5 * math.log(2.0 * math.pi) + (x + 0.5) * math.log(t) - t + math.log(a)


def expected_logdet_rayleigh(n, n_r):
    """E[log2 det H^dag H] for an i.i.d. Rayleigh n_r x n block:
    sum of psi(j) for j = n_r - n + 1 .. n_r, in bits."""
    if not n_r >= n >= 1:
        raise DomainError("requires n_r >= n >= 1")
    return sum(digamma(j) for j in range(n_r - n + 1, n_r + 1)) / LOG2


def rate_theorem1(mu, P, n, C_L):
    """Achievable rate mu + n (log P - log C_L + log pi e / 4n^2), bits.
    mu is the log-det law-of-large-numbers constant in bits."""
    return mu + n * (math.log2(P) - math.log2(C_L)
                     + math.log2(math.pi * math.e / (4.0 * n * n)))


def rate_theorem2(mu, P, n, n_r, C_L):
    """Achievable rate for n_r < n:
    mu + n_r (log P - 2) + (n - n_r) log(n - n_r) + n log pi e / (n^2 C_L)."""
    if n_r >= n:
        raise DomainError("rate_theorem2 requires n_r < n")
    return (mu + n_r * (math.log2(P) - 2.0)
            + (n - n_r) * math.log2(n - n_r)
            + n * math.log2(math.pi * math.e / (n * n * C_L)))


def rate_slow_fading(H, P, n, n_r, C_L):
    """Slow-fading achievable rate for a fixed full-rank block H."""
    H = np.asarray(H, dtype=complex)
    if H.shape != (n_r, n):
        raise DomainError(f"H must be {n_r} x {n}")
    if n_r >= n:
        gram = H.conj().T @ H
        sign, logdet = np.linalg.slogdet((P / n) * gram)
        if sign <= 0:
            raise DomainError("singular channel block")
        return (logdet / LOG2 - n * math.log2(C_L)
                + n * math.log2(math.pi * math.e / (4.0 * n)))
    gram = H @ H.conj().T
    sign, logdet = np.linalg.slogdet((P / n) * gram)
    if sign <= 0:
        raise DomainError("singular channel block")
    return (logdet / LOG2 - 2.0 * n_r
            - (n - n_r) * math.log2(n / (n - n_r))
            + n * math.log2(math.pi * math.e / (n * C_L)))


def white_input_capacity(H, P, n):
    """log2 det(I + (P/n) H H^dag): uniform power allocation, no transmit CSI."""
    H = np.asarray(H, dtype=complex)
    gram = np.eye(H.shape[0]) + (P / n) * (H @ H.conj().T)
    return float(np.linalg.slogdet(gram)[1] / LOG2)


def ergodic_capacity_mc(model, P, samples, seed):
    """Monte Carlo estimate of E[log2 det(I + (P/n) H^dag H)] with its
    standard error.  For correlated models the error is estimated across
    independent chains."""
    n = model.n
    if model.kind == "constant":
        return white_input_capacity(model.fixed_H, P, n), 0.0
    if model.kind == "iid_rayleigh" or model.rho == 0.0:
        gen = philox(seed, 0xE7)
        H = complex_gaussian(gen, (samples, model.n_r, n))
        grams = np.eye(n) + (P / n) * (H.conj().swapaxes(1, 2) @ H)
        vals = np.linalg.slogdet(grams)[1] / LOG2
        return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(len(vals)))
    chains = max(8, min(64, samples // 64))
    length = max(1, samples // chains)
    means = []
    for c in range(chains):
        real = channel.sample(model, length, (seed, c))
        H = real.blocks
        grams = np.eye(n) + (P / n) * (H.conj().swapaxes(1, 2) @ H)
        vals = np.linalg.slogdet(grams)[1] / LOG2
        means.append(vals.mean())
    means = np.array(means)
    return float(means.mean()), float(means.std(ddof=1) / math.sqrt(chains))


def _vdelta_gap(n, n_r, v):
    return sum(digamma(l) - digamma(l - v) for l in range(n_r - n + 1, n_r + 1))


def chernoff_vdelta(n, n_r, delta):
    """The tightest Chernoff tilt: v solving
    delta = sum_l psi(l) - psi(l - v), delta in nats.  Bisection on
    (0, n_r - n + 1), residual below 1e-10."""
    if not n_r >= n >= 1:
        raise DomainError("requires n_r >= n >= 1")
    if delta <= 0:
        raise DomainError("delta must be positive")
    pole = n_r - n + 1
    hi = pole - 1e-12
    if _vdelta_gap(n, n_r, hi) < delta:
        raise DomainError(f"delta = {delta} not reachable below the pole at {pole}")
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _vdelta_gap(n, n_r, mid) < delta:
            lo = mid
        else:
            hi = mid
        if abs(_vdelta_gap(n, n_r, 0.5 * (lo + hi)) - delta) < 1e-10:
            break
    v = 0.5 * (lo + hi)
    if abs(_vdelta_gap(n, n_r, v) - delta) >= 1e-10:
        raise DomainError("bisection failed to reach residual 1e-10")
    return v


def chernoff_exponent(n, n_r, delta):
    """Large-deviation exponent K > 0 of
    P{ mean log det falls delta (nats) below its expectation }:
    K = -sum_j (v psi(j - v) - ln Gamma(j) + ln Gamma(j - v)) at v = v_delta."""
    v = chernoff_vdelta(n, n_r, delta)
    total = 0.0
    for j in range(n_r - n + 1, n_r + 1):
        total += v * digamma(j - v) - lngamma(j) + lngamma(j - v)
    return -total


def gap_constants():
    """The three SISO gap terms: Martinet tower, Odlyzko limit, and the
    exact two-bit Minkowski-Hlawka gap."""
    pie = math.pi * math.e
    return {
        "martinet": math.log2(2.0 * MARTINET_G / pie),
        "odlyzko": math.log2(2.0 * ODLYZKO_BOUND / pie),
        "minkowski_hlawka": math.log2(4.0 / pie) - math.log2(1.0 / pie),
    }


@dataclass
class RateReport:
    P: float
    n: int
    n_r: int
    C_L: float
    mu: float                   # bits
    capacity: float             # estimate C(P)
    capacity_stderr: float
    rate: float                 # applicable theorem rate, bits
    gap: float                  # C - max(0, rate)
    v_delta: Optional[float] = None
    exponent: Optional[float] = None


def rate_report(model, P, C_L, mu=None, samples=20000, seed=0, delta=None):
    """Evaluate capacity, achievable rate and gap for one power level.
    mu defaults to the Rayleigh closed form (n_r >= n) or has to be supplied
    for other statistics."""
    n, n_r = model.n, model.n_r
    if mu is None:
        if model.kind == "constant":
            H = np.asarray(model.fixed_H, dtype=complex)
            gram = H.conj().T @ H if n_r >= n else H @ H.conj().T
            mu = float(np.linalg.slogdet(gram)[1] / LOG2)
        elif n_r >= n:
            mu = expected_logdet_rayleigh(n, n_r)
        else:
            mu = expected_logdet_rayleigh(n_r, n)  # det(H H^dag), swap roles
    cap, stderr = ergodic_capacity_mc(model, P, samples, seed)
    if model.kind == "constant":
        rate = rate_slow_fading(model.fixed_H, P, n, n_r, C_L)
    elif n_r >= n:
        rate = rate_theorem1(mu, P, n, C_L)
    else:
        rate = rate_theorem2(mu, P, n, n_r, C_L)
    vd = K = None
    if delta is not None and n_r >= n:
        vd = chernoff_vdelta(n, n_r, delta)
        K = chernoff_exponent(n, n_r, delta)
    return RateReport(P=P, n=n, n_r=n_r, C_L=C_L, mu=mu, capacity=cap,
                      capacity_stderr=stderr, rate=rate,
                      gap=cap - max(0.0, rate), v_delta=vd, exponent=K)
