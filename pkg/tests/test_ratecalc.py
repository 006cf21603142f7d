import math

import numpy as np
import pytest
from scipy import integrate, special

from multiblock import ratecalc as rc
from multiblock.channel import FadingModel
from multiblock.errors import DomainError
from multiblock.rng import philox

GAMMA = rc.EULER_GAMMA
LN2 = math.log(2.0)


# -- special functions -------------------------------------------------------

def test_digamma_known_values():
    assert rc.digamma(1.0) == pytest.approx(-GAMMA, abs=1e-12)
    assert rc.digamma(2.0) == pytest.approx(1.0 - GAMMA, abs=1e-12)
    assert rc.digamma(0.5) == pytest.approx(-GAMMA - 2.0 * math.log(2.0), abs=1e-12)


def test_digamma_domain():
    with pytest.raises(DomainError):
        rc.digamma(0.0)
    with pytest.raises(DomainError):
        rc.digamma(-1.0)


def test_digamma_matches_lngamma_derivative():
    h = 1e-4
    for x in np.linspace(0.5, 20.0, 79):
        fd = (rc.lngamma(x + h) - rc.lngamma(x - h)) / (2.0 * h)
        assert abs(rc.digamma(x) - fd) < 1e-6


def test_lngamma_against_stdlib():
    for x in np.linspace(0.05, 30.0, 200):
        assert rc.lngamma(float(x)) == pytest.approx(math.lgamma(x), abs=1e-12)


# -- Rayleigh log-determinant ------------------------------------------------

@pytest.mark.parametrize("n,n_r", [(1, 1), (1, 2), (2, 2)])
def test_expected_logdet_vs_monte_carlo(n, n_r):
    gen = philox(101, n, n_r)
    samples = 100000
    H = (gen.normal(size=(samples, n_r, n)) + 1j * gen.normal(size=(samples, n_r, n))) / math.sqrt(2.0)
    vals = np.linalg.slogdet(H.conj().swapaxes(1, 2) @ H)[1] / LN2
    stderr = vals.std(ddof=1) / math.sqrt(samples)
    assert abs(vals.mean() - rc.expected_logdet_rayleigh(n, n_r)) <= 3 * stderr


def test_expected_logdet_closed_forms():
    assert rc.expected_logdet_rayleigh(1, 1) == pytest.approx(-GAMMA / LN2, abs=1e-12)
    assert rc.expected_logdet_rayleigh(1, 2) == pytest.approx((1 - GAMMA) / LN2, abs=1e-12)
    assert rc.expected_logdet_rayleigh(2, 2) == pytest.approx(
        (rc.digamma(1) + rc.digamma(2)) / LN2, abs=1e-12)


def test_gamma_moment_identities():
    # E[Z_j^-v] = Gamma(j - v)/Gamma(j) for 2 Z_j ~ chi^2(2j)
    gen = philox(103, 0)
    for j, v in ((1, 0.3), (2, 0.5), (3, 0.9)):
        z = gen.gamma(shape=j, scale=1.0, size=200000)
        vals = z ** (-v)
        stderr = vals.std(ddof=1) / math.sqrt(len(vals))
        expect = math.exp(rc.lngamma(j - v) - rc.lngamma(j))
        assert abs(vals.mean() - expect) <= 3 * stderr


# -- rate formulas -----------------------------------------------------------

def test_gap_constants():
    gaps = rc.gap_constants()
    assert gaps["martinet"] == pytest.approx(4.435, abs=1e-3)
    assert gaps["odlyzko"] == pytest.approx(2.385, abs=1e-3)
    assert gaps["minkowski_hlawka"] == pytest.approx(2.0, abs=1e-12)


def test_rate_theorem1_siso_martinet_identity():
    # mu = -gamma/ln2 and C_L = G/2 reduce to log2(P e^-gamma) - log2(2G/pi e)
    P = 250.0
    mu = -GAMMA / LN2
    lhs = rc.rate_theorem1(mu, P, 1, rc.MARTINET_G / 2.0)
    rhs = math.log2(P * math.exp(-GAMMA)) - math.log2(2 * rc.MARTINET_G / (math.pi * math.e))
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_rate_theorem1_with_tower_constants():
    # with C_L = 23^{(n-1)/(10n)} G / 2 the rate collapses to
    # n (log(P/n) + (1/n) sum psi(i) / ln 2 + log(pi e / 2n) - log 23^{(1-1/n)/10} G)
    for n, P in ((2, 50.0), (3, 400.0)):
        mu = rc.expected_logdet_rayleigh(n, n)
        C_L = 23.0 ** ((n - 1) / (10.0 * n)) * rc.MARTINET_G / 2.0
        lhs = rc.rate_theorem1(mu, P, n, C_L)
        rhs = n * (math.log2(P / n) + mu / n
                   + math.log2(math.pi * math.e / (2.0 * n))
                   - math.log2(23.0 ** ((1.0 - 1.0 / n) / 10.0) * rc.MARTINET_G))
        assert lhs == pytest.approx(rhs, abs=1e-10)


def test_rate_theorem1_ergodic_rearrangement():
    # mu + n(log P - log C_L + log pi e/4n^2)
    #   = (mu + n log(P/n)) - n log C_L + n log(pi e / 4n)
    n, n_r, P, C_L = 2, 3, 77.0, 5.0
    mu = rc.expected_logdet_rayleigh(n, n_r)
    lhs = rc.rate_theorem1(mu, P, n, C_L)
    e_logdet_scaled = mu + n * math.log2(P / n)
    rhs = e_logdet_scaled - n * math.log2(C_L) + n * math.log2(math.pi * math.e / (4.0 * n))
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_rate_theorem2_value():
    # independent recomputation of the printed formula
    n, n_r, P, C_L = 2, 1, 100.0, 10.0
    mu = rc.expected_logdet_rayleigh(1, 2)  # E log det H H^dag for 1x2 H
    got = rc.rate_theorem2(mu, P, n, n_r, C_L)
    want = (mu + 1 * (math.log2(100.0) - 2.0) + 1 * math.log2(1.0)
            + 2 * math.log2(math.pi * math.e / (4.0 * 10.0)))
    assert got == pytest.approx(want, abs=1e-12)
    assert 1 * math.log2(1.0) == 0.0  # the (n - n_r) log(n - n_r) term


def test_rate_theorem2_domain():
    with pytest.raises(DomainError):
        rc.rate_theorem2(0.0, 10.0, 2, 2, 1.0)


def test_rate_slow_fading_identity_channel():
    # C_L = pi e / 4n makes the gap terms cancel: R = n log2(P/n)
    n = 2
    H = np.eye(n, dtype=complex)
    P = 40.0
    got = rc.rate_slow_fading(H, P, n, n, math.pi * math.e / (4.0 * n))
    assert got == pytest.approx(n * math.log2(P / n), abs=1e-12)


def test_slow_fading_gap_bounded():
    # C(P) - max(0, R(P)) <= C(P_min) along a power grid
    n = 2
    rng = np.random.default_rng(7)
    H = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    C_L = 4.0
    grid = [10 ** (db / 10) for db in range(-10, 41, 2)]
    caps = [rc.white_input_capacity(H, P, n) for P in grid]
    rates = [max(0.0, rc.rate_slow_fading(H, P, n, n, C_L)) for P in grid]
    p_min_idx = max(i for i, r in enumerate(rates) if r == 0.0)
    bound = caps[p_min_idx + 1]
    for c, r in zip(caps, rates):
        assert c - r <= bound + 1e-9


def test_ergodic_capacity_small_p():
    model = FadingModel(kind="iid_rayleigh", n=1, n_r=1)
    est, stderr = rc.ergodic_capacity_mc(model, 1e-6, 20000, seed=3)
    assert est < 1e-4


def test_ergodic_capacity_vs_quadrature():
    # E[log2(1 + P|h|^2)] by numerical integration of the exponential density
    P = 10.0
    val, _ = integrate.quad(lambda s: math.log2(1 + P * s) * math.exp(-s), 0, 60)
    model = FadingModel(kind="iid_rayleigh", n=1, n_r=1)
    est, stderr = rc.ergodic_capacity_mc(model, P, 200000, seed=5)
    assert abs(est - val) <= 3 * stderr
    # closed form cross-check: e^{1/P} E_1(1/P) / ln 2
    closed = math.exp(1 / P) * special.exp1(1 / P) / LN2
    assert val == pytest.approx(closed, abs=1e-9)


def test_ergodic_capacity_high_snr_consistency():
    model = FadingModel(kind="iid_rayleigh", n=2, n_r=2)
    diffs = []
    for P in (10.0, 100.0, 1000.0):
        est, _ = rc.ergodic_capacity_mc(model, P, 100000, seed=7)
        approx = 2 * math.log2(P / 2) + rc.expected_logdet_rayleigh(2, 2)
        diffs.append(abs(est - approx))
    assert diffs[-1] < diffs[0]
    assert diffs[-1] < 0.05


def test_gauss_markov_capacity_matches_iid():
    # first-order statistics coincide, so the ergodic capacity agrees
    gm = FadingModel(kind="gauss_markov", n=1, n_r=1, rho=0.8)
    iid = FadingModel(kind="iid_rayleigh", n=1, n_r=1)
    est_gm, se_gm = rc.ergodic_capacity_mc(gm, 10.0, 60000, seed=9)
    est_iid, se_iid = rc.ergodic_capacity_mc(iid, 10.0, 60000, seed=11)
    assert abs(est_gm - est_iid) <= 3 * math.hypot(se_gm, se_iid)


# -- Chernoff machinery -------------------------------------------------------

def test_vdelta_forced_point():
    # psi(1) - psi(1/2) = 2 ln 2 pins v at exactly 1/2
    v = rc.chernoff_vdelta(1, 1, 2.0 * math.log(2.0))
    assert v == pytest.approx(0.5, abs=1e-9)


def test_vdelta_residual_and_monotonicity():
    last = 0.0
    for delta in (0.05, 0.1, 0.3, 0.7, 1.5):
        v = rc.chernoff_vdelta(2, 3, delta)
        gap = sum(rc.digamma(l) - rc.digamma(l - v) for l in (2, 3))
        assert abs(gap - delta) < 1e-10
        assert v > last
        last = v


def test_vdelta_continuity_at_zero():
    assert rc.chernoff_vdelta(1, 1, 1e-8) < 1e-6
    assert rc.chernoff_exponent(1, 1, 1e-8) < 1e-8


def test_vdelta_unreachable():
    with pytest.raises(DomainError):
        rc.chernoff_vdelta(1, 1, 1e13)


def test_exponent_forced_point_value():
    # K = -(0.5 psi(0.5) + ln Gamma(0.5)) at the forced point
    K = rc.chernoff_exponent(1, 1, 2.0 * math.log(2.0))
    expect = -(0.5 * rc.digamma(0.5) + rc.lngamma(0.5))
    assert K == pytest.approx(expect, abs=1e-9)
    assert K == pytest.approx(0.40939007, abs=1e-7)


def test_exponent_positive_on_grid():
    for n in (1, 2, 3):
        for n_r in (1, 2, 3):
            if n_r < n:
                continue
            for delta in (0.1, 0.5, 1.0):
                assert rc.chernoff_exponent(n, n_r, delta) > 0.0


def test_chernoff_bound_on_simulated_paths():
    # empirical P{mu - mean log det >= delta} <= exp(-k K) + 3 stderr
    n = n_r = 1
    delta = 0.4
    K = rc.chernoff_exponent(n, n_r, delta)
    k, paths = 60, 40000
    gen = philox(113, 0)
    e = gen.exponential(size=(paths, k))
    means = np.log(e).mean(axis=1)
    phat = float(np.mean(means < -GAMMA - delta))
    bound = math.exp(-k * K)
    stderr = math.sqrt(bound * (1 - bound) / paths)
    assert phat <= bound + 3 * stderr


def test_gap_strictly_decreasing_above_pmin():
    # ergodic Rayleigh SISO: C(P) - R(P) strictly decreasing past P_min
    mu = -GAMMA / LN2
    C_L = 2.0
    caps, rates = [], []
    for db in range(8, 41, 4):
        P = 10 ** (db / 10)
        val, _ = integrate.quad(lambda s: math.log2(1 + P * s) * math.exp(-s), 0, 80)
        caps.append(val)
        rates.append(rc.rate_theorem1(mu, P, 1, C_L))
    gaps = [c - max(0.0, r) for c, r in zip(caps, rates)]
    assert all(r > 0 for r in rates)
    assert all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))


def test_rate_report_fields():
    # C_L from the Martinet family: a value a genuine lattice family attains,
    # so the theorem rate stays below capacity
    model = FadingModel(kind="iid_rayleigh", n=1, n_r=1)
    rep = rc.rate_report(model, P=100.0, C_L=rc.MARTINET_G / 2, samples=20000,
                         seed=1, delta=0.3)
    assert rep.gap >= 0.0
    assert rep.v_delta is not None and rep.exponent is not None
    assert rep.mu == pytest.approx(-GAMMA / LN2, abs=1e-12)
