"""Word-error-rate simulation drivers shared by the CLI and the test suite.

Trials are seed-split: trial t of a run with seed s draws its channel and
noise from independent Philox streams keyed by (s, t), so runs are
reproducible and trivially parallelizable.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import channel
from .codebook import scaling_alpha
from .decoder import LatticeDecoder, ml_decode
from .lattice import DEFAULT_BUDGET
from .rng import philox


@dataclass
class WERPoint:
    P: float
    rate: float
    trials: int
    errors: int
    wer: float
    stderr: float
    avg_nodes: float
    decoder: str
    flag: str = ""

    @property
    def snr_db(self):
        return 10.0 * math.log10(self.P)


def _wer_stderr(errors, trials):
    p = errors / trials
    return math.sqrt(max(p * (1.0 - p), 0.0) / trials)


def simulate_infinite_wer(lat, model, P, R, trials, seed, budget=DEFAULT_BUDGET,
                          noiseless=False):
    """Naive lattice decoding on the infinite scaled lattice: transmit a fixed
    lattice point (the error event is shift invariant) and count trials where
    the closest point moves.  Works at rates where a codebook would be
    intractably large."""
    n, k = lat.n, lat.k
    alpha = scaling_alpha(P, R, n, k, lat.volume)
    zero = [0] * lat.rank
    errors = 0
    nodes = 0
    dec = None
    if model.kind == "constant":
        real = channel.sample(model, k, (seed, 0))
        dec = LatticeDecoder(real.blocks, alpha, lat)
    x0 = np.zeros((k, n, n), dtype=complex)
    for t in range(trials):
        if model.kind != "constant":
            real = channel.sample(model, k, (seed, t))
            dec = LatticeDecoder(real.blocks, alpha, lat)
        y = channel.transmit(x0, real, (seed, t), noiseless=noiseless)
        ok, nd = dec.decodes_to(y, zero, budget)
        nodes += nd
        if not ok:
            errors += 1
    return WERPoint(P=P, rate=R, trials=trials, errors=errors,
                    wer=errors / trials, stderr=_wer_stderr(errors, trials),
                    avg_nodes=nodes / trials, decoder="lattice")


def simulate_codebook_wer(book, model, trials, seed, decoders=("ml", "lattice"),
                          budget=DEFAULT_BUDGET, noiseless=False):
    """Transmit random codewords of a finite codebook and decode with ML
    and/or naive lattice decoding.  A lattice decision outside the codebook
    counts as an error."""
    lat = book.lattice
    k = lat.k
    counts = {d: 0 for d in decoders}
    nodes = {d: 0 for d in decoders}
    pick = philox(seed, 0xC0)
    lat_dec = None
    if "lattice" in decoders and model.kind == "constant":
        real0 = channel.sample(model, k, (seed, 0))
        lat_dec = LatticeDecoder(real0.blocks, book.alpha, lat, book.shift)
    for t in range(trials):
        idx = int(pick.integers(len(book)))
        real = channel.sample(model, k, (seed, t))
        y = channel.transmit(book.matrices[idx], real, (seed, t), noiseless=noiseless)
        sent = list(book.coords[idx])
        if "ml" in decoders:
            res = ml_decode(y, real.blocks, book)
            nodes["ml"] += res.nodes
            if res.index != idx:
                counts["ml"] += 1
        if "lattice" in decoders:
            dec = lat_dec
            if dec is None or model.kind != "constant":
                dec = LatticeDecoder(real.blocks, book.alpha, lat, book.shift)
            ok, nd = dec.decodes_to(y, sent, budget)
            nodes["lattice"] += nd
            if not ok:
                counts["lattice"] += 1
    return [WERPoint(P=book.power, rate=book.realized_rate, trials=trials,
                     errors=counts[d], wer=counts[d] / trials,
                     stderr=_wer_stderr(counts[d], trials),
                     avg_nodes=nodes[d] / trials, decoder=d)
            for d in decoders]
