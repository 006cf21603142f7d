"""Counter-based reproducible random streams.

Every stochastic routine in the package derives its stream from
(seed, *indices) through Philox, so identical configurations reproduce
bit-identical runs and independent trials can be generated independently.
"""

import numpy as np

_MASK = (1 << 64) - 1


def philox(seed, *stream):
    """Generator on an independent Philox stream keyed by (seed, stream)."""
    acc = 0
    for s in stream:
        acc = (acc * 1000003 + int(s) + 1) & _MASK
    key = np.array([int(seed) & _MASK, acc], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def complex_gaussian(gen, shape):
    """Circular symmetric complex Gaussian, unit variance per complex
    dimension, via the Box-Muller transform on uniforms."""
    u1 = 1.0 - gen.random(shape)  # (0, 1]
    u2 = gen.random(shape)
    return np.sqrt(-np.log(u1)) * np.exp(2j * np.pi * u2)
