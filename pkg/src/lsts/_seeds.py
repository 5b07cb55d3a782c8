"""Deterministic random-stream derivation.

All Gaussian sampling in the package goes through a counter-based Philox
generator keyed by an explicit 64-bit seed, so that every simulated series,
bootstrap replicate and Monte Carlo run is reproducible independently of
evaluation order, batching or thread count.
"""

import numpy as np

MASK64 = (1 << 64) - 1


def normal_generator(seed: int) -> np.random.Generator:
    """Counter-based generator for the given 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=seed & MASK64))


def splitmix64(value: int) -> int:
    """SplitMix64 finalizer; decorrelates consecutive integers."""
    value = (value + 0x9E3779B97F4A7C15) & MASK64
    value ^= value >> 30
    value = (value * 0xBF58476D1CE4E5B9) & MASK64
    value ^= value >> 27
    value = (value * 0x94D049BB133111EB) & MASK64
    value ^= value >> 31
    return value


def run_seed(seed: int, index: int) -> int:
    """Seed for Monte Carlo run `index`: adding runs never perturbs earlier ones."""
    return (seed ^ splitmix64(index)) & MASK64
