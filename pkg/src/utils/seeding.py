"""Order-independent seed derivation.

Every random stream in the laboratory is keyed by a tuple of integers
(base seed, index, field tag, ...) folded through the SplitMix64 finalizer,
so a stream never depends on how many draws another stream made or on the
order in which parallel workers ran.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(value: int) -> int:
    """SplitMix64 finalizer on a 64-bit word."""
    z = value & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(*components: int) -> int:
    """Fold integer components into one 64-bit seed."""
    state = 0
    for component in components:
        state = splitmix64(state + GOLDEN_GAMMA + (int(component) & MASK64))
    return state


def stream(*components: int) -> np.random.Generator:
    """Independent numpy generator for the given key."""
    return np.random.default_rng(derive_seed(*components))
