"""
Seeded random streams.

Every random draw in the toolkit comes from a Philox (counter-based) generator
keyed by ``SeedSequence([seed, *key])``. Distinct keys give independent
substreams, so parallel trials reproduce bit-for-bit regardless of schedule.
Gaussian variates use numpy's ziggurat sampler (``Generator.standard_normal``).
"""

import numpy as np

# Stream keys
DICTIONARY_NOISE = 0
DICTIONARY_OFFSETS = 1
DICTIONARY_REGENERATE = 2
SIGNAL_SUPPORT = 10
SIGNAL_VALUES = 11
NOISE_DIRECTION = 12
RIC_SUBSETS = 20
LEMMA_TRIALS = 21
THEOREM_INSTANCES = 22
TRIAL_SEEDS = 30

_SEED_MASK = (1 << 64) - 1


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for substream ``key`` of ``seed``"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed) & _SEED_MASK, *key])))


def derive_seed(seed: int, *key: int) -> int:
    """Deterministic 64-bit child seed for substream ``key`` of ``seed``"""
    state = np.random.SeedSequence([int(seed) & _SEED_MASK, *key]).generate_state(1, dtype=np.uint64)
    return int(state[0])
