"""Seed substreams for reproducible Monte Carlo trials.

Every random draw of a trial comes from its own stream, derived from the
campaign's master seed, the trial index and a fixed role tag. Streams use the
counter-based Philox generator, so a trial can be regenerated in isolation and
the execution order of trials never changes their outcome.
"""

from typing import Tuple, Union

import numpy as np

ROLE_TAGS = {
    "channel_ue": 1,
    "channel_ed": 2,
    "pilot": 3,
    "attack": 4,
    "bs_noise": 5,
    "symbol": 6,
    "downlink_noise": 7,
}


def substream(master_seed: int, trial_index: int, role: str) -> np.random.Generator:
    """Return the generator owned by (master_seed, trial_index, role).

    Raises:
        KeyError: If the role is not one of ROLE_TAGS.
    """
    if role not in ROLE_TAGS:
        raise KeyError(f"Unknown random stream role '{role}'")
    seed_seq = np.random.SeedSequence(
        entropy=int(master_seed), spawn_key=(int(trial_index), ROLE_TAGS[role])
    )
    return np.random.Generator(np.random.Philox(seed_seq))


def complex_normal(
    rng: np.random.Generator,
    size: Union[int, Tuple[int, ...]],
    variance: float = 1.0,
) -> np.ndarray:
    """Draw i.i.d. circularly-symmetric complex Gaussians CN(0, variance)."""
    scale = np.sqrt(variance / 2.0)
    real = rng.standard_normal(size)
    imag = rng.standard_normal(size)
    return scale * (real + 1j * imag)
