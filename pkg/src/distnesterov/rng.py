"""Seed derivation for reproducible experiments.

All randomness in a run flows from one integer config seed. Each consumer
(graph construction, synthetic data, initial iterates, ...) receives its own
independent stream derived through :class:`numpy.random.SeedSequence` with a
fixed spawn key per component name, and draws from a 64-bit PCG64 generator.
Adding a new component never perturbs the streams of existing ones.
"""

import numpy as np

# Spawn keys are part of the reproducibility contract: never renumber.
COMPONENTS = {
    "graph": 0,
    "data": 1,
    "init": 2,
    "objective": 3,
}


def _sequence(seed, component):
    try:
        key = COMPONENTS[component]
    except KeyError:
        raise KeyError(f"unknown RNG component {component!r}") from None
    return np.random.SeedSequence(int(seed), spawn_key=(key,))


def component_rng(seed, component):
    """PCG64 generator for ``component`` under the run seed ``seed``."""
    return np.random.Generator(np.random.PCG64(_sequence(seed, component)))


def derive_seed(seed, component, index=0):
    """Integer seed for ``component``, for APIs that take a plain seed.

    ``index`` separates repeated independent draws of one component.
    """
    state = _sequence(seed, component).spawn(index + 1)[index].generate_state(2, np.uint32)
    return int(state[0]) << 32 | int(state[1])
