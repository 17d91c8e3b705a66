"""Small shared helpers for the demo scripts."""

import math

import numpy as np

import qrlab as q


def coherent_state(dim: int, alpha: complex) -> q.DensityState:
    n = np.arange(dim)
    log_fact = np.array([math.lgamma(k + 1.0) for k in n])
    amps = np.array([alpha**k for k in n], dtype=complex) / np.exp(0.5 * log_fact)
    return q.pure_state(amps)
