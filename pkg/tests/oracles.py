"""Independent brute-force oracles for the test suite.

These deliberately avoid the library's own range machinery: qubit ranges
come from literal grid enumeration of Bloch vectors, slit masses from
direct summation of wavefunction weight, and posets from exhaustive
relation enumeration.
"""

import math

import numpy as np

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_I2 = np.eye(2, dtype=complex)


def bloch_of_state(rho: np.ndarray) -> np.ndarray:
    return np.array([np.trace(rho @ _PAULI[k]).real for k in "xyz"])


def bloch_grid_range(a: np.ndarray, center_rho: np.ndarray, radius: float,
                     step: float | None = None):
    """Brute-force range of Tr(rho A) over the closed trace ball.

    Enumerates a cubic grid of Bloch vectors r with |r - r0| <= radius and
    |r| <= 1 and evaluates the trace directly from the matrix entries.
    For qubits the trace distance equals the Euclidean Bloch distance, so
    the ball constraint is the literal Euclidean one.
    """
    r0 = bloch_of_state(center_rho)
    if step is None:
        step = radius / 60.0
    axes = [
        np.arange(max(-1.0, c - radius), min(1.0, c + radius) + step, step)
        for c in r0
    ]
    x, y, z = np.meshgrid(*axes, indexing="ij", sparse=True)
    in_ball = (x - r0[0]) ** 2 + (y - r0[1]) ** 2 + (z - r0[2]) ** 2 <= radius**2
    in_sphere = x**2 + y**2 + z**2 <= 1.0
    mask = in_ball & in_sphere
    # Tr(rho A) for rho = (I + r.sigma)/2, expanded entrywise
    vals = 0.5 * (
        a[0, 0].real * (1.0 + z)
        + a[1, 1].real * (1.0 - z)
        + 2.0 * (a[0, 1].real * x - a[0, 1].imag * y)
    )
    vals = np.broadcast_to(vals, mask.shape)[mask]
    return float(vals.min()), float(vals.max())


def bloch_grid_spread_range(a: np.ndarray, center_rho: np.ndarray, radius: float,
                            step: float | None = None):
    """Brute-force range of sqrt(Tr(rho A^2) - Tr(rho A)^2) over the ball."""
    r0 = bloch_of_state(center_rho)
    if step is None:
        step = max(radius / 60.0, 1e-9)
    axes = [
        np.arange(max(-1.0, c - radius), min(1.0, c + radius) + step, step)
        for c in r0
    ]
    a2 = a @ a
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    keep = (np.linalg.norm(pts - r0, axis=1) <= radius) & (
        np.linalg.norm(pts, axis=1) <= 1.0
    )
    pts = pts[keep]
    out = np.empty(len(pts))
    for i, r in enumerate(pts):
        rho = 0.5 * (_I2 + r[0] * _PAULI["x"] + r[1] * _PAULI["y"] + r[2] * _PAULI["z"])
        m1 = np.trace(rho @ a).real
        m2 = np.trace(rho @ a2).real
        out[i] = math.sqrt(max(m2 - m1 * m1, 0.0))
    return float(out.min()), float(out.max())


def gaussian_slit_mass(dim, lo, hi, peaks, width, interval):
    """Weight of the (normalised) multi-Gaussian profile inside an interval."""
    x = np.linspace(lo, hi, dim)
    psi = sum(np.exp(-((x - c) ** 2) / (2.0 * width**2)) for c in peaks)
    w = np.abs(psi) ** 2
    w = w / w.sum()
    return float(w[(x >= interval[0]) & (x <= interval[1])].sum())


def coherent_amplitudes(dim: int, alpha: complex) -> np.ndarray:
    n = np.arange(dim)
    log_fact = np.array([math.lgamma(k + 1.0) for k in n])
    amps = np.exp(-0.5 * abs(alpha) ** 2) * np.array(
        [alpha**k for k in n], dtype=complex
    ) / np.exp(0.5 * log_fact)
    return amps / np.linalg.norm(amps)


# ---------------------------------------------------------------------------
# poset enumeration

def _is_transitive(leq: np.ndarray) -> bool:
    n = leq.shape[0]
    for k in range(n):
        closed = leq | np.outer(leq[:, k], leq[k, :])
        if not np.array_equal(closed, leq):
            return False
    return True


def all_labeled_posets(n: int):
    """Every partial order on n labeled elements (practical for n <= 4)."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    m = len(pairs)
    for mask in range(1 << m):
        leq = np.eye(n, dtype=bool)
        for b in range(m):
            if mask >> b & 1:
                i, j = pairs[b]
                leq[i, j] = True
        if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
            continue
        if _is_transitive(leq):
            yield leq


def random_poset(n: int, rng) -> np.ndarray:
    """A random partial order: random DAG edges, transitively closed."""
    perm = rng.permutation(n)
    leq = np.eye(n, dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.35:
                leq[perm[i], perm[j]] = True
    for k in range(n):
        leq |= np.outer(leq[:, k], leq[k, :])
    return leq
