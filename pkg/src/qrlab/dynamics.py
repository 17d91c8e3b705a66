"""qr-number equations of motion versus Heisenberg-averaged evolution.

A truncated Fock-space oscillator (ladder-built Q, P, H with
hbar = m = omega = 1) carries two evolutions of the phase-space section
over a condition: classical Hamilton flow of the per-state expectation
pairs (fixed-step RK4), and exact unitary evolution of each state with
expectations read off afterwards.  The two agree for linear forces and
drift apart for anharmonic ones; a top-level population diagnostic keeps
truncation artifacts from masquerading as physics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._parallel import pmap
from .errors import NumericError, ValidationError
from .operators import HermitianOperator
from .states import Condition, DensityState, substream

MAX_STEP = 1e-2
TRUNCATION_WARN = 1e-6
_KINDS = ("free", "harmonic", "quartic")


class ModelSpec:
    """Truncated oscillator model: dimension, potential kind, ladder operators."""

    def __init__(self, dim: int, kind: str, lam: float = 0.0):
        if dim < 16:
            raise ValidationError("model truncation dimension must be >= 16")
        if kind not in _KINDS:
            raise ValidationError(f"unknown hamiltonian kind {kind!r}; use {_KINDS}")
        if kind == "quartic" and lam < 0.0:
            raise ValidationError("quartic coupling must be >= 0")
        self.dim = dim
        self.kind = kind
        self.lam = float(lam) if kind == "quartic" else 0.0
        ladder = np.diag(np.sqrt(np.arange(1, dim)), k=1)
        q = (ladder + ladder.T) / math.sqrt(2.0)
        p = 1j * (ladder.T - ladder) / math.sqrt(2.0)
        self.position = HermitianOperator(q)
        self.momentum = HermitianOperator(p)
        h = 0.5 * (p @ p)
        if kind in ("harmonic", "quartic"):
            h = h + 0.5 * (q @ q)
        if kind == "quartic":
            q2 = q @ q
            h = h + self.lam * (q2 @ q2)
        self.hamiltonian = HermitianOperator(h)

    def force(self, q):
        if self.kind == "free":
            return np.zeros_like(q)
        if self.kind == "harmonic":
            return -q
        return -q - 4.0 * self.lam * q**3

    def potential(self, q):
        if self.kind == "free":
            return np.zeros_like(q)
        v = 0.5 * q**2
        if self.kind == "quartic":
            v = v + self.lam * q**4
        return v

    def classical_energy(self, q, p):
        return 0.5 * p**2 + self.potential(q)


@dataclass
class PhaseSection:
    """Per-sample phase trajectories (q(t), p(t)) over a shared time grid."""

    times: np.ndarray
    q: np.ndarray  # shape (n_samples, n_times)
    p: np.ndarray
    method: str
    truncation_diag: float = 0.0
    truncation_warn: bool = False

    def __post_init__(self):
        if self.q.shape != self.p.shape or self.q.shape[1] != len(self.times):
            raise ValidationError("trajectory arrays misaligned with the time grid")
        if not (np.all(np.isfinite(self.q)) and np.all(np.isfinite(self.p))):
            raise NumericError("non-finite values in phase trajectories")

    @property
    def n_samples(self) -> int:
        return self.q.shape[0]


def time_grid(t_max: float, dt: float) -> np.ndarray:
    if t_max <= 0 or dt <= 0:
        raise ValidationError("t_max and dt must be positive")
    n = int(round(t_max / dt)) + 1
    return np.linspace(0.0, t_max, n)


def _check_grid(grid: np.ndarray):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise ValidationError("time grid needs at least two points")
    steps = np.diff(grid)
    if np.any(steps <= 0):
        raise ValidationError("time grid must be strictly ascending")
    if np.max(steps) > MAX_STEP + 1e-12:
        raise ValidationError(
            f"grid step {np.max(steps):.3g} exceeds the {MAX_STEP} limit"
        )
    return grid


def sample_phase_states(w: Condition, n: int, seed: int,
                        band_fraction: float = 0.8) -> list[DensityState]:
    """Deterministic samples of a Fock-space condition for dynamics runs.

    Sample 0 is the first ball center; the rest mix the center with pure
    states supported on the bottom band of levels, so the samples probe
    the condition without parking population at the truncation edge
    (which would corrupt the linear-force comparison for reasons the
    diagnostic exists to flag, not to cause).
    """
    if w.is_empty:
        raise ValidationError("cannot sample an empty condition")
    if n < 1:
        raise ValidationError("need at least one sample")
    dim = w.dim
    k_max = max(2, int(band_fraction * dim))
    out = [w.balls[0].center]
    for i in range(1, n):
        rng = substream(seed, 40_000, i)
        ball = w.balls[i % len(w.balls)]
        t = rng.uniform(0.0, 0.499 * ball.radius)
        chi = np.zeros(dim, dtype=np.complex128)
        g = rng.normal(size=k_max) + 1j * rng.normal(size=k_max)
        chi[:k_max] = g / np.linalg.norm(g)
        m = (1.0 - t) * ball.center.matrix + t * np.outer(chi, chi.conj())
        out.append(DensityState(m, _trusted=True))
    return out


def qr_hamilton_evolve(model: ModelSpec, w: Condition, grid,
                       samples: int = 20, seed: int = 0,
                       band_fraction: float = 0.8) -> PhaseSection:
    """Classical Hamilton flow of the section: per sampled state, integrate
    dq/dt = p, dp/dt = -V'(q) from (Tr rho Q, Tr rho P) with fixed-step RK4.

    band_fraction must match the one handed to the Heisenberg evolver so
    the two sections share their sample correspondence.
    """
    grid = _check_grid(grid)
    states = sample_phase_states(w, samples, seed, band_fraction=band_fraction)
    q = np.array([s.expectation(model.position) for s in states])
    p = np.array([s.expectation(model.momentum) for s in states])
    qs = np.empty((len(states), len(grid)))
    ps = np.empty_like(qs)
    qs[:, 0], ps[:, 0] = q, p
    for k in range(len(grid) - 1):
        h = grid[k + 1] - grid[k]
        k1q, k1p = p, model.force(q)
        k2q, k2p = p + 0.5 * h * k1p, model.force(q + 0.5 * h * k1q)
        k3q, k3p = p + 0.5 * h * k2p, model.force(q + 0.5 * h * k2q)
        k4q, k4p = p + h * k3p, model.force(q + h * k3q)
        q = q + h / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q)
        p = p + h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)
        if np.max(np.abs(q)) > 1e8 or np.max(np.abs(p)) > 1e8:
            raise NumericError(f"classical trajectory blow-up at t = {grid[k + 1]:.3g}")
        qs[:, k + 1], ps[:, k + 1] = q, p
    return PhaseSection(grid, qs, ps, method="hamilton")


def _phase_matrix(gaps: np.ndarray, times: np.ndarray) -> np.ndarray:
    return np.exp(-1j * np.outer(gaps, times))


def heisenberg_average_evolve(model: ModelSpec, w: Condition, grid,
                              samples: int = 20, seed: int = 0,
                              band_fraction: float = 0.8) -> PhaseSection:
    """Exact unitary evolution of each sampled state, expectations recorded.

    rho(t) = exp(-iHt) rho exp(iHt) via the eigendecomposition of H; no
    ODE stepping on the quantum side.  The truncation diagnostic is the
    maximum population of the top 10% of levels over the whole run; above
    1e-6 the section is returned with a warning flag.
    """
    grid = _check_grid(grid)
    states = sample_phase_states(w, samples, seed, band_fraction=band_fraction)
    dim = model.dim
    evals, vecs = model.hamiltonian.raw_eig()
    gaps = (evals[:, None] - evals[None, :]).ravel()
    q_t = (vecs.conj().T @ model.position.matrix @ vecs).T.ravel()
    p_t = (vecs.conj().T @ model.momentum.matrix @ vecs).T.ravel()
    n_top = max(1, math.ceil(0.1 * dim))
    top = np.zeros(dim)
    top[dim - n_top:] = 1.0
    g_t = (vecs.conj().T @ np.diag(top) @ vecs).T.ravel()

    rho_ts = np.stack(
        pmap(lambda s: (vecs.conj().T @ s.matrix @ vecs).ravel(), states)
    )
    wq = rho_ts * q_t[None, :]
    wp = rho_ts * p_t[None, :]
    wg = rho_ts * g_t[None, :]

    qs = np.empty((len(states), len(grid)))
    ps = np.empty_like(qs)
    diag = 0.0
    # the phase matrix is shared by all samples; chunk it over time to
    # keep dim^2 x n_times memory bounded
    chunk = max(1, int(5e7 // max(1, gaps.size)))
    for lo in range(0, len(grid), chunk):
        ts = grid[lo:lo + chunk]
        phases = _phase_matrix(gaps, ts)
        qs[:, lo:lo + len(ts)] = (wq @ phases).real
        ps[:, lo:lo + len(ts)] = (wp @ phases).real
        diag = max(diag, float(np.max((wg @ phases).real)))
    if grid[0] == 0.0:
        # the t = 0 exponential is the identity: record the expectations
        # through the same arithmetic the Hamilton side uses, so the
        # time-zero agreement is exact rather than within round-off
        qs[:, 0] = [s.expectation(model.position) for s in states]
        ps[:, 0] = [s.expectation(model.momentum) for s in states]
    return PhaseSection(
        grid, qs, ps, method="heisenberg",
        truncation_diag=diag, truncation_warn=diag > TRUNCATION_WARN,
    )


def evolve_density(model: ModelSpec, rho: DensityState, t: float) -> DensityState:
    """exp(-iHt) rho exp(iHt) as an explicit state (testing and demos)."""
    evals, vecs = model.hamiltonian.raw_eig()
    u = (vecs * np.exp(-1j * evals * t)) @ vecs.conj().T
    return DensityState(u @ rho.matrix @ u.conj().T, _trusted=True)


@dataclass
class EvolutionComparison:
    sup_dev: float
    dev_curve: np.ndarray
    linear_equal: bool


def compare_evolutions(s1: PhaseSection, s2: PhaseSection) -> EvolutionComparison:
    """Per-time maximum deviation between two phase sections.

    linear_equal applies the 1e-6 integrator tolerance; for linear forces
    it should hold whenever the truncation diagnostic is clean.
    """
    if s1.q.shape != s2.q.shape or len(s1.times) != len(s2.times):
        raise ValidationError("phase sections have mismatched shapes")
    if not np.allclose(s1.times, s2.times, rtol=0.0, atol=1e-12):
        raise ValidationError("phase sections use different time grids")
    dev = np.maximum(np.abs(s1.q - s2.q), np.abs(s1.p - s2.p))
    dev_curve = dev.max(axis=0)
    sup_dev = float(dev_curve.max())
    return EvolutionComparison(sup_dev, dev_curve, sup_dev <= 1e-6)
