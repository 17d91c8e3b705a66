"""Density states, trace-norm geometry, and conditions.

A condition is a finite union of open trace-norm balls; that family is
closed (up to inner approximation) under the intersections the qr-number
algebra needs, and ball-ball intersection is decidable exactly because
state space is convex.  Strict inequalities at ball boundaries are
resolved with a 1e-12 margin so membership is deterministic in floating
point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    SamplingError,
    ValidationError,
)
from .operators import HermitianOperator

PSD_CLAMP = 1e-10
TRACE_TOL = 1e-10
MEMBERSHIP_MARGIN = 1e-12
_SEED_MASK = (1 << 63) - 1


def substream(seed: int, *keys: int):
    """Counter-based substream: one independent generator per index tuple.

    Parallel and serial evaluation of per-index work therefore produce
    identical results.
    """
    entropy = [int(seed) & _SEED_MASK] + [int(k) & _SEED_MASK for k in keys]
    return np.random.default_rng(np.random.SeedSequence(entropy))


class DensityState:
    """A positive semidefinite, unit-trace matrix: one point of state space.

    Construction clamps eigenvalues in [-1e-10, 0) to zero (evolution and
    sampling round-off land there) and rejects anything more negative;
    the trace must be 1 within 1e-10 and is renormalised exactly.
    """

    __slots__ = ("matrix", "_eig")

    def __init__(self, entries, _trusted: bool = False):
        m = np.asarray(entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"state matrix must be square, got {m.shape}")
        dev = np.max(np.abs(m - m.conj().T))
        if dev > 1e-12:
            raise ValidationError(f"state is not Hermitian: deviation {dev:.3e}")
        m = 0.5 * (m + m.conj().T)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"state trace {tr} differs from 1 beyond tolerance")
        self._eig = None
        if _trusted:
            # caller guarantees positivity (exact convex combinations etc.)
            m = m / tr
        else:
            vals, vecs = np.linalg.eigh(m)
            if vals[0] < -PSD_CLAMP:
                raise ValidationError(
                    f"state has negative eigenvalue {vals[0]:.3e} beyond clamp tolerance"
                )
            vals = np.clip(vals, 0.0, None)
            vals = vals / vals.sum()
            m = (vecs * vals) @ vecs.conj().T
            m = 0.5 * (m + m.conj().T)
            self._eig = (vals, vecs)
        m.setflags(write=False)
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eig(self):
        """Cached (eigenvalues ascending, eigenvectors)."""
        if self._eig is None:
            self._eig = np.linalg.eigh(self.matrix)
        return self._eig

    def expectation(self, a: HermitianOperator) -> float:
        return float(np.trace(self.matrix @ a.matrix).real)

    def bloch_vector(self) -> np.ndarray:
        """(x, y, z) Bloch coordinates; only defined for qubits."""
        if self.dim != 2:
            raise ValidationError("Bloch vector only defined for dim 2")
        m = self.matrix
        return np.array(
            [
                2.0 * m[0, 1].real,
                -2.0 * m[0, 1].imag,
                (m[0, 0] - m[1, 1]).real,
            ]
        )

    def __repr__(self):
        return f"DensityState(dim={self.dim})"


def pure_state(vector) -> DensityState:
    v = np.asarray(vector, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(v)
    if norm < 1e-14:
        raise ValidationError("cannot normalise the zero vector")
    v = v / norm
    return DensityState(np.outer(v, v.conj()), _trusted=True)


def basis_state(dim: int, index: int) -> DensityState:
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return pure_state(v)


def maximally_mixed(dim: int) -> DensityState:
    return DensityState(np.eye(dim) / dim, _trusted=True)


def state_from_bloch(r) -> DensityState:
    r = np.asarray(r, dtype=float)
    if np.linalg.norm(r) > 1.0 + 1e-12:
        raise ValidationError("Bloch vector outside the unit ball")
    m = 0.5 * np.array(
        [[1.0 + r[2], r[0] - 1j * r[1]], [r[0] + 1j * r[1], 1.0 - r[2]]]
    )
    return DensityState(m, _trusted=True)


def singlet_state() -> DensityState:
    v = np.zeros(4, dtype=np.complex128)
    v[1] = 1.0 / np.sqrt(2.0)
    v[2] = -1.0 / np.sqrt(2.0)
    return pure_state(v)


def gaussian_wavepacket(dim: int, lo: float, hi: float, center: float, width: float) -> np.ndarray:
    """Amplitude profile exp(-(x - c)^2 / (2 w^2)) on a uniform grid, normalised."""
    x = np.linspace(lo, hi, dim)
    v = np.exp(-((x - center) ** 2) / (2.0 * width**2)).astype(np.complex128)
    return v / np.linalg.norm(v)


def trace_distance(r1: DensityState, r2: DensityState) -> float:
    """Tr|rho1 - rho2|; equals the Euclidean Bloch distance for qubits."""
    if r1.dim != r2.dim:
        raise DimensionMismatchError(f"dimensions differ: {r1.dim} vs {r2.dim}")
    vals = np.linalg.eigvalsh(r1.matrix - r2.matrix)
    return float(np.sum(np.abs(vals)))


@dataclass(frozen=True)
class Ball:
    """Open trace-norm ball nu(center; radius)."""

    center: DensityState
    radius: float

    def __post_init__(self):
        if not (self.radius > 0.0 and np.isfinite(self.radius)):
            raise ValidationError(f"ball radius must be positive, got {self.radius}")

    @property
    def dim(self) -> int:
        return self.center.dim

    def contains(self, rho: DensityState) -> bool:
        return trace_distance(self.center, rho) < self.radius - MEMBERSHIP_MARGIN

    def subset_of(self, other: "Ball") -> bool:
        """Sound sufficient containment test: d(centers) + r_self <= r_other."""
        d = trace_distance(self.center, other.center)
        return d + self.radius <= other.radius + MEMBERSHIP_MARGIN


class Condition:
    """An open region of state space: a finite union of balls.

    The empty condition (no balls) is the sentinel returned by operations
    such as order_extent when nothing satisfies the predicate; the regular
    constructor requires at least one ball.
    """

    __slots__ = ("balls", "dim")

    def __init__(self, balls, dim: int | None = None):
        balls = tuple(balls)
        if not balls and dim is None:
            raise ValidationError("a condition needs at least one ball (or an explicit dim)")
        if balls:
            dims = {b.dim for b in balls}
            if len(dims) != 1:
                raise DimensionMismatchError(f"balls of mixed dimension: {sorted(dims)}")
            d = dims.pop()
            if dim is not None and dim != d:
                raise DimensionMismatchError("explicit dim disagrees with ball dim")
            dim = d
        self.balls = balls
        self.dim = int(dim)

    @classmethod
    def ball(cls, center: DensityState, radius: float) -> "Condition":
        return cls([Ball(center, radius)])

    @classmethod
    def empty(cls, dim: int) -> "Condition":
        return cls([], dim=dim)

    @classmethod
    def full(cls, dim: int) -> "Condition":
        # the trace-norm diameter of state space is 2, so this single ball
        # covers everything
        return cls([Ball(maximally_mixed(dim), 2.5)])

    @property
    def is_empty(self) -> bool:
        return len(self.balls) == 0

    @property
    def covers_all(self) -> bool:
        return any(b.radius > 2.0 for b in self.balls)

    def __repr__(self):
        return f"Condition(balls={len(self.balls)}, dim={self.dim})"


def contains(w: Condition, rho: DensityState) -> bool:
    """Membership: strictly inside some ball of the union."""
    if w.dim != rho.dim:
        raise DimensionMismatchError(f"dimensions differ: {w.dim} vs {rho.dim}")
    return any(b.contains(rho) for b in w.balls)


def _segment_state(c1: DensityState, c2: DensityState, t: float) -> DensityState:
    return DensityState((1.0 - t) * c1.matrix + t * c2.matrix, _trusted=True)


def _ball_pair_witness(b1: Ball, b2: Ball):
    """Exact intersection test for two balls.

    Returns (witness_state, slack) with nu(witness, slack) contained in
    both open balls, or None when the pair is disjoint (d >= r1 + r2).
    """
    d = trace_distance(b1.center, b2.center)
    if d >= b1.radius + b2.radius - MEMBERSHIP_MARGIN:
        return None
    if d < 1e-15:
        slack = min(b1.radius, b2.radius)
        return b1.center, slack
    t = (d - b2.radius + b1.radius) / (2.0 * d)
    t = min(max(t, 0.0), 1.0)
    witness = _segment_state(b1.center, b2.center, t)
    slack = min(b1.radius - t * d, b2.radius - (1.0 - t) * d)
    if slack <= 0.0:  # numerically grazing pair: treat as disjoint
        return None
    return witness, slack


def conditions_intersect(w1: Condition, w2: Condition):
    """(intersects, witness): exact over ball pairs by convexity."""
    if w1.dim != w2.dim:
        raise DimensionMismatchError(f"dimensions differ: {w1.dim} vs {w2.dim}")
    for b1 in w1.balls:
        for b2 in w2.balls:
            hit = _ball_pair_witness(b1, b2)
            if hit is not None:
                return True, hit[0]
    return False, None


def intersect_condition(w1: Condition, w2: Condition) -> Condition:
    """Inner approximation of the intersection: the cover of witness balls.

    Sound for holds-to-extent semantics: every returned ball lies inside
    both conditions.  Returns the empty sentinel when no pair intersects.
    """
    if w1.dim != w2.dim:
        raise DimensionMismatchError(f"dimensions differ: {w1.dim} vs {w2.dim}")
    if w1.covers_all:
        return w2
    if w2.covers_all:
        return w1
    found = []
    for b1 in w1.balls:
        for b2 in w2.balls:
            hit = _ball_pair_witness(b1, b2)
            if hit is not None:
                found.append(Ball(hit[0], hit[1]))
    if not found:
        return Condition.empty(w1.dim)
    return Condition(found)


# ---------------------------------------------------------------------------
# sampling

def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of a real vector onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(v) + 1)
    cond = u - css / idx > 0
    rho = idx[cond][-1]
    theta = css[cond][-1] / rho
    return np.clip(v - theta, 0.0, None)


def _random_pure(rng, dim: int) -> np.ndarray:
    g = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return g / np.linalg.norm(g)


def _sample_convex(rng, ball: Ball) -> DensityState:
    # convex combination of the center with a random pure state; the mixing
    # weight stays below radius/2 so the trace distance stays below radius
    t = rng.uniform(0.0, 0.5 * ball.radius)
    chi = _random_pure(rng, ball.dim)
    m = (1.0 - t) * ball.center.matrix + t * np.outer(chi, chi.conj())
    return DensityState(m, _trusted=True)


def _sample_perturb(rng, ball: Ball) -> DensityState:
    # bounded traceless Hermitian kick, projected back to the state simplex
    d = ball.dim
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = 0.5 * (g + g.conj().T)
    h -= np.trace(h).real / d * np.eye(d)
    tn = np.sum(np.abs(np.linalg.eigvalsh(h)))
    if tn < 1e-14:
        return ball.center
    target = rng.uniform(0.0, 0.45 * ball.radius)
    raw = ball.center.matrix + (target / tn) * h
    vals, vecs = np.linalg.eigh(raw)
    probs = _project_simplex(vals.real)
    sigma = DensityState((vecs * probs) @ vecs.conj().T, _trusted=True)
    dist = trace_distance(ball.center, sigma)
    if dist >= ball.radius - MEMBERSHIP_MARGIN:
        # blend back toward the center; still a valid state by convexity
        s = 0.45 * ball.radius / dist
        sigma = DensityState(
            (1.0 - s) * ball.center.matrix + s * sigma.matrix, _trusted=True
        )
    return sigma


def sample_states(w: Condition, n: int, seed: int) -> list[DensityState]:
    """n states inside the condition, deterministic for a fixed seed.

    Each index draws from its own substream, so the sequence is identical
    whether indices are evaluated serially or in parallel.  Rejection is
    capped at 10 attempts per index (10 n total); exhausting it raises
    SamplingError with the observed acceptance rate, which is the designed
    failure mode for degenerate conditions.
    """
    if n < 1:
        raise ValidationError("sample count must be >= 1")
    if w.is_empty:
        raise ValidationError("cannot sample from an empty condition")
    out = []
    attempts = 0
    accepted = 0
    nballs = len(w.balls)
    for i in range(n):
        rng = substream(seed, i)
        ball = w.balls[i % nballs]
        ok = False
        for _ in range(10):
            attempts += 1
            kind = rng.integers(2)
            sigma = _sample_convex(rng, ball) if kind == 0 else _sample_perturb(rng, ball)
            if ball.contains(sigma):
                accepted += 1
                out.append(sigma)
                ok = True
                break
        if not ok:
            raise SamplingError(
                f"sampler starved on ball with radius {ball.radius:.3e}",
                accepted / max(attempts, 1),
            )
    return out


# ---------------------------------------------------------------------------
# constructive perturbation (level sets of Tr rho A have empty interior)

def perturb_nonzero(
    rho: DensityState, a: HermitianOperator, eps: float, t: float | None = None
) -> DensityState:
    """A state sigma within eps of rho (trace norm) with Tr(sigma A) != Tr(rho A).

    sigma = (1 - t) rho + t |phi><phi| for an eigenvector phi of A whose
    eigenvalue is farthest from Tr(rho A); ties pick the larger eigenvalue.
    The default t = 0.4 eps always keeps the distance below eps.
    """
    if rho.dim != a.dim:
        raise DimensionMismatchError(f"dimensions differ: {rho.dim} vs {a.dim}")
    if eps <= 0.0:
        raise ValidationError("eps must be positive")
    vals, vecs = a.raw_eig()
    a0 = rho.expectation(a)
    gaps = np.abs(vals - a0)
    best = np.max(gaps)
    if best <= 1e-12 * max(1.0, a.operator_norm):
        raise ValidationError(
            "no eigenvalue differs from Tr(rho A); operator acts as a constant"
        )
    # among maximal gaps, prefer the larger eigenvalue
    idx = np.flatnonzero(gaps >= best - 1e-15)
    k = idx[np.argmax(vals[idx])]
    phi = vecs[:, k]
    proj = np.outer(phi, phi.conj())
    if t is None:
        t = 0.4 * eps
    if not (0.0 < t < 1.0):
        raise ValidationError(f"mixing weight t = {t} outside (0, 1)")
    sigma = DensityState((1.0 - t) * rho.matrix + t * proj, _trusted=True)
    dist = trace_distance(rho, sigma)
    if dist >= eps:
        raise ValidationError(
            f"requested t = {t} moves the state by {dist:.3e} >= eps = {eps:.3e}"
        )
    return sigma


# ---------------------------------------------------------------------------
# extremal candidate states for range certification

def _clip_into_ball(ball: Ball, sigma: DensityState) -> DensityState:
    dist = trace_distance(ball.center, sigma)
    if dist <= ball.radius:
        return sigma
    s = ball.radius / dist
    return DensityState(
        (1.0 - s) * ball.center.matrix + s * sigma.matrix, _trusted=True
    )


def extremal_states(ball: Ball, a: HermitianOperator, max_rotations: int = 2) -> list[DensityState]:
    """Candidate extremisers of rho -> Tr(rho A) inside the closed ball.

    Three families, all exact states at distance <= radius:
    the center; the trace-ball boundary extremisers of the linear
    functional, eigenvalue-projected back to the state simplex; and
    coherent rotations of the center's leading eigenvectors toward
    A applied off the support (the binding directions at pure and
    near-pure centers).
    """
    if ball.dim != a.dim:
        raise DimensionMismatchError(f"dimensions differ: {ball.dim} vs {a.dim}")
    cands = [ball.center]
    vals, vecs = a.raw_eig()
    vmin, vmax = vecs[:, 0], vecs[:, -1]
    shift = np.outer(vmax, vmax.conj()) - np.outer(vmin, vmin.conj())
    for sign in (+1.0, -1.0):
        raw = ball.center.matrix + sign * 0.5 * ball.radius * shift
        evals, evecs = np.linalg.eigh(raw)
        probs = _project_simplex(evals.real)
        sigma = DensityState((evecs * probs) @ evecs.conj().T, _trusted=True)
        cands.append(_clip_into_ball(ball, sigma))

    p, u = ball.center.eig()
    order = np.argsort(p)[::-1]
    support = p > 1e-12
    proj_off = np.eye(ball.dim) - (u[:, support] @ u[:, support].conj().T)
    for k in order[:max_rotations]:
        pk = float(p[k])
        if pk <= 1e-12:
            continue
        phi = u[:, k]
        direction = proj_off @ (a.matrix @ phi)
        nrm = np.linalg.norm(direction)
        if nrm < 1e-12:
            continue
        udir = direction / nrm
        sin_t = min(1.0, ball.radius / (2.0 * pk))
        cos_t = np.sqrt(max(0.0, 1.0 - sin_t**2))
        for sign in (+1.0, -1.0):
            chi = cos_t * phi + sign * sin_t * udir
            m = ball.center.matrix + pk * (
                np.outer(chi, chi.conj()) - np.outer(phi, phi.conj())
            )
            cands.append(DensityState(m, _trusted=True))
    return cands
