"""qr-numbers: interval-valued sections over conditions.

A qr-number is an expression tree whose leaves are either locally linear
generators (rho -> Tr(rho A) restricted to a condition) or locally
constant reals, combined with +, -, *, scalar multiples, and a whitelist
of continuous functions.  It evaluates pointwise at states and summarises
to a range interval over its extent.

Range certification strategy: closed-form candidates (exact Bloch
geometry for qubits, simplex-projected trace-ball extremisers and
coherent rotations elsewhere) are merged with deterministic sampling;
the reported interval is the hull of verified values, so growing the
sample budget never shrinks it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    DomainError,
    EmptySectionError,
    ExtentError,
    ValidationError,
)
from .operators import HermitianOperator
from .states import (
    Ball,
    Condition,
    DensityState,
    MEMBERSHIP_MARGIN,
    _sample_convex,
    _sample_perturb,
    contains,
    extremal_states,
    intersect_condition,
    substream,
    trace_distance,
)

# ---------------------------------------------------------------------------
# interval helpers (used for sound Lipschitz and magnitude bounds only)

_TWO_PI = 2.0 * math.pi


def _iv_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _iv_sub(a, b):
    return (a[0] - b[1], a[1] - b[0])


def _iv_mul(a, b):
    p = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(p), max(p))


def _iv_scale(a, c):
    lo, hi = c * a[0], c * a[1]
    return (lo, hi) if lo <= hi else (hi, lo)


def _iv_maxabs(a):
    return max(abs(a[0]), abs(a[1]))


def _iv_abs(a):
    lo, hi = a
    if lo <= 0.0 <= hi:
        return (0.0, max(-lo, hi))
    return (min(abs(lo), abs(hi)), max(abs(lo), abs(hi)))


def _iv_sin(a):
    lo, hi = a
    if hi - lo >= _TWO_PI:
        return (-1.0, 1.0)
    vmin = min(math.sin(lo), math.sin(hi))
    vmax = max(math.sin(lo), math.sin(hi))
    if math.ceil((lo - math.pi / 2) / _TWO_PI) <= math.floor((hi - math.pi / 2) / _TWO_PI):
        vmax = 1.0
    if math.ceil((lo + math.pi / 2) / _TWO_PI) <= math.floor((hi + math.pi / 2) / _TWO_PI):
        vmin = -1.0
    return (vmin, vmax)


def _iv_cos(a):
    return _iv_sin((a[0] + math.pi / 2, a[1] + math.pi / 2))


def _poly_eval(coeffs, x):
    out = 0.0
    for c in reversed(coeffs):
        out = out * x + c
    return out


def _poly_eval_iv(coeffs, iv):
    out = (0.0, 0.0)
    for c in reversed(coeffs):
        out = _iv_add(_iv_mul(out, iv), (c, c))
    return out


def _poly_derivative(coeffs):
    return [k * c for k, c in enumerate(coeffs)][1:] or [0.0]


# whitelist: name -> (vectorised evaluator, interval enclosure, sup|F'| bound)

def _apply_sqrt(x):
    if np.any(x < -1e-12):
        raise DomainError("sqrt applied to a negative argument")
    return np.sqrt(np.clip(x, 0.0, None))


_FUNCTIONS = {
    "abs": (
        np.abs,
        _iv_abs,
        lambda iv: 1.0,
    ),
    "sqrt": (
        _apply_sqrt,
        lambda iv: (
            math.sqrt(max(0.0, iv[0])),
            math.sqrt(max(0.0, iv[1])),
        ),
        lambda iv: math.inf if iv[0] <= 0.0 else 0.5 / math.sqrt(iv[0]),
    ),
    "exp": (
        np.exp,
        lambda iv: (math.exp(iv[0]), math.exp(iv[1])),
        lambda iv: math.exp(iv[1]),
    ),
    "sin": (
        np.sin,
        _iv_sin,
        lambda iv: 1.0,
    ),
    "cos": (
        np.cos,
        _iv_cos,
        lambda iv: 1.0,
    ),
}


# ---------------------------------------------------------------------------
# the expression tree

@dataclass(frozen=True)
class RangeInterval:
    """Numeric summary [lo, hi] of a section's value set over its extent."""

    lo: float
    hi: float
    rigor: str  # "closed-form" or "sampled"
    n: int = 0
    seed: int | None = None

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValidationError("range endpoints must be finite")
        if self.lo > self.hi + 1e-12:
            raise ValidationError(f"range lo {self.lo} exceeds hi {self.hi}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def subset_of(self, interval, tol: float = 0.0) -> bool:
        return self.lo >= interval[0] - tol and self.hi <= interval[1] + tol


class QrNumber:
    """A section over a condition, as an expression tree."""

    __slots__ = ("kind", "operator", "value", "fn", "coeffs", "args", "extent")

    def __init__(self, kind, *, operator=None, value=None, fn=None, coeffs=None,
                 args=(), extent=None):
        self.kind = kind
        self.operator = operator
        self.value = value
        self.fn = fn
        self.coeffs = tuple(coeffs) if coeffs is not None else None
        self.args = tuple(args)
        self.extent = extent

    # -- constructors -------------------------------------------------------

    @classmethod
    def linear(cls, operator: HermitianOperator, extent: Condition) -> "QrNumber":
        """Locally linear generator a_Q = Tr(. A) on the given extent."""
        if extent.is_empty:
            raise EmptySectionError("locally linear qr-number over an empty extent")
        if operator.dim != extent.dim:
            raise DimensionMismatchError(
                f"operator dim {operator.dim} vs extent dim {extent.dim}"
            )
        return cls("linear", operator=operator, extent=extent)

    @classmethod
    def constant(cls, value: float, extent: Condition | None = None) -> "QrNumber":
        """Locally constant real; extent None means defined everywhere."""
        if extent is not None and extent.is_empty:
            raise EmptySectionError("constant qr-number over an empty extent")
        return cls("const", value=float(value), extent=extent)

    # -- structure ----------------------------------------------------------

    @property
    def dim(self) -> int | None:
        if self.extent is not None:
            return self.extent.dim
        for a in self.args:
            d = a.dim
            if d is not None:
                return d
        return None

    def leaves(self):
        if self.kind == "linear":
            yield self
        for a in self.args:
            yield from a.leaves()

    def restricted_to(self, cond: Condition) -> "QrNumber":
        """Sheaf restriction: the same expression on a smaller extent."""
        if self.extent is None:
            new_extent = cond
        elif all(
            any(b.subset_of(big) for big in self.extent.balls) for b in cond.balls
        ):
            new_extent = cond
        else:
            new_extent = intersect_condition(self.extent, cond)
        if new_extent.is_empty:
            raise EmptySectionError("restriction to a condition outside the extent")
        out = QrNumber(self.kind, operator=self.operator, value=self.value,
                       fn=self.fn, coeffs=self.coeffs, args=self.args,
                       extent=new_extent)
        return out

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        return qr_add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return qr_sub(self, _coerce(other))

    def __rsub__(self, other):
        return qr_sub(_coerce(other), self)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return qr_scale(self, float(other))
        return qr_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return qr_scale(self, -1.0)

    def __repr__(self):
        ext = "global" if self.extent is None else repr(self.extent)
        return f"QrNumber({self.kind}, extent={ext})"


def _coerce(x) -> QrNumber:
    if isinstance(x, QrNumber):
        return x
    if isinstance(x, (int, float)):
        return QrNumber.constant(float(x))
    raise ValidationError(f"cannot use {type(x).__name__} as a qr-number")


def _common_extent(a: QrNumber, b: QrNumber) -> Condition | None:
    if a.extent is None:
        return b.extent
    if b.extent is None:
        return a.extent
    ext = intersect_condition(a.extent, b.extent)
    if ext.is_empty:
        raise EmptySectionError("operands have disjoint extents")
    return ext


def _check_dims(a: QrNumber, b: QrNumber):
    da, db = a.dim, b.dim
    if da is not None and db is not None and da != db:
        raise DimensionMismatchError(f"qr-number dims differ: {da} vs {db}")


def qr_add(a: QrNumber, b: QrNumber) -> QrNumber:
    _check_dims(a, b)
    return QrNumber("add", args=(a, b), extent=_common_extent(a, b))


def qr_sub(a: QrNumber, b: QrNumber) -> QrNumber:
    _check_dims(a, b)
    return QrNumber("sub", args=(a, b), extent=_common_extent(a, b))


def qr_mul(a: QrNumber, b: QrNumber) -> QrNumber:
    _check_dims(a, b)
    return QrNumber("mul", args=(a, b), extent=_common_extent(a, b))


def qr_scale(a: QrNumber, factor: float) -> QrNumber:
    return QrNumber("scale", value=float(factor), args=(a,), extent=a.extent)


def qr_apply(fn: str, a: QrNumber, coeffs=None) -> QrNumber:
    """Apply a whitelisted continuous function, or 'poly' with coefficients.

    The whitelist keeps every section a continuous function of locally
    linear generators; arbitrary callables are deliberately not accepted.
    """
    if fn == "poly":
        if coeffs is None:
            raise ValidationError("poly requires coefficients (ascending powers)")
        return QrNumber("apply", fn="poly", coeffs=[float(c) for c in coeffs],
                        args=(a,), extent=a.extent)
    if fn not in _FUNCTIONS:
        raise ValidationError(
            f"function {fn!r} is not whitelisted; allowed: "
            f"{sorted(_FUNCTIONS)} and 'poly'"
        )
    return QrNumber("apply", fn=fn, args=(a,), extent=a.extent)


# ---------------------------------------------------------------------------
# evaluation

def _eval_stack(q: QrNumber, stack: np.ndarray) -> np.ndarray:
    if q.kind == "linear":
        return np.einsum("nij,ji->n", stack, q.operator.matrix).real
    if q.kind == "const":
        return np.full(stack.shape[0], q.value)
    if q.kind == "add":
        return _eval_stack(q.args[0], stack) + _eval_stack(q.args[1], stack)
    if q.kind == "sub":
        return _eval_stack(q.args[0], stack) - _eval_stack(q.args[1], stack)
    if q.kind == "mul":
        return _eval_stack(q.args[0], stack) * _eval_stack(q.args[1], stack)
    if q.kind == "scale":
        return q.value * _eval_stack(q.args[0], stack)
    if q.kind == "apply":
        x = _eval_stack(q.args[0], stack)
        if q.fn == "poly":
            out = np.zeros_like(x)
            for c in reversed(q.coeffs):
                out = out * x + c
            return out
        return _FUNCTIONS[q.fn][0](x)
    raise ValidationError(f"unknown node kind {q.kind!r}")


def eval_at(q: QrNumber, rho: DensityState) -> float:
    """Pointwise value of the section at a state of its extent."""
    if q.extent is not None:
        if q.extent.dim != rho.dim:
            raise DimensionMismatchError(
                f"state dim {rho.dim} vs extent dim {q.extent.dim}"
            )
        if not contains(q.extent, rho):
            raise ExtentError("state lies outside the section's extent")
    return float(_eval_stack(q, rho.matrix[None, :, :])[0])


def eval_many(q: QrNumber, states) -> np.ndarray:
    """Values at a list of states assumed to lie in the extent."""
    stack = np.stack([s.matrix for s in states])
    return _eval_stack(q, stack)


# ---------------------------------------------------------------------------
# bounds and Lipschitz propagation

def bound_and_lipschitz(q: QrNumber) -> tuple[tuple[float, float], float]:
    """A sound global value enclosure and Lipschitz constant (trace norm).

    Leaves use the spectral bounds [lambda_min, lambda_max] and the
    operator norm; composite nodes propagate by interval arithmetic.
    The Lipschitz bound may be infinite (sqrt near zero).
    """
    if q.kind == "linear":
        lo, hi = q.operator.eigenvalue_bounds
        return (lo, hi), q.operator.operator_norm
    if q.kind == "const":
        return (q.value, q.value), 0.0
    if q.kind == "add":
        (b1, l1), (b2, l2) = (bound_and_lipschitz(a) for a in q.args)
        return _iv_add(b1, b2), l1 + l2
    if q.kind == "sub":
        (b1, l1), (b2, l2) = (bound_and_lipschitz(a) for a in q.args)
        return _iv_sub(b1, b2), l1 + l2
    if q.kind == "mul":
        (b1, l1), (b2, l2) = (bound_and_lipschitz(a) for a in q.args)
        return _iv_mul(b1, b2), _iv_maxabs(b1) * l2 + _iv_maxabs(b2) * l1
    if q.kind == "scale":
        b, lip = bound_and_lipschitz(q.args[0])
        return _iv_scale(b, q.value), abs(q.value) * lip
    if q.kind == "apply":
        b, lip = bound_and_lipschitz(q.args[0])
        if q.fn == "poly":
            iv = _poly_eval_iv(q.coeffs, b)
            dmax = _iv_maxabs(_poly_eval_iv(_poly_derivative(q.coeffs), b))
            return iv, dmax * lip
        _, iv_fn, dlip_fn = _FUNCTIONS[q.fn]
        return iv_fn(b), dlip_fn(b) * lip
    raise ValidationError(f"unknown node kind {q.kind!r}")


# ---------------------------------------------------------------------------
# range evaluation

def _qubit_max_linear(a_vec: np.ndarray, r0: np.ndarray, delta: float) -> float:
    """Exact max of a . r over {|r - r0| <= delta} intersect {|r| <= 1}."""
    na = float(np.linalg.norm(a_vec))
    if na < 1e-15:
        return 0.0
    ahat = a_vec / na
    best = float(a_vec @ r0)  # center is always feasible
    c1 = r0 + delta * ahat
    if np.linalg.norm(c1) <= 1.0 + 1e-12:
        best = max(best, float(a_vec @ c1))
    if np.linalg.norm(ahat - r0) <= delta + 1e-12:
        best = max(best, na)
    n0 = float(np.linalg.norm(r0))
    if n0 > 1e-15 and abs(n0 - delta) <= 1.0 <= n0 + delta:
        u = r0 / n0
        h = (1.0 + n0 * n0 - delta * delta) / (2.0 * n0)
        if abs(h) <= 1.0:
            a_par = float(a_vec @ u)
            a_perp = float(np.linalg.norm(a_vec - a_par * u))
            best = max(best, h * a_par + a_perp * math.sqrt(max(0.0, 1.0 - h * h)))
    return best


def _operator_bloch(a: HermitianOperator) -> tuple[float, np.ndarray]:
    """Decompose A = a0 I + a . sigma; then Tr(rho A) = a0 + a . r(rho)."""
    m = a.matrix
    a0 = float((m[0, 0] + m[1, 1]).real) / 2.0
    ax = float((m[0, 1] + m[1, 0]).real) / 2.0
    ay = float((-1j * (m[1, 0] - m[0, 1])).real) / 2.0
    az = float((m[0, 0] - m[1, 1]).real) / 2.0
    return a0, np.array([ax, ay, az])


def qubit_linear_ball_range(a: HermitianOperator, ball: Ball) -> tuple[float, float]:
    """Exact range of Tr(rho A) over a closed qubit ball, by Bloch geometry."""
    a0, avec = _operator_bloch(a)
    r0 = ball.center.bloch_vector()
    hi = a0 + _qubit_max_linear(avec, r0, ball.radius)
    lo = a0 - _qubit_max_linear(-avec, r0, ball.radius)
    return lo, hi


def linear_ball_range_outer(a: HermitianOperator, ball: Ball) -> tuple[float, float]:
    """Rigorous outer enclosure of Tr(rho A) over a closed ball.

    Exact for qubits; otherwise the trace-norm bound
    |Tr(T A)| <= (|I|T|I/2)(lambda_max - lambda_min) capped by the global
    spectral range.
    """
    if a.dim == 2:
        return qubit_linear_ball_range(a, ball)
    lmin, lmax = a.eigenvalue_bounds
    v0 = ball.center.expectation(a)
    half = 0.5 * ball.radius * (lmax - lmin)
    return max(v0 - half, lmin), min(v0 + half, lmax)


def linear_range_outer(a: HermitianOperator, w: Condition) -> tuple[float, float]:
    if w.is_empty:
        raise EmptySectionError("range over an empty condition")
    if w.covers_all:
        return a.eigenvalue_bounds
    los, his = zip(*(linear_ball_range_outer(a, b) for b in w.balls))
    return min(los), max(his)


def _ball_sample_states(ball: Ball, m: int, seed: int, tag: int) -> list[DensityState]:
    out = []
    for i in range(m):
        rng = substream(seed, tag, i)
        kind = rng.integers(2)
        sigma = _sample_convex(rng, ball) if kind == 0 else _sample_perturb(rng, ball)
        if trace_distance(ball.center, sigma) < ball.radius - MEMBERSHIP_MARGIN:
            out.append(sigma)
    return out


def _candidate_states(q: QrNumber, ball: Ball, max_ops: int = 3) -> list[DensityState]:
    cands = []
    seen = 0
    for leaf in q.leaves():
        cands.extend(extremal_states(ball, leaf.operator))
        seen += 1
        if seen >= max_ops:
            break
    if not cands:
        cands = [ball.center]
    return cands


def eval_range(q: QrNumber, samples: int = 2000, seed: int = 0) -> RangeInterval:
    """[min, max] of the section over its extent.

    Single linear leaves over a single ball get the closed-form treatment
    (exact on qubits); everything else is the hull of candidate states and
    deterministic samples.  For a fixed seed, a larger budget never
    shrinks the interval.
    """
    leaves = list(q.leaves())
    if not leaves:
        v = float(_eval_stack(q, np.zeros((1, 1, 1)))[0])
        return RangeInterval(v, v, "closed-form")
    ext = q.extent
    if ext is None:
        ext = Condition.full(leaves[0].operator.dim)
    if ext.is_empty:
        raise EmptySectionError("range over an empty extent")

    closed_form = q.kind == "linear" and len(ext.balls) == 1
    lo = math.inf
    hi = -math.inf
    if q.kind == "linear" and ext.covers_all:
        lo, hi = q.operator.eigenvalue_bounds
        return RangeInterval(lo, hi, "closed-form", n=samples, seed=seed)

    qubit_exact = q.kind == "linear" and q.operator.dim == 2
    per_ball = max(1, math.ceil(samples / max(1, len(ext.balls))))
    for bi, ball in enumerate(ext.balls):
        if qubit_exact:
            blo, bhi = qubit_linear_ball_range(q.operator, ball)
            lo, hi = min(lo, blo), max(hi, bhi)
        pts = _candidate_states(q, ball)
        pts.extend(_ball_sample_states(ball, per_ball, seed, bi))
        vals = eval_many(q, pts)
        lo = min(lo, float(np.min(vals)))
        hi = max(hi, float(np.max(vals)))
    rigor = "closed-form" if closed_form else "sampled"
    return RangeInterval(lo, hi, rigor, n=samples, seed=seed)


# ---------------------------------------------------------------------------
# order to an extent

def order_extent(a: QrNumber, b: QrNumber, grain: float,
                 samples: int = 400, seed: int = 0) -> Condition:
    """A sub-condition of the common extent on which a < b everywhere.

    Balls are centred at sampled states where the gap b - a is positive,
    with radius gap / (Lip(a) + Lip(b)) capped at the grain and at the
    slack to the extent boundary, so the claim is sound by the Lipschitz
    continuity of sections.  May return the empty sentinel.
    """
    if grain <= 0.0:
        raise ValidationError("grain must be positive")
    _check_dims(a, b)
    ext = _common_extent(a, b)
    if ext is None:
        raise ValidationError("order_extent needs at least one operator-anchored extent")
    gap_expr = qr_sub(b, a)
    _, lip = bound_and_lipschitz(gap_expr)
    found = []
    per_ball = max(1, math.ceil(samples / len(ext.balls)))
    for bi, ball in enumerate(ext.balls):
        pts = [ball.center]
        pts.extend(_ball_sample_states(ball, per_ball, seed, 7000 + bi))
        gaps = eval_many(gap_expr, pts)
        for rho, gap in zip(pts, gaps):
            if gap <= 1e-12:
                continue
            if math.isinf(lip) or math.isnan(lip):
                continue
            radius = grain if lip <= 1e-15 else min(float(gap) / lip, grain)
            slack = ball.radius - trace_distance(ball.center, rho)
            radius = min(radius, 0.999 * slack)
            if radius > 1e-12:
                found.append(Ball(rho, radius))
    if not found:
        return Condition.empty(ext.dim)
    return Condition(found)


# ---------------------------------------------------------------------------
# extension by zero

@dataclass(frozen=True)
class ExtendedQr:
    """Prolongation by zero: a total section over all of state space."""

    base: QrNumber

    def eval_at(self, rho: DensityState) -> float:
        ext = self.base.extent
        if ext is not None and not contains(ext, rho):
            return 0.0
        return float(_eval_stack(self.base, rho.matrix[None, :, :])[0])

    def eval_range(self, samples: int = 2000, seed: int = 0) -> RangeInterval:
        inner = eval_range(self.base, samples=samples, seed=seed)
        ext = self.base.extent
        if ext is None or ext.covers_all:
            return inner
        return RangeInterval(
            min(inner.lo, 0.0), max(inner.hi, 0.0), inner.rigor, inner.n, inner.seed
        )


def extend_by_zero(q: QrNumber) -> ExtendedQr:
    return ExtendedQr(q)


# ---------------------------------------------------------------------------
# unitary covariance

def _check_unitary(u: np.ndarray):
    dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if dev > 1e-10:
        raise ValidationError(f"matrix is not unitary: |U^dagger U - I| = {dev:.3e}")


def covariance_transform(q: QrNumber, u) -> QrNumber:
    """The transformed quality U A U^dagger as a section on the same extent.

    Its range over W equals the range of A over the conjugated condition
    transform_condition(W, U); trace distances are preserved, so balls map
    to balls.
    """
    if q.kind != "linear":
        raise ValidationError("covariance transform is defined for locally linear qr-numbers")
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (q.operator.dim, q.operator.dim):
        raise DimensionMismatchError("unitary dimension mismatch")
    _check_unitary(u)
    new_op = HermitianOperator(u @ q.operator.matrix @ u.conj().T)
    return QrNumber.linear(new_op, q.extent)


def transform_condition(w: Condition, u) -> Condition:
    """W' = { U^dagger rho U : rho in W }; balls map to balls."""
    u = np.asarray(u, dtype=np.complex128)
    _check_unitary(u)
    balls = [
        Ball(
            DensityState(u.conj().T @ b.center.matrix @ u, _trusted=True),
            b.radius,
        )
        for b in w.balls
    ]
    if not balls:
        return Condition.empty(w.dim)
    return Condition(balls)
