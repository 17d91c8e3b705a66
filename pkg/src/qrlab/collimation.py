"""Measurement-facing predicates on conditions.

eps-sharp collimation (the section and its spread fit an interval tightly
enough that the value is a standard real to accuracy eps), eps-location
(the spectral-projection section stays above 1 - eps), the strict variant
(the condition is almost invariant under compression by the projection),
and the qr-number Heisenberg inequality that ties the two widths to the
commutator.

All "for all states in W" clauses are evaluated conservatively: exact
closed forms where available (qubits), otherwise sampled extrema widened
by a Lipschitz slack of operator-norm times the unreached part of the
ball radius.  hbar = 1 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .operators import (
    HermitianOperator,
    commutator_hermitian,
    spectral_projection,
)
from .qrnum import (
    RangeInterval,
    _ball_sample_states,
    _operator_bloch,
    _qubit_max_linear,
    linear_range_outer,
    qubit_linear_ball_range,
)
from .states import Ball, Condition, DensityState, extremal_states, trace_distance


def _check_eps(eps: float):
    if not (0.0 < eps < 1.0):
        raise ValidationError(f"eps must lie in (0, 1), got {eps}")


def _interval_mid_width(interval) -> tuple[float, float]:
    lo, hi = float(interval[0]), float(interval[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
        raise ValidationError(f"invalid interval [{lo}, {hi}]")
    return 0.5 * (lo + hi), hi - lo


def _qubit_spread_ball_range(a: HermitianOperator, ball: Ball) -> tuple[float, float]:
    """Exact spread range on a qubit ball: s^2 = |a|^2 - (a.r)^2."""
    _, avec = _operator_bloch(a)
    na2 = float(avec @ avec)
    r0 = ball.center.bloch_vector()
    t_hi = _qubit_max_linear(avec, r0, ball.radius)
    t_lo = -_qubit_max_linear(-avec, r0, ball.radius)
    if t_lo <= 0.0 <= t_hi:
        v_hi = na2
    else:
        v_hi = na2 - min(t_lo * t_lo, t_hi * t_hi)
    v_lo = max(na2 - max(t_lo * t_lo, t_hi * t_hi), 0.0)
    v_hi = max(v_hi, 0.0)
    return math.sqrt(v_lo), math.sqrt(v_hi)


def _gather_points(ball: Ball, ops, samples: int, seed: int, tag: int):
    pts = []
    for op in ops:
        pts.extend(extremal_states(ball, op))
    pts.extend(_ball_sample_states(ball, samples, seed, tag))
    return pts


def _value_and_spread_at(a: HermitianOperator, a_sq: HermitianOperator, pts):
    stack = np.stack([p.matrix for p in pts])
    vals = np.einsum("nij,ji->n", stack, a.matrix).real
    second = np.einsum("nij,ji->n", stack, a_sq.matrix).real
    var = np.clip(second - vals**2, 0.0, None)
    return vals, np.sqrt(var)


@dataclass
class CollimationReport:
    """Ranges, clause-by-clause booleans, verdicts and failure witnesses."""

    a_range: RangeInterval
    s_range: RangeInterval
    interval: tuple[float, float]
    eps: float
    clauses: dict = field(default_factory=dict)
    sharp: bool | None = None
    located: bool | None = None
    strict: bool | None = None
    strict_sup: float | None = None
    witnesses: dict = field(default_factory=dict)

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.interval[0] + self.interval[1])

    @property
    def width(self) -> float:
        return self.interval[1] - self.interval[0]


def spread(a: HermitianOperator, w: Condition, samples: int = 600,
           seed: int = 0) -> RangeInterval:
    """Range over the condition of the pointwise spread sqrt(<A^2> - <A>^2).

    Exact on qubits; elsewhere sampled with candidate states for A, A^2
    and the variance gradient, widened by the Lipschitz slack of s^2.
    """
    if w.is_empty:
        raise ValidationError("spread over an empty condition")
    a_sq = HermitianOperator(a.matrix @ a.matrix)
    if a.dim == 2:
        los, his = zip(*(_qubit_spread_ball_range(a, b) for b in w.balls))
        return RangeInterval(min(los), max(his), "closed-form", n=samples, seed=seed)
    lip_var = a_sq.operator_norm + 2.0 * a.operator_norm**2
    lo, hi = math.inf, -math.inf
    for bi, ball in enumerate(w.balls):
        v0 = ball.center.expectation(a)
        grad = HermitianOperator(a_sq.matrix - 2.0 * v0 * a.matrix)
        pts = _gather_points(ball, (a, a_sq, grad), samples, seed, 300 + bi)
        _, s_vals = _value_and_spread_at(a, a_sq, pts)
        max_dist = max(trace_distance(ball.center, p) for p in pts)
        slack = lip_var * max(0.0, ball.radius - max_dist)
        s2_hi = float(np.max(s_vals)) ** 2 + slack
        s2_lo = max(float(np.min(s_vals)) ** 2 - slack, 0.0)
        lo = min(lo, math.sqrt(s2_lo))
        hi = max(hi, math.sqrt(s2_hi))
    return RangeInterval(lo, hi, "sampled", n=samples, seed=seed)


def _conservative_value_range(a: HermitianOperator, w: Condition,
                              samples: int, seed: int) -> RangeInterval:
    """Conservative range of Tr(rho A): exact qubit, else outer enclosure."""
    if a.dim == 2:
        los, his = zip(*(qubit_linear_ball_range(a, b) for b in w.balls))
        return RangeInterval(min(los), max(his), "closed-form", n=samples, seed=seed)
    lo, hi = linear_range_outer(a, w)
    return RangeInterval(lo, hi, "sampled", n=samples, seed=seed)


def is_eps_sharp(a: HermitianOperator, interval, eps: float, w: Condition,
                 samples: int = 600, seed: int = 0) -> CollimationReport:
    """eps-sharp collimation of A in the interval, on the condition.

    Clauses, checked against worst-case ends of the certified ranges:
    |a_Q - a0| <= eps |I|/2, and a_Q -+ s_Q/sqrt(eps) bracketed by the
    interval.  Together they force the variance below eps |I|^2 / 4,
    which is recorded as a derived clause.
    """
    _check_eps(eps)
    if w.is_empty:
        raise ValidationError("collimation over an empty condition")
    a0, width = _interval_mid_width(interval)
    a_range = _conservative_value_range(a, w, samples, seed)
    s_range = spread(a, w, samples=samples, seed=seed)
    root = math.sqrt(eps)
    clauses = {
        "value_near_midpoint": abs(a_range.lo - a0) <= eps * width / 2.0
        and abs(a_range.hi - a0) <= eps * width / 2.0,
        "lower_bracket": a_range.lo - s_range.hi / root >= a0 - width / 2.0,
        "upper_bracket": a_range.hi + s_range.hi / root <= a0 + width / 2.0,
    }
    clauses["variance_bound"] = s_range.hi**2 <= eps * width**2 / 4.0 + 1e-15
    report = CollimationReport(
        a_range=a_range,
        s_range=s_range,
        interval=(float(interval[0]), float(interval[1])),
        eps=eps,
        clauses=clauses,
        sharp=clauses["value_near_midpoint"]
        and clauses["lower_bracket"]
        and clauses["upper_bracket"],
    )
    if not report.sharp:
        _attach_sharp_witnesses(report, a, w, samples, seed)
    return report


def _attach_sharp_witnesses(report: CollimationReport, a: HermitianOperator,
                            w: Condition, samples: int, seed: int):
    a_sq = HermitianOperator(a.matrix @ a.matrix)
    a0 = report.midpoint
    worst_value, worst_bracket = None, None
    val_dev, bracket_dev = -math.inf, -math.inf
    for bi, ball in enumerate(w.balls):
        pts = _gather_points(ball, (a, a_sq), min(samples, 200), seed, 500 + bi)
        vals, spreads = _value_and_spread_at(a, a_sq, pts)
        dev = np.abs(vals - a0)
        k = int(np.argmax(dev))
        if dev[k] > val_dev:
            val_dev, worst_value = float(dev[k]), pts[k]
        reach = np.abs(vals - a0) + spreads / math.sqrt(report.eps)
        k = int(np.argmax(reach))
        if reach[k] > bracket_dev:
            bracket_dev, worst_bracket = float(reach[k]), pts[k]
    if not report.clauses["value_near_midpoint"] and worst_value is not None:
        report.witnesses["value_near_midpoint"] = worst_value
    if (
        not (report.clauses["lower_bracket"] and report.clauses["upper_bracket"])
        and worst_bracket is not None
    ):
        report.witnesses["bracket"] = worst_bracket


def located_with_projection(p: HermitianOperator, eps: float, w: Condition) -> bool:
    """Location test from an explicit projection operator.

    The certified infimum of the projection section over the condition
    is sample-free: the rigorous outer enclosure (exact on qubits).
    """
    _check_eps(eps)
    if w.is_empty:
        raise ValidationError("location over an empty condition")
    inf_lower, _ = linear_range_outer(p, w)
    return inf_lower > 1.0 - eps


def is_eps_located(a: HermitianOperator, interval, eps: float, w: Condition,
                   samples: int = 600, seed: int = 0) -> bool:
    """True iff the certified infimum of the projection section exceeds 1 - eps."""
    proj = spectral_projection(a, interval)
    # samples/seed are accepted for interface symmetry with the other
    # predicates; the certified bound does not need them
    return located_with_projection(proj, eps, w)


def compression_defect(p: HermitianOperator, rho: DensityState) -> float:
    """Tr|rho - P rho P|, the strict-collimation clause integrand."""
    m = rho.matrix - p.matrix @ rho.matrix @ p.matrix
    return float(np.sum(np.abs(np.linalg.eigvalsh(m))))


def is_strictly_eps_sharp(a: HermitianOperator, interval, eps: float, w: Condition,
                          samples: int = 600, seed: int = 0) -> CollimationReport:
    """Sharp verdict plus the compression clause sup Tr|rho - P rho P| < eps.

    The sup is the sampled maximum (with candidate states) plus a
    Lipschitz slack with constant 2; the maximising sample is recorded as
    a witness when the clause fails.
    """
    report = is_eps_sharp(a, interval, eps, w, samples=samples, seed=seed)
    proj = spectral_projection(a, interval)
    sup = -math.inf
    worst = None
    for bi, ball in enumerate(w.balls):
        pts = _gather_points(ball, (a, proj), samples, seed, 700 + bi)
        defects = [compression_defect(proj, p) for p in pts]
        k = int(np.argmax(defects))
        max_dist = max(trace_distance(ball.center, p) for p in pts)
        bound = defects[k] + 2.0 * max(0.0, ball.radius - max_dist)
        if bound > sup:
            sup = bound
            worst = pts[k]
    report.strict_sup = sup
    report.clauses["compression"] = sup < eps
    report.strict = bool(report.sharp and report.clauses["compression"])
    if not report.clauses["compression"] and worst is not None:
        report.witnesses["compression"] = worst
    return report


@dataclass
class HeisenbergReport:
    both_sharp: bool
    lhs: float
    rhs: float
    satisfied: bool
    commutator_inf: float
    report_a: CollimationReport
    report_b: CollimationReport


def heisenberg_check(a: HermitianOperator, b: HermitianOperator,
                     interval_a, interval_b, eps: float, w: Condition,
                     samples: int = 600, seed: int = 0) -> HeisenbergReport:
    """|I_a||I_b| against 2 inf_W |c_Q| / eps for C = -i[A, B].

    The commutator infimum uses the certified lower bound of the range,
    so 'satisfied' is robustly true whenever both collimations hold (the
    Robertson route); the record is reported regardless of sharpness.
    """
    _check_eps(eps)
    rep_a = is_eps_sharp(a, interval_a, eps, w, samples=samples, seed=seed)
    rep_b = is_eps_sharp(b, interval_b, eps, w, samples=samples, seed=seed)
    c = commutator_hermitian(a, b)
    c_lo, c_hi = linear_range_outer(c, w)
    inf_abs = 0.0 if c_lo <= 0.0 <= c_hi else min(abs(c_lo), abs(c_hi))
    _, wa = _interval_mid_width(interval_a)
    _, wb = _interval_mid_width(interval_b)
    lhs = wa * wb
    rhs = 2.0 * inf_abs / eps
    return HeisenbergReport(
        both_sharp=bool(rep_a.sharp and rep_b.sharp),
        lhs=lhs,
        rhs=rhs,
        satisfied=lhs >= rhs - 1e-12,
        commutator_inf=inf_abs,
        report_a=rep_a,
        report_b=rep_b,
    )
