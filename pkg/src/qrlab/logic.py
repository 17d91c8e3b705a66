"""Finite Heyting algebra of truth values over a basis of balls.

The frame is the Alexandrov frame of the ball-containment poset: truth
values are downsets, meet and join are intersection and union, and
implication is the usual adjoint.  The containment test is sound but
only sufficient, so the frame is an inner model of the metric topology;
that is exactly what the logic laws need, and it makes every operation
exact and finitely checkable (including the failure of excluded middle).
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, ValidationError
from .qrnum import (
    QrNumber,
    bound_and_lipschitz,
    eval_many,
    linear_ball_range_outer,
    _ball_sample_states,
    _candidate_states,
)
from .states import Ball, trace_distance


class BasisPoset:
    """A finite poset of basis elements, transitively closed on construction.

    Built either from balls (order: d(centers) + r_i <= r_j, duplicates
    merged so the order is antisymmetric) or from an abstract relation.
    """

    def __init__(self, leq: np.ndarray, balls=None, labels=None):
        leq = np.asarray(leq, dtype=bool)
        n = leq.shape[0]
        if leq.shape != (n, n):
            raise ValidationError("order relation must be a square boolean matrix")
        if not np.all(np.diag(leq)):
            raise ValidationError("order relation must be reflexive")
        closed = self._transitive_closure(leq)
        if not np.array_equal(closed, leq):
            leq = closed
        if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
            raise ValidationError("order relation is not antisymmetric")
        self.leq = leq
        self.leq.setflags(write=False)
        self.balls = tuple(balls) if balls is not None else None
        self.labels = tuple(labels) if labels is not None else tuple(
            f"b{i + 1}" for i in range(n)
        )
        self.down = tuple(
            frozenset(int(j) for j in np.flatnonzero(leq[:, i])) for i in range(n)
        )

    @staticmethod
    def _transitive_closure(leq: np.ndarray) -> np.ndarray:
        out = leq.copy()
        n = out.shape[0]
        for k in range(n):
            out |= np.outer(out[:, k], out[k, :])
        return out

    @property
    def size(self) -> int:
        return self.leq.shape[0]

    @classmethod
    def from_balls(cls, balls) -> "BasisPoset":
        balls = list(balls)
        if not balls:
            raise ValidationError("a basis poset needs at least one ball")
        dims = {b.dim for b in balls}
        if len(dims) != 1:
            raise DimensionMismatchError("basis balls of mixed dimension")
        # merge duplicates (same center and radius up to tolerance)
        kept: list[Ball] = []
        for b in balls:
            if not any(
                trace_distance(b.center, k.center) <= 1e-12
                and abs(b.radius - k.radius) <= 1e-12
                for k in kept
            ):
                kept.append(b)
        n = len(kept)
        leq = np.eye(n, dtype=bool)
        for i in range(n):
            for j in range(n):
                if i != j and kept[i].subset_of(kept[j]):
                    leq[i, j] = True
        # mutual comparability after rounding means duplicates: merge greedily
        mutual = leq & leq.T & ~np.eye(n, dtype=bool)
        if np.any(mutual):
            drop = set()
            for i in range(n):
                for j in range(i + 1, n):
                    if mutual[i, j]:
                        drop.add(j)
            kept = [b for k, b in enumerate(kept) if k not in drop]
            return cls.from_balls(kept)
        return cls(leq, balls=kept)

    @classmethod
    def from_relation(cls, n: int, pairs, labels=None) -> "BasisPoset":
        leq = np.eye(n, dtype=bool)
        for i, j in pairs:
            leq[i, j] = True
        return cls(leq, labels=labels)

    @classmethod
    def chain(cls, n: int) -> "BasisPoset":
        return cls.from_relation(n, [(i, j) for i in range(n) for j in range(i, n)])

    def downsets(self) -> list[frozenset]:
        """All downsets, generated by saturating single-element extensions."""
        found = {frozenset()}
        frontier = [frozenset()]
        while frontier:
            s = frontier.pop()
            for x in range(self.size):
                if x in s:
                    continue
                if self.down[x] - {x} <= s:
                    t = s | {x}
                    if t not in found:
                        found.add(t)
                        frontier.append(t)
        return sorted(found, key=lambda s: (len(s), sorted(s)))


class TruthValue:
    """An open element of the frame: a downset of the basis poset."""

    __slots__ = ("poset", "members")

    def __init__(self, poset: BasisPoset, members):
        members = frozenset(int(m) for m in members)
        for x in members:
            if not poset.down[x] <= members:
                raise ValidationError(f"set is not a downset: misses part of down({x})")
        self.poset = poset
        self.members = members

    @classmethod
    def bottom(cls, poset: BasisPoset) -> "TruthValue":
        return cls(poset, frozenset())

    @classmethod
    def top(cls, poset: BasisPoset) -> "TruthValue":
        return cls(poset, frozenset(range(poset.size)))

    @classmethod
    def generated_by(cls, poset: BasisPoset, elements) -> "TruthValue":
        out = set()
        for x in elements:
            out |= poset.down[x]
        return cls(poset, out)

    @property
    def is_top(self) -> bool:
        return len(self.members) == self.poset.size

    @property
    def is_bottom(self) -> bool:
        return not self.members

    def __eq__(self, other):
        return (
            isinstance(other, TruthValue)
            and self.poset is other.poset
            and self.members == other.members
        )

    def __hash__(self):
        return hash((id(self.poset), self.members))

    def __le__(self, other):
        _same_poset(self, other)
        return self.members <= other.members

    def __repr__(self):
        names = ",".join(self.poset.labels[i] for i in sorted(self.members))
        return f"TruthValue({{{names}}})"


def _same_poset(u: TruthValue, v: TruthValue):
    if u.poset is not v.poset:
        raise ValidationError("truth values live on different posets")


def meet(u: TruthValue, v: TruthValue) -> TruthValue:
    _same_poset(u, v)
    return TruthValue(u.poset, u.members & v.members)


def join(u: TruthValue, v: TruthValue) -> TruthValue:
    _same_poset(u, v)
    return TruthValue(u.poset, u.members | v.members)


def implies(u: TruthValue, v: TruthValue) -> TruthValue:
    """Heyting implication: the largest downset W with meet(W, U) <= V."""
    _same_poset(u, v)
    poset = u.poset
    members = {
        x
        for x in range(poset.size)
        if (poset.down[x] & u.members) <= v.members
    }
    return TruthValue(poset, members)


def neg(u: TruthValue) -> TruthValue:
    return implies(u, TruthValue.bottom(u.poset))


def lem_counterexample(poset: BasisPoset):
    """A downset U with U or not-U below top, if one exists."""
    for members in poset.downsets():
        u = TruthValue(poset, members)
        if not join(u, neg(u)).is_top:
            return u
    return None


# ---------------------------------------------------------------------------
# locating a qr-number proposition

def _certified_ball_range(a: QrNumber, ball: Ball, samples: int, seed: int, tag: int):
    """Conservative enclosure of the section's values over one basis ball."""
    if a.kind == "linear":
        return linear_ball_range_outer(a.operator, ball)
    pts = _candidate_states(a, ball)
    pts.extend(_ball_sample_states(ball, samples, seed, tag))
    vals = eval_many(a, pts)
    lo, hi = float(np.min(vals)), float(np.max(vals))
    bounds, lip = bound_and_lipschitz(a)
    if not np.isfinite(lip):
        return bounds
    max_dist = max(trace_distance(ball.center, p) for p in pts)
    slack = lip * max(0.0, ball.radius - max_dist)
    return lo - slack, hi + slack


def locate_proposition(a: QrNumber, interval, poset: BasisPoset,
                       samples: int = 400, seed: int = 0) -> TruthValue:
    """Extent of 'the value of a lies in interval' over the basis.

    A basis ball joins the downset when the certified range of the
    section over it is contained in the interval; the result is closed
    downward explicitly (smaller balls have smaller ranges, so this is
    sound even under sampling noise).
    """
    if poset.balls is None:
        raise ValidationError("locate_proposition needs a ball-based poset")
    lo, hi = float(interval[0]), float(interval[1])
    if lo > hi:
        raise ValidationError(f"invalid interval [{lo}, {hi}]")
    ext = a.extent
    members = set()
    for i, ball in enumerate(poset.balls):
        if ext is not None and not ext.covers_all:
            if not any(ball.subset_of(big) for big in ext.balls):
                continue
        rlo, rhi = _certified_ball_range(a, ball, samples, seed, 100 + i)
        if rlo >= lo and rhi <= hi:
            members.add(i)
    closed = set()
    for x in members:
        closed |= poset.down[x]
    return TruthValue(poset, closed)
