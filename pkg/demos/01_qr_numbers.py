#!/usr/bin/env python3
"""Quantum real numbers as interval-valued sections.

A physical quality (a Hermitian operator) does not carry a single real
value; it carries a section rho -> Tr(rho A) over an open condition of
state space.  This script builds such sections, evaluates them pointwise,
summarises them as range intervals, and shows the order-to-an-extent,
extension-by-zero, and unitary-covariance structure.
"""

import numpy as np

import qrlab as q


def main():
    print("=" * 64)
    print("qr-numbers: sections over conditions")
    print("=" * 64)

    # a condition: a trace-norm ball around the maximally mixed qubit state
    mixed = q.maximally_mixed(2)
    w = q.Condition.ball(mixed, 0.2)
    sz = q.QrNumber.linear(q.sigma_z(), w)

    print("\nPointwise values (the section evaluated at states of W):")
    print(f"  at the center:            {q.eval_at(sz, mixed):+.4f}")
    tilted = q.state_from_bloch([0.05, 0.0, 0.1])
    print(f"  at a tilted state:        {q.eval_at(sz, tilted):+.4f}")

    r = q.eval_range(sz, samples=2000, seed=42)
    print(f"\nRange over W = nu(I/2, 0.2):  [{r.lo:+.4f}, {r.hi:+.4f}]  ({r.rigor})")
    print("  the section is not a number: it genuinely spreads over W")

    near_pole = q.Condition.ball(q.basis_state(2, 0), 0.1)
    r2 = q.eval_range(q.QrNumber.linear(q.sigma_z(), near_pole), samples=2000, seed=42)
    print(f"Range over nu(|0><0|, 0.1):   [{r2.lo:+.4f}, {r2.hi:+.4f}]")
    print("  clipped at 1: state space itself bounds the section")

    print("\nArithmetic stays pointwise: sin(2 a_Q) at the tilted state")
    expr = q.qr_apply("sin", q.qr_scale(sz, 2.0))
    print(f"  section value: {q.eval_at(expr, tilted):+.6f}")
    print(f"  plain float:   {np.sin(2 * q.eval_at(sz, tilted)):+.6f}")

    print("\nOrder holds to an extent, not absolutely (trichotomy fails):")
    wide = q.Condition.ball(mixed, 0.3)
    a = q.QrNumber.linear(q.sigma_z(), wide)
    zero = q.QrNumber.constant(0.0)
    below = q.order_extent(a, zero, grain=0.05, samples=300, seed=7)
    above = q.order_extent(zero, a, grain=0.05, samples=300, seed=7)
    print(f"  sub-condition where a_Q < 0: {len(below.balls)} balls")
    print(f"  sub-condition where a_Q > 0: {len(above.balls)} balls")
    print("  neither covers W, and the level set a_Q = 0 has empty interior:")
    sigma = q.perturb_nonzero(mixed, q.sigma_z(), 1e-6)
    print(f"  within 1e-6 of I/2 there is a state with a_Q = "
          f"{sigma.expectation(q.sigma_z()):.2e} != 0")

    print("\nExtension by zero makes a section total:")
    ext = q.extend_by_zero(q.QrNumber.linear(q.sigma_z(), near_pole))
    print(f"  inside its extent:  {ext.eval_at(q.basis_state(2, 0)):+.4f}")
    print(f"  outside its extent: {ext.eval_at(q.basis_state(2, 1)):+.4f}")

    print("\nUnitary covariance: transform the quality, counter-rotate the extent")
    sec = q.QrNumber.linear(q.sigma_z(), near_pole)
    flipped = q.covariance_transform(sec, q.sigma_x().matrix)
    w_prime = q.transform_condition(near_pole, q.sigma_x().matrix)
    r_left = q.eval_range(flipped, samples=500, seed=1)
    r_right = q.eval_range(q.QrNumber.linear(q.sigma_z(), w_prime), samples=500, seed=1)
    print(f"  range of (U sz U*) over W:  [{r_left.lo:+.4f}, {r_left.hi:+.4f}]")
    print(f"  range of sz over W':        [{r_right.lo:+.4f}, {r_right.hi:+.4f}]")


if __name__ == "__main__":
    main()
