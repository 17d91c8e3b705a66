#!/usr/bin/env python3
"""Collimation: when does a section count as a measured real number?

A quality is eps-sharp collimated in an interval when its section and
spread fit the interval tightly enough that a single standard real
approximates it to accuracy eps.  Sharp implies eps-located (the spectral
projection section stays above 1 - eps), the strict variant additionally
pins the condition under compression by the projection, and two
non-commuting qualities cannot both be sharp through narrow slits: the
commutator forces |I_a||I_b| >= 2 |c_Q| / eps.
"""

import qrlab as q


def verdict(flag):
    return "yes" if flag else "no"


def main():
    print("=" * 64)
    print("eps-sharp collimation, eps-location, Heisenberg bound")
    print("=" * 64)

    sz = q.sigma_z()
    eigen_ball = q.Condition.ball(q.basis_state(2, 0), 0.005)
    mixed_ball = q.Condition.ball(q.maximally_mixed(2), 0.01)

    print("\nsigma_z against the interval [0.8, 1.2] at eps = 0.5:")
    for label, w in (("eigenstate ball", eigen_ball), ("mixed ball", mixed_ball)):
        rep = q.is_eps_sharp(sz, (0.8, 1.2), 0.5, w, seed=1)
        print(f"  {label:<16} a_Q in [{rep.a_range.lo:+.4f}, {rep.a_range.hi:+.4f}]"
              f"  spread <= {rep.s_range.hi:.4f}  sharp: {verdict(rep.sharp)}")

    print("\nlocation (projection section stays above 1 - eps):")
    for label, w in (("eigenstate ball", eigen_ball), ("mixed ball", mixed_ball)):
        loc = q.is_eps_located(sz, (0.8, 1.2), 0.05, w)
        print(f"  {label:<16} located: {verdict(loc)}")

    print("\nstrict collimation adds Tr|rho - P rho P| < eps throughout:")
    rep = q.is_strictly_eps_sharp(sz, (0.8, 1.2), 0.3, eigen_ball, seed=1)
    print(f"  eigenstate ball: strict {verdict(rep.strict)} "
          f"(sup defect {rep.strict_sup:.4f})")
    rep2 = q.is_strictly_eps_sharp(
        sz, (0.8, 1.2), 0.3, q.Condition.ball(q.pure_state([1, 1]), 0.01), seed=1
    )
    print(f"  |+x> ball:       strict {verdict(rep2.strict)} "
          f"(sup defect {rep2.strict_sup:.4f})")

    print("\nHeisenberg inequality for sigma_x / sigma_y at eps = 0.5:")
    rec = q.heisenberg_check(
        q.sigma_x(), q.sigma_y(), (-1.5, 1.5), (-1.5, 1.5), 0.5, eigen_ball, seed=1
    )
    print(f"  both sharp: {verdict(rec.both_sharp)}")
    print(f"  |I_a||I_b| = {rec.lhs:.2f} >= 2 inf|c_Q|/eps = {rec.rhs:.3f}: "
          f"{verdict(rec.satisfied)}")

    print("\nShrink the slits and joint sharpness dies first:")
    rec2 = q.heisenberg_check(
        q.sigma_x(), q.sigma_y(), (-0.3, 0.3), (-0.3, 0.3), 0.5, eigen_ball, seed=1
    )
    print(f"  narrow slits: both sharp {verdict(rec2.both_sharp)}, "
          f"lhs {rec2.lhs:.2f} vs rhs {rec2.rhs:.3f}")


if __name__ == "__main__":
    main()
