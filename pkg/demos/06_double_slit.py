#!/usr/bin/env python3
"""Double-slit location structure.

A particle prepared in a superposition across two disjoint slits is
eps-located in the union of the slits without being located in either
one.  Its position section over the condition is a narrow interval
around zero: one location in qr-number space whose graph is a union of
disjoint classical parts.
"""

import qrlab as q


def main():
    print("=" * 64)
    print("a single location across two separated slits")
    print("=" * 64)

    z_op, psi = q.double_slit_instance(dim=200, lo=-10, hi=10,
                                       peaks=(3.0, -3.0), width=0.5)
    w = q.Condition.ball(psi, 0.01)
    print("\nstate: equal superposition of wavepackets at +3 and -3 (width 0.5)")
    print("slits: I+ = [2, 4], I- = [-4, -2]; eps = 0.05")

    rep = q.double_slit_location(z_op, (2, 4), (-4, -2), w, 0.05,
                                 samples=300, seed=6)
    print(f"\nprojection weight at the center state:")
    print(f"  in I+:      {rep.masses['plus']:.4f}")
    print(f"  in I-:      {rep.masses['minus']:.4f}")
    print(f"  in I+ u I-: {rep.masses['union']:.4f}")

    print(f"\nlocated in the union: {rep.located_union}")
    print(f"located in I+ alone:  {rep.located_plus}")
    print(f"located in I- alone:  {rep.located_minus}")

    print(f"\nposition section over the condition: "
          f"[{rep.z_range.lo:+.4f}, {rep.z_range.hi:+.4f}]")
    print("the particle has one qr-number location; classically it would")
    print("need to be in one slit or the other, and it is in neither")

    print("\ncontrol: a single wavepacket at +3 IS located in I+")
    z2 = q.grid_position_operator(200, -10, 10)
    psi2 = q.pure_state(q.gaussian_wavepacket(200, -10, 10, 3.0, 0.5))
    rep2 = q.double_slit_location(z2, (2, 4), (-4, -2),
                                  q.Condition.ball(psi2, 0.01), 0.05,
                                  samples=100, seed=6)
    print(f"  located_plus = {rep2.located_plus}, located_minus = {rep2.located_minus}")


if __name__ == "__main__":
    main()
