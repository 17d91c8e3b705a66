#!/usr/bin/env python3
"""The intuitionistic logic of conditions.

Truth values of propositions about a quantum system are open regions of
state space, organised here as downsets of a finite poset of basis balls.
The resulting algebra is Heyting: non-contradiction survives, the law of
excluded middle does not.
"""

import qrlab as q
from qrlab.logic import BasisPoset, TruthValue, implies, join, meet, neg


def show(label, tv):
    names = ",".join(tv.poset.labels[i] for i in sorted(tv.members)) or "-"
    print(f"  {label:<18} {{{names}}}")


def main():
    print("=" * 64)
    print("Heyting truth values over a basis of balls")
    print("=" * 64)

    # three nested balls around the maximally mixed state form a 3-chain
    balls = [q.Ball(q.maximally_mixed(2), r) for r in (0.1, 0.2, 0.3)]
    poset = BasisPoset.from_balls(balls)
    print(f"\nbasis: nested balls with radii 0.1 <= 0.2 <= 0.3 "
          f"(chain of {poset.size})")

    u = TruthValue.generated_by(poset, [0])
    show("U", u)
    show("not U", neg(u))
    show("U or not U", join(u, neg(u)))
    print("  -> excluded middle FAILS: U or not-U is not the top element")
    show("not not U", neg(neg(u)))
    print("  -> double negation strictly grows U")
    show("U and not U", meet(u, neg(u)))
    print("  -> non-contradiction survives")

    print("\nThe Heyting adjunction at work: W and U <= V  iff  W <= (U => V)")
    v = TruthValue.bottom(poset)
    show("U => bottom", implies(u, v))

    print("\nLocating a proposition: 'the value of sigma_z lies in [0.8, 1.2]'")
    basis = [
        q.Ball(q.basis_state(2, 0), 0.02),
        q.Ball(q.basis_state(2, 0), 0.08),
        q.Ball(q.maximally_mixed(2), 0.05),
        q.Ball(q.basis_state(2, 1), 0.05),
    ]
    loc_poset = BasisPoset.from_balls(basis)
    section = q.QrNumber.linear(q.sigma_z(), q.Condition.full(2))
    tv = q.locate_proposition(section, (0.8, 1.2), loc_poset, samples=200, seed=3)
    print("  basis balls: small and larger ball at |0><0|, ball at I/2, ball at |1><1|")
    show("extent of truth", tv)
    print("  the proposition holds near the eigenstate and nowhere else;")
    print("  its truth value is an open region, not a bit")


if __name__ == "__main__":
    main()
