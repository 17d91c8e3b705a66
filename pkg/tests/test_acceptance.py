"""Acceptance suite: one test per release criterion, each printing a
pass/fail line.  Tolerances are pinned here, not configured elsewhere."""

import time

import numpy as np
import pytest

import qrlab as q
from qrlab.logic import BasisPoset, TruthValue, implies, join, meet, neg
from oracles import (
    all_labeled_posets,
    bloch_grid_range,
    coherent_amplitudes,
    gaussian_slit_mass,
    random_poset,
)


def _criterion(num, desc, ok):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {desc}")
    assert ok, f"criterion {num} failed: {desc}"


def _random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _bell_spec(eps, pairs, seed):
    return q.EnsembleSpec(center=q.singlet_state(), epsilon=eps, pairs=pairs,
                          seed=seed, ontic_fraction=0.1)


def test_criterion_1_and_3_bell_bohm_correlation():
    started = time.monotonic()
    rep = q.bell_bohm([0, 0, 1], [0, 0, 1], _bell_spec(0.01, 1000, seed=2001))
    elapsed = time.monotonic() - started
    ok = abs(rep.mean - (-1.0)) <= 0.011 and elapsed <= 10.0
    _criterion(1, f"aligned singlet mean {rep.mean:.4f} in 0.011 of -1, "
                  f"{elapsed:.1f}s <= 10s", ok)

    all_pairs_ok = rep.extra["per_pair_theorem_ok"]
    rng = np.random.default_rng(388)
    for k in range(8):
        u_l, u_r = _random_unit(rng), _random_unit(rng)
        r = q.bell_bohm(u_l, u_r, _bell_spec(0.01, 1000, seed=3000 + k))
        assert r.target == pytest.approx(-float(u_l @ u_r), abs=1e-12)
        _criterion(1, f"random settings #{k}: |mean - target| = "
                      f"{abs(r.mean - r.target):.4f} <= 0.011",
                   abs(r.mean - r.target) <= 0.011)
        all_pairs_ok = all_pairs_ok and r.extra["per_pair_theorem_ok"]
    _criterion(3, "100% of pairs satisfy |c_n - Tr(rho_n C)| < delta_n",
               all_pairs_ok)


def test_criterion_2_chsh_values():
    s = 1 / np.sqrt(2)
    res = q.chsh([0, 0, 1], [1, 0, 0], [s, 0, s], [s, 0, -s],
                 _bell_spec(0.005, 2000, seed=2101))
    ok = 2 * np.sqrt(2) - 0.03 <= res.s_value <= 2 * np.sqrt(2) + 0.03
    _criterion(2, f"singlet CHSH S = {res.s_value:.4f} within 0.03 of 2 sqrt 2", ok)

    prod = q.pure_state([1, 0, 0, 0])
    spec = q.EnsembleSpec(center=prod, epsilon=0.005, pairs=2000,
                          seed=2102, ontic_fraction=0.1)
    res2 = q.chsh([0, 0, 1], [1, 0, 0], [s, 0, s], [s, 0, -s], spec)
    _criterion(2, f"product-state CHSH S = {res2.s_value:.4f} <= 2.03",
               res2.s_value <= 2.03)


def test_criterion_4_born_rule_recovery():
    proj = q.HermitianOperator(q.pure_state([1, 1]).matrix)
    spec = q.EnsembleSpec(center=q.basis_state(2, 0), epsilon=0.01,
                          pairs=10_000, seed=2401, ontic_fraction=0.0)
    rep = q.dichotomic_ensemble(proj, spec)
    ok = abs(rep.mean - 0.5) <= 0.025
    _criterion(4, f"dichotomic frequency {rep.mean:.4f} within 0.025 of 0.5", ok)


def test_criterion_5_lueders_scaling():
    rho0 = q.basis_state(2, 0)
    devs = {"z": [], "x": []}
    for level, (delta, eps) in enumerate([(0.02, 0.05), (0.01, 0.025),
                                          (0.005, 0.0125)]):
        w = q.Condition.ball(rho0, delta)
        u = q.Condition.ball(q.basis_state(2, 0), 0.018 * eps)
        for tag, b_op in (("z", q.sigma_z()), ("x", q.sigma_x())):
            rep = q.lueders_experiment(q.sigma_z(), (0.8, 1.2), b_op, w, u, eps,
                                       samples=300, seed=2500 + level)
            dev = rep.extra["deviation"]
            _criterion(5, f"level {level} B=sigma_{tag}: deviation {dev:.2e} "
                          f"<= {delta + 2 * eps:.3f}", dev <= delta + 2 * eps)
            devs[tag].append(dev)
    for tag in ("z", "x"):
        for k in range(2):
            ratio = devs[tag][k + 1] / devs[tag][k]
            _criterion(5, f"B=sigma_{tag} level {k + 1}/{k} deviation ratio "
                          f"{ratio:.3f} <= 0.7", ratio <= 0.7)


def _random_qubit_instance(rng):
    axis = _random_unit(rng)
    a_op = q.HermitianOperator(
        axis[0] * q.sigma_x().matrix + axis[1] * q.sigma_y().matrix
        + axis[2] * q.sigma_z().matrix + rng.uniform(-0.3, 0.3) * np.eye(2)
    )
    eps = float(rng.uniform(0.1, 0.9))
    if rng.random() < 0.5:
        vals, vecs = a_op.raw_eig()
        k = int(rng.integers(2))
        center = q.pure_state(vecs[:, k])
        radius = float(rng.uniform(0.002, 0.02))
        mid, width = vals[k], float(rng.uniform(0.3, 0.8))
    else:
        center = q.state_from_bloch(_random_unit(rng) * rng.uniform(0.0, 0.95))
        radius = float(rng.uniform(0.01, 0.3))
        mid, width = float(rng.uniform(-1.0, 1.0)), float(rng.uniform(0.05, 1.0))
    interval = (mid - width / 2, mid + width / 2)
    return a_op, interval, eps, q.Condition.ball(center, radius)


def test_criterion_6_sharp_implies_located():
    started = time.monotonic()
    rng = np.random.default_rng(2601)
    sharp_count, violations = 0, 0
    for _ in range(200):
        a_op, interval, eps, w = _random_qubit_instance(rng)
        rep = q.is_eps_sharp(a_op, interval, eps, w, samples=60, seed=1)
        if rep.sharp:
            sharp_count += 1
            if not q.is_eps_located(a_op, interval, eps, w):
                violations += 1
    elapsed = time.monotonic() - started
    _criterion(6, f"sharp => located on 200 instances ({sharp_count} sharp, "
                  f"{violations} violations, {elapsed:.1f}s <= 60s)",
               violations == 0 and sharp_count > 0 and elapsed <= 60.0)


def test_criterion_7_heisenberg_inequality():
    rng = np.random.default_rng(2701)
    violations, both_count = 0, 0
    for trial in range(200):
        b_axis = _random_unit(rng)
        b_op = q.HermitianOperator(
            b_axis[0] * q.sigma_x().matrix + b_axis[1] * q.sigma_y().matrix
            + b_axis[2] * q.sigma_z().matrix
        )
        if trial % 2 == 0:
            # engineered toward joint sharpness: an eigenstate ball of A
            # with a wide interval for the non-commuting B
            a_op, interval_a, _, w = _random_qubit_instance(rng)
            vals, vecs = a_op.raw_eig()
            k = int(rng.integers(2))
            w = q.Condition.ball(q.pure_state(vecs[:, k]),
                                 float(rng.uniform(0.002, 0.01)))
            interval_a = (vals[k] - 0.3, vals[k] + 0.3)
            eps = float(rng.uniform(0.7, 0.9))
            width_b = float(rng.uniform(2.3, 2.8))
        else:
            a_op, interval_a, eps, w = _random_qubit_instance(rng)
            width_b = float(rng.uniform(0.3, 1.2))
        vb = w.balls[0].center.expectation(b_op)
        interval_b = (vb - width_b / 2, vb + width_b / 2)
        rec = q.heisenberg_check(a_op, b_op, interval_a, interval_b, eps, w,
                                 samples=60, seed=1)
        if rec.both_sharp:
            both_count += 1
            if not rec.satisfied:
                violations += 1
    _criterion(7, f"Heisenberg bound on 200 instances ({both_count} both-sharp, "
                  f"{violations} violations)", violations == 0 and both_count >= 20)

    rec = q.heisenberg_check(q.sigma_x(), q.sigma_y(), (-1.5, 1.5), (-1.5, 1.5),
                             0.5, q.Condition.ball(q.basis_state(2, 0), 0.005),
                             seed=1)
    ok = (rec.both_sharp and rec.lhs == pytest.approx(9.0, abs=1e-9)
          and abs(rec.rhs - 8.0) <= 0.05)
    _criterion(7, f"worked instance lhs = {rec.lhs:.2f}, rhs = {rec.rhs:.3f} "
                  "= 8 +- 0.05", ok)


def _heyting_laws_on(poset) -> int:
    downsets = [TruthValue(poset, s) for s in poset.downsets()]
    bottom = TruthValue.bottom(poset)
    checked = 0
    for u in downsets:
        assert meet(u, neg(u)) == bottom
        for v in downsets:
            imp = implies(u, v)
            for w in downsets:
                checked += 1
                assert (meet(w, u).members <= v.members) == (
                    w.members <= imp.members
                )
                assert meet(u, join(v, w)) == join(meet(u, v), meet(u, w))
    return checked


def test_criterion_8_heyting_laws():
    total = 0
    for n in (1, 2, 3, 4):
        for leq in all_labeled_posets(n):
            total += _heyting_laws_on(BasisPoset(leq))
    rng = np.random.default_rng(2801)
    five = [BasisPoset.chain(5), BasisPoset.from_relation(5, [])]
    five += [BasisPoset(random_poset(5, rng)) for _ in range(20)]
    for poset in five:
        total += _heyting_laws_on(poset)
    _criterion(8, f"Heyting adjunction + distributivity on {total} triples "
                  "(all posets with <= 4 elements exhaustively, plus a "
                  "5-element family)", total >= 2000)

    chain3 = BasisPoset.from_balls(
        [q.Ball(q.maximally_mixed(2), r) for r in (0.1, 0.2, 0.3)]
    )
    witness = q.lem_counterexample(chain3)
    _criterion(8, f"LEM counterexample on the 3-chain: U = {sorted(witness.members)}",
               witness is not None)


def test_criterion_9_empty_interior():
    rng = np.random.default_rng(2901)
    failures = 0
    for trial in range(50):
        dim = int(rng.integers(2, 5))
        a = q.random_hermitian(dim, seed=int(rng.integers(1 << 30)))
        vals, vecs = a.raw_eig()
        wmix = float(rng.uniform(0.05, 0.95))
        alpha = (1 - wmix) * vals[0] + wmix * vals[-1]
        rho = q.DensityState(
            (1 - wmix) * np.outer(vecs[:, 0], vecs[:, 0].conj())
            + wmix * np.outer(vecs[:, -1], vecs[:, -1].conj())
        )
        assert abs(rho.expectation(a) - alpha) < 1e-12
        for eps in (1e-1, 1e-3, 1e-6):
            sigma = q.perturb_nonzero(rho, a, eps)
            if not (q.trace_distance(rho, sigma) < eps
                    and sigma.expectation(a) != alpha):
                failures += 1
    _criterion(9, "perturb_nonzero succeeds on 50 level sets x 3 scales",
               failures == 0)


def test_criterion_10_dynamics_linear_force_equality():
    dim = 60
    psi = q.pure_state(coherent_amplitudes(dim, 1.0))
    w = q.Condition.ball(psi, 0.01)
    grid = q.time_grid(2 * np.pi, 0.005)
    model = q.ModelSpec(dim, "harmonic")
    ham = q.qr_hamilton_evolve(model, w, grid, samples=20, seed=2901)
    hei = q.heisenberg_average_evolve(model, w, grid, samples=20, seed=2901)
    cmp = q.compare_evolutions(ham, hei)
    ok = cmp.sup_dev <= 1e-6 + hei.truncation_diag and cmp.dev_curve[0] == 0.0
    _criterion(10, f"harmonic sup_dev {cmp.sup_dev:.2e} <= 1e-6 + diag "
                   f"{hei.truncation_diag:.2e}", ok)

    model_q = q.ModelSpec(dim, "quartic", lam=0.1)
    grid_q = q.time_grid(3.0, 0.005)
    ham_q = q.qr_hamilton_evolve(model_q, w, grid_q, samples=20, seed=2901)
    hei_q = q.heisenberg_average_evolve(model_q, w, grid_q, samples=20, seed=2901)
    cmp_q = q.compare_evolutions(ham_q, hei_q)
    ok_q = cmp_q.sup_dev > 1e-3 and cmp_q.dev_curve[0] == 0.0
    _criterion(10, f"quartic sup_dev {cmp_q.sup_dev:.2e} > 1e-3 with "
                   "dev_curve(0) = 0", ok_q)


def test_criterion_11_double_slit_location():
    z_op, psi = q.double_slit_instance()
    w = q.Condition.ball(psi, 0.01)
    rep = q.double_slit_location(z_op, (2, 4), (-4, -2), w, 0.05,
                                 samples=200, seed=2111)
    ok = rep.located_union and not rep.located_plus and not rep.located_minus
    _criterion(11, f"two-Gaussian slit: union {rep.located_union}, "
                   f"plus {rep.located_plus}, minus {rep.located_minus}", ok)
    # cross-check the location margin against the direct mass oracle
    mass = gaussian_slit_mass(200, -10, 10, (3, -3), 0.5, (2, 4)) + \
        gaussian_slit_mass(200, -10, 10, (3, -3), 0.5, (-4, -2))
    assert mass - 0.01 / 2 > 1 - 0.05


def test_criterion_12_range_oracle_agreement():
    rng = np.random.default_rng(3201)
    worst = 0.0
    for _ in range(50):
        axis = _random_unit(rng)
        a_op = q.HermitianOperator(
            axis[0] * q.sigma_x().matrix + axis[1] * q.sigma_y().matrix
            + axis[2] * q.sigma_z().matrix
            + rng.uniform(-0.5, 0.5) * np.eye(2)
        )
        center = q.state_from_bloch(_random_unit(rng) * rng.uniform(0.0, 0.9))
        radius = float(rng.uniform(0.05, 0.3))
        sec = q.QrNumber.linear(a_op, q.Condition.ball(center, radius))
        r = q.eval_range(sec, samples=400, seed=int(rng.integers(1 << 30)))
        olo, ohi = bloch_grid_range(a_op.matrix, center.matrix, radius)
        worst = max(worst, abs(r.lo - olo), abs(r.hi - ohi))
    _criterion(12, f"eval_range vs Bloch grid oracle on 50 instances, "
                   f"worst gap {worst:.4f} <= 0.01", worst <= 0.01)
