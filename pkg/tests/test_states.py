import numpy as np
import pytest

import qrlab as q
from qrlab.errors import SamplingError, ValidationError


def test_state_validation():
    with pytest.raises(ValidationError):
        q.DensityState(np.diag([0.7, 0.4]))  # trace 1.1
    with pytest.raises(ValidationError):
        q.DensityState(np.diag([1.1, -0.1]))  # negative beyond clamp
    # tiny negative eigenvalue inside the clamp window is repaired
    rho = q.DensityState(np.diag([1.0 + 5e-11, -5e-11]))
    vals, _ = rho.eig()
    assert vals[0] >= 0.0
    assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-14)


def test_trace_distance_examples():
    k0, k1 = q.basis_state(2, 0), q.basis_state(2, 1)
    assert q.trace_distance(k0, k1) == pytest.approx(2.0, abs=1e-12)
    assert q.trace_distance(k0, k0) == 0.0
    # eigendecomposition oracle: |0><0| - I/2 has eigenvalues +-1/2
    evals = np.linalg.eigvalsh(k0.matrix - np.eye(2) / 2)
    assert np.sum(np.abs(evals)) == pytest.approx(1.0, abs=1e-12)
    assert q.trace_distance(k0, q.maximally_mixed(2)) == pytest.approx(1.0, abs=1e-12)


def test_contains_examples():
    mixed = q.maximally_mixed(2)
    assert q.contains(q.Condition.ball(mixed, 0.2), mixed)
    assert not q.contains(q.Condition.ball(q.basis_state(2, 0), 0.1), q.basis_state(2, 1))
    assert q.contains(q.Condition.ball(q.basis_state(2, 0), 1.1), mixed)


def test_boundary_membership_is_deterministic():
    k0 = q.basis_state(2, 0)
    ball = q.Condition.ball(k0, 1.0)
    assert not q.contains(ball, q.maximally_mixed(2))  # distance exactly 1.0


def test_conditions_intersect_same_center():
    mixed = q.maximally_mixed(2)
    hit, witness = q.conditions_intersect(
        q.Condition.ball(mixed, 0.1), q.Condition.ball(mixed, 0.4)
    )
    assert hit
    assert q.trace_distance(witness, mixed) == 0.0


def test_conditions_intersect_disjoint():
    b0 = q.Condition.ball(q.basis_state(2, 0), 0.5)
    b1 = q.Condition.ball(q.basis_state(2, 1), 0.5)
    hit, witness = q.conditions_intersect(b0, b1)
    assert not hit and witness is None


def test_conditions_intersect_witness_midpoint():
    b0 = q.Condition.ball(q.basis_state(2, 0), 1.2)
    b1 = q.Condition.ball(q.basis_state(2, 1), 1.2)
    hit, witness = q.conditions_intersect(b0, b1)
    assert hit
    mid = (q.basis_state(2, 0).matrix + q.basis_state(2, 1).matrix) / 2
    assert np.max(np.abs(witness.matrix - mid)) <= 1e-12
    assert q.trace_distance(witness, q.basis_state(2, 0)) < 1.2


def _random_bloch(rng, rmax=0.9):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v) * rng.uniform(0.0, rmax)


def test_intersect_symmetric_and_reflexive():
    rng = np.random.default_rng(3)
    for _ in range(10):
        c1 = q.state_from_bloch(_random_bloch(rng))
        c2 = q.state_from_bloch(_random_bloch(rng))
        w1 = q.Condition.ball(c1, rng.uniform(0.05, 0.5))
        w2 = q.Condition.ball(c2, rng.uniform(0.05, 0.5))
        assert q.conditions_intersect(w1, w2)[0] == q.conditions_intersect(w2, w1)[0]
        assert q.conditions_intersect(w1, w1)[0]


def test_hausdorff_separation():
    rng = np.random.default_rng(8)
    for _ in range(20):
        r1 = q.state_from_bloch(_random_bloch(rng))
        r2 = q.state_from_bloch(_random_bloch(rng))
        d = q.trace_distance(r1, r2)
        if d < 1e-6:
            continue
        hit, _ = q.conditions_intersect(
            q.Condition.ball(r1, d / 2), q.Condition.ball(r2, d / 2)
        )
        assert not hit


def test_sample_states_inside_and_deterministic():
    w = q.Condition.ball(q.maximally_mixed(2), 0.2)
    xs = q.sample_states(w, 100, seed=42)
    assert len(xs) == 100
    assert all(q.contains(w, s) for s in xs)
    ys = q.sample_states(w, 100, seed=42)
    for a, b in zip(xs, ys):
        assert np.array_equal(a.matrix, b.matrix)


def test_sample_states_prefix_property():
    w = q.Condition.ball(q.maximally_mixed(2), 0.2)
    xs = q.sample_states(w, 20, seed=5)
    ys = q.sample_states(w, 50, seed=5)
    for a, b in zip(xs, ys[:20]):
        assert np.array_equal(a.matrix, b.matrix)


def test_sampler_reaches_near_boundary():
    w = q.Condition.ball(q.basis_state(2, 0), 0.1)
    xs = q.sample_states(w, 10_000, seed=7)
    dmax = max(q.trace_distance(q.basis_state(2, 0), s) for s in xs)
    assert dmax >= 0.09


def test_sampler_starves_on_degenerate_radius():
    w = q.Condition.ball(q.maximally_mixed(2), 1e-14)
    with pytest.raises(SamplingError) as err:
        q.sample_states(w, 5, seed=1)
    assert err.value.acceptance_rate == 0.0


def test_perturb_examples():
    mixed = q.maximally_mixed(2)
    sigma = q.perturb_nonzero(mixed, q.sigma_z(), 0.1)  # default t = 0.04
    assert sigma.expectation(q.sigma_z()) == pytest.approx(0.04, abs=1e-12)
    assert q.trace_distance(mixed, sigma) == pytest.approx(0.04, abs=1e-12)

    k0 = q.basis_state(2, 0)
    sigma2 = q.perturb_nonzero(k0, q.sigma_x(), 0.2, t=0.1)
    plus_x = q.pure_state([1, 1])
    expected = 0.9 * k0.matrix + 0.1 * plus_x.matrix
    assert np.max(np.abs(sigma2.matrix - expected)) <= 1e-12
    assert sigma2.expectation(q.sigma_x()) == pytest.approx(0.1, abs=1e-12)

    with pytest.raises(ValidationError):
        q.perturb_nonzero(mixed, q.HermitianOperator(np.zeros((2, 2))), 0.1)
    with pytest.raises(ValidationError):
        # a multiple of the identity acts as a constant
        q.perturb_nonzero(mixed, q.identity(2), 0.1)


def test_lipschitz_continuity_of_expectations():
    rng = np.random.default_rng(12)
    for _ in range(30):
        a = q.random_hermitian(3, seed=int(rng.integers(1 << 30)))
        w = q.Condition.ball(q.maximally_mixed(3), 0.6)
        s1, s2 = q.sample_states(w, 2, seed=int(rng.integers(1 << 30)))
        lhs = abs(s1.expectation(a) - s2.expectation(a))
        assert lhs <= a.operator_norm * q.trace_distance(s1, s2) + 1e-9


def test_empty_interior_property():
    # states on the level set Tr(rho A) = alpha admit nearby states off it
    rng = np.random.default_rng(99)
    for trial in range(10):
        a = q.random_hermitian(2, seed=trial)
        lo, hi = a.eigenvalue_bounds
        alpha = float(rng.uniform(lo, hi))
        vals, vecs = a.raw_eig()
        wmix = (alpha - vals[0]) / (vals[-1] - vals[0])
        rho = q.DensityState(
            (1 - wmix) * np.outer(vecs[:, 0], vecs[:, 0].conj())
            + wmix * np.outer(vecs[:, -1], vecs[:, -1].conj())
        )
        assert rho.expectation(a) == pytest.approx(alpha, abs=1e-12)
        for eps in (1e-1, 1e-3, 1e-6):
            sigma = q.perturb_nonzero(rho, a, eps)
            assert q.trace_distance(rho, sigma) < eps
            assert sigma.expectation(a) != pytest.approx(alpha, abs=1e-15)


def test_condition_structure():
    with pytest.raises(ValidationError):
        q.Condition([])
    empty = q.Condition.empty(2)
    assert empty.is_empty
    assert q.Condition.full(2).covers_all
    with pytest.raises(ValidationError):
        q.Ball(q.maximally_mixed(2), 0.0)
