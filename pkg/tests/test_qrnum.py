import numpy as np
import pytest

import qrlab as q
from qrlab.errors import (
    DomainError,
    EmptySectionError,
    ExtentError,
    ValidationError,
)
from oracles import bloch_grid_range


def _linear(op, center, radius):
    return q.QrNumber.linear(op, q.Condition.ball(center, radius))


def test_eval_at_examples():
    w = q.Condition.ball(q.maximally_mixed(2), 0.3)
    ident = q.QrNumber.linear(q.identity(2), w)
    assert q.eval_at(ident, q.maximally_mixed(2)) == pytest.approx(1.0, abs=1e-14)

    sz = q.QrNumber.linear(q.sigma_z(), q.Condition.full(2))
    assert q.eval_at(sz, q.maximally_mixed(2)) == pytest.approx(0.0, abs=1e-14)

    # (a_Q)^2 as an expression: this is the square of the section value,
    # not the section of the squared operator
    sx = q.QrNumber.linear(q.sigma_x(), q.Condition.full(2))
    squared = q.qr_mul(sx, sx)
    assert q.eval_at(squared, q.pure_state([1, 1])) == pytest.approx(1.0, abs=1e-12)


def test_eval_at_outside_extent_raises():
    sec = _linear(q.sigma_z(), q.basis_state(2, 0), 0.1)
    with pytest.raises(ExtentError):
        q.eval_at(sec, q.basis_state(2, 1))


def test_eval_range_against_bloch_oracle_mixed_center():
    sec = _linear(q.sigma_z(), q.maximally_mixed(2), 0.2)
    r = q.eval_range(sec, samples=400, seed=1)
    lo, hi = bloch_grid_range(q.sigma_z().matrix, q.maximally_mixed(2).matrix, 0.2)
    assert r.lo == pytest.approx(lo, abs=0.01)
    assert r.hi == pytest.approx(hi, abs=0.01)
    assert (r.lo, r.hi) == (pytest.approx(-0.2, abs=0.01), pytest.approx(0.2, abs=0.01))


def test_eval_range_constant_and_identity():
    r = q.eval_range(q.QrNumber.constant(2.5))
    assert (r.lo, r.hi) == (2.5, 2.5)
    ident = _linear(q.identity(2), q.maximally_mixed(2), 0.7)
    r2 = q.eval_range(ident, samples=100, seed=0)
    assert r2.lo == pytest.approx(1.0, abs=1e-12)
    assert r2.hi == pytest.approx(1.0, abs=1e-12)


def test_eval_range_pure_center_clipped_by_state_space():
    sec = _linear(q.sigma_z(), q.basis_state(2, 0), 0.1)
    r = q.eval_range(sec, samples=400, seed=1)
    lo, hi = bloch_grid_range(q.sigma_z().matrix, q.basis_state(2, 0).matrix, 0.1)
    assert r.lo == pytest.approx(lo, abs=0.005)
    assert r.hi == pytest.approx(hi, abs=0.005)
    assert r.lo == pytest.approx(0.9, abs=0.005)
    assert r.hi == pytest.approx(1.0, abs=0.005)
    assert r.rigor == "closed-form"


def test_eval_range_monotone_in_budget():
    sx = q.QrNumber.linear(q.sigma_x(), q.Condition.full(2))
    expr = q.qr_apply("sin", q.qr_mul(sx, sx))
    w = q.Condition.ball(q.maximally_mixed(2), 0.4)
    expr = expr.restricted_to(w)
    small = q.eval_range(expr, samples=50, seed=9)
    big = q.eval_range(expr, samples=800, seed=9)
    assert big.lo <= small.lo + 1e-15
    assert big.hi >= small.hi - 1e-15
    assert big.rigor == "sampled"


def test_qr_arithmetic_identities_pointwise():
    w = q.Condition.ball(q.maximally_mixed(2), 0.5)
    a = q.QrNumber.linear(q.sigma_z(), w)
    b = q.QrNumber.linear(q.sigma_x(), w)
    zero = q.QrNumber.constant(0.0)
    states = q.sample_states(w, 100, seed=4)
    for rho in states:
        va, vb = q.eval_at(a, rho), q.eval_at(b, rho)
        assert q.eval_at(q.qr_add(a, zero), rho) == pytest.approx(va, abs=1e-12)
        assert q.eval_at(q.qr_mul(a, b), rho) == pytest.approx(
            q.eval_at(q.qr_mul(b, a), rho), abs=1e-12
        )
        # associativity and distributivity
        assert q.eval_at(q.qr_add(q.qr_add(a, b), a), rho) == pytest.approx(
            q.eval_at(q.qr_add(a, q.qr_add(b, a)), rho), abs=1e-12
        )
        assert q.eval_at(q.qr_mul(a, q.qr_add(b, b)), rho) == pytest.approx(
            q.eval_at(q.qr_add(q.qr_mul(a, b), q.qr_mul(a, b)), rho), abs=1e-12
        )
        assert q.eval_at(q.qr_apply("sin", a), rho) == pytest.approx(
            np.sin(va), abs=1e-12
        )


def test_qr_apply_sin_at_mixed_state():
    sec = q.qr_apply("sin", q.QrNumber.linear(q.sigma_z(), q.Condition.full(2)))
    assert q.eval_at(sec, q.maximally_mixed(2)) == pytest.approx(0.0, abs=1e-14)


def test_qr_apply_rejects_unlisted_functions():
    sec = q.QrNumber.linear(q.sigma_z(), q.Condition.full(2))
    with pytest.raises(ValidationError):
        q.qr_apply("tan", sec)


def test_sqrt_domain_error():
    sec = q.QrNumber.linear(q.sigma_z(), q.Condition.full(2))
    root = q.qr_apply("sqrt", sec)
    with pytest.raises(DomainError):
        q.eval_at(root, q.basis_state(2, 1))


def test_polynomial_apply():
    sec = q.QrNumber.linear(q.sigma_z(), q.Condition.full(2))
    poly = q.qr_apply("poly", sec, coeffs=[1.0, 0.0, 2.0])  # 1 + 2 x^2
    assert q.eval_at(poly, q.basis_state(2, 0)) == pytest.approx(3.0, abs=1e-12)


def test_disjoint_extents_raise():
    a = _linear(q.sigma_z(), q.basis_state(2, 0), 0.3)
    b = _linear(q.sigma_x(), q.basis_state(2, 1), 0.3)
    with pytest.raises(EmptySectionError):
        q.qr_add(a, b)


def test_order_extent_examples():
    a = _linear(q.sigma_z(), q.basis_state(2, 0), 0.05)
    zero = q.QrNumber.constant(0.0)
    above = q.order_extent(zero, a, grain=0.1, samples=100, seed=3)
    assert not above.is_empty
    below = q.order_extent(a, zero, grain=0.1, samples=100, seed=3)
    assert below.is_empty
    same = q.order_extent(a, a, grain=0.1, samples=100, seed=3)
    assert same.is_empty


def test_order_extent_is_sound():
    # every state of the returned condition must satisfy the inequality
    w = q.Condition.ball(q.maximally_mixed(2), 0.3)
    a = q.QrNumber.linear(q.sigma_z(), w)
    zero = q.QrNumber.constant(0.0)
    region = q.order_extent(a, zero, grain=0.05, samples=150, seed=5)
    assert not region.is_empty
    for rho in q.sample_states(region, 200, seed=6):
        assert q.eval_at(a, rho) < 0.0


def test_order_extent_trichotomy_failure():
    w = q.Condition.ball(q.maximally_mixed(2), 0.3)
    a = q.QrNumber.linear(q.sigma_z(), w)
    zero = q.QrNumber.constant(0.0)
    below = q.order_extent(a, zero, grain=0.05, samples=200, seed=3)
    above = q.order_extent(zero, a, grain=0.05, samples=200, seed=3)
    assert not below.is_empty and not above.is_empty
    # neither covers the full extent
    plus = q.state_from_bloch([0, 0, 0.2])
    minus = q.state_from_bloch([0, 0, -0.2])
    assert q.contains(w, plus) and not q.contains(below, plus)
    assert q.contains(w, minus) and not q.contains(above, minus)
    # and no point satisfies a = 0 stably: perturbations move the value
    mixed = q.maximally_mixed(2)
    for eps in (1e-1, 1e-3, 1e-6):
        sigma = q.perturb_nonzero(mixed, q.sigma_z(), eps)
        assert sigma.expectation(q.sigma_z()) != 0.0


def test_rational_density_of_locally_constant_sections():
    # a rational constant within tau of the section on an order_extent region
    tau = 0.05
    sec = _linear(q.sigma_z(), q.basis_state(2, 0), 0.04)
    r = q.eval_range(sec, samples=200, seed=2)
    rational = round(r.midpoint / (tau / 2)) * (tau / 2)
    gap = q.qr_sub(sec, q.QrNumber.constant(rational))
    within = q.order_extent(
        q.qr_apply("abs", gap), q.QrNumber.constant(tau), grain=0.02,
        samples=150, seed=2,
    )
    assert not within.is_empty
    for rho in q.sample_states(within, 100, seed=3):
        assert abs(q.eval_at(sec, rho) - rational) < tau


def test_extend_by_zero():
    sec = _linear(q.sigma_z(), q.basis_state(2, 0), 0.1)
    ext = q.extend_by_zero(sec)
    inside = q.basis_state(2, 0)
    assert ext.eval_at(inside) == q.eval_at(sec, inside)
    assert ext.eval_at(q.basis_state(2, 1)) == 0.0
    r = ext.eval_range(samples=100, seed=1)
    assert r.lo == pytest.approx(0.0, abs=1e-12)
    assert r.hi == pytest.approx(1.0, abs=1e-12)


def test_extend_by_zero_full_extent_keeps_range():
    sec = q.QrNumber.linear(q.identity(2), q.Condition.full(2))
    r = q.extend_by_zero(sec).eval_range(samples=50, seed=1)
    assert r.lo == pytest.approx(1.0, abs=1e-12)


def test_covariance_transform_examples():
    sec = _linear(q.sigma_z(), q.basis_state(2, 0), 0.1)
    # identity leaves the section untouched
    same = q.covariance_transform(sec, np.eye(2))
    assert np.max(np.abs(same.operator.matrix - sec.operator.matrix)) <= 1e-12

    flipped = q.covariance_transform(sec, q.sigma_x().matrix)
    np.testing.assert_allclose(flipped.operator.matrix, -q.sigma_z().matrix, atol=1e-12)
    r1 = q.eval_range(flipped, samples=200, seed=1)
    w_prime = q.transform_condition(sec.extent, q.sigma_x().matrix)
    r2 = q.eval_range(q.QrNumber.linear(q.sigma_z(), w_prime), samples=200, seed=1)
    assert r1.lo == pytest.approx(r2.lo, abs=0.01)
    assert r1.hi == pytest.approx(r2.hi, abs=0.01)
    assert r1.lo == pytest.approx(-1.0, abs=0.005)
    assert r1.hi == pytest.approx(-0.9, abs=0.005)


def _random_unitary(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    u, _ = np.linalg.qr(g)
    return u


def test_covariance_preserves_trace_distance_and_values():
    rng = np.random.default_rng(17)
    for _ in range(10):
        u = _random_unitary(rng, 3)
        w = q.Condition.ball(q.maximally_mixed(3), 0.4)
        s1, s2 = q.sample_states(w, 2, seed=int(rng.integers(1 << 30)))
        t1 = q.DensityState(u.conj().T @ s1.matrix @ u)
        t2 = q.DensityState(u.conj().T @ s2.matrix @ u)
        assert q.trace_distance(t1, t2) == pytest.approx(
            q.trace_distance(s1, s2), abs=1e-10
        )
        a = q.random_hermitian(3, seed=int(rng.integers(1 << 30)))
        conj = q.HermitianOperator(u @ a.matrix @ u.conj().T)
        rho_conj = q.DensityState(u @ s1.matrix @ u.conj().T)
        assert rho_conj.expectation(conj) == pytest.approx(
            s1.expectation(a), abs=1e-12
        )


def test_covariance_rejects_non_unitary():
    sec = _linear(q.sigma_z(), q.basis_state(2, 0), 0.1)
    with pytest.raises(ValidationError):
        q.covariance_transform(sec, np.diag([1.0, 2.0]))


def test_restriction_shrinks_range():
    big = q.Condition.ball(q.maximally_mixed(2), 0.4)
    small = q.Condition.ball(q.maximally_mixed(2), 0.1)
    sec = q.QrNumber.linear(q.sigma_z(), big)
    sub = sec.restricted_to(small)
    r_big = q.eval_range(sec, samples=300, seed=2)
    r_small = q.eval_range(sub, samples=300, seed=2)
    assert r_small.lo >= r_big.lo - 1e-9
    assert r_small.hi <= r_big.hi + 1e-9


def test_inner_range_sits_inside_outer_enclosure():
    # the sampled/candidate hull can never escape the rigorous trace-norm
    # bound, and both stay inside the global spectral range
    from qrlab.qrnum import linear_range_outer

    rng = np.random.default_rng(23)
    for dim in (3, 4, 6):
        for _ in range(8):
            a = q.random_hermitian(dim, seed=int(rng.integers(1 << 30)))
            center = q.sample_states(
                q.Condition.ball(q.maximally_mixed(dim), 0.5), 1,
                seed=int(rng.integers(1 << 30)),
            )[0]
            w = q.Condition.ball(center, float(rng.uniform(0.02, 0.4)))
            inner = q.eval_range(q.QrNumber.linear(a, w), samples=200, seed=3)
            olo, ohi = linear_range_outer(a, w)
            assert olo - 1e-9 <= inner.lo <= inner.hi <= ohi + 1e-9
            lmin, lmax = a.eigenvalue_bounds
            assert lmin - 1e-9 <= inner.lo and inner.hi <= lmax + 1e-9


def test_operator_identification_on_any_ball():
    # distinct operators are distinguished by a state inside any ball
    a, b = q.sigma_z(), q.sigma_x()
    diff = q.HermitianOperator(a.matrix - b.matrix)
    for center, radius in [
        (q.maximally_mixed(2), 0.05),
        (q.basis_state(2, 0), 0.02),
        (q.pure_state([1, 1]), 0.1),
    ]:
        try:
            sigma = q.perturb_nonzero(center, diff, radius)
        except ValidationError:
            sigma = None
        if sigma is None:
            # center already separates them
            assert center.expectation(a) != pytest.approx(center.expectation(b))
        else:
            assert sigma.expectation(a) != pytest.approx(
                sigma.expectation(b), abs=1e-15
            )
        assert q.contains(q.Condition.ball(center, radius), sigma or center)
