"""Non-commutative perspectives, operator means, and transformer checks."""

import math

import numpy as np
import pytest

from meanineq import (
    DomainError,
    NotPositiveDefiniteError,
    OperatorMeanSpec,
    PreconditionError,
    UsageError,
    check_jensen_sum,
    check_transformer,
    commuting_oracle,
    expectation_state,
    frobenius,
    get_function,
    loewner_leq,
    operator_mean,
    operator_mean_spec,
    operator_perspective,
    sample_density,
    sample_spd,
    split_rng,
    sqrt_pd,
    sym_eigen,
    sym_matrix,
    trace_perspective_check,
)

SPECS = ["arithmetic", "wyd:0.25", "wyd:0.5", "geometric", "harmonic", "logarithmic"]

A22 = np.array([[2.0, 1.0], [1.0, 2.0]])
B22 = np.array([[3.0, 0.5], [0.5, 1.0]])


def spd(seed_path, n):
    return sample_spd(n, split_rng(*seed_path))


def commuting_pair(seed_path, n):
    """Exactly commuting PD pair: two quadratic polynomials of one matrix."""
    rng = split_rng(*seed_path)
    s = sym_matrix(rng.normal(size=(n, n)))
    a = sym_matrix((s + 0.7 * np.eye(n)) @ (s + 0.7 * np.eye(n)) + 0.1 * np.eye(n))
    b = sym_matrix((s - 1.3 * np.eye(n)) @ (s - 1.3 * np.eye(n)) + 0.2 * np.eye(n))
    return a, b


def test_spec_admission():
    for fid in SPECS:
        assert operator_mean_spec(fid).id == fid
    with pytest.raises(UsageError):
        operator_mean_spec("counterexample-g")


def test_perspective_identity_function_returns_b():
    p = operator_perspective(lambda x: x, A22, B22)
    assert frobenius(p - B22) <= 1e-8 * frobenius(B22)


def test_perspective_identity_first_argument():
    p = operator_perspective(get_function("geometric"), np.eye(2), B22)
    assert np.allclose(p, sqrt_pd(B22), atol=1e-12)


def test_perspective_commuting_diagonal():
    p = operator_perspective(get_function("geometric"), np.diag([1.0, 4.0]), np.diag([4.0, 1.0]))
    # per-slot sqrt(a_i * b_i) = (2, 2)
    assert np.allclose(p, np.diag([2.0, 2.0]), atol=1e-12)


def test_perspective_rejects_non_pd_and_ill_conditioned():
    with pytest.raises(NotPositiveDefiniteError):
        operator_perspective(get_function("geometric"), np.diag([1.0, 0.0]), np.eye(2))
    with pytest.raises(NotPositiveDefiniteError):
        operator_perspective(get_function("geometric"), np.eye(2), np.diag([1.0, -1.0]))
    with pytest.raises(DomainError):
        operator_perspective(get_function("geometric"), np.diag([1e-9, 1e9]), np.eye(2))
    with pytest.raises(UsageError):
        operator_perspective(get_function("geometric"), np.eye(2), np.eye(3))


def test_mean_fixed_point_and_examples():
    spec = operator_mean_spec("harmonic")
    a = spd((1, 0), 4)
    assert frobenius(operator_mean(spec, a, a) - a) <= 1e-8 * frobenius(a)

    arit = operator_mean(operator_mean_spec("arithmetic"), np.diag([1.0, 3.0]), np.diag([3.0, 1.0]))
    assert np.allclose(arit, np.diag([2.0, 2.0]), atol=1e-12)

    geo = operator_mean(operator_mean_spec("geometric"), A22, np.eye(2))
    lam, _ = sym_eigen(geo)
    assert lam == pytest.approx([1.0, math.sqrt(3.0)], abs=1e-12)


def test_mean_requires_spec():
    with pytest.raises(UsageError):
        operator_mean(get_function("geometric"), A22, B22)


@pytest.mark.parametrize("fid", SPECS)
def test_mean_symmetry_and_monotonicity(fid):
    spec = operator_mean_spec(fid)
    for k in range(10):
        rng = split_rng(31, k)
        n = int(rng.integers(2, 9))
        a = sample_spd(n, rng)
        b = sample_spd(n, rng)
        m1 = operator_mean(spec, a, b)
        m2 = operator_mean(spec, b, a)
        assert frobenius(m1 - m2) <= 1e-8 * frobenius(m1)
        inc_a = sym_matrix(rng.normal(size=(n, n)))
        inc_b = sym_matrix(rng.normal(size=(n, n)))
        a2 = a + inc_a @ inc_a.T
        b2 = b + inc_b @ inc_b.T
        assert loewner_leq(m1, operator_mean(spec, a2, b2), 1e-8)


def test_arithmetic_closed_form():
    spec = operator_mean_spec("arithmetic")
    for k in range(10):
        a, b = spd((41, k, 0), 5), spd((41, k, 1), 5)
        m = operator_mean(spec, a, b)
        assert frobenius(m - (a + b) / 2.0) <= 1e-8 * frobenius(m)


def test_harmonic_closed_form():
    spec = operator_mean_spec("harmonic")
    for k in range(10):
        a, b = spd((43, k, 0), 4), spd((43, k, 1), 4)
        m = operator_mean(spec, a, b)
        closed = 2.0 * np.linalg.inv(np.linalg.inv(a) + np.linalg.inv(b))
        assert frobenius(m - closed) <= 1e-8 * frobenius(closed)


def test_geometric_riccati_property():
    spec = operator_mean_spec("geometric")
    for k in range(10):
        a, b = spd((47, k, 0), 4), spd((47, k, 1), 4)
        x = operator_mean(spec, a, b)
        resid = x @ np.linalg.inv(a) @ x - b
        assert frobenius(resid) <= 1e-7 * frobenius(b)


def test_oracle_examples():
    spec = operator_mean_spec("geometric")
    out = commuting_oracle(spec, np.diag([1.0, 4.0]), np.diag([4.0, 1.0]))
    assert np.allclose(out, np.diag([2.0, 2.0]), atol=1e-12)

    a = spd((51, 0), 3)
    same = commuting_oracle(operator_mean_spec("harmonic"), a, a)
    assert frobenius(same - a) <= 1e-10 * frobenius(a)

    logm = commuting_oracle(operator_mean_spec("logarithmic"), np.eye(2), math.e * np.eye(2))
    assert np.allclose(logm, (math.e - 1.0) * np.eye(2), atol=1e-12)


def test_oracle_rejects_non_commuting():
    spec = operator_mean_spec("geometric")
    with pytest.raises(PreconditionError):
        commuting_oracle(spec, A22, B22)


def test_oracle_handles_degenerate_spectrum():
    spec = operator_mean_spec("geometric")
    b = spd((53, 0), 3)
    out = commuting_oracle(spec, np.eye(3), b)
    expected = sqrt_pd(b)  # m(I, B) = f(B)
    assert frobenius(out - expected) <= 1e-8 * frobenius(expected)


@pytest.mark.parametrize("fid", SPECS)
def test_oracle_matches_mean_on_commuting_pairs(fid):
    spec = operator_mean_spec(fid)
    for k in range(25):
        n = 2 + k % 5
        a, b = commuting_pair((59, k), n)
        direct = operator_mean(spec, a, b)
        oracle = commuting_oracle(spec, a, b)
        assert frobenius(direct - oracle) <= 1e-8 * frobenius(oracle)


def test_expectation_state_examples():
    assert expectation_state(np.eye(2) / 2.0, np.diag([1.0, 3.0])) == pytest.approx(2.0)
    pure = np.zeros((2, 2))
    pure[0, 0] = 1.0
    a = sym_matrix([[4.0, 1.0], [1.0, 9.0]])
    assert expectation_state(pure, a) == pytest.approx(4.0)
    assert expectation_state(np.diag([0.25, 0.75]), np.diag([4.0, 8.0])) == pytest.approx(7.0)
    with pytest.raises(UsageError):
        expectation_state(np.eye(2), np.eye(3))


def test_expectation_state_spectral_identity():
    rng = split_rng(61, 0)
    rho = sample_density(4, rng)
    a = sample_spd(4, rng)
    lam, q = sym_eigen(rho)
    spectral = sum(lam[i] * q[:, i] @ a @ q[:, i] for i in range(4))
    assert expectation_state(rho, a) == pytest.approx(spectral, rel=1e-12)


def test_transformer_identity_and_invertible():
    spec = operator_mean_spec("geometric")
    rep = check_transformer(spec, A22, B22, np.eye(2))
    assert rep.verdict == "holds" and rep.equality_case

    rep = check_transformer(spec, A22, B22, np.diag([2.0, 0.5]))
    assert rep.verdict == "holds" and rep.equality_case
    assert rep.equality_defect <= 1e-10


def test_transformer_rank_deficient_compression():
    spec = operator_mean_spec("geometric")
    rep = check_transformer(spec, A22, B22, np.array([[1.0], [0.0]]))
    assert rep.verdict == "holds"
    assert not rep.equality_case
    assert rep.lhs.shape == (1, 1)


def test_transformer_contractions_seeded():
    for fid in SPECS:
        spec = operator_mean_spec(fid)
        for k in range(10):
            rng = split_rng(67, k)
            n = int(rng.integers(2, 6))
            a = sample_spd(n, rng)
            b = sample_spd(n, rng)
            u, _ = np.linalg.qr(rng.normal(size=(n, n)))
            v, _ = np.linalg.qr(rng.normal(size=(n, n)))
            s = rng.uniform(0.1, 1.0, size=n)
            c = u @ np.diag(s) @ v.T
            rep = check_transformer(spec, a, b, c)
            assert rep.min_eig_gap >= -1e-8, (fid, k)


def test_transformer_congruence_destroys_pd():
    spec = operator_mean_spec("geometric")
    with pytest.raises(DomainError):
        check_transformer(spec, A22, B22, np.zeros((2, 2)))


def test_jensen_sum_single_identity_is_equality():
    spec = operator_mean_spec("geometric")
    rep = check_jensen_sum(spec, [(np.eye(2), A22, B22)])
    assert rep.verdict == "holds" and rep.equality_case


def test_jensen_sum_two_term_example():
    spec = operator_mean_spec("geometric")
    c = np.eye(2) / math.sqrt(2.0)
    i2 = np.eye(2)
    rep = check_jensen_sum(spec, [(c, 2.0 * i2, i2), (c, i2, 2.0 * i2)])
    # lhs = sqrt(2) I against rhs = 1.5 I
    assert np.allclose(rep.lhs, math.sqrt(2.0) * i2, atol=1e-12)
    assert np.allclose(rep.rhs, 1.5 * i2, atol=1e-12)
    assert rep.verdict == "holds" and not rep.equality_case


def test_jensen_sum_density_resolution():
    # c_i = sqrt(lam_i) e_i from a density matrix: a sub-unital family.
    for fid in SPECS:
        spec = operator_mean_spec(fid)
        rng = split_rng(71, SPECS.index(fid))
        rho = sample_density(2, rng)
        a = sample_spd(2, rng)
        b = sample_spd(2, rng)
        lam, q = sym_eigen(rho)
        triples = [
            (math.sqrt(lam[i]) * np.outer(q[:, i], q[:, i]), a, b) for i in range(2)
        ]
        rep = check_jensen_sum(spec, triples)
        assert rep.min_eig_gap >= -1e-8, fid


def test_jensen_sum_rejects_super_unital():
    spec = operator_mean_spec("geometric")
    with pytest.raises(PreconditionError):
        check_jensen_sum(spec, [(np.eye(2), A22, B22), (np.eye(2), A22, B22)])
    with pytest.raises(UsageError):
        check_jensen_sum(spec, [])


def test_trace_perspective_examples():
    f = get_function("geometric")
    rep = trace_perspective_check(f, np.diag([1.0, 4.0]), np.diag([4.0, 1.0]))
    # trace side 2 + 2 = 4, scalar side sqrt(5 * 5) = 5
    assert rep.lhs == pytest.approx(4.0, abs=1e-12)
    assert rep.rhs == pytest.approx(5.0, abs=1e-12)
    assert rep.verdict == "holds"

    a = spd((73, 0), 3)
    same = trace_perspective_check(f, a, a)
    assert same.verdict == "equality"

    lin = trace_perspective_check(get_function("arithmetic"), np.diag([1.0, 2.0]), np.diag([5.0, 3.0]))
    assert lin.verdict == "equality"


def test_trace_perspective_convex_orientation():
    # counterexample-g is convex: the trace side dominates, orientation flips.
    g = get_function("counterexample-g")
    rep = trace_perspective_check(g, np.diag([0.5, 2.0]), np.diag([1.0, 1.0]))
    assert rep.verdict in ("holds", "equality")
    assert rep.gap >= -1e-10


def test_trace_perspective_rejects_non_commuting():
    with pytest.raises(PreconditionError):
        trace_perspective_check(get_function("geometric"), A22, B22)
