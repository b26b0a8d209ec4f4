import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bhcheck.conditions import CONDITIONS, applicable
from bhcheck.domains import ConvexDomain, sample_pairs, whole_space
from bhcheck.estimation import (
    HypothesisViolated,
    banach_taylor_to_lip_bound,
    check_range_conditional,
    condition_ratio,
    estimate_constant,
    gradient_range_segment,
    segment_refine,
    verify_implication_matrix,
    witness_ratio,
)
from bhcheck.oracles import builtin
from bhcheck.spaces import NormedSpace, dual_norm, norm

E2 = NormedSpace(2)
LINF = NormedSpace(2, "linf")
A13 = np.diag([1.0, 3.0])
Q13 = builtin("quadratic", A=A13)
SADDLE = builtin("saddle_half_diff")
HALF = builtin("half_sq_norm", dim=2)
LIN = builtin("linear", c=[1.0, -2.0])


def endpoint_ratio(f, X, x, y):
    return dual_norm(X, f.grad(y) - f.grad(x)) / norm(X, y - x)


def test_estimate_examples():
    q = estimate_constant(Q13, E2, whole_space(E2), "lip_gradient", 10_000, 0)
    assert 3 * (1 - 1e-6) <= q.L_hat <= 3 * (1 + 1e-12)
    s = estimate_constant(SADDLE, LINF, whole_space(LINF), "lip_gradient", 10_000, 0)
    assert s.L_hat == pytest.approx(2.0, rel=1e-6)
    o = estimate_constant(SADDLE, LINF, whole_space(LINF), "one_sided_lip", 10_000, 0)
    assert o.L_hat == pytest.approx(1.0, rel=1e-6)


def test_estimate_grows_towards_target():
    small = estimate_constant(Q13, E2, whole_space(E2), "lip_gradient", 64, 0, polish=False)
    large = estimate_constant(Q13, E2, whole_space(E2), "lip_gradient", 10_000, 0)
    assert small.L_hat <= large.L_hat <= 3 * (1 + 1e-12)


def test_unbounded_cocoercivity_is_reported():
    e = estimate_constant(SADDLE, LINF, whole_space(LINF), "cocoercivity", 500, 0)
    assert e.unbounded and math.isinf(e.L_hat)
    assert e.to_dict()["L_hat"] is None
    w = e.witness
    assert math.isinf(condition_ratio(SADDLE, LINF, "cocoercivity", np.array(w["x"]), np.array(w["y"])))


def test_linear_is_degenerate():
    for c in CONDITIONS:
        if applicable(LIN, E2, c) is None:
            assert estimate_constant(LIN, E2, whole_space(E2), c, 500, 0).L_hat == 0.0, c
    r = banach_taylor_to_lip_bound(LIN, LINF, whole_space(LINF), 500, 0)
    assert r.degenerate and r.ratio == 1.0
    m = verify_implication_matrix(LIN, E2, whole_space(E2), 500, 0)
    assert m.degenerate


def test_condition_ratio_skips_equal_points():
    x = np.array([1.0, 2.0])
    assert math.isnan(condition_ratio(Q13, E2, "lip_gradient", x, x))


def test_segment_refine_examples():
    x, y = np.zeros(2), np.array([1.0, -1.0])
    assert segment_refine(SADDLE, LINF, x, y, 4) == 2.0
    for n in (1, 3, 8):
        assert segment_refine(Q13, E2, np.zeros(2), np.array([0.0, 2.0]), n) == pytest.approx(3.0, rel=1e-15)
    a, b = np.array([0.3, -1.0]), np.array([2.0, 0.5])
    assert segment_refine(Q13, LINF, a, b, 1) == endpoint_ratio(Q13, LINF, a, b)


def test_factor_two_examples():
    s = banach_taylor_to_lip_bound(SADDLE, LINF, whole_space(LINF), 10_000, 0)
    assert 1.9 <= s.ratio <= 2.0 + 1e-9
    rng = np.random.default_rng(4)
    B = rng.normal(size=(3, 3))
    X = NormedSpace(3)
    q = banach_taylor_to_lip_bound(builtin("quadratic", A=B.T @ B), X, whole_space(X), 5000, 0)
    assert q.ratio == pytest.approx(1.0, abs=1e-6)


def test_gradient_range_segment_examples():
    x, y = np.array([1.0, -2.0]), np.array([3.0, 0.5])
    pts = gradient_range_segment(builtin("quadratic", A=np.eye(2)), E2, x, y, 4)
    np.testing.assert_allclose(pts, x + np.arange(5)[:, None] / 4 * (y - x), rtol=1e-15)
    pts = gradient_range_segment(Q13, E2, np.zeros(2), np.ones(2), 2)
    np.testing.assert_allclose(pts[1], [0.5, 0.5], rtol=1e-15)
    pts = gradient_range_segment(Q13, E2, x, y, 1)
    np.testing.assert_array_equal(pts, [x, y])
    with pytest.raises(np.linalg.LinAlgError):
        gradient_range_segment(builtin("quadratic", A=np.diag([1.0, 0.0])), E2, x, y, 2)


@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3), st.lists(st.floats(-5, 5), min_size=3, max_size=3),
       st.integers(1, 20))
def test_range_segment_hits_targets(x, y, n):
    rng = np.random.default_rng(n)
    B = rng.normal(size=(3, 3))
    f = builtin("quadratic", A=B.T @ B + np.eye(3))
    pts = gradient_range_segment(f, NormedSpace(3), x, y, n)
    t = np.arange(n + 1)[:, None] / n
    targets = (1 - t) * f.grad(np.array(x)) + t * f.grad(np.array(y))
    scale = max(1.0, np.abs(targets).max())
    np.testing.assert_allclose(f.grad(pts), targets, rtol=1e-10, atol=1e-10 * scale)


def test_range_conditional_examples():
    W = whole_space(E2)
    X, Y = sample_pairs(W, 0.0, 100, 0)
    for x, y in zip(X, Y):
        assert check_range_conditional(Q13, E2, W, 0.0, (x, y), 16, "coco_to_bregman", 3.0) >= -1e-9
        assert check_range_conditional(Q13, E2, W, 1.0, (x, y), 16, "descent_to_coco", 3.0) >= -1e-9
    z = np.array([0.4, 0.1])
    assert check_range_conditional(Q13, E2, W, 1.0, (z, z), 1, "descent_to_coco", 3.0) == 0.0
    # outside inner-product spaces the sign is a finding, not a guarantee
    m = check_range_conditional(HALF, LINF, whole_space(LINF), 0.0, (np.zeros(2), np.ones(2)), 4,
                                "coco_to_bregman", 2.0)
    assert math.isfinite(m)


def test_range_conditional_hypotheses():
    W = whole_space(E2)
    x, y = np.zeros(2), np.array([1.0, 1.0])
    with pytest.raises(HypothesisViolated, match="hypothesis violated"):
        check_range_conditional(Q13, E2, W, 0.0, (x, y), 4, "coco_to_bregman", 1.0)
    with pytest.raises(HypothesisViolated, match="L rho n"):
        check_range_conditional(Q13, E2, W, 0.01, (x, y), 2, "descent_to_coco", 3.0)
    box = ConvexDomain(E2, "box", lower=[-0.5, -0.5], upper=[2.0, 2.0])
    with pytest.raises(HypothesisViolated, match="range"):
        check_range_conditional(Q13, E2, box, 1.0, (x, y), 4, "descent_to_coco", 3.0)


def test_matrix_examples():
    r = verify_implication_matrix(Q13, E2, whole_space(E2), 10_000, 0)
    assert r.verified and r.space_class == "hilbert"
    for c in ("strong_smoothness", "descent_lemma", "comonotone_upper", "lip_gradient", "cocoercivity",
              "bregman_lower"):
        assert r.estimates[c].L_hat == pytest.approx(3.0, rel=1e-6), c
    b = verify_implication_matrix(HALF, LINF, whole_space(LINF), 10_000, 0)
    assert b.space_class == "banach" and b.verified
    assert b.estimates["lip_gradient"].L_hat == pytest.approx(2.0, rel=1e-3)
    assert all("nonexpansive_transform" not in k for k in b.matrix)
    assert b.observations and b.observations[0]["b"] == "cocoercivity"
    assert b.matrix["lip_gradient=>aux_convexity"]["status"] == "not_applicable"


def test_matrix_rejects_nonconvex():
    with pytest.raises(ValueError, match="convex"):
        verify_implication_matrix(SADDLE, LINF, whole_space(LINF), 100, 0)


CASES = [
    (Q13, E2, "lip_gradient"),
    (SADDLE, LINF, "lip_gradient"),
    (HALF, NormedSpace(2, "l1"), "taylor_remainder"),
    (builtin("softplus_norm"), NormedSpace(2, "lp", p=3.0), "strong_smoothness"),
    (builtin("log_sum_exp"), LINF, "bregman_lower"),
    (HALF, LINF, "aux_convexity"),
]


@settings(max_examples=15)
@given(st.integers(0, 2**31), st.integers(1, 700), st.integers(0, 900), st.sampled_from(range(len(CASES))))
def test_budget_prefix_monotone(seed, b1, extra, k):
    f, X, c = CASES[k]
    W = whole_space(X)
    e1 = estimate_constant(f, X, W, c, b1, seed)
    e2 = estimate_constant(f, X, W, c, b1 + extra, seed)
    assert e1.L_hat <= e2.L_hat


@settings(max_examples=15)
@given(st.integers(0, 2**31), st.sampled_from(range(len(CASES))))
def test_witness_reproduces_estimate(seed, k):
    f, X, c = CASES[k]
    e = estimate_constant(f, X, whole_space(X), c, 300, seed)
    r = witness_ratio(f, X, e)
    if math.isinf(e.L_hat):
        assert math.isinf(r)
    else:
        assert abs(r - e.L_hat) <= 1e-12 * max(1.0, e.L_hat)


@given(st.lists(st.floats(-5, 5), min_size=4, max_size=4), st.integers(1, 30),
       st.sampled_from(["quadratic", "saddle_half_diff", "half_sq_norm", "softplus_norm", "log_sum_exp"]),
       st.sampled_from(["euclidean", "linf", "l1", "lp"]))
def test_segment_refine_dominates_endpoint(xy, n, name, kind):
    f = Q13 if name == "quadratic" else builtin(name)
    X = NormedSpace(2, kind, p=3.0 if kind == "lp" else None)
    x, y = np.array(xy[:2]), np.array(xy[2:])
    if not np.any(y - x):
        assert segment_refine(f, X, x, y, n) == 0.0
        return
    assert segment_refine(f, X, x, y, n) >= endpoint_ratio(f, X, x, y) - 1e-12
