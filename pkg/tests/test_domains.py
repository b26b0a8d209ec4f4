import numpy as np
import pytest
from hypothesis import given, strategies as st

from bhcheck.domains import (
    BLOCK,
    ConvexDomain,
    DomainSamplingError,
    contains,
    contains_shrunk,
    lambda_grid,
    sample_pairs,
    segment_points,
    whole_space,
)
from bhcheck.spaces import NormedSpace, norm

from conftest import ALL_SPACES_2D

E2 = NormedSpace(2, "euclidean")


def ball(space, r=1.0, c=None):
    return ConvexDomain(space, "ball", center=np.zeros(space.dim) if c is None else c, radius=r)


def unit_box(space):
    return ConvexDomain(space, "box", lower=np.zeros(space.dim), upper=np.ones(space.dim))


def wedge(space):
    return ConvexDomain(space, "halfspaces", normals=[[1.0, 0.0], [-1.0, 2.0]], offsets=[2.0, 3.0])


def test_contains_examples():
    assert contains(whole_space(E2), [1e9, -1e9])
    assert not contains(ball(E2), [1.0, 0.0])
    assert contains(unit_box(E2), [0.5, 0.5])


def test_contains_shrunk_examples():
    assert contains_shrunk(ball(E2), [0.0, 0.0], 0.5)
    assert not contains_shrunk(ball(E2), [0.6, 0.0], 0.5)
    assert contains_shrunk(whole_space(E2), [3.0, 4.0], 100.0)


def test_shrunk_halfspace_uses_dual_norm():
    linf = NormedSpace(2, "linf")
    H = ConvexDomain(linf, "halfspaces", normals=[[1.0, 1.0]], offsets=[1.0])
    # sup of x1+x2 over the linf rho-ball is 2 rho
    assert contains_shrunk(H, [0.0, 0.0], 0.49)
    assert not contains_shrunk(H, [0.0, 0.0], 0.5)


def test_sample_pairs_examples():
    W = whole_space(E2)
    a = sample_pairs(W, 0.0, 10, 7)
    b = sample_pairs(W, 0.0, 10, 7)
    assert a[0].shape == (10, 2)
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])

    X, Y = sample_pairs(ball(E2), 0.9, 5, 0)
    assert np.all(norm(E2, X) < 0.1) and np.all(norm(E2, Y) < 0.1)

    with pytest.raises(DomainSamplingError, match="too thin"):
        sample_pairs(unit_box(E2), 2.0, 4, 0)


def test_sample_pairs_prefix():
    D = wedge(NormedSpace(2, "l1"))
    X1, Y1 = sample_pairs(D, 0.1, 3 * BLOCK + 5, 11)
    X2, Y2 = sample_pairs(D, 0.1, 40, 11)
    np.testing.assert_array_equal(X1[:40], X2)
    np.testing.assert_array_equal(Y1[:40], Y2)


def test_segment_points_examples():
    np.testing.assert_array_equal(segment_points([0, 0], [1, 0], 2), [[0, 0], [0.5, 0], [1, 0]])
    np.testing.assert_array_equal(segment_points([2, 3], [2, 3], 4), np.tile([2, 3], (5, 1)))
    pts = segment_points([0, 0], [3, 3], 3)
    steps = norm(E2, np.diff(pts, axis=0))
    np.testing.assert_allclose(steps, norm(E2, [3, 3]) / 3, rtol=1e-12)
    with pytest.raises(ValueError):
        segment_points([0], [1], 0)


def test_bad_domains():
    with pytest.raises(ValueError):
        ConvexDomain(E2, "box", lower=[1, 0], upper=[0, 1])
    with pytest.raises(ValueError):
        ConvexDomain(E2, "ball", radius=0.0)
    with pytest.raises(ValueError):
        ConvexDomain(E2, "halfspaces", normals=[[0, 0]], offsets=[1])
    with pytest.raises(ValueError):
        contains_shrunk(whole_space(E2), [0, 0], -1.0)


def test_descriptor_round_trip():
    for D in (whole_space(E2), ball(E2, 2.0, np.array([1.0, 1.0])), unit_box(E2), wedge(E2)):
        back = ConvexDomain.from_descriptor(D.to_descriptor(), E2)
        assert back.to_descriptor() == D.to_descriptor()


def test_lambda_grid():
    g = lambda_grid(3)
    assert len(g) == 13
    np.testing.assert_array_equal(g[:5], [0.1, 0.25, 0.5, 0.75, 0.9])
    assert np.all((g > 0) & (g < 1))
    np.testing.assert_array_equal(g, lambda_grid(3))


DOMAIN_FACTORIES = [whole_space, ball, unit_box, wedge]


@given(
    st.sampled_from(ALL_SPACES_2D),
    st.sampled_from(DOMAIN_FACTORIES),
    st.integers(0, 2**32),
    st.sampled_from([0.0, 0.05, 0.2]),
)
def test_sampled_pairs_are_in_shrunk_domain_and_convex(space, make, seed, rho):
    D = make(space)
    X, Y = sample_pairs(D, rho, 70, seed)
    assert contains_shrunk(D, X, rho).all() and contains_shrunk(D, Y, rho).all()
    lam = np.linspace(0, 1, 13)[1:-1, None, None]
    Z = lam * X + (1 - lam) * Y
    assert contains_shrunk(D, Z, rho).all()


@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3), st.lists(st.floats(-5, 5), min_size=3, max_size=3),
       st.integers(1, 50))
def test_segment_spacing(x, y, n):
    X = NormedSpace(3, "lp", p=3.0)
    pts = segment_points(x, y, n)
    assert pts[0].tolist() == list(map(float, x)) and pts[-1].tolist() == list(map(float, y))
    total = norm(X, np.subtract(y, x))
    steps = norm(X, np.diff(pts, axis=0))
    np.testing.assert_allclose(steps, total / n, rtol=1e-12, atol=1e-12)
