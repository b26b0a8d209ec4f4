import numpy as np
from hypothesis import settings, strategies as st

from bhcheck.spaces import NormedSpace

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def vectors(dim):
    return st.lists(finite, min_size=dim, max_size=dim).map(np.array)


@st.composite
def spaces(draw, dims=(1, 2, 3, 4), kinds=("euclidean", "weighted", "lp", "linf", "l1")):
    dim = draw(st.sampled_from(dims))
    kind = draw(st.sampled_from(kinds))
    if kind == "weighted":
        w = draw(st.lists(st.floats(0.1, 10), min_size=dim, max_size=dim))
        return NormedSpace(dim, "weighted", weights=tuple(w))
    if kind == "lp":
        return NormedSpace(dim, "lp", p=draw(st.sampled_from([1.5, 3.0, 4.0])))
    return NormedSpace(dim, kind)


@st.composite
def space_and_vectors(draw, k=2, **kw):
    X = draw(spaces(**kw))
    return (X, *[draw(vectors(X.dim)) for _ in range(k)])


ALL_SPACES_2D = [
    NormedSpace(2, "euclidean"),
    NormedSpace(2, "weighted", weights=(2.0, 3.0)),
    NormedSpace(2, "lp", p=3.0),
    NormedSpace(2, "linf"),
    NormedSpace(2, "l1"),
]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
