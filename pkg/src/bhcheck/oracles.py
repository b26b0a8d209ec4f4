"""Function oracles: value and gradient evaluation for the built-in test functions.

Every oracle evaluates on batches: ``value`` maps an ``(..., dim)`` array to
``(...)`` and ``gradient`` maps it to ``(..., dim)``. Gradients are covectors;
they are only identified with vectors through ``spaces.riesz``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import logsumexp, softmax

from .domains import contains
from .spaces import DimensionError

FD_SCALE = 1e-5
FD_RTOL = 1e-6


class UnknownOracleError(KeyError):
    pass


class MissingGradientError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FunctionOracle:
    name: str
    dim: int
    value: Callable
    gradient: Optional[Callable] = None
    convex: bool = True
    smooth: bool = True
    params: dict = field(default_factory=dict)
    # condition@norm -> {"value": float, "source": str}
    known_constants: dict = field(default_factory=dict)

    def f(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise DimensionError(f"{self.name} expects dimension {self.dim}, got shape {x.shape}")
        return self.value(x)

    def grad(self, x) -> np.ndarray:
        if self.gradient is None:
            raise MissingGradientError(f"oracle {self.name!r} has no gradient")
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise DimensionError(f"{self.name} expects dimension {self.dim}, got shape {x.shape}")
        return self.gradient(x)

    def to_descriptor(self) -> dict:
        params = {k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in self.params.items()}
        return {"name": self.name, "params": params}


def _quadratic(A=None, dim=None):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("quadratic needs a square matrix A")
    if not np.allclose(A, A.T, rtol=0, atol=1e-12 * max(1.0, np.abs(A).max())):
        raise ValueError("quadratic needs a symmetric matrix A")
    if dim is not None and dim != A.shape[0]:
        raise DimensionError(f"A is {A.shape[0]}x{A.shape[0]} but dim={dim}")
    A = (A + A.T) / 2
    eig = np.linalg.eigvalsh(A)
    return FunctionOracle(
        name="quadratic",
        dim=A.shape[0],
        value=lambda x: 0.5 * np.einsum("...i,ij,...j->...", x, A, x),
        gradient=lambda x: x @ A,
        convex=bool(eig.min() >= -1e-12 * max(1.0, np.abs(eig).max())),
        params={"A": A},
        known_constants={"lip_gradient@euclidean": {"value": float(np.abs(eig).max()), "source": "analytic"}},
    )


def _saddle_half_diff(dim=None):
    if dim not in (None, 2):
        raise DimensionError("saddle_half_diff is defined on R^2")
    sign = np.array([1.0, -1.0])
    return FunctionOracle(
        name="saddle_half_diff",
        dim=2,
        value=lambda x: 0.5 * (x[..., 0] ** 2 - x[..., 1] ** 2),
        gradient=lambda x: x * sign,
        convex=False,
        known_constants={
            "one_sided_lip@linf": {"value": 1.0, "source": "published-example"},
            "lip_gradient@linf": {"value": 2.0, "source": "published-example"},
        },
    )


def _half_sq_norm(dim=2):
    consts = {"lip_gradient@euclidean": {"value": 1.0, "source": "analytic"}}
    if dim == 2:
        consts["lip_gradient@linf"] = {"value": 2.0, "source": "published-example"}
    return FunctionOracle(
        name="half_sq_norm",
        dim=int(dim),
        value=lambda x: 0.5 * np.sum(x * x, axis=-1),
        gradient=lambda x: np.array(x, dtype=float, copy=True),
        known_constants=consts,
    )


def _linear(c=None, dim=None):
    c = np.asarray(c if c is not None else np.ones(dim or 2), dtype=float)
    if c.ndim != 1 or (dim is not None and c.shape[0] != dim):
        raise DimensionError("linear needs a coefficient vector of length dim")
    return FunctionOracle(
        name="linear",
        dim=c.shape[0],
        value=lambda x: x @ c,
        gradient=lambda x: np.broadcast_to(c, np.shape(x)).copy(),
        params={"c": c},
        known_constants={"lip_gradient@any": {"value": 0.0, "source": "analytic"}},
    )


def _softplus_norm(dim=2):
    def grad(x):
        return x / np.sqrt(1.0 + np.sum(x * x, axis=-1, keepdims=True))

    return FunctionOracle(
        name="softplus_norm",
        dim=int(dim),
        value=lambda x: np.sqrt(1.0 + np.sum(x * x, axis=-1)),
        gradient=grad,
        known_constants={"lip_gradient@euclidean": {"value": 1.0, "source": "analytic"}},
    )


def _log_sum_exp(dim=2):
    return FunctionOracle(
        name="log_sum_exp",
        dim=int(dim),
        value=lambda x: logsumexp(x, axis=-1),
        gradient=lambda x: softmax(x, axis=-1),
    )


def _abs_sum(dim=2):
    # nonsmooth negative control, deliberately without a gradient
    return FunctionOracle(
        name="abs_sum",
        dim=int(dim),
        value=lambda x: np.sum(np.abs(x), axis=-1),
        gradient=None,
        smooth=False,
    )


REGISTRY = {
    "quadratic": _quadratic,
    "saddle_half_diff": _saddle_half_diff,
    "half_sq_norm": _half_sq_norm,
    "linear": _linear,
    "softplus_norm": _softplus_norm,
    "log_sum_exp": _log_sum_exp,
    "abs_sum": _abs_sum,
}

# oracles usable in the condition suites (smooth, with gradients)
SMOOTH_ORACLES = ("quadratic", "saddle_half_diff", "half_sq_norm", "linear", "softplus_norm", "log_sum_exp")


def builtin(name: str, dim: Optional[int] = None, **params) -> FunctionOracle:
    """Construct a registered oracle, e.g. ``builtin("quadratic", A=np.diag([1, 3]))``."""
    try:
        factory = REGISTRY[name]
    except KeyError:
        raise UnknownOracleError(f"unknown oracle {name!r}; known: {sorted(REGISTRY)}") from None
    if name in ("quadratic", "linear"):
        return factory(dim=dim, **params)
    if params:
        raise ValueError(f"oracle {name!r} takes no parameters, got {sorted(params)}")
    if name == "saddle_half_diff":
        return factory(dim=dim)
    return factory(dim=dim if dim is not None else 2)


def from_descriptor(d: dict, dim: Optional[int] = None) -> FunctionOracle:
    return builtin(d["name"], dim=dim, **d.get("params", {}))


def default_step(x) -> float:
    return FD_SCALE * (1.0 + float(np.linalg.norm(x)))


def fd_gradient(oracle: FunctionOracle, x, h: Optional[float] = None, domain=None) -> np.ndarray:
    """Central-difference gradient ``(f(x + h e_i) - f(x - h e_i)) / 2h``."""
    x = np.asarray(x, dtype=float)
    h = default_step(x) if h is None else float(h)
    if not h > 0:
        raise ValueError("step h must be positive")
    E = h * np.eye(oracle.dim)
    plus, minus = x + E, x - E
    if domain is not None:
        if not (contains(domain, plus).all() and contains(domain, minus).all()):
            raise ValueError("finite-difference stencil leaves the domain")
    return (oracle.f(plus) - oracle.f(minus)) / (2 * h)


def gradient_error(oracle: FunctionOracle, x) -> float:
    """Relative mismatch between analytic and central-difference gradients."""
    g = oracle.grad(x)
    fd = fd_gradient(oracle, x)
    return float(np.linalg.norm(fd - g) / max(1.0, np.linalg.norm(g)))


def midpoint_convexity_witness(oracle: FunctionOracle, X, Y, atol: float = 1e-12):
    """First pair with ``f((x+y)/2) > (f(x)+f(y))/2 + atol``, or ``None``."""
    X = np.atleast_2d(X)
    Y = np.atleast_2d(Y)
    gap = oracle.f((X + Y) / 2) - (oracle.f(X) + oracle.f(Y)) / 2
    bad = np.flatnonzero(gap > atol)
    if len(bad) == 0:
        return None
    i = int(bad[0])
    return X[i], Y[i], float(gap[i])


def directional_defect(oracle: FunctionOracle, x, h_dir, t_grid=None, domain=None) -> float:
    """Extrapolated ``f'(x; h) + f'(x; -h)``.

    The one-sided quotients are summed at each step ``t`` and a quadratic in
    ``t`` is fitted; its intercept is the ``t -> 0`` limit. Zero for functions
    that are Gateaux differentiable at ``x``.
    """
    x = np.asarray(x, dtype=float)
    h_dir = np.asarray(h_dir, dtype=float)
    t = np.asarray(t_grid if t_grid is not None else 1e-2 * 0.5 ** np.arange(6), dtype=float)
    if np.any(t <= 0) or np.any(np.diff(t) >= 0):
        raise ValueError("t_grid must be positive and strictly decreasing")
    fx = oracle.f(x)
    pts_plus = x + t[:, None] * h_dir
    pts_minus = x - t[:, None] * h_dir
    if domain is not None:
        if not (contains(domain, pts_plus).all() and contains(domain, pts_minus).all()):
            raise ValueError("x +- t h_dir leaves the domain")
    q = (oracle.f(pts_plus) - fx) / t + (oracle.f(pts_minus) - fx) / t
    deg = min(2, len(t) - 1)
    return float(np.polyfit(t, q, deg)[-1])
