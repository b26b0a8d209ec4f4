"""Pointwise margins of the smoothness and cocoercivity inequalities.

Every ``check_*`` function returns the slack of its inequality at ``(x, y)``
(and ``lam`` where the inequality has a convex-combination weight): a negative
margin is a violation. All of them broadcast over leading axes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .domains import ConvexDomain, lambda_grid, sample_pairs
from .oracles import FunctionOracle
from .spaces import NormedSpace, dual_norm, norm, pairing, riesz

TOLERANCE = 1e-9

CONDITIONS = (
    "lip_gradient",
    "one_sided_lip",
    "taylor_remainder",
    "strong_smoothness",
    "descent_lemma",
    "comonotone_upper",
    "cocoercivity",
    "bregman_lower",
    "nonexpansive_transform",
    "aux_convexity",
)

# the six assertions of the Banach-space characterization, in their usual order
SMOOTHNESS_SIX = (
    "strong_smoothness",
    "descent_lemma",
    "comonotone_upper",
    "lip_gradient",
    "cocoercivity",
    "bregman_lower",
)

LAMBDA_CONDITIONS = ("strong_smoothness", "aux_convexity")
POSITIVE_L = ("cocoercivity", "bregman_lower", "nonexpansive_transform")
HILBERT_ONLY = ("nonexpansive_transform",)
GRADIENT_FREE = ("strong_smoothness", "aux_convexity")

DESCRIPTIONS = {
    "lip_gradient": "||f'(y) - f'(x)||_* <= L ||y - x||",
    "one_sided_lip": "|<f'(y) - f'(x), y - x>| <= L ||y - x||^2",
    "taylor_remainder": "|f(y) - f(x) - <f'(x), y - x>| <= L/2 ||y - x||^2",
    "strong_smoothness": "f(lx + (1-l)y) + L/2 l(1-l) ||y - x||^2 >= l f(x) + (1-l) f(y)",
    "descent_lemma": "f(y) <= f(x) + <f'(x), y - x> + L/2 ||y - x||^2",
    "comonotone_upper": "<f'(y) - f'(x), y - x> <= L ||y - x||^2",
    "cocoercivity": "<f'(y) - f'(x), y - x> >= 1/L ||f'(y) - f'(x)||_*^2",
    "bregman_lower": "f(y) >= f(x) + <f'(x), y - x> + 1/(2L) ||f'(y) - f'(x)||_*^2",
    "nonexpansive_transform": "||(2/L)(f'(y) - f'(x)) - (R y - R x)||_* <= ||y - x||",
    "aux_convexity": "L/2 ||.||^2 - f is convex",
}


class ConditionNotApplicable(ValueError):
    """The condition is undefined for this oracle/space (as opposed to violated)."""


def _positive(L, condition):
    if not L > 0:
        raise ValueError(f"{condition} requires L > 0, got {L}")


def check_lip_gradient(oracle: FunctionOracle, space: NormedSpace, x, y, L):
    dg = oracle.grad(y) - oracle.grad(x)
    return L * norm(space, y - x) - dual_norm(space, dg)


def check_one_sided(oracle, space, x, y, L):
    d = y - x
    dg = oracle.grad(y) - oracle.grad(x)
    return L * norm(space, d) ** 2 - np.abs(pairing(dg, d))


def check_taylor(oracle, space, x, y, L):
    d = y - x
    rem = oracle.f(y) - oracle.f(x) - pairing(oracle.grad(x), d)
    return L / 2 * norm(space, d) ** 2 - np.abs(rem)


def check_strong_smoothness(oracle, space, x, y, lam, L):
    lam = np.asarray(lam, dtype=float)
    if np.any((lam <= 0) | (lam >= 1)):
        raise ValueError("lambda must lie in (0, 1)")
    lv = lam[..., None]
    z = lv * x + (1 - lv) * y
    return (
        oracle.f(z)
        + L / 2 * (lam * (1 - lam)) * norm(space, y - x) ** 2
        - (lam * oracle.f(x) + (1 - lam) * oracle.f(y))
    )


def check_descent(oracle, space, x, y, L):
    d = y - x
    return oracle.f(x) + pairing(oracle.grad(x), d) + L / 2 * norm(space, d) ** 2 - oracle.f(y)


def check_comonotone_upper(oracle, space, x, y, L):
    d = y - x
    dg = oracle.grad(y) - oracle.grad(x)
    return L * norm(space, d) ** 2 - pairing(dg, d)


def check_cocoercivity(oracle, space, x, y, L):
    _positive(L, "cocoercivity")
    d = y - x
    dg = oracle.grad(y) - oracle.grad(x)
    return pairing(dg, d) - dual_norm(space, dg) ** 2 / L


def check_bregman_lower(oracle, space, x, y, L):
    _positive(L, "bregman_lower")
    d = y - x
    gx = oracle.grad(x)
    dg = oracle.grad(y) - gx
    return oracle.f(y) - oracle.f(x) - pairing(gx, d) - dual_norm(space, dg) ** 2 / (2 * L)


def check_nonexpansive_transform(oracle, space, x, y, L):
    if not space.is_hilbert:
        raise ConditionNotApplicable("nonexpansive_transform needs the Riesz map of a Hilbert norm")
    _positive(L, "nonexpansive_transform")
    dg = oracle.grad(y) - oracle.grad(x)
    moved = (2 / L) * dg - (riesz(space, y) - riesz(space, x))
    return norm(space, y - x) - dual_norm(space, moved)


def check_convexity_of_auxiliary(oracle, space, x, y, lam, L):
    """Convexity slack of ``h = (L/2) ||.||^2 - f`` at the triple ``(x, y, lam)``."""
    lam = np.asarray(lam, dtype=float)
    if np.any((lam <= 0) | (lam >= 1)):
        raise ValueError("lambda must lie in (0, 1)")
    lv = lam[..., None]
    z = lv * x + (1 - lv) * y

    def h(v):
        return L / 2 * norm(space, v) ** 2 - oracle.f(v)

    return lam * h(x) + (1 - lam) * h(y) - h(z)


_PAIR_CHECKS = {
    "lip_gradient": check_lip_gradient,
    "one_sided_lip": check_one_sided,
    "taylor_remainder": check_taylor,
    "descent_lemma": check_descent,
    "comonotone_upper": check_comonotone_upper,
    "cocoercivity": check_cocoercivity,
    "bregman_lower": check_bregman_lower,
    "nonexpansive_transform": check_nonexpansive_transform,
}
_LAMBDA_CHECKS = {
    "strong_smoothness": check_strong_smoothness,
    "aux_convexity": check_convexity_of_auxiliary,
}


def margin(oracle, space, condition, x, y, L, lam=None):
    """Margin of ``condition`` at a pair (``lam`` required for the lambda conditions)."""
    if condition in _LAMBDA_CHECKS:
        if lam is None:
            raise ValueError(f"{condition} needs lam")
        return _LAMBDA_CHECKS[condition](oracle, space, x, y, lam, L)
    try:
        return _PAIR_CHECKS[condition](oracle, space, x, y, L)
    except KeyError:
        raise ValueError(f"unknown condition {condition!r}") from None


def applicable(oracle: FunctionOracle, space: NormedSpace, condition: str) -> Optional[str]:
    """Reason the condition cannot be evaluated, or ``None`` if it can."""
    if condition not in CONDITIONS:
        return f"unknown condition {condition!r}"
    if condition in HILBERT_ONLY and not space.is_hilbert:
        return "Riesz map undefined for Banach norm"
    if condition not in GRADIENT_FREE and oracle.gradient is None:
        return "oracle has no gradient"
    if oracle.dim != space.dim:
        return "oracle and space dimensions differ"
    return None


@dataclass
class ConditionVerdict:
    condition: str
    L: float
    holds: bool
    worst_margin: float
    witness: dict
    samples: int
    tolerance: float = TOLERANCE

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "L": self.L,
            "holds": self.holds,
            "worst_margin": self.worst_margin,
            "witness": self.witness,
            "samples": self.samples,
        }


def witness_dict(x, y, lam=None) -> dict:
    d = {"x": [float(v) for v in x], "y": [float(v) for v in y]}
    if lam is not None:
        d["lambda"] = float(lam)
    return d


def evaluate_margins(oracle, space, condition, X, Y, L, lams=None):
    """Margins on all pairs; shape ``(m,)`` or ``(m, len(lams))`` for lambda conditions."""
    if condition in LAMBDA_CONDITIONS:
        return margin(oracle, space, condition, X[:, None, :], Y[:, None, :], L, lam=np.asarray(lams))
    return margin(oracle, space, condition, X, Y, L)


def run_condition(
    oracle: FunctionOracle,
    space: NormedSpace,
    domain: ConvexDomain,
    condition: str,
    L: float,
    budget: int = 10_000,
    seed: int = 0,
    rho: float = 0.0,
    pairs=None,
    tolerance: float = TOLERANCE,
) -> ConditionVerdict:
    """Worst margin of ``condition`` at constant ``L`` over sampled pairs.

    ``pairs`` overrides the sampler with an explicit ``(X, Y)`` pair set.
    """
    reason = applicable(oracle, space, condition)
    if reason is not None:
        raise ConditionNotApplicable(f"{condition}: {reason}")
    if L < 0:
        raise ValueError("L must be nonnegative")
    if pairs is None:
        X, Y = sample_pairs(domain, rho, budget, seed)
    else:
        X, Y = (np.atleast_2d(np.asarray(p, dtype=float)) for p in pairs)
    lams = lambda_grid(seed) if condition in LAMBDA_CONDITIONS else None
    m = np.asarray(evaluate_margins(oracle, space, condition, X, Y, L, lams))
    flat = m.reshape(len(X), -1)
    k = int(np.argmin(flat))
    i, j = divmod(k, flat.shape[1])
    worst = float(flat[i, j])
    lam = float(lams[j]) if lams is not None else None
    return ConditionVerdict(
        condition=condition,
        L=float(L),
        holds=bool(worst >= -tolerance),
        worst_margin=worst,
        witness=witness_dict(X[i], Y[i], lam),
        samples=int(flat.size),
        tolerance=tolerance,
    )
