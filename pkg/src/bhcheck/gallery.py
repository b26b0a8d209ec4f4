"""Self-checking counterexample scenarios on (R^2, linf) and a Euclidean control."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .conditions import CONDITIONS, check_convexity_of_auxiliary, check_lip_gradient, run_condition
from .domains import whole_space
from .estimation import banach_taylor_to_lip_bound, estimate_constant
from .oracles import builtin
from .spaces import NormedSpace

DEFAULT_BUDGET = 10_000
CONSTANT_RTOL = 1e-3
MARGIN_TOL = 1e-9


class UnknownScenarioError(KeyError):
    pass


@dataclass
class Expectation:
    label: str
    relation: str  # holds | violated | equals | in_range
    expected: object
    observed: object
    ok: bool
    source: str = "analytic"
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "relation": self.relation,
            "expected": self.expected,
            "observed": self.observed,
            "ok": self.ok,
            "source": self.source,
            "detail": self.detail,
        }


@dataclass
class ScenarioReport:
    name: str
    oracle: dict
    space: dict
    domain: dict
    expectations: list

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.expectations)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "oracle": self.oracle,
            "space": self.space,
            "domain": self.domain,
            "expectations": [e.to_dict() for e in self.expectations],
        }


def _holds(label, verdict, source):
    return Expectation(
        label, "holds", True, verdict.holds, verdict.holds, source,
        {"worst_margin": verdict.worst_margin, "witness": verdict.witness},
    )


def _violated(label, verdict, source):
    return Expectation(
        label, "violated", True, not verdict.holds, not verdict.holds, source,
        {"worst_margin": verdict.worst_margin, "witness": verdict.witness},
    )


def _near(label, value, target, rtol, source, **detail):
    ok = bool(target * (1 - rtol) <= value <= target * (1 + 1e-12))
    return Expectation(label, "in_range", [target * (1 - rtol), target], value, ok, source, detail)


def _equals(label, value, target, atol, source, **detail):
    return Expectation(label, "equals", target, value, bool(abs(value - target) <= atol), source, detail)


def banach_lemma_failure(budget=DEFAULT_BUDGET, seed=0):
    """``1/2 (x1^2 - x2^2)`` on ``(R^2, linf)``: one-sided constant 1, Lipschitz constant 2."""
    f = builtin("saddle_half_diff")
    X = NormedSpace(2, "linf")
    O = whole_space(X)
    src = "published-example"
    out = [_holds("one_sided_lip holds at L=1", run_condition(f, X, O, "one_sided_lip", 1.0, budget, seed), src)]

    lip = estimate_constant(f, X, O, "lip_gradient", budget, seed)
    out.append(_near("lip_gradient best constant", lip.L_hat, 2.0, CONSTANT_RTOL, src, witness=lip.witness))
    one = estimate_constant(f, X, O, "one_sided_lip", budget, seed)
    out.append(_near("one_sided_lip best constant", one.L_hat, 1.0, CONSTANT_RTOL, src, witness=one.witness))

    v = run_condition(f, X, O, "lip_gradient", 1.0, budget, seed)
    out.append(_violated("lip_gradient violated at L=1", v, src))
    d = np.abs(np.subtract(v.witness["y"], v.witness["x"]))
    out.append(
        Expectation(
            "worst lip_gradient witness lies near a diagonal span{(1,+-1)}", "in_range", [0.9, 1.0],
            float(d.min() / d.max()), bool(d.min() / d.max() >= 0.9), src,
        )
    )
    m = float(check_lip_gradient(f, X, np.zeros(2), np.array([1.0, -1.0]), 1.0))
    out.append(_equals("lip_gradient margin at x=0, y=(1,-1), L=1", m, -1.0, 1e-15, src))

    fac = banach_taylor_to_lip_bound(f, X, O, budget, seed)
    out.append(
        Expectation(
            "Lipschitz / Taylor constant ratio reaches the factor 2", "in_range", [1.9, 2.0 + MARGIN_TOL],
            fac.ratio, bool(1.9 <= fac.ratio <= 2.0 + MARGIN_TOL), src,
            {"L_taylor": fac.L_taylor, "L_lip": fac.L_lip},
        )
    )
    return f, X, O, out


def _aux_margin_by_hand(L):
    # h = L/2 ||.||_inf^2 - 1/2 ||.||_2^2 at (1,1), (1,-1) and their midpoint (1,0)
    h_corner = L / 2 * 1.0 - 0.5 * 2.0
    h_mid = L / 2 * 1.0 - 0.5 * 1.0
    return 0.5 * h_corner + 0.5 * h_corner - h_mid


def banach_theorem_failure(budget=DEFAULT_BUDGET, seed=0):
    """``1/2 ||x||_2^2`` on ``(R^2, linf)``: Lipschitz constant 2, yet ``L/2 ||.||^2 - f`` is never convex."""
    f = builtin("half_sq_norm", dim=2)
    X = NormedSpace(2, "linf")
    O = whole_space(X)
    src = "published-example"
    lip = estimate_constant(f, X, O, "lip_gradient", budget, seed)
    out = [_near("lip_gradient best constant", lip.L_hat, 2.0, CONSTANT_RTOL, src, witness=lip.witness)]
    m = float(check_lip_gradient(f, X, np.zeros(2), np.ones(2), 2.0))
    out.append(_equals("lip_gradient tight on span{(1,1)}: margin at x=0, y=(1,1), L=2", m, 0.0, 1e-15, src))

    x, y = np.array([1.0, 1.0]), np.array([1.0, -1.0])
    for L in (0.5, 1.0, 2.0, 10.0):
        got = float(check_convexity_of_auxiliary(f, X, x, y, 0.5, L))
        want = _aux_margin_by_hand(L)
        out.append(
            Expectation(
                f"aux_convexity witness ((1,1),(1,-1),0.5) at L={L:g}", "equals", want, got,
                bool(abs(got - want) <= 1e-15 and got < 0), src,
            )
        )
        out.append(_violated(f"aux_convexity violated at L={L:g}", run_condition(f, X, O, "aux_convexity", L, budget, seed), src))
    return f, X, O, out


def hilbert_sanity(budget=DEFAULT_BUDGET, seed=0):
    """``1/2 ||x||^2`` on Euclidean R^2: every condition holds at ``L = 1`` with zero slack."""
    f = builtin("half_sq_norm", dim=2)
    H = NormedSpace(2, "euclidean")
    O = whole_space(H)
    out = []
    for c in CONDITIONS:
        v = run_condition(f, H, O, c, 1.0, budget, seed)
        out.append(_holds(f"{c} holds at L=1", v, "analytic"))
        out.append(_equals(f"{c} worst margin is zero", v.worst_margin, 0.0, MARGIN_TOL, "analytic"))
    return f, H, O, out


SCENARIOS = {
    "banach_lemma_failure": banach_lemma_failure,
    "banach_theorem_failure": banach_theorem_failure,
    "hilbert_sanity": hilbert_sanity,
}


def run_scenario(name: str, budget: int = DEFAULT_BUDGET, seed: int = 0) -> ScenarioReport:
    try:
        build = SCENARIOS[name]
    except KeyError:
        raise UnknownScenarioError(f"unknown scenario {name!r}; known: {sorted(SCENARIOS)}") from None
    f, space, domain, expectations = build(budget, seed)
    return ScenarioReport(name, f.to_descriptor(), space.to_descriptor(), domain.to_descriptor(), expectations)
