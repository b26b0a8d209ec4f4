"""Best-constant estimation, segment chaining and the implication-matrix check.

A best constant is the smallest ``L`` for which a condition holds on the whole
domain. Each sampled pair yields the smallest ``L`` that makes the inequality
hold at that pair (its *ratio*); the maximum over pairs is a lower bound on
the best constant. Pairs whose ratio cannot be resolved above rounding noise
are skipped, and pairs that no finite ``L`` can satisfy are recorded as
unbounded evidence instead of a number.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .conditions import (
    CONDITIONS,
    LAMBDA_CONDITIONS,
    SMOOTHNESS_SIX,
    TOLERANCE,
    ConditionNotApplicable,
    applicable,
    check_bregman_lower,
    check_cocoercivity,
    check_descent,
    margin,
    witness_dict,
)
from .domains import ConvexDomain, contains, contains_shrunk, lambda_grid, sample_pairs, segment_points
from .oracles import FunctionOracle
from .spaces import NormedSpace, dual_norm, norm, norming_vector, pairing

POLISH_CHUNK = 128
POLISH_STEPS = 100
POLISH_SHRINK = 0.85
# polished pairs stay this far apart (relative to the sampling box) so that
# rounding in differences of nearby values cannot inflate a ratio
POLISH_MIN_SEP = 1e-2
POLISH_LAMBDA = (0.01, 0.99)
# relative noise floors below which a quantity is considered unresolved; a
# value difference just above VALUE_NOISE still carries ~1e-10 relative error
GRAD_NOISE = 1e-10
VALUE_NOISE = 1e-6
CLEAR = 1e-8
MATRIX_RTOL = 5e-2


class EstimationError(RuntimeError):
    pass


class HypothesisViolated(RuntimeError):
    """A precondition of a range-conditional check fails (not a conclusion failure)."""


def _safe_div(num, den):
    with np.errstate(divide="ignore", invalid="ignore"):
        return num / den


def condition_ratio(oracle: FunctionOracle, space: NormedSpace, condition: str, x, y, lam=None):
    """Smallest ``L`` making ``condition`` hold at each pair.

    Returns an array broadcast from ``x``, ``y`` (and ``lam``): ``nan`` where the
    pair gives no information (``x == y`` or a denominator lost in rounding),
    ``inf`` where no finite ``L`` works.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = y - x
    nd = norm(space, d)
    nd2 = nd**2

    if condition in LAMBDA_CONDITIONS:
        lam = np.asarray(lam, dtype=float)
        lv = lam[..., None]
        z = lv * x + (1 - lv) * y
        fx, fy, fz = oracle.f(x), oracle.f(y), oracle.f(z)
        gap = lam * fx + (1 - lam) * fy - fz
        gap_noise = VALUE_NOISE * (np.abs(lam * fx) + np.abs((1 - lam) * fy) + np.abs(fz))
        if condition == "strong_smoothness":
            den = lam * (1 - lam) * nd2 / 2
            r = np.where(gap > gap_noise, _safe_div(gap, den), 0.0)
            return np.where(nd > 0, r, np.nan)
        sq = lam * norm(space, x) ** 2 + (1 - lam) * norm(space, y) ** 2
        curv = sq - norm(space, z) ** 2
        curv_noise = VALUE_NOISE * (sq + norm(space, z) ** 2)
        # no finite L only if the convexity gap is clearly positive where the norm is flat
        flat = np.where(gap > CLEAR * gap_noise / VALUE_NOISE, np.inf, np.nan)
        r = np.where(
            gap <= gap_noise,
            0.0,
            np.where(curv > curv_noise, _safe_div(2 * gap, curv), flat),
        )
        return np.where(nd > 0, r, np.nan)

    gx = oracle.grad(x)
    gy = oracle.grad(y)
    dg = gy - gx
    if condition == "lip_gradient":
        r = _safe_div(dual_norm(space, dg), nd)
    elif condition == "one_sided_lip":
        r = _safe_div(np.abs(pairing(dg, d)), nd2)
    elif condition == "comonotone_upper":
        r = np.maximum(_safe_div(pairing(dg, d), nd2), 0.0)
    elif condition in ("taylor_remainder", "descent_lemma"):
        rem = oracle.f(y) - oracle.f(x) - pairing(gx, d)
        rem_noise = VALUE_NOISE * (np.abs(oracle.f(y)) + np.abs(oracle.f(x)) + np.abs(pairing(gx, d)))
        rem = np.where(np.abs(rem) <= rem_noise, 0.0, rem)
        if condition == "taylor_remainder":
            rem = np.abs(rem)
        r = np.maximum(_safe_div(2 * rem, nd2), 0.0)
    elif condition in ("cocoercivity", "nonexpansive_transform", "bregman_lower"):
        if condition == "nonexpansive_transform" and not space.is_hilbert:
            raise ConditionNotApplicable("nonexpansive_transform needs a Hilbert norm")
        G = dual_norm(space, dg)
        g_noise = GRAD_NOISE * (dual_norm(space, gx) + dual_norm(space, gy))
        if condition == "bregman_lower":
            lin = pairing(gx, d)
            fx, fy = oracle.f(x), oracle.f(y)
            den = 2 * (fy - fx - lin)
            den_noise = 2 * VALUE_NOISE * (np.abs(fx) + np.abs(fy) + np.abs(lin))
        else:
            # (2/L) dg - R d has dual norm <= ||d|| iff ||dg||^2 / L <= <dg, d> in a Hilbert space
            den = pairing(dg, d)
            den_noise = VALUE_NOISE * (dual_norm(space, gx) + dual_norm(space, gy)) * nd
        r = np.where(
            G <= g_noise,
            0.0,
            np.where(den > den_noise, _safe_div(G**2, den), np.where(den < -den_noise, np.inf, np.nan)),
        )
    else:
        raise ValueError(f"unknown condition {condition!r}")
    return np.where(nd > 0, r, np.nan)


@dataclass
class ConstantEstimate:
    condition: str
    L_hat: float
    witness: dict
    samples_used: int
    unbounded: bool = False
    skipped: int = 0

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "L_hat": None if self.unbounded else self.L_hat,
            "unbounded": self.unbounded,
            "witness": self.witness,
            "samples_used": self.samples_used,
            "skipped": self.skipped,
        }


def _ratio_at(oracle, space, condition, x, y, lam):
    return condition_ratio(oracle, space, condition, x, y, lam if condition in LAMBDA_CONDITIONS else None)


def _polish(oracle, space, domain, condition, rho, x, y, lam, cur):
    """Coordinate ascent on the ratio with geometrically shrinking steps."""
    x, y, lam, cur = x.copy(), y.copy(), lam.copy(), cur.copy()
    lo, hi = domain.sampling_box()
    span = float(np.max(hi - lo))
    step = 0.1 * span
    min_sep = POLISH_MIN_SEP * span
    lam_step = 0.1
    n = space.dim
    use_lam = condition in LAMBDA_CONDITIONS
    for _ in range(POLISH_STEPS):
        for c in range(2 * n + (1 if use_lam else 0)):
            for sgn in (1.0, -1.0):
                cx, cy, cl = x.copy(), y.copy(), lam.copy()
                if c < n:
                    cx[:, c] += sgn * step
                    ok = contains_shrunk(domain, cx, rho)
                elif c < 2 * n:
                    cy[:, c - n] += sgn * step
                    ok = contains_shrunk(domain, cy, rho)
                else:
                    cl += sgn * lam_step
                    ok = (cl >= POLISH_LAMBDA[0]) & (cl <= POLISH_LAMBDA[1])
                ok &= norm(space, cy - cx) >= min_sep
                val = _ratio_at(oracle, space, condition, cx, cy, cl)
                better = ok & (np.nan_to_num(val, nan=-np.inf) > cur)
                x[better], y[better], lam[better], cur[better] = cx[better], cy[better], cl[better], val[better]
        step *= POLISH_SHRINK
        lam_step *= POLISH_SHRINK
    return x, y, lam, cur


def _sampled_ratios(oracle, space, condition, X, Y, lams):
    if condition in LAMBDA_CONDITIONS:
        r = condition_ratio(oracle, space, condition, X[:, None, :], Y[:, None, :], lams)
    else:
        r = condition_ratio(oracle, space, condition, X, Y)[:, None]
    return r


def estimate_constant(
    oracle: FunctionOracle,
    space: NormedSpace,
    domain: ConvexDomain,
    condition: str,
    budget: int = 10_000,
    seed: int = 0,
    rho: float = 0.0,
    polish: bool = True,
) -> ConstantEstimate:
    """Sampled lower bound on the best constant of ``condition``.

    Raw ratios over ``budget`` seeded pairs are complemented by polishing the
    best pair of every complete chunk of ``POLISH_CHUNK`` samples, so the
    estimate is exactly nondecreasing in ``budget`` for a fixed seed.
    """
    reason = applicable(oracle, space, condition)
    if reason is not None:
        raise ConditionNotApplicable(f"{condition}: {reason}")
    X, Y = sample_pairs(domain, rho, budget, seed)
    lams = lambda_grid(seed) if condition in LAMBDA_CONDITIONS else np.full(1, 0.5)
    r = _sampled_ratios(oracle, space, condition, X, Y, lams)

    def wit(i, j):
        lam = float(lams[j]) if condition in LAMBDA_CONDITIONS else None
        return witness_dict(X[i], Y[i], lam)

    valid = ~np.isnan(r)
    if not valid.any():
        raise EstimationError(f"no informative pairs for {condition} (all pairs degenerate)")
    skipped = int((~valid).sum())
    inf_idx = np.flatnonzero(np.isinf(r).ravel())
    if len(inf_idx):
        i, j = divmod(int(inf_idx[0]), r.shape[1])
        return ConstantEstimate(condition, math.inf, wit(i, j), len(X), unbounded=True, skipped=skipped)

    rr = np.where(valid, r, -np.inf)
    k = int(np.argmax(rr))
    i, j = divmod(k, r.shape[1])
    best, witness = float(rr[i, j]), wit(i, j)

    chunks = len(X) // POLISH_CHUNK
    if polish and chunks:
        blocks = rr[: chunks * POLISH_CHUNK].reshape(chunks, -1)
        local = np.argmax(blocks, axis=1)
        start = np.isfinite(blocks[np.arange(chunks), local])
        if start.any():
            ii, jj = np.divmod(local[start], r.shape[1])
            ii = ii + np.flatnonzero(start) * POLISH_CHUNK
            px, py, pl, pv = _polish(
                oracle, space, domain, condition, rho, X[ii], Y[ii], lams[jj].astype(float), rr[ii, jj]
            )
            if np.isinf(pv).any():
                q = int(np.flatnonzero(np.isinf(pv))[0])
                lam = float(pl[q]) if condition in LAMBDA_CONDITIONS else None
                return ConstantEstimate(
                    condition, math.inf, witness_dict(px[q], py[q], lam), len(X), unbounded=True, skipped=skipped
                )
            q = int(np.argmax(pv))
            if pv[q] > best:
                best = float(pv[q])
                lam = float(pl[q]) if condition in LAMBDA_CONDITIONS else None
                witness = witness_dict(px[q], py[q], lam)
    return ConstantEstimate(condition, best, witness, len(X), skipped=skipped)


def witness_ratio(oracle, space, estimate: ConstantEstimate) -> float:
    """Re-evaluate the defining ratio at an estimate's witness."""
    w = estimate.witness
    return float(
        condition_ratio(oracle, space, estimate.condition, np.array(w["x"]), np.array(w["y"]), w.get("lambda"))
    )


def segment_refine(oracle: FunctionOracle, space: NormedSpace, x, y, n: int, domain: Optional[ConvexDomain] = None) -> float:
    """Largest gradient difference quotient over the ``n`` pieces of the segment ``[x, y]``.

    By the triangle inequality this bounds the endpoint quotient from above.
    """
    pts = segment_points(x, y, n)
    if domain is not None and not contains(domain, pts).all():
        raise ValueError("segment leaves the domain")
    if not np.any(np.asarray(y, dtype=float) - np.asarray(x, dtype=float)):
        return 0.0
    g = oracle.grad(pts)
    q = dual_norm(space, np.diff(g, axis=0)) / norm(space, np.diff(pts, axis=0))
    return float(np.max(q))


@dataclass
class FactorTwoReport:
    L_taylor: float
    L_lip: float
    ratio: float
    degenerate: bool
    lip_witness: dict
    taylor_witness: dict

    def to_dict(self) -> dict:
        return {
            "L_taylor": self.L_taylor,
            "L_lip": self.L_lip,
            "ratio": self.ratio,
            "degenerate": self.degenerate,
            "lip_witness": self.lip_witness,
            "taylor_witness": self.taylor_witness,
        }


_SEGMENT_T = np.unique(np.concatenate([np.geomspace(1e-4, 1.0, 24), np.linspace(1 / 32, 1.0, 32)]))
_TOP_K = 32
_CROSS_ROUNDS = 8


def _top_pairs(oracle, space, condition, X, Y, k):
    r = np.nan_to_num(condition_ratio(oracle, space, condition, X, Y), nan=-np.inf, posinf=-np.inf)
    idx = np.argsort(-r, kind="stable")[:k]
    return X[idx], Y[idx]


def banach_taylor_to_lip_bound(
    oracle: FunctionOracle, space: NormedSpace, domain: ConvexDomain, budget: int = 10_000, seed: int = 0
) -> FactorTwoReport:
    """Compare the Taylor-remainder constant with the gradient Lipschitz constant.

    In a Banach space the Taylor constant ``L`` only guarantees a Lipschitz
    constant ``2L``. Both estimates share the sampled pairs and are then
    cross-fed: sub-segments of the strongest Taylor pairs are added to the
    Lipschitz samples, and the four expansion pairs used to turn a Taylor bound
    into a gradient bound (built from a norming vector of the gradient gap)
    are added to the Taylor samples.
    """
    lip = estimate_constant(oracle, space, domain, "lip_gradient", budget, seed)
    tay = estimate_constant(oracle, space, domain, "taylor_remainder", budget, seed)
    L_lip, lip_w = lip.L_hat, lip.witness
    L_tay, tay_w = tay.L_hat, tay.witness
    X, Y = sample_pairs(domain, 0.0, budget, seed)
    lo, hi = domain.sampling_box()
    min_sep = POLISH_MIN_SEP * float(np.max(hi - lo))

    def best(condition, P, Q):
        r = np.nan_to_num(condition_ratio(oracle, space, condition, P, Q), nan=-np.inf)
        k = int(np.argmax(r))
        return float(r[k]), witness_dict(P[k], Q[k])

    def sub_segments(P, Q):
        # (x, x + t (y - x)): the Lipschitz quotient along them dominates the Taylor quotient of (x, y)
        SX = np.repeat(P, len(_SEGMENT_T), axis=0)
        SY = SX + np.tile(_SEGMENT_T, len(P))[:, None] * np.repeat(Q - P, len(_SEGMENT_T), axis=0)
        return best("lip_gradient", SX, SY)

    def expansions(P, Q):
        ax, ay = [], []
        for x, y in zip(P, Q):
            dg = oracle.grad(y) - oracle.grad(x)
            nd = float(norm(space, y - x))
            if nd == 0 or not np.any(dg):
                continue
            g = norming_vector(space, dg, nd)
            d = (x - y + g) / 2
            if not (contains(domain, x - d) and contains(domain, y + d)):
                continue
            ax += [y, x, y, x]
            ay += [x - d, y + d, y + d, x - d]
        if not ax:
            return -np.inf, None
        AX, AY = np.array(ax), np.array(ay)
        # very short pairs only resolve rounding noise in the remainder
        keep = norm(space, AY - AX) >= min_sep
        if not keep.any():
            return -np.inf, None
        return best("taylor_remainder", AX[keep], AY[keep])

    def one(w):
        return np.array([w["x"]]), np.array([w["y"]])

    TX, TY = _top_pairs(oracle, space, "taylor_remainder", X, Y, _TOP_K)
    LX, LY = _top_pairs(oracle, space, "lip_gradient", X, Y, _TOP_K)
    tay_new = (np.vstack([TX, one(tay_w)[0]]), np.vstack([TY, one(tay_w)[1]]))
    lip_new = (np.vstack([LX, one(lip_w)[0]]), np.vstack([LY, one(lip_w)[1]]))
    # alternate until neither side improves; later rounds only revisit new witnesses
    for _ in range(_CROSS_ROUNDS):
        changed = False
        if tay_new is not None:
            r, w = sub_segments(*tay_new)
            if r > L_lip:
                L_lip, lip_w, lip_new, changed = r, w, one(w), True
            tay_new = None
        if lip_new is not None:
            r, w = expansions(*lip_new)
            if r > L_tay:
                L_tay, tay_w, tay_new, changed = r, w, one(w), True
            lip_new = None
        if not changed:
            break

    degenerate = L_lip == 0 and L_tay == 0
    if degenerate:
        ratio = 1.0
    elif L_tay == 0:
        ratio = math.inf
    else:
        ratio = L_lip / L_tay
    return FactorTwoReport(L_tay, L_lip, ratio, degenerate, lip_w, tay_w)


def gradient_range_segment(oracle: FunctionOracle, space: NormedSpace, x, y, n: int) -> np.ndarray:
    """Preimages under the gradient of the equally spaced points of ``[f'(x), f'(y)]``.

    Only defined for quadratics with invertible matrix (``half_sq_norm``
    counts, with the identity), where preimages are linear solves. Returns
    an ``(n + 1, dim)`` array with ``x`` and ``y`` as its first and last rows.
    """
    if oracle.name == "quadratic":
        A = np.asarray(oracle.params["A"])
    elif oracle.name == "half_sq_norm":
        A = np.eye(oracle.dim)
    else:
        raise ValueError("gradient_range_segment needs a quadratic oracle")
    if n < 1:
        raise ValueError("n must be at least 1")
    if np.linalg.matrix_rank(A) < A.shape[0]:
        raise np.linalg.LinAlgError("quadratic matrix is singular; the gradient is not invertible")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = np.arange(n + 1)[:, None] / n
    targets = (1 - t) * oracle.grad(x) + t * oracle.grad(y)
    pts = np.linalg.solve(A, targets.T).T
    pts[0], pts[-1] = x, y
    return pts


def check_range_conditional(
    oracle: FunctionOracle,
    space: NormedSpace,
    domain: ConvexDomain,
    rho: float,
    pair,
    n: int,
    mode: str,
    L: float,
    tolerance: float = TOLERANCE,
) -> float:
    """Conclusion margin of a range-conditional implication at one pair.

    ``coco_to_bregman``: with the gradient range segment inside ``f'(O)`` and
    cocoercivity at ``L`` along it, the Bregman lower bound should hold at
    ``(x, y)``. ``descent_to_coco``: with the range segment inside
    ``f'(O_rho)``, ``||f'(y) - f'(x)||_* < L rho n`` and the descent lemma
    along it, cocoercivity should hold at ``(x, y)``. Failed preconditions
    raise ``HypothesisViolated``; the returned margin may be negative.
    """
    x, y = (np.asarray(p, dtype=float) for p in pair)
    pts = gradient_range_segment(oracle, space, x, y, n)
    a, b = pts[:-1], pts[1:]
    if mode == "coco_to_bregman":
        if not contains(domain, pts).all():
            raise HypothesisViolated("hypothesis-range violated: gradient range segment leaves f'(O)")
        hyp = check_cocoercivity(oracle, space, a, b, L)
        if np.any(hyp < -tolerance):
            raise HypothesisViolated("hypothesis violated: cocoercivity fails along the range segment")
        return float(check_bregman_lower(oracle, space, x, y, L))
    if mode == "descent_to_coco":
        if not rho > 0:
            raise ValueError("descent_to_coco needs rho > 0")
        if not contains_shrunk(domain, pts, rho).all():
            raise HypothesisViolated("hypothesis-range violated: gradient range segment leaves f'(O_rho)")
        if not dual_norm(space, oracle.grad(y) - oracle.grad(x)) < L * rho * n:
            raise HypothesisViolated("hypothesis-range violated: gradient gap not below L rho n")
        hyp = np.minimum(check_descent(oracle, space, a, b, L), check_descent(oracle, space, b, a, L))
        if np.any(hyp < -tolerance):
            raise HypothesisViolated("hypothesis violated: descent lemma fails along the range segment")
        return float(check_cocoercivity(oracle, space, x, y, L))
    raise ValueError(f"unknown mode {mode!r}")


# ---- implication matrix -----------------------------------------------------

_EQUIV_A = ("strong_smoothness", "descent_lemma", "comonotone_upper", "lip_gradient")


def _relations(hilbert: bool, whole: bool):
    edges = set()
    for a in _EQUIV_A:
        for b in _EQUIV_A:
            if a != b:
                edges.add((a, b))
    edges |= {("bregman_lower", "cocoercivity"), ("cocoercivity", "strong_smoothness")}
    # gradient Lipschitz => one-sided estimate => Taylor remainder, in any normed space
    edges |= {("lip_gradient", "one_sided_lip"), ("one_sided_lip", "taylor_remainder")}
    if hilbert:
        edges |= {
            ("lip_gradient", "cocoercivity"),
            ("taylor_remainder", "lip_gradient"),
            ("lip_gradient", "aux_convexity"),
            ("aux_convexity", "lip_gradient"),
            ("cocoercivity", "nonexpansive_transform"),
            ("nonexpansive_transform", "cocoercivity"),
        }
        if whole:
            edges.add(("strong_smoothness", "bregman_lower"))
    return edges


def _closure(edges, nodes):
    reach = {a: {b for (s, b) in edges if s == a} for a in nodes}
    changed = True
    while changed:
        changed = False
        for a in nodes:
            new = set().union(*(reach[b] for b in reach[a])) - reach[a] - {a}
            if new:
                reach[a] |= new
                changed = True
    return {(a, b) for a in nodes for b in reach[a]}


@dataclass
class ImplicationReport:
    space_class: str
    estimates: dict
    matrix: dict
    constant_orderings: list
    degenerate: bool
    tolerance: float
    observations: list = field(default_factory=list)

    @property
    def verified(self) -> bool:
        if any(e["status"] == "violated" for e in self.matrix.values()):
            return False
        return all(o["ok"] is not False for o in self.constant_orderings)

    def to_dict(self) -> dict:
        return {
            "space_class": self.space_class,
            "verified": self.verified,
            "degenerate": self.degenerate,
            "tolerance": self.tolerance,
            "estimates": [e.to_dict() for e in self.estimates.values()],
            "matrix": self.matrix,
            "constant_orderings": self.constant_orderings,
            "observations": self.observations,
        }


def _le(a: float, b: float, rtol: float) -> bool:
    return a <= b * (1 + rtol) + 1e-12


def verify_implication_matrix(
    oracle: FunctionOracle,
    space: NormedSpace,
    domain: ConvexDomain,
    budget: int = 10_000,
    seed: int = 0,
    rtol: float = MATRIX_RTOL,
) -> ImplicationReport:
    """Check that the estimated best constants respect every known implication.

    An implication ``A => B`` at the same constant means ``best(B) <= best(A)``;
    an entry is violated when ``B``'s estimate exceeds ``A``'s by more than
    ``rtol``, and the witness is ``B``'s extremal pair. Relations that hold
    only in inner-product spaces (or only on the whole space) are added when
    they apply; in other spaces the class-versus-cocoercivity comparison is
    recorded as an observation without a verdict.
    """
    if not oracle.convex:
        raise ValueError(f"implication matrix needs a convex oracle; {oracle.name!r} is not convex")
    if oracle.gradient is None:
        raise ValueError("implication matrix needs a differentiable oracle")
    hilbert = space.is_hilbert
    whole = domain.kind == "all"
    names = [c for c in CONDITIONS if applicable(oracle, space, c) is None]
    est = {c: estimate_constant(oracle, space, domain, c, budget, seed) for c in names}
    L = {c: e.L_hat for c, e in est.items()}
    finite = [v for v in L.values() if math.isfinite(v)]
    degenerate = bool(finite) and max(finite) == 0.0

    matrix = {}
    edges = _closure(_relations(hilbert, whole), names)
    for a in names:
        for b in names:
            if a == b:
                continue
            key = f"{a}=>{b}"
            if (a, b) not in edges:
                matrix[key] = {"status": "not_applicable"}
                continue
            entry = {"L_a": _num(L[a]), "L_b": _num(L[b])}
            if not math.isfinite(L[a]) or _le(L[b], L[a], rtol):
                entry["status"] = "verified"
            else:
                entry["status"] = "violated"
                entry["witness"] = est[b].witness
                w = est[b].witness
                entry["margin_at_L_a"] = float(
                    margin(
                        oracle, space, b, np.array(w["x"]), np.array(w["y"]), L[a] * (1 + rtol), lam=w.get("lambda")
                    )
                )
            matrix[key] = entry

    orderings = []
    cls = [c for c in _EQUIV_A if c in L]
    for a, b in zip(cls, cls[1:]):
        orderings.append(_ordering(a, b, L, "eq", rtol, degenerate))
    orderings.append(_ordering("lip_gradient", "cocoercivity", L, "le", rtol, degenerate))
    orderings.append(_ordering("cocoercivity", "bregman_lower", L, "le", rtol, degenerate))
    observations = []
    if hilbert:
        orderings.append(_ordering("lip_gradient", "cocoercivity", L, "eq", rtol, degenerate))
    else:
        observations.append(
            {
                "a": "lip_gradient",
                "b": "cocoercivity",
                "L_a": _num(L["lip_gradient"]),
                "L_b": _num(L["cocoercivity"]),
                "note": "whether the smoothness class implies cocoercivity in this space is not asserted",
            }
        )
    return ImplicationReport(
        space_class="hilbert" if hilbert else "banach",
        estimates=est,
        matrix=matrix,
        constant_orderings=orderings,
        degenerate=degenerate,
        tolerance=rtol,
        observations=observations,
    )


def _num(v: float):
    return None if not math.isfinite(v) else v


def _ordering(a, b, L, relation, rtol, degenerate):
    la, lb = L[a], L[b]
    if degenerate:
        ok = None
    elif relation == "eq":
        ok = bool(math.isfinite(la) and math.isfinite(lb) and _le(la, lb, rtol) and _le(lb, la, rtol))
    else:
        ok = bool(not math.isfinite(lb) or _le(la, lb, rtol))
    return {"a": a, "b": b, "L_a": _num(la), "L_b": _num(lb), "relation": relation, "ok": ok}
