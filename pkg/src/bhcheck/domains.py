"""Open convex domains, their inner shrinks and deterministic pair samplers.

The inner shrink of ``O`` by ``rho`` is the set of points whose closed
``rho``-ball (in the ambient norm) stays inside ``O``. It is computed in closed
form for every domain kind; sampling is only used by the tests to cross-check it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .spaces import NormedSpace, coordinate_extent, dual_norm, norm

DOMAIN_KINDS = ("all", "ball", "box", "halfspaces")

# pairs are generated in fixed blocks so any budget is a prefix of a larger one
BLOCK = 64
MAX_ROUNDS = 200
# shortest vertex-direction step, relative to the sampling box; shorter pairs
# mostly resolve rounding noise in value differences
MIN_STEP = 1e-2


class DomainSamplingError(RuntimeError):
    """Rejection sampling could not place a point in the (shrunk) domain."""


@dataclass(frozen=True, eq=False)
class ConvexDomain:
    """Open convex subset of ``space``.

    ``all`` is the whole space, ``ball`` the open ball of ``radius`` around
    ``center`` in the ambient norm, ``box`` the open box ``(lower, upper)`` and
    ``halfspaces`` the set ``{x : <normals[i], x> < offsets[i]}``. ``scale``
    bounds the region used for sampling when the domain itself is unbounded.
    """

    space: NormedSpace
    kind: str = "all"
    center: Optional[np.ndarray] = None
    radius: Optional[float] = None
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    normals: Optional[np.ndarray] = None
    offsets: Optional[np.ndarray] = None
    scale: float = 5.0

    def __post_init__(self):
        n = self.space.dim
        if self.kind not in DOMAIN_KINDS:
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.kind == "ball":
            c = np.zeros(n) if self.center is None else np.asarray(self.center, dtype=float)
            if c.shape != (n,) or self.radius is None or not self.radius > 0:
                raise ValueError("ball needs a center of length dim and a positive radius")
            object.__setattr__(self, "center", c)
            object.__setattr__(self, "radius", float(self.radius))
        elif self.kind == "box":
            lo = np.asarray(self.lower, dtype=float)
            hi = np.asarray(self.upper, dtype=float)
            if lo.shape != (n,) or hi.shape != (n,) or not np.all(lo < hi):
                raise ValueError("box needs lower < upper, both of length dim")
            object.__setattr__(self, "lower", lo)
            object.__setattr__(self, "upper", hi)
        elif self.kind == "halfspaces":
            a = np.atleast_2d(np.asarray(self.normals, dtype=float))
            b = np.atleast_1d(np.asarray(self.offsets, dtype=float))
            if a.shape[1] != n or a.shape[0] != b.shape[0]:
                raise ValueError("halfspaces need an (m, dim) normal matrix and m offsets")
            if np.any(np.all(a == 0, axis=1)):
                raise ValueError("halfspace normals must be nonzero")
            object.__setattr__(self, "normals", a)
            object.__setattr__(self, "offsets", b)

    def to_descriptor(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "ball":
            d.update(center=self.center.tolist(), radius=self.radius)
        elif self.kind == "box":
            d.update(lower=self.lower.tolist(), upper=self.upper.tolist())
        elif self.kind == "halfspaces":
            d.update(normals=self.normals.tolist(), offsets=self.offsets.tolist())
        if self.kind in ("all", "halfspaces"):
            d["scale"] = self.scale
        return d

    @classmethod
    def from_descriptor(cls, d: dict, space: NormedSpace) -> "ConvexDomain":
        kind = d.get("kind", "all")
        return cls(
            space=space,
            kind=kind,
            center=d.get("center"),
            radius=d.get("radius"),
            lower=d.get("lower"),
            upper=d.get("upper"),
            normals=d.get("normals"),
            offsets=d.get("offsets"),
            scale=float(d.get("scale", 5.0)),
        )

    def sampling_box(self):
        n = self.space.dim
        if self.kind == "ball":
            ext = self.radius * coordinate_extent(self.space)
            return self.center - ext, self.center + ext
        if self.kind == "box":
            return self.lower.copy(), self.upper.copy()
        return -self.scale * np.ones(n), self.scale * np.ones(n)


def whole_space(space: NormedSpace, scale: float = 5.0) -> ConvexDomain:
    return ConvexDomain(space=space, kind="all", scale=scale)


def contains(domain: ConvexDomain, x) -> np.ndarray:
    return contains_shrunk(domain, x, 0.0)


def contains_shrunk(domain: ConvexDomain, x, rho: float) -> np.ndarray:
    """True where the closed ``rho``-ball around ``x`` lies inside the open domain."""
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    x = domain.space._check(x)
    if domain.kind == "all":
        return np.ones(x.shape[:-1], dtype=bool)
    if domain.kind == "ball":
        return norm(domain.space, x - domain.center) + rho < domain.radius
    if domain.kind == "box":
        ext = rho * coordinate_extent(domain.space)
        inside = (x - ext > domain.lower) & (x + ext < domain.upper)
        return np.all(inside, axis=-1)
    slack = rho * dual_norm(domain.space, domain.normals)
    lhs = x @ domain.normals.T + slack
    return np.all(lhs < domain.offsets, axis=-1)


def segment_points(x, y, n: int) -> np.ndarray:
    """Equally spaced points ``x_0 = x, ..., x_n = y`` as an ``(n + 1, dim)`` array."""
    if n < 1:
        raise ValueError("n must be at least 1")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    i = np.arange(n + 1)[:, None]
    pts = x + i * (y - x) / n
    pts[-1] = y
    return pts


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.array([seed, block], dtype=np.uint64)))


def _extremal_directions(n: int) -> np.ndarray:
    """Vertices of the l1 and linf unit balls."""
    axes = np.vstack([np.eye(n), -np.eye(n)])
    if n <= 10:
        signs = np.array(list(itertools.product((1.0, -1.0), repeat=n)))
    else:
        signs = np.vstack([np.ones(n), -np.ones(n)])
    return np.vstack([axes, signs])


class _Sampler:
    def __init__(self, domain: ConvexDomain, rho: float):
        self.domain = domain
        self.rho = rho
        self.lo, self.hi = domain.sampling_box()
        self.span = float(np.max(self.hi - self.lo))
        self.dirs = _extremal_directions(domain.space.dim)

    def feasible(self, x):
        in_box = np.all((x >= self.lo) & (x <= self.hi), axis=-1)
        return in_box & contains_shrunk(self.domain, x, self.rho)

    def uniform(self, rng, m):
        n = self.domain.space.dim
        out = np.empty((m, n))
        filled = 0
        for _ in range(MAX_ROUNDS):
            cand = rng.uniform(self.lo, self.hi, size=(m, n))
            ok = cand[self.feasible(cand)]
            take = min(m - filled, len(ok))
            out[filled:filled + take] = ok[:take]
            filled += take
            if filled == m:
                return out
        raise DomainSamplingError(
            f"could not place {m} points in the {self.domain.kind} domain shrunk by rho={self.rho} "
            f"after {MAX_ROUNDS * m} attempts; the domain is too thin for this rho"
        )

    def along(self, x, d, t):
        """``x + t d``, or ``x - t d`` if only that is feasible; otherwise ``t`` is halved.

        Falls back to ``x`` when no step fits.
        """
        t = t.copy()
        d = np.where(self.feasible(x + t[:, None] * d)[:, None], d, -d)
        y = x + t[:, None] * d
        ok = self.feasible(y)
        for _ in range(60):
            if ok.all():
                break
            t = np.where(ok, t, t / 2)
            y = x + t[:, None] * d
            ok = self.feasible(y)
        return np.where(ok[:, None], y, x)

    def to_boundary(self, x, d):
        t_lo = np.zeros(len(x))
        t_hi = np.full(len(x), 2 * self.span)
        for _ in range(60):
            mid = (t_lo + t_hi) / 2
            ok = self.feasible(x + mid[:, None] * d)
            t_lo = np.where(ok, mid, t_lo)
            t_hi = np.where(ok, t_hi, mid)
        return t_lo

    def block(self, seed, b):
        rng = _block_rng(seed, b)
        n = self.domain.space.dim
        m = BLOCK
        x = self.uniform(rng, m)
        y = self.uniform(rng, m)
        gauss = rng.standard_normal((m, n))
        gauss /= np.linalg.norm(gauss, axis=1, keepdims=True)
        pick = rng.integers(0, len(self.dirs), size=m)
        u = rng.uniform(size=m)
        v = rng.uniform(size=m)
        stratum = (b * m + np.arange(m)) % 4

        s = stratum == 2
        if s.any():
            y[s] = self.along(x[s], self.dirs[pick[s]], self.span * (MIN_STEP + (1 - MIN_STEP) * u[s]))
        s = stratum == 3
        if s.any():
            y[s] = self.along(x[s], gauss[s], self.span * 10.0 ** (-0.5 - 1.5 * u[s]))
        s = stratum == 1
        if s.any() and self.domain.kind != "all":
            t = self.to_boundary(x[s], gauss[s])
            y[s] = x[s] + (t * (1 - 10.0 ** (-1 - 11 * v[s])))[:, None] * gauss[s]
        return x, y


def sample_pairs(domain: ConvexDomain, rho: float, count: int, seed: int):
    """Deterministic pairs ``(X, Y)`` of points of the ``rho``-shrunk domain.

    Returns two ``(count, dim)`` arrays. Pairs cycle through four strata:
    independent uniform points, a point pushed to the boundary of the shrunk
    domain, a segment along a vertex direction of the l1/linf unit balls,
    and a short segment in a random direction. The output for ``count``
    is a prefix of the output for any larger count with the same seed.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    sampler = _Sampler(domain, rho)
    xs, ys = [], []
    for b in range(-(-count // BLOCK)):
        x, y = sampler.block(seed, b)
        xs.append(x)
        ys.append(y)
    return np.vstack(xs)[:count], np.vstack(ys)[:count]


def lambda_grid(seed: int) -> np.ndarray:
    """Fixed convex-combination weights plus eight seeded random ones."""
    rng = _block_rng(seed, 2**62)
    return np.concatenate([[0.1, 0.25, 0.5, 0.75, 0.9], rng.uniform(0.01, 0.99, size=8)])
