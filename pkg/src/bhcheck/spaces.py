"""Finite-dimensional normed spaces realized on R^n.

Vectors and covectors are both plain ``numpy`` arrays of length ``dim``;
which norm applies is decided by the function that receives them
(``norm`` for primal vectors, ``dual_norm`` for covectors such as gradients).
All functions broadcast over leading axes, so a batch of vectors of shape
``(m, dim)`` yields ``m`` norms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

NORM_KINDS = ("euclidean", "weighted", "lp", "linf", "l1")


class DimensionError(ValueError):
    """Raised when a vector does not match the dimension of its space."""


class NotHilbertError(ValueError):
    """Raised when the Riesz map is requested for a non inner-product norm."""


@dataclass(frozen=True)
class NormedSpace:
    """R^n equipped with one of the supported norms.

    ``kind`` is one of ``euclidean``, ``weighted`` (weighted Euclidean with
    positive ``weights``), ``lp`` (with exponent ``p``), ``linf`` and ``l1``.
    """

    dim: int
    kind: str = "euclidean"
    p: Optional[float] = None
    weights: Optional[tuple] = field(default=None)

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim!r}")
        if self.kind not in NORM_KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == "weighted":
            if self.weights is None or len(self.weights) != self.dim:
                raise ValueError("weighted norm needs one weight per coordinate")
            w = tuple(float(v) for v in self.weights)
            if min(w) <= 0:
                raise ValueError("weights must be positive")
            object.__setattr__(self, "weights", w)
        if self.kind == "lp":
            if self.p is None or not (1.0 <= float(self.p) < np.inf):
                raise ValueError("lp norm needs a finite exponent p >= 1; use 'linf' for p = inf")
            object.__setattr__(self, "p", float(self.p))

    @property
    def is_hilbert(self) -> bool:
        return self.kind in ("euclidean", "weighted")

    @property
    def w(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)

    @property
    def q(self) -> float:
        """Conjugate exponent of an ``lp`` space."""
        if self.p == 1.0:
            return np.inf
        return self.p / (self.p - 1.0)

    def _check(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.ndim == 0 or v.shape[-1] != self.dim:
            raise DimensionError(f"expected trailing dimension {self.dim}, got shape {v.shape}")
        return v

    # descriptor round trip, see README for the schema
    def to_descriptor(self) -> dict:
        d = {"dim": self.dim, "norm": self.kind}
        if self.kind == "lp":
            d["p"] = self.p
        if self.kind == "weighted":
            d["weights"] = list(self.weights)
        return d

    @classmethod
    def from_descriptor(cls, d: dict) -> "NormedSpace":
        kind = d.get("norm", "euclidean")
        weights = d.get("weights")
        return cls(
            dim=int(d["dim"]),
            kind=kind,
            p=d.get("p"),
            weights=tuple(weights) if weights is not None else None,
        )

    def label(self) -> str:
        if self.kind == "lp":
            return f"l{self.p:g}(R^{self.dim})"
        return f"{self.kind}(R^{self.dim})"


def _lp(v: np.ndarray, p: float) -> np.ndarray:
    if p == np.inf:
        return np.max(np.abs(v), axis=-1)
    if p == 1.0:
        return np.sum(np.abs(v), axis=-1)
    # scale first so |v|^p cannot overflow or underflow
    a = np.abs(v)
    m = np.max(a, axis=-1, keepdims=True)
    safe = np.where(m > 0, m, 1.0)
    return np.squeeze(safe, -1) * np.sum((a / safe) ** p, axis=-1) ** (1.0 / p)


def norm(space: NormedSpace, v) -> np.ndarray:
    v = space._check(v)
    if space.kind == "euclidean":
        return _lp(v, 2.0)
    if space.kind == "weighted":
        return _lp(np.sqrt(space.w) * v, 2.0)
    if space.kind == "linf":
        return _lp(v, np.inf)
    if space.kind == "l1":
        return _lp(v, 1.0)
    return _lp(v, space.p)


def dual_norm(space: NormedSpace, phi) -> np.ndarray:
    """Norm of a covector: sup of ``pairing(phi, v)`` over the primal unit ball."""
    phi = space._check(phi)
    if space.kind == "euclidean":
        return _lp(phi, 2.0)
    if space.kind == "weighted":
        return _lp(phi / np.sqrt(space.w), 2.0)
    if space.kind == "linf":
        return _lp(phi, 1.0)
    if space.kind == "l1":
        return _lp(phi, np.inf)
    return _lp(phi, space.q)


def pairing(phi, v) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    v = np.asarray(v, dtype=float)
    if phi.shape[-1:] != v.shape[-1:]:
        raise DimensionError(f"cannot pair covector of shape {phi.shape} with vector of shape {v.shape}")
    return np.sum(phi * v, axis=-1)


def riesz(space: NormedSpace, v) -> np.ndarray:
    """Covector representing ``u -> inner(v, u)``."""
    if not space.is_hilbert:
        raise NotHilbertError(f"Riesz map undefined for Banach norm {space.kind!r}")
    v = space._check(v)
    if space.kind == "weighted":
        return space.w * v
    return v.copy()


def riesz_inverse(space: NormedSpace, phi) -> np.ndarray:
    if not space.is_hilbert:
        raise NotHilbertError(f"Riesz map undefined for Banach norm {space.kind!r}")
    phi = space._check(phi)
    if space.kind == "weighted":
        return phi / space.w
    return phi.copy()


def norming_vector(space: NormedSpace, phi, target_norm: float = 1.0) -> np.ndarray:
    """Vector ``z`` with ``norm(z) == target_norm`` attaining ``pairing(phi, z) = dual_norm(phi) * target_norm``.

    Closed form per norm kind; ties in the ``l1`` case go to the lowest index.
    """
    phi = space._check(phi)
    if phi.ndim != 1:
        raise DimensionError("norming_vector expects a single covector")
    if not np.any(phi):
        raise ValueError("zero covector has no norming vector")
    if target_norm < 0:
        raise ValueError("target_norm must be nonnegative")

    if space.is_hilbert:
        z = riesz_inverse(space, phi)
    elif space.kind == "linf":
        z = np.sign(phi)
    elif space.kind == "l1":
        j = int(np.argmax(np.abs(phi)))
        z = np.zeros_like(phi)
        z[j] = np.sign(phi[j])
    else:
        a = np.abs(phi) / np.max(np.abs(phi))
        z = np.sign(phi) * a ** (space.q - 1.0)
    return z * (target_norm / norm(space, z))


def parallelogram_defect(space: NormedSpace, a, b) -> np.ndarray:
    a = space._check(a)
    b = space._check(b)
    return (
        norm(space, a + b) ** 2
        + norm(space, a - b) ** 2
        - 2 * norm(space, a) ** 2
        - 2 * norm(space, b) ** 2
    )


def coordinate_extent(space: NormedSpace) -> np.ndarray:
    """Largest ``|h_i|`` over the closed unit ball, per coordinate ``i``.

    Equal to the dual norm of the coordinate functional ``e_i``.
    """
    return dual_norm(space, np.eye(space.dim))
