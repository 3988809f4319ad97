"""Parameterizations of the structure space near a base structure J0.

Two charts are provided, both indexed by matrices K that anticommute with
the base.  The exponential chart sends K to J0 exp(K).  The rational
(Cayley) chart sends K to J0 (1 + K)(1 - K)^{-1}; it is a diffeomorphism
onto the set of structures J for which 1 - J J0 is invertible, and its
inverse is K = (1 - J J0)^{-1} (1 + J J0).  All operations here act one
fiber at a time; field-level wrappers live in the structures and geometry
modules.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AnticommutationViolation, DimensionMismatch
from .fiber import (
    DEFAULT_COND_CAP,
    FiberMetric,
    as_fiber_matrix,
    g_adjoint,
    mat_exp,
    mat_inv_guarded,
    max_abs,
)

# Class invariant tolerance for coordinates; looser precondition checks on
# raw inputs use 1e-8.
COORD_TOL = 1e-10


def standard_acs(dim: int) -> np.ndarray:
    """The block-diagonal reference structure: 2x2 blocks [[0,-1],[1,0]]."""
    if dim < 2 or dim % 2:
        raise DimensionMismatch(f"dimension must be even and >= 2, got {dim}")
    j = np.zeros((dim, dim))
    for i in range(0, dim, 2):
        j[i, i + 1] = -1.0
        j[i + 1, i] = 1.0
    return j


def anticommute_project(b, j0) -> np.ndarray:
    """Project onto the subspace anticommuting with j0: (b + j0 b j0)/2."""
    m = as_fiber_matrix(b)
    j = as_fiber_matrix(j0)
    if m.shape != j.shape:
        raise DimensionMismatch(f"shape {m.shape} does not match base {j.shape}")
    return 0.5 * (m + j @ m @ j)


@dataclass(frozen=True)
class CayleyCoordinate:
    """A point of the rational chart: base structure plus coordinate K.

    Valid coordinates anticommute with the base and keep 1 - K invertible
    (the chart domain).  Both conditions are checked at construction, as is
    the base identity J0^2 = -1.
    """

    base: np.ndarray
    K: np.ndarray
    cond_cap: float = DEFAULT_COND_CAP

    def __post_init__(self):
        j0 = as_fiber_matrix(self.base)
        k = as_fiber_matrix(self.K)
        if j0.shape != k.shape:
            raise DimensionMismatch(
                f"coordinate shape {k.shape} does not match base shape {j0.shape}")
        if max_abs(j0 @ j0 + np.eye(j0.shape[0])) > COORD_TOL:
            raise ValueError("base matrix does not square to -identity")
        if max_abs(k @ j0 + j0 @ k) > COORD_TOL:
            raise AnticommutationViolation(
                "coordinate does not anticommute with the base structure")
        # raises SingularOperator when 1 - K leaves the chart domain
        mat_inv_guarded(np.eye(k.shape[0]) - k, self.cond_cap)
        object.__setattr__(self, "base", j0)
        object.__setattr__(self, "K", k)

    @property
    def dim(self) -> int:
        return self.base.shape[0]


def exp_chart(j0, k, tol: float = 1e-8) -> np.ndarray:
    """J0 exp(K) for K anticommuting with J0."""
    j = as_fiber_matrix(j0)
    m = as_fiber_matrix(k)
    if j.shape != m.shape:
        raise DimensionMismatch(f"shape {m.shape} does not match base {j.shape}")
    if max_abs(m @ j + j @ m) > tol:
        raise AnticommutationViolation(
            "exp chart argument does not anticommute with the base")
    return j @ mat_exp(m)


def cayley_to_acs(coord: CayleyCoordinate) -> np.ndarray:
    """J0 (1 + K)(1 - K)^{-1}, the rational chart at coord.base."""
    eye = np.eye(coord.dim)
    return coord.base @ (eye + coord.K) @ mat_inv_guarded(eye - coord.K, coord.cond_cap)


def acs_to_cayley(j0, j, cond_cap: float = DEFAULT_COND_CAP) -> CayleyCoordinate:
    """Chart coordinate of j in the rational chart at j0.

    K = (1 - J J0)^{-1} (1 + J J0).  Raises SingularOperator when j lies
    outside the chart (1 - J J0 singular, e.g. j = -j0).
    """
    base = as_fiber_matrix(j0)
    target = as_fiber_matrix(j)
    if base.shape != target.shape:
        raise DimensionMismatch(
            f"structure shape {target.shape} does not match base {base.shape}")
    eye = np.eye(base.shape[0])
    jj0 = target @ base
    k = mat_inv_guarded(eye - jj0, cond_cap) @ (eye + jj0)
    return CayleyCoordinate(base, k, cond_cap)


def chart_transition(coord: CayleyCoordinate, j1) -> np.ndarray:
    """Coordinate of the same structure in the rational chart at j1.

    With T = (1 - K)(1 + K)^{-1} J0 J1, the new coordinate is
    (1 - T)^{-1} (1 + T); it anticommutes with j1.
    """
    new_base = as_fiber_matrix(j1)
    if new_base.shape != coord.base.shape:
        raise DimensionMismatch(
            f"new base shape {new_base.shape} does not match {coord.base.shape}")
    eye = np.eye(coord.dim)
    t = (eye - coord.K) @ mat_inv_guarded(eye + coord.K, coord.cond_cap) \
        @ coord.base @ new_base
    return mat_inv_guarded(eye - t, coord.cond_cap) @ (eye + t)


def pushforward(coord: CayleyCoordinate, a) -> np.ndarray:
    """Differential of the rational chart at coord applied to a.

    A tangent direction a at the chart origin (anticommuting with the
    base) is carried to 2 J0 (1-K)^{-1} a (1-K)^{-1}, a tangent at the
    structure cayley_to_acs(coord).
    """
    m = as_fiber_matrix(a)
    if m.shape != coord.base.shape:
        raise DimensionMismatch(
            f"tangent shape {m.shape} does not match base {coord.base.shape}")
    r = mat_inv_guarded(np.eye(coord.dim) - coord.K, coord.cond_cap)
    return 2.0 * coord.base @ r @ m @ r


def pullback(coord: CayleyCoordinate, a_star) -> np.ndarray:
    """Inverse of :func:`pushforward`: -(1/2) (1-K) J0 a* (1-K)."""
    m = as_fiber_matrix(a_star)
    if m.shape != coord.base.shape:
        raise DimensionMismatch(
            f"tangent shape {m.shape} does not match base {coord.base.shape}")
    eye_k = np.eye(coord.dim) - coord.K
    return -0.5 * eye_k @ coord.base @ m @ eye_k


def random_anticommuting(rng: np.random.Generator, j0, *,
                         metric: FiberMetric | None = None,
                         part: str | None = None,
                         bound: float = 0.9) -> np.ndarray:
    """Draw a random matrix anticommuting with j0.

    Dense uniform[-1, 1) entries are projected onto the anticommuting
    subspace, optionally reduced to the metric-symmetric or antisymmetric
    part, then rescaled so the spectral norm does not exceed ``bound``
    (which keeps 1 - K invertible with margin whenever bound < 1).

    Part selection assumes j0 is skew-adjoint for the metric, which holds
    for the standard structure with the identity metric; only then do the
    two parts stay inside the anticommuting subspace.
    """
    j = as_fiber_matrix(j0)
    k = anticommute_project(rng.uniform(-1.0, 1.0, size=j.shape), j)
    if part is not None:
        if part not in ("symmetric", "antisymmetric"):
            raise ValueError(f"unknown part {part!r}")
        g = metric if metric is not None else FiberMetric.identity(j.shape[0])
        sharp = g_adjoint(k, g)
        k = 0.5 * (k + sharp) if part == "symmetric" else 0.5 * (k - sharp)
    norm = float(np.linalg.norm(k, 2))
    if norm > bound:
        k = k * (bound / norm)
    return k
