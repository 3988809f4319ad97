"""Dense matrix kernels on a single tangent fiber.

Everything above this module reduces to a few operations on real 2n x 2n
float64 matrices: guarded inversion, the matrix exponential, tanh of a
scaled matrix, and adjoints with respect to a fiber metric.  Operands are
assumed unit-scale (norms of order one); the default tolerances used by
callers are calibrated for that regime.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DimensionMismatch, SingularOperator

DEFAULT_COND_CAP = 1e12


def as_fiber_matrix(a) -> np.ndarray:
    """Coerce to a float64 square matrix of even dimension >= 2."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 2 or m.shape[0] % 2:
        raise DimensionMismatch(
            f"fiber dimension must be even and >= 2, got {m.shape[0]}")
    if not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite")
    return m


def max_abs(a) -> float:
    """Entrywise max norm, the residual measure used throughout."""
    arr = np.asarray(a, dtype=float)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


@dataclass(frozen=True)
class FiberMetric:
    """Symmetric positive-definite inner product on one fiber."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_fiber_matrix(self.matrix)
        if max_abs(m - m.T) > 1e-12:
            raise ValueError("fiber metric must be symmetric within 1e-12")
        if float(np.linalg.eigvalsh(m)[0]) <= 0.0:
            raise ValueError("fiber metric must be positive definite")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "FiberMetric":
        return cls(np.eye(dim))


def mat_inv_guarded(a, cond_cap: float = DEFAULT_COND_CAP) -> np.ndarray:
    """Invert a matrix, refusing ill-conditioned input.

    The 2-norm condition number is estimated by SVD; anything above
    ``cond_cap`` raises :class:`SingularOperator` instead of returning
    garbage.  Chart operations rely on this guard to surface domain
    violations (1 - K close to singular) as errors rather than noise.
    """
    m = as_fiber_matrix(a)
    if not cond_cap > 0:
        raise ValueError("cond_cap must be positive")
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > cond_cap:
        raise SingularOperator(
            f"condition estimate {cond:.6e} exceeds cap {cond_cap:.6e}")
    try:
        return np.linalg.solve(m, np.eye(m.shape[0]))
    except np.linalg.LinAlgError as exc:  # exactly singular yet finite cond
        raise SingularOperator(str(exc)) from None


def mat_exp(a) -> np.ndarray:
    """Matrix exponential (scaling and squaring with Pade approximants)."""
    return expm(as_fiber_matrix(a))


def mat_tanh_half(a, t: float) -> np.ndarray:
    """tanh((t/2) a), computed as the quotient of exponentials.

    Returns (e + f)^{-1} (e - f) with e = exp(t a / 2) and f = exp(-t a / 2).
    The cosh factor e + f can only degenerate when the spectrum of (t/2) a
    approaches an odd multiple of i pi / 2; a failed inversion surfaces as
    :class:`SingularOperator`.
    """
    m = as_fiber_matrix(a)
    e = expm((0.5 * float(t)) * m)
    f = expm((-0.5 * float(t)) * m)
    return mat_inv_guarded(e + f) @ (e - f)


def g_adjoint(a, g: FiberMetric) -> np.ndarray:
    """Adjoint of ``a`` with respect to the fiber metric: G^{-1} a^T G."""
    m = as_fiber_matrix(a)
    if m.shape[0] != g.dim:
        raise DimensionMismatch(
            f"operand dimension {m.shape[0]} does not match metric dimension {g.dim}")
    return np.linalg.solve(g.matrix, m.T @ g.matrix)
