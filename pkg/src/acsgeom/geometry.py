"""Geometry of the structure space: metric, 2-form, connection, curvature,
geodesics.

The space of structures carries the integral pairing (A, B) = sum of
w_i tr(A_i B_i) over the sample points, a compatible almost complex
structure A -> A J, and the 2-form Omega(A, B) = (A J, B).  In the
rational chart at a base field all three have closed forms in the
coordinate K, as do the Levi-Civita connection, its curvature and its
geodesics.  All sums are accumulated left to right in point order, so
results are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charts import CayleyCoordinate
from .errors import DegeneratePlane, DimensionMismatch
from .fiber import DEFAULT_COND_CAP, mat_inv_guarded, mat_tanh_half, mat_exp
from .structures import AcsField, SampleSpace, TangentField


def _same_space(*fields) -> None:
    first = fields[0].space
    for f in fields[1:]:
        if f.space.dim != first.dim or f.space.npoints != first.npoints:
            raise DimensionMismatch("fields live on different sample spaces")


@dataclass
class ChartField:
    """A point of the field-level rational chart: base structure field plus
    a coordinate field K (valid per point, checked at construction)."""

    space: SampleSpace
    base: AcsField
    K: TangentField
    cond_cap: float = DEFAULT_COND_CAP

    def __post_init__(self):
        _same_space(self.base, self.K)
        if self.base.space.dim != self.space.dim or self.base.space.npoints != self.space.npoints:
            raise DimensionMismatch("chart fields live on different sample spaces")
        for i in range(self.space.npoints):
            CayleyCoordinate(self.base.ops[i], self.K.ops[i], self.cond_cap)

    def resolvents(self) -> np.ndarray:
        """(1 - K^2)^{-1} per point, guarded."""
        out = np.empty_like(self.K.ops)
        eye = np.eye(self.space.dim)
        for i in range(self.space.npoints):
            k = self.K.ops[i]
            out[i] = mat_inv_guarded(eye - k @ k, self.cond_cap)
        return out


def chart_origin(j: AcsField, cond_cap: float = DEFAULT_COND_CAP) -> ChartField:
    """The chart centered at j with coordinate zero."""
    zero = TangentField(j.space, j, np.zeros_like(j.ops))
    return ChartField(j.space, j, zero, cond_cap)


def shifted(c: ChartField, a: TangentField, h: float) -> ChartField:
    """The chart point with coordinate K + h a (used by difference stencils)."""
    moved = TangentField(c.space, c.base, c.K.ops + float(h) * a.ops, c.K.tol)
    return ChartField(c.space, c.base, moved, c.cond_cap)


# ---------------------------------------------------------------------------
# ambient functionals (fields of structures and tangents, no chart)

def ambient_inner(j: AcsField, a: TangentField, b: TangentField) -> float:
    """(A, B) at J: sum of w_i tr(A_i B_i)."""
    _same_space(j, a, b)
    total = 0.0
    for i in range(a.space.npoints):
        total += float(a.space.weights[i]) * float(np.trace(a.ops[i] @ b.ops[i]))
    return total


def acs_on_tangent(a: TangentField, j: AcsField) -> TangentField:
    """The almost complex structure of the ambient space: A -> A J."""
    _same_space(a, j)
    stack = np.empty_like(a.ops)
    for i in range(a.space.npoints):
        stack[i] = a.ops[i] @ j.ops[i]
    return TangentField(a.space, j, stack, a.tol)


def ambient_omega(j: AcsField, a: TangentField, b: TangentField) -> float:
    """Omega(A, B) at J: sum of w_i tr(A_i J_i B_i)."""
    _same_space(j, a, b)
    total = 0.0
    for i in range(a.space.npoints):
        total += float(a.space.weights[i]) * float(
            np.trace(a.ops[i] @ j.ops[i] @ b.ops[i]))
    return total


# ---------------------------------------------------------------------------
# chart expressions

def chart_inner(c: ChartField, a: TangentField, b: TangentField) -> float:
    """The pairing in chart coordinates:
    4 sum of w_i tr((1-K^2)^{-1} A (1-K^2)^{-1} B)."""
    _same_space(c.K, a, b)
    res = c.resolvents()
    total = 0.0
    for i in range(c.space.npoints):
        total += float(c.space.weights[i]) * 4.0 * float(
            np.trace(res[i] @ a.ops[i] @ res[i] @ b.ops[i]))
    return total


def chart_omega(c: ChartField, a: TangentField, b: TangentField) -> float:
    """The 2-form in chart coordinates:
    4 sum of w_i tr((1-K^2)^{-1} A J0 (1-K^2)^{-1} B)."""
    _same_space(c.K, a, b)
    res = c.resolvents()
    total = 0.0
    for i in range(c.space.npoints):
        total += float(c.space.weights[i]) * 4.0 * float(
            np.trace(res[i] @ a.ops[i] @ c.base.ops[i] @ res[i] @ b.ops[i]))
    return total


def christoffel(c: ChartField, a: TangentField, b: TangentField) -> TangentField:
    """Connection coefficients at the chart point c for constant fields:
    Gamma(A, B) = A K (1-K^2)^{-1} B + B K (1-K^2)^{-1} A."""
    _same_space(c.K, a, b)
    res = c.resolvents()
    stack = np.empty_like(a.ops)
    for i in range(c.space.npoints):
        k = c.K.ops[i]
        stack[i] = a.ops[i] @ k @ res[i] @ b.ops[i] + b.ops[i] @ k @ res[i] @ a.ops[i]
    return TangentField(c.space, c.base, stack, 1e-9)


def curvature(c: ChartField, a: TangentField, b: TangentField,
              d: TangentField) -> TangentField:
    """Curvature in chart coordinates:
    R(A, B) D = -(1-K^2) [[X, Y], Z] with X = (1-K^2)^{-1} A and so on."""
    _same_space(c.K, a, b, d)
    res = c.resolvents()
    eye = np.eye(c.space.dim)
    stack = np.empty_like(a.ops)
    for i in range(c.space.npoints):
        k = c.K.ops[i]
        x, y, z = res[i] @ a.ops[i], res[i] @ b.ops[i], res[i] @ d.ops[i]
        xy = x @ y - y @ x
        stack[i] = -(eye - k @ k) @ (xy @ z - z @ xy)
    return TangentField(c.space, c.base, stack, 1e-9)


def sectional_numerator(c: ChartField, a: TangentField, b: TangentField) -> float:
    """(R(A,B)B, A) in the chart pairing."""
    return chart_inner(c, curvature(c, a, b, b), a)


def gram_denominator(c: ChartField, a: TangentField, b: TangentField) -> float:
    """(A,A)(B,B) - (A,B)^2 in the chart pairing."""
    aa = chart_inner(c, a, a)
    bb = chart_inner(c, b, b)
    ab = chart_inner(c, a, b)
    return aa * bb - ab * ab

def sectional_curvature(c: ChartField, a: TangentField, b: TangentField,
                        degenerate_tol: float = 1e-10) -> float:
    """Sectional curvature of the plane spanned by a and b.

    Raises :class:`DegeneratePlane` when the Gram determinant is smaller
    than ``degenerate_tol`` in absolute value; the pairing is indefinite,
    so near-null planes have no meaningful sectional curvature.
    """
    denom = gram_denominator(c, a, b)
    if abs(denom) < degenerate_tol:
        raise DegeneratePlane(
            f"Gram determinant {denom:.3e} is below {degenerate_tol:.1e}")
    return sectional_numerator(c, a, b) / denom


# ---------------------------------------------------------------------------
# geodesics

def geodesic_chart(a: TangentField, t: float) -> TangentField:
    """Chart coordinate of the geodesic through the base with velocity a:
    K(t) = tanh((t/2) A) per point.

    The curve satisfies K'' + Gamma(K', K') = 0 with Gamma the bilinear
    connection term returned by :func:`christoffel`.
    """
    stack = np.empty_like(a.ops)
    for i in range(a.space.npoints):
        stack[i] = mat_tanh_half(a.ops[i], t)
    return TangentField(a.space, a.base, stack, a.tol)


def geodesic_ambient(j0: AcsField, a: TangentField, t: float) -> AcsField:
    """The same geodesic as a structure field: J(t) = J0 exp(t A)."""
    _same_space(j0, a)
    stack = np.empty_like(a.ops)
    for i in range(a.space.npoints):
        stack[i] = j0.ops[i] @ mat_exp(float(t) * a.ops[i])
    return AcsField(a.space, stack)
