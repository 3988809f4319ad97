"""Field-level data model: a discretized manifold and structure fields on it.

The underlying manifold is modelled as a finite set of weighted sample
points whose fibers are independent; integral functionals become weighted
sums over the points.  A field assigns one matrix per point: almost
complex operators, tangent directions, symplectic forms, or metrics.
Closedness of the symplectic form is a statement about the manifold
coordinates, not the fibers, and is outside this model's scope.

Field files are JSON documents with the layout::

    {"dim": 4,
     "points": [{"id": 0, "weight": 1.0,
                 "metric": [...],    # row-major dim*dim floats, omitted = identity
                 "J": [...], "W": [...], "K": [...]},
                ...]}

The optional matrices J, W, K and metric must each be present at every
point or at none.  A K entry requires a J entry (tangent vectors need a
base structure).  Floats are written with shortest round-trip repr, so a
save/load cycle is lossless.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .charts import random_anticommuting, standard_acs
from .errors import (
    AnticommutationViolation,
    DimensionMismatch,
    IoError,
    NotAssociated,
)
from .fiber import DEFAULT_COND_CAP, FiberMetric, g_adjoint, max_abs

TANGENT_TOL = 1e-10


def _as_stack(ops, dim: int, npoints: int, name: str) -> np.ndarray:
    arr = np.asarray(ops, dtype=float)
    if arr.shape != (npoints, dim, dim):
        raise DimensionMismatch(
            f"{name} must have shape {(npoints, dim, dim)}, got {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} entries must be finite")
    return arr


@dataclass
class SampleSpace:
    """Weighted sample points with a base fiber metric at each.

    Instances are treated as immutable once constructed.  ``metrics`` may
    be omitted, in which case every point carries the identity metric.
    """

    dim: int
    weights: np.ndarray
    metrics: np.ndarray | None = None
    point_ids: tuple = None

    def __post_init__(self):
        if self.dim < 2 or self.dim % 2:
            raise DimensionMismatch(
                f"fiber dimension must be even and >= 2, got {self.dim}")
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if w.size == 0:
            raise ValueError("a sample space needs at least one point")
        if not np.isfinite(w).all() or not (w > 0).all():
            raise ValueError("weights must be finite and strictly positive")
        self.weights = w
        if self.metrics is None:
            self.metrics = np.tile(np.eye(self.dim), (w.size, 1, 1))
        else:
            self.metrics = _as_stack(self.metrics, self.dim, w.size, "metrics")
            for i in range(w.size):
                FiberMetric(self.metrics[i])  # raises unless SPD
        if self.point_ids is None:
            self.point_ids = tuple(range(w.size))
        else:
            self.point_ids = tuple(self.point_ids)
            if len(self.point_ids) != w.size:
                raise DimensionMismatch(
                    f"{len(self.point_ids)} point ids for {w.size} weights")

    @property
    def npoints(self) -> int:
        return self.weights.size

    def metric(self, i: int) -> FiberMetric:
        return FiberMetric(self.metrics[i])


@dataclass
class AcsField:
    """One almost complex structure candidate per sample point.

    Construction checks shape and finiteness only; whether each operator
    actually squares to -identity is the job of :func:`validate_acs`, so
    that defective input data can be loaded and then diagnosed.
    """

    space: SampleSpace
    ops: np.ndarray

    def __post_init__(self):
        self.ops = _as_stack(self.ops, self.space.dim, self.space.npoints, "ops")


@dataclass
class TangentField:
    """A tangent direction at a structure field: per-point matrices
    anticommuting with the base operators (checked at construction)."""

    space: SampleSpace
    base: AcsField
    ops: np.ndarray
    tol: float = TANGENT_TOL

    def __post_init__(self):
        self.ops = _as_stack(self.ops, self.space.dim, self.space.npoints, "ops")
        if self.base.space.npoints != self.space.npoints or self.base.space.dim != self.space.dim:
            raise DimensionMismatch("tangent field and base field live on different spaces")
        worst = 0.0
        for i in range(self.space.npoints):
            r = max_abs(self.ops[i] @ self.base.ops[i] + self.base.ops[i] @ self.ops[i])
            worst = max(worst, r)
        if worst > self.tol:
            raise AnticommutationViolation(
                f"tangent ops fail to anticommute with the base, residual {worst:.3e}")


@dataclass
class SymplecticField:
    """A nondegenerate antisymmetric form per point."""

    space: SampleSpace
    forms: np.ndarray
    cond_cap: float = DEFAULT_COND_CAP

    def __post_init__(self):
        self.forms = _as_stack(self.forms, self.space.dim, self.space.npoints, "forms")
        for i in range(self.space.npoints):
            w = self.forms[i]
            if max_abs(w + w.T) > 1e-12:
                raise ValueError(f"form at point {self.space.point_ids[i]} is not antisymmetric")
            cond = np.linalg.cond(w)
            if not np.isfinite(cond) or cond > self.cond_cap:
                raise ValueError(f"form at point {self.space.point_ids[i]} is degenerate")


@dataclass
class MetricField:
    """A symmetric positive-definite metric per point."""

    space: SampleSpace
    metrics: np.ndarray

    def __post_init__(self):
        self.metrics = _as_stack(self.metrics, self.space.dim, self.space.npoints, "metrics")
        for i in range(self.space.npoints):
            FiberMetric(self.metrics[i])


@dataclass
class FieldReport:
    """Outcome of a field validator.

    ``max_residual`` is the worst identity residual over all points; extra
    conditions (positivity, orientation) contribute to ``passed`` and are
    recorded per point.
    """

    name: str
    passed: bool
    max_residual: float
    tolerance: float
    worst_point: object = None
    per_point: list = field(default_factory=list)


def validate_acs(j: AcsField, tol: float = 1e-10) -> FieldReport:
    """Check J^2 = -identity at every point."""
    eye = np.eye(j.space.dim)
    per_point = []
    worst, worst_id = -1.0, None
    for i in range(j.space.npoints):
        r = max_abs(j.ops[i] @ j.ops[i] + eye)
        pid = j.space.point_ids[i]
        per_point.append({"id": pid, "residual": r, "passed": r <= tol})
        if r > worst:
            worst, worst_id = r, pid
    return FieldReport("acs", worst <= tol, worst, tol, worst_id, per_point)


def sym_antisym_split(k: TangentField, g: MetricField) -> tuple[TangentField, TangentField]:
    """Split a tangent field into metric-symmetric and antisymmetric parts.

    P = (K + K^sharp)/2 and L = K - P, so P + L reproduces K to one
    rounding of the final subtraction (exactly, at dim 2).  Both parts
    anticommute with the base whenever the base operators are skew-adjoint
    for g.
    """
    if g.space.npoints != k.space.npoints or g.space.dim != k.space.dim:
        raise DimensionMismatch("metric field and tangent field live on different spaces")
    sym = np.empty_like(k.ops)
    for i in range(k.space.npoints):
        sharp = g_adjoint(k.ops[i], FiberMetric(g.metrics[i]))
        sym[i] = 0.5 * (k.ops[i] + sharp)
    p = TangentField(k.space, k.base, sym, k.tol)
    l = TangentField(k.space, k.base, k.ops - sym, k.tol)
    return p, l


def tangent_class(a: TangentField, g: MetricField, tol: float = 1e-10) -> str:
    """Classify a tangent field as 'symmetric', 'antisymmetric' or 'mixed'."""
    rs, ra = 0.0, 0.0
    for i in range(a.space.npoints):
        sharp = g_adjoint(a.ops[i], FiberMetric(g.metrics[i]))
        rs = max(rs, max_abs(a.ops[i] - sharp))
        ra = max(ra, max_abs(a.ops[i] + sharp))
    if rs <= tol:
        return "symmetric"
    if ra <= tol:
        return "antisymmetric"
    return "mixed"


def validate_associated(j: AcsField, w: SymplecticField, probes=None,
                        tol: float = 1e-10, pos_tol: float = 1e-12) -> FieldReport:
    """Check that j is positively associated with w at every point.

    Invariance means J^T W J = W; positivity means the symmetric part of
    W J is positive definite (its smallest eigenvalue exceeds ``pos_tol``).
    ``probes`` may give per-point lists of vectors; the quadratic witness
    values x . (W J x) are then recorded in the report.
    """
    if w.space.npoints != j.space.npoints or w.space.dim != j.space.dim:
        raise DimensionMismatch("form field and structure field live on different spaces")
    per_point = []
    worst, worst_id = -1.0, None
    all_ok = True
    for i in range(j.space.npoints):
        ji, wi = j.ops[i], w.forms[i]
        r = max_abs(ji.T @ wi @ ji - wi)
        prod = wi @ ji
        min_eig = float(np.linalg.eigvalsh(0.5 * (prod + prod.T))[0])
        ok = r <= tol and min_eig > pos_tol
        pid = j.space.point_ids[i]
        entry = {"id": pid, "residual": r, "min_eig": min_eig, "passed": ok}
        if probes is not None:
            entry["witnesses"] = [float(np.asarray(x) @ prod @ np.asarray(x))
                                  for x in probes[i]]
        per_point.append(entry)
        all_ok = all_ok and ok
        if r > worst:
            worst, worst_id = r, pid
    return FieldReport("associated", all_ok, worst, tol, worst_id, per_point)


def associated_metric(j: AcsField, w: SymplecticField, tol: float = 1e-10) -> MetricField:
    """The metric G = W J induced by a positively associated structure.

    Raises :class:`NotAssociated` when the pair fails
    :func:`validate_associated`; symmetry and positivity of the result are
    then automatic.
    """
    report = validate_associated(j, w, tol=tol)
    if not report.passed:
        raise NotAssociated(
            f"structure is not positively associated with the form "
            f"(worst point {report.worst_point}, residual {report.max_residual:.3e})")
    stack = np.empty_like(j.ops)
    for i in range(j.space.npoints):
        stack[i] = w.forms[i] @ j.ops[i]
    return MetricField(j.space, stack)


def orientation_marker(j) -> int:
    """Sign of the determinant of a greedily built adapted basis.

    Starting from the standard vectors, each new basis direction is the
    Gram-Schmidt residual u of the first standard vector outside the span
    so far, immediately followed by J u.  For any J with J^2 = -identity
    the resulting frame is nondegenerate, so the sign is well defined.
    """
    m = np.asarray(j, dtype=float)
    n = m.shape[0]
    cols: list[np.ndarray] = []
    for c in range(n):
        if len(cols) == n:
            break
        e = np.zeros(n)
        e[c] = 1.0
        if cols:
            q, _ = np.linalg.qr(np.column_stack(cols))
            e = e - q @ (q.T @ e)
        norm = float(np.linalg.norm(e))
        if norm < 1e-8:
            continue
        u = e / norm
        cols.append(u)
        cols.append(m @ u)
    det = float(np.linalg.det(np.column_stack(cols)))
    return 1 if det > 0 else -1


def validate_orthogonal(j: AcsField, g: MetricField, j_ref: AcsField,
                        tol: float = 1e-10) -> FieldReport:
    """Check that j is g-orthogonal and matches the reference orientation.

    Orthogonality g(JX, JY) = g(X, Y) reads J^sharp J = identity; combined
    with J^2 = -identity it says J is g-skew.  The orientation marker at
    each point must equal that of the reference structure.
    """
    if g.space.npoints != j.space.npoints or j_ref.space.npoints != j.space.npoints:
        raise DimensionMismatch("fields live on different spaces")
    eye = np.eye(j.space.dim)
    per_point = []
    worst, worst_id = -1.0, None
    all_ok = True
    for i in range(j.space.npoints):
        sharp = g_adjoint(j.ops[i], FiberMetric(g.metrics[i]))
        r = max_abs(sharp @ j.ops[i] - eye)
        marker = orientation_marker(j.ops[i])
        ref_marker = orientation_marker(j_ref.ops[i])
        ok = r <= tol and marker == ref_marker
        pid = j.space.point_ids[i]
        per_point.append({"id": pid, "residual": r, "orientation": marker,
                          "reference_orientation": ref_marker, "passed": ok})
        all_ok = all_ok and ok
        if r > worst:
            worst, worst_id = r, pid
    return FieldReport("orthogonal", all_ok, worst, tol, worst_id, per_point)


# ---------------------------------------------------------------------------
# constructors used by checks, the CLI and tests

def random_sample_space(rng: np.random.Generator, dim: int, points: int = 8) -> SampleSpace:
    """Sample space with uniform(0.5, 1.5) weights and identity metrics."""
    if points < 1:
        raise ValueError("need at least one point")
    return SampleSpace(dim, rng.uniform(0.5, 1.5, size=points))


def standard_acs_field(space: SampleSpace) -> AcsField:
    """The standard structure at every point."""
    return AcsField(space, np.tile(standard_acs(space.dim), (space.npoints, 1, 1)))


def standard_symplectic_field(space: SampleSpace) -> SymplecticField:
    """The form making the standard structure positively associated
    under the identity metric: W = J0^T per point."""
    return SymplecticField(space, np.tile(standard_acs(space.dim).T,
                                          (space.npoints, 1, 1)))


def identity_metric_field(space: SampleSpace) -> MetricField:
    return MetricField(space, np.tile(np.eye(space.dim), (space.npoints, 1, 1)))


def random_tangent_field(rng: np.random.Generator, j: AcsField, *,
                         part: str | None = None, bound: float = 0.9) -> TangentField:
    """Independent random anticommuting direction at every point."""
    stack = np.empty_like(j.ops)
    for i in range(j.space.npoints):
        stack[i] = random_anticommuting(
            rng, j.ops[i], metric=j.space.metric(i), part=part, bound=bound)
    return TangentField(j.space, j, stack)


# ---------------------------------------------------------------------------
# serialization

@dataclass
class FieldBundle:
    """A sample space plus whichever fields a file carried."""

    space: SampleSpace
    J: AcsField | None = None
    W: SymplecticField | None = None
    K: TangentField | None = None


def _matrix_to_list(m: np.ndarray) -> list[float]:
    return [float(x) for x in m.reshape(-1)]


def _matrix_from_list(values, dim: int, name: str, pid) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.size != dim * dim:
        raise IoError(f"matrix {name!r} at point {pid!r} has {arr.size} entries, "
                      f"expected {dim * dim}")
    return arr.reshape(dim, dim)


def save_bundle(bundle: FieldBundle, path) -> None:
    """Write a field bundle to a JSON document (see the module docstring)."""
    space = bundle.space
    points = []
    eye = np.eye(space.dim)
    for i in range(space.npoints):
        entry = {"id": space.point_ids[i], "weight": float(space.weights[i])}
        if not np.array_equal(space.metrics[i], eye):
            entry["metric"] = _matrix_to_list(space.metrics[i])
        if bundle.J is not None:
            entry["J"] = _matrix_to_list(bundle.J.ops[i])
        if bundle.W is not None:
            entry["W"] = _matrix_to_list(bundle.W.forms[i])
        if bundle.K is not None:
            entry["K"] = _matrix_to_list(bundle.K.ops[i])
        points.append(entry)
    doc = {"dim": space.dim, "points": points}
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    except OSError as exc:
        raise IoError(f"cannot write field file {path}: {exc}") from None


def load_bundle(path) -> FieldBundle:
    """Read a field bundle written by :func:`save_bundle`.

    Malformed documents (unparseable JSON, missing keys, ragged matrix
    data, fields present at some points only) raise :class:`IoError`.
    Tangent data that fails to anticommute with its base raises
    :class:`AnticommutationViolation`.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read field file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise IoError(f"field file {path} is not valid JSON: {exc}") from None

    if not isinstance(doc, dict) or "dim" not in doc or "points" not in doc:
        raise IoError(f"field file {path} lacks the required dim/points keys")
    dim = doc["dim"]
    points = doc["points"]
    if not isinstance(dim, int) or not isinstance(points, list) or not points:
        raise IoError(f"field file {path} has a malformed dim or points entry")

    ids, weights, metrics = [], [], []
    stacks: dict[str, list] = {"J": [], "W": [], "K": []}
    eye = np.eye(dim)
    for entry in points:
        if not isinstance(entry, dict) or "id" not in entry or "weight" not in entry:
            raise IoError(f"field file {path} has a point without id or weight")
        pid = entry["id"]
        ids.append(pid)
        weights.append(entry["weight"])
        metrics.append(_matrix_from_list(entry["metric"], dim, "metric", pid)
                       if "metric" in entry else eye)
        for key in stacks:
            if key in entry:
                stacks[key].append(_matrix_from_list(entry[key], dim, key, pid))
    for key, stack in stacks.items():
        if stack and len(stack) != len(points):
            raise IoError(f"field {key!r} is present at some points only")

    try:
        space = SampleSpace(dim, np.asarray(weights), np.asarray(metrics), tuple(ids))
    except (DimensionMismatch, ValueError) as exc:
        raise IoError(f"field file {path} holds an invalid sample space: {exc}") from None

    j_field = AcsField(space, np.asarray(stacks["J"])) if stacks["J"] else None
    w_field = None
    if stacks["W"]:
        try:
            w_field = SymplecticField(space, np.asarray(stacks["W"]))
        except ValueError as exc:
            raise IoError(f"field file {path} holds an invalid form field: {exc}") from None
    k_field = None
    if stacks["K"]:
        if j_field is None:
            raise IoError("tangent data K requires a base field J in the same file")
        k_field = TangentField(space, j_field, np.asarray(stacks["K"]))
    return FieldBundle(space, j_field, w_field, k_field)
