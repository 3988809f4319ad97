"""Numerical certification of the geometry: finite-difference oracles and
checkers for the chart bijection, the pushforward identity, closedness of
the 2-form, curvature, geodesics, metric structure, definiteness on the
associated and orthogonal submanifolds, and their totally geodesic
property.

Every checker returns a :class:`CheckReport` whose headline residual and
tolerance are those of its worst sub-check in relative terms, so
``passed`` is equivalent to ``max_residual <= tolerance`` while the
individual sub-checks (each with its own tolerance) are kept in
``details``.  Bound-type assertions (eigenvalue signs, convergence-factor
windows) are encoded as distance-outside-the-allowed-region against a
zero tolerance.

Determinism: every random draw comes from a generator seeded with the
(master seed, checker name, dim, case index) tuple, so identical
configurations produce bitwise-identical reports.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

from .charts import (
    CayleyCoordinate,
    acs_to_cayley,
    anticommute_project,
    cayley_to_acs,
    pushforward,
    random_anticommuting,
    standard_acs,
)
from .errors import ConfigError
from .fiber import mat_inv_guarded, max_abs
from .geometry import (
    ChartField,
    acs_on_tangent,
    ambient_inner,
    ambient_omega,
    chart_inner,
    chart_omega,
    chart_origin,
    christoffel,
    curvature,
    geodesic_ambient,
    geodesic_chart,
    shifted,
)
from .structures import (
    AcsField,
    FieldBundle,
    FieldReport,
    TangentField,
    identity_metric_field,
    random_sample_space,
    random_tangent_field,
    standard_acs_field,
    standard_symplectic_field,
    validate_acs,
    validate_associated,
    validate_orthogonal,
)

CHECK_NAMES = (
    "cayley",
    "theorem1",
    "theorem2",
    "geodesics",
    "curvature_fd",
    "metric_structure",
    "totally_geodesic",
    "signature",
)


@dataclass
class CheckReport:
    """Outcome of one checker.

    ``max_residual`` and ``tolerance`` belong to the binding sub-check;
    ``passed`` holds iff max_residual <= tolerance, which by construction
    is equivalent to every sub-check in ``details`` passing.
    """

    name: str
    passed: bool
    max_residual: float
    tolerance: float
    seed: int
    dims: tuple
    params: dict = field(default_factory=dict)
    details: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return _plain({
            "name": self.name,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "dims": list(self.dims),
            "params": self.params,
            "details": self.details,
        })


def _plain(value):
    """Recursively convert numpy scalars and containers to JSON-safe types."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    return value


def _rng(seed: int, name: str, *extra: int) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(name.encode("ascii")), *extra])


def _ratio(residual: float, tolerance: float) -> float:
    if tolerance > 0.0:
        return residual / tolerance
    return 0.0 if residual <= 0.0 else float("inf")


def _compose(name, seed, dims, params, subchecks) -> CheckReport:
    """Merge sub-checks into one report, keeping the binding constraint."""
    for sub in subchecks:
        sub["passed"] = _ratio(sub["residual"], sub["tolerance"]) <= 1.0
    worst = max(subchecks, key=lambda s: _ratio(s["residual"], s["tolerance"]))
    passed = all(s["passed"] for s in subchecks)
    return CheckReport(name, passed, float(worst["residual"]),
                       float(worst["tolerance"]), seed, tuple(dims),
                       _plain(params), _plain(subchecks))


def _outside(value: float, lo: float, hi: float) -> float:
    """Distance of value from the closed interval [lo, hi] (0 inside)."""
    return max(0.0, lo - value, value - hi)


def fd_directional(f, c: ChartField, a: TangentField, h: float) -> float:
    """Central difference of a scalar chart functional along a:
    (f(K + hA) - f(K - hA)) / (2h), error O(h^2) for smooth f."""
    if not h > 0:
        raise ValueError("step size h must be positive")
    return (f(shifted(c, a, h)) - f(shifted(c, a, -h))) / (2.0 * float(h))


# ---------------------------------------------------------------------------
# checkers

def check_cayley(seed: int = 0, dims=(2, 4, 6), cases: int = 100,
                 tolerance: float = 1e-9, acs_tolerance: float = 1e-10,
                 bound: float = 0.9) -> CheckReport:
    """Chart bijection: coordinate -> structure -> coordinate round trip,
    and validity of every produced structure."""
    subs = []
    for dim in dims:
        j0 = standard_acs(dim)
        eye = np.eye(dim)
        r_round, r_acs = 0.0, 0.0
        for case in range(cases):
            rng = _rng(seed, "cayley", dim, case)
            k = random_anticommuting(rng, j0, bound=bound)
            j = cayley_to_acs(CayleyCoordinate(j0, k))
            r_acs = max(r_acs, max_abs(j @ j + eye))
            r_round = max(r_round, max_abs(acs_to_cayley(j0, j).K - k))
        subs.append({"name": f"roundtrip_dim{dim}", "residual": r_round,
                     "tolerance": tolerance})
        subs.append({"name": f"acs_identity_dim{dim}", "residual": r_acs,
                     "tolerance": acs_tolerance})
    params = {"cases": cases, "bound": bound, "tolerance": tolerance,
              "acs_tolerance": acs_tolerance}
    return _compose("cayley", seed, dims, params, subs)


def check_theorem1(seed: int = 0, dims=(2, 4, 6), cases: int = 100,
                   tolerance: float = 1e-9, bound: float = 0.9) -> CheckReport:
    """Pushforward intertwines the complex structures:
    pushforward(A J0) = pushforward(A) J_K."""
    subs = []
    for dim in dims:
        j0 = standard_acs(dim)
        worst = 0.0
        for case in range(cases):
            rng = _rng(seed, "theorem1", dim, case)
            k = random_anticommuting(rng, j0, bound=bound)
            a = random_anticommuting(rng, j0, bound=bound)
            coord = CayleyCoordinate(j0, k)
            jk = cayley_to_acs(coord)
            r = max_abs(pushforward(coord, a @ j0) - pushforward(coord, a) @ jk)
            worst = max(worst, r)
        subs.append({"name": f"intertwine_dim{dim}", "residual": worst,
                     "tolerance": tolerance})
    params = {"cases": cases, "bound": bound, "tolerance": tolerance}
    return _compose("theorem1", seed, dims, params, subs)


def _omega_terms(c: ChartField, a0: TangentField, a1: TangentField,
                 a2: TangentField, h: float) -> tuple[float, float, float]:
    t0 = fd_directional(lambda cc: chart_omega(cc, a1, a2), c, a0, h)
    t1 = fd_directional(lambda cc: chart_omega(cc, a0, a2), c, a1, h)
    t2 = fd_directional(lambda cc: chart_omega(cc, a0, a1), c, a2, h)
    return t0, t1, t2


def _omega_ray_derivative(c: ChartField, a0: TangentField, a1: TangentField,
                          a2: TangentField, t: float) -> float:
    """Exact d/dt of chart_omega along K = t a0, from the resolvent
    derivative d/dt (1 - t^2 A^2)^{-1} = S (2t A^2) S."""
    total = 0.0
    eye = np.eye(c.space.dim)
    for i in range(c.space.npoints):
        x = a0.ops[i]
        s = mat_inv_guarded(eye - (t * x) @ (t * x), c.cond_cap)
        ds = s @ ((2.0 * t) * (x @ x)) @ s
        j0 = c.base.ops[i]
        total += float(c.space.weights[i]) * 4.0 * (
            float(np.trace(ds @ a1.ops[i] @ j0 @ s @ a2.ops[i]))
            + float(np.trace(s @ a1.ops[i] @ j0 @ ds @ a2.ops[i])))
    return total


def check_theorem2(seed: int = 0, dims=(2, 4), cases: int = 3, points: int = 8,
                   h: float = 1e-4, tolerance: float = 1e-6,
                   factor_window=(2.5, 6.0), ray_t: float = 0.3,
                   bound: float = 0.9) -> CheckReport:
    """Closedness of the 2-form: every directional-derivative term of
    d Omega vanishes at the chart center, both at the reference structure
    and after recentering at a random chart point; plus an order-2
    convergence check of the difference stencil against the analytic
    derivative along a coordinate ray."""
    subs = []
    for dim in dims:
        term_worst, alt_worst = 0.0, 0.0
        best_rh, best_factor = -1.0, None
        for case in range(cases):
            rng = _rng(seed, "theorem2", dim, case)
            space = random_sample_space(rng, dim, points)
            j0f = standard_acs_field(space)
            a0, a1, a2 = (random_tangent_field(rng, j0f, bound=bound)
                          for _ in range(3))
            c0 = chart_origin(j0f)
            t0, t1, t2 = _omega_terms(c0, a0, a1, a2, h)
            term_worst = max(term_worst, abs(t0), abs(t1), abs(t2))
            alt_worst = max(alt_worst, abs(t0 - t1 + t2))

            # recenter: the same statement in the chart of a random J_K
            k1 = random_tangent_field(rng, j0f, bound=bound)
            j1_ops = np.stack([cayley_to_acs(CayleyCoordinate(j0f.ops[i], k1.ops[i]))
                               for i in range(space.npoints)])
            j1f = AcsField(space, j1_ops)
            b0, b1, b2 = (random_tangent_field(rng, j1f, bound=bound)
                          for _ in range(3))
            c1 = chart_origin(j1f)
            s0, s1, s2 = _omega_terms(c1, b0, b1, b2, h)
            term_worst = max(term_worst, abs(s0), abs(s1), abs(s2))
            alt_worst = max(alt_worst, abs(s0 - s1 + s2))

            # order-2 convergence, measured against the analytic value on
            # the off-center ray K = t a0 (the stencil at the center is
            # exactly zero and carries no signal)
            half = random_tangent_field(rng, j0f, bound=0.5)
            exact = _omega_ray_derivative(c0, half, a1, a2, ray_t)

            def along_ray(step: float) -> float:
                ray = TangentField(space, j0f, ray_t * half.ops)
                cc = ChartField(space, j0f, ray)
                return fd_directional(lambda ch: chart_omega(ch, a1, a2),
                                      cc, half, step)

            r_h = abs(along_ray(h) - exact)
            r_h2 = abs(along_ray(h / 2.0) - exact)
            if r_h > best_rh:
                best_rh = r_h
                best_factor = r_h / r_h2 if r_h2 > 0.0 else float("inf")
        subs.append({"name": f"terms_dim{dim}", "residual": term_worst,
                     "tolerance": tolerance})
        subs.append({"name": f"alternating_sum_dim{dim}", "residual": alt_worst,
                     "tolerance": tolerance})
        subs.append({"name": f"fd_order_dim{dim}",
                     "residual": _outside(best_factor, *factor_window),
                     "tolerance": 0.0, "factor": best_factor,
                     "window": list(factor_window)})
    params = {"cases": cases, "points": points, "h": h, "bound": bound,
              "tolerance": tolerance, "factor_window": list(factor_window),
              "ray_t": ray_t}
    return _compose("theorem2", seed, dims, params, subs)


def check_geodesics(seed: int = 0, dims=(2, 4), cases: int = 3, points: int = 8,
                    t_grid=(0.2, 0.6, 1.0), h: float = 1e-4,
                    tolerance: float = 1e-6, chart_tolerance: float = 1e-9,
                    t_max: float = 2.0, t_steps: int = 9,
                    bound: float = 0.9) -> CheckReport:
    """Geodesic equation K'' + Gamma(K', K') = 0 by central differences,
    and chart/ambient consistency of the two geodesic descriptions."""
    full_grid = np.linspace(0.0, t_max, t_steps)
    subs = []
    for dim in dims:
        ode_worst, chart_worst = 0.0, 0.0
        for case in range(cases):
            rng = _rng(seed, "geodesics", dim, case)
            space = random_sample_space(rng, dim, points)
            j0f = standard_acs_field(space)
            a = random_tangent_field(rng, j0f, bound=bound)
            for t in t_grid:
                kp = geodesic_chart(a, t + h)
                kc = geodesic_chart(a, t)
                km = geodesic_chart(a, t - h)
                kdot = TangentField(space, j0f, (kp.ops - km.ops) / (2.0 * h), 1e-9)
                kdd = (kp.ops - 2.0 * kc.ops + km.ops) / h**2
                gamma = christoffel(ChartField(space, j0f, kc), kdot, kdot)
                ode_worst = max(ode_worst, max_abs(kdd + gamma.ops))
            for t in full_grid:
                jt = geodesic_ambient(j0f, a, float(t))
                kt = geodesic_chart(a, float(t))
                for i in range(space.npoints):
                    back = acs_to_cayley(j0f.ops[i], jt.ops[i]).K
                    chart_worst = max(chart_worst, max_abs(back - kt.ops[i]))
        subs.append({"name": f"ode_residual_dim{dim}", "residual": ode_worst,
                     "tolerance": tolerance})
        subs.append({"name": f"chart_ambient_dim{dim}", "residual": chart_worst,
                     "tolerance": chart_tolerance})
    params = {"cases": cases, "points": points, "h": h, "bound": bound,
              "t_grid": list(t_grid), "t_max": t_max, "t_steps": t_steps,
              "tolerance": tolerance, "chart_tolerance": chart_tolerance}
    return _compose("geodesics", seed, dims, params, subs)


def check_curvature_fd(seed: int = 0, dims=(2, 4), cases: int = 3,
                       points: int = 8, h: float = 1e-4,
                       tolerance: float = 1e-5, k_bound: float = 0.5,
                       bianchi_tolerance: float = 1e-10,
                       origin_tolerance: float = 1e-12,
                       bound: float = 0.9) -> CheckReport:
    """Curvature as the commutator of covariant derivatives, assembled by
    finite differences of the connection, against the closed form; plus
    the exact antisymmetry, first Bianchi, and flat-origin identities.

    The coordinate K is kept at spectral radius <= k_bound so the stepped
    points K +- h A stay deep inside the chart.
    """
    subs = []
    for dim in dims:
        fd_worst = anti_worst = self_worst = bianchi_worst = origin_worst = 0.0
        for case in range(cases):
            rng = _rng(seed, "curvature_fd", dim, case)
            space = random_sample_space(rng, dim, points)
            j0f = standard_acs_field(space)
            k = random_tangent_field(rng, j0f, bound=k_bound)
            a, b, d = (random_tangent_field(rng, j0f, bound=bound) for _ in range(3))
            c = ChartField(space, j0f, k)
            closed = curvature(c, a, b, d)

            def grad(direction: TangentField, x: TangentField, y: TangentField):
                plus = christoffel(shifted(c, direction, h), x, y).ops
                minus = christoffel(shifted(c, direction, -h), x, y).ops
                return (plus - minus) / (2.0 * h)

            term_a = grad(a, b, d) + christoffel(c, a, christoffel(c, b, d)).ops
            term_b = grad(b, a, d) + christoffel(c, b, christoffel(c, a, d)).ops
            fd_worst = max(fd_worst, max_abs(term_a - term_b - closed.ops))
            anti_worst = max(anti_worst, max_abs(curvature(c, b, a, d).ops + closed.ops))
            self_worst = max(self_worst, max_abs(curvature(c, a, a, d).ops))
            bianchi_worst = max(bianchi_worst, max_abs(
                closed.ops + curvature(c, b, d, a).ops + curvature(c, d, a, b).ops))

            c0 = chart_origin(j0f)
            flat = curvature(c0, a, b, d)
            for i in range(space.npoints):
                ab = a.ops[i] @ b.ops[i] - b.ops[i] @ a.ops[i]
                nested = ab @ d.ops[i] - d.ops[i] @ ab
                origin_worst = max(origin_worst, max_abs(flat.ops[i] + nested))
        subs.append({"name": f"fd_match_dim{dim}", "residual": fd_worst,
                     "tolerance": tolerance})
        subs.append({"name": f"antisymmetry_dim{dim}", "residual": anti_worst,
                     "tolerance": 0.0})
        subs.append({"name": f"self_pair_dim{dim}", "residual": self_worst,
                     "tolerance": 0.0})
        subs.append({"name": f"bianchi_dim{dim}", "residual": bianchi_worst,
                     "tolerance": bianchi_tolerance})
        subs.append({"name": f"origin_closed_form_dim{dim}", "residual": origin_worst,
                     "tolerance": origin_tolerance})
    params = {"cases": cases, "points": points, "h": h, "k_bound": k_bound,
              "bound": bound, "tolerance": tolerance,
              "bianchi_tolerance": bianchi_tolerance,
              "origin_tolerance": origin_tolerance}
    return _compose("curvature_fd", seed, dims, params, subs)


def check_metric_structure(seed: int = 0, dims=(2, 4), cases: int = 3,
                           points: int = 8, h: float = 1e-4,
                           tolerance: float = 1e-6,
                           hermitian_tolerance: float = 1e-10,
                           omega_tolerance: float = 1e-12,
                           chart_ambient_tolerance: float = 1e-9,
                           compat_tolerance: float = 1e-10,
                           k_bound: float = 0.5,
                           bound: float = 0.9) -> CheckReport:
    """Structural identities of the metric, the complex structure and the
    2-form, in ambient and chart form, plus metric compatibility of the
    connection by finite differences (primary tolerance)."""
    subs = []
    for dim in dims:
        r_herm = r_omega = r_ci = r_co = r_compat = r_fd = 0.0
        for case in range(cases):
            rng = _rng(seed, "metric_structure", dim, case)
            space = random_sample_space(rng, dim, points)
            j0f = standard_acs_field(space)
            a = random_tangent_field(rng, j0f, bound=bound)
            b = random_tangent_field(rng, j0f, bound=bound)
            ja = acs_on_tangent(a, j0f)
            jb = acs_on_tangent(b, j0f)
            r_herm = max(r_herm, abs(ambient_inner(j0f, ja, jb)
                                     - ambient_inner(j0f, a, b)))
            r_omega = max(r_omega, abs(ambient_omega(j0f, a, b)
                                       - ambient_inner(j0f, ja, b)))

            # chart expressions against pushforwards at a random chart point
            k = random_tangent_field(rng, j0f, bound=bound)
            c = ChartField(space, j0f, k)
            jk_ops = np.empty_like(j0f.ops)
            astar = np.empty_like(a.ops)
            bstar = np.empty_like(b.ops)
            for i in range(space.npoints):
                coord = CayleyCoordinate(j0f.ops[i], k.ops[i])
                jk_ops[i] = cayley_to_acs(coord)
                astar[i] = pushforward(coord, a.ops[i])
                bstar[i] = pushforward(coord, b.ops[i])
            jkf = AcsField(space, jk_ops)
            astar_f = TangentField(space, jkf, astar, 1e-9)
            bstar_f = TangentField(space, jkf, bstar, 1e-9)
            r_ci = max(r_ci, abs(chart_inner(c, a, b)
                                 - ambient_inner(jkf, astar_f, bstar_f)))
            r_co = max(r_co, abs(chart_omega(c, a, b)
                                 - ambient_omega(jkf, astar_f, bstar_f)))
            r_compat = max(r_compat, abs(chart_omega(c, a, b)
                                         - chart_inner(c, ja, b)))

            # connection compatibility: d_A (B,C) = (Gamma(A,B), C) + (B, Gamma(A,C))
            kf = random_tangent_field(rng, j0f, bound=k_bound)
            cf = ChartField(space, j0f, kf)
            d = random_tangent_field(rng, j0f, bound=bound)
            lhs = fd_directional(lambda ch: chart_inner(ch, b, d), cf, a, h)
            rhs = chart_inner(cf, christoffel(cf, a, b), d) \
                + chart_inner(cf, b, christoffel(cf, a, d))
            r_fd = max(r_fd, abs(lhs - rhs))
        subs.append({"name": f"metric_compat_fd_dim{dim}", "residual": r_fd,
                     "tolerance": tolerance})
        subs.append({"name": f"hermitian_dim{dim}", "residual": r_herm,
                     "tolerance": hermitian_tolerance})
        subs.append({"name": f"omega_is_inner_dim{dim}", "residual": r_omega,
                     "tolerance": omega_tolerance})
        subs.append({"name": f"chart_ambient_inner_dim{dim}", "residual": r_ci,
                     "tolerance": chart_ambient_tolerance})
        subs.append({"name": f"chart_ambient_omega_dim{dim}", "residual": r_co,
                     "tolerance": chart_ambient_tolerance})
        subs.append({"name": f"omega_compat_dim{dim}", "residual": r_compat,
                     "tolerance": compat_tolerance})
    params = {"cases": cases, "points": points, "h": h, "k_bound": k_bound,
              "bound": bound, "tolerance": tolerance,
              "hermitian_tolerance": hermitian_tolerance,
              "omega_tolerance": omega_tolerance,
              "chart_ambient_tolerance": chart_ambient_tolerance,
              "compat_tolerance": compat_tolerance}
    return _compose("metric_structure", seed, dims, params, subs)


def check_totally_geodesic(seed: int = 0, dims=(2, 4), cases: int = 3,
                           points: int = 8, t_max: float = 2.0,
                           t_steps: int = 9, tolerance: float = 1e-9,
                           orthogonal_tolerance: float = 1e-10,
                           bound: float = 0.9) -> CheckReport:
    """Geodesics stay inside the two submanifolds.

    For a metric-symmetric initial velocity the whole geodesic remains
    positively associated with the reference form; for a metric-antisymmetric
    velocity (possible only at dim >= 4, the antisymmetric space is trivial
    at dim 2) it remains orthogonal with the reference orientation.
    """
    grid = np.linspace(0.0, t_max, t_steps)
    subs = []
    for dim in dims:
        assoc_res, min_eig = 0.0, float("inf")
        orth_res, mismatches = 0.0, 0
        for case in range(cases):
            rng = _rng(seed, "totally_geodesic", dim, case)
            space = random_sample_space(rng, dim, points)
            j0f = standard_acs_field(space)
            wf = standard_symplectic_field(space)
            gf = identity_metric_field(space)

            a_sym = random_tangent_field(rng, j0f, part="symmetric", bound=bound)
            for t in grid:
                jt = geodesic_ambient(j0f, a_sym, float(t))
                rep = validate_associated(jt, wf, tol=tolerance)
                assoc_res = max(assoc_res, rep.max_residual)
                min_eig = min(min_eig, *(e["min_eig"] for e in rep.per_point))

            if dim >= 4:
                a_anti = random_tangent_field(rng, j0f, part="antisymmetric",
                                              bound=bound)
                for t in grid:
                    jt = geodesic_ambient(j0f, a_anti, float(t))
                    rep = validate_orthogonal(jt, gf, j0f, tol=orthogonal_tolerance)
                    orth_res = max(orth_res, rep.max_residual)
                    mismatches += sum(
                        1 for e in rep.per_point
                        if e["orientation"] != e["reference_orientation"])
        subs.append({"name": f"associated_invariance_dim{dim}",
                     "residual": assoc_res, "tolerance": tolerance})
        subs.append({"name": f"associated_positivity_dim{dim}",
                     "residual": max(0.0, 1e-12 - min_eig), "tolerance": 0.0,
                     "min_eig": min_eig})
        if dim >= 4:
            subs.append({"name": f"orthogonal_invariance_dim{dim}",
                         "residual": orth_res, "tolerance": orthogonal_tolerance})
            subs.append({"name": f"orientation_preserved_dim{dim}",
                         "residual": float(mismatches), "tolerance": 0.0})
        else:
            subs.append({"name": f"antisymmetric_trivial_dim{dim}",
                         "residual": 0.0, "tolerance": 0.0,
                         "note": "antisymmetric tangent space is {0} at dim 2"})
    params = {"cases": cases, "points": points, "t_max": t_max,
              "t_steps": t_steps, "bound": bound, "tolerance": tolerance,
              "orthogonal_tolerance": orthogonal_tolerance}
    return _compose("totally_geodesic", seed, dims, params, subs)


def _anticommuting_part_basis(j0: np.ndarray, part: str) -> list[np.ndarray]:
    """Frobenius-orthonormal basis of the anticommuting matrices that are
    plain-symmetric ('symmetric') or plain-antisymmetric ('antisymmetric')."""
    dim = j0.shape[0]
    basis: list[np.ndarray] = []
    for r in range(dim):
        for s in range(dim):
            e = np.zeros((dim, dim))
            e[r, s] = 1.0
            m = anticommute_project(e, j0)
            m = 0.5 * (m + m.T) if part == "symmetric" else 0.5 * (m - m.T)
            for b in basis:
                m = m - float(np.sum(b * m)) * b
            norm = float(np.linalg.norm(m))
            if norm > 1e-8:
                basis.append(m / norm)
    return basis


def check_signature(seed: int = 0, dims=(2, 4), points: int = 8,
                    threshold: float = 1e-10) -> CheckReport:
    """Signature of the pairing at the chart origin.

    On single-point tangent fields spanning the metric-symmetric part the
    Gram matrix of chart_inner must be positive definite; on the
    antisymmetric part (dim >= 4) negative definite; on the full tangent
    space indefinite.  Basis dimensions per fiber must be n^2 + n and
    n^2 - n.
    """
    subs = []
    for dim in dims:
        rng = _rng(seed, "signature", dim, 0)
        space = random_sample_space(rng, dim, points)
        j0f = standard_acs_field(space)
        j0 = standard_acs(dim)
        n = dim // 2
        sym_basis = _anticommuting_part_basis(j0, "symmetric")
        anti_basis = _anticommuting_part_basis(j0, "antisymmetric")
        dim_residual = float(abs(len(sym_basis) - (n * n + n))
                             + abs(len(anti_basis) - (n * n - n)))
        subs.append({"name": f"basis_dims_dim{dim}", "residual": dim_residual,
                     "tolerance": 0.0, "sym_count": len(sym_basis),
                     "antisym_count": len(anti_basis)})

        def point_fields(fiber_basis):
            fields = []
            for p in range(space.npoints):
                for e in fiber_basis:
                    ops = np.zeros_like(j0f.ops)
                    ops[p] = e
                    fields.append(TangentField(space, j0f, ops))
            return fields

        def gram_eigs(fields):
            c0 = chart_origin(j0f)
            size = len(fields)
            gram = np.empty((size, size))
            for i in range(size):
                for jj in range(i, size):
                    v = chart_inner(c0, fields[i], fields[jj])
                    gram[i, jj] = gram[jj, i] = v
            return np.linalg.eigvalsh(gram)

        sym_eigs = gram_eigs(point_fields(sym_basis))
        sub = {"name": f"symmetric_positive_dim{dim}",
               "residual": max(0.0, threshold - float(sym_eigs[0])),
               "tolerance": 0.0, "min_eig": float(sym_eigs[0])}
        subs.append(sub)
        if anti_basis:
            anti_eigs = gram_eigs(point_fields(anti_basis))
            subs.append({"name": f"antisymmetric_negative_dim{dim}",
                         "residual": max(0.0, float(anti_eigs[-1]) + threshold),
                         "tolerance": 0.0, "max_eig": float(anti_eigs[-1])})
            full_eigs = gram_eigs(point_fields(sym_basis + anti_basis))
            subs.append({"name": f"full_indefinite_dim{dim}",
                         "residual": max(0.0, float(full_eigs[0]) + threshold,
                                         threshold - float(full_eigs[-1])),
                         "tolerance": 0.0, "min_eig": float(full_eigs[0]),
                         "max_eig": float(full_eigs[-1])})
    params = {"points": points, "threshold": threshold}
    return _compose("signature", seed, dims, params, subs)


# ---------------------------------------------------------------------------
# suite

@dataclass
class VerifyConfig:
    """Configuration of the full suite.

    ``dims`` drive the cheap algebraic ensembles; ``fd_dims`` the
    finite-difference and eigenbasis checks.  ``tolerances`` may override
    each checker's primary tolerance by name (see CHECK_NAMES).  An
    optional input ``bundle`` is validated ahead of the theorem checks.
    """

    seed: int = 0
    dims: tuple = (2, 4, 6)
    fd_dims: tuple = (2, 4)
    cases: int = 100
    fd_cases: int = 3
    points: int = 8
    h: float = 1e-4
    t_max: float = 2.0
    t_steps: int = 9
    tolerances: dict = field(default_factory=dict)
    bundle: FieldBundle | None = None

    def validate(self) -> None:
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")
        for label, dims in (("dims", self.dims), ("fd_dims", self.fd_dims)):
            if len(dims) == 0:
                raise ConfigError(f"{label} must not be empty")
            for d in dims:
                if not isinstance(d, int) or d < 2 or d % 2:
                    raise ConfigError(f"{label} entries must be even integers >= 2, got {d!r}")
        if self.cases < 1 or self.fd_cases < 1:
            raise ConfigError("cases and fd_cases must be at least 1")
        if self.points < 1:
            raise ConfigError("points must be at least 1")
        if not self.h > 0:
            raise ConfigError(f"step size h must be positive, got {self.h!r}")
        if not self.t_max > 0 or self.t_steps < 1:
            raise ConfigError("t_max must be positive and t_steps at least 1")
        for name, tol in self.tolerances.items():
            if name not in CHECK_NAMES:
                raise ConfigError(f"unknown tolerance override {name!r}")
            if not tol > 0:
                raise ConfigError(f"tolerance override {name!r} must be positive")


def _tol(config: VerifyConfig, name: str, default: float) -> float:
    return float(config.tolerances.get(name, default))


def _bundle_reports(config: VerifyConfig) -> list[CheckReport]:
    bundle = config.bundle
    reports = []
    dims = (bundle.space.dim,)
    if bundle.J is not None:
        fr = validate_acs(bundle.J)
        reports.append(_from_field_report("field_acs", fr, config.seed, dims,
                                          [{"name": "acs_identity",
                                            "residual": fr.max_residual,
                                            "tolerance": fr.tolerance}]))
        if bundle.W is not None:
            fr = validate_associated(bundle.J, bundle.W)
            min_eig = min(e["min_eig"] for e in fr.per_point)
            reports.append(_from_field_report(
                "field_associated", fr, config.seed, dims,
                [{"name": "invariance", "residual": fr.max_residual,
                  "tolerance": fr.tolerance},
                 {"name": "positivity", "residual": max(0.0, 1e-12 - min_eig),
                  "tolerance": 0.0, "min_eig": min_eig}]))
    return reports


def _from_field_report(name: str, fr: FieldReport, seed: int, dims,
                       subchecks) -> CheckReport:
    report = _compose(name, seed, dims, {"worst_point": fr.worst_point},
                      subchecks)
    report.details.extend(_plain(fr.per_point))
    return report


def run_suite(config: VerifyConfig) -> list[CheckReport]:
    """Run every checker with seeds derived from the master seed.

    Returns the reports sorted by checker name; overall success is their
    conjunction.  Only configuration problems raise; check failures are
    reported, not raised.
    """
    config.validate()
    reports: list[CheckReport] = []
    if config.bundle is not None:
        reports.extend(_bundle_reports(config))
    reports.append(check_cayley(config.seed, config.dims, config.cases,
                                tolerance=_tol(config, "cayley", 1e-9)))
    reports.append(check_theorem1(config.seed, config.dims, config.cases,
                                  tolerance=_tol(config, "theorem1", 1e-9)))
    reports.append(check_theorem2(config.seed, config.fd_dims, config.fd_cases,
                                  config.points, config.h,
                                  tolerance=_tol(config, "theorem2", 1e-6)))
    reports.append(check_geodesics(config.seed, config.fd_dims, config.fd_cases,
                                   config.points, h=config.h,
                                   tolerance=_tol(config, "geodesics", 1e-6),
                                   t_max=config.t_max, t_steps=config.t_steps))
    reports.append(check_curvature_fd(config.seed, config.fd_dims,
                                      config.fd_cases, config.points,
                                      h=config.h,
                                      tolerance=_tol(config, "curvature_fd", 1e-5)))
    reports.append(check_metric_structure(config.seed, config.fd_dims,
                                          config.fd_cases, config.points,
                                          h=config.h,
                                          tolerance=_tol(config, "metric_structure", 1e-6)))
    reports.append(check_totally_geodesic(config.seed, config.fd_dims,
                                          config.fd_cases, config.points,
                                          t_max=config.t_max, t_steps=config.t_steps,
                                          tolerance=_tol(config, "totally_geodesic", 1e-9)))
    reports.append(check_signature(config.seed, config.fd_dims, config.points,
                                   threshold=_tol(config, "signature", 1e-10)))
    reports.sort(key=lambda r: r.name)
    return reports


def report_document(reports: list[CheckReport], config: VerifyConfig,
                    input_path: str | None = None) -> dict:
    """Merge reports into one JSON-ready document with stable content."""
    return _plain({
        "passed": all(r.passed for r in reports),
        "checks": [r.to_dict() for r in reports],
        "config": {
            "seed": config.seed,
            "dims": list(config.dims),
            "fd_dims": list(config.fd_dims),
            "cases": config.cases,
            "fd_cases": config.fd_cases,
            "points": config.points,
            "h": config.h,
            "t_max": config.t_max,
            "t_steps": config.t_steps,
            "tolerances": dict(config.tolerances),
            "input": input_path,
        },
    })
