"""Seeded property suites behind the ``verify`` CLI command.

Each suite returns a list of :class:`CheckResult`; a check that fails
carries its first counterexample in ``detail``.  The suites are scoped to
run in seconds; the pytest acceptance module runs the full-size versions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry, isoperimetry, symmetrization, variational
from .geometry import EinsteinData, SphericalCone

__all__ = ["CheckResult", "SUITES", "run_suite"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


def _check(results, name, passed, **detail):
    results.append(CheckResult(name=name, passed=bool(passed), detail=detail))


# --------------------------------------------------------------------------


def curvature_suite(rng: np.random.Generator) -> list[CheckResult]:
    results = []
    t_grid = geometry.interior_grid(100)

    worst = 0.0
    for n in range(2, 7):
        for t in t_grid:
            eigs = geometry.cone_ricci(np.full(n, n - 1.0), float(t))
            worst = max(worst, float(np.max(np.abs(eigs - n) / n)))
    _check(results, "einstein_propagation", worst <= 1e-12, max_rel_err=worst)

    bad = None
    for _ in range(1000):
        n = int(rng.integers(2, 7))
        eigs = (n - 1.0) + rng.exponential(1.0, size=n)
        t = float(rng.uniform(1e-3, math.pi - 1e-3))
        out = geometry.cone_ricci(eigs, t)
        if np.any(out < n - 1e-12):
            bad = {"n": n, "t": t, "eigs": eigs.tolist(), "out": out.tolist()}
            break
    _check(results, "ricci_monotonicity", bad is None, counterexample=bad)

    k_tan, k_rad = geometry.cone_sectional(1.0, t_grid)
    err = max(float(np.max(np.abs(k_tan - 1))), float(np.max(np.abs(k_rad - 1))))
    _check(results, "round_cone_roundness", err <= 1e-12, max_err=err)

    cone = SphericalCone(EinsteinData(n=3, volume=11.0, lam=2.0, einstein=True))
    h = 1e-5
    rs = np.linspace(0.3, math.pi - 0.3, 17)
    fd = (
        np.array([geometry.cone_ball_volume(cone, r + h) for r in rs])
        - np.array([geometry.cone_ball_volume(cone, r - h) for r in rs])
    ) / (2 * h)
    area = np.array([geometry.cone_ball_area(cone, r) for r in rs])
    err = float(np.max(np.abs(fd - area) / area))
    _check(results, "volume_area_duality", err <= 1e-7, max_rel_err=err)

    worst = 0.0
    for n in range(2, 8):
        for x in np.linspace(0.1, math.pi, 9):
            worst = max(
                worst,
                abs(
                    geometry.sin_power_integral(n, float(x))
                    - geometry.sin_power_integral_quad(n, float(x))
                ),
            )
    _check(results, "sin_integral_recursion_vs_quadrature", worst <= 1e-10, max_err=worst)

    t = np.linspace(1e-3, math.pi - 1e-3, 400)
    comp = geometry.conformal_factor_f0(geometry.conformal_map_h0(t)) - np.sin(t) ** 2
    # step scaled to the nearest vertex keeps the O(delta^2 h0''') truncation flat
    delta = 5e-5 * np.minimum(t, math.pi - t)
    h0p = (geometry.conformal_map_h0(t + delta) - geometry.conformal_map_h0(t - delta)) / (
        2 * delta
    )
    pullback = np.sin(t) ** 2 * h0p**2 - 1.0
    err = max(float(np.max(np.abs(comp))), float(np.max(np.abs(pullback))))
    _check(results, "conformal_identities", err <= 1e-8, max_err=err)
    return results


# --------------------------------------------------------------------------


def _random_round2d(rng, n=2, grid=200, base_volume=None):
    theta = geometry.interior_grid(grid)
    t = geometry.interior_grid(grid)
    g = np.zeros((grid, grid))
    for k in range(4):
        for l in range(4):
            amp = rng.normal() / (1.0 + k + l)
            g += amp * np.cos(k * theta[:, None] + rng.uniform(0, 2 * math.pi)) * np.cos(
                l * t[None, :] + rng.uniform(0, 2 * math.pi)
            )
    return symmetrization.ConeFunction.round2d(theta, t, g**2, n, base_volume)


def symmetrization_suite(rng: np.random.Generator) -> list[CheckResult]:
    results = []
    n = 2
    p3 = geometry.critical_exponent(n + 1)

    worst_norm, worst_energy, bad = 0.0, 0.0, None
    for trial in range(5):
        f = _random_round2d(rng, n=n, grid=200)
        fstar = symmetrization.rearrange(f)
        fs = symmetrization.ConeFunction.from_profile(fstar, n, f.base_volume)
        for q in (1.0, 2.0, p3):
            a = symmetrization.lq_norm(f, q)
            b = symmetrization.lq_norm(fs, q)
            worst_norm = max(worst_norm, abs(a - b) / a)
        e0 = symmetrization.dirichlet_energy(f)
        e1 = symmetrization.dirichlet_energy(fs)
        excess = (e1 - e0) / e0
        worst_energy = max(worst_energy, excess)
        if worst_norm > 1e-6 or excess > 1e-3:
            bad = {"trial": trial, "worst_norm": worst_norm, "energy_excess": excess}
            break
    _check(results, "norm_preservation", worst_norm <= 1e-6, max_rel_err=worst_norm)
    _check(
        results,
        "energy_nonincreasing",
        worst_energy <= 1e-3,
        max_excess=worst_energy,
        counterexample=bad,
    )

    f = _random_round2d(rng, n=n, grid=200)
    fstar = symmetrization.rearrange(f)
    fs = symmetrization.ConeFunction.from_profile(fstar, n, f.base_volume)
    cell = float(np.max(f.weights()))
    worst = 0.0
    for s in np.linspace(0.0, float(np.max(f.values)) * 0.98, 50):
        worst = max(
            worst,
            abs(
                symmetrization.superlevel_volume(f, float(s))
                - symmetrization.superlevel_volume(fs, float(s))
            ),
        )
    _check(results, "equimeasurability", worst <= cell, max_vol_gap=worst, cell=cell)

    worst = 0.0
    for _ in range(5):
        vals = np.sort(rng.uniform(0.1, 2.0, size=300))[::-1]
        prof = geometry.RadialProfile(t=geometry.interior_grid(300), values=vals)
        V = float(rng.uniform(2.0, 12.0))
        fv = symmetrization.ConeFunction.from_profile(prof, n, V)
        f0 = symmetrization.transfer_to_sphere(prof, V, n)
        vn = geometry.sphere_volume(n)
        for q in (2.0, p3):
            ratio = symmetrization.lq_norm(f0, q) ** q / symmetrization.lq_norm(fv, q) ** q
            worst = max(worst, abs(ratio - vn / V))
        eratio = symmetrization.dirichlet_energy(f0) / symmetrization.dirichlet_energy(fv)
        worst = max(worst, abs(eratio - vn / V))
    _check(results, "transfer_scaling", worst <= 1e-10, max_err=worst)

    f = _random_round2d(rng, n=n, grid=120)
    scal = n * (n + 1)
    q0 = symmetrization.yamabe_quotient(f, scal)
    scale_err = 0.0
    for _ in range(5):
        c = float(rng.uniform(0.1, 10.0))
        g = symmetrization.ConeFunction.round2d(f.theta, f.t, c * f.values, n, f.base_volume)
        scale_err = max(scale_err, abs(symmetrization.yamabe_quotient(g, scal) - q0) / q0)
    _check(results, "quotient_scale_invariance", scale_err <= 1e-10, max_rel_err=scale_err)

    fstar = symmetrization.rearrange(f)
    fs = symmetrization.ConeFunction.from_profile(fstar, n, f.base_volume)
    q1 = symmetrization.yamabe_quotient(fs, scal)
    _check(
        results,
        "quotient_decreases_under_rearrangement",
        q1 <= q0 * (1 + 1e-3),
        before=q0,
        after=q1,
    )
    return results


# --------------------------------------------------------------------------


def stability_suite(rng: np.random.Generator) -> list[CheckResult]:
    results = []
    ts = np.linspace(0.03, math.pi - 0.03, 50)
    worst = 0.0
    for n in (2, 3, 4, 5):
        for t in ts:
            m = isoperimetry.slice_stability_margin(
                isoperimetry.StabilityInput(t=float(t), n=n, lambda1=float(n))
            )
            worst = max(worst, abs(m))
    _check(results, "round_base_degenerate_stability", worst <= 1e-12, max_abs=worst)

    bad = None
    for _ in range(200):
        n = int(rng.integers(2, 6))
        lam1 = n + float(rng.uniform(0.01, 3.0))
        t = float(rng.uniform(0.05, math.pi - 0.05))
        m = isoperimetry.slice_stability_margin(
            isoperimetry.StabilityInput(t=t, n=n, lambda1=lam1)
        )
        if m <= 0:
            bad = {"n": n, "lambda1": lam1, "t": t, "margin": m}
            break
    _check(results, "margin_positive_above_round", bad is None, counterexample=bad)

    inp = isoperimetry.StabilityInput(t=math.pi / 2, n=4, lambda1=4.0)
    m = isoperimetry.slice_stability_margin(inp)
    _check(results, "equator_margin_zero", abs(m) <= 1e-14, margin=m, sigma2=inp.sigma2)
    return results


# --------------------------------------------------------------------------


def _random_slice_set(rng, n=2, grid=400, max_volume_ratio=1.0):
    t = geometry.interior_grid(grid)
    g = np.zeros(grid)
    for k in range(5):
        g += rng.normal() / (1 + k) * np.cos(k * t + rng.uniform(0, 2 * math.pi))
    frac = 0.05 + 0.9 * (g - g.min()) / (g.max() - g.min() + 1e-12)
    vn = geometry.sphere_volume(n)
    V = vn * float(rng.uniform(0.4, max_volume_ratio))
    u = isoperimetry.SliceSet(n=n, base_volume=V, t=t, frac=frac)
    return isoperimetry.symmetrize_set(u)


def minkowski_suite(rng: np.random.Generator) -> list[CheckResult]:
    results = []
    n, grid = 2, 400
    vn = geometry.sphere_volume(n)

    # profile identity: the cone profile is the sphere profile one dim up
    worst = 0.0
    for V in (vn, 0.5 * vn, 2 * vn / 3):
        cone = SphericalCone(EinsteinData(n=n, volume=V, lam=n - 1.0, einstein=True))
        for beta in np.linspace(0.05, 0.95, 19):
            worst = max(
                worst,
                abs(
                    isoperimetry.cone_iso_profile(cone, float(beta))
                    - isoperimetry.sphere_iso_profile(n + 1, float(beta))
                ),
            )
    _check(results, "profile_identity", worst <= 1e-10, max_abs_diff=worst)

    worst = 0.0
    for _ in range(5):
        u = _random_slice_set(rng, n=n, grid=grid)
        us = isoperimetry.symmetrize_set(u)
        a = isoperimetry.slice_set_volume(u) / (u.base_volume * geometry.sin_power_integral(n, math.pi))
        b = isoperimetry.slice_set_volume(us) / (u.base_volume * geometry.sin_power_integral(n, math.pi))
        worst = max(worst, abs(a - b))
    _check(results, "symmetrization_volume_preservation", worst <= 1e-10, max_err=worst)

    u = isoperimetry.SliceSet.vertex_ball(n, vn, 0.8, num=grid)
    dcell = math.pi / grid
    content = isoperimetry.minkowski_content(u, [8 * dcell, 4 * dcell], grid=grid)
    expected = math.sin(0.8) ** n * vn
    rel = abs(content - expected) / expected
    _check(results, "vertex_ball_content", rel <= 0.02, rel_err=rel, content=content)

    bad, margin = None, np.inf
    for trial in range(8):
        u = _random_slice_set(rng, n=n, grid=grid, max_volume_ratio=0.95)
        content = isoperimetry.minkowski_content(u, [8 * dcell, 4 * dcell], grid=grid)
        vol = isoperimetry.neighborhood_volume(u, 0.0, grid)
        beta = (vn / u.base_volume) * vol / (vn * geometry.sin_power_integral(n, math.pi))
        rho = isoperimetry.ball_radius(n + 1, min(beta, 1.0))
        rhs = (u.base_volume / vn) * isoperimetry.sphere_ball_area(n + 1, rho)
        slack = 0.05 * rhs
        margin = min(margin, content - rhs)
        if content < rhs - slack:
            bad = {"trial": trial, "content": content, "rhs": rhs}
            break
    _check(results, "content_comparison", bad is None, min_margin=margin, counterexample=bad)

    u = _random_slice_set(rng, n=n, grid=grid, max_volume_ratio=0.9)
    r_values = [4 * dcell, 8 * dcell, 16 * dcell, math.pi]
    vols = [isoperimetry.neighborhood_volume(u, r, grid) for r in r_values]
    total = u.base_volume * geometry.sin_power_integral(n, math.pi)
    mono = all(b >= a - 1e-12 for a, b in zip(vols, vols[1:]))
    _check(
        results,
        "dilation_monotone_and_saturating",
        mono and abs(vols[-1] - total) / total <= 1e-9,
        vols=vols,
        total=total,
    )

    bad, worst = None, -np.inf
    for trial in range(5):
        u = _random_slice_set(rng, n=n, grid=grid, max_volume_ratio=0.85)
        r = 10 * dcell
        left = isoperimetry.dilate_slice_set(
            isoperimetry.SliceSet(n=n, base_volume=vn, t=u.t, frac=u.frac, rho=u.rho), r, grid
        )
        right = isoperimetry.dilate_slice_set(u, r, grid)
        gap = float(np.max(left.rho - right.rho))
        worst = max(worst, gap)
        if gap > dcell + 1e-12:
            bad = {"trial": trial, "max_radius_gap": gap}
            break
    _check(results, "slice_inclusion", bad is None, max_radius_gap=worst, counterexample=bad)
    return results


# --------------------------------------------------------------------------


def variational_suite(rng: np.random.Generator) -> list[CheckResult]:
    results = []
    n = 2
    vn = geometry.sphere_volume(n)
    problem = variational.LineProblem(
        n=n, base_volume=vn, scal=n * (n - 1.0), half_width=12.0, num=2001
    )
    res = variational.minimize_line(problem)
    target = variational.closed_form_line(n, vn)
    rel = abs(res.value - target) / target
    _check(results, "minimize_matches_closed_form", rel <= 5e-3, rel_err=rel, value=res.value)
    _check(
        results,
        "objective_monotone",
        bool(np.all(np.diff(res.history) <= 1e-12)),
        iterations=res.iterations,
    )
    _check(
        results,
        "lower_bound_consistency",
        res.value >= target - 5e-3 * target,
        value=res.value,
        closed_form=target,
    )

    shifted = np.exp(-0.5 * (problem.grid() - 2.0) ** 2)
    res2 = variational.minimize_line(problem, initial=shifted)
    _check(
        results,
        "translation_invariant_value",
        abs(res2.value - res.value) / res.value <= 5e-3,
        shifted_value=res2.value,
    )

    f = variational.cosh_profile(n, problem.half_width, problem.num)
    q1 = variational.line_quotient(problem, f)
    prob2 = variational.LineProblem(
        n=n, base_volume=2.5 * vn, scal=n * (n - 1.0), half_width=12.0, num=2001
    )
    q2 = variational.line_quotient(prob2, f)
    expected = 2.5 ** (1.0 - 2.0 / problem.p)
    _check(
        results,
        "volume_scaling_law",
        abs(q2 / q1 - expected) <= 1e-10,
        ratio=q2 / q1,
        expected=expected,
    )

    resid_exact = variational.euler_lagrange_residual(problem, f)
    bump = np.exp(-0.5 * problem.grid() ** 2) * (1.0 + 0.3 * np.cos(problem.grid()))
    resid_rand = variational.euler_lagrange_residual(problem, bump)
    _check(
        results,
        "residual_small_at_minimizer",
        resid_exact <= 1e-3 and resid_rand > 10 * resid_exact,
        exact=resid_exact,
        generic=resid_rand,
    )

    cone_f = variational.pull_line_to_cone(res.minimizer, n, vn)
    qc = symmetrization.yamabe_quotient(cone_f, n * (n + 1.0))
    rel = abs(qc - res.value) / res.value
    _check(results, "cone_route_agreement", rel <= 5e-3, rel_err=rel, cone_value=qc)
    return results


SUITES = {
    "curvature": curvature_suite,
    "symmetrization": symmetrization_suite,
    "stability": stability_suite,
    "minkowski": minkowski_suite,
    "variational": variational_suite,
}


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    """Run one suite (or ``all``) with a seeded generator."""
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(run_suite(key, seed))
        return out
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    rng = np.random.default_rng(seed)
    return SUITES[name](rng)
