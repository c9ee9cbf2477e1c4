"""One-dimensional reduction of the Yamabe quotient on M x R.

For a base of dimension n, volume V, and constant scalar curvature s, the
Yamabe functional of the product metric restricted to functions of the
line coordinate is

    ( int a_{n+1} (f')^2 V + s V f^2 ) / ( V^{2/p} (int f^p)^{2/p} ) ,

with a_{n+1} = 4n/(n-1) and p = p_{n+1} = 2(n+1)/(n-1).  Its infimum over
the line is independent of the base and equals V^{2/(n+1)} Y_{n+1}
V_n^{-2/(n+1)} for s = n(n-1); the closed form is the oracle here and the
numerical minimizer is the check.  The minimizer of the continuum problem
is cosh^{-(n-1)/2}(t - t_0) up to scale.

Minimization runs projected gradient descent on the quotient,
preconditioned by the linear part of its Hessian (a tridiagonal solve per
step), with nonnegativity enforced by clamping and an Armijo backtracking
line search so the objective decreases monotonically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solveh_banded

from .errors import ConvergenceError, DomainError, ValidationError
from .geometry import (
    RadialProfile,
    conformal_map_h0,
    interior_grid,
    sphere_volume,
    sphere_yamabe,
)
from .symmetrization import ConeFunction

__all__ = [
    "LineProblem",
    "MinimizeResult",
    "line_quotient",
    "closed_form_line",
    "minimize_line",
    "euler_lagrange_residual",
    "cosh_profile",
    "pull_line_to_cone",
]


@dataclass(frozen=True)
class LineProblem:
    """Configuration of the 1-D quotient minimization.

    ``scal`` is the base scalar curvature (n(n-1) for an Einstein base
    normalized to Ricci = (n-1) g); the domain is [-half_width, half_width]
    with ``num`` uniformly spaced nodes and Dirichlet ends.
    """

    n: int
    base_volume: float
    scal: float
    half_width: float = 12.0
    num: int = 4001

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError("base dimension must be >= 2")
        if not self.base_volume > 0:
            raise ValidationError("base volume must be positive")
        if not self.scal > 0:
            raise ValidationError("the reduction assumes positive scalar curvature")
        if self.num < 16 or not self.half_width > 0:
            raise ValidationError("degenerate grid")

    @property
    def a(self) -> float:
        """Gradient coefficient a_{n+1} = 4n/(n-1)."""
        return 4.0 * self.n / (self.n - 1)

    @property
    def p(self) -> float:
        """Critical exponent p_{n+1} = 2(n+1)/(n-1)."""
        return 2.0 * (self.n + 1) / (self.n - 1)

    def grid(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.num)


@dataclass
class MinimizeResult:
    value: float
    minimizer: RadialProfile
    residual: float
    iterations: int
    history: np.ndarray = field(default_factory=lambda: np.empty(0))


def _as_values(problem: LineProblem, f) -> np.ndarray:
    if isinstance(f, RadialProfile):
        if f.t.size != problem.num or not np.allclose(f.t, problem.grid()):
            raise ValidationError("profile grid does not match the problem grid")
        return f.values
    v = np.asarray(f, dtype=float)
    if v.shape != (problem.num,):
        raise ValidationError("values must match the problem grid")
    return v


def line_quotient(problem: LineProblem, f) -> float:
    """Quotient value at a line function (trapezoid quadrature).

    Scale invariant in f; scales as V^{1 - 2/p} in the base volume at
    fixed f.
    """
    v = _as_values(problem, f)
    if not np.any(v != 0):
        raise DomainError("quotient undefined for the zero function")
    h = 2.0 * problem.half_width / (problem.num - 1)
    wt = np.full(problem.num, h)
    wt[0] = wt[-1] = h / 2.0
    grad = float(np.sum(np.diff(v) ** 2)) / h
    pot = float(np.sum(wt * v**2))
    sp = float(np.sum(wt * np.abs(v) ** problem.p))
    V = problem.base_volume
    num = problem.a * grad * V + problem.scal * V * pot
    den = V ** (2.0 / problem.p) * sp ** (2.0 / problem.p)
    return num / den


def closed_form_line(n: int, base_volume: float) -> float:
    """The known infimum (V/V_n)^{2/(n+1)} Y_{n+1} of the reduction."""
    if n < 2:
        raise DomainError("dimension must be >= 2")
    if not base_volume > 0:
        raise DomainError("volume must be positive")
    return (base_volume / sphere_volume(n)) ** (2.0 / (n + 1)) * sphere_yamabe(n + 1)


def cosh_profile(n: int, half_width: float, num: int) -> RadialProfile:
    """The continuum minimizer cosh^{-(n-1)/2} sampled on the problem grid."""
    x = np.linspace(-half_width, half_width, num)
    return RadialProfile(t=x, values=np.cosh(x) ** (-(n - 1) / 2.0))


def euler_lagrange_residual(problem: LineProblem, f) -> float:
    """Discrete L^2 residual of -2a f'' + 2 s f - mu f^{p-1} on the interior.

    The multiplier mu is the least-squares projection of the linear part
    onto f^{p-1}, so the residual is scale covariant: it picks up exactly
    one factor of c under f -> c f.
    """
    v = _as_values(problem, f)
    if np.any(v < 0) or not np.any(v > 0):
        raise DomainError("residual expects a nonnegative, nonzero function")
    h = 2.0 * problem.half_width / (problem.num - 1)
    fpp = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / h**2
    g = -2.0 * problem.a * fpp + 2.0 * problem.scal * v[1:-1]
    hp = v[1:-1] ** (problem.p - 1.0)
    denom = float(np.dot(hp, hp))
    mu = float(np.dot(g, hp)) / denom if denom > 0 else 0.0
    return float(np.sqrt(np.sum((g - mu * hp) ** 2) * h))


def _normalize(v: np.ndarray, wt: np.ndarray, p: float) -> np.ndarray:
    sp = float(np.sum(wt * v**p))
    return v / sp ** (1.0 / p)


def minimize_line(
    problem: LineProblem,
    initial=None,
    max_iter: int = 5000,
    obj_rtol: float = 1e-12,
    patience: int = 8,
) -> MinimizeResult:
    """Minimize the 1-D quotient over nonnegative grid functions.

    Starts from a centered Gaussian bump unless ``initial`` is given.
    Raises :class:`ConvergenceError` (with the best result attached) if
    the objective has not stalled to ``obj_rtol`` within ``max_iter``
    accepted steps.
    """
    x = problem.grid()
    h = float(x[1] - x[0])
    wt = np.full(problem.num, h)
    wt[0] = wt[-1] = h / 2.0
    a, s, p, V = problem.a, problem.scal, problem.p, problem.base_volume
    vfac = V ** (1.0 - 2.0 / p)

    if initial is None:
        v = np.exp(-0.5 * x**2)
    else:
        v = _as_values(problem, initial).copy()
        if np.any(v < 0) or not np.any(v > 0):
            raise ValidationError("initial guess must be nonnegative and nonzero")
    v[0] = v[-1] = 0.0
    v = _normalize(v, wt, p)

    # linear part of the Hessian, banded upper form for solveh_banded
    diag = 4.0 * a / h + 2.0 * s * wt
    off = np.full(problem.num - 1, -2.0 * a / h)
    band = np.zeros((2, problem.num))
    band[0, 1:] = off
    band[1, :] = diag

    def split(vv):
        grad = float(np.sum(np.diff(vv) ** 2)) / h
        num = a * grad + s * float(np.sum(wt * vv**2))
        sp = float(np.sum(wt * vv**p))
        return num, sp

    def objective(vv):
        num, sp = split(vv)
        return num / sp ** (2.0 / p)

    def gradient(vv, num, sp):
        lap = np.zeros_like(vv)
        lap[1:-1] = 2.0 * vv[1:-1] - vv[:-2] - vv[2:]
        gn = 2.0 * a * lap / h + 2.0 * s * wt * vv
        den = sp ** (2.0 / p)
        gd = 2.0 * sp ** (2.0 / p - 1.0) * wt * vv ** (p - 1.0)
        r = num / den
        return (gn - r * gd) / den, r

    num, sp = split(v)
    r_cur = num / sp ** (2.0 / p)
    history = [vfac * r_cur]
    eta = 1.0
    stalled = 0
    iterations = 0
    for _ in range(max_iter):
        g, _ = gradient(v, num, sp)
        g[0] = g[-1] = 0.0
        d = solveh_banded(band, g)
        d[0] = d[-1] = 0.0
        slope = float(np.dot(g, d))
        if slope <= 0:
            break
        accepted = False
        eta = min(eta * 2.0, 4.0)
        while eta > 1e-16:
            trial = np.maximum(v - eta * d, 0.0)
            trial[0] = trial[-1] = 0.0
            if not np.any(trial > 0):
                eta *= 0.5
                continue
            r_try = objective(trial)
            if r_try <= r_cur - 1e-4 * eta * slope:
                accepted = True
                break
            eta *= 0.5
        if not accepted:
            break
        v = _normalize(trial, wt, p)
        num, sp = split(v)
        rel = abs(r_cur - r_try) / r_cur
        r_cur = num / sp ** (2.0 / p)
        history.append(vfac * r_cur)
        iterations += 1
        stalled = stalled + 1 if rel <= obj_rtol else 0
        if stalled >= patience:
            break
    profile = RadialProfile(t=x, values=v)
    result = MinimizeResult(
        value=vfac * r_cur,
        minimizer=profile,
        residual=euler_lagrange_residual(problem, v),
        iterations=iterations,
        history=np.asarray(history),
    )
    if stalled < patience and iterations >= max_iter:
        raise ConvergenceError(
            f"no convergence after {iterations} iterations", best=result
        )
    return result


def pull_line_to_cone(
    f_line: RadialProfile, n: int, base_volume: float, num: int = 8001
) -> ConeFunction:
    """Conformally weighted pullback of a line function to the cone.

    Through the coordinate map h0 and the conformal factor, a line
    function f corresponds to the radial cone function

        phi(t) = f(h0(t)) / sin(t)^{(n-1)/2} ,

    and the cone Yamabe quotient of phi (with scal = n(n+1)) equals the
    line quotient of f.  Outside the image of the line domain phi is 0.
    """
    t = interior_grid(num)
    u = conformal_map_h0(t)
    vals = np.interp(u, f_line.t, f_line.values, left=0.0, right=0.0)
    phi = vals / np.sin(t) ** ((n - 1) / 2.0)
    return ConeFunction.radial(t, phi, n, base_volume)
