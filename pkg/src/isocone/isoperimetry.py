"""Isoperimetric profiles, set symmetrization, and Minkowski content.

Geodesic balls around a cone vertex have volume (V/V_n) Vol(B_0(r)) and
boundary area (V/V_n) Vol(dB_0(r)), so the cone's isoperimetric function
coincides with the round sphere's one dimension up; that equality is the
central invariant here.  The rest of the module provides the desk-scale
machinery behind it: slice-wise symmetrization of sets, dilation of
slice sets on a 2-D (base colatitude x cone angle) grid, Minkowski
content estimates, and the stability margin of a slice as a constant
mean curvature hypersurface.

Dilation is computable only when base distances are: we support bases
that are round spheres up to scale (volume V <= V_n picks the scale
c = (V/V_n)^{2/n}, with base distance sqrt(c) times the angular one).
For c = 1 the comparison lemmas degenerate to equalities; c < 1 makes
them strict.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResolutionError, ValidationError
from .geometry import SphericalCone, interior_grid, sin_power_integral, sphere_volume

__all__ = [
    "IsoProfile",
    "SliceSet",
    "StabilityInput",
    "sphere_ball_volume",
    "sphere_ball_area",
    "ball_fraction",
    "ball_radius",
    "sphere_iso_profile",
    "cone_iso_profile",
    "profile_table",
    "suspension_distance",
    "enlarge_ball",
    "symmetrize_set",
    "slice_set_volume",
    "dilate_slice_set",
    "neighborhood_volume",
    "minkowski_content",
    "slice_stability_margin",
]


# --------------------------------------------------------------------------
# Geodesic balls in round spheres
# --------------------------------------------------------------------------

def sphere_ball_volume(m: int, rho) -> np.ndarray | float:
    """Volume of the geodesic ball of radius rho in the unit S^m."""
    ra = np.asarray(rho, dtype=float)
    if np.any(ra < 0) or np.any(ra > math.pi):
        raise DomainError("ball radius must lie in [0, pi]")
    out = sphere_volume(m - 1) * sin_power_integral(m - 1, ra)
    return float(out) if np.isscalar(rho) else out


def sphere_ball_area(m: int, rho) -> np.ndarray | float:
    """Boundary area sin^{m-1}(rho) V_{m-1} of the radius-rho ball in S^m."""
    ra = np.asarray(rho, dtype=float)
    if np.any(ra < 0) or np.any(ra > math.pi):
        raise DomainError("ball radius must lie in [0, pi]")
    out = sphere_volume(m - 1) * np.sin(ra) ** (m - 1)
    return float(out) if np.isscalar(rho) else out


def ball_fraction(m: int, rho) -> np.ndarray | float:
    """Volume fraction of S^m occupied by the ball of radius rho."""
    return sphere_ball_volume(m, rho) / sphere_volume(m)


def ball_radius(m: int, beta, tol: float = 1e-13) -> np.ndarray | float:
    """Radius of the S^m geodesic ball with volume fraction beta.

    Monotone bisection; resolves to the infimum radius.  beta outside
    [0, 1] is rejected; the endpoints map to 0 and pi.
    """
    ba = np.asarray(beta, dtype=float)
    if np.any(ba < 0) or np.any(ba > 1):
        raise DomainError("volume fraction must lie in [0, 1]")
    lo = np.zeros_like(ba)
    hi = np.full_like(ba, math.pi)
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        below = ball_fraction(m, mid) < ba
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    out = 0.5 * (lo + hi)
    return float(out) if np.isscalar(beta) else out


# --------------------------------------------------------------------------
# Isoperimetric profiles
# --------------------------------------------------------------------------

def sphere_iso_profile(m: int, beta: float) -> float:
    """Normalized isoperimetric profile of the round S^m at fraction beta.

    Geodesic balls are isoperimetric in round spheres, so the profile is
    Vol(dB_0(r)) / V_m at the r with Vol(B_0(r)) / V_m = beta.
    """
    if m < 2:
        raise DomainError("profile needs sphere dimension >= 2")
    if not 0.0 < beta < 1.0:
        raise DomainError("volume fraction must lie in (0, 1)")
    r = ball_radius(m, beta)
    return sphere_ball_area(m, r) / sphere_volume(m)


def cone_iso_profile(cone: SphericalCone, beta: float) -> float:
    """Normalized perimeter of the vertex ball enclosing fraction beta of the cone.

    Solves Vol(B(S, r)) = beta Vol(X) and returns Vol(dB(S, r)) / Vol(X).
    The base volume cancels, so this equals ``sphere_iso_profile(n+1, beta)``
    for every base; vertex balls are isoperimetric, so it is the cone's
    true isoperimetric function.
    """
    if not 0.0 < beta < 1.0:
        raise DomainError("volume fraction must lie in (0, 1)")
    total = cone.total_volume
    target = beta * total
    lo, hi = 0.0, math.pi
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if cone.base_volume * sin_power_integral(cone.n, mid) < target:
            lo = mid
        else:
            hi = mid
    r = 0.5 * (lo + hi)
    return cone.base_volume * math.sin(r) ** cone.n / total


@dataclass
class IsoProfile:
    """A sampled isoperimetric profile: (volume fraction, normalized perimeter)."""

    betas: np.ndarray
    perimeters: np.ndarray
    label: str = ""

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["beta", "perimeter"])
            for b, p in zip(self.betas, self.perimeters):
                writer.writerow([repr(float(b)), repr(float(p))])


def profile_table(source, samples: int) -> IsoProfile:
    """Sample a profile at beta = k/(samples+1), k = 1..samples.

    ``source`` is either an integer sphere dimension or a SphericalCone.
    """
    if samples < 2:
        raise DomainError("need at least 2 samples")
    betas = np.arange(1, samples + 1) / (samples + 1.0)
    if isinstance(source, SphericalCone):
        per = np.array([cone_iso_profile(source, b) for b in betas])
        label = f"cone(n={source.n})"
    else:
        per = np.array([sphere_iso_profile(int(source), b) for b in betas])
        label = f"sphere({int(source)})"
    return IsoProfile(betas=betas, perimeters=per, label=label)


# --------------------------------------------------------------------------
# Suspension distance and model-side enlargement
# --------------------------------------------------------------------------

def suspension_distance(d_base, t1, t2) -> np.ndarray | float:
    """Distance in the spherical suspension between points at angles t1, t2.

    arccos(cos t1 cos t2 + sin t1 sin t2 cos(min(d_base, pi))); base
    distances are capped at pi, and paths through the vertices are the
    d_base >= pi limit (the formula reduces to t1 + t2 or 2 pi - t1 - t2).
    """
    da = np.asarray(d_base, dtype=float)
    if np.any(da < 0):
        raise DomainError("base distance must be nonnegative")
    t1a = np.asarray(t1, dtype=float)
    t2a = np.asarray(t2, dtype=float)
    if np.any((t1a <= 0) | (t1a >= math.pi)) or np.any((t2a <= 0) | (t2a >= math.pi)):
        raise DomainError("angles must lie in (0, pi)")
    arg = np.cos(t1a) * np.cos(t2a) + np.sin(t1a) * np.sin(t2a) * np.cos(
        np.minimum(da, math.pi)
    )
    out = np.arccos(np.clip(arg, -1.0, 1.0))
    if np.isscalar(d_base) and np.isscalar(t1) and np.isscalar(t2):
        return float(out)
    return out


def enlarge_ball(m: int, rho: float, r: float) -> float:
    """Radius of the r-neighborhood of a radius-rho geodesic ball in S^m."""
    if m < 1:
        raise DomainError("sphere dimension must be >= 1")
    if not 0.0 <= rho <= math.pi:
        raise DomainError("ball radius must lie in [0, pi]")
    if r < 0:
        raise DomainError("enlargement must be nonnegative")
    return min(rho + r, math.pi)


# --------------------------------------------------------------------------
# Slice sets
# --------------------------------------------------------------------------

@dataclass
class SliceSet:
    """A region of the cone described slice by slice.

    ``frac[i]`` is the base-volume fraction of the slice at angle ``t[i]``;
    when the base is a (scaled) round sphere the optional ``rho[i]`` is the
    angular radius of the geodesic ball with that fraction, all balls
    centered at a common point.
    """

    n: int
    base_volume: float
    t: np.ndarray
    frac: np.ndarray
    rho: np.ndarray | None = None

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.frac = np.asarray(self.frac, dtype=float)
        if self.t.ndim != 1 or self.t.shape != self.frac.shape:
            raise ValidationError("t and frac must be 1-D arrays of equal length")
        if np.any(self.t <= 0) or np.any(self.t >= math.pi) or np.any(np.diff(self.t) <= 0):
            raise ValidationError("slice angles must be strictly increasing in (0, pi)")
        if np.any(self.frac < 0) or np.any(self.frac > 1):
            raise ValidationError("slice fractions must lie in [0, 1]")
        if not self.base_volume > 0:
            raise ValidationError("base volume must be positive")
        if self.rho is not None:
            self.rho = np.asarray(self.rho, dtype=float)
            if self.rho.shape != self.frac.shape:
                raise ValidationError("rho must match the slice grid")
            err = np.max(np.abs(ball_fraction(self.n, self.rho) - self.frac))
            if err > 1e-8:
                raise ValidationError(
                    f"rho inconsistent with frac through the ball-volume map ({err:.2e})"
                )

    @property
    def base_scale(self) -> float:
        """Scale c of the round base metric c g_0 implied by the base volume."""
        return (self.base_volume / sphere_volume(self.n)) ** (2.0 / self.n)

    @classmethod
    def from_frac(cls, n, base_volume, t, frac, with_radii=False) -> "SliceSet":
        u = cls(n=n, base_volume=base_volume, t=t, frac=frac)
        return symmetrize_set(u) if with_radii else u

    @classmethod
    def vertex_ball(cls, n, base_volume, radius, num=400) -> "SliceSet":
        """The geodesic ball of the given radius around the vertex at t = 0."""
        t = interior_grid(num)
        frac = (t <= radius).astype(float)
        rho = np.where(t <= radius, math.pi, 0.0)
        return cls(n=n, base_volume=base_volume, t=t, frac=frac, rho=rho)


def symmetrize_set(u: SliceSet) -> SliceSet:
    """Replace every slice by the geodesic ball of the same normalized volume.

    Fractions are untouched, so the normalized volume is preserved exactly;
    only the ball radii are (re)derived.
    """
    rho = ball_radius(u.n, u.frac)
    return SliceSet(n=u.n, base_volume=u.base_volume, t=u.t, frac=u.frac, rho=rho)


def slice_set_volume(u: SliceSet) -> float:
    """Cone volume of the slice set: integral of V frac(t) sin^n(t) dt.

    Each slice cell carries the exact sin-power mass of its t-interval, so
    a set made of whole cells has exactly its continuum volume.
    """
    edges = np.concatenate([[0.0], 0.5 * (u.t[1:] + u.t[:-1]), [math.pi]])
    masses = np.diff(sin_power_integral(u.n, edges))
    return float(np.sum(u.base_volume * u.frac * masses))


# --------------------------------------------------------------------------
# Grid dilation
# --------------------------------------------------------------------------

def _dilated_radii(t: np.ndarray, rho: np.ndarray, r: float, sqrt_c: float) -> np.ndarray:
    """Per-slice ball radii of the r-neighborhood of a slice-ball set.

    Slice j contributes nothing to slice i when r < |t_i - t_j|, the whole
    slice when r exceeds a vertex path, and otherwise the source radius
    enlarged by the base solid angle reachable within r.
    """
    occupied = rho > 0
    if r < 0:
        raise DomainError("enlargement must be nonnegative")
    if not np.any(occupied):
        return np.zeros_like(rho)
    ts = t[occupied]
    rs = rho[occupied]
    cos_r = math.cos(r)
    ci, cj = np.cos(t)[:, None], np.cos(ts)[None, :]
    si, sj = np.sin(t)[:, None], np.sin(ts)[None, :]
    a = (cos_r - ci * cj) / (si * sj)
    reachable = a <= 1.0
    whole = a < -1.0
    delta = np.arccos(np.clip(a, -1.0, 1.0)) / sqrt_c
    contrib = np.where(whole, math.pi, np.minimum(rs[None, :] + delta, math.pi))
    contrib = np.where(reachable, contrib, 0.0)
    return np.maximum(contrib.max(axis=1), np.where(occupied, rho, 0.0))


def _snap(rho: np.ndarray, dtheta: float) -> np.ndarray:
    return np.clip(np.round(rho / dtheta) * dtheta, 0.0, math.pi)


def dilate_slice_set(u: SliceSet, r: float, grid: int = 400) -> SliceSet:
    """The r-neighborhood B(U, r) of a slice-ball set, on a grid x grid mesh.

    The set is resampled to ``grid`` midpoint slices and ball radii are
    quantized to colatitude cells of width pi/grid, so the result is a
    genuine 2-D grid set.  Distances treat the base as the round sphere
    scaled to the set's base volume, and vertex paths are included (the
    completion of the cone metric).
    """
    if u.rho is None:
        raise ValidationError("dilation needs the round-base ball radii (rho)")
    if grid < 8:
        raise ResolutionError("grid too coarse")
    dcell = math.pi / grid
    if r != 0.0 and r < 2 * dcell:
        raise ResolutionError(f"enlargement {r} below two grid cells ({2 * dcell:.4g})")
    t = interior_grid(grid)
    if u.t.shape == t.shape and np.allclose(u.t, t):
        rho = u.rho.copy()
    else:
        rho = ball_radius(u.n, np.interp(t, u.t, u.frac))
    rho = _snap(rho, dcell)
    if r > 0.0:
        rho = _snap(_dilated_radii(t, rho, r, math.sqrt(u.base_scale)), dcell)
    frac = ball_fraction(u.n, rho)
    return SliceSet(n=u.n, base_volume=u.base_volume, t=t, frac=frac, rho=rho)


def neighborhood_volume(u: SliceSet, r: float, grid: int = 400) -> float:
    """Volume of the r-neighborhood of a slice-ball set (monotone in r)."""
    return slice_set_volume(dilate_slice_set(u, r, grid))


def minkowski_content(u: SliceSet, r_sequence, grid: int = 400) -> float:
    """Minkowski-content estimate liminf (Vol(B(U,r)) - Vol(U)) / r.

    Enlargements are snapped to whole grid cells (these are the radii the
    discrete dilation can realize without bias) and the last two quotients
    are Richardson-extrapolated to r -> 0.  For smooth boundaries this
    estimates the boundary area.
    """
    rs = np.asarray(r_sequence, dtype=float)
    if rs.ndim != 1 or rs.size < 1:
        raise DomainError("need at least one enlargement radius")
    if np.any(np.diff(rs) >= 0):
        raise DomainError("enlargements must be strictly decreasing")
    dcell = math.pi / grid
    snapped = np.round(rs / dcell) * dcell
    if np.any(snapped < 2 * dcell):
        raise ResolutionError("enlargements must span at least two grid cells")
    base = dilate_slice_set(u, 0.0, grid)
    vol0 = slice_set_volume(base)
    quotients = []
    for rk in snapped:
        quotients.append((neighborhood_volume(u, float(rk), grid) - vol0) / rk)
    if len(quotients) == 1:
        return quotients[0]
    r1, r2 = snapped[-2], snapped[-1]
    q1, q2 = quotients[-2], quotients[-1]
    return float((q2 * r1 - q1 * r2) / (r1 - r2))


# --------------------------------------------------------------------------
# Slice stability
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class StabilityInput:
    """Data for the second-variation test of a slice M x {t} in the cone.

    The slice has squared second fundamental form n cot^2(t) and normal
    Ricci curvature n; ``lambda1`` is the first nonzero Laplacian
    eigenvalue of the unit-normalized base.
    """

    t: float
    n: int
    lambda1: float

    def __post_init__(self):
        if not 0.0 < self.t < math.pi:
            raise DomainError("slice angle must lie in (0, pi)")
        if not self.lambda1 > 0:
            raise DomainError("lambda1 must be positive")

    @property
    def sigma2(self) -> float:
        return self.n * (math.cos(self.t) / math.sin(self.t)) ** 2

    @property
    def ricci_normal(self) -> float:
        return float(self.n)


def slice_stability_margin(inp: StabilityInput) -> float:
    """Stability margin lambda_1(slice) - (Ric(N, N) + sigma^2) of a slice.

    Nonnegative margin means the second variation Q(h, h) is nonnegative
    for mean-zero first-eigenfunction variations.  The slice at angle t has
    first eigenvalue lambda1 / sin^2(t), so the margin is

        lambda1 / sin^2 t - n - n cot^2 t = (lambda1 - n) / sin^2 t ,

    evaluated in the cancellation-free grouped form.  A round base
    (lambda1 = n) is degenerate-stable: the margin vanishes identically.
    """
    s2 = math.sin(inp.t) ** 2
    c2 = math.cos(inp.t) ** 2
    return (inp.lambda1 - inp.n * s2 - inp.n * c2) / s2
