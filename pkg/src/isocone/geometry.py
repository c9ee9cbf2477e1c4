"""Closed-form geometry of round spheres and spherical cones.

A spherical cone over a closed base (M^n, g) is the suspension
X = M x [0, pi] with the ends collapsed to vertices and the warped metric

    sin^2(t) g + dt^2 ,

a genuine Riemannian metric away from the two vertices.  This module holds
the exact formulas the rest of the package consumes: sphere volumes and
Yamabe constants, sectional/Ricci curvature of the cone metric in a frame
that diagonalizes the base Ricci tensor, geodesic-ball volume and area
around a vertex, and the conformal identification of the punctured cone
with the cylinder M x R.

All angle arguments live in the open interval (0, pi); the vertices are
rejected because the metric degenerates there.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, ValidationError

__all__ = [
    "EinsteinData",
    "SphericalCone",
    "SphereConstants",
    "RadialProfile",
    "BishopWarning",
    "sphere_volume",
    "sphere_yamabe",
    "yamabe_coefficient",
    "critical_exponent",
    "sin_power_integral",
    "sin_power_integral_quad",
    "cone_sectional",
    "cone_ricci",
    "cone_ball_volume",
    "cone_ball_area",
    "conformal_map_h0",
    "conformal_factor_f0",
    "interior_grid",
]


class BishopWarning(UserWarning):
    """Normalized volume exceeds the round-sphere volume (Bishop violation)."""


def sphere_volume(n: int) -> float:
    """Volume of the unit round sphere S^n.

    V_n = 2 pi^{(n+1)/2} / Gamma((n+1)/2).  Exact closed forms in low
    dimension: V_1 = 2 pi, V_2 = 4 pi, V_3 = 2 pi^2, V_4 = 8 pi^2 / 3,
    V_5 = pi^3.
    """
    if n < 1:
        raise DomainError(f"sphere dimension must be >= 1, got {n}")
    return 2.0 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2)


def sphere_yamabe(n: int) -> float:
    """Yamabe constant of the round conformal class on S^n.

    Y_n = n (n-1) V_n^{2/n}; this is the largest Yamabe constant in
    dimension n.
    """
    if n < 2:
        raise DomainError(f"Yamabe constant needs dimension >= 2, got {n}")
    return n * (n - 1) * sphere_volume(n) ** (2.0 / n)


def yamabe_coefficient(n: int) -> float:
    """Gradient coefficient a_n = 4(n-1)/(n-2) of the Yamabe functional."""
    if n < 3:
        raise DomainError(f"a_n requires dimension >= 3, got {n}")
    return 4.0 * (n - 1) / (n - 2)


def critical_exponent(n: int) -> float:
    """Critical Sobolev exponent p_n = 2n/(n-2)."""
    if n < 3:
        raise DomainError(f"p_n requires dimension >= 3, got {n}")
    return 2.0 * n / (n - 2)


@dataclass(frozen=True)
class SphereConstants:
    """The dimensional constants attached to S^n (n >= 3)."""

    n: int
    volume: float
    yamabe: float
    a: float
    p: float

    @classmethod
    def for_dimension(cls, n: int) -> "SphereConstants":
        return cls(
            n=n,
            volume=sphere_volume(n),
            yamabe=sphere_yamabe(n),
            a=yamabe_coefficient(n),
            p=critical_exponent(n),
        )


# --------------------------------------------------------------------------
# sin^n antiderivative
# --------------------------------------------------------------------------

def sin_power_integral(n: int, x) -> np.ndarray | float:
    """Integral of sin^n(t) over [0, x] by the reduction recursion.

    I_n(x) = (-cos(x) sin^{n-1}(x) + (n-1) I_{n-2}(x)) / n with
    I_0 = x and I_1 = 1 - cos(x).  Vectorized over x.
    """
    if n < 0:
        raise DomainError("sin power must be nonnegative")
    xa = np.asarray(x, dtype=float)
    even = xa  # I_0
    odd = 1.0 - np.cos(xa)  # I_1
    if n == 0:
        out = even
    elif n == 1:
        out = odd
    else:
        s, c = np.sin(xa), np.cos(xa)
        prev = even if n % 2 == 0 else odd
        for k in range(2 + (n % 2), n + 1, 2):
            prev = (-c * s ** (k - 1) + (k - 1) * prev) / k
        out = prev
    return float(out) if np.isscalar(x) else out


def sin_power_integral_quad(n: int, x: float) -> float:
    """Adaptive-quadrature fallback for the sin^n antiderivative.

    Kept as an independent cross-check of :func:`sin_power_integral`; the
    two must agree to 1e-10.
    """
    val, _ = quad(lambda t: math.sin(t) ** n, 0.0, x, limit=200)
    return val


# --------------------------------------------------------------------------
# Domain types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EinsteinData:
    """A closed base manifold abstracted to (dimension, volume, Ricci bound).

    ``lam`` is the Ricci lower bound, Ricci(g) >= lam * g; when ``einstein``
    is set it is the Einstein constant and the scalar curvature is exactly
    n * lam.  Volumes are in the metric units fixed by ``lam``.
    """

    n: int
    volume: float
    lam: float
    einstein: bool = False
    scal: float | None = None
    name: str = ""

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError(f"base dimension must be >= 2, got {self.n}")
        if not self.volume > 0:
            raise ValidationError(f"volume must be positive, got {self.volume}")
        if self.einstein:
            expected = self.n * self.lam
            if self.scal is None:
                object.__setattr__(self, "scal", expected)
            elif not math.isclose(self.scal, expected, rel_tol=1e-12, abs_tol=1e-12):
                raise ValidationError(
                    f"Einstein data needs scal = n*lam = {expected}, got {self.scal}"
                )

    def rescaled(self, target_lam: float) -> "EinsteinData":
        """Metric rescaling g -> c g with c = lam/target, so the Ricci bound
        becomes ``target_lam`` and the volume becomes c^{n/2} V."""
        if not self.lam > 0 or not target_lam > 0:
            raise DomainError("rescaling requires positive Ricci bounds")
        c = self.lam / target_lam
        return EinsteinData(
            n=self.n,
            volume=c ** (self.n / 2.0) * self.volume,
            lam=target_lam,
            einstein=self.einstein,
            scal=(self.n * target_lam if self.einstein else None),
            name=self.name,
        )


class SphericalCone:
    """The (n+1)-dimensional spherical cone sin^2(t) g + dt^2 over a base.

    Construction normalizes the base so its Ricci bound is n-1 (the round
    value); if the normalized volume exceeds V_n, Bishop's inequality is
    violated and a :class:`BishopWarning` is emitted (the arithmetic still
    proceeds).
    """

    def __init__(self, base: EinsteinData):
        if not base.lam > 0:
            raise DomainError("cone construction needs a positive Ricci bound")
        self.base = base.rescaled(base.n - 1.0)
        self.n = self.base.n
        self.dim = self.n + 1
        if self.base.volume > sphere_volume(self.n) * (1.0 + 1e-12):
            warnings.warn(
                f"normalized volume {self.base.volume:.6g} exceeds "
                f"V_{self.n} = {sphere_volume(self.n):.6g}",
                BishopWarning,
                stacklevel=2,
            )

    @property
    def base_volume(self) -> float:
        return self.base.volume

    @property
    def total_volume(self) -> float:
        """Vol(X) = V * integral_0^pi sin^n(t) dt."""
        return self.base.volume * sin_power_integral(self.n, math.pi)

    def __repr__(self):
        return f"SphericalCone(n={self.n}, base_volume={self.base.volume:.6g})"


@dataclass
class RadialProfile:
    """A sampled real function of one coordinate (cone angle or line).

    The grid must be strictly increasing; values are samples at the grid
    points.  Used both for radial functions of t in (0, pi) and for line
    functions on [-T, T].
    """

    t: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.t.ndim != 1 or self.t.shape != self.values.shape:
            raise ValidationError("grid and values must be 1-D arrays of equal length")
        if self.t.size < 2 or not np.all(np.diff(self.t) > 0):
            raise ValidationError("grid must be strictly increasing with >= 2 points")

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "value"])
            for ti, vi in zip(self.t, self.values):
                writer.writerow([repr(float(ti)), repr(float(vi))])

    @classmethod
    def from_csv(cls, path) -> "RadialProfile":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if [h.strip() for h in header] != ["t", "value"]:
                raise ValidationError(f"unexpected profile header: {header}")
            rows = [(float(a), float(b)) for a, b in reader]
        t, values = zip(*rows)
        return cls(t=np.array(t), values=np.array(values))


def interior_grid(num: int) -> np.ndarray:
    """Midpoint grid of ``num`` cells on (0, pi), staying clear of the vertices."""
    if num < 2:
        raise DomainError("grid needs at least 2 cells")
    dt = math.pi / num
    return (np.arange(num) + 0.5) * dt


# --------------------------------------------------------------------------
# Curvature of the cone metric
# --------------------------------------------------------------------------

def _check_angle(t) -> np.ndarray:
    ta = np.asarray(t, dtype=float)
    if np.any(ta <= 0.0) or np.any(ta >= math.pi):
        raise DomainError("angle must lie in the open interval (0, pi)")
    return ta


def cone_sectional(k_base, t):
    """Sectional curvatures of the cone metric at angle t.

    For a plane spanned by base directions the curvature is
    (K_base - cos^2 t) / sin^2 t; every plane containing the radial
    direction has curvature 1.  Returns ``(K_tangential, K_radial)``.
    """
    ta = _check_angle(t)
    k_tan = (np.asarray(k_base, dtype=float) - np.cos(ta) ** 2) / np.sin(ta) ** 2
    k_rad = np.ones_like(k_tan)
    if np.isscalar(t) and np.isscalar(k_base):
        return float(k_tan), float(k_rad)
    return k_tan, k_rad


def cone_ricci(ricci_eigen_base, t: float) -> np.ndarray:
    """Ricci eigenvalues of the cone metric in a g-orthonormal eigenframe.

    Given the n base Ricci eigenvalues r_i, the cone Ricci tensor is
    diagonal in the frame {v_i / sin t, d/dt} with entries

        (r_i - (n-1) cos^2 t + sin^2 t) / sin^2 t    (tangential)
        n                                            (radial, last entry)

    Mixed terms vanish, so the eigenvalue form is exact.  An Einstein base
    with r_i = n-1 gives all eigenvalues equal to n.
    """
    ta = _check_angle(t)
    if ta.ndim != 0:
        raise DomainError("cone_ricci takes a single angle")
    eigs = np.asarray(ricci_eigen_base, dtype=float)
    if eigs.ndim != 1 or eigs.size < 2:
        raise DomainError("need a list of >= 2 base Ricci eigenvalues")
    n = eigs.size
    s2, c2 = math.sin(float(ta)) ** 2, math.cos(float(ta)) ** 2
    tangential = (eigs - (n - 1) * c2 + s2) / s2
    return np.concatenate([tangential, [float(n)]])


# --------------------------------------------------------------------------
# Geodesic balls around a vertex
# --------------------------------------------------------------------------

def cone_ball_volume(cone: SphericalCone, r) -> np.ndarray | float:
    """Volume of the vertex ball B(S, r): V * integral_0^r sin^n(t) dt."""
    ra = np.asarray(r, dtype=float)
    if np.any(ra < 0.0) or np.any(ra > math.pi):
        raise DomainError("ball radius must lie in [0, pi]")
    out = cone.base_volume * sin_power_integral(cone.n, ra)
    return float(out) if np.isscalar(r) else out


def cone_ball_area(cone: SphericalCone, r) -> np.ndarray | float:
    """Boundary area of the vertex ball: sin^n(r) * V.

    The degenerate radii r in {0, pi} return 0 rather than raising; the
    boundary collapses to a vertex there.
    """
    ra = np.asarray(r, dtype=float)
    if np.any(ra < 0.0) or np.any(ra > math.pi):
        raise DomainError("ball radius must lie in [0, pi]")
    out = np.sin(ra) ** cone.n * cone.base_volume
    return float(out) if np.isscalar(r) else out


# --------------------------------------------------------------------------
# Conformal identification with the cylinder
# --------------------------------------------------------------------------

def conformal_map_h0(t):
    """The coordinate diffeomorphism h0 : (0, pi) -> R of the cone/cylinder map.

    h0(t) = arccosh(1/sin t) for t in [pi/2, pi), extended to (0, pi/2) by
    the odd reflection h0(t) = -h0(pi - t).  It satisfies cosh(h0(t)) sin t = 1
    and h0'(t) = 1/sin t, so cosh^{-2} composed with h0 recovers sin^2 t.
    """
    ta = _check_angle(t)
    upper = np.arccosh(1.0 / np.sin(ta))
    out = np.where(ta >= math.pi / 2, upper, -upper)
    return float(out) if np.isscalar(t) else out


def conformal_factor_f0(u):
    """Conformal factor cosh^{-2}(u) relating the cylinder metric to the cone."""
    ua = np.asarray(u, dtype=float)
    out = 1.0 / np.cosh(ua) ** 2
    return float(out) if np.isscalar(u) else out
