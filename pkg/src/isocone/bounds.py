"""Yamabe-type lower bounds and the Einstein-manifold catalog.

Three calculators, all scale invariant under g -> c g (which sends the
Ricci bound to lam/c and the volume to c^{n/2} V):

* Ilias:      Y(M, [g]) >= n lam Vol^{2/n} for Ricci >= lam g > 0,
* Rv:         Y(M) >= n(n-1) Rv^{2/n} with Rv the sup of volume at
              Ricci >= (n-1) g,
* circle:     Y(M x S^1) >= (V/V_n)^{2/(n+1)} Y_{n+1} for Einstein bases
              (for merely Ricci-bounded bases the same value bounds
              Y(M x R) and the report is tagged accordingly).

The shipped catalog holds the round spheres, the Fubini-Study CP^2
(volume 2 pi^2 at Einstein constant 3), and the constant-curvature RP^3
(volume pi^2); products are assembled by rescaling every factor to a
common Einstein constant.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import DomainError, FormulaInapplicableError, SpecParseError, ValidationError
from .geometry import EinsteinData, sphere_volume, sphere_yamabe

__all__ = [
    "CatalogEntry",
    "BoundReport",
    "ilias_bound",
    "rv_bound",
    "product_einstein",
    "product_circle_bound",
    "compare_bounds",
    "builtin_catalog",
    "parse_manifold",
    "load_catalog",
]

REPORT_FIELDS = (
    "target",
    "formula",
    "n",
    "lambda",
    "V",
    "normalized_V",
    "ratio",
    "value",
    "provenance",
)


@dataclass(frozen=True)
class CatalogEntry:
    """A named manifold at its natural metric: dimension, volume, Ricci bound."""

    name: str
    n: int
    volume: float
    lam: float
    einstein: bool = True
    rv: float | None = None
    note: str = ""

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError("catalog entries need dimension >= 2")
        if not self.volume > 0:
            raise ValidationError("catalog entries need positive volume")

    def rescaled(self, target_lam: float) -> "CatalogEntry":
        """g -> c g with c = lam/target, so lam -> target and V -> c^{n/2} V."""
        if not self.lam > 0 or not target_lam > 0:
            raise DomainError("rescaling requires positive Ricci bounds")
        c = self.lam / target_lam
        return CatalogEntry(
            name=self.name,
            n=self.n,
            volume=c ** (self.n / 2.0) * self.volume,
            lam=target_lam,
            einstein=self.einstein,
            rv=self.rv,
            note=self.note,
        )

    def normalized(self) -> "CatalogEntry":
        """Rescale to the round Ricci bound lam = n - 1."""
        return self.rescaled(self.n - 1.0)

    def as_einstein_data(self) -> EinsteinData:
        return EinsteinData(
            n=self.n,
            volume=self.volume,
            lam=self.lam,
            einstein=self.einstein,
            name=self.name,
        )


@dataclass(frozen=True)
class BoundReport:
    """One named lower bound with its inputs and formula provenance."""

    target: str
    formula: str
    n: int
    lam: float
    volume: float
    value: float
    normalized_volume: float | None = None
    ratio: float | None = None
    provenance: str = ""

    def __post_init__(self):
        numerics = [self.lam, self.volume, self.value, self.normalized_volume, self.ratio]
        for x in numerics:
            if x is not None and not math.isfinite(x):
                raise ValidationError(f"non-finite bound report field: {x}")
        if not self.value >= 0:
            raise ValidationError("bound values must be nonnegative")

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "formula": self.formula,
            "n": self.n,
            "lambda": self.lam,
            "V": self.volume,
            "normalized_V": self.normalized_volume,
            "ratio": self.ratio,
            "value": self.value,
            "provenance": self.provenance,
        }


def ilias_bound(n: int, lam: float, volume: float) -> float:
    """n lam V^{2/n}, the Ricci-pinched lower bound for Y(M, [g])."""
    if n < 2 or not lam > 0 or not volume > 0:
        raise DomainError("Ilias bound needs n >= 2, lam > 0, V > 0")
    return n * lam * volume ** (2.0 / n)


def rv_bound(n: int, rv: float) -> float:
    """n(n-1) Rv^{2/n}; Rv = 0 (no positive Ricci metric) gives 0."""
    if n < 2:
        raise DomainError("Rv bound needs n >= 2")
    if rv < 0:
        raise DomainError("Rv must be nonnegative")
    if rv == 0:
        return 0.0
    return n * (n - 1) * rv ** (2.0 / n)


def product_einstein(entries, common_lam: float = 1.0) -> CatalogEntry:
    """Product entry at a common Ricci constant.

    Every factor is rescaled to ``common_lam``; dimensions add and
    rescaled volumes multiply.  The product is Einstein iff every factor
    is.  The choice of common constant only moves the product along its
    own rescaling orbit, so downstream bounds do not depend on it.
    """
    entries = list(entries)
    if not entries:
        raise DomainError("empty product")
    if any(not e.lam > 0 for e in entries):
        raise FormulaInapplicableError("every factor needs a positive Ricci bound")
    if len(entries) == 1:
        return entries[0]
    scaled = [e.rescaled(common_lam) for e in entries]
    volume = 1.0
    for e in scaled:
        volume *= e.volume
    return CatalogEntry(
        name="x".join(e.name for e in entries),
        n=sum(e.n for e in entries),
        volume=volume,
        lam=common_lam,
        einstein=all(e.einstein for e in entries),
        rv=None,
        note="product at common Ricci constant",
    )


def product_circle_bound(entry: CatalogEntry) -> BoundReport:
    """(V'/V_n)^{2/(n+1)} Y_{n+1} with V' the volume normalized to lam = n-1.

    Einstein entries get the circle-product tag (the bound is sharp for
    the product conformal class in the limit); Ricci-bounded non-Einstein
    entries are downgraded to the cylinder bound, whose hypothesis is just
    Ricci >= (n-1) g.
    """
    if not entry.lam > 0:
        raise FormulaInapplicableError(
            f"{entry.name!r} has no positive Ricci bound; no cone bound applies"
        )
    norm = entry.normalized()
    vn = sphere_volume(entry.n)
    ratio = norm.volume / vn
    value = ratio ** (2.0 / (entry.n + 1)) * sphere_yamabe(entry.n + 1)
    if entry.einstein:
        formula, target = "corollary1.4", "Y(MxS^1) lower bound"
    else:
        formula, target = "theorem1.2", "Y(MxR) lower bound"
    return BoundReport(
        target=target,
        formula=formula,
        n=entry.n,
        lam=entry.lam,
        volume=entry.volume,
        normalized_volume=norm.volume,
        ratio=ratio,
        value=value,
        provenance=f"(V'/V_n)^(2/(n+1)) Y_(n+1) for {entry.name}, V' at Ricci bound n-1",
    )


def compare_bounds(entry: CatalogEntry) -> list[BoundReport]:
    """All applicable bound reports for a catalog entry, side by side."""
    reports = []
    if entry.lam > 0:
        reports.append(
            BoundReport(
                target="Y(M,[g]) lower bound",
                formula="ilias",
                n=entry.n,
                lam=entry.lam,
                volume=entry.volume,
                value=ilias_bound(entry.n, entry.lam, entry.volume),
                provenance=f"n lam V^(2/n) for {entry.name}",
            )
        )
    if entry.rv is not None:
        reports.append(
            BoundReport(
                target="Y(M) lower bound",
                formula="rv",
                n=entry.n,
                lam=entry.lam,
                volume=entry.volume,
                value=rv_bound(entry.n, entry.rv),
                provenance=f"n(n-1) Rv^(2/n) with Rv = {entry.rv!r}",
            )
        )
    reports.append(product_circle_bound(entry))
    return reports


# --------------------------------------------------------------------------
# Catalog and manifold-spec parsing
# --------------------------------------------------------------------------

def _sphere_entry(n: int) -> CatalogEntry:
    vn = sphere_volume(n)
    return CatalogEntry(
        name=f"sphere:{n}",
        n=n,
        volume=vn,
        lam=n - 1.0,
        einstein=True,
        rv=vn,
        note="round metric of curvature 1",
    )


def builtin_catalog() -> dict[str, CatalogEntry]:
    return {
        "cp2": CatalogEntry(
            name="cp2",
            n=4,
            volume=2.0 * math.pi**2,
            lam=3.0,
            einstein=True,
            rv=2.0 * math.pi**2,
            note="Fubini-Study metric",
        ),
        "rp3": CatalogEntry(
            name="rp3",
            n=3,
            volume=math.pi**2,
            lam=2.0,
            einstein=True,
            rv=math.pi**2,
            note="constant sectional curvature 1",
        ),
    }


def load_catalog(path) -> dict[str, CatalogEntry]:
    """Read a JSON catalog: a list of {name, n, lambda, volume, einstein, rv?}."""
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, list):
        raise SpecParseError("catalog file must hold a JSON list")
    out = {}
    for item in raw:
        try:
            entry = CatalogEntry(
                name=item["name"],
                n=int(item["n"]),
                volume=float(item["volume"]),
                lam=float(item["lambda"]),
                einstein=bool(item.get("einstein", False)),
                rv=(float(item["rv"]) if item.get("rv") is not None else None),
                note=item.get("note", ""),
            )
        except (KeyError, TypeError, ValueError, ValidationError) as exc:
            raise SpecParseError(f"bad catalog item {item!r}: {exc}") from exc
        out[entry.name] = entry
    return out


def _resolve_single(token: str, catalog: dict[str, CatalogEntry]) -> CatalogEntry:
    token = token.strip()
    if not token:
        raise SpecParseError("empty manifold name")
    name, _, param = token.partition(":")
    if name == "sphere":
        if not param:
            raise SpecParseError("sphere needs a dimension, e.g. sphere:4")
        try:
            n = int(param)
        except ValueError as exc:
            raise SpecParseError(f"bad sphere dimension {param!r}") from exc
        if n < 2:
            raise SpecParseError("sphere dimension must be >= 2")
        return _sphere_entry(n)
    if token in catalog:
        return catalog[token]
    raise SpecParseError(f"unknown manifold {token!r}")


def parse_manifold(spec: str, extra_catalog: dict[str, CatalogEntry] | None = None) -> CatalogEntry:
    """Resolve a spec string like ``sphere:4``, ``cp2``, or
    ``product:sphere:2,sphere:2`` against the catalog."""
    catalog = builtin_catalog()
    if extra_catalog:
        catalog.update(extra_catalog)
    spec = spec.strip()
    if spec.startswith("product:"):
        tokens = spec[len("product:"):].split(",")
        factors = [_resolve_single(tok, catalog) for tok in tokens]
        return product_einstein(factors)
    return _resolve_single(spec, catalog)
