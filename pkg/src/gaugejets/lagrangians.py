"""Matter and gauge-field densities, minimal coupling, and action integrals.

Index contractions use the Euclidean metric by default (densities stay
positive and invariance tests unambiguous); a Minkowski flag flips the
signs of the spatial contractions and affects nothing else.  The algebra
inner product is -tr(XY), whose induced norm is the Frobenius norm.

The covariant derivative is D_mu phi = d_mu phi + A_mu . phi (infinitesimal
representation action).  With the affine potential transformation
Ad(g) A - a this sign makes D equivariant: D_{g.A}(g.phi) = g . D_A phi,
which is what turns a globally invariant density into a gauge invariant
one under minimal coupling.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .lie_core import (
    AlgebraElement,
    DimensionError,
    GroupSpec,
    RepTangent,
    RepVector,
    check_same_group,
    frobenius,
    rep_algebra_matrix,
    random_algebra_entries,
    seeded_rng,
)
from .jets import Curvature, JetConnection, JetMatter, curvature, split_jet_connection
from .patch import Field, Region, integrate


class MatterKind(str, enum.Enum):
    FREE = "free"
    PHI4 = "phi4"
    BROKEN = "broken"


class GaugeKind(str, enum.Enum):
    YANG_MILLS = "yang_mills"
    FROBENIUS_CURVATURE = "frobenius_curvature"
    BROKEN_GAUGE = "broken_gauge"


@dataclass(frozen=True)
class MatterLagrangianSpec:
    kind: MatterKind
    lam: float = 0.0
    v: float = 0.0
    c: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", MatterKind(self.kind))
        if self.lam < 0:
            raise ValueError("quartic coupling must be non-negative")

    @property
    def globally_invariant(self) -> bool:
        return self.kind is not MatterKind.BROKEN


@dataclass(frozen=True)
class GaugeLagrangianSpec:
    kind: GaugeKind
    coupling: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", GaugeKind(self.kind))
        if self.coupling <= 0:
            raise ValueError("gauge coupling must be positive")


def _metric_signs(n: int, metric: str) -> np.ndarray:
    if metric == "euclidean":
        return np.ones(n)
    if metric == "minkowski":
        signs = -np.ones(n)
        signs[0] = 1.0
        return signs
    raise ValueError(f"unknown metric {metric!r}")


# ---------------------------------------------------------------------------
# matter sector

def covariant_derivative(A: AlgebraElement, jm: JetMatter) -> tuple[RepVector, RepTangent]:
    """(phi, D_A phi) with D_mu phi = d_mu phi + A_mu . phi."""
    check_same_group(A, jm)
    if A.entries.ndim < 3 or A.entries.shape[-3] != jm.n_axes:
        raise DimensionError("gauge potential and matter jet have different base dimensions")
    ra = rep_algebra_matrix(A)
    coupled = jm.dphi + np.einsum("...mij,...j->...mi", ra, jm.phi)
    return RepVector(jm.spec, jm.phi), RepTangent(jm.spec, coupled)


def matter_density_vec(
    spec: MatterLagrangianSpec, phi: RepVector, dphi: RepTangent, metric: str = "euclidean"
) -> np.ndarray:
    """Density on (phi, velocity tuple); the globally invariant layer.

    free: sum_mu <dphi_mu, dphi_mu>; phi4 adds lam (|phi|^2 - v^2)^2;
    broken adds c Re(phi_1) and is the negative control.
    """
    if dphi.entries.ndim < 2:
        raise DimensionError("expected a stacked velocity tuple (..., n_axes, k)")
    signs = _metric_signs(dphi.entries.shape[-2], metric)
    kinetic = np.einsum(
        "m,...mj->...", signs, (dphi.entries.conj() * dphi.entries).real
    )
    out = kinetic
    if spec.kind is MatterKind.PHI4:
        norm2 = np.sum((phi.entries.conj() * phi.entries).real, axis=-1)
        out = out + spec.lam * (norm2 - spec.v**2) ** 2
    elif spec.kind is MatterKind.BROKEN:
        out = out + spec.c * phi.entries[..., 0].real
    return out


@dataclass(frozen=True)
class MinimallyCoupledDensity:
    """Density on (A, phi, dphi) obtained by replacing d with D_A."""

    spec: MatterLagrangianSpec
    metric: str = "euclidean"

    def __call__(self, A: AlgebraElement, jm: JetMatter) -> np.ndarray:
        phi, dphi = covariant_derivative(A, jm)
        return matter_density_vec(self.spec, phi, dphi, metric=self.metric)


def minimal_coupling(
    spec: MatterLagrangianSpec, metric: str = "euclidean", allow_noninvariant: bool = False
) -> MinimallyCoupledDensity:
    """Promote a globally invariant matter density to a gauge invariant one.

    Rejects the broken kind unless explicitly allowed: the composite is
    well defined but not gauge invariant, and is only useful as a negative
    control.
    """
    if not spec.globally_invariant and not allow_noninvariant:
        raise ValueError(
            "matter density is not invariant under the group action; "
            "minimal coupling would not produce a gauge invariant density "
            "(pass allow_noninvariant=True to build the negative control)"
        )
    return MinimallyCoupledDensity(spec, metric)


# ---------------------------------------------------------------------------
# gauge sector

def _curvature_quadratic(f: Curvature, n_axes: int, metric: str) -> np.ndarray:
    from .jets import curvature_pairs

    pairs = curvature_pairs(n_axes)
    if not pairs:
        return np.zeros(f.batch_shape)
    signs = _metric_signs(n_axes, metric)
    weights = np.array([signs[mu] * signs[nu] for mu, nu in pairs])
    return np.einsum("p,...p->...", weights, frobenius(f.comps) ** 2)


def gauge_density(
    spec: GaugeLagrangianSpec, jc: JetConnection, metric: str = "euclidean"
) -> np.ndarray:
    """First-order gauge-field density.

    yang_mills and frobenius_curvature read the connection jet only
    through its field strength; broken_gauge additionally reads the
    symmetric derivative and serves as the negative control.
    """
    f = curvature(jc)
    quad = _curvature_quadratic(f, jc.n_axes, metric)
    if spec.kind is GaugeKind.YANG_MILLS:
        return quad / (2.0 * spec.coupling**2)
    if spec.kind is GaugeKind.FROBENIUS_CURVATURE:
        return quad
    sym, _ = split_jet_connection(jc)
    sym_term = np.sum(frobenius(sym) ** 2, axis=(-2, -1))
    return (quad + sym_term) / (2.0 * spec.coupling**2)


@dataclass(frozen=True)
class FactoredGaugeDensity:
    """Gauge-field density of the form L(A, dA) = L_curv(F_(A, dA))."""

    curvature_density: Callable[[Curvature], np.ndarray]

    def __call__(self, jc: JetConnection) -> np.ndarray:
        return np.asarray(self.curvature_density(curvature(jc)))


def utiyama_factor(
    curvature_density: Callable[[Curvature], np.ndarray],
    spec: GroupSpec,
    n_axes: int,
    seed: int = 0,
    probes: int = 64,
    tol: float = 1e-10,
) -> FactoredGaugeDensity:
    """Lift a conjugation-invariant curvature density to the connection jet.

    Probes the invariance of ``curvature_density`` under conjugation on
    random samples first and refuses non-invariant input, since the lift
    would then not be gauge invariant.
    """
    from .actions import act_curvature
    from .jets import curvature_pairs
    from .lie_core import GroupElement, exp as lie_exp

    n_pairs = len(curvature_pairs(n_axes))
    rng = seeded_rng(seed, "utiyama-probe", spec.label(), n_axes)
    comps = random_algebra_entries(rng, spec, (probes, max(n_pairs, 0)))
    f = Curvature(spec, n_axes, comps)
    g = lie_exp(AlgebraElement(spec, random_algebra_entries(rng, spec, (probes,))))
    moved = act_curvature(GroupElement(spec, g.entries), f)
    defect = np.max(np.abs(np.asarray(curvature_density(moved)) - np.asarray(curvature_density(f))))
    if defect > tol:
        raise ValueError(
            f"curvature density is not conjugation invariant (defect {defect:.3e} > {tol:g}); "
            "it does not define a gauge invariant density on connection jets"
        )
    return FactoredGaugeDensity(curvature_density)


# ---------------------------------------------------------------------------
# action functionals

def action_functional(density_field: Field, region: Region) -> float:
    """Integral of a real scalar density field over a compact region."""
    return integrate(density_field, region)


def total_action(gauge_density_field: Field, matter_density_field: Field, region: Region) -> float:
    """Sum of the gauge and matter action integrals over the same region."""
    return action_functional(gauge_density_field, region) + action_functional(
        matter_density_field, region
    )


def mechanics_action(
    density: Callable[[RepVector, RepTangent], np.ndarray], curve: Field, interval: Region
) -> float:
    """Action of a curve on a one-dimensional patch.

    ``curve`` is a Field[JetMatter] over a 1-d patch (value and velocity);
    ``density`` maps (q, qdot) to a real scalar.
    """
    if curve.patch.dim != 1:
        raise DimensionError("mechanics actions require a one-dimensional patch")
    jm: JetMatter = curve.value
    q = RepVector(jm.spec, jm.phi)
    qdot = RepTangent(jm.spec, jm.dphi[..., 0, :])
    vals = np.asarray(density(q, qdot), dtype=float)
    return integrate(curve.with_value(vals), interval)


def free_velocity_density(q: RepVector, qdot: RepTangent) -> np.ndarray:
    """|qdot|^2; the mechanics analogue of the free matter density."""
    return np.sum((qdot.entries.conj() * qdot.entries).real, axis=-1)


__all__ = [
    "MatterKind",
    "GaugeKind",
    "MatterLagrangianSpec",
    "GaugeLagrangianSpec",
    "covariant_derivative",
    "matter_density_vec",
    "MinimallyCoupledDensity",
    "minimal_coupling",
    "gauge_density",
    "FactoredGaugeDensity",
    "utiyama_factor",
    "action_functional",
    "total_action",
    "mechanics_action",
    "free_velocity_density",
]
