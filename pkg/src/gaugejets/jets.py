"""First- and second-order jets of gauge transformations, matter, connections.

A gauge jet is stored right-trivialized: the value g, the logarithmic
derivative a_mu = (d_mu g) g^{-1}, and at second order the symmetrized
derivative s_munu = sym d_mu a_nu.  The antisymmetric remainder of d a is
not independent data: it is fixed by the flatness identity
d_mu a_nu - d_nu a_mu = [a_mu, a_nu], so
d_mu a_nu = s_munu + (1/2) [a_mu, a_nu].

The group laws below are the closed forms obtained by differentiating the
pointwise product of group-valued fields once and twice; the test suite
validates them against finite differences of sampled fields:

    (g, a) (h, b)       = (g h, a_mu + Ad(g) b_mu)
    (g, a, s) (h, b, t) = (g h,
                           a_mu + Ad(g) b_mu,
                           s_munu + Ad(g) t_munu
                             + sym_munu [a_mu, Ad(g) b_nu])

Connection jets (A, dA) split exactly into symmetric and antisymmetric
parts of dA; the curvature F_munu = d_mu A_nu - d_nu A_mu + [A_mu, A_nu]
is stored on the strict upper triangle (empty when n = 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lie_core import (
    ATOL,
    AlgebraElement,
    DimensionError,
    GroupElement,
    GroupSpec,
    InvariantError,
    RepVector,
    assert_antihermitian,
    assert_unitary,
    check_same_group,
    combine_atol,
    dagger,
    frobenius,
)
from .patch import Field, central_diff


def _check_finite(arr: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(arr)):
        raise InvariantError(f"{what} contains non-finite entries")


def _ad(g: np.ndarray, x: np.ndarray, stack_axes: int) -> np.ndarray:
    """Ad(g) applied to x carrying ``stack_axes`` extra axes before (N, N)."""
    gg = g.reshape(g.shape[:-2] + (1,) * stack_axes + g.shape[-2:])
    return gg @ x @ dagger(gg)


# ---------------------------------------------------------------------------
# jet fiber types

@dataclass(frozen=True, eq=False)
class Jet1Gauge:
    """First-order gauge jet (g, a); g (..., N, N), a (..., n, N, N)."""

    spec: GroupSpec
    g: np.ndarray
    a: np.ndarray
    atol: float | None = field(default=ATOL, compare=False, repr=False)

    def __post_init__(self):
        g = np.asarray(self.g, dtype=np.complex128)
        a = np.asarray(self.a, dtype=np.complex128)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "a", a)
        n = self.spec.n
        if g.shape[-2:] != (n, n) or a.shape[-2:] != (n, n) or a.ndim < 3:
            raise DimensionError("jet components must end in (n_axes, N, N) / (N, N)")
        if a.shape[: -3] != g.shape[: -2]:
            raise DimensionError("jet value and derivative have mismatched batch shapes")
        _check_finite(g, "jet value")
        _check_finite(a, "jet derivative")
        if self.atol is not None:
            assert_unitary(g, self.atol, self.spec.is_special)
            assert_antihermitian(a, self.atol, self.spec.is_special)

    @property
    def n_axes(self) -> int:
        return self.a.shape[-3]

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.g.shape[:-2]

    def group_element(self) -> GroupElement:
        return GroupElement(self.spec, self.g, atol=self.atol)


@dataclass(frozen=True, eq=False)
class Jet2Gauge:
    """Second-order gauge jet (g, a, s); s (..., n, n, N, N), s_munu = s_numu."""

    spec: GroupSpec
    g: np.ndarray
    a: np.ndarray
    s: np.ndarray
    atol: float | None = field(default=ATOL, compare=False, repr=False)

    def __post_init__(self):
        g = np.asarray(self.g, dtype=np.complex128)
        a = np.asarray(self.a, dtype=np.complex128)
        s = np.asarray(self.s, dtype=np.complex128)
        for name, arr in (("g", g), ("a", a), ("s", s)):
            object.__setattr__(self, name, arr)
        n = self.spec.n
        na = a.shape[-3] if a.ndim >= 3 else -1
        if g.shape[-2:] != (n, n) or a.shape[-2:] != (n, n) or s.shape[-4:] != (na, na, n, n):
            raise DimensionError("second-order jet components have inconsistent shapes")
        if a.shape[:-3] != g.shape[:-2] or s.shape[:-4] != g.shape[:-2]:
            raise DimensionError("jet components have mismatched batch shapes")
        for name, arr in (("g", g), ("a", a), ("s", s)):
            _check_finite(arr, f"jet component {name}")
        if np.any(s != np.swapaxes(s, -4, -3)):
            raise InvariantError("second-order component must be stored exactly symmetric")
        if self.atol is not None:
            assert_unitary(g, self.atol, self.spec.is_special)
            assert_antihermitian(a, self.atol, self.spec.is_special)
            assert_antihermitian(s, self.atol, self.spec.is_special)

    @property
    def n_axes(self) -> int:
        return self.a.shape[-3]

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.g.shape[:-2]

    def truncate(self) -> Jet1Gauge:
        return Jet1Gauge(self.spec, self.g, self.a, atol=self.atol)

    def group_element(self) -> GroupElement:
        return GroupElement(self.spec, self.g, atol=self.atol)

    def da(self) -> np.ndarray:
        """Full derivative of a, recovered from the flatness identity:
        d_mu a_nu = s_munu + (1/2) [a_mu, a_nu]."""
        comm = np.einsum("...mij,...njk->...mnik", self.a, self.a)
        comm = comm - np.swapaxes(comm, -4, -3)
        return self.s + 0.5 * comm


@dataclass(frozen=True, eq=False)
class JetMatter:
    """Matter value with first derivatives: phi (..., k), dphi (..., n, k)."""

    spec: GroupSpec
    phi: np.ndarray
    dphi: np.ndarray

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=np.complex128)
        dphi = np.asarray(self.dphi, dtype=np.complex128)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "dphi", dphi)
        k = self.spec.rep_dim
        if phi.shape[-1] != k or dphi.shape[-1] != k or dphi.ndim < 2:
            raise DimensionError("matter jet must end in (n_axes, k) / (k,)")
        if dphi.shape[:-2] != phi.shape[:-1]:
            raise DimensionError("matter jet components have mismatched batch shapes")
        _check_finite(phi, "matter value")
        _check_finite(dphi, "matter derivative")

    @property
    def n_axes(self) -> int:
        return self.dphi.shape[-2]

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.phi.shape[:-1]

    def value(self) -> RepVector:
        return RepVector(self.spec, self.phi)


@dataclass(frozen=True, eq=False)
class Variation:
    """Vertical (variation) vector at a matter value; dphi (..., k)."""

    spec: GroupSpec
    dphi: np.ndarray

    def __post_init__(self):
        dphi = np.asarray(self.dphi, dtype=np.complex128)
        object.__setattr__(self, "dphi", dphi)
        if dphi.shape[-1] != self.spec.rep_dim:
            raise DimensionError("variation dimension does not match the representation")
        _check_finite(dphi, "variation")

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.dphi.shape[:-1]


@dataclass(frozen=True, eq=False)
class JetConnection:
    """Gauge potential with derivatives: A (..., n, N, N), dA (..., n, n, N, N).

    dA[..., mu, nu, :, :] holds d_mu A_nu.
    """

    spec: GroupSpec
    A: np.ndarray
    dA: np.ndarray
    atol: float | None = field(default=ATOL, compare=False, repr=False)

    def __post_init__(self):
        A = np.asarray(self.A, dtype=np.complex128)
        dA = np.asarray(self.dA, dtype=np.complex128)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "dA", dA)
        n = self.spec.n
        na = A.shape[-3] if A.ndim >= 3 else -1
        if A.shape[-2:] != (n, n) or dA.shape[-4:] != (na, na, n, n):
            raise DimensionError("connection jet components have inconsistent shapes")
        if dA.shape[:-4] != A.shape[:-3]:
            raise DimensionError("connection jet components have mismatched batch shapes")
        _check_finite(A, "gauge potential")
        _check_finite(dA, "gauge potential derivative")
        if self.atol is not None:
            assert_antihermitian(A, self.atol, self.spec.is_special)
            assert_antihermitian(dA, self.atol, self.spec.is_special)

    @property
    def n_axes(self) -> int:
        return self.A.shape[-3]

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.A.shape[:-3]

    def potential(self) -> AlgebraElement:
        return AlgebraElement(self.spec, self.A, atol=self.atol)


def curvature_pairs(n: int) -> list[tuple[int, int]]:
    """Strict upper-triangle index pairs (mu, nu), mu < nu, lexicographic."""
    return [(mu, nu) for mu in range(n) for nu in range(mu + 1, n)]


@dataclass(frozen=True, eq=False)
class Curvature:
    """Field strength 2-form, strict upper triangle: comps (..., P, N, N).

    P = n(n-1)/2 with pairs ordered by curvature_pairs(n); antisymmetry
    F_numu = -F_munu is structural.  For n = 1 there are no components.
    """

    spec: GroupSpec
    n_axes: int
    comps: np.ndarray
    atol: float | None = field(default=ATOL, compare=False, repr=False)

    def __post_init__(self):
        comps = np.asarray(self.comps, dtype=np.complex128)
        object.__setattr__(self, "comps", comps)
        n = self.spec.n
        p = self.n_axes * (self.n_axes - 1) // 2
        if comps.shape[-2:] != (n, n) or comps.shape[-3] != p:
            raise DimensionError(
                f"curvature needs trailing shape ({p}, {n}, {n}), got {comps.shape}"
            )
        _check_finite(comps, "curvature")
        if self.atol is not None and p:
            assert_antihermitian(comps, self.atol, self.spec.is_special)

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.comps.shape[:-3]

    def dense(self) -> np.ndarray:
        """Expand to (..., n, n, N, N) with F_numu = -F_munu."""
        n, nn = self.n_axes, self.spec.n
        out = np.zeros(self.batch_shape + (n, n, nn, nn), dtype=np.complex128)
        for idx, (mu, nu) in enumerate(curvature_pairs(n)):
            out[..., mu, nu, :, :] = self.comps[..., idx, :, :]
            out[..., nu, mu, :, :] = -self.comps[..., idx, :, :]
        return out


# ---------------------------------------------------------------------------
# jets of sampled fields

def _require_field(f: Field, types, what: str):
    if not isinstance(f.value, types):
        raise TypeError(f"{what} expects a field of {types}, got {type(f.value).__name__}")
    return f.value


def jet1_of(gfield: Field) -> Field:
    """First-order jet of a group-valued field via central differences.

    The derivative slot a_mu = (D_mu g) g^dag is off the algebra by O(h^2),
    so the result is flagged numerical and skips the structural check.
    """
    v = _require_field(gfield, GroupElement, "jet1_of")
    p = gfield.patch
    g = v.entries
    dg = np.stack([central_diff(g, mu, p.spacing[mu]) for mu in range(p.dim)], axis=-3)
    a = dg @ dagger(g)[..., None, :, :]
    jet = Jet1Gauge(v.spec, g, a, atol=None)
    return Field(p, jet, margin=gfield.margin + 1, numerical=True, h=max(p.spacing))


def jet2_of(gfield: Field) -> Field:
    """Second-order jet: adds the symmetrized derivative of the a-field."""
    j1field = jet1_of(gfield)
    jet1: Jet1Gauge = j1field.value
    p = gfield.patch
    da = np.stack(
        [central_diff(jet1.a, mu, p.spacing[mu]) for mu in range(p.dim)], axis=-4
    )
    s = 0.5 * (da + np.swapaxes(da, -4, -3))
    jet = Jet2Gauge(jet1.spec, jet1.g, jet1.a, s, atol=None)
    return Field(p, jet, margin=gfield.margin + 2, numerical=True, h=max(p.spacing))


def jet_matter_of(phifield: Field) -> Field:
    """First-order jet (phi, d phi) of a sampled matter field."""
    v = _require_field(phifield, RepVector, "jet_matter_of")
    p = phifield.patch
    dphi = np.stack(
        [central_diff(v.entries, mu, p.spacing[mu]) for mu in range(p.dim)], axis=-2
    )
    jet = JetMatter(v.spec, v.entries, dphi)
    return Field(p, jet, margin=phifield.margin + 1, numerical=True, h=max(p.spacing))


def jet_connection_of(afield: Field) -> Field:
    """First-order jet (A, dA) of a sampled gauge potential.

    Differencing algebra-valued data stays in the algebra up to roundoff,
    but the division by 2h amplifies that roundoff, so the derivative slot
    skips the strict structural check like every finite-difference jet.
    """
    v = _require_field(afield, AlgebraElement, "jet_connection_of")
    p = afield.patch
    if v.entries.ndim < 3 or v.entries.shape[-3] != p.dim:
        raise DimensionError("gauge potential field must stack components on axis -3")
    dA = np.stack(
        [central_diff(v.entries, mu, p.spacing[mu]) for mu in range(p.dim)], axis=-4
    )
    jet = JetConnection(v.spec, v.entries, dA, atol=None)
    return Field(p, jet, margin=afield.margin + 1, numerical=True, h=max(p.spacing))


# ---------------------------------------------------------------------------
# jet group structure

def jet1_unit(spec: GroupSpec, n_axes: int, batch_shape: tuple[int, ...] = ()) -> Jet1Gauge:
    g = np.broadcast_to(np.eye(spec.n, dtype=np.complex128), batch_shape + (spec.n, spec.n)).copy()
    a = np.zeros(batch_shape + (n_axes, spec.n, spec.n), dtype=np.complex128)
    return Jet1Gauge(spec, g, a)


def jet2_unit(spec: GroupSpec, n_axes: int, batch_shape: tuple[int, ...] = ()) -> Jet2Gauge:
    j1 = jet1_unit(spec, n_axes, batch_shape)
    s = np.zeros(batch_shape + (n_axes, n_axes, spec.n, spec.n), dtype=np.complex128)
    return Jet2Gauge(spec, j1.g, j1.a, s)


def _check_jets(left, right) -> None:
    check_same_group(left, right)
    if left.n_axes != right.n_axes:
        raise DimensionError("jets have different numbers of base axes")


def jet1_mul(left: Jet1Gauge, right: Jet1Gauge) -> Jet1Gauge:
    """(g, a) (h, b) = (g h, a + Ad(g) b)."""
    _check_jets(left, right)
    g = left.g @ right.g
    a = left.a + _ad(left.g, right.a, 1)
    return Jet1Gauge(left.spec, g, a, atol=combine_atol(left, right))


def jet1_inv(jet: Jet1Gauge) -> Jet1Gauge:
    """(g, a)^{-1} = (g^{-1}, -Ad(g^{-1}) a)."""
    ginv = dagger(jet.g)
    return Jet1Gauge(jet.spec, ginv, -_ad(ginv, jet.a, 1), atol=jet.atol)


def jet2_mul(left: Jet2Gauge, right: Jet2Gauge) -> Jet2Gauge:
    """Second-order product; see the module docstring for the closed form."""
    _check_jets(left, right)
    g = left.g @ right.g
    adb = _ad(left.g, right.a, 1)
    a = left.a + adb
    cross = np.einsum("...mij,...njk->...mnik", left.a, adb) - np.einsum(
        "...nij,...mjk->...mnik", adb, left.a
    )
    s = left.s + _ad(left.g, right.s, 2) + 0.5 * (cross + np.swapaxes(cross, -4, -3))
    return Jet2Gauge(left.spec, g, a, s, atol=combine_atol(left, right))


def jet2_inv(jet: Jet2Gauge) -> Jet2Gauge:
    """(g, a, s)^{-1} = (g^{-1}, -Ad(g^{-1}) a, -Ad(g^{-1}) s)."""
    ginv = dagger(jet.g)
    return Jet2Gauge(
        jet.spec, ginv, -_ad(ginv, jet.a, 1), -_ad(ginv, jet.s, 2), atol=jet.atol
    )


def jet1_distance(x: Jet1Gauge, y: Jet1Gauge) -> np.ndarray:
    """Max Frobenius deviation over jet components, per batch entry."""
    return np.maximum(frobenius(x.g - y.g), np.max(frobenius(x.a - y.a), axis=-1))


def jet2_distance(x: Jet2Gauge, y: Jet2Gauge) -> np.ndarray:
    d1 = np.maximum(frobenius(x.g - y.g), np.max(frobenius(x.a - y.a), axis=-1))
    ds = np.max(frobenius(x.s - y.s), axis=(-2, -1))
    return np.maximum(d1, ds)


# ---------------------------------------------------------------------------
# connection jets: decomposition and curvature

def split_jet_connection(jc: JetConnection) -> tuple[np.ndarray, np.ndarray]:
    """Exact split of dA into symmetric and antisymmetric parts."""
    swapped = np.swapaxes(jc.dA, -4, -3)
    return 0.5 * (jc.dA + swapped), 0.5 * (jc.dA - swapped)


def merge_jet_connection(
    spec: GroupSpec, A: np.ndarray, sym: np.ndarray, antisym: np.ndarray, atol: float | None = ATOL
) -> JetConnection:
    return JetConnection(spec, A, sym + antisym, atol=atol)


def curvature(jc: JetConnection) -> Curvature:
    """F_munu = d_mu A_nu - d_nu A_mu + [A_mu, A_nu] on the strict upper triangle."""
    n = jc.n_axes
    pairs = curvature_pairs(n)
    nn = jc.spec.n
    comps = np.zeros(jc.batch_shape + (len(pairs), nn, nn), dtype=np.complex128)
    for idx, (mu, nu) in enumerate(pairs):
        amu = jc.A[..., mu, :, :]
        anu = jc.A[..., nu, :, :]
        comps[..., idx, :, :] = (
            jc.dA[..., mu, nu, :, :] - jc.dA[..., nu, mu, :, :] + amu @ anu - anu @ amu
        )
    return Curvature(jc.spec, n, comps, atol=jc.atol)


def maurer_cartan_defect(j1field: Field) -> Field:
    """Pointwise flatness defect d_mu a_nu - d_nu a_mu - [a_mu, a_nu].

    Zero to O(h^2) for jets of sampled group fields; returned as a scalar
    field of the max Frobenius norm over the n(n-1)/2 axis pairs.
    """
    jet = _require_field(j1field, Jet1Gauge, "maurer_cartan_defect")
    p = j1field.patch
    da = np.stack(
        [central_diff(jet.a, mu, p.spacing[mu]) for mu in range(p.dim)], axis=-4
    )
    pairs = curvature_pairs(p.dim)
    if not pairs:
        defect = np.zeros(p.extent)
    else:
        norms = []
        for mu, nu in pairs:
            amu = jet.a[..., mu, :, :]
            anu = jet.a[..., nu, :, :]
            d = da[..., mu, nu, :, :] - da[..., nu, mu, :, :] - (amu @ anu - anu @ amu)
            norms.append(frobenius(d))
        defect = np.max(np.stack(norms, axis=-1), axis=-1)
    return Field(p, defect, margin=j1field.margin + 1, numerical=True, h=max(p.spacing))


__all__ = [
    "Jet1Gauge",
    "Jet2Gauge",
    "JetMatter",
    "Variation",
    "JetConnection",
    "Curvature",
    "curvature_pairs",
    "jet1_of",
    "jet2_of",
    "jet_matter_of",
    "jet_connection_of",
    "jet1_unit",
    "jet2_unit",
    "jet1_mul",
    "jet1_inv",
    "jet2_mul",
    "jet2_inv",
    "jet1_distance",
    "jet2_distance",
    "split_jet_connection",
    "merge_jet_connection",
    "curvature",
    "maurer_cartan_defect",
]
