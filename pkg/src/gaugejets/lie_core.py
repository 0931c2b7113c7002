"""Matrix Lie groups, Lie algebras, and their linear representation actions.

Conventions used throughout the package:

* Fiber data lives in the trailing axes of numpy arrays; any leading axes
  are batch axes (grid points, sample batches, component stacks).  All
  operations broadcast over batch axes.
* Group elements are unitary complex N x N matrices; the SU families are
  additionally special (det = 1).  Algebra elements are anti-hermitian,
  traceless for SU.
* The inner product on the algebra is <X, Y> = -tr(XY).  On anti-hermitian
  matrices this is positive definite and coincides with Re tr(X^dag Y), so
  the induced norm is the Frobenius norm.
"""

from __future__ import annotations

import enum
import zlib
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

ATOL = 1e-12


class DimensionError(ValueError):
    """Mismatched group, representation, or tuple dimensions."""


class InvariantError(ValueError):
    """A value violates the structural invariants of its type."""


class GroupFamily(str, enum.Enum):
    U1 = "u1"
    SU2 = "su2"
    SU3 = "su3"
    SUN = "sun"


_FIXED_N = {GroupFamily.U1: 1, GroupFamily.SU2: 2, GroupFamily.SU3: 3}


@dataclass(frozen=True)
class GroupSpec:
    """Structure group plus the linear representation space it acts on.

    ``rep_dim`` selects the representation: equal to the matrix dimension N
    for the fundamental (defining) representation, equal to the algebra
    dimension for the adjoint.  For U(1) both dimensions are 1 and the
    fundamental (phase) action is used.
    """

    family: GroupFamily
    n: int = 0
    rep_dim: int = 0

    def __post_init__(self):
        family = GroupFamily(self.family)
        object.__setattr__(self, "family", family)
        n = self.n or _FIXED_N.get(family, 0)
        if family in _FIXED_N and n != _FIXED_N[family]:
            raise DimensionError(f"{family.value} has fixed matrix dimension {_FIXED_N[family]}")
        if family is GroupFamily.SUN and n < 2:
            raise DimensionError("SU(N) requires N >= 2")
        object.__setattr__(self, "n", n)
        rep_dim = self.rep_dim or n
        if rep_dim < 1:
            raise DimensionError("rep_dim must be >= 1")
        if rep_dim not in (n, self.algebra_dim):
            raise DimensionError(
                f"rep_dim {rep_dim} selects neither the fundamental ({n}) "
                f"nor the adjoint ({self.algebra_dim}) representation"
            )
        object.__setattr__(self, "rep_dim", rep_dim)

    @property
    def is_special(self) -> bool:
        return self.family is not GroupFamily.U1

    @property
    def algebra_dim(self) -> int:
        if self.family is GroupFamily.U1:
            return 1
        return self.n * self.n - 1

    @property
    def rep_kind(self) -> str:
        # U(1) has n == algebra_dim == 1; the fundamental (phase) action wins.
        return "fundamental" if self.rep_dim == self.n else "adjoint"

    def label(self) -> str:
        return f"su({self.n})" if self.family is GroupFamily.SUN else self.family.value


def group_spec(name: str, n: int | None = None, rep_dim: int | None = None) -> GroupSpec:
    """Build a GroupSpec from a family name like 'u1', 'su2', 'su3', 'sun'."""
    return GroupSpec(GroupFamily(name.lower()), n or 0, rep_dim or 0)


# ---------------------------------------------------------------------------
# array helpers

def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose on the trailing two axes."""
    return np.conj(np.swapaxes(m, -1, -2))


def frobenius(m: np.ndarray) -> np.ndarray:
    """Frobenius norm over the trailing two axes; batch axes survive."""
    return np.sqrt(np.sum(np.abs(m) ** 2, axis=(-2, -1)))


def _c128(a) -> np.ndarray:
    return np.asarray(a, dtype=np.complex128)


def _max_or_zero(a: np.ndarray) -> float:
    return float(np.max(a)) if a.size else 0.0


def assert_unitary(m: np.ndarray, atol: float, special: bool) -> None:
    n = m.shape[-1]
    defect = _max_or_zero(frobenius(dagger(m) @ m - np.eye(n)))
    if defect > atol:
        raise InvariantError(f"matrix is not unitary to {atol:g} (defect {defect:.3e})")
    if special:
        det_defect = _max_or_zero(np.abs(np.linalg.det(m) - 1.0))
        if det_defect > atol:
            raise InvariantError(f"determinant differs from 1 by {det_defect:.3e}")


def assert_antihermitian(m: np.ndarray, atol: float, traceless: bool) -> None:
    defect = _max_or_zero(frobenius(dagger(m) + m))
    if defect > atol:
        raise InvariantError(f"matrix is not anti-hermitian to {atol:g} (defect {defect:.3e})")
    if traceless:
        tr = _max_or_zero(np.abs(np.trace(m, axis1=-2, axis2=-1)))
        if tr > atol:
            raise InvariantError(f"matrix has trace of magnitude {tr:.3e}")


def _check_matrix_shape(entries: np.ndarray, n: int, what: str) -> None:
    if entries.ndim < 2 or entries.shape[-1] != n or entries.shape[-2] != n:
        raise DimensionError(f"{what} must have trailing shape ({n}, {n}), got {entries.shape}")
    if not np.all(np.isfinite(entries)):
        raise InvariantError(f"{what} contains non-finite entries")


# ---------------------------------------------------------------------------
# fiber value types

@dataclass(frozen=True, eq=False)
class GroupElement:
    """One or more group elements; entries shaped (..., N, N)."""

    spec: GroupSpec
    entries: np.ndarray
    atol: float | None = field(default=ATOL, compare=False, repr=False)

    def __post_init__(self):
        entries = _c128(self.entries)
        object.__setattr__(self, "entries", entries)
        _check_matrix_shape(entries, self.spec.n, "group element")
        if self.atol is not None:
            assert_unitary(entries, self.atol, self.spec.is_special)

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.entries.shape[:-2]

    def inverse(self) -> "GroupElement":
        # unitarity makes the conjugate transpose the exact inverse
        return GroupElement(self.spec, dagger(self.entries), atol=self.atol)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """One or more algebra elements; entries shaped (..., N, N).

    Connection components A_mu are stored as a single AlgebraElement whose
    axis -3 indexes mu.  ``atol=None`` skips the structural check, used for
    finite-difference data that sits off the algebra by O(h^2).
    """

    spec: GroupSpec
    entries: np.ndarray
    atol: float | None = field(default=ATOL, compare=False, repr=False)

    def __post_init__(self):
        entries = _c128(self.entries)
        object.__setattr__(self, "entries", entries)
        _check_matrix_shape(entries, self.spec.n, "algebra element")
        if self.atol is not None:
            assert_antihermitian(entries, self.atol, self.spec.is_special)

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.entries.shape[:-2]


def _check_vector(entries: np.ndarray, k: int, what: str) -> None:
    if entries.ndim < 1 or entries.shape[-1] != k:
        raise DimensionError(f"{what} must have trailing shape ({k},), got {entries.shape}")
    if not np.all(np.isfinite(entries)):
        raise InvariantError(f"{what} contains non-finite entries")


@dataclass(frozen=True, eq=False)
class RepVector:
    """Point of the representation space; entries shaped (..., k)."""

    spec: GroupSpec
    entries: np.ndarray

    def __post_init__(self):
        entries = _c128(self.entries)
        object.__setattr__(self, "entries", entries)
        _check_vector(entries, self.spec.rep_dim, "representation vector")

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.entries.shape[:-1]


@dataclass(frozen=True, eq=False)
class RepTangent:
    """Tangent vector at a point of the (linear) representation space.

    Derivative tuples d_mu phi are stored with axis -2 indexing mu.
    """

    spec: GroupSpec
    entries: np.ndarray

    def __post_init__(self):
        entries = _c128(self.entries)
        object.__setattr__(self, "entries", entries)
        _check_vector(entries, self.spec.rep_dim, "representation tangent")

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.entries.shape[:-1]


def check_same_group(a, b) -> None:
    if a.spec.family is not b.spec.family or a.spec.n != b.spec.n:
        raise DimensionError(f"group mismatch: {a.spec.label()} vs {b.spec.label()}")


def combine_atol(*objs) -> float | None:
    """None (no structural check) wins; carried by finite-difference data."""
    atols = [getattr(o, "atol", ATOL) for o in objs]
    return None if any(a is None for a in atols) else ATOL


# ---------------------------------------------------------------------------
# algebra basis

@lru_cache(maxsize=None)
def _basis_matrices(family: GroupFamily, n: int) -> np.ndarray:
    """Orthonormal basis of the algebra under <X, Y> = -tr(XY).

    Returned array has shape (dim, N, N).  For su(N): normalized real
    antisymmetric pairs, imaginary symmetric pairs, and imaginary diagonal
    traceless matrices; for u(1): the single element i.
    """
    if family is GroupFamily.U1:
        return np.array([[[1j]]], dtype=np.complex128)
    out = []
    for j in range(n):
        for k in range(j + 1, n):
            m = np.zeros((n, n), dtype=np.complex128)
            m[j, k], m[k, j] = 1.0, -1.0
            out.append(m / np.sqrt(2.0))
            m = np.zeros((n, n), dtype=np.complex128)
            m[j, k], m[k, j] = 1j, 1j
            out.append(m / np.sqrt(2.0))
    for l in range(1, n):
        d = np.zeros(n, dtype=np.complex128)
        d[:l] = 1j
        d[l] = -1j * l
        out.append(np.diag(d) / np.sqrt(l * (l + 1)))
    return np.stack(out)


def algebra_basis(spec: GroupSpec) -> np.ndarray:
    """Orthonormal algebra basis, shape (algebra_dim, N, N)."""
    return _basis_matrices(spec.family, spec.n)


def algebra_inner(x: AlgebraElement, y: AlgebraElement) -> np.ndarray:
    """<X, Y> = -tr(XY); real for anti-hermitian arguments."""
    check_same_group(x, y)
    return -np.einsum("...ij,...ji->...", x.entries, y.entries).real


def algebra_coords(x: AlgebraElement) -> np.ndarray:
    """Real coordinates of X in the orthonormal basis, shape (..., dim)."""
    basis = algebra_basis(x.spec)
    return -np.einsum("aij,...ji->...a", basis, x.entries).real


def algebra_from_coords(spec: GroupSpec, coords: np.ndarray) -> AlgebraElement:
    basis = algebra_basis(spec)
    entries = np.tensordot(np.asarray(coords, dtype=np.float64), basis, axes=(-1, 0))
    return AlgebraElement(spec, entries)


# ---------------------------------------------------------------------------
# group and algebra operations

def exp(x: AlgebraElement) -> GroupElement:
    """Matrix exponential of an algebra element.

    Anti-hermitian X is normal, so iX is hermitian and a unitary
    eigendecomposition gives exp(X) = V diag(exp(i lam)) V^dag to machine
    precision, batched over any leading axes.
    """
    lam, v = np.linalg.eigh(-1j * x.entries)
    phases = np.exp(1j * lam)
    entries = np.einsum("...ij,...j,...kj->...ik", v, phases, np.conj(v))
    return GroupElement(x.spec, entries)


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    check_same_group(g, h)
    return GroupElement(g.spec, g.entries @ h.entries, atol=combine_atol(g, h))


def inverse(g: GroupElement) -> GroupElement:
    return g.inverse()


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Commutator [X, Y] = XY - YX."""
    check_same_group(x, y)
    entries = x.entries @ y.entries - y.entries @ x.entries
    return AlgebraElement(x.spec, entries, atol=combine_atol(x, y))


def adjoint(g: GroupElement, x: AlgebraElement) -> AlgebraElement:
    """Ad(g) X = g X g^{-1}, with g^{-1} = g^dag."""
    check_same_group(g, x)
    entries = g.entries @ x.entries @ dagger(g.entries)
    return AlgebraElement(x.spec, entries, atol=combine_atol(g, x))


def adjoint_raw(g: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Conjugation on raw arrays; x may carry extra stack axes before (N, N)."""
    extra = x.ndim - g.ndim
    gg = g.reshape(g.shape[:-2] + (1,) * extra + g.shape[-2:]) if extra > 0 else g
    return gg @ x @ dagger(gg)


def rep_matrix(g: GroupElement) -> np.ndarray:
    """Representation matrix R(g), shape (..., k, k)."""
    if g.spec.rep_kind == "fundamental":
        return g.entries
    basis = algebra_basis(g.spec)
    conj = np.einsum("...ij,bjk,...lk->...bil", g.entries, basis, np.conj(g.entries))
    return -np.einsum("aij,...bji->...ab", basis, conj).real.astype(np.complex128)


def rep_algebra_matrix(x: AlgebraElement) -> np.ndarray:
    """Infinitesimal representation matrix r(X) = dR(X), shape (..., k, k)."""
    if x.spec.rep_kind == "fundamental":
        return x.entries
    basis = algebra_basis(x.spec)
    ad = np.einsum("...ij,bjk->...bik", x.entries, basis) - np.einsum(
        "bij,...jk->...bik", basis, x.entries
    )
    return -np.einsum("aij,...bji->...ab", basis, ad).real.astype(np.complex128)


def _apply(mat: np.ndarray, vec: np.ndarray) -> np.ndarray:
    """Matrix-vector product; vec may carry extra stack axes before (k,)."""
    extra = (vec.ndim - 1) - (mat.ndim - 2)
    mm = mat.reshape(mat.shape[:-2] + (1,) * extra + mat.shape[-2:]) if extra > 0 else mat
    return np.einsum("...ij,...j->...i", mm, vec)


def rep_act(g: GroupElement, q: RepVector | RepTangent):
    """Linear action of g on the representation space (or its tangent)."""
    check_same_group(g, q)
    entries = _apply(rep_matrix(g), q.entries)
    return type(q)(q.spec, entries)


def fundamental_vector_field(x: AlgebraElement, q: RepVector) -> RepTangent:
    """Infinitesimal generator at q: d/dt|_0 of exp(tX) acting on q = r(X) q."""
    check_same_group(x, q)
    return RepTangent(q.spec, _apply(rep_algebra_matrix(x), q.entries))


def tangent_act(
    g: GroupElement, x: AlgebraElement, q: RepVector, qdot: RepTangent
) -> tuple[RepVector, RepTangent]:
    """Action of the right-trivialized tangent-group pair (g, X) on (q, qdot).

    Returns (g.q, g.qdot + X_Q(g.q)); X is the right-trivialized velocity
    component of a group curve through g.
    """
    gq = rep_act(g, q)
    gqdot = rep_act(g, qdot)
    drift = fundamental_vector_field(x, gq)
    return gq, RepTangent(q.spec, gqdot.entries + drift.entries)


# ---------------------------------------------------------------------------
# deterministic random sampling

def seeded_rng(seed: int, *labels) -> np.random.Generator:
    """Generator derived deterministically from a seed plus string/int labels."""
    keys = [zlib.crc32(str(label).encode()) for label in labels]
    return np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFF, *keys]))


def random_algebra_entries(rng: np.random.Generator, spec: GroupSpec, shape: tuple[int, ...] = ()) -> np.ndarray:
    """Random algebra elements with matrix entries bounded by 1, shape (*shape, N, N)."""
    dim = spec.algebra_dim
    coords = rng.uniform(-1.0, 1.0, size=(*shape, dim))
    entries = np.tensordot(coords, algebra_basis(spec), axes=(-1, 0))
    peak = np.max(np.abs(entries), axis=(-2, -1), keepdims=True)
    return entries / np.maximum(1.0, peak)


def random_algebra_element(seed: int, spec: GroupSpec, shape: tuple[int, ...] = ()) -> AlgebraElement:
    rng = seeded_rng(seed, "algebra", spec.label())
    return AlgebraElement(spec, random_algebra_entries(rng, spec, shape))


def random_group_element(seed: int, spec: GroupSpec, shape: tuple[int, ...] = ()) -> GroupElement:
    """exp of a bounded random algebra element; unitary by construction."""
    rng = seeded_rng(seed, "group", spec.label())
    return exp(AlgebraElement(spec, random_algebra_entries(rng, spec, shape)))


def random_rep_vector(seed: int, spec: GroupSpec, shape: tuple[int, ...] = ()) -> RepVector:
    rng = seeded_rng(seed, "repvec", spec.label(), spec.rep_dim)
    k = spec.rep_dim
    entries = rng.uniform(-1, 1, (*shape, k)) + 1j * rng.uniform(-1, 1, (*shape, k))
    return RepVector(spec, entries)
