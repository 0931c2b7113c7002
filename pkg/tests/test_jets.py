"""Jet types, jet group laws, connection-jet decomposition, curvature."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaugejets.analytic import (
    Polynomial,
    ProductGauge,
    SingleGenerator,
    Sinusoid,
    sample_gauge,
)
from gaugejets.jets import (
    InvariantError,
    Jet1Gauge,
    Jet2Gauge,
    JetConnection,
    curvature,
    curvature_pairs,
    jet1_distance,
    jet1_inv,
    jet1_mul,
    jet1_of,
    jet1_unit,
    jet2_distance,
    jet2_inv,
    jet2_mul,
    jet2_of,
    jet2_unit,
    maurer_cartan_defect,
    merge_jet_connection,
    split_jet_connection,
)
from gaugejets.lie_core import (
    AlgebraElement,
    DimensionError,
    GroupElement,
    exp,
    group_spec,
    random_algebra_entries,
    seeded_rng,
)
from gaugejets.patch import Field, Patch

SU2 = group_spec("su2")
SU3 = group_spec("su3")
U1 = group_spec("u1")


def random_jet1(seed, spec, n, batch=()):
    rng = seeded_rng(seed, "test-jet1", spec.label())
    g = exp(AlgebraElement(spec, random_algebra_entries(rng, spec, batch))).entries
    a = random_algebra_entries(rng, spec, batch + (n,))
    return Jet1Gauge(spec, g, a)


def random_jet2(seed, spec, n, batch=()):
    rng = seeded_rng(seed, "test-jet2", spec.label())
    g = exp(AlgebraElement(spec, random_algebra_entries(rng, spec, batch))).entries
    a = random_algebra_entries(rng, spec, batch + (n,))
    s = random_algebra_entries(rng, spec, batch + (n, n))
    s = 0.5 * (s + np.swapaxes(s, -4, -3))
    return Jet2Gauge(spec, g, a, s)


def random_jet_connection(seed, spec, n, batch=()):
    rng = seeded_rng(seed, "test-jc", spec.label())
    A = random_algebra_entries(rng, spec, batch + (n,))
    dA = random_algebra_entries(rng, spec, batch + (n, n))
    return JetConnection(spec, A, dA)


class TestJetTypes:
    def test_second_order_symmetry_enforced(self):
        j = random_jet2(0, SU2, 2)
        s_bad = j.s.copy()
        s_bad[0, 1] += 1e-3
        with pytest.raises(InvariantError):
            Jet2Gauge(SU2, j.g, j.a, s_bad)

    def test_flatness_recovery(self):
        # da = s + (1/2)[a_mu, a_nu]; antisymmetrizing gives the bracket back
        j = random_jet2(1, SU2, 3)
        da = j.da()
        anti = da - np.swapaxes(da, -4, -3)
        for mu in range(3):
            for nu in range(3):
                amu, anu = j.a[mu], j.a[nu]
                assert (
                    np.max(np.abs(anti[mu, nu] - (amu @ anu - anu @ amu))) < 1e-14
                )

    def test_curvature_packed_antisymmetry(self):
        f = curvature(random_jet_connection(2, SU2, 3))
        dense = f.dense()
        assert np.array_equal(dense[..., 0, 1, :, :], -dense[..., 1, 0, :, :])
        assert np.max(np.abs(dense[..., 0, 0, :, :])) == 0.0


class TestJetGroupLaws:
    @pytest.mark.parametrize("spec", [U1, SU2, SU3])
    def test_unit_and_inverse_order1(self, spec):
        j = random_jet1(3, spec, 2, (64,))
        unit = jet1_unit(spec, 2, (64,))
        assert np.max(jet1_distance(jet1_mul(unit, j), j)) < 1e-14
        assert np.max(jet1_distance(jet1_mul(j, unit), j)) < 1e-14
        assert np.max(jet1_distance(jet1_mul(j, jet1_inv(j)), unit)) < 1e-13
        assert np.max(jet1_distance(jet1_mul(jet1_inv(j), j), unit)) < 1e-13

    @pytest.mark.parametrize("spec", [U1, SU2, SU3])
    def test_associativity_order2(self, spec):
        a = random_jet2(4, spec, 2, (64,))
        b = random_jet2(5, spec, 2, (64,))
        c = random_jet2(6, spec, 2, (64,))
        lhs = jet2_mul(jet2_mul(a, b), c)
        rhs = jet2_mul(a, jet2_mul(b, c))
        assert np.max(jet2_distance(lhs, rhs)) < 1e-12

    @pytest.mark.parametrize("spec", [U1, SU2, SU3])
    def test_unit_and_inverse_order2(self, spec):
        j = random_jet2(7, spec, 2, (64,))
        unit = jet2_unit(spec, 2, (64,))
        assert np.max(jet2_distance(jet2_mul(j, unit), j)) < 1e-14
        assert np.max(jet2_distance(jet2_mul(unit, j), j)) < 1e-14
        assert np.max(jet2_distance(jet2_mul(j, jet2_inv(j)), unit)) < 1e-13

    def test_u1_second_order_reduces_to_addition(self):
        # abelian case: all bracket terms vanish, s components simply add
        a = random_jet2(8, U1, 2)
        b = random_jet2(9, U1, 2)
        prod = jet2_mul(a, b)
        assert np.max(np.abs(prod.s - (a.s + b.s))) < 1e-15
        assert np.max(np.abs(prod.a - (a.a + b.a))) < 1e-15

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            jet1_mul(random_jet1(0, SU2, 2), random_jet1(0, SU3, 2))
        with pytest.raises(DimensionError):
            jet1_mul(random_jet1(0, SU2, 2), random_jet1(0, SU2, 3))

    @given(st.integers(0, 300))
    @settings(max_examples=20, deadline=None)
    def test_inverse_of_product(self, seed):
        j = random_jet1(seed, SU2, 2)
        k = random_jet1(seed + 1000, SU2, 2)
        lhs = jet1_inv(jet1_mul(j, k))
        rhs = jet1_mul(jet1_inv(k), jet1_inv(j))
        assert np.max(jet1_distance(lhs, rhs)) < 1e-13


class TestJetsOfSampledFields:
    def test_constant_field(self):
        p = Patch((8, 8))
        g0 = exp(AlgebraElement(SU2, random_algebra_entries(seeded_rng(0, "c"), SU2)))
        gfield = Field(
            p, GroupElement(SU2, np.broadcast_to(g0.entries, p.extent + (2, 2)).copy())
        )
        j2 = jet2_of(gfield)
        inner = p.interior(2).slices()
        assert np.max(np.abs(j2.value.a[inner])) == 0.0
        assert np.max(np.abs(j2.value.s[inner])) == 0.0
        assert j2.margin == 2 and j2.numerical
        assert j2.h == max(p.spacing)  # FD data carries the spacing it used

    def test_u1_plane_wave_fd_converges(self):
        k = (0.7, -0.4)

        def err(h):
            p = Patch((int(round(2.0 / h)) + 1,) * 2, spacing=h)
            sample = sample_gauge(
                p, U1, SingleGenerator(Polynomial(0.0, k), np.array([[1j]]))
            )
            jf = jet1_of(sample.values)
            inner = p.interior(1).slices()
            return np.max(jet1_distance(jf.value, sample.jet1.value)[inner])

        # FD error of the log-derivative of exp(i k.x) is |k_mu - sin(k_mu h)/h|,
        # about |k|^3 h^2 / 6
        e1, e2 = err(0.02), err(0.01)
        assert e1 < 5e-5
        assert 3.5 <= e1 / e2 <= 4.5

    def test_su2_single_generator_fd_matches_exact(self):
        p = Patch((20, 20), spacing=0.05)
        rng = seeded_rng(11, "sg")
        fam = SingleGenerator(
            Sinusoid(0.8, (0.6, -0.2), 0.3), random_algebra_entries(rng, SU2)
        )
        sample = sample_gauge(p, SU2, fam)
        j2 = jet2_of(sample.values)
        inner = p.interior(2).slices()
        assert np.max(jet2_distance(j2.value, sample.jet2.value)[inner]) <= 50 * 0.05**2

    @pytest.mark.parametrize("spec", [SU2, SU3])
    def test_functoriality_order1(self, spec):
        h = 0.05
        p = Patch((24, 24), spacing=h)
        rng = seeded_rng(12, "fun", spec.label())
        fams = [
            SingleGenerator(Sinusoid(0.5, (0.5, 0.3), 0.1), random_algebra_entries(rng, spec)),
            SingleGenerator(Polynomial(0.1, (0.4, -0.2), ((0.2, 0.1), (0.1, 0.0))),
                            random_algebra_entries(rng, spec)),
        ]
        s1 = sample_gauge(p, spec, fams[0])
        s2 = sample_gauge(p, spec, fams[1])
        prod_vals = Field(p, GroupElement(spec, s1.values.value.entries @ s2.values.value.entries))
        lhs = jet1_of(prod_vals).value
        rhs = jet1_mul(jet1_of(s1.values).value, jet1_of(s2.values).value)
        inner = p.interior(1).slices()
        assert np.max(jet1_distance(lhs, rhs)[inner]) <= 10 * h * h

    def test_functoriality_order2(self):
        h = 0.05
        p = Patch((24, 24), spacing=h)
        rng = seeded_rng(13, "fun2")
        fams = ProductGauge(
            (
                SingleGenerator(Sinusoid(0.5, (0.5, 0.3), 0.2), random_algebra_entries(rng, SU2)),
                SingleGenerator(Sinusoid(0.4, (-0.3, 0.4), 1.0), random_algebra_entries(rng, SU2)),
            )
        )
        single = SingleGenerator(
            Polynomial(0.0, (0.3, 0.2), ((0.1, 0.05), (0.05, -0.1))),
            random_algebra_entries(rng, SU2),
        )
        s1 = sample_gauge(p, SU2, fams)
        s2 = sample_gauge(p, SU2, single)
        prod_vals = Field(p, GroupElement(SU2, s1.values.value.entries @ s2.values.value.entries))
        lhs = jet2_of(prod_vals).value
        rhs = jet2_mul(jet2_of(s1.values).value, jet2_of(s2.values).value)
        inner = p.interior(2).slices()
        assert np.max(jet2_distance(lhs, rhs)[inner]) <= 50 * h * h

    def test_maurer_cartan_of_sampled_field(self):
        def defect(h):
            p = Patch((int(round(1.2 / h)) + 1,) * 2, spacing=h)
            rng = seeded_rng(14, "mc")
            fam = ProductGauge(
                (
                    SingleGenerator(Sinusoid(0.6, (0.5, -0.3), 0.0), random_algebra_entries(rng, SU2)),
                    SingleGenerator(Sinusoid(0.5, (0.2, 0.6), 0.7), random_algebra_entries(rng, SU2)),
                )
            )
            sample = sample_gauge(p, SU2, fam)
            d = maurer_cartan_defect(jet1_of(sample.values))
            return float(np.max(d.value[p.interior(2).slices()]))

        d1, d2 = defect(0.02), defect(0.01)
        assert d1 <= 50 * 0.02**2
        assert 3.5 <= d1 / d2 <= 4.5

    def test_exact_jets_satisfy_maurer_cartan_via_product_law(self):
        # analytic jets of a product family: flatness should hold to roundoff
        # when the defect is evaluated with the exact derivative of a
        j = random_jet2(21, SU2, 2)
        da = j.da()
        anti = da - np.swapaxes(da, -4, -3)
        comm = np.einsum("mij,njk->mnik", j.a, j.a) - np.einsum(
            "nij,mjk->mnik", j.a, j.a
        )
        assert np.max(np.abs(anti - comm)) < 1e-14


class TestSplitAndCurvature:
    def test_split_trivial_cases(self):
        jc = random_jet_connection(15, SU2, 3)
        sym0 = 0.5 * (jc.dA + np.swapaxes(jc.dA, -4, -3))
        sym_jc = JetConnection(SU2, jc.A, sym0)
        s, a = split_jet_connection(sym_jc)
        assert np.max(np.abs(a)) < 1e-15
        anti0 = 0.5 * (jc.dA - np.swapaxes(jc.dA, -4, -3))
        anti_jc = JetConnection(SU2, jc.A, anti0)
        s, a = split_jet_connection(anti_jc)
        assert np.max(np.abs(s)) < 1e-15

    def test_split_merge_round_trip(self):
        jc = random_jet_connection(16, SU3, 4)
        sym, anti = split_jet_connection(jc)
        back = merge_jet_connection(SU3, jc.A, sym, anti)
        assert np.max(np.abs(back.dA - jc.dA)) < 1e-15

    def test_zero_connection(self):
        n = 3
        jc = JetConnection(SU2, np.zeros((n, 2, 2)), np.zeros((n, n, 2, 2)))
        assert np.max(np.abs(curvature(jc).comps)) == 0.0

    def test_u1_affine_potential_oracle(self):
        # A_mu = i (c_mu + m_munu x^nu): F_munu = i (m_munu - m_numu)
        n = 2
        rng = seeded_rng(17, "affine")
        c = rng.uniform(-1, 1, n)
        m = rng.uniform(-1, 1, (n, n))
        A = 1j * c[:, None, None] * np.ones((n, 1, 1))
        dA = 1j * m.T[..., None, None] * np.ones((n, n, 1, 1))
        # d_mu A_nu = i m_numu: build dA[mu, nu] accordingly
        dA = np.zeros((n, n, 1, 1), dtype=complex)
        for mu in range(n):
            for nu in range(n):
                dA[mu, nu] = 1j * m[nu, mu]
        jc = JetConnection(U1, A, dA)
        f = curvature(jc)
        expected = 1j * (m[1, 0] - m[0, 1])
        assert abs(f.comps[0, 0, 0] - expected) < 1e-15

    def test_one_dimensional_curvature_is_empty(self):
        jc = random_jet_connection(18, SU2, 1)
        f = curvature(jc)
        assert f.comps.shape[-3] == 0
        assert curvature_pairs(1) == []

    def test_nonabelian_bracket_term(self):
        # constant potential, zero derivative: F = [A_mu, A_nu]
        rng = seeded_rng(19, "bracket")
        A = random_algebra_entries(rng, SU2, (2,))
        jc = JetConnection(SU2, A, np.zeros((2, 2, 2, 2)))
        f = curvature(jc)
        expected = A[0] @ A[1] - A[1] @ A[0]
        assert np.max(np.abs(f.comps[0] - expected)) < 1e-15
