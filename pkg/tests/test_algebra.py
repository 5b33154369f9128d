import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gup_spectra.algebra import (
    DeformationParams,
    HarmonicOscillator,
    PoschlTeller,
    Representation,
    Swanson,
    coefficients,
    p_domain,
)
from gup_spectra.errors import (
    DomainMismatch,
    IntrinsicNoncommutativity,
    ParameterError,
    UnsupportedPair,
)
from gup_spectra.operators import (
    apply_P,
    apply_X,
    commutator_residual,
    default_grid,
    pt_conjugate,
    pt_signs,
    uniform_grid,
)

R = Representation
ALL_MODELS_REPS = [
    (HarmonicOscillator(), R.PI1), (HarmonicOscillator(), R.PI3),
    (HarmonicOscillator(), R.PI4), (HarmonicOscillator(), R.PI4_PRIME),
    (Swanson(0.1, 0.2), R.PI1), (Swanson(0.1, 0.2), R.PI3), (Swanson(0.1, 0.2), R.PI4),
    (PoschlTeller(1.0, 0.5), R.PI1), (PoschlTeller(1.0, 0.5), R.PI3),
    (PoschlTeller(1.0, 0.5), R.PI4),
]


class TestParams:
    def test_tau_check(self):
        p = DeformationParams(hbar=2.0, mass=0.5, omega=4.0, tau=0.8)
        assert p.tau_check == pytest.approx(0.8 / (0.5 * 4.0 * 2.0))
        assert DeformationParams(tau=0.0).tau_check == 0.0

    @pytest.mark.parametrize("kwargs", [
        dict(hbar=0.0), dict(mass=-1.0), dict(omega=0.0),
        dict(tau=-0.1), dict(tau=float("nan")), dict(omega=float("inf")),
    ])
    def test_validation(self, kwargs):
        with pytest.raises(ParameterError):
            DeformationParams(**kwargs)

    def test_domains(self):
        p = DeformationParams(tau=0.25)
        assert not p_domain(R.PI1, p).finite
        assert not p_domain(R.PI4_PRIME, p).finite
        d3 = p_domain(R.PI3, p)
        assert d3.hi == pytest.approx(math.pi / (2 * math.sqrt(0.25)))
        d4 = p_domain(R.PI4, p)
        assert d4.imaginary_segment
        assert d4.hi == pytest.approx(2.0)


class TestCoefficientTable:
    def test_oscillator_reference_values(self):
        p = DeformationParams(tau=0.2)
        fgh = coefficients(HarmonicOscillator(), R.PI1, p)
        assert fgh.f(0.0) == pytest.approx(0.5, abs=1e-15)
        assert fgh.g(0.0) == pytest.approx(0.0, abs=1e-15)
        assert fgh.h(1.0) == pytest.approx(0.5, abs=1e-15)

    def test_commutative_limit_kills_deformation(self):
        p = DeformationParams(tau=0.0)
        fgh = coefficients(HarmonicOscillator(), R.PI1, p)
        ps = np.linspace(-3, 3, 11)
        assert np.allclose(fgh.f(ps), 0.5, atol=1e-15)
        assert np.allclose(fgh.g(ps), 0.0, atol=1e-15)

    def test_swanson_symmetric_commutative_matches_oscillator(self):
        p = DeformationParams(tau=0.0)
        sw = coefficients(Swanson(0.0, 0.0), R.PI1, p)
        ho = coefficients(HarmonicOscillator(), R.PI1, p)
        ps = np.linspace(-2, 2, 9)
        assert np.allclose(sw.f(ps), ho.f(ps), atol=1e-15)
        assert np.allclose(sw.g(ps), ho.g(ps), atol=1e-15)
        assert np.allclose(sw.h(ps), ho.h(ps), atol=1e-15)

    def test_required_errors(self):
        p = DeformationParams(tau=0.3)
        with pytest.raises(IntrinsicNoncommutativity):
            coefficients(PoschlTeller(1.0, 0.5), R.PI1, DeformationParams(tau=0.0))
        with pytest.raises(UnsupportedPair):
            coefficients(HarmonicOscillator(), R.PI2, p)
        with pytest.raises(UnsupportedPair):
            coefficients(Swanson(0.1, 0.2), R.PI4_PRIME, p)
        with pytest.raises(UnsupportedPair):
            coefficients(PoschlTeller(1.0, 0.5), R.PI4_PRIME, p)
        with pytest.raises(ParameterError):
            coefficients(Swanson(-3.0, 0.0), R.PI1, DeformationParams(tau=0.1))

    @pytest.mark.parametrize("model,rep", ALL_MODELS_REPS)
    def test_derivatives_match_finite_differences(self, model, rep):
        p = DeformationParams(tau=0.3)
        fgh = coefficients(model, rep, p)
        dom = fgh.domain
        lo = dom.lo if math.isfinite(dom.lo) else -4.0
        hi = dom.hi if math.isfinite(dom.hi) else 4.0
        if isinstance(model, PoschlTeller):
            lo = max(lo, 0.05 * (hi if math.isfinite(hi) else 1.0))
        span = hi - lo
        xs = np.linspace(lo + 0.1 * span, hi - 0.1 * span, 17)
        h = 1e-4
        for fn, dfn in ((fgh.f, fgh.df), (fgh.g, fgh.dg)):
            stencil = (fn(xs - 2 * h) - 8 * fn(xs - h)
                       + 8 * fn(xs + h) - fn(xs + 2 * h)) / (12 * h)
            scale = np.maximum(np.abs(dfn(xs)), 1.0)
            assert np.max(np.abs(dfn(xs) - stencil) / scale) < 1e-6
        stencil2 = (-fgh.f(xs - 2 * h) + 16 * fgh.f(xs - h) - 30 * fgh.f(xs)
                    + 16 * fgh.f(xs + h) - fgh.f(xs + 2 * h)) / (12 * h * h)
        scale = np.maximum(np.abs(fgh.ddf(xs)), 1.0)
        assert np.max(np.abs(fgh.ddf(xs) - stencil2) / scale) < 1e-6

    @pytest.mark.parametrize("model,rep", ALL_MODELS_REPS)
    def test_f_positive_on_interior(self, model, rep):
        p = DeformationParams(tau=0.3)
        fgh = coefficients(model, rep, p)
        dom = fgh.domain
        lo = dom.lo if math.isfinite(dom.lo) else -6.0
        hi = dom.hi if math.isfinite(dom.hi) else 6.0
        if isinstance(model, PoschlTeller):
            lo = max(lo, 1e-3)
        span = hi - lo
        xs = np.linspace(lo + 1e-3 * span, hi - 1e-3 * span, 101)
        assert np.all(fgh.f(xs) > 0)


def _gauss(sigma):
    return lambda p: np.exp(-sigma * p ** 2)


class TestOperatorActions:
    def test_momentum_multipliers(self):
        params = DeformationParams(tau=1.0)  # tau_check = 1
        grid = np.array([0.25, math.pi / 4, 1.0])
        psi = np.ones(3, dtype=complex)
        assert np.allclose(apply_P(R.PI1, params, psi, grid), grid)
        # tangent multiplier equals 1 at p = pi/4 when tau_check = 1
        p3 = apply_P(R.PI3, params, psi, grid)
        assert p3[1] == pytest.approx(1.0, abs=1e-15)
        # primed variant at p = 1: 1/sqrt(2)
        p4p = apply_P(R.PI4_PRIME, params, psi, grid)
        assert p4p[2] == pytest.approx(1 / math.sqrt(2), abs=1e-15)
        # segment variant is -i p / u
        p4 = apply_P(R.PI4, params, psi, grid)
        assert p4[2] == pytest.approx(-1j / math.sqrt(2), abs=1e-15)

    def test_position_commutative_limit(self):
        params = DeformationParams(tau=0.0)
        grid = uniform_grid(-12, 12, 2048)
        psi = _gauss(0.8)(grid)
        got = apply_X(R.PI1, params, psi, grid)
        exact = 1j * (-2 * 0.8 * grid) * psi
        assert np.max(np.abs(got - exact)) < 1e-10

    def test_position_pi3_is_plain_derivative(self):
        params = DeformationParams(tau=0.4)
        grid = default_grid(R.PI3, params, 2048)
        psi = _gauss(1.0)(grid)
        got = apply_X(R.PI3, params, psi, grid)
        exact = 1j * (-2.0 * grid) * psi
        assert np.max(np.abs(got - exact)) < 1e-8

    def test_segment_position_product_rule(self):
        params = DeformationParams(tau=0.2)
        tc = params.tau_check
        grid = uniform_grid(-12, 12, 4096)
        psi = _gauss(0.6)(grid)
        got = apply_X(R.PI4, params, psi, grid)
        u = np.sqrt(1 + tc * grid ** 2)
        du = tc * grid / u
        exact = -(du * psi + u * (-2 * 0.6 * grid) * psi)
        idx = np.searchsorted(grid, [-1.7, -0.4, 0.0, 0.9, 2.3])
        assert np.max(np.abs(got[idx] - exact[idx])) < 1e-9

    def test_grid_domain_check(self):
        params = DeformationParams(tau=1.0)
        grid = uniform_grid(-3, 3, 512)  # exceeds pi/2
        with pytest.raises(DomainMismatch):
            apply_P(R.PI3, params, np.ones(512), grid)


class TestCommutators:
    def test_canonical_pair(self):
        params = DeformationParams(tau=0.0)
        grid = uniform_grid(-12, 12, 2048)
        assert commutator_residual(R.PI1, params, _gauss(1.0)(grid), grid) < 1e-10

    @pytest.mark.parametrize("rep", [R.PI1, R.PI2, R.PI3, R.PI4])
    def test_deformed_relation_all_reps(self, rep):
        params = DeformationParams(tau=0.3)
        grid = default_grid(rep, params, 2048)
        suite = [np.exp(-s * grid ** 2) for s in (0.5, 1.0, 2.0)]
        suite += [grid * np.exp(-s * grid ** 2) for s in (0.5, 1.0)]
        for psi in suite:
            assert commutator_residual(rep, params, psi, grid) < 1e-7

    def test_primed_variant_sign_flip(self):
        params = DeformationParams(tau=0.3)
        grid = default_grid(R.PI4_PRIME, params, 2048)
        psi = _gauss(1.0)(grid)
        assert commutator_residual(R.PI4_PRIME, params, psi, grid) < 1e-8
        assert commutator_residual(R.PI4_PRIME, params, psi, grid,
                                   reference_sign=+1) > 0.05

    @settings(max_examples=15, deadline=None)
    @given(sigma=st.floats(0.5, 2.0), tau=st.floats(0.05, 1.0))
    def test_residual_property(self, sigma, tau):
        params = DeformationParams(tau=tau)
        for rep in (R.PI1, R.PI4):
            grid = default_grid(rep, params, 2048)
            psi = np.exp(-sigma * grid ** 2)
            assert commutator_residual(rep, params, psi, grid) < 1e-7


class TestPTAction:
    @pytest.mark.parametrize("rep", [R.PI1, R.PI2, R.PI3, R.PI4])
    def test_conjugation_signs(self, rep):
        params = DeformationParams(tau=0.3)
        grid = default_grid(rep, params, 2048)
        psi = (1.0 + 0.5j) * np.exp(-0.8 * grid ** 2) \
            + 0.3j * grid * np.exp(-1.1 * grid ** 2)
        sx, sp = pt_signs(rep)
        lhs_x = pt_conjugate(apply_X(rep, params, pt_conjugate(psi), grid))
        rhs_x = sx * apply_X(rep, params, psi, grid)
        assert np.max(np.abs(lhs_x - rhs_x)) < 1e-8 * np.max(np.abs(rhs_x))
        lhs_p = pt_conjugate(apply_P(rep, params, pt_conjugate(psi), grid))
        rhs_p = sp * apply_P(rep, params, psi, grid)
        assert np.max(np.abs(lhs_p - rhs_p)) < 1e-12 * np.max(np.abs(rhs_p))

    def test_sign_table(self):
        assert pt_signs(R.PI1) == (-1, +1)
        assert pt_signs(R.PI3) == (-1, +1)
        assert pt_signs(R.PI4) == (+1, -1)


class TestSimilarity:
    def test_pi2_is_conjugated_pi1(self):
        params = DeformationParams(tau=0.3)
        tc = params.tau_check
        grid = uniform_grid(-12, 12, 4096)
        psi = _gauss(0.9)(grid).astype(complex)
        s = (1 + tc * grid ** 2) ** -0.5
        lhs = apply_X(R.PI2, params, psi, grid)
        rhs = s * apply_X(R.PI1, params, psi / s, grid)
        mask = np.abs(grid) < 8
        scale = np.max(np.abs(rhs))
        assert np.max(np.abs((lhs - rhs)[mask])) < 1e-8 * scale
