import math

import numpy as np
import pytest

from gup_spectra.algebra import (
    DeformationParams,
    HarmonicOscillator,
    PoschlTeller,
    Representation,
    Swanson,
)
from gup_spectra.errors import (
    DomainError,
    IntrinsicNoncommutativity,
    ParameterError,
    UnsupportedOrder,
    UnsupportedPair,
)
from gup_spectra.oracle import matrix_element_direct
from gup_spectra.solutions import (
    classify_physical,
    gram_matrix,
    metric_generic,
    native_quadrature,
    solve,
    transformed_potential,
    wavefunction_eval,
)

R = Representation
SOLVABLE = [
    (HarmonicOscillator(), rep) for rep in (R.PI1, R.PI2, R.PI3, R.PI4)
] + [
    (Swanson(0.1, 0.2), rep) for rep in (R.PI1, R.PI2, R.PI3, R.PI4)
] + [
    (PoschlTeller(1.0, 0.5), rep) for rep in (R.PI1, R.PI2, R.PI3, R.PI4)
]


class TestEnergies:
    def test_oscillator_reference_level(self):
        sol = solve(HarmonicOscillator(), R.PI1, DeformationParams(tau=0.2))
        assert sol.energy(0) == pytest.approx(0.5524937810560445, abs=1e-13)

    def test_oscillator_commutative_limit(self):
        sol = solve(HarmonicOscillator(), R.PI1, DeformationParams(tau=0.0))
        for n in range(8):
            assert abs(sol.energy(n) - (n + 0.5)) < 1e-10

    def test_energies_identical_across_representations(self):
        params = DeformationParams(tau=0.4)
        for model in (HarmonicOscillator(), Swanson(0.1, 0.2), PoschlTeller(1.0, 0.5)):
            base = solve(model, R.PI1, params).energies(5)
            for rep in (R.PI2, R.PI3, R.PI4):
                other = solve(model, rep, params).energies(5)
                assert np.allclose(other, base, rtol=0, atol=1e-14)

    @pytest.mark.parametrize("model", [
        HarmonicOscillator(), Swanson(0.1, 0.2), PoschlTeller(1.0, 0.5)])
    def test_strictly_increasing_in_real_regime(self, model):
        sol = solve(model, R.PI1, DeformationParams(tau=0.3))
        es = np.real(sol.energies(8))
        assert np.all(np.diff(es) > 0)

    def test_swanson_reference_point(self):
        sol = solve(Swanson(15.0, 0.1), R.PI1, DeformationParams(tau=0.5))
        assert sol.energy(0) == pytest.approx(2.9, abs=1e-10)

    def test_swanson_commutative_limit(self):
        sol = solve(Swanson(0.1, 0.2), R.PI1, DeformationParams(tau=1e-8))
        for n in range(6):
            expect = (n + 0.5) * math.sqrt(1.0 - 4 * 0.1 * 0.2)
            assert abs(sol.energy(n) - expect) < 1e-6

    def test_inverse_square_reference_point(self):
        sol = solve(PoschlTeller(1.0, 0.5), R.PI1, DeformationParams(tau=0.25))
        a = sol.parameters["a_plus"]
        b = sol.parameters["b_plus"]
        assert a.real == pytest.approx(2.0615528128088303, abs=1e-13)
        assert b.real == pytest.approx(2.8722813232690143, abs=1e-13)
        assert sol.energy(0) == pytest.approx(4.4012984443103385, abs=1e-12)

    def test_inverse_square_needs_deformation(self):
        with pytest.raises(IntrinsicNoncommutativity):
            solve(PoschlTeller(1.0, 0.5), R.PI1, DeformationParams(tau=0.0))


class TestClassification:
    def test_swanson_point_claims(self):
        def real_at(alpha, beta, tau):
            cls = classify_physical(Swanson(alpha, beta), R.PI1,
                                    DeformationParams(tau=tau))
            return cls.physical and not cls.complex_spectrum

        assert real_at(2.0, 0.1, 0.0)
        assert not real_at(2.0, 0.1, 0.5)
        assert not real_at(15.0, 0.1, 0.0)
        assert real_at(15.0, 0.1, 0.5)

    def test_primed_variant_unbounded(self):
        cls = classify_physical(HarmonicOscillator(), R.PI4_PRIME,
                                DeformationParams(tau=0.3))
        assert cls.unbounded_below and not cls.physical
        sol = solve(HarmonicOscillator(), R.PI4_PRIME, DeformationParams(tau=0.3))
        es = [sol.energy(n) for n in range(6)]
        assert all(e2 < e1 for e1, e2 in zip(es, es[1:]))
        with pytest.raises(ParameterError):
            sol.psi(0, np.array([0.1]))

    def test_inverse_square_reality_window(self):
        tau = 0.25
        eps = 1e-6
        ok = classify_physical(PoschlTeller(-tau / 4 + eps, 0.0), R.PI1,
                               DeformationParams(tau=tau))
        bad = classify_physical(PoschlTeller(-tau / 4 - eps, 0.0), R.PI1,
                                DeformationParams(tau=tau))
        assert ok.physical and not bad.physical
        ok_b = classify_physical(PoschlTeller(0.5, -tau ** 2 / 4 + eps), R.PI1,
                                 DeformationParams(tau=tau))
        bad_b = classify_physical(PoschlTeller(0.5, -tau ** 2 / 4 - eps), R.PI1,
                                  DeformationParams(tau=tau))
        assert ok_b.physical and not bad_b.physical

    def test_broken_swanson_energies_complex(self):
        sol = solve(Swanson(2.0, 0.1), R.PI1, DeformationParams(tau=0.5))
        assert not sol.physical
        e0 = sol.energy(0)
        assert isinstance(e0, complex) and abs(e0.imag) > 1e-3

    def test_reality_tracks_branch_parameters(self):
        from gup_spectra.phase import discriminant

        # Swanson: energies real <=> mu_- real <=> discriminant >= 0
        for alpha, beta, tau in ((2.0, 0.1, 0.5), (15.0, 0.1, 0.5),
                                 (0.1, 0.2, 0.25), (2.0, 0.1, 0.0)):
            params = DeformationParams(tau=max(tau, 1e-8))
            sol = solve(Swanson(alpha, beta), R.PI1, params)
            d = discriminant(alpha, beta, params.tau)
            mu = complex(sol.parameters["mu_minus"])
            energies_real = all(abs(complex(sol.energy(n)).imag) < 1e-12
                                for n in range(4))
            assert (d >= 0) == (mu.imag == 0.0) == energies_real
        # inverse-square model: energies real <=> a+, b+ real
        broken = solve(PoschlTeller(-0.2, 0.5), R.PI1, DeformationParams(tau=0.25))
        assert abs(complex(broken.parameters["a_plus"]).imag) > 0
        assert abs(complex(broken.energy(0)).imag) > 0
        clean = solve(PoschlTeller(1.0, 0.5), R.PI1, DeformationParams(tau=0.25))
        assert complex(clean.parameters["a_plus"]).imag == 0.0
        assert abs(complex(clean.energy(0)).imag) < 1e-14


class TestWavefunctions:
    def test_ground_state_shape(self):
        params = DeformationParams(tau=0.2)
        sol = solve(HarmonicOscillator(), R.PI1, params)
        lam = -sol.parameters["mu_minus"]
        ps = np.linspace(-3.0, 3.0, 25)
        psi = sol.psi(0, ps)
        shape = (1 + params.tau_check * ps ** 2) ** (-0.25 - lam / 2)
        ratio = np.real(psi) / shape
        assert np.max(np.abs(ratio / ratio[0] - 1.0)) < 1e-12
        mags = np.abs(sol.psi(0, np.linspace(0.0, 4.0, 30)))
        assert np.all(np.diff(mags) < 0)

    def test_first_excited_state_is_odd(self):
        sol = solve(HarmonicOscillator(), R.PI1, DeformationParams(tau=0.2))
        val = sol.psi(1, np.array([0.0]))[0]
        assert abs(val) < 1e-14
        left = sol.psi(1, np.array([-0.7]))[0]
        right = sol.psi(1, np.array([0.7]))[0]
        assert left == pytest.approx(-right, rel=1e-12)

    def test_inverse_square_boundary_conditions(self):
        sol = solve(PoschlTeller(1.0, 0.5), R.PI1, DeformationParams(tau=0.25))
        near_zero = np.abs(sol.psi(2, np.array([1e-4, 1e-3])))
        far = np.abs(sol.psi(2, np.array([200.0, 500.0])))
        interior = np.max(np.abs(sol.psi(2, np.linspace(0.3, 6.0, 40))))
        assert np.all(near_zero < 1e-6 * interior)
        assert np.all(far < 1e-4 * interior)
        with pytest.raises(DomainError):
            sol.psi(0, np.array([-1.0]))

    def test_commutative_limit_states_unavailable(self):
        sol = solve(HarmonicOscillator(), R.PI1, DeformationParams(tau=0.0))
        with pytest.raises(ParameterError):
            wavefunction_eval(sol, 0, np.array([0.0]))

    def test_wrong_branch_rejected(self):
        sol = solve(HarmonicOscillator(), R.PI1, DeformationParams(tau=0.2),
                    branch="plus")
        with pytest.raises(UnsupportedOrder):
            sol.psi(0, np.array([0.5]))

    def test_segment_states_real_parametrization(self):
        params = DeformationParams(tau=0.25)
        sol = solve(HarmonicOscillator(), R.PI4, params)
        edge = 1.0 / math.sqrt(params.tau_check)
        ss = np.linspace(-0.95 * edge, 0.95 * edge, 21)
        vals = sol.psi(0, ss)
        assert np.max(np.abs(np.imag(vals))) < 1e-14
        with pytest.raises(DomainError):
            sol.psi(0, np.array([1.1 * edge]))


class TestMetrics:
    @pytest.mark.parametrize("model,rep", SOLVABLE)
    def test_positive_on_interior(self, model, rep):
        params = DeformationParams(tau=0.25)
        sol = solve(model, rep, params)
        p, _ = native_quadrature(sol, order=128)
        assert np.all(sol.metric(p) > 0)

    def test_oscillator_closed_forms(self):
        params = DeformationParams(tau=0.25)
        tc = params.tau_check
        ps = np.linspace(-2.0, 2.0, 9)
        rho1 = solve(HarmonicOscillator(), R.PI1, params).metric(ps)
        assert np.allclose(rho1, math.sqrt(tc) / (1 + tc * ps ** 2), atol=1e-15)
        rho3 = solve(HarmonicOscillator(), R.PI3, params).metric(ps)
        assert np.allclose(rho3, math.sqrt(tc), atol=1e-15)

    def test_swanson_hermitian_case_constant(self):
        params = DeformationParams(tau=0.25)
        sol = solve(Swanson(0.15, 0.15), R.PI3, params)
        ps = np.linspace(-1.5, 1.5, 9)
        rho = sol.metric(ps)
        assert np.max(np.abs(rho - rho[0])) < 1e-15

    def test_discarded_constants_recorded(self):
        params = DeformationParams(tau=0.25)
        assert solve(HarmonicOscillator(), R.PI4, params).metric_constant == -1j
        assert solve(PoschlTeller(1.0, 0.5), R.PI1, params).metric_constant == -1.0

    @pytest.mark.parametrize("model,rep", [
        (HarmonicOscillator(), R.PI1), (HarmonicOscillator(), R.PI3),
        (HarmonicOscillator(), R.PI4),
        (Swanson(0.1, 0.2), R.PI1), (Swanson(0.1, 0.2), R.PI3),
        (Swanson(0.1, 0.2), R.PI4),
        (PoschlTeller(1.0, 0.5), R.PI1), (PoschlTeller(1.0, 0.5), R.PI2),
        (PoschlTeller(1.0, 0.5), R.PI3), (PoschlTeller(1.0, 0.5), R.PI4),
    ])
    def test_generic_assembly_matches_closed_form(self, model, rep):
        params = DeformationParams(tau=0.25)
        sol = solve(model, rep, params)
        rho_gen = metric_generic(model, rep, params)
        dom = sol.domain
        lo = 0.0 if isinstance(model, PoschlTeller) else dom.lo
        hi = dom.hi
        if not math.isfinite(hi):
            hi = 8.0
        if not math.isfinite(lo):
            lo = -8.0
        span = hi - lo
        pts = np.linspace(lo + 0.05 * span, hi - 0.05 * span, 100)
        ratio = rho_gen(pts) / sol.metric(pts)
        assert np.max(np.abs(ratio / ratio[0] - 1.0)) < 1e-8


class TestOrthonormality:
    @pytest.mark.parametrize("model,rep", SOLVABLE)
    def test_gram_identity(self, model, rep):
        sol = solve(model, rep, DeformationParams(tau=0.25))
        g = gram_matrix(sol, 4)
        assert np.max(np.abs(g - np.eye(5))) < 1e-8

    def test_similarity_partner_states(self):
        params = DeformationParams(tau=0.25)
        tc = params.tau_check
        for model in (HarmonicOscillator(), Swanson(0.1, 0.2), PoschlTeller(1.0, 0.5)):
            sol1 = solve(model, R.PI1, params)
            sol2 = solve(model, R.PI2, params)
            ps = np.linspace(0.2, 2.5, 25)
            mapped = (1 + tc * ps ** 2) ** -0.5 * sol1.psi(2, ps)
            direct = sol2.psi(2, ps)
            ratio = mapped / direct
            assert np.max(np.abs(ratio / ratio[0] - 1.0)) < 1e-8

    def test_hermiticity_under_metric(self):
        params = DeformationParams(tau=0.25)
        for model in (HarmonicOscillator(), Swanson(0.1, 0.2)):
            for m, n in ((0, 1), (1, 3), (2, 2)):
                lhs = matrix_element_direct(model, R.PI1, params, m, n, "H",
                                            grid_size=16384)
                rhs = matrix_element_direct(model, R.PI1, params, n, m, "H",
                                            grid_size=16384)
                assert abs(lhs - np.conj(rhs)) < 1e-8


class TestPotentials:
    def test_oscillator_domain_and_amplitude(self):
        params = DeformationParams(tau=0.5)
        pot = transformed_potential(HarmonicOscillator(), R.PI1, params)
        assert pot.q_hi == pytest.approx(math.pi / math.sqrt(2 * 0.5), rel=1e-14)
        qs = np.array([0.3, 0.9])
        assert np.allclose(pot.V(qs), np.tan(math.sqrt(0.25) * qs) ** 2, rtol=1e-14)

    def test_half_cell_domain(self):
        params = DeformationParams(tau=0.25)
        pot = transformed_potential(PoschlTeller(1.0, 0.5), R.PI1, params)
        assert pot.q_lo == 0.0
        assert pot.q_hi == pytest.approx(math.pi / math.sqrt(2 * 0.25), rel=1e-14)

    def test_unsupported(self):
        with pytest.raises(UnsupportedPair):
            transformed_potential(HarmonicOscillator(), R.PI4_PRIME,
                                  DeformationParams(tau=0.5))


class TestSchroedingerResidual:
    """Each closed-form state solves its momentum-space equation directly.

    This joint check of (psi_n, E_n, f, g, h) is independent of the potential
    transform; the tolerance is the truncation floor of the h = 1e-4 central
    differences used for psi'' on normalized states.
    """

    @pytest.mark.parametrize("model,rep", [
        (HarmonicOscillator(), R.PI1), (HarmonicOscillator(), R.PI3),
        (HarmonicOscillator(), R.PI4),
        (Swanson(0.1, 0.2), R.PI1), (Swanson(0.1, 0.2), R.PI3),
        (Swanson(0.1, 0.2), R.PI4),
        (PoschlTeller(1.0, 0.5), R.PI1), (PoschlTeller(1.0, 0.5), R.PI3),
        (PoschlTeller(1.0, 0.5), R.PI4),
    ])
    def test_ode_residual(self, model, rep):
        from gup_spectra.algebra import coefficients

        params = DeformationParams(tau=0.25)
        sol = solve(model, rep, params)
        fgh = coefficients(model, rep, params)
        dom = fgh.domain
        lo = dom.lo if math.isfinite(dom.lo) else -4.0
        hi = dom.hi if math.isfinite(dom.hi) else 4.0
        if isinstance(model, PoschlTeller):
            lo = max(lo, 0.0)
        span = hi - lo
        ps = np.linspace(lo + 0.15 * span, hi - 0.15 * span, 21)
        h = 1e-4
        for n in (0, 2):
            e_n = complex(sol.energy(n))
            d1 = (sol.psi(n, ps + h) - sol.psi(n, ps - h)) / (2 * h)
            d2 = (sol.psi(n, ps + h) - 2 * sol.psi(n, ps)
                  + sol.psi(n, ps - h)) / h ** 2
            res = -fgh.f(ps) * d2 + fgh.g(ps) * d1 + (fgh.h(ps) - e_n) * sol.psi(n, ps)
            rel = np.max(np.abs(res)) / np.max(np.abs(sol.psi(n, ps)))
            assert rel < 1e-5


class TestDimensionalUnits:
    """Nothing is tied to natural units; the FD oracle is the detector."""

    def test_off_natural_units(self):
        from gup_spectra.oracle import verify_spectrum

        params = DeformationParams(hbar=0.7, mass=2.3, omega=1.9, tau=0.3)
        for model in (HarmonicOscillator(), Swanson(0.23, 0.11),
                      PoschlTeller(0.8, 0.4)):
            report = verify_spectrum(model, R.PI1, params, count=4,
                                     tolerance=1e-5)
            assert report.passed
            for rep in (R.PI1, R.PI2, R.PI3, R.PI4):
                g = gram_matrix(solve(model, rep, params), 3)
                assert np.max(np.abs(g - np.eye(4))) < 1e-8


class TestRandomizedClassifierAgreement:
    def test_discriminant_sign_matches_classifier(self):
        from gup_spectra.phase import discriminant

        rng = np.random.default_rng(20250810)
        params = DeformationParams()
        count = 0
        while count < 1000:
            alpha = rng.uniform(-2.0, 18.0)
            beta = rng.uniform(-2.0, 3.0)
            tau = rng.uniform(0.0, 1.2)
            if alpha + beta + 1.0 <= 1e-6:
                continue
            count += 1
            d = discriminant(alpha, beta, tau, params)
            cls = classify_physical(Swanson(alpha, beta),
                                    R.PI1, DeformationParams(tau=tau))
            assert (d >= 0) == (cls.physical and not cls.complex_spectrum)
