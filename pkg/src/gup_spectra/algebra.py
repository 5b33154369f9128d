"""Deformed Heisenberg algebra: parameters, representations, models, ODE coefficients.

The commutator [X, P] = i*hbar*(1 + tau_check * P^2) admits several concrete
realizations in terms of the canonical pair (x, p) with x = i*hbar*d/dp acting
on momentum-space wavefunctions:

    Pi1:  X = (1 + tc p^2) x,                  P = p
    Pi2:  X = u x u,  u = (1 + tc p^2)^(1/2),  P = p
    Pi3:  X = x,                               P = tan(sqrt(tc) p)/sqrt(tc)
    Pi4:  X = i x u,                           P = -i p / u
    Pi4': X = x u,                             P = p / u

with tc = tau / (m * omega * hbar).  Pi4' satisfies the sign-flipped relation
[X, P] = i*hbar*(1 - tc P^2) instead and is kept as a diagnostic.

For each solvable model the momentum-space Schroedinger equation takes the
second-order form

    -f(p) psi'' + g(p) psi' + h(p) psi = E psi,

and ``coefficients`` returns the (f, g, h) triple together with the analytic
derivatives needed by the potential transform.  For Pi4 the natural domain is
the segment p = i*s with s real; the triple is returned in the real
parametrization s, on which f is positive and the transform machinery applies
unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Union

import numpy as np

from .errors import (
    IntrinsicNoncommutativity,
    ParameterError,
    UnsupportedPair,
)

__all__ = [
    "DeformationParams",
    "Representation",
    "Domain",
    "HarmonicOscillator",
    "Swanson",
    "PoschlTeller",
    "ModelSpec",
    "FGHCoefficients",
    "p_domain",
    "coefficients",
]


@dataclass(frozen=True)
class DeformationParams:
    """Physical constants and the dimensionless deformation strength.

    tau_check = tau / (mass * omega * hbar) carries dimension of an inverse
    squared momentum; tau itself is dimensionless.
    """

    hbar: float = 1.0
    mass: float = 1.0
    omega: float = 1.0
    tau: float = 0.0

    def __post_init__(self):
        for name in ("hbar", "mass", "omega", "tau"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ParameterError(f"{name} must be finite, got {v!r}")
        if self.hbar <= 0 or self.mass <= 0 or self.omega <= 0:
            raise ParameterError("hbar, mass and omega must be positive")
        if self.tau < 0:
            raise ParameterError(f"tau must be >= 0, got {self.tau}")

    @property
    def tau_check(self) -> float:
        return self.tau / (self.mass * self.omega * self.hbar)


class Representation(Enum):
    PI1 = "pi1"
    PI2 = "pi2"
    PI3 = "pi3"
    PI4 = "pi4"
    PI4_PRIME = "pi4p"


@dataclass(frozen=True)
class Domain:
    """Interval of the real parametrization of the momentum variable.

    For Pi4 the physical momenta lie on the imaginary segment p = i*s with
    s in (lo, hi); ``imaginary_segment`` marks that the coordinate stored
    here is s rather than p.  ``half_line_start`` > lo restricts models that
    live on a half cell (the inverse-square models).
    """

    lo: float
    hi: float
    imaginary_segment: bool = False

    @property
    def finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def contains(self, values, margin: float = 0.0) -> bool:
        v = np.asarray(values, dtype=float)
        return bool(np.all(v > self.lo + margin) and np.all(v < self.hi - margin))


def p_domain(rep: Representation, params: DeformationParams) -> Domain:
    """Natural momentum domain of a representation."""
    tc = params.tau_check
    if rep in (Representation.PI1, Representation.PI2, Representation.PI4_PRIME):
        return Domain(-math.inf, math.inf)
    if rep is Representation.PI3:
        if tc == 0.0:
            return Domain(-math.inf, math.inf)
        edge = math.pi / (2.0 * math.sqrt(tc))
        return Domain(-edge, edge)
    if rep is Representation.PI4:
        if tc == 0.0:
            return Domain(-math.inf, math.inf, imaginary_segment=True)
        edge = 1.0 / math.sqrt(tc)
        return Domain(-edge, edge, imaginary_segment=True)
    raise UnsupportedPair(f"unknown representation {rep}")


@dataclass(frozen=True)
class HarmonicOscillator:
    """H = P^2/(2m) + (m omega^2 / 2) X^2."""

    kind: str = "harmonic_oscillator"


@dataclass(frozen=True)
class Swanson:
    """Non-Hermitian oscillator hw(A+ A + 1/2) + alpha A A + beta A+ A+.

    alpha and beta carry dimension of energy; the combination
    Omega = alpha + beta + hbar*omega must be positive in the solved regime.
    """

    alpha: float
    beta: float
    kind: str = "swanson"

    def omega_shift(self, params: DeformationParams) -> float:
        return self.alpha + self.beta + params.hbar * params.omega


@dataclass(frozen=True)
class PoschlTeller:
    """Intrinsically noncommutative model with a P^{-2} term.

    H = (beta/2m) P^2 + (hbar omega alpha / (2 tc)) P^{-2}
        + (m omega^2 / 2) X^2 + hbar omega alpha / 2 + beta/(2 m tc).

    alpha and beta are dimensionless; tau = 0 is not admissible.
    """

    alpha: float
    beta: float
    kind: str = "poschl_teller"


ModelSpec = Union[HarmonicOscillator, Swanson, PoschlTeller]

Scalar = Union[float, np.ndarray]
CoeffFn = Callable[[Scalar], Scalar]


@dataclass(frozen=True)
class FGHCoefficients:
    """Coefficient triple of -f psi'' + g psi' + h psi = E psi.

    df, ddf, dg are the analytic derivatives consumed by the potential
    transform.  f does not vanish on the interior of ``domain``.  When
    ``domain.imaginary_segment`` is set, the independent variable is the real
    parametrization s of p = i*s.
    """

    f: CoeffFn
    g: CoeffFn
    h: CoeffFn
    df: CoeffFn
    ddf: CoeffFn
    dg: CoeffFn
    domain: Domain


def _swanson_omega(model: Swanson, params: DeformationParams) -> float:
    big_omega = model.omega_shift(params)
    if big_omega <= 0:
        raise ParameterError(
            f"Swanson model solved only for alpha + beta + hbar*omega > 0, got {big_omega}"
        )
    return big_omega


def _ho_coeffs(rep, params):
    hbar, m, om, tau = params.hbar, params.mass, params.omega, params.tau
    tc = params.tau_check
    f0 = 0.5 * m * om ** 2 * hbar ** 2
    g0 = tau * hbar * om

    if rep is Representation.PI1:
        return FGHCoefficients(
            f=lambda p: f0 * (1 + tc * p ** 2) ** 2,
            g=lambda p: -g0 * p * (1 + tc * p ** 2),
            h=lambda p: p ** 2 / (2 * m),
            df=lambda p: 4 * f0 * tc * p * (1 + tc * p ** 2),
            ddf=lambda p: 4 * f0 * tc * (1 + 3 * tc * p ** 2),
            dg=lambda p: -g0 * (1 + 3 * tc * p ** 2),
            domain=p_domain(rep, params),
        )
    if rep is Representation.PI3:
        stc = math.sqrt(tc) if tc > 0 else 0.0

        def h3(p):
            if tc == 0.0:
                return p ** 2 / (2 * m)
            return np.tan(stc * p) ** 2 / (2 * m * tc)

        return FGHCoefficients(
            f=lambda p: f0 * np.ones_like(np.asarray(p, dtype=float)),
            g=lambda p: np.zeros_like(np.asarray(p, dtype=float)),
            h=h3,
            df=lambda p: np.zeros_like(np.asarray(p, dtype=float)),
            ddf=lambda p: np.zeros_like(np.asarray(p, dtype=float)),
            dg=lambda p: np.zeros_like(np.asarray(p, dtype=float)),
            domain=p_domain(rep, params),
        )
    if rep is Representation.PI4:
        # real parametrization p = i*s; f is positive on |s| < 1/sqrt(tc)
        return FGHCoefficients(
            f=lambda s: f0 * (1 - tc * s ** 2),
            g=lambda s: 1.5 * g0 * s,
            h=lambda s: s ** 2 / (2 * m * (1 - tc * s ** 2)) + 0.5 * g0,
            df=lambda s: -2 * f0 * tc * s,
            ddf=lambda s: -2 * f0 * tc * np.ones_like(np.asarray(s, dtype=float)),
            dg=lambda s: 1.5 * g0 * np.ones_like(np.asarray(s, dtype=float)),
            domain=p_domain(rep, params),
        )
    if rep is Representation.PI4_PRIME:
        return FGHCoefficients(
            f=lambda p: f0 * (1 + tc * p ** 2),
            g=lambda p: -1.5 * g0 * p,
            h=lambda p: p ** 2 / (2 * m * (1 + tc * p ** 2)) - 0.5 * g0,
            df=lambda p: 2 * f0 * tc * p,
            ddf=lambda p: 2 * f0 * tc * np.ones_like(np.asarray(p, dtype=float)),
            dg=lambda p: -1.5 * g0 * np.ones_like(np.asarray(p, dtype=float)),
            domain=p_domain(rep, params),
        )
    raise UnsupportedPair(f"harmonic oscillator not tabulated for {rep}")


def _swanson_coeffs(model, rep, params):
    hbar, m, om, tau = params.hbar, params.mass, params.omega, params.tau
    tc = params.tau_check
    big = _swanson_omega(model, params)
    al, be = model.alpha, model.beta
    bmina = be - al
    a0 = 0.5 * m * hbar * om * big

    if rep is Representation.PI1:
        c2 = (tau * (al - be + hbar * om) + al + be - hbar * om) / (2 * hbar * m * om)
        return FGHCoefficients(
            f=lambda p: a0 * (1 + tc * p ** 2) ** 2,
            g=lambda p: (bmina - tau * big) * p * (1 + tc * p ** 2),
            h=lambda p: 0.5 * bmina - c2 * p ** 2,
            df=lambda p: 4 * a0 * tc * p * (1 + tc * p ** 2),
            ddf=lambda p: 4 * a0 * tc * (1 + 3 * tc * p ** 2),
            dg=lambda p: (bmina - tau * big) * (1 + 3 * tc * p ** 2),
            domain=p_domain(rep, params),
        )
    if rep is Representation.PI3:
        if tc == 0.0:
            raise UnsupportedPair("Pi3 Swanson table needs tau > 0 (commutative limit is Pi1)")
        stc = math.sqrt(tc)
        return FGHCoefficients(
            f=lambda p: a0 * np.ones_like(np.asarray(p, dtype=float)),
            g=lambda p: bmina / stc * np.tan(stc * p),
            h=lambda p: (0.5 * hbar * om
                         + 0.5 * (bmina - hbar * om) / np.cos(stc * p) ** 2
                         + (hbar * om - al - be) / (2 * tau) * np.tan(stc * p) ** 2),
            df=lambda p: np.zeros_like(np.asarray(p, dtype=float)),
            ddf=lambda p: np.zeros_like(np.asarray(p, dtype=float)),
            dg=lambda p: bmina / np.cos(stc * p) ** 2,
            domain=p_domain(rep, params),
        )
    if rep is Representation.PI4:
        kk = al + be - hbar * om + tau * (2 * bmina + hbar * om) + tau ** 2 * big
        return FGHCoefficients(
            f=lambda s: a0 * (1 - tc * s ** 2),
            g=lambda s: (bmina + 1.5 * tau * big) * s,
            h=lambda s: ((bmina + tau * big) - s ** 2 / (m * hbar * om) * kk)
                        / (2 * (1 - tc * s ** 2)),
            df=lambda s: -2 * a0 * tc * s,
            ddf=lambda s: -2 * a0 * tc * np.ones_like(np.asarray(s, dtype=float)),
            dg=lambda s: (bmina + 1.5 * tau * big) * np.ones_like(np.asarray(s, dtype=float)),
            domain=p_domain(rep, params),
        )
    raise UnsupportedPair(f"Swanson model not tabulated for {rep}")


def _poschl_teller_coeffs(model, rep, params):
    hbar, m, om, tau = params.hbar, params.mass, params.omega, params.tau
    tc = params.tau_check
    if tau == 0.0:
        raise IntrinsicNoncommutativity(
            "the inverse-square model has no commutative limit; tau must be > 0"
        )
    al, be = model.alpha, model.beta
    f0 = 0.5 * m * om ** 2 * hbar ** 2
    g0 = tau * hbar * om
    stc = math.sqrt(tc)

    if rep is Representation.PI1:
        return FGHCoefficients(
            f=lambda p: f0 * (1 + tc * p ** 2) ** 2,
            g=lambda p: -g0 * p * (1 + tc * p ** 2),
            h=lambda p: (1 + tc * p ** 2) * (al * m * hbar * om + be * p ** 2)
                        / (2 * m * tc * p ** 2),
            df=lambda p: 4 * f0 * tc * p * (1 + tc * p ** 2),
            ddf=lambda p: 4 * f0 * tc * (1 + 3 * tc * p ** 2),
            dg=lambda p: -g0 * (1 + 3 * tc * p ** 2),
            domain=Domain(0.0, math.inf),
        )
    if rep is Representation.PI3:
        return FGHCoefficients(
            f=lambda p: f0 * np.ones_like(np.asarray(p, dtype=float)),
            g=lambda p: np.zeros_like(np.asarray(p, dtype=float)),
            h=lambda p: (0.5 * hbar * om * al / np.sin(stc * p) ** 2
                         + be / (2 * m * tc) / np.cos(stc * p) ** 2),
            df=lambda p: np.zeros_like(np.asarray(p, dtype=float)),
            ddf=lambda p: np.zeros_like(np.asarray(p, dtype=float)),
            dg=lambda p: np.zeros_like(np.asarray(p, dtype=float)),
            domain=Domain(0.0, math.pi / (2 * stc)),
        )
    if rep is Representation.PI4:
        return FGHCoefficients(
            f=lambda s: f0 * (1 - tc * s ** 2),
            g=lambda s: 1.5 * g0 * s,
            h=lambda s: (be / (2 * m) * s ** 2 / (1 - tc * s ** 2)
                         + 0.5 * hbar * om * al * (1 - tc * s ** 2) / (tc * s ** 2)
                         + 0.5 * g0 + 0.5 * hbar * om * al + be / (2 * m * tc)),
            df=lambda s: -2 * f0 * tc * s,
            ddf=lambda s: -2 * f0 * tc * np.ones_like(np.asarray(s, dtype=float)),
            dg=lambda s: 1.5 * g0 * np.ones_like(np.asarray(s, dtype=float)),
            domain=Domain(0.0, 1.0 / stc, imaginary_segment=True),
        )
    raise UnsupportedPair(f"inverse-square model not tabulated for {rep}")


def coefficients(model: ModelSpec, rep: Representation,
                 params: DeformationParams) -> FGHCoefficients:
    """Closed-form (f, g, h) triple for a (model, representation) pair.

    Implemented pairs: each model for Pi1, Pi3 and Pi4 (Pi4 in the real
    segment parametrization), plus Pi4' for the harmonic oscillator.  Pi2 is
    related to Pi1 by the similarity map u = (1 + tc p^2)^(1/2) and shares
    its transformed potential; request Pi1 instead.
    """
    if rep is Representation.PI2:
        raise UnsupportedPair(
            "Pi2 is handled by similarity with Pi1 (same potential and spectrum)"
        )
    if isinstance(model, HarmonicOscillator):
        return _ho_coeffs(rep, params)
    if isinstance(model, Swanson):
        if rep is Representation.PI4_PRIME:
            raise UnsupportedPair("no coefficient table for Swanson with Pi4'")
        return _swanson_coeffs(model, rep, params)
    if isinstance(model, PoschlTeller):
        if rep is Representation.PI4_PRIME:
            raise UnsupportedPair("no coefficient table for the inverse-square model with Pi4'")
        return _poschl_teller_coeffs(model, rep, params)
    raise UnsupportedPair(f"unknown model {model!r}")
