"""Liouville-type transform of -f psi'' + g psi' + h psi = E psi to potential form.

The change of gauge and variable

    psi(p) = exp(chi(p)) phi(p),   chi' = (f' + 2g)/(4f),   q' = f^(-1/2),

turns the general second-order problem into -phi''(q) + V(q) phi = E phi with

    V = (4 g^2 + 3 f'^2 + 8 g f')/(16 f) - f''/4 - g'/2 + h

evaluated through the inverse map p(q).  A further factorization
phi = v(q) F(w(q)) against a classical-special-function ODE
F'' + Q(w) F' + R(w) F = 0 fixes v = (w')^(-1/2) exp(1/2 int Q dw) and yields
the master identity

    E - V(q) = w'''/(2 w') - 3/4 (w''/w')^2 + (w')^2 R
               - (w')^2 Q'(w)/2 - (w')^2 Q(w)^2 / 4,

whose pointwise residual is the structural check for every shipped solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .algebra import FGHCoefficients
from .errors import BranchAmbiguity, NonMonotoneMap, SingularCoefficient

__all__ = [
    "TransformResult",
    "FactorizationAnsatz",
    "legendre_ansatz",
    "jacobi_ansatz",
    "to_potential",
    "master_residual",
    "v_from_Qw",
]

_QUAD_OPTS = dict(epsabs=1e-12, epsrel=1e-12, limit=200)


@dataclass
class TransformResult:
    """Gauge function, coordinate map and potential of the transformed problem."""

    chi: Callable[[np.ndarray], np.ndarray]
    q_of_p: Callable[[np.ndarray], np.ndarray]
    p_of_q: Callable[[np.ndarray], np.ndarray]
    V: Callable[[np.ndarray], np.ndarray]
    q_lo: float
    q_hi: float
    p0: float

    @property
    def q_domain(self) -> tuple[float, float]:
        return (self.q_lo, self.q_hi)


def _scalar_quad(fn, a, b):
    if a == b:
        return 0.0
    val, _ = quad(fn, a, b, **_QUAD_OPTS)
    return val


def to_potential(fgh: FGHCoefficients, p0: float) -> TransformResult:
    """Transform a coefficient triple into potential form, anchored at p0.

    chi(p0) = 0 and q(p0) = 0 fix the integration constants.  Raises
    ``SingularCoefficient`` when f is not strictly positive on the interior
    and ``NonMonotoneMap`` when the coordinate integral fails to converge.
    """
    dom = fgh.domain
    lo, hi = dom.lo, dom.hi
    if not (lo < p0 < hi):
        raise NonMonotoneMap(f"anchor p0={p0} outside domain ({lo}, {hi})")

    probe_lo = lo + 1e-9 * (min(hi, p0 + 1.0) - lo) if math.isfinite(lo) else p0 - 50.0
    probe_hi = hi - 1e-9 * (hi - max(lo, p0 - 1.0)) if math.isfinite(hi) else p0 + 50.0
    probes = np.linspace(probe_lo, probe_hi, 211)
    fvals = np.asarray(fgh.f(probes), dtype=float)
    if np.any(fvals <= 0.0):
        raise SingularCoefficient(
            "f must be strictly positive on the interior; negate the equation "
            "or use the segment parametrization first"
        )

    def chi_integrand(p):
        return (fgh.df(p) + 2.0 * fgh.g(p)) / (4.0 * fgh.f(p))

    def dq(p):
        return 1.0 / math.sqrt(fgh.f(p))

    def chi(p):
        p = np.atleast_1d(np.asarray(p, dtype=float))
        return np.array([_scalar_quad(chi_integrand, p0, pi) for pi in p])

    # dense monotone table for q(p); refined near singular ends
    interior = _graded_grid(lo, hi, p0)
    qtab = np.empty_like(interior)
    qtab[0] = 0.0
    anchor = np.searchsorted(interior, p0)
    interior[anchor] = p0
    qtab[anchor] = 0.0
    for i in range(anchor + 1, len(interior)):
        qtab[i] = qtab[i - 1] + _scalar_quad(dq, interior[i - 1], interior[i])
    for i in range(anchor - 1, -1, -1):
        qtab[i] = qtab[i + 1] - _scalar_quad(dq, interior[i], interior[i + 1])
    if np.any(np.diff(qtab) <= 0):
        raise NonMonotoneMap("q(p) table is not strictly increasing")

    # tails toward finite ends use a square-root substitution (regular even
    # where f vanishes linearly) and evaluate f through its local Taylor data,
    # which is exact for the tabulated walls and kills float cancellation
    def _tail_quad(wall, sign, tlen):
        f_w = max(float(fgh.f(wall)), 0.0)
        df_w = float(fgh.df(wall))
        ddf_w = float(fgh.ddf(wall))

        def integrand(t):
            d = t * t
            fval = f_w + sign * df_w * d + 0.5 * ddf_w * d * d
            if fval <= 0.0:
                return 0.0
            return 2.0 * t / math.sqrt(fval)

        val, _ = quad(integrand, 0.0, tlen, **_QUAD_OPTS)
        if not math.isfinite(val):
            raise NonMonotoneMap("f^(-1/2) not integrable toward a finite end")
        return val

    if math.isfinite(lo):
        q_lo = qtab[0] - _tail_quad(lo, +1, math.sqrt(interior[0] - lo))
    else:
        q_lo = qtab[0] + quad(dq, interior[0], -np.inf, **_QUAD_OPTS)[0]
    if math.isfinite(hi):
        q_hi = qtab[-1] + _tail_quad(hi, -1, math.sqrt(hi - interior[-1]))
    else:
        q_hi = qtab[-1] + quad(dq, interior[-1], np.inf, **_QUAD_OPTS)[0]

    def q_scalar(pp):
        i = int(np.clip(np.searchsorted(interior, pp) - 1, 0, len(interior) - 1))
        return qtab[i] + _scalar_quad(dq, interior[i], pp)

    def q_of_p(p):
        p = np.atleast_1d(np.asarray(p, dtype=float))
        return np.array([q_scalar(pi) for pi in p])

    def p_of_q(q):
        q = np.atleast_1d(np.asarray(q, dtype=float))
        return np.array([_invert_monotone(qi, interior, qtab, q_scalar, dq)
                         for qi in q])

    def V_of_p(p):
        f = fgh.f(p)
        df = fgh.df(p)
        g = fgh.g(p)
        return ((4 * g ** 2 + 3 * df ** 2 + 8 * g * df) / (16 * f)
                - fgh.ddf(p) / 4.0 - fgh.dg(p) / 2.0 + fgh.h(p))

    def V(q):
        return V_of_p(p_of_q(q))

    return TransformResult(chi=chi, q_of_p=q_of_p, p_of_q=p_of_q, V=V,
                           q_lo=float(q_lo), q_hi=float(q_hi), p0=p0)


def _graded_grid(lo, hi, p0, n=220):
    """Node table covering the domain, graded toward finite ends, through p0."""
    if math.isfinite(lo) and math.isfinite(hi):
        t = np.linspace(0.0, 1.0, n)
        graded = lo + (hi - lo) * (0.5 - 0.5 * np.cos(np.pi * t))
        graded[0] = lo + 1e-10 * (hi - lo)
        graded[-1] = hi - 1e-10 * (hi - lo)
    else:
        span = 60.0 + 10.0 * abs(p0)
        a = lo if math.isfinite(lo) else p0 - span
        b = hi if math.isfinite(hi) else p0 + span
        if math.isfinite(lo):
            a = lo + 1e-10 * (b - a)
        if math.isfinite(hi):
            b = hi - 1e-10 * (b - a)
        graded = np.linspace(a, b, n)
    graded = np.unique(np.concatenate([graded, [p0]]))
    return graded


def _invert_monotone(q_target, ptab, qtab, q_of_p_scalar, dq, tol=1e-12, max_iter=80):
    i = int(np.clip(np.searchsorted(qtab, q_target) - 1, 0, len(qtab) - 2))
    a, b = ptab[i], ptab[i + 1]
    fa = qtab[i] - q_target
    fb = qtab[i + 1] - q_target
    if fa > 0 or fb < 0:  # outside the table: clamp to nearest cell
        a, b = ptab[0], ptab[-1]
        fa = qtab[0] - q_target
        fb = qtab[-1] - q_target
    p = 0.5 * (a + b)
    for _ in range(max_iter):
        fp = q_of_p_scalar(p) - q_target
        if fp > 0:
            b = p
        else:
            a = p
        # Newton step inside the bracket, bisection fallback
        slope = dq(p)
        step = fp / slope if slope > 0 else 0.0
        cand = p - step
        p_next = cand if a < cand < b else 0.5 * (a + b)
        if abs(p_next - p) <= tol * max(1.0, abs(p)):
            return p_next
        p = p_next
    return p


# ---------------------------------------------------------------------------
# factorization ansatz

@dataclass
class FactorizationAnsatz:
    """Special-function factorization phi = v(q) F(w(q)).

    ``family`` is "associated_legendre" (Q = 2w/(w^2-1)) or "jacobi".
    w(q) = sin(sqrt(c) q + phase), so (w')^2/(1-w^2) = c identically.
    """

    family: str
    c: float
    phase: float = 0.0
    nu: complex = 0.0
    mu: complex = 0.0
    n: int = 0
    a: float = 0.0
    b: float = 0.0
    w_ref: float = 0.0  # lower integration limit for int Q dw

    def w(self, q):
        return np.sin(np.sqrt(self.c) * np.asarray(q) + self.phase)

    def dw(self, q):
        rc = np.sqrt(self.c)
        return rc * np.cos(rc * np.asarray(q) + self.phase)

    def ddw(self, q):
        return -self.c * self.w(q)

    def dddw(self, q):
        return -self.c * self.dw(q)

    def Q(self, w):
        if self.family == "associated_legendre":
            return 2 * w / (w ** 2 - 1)
        a, b = self.a, self.b
        return (b - a - (2 + a + b) * w) / (1 - w ** 2)

    def dQ(self, w):
        if self.family == "associated_legendre":
            return -2 * (w ** 2 + 1) / (w ** 2 - 1) ** 2
        a, b = self.a, self.b
        return -((2 + a + b) - 2 * (b - a) * w + (2 + a + b) * w ** 2) / (1 - w ** 2) ** 2

    def R(self, w):
        if self.family == "associated_legendre":
            nu, mu = self.nu, self.mu
            return nu * (nu + 1) / (1 - w ** 2) - mu ** 2 / (1 - w ** 2) ** 2
        return self.n * (self.n + 1 + self.a + self.b) / (1 - w ** 2)

    def c_residual(self, q_grid) -> float:
        w = self.w(q_grid)
        wp = self.dw(q_grid)
        return float(np.max(np.abs(wp ** 2 / (1 - w ** 2) - self.c)))


def legendre_ansatz(c: float, nu, mu, phase: float = 0.0) -> FactorizationAnsatz:
    return FactorizationAnsatz(family="associated_legendre", c=c, phase=phase,
                               nu=nu, mu=mu)


def jacobi_ansatz(c: float, n: int, a: float, b: float,
                  phase: float = 0.0) -> FactorizationAnsatz:
    return FactorizationAnsatz(family="jacobi", c=c, phase=phase, n=n, a=a, b=b)


def master_residual(ansatz: FactorizationAnsatz, transform: TransformResult,
                    E, q_grid) -> float:
    """Max pointwise residual of the master identity on an interior q-grid."""
    q = np.asarray(q_grid, dtype=float)
    w = ansatz.w(q)
    wp = ansatz.dw(q)
    wpp = ansatz.ddw(q)
    wppp = ansatz.dddw(q)
    rhs = (wppp / (2 * wp) - 0.75 * (wpp / wp) ** 2 + wp ** 2 * ansatz.R(w)
           - wp ** 2 * ansatz.dQ(w) / 2.0 - wp ** 2 * ansatz.Q(w) ** 2 / 4.0)
    lhs = E - transform.V(q)
    return float(np.max(np.abs(rhs - lhs)))


def v_from_Qw(ansatz: FactorizationAnsatz) -> Callable[[np.ndarray], np.ndarray]:
    """v(q) = (w')^(-1/2) exp(1/2 int_{w_ref}^{w(q)} Q), by direct quadrature.

    The returned callable raises ``BranchAmbiguity`` when 1 - w^2 changes sign
    over the evaluation points.
    """
    def v(q):
        q = np.atleast_1d(np.asarray(q, dtype=float))
        w = ansatz.w(q)
        if np.any((1 - w ** 2) <= 0):
            raise BranchAmbiguity("1 - w^2 must keep one sign on the domain")
        wp = ansatz.dw(q).astype(complex)
        out = np.empty(len(q), dtype=complex)
        for i, wi in enumerate(w):
            integral = _scalar_quad(lambda t: float(np.real(ansatz.Q(t))),
                                    ansatz.w_ref, wi)
            out[i] = wp[i] ** (-0.5) * np.exp(0.5 * integral)
        return out

    return v
