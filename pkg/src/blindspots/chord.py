"""Chord functions, Wigner functions and translation-overlap correlations.

Everything a superposition of Gaussian states can produce is a finite sum of
complex Gaussians.  Each bra/ket pair (n, m) contributes

    conj(a_n) a_m * exp(c0 + cp xi_p + cq xi_q
                        + cpp xi_p^2 + cpq xi_p xi_q + cqq xi_q^2)

to the chord function chi(xi) = <Psi| T_{-xi} |Psi>, and an analogous
quadratic exponent in (p, q) to the Wigner function.  The coefficients come
from a single closed-form Gaussian integral over position; the independent
oracle `chord_quadrature` integrates the same definition numerically.

For one coherent state at center eta this reduces to
chi(xi) = exp(i skew(eta, xi)/hbar) exp(-xi^2/4 hbar), the anchor that pins
every sign convention in the package.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BadQuadrature, ImaginaryResidue, NotNormalized, ZeroNorm
from .geometry import as_phase_vector
from .states import GaussianState, MixedEnsemble, Superposition

NORMALIZATION_TOL = 1e-9


def _pair_quadratic(bra: GaussianState, ket: GaussianState, hbar: float):
    """Exponent coefficients of <bra| T_{-xi} |ket> as a quadratic in xi."""
    b = np.conj(bra.width)
    a = ket.width
    p1, q1 = bra.center
    p2, q2 = ket.center

    a2 = 0.5 * (b + a)
    logpref = 0.25 * (math.log(bra.width.real) + math.log(ket.width.real)) - 0.5 * np.log(a2)

    l0 = b * q1 + a * q2 + 1j * (p2 - p1)
    lq = 0.5 * (b - a)
    lp = -1j

    k00 = -0.5 * b * q1 * q1 - 0.5 * a * q2 * q2 + 0.5j * (p1 * q1 - p2 * q2)
    k0q = 0.5 * (a * q2 - b * q1) + 0.5j * (p1 + p2)
    k0qq = -(b + a) / 8.0

    inv = 1.0 / (4.0 * a2 * hbar)
    c0 = (l0 * l0) * inv + k00 / hbar + logpref
    cp = 2.0 * l0 * lp * inv
    cq = 2.0 * l0 * lq * inv + k0q / hbar
    cpp = lp * lp * inv
    cpq = 2.0 * lp * lq * inv
    cqq = lq * lq * inv + k0qq / hbar
    return c0, cp, cq, cpp, cpq, cqq


def _pair_wigner_quadratic(bra: GaussianState, ket: GaussianState, hbar: float):
    """Exponent coefficients of the pair's Wigner contribution, quadratic in x=(p,q)."""
    b = np.conj(bra.width)
    a = ket.width
    p1, q1 = bra.center
    p2, q2 = ket.center

    a2 = (b + a) / 8.0
    logpref = (0.25 * (math.log(bra.width.real) + math.log(ket.width.real))
               - math.log(2.0 * math.pi * hbar) - 0.5 * np.log(a2))

    l0 = 0.5 * (a * q2 - b * q1) + 0.5j * (p1 + p2)
    lq = 0.5 * (b - a)
    lp = -1j

    k00 = -0.5 * b * q1 * q1 - 0.5 * a * q2 * q2 + 0.5j * (p1 * q1 - p2 * q2)
    k0q = b * q1 + a * q2 + 1j * (p2 - p1)
    k0qq = -0.5 * (b + a)

    inv = 1.0 / (4.0 * a2 * hbar)
    c0 = (l0 * l0) * inv + k00 / hbar + logpref
    cp = 2.0 * l0 * lp * inv
    cq = 2.0 * l0 * lq * inv + k0q / hbar
    cpp = lp * lp * inv
    cpq = 2.0 * lp * lq * inv
    cqq = lq * lq * inv + k0qq / hbar
    return c0, cp, cq, cpp, cpq, cqq


def _pair_terms(state: Superposition):
    """Amplitude products and chord exponent coefficients, fixed (n, m) order."""
    out = []
    for an, gn in state.terms:
        for am, gm in state.terms:
            out.append((np.conj(an) * am, _pair_quadratic(gn, gm, state.hbar)))
    return out


def pair_exponents(state: Superposition):
    """Chord terms as (mu, c0, b, C): term = mu * exp(c0 + b.xi + xi.C.xi).

    Downstream Gaussian algebra (Fourier transforms, convolutions) runs on
    this representation.
    """
    out = []
    for mu, (c0, cp, cq, cpp, cpq, cqq) in _pair_terms(state):
        bvec = np.array([cp, cq], dtype=complex)
        cmat = np.array([[cpp, 0.5 * cpq], [0.5 * cpq, cqq]], dtype=complex)
        out.append((mu, c0, bvec, cmat))
    return out


def _eval_terms(terms, xi_p, xi_q):
    total = np.zeros(np.broadcast(xi_p, xi_q).shape, dtype=complex)
    for mu, (c0, cp, cq, cpp, cpq, cqq) in terms:
        if mu == 0:
            continue
        total += mu * np.exp(c0 + cp * xi_p + cq * xi_q
                             + cpp * xi_p * xi_p + cpq * xi_p * xi_q + cqq * xi_q * xi_q)
    return total


def chord_values(state: Superposition, xi_p, xi_q) -> np.ndarray:
    """chi(xi) on arrays of chord components (no normalization check)."""
    return _eval_terms(_pair_terms(state), np.asarray(xi_p, dtype=float),
                       np.asarray(xi_q, dtype=float))


def state_norm_squared(state: Superposition) -> float:
    """<Psi|Psi> including every pairwise coherent-state overlap."""
    val = complex(_eval_terms(_pair_terms(state), np.array(0.0), np.array(0.0)))
    return float(val.real)


def require_normalized(state: Superposition, tol: float = NORMALIZATION_TOL) -> None:
    n2 = state_norm_squared(state)
    if abs(n2 - 1.0) > tol:
        raise NotNormalized(f"<Psi|Psi> = {n2}, differs from 1 by more than {tol}")


def normalize(state: Superposition) -> Superposition:
    """Rescale amplitudes so that chi(0) = <Psi|Psi> = 1 (phases preserved)."""
    n2 = state_norm_squared(state)
    if n2 < 1e-300:
        raise ZeroNorm(f"state norm squared {n2} below 1e-300")
    scale = 1.0 / math.sqrt(n2)
    return Superposition(state.hbar, tuple((a * scale, g) for a, g in state.terms))


def overlap(bra: Superposition, ket: Superposition) -> complex:
    """<bra|ket> for two superpositions at the same hbar."""
    if abs(bra.hbar - ket.hbar) > 1e-15 * max(bra.hbar, ket.hbar):
        raise ValueError("states live at different hbar")
    total = 0.0 + 0.0j
    for an, gn in bra.terms:
        for am, gm in ket.terms:
            c0, *_ = _pair_quadratic(gn, gm, bra.hbar)
            total += np.conj(an) * am * np.exp(c0)
    return complex(total)


def chord_exact(state: Superposition, xi) -> complex:
    """chi(xi) = <Psi| T_{-xi} |Psi> as the closed-form pairwise Gaussian sum."""
    require_normalized(state)
    xi = as_phase_vector(xi, "xi")
    return complex(chord_values(state, xi[0], xi[1]))


def chord_gradient(state: Superposition, xi) -> np.ndarray:
    """Analytic (d chi/d xi_p, d chi/d xi_q); shares coefficients with chord_exact."""
    xi = as_phase_vector(xi, "xi")
    xp, xq = xi
    dp = 0.0 + 0.0j
    dq = 0.0 + 0.0j
    for mu, (c0, cp, cq, cpp, cpq, cqq) in _pair_terms(state):
        if mu == 0:
            continue
        val = mu * np.exp(c0 + cp * xp + cq * xq + cpp * xp * xp + cpq * xp * xq + cqq * xq * xq)
        dp += val * (cp + 2.0 * cpp * xp + cpq * xq)
        dq += val * (cq + cpq * xp + 2.0 * cqq * xq)
    return np.array([dp, dq], dtype=complex)


def correlation_pure(state: Superposition, xi) -> float:
    """C(xi) = |<Psi|Psi_xi>|^2 for a pure state."""
    return abs(chord_exact(state, xi)) ** 2


def wigner_values(state: Superposition, x_p, x_q) -> np.ndarray:
    """Complex-assembled Wigner samples (imaginary part is roundoff residue)."""
    terms = []
    for an, gn in state.terms:
        for am, gm in state.terms:
            terms.append((np.conj(an) * am, _pair_wigner_quadratic(gn, gm, state.hbar)))
    return _eval_terms(terms, np.asarray(x_p, dtype=float), np.asarray(x_q, dtype=float))


def wigner_exact(state: Superposition, x) -> float:
    """W(x) assembled from pairwise Gaussians: peaks at centers, fringes between."""
    require_normalized(state)
    x = as_phase_vector(x, "x")
    val = complex(wigner_values(state, x[0], x[1]))
    if abs(val.imag) > 1e-9:
        raise ImaginaryResidue(f"Wigner assembly left imaginary part {val.imag}")
    return float(val.real)


def chord_mixture(ens: MixedEnsemble, xi) -> complex:
    """Mixed-state chord function: sum of weighted single-state chords.

    Each member contributes w_n chi_n(xi) exp(i skew(eta_n, xi)/hbar); that
    product is exactly the diagonal pair term of the member.
    """
    xi = as_phase_vector(xi, "xi")
    total = 0.0 + 0.0j
    for w, g in ens.terms:
        c0, cp, cq, cpp, cpq, cqq = _pair_quadratic(g, g, ens.hbar)
        total += w * np.exp(c0 + cp * xi[0] + cq * xi[1]
                            + cpp * xi[0] ** 2 + cpq * xi[0] * xi[1] + cqq * xi[1] ** 2)
    return complex(total)


def chord_mixture_values(ens: MixedEnsemble, xi_p, xi_q) -> np.ndarray:
    terms = [(w + 0.0j, _pair_quadratic(g, g, ens.hbar)) for w, g in ens.terms]
    return _eval_terms(terms, np.asarray(xi_p, dtype=float), np.asarray(xi_q, dtype=float))


# -- quadrature oracle ---------------------------------------------------------

def wavefunction(state: Superposition, q) -> np.ndarray:
    """Position wavefunction Psi(q) = sum_n a_n psi_n(q).

    psi_n(q) = (Re A_n / pi hbar)^{1/4}
               exp[-(A_n/2hbar)(q - eta_q)^2 + (i/hbar) eta_p (q - eta_q/2)]
    """
    q = np.asarray(q, dtype=float)
    h = state.hbar
    total = np.zeros(q.shape, dtype=complex)
    for a_n, g in state.terms:
        if a_n == 0:
            continue
        aa = g.width
        pn, qn = g.center
        pref = (aa.real / (math.pi * h)) ** 0.25
        total += a_n * pref * np.exp(-(aa / (2 * h)) * (q - qn) ** 2
                                     + (1j / h) * pn * (q - qn / 2))
    return total


def _default_quadrature_step(state: Superposition, xi_p: float) -> float:
    max_p = max(abs(g.center[0]) for g in state.states)
    max_re = max(g.width.real for g in state.states)
    gaussian_scale = math.sqrt(state.hbar / max_re) / 20.0
    phase_scale = state.hbar / (20.0 * (1.0 + max_p + abs(xi_p)))
    return min(gaussian_scale, phase_scale)


def chord_quadrature(state: Superposition, xi, step: float | None = None,
                     halfwidth: float | None = None) -> complex:
    """Independent oracle: composite-Simpson integration of the position form

        chi(xi) = int dq Psi(q + xi_q/2) Psi*(q - xi_q/2) exp(-i xi_p q / hbar).
    """
    xi = as_phase_vector(xi, "xi")
    h = state.hbar
    if step is None:
        step = _default_quadrature_step(state, xi[0])
    max_p = max(abs(g.center[0]) for g in state.states)
    allowed = h / (10.0 * max_p + 1.0)
    if step > allowed:
        raise BadQuadrature(f"step {step} undersamples the phase (limit {allowed})")

    if halfwidth is None:
        min_re = min(g.width.real for g in state.states)
        halfwidth = 10.0 * math.sqrt(h / min_re)
    qs = [g.center[1] for g in state.states]
    lo = min(qs) - abs(xi[1]) / 2 - halfwidth
    hi = max(qs) + abs(xi[1]) / 2 + halfwidth

    n = int(math.ceil((hi - lo) / step))
    n += n % 2
    n = max(n, 2)
    q = np.linspace(lo, hi, n + 1)
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= (hi - lo) / n / 3.0

    f = (wavefunction(state, q + xi[1] / 2)
         * np.conj(wavefunction(state, q - xi[1] / 2))
         * np.exp(-1j * xi[0] * q / h))
    return complex(np.sum(w * f))
