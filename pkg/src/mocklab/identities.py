"""The verification engine: every transformation law and structural relation
as a residual-producing check, plus the mixing/phase matrix algebra, the
Wronskian machinery, and suite aggregation into serializable reports.

Each check returns entries carrying an absolute residual, a relative
residual, and a certified error budget assembled from the series tails and
quadrature error estimates that went into the evaluation (scaled by the
prefactors they pass through).  An entry passes while its residual stays
within 100x its budget; the acceptance thresholds are enforced on top of
that by the test suite.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from mpmath import mp, mpc, mpf

from .errors import DomainError
from .matrices import (
    identity2,
    mat_mul,
    mat_neg,
    mat_norm,
    mat_pow,
    mat_sub,
    mat_vec,
    mixing_matrix,
    phase_matrix,
)
from .modpoint import PrecisionContext, power_from_alpha
from .mordell import (
    l_integral,
    l_vector,
    stokes_decompose,
    w2_integral,
    w3_integral,
)
from .qseries import MockThetaId, eval_mock, eta, theta

__all__ = [
    "CheckEntry",
    "IdentityReport",
    "SuiteReport",
    "DEFAULT_ALPHA_GRID",
    "DEFAULT_TAU_GRID",
    "DEFAULT_MF3_GRID",
    "DEFAULT_STOKES_MODULI",
    "SUITES",
    "check_mf5_scalar",
    "check_mf5_matrix",
    "check_l_vector",
    "check_stokes",
    "check_mf3_omega",
    "check_mf3_omega_f",
    "check_mf3_alternative",
    "check_eta_theta",
    "check_growth_omega",
    "group_relations",
    "wronskian_periodicity",
    "g_function",
    "check_wronskian_suite",
    "run_suite",
    "suite_report_to_json",
    "mixing_matrix",
    "phase_matrix",
]

WRONSKIAN_SEED = 20260808


def _default_alpha_grid(ctx):
    with ctx.workprec():
        return [mp.pi, mpf(1), mpf(2), mpf("0.5"), mpc(1, "0.5"), mpc(2, 1)]


def _default_mf3_grid(ctx):
    with ctx.workprec():
        return [mp.pi, mpf(1), mpf(2), mpc(1, "0.4")]


def _default_tau_grid(ctx):
    with ctx.workprec():
        return [mpc(0, 1), mpc(0, 2), mpc(1, 3), mpc("0.2", "1.1")]


DEFAULT_ALPHA_GRID = _default_alpha_grid
DEFAULT_MF3_GRID = _default_mf3_grid
DEFAULT_TAU_GRID = _default_tau_grid

def _default_stokes_moduli(ctx):
    with ctx.workprec():
        return [mpf(1), +mp.pi]


DEFAULT_STOKES_MODULI = _default_stokes_moduli


@dataclass(frozen=True)
class CheckEntry:
    identity: str
    point: Optional[mpc]
    kind: Optional[str]  # 'alpha' | 'tau' | 'abs_alpha' | None
    abs_residual: mpf
    rel_residual: mpf
    budget: mpf
    passed: bool
    detail: Optional[dict] = None


@dataclass(frozen=True)
class IdentityReport:
    identity_name: str
    entries: Tuple[CheckEntry, ...]
    max_abs: mpf
    all_pass: bool
    metadata: dict


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    prec_bits: int
    eps: mpf
    quad_eps: mpf
    identities: Tuple[IdentityReport, ...]
    all_pass: bool


def _entry(identity, point, kind, residual, scale, budget, detail=None) -> CheckEntry:
    residual = mpf(residual)
    budget = mpf(budget)
    scale = mpf(scale)
    rel = residual / scale if scale > 0 else residual
    return CheckEntry(
        identity=identity,
        point=None if point is None else mpc(point),
        kind=kind,
        abs_residual=residual,
        rel_residual=rel,
        budget=budget,
        passed=bool(residual <= 100 * budget),
        detail=detail,
    )


def _round_slop(ctx, scale):
    return mpf(scale) * mpf(2) ** (-ctx.prec_bits + 16)


# ---------------------------------------------------------------------------
# Order-5 checks
# ---------------------------------------------------------------------------

def check_mf5_scalar(alpha, ctx: PrecisionContext) -> List[CheckEntry]:
    """Residuals of the two scalar transformation laws relating the order-5
    pair at q to its values at q1^4 plus the L-integral correction."""
    with ctx.workprec():
        alpha = mpc(alpha)
        q = mp.exp(-alpha)
        q14 = power_from_alpha(alpha, "q1", 4, ctx)
        chi0_q = eval_mock(MockThetaId(5, "chi0"), q, ctx)
        chi1_q = eval_mock(MockThetaId(5, "chi1"), q, ctx)
        chi0_q14 = eval_mock(MockThetaId(5, "chi0"), q14, ctx)
        chi1_q14 = eval_mock(MockThetaId(5, "chi1"), q14, ctx)

        c_minus = mp.sqrt(mp.pi * (5 - mp.sqrt(5)) / (5 * alpha))
        c_plus = mp.sqrt(mp.pi * (5 + mp.sqrt(5)) / (5 * alpha))
        c_int = mp.sqrt(135 * alpha / (2 * mp.pi))
        p_m130 = power_from_alpha(alpha, "q1", Fraction(-1, 30), ctx)
        p_7130 = power_from_alpha(alpha, "q1", Fraction(71, 30), ctx)

        l1, e1 = l_integral(Fraction(1, 5), 5 * alpha, ctx)
        l2, e2 = l_integral(Fraction(2, 5), 5 * alpha, ctx)

        lhs0 = power_from_alpha(alpha, "q", Fraction(-1, 120), ctx) * (chi0_q - 2)
        rhs0 = (-c_minus * p_m130 * (chi0_q14 - 2)
                - c_plus * p_7130 * chi1_q14
                - c_int * l1)
        lhs1 = power_from_alpha(alpha, "q", Fraction(71, 120), ctx) * chi1_q
        rhs1 = (-c_plus * p_m130 * (chi0_q14 - 2)
                + c_minus * p_7130 * chi1_q14
                - c_int * l2)

        series_budget = ctx.eps * (2 + 2 * (abs(c_minus) + abs(c_plus)) * max(abs(p_m130), abs(p_7130)))
        out = []
        for tag, lhs, rhs, eq in (("mf5_scalar_0", lhs0, rhs0, e1),
                                  ("mf5_scalar_1", lhs1, rhs1, e2)):
            scale = max(abs(lhs), abs(rhs), mpf(1))
            budget = series_budget + abs(c_int) * eq + _round_slop(ctx, scale)
            out.append(_entry(tag, alpha, "alpha", abs(lhs - rhs), scale, budget))
        return out


def _k_vector(alpha, base: str, ctx: PrecisionContext):
    """(B^{-1/120} K0(B), B^{-49/120} K1(B)) for B = Q or Q1 at alpha."""
    B = power_from_alpha(alpha, base, 1, ctx)
    chi0_b = eval_mock(MockThetaId(5, "chi0"), B, ctx)
    chi1_b = eval_mock(MockThetaId(5, "chi1"), B, ctx)
    p0 = power_from_alpha(alpha, base, Fraction(-1, 120), ctx)
    p1 = power_from_alpha(alpha, base, Fraction(-49, 120), ctx)
    vec = (p0 * (2 - chi0_b), p1 * (-B * chi1_b))
    budget_scale = abs(p0) + abs(p1) * abs(B)
    return vec, budget_scale


def check_mf5_matrix(alpha, ctx: PrecisionContext) -> List[CheckEntry]:
    """Residual of the compact matrix form of the order-5 laws."""
    with ctx.workprec():
        alpha = mpc(alpha)
        lv = l_vector(alpha, ctx)
        vq, s1 = _k_vector(alpha, "Q", ctx)
        vq1, s2 = _k_vector(alpha, "Q1", ctx)
        root = mp.sqrt(mp.pi / alpha)
        mixed = mat_vec(mixing_matrix(ctx), vq1)
        rhs = (vq[0] + root * mixed[0], vq[1] + root * mixed[1])
        res = max(abs(lv.l1 - rhs[0]), abs(lv.l2 - rhs[1]))
        scale = max(abs(lv.l1), abs(lv.l2), mpf(1))
        budget = (ctx.eps * (s1 + 2 * abs(root) * s2) + lv.err_estimate
                  + _round_slop(ctx, scale))
        return [_entry("mf5_matrix", alpha, "alpha", res, scale, budget)]


def check_l_vector(alpha, ctx: PrecisionContext) -> List[CheckEntry]:
    """Modular consistency of the integral vector under alpha -> pi^2/alpha;
    at the fixed point alpha = pi additionally the (1 - M) annihilation."""
    with ctx.workprec():
        alpha = mpc(alpha)
        lv = l_vector(alpha, ctx)
        lv_s = l_vector(mp.pi**2 / alpha, ctx)
        root = mp.sqrt(mp.pi / alpha)
        mixed = mat_vec(mixing_matrix(ctx), lv_s.as_tuple())
        res = max(abs(lv.l1 - root * mixed[0]), abs(lv.l2 - root * mixed[1]))
        scale = max(abs(lv.l1), abs(lv.l2), mpf(1))
        budget = (lv.err_estimate + abs(root) * lv_s.err_estimate
                  + _round_slop(ctx, scale))
        out = [_entry("l_vector_consistency", alpha, "alpha", res, scale, budget)]
        if abs(alpha - mp.pi) < mpf(2) ** -20:
            one_minus_m = mat_sub(identity2(), mixing_matrix(ctx))
            v = mat_vec(one_minus_m, lv.as_tuple())
            res_fp = max(abs(v[0]), abs(v[1]))
            budget_fp = 2 * lv.err_estimate + _round_slop(ctx, scale)
            out.append(_entry("l_vector_fixed_point", alpha, "alpha",
                              res_fp, scale, budget_fp))
        return out


def check_stokes(abs_alpha, ctx: PrecisionContext,
                 eps_seq: Sequence = ("0.2", "0.1", "0.05", "0.025")) -> List[CheckEntry]:
    """Lateral-limit residuals against the unary predictions at the Stokes
    line; the entry records the matched lateral sign and both residual
    tables (corrected and literal-display predictions)."""
    with ctx.workprec():
        dec = stokes_decompose(abs_alpha, [mpf(e) for e in eps_seq], ctx)
        res = max(dec.extrap_residual_real, dec.extrap_residual_imag)
        scale = max(abs(dec.extrapolated[0]), abs(dec.extrapolated[1]), mpf(1))
        # extrapolation error dominates; its a-posteriori Neville estimate
        # (full table vs table with the coarsest point dropped) is the budget
        budget = (4 * dec.extrap_err_estimate + 16 * dec.quad_budget
                  + ctx.eps * 64 + _round_slop(ctx, scale))
        detail = {
            "matched_sign": dec.matched_sign,
            "re_residuals": [mp.nstr(r, 8) for r in dec.re_residuals],
            "im_residuals": [mp.nstr(r, 8) for r in dec.im_residuals],
            "extrap_residual_real": mp.nstr(dec.extrap_residual_real, 8),
            "extrap_residual_imag": mp.nstr(dec.extrap_residual_imag, 8),
            "literal_residual_real": mp.nstr(dec.literal_residual_real, 8),
            "literal_residual_imag": mp.nstr(dec.literal_residual_imag, 8),
        }
        return [_entry("mf5_stokes", mpc(abs_alpha), "abs_alpha", res, scale,
                       budget, detail)]


# ---------------------------------------------------------------------------
# Order-3 checks
# ---------------------------------------------------------------------------

def check_mf3_omega(alpha, ctx: PrecisionContext) -> List[CheckEntry]:
    """q^{2/3} w(-q) + sqrt(pi/a) q1^{2/3} w(-q1) - sqrt(12a/pi) W3(a)."""
    with ctx.workprec():
        alpha = mpc(alpha)
        q = mp.exp(-alpha)
        q1 = mp.exp(-mp.pi**2 / alpha)
        om = MockThetaId(3, "omega")
        t1 = power_from_alpha(alpha, "q", Fraction(2, 3), ctx) * eval_mock(om, -q, ctx)
        root = mp.sqrt(mp.pi / alpha)
        t2 = root * power_from_alpha(alpha, "q1", Fraction(2, 3), ctx) * eval_mock(om, -q1, ctx)
        w3, e3 = w3_integral(alpha, ctx)
        c = mp.sqrt(12 * alpha / mp.pi)
        res = abs(t1 + t2 - c * w3)
        scale = max(abs(t1), abs(t2), abs(c * w3), mpf(1))
        budget = ctx.eps * (1 + abs(root)) + abs(c) * e3 + _round_slop(ctx, scale)
        return [_entry("mf3_omega", alpha, "alpha", res, scale, budget)]


def check_mf3_omega_f(alpha, ctx: PrecisionContext) -> List[CheckEntry]:
    """q^{2/3} w(q) - sqrt(pi/4a) q1^{-1/12} f(q1^2) + sqrt(3a/pi) W2(a/2)."""
    with ctx.workprec():
        alpha = mpc(alpha)
        q = mp.exp(-alpha)
        Q1 = power_from_alpha(alpha, "Q1", 1, ctx)
        t1 = power_from_alpha(alpha, "q", Fraction(2, 3), ctx) * eval_mock(
            MockThetaId(3, "omega"), q, ctx)
        p = power_from_alpha(alpha, "q1", Fraction(-1, 12), ctx)
        t2 = mp.sqrt(mp.pi / (4 * alpha)) * p * eval_mock(MockThetaId(3, "f"), Q1, ctx)
        w2, e2 = w2_integral(alpha / 2, ctx)
        c = mp.sqrt(3 * alpha / mp.pi)
        res = abs(t1 - t2 + c * w2)
        scale = max(abs(t1), abs(t2), abs(c * w2), mpf(1))
        budget = (ctx.eps * (1 + abs(mp.sqrt(mp.pi / (4 * alpha))) * abs(p))
                  + abs(c) * e2 + _round_slop(ctx, scale))
        return [_entry("mf3_omega_f", alpha, "alpha", res, scale, budget)]


def check_mf3_alternative(alpha, ctx: PrecisionContext) -> List[CheckEntry]:
    """The variant decomposition of sqrt(12a/pi) W3 through rho and xi.

    All fractional powers go through alpha, so xi is evaluated at
    -exp(-alpha/3), never at a complex cube root."""
    with ctx.workprec():
        alpha = mpc(alpha)
        rho = MockThetaId(3, "rho")
        xi = MockThetaId(3, "xi")

        def bracket(expo_alpha):
            # q^{2/3} [-rho(-q) + (1/2) q^{-2/3} xi(-q^{1/3})] at q = exp(-expo)
            q = mp.exp(-expo_alpha)
            q13 = mp.exp(-expo_alpha / 3)
            q23 = mp.exp(-2 * expo_alpha / 3)
            return q23 * (-eval_mock(rho, -q, ctx)) + eval_mock(xi, -q13, ctx) / 2

        b_q = bracket(alpha)
        b_q1 = bracket(mp.pi**2 / alpha)
        root = mp.sqrt(mp.pi / alpha)
        w3, e3 = w3_integral(alpha, ctx)
        c = mp.sqrt(12 * alpha / mp.pi)
        res = abs(c * w3 - b_q - root * b_q1)
        scale = max(abs(c * w3), abs(b_q), abs(root * b_q1), mpf(1))
        budget = (ctx.eps * 3 * (1 + abs(root)) + abs(c) * e3
                  + _round_slop(ctx, scale))
        return [_entry("mf3_alternative", alpha, "alpha", res, scale, budget)]


def check_growth_omega(theta0, alpha_grid, ctx: PrecisionContext) -> List[CheckEntry]:
    """No-growth statistic |a|^{1/2} |q1|^{1/12} |w(e^{-a})| along a ray grid.

    The entry's residual is the excess of max(small-|a| half) over twice
    max(large-|a| half), zero when the bound statistic shows no trend."""
    with ctx.workprec():
        theta0 = mpf(theta0)
        if not (0 < theta0 < mp.pi / 2):
            raise DomainError("theta0 must lie in (0, pi/2)")
        stats = []
        for alpha in alpha_grid:
            alpha = mpc(alpha)
            if abs(mp.arg(alpha)) > theta0 + mpf(2) ** -30:
                raise DomainError("grid point outside the sector")
            q = mp.exp(-alpha)
            q1_mag = abs(mp.exp(-mp.pi**2 / alpha))
            s = (mp.sqrt(abs(alpha)) * q1_mag ** (mpf(1) / 12)
                 * abs(eval_mock(MockThetaId(3, "omega"), q, ctx)))
            stats.append((abs(alpha), s))
        stats.sort(key=lambda t: t[0], reverse=True)
        half = len(stats) // 2
        larger = max(s for _, s in stats[:half])
        smaller = max(s for _, s in stats[half:])
        ratio = smaller / larger
        res = max(mpf(0), ratio - 2)
        detail = {
            "ratio": mp.nstr(ratio, 8),
            "stats": [[mp.nstr(m, 8), mp.nstr(s, 8)] for m, s in stats],
        }
        ray = mp.arg(mpc(alpha_grid[0]))
        point = mpc(mp.cos(ray), mp.sin(ray))
        return [CheckEntry("mf3_growth", point, "ray", res, ratio / 2, mpf(1),
                           bool(ratio <= 2), detail)]


# ---------------------------------------------------------------------------
# Eta / theta checks
# ---------------------------------------------------------------------------

def check_eta_theta(tau, ctx: PrecisionContext) -> List[CheckEntry]:
    """Transformation residuals for eta and theta3 plus the chain
    theta3(1 - 1/z) = theta4(-1/z) = sqrt(-iz) theta2(z) and the product
    lower bound on |theta3(1 - 1/z)|."""
    with ctx.workprec():
        tau = mpc(tau)
        e_tau = eta(tau, ctx)
        entries = []

        res = abs(eta(tau + 1, ctx) - mp.exp(mp.pi * 1j / 12) * e_tau)
        scale = max(abs(e_tau), mpf(1))
        budget = 2 * ctx.eps + _round_slop(ctx, scale)
        entries.append(_entry("eta_T", tau, "tau", res, scale, budget))

        root = mp.sqrt(-1j * tau)
        res = abs(eta(-1 / tau, ctx) - root * e_tau)
        budget = ctx.eps * (1 + abs(root)) + _round_slop(ctx, scale)
        entries.append(_entry("eta_S", tau, "tau", res, scale, budget))

        t3 = theta(3, tau, ctx)
        scale3 = max(abs(t3), mpf(1))
        res = abs(theta(3, tau + 2, ctx) - t3)
        entries.append(_entry("theta3_T", tau, "tau", res, scale3,
                              2 * ctx.eps + _round_slop(ctx, scale3)))
        res = abs(theta(3, -1 / tau, ctx) - root * t3)
        entries.append(_entry("theta3_S", tau, "tau", res, scale3,
                              ctx.eps * (1 + abs(root)) + _round_slop(ctx, scale3)))

        # chain at z = tau
        z = tau
        rootz = mp.sqrt(-1j * z)
        lhs = theta(3, 1 - 1 / z, ctx)
        mid = theta(4, -1 / z, ctx)
        rhs = rootz * theta(2, z, ctx)
        res = max(abs(lhs - mid), abs(mid - rhs))
        scale_c = max(abs(lhs), abs(mid), abs(rhs), mpf(1))
        entries.append(_entry("theta_chain", tau, "tau", res, scale_c,
                              ctx.eps * (2 + abs(rootz)) + _round_slop(ctx, scale_c)))

        # product-form lower bound |theta3(1-1/z)| >= c |z|^{1/2} |q1z|^{1/4}
        q1z = mp.exp(mp.pi * 1j * z)
        aq = abs(q1z)
        prod = mpf(1)
        n = 1
        while aq ** (2 * n) > mpf(2) ** (-ctx.prec_bits):
            prod *= (1 - aq ** (2 * n)) ** 3
            n += 1
        bound = 2 * prod * mp.sqrt(abs(z)) * aq ** mpf("0.25")
        res = max(mpf(0), bound - abs(lhs))
        entries.append(_entry("theta3_lower", tau, "tau", res, max(bound, mpf(1)),
                              ctx.eps * 4 + _round_slop(ctx, scale_c),
                              detail={"bound": mp.nstr(bound, 8),
                                      "value": mp.nstr(abs(lhs), 8)}))
        return entries


# ---------------------------------------------------------------------------
# Group relations and Wronskian machinery
# ---------------------------------------------------------------------------

def group_relations(ctx: PrecisionContext) -> List[CheckEntry]:
    """Matrix-norm residuals of D^20 = M^2 = (-M D)^3 = identity."""
    with ctx.workprec():
        M = mixing_matrix(ctx)
        D = phase_matrix(ctx)
        one = identity2()
        slop = _round_slop(ctx, 64)
        out = []
        for name, A, n in (("group_D20", D, 20), ("group_M2", M, 2),
                           ("group_MD3", mat_neg(mat_mul(M, D)), 3)):
            res = mat_norm(mat_sub(mat_pow(A, n), one))
            out.append(_entry(name, None, None, res, mpf(1), slop))
        return out


def _v_vector(h0, h1, tau, ctx: PrecisionContext):
    """v = (Q^{-1/20} H0(Q), Q^{-9/20} H1(Q)) and d/dtau of both components.

    H0, H1 are finite Q-polynomials with rational coefficients; derivatives
    are exact term-wise (d/dtau of Q^s is 2 pi i s Q^s)."""
    tau = mpc(tau)
    alpha = -mp.pi * 1j * tau
    two_pi_i = 2 * mp.pi * 1j
    vals = []
    ders = []
    for coeffs, shift in ((h0, Fraction(-1, 20)), (h1, Fraction(-9, 20))):
        v = mpc(0)
        dv = mpc(0)
        for m, c in enumerate(coeffs):
            c = Fraction(c)
            if c == 0:
                continue
            s = m + shift
            term = (mpf(c.numerator) / c.denominator) * power_from_alpha(
                alpha, "Q", s, ctx)
            v += term
            dv += two_pi_i * (mpf(s.numerator) / s.denominator) * term
        vals.append(v)
        ders.append(dv)
    return vals, ders


def wronskian_periodicity(h0_coeffs, h1_coeffs, tau,
                          ctx: PrecisionContext) -> List[CheckEntry]:
    """For v built from arbitrary polynomial Q-series: the phase relation
    v(tau+1) = D v(tau) and the sign flip W(tau+1) = -W(tau)."""
    with ctx.workprec():
        tau = mpc(tau)
        v, dv = _v_vector(h0_coeffs, h1_coeffs, tau, ctx)
        v1, dv1 = _v_vector(h0_coeffs, h1_coeffs, tau + 1, ctx)
        D = phase_matrix(ctx)
        dvv = mat_vec(D, v)
        res_v = max(abs(v1[0] - dvv[0]), abs(v1[1] - dvv[1]))
        w = v[0] * dv[1] - dv[0] * v[1]
        w1 = v1[0] * dv1[1] - dv1[0] * v1[1]
        res_w = abs(w1 + w)
        scale_v = max(abs(v[0]), abs(v[1]), mpf(1))
        scale_w = max(abs(w), mpf(1))
        n_terms = len(h0_coeffs) + len(h1_coeffs)
        slop_v = _round_slop(ctx, scale_v * max(4, n_terms))
        slop_w = _round_slop(ctx, scale_w * max(16, 4 * n_terms))
        return [
            _entry("wronskian_v_T", tau, "tau", res_v, scale_v, slop_v),
            _entry("wronskian_w_T", tau, "tau", res_w, scale_w, slop_w),
        ]


def g_function(h0_coeffs, h1_coeffs, tau, ctx: PrecisionContext) -> mpc:
    """G = W^3 / eta^12 for the vector built from the given pair."""
    with ctx.workprec():
        tau = mpc(tau)
        v, dv = _v_vector(h0_coeffs, h1_coeffs, tau, ctx)
        w = v[0] * dv[1] - dv[0] * v[1]
        return w**3 / eta(tau, ctx) ** 12


def check_g_invariance(h0_coeffs, h1_coeffs, tau,
                       ctx: PrecisionContext) -> List[CheckEntry]:
    with ctx.workprec():
        tau = mpc(tau)
        g0 = g_function(h0_coeffs, h1_coeffs, tau, ctx)
        g1 = g_function(h0_coeffs, h1_coeffs, tau + 1, ctx)
        res = abs(g1 - g0)
        scale = max(abs(g0), mpf(1))
        n_terms = len(h0_coeffs) + len(h1_coeffs)
        budget = ctx.eps * 24 * scale + _round_slop(ctx, scale * max(64, 16 * n_terms))
        return [_entry("g_T_invariance", tau, "tau", res, scale, budget)]


def check_wronskian_suite(ctx: PrecisionContext, n_pairs: int = 50,
                          degree: int = 8, tau=None,
                          seed: int = WRONSKIAN_SEED) -> List[CheckEntry]:
    """Canonical pair plus seeded random rational pairs at a fixed tau; the
    reported entries carry the worst residual over all pairs."""
    with ctx.workprec():
        tau = mpc("0.2", "1.1") if tau is None else mpc(tau)
        rng = random.Random(seed)
        worst: Dict[str, CheckEntry] = {}

        def absorb(entries):
            for e in entries:
                cur = worst.get(e.identity)
                if cur is None or e.abs_residual > cur.abs_residual:
                    worst[e.identity] = e

        absorb(wronskian_periodicity([1], [0, 1], tau, ctx))
        absorb(check_g_invariance([1], [0, 1], tau, ctx))
        for _ in range(n_pairs):
            h0 = [Fraction(rng.randint(-99, 99), rng.randint(1, 9))
                  for _ in range(degree + 1)]
            h1 = [Fraction(rng.randint(-99, 99), rng.randint(1, 9))
                  for _ in range(degree + 1)]
            absorb(wronskian_periodicity(h0, h1, tau, ctx))
            absorb(check_g_invariance(h0, h1, tau, ctx))
        detail = {"pairs": n_pairs + 1, "degree": degree, "seed": seed}
        return [CheckEntry(e.identity, e.point, e.kind, e.abs_residual,
                           e.rel_residual, e.budget, e.passed, detail)
                for e in sorted(worst.values(), key=lambda e: e.identity)]


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

SUITES = ("mf5", "mf5_stokes", "mf3", "theta_eta", "algebra", "wronskian", "all")


def _growth_grid(ctx):
    with ctx.workprec():
        moduli = [mpf(1), mpf("0.5"), mpf("0.25"), mpf("0.1"), mpf("0.05"),
                  mpf("0.02")]
        rays = [mpf(0), mp.pi / 6, mp.pi / 3]
        return rays, moduli


def run_suite(suite: str, grid=None, ctx: Optional[PrecisionContext] = None,
              stokes_eps_seq=("0.2", "0.1", "0.05", "0.025")) -> SuiteReport:
    """Run the named verification suite and aggregate an ordered report.

    A failed point is recorded with its error message rather than aborting
    the suite."""
    ctx = ctx or PrecisionContext()
    if suite not in SUITES:
        raise DomainError("unknown suite %r (choose from %s)" % (suite, (SUITES,)))
    entries: List[CheckEntry] = []

    def run(fn, *args):
        try:
            entries.extend(fn(*args))
        except Exception as exc:  # recorded, not fatal
            entries.append(CheckEntry(
                identity="%s_error" % fn.__name__, point=None, kind=None,
                abs_residual=mpf("inf"), rel_residual=mpf("inf"),
                budget=mpf(0), passed=False,
                detail={"error": "%s: %s" % (type(exc).__name__, exc)}))

    with ctx.workprec():
        if suite in ("mf5", "all"):
            pts = grid if (grid is not None and suite == "mf5") else DEFAULT_ALPHA_GRID(ctx)
            for alpha in pts:
                run(check_mf5_scalar, alpha, ctx)
                run(check_mf5_matrix, alpha, ctx)
                run(check_l_vector, alpha, ctx)
        if suite in ("mf5_stokes", "all"):
            moduli = grid if (grid is not None and suite == "mf5_stokes") else None
            if moduli is None:
                moduli = DEFAULT_STOKES_MODULI(ctx)
            for a in moduli:
                run(check_stokes, a, ctx, stokes_eps_seq)
        if suite in ("mf3", "all"):
            pts = grid if (grid is not None and suite == "mf3") else DEFAULT_MF3_GRID(ctx)
            for alpha in pts:
                run(check_mf3_omega, alpha, ctx)
                run(check_mf3_omega_f, alpha, ctx)
                run(check_mf3_alternative, alpha, ctx)
            rays, moduli = _growth_grid(ctx)
            for ray in rays:
                alpha_grid = [m * mp.exp(1j * ray) for m in moduli]
                run(check_growth_omega, mp.pi / 3, alpha_grid, ctx)
        if suite in ("theta_eta", "all"):
            pts = grid if (grid is not None and suite == "theta_eta") else DEFAULT_TAU_GRID(ctx)
            for tau in pts:
                run(check_eta_theta, tau, ctx)
        if suite in ("algebra", "all"):
            run(group_relations, ctx)
        if suite in ("wronskian", "all"):
            run(check_wronskian_suite, ctx)

    return _aggregate(suite, entries, ctx)


def _point_sort_key(e: CheckEntry):
    if e.point is None:
        return ("", "")
    return (mp.nstr(e.point.real, 20), mp.nstr(e.point.imag, 20))


def _aggregate(suite: str, entries: List[CheckEntry],
               ctx: PrecisionContext) -> SuiteReport:
    by_name: Dict[str, List[CheckEntry]] = {}
    for e in entries:
        by_name.setdefault(e.identity, []).append(e)
    reports = []
    for name in sorted(by_name):
        es = sorted(by_name[name], key=_point_sort_key)
        finite = [e.abs_residual for e in es if mp.isfinite(e.abs_residual)]
        max_abs = max(finite) if finite else mpf("inf")
        reports.append(IdentityReport(
            identity_name=name,
            entries=tuple(es),
            max_abs=max_abs,
            all_pass=all(e.passed for e in es),
            metadata={"prec_bits": ctx.prec_bits},
        ))
    return SuiteReport(
        suite=suite,
        prec_bits=ctx.prec_bits,
        eps=ctx.eps,
        quad_eps=ctx.quad_eps,
        identities=tuple(reports),
        all_pass=all(r.all_pass for r in reports),
    )


# ---------------------------------------------------------------------------
# Serialization (deterministic: fixed digit count, canonical ordering)
# ---------------------------------------------------------------------------

def _digits(prec_bits: int) -> int:
    return -(-prec_bits * 302 // 1000)  # ceil(prec_bits * 0.302)


def _fmt(x, prec_bits: int) -> str:
    return mp.nstr(mpf(x), _digits(prec_bits))


def _point_json(e: CheckEntry, prec_bits: int):
    if e.point is None:
        return None
    return {"re": _fmt(e.point.real, prec_bits), "im": _fmt(e.point.imag, prec_bits)}


def identity_report_to_dict(rep: IdentityReport, ctx: PrecisionContext) -> dict:
    pb = ctx.prec_bits
    d = {
        "identity": rep.identity_name,
        "prec_bits": pb,
        "eps": _fmt(ctx.eps, pb),
        "entries": [
            {
                "point": _point_json(e, pb),
                "abs_residual": _fmt(e.abs_residual, pb),
                "rel_residual": _fmt(e.rel_residual, pb),
                "budget": _fmt(e.budget, pb),
                "pass": e.passed,
            }
            for e in rep.entries
        ],
        "max_abs": _fmt(rep.max_abs, pb),
        "all_pass": rep.all_pass,
    }
    signs = sorted({e.detail["matched_sign"] for e in rep.entries
                    if e.detail and "matched_sign" in e.detail})
    if signs:
        d["lateral_sign"] = signs
    return d


def suite_report_to_json(rep: SuiteReport, ctx: PrecisionContext) -> str:
    doc = {
        "suite": rep.suite,
        "prec_bits": rep.prec_bits,
        "eps": _fmt(rep.eps, rep.prec_bits),
        "quad_eps": _fmt(rep.quad_eps, rep.prec_bits),
        "identities": [identity_report_to_dict(r, ctx) for r in rep.identities],
        "all_pass": rep.all_pass,
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"
