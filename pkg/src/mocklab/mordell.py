"""Numerical evaluation of the Gaussian-weighted hyperbolic-quotient
integrals L(r, alpha), W2(alpha), W3(alpha) for complex alpha, including
lateral limits at the negative-axis Stokes line, the principal-value
summation identity, and the two-component integral vector.

Contour strategy: every integral is taken along the ray rotated by
-arg(alpha)/2, which makes the Gaussian factor exactly real-decaying and
keeps the pole line of the hyperbolic quotient at angular distance
(pi - |arg alpha|)/2 from the contour.  The semi-infinite ray is cut where a
certified envelope drops below the quadrature target, and panels accumulate
dyadically toward the projections of nearby poles so that both quadrature
schemes converge geometrically however close the Stokes line is approached.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

from mpmath import mp, mpc, mpf

from .errors import (
    DomainError,
    ExtrapolationInstability,
    NonConvergenceError,
    PoleProximityError,
)
from .matrices import mat_vec, mixing_matrix
from .modpoint import PrecisionContext, power_from_alpha
from .qseries import unary_x

__all__ = [
    "QuadratureResult",
    "RayIntegrand",
    "integrate_ray",
    "refinement_table",
    "l_integral",
    "w2_integral",
    "w3_integral",
    "LVector",
    "l_vector",
    "pv_sum",
    "pv_quadrature",
    "lateral_l_vector",
    "StokesDecomposition",
    "stokes_decompose",
    "neville_extrapolate",
]

LATERAL_FLOOR = mpf("1e-3")  # smallest admissible pi - |theta|

_GL_NODE_CACHE: dict = {}
_VALUE_CACHE: dict = {}


@dataclass(frozen=True)
class QuadratureResult:
    value: mpc
    err_estimate: mpf
    nodes_used: int
    scheme: str  # 'tanh_sinh' or 'gauss_patch'


@dataclass(frozen=True)
class RayIntegrand:
    """Descriptor of an integrand f on a pole-free cone.

    func          integrand in the unrotated variable x
    gauss_coeff   c with |func| <= bound_const * exp(-Re(c x^2)) away from poles
    poles         pole positions relevant to the contour (finite list)
    bound_const   envelope constant for the cut/tail estimate
    exclusion     minimal admissible sine of the ray-pole angular separation
    """

    func: Callable[[mpc], mpc]
    gauss_coeff: mpc
    poles: Tuple[mpc, ...] = ()
    bound_const: mpf = mpf(16)
    exclusion: mpf = mpf("1e-6")


def _gl_nodes(degree: int, prec: int):
    key = (degree, prec)
    nodes = _GL_NODE_CACHE.get(key)
    if nodes is None:
        from mpmath.calculus.quadrature import GaussLegendre

        nodes = GaussLegendre(mp).calc_nodes(degree, prec + 10)
        _GL_NODE_CACHE[key] = nodes
    return nodes


def _geometry(integrand: RayIntegrand, angle, ctx: PrecisionContext):
    """Rotation, cut point, tail bound and panel break points for the ray."""
    w = mp.exp(1j * mpf(angle))
    a_eff = (integrand.gauss_coeff * w * w).real
    if not a_eff > 0:
        raise DomainError("Gaussian factor does not decay along this ray")
    tail_target = ctx.quad_eps * mpf(2) ** -10
    big_l = mp.log(integrand.bound_const / tail_target)
    cut = mp.sqrt(big_l / a_eff)
    # pole guard and dyadic break points toward each pole projection
    points: List[mpf] = []
    for pole in integrand.poles:
        sp = pole / w
        proj, perp = sp.real, abs(sp.imag)
        dist = perp if 0 <= proj <= cut else min(abs(sp), abs(sp - cut))
        if dist / abs(sp) < integrand.exclusion:
            raise PoleProximityError(
                "ray passes within the exclusion radius of a pole"
            )
        if proj <= 0 or proj >= cut:
            continue
        points.append(proj)
        d = perp
        while d < cut:
            if proj - d > 0:
                points.append(proj - d)
            if proj + d < cut:
                points.append(proj + d)
            d *= 2
    points = sorted(set([mpf(0)] + points + [cut]))
    tail = integrand.bound_const * mp.exp(-a_eff * cut * cut) / (2 * a_eff * cut)
    return w, points, tail


def integrate_ray(integrand: RayIntegrand, angle, ctx: PrecisionContext,
                  scheme: str = "tanh_sinh") -> QuadratureResult:
    """Integrate integrand.func from 0 to infinity along the ray at the given angle.

    tanh_sinh delegates panel refinement to double-exponential quadrature;
    gauss_patch doubles the Gauss-Legendre node count per panel until two
    successive levels agree below the quadrature target.
    """
    with mp.workprec(ctx.prec_bits + 16):
        w, points, tail = _geometry(integrand, angle, ctx)
        counter = [0]

        def F(s):
            counter[0] += 1
            return w * integrand.func(w * s)

        if scheme == "tanh_sinh":
            value, err = mp.quad(F, points, method="tanh-sinh", error=True,
                                 maxdegree=10)
        elif scheme == "gauss_patch":
            target = ctx.quad_eps * mpf(2) ** -4
            panel_tol = target / max(8, len(points) - 1)
            value = mpc(0)
            err = mpf(0)
            for a, b in zip(points[:-1], points[1:]):
                mid, half = (a + b) / 2, (b - a) / 2
                prev = None
                for degree in range(4, 10):
                    total = mpc(0)
                    for x, wt in _gl_nodes(degree, ctx.prec_bits):
                        counter[0] += 1
                        total += wt * F(mid + half * x)
                    total *= half
                    if prev is not None and abs(total - prev) < panel_tol:
                        err += abs(total - prev)
                        break
                    prev = total
                else:
                    raise NonConvergenceError(
                        "gauss_patch panel failed to converge"
                    )
                value += total
        else:
            raise DomainError("scheme must be 'tanh_sinh' or 'gauss_patch'")
        err = mpf(err) + tail
        if not err < ctx.quad_eps:
            raise NonConvergenceError(
                "quadrature error estimate %s above target" % mp.nstr(err, 5)
            )
        return QuadratureResult(mpc(value), err, counter[0], scheme)


def refinement_table(integrand: RayIntegrand, angle, ctx: PrecisionContext,
                     degrees: Sequence[int] = (3, 4, 5, 6, 7)) -> List[mpc]:
    """Fixed-degree Gauss sweeps over the panel set, one total per degree.

    Exposes the raw node-doubling convergence behaviour for diagnostics."""
    with mp.workprec(ctx.prec_bits + 16):
        w, points, _tail = _geometry(integrand, angle, ctx)
        out = []
        for degree in degrees:
            total = mpc(0)
            for a, b in zip(points[:-1], points[1:]):
                mid, half = (a + b) / 2, (b - a) / 2
                acc = mpc(0)
                for x, wt in _gl_nodes(degree, ctx.prec_bits):
                    acc += wt * integrand.func(w * (mid + half * x)) * w
                total += acc * half
            out.append(total)
        return out


# ---------------------------------------------------------------------------
# The concrete integrals
# ---------------------------------------------------------------------------

def _pole_radii(step: mpf, cut: mpf, odd_only: bool = True):
    """Radii m*step with m odd (or m not divisible by 3) up to 2*cut."""
    out = []
    m = 1
    while m * step <= 2 * cut:
        if odd_only:
            keep = m % 2 == 1
        else:
            keep = m % 3 != 0
        if keep:
            out.append(m * step)
        m += 1
    return out


def _exclusion_for(alpha) -> mpf:
    theta = abs(mp.arg(alpha))
    return min(mpf("0.1"), (mp.pi - theta) / 8)


def _cache_key(tag: str, alpha: mpc, ctx: PrecisionContext, scheme: str):
    return (tag, mpc(alpha)._mpc_, ctx.prec_bits, ctx.quad_eps._mpf_, scheme)


def l_integral(r, alpha, ctx: PrecisionContext,
               scheme: str = "tanh_sinh") -> Tuple[mpc, mpf]:
    """integral_0^inf e^{-(3/2) a x^2} [cosh((3r-2)ax) + cosh((3r-1)ax)]
    / cosh((3/2) a x) dx for a = alpha, |arg alpha| < pi.

    Returns (value, err_estimate).  The contour is the ray at -arg(alpha)/2;
    the quotient's poles sit at i*pi*(2k+1)/(3 alpha) and stay separated from
    the contour by the angle (pi - |arg alpha|)/2.
    """
    r = Fraction(r)
    with ctx.workprec():
        alpha = mpc(alpha)
        theta = mp.arg(alpha)
        if not abs(theta) < mp.pi:
            raise DomainError("l_integral needs |arg alpha| < pi")
        key = _cache_key("L%s" % r, alpha, ctx, scheme)
        hit = _VALUE_CACHE.get(key)
        if hit is not None:
            return hit
        c32 = mpf(3) / 2
        a1 = mpf((3 * r - 2).numerator) / (3 * r - 2).denominator
        a2 = mpf((3 * r - 1).numerator) / (3 * r - 1).denominator

        def f(x):
            return (mp.exp(-c32 * alpha * x * x)
                    * (mp.cosh(a1 * alpha * x) + mp.cosh(a2 * alpha * x))
                    / mp.cosh(c32 * alpha * x))

        sinsep = mp.cos(theta / 2)
        const = 16 * (1 + 1 / sinsep)
        cut_guess = mp.sqrt(mp.log(const / (ctx.quad_eps * mpf(2) ** -10))
                            / (c32 * abs(alpha)))
        step = mp.pi / (3 * abs(alpha))
        poles = []
        for rad in _pole_radii(step, cut_guess, odd_only=True):
            poles.append(1j * rad * mp.exp(-1j * theta))
            poles.append(-1j * rad * mp.exp(-1j * theta))
        integrand = RayIntegrand(f, c32 * alpha, tuple(poles), mpf(const),
                                 _exclusion_for(alpha))
        res = integrate_ray(integrand, -theta / 2, ctx, scheme)
        out = (res.value, res.err_estimate)
        _VALUE_CACHE[key] = out
        return out


def w3_integral(alpha, ctx: PrecisionContext,
                scheme: str = "tanh_sinh") -> Tuple[mpc, mpf]:
    """integral_0^inf e^{-3 a x^2} sinh(ax)/sinh(3ax) dx, |arg alpha| < pi."""
    with ctx.workprec():
        alpha = mpc(alpha)
        theta = mp.arg(alpha)
        if not abs(theta) < mp.pi:
            raise DomainError("w3_integral needs |arg alpha| < pi")
        key = _cache_key("W3", alpha, ctx, scheme)
        hit = _VALUE_CACHE.get(key)
        if hit is not None:
            return hit

        def f(x):
            if x == 0:
                return mpc(1) / 3
            return mp.exp(-3 * alpha * x * x) * mp.sinh(alpha * x) / mp.sinh(3 * alpha * x)

        sinsep = mp.cos(theta / 2)
        const = 16 * (1 + 1 / sinsep)
        cut_guess = mp.sqrt(mp.log(const / (ctx.quad_eps * mpf(2) ** -10))
                            / (3 * abs(alpha)))
        step = mp.pi / (3 * abs(alpha))
        poles = []
        for rad in _pole_radii(step, cut_guess, odd_only=False):
            poles.append(1j * rad * mp.exp(-1j * theta))
            poles.append(-1j * rad * mp.exp(-1j * theta))
        integrand = RayIntegrand(f, 3 * alpha, tuple(poles), mpf(const),
                                 _exclusion_for(alpha))
        res = integrate_ray(integrand, -theta / 2, ctx, scheme)
        out = (res.value, res.err_estimate)
        _VALUE_CACHE[key] = out
        return out


def w2_integral(alpha, ctx: PrecisionContext,
                scheme: str = "tanh_sinh") -> Tuple[mpc, mpf]:
    """integral_0^inf e^{-(3/2) a x^2} cosh(ax)/cosh(3ax) dx, |arg alpha| < pi."""
    with ctx.workprec():
        alpha = mpc(alpha)
        theta = mp.arg(alpha)
        if not abs(theta) < mp.pi:
            raise DomainError("w2_integral needs |arg alpha| < pi")
        key = _cache_key("W2", alpha, ctx, scheme)
        hit = _VALUE_CACHE.get(key)
        if hit is not None:
            return hit

        def f(x):
            return mp.exp(-mpf(3) / 2 * alpha * x * x) * mp.cosh(alpha * x) / mp.cosh(3 * alpha * x)

        sinsep = mp.cos(theta / 2)
        const = 16 * (1 + 1 / sinsep)
        cut_guess = mp.sqrt(mp.log(const / (ctx.quad_eps * mpf(2) ** -10))
                            / (mpf(3) / 2 * abs(alpha)))
        step = mp.pi / (6 * abs(alpha))
        poles = []
        for rad in _pole_radii(step, cut_guess, odd_only=True):
            poles.append(1j * rad * mp.exp(-1j * theta))
            poles.append(-1j * rad * mp.exp(-1j * theta))
        integrand = RayIntegrand(f, mpf(3) / 2 * alpha, tuple(poles),
                                 mpf(const), _exclusion_for(alpha))
        res = integrate_ray(integrand, -theta / 2, ctx, scheme)
        out = (res.value, res.err_estimate)
        _VALUE_CACHE[key] = out
        return out


# ---------------------------------------------------------------------------
# The two-component integral vector
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LVector:
    """sqrt(135 alpha/pi) * (L(1/5, 10 alpha), L(2/5, 10 alpha))."""

    l1: mpc
    l2: mpc
    err_estimate: mpf

    def as_tuple(self):
        return (self.l1, self.l2)


def l_vector(alpha, ctx: PrecisionContext, scheme: str = "tanh_sinh") -> LVector:
    with ctx.workprec():
        alpha = mpc(alpha)
        pref = mp.sqrt(135 * alpha / mp.pi)
        v1, e1 = l_integral(Fraction(1, 5), 10 * alpha, ctx, scheme)
        v2, e2 = l_integral(Fraction(2, 5), 10 * alpha, ctx, scheme)
        ap = abs(pref)
        return LVector(pref * v1, pref * v2, ap * (e1 + e2))


def lateral_l_vector(abs_alpha, theta, ctx: PrecisionContext,
                     floor=LATERAL_FLOOR) -> LVector:
    """The vector at alpha = abs_alpha * e^{i theta} near the negative axis.

    Controlled approach window 0 < pi - |theta| <= pi/2; the quadrature runs
    on pole-hugging Gauss panels, which stay convergent down to the floor."""
    with ctx.workprec():
        abs_alpha = mpf(abs_alpha)
        theta = mpf(theta)
        gap = mp.pi - abs(theta)
        if not (0 < gap <= mp.pi / 2):
            raise DomainError("lateral window requires 0 < pi - |theta| <= pi/2")
        if gap < floor:
            raise PoleProximityError(
                "pi - |theta| = %s below the lateral floor %s"
                % (mp.nstr(gap, 5), mp.nstr(mpf(floor), 5))
            )
        return l_vector(abs_alpha * mp.exp(1j * theta), ctx, scheme="gauss_patch")


# ---------------------------------------------------------------------------
# Principal-value identity: sum form and quadrature form
# ---------------------------------------------------------------------------

def pv_sum(a, p, t, ctx: PrecisionContext):
    """sum_k (-1)^k [e^{-(a-(2k+1)p)^2/(4pt)} + e^{-(a+(2k+1)p)^2/(4pt)}].

    Requires Re t > 0; converges super-exponentially."""
    with ctx.workprec():
        a, p, t = mpf(a), mpf(p), mpc(t)
        if not p > 0:
            raise DomainError("p must be positive")
        if not t.real > 0:
            raise DomainError("pv_sum requires Re t > 0")
        threshold = ctx.eps * mpf(2) ** -8
        total = mpc(0)
        small = 0
        for k in range(100_000):
            sgn = -1 if k % 2 else 1
            m = (2 * k + 1) * p
            term = mp.exp(-((a - m) ** 2) / (4 * p * t)) + mp.exp(-((a + m) ** 2) / (4 * p * t))
            total += sgn * term
            if abs(term) < threshold:
                small += 1
                if small >= 2 and k >= 4:
                    break
            else:
                small = 0
        else:
            raise NonConvergenceError("pv_sum did not converge")
        if t.imag == 0:
            return total.real
        return total


def pv_quadrature(a, p, t, ctx: PrecisionContext):
    """sqrt(4pt/pi) * PV integral_0^inf e^{-p t x^2} cos(ax)/cos(px) dx, t > 0.

    This is the quadrature side of the Gaussian-secant principal-value
    identity whose closed form is pv_sum; the Gaussian must carry p*t for the
    two sides to coincide (with p/t instead they agree only at t = 1).

    The half-line is split at the midpoints k*pi/p so each segment holds one
    pole x_k = (2k+1)pi/(2p) at its center; folding u -> -u around the pole
    cancels the odd part exactly, and the even part is integrated in a closed
    form that never subtracts nearby values:

        S_k(u) = 2(-1)^k e^{-pt(x_k^2+u^2)}
                 [cos(a x_k)cos(au) sinh(2pt x_k u)
                  + sin(a x_k)sin(au) cosh(2pt x_k u)] / sin(pu).

    Segments stop once their Gaussian envelope is below eps * 2^-8."""
    with ctx.workprec():
        a, p, t = mpf(a), mpf(p), mpf(t)
        if not (p > 0 and t > 0):
            raise DomainError("pv_quadrature requires p > 0 and real t > 0")
        h = mp.pi / (2 * p)
        threshold = ctx.eps * mpf(2) ** -8
        total = mpf(0)
        prec = ctx.prec_bits
        for k in range(100_000):
            xk = (2 * k + 1) * h
            mk = 2 * k * h  # segment left end
            envelope = h * (mp.pi / p) * (2 * p * t * xk + a) * mp.exp(-p * t * mk * mk)
            sgn = -1 if k % 2 else 1
            cax, sax = mp.cos(a * xk), mp.sin(a * xk)

            def S(u, xk=xk, sgn=sgn, cax=cax, sax=sax):
                wgt = 2 * p * t * xk * u
                num = cax * mp.cos(a * u) * mp.sinh(wgt) + sax * mp.sin(a * u) * mp.cosh(wgt)
                return 2 * sgn * mp.exp(-p * t * (xk * xk + u * u)) * num / mp.sin(p * u)

            prev = None
            for degree in range(4, 10):
                acc = mpf(0)
                for x, wt in _gl_nodes(degree, prec):
                    acc += wt * S(h / 2 + h / 2 * x)
                acc *= h / 2
                if prev is not None and abs(acc - prev) < max(threshold, ctx.quad_eps) * mpf(2) ** -4:
                    break
                prev = acc
            else:
                raise NonConvergenceError("pv segment failed to refine")
            total += acc
            if envelope < threshold and k >= 2:
                break
        else:
            raise NonConvergenceError("pv segments did not converge")
        return mp.sqrt(4 * p * t / mp.pi) * total


# ---------------------------------------------------------------------------
# Stokes-line decomposition
# ---------------------------------------------------------------------------

def neville_extrapolate(xs: Sequence[mpf], ys: Sequence, x0=0):
    """Polynomial extrapolation of (xs, ys) to x0 (full Neville table)."""
    n = len(xs)
    t = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            t[i] = ((x0 - xs[i - j]) * t[i] - (x0 - xs[i]) * t[i - 1]) / (
                xs[i] - xs[i - j]
            )
    return t[-1]


def _unary_vector(a, base: str, ctx: PrecisionContext):
    """(B^{-1/120} X0(1/B), B^{-49/120} X1(1/B)) for B = Q or Q1 at alpha=-a.

    With alpha = -a the conventions give Q = e^{2a} and Q1 = e^{2 pi^2/a},
    both of modulus > 1, so 1/B feeds the unary series."""
    alpha = mpc(-mpf(a))
    u = power_from_alpha(alpha, base, Fraction(-1), ctx)  # 1/B, |u| < 1
    p0 = power_from_alpha(alpha, base, Fraction(-1, 120), ctx)
    p1 = power_from_alpha(alpha, base, Fraction(-49, 120), ctx)
    return (p0 * unary_x("X0", u, ctx), p1 * unary_x("X1", u, ctx))


def _unary_vector_literal(a, base: str, ctx: PrecisionContext):
    """Same with positive prefactor exponents (+1/120, +49/120)."""
    alpha = mpc(-mpf(a))
    u = power_from_alpha(alpha, base, Fraction(-1), ctx)
    p0 = power_from_alpha(alpha, base, Fraction(1, 120), ctx)
    p1 = power_from_alpha(alpha, base, Fraction(49, 120), ctx)
    return (p0 * unary_x("X0", u, ctx), p1 * unary_x("X1", u, ctx))


@dataclass(frozen=True)
class StokesDecomposition:
    """Lateral values of the integral vector near the Stokes line together
    with the unary-series predictions of the real and imaginary parts.

    matched_sign s records which lateral carries which jump: the upper
    lateral (theta = +(pi - eps)) satisfies Im V -> s * (imag prediction).
    literal_* fields keep the residuals against the uncorrected textbook
    display (positive prefactor exponents, no 3/2) for the record.
    """

    abs_alpha: mpf
    eps_seq: Tuple[mpf, ...]
    extended_eps: Tuple[mpf, ...]
    lateral_values: Tuple[Tuple[mpc, mpc], ...]
    re_residuals: Tuple[mpf, ...]
    im_residuals: Tuple[mpf, ...]
    extrapolated: Tuple[mpc, mpc]
    extrap_err_estimate: mpf
    pred_real: Tuple[mpf, mpf]
    pred_imag: Tuple[mpf, mpf]
    extrap_residual_real: mpf
    extrap_residual_imag: mpf
    matched_sign: int
    literal_residual_real: mpf
    literal_residual_imag: mpf
    quad_budget: mpf


def _extend_eps(eps_seq: Sequence[mpf]):
    ext = list(eps_seq)
    while ext[-1] / 2 >= mpf("0.002"):
        ext.append(ext[-1] / 2)
    return ext


def stokes_decompose(abs_alpha, eps_seq, ctx: PrecisionContext,
                     require_monotone: bool = True) -> StokesDecomposition:
    """Lateral limits at theta = pi - eps, extrapolated to the Stokes line.

    eps_seq must be strictly decreasing with min >= 1e-3.  Residuals are
    reported at the requested eps values; the extrapolation itself continues
    the sequence geometrically down to ~2e-3 and runs a full Richardson
    (Neville) table, which is what pushes the extrapolated residual far below
    the lateral ones."""
    with ctx.workprec():
        a = mpf(abs_alpha)
        if a <= 0:
            raise DomainError("abs_alpha must be positive")
        eps_list = [mpf(e) for e in eps_seq]
        if not eps_list:
            raise DomainError("eps_seq must be nonempty")
        if any(e2 >= e1 for e1, e2 in zip(eps_list, eps_list[1:])):
            raise DomainError("eps_seq must be strictly decreasing")
        if eps_list[-1] < LATERAL_FLOOR:
            raise PoleProximityError(
                "smallest eps %s below the lateral floor %s"
                % (mp.nstr(eps_list[-1], 5), mp.nstr(LATERAL_FLOOR, 5))
            )
        extended = _extend_eps(eps_list)

        laterals = []
        budget = mpf(0)
        for e in extended:
            vec = lateral_l_vector(a, mp.pi - e, ctx)
            laterals.append(vec.as_tuple())
            budget = max(budget, vec.err_estimate)

        pred_real_vec = _unary_vector(a, "Q", ctx)
        mat = mixing_matrix(ctx)
        mixed = mat_vec(mat, _unary_vector(a, "Q1", ctx))
        root = mp.sqrt(mp.pi / a)
        three_half = mpf(3) / 2
        pred_real = tuple(three_half * v.real for v in pred_real_vec)
        pred_imag = tuple(three_half * root * v.real for v in mixed)

        lit_real_vec = _unary_vector_literal(a, "Q", ctx)
        lit_mixed = mat_vec(mat, _unary_vector_literal(a, "Q1", ctx))
        lit_real = tuple(v.real for v in lit_real_vec)
        lit_imag = tuple(root * v.real for v in lit_mixed)

        nreq = len(eps_list)
        re_res = tuple(
            max(abs(laterals[i][j].real - pred_real[j]) for j in range(2))
            for i in range(nreq)
        )
        im_res = tuple(
            min(
                max(abs(laterals[i][j].imag - s * pred_imag[j]) for j in range(2))
                for s in (1, -1)
            )
            for i in range(nreq)
        )
        if require_monotone and nreq >= 2:
            for seq in (re_res, im_res):
                if any(r2 >= r1 for r1, r2 in zip(seq, seq[1:])):
                    raise ExtrapolationInstability(
                        "lateral residuals fail to decrease along eps_seq"
                    )

        extrap = tuple(
            neville_extrapolate(extended, [v[j] for v in laterals])
            for j in range(2)
        )
        if len(extended) >= 3:
            drop_one = tuple(
                neville_extrapolate(extended[1:], [v[j] for v in laterals[1:]])
                for j in range(2)
            )
            extrap_err = max(abs(extrap[j] - drop_one[j]) for j in range(2))
        else:
            extrap_err = mpf("inf")
        res_plus = max(abs(extrap[j].imag - pred_imag[j]) for j in range(2))
        res_minus = max(abs(extrap[j].imag + pred_imag[j]) for j in range(2))
        sign = 1 if res_plus <= res_minus else -1
        return StokesDecomposition(
            abs_alpha=a,
            eps_seq=tuple(eps_list),
            extended_eps=tuple(extended),
            lateral_values=tuple(laterals),
            re_residuals=re_res,
            im_residuals=im_res,
            extrapolated=extrap,
            extrap_err_estimate=extrap_err,
            pred_real=pred_real,
            pred_imag=pred_imag,
            extrap_residual_real=max(
                abs(extrap[j].real - pred_real[j]) for j in range(2)
            ),
            extrap_residual_imag=min(res_plus, res_minus),
            matched_sign=sign,
            literal_residual_real=max(
                abs(extrap[j].real - lit_real[j]) for j in range(2)
            ),
            literal_residual_imag=min(
                max(abs(extrap[j].imag - s * lit_imag[j]) for j in range(2))
                for s in (1, -1)
            ),
            quad_budget=budget,
        )
