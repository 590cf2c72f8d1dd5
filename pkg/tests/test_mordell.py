from fractions import Fraction

import pytest
from mpmath import mp, mpc, mpf

from mocklab import (
    DomainError,
    PoleProximityError,
    PrecisionContext,
    RayIntegrand,
    integrate_ray,
    l_integral,
    l_vector,
    lateral_l_vector,
    mixing_matrix,
    pv_quadrature,
    pv_sum,
    w2_integral,
    w3_integral,
)
from mocklab.mordell import neville_extrapolate, refinement_table


# ---------------------------------------------------------------------------
# integrate_ray on known integrals
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("scheme", ["tanh_sinh", "gauss_patch"])
def test_gaussian_half_line(ctx, scheme):
    with ctx.workprec():
        integrand = RayIntegrand(func=lambda x: mp.exp(-x * x), gauss_coeff=mpc(1))
        res = integrate_ray(integrand, 0, ctx, scheme)
        assert abs(res.value - mp.sqrt(mp.pi) / 2) < ctx.quad_eps
        assert res.err_estimate < ctx.quad_eps
        assert res.nodes_used > 0 and res.scheme == scheme


def test_rotated_gaussian_cauchy_invariance(ctx):
    with ctx.workprec():
        gamma = mp.exp(-1j * mp.pi / 4)
        integrand = RayIntegrand(func=lambda x: mp.exp(-gamma * x * x), gauss_coeff=gamma)
        v0 = integrate_ray(integrand, 0, ctx, "tanh_sinh").value
        v1 = integrate_ray(integrand, mp.pi / 8, ctx, "gauss_patch").value
        assert abs(v0 - v1) < 10 * ctx.quad_eps
        assert abs(v0 - mp.sqrt(mp.pi / gamma) / 2) < 10 * ctx.quad_eps


def test_divergent_ray_rejected(ctx):
    with ctx.workprec():
        gamma = mp.exp(-1j * mp.pi / 4)
        integrand = RayIntegrand(func=lambda x: mp.exp(-gamma * x * x), gauss_coeff=gamma)
        with pytest.raises(DomainError):
            integrate_ray(integrand, mp.pi / 2, ctx)


def test_pole_proximity_guard(ctx):
    with ctx.workprec():
        pole = mp.exp(1j * mpf("1e-8")) * mpf("0.5")
        integrand = RayIntegrand(func=lambda x: mp.exp(-x * x) / (x - pole),
                            gauss_coeff=mpc(1), poles=(pole,),
                            exclusion=mpf("0.1"))
        with pytest.raises(PoleProximityError):
            integrate_ray(integrand, 0, ctx)


def _w3_integrand(alpha, ctx):
    with ctx.workprec():
        alpha = mpc(alpha)

        def f(x):
            if x == 0:
                return mpc(1) / 3
            return mp.exp(-3 * alpha * x * x) * mp.sinh(alpha * x) / mp.sinh(3 * alpha * x)

        poles = []
        m = 1
        while m * mp.pi / (3 * abs(alpha)) < 6:
            if m % 3:
                rad = m * mp.pi / (3 * abs(alpha))
                poles += [1j * rad, -1j * rad]
            m += 1
        return RayIntegrand(f, 3 * alpha, tuple(poles), mpf(64))


def test_refinement_table_geometric(ctx):
    # node doubling converges at least geometrically for the W3 integrand
    with ctx.workprec():
        table = refinement_table(_w3_integrand(mpf(1), ctx), 0, ctx, degrees=(3, 4, 5, 6, 7))
        diffs = [abs(b - a) for a, b in zip(table, table[1:])]
        for d1, d2 in zip(diffs, diffs[1:]):
            if d1 < mpf(10) ** -55:  # numerical floor reached
                break
            assert d2 < d1 / 2


# ---------------------------------------------------------------------------
# The concrete integrals
# ---------------------------------------------------------------------------

def test_l_rotation_invariance(ctx):
    # ray angle 0 and the canonical -arg(alpha)/2 agree inside the pole-free cone
    with ctx.workprec():
        alpha = mp.exp(1j * mp.pi / 4)
        r = Fraction(1, 5)
        c32 = mpf(3) / 2

        def f(x):
            return (mp.exp(-c32 * alpha * x * x)
                    * (mp.cosh(mpf("-1.4") * alpha * x) + mp.cosh(mpf("-0.4") * alpha * x))
                    / mp.cosh(c32 * alpha * x))

        poles = []
        m = 1
        while m * mp.pi / (3 * abs(alpha)) < 12:
            rad = m * mp.pi / (3 * abs(alpha))
            poles += [1j * rad / mp.exp(1j * mp.pi / 4), -1j * rad / mp.exp(1j * mp.pi / 4)]
            m += 2
        integrand = RayIntegrand(f, c32 * alpha, tuple(poles), mpf(64))
        v0 = integrate_ray(integrand, 0, ctx, "tanh_sinh").value
        v1 = integrate_ray(integrand, -mp.pi / 8, ctx, "tanh_sinh").value
        direct, _ = l_integral(r, alpha, ctx)
        assert abs(v0 - v1) < 10 * ctx.quad_eps
        assert abs(v0 - direct) < 10 * ctx.quad_eps


def test_l_two_schemes_agree(ctx):
    with ctx.workprec():
        v1, _ = l_integral(Fraction(1, 5), mpf(10), ctx)
        v2, _ = l_integral(Fraction(1, 5), mpf(10), ctx, scheme="gauss_patch")
        assert abs(v1 - v2) < ctx.quad_eps


def test_schwarz_reflection(ctx):
    with ctx.workprec():
        pts = [mpc(1, "0.3"), mpc(2, 1), mpc("0.7", "0.2"), mpc(mp.pi, "0.5"),
               mpc("1.5", "0.8")]
        for a in pts:
            for fn in (lambda z: l_integral(Fraction(1, 5), z, ctx)[0],
                       lambda z: w2_integral(z, ctx)[0],
                       lambda z: w3_integral(z, ctx)[0]):
                assert abs(fn(mp.conj(a)) - mp.conj(fn(a))) < 10 * ctx.quad_eps


def test_w3_scaling_limit(ctx):
    with ctx.workprec():
        a = mpf("1e-4")
        v, _ = w3_integral(a, ctx)
        limit = mp.sqrt(mp.pi) / (6 * mp.sqrt(3 * a))
        assert abs(v.real / limit - 1) < mpf("0.01")


def test_w3_positive(ctx):
    with ctx.workprec():
        v, _ = w3_integral(mpf(1), ctx)
        assert v.real > 0 and abs(v.imag) < ctx.quad_eps


def test_w2_sector_bound(ctx):
    # |W2(a/2)| * sqrt|a| shows no growth trend as a -> 0 in the sector
    with ctx.workprec():
        stats = []
        for ray in (mpf(0), mp.pi / 3):
            for m in (mpf("0.5"), mpf("0.1"), mpf("0.02")):
                a = m * mp.exp(1j * ray)
                v, _ = w2_integral(a / 2, ctx)
                stats.append((m, abs(v) * mp.sqrt(m)))
        big = max(s for m, s in stats if m > mpf("0.05"))
        small = max(s for m, s in stats if m <= mpf("0.05"))
        assert small <= 2 * big


def test_domain_guards(ctx):
    with ctx.workprec():
        with pytest.raises(DomainError):
            l_integral(Fraction(1, 5), mpf(-1), ctx)
        with pytest.raises(DomainError):
            w3_integral(mpf(-2), ctx)


# ---------------------------------------------------------------------------
# The integral vector
# ---------------------------------------------------------------------------

def test_l_vector_real_on_real_axis(ctx):
    with ctx.workprec():
        lv = l_vector(mpf(1), ctx)
        assert abs(lv.l1.imag) < ctx.quad_eps
        assert abs(lv.l2.imag) < ctx.quad_eps


def test_l_vector_fixed_point_eigenvector(ctx):
    with ctx.workprec():
        lv = l_vector(mp.pi, ctx)
        M = mixing_matrix(ctx)
        r1 = lv.l1 - (M[0][0] * lv.l1 + M[0][1] * lv.l2)
        r2 = lv.l2 - (M[1][0] * lv.l1 + M[1][1] * lv.l2)
        assert max(abs(r1), abs(r2)) < 100 * lv.err_estimate


def test_l_vector_modular_consistency(ctx):
    with ctx.workprec():
        lv = l_vector(mpf(1), ctx)
        lvs = l_vector(mp.pi**2, ctx)
        M = mixing_matrix(ctx)
        root = mp.sqrt(mp.pi)
        r1 = lv.l1 - root * (M[0][0] * lvs.l1 + M[0][1] * lvs.l2)
        r2 = lv.l2 - root * (M[1][0] * lvs.l1 + M[1][1] * lvs.l2)
        assert max(abs(r1), abs(r2)) < mpf(10) ** -25


# ---------------------------------------------------------------------------
# Principal-value identity
# ---------------------------------------------------------------------------

PV_GRID = [(a, p, t) for a in ("0", "0.3", "0.7")
           for p in ("1", "1.5") for t in ("0.3", "0.8", "2")]


def test_pv_identity_grid(ctx):
    with ctx.workprec():
        for a, p, t in PV_GRID:
            d = abs(pv_quadrature(mpf(a), mpf(p), mpf(t), ctx)
                    - pv_sum(mpf(a), mpf(p), mpf(t), ctx))
            assert d < mpf(10) ** -25


def test_pv_mutual_oracle_point(ctx):
    with ctx.workprec():
        d = abs(pv_quadrature(mpf("0.5"), mpf("1.5"), mpf("0.8"), ctx)
                - pv_sum(mpf("0.5"), mpf("1.5"), mpf("0.8"), ctx))
        assert d < mpf(10) ** -15


def test_pv_sum_symmetry_and_limit(ctx):
    with ctx.workprec():
        # a = 0: both exponentials coincide
        p, t = mpf(1), mpf("0.4")
        direct = mpf(0)
        for k in range(80):
            sgn = -1 if k % 2 else 1
            direct += sgn * 2 * mp.exp(-((2 * k + 1) ** 2) * p / (4 * t))
        assert abs(pv_sum(0, p, t, ctx) - direct) < 10 * ctx.eps
        # t -> 0+ dominance of the k = 0 term
        t = mpf("0.01")
        lead = 2 * mp.exp(-1 / (4 * t))
        assert abs(pv_sum(0, 1, t, ctx) / lead - 1) < mpf("1e-8")
    with pytest.raises(DomainError):
        pv_sum(0, 1, mpc(-1, 1), ctx)


def test_pv_quadrature_even_in_a(ctx):
    with ctx.workprec():
        v1 = pv_quadrature(mpf("0.4"), mpf(1), mpf("0.7"), ctx)
        v2 = pv_quadrature(mpf("-0.4"), mpf(1), mpf("0.7"), ctx)
        assert abs(v1 - v2) < 10 * ctx.eps


def test_pv_tolerance_consistency(ctx):
    # tightening the stop tolerance moves the value below the envelope bound
    loose = PrecisionContext(prec_bits=256, eps="1e-20", quad_eps="1e-16")
    with ctx.workprec():
        v1 = pv_quadrature(mpf("0.3"), mpf(1), mpf("0.8"), loose)
        v2 = pv_quadrature(mpf("0.3"), mpf(1), mpf("0.8"), ctx)
        assert abs(v1 - v2) < loose.eps


def test_precision_monotonicity(ctx):
    # halving eps never worsens the pv residual by more than 2x (plus floor)
    base = PrecisionContext(prec_bits=256, eps="1e-30", quad_eps="1e-24")
    half = PrecisionContext(prec_bits=256, eps="5e-31", quad_eps="1e-24")
    with ctx.workprec():
        r1 = abs(pv_quadrature(mpf("0.3"), mpf(1), mpf("2"), base)
                 - pv_sum(mpf("0.3"), mpf(1), mpf("2"), base))
        r2 = abs(pv_quadrature(mpf("0.3"), mpf(1), mpf("2"), half)
                 - pv_sum(mpf("0.3"), mpf(1), mpf("2"), half))
        assert r2 <= 2 * r1 + mpf(2) ** (-200)


# ---------------------------------------------------------------------------
# Lateral evaluation
# ---------------------------------------------------------------------------

def test_lateral_window_validation(ctx):
    with ctx.workprec():
        with pytest.raises(DomainError):
            lateral_l_vector(1, mp.pi / 4, ctx)  # gap > pi/2
        with pytest.raises(PoleProximityError):
            lateral_l_vector(1, mp.pi - mpf("1e-5"), ctx)


def test_lateral_conjugate_pair(ctx):
    with ctx.workprec():
        up = lateral_l_vector(1, mp.pi - mpf("0.2"), ctx)
        dn = lateral_l_vector(1, -(mp.pi - mpf("0.2")), ctx)
        assert abs(up.l1 - mp.conj(dn.l1)) < 100 * up.err_estimate
        assert abs(up.l2 - mp.conj(dn.l2)) < 100 * up.err_estimate
        # conjugate-lateral average recovers the real part
        avg = (up.l1 + dn.l1) / 2
        assert abs(avg.imag) < 100 * up.err_estimate


def test_neville_extrapolation_exactness():
    with mp.workprec(128):
        xs = [mpf(s) for s in ("0.4", "0.2", "0.1", "0.05")]
        ys = [3 - 2 * x + 5 * x**2 - x**3 for x in xs]
        assert abs(neville_extrapolate(xs, ys) - 3) < mpf(2) ** -100
