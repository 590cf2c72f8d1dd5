import json
from fractions import Fraction

import pytest
from mpmath import mp, mpc, mpf

from mocklab import (
    DomainError,
    check_eta_theta,
    check_growth_omega,
    check_l_vector,
    check_mf3_alternative,
    check_mf3_omega,
    check_mf3_omega_f,
    check_mf5_matrix,
    check_mf5_scalar,
    check_wronskian_suite,
    g_function,
    group_relations,
    mixing_matrix,
    phase_matrix,
    run_suite,
    suite_report_to_json,
    wronskian_periodicity,
)
from mocklab.matrices import identity2, mat_mul, mat_norm, mat_sub
from mocklab.modpoint import power_from_alpha


# ---------------------------------------------------------------------------
# Matrix algebra
# ---------------------------------------------------------------------------

def test_mixing_matrix_involution(ctx):
    with ctx.workprec():
        M = mixing_matrix(ctx)
        assert mat_norm(mat_sub(mat_mul(M, M), identity2())) < 10 * ctx.eps
        det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
        assert abs(det + 1) < 10 * ctx.eps
        assert abs(M[0][0] + M[1][1]) < 10 * ctx.eps


def test_phase_matrix(ctx):
    with ctx.workprec():
        D = phase_matrix(ctx)
        det = D[0][0] * D[1][1]
        assert abs(det + 1) < 10 * ctx.eps


def test_group_relations(ctx):
    entries = group_relations(ctx)
    names = {e.identity for e in entries}
    assert names == {"group_D20", "group_M2", "group_MD3"}
    for e in entries:
        assert e.abs_residual < mpf(10) ** -30
        assert e.passed


# ---------------------------------------------------------------------------
# Identity checks at single points (cheap smoke; the acceptance suite covers
# the full grids)
# ---------------------------------------------------------------------------

def test_mf5_checks_at_two(ctx):
    with ctx.workprec():
        for e in check_mf5_scalar(mpf(2), ctx):
            assert e.abs_residual < mpf(10) ** -20
            assert e.abs_residual <= 10 * e.budget
        for e in check_mf5_matrix(mpf(2), ctx):
            assert e.abs_residual < mpf(10) ** -20
            assert e.abs_residual <= 10 * e.budget


def test_mf5_conjugate_pair_reflection(ctx):
    with ctx.workprec():
        up = check_mf5_scalar(mpc(1, "0.3"), ctx)
        dn = check_mf5_scalar(mpc(1, "-0.3"), ctx)
        for a, b in zip(up, dn):
            # Schwarz reflection: conjugate points give equal residual moduli
            assert abs(a.abs_residual - b.abs_residual) < mpf(10) ** -30


def test_mf5_matrix_s_symmetry(ctx):
    # the residual stays at the same noise magnitude at the S-image point
    with ctx.workprec():
        a = mpf(2)
        r1 = check_mf5_matrix(a, ctx)[0].abs_residual
        r2 = check_mf5_matrix(mp.pi**2 / a, ctx)[0].abs_residual
        bound = mpf(10) ** -20
        assert r1 < bound and r2 < bound
        assert abs(r1 - r2) < bound


def test_mf5_check_deterministic(ctx):
    with ctx.workprec():
        r1 = check_mf5_matrix(mpf(2), ctx)[0]
        r2 = check_mf5_matrix(mpf(2), ctx)[0]
        assert r1.abs_residual == r2.abs_residual  # bit-identical rerun


def test_l_vector_check(ctx):
    with ctx.workprec():
        entries = check_l_vector(mp.pi, ctx)
        names = [e.identity for e in entries]
        assert names == ["l_vector_consistency", "l_vector_fixed_point"]
        for e in entries:
            assert e.abs_residual < mpf(10) ** -20


def test_mf3_checks(ctx):
    with ctx.workprec():
        for check in (check_mf3_omega, check_mf3_omega_f, check_mf3_alternative):
            e = check(mpf(1), ctx)[0]
            assert e.abs_residual < mpf(10) ** -20
            assert e.abs_residual <= 10 * e.budget
        # identity-theorem extension off the real axis
        e = check_mf3_omega(mpc(1, "0.4"), ctx)[0]
        assert e.abs_residual < mpf(10) ** -20


def test_mf3_alternative_difference_identity(ctx):
    # subtracting the two order-3 decompositions of the same integral leaves
    # a modular-pair statement whose residual is the difference of residuals
    with ctx.workprec():
        r1 = check_mf3_omega(mpf(1), ctx)[0].abs_residual
        r2 = check_mf3_alternative(mpf(1), ctx)[0].abs_residual
        assert abs(r1 - r2) < mpf(10) ** -20


def test_eta_theta_checks(ctx):
    with ctx.workprec():
        for e in check_eta_theta(mpc("0.2", "1.1"), ctx):
            assert e.abs_residual < mpf(10) ** -25
        entries = {e.identity: e for e in check_eta_theta(mpc(1, 3), ctx)}
        assert entries["theta3_lower"].abs_residual == 0
        assert entries["theta_chain"].abs_residual < mpf(10) ** -25


def test_growth_check(ctx):
    with ctx.workprec():
        grid = [m * mp.exp(1j * mp.pi / 6) for m in
                (mpf(1), mpf("0.5"), mpf("0.2"), mpf("0.05"))]
        e = check_growth_omega(mp.pi / 3, grid, ctx)[0]
        assert e.passed and e.abs_residual == 0
        with pytest.raises(DomainError):
            check_growth_omega(mp.pi / 12, grid, ctx)  # grid outside sector


# ---------------------------------------------------------------------------
# Wronskian machinery
# ---------------------------------------------------------------------------

def test_wronskian_canonical_pair_closed_form(ctx):
    # H0 = 1, H1 = Q: W = 2 pi i (3/5) Q^{1/2}; W(tau+1) = -W(tau)
    with ctx.workprec():
        tau = mpc("0.2", "1.1")
        entries = wronskian_periodicity([1], [0, 1], tau, ctx)
        for e in entries:
            assert e.abs_residual < mpf(10) ** -40
        from mocklab.identities import _v_vector
        v, dv = _v_vector([1], [0, 1], tau, ctx)
        w = v[0] * dv[1] - dv[0] * v[1]
        closed = 2 * mp.pi * 1j * mpf(3) / 5 * power_from_alpha(
            -mp.pi * 1j * tau, "Q", Fraction(1, 2), ctx)
        assert abs(w - closed) < mpf(10) ** -50


def test_wronskian_zero_input(ctx):
    with ctx.workprec():
        from mocklab.identities import _v_vector
        v, dv = _v_vector([0], [0], mpc(0, 1), ctx)
        assert v[0] == 0 and v[1] == 0
        assert g_function([0], [0], mpc(0, 1), ctx) == 0


def test_wronskian_random_pairs(ctx):
    entries = check_wronskian_suite(ctx, n_pairs=10)
    names = {e.identity for e in entries}
    assert names == {"wronskian_v_T", "wronskian_w_T", "g_T_invariance"}
    for e in entries:
        assert e.passed
        assert e.abs_residual < mpf(10) ** -20


def test_g_cusp_decay(ctx):
    # H1 = O(Q) input: |G| decays up the imaginary axis
    with ctx.workprec():
        h0, h1 = [1, 2, 1], [0, 3, 1]
        g4 = abs(g_function(h0, h1, mpc(0, 4), ctx))
        g8 = abs(g_function(h0, h1, mpc(0, 8), ctx))
        assert g8 < g4 / 100


# ---------------------------------------------------------------------------
# Suites and serialization
# ---------------------------------------------------------------------------

def test_run_suite_algebra(ctx):
    rep = run_suite("algebra", None, ctx)
    assert rep.all_pass
    assert [r.identity_name for r in rep.identities] == [
        "group_D20", "group_M2", "group_MD3"]
    doc = json.loads(suite_report_to_json(rep, ctx))
    assert doc["all_pass"] is True
    assert doc["suite"] == "algebra"
    assert doc["identities"][0]["entries"][0]["point"] is None
    assert set(doc["identities"][0]["entries"][0]) == {
        "point", "abs_residual", "rel_residual", "budget", "pass"}


def test_run_suite_unknown(ctx):
    with pytest.raises(DomainError):
        run_suite("nope", None, ctx)


def test_run_suite_theta_eta_budget_invariant(ctx):
    rep = run_suite("theta_eta", None, ctx)
    assert rep.all_pass
    for r in rep.identities:
        for e in r.entries:
            assert e.abs_residual <= 10 * e.budget


def test_run_suite_custom_grid(ctx):
    with ctx.workprec():
        rep = run_suite("mf3", [mpf(1)], ctx)
    names = {r.identity_name for r in rep.identities}
    assert {"mf3_omega", "mf3_omega_f", "mf3_alternative", "mf3_growth"} <= names
    for r in rep.identities:
        if r.identity_name.startswith("mf3_") and r.identity_name != "mf3_growth":
            assert len(r.entries) == 1
    assert rep.all_pass
