"""Precision context, branch conventions, and the modular-point data model.

Every other module evaluates at a point of the upper half-plane through the
parametrisation

    alpha = -pi*i*tau   (Re alpha > 0),
    q  = exp(-alpha),          Q  = q^2,
    q1 = exp(-pi^2/alpha),     Q1 = q1^2,

and all fractional powers are taken through alpha:

    q^r  := exp(-r*alpha),     q1^r := exp(-r*pi^2/alpha),

never as complex powers of q itself.  With Re alpha > 0 this removes every
branch ambiguity; sqrt(pi/alpha) and sqrt(-i*tau) are principal roots, valid
because their arguments have positive real part.

All values are immutable after construction and every operation is pure, so
concurrent use is safe and results are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp, mpc, mpf

from .errors import DomainError, PrecisionError

__all__ = [
    "PrecisionContext",
    "ModularPoint",
    "BRANCH_CONVENTION",
    "reference_context",
    "from_tau",
    "from_alpha",
    "s_transform",
    "frac_power",
    "power_from_alpha",
]

_FRAC_BASES = ("q", "Q", "q1", "Q1")

# Exponent multiplier per base: q^r = exp(-r*alpha), Q^r = exp(-2r*alpha), ...
_BASE_DOUBLING = {"q": 1, "Q": 2, "q1": 1, "Q1": 2}


@dataclass(frozen=True)
class PrecisionContext:
    """Working binary precision and target tolerances.

    prec_bits governs every mpmath operation; eps is the absolute target for
    series tails; quad_eps is the absolute target for quadrature (defaults to
    eps * 10^10, matching a series/quadrature split of 1e-40 / 1e-30 at the
    reference precision of 256 bits).
    """

    prec_bits: int = 256
    eps: mpf = field(default=None)  # type: ignore[assignment]
    quad_eps: mpf = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.prec_bits < 64:
            raise DomainError("prec_bits must be at least 64")
        with mp.workprec(self.prec_bits):
            eps = mpf("1e-40") if self.eps is None else mpf(self.eps)
            if eps <= mpf(2) ** (-self.prec_bits + 16):
                raise PrecisionError(
                    "eps %s is tighter than working precision minus the "
                    "16-bit guard" % mp.nstr(eps, 6)
                )
            quad_eps = eps * mpf(10) ** 10 if self.quad_eps is None else mpf(self.quad_eps)
            if quad_eps < eps:
                raise DomainError("quad_eps must not be tighter than eps")
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "quad_eps", quad_eps)

    def workprec(self):
        """mpmath context manager switching to this working precision."""
        return mp.workprec(self.prec_bits)


def reference_context() -> PrecisionContext:
    """The reference configuration: 256 bits, eps 1e-40, quadrature 1e-30."""
    return PrecisionContext(prec_bits=256, eps="1e-40", quad_eps="1e-30")


class BranchConvention:
    """Fixed branch policy (a stateless marker object).

    * sqrt(pi/alpha) and sqrt(-i*tau) are principal square roots;
    * fractional powers of q, Q, q1, Q1 go through exp of rational multiples
      of alpha (resp. pi^2/alpha), never through complex powers of q.
    """

    __slots__ = ()

    def __repr__(self):  # pragma: no cover - cosmetic
        return "BranchConvention(principal-sqrt, powers-through-alpha)"


BRANCH_CONVENTION = BranchConvention()


@dataclass(frozen=True)
class ModularPoint:
    """A point tau in the upper half-plane with its derived nomes."""

    tau: mpc
    alpha: mpc
    q: mpc
    Q: mpc
    q1: mpc
    Q1: mpc
    ctx: PrecisionContext

    def frac_power(self, base: str, r) -> mpc:
        """base^r for base in {q, Q, q1, Q1} and rational r, through alpha."""
        return frac_power(self, base, r, self.ctx)


def _build_from_alpha(alpha: mpc, ctx: PrecisionContext) -> ModularPoint:
    with ctx.workprec():
        alpha = mpc(alpha)
        if not alpha.real > 0:
            raise DomainError("Re(alpha) must be positive (Im tau > 0)")
        tau = 1j * alpha / mp.pi
        q = mp.exp(-alpha)
        q1 = mp.exp(-mp.pi**2 / alpha)
        point = ModularPoint(
            tau=tau, alpha=alpha, q=q, Q=q * q, q1=q1, Q1=q1 * q1, ctx=ctx
        )
        for name in ("q", "q1"):
            if not abs(getattr(point, name)) < 1:
                raise PrecisionError(
                    "|%s| rounds to 1 at %d bits; Im tau too small" % (name, ctx.prec_bits)
                )
        return point


def from_tau(tau, ctx: PrecisionContext) -> ModularPoint:
    """Build the modular point at tau, requiring Im tau > 0."""
    with ctx.workprec():
        tau = mpc(tau)
        if not tau.imag > 0:
            raise DomainError("tau must lie in the upper half-plane")
        return _build_from_alpha(-mp.pi * 1j * tau, ctx)


def from_alpha(alpha, ctx: PrecisionContext) -> ModularPoint:
    """Build the modular point at alpha = -pi*i*tau, requiring Re alpha > 0."""
    return _build_from_alpha(alpha, ctx)


def s_transform(p: ModularPoint) -> ModularPoint:
    """The point at -1/tau; swaps (q, q1) and (Q, Q1) up to rounding."""
    with p.ctx.workprec():
        return _build_from_alpha(mp.pi**2 / p.alpha, p.ctx)


def power_from_alpha(alpha, base: str, r, ctx: PrecisionContext) -> mpc:
    """base^r computed from alpha alone (base in {q, Q, q1, Q1}, r rational).

    q^r = exp(-r*alpha); q1^r = exp(-r*pi^2/alpha); Q, Q1 double the exponent.
    r may be a Fraction, an int, or a (num, den) pair; it is kept exact until
    the final multiplication by alpha.
    """
    if base not in _FRAC_BASES:
        raise DomainError("base must be one of %s" % (_FRAC_BASES,))
    if isinstance(r, tuple):
        r = Fraction(*r)
    else:
        r = Fraction(r)
    with ctx.workprec():
        alpha = mpc(alpha)
        expo = alpha if base in ("q", "Q") else mp.pi**2 / alpha
        scale = _BASE_DOUBLING[base] * r
        return mp.exp(-expo * mpf(scale.numerator) / scale.denominator)


def frac_power(p: ModularPoint, base: str, r, ctx: PrecisionContext | None = None) -> mpc:
    """base^r at the point p; see power_from_alpha for the conventions."""
    return power_from_alpha(p.alpha, base, r, ctx or p.ctx)
