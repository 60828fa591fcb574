"""Differentiation with an actual infinitesimal increment.

The differential quotient ``(f(x + eps) - f(x)) / eps`` is an ordinary
series value.  Its standard part is the derivative; what the classical
limit throws away survives here as the explicit ``discarded``
infinitesimal, so the bookkeeping of the product rule can be checked as
an exact identity instead of an approximation.

``symbolic_derivative`` is an independent oracle: textbook term
rewriting on the expression tree, sharing no code with the quotient
path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    DEFAULT_PRECISION,
    Classification,
    LCError,
    LCNumber,
    add,
    classify,
    eps,
    inverse,
    make_real,
    mul,
    standard_part,
    sub,
)
from .dsl import (
    Add,
    Const,
    Div,
    Eps,
    Expr,
    HUnit,
    Mul,
    Neg,
    Pow,
    Sqrt,
    St,
    Sub,
    Var,
    evaluate,
    to_source,
)
from .report import GalleryReport, equality_claim, judged_claim

__all__ = [
    "NotFinite",
    "UnsupportedNode",
    "DiffResult",
    "differential_quotient",
    "derivative_at",
    "product_rule_report",
    "symbolic_derivative",
]


class NotFinite(LCError):
    """The differential quotient came out infinite at the point."""


class UnsupportedNode(ValueError):
    """The symbolic oracle covers the rational fragment only."""

    def __init__(self, message: str, position: int = -1):
        super().__init__(message)
        self.position = position


@dataclass(frozen=True)
class DiffResult:
    """Quotient, its shadow, and the infinitesimal the shadow drops.

    ``quotient == shadow + discarded`` exactly, with ``discarded`` zero
    or infinitesimal; checked on construction.
    """

    quotient: LCNumber
    shadow: Fraction
    discarded: LCNumber

    def __post_init__(self):
        assert classify(self.discarded) in (
            Classification.ZERO,
            Classification.INFINITESIMAL,
        ), "discarded part must be zero or infinitesimal"
        rebuilt = add(
            make_real(self.shadow, self.quotient.precision), self.discarded
        )
        assert rebuilt == self.quotient, "quotient must equal shadow + discarded"


def differential_quotient(
    f: Expr,
    var: str,
    point: LCNumber,
    env: dict[str, LCNumber] | None = None,
    increment: LCNumber | None = None,
) -> LCNumber:
    """``(f[var := point + increment] - f[var := point]) / increment``.

    The increment defaults to ``eps``; passing ``-eps`` checks direction
    independence.  Exact division by a monomial increment just shifts
    exponents, so nothing is lost there.
    """
    if increment is None:
        increment = eps(point.precision)
    bindings = dict(env or {})
    bindings[var] = add(point, increment)
    moved = evaluate(f, bindings, point.precision)
    bindings[var] = point
    here = evaluate(f, bindings, point.precision)
    return mul(sub(moved, here), inverse(increment))


def derivative_at(
    f: Expr,
    var: str,
    point: Fraction | int,
    env: dict[str, LCNumber] | None = None,
    precision: int = DEFAULT_PRECISION,
) -> DiffResult:
    """Shadow of the differential quotient at an assignable point.

    Raises NotFinite when the quotient is infinite (no derivative to
    assign); evaluation errors from ``f`` itself propagate unchanged.
    """
    quotient = differential_quotient(
        f, var, make_real(Fraction(point), precision), env
    )
    if classify(quotient) is Classification.INFINITE:
        raise NotFinite(f"differential quotient at {point} is infinite")
    shadow = standard_part(quotient)
    discarded = sub(quotient, make_real(shadow, precision))
    return DiffResult(quotient=quotient, shadow=shadow, discarded=discarded)


def product_rule_report(
    u: Expr,
    v: Expr,
    var: str,
    point: Fraction | int,
    env: dict[str, LCNumber] | None = None,
    precision: int = DEFAULT_PRECISION,
) -> GalleryReport:
    """The product rule as exact series bookkeeping at one point.

    With ``dg = g(point + eps) - g(point)``: first the raw identity
    ``d(uv) = u*dv + v*du + du*dv``, then the shadow identity that the
    derivative of the product is ``st(u)*st(dv/eps) + st(v)*st(du/eps)``,
    and finally that the dropped cross term ``du*dv/eps`` is
    infinitesimal (or zero), which is exactly why dropping it is
    harmless.
    """
    p = make_real(Fraction(point), precision)
    e = eps(precision)
    bindings = dict(env or {})

    def at(g: Expr, x: LCNumber) -> LCNumber:
        bindings[var] = x
        return evaluate(g, bindings, precision)

    u_here, v_here = at(u, p), at(v, p)
    du = sub(at(u, add(p, e)), u_here)
    dv = sub(at(v, add(p, e)), v_here)
    product = Mul(u, v)
    d_product = sub(at(product, add(p, e)), at(product, p))

    rhs = add(add(mul(u_here, dv), mul(v_here, du)), mul(du, dv))
    quotient = mul(d_product, inverse(e))
    shadow_expected = standard_part(u_here) * standard_part(
        mul(dv, inverse(e))
    ) + standard_part(v_here) * standard_part(mul(du, inverse(e)))
    cross = mul(mul(du, dv), inverse(e))

    claims = (
        equality_claim("d(uv) equals u*dv + v*du + du*dv", d_product, rhs),
        equality_claim(
            "shadow of d(uv)/eps equals st(u)*st(dv/eps) + st(v)*st(du/eps)",
            standard_part(quotient),
            shadow_expected,
        ),
        judged_claim(
            "dropped cross term du*dv/eps is negligible",
            cross,
            "zero or infinitesimal",
            classify(cross)
            in (Classification.ZERO, Classification.INFINITESIMAL),
        ),
    )
    parameters = (
        f"u = {to_source(u)}",
        f"v = {to_source(v)}",
        f"{var} = {Fraction(point)}",
    )
    return GalleryReport("product_rule", parameters, claims)


def symbolic_derivative(f: Expr, var: str) -> Expr:
    """Textbook rewrite rules; no simplification beyond dropping x^0.

    Supports constants, variables, eps, H, and the four field operations
    with integer powers.  sqrt and st raise UnsupportedNode: the oracle
    stays in the rational fragment.
    """
    if isinstance(f, (Const, Eps, HUnit)):
        return Const(Fraction(0))
    if isinstance(f, Var):
        return Const(Fraction(1 if f.name == var else 0))
    if isinstance(f, Neg):
        return Neg(symbolic_derivative(f.arg, var))
    if isinstance(f, Add):
        return Add(symbolic_derivative(f.left, var), symbolic_derivative(f.right, var))
    if isinstance(f, Sub):
        return Sub(symbolic_derivative(f.left, var), symbolic_derivative(f.right, var))
    if isinstance(f, Mul):
        return Add(
            Mul(symbolic_derivative(f.left, var), f.right),
            Mul(f.left, symbolic_derivative(f.right, var)),
        )
    if isinstance(f, Div):
        return Div(
            Sub(
                Mul(symbolic_derivative(f.left, var), f.right),
                Mul(f.left, symbolic_derivative(f.right, var)),
            ),
            Pow(f.right, 2),
        )
    if isinstance(f, Pow):
        if f.exponent == 0:
            return Const(Fraction(0))
        inner = symbolic_derivative(f.base, var)
        scaled = Mul(Const(Fraction(f.exponent)), inner)
        if f.exponent == 1:
            return scaled
        return Mul(scaled, Pow(f.base, f.exponent - 1))
    if isinstance(f, (Sqrt, St)):
        kind = "sqrt" if isinstance(f, Sqrt) else "st"
        raise UnsupportedNode(f"{kind} is outside the oracle's fragment", f.pos)
    raise TypeError(f"unknown node {f!r}")  # pragma: no cover
