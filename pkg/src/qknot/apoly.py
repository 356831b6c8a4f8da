"""A-polynomials of the figure eight and its cables."""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact_poly import (
    M_LAMBDA,
    ML,
    MultiPoly,
    UsageError,
    is_square_in_CM,
    normalize_unit,
    resultant,
    squarefree_part,
    to_json_obj,
)
from .jones import CableParams

M, L = MultiPoly.gens(ML)
_LAM = ("L", "lambda")


def ml(a: int, b: int = 0, c=1) -> MultiPoly:
    return MultiPoly.monomial(ML, a, b, c)


@dataclass
class APoly:
    poly: MultiPoly
    provenance: str
    factors: list = field(default_factory=list)  # [(label, MultiPoly)]

    def to_json_obj(self):
        return {
            "provenance": self.provenance,
            "poly": to_json_obj(self.poly),
            "factors": [{"label": k, "poly": to_json_obj(v)} for k, v in self.factors],
        }


def fig8_nonabelian_factor() -> MultiPoly:
    return -L + L * M**2 + M**4 + 2 * L * M**4 + L**2 * M**4 + L * M**6 - L * M**8


def a_fig8() -> APoly:
    f = fig8_nonabelian_factor()
    return APoly((L - 1) * f, "fig8", [("L - 1", L - 1), ("nonabelian", f)])


def fig8_factor_lambda(s: int) -> MultiPoly:
    """A_E(M^s, lambda) / (lambda - 1) over (M, lambda)."""
    full = (L - 1) * fig8_nonabelian_factor()
    sub = full.subs_first(s, 0).embed(M_LAMBDA, {"M": "M", "L": "lambda"})
    lam = MultiPoly.monomial(M_LAMBDA, 0, 1)
    try:
        return sub.exact_div(lam - 1)
    except ArithmeticError:
        raise RuntimeError("lambda - 1 does not divide the substituted A-polynomial") from None


def framing_factor(p: CableParams) -> MultiPoly:
    r, s = p.r, p.s
    if s == 2:
        f = ml(2 * r) * L + 1 if r > 0 else L + ml(-2 * r)
    else:
        f = ml(2 * r * s) * L**2 - 1 if r > 0 else L**2 - ml(-2 * r * s)
    # exponents -2r, -2rs are positive when r < 0, so f is already a polynomial
    return f


def resultant_factor(s: int) -> MultiPoly:
    """Res_lambda(A_E(M^s, lambda)/(lambda - 1), lambda^s - L) over (M, L)."""
    if s < 2:
        raise UsageError("s must be at least 2")
    f = fig8_factor_lambda(s)
    lam_L = MultiPoly.monomial(_LAM, 0, s) - MultiPoly.monomial(_LAM, 1, 0)
    return resultant(f, lam_L, "lambda", result_vars=ML)


def a_cable(p: CableParams) -> APoly:
    res = resultant_factor(p.s)
    red = squarefree_part(res)
    F = framing_factor(p)
    poly = normalize_unit((L - 1) * F * red)
    return APoly(
        poly,
        f"cable({p.r},{p.s})",
        [("L - 1", L - 1), ("framing", F), ("Red(resultant)", red)],
    )


def s2_reference_factor() -> MultiPoly:
    """Reference form of the s = 2 nonabelian quadratic, unnormalized."""
    return (
        -L + 2 * L * M**4 + 3 * L * M**8 - 2 * L * M**12 + M**16 - 6 * L * M**16
        + L**2 * M**16 - 2 * L * M**20 + 3 * L * M**24 + 2 * L * M**28 - L * M**32
    )


def a_cable_s2_reference(r: int) -> MultiPoly:
    """(L - 1)(M^(2r) L + 1)(quadratic) for r > 0, in factored reference form."""
    return (L - 1) * (ml(2 * r) * L + 1) * s2_reference_factor()


def quadratic_coeffs(q: MultiPoly, var="L"):
    if q.is_zero():
        raise UsageError("zero polynomial")
    lo, hi = q.degree_range(var)
    if hi != 2 or lo < 0:
        raise UsageError(f"expected a polynomial of degree 2 in {var}")
    parts = q.coefficients_in(var)
    i = q.var_index(var)
    other = q.vars[1 - i]
    zero = MultiPoly.zero(q.vars)
    return [parts.get(k, zero) for k in range(3)], other


def discriminant(q: MultiPoly, var="L") -> MultiPoly:
    (q0, q1, q2), _ = quadratic_coeffs(q, var)
    return q1 * q1 - 4 * q2 * q0


def irreducible_quadratic(q: MultiPoly, var="L") -> bool:
    """True iff the degree-2 polynomial q in ``var`` is irreducible over C(M)."""
    d = discriminant(q, var)
    if d.is_zero():
        return False
    return not is_square_in_CM(d)
