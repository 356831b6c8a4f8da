"""Skew operators sum_i f_i(t, M) L^i and their action on sequences.

Multiplication follows the twist rule

    f(t, M) L^a * g(t, M) L^b = f(t, M) g(t, t^(2a) M) L^(a+b)

and an operator acts on a sequence n -> f(n) by (M f)(n) = t^(2n) f(n),
(L f)(n) = f(n + 1).
"""

from __future__ import annotations

from functools import reduce

from .exact_poly import (
    ML,
    TM,
    MultiPoly,
    RatFun,
    UsageError,
    as_ratfun,
    from_json_obj,
    gcd_many,
    integer_content,
    ratfun_from_json_obj,
    ratfun_to_json_obj,
    to_json_obj,
    unit_normal,
)


def _lcm(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    if a.is_constant():
        return b
    if b.is_constant():
        return a
    g = MultiPoly._raw(a.vars, a._p.gcd(b._p))
    return a * b.exact_div(g)


class SkewOperator:
    """Finite sum of RatFun(t, M) * L^i with i >= 0."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        out = {}
        for i, c in (coeffs or {}).items():
            if i < 0:
                raise UsageError("negative L-exponents are not stored")
            c = as_ratfun(c, TM)
            if not c.is_zero():
                out[i] = c
        self.coeffs = out

    @classmethod
    def L(cls, k=1):
        return cls({k: MultiPoly.const(TM, 1)})

    @classmethod
    def scalar(cls, f):
        return cls({0: f})

    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise UsageError("degree of the zero operator")
        return max(self.coeffs)

    def __add__(self, other):
        other = _as_op(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out[i] + c if i in out else c
        return SkewOperator(out)

    def __neg__(self):
        return SkewOperator({i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-_as_op(other))

    def __mul__(self, other):
        return skew_mul(self, _as_op(other))

    def __rmul__(self, other):
        return skew_mul(_as_op(other), self)

    def __eq__(self, other):
        if not isinstance(other, SkewOperator):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self):
        body = ", ".join(f"L^{i}: {c}" for i, c in sorted(self.coeffs.items()))
        return f"SkewOperator({{{body}}})"

    def to_json_obj(self):
        return {"L_terms": [[i, ratfun_to_json_obj(c)] for i, c in sorted(self.coeffs.items())]}


def _as_op(x) -> SkewOperator:
    if isinstance(x, SkewOperator):
        return x
    if isinstance(x, NormalizedOperator):
        return x.to_skew()
    return SkewOperator.scalar(as_ratfun(x, TM))


def skew_mul(a: SkewOperator, b: SkewOperator) -> SkewOperator:
    out = {}
    for i, f in a.coeffs.items():
        for j, g in b.coeffs.items():
            term = f * (g.subs_second(2 * i, 1) if i else g)
            k = i + j
            out[k] = out[k] + term if k in out else term
    return SkewOperator(out)


class NormalizedOperator:
    """Operator with integer, jointly content-free MultiPoly coefficients.

    The coefficients share no monomial factor, the lowest L-power is 0, and
    the largest term of the leading coefficient is positive.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = {i: c for i, c in coeffs.items() if not c.is_zero()}

    @property
    def degree(self):
        return max(self.coeffs)

    def to_skew(self) -> SkewOperator:
        return SkewOperator(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, NormalizedOperator):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self):
        body = ", ".join(f"L^{i}: {c}" for i, c in sorted(self.coeffs.items()))
        return f"NormalizedOperator({{{body}}})"

    def to_json_obj(self):
        return {"L_terms": [[i, to_json_obj(c)] for i, c in sorted(self.coeffs.items())]}

    @classmethod
    def from_json_obj(cls, obj):
        try:
            return cls({int(i): from_json_obj(c) for i, c in obj["L_terms"]})
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed operator JSON: {exc}") from exc


def operator_from_json_obj(obj):
    """Inverse of either operator serialization."""
    try:
        items = obj["L_terms"]
        if items and "num" in items[0][1]:
            return SkewOperator({int(i): ratfun_from_json_obj(c) for i, c in items})
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed operator JSON: {exc}") from exc
    return NormalizedOperator.from_json_obj(obj)


def normalize_with_multiplier(op: SkewOperator):
    """Return (normalized, m) with normalized = m * op, m in Q(t, M).

    Left multiplication by a nonzero scalar does not change what the
    operator annihilates.
    """
    op = _as_op(op)
    if op.is_zero():
        raise UsageError("cannot normalize the zero operator")
    den = reduce(_lcm, (c.den for c in op.coeffs.values()))
    polys = {i: c.num * den.exact_div(c.den) for i, c in op.coeffs.items()}
    # polynomial content shared by all coefficients
    g = gcd_many(polys.values())
    if not g.is_constant():
        polys = {i: p.exact_div(g) for i, p in polys.items()}
    a = min(p._shift[0] for p in polys.values())
    b = min(p._shift[1] for p in polys.values())
    content = integer_content(polys.values())
    if polys[max(polys)].last_coefficient() < 0:
        content = -content
    unit = MultiPoly.monomial(TM, -a, -b, 1 / content)
    polys = {i: p * unit for i, p in polys.items()}
    return NormalizedOperator(polys), RatFun(den * unit, g)


def normalize(op) -> NormalizedOperator:
    return normalize_with_multiplier(op)[0]


def act(op, seq, n: int) -> RatFun:
    """(op f)(n) as a rational function in t (second variable absent)."""
    op = _as_op(op)
    total = RatFun(MultiPoly.zero(TM))
    for i, c in sorted(op.coeffs.items()):
        v = seq(n + i)
        if v.is_zero():
            continue
        total = total + c.eval_second_at_power(2 * n) * RatFun(v)
    return total


def eval_minus1_op(op) -> MultiPoly:
    """Specialize t = -1; the result is a commutative polynomial in (M, L)."""
    if isinstance(op, NormalizedOperator):
        items = {i: RatFun(c) for i, c in op.coeffs.items()}
    else:
        items = _as_op(op).coeffs
    out = MultiPoly.zero(ML)
    for i, c in items.items():
        v = c.eval_first_at_minus_one()
        if not v.is_polynomial():
            raise UsageError("coefficient is not polynomial at t = -1")
        p = v.as_poly().embed(ML, {"t": None, "M": "M"})
        out = out + p * MultiPoly.monomial(ML, 0, i)
    return out


class InhomogRelation:
    """op * f = rhs with rhs != 0."""

    __slots__ = ("op", "rhs")

    def __init__(self, op, rhs):
        rhs = as_ratfun(rhs, TM)
        if rhs.is_zero():
            raise UsageError("inhomogeneous relation needs a nonzero right-hand side")
        self.op = _as_op(op)
        self.rhs = rhs

    def residual(self, seq, n):
        return act(self.op, seq, n) - self.rhs.eval_second_at_power(2 * n)

    def holds_at(self, seq, n) -> bool:
        return self.residual(seq, n).is_zero()


def homogenize_op(op, rhs) -> SkewOperator:
    """(L - 1) * rhs^-1 * op in the skew ring, unnormalized."""
    rhs = as_ratfun(rhs, TM)
    left = SkewOperator({1: rhs.subs_second(2, 1).inverse(), 0: -rhs.inverse()})
    return skew_mul(left, _as_op(op))


def homogenize(rel: InhomogRelation) -> NormalizedOperator:
    return normalize(homogenize_op(rel.op, rel.rhs))


def unit_free(p: MultiPoly) -> MultiPoly:
    return unit_normal(p)[1]
