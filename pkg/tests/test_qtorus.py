import pytest

from qknot.exact_poly import TM, MultiPoly, RatFun, UsageError, from_text
from qknot.jones import jones_fig8
from qknot.qtorus import (
    InhomogRelation,
    NormalizedOperator,
    SkewOperator,
    act,
    eval_minus1_op,
    homogenize,
    normalize,
    normalize_with_multiplier,
    operator_from_json_obj,
    skew_mul,
)
from qknot.recurrences import fig8_relation


def P(s):
    return from_text(s, TM)


def op(d):
    return SkewOperator({i: P(c) for i, c in d.items()})


L = SkewOperator.L
one = MultiPoly.const(TM, 1)


def test_twist_rule():
    assert skew_mul(L(1), SkewOperator.scalar(P("M"))) == op({1: "t^2*M"})
    assert skew_mul(op({1: "M"}), op({1: "M"})) == op({2: "t^2*M^2"})
    f = P("1 + 3*M - M^2")
    assert skew_mul(L(2), SkewOperator.scalar(f)) == SkewOperator({2: f.subs_second(4, 1)})


def test_negative_L_exponent_rejected():
    with pytest.raises(UsageError):
        SkewOperator({-1: one})


def test_act_examples():
    const = lambda n: one  # noqa: E731
    for n in range(-2, 4):
        assert act(op({0: "M"}), const, n) == RatFun(P(f"t^{2 * n}"))
        assert act(op({1: "1", 0: "-1"}), const, n).is_zero()
    rel = fig8_relation()
    assert act(rel.op(), jones_fig8, 1) == rel.b.eval_second_at_power(2)


def test_homogenize_examples():
    assert homogenize(InhomogRelation(L(1), P("M"))) == NormalizedOperator({2: one, 1: P("-t^2")})
    p = op({0: "t*M + 1", 1: "2"})
    assert homogenize(InhomogRelation(p, one)) == normalize(skew_mul(op({1: "1", 0: "-1"}), p))
    with pytest.raises(UsageError):
        InhomogRelation(L(1), MultiPoly.zero(TM))


def test_homogenized_fig8_annihilates_and_has_L_minus_1():
    rel = fig8_relation()
    H = homogenize(rel.relation())
    for n in range(1, 8):
        assert act(H, jones_fig8, n).is_zero()
    at = eval_minus1_op(H)
    assert not at.is_zero()
    L_ml = MultiPoly.monomial(("M", "L"), 0, 1)
    assert (L_ml - 1).divides(at)


def test_normalize_examples():
    half = RatFun(MultiPoly.const(TM, 1)) / RatFun(MultiPoly.const(TM, 2))
    o = SkewOperator({1: half, 0: RatFun(P("M")) * half})
    assert normalize(o) == NormalizedOperator({1: one, 0: P("M")})
    assert normalize(op({2: "t^4*M^2", 0: "t^2*M^2"})) == NormalizedOperator({2: P("t^2"), 0: one})
    once = normalize(op({2: "6*t*M + 3", 0: "9*M^3 - 3"}))
    assert normalize(once.to_skew()) == once
    with pytest.raises(UsageError):
        normalize(SkewOperator())


def test_normalize_multiplier():
    o = SkewOperator({1: RatFun(P("2*M"), P("t + 1")), 0: RatFun(P("4"))})
    N, m = normalize_with_multiplier(o)
    scaled = {i: c * m for i, c in o.coeffs.items()}
    assert scaled == {i: RatFun(c) for i, c in N.coeffs.items()}


def test_eval_minus1():
    assert eval_minus1_op(op({1: "t^2*M"})) == from_text("M*L", ("M", "L"))


def test_operator_json_round_trip():
    N = normalize(op({2: "t^4*M^2 - 1", 0: "t^2*M^3 + 5"}))
    assert operator_from_json_obj(N.to_json_obj()) == N
    S = SkewOperator({1: RatFun(P("M"), P("t + 1"))})
    assert operator_from_json_obj(S.to_json_obj()) == S
