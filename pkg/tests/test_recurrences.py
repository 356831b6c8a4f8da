import pytest

from qknot.ajcheck import proportional_over_M
from qknot.exact_poly import ML, TM, MultiPoly, RatFun, UsageError, from_text
from qknot.jones import CableParams, cable_sequence, jones_fig8, t_sequence
from qknot.qtorus import SkewOperator, eval_minus1_op
from qknot.recurrences import (
    assemble_annihilator,
    build_matrix,
    fig8_relation,
    odd_closed_forms,
    odd_limit_product,
    odd_system_s2,
    nullspace,
    odd_relation_s2,
    odd_subsequence,
    regularized_limit,
    solve_relation,
    tm,
    verify,
    verify_annihilator,
)

P13 = CableParams(13, 3)


def test_fig8_closed_forms():
    rel = fig8_relation()
    assert rel.P2 == from_text("-t^10*M^4 + t^14*M^8", TM)
    assert rel.P0 == from_text("-t^6*M^4 + t^18*M^8", TM)
    assert not rel.P1.is_zero()
    bh = rel.b_hat()
    assert not bh.is_zero()
    assert bh == from_text("M + M^3 - 2*M^5 - 2*M^7 + M^9 + M^11", TM)


def test_fig8_relation_verified():
    rep = verify(fig8_relation().relation(), jones_fig8, range(1, 11))
    assert rep.ok and len(rep.results) == 10


def test_odd_system_identities():
    rel = fig8_relation()
    A = odd_system_s2(rel)
    rank, vec = nullspace(A)
    assert rank == 5
    for row in A:
        total = RatFun(MultiPoly.zero(TM))
        for a, x in zip(row, vec):
            total = total + RatFun(a) * x
        assert total.is_zero()


def test_odd_relation_s2():
    rel = fig8_relation()
    solved = odd_relation_s2(9)
    Q0, Q1, Q2 = odd_closed_forms(rel)
    raw = solved.extra["Q_raw"].coeffs
    assert raw[2] == RatFun(Q2)
    assert raw[1] == RatFun(Q1) and raw[0] == RatFun(Q0)
    assert regularized_limit(solved.extra["B_raw"]) == RatFun(odd_limit_product())
    assert verify(solved.relation(), odd_subsequence(), range(0, 9)).ok


def test_odd_relation_needs_odd_r():
    with pytest.raises(UsageError):
        odd_relation_s2(4)


def test_build_matrix_layout():
    m = build_matrix(P13)
    assert m.shape == (9, 10)
    rel = fig8_relation()
    assert m.entries[0][0] == rel.P_at(0, 4, 3)
    q1 = m.col_labels.index("Q_1")
    assert [i for i in range(9) if not m.entries[i][q1].is_zero()] == [3, 5]
    q0 = m.col_labels.index("Q_0")
    assert m.entries[0][q0] == tm(-26, -13) and m.entries[2][q0] == -tm(26, 13)
    q2 = m.col_labels.index("Q_2")
    assert [i for i in range(9) if not m.entries[i][q2].is_zero()] == [6, 8]
    assert build_matrix(CableParams(7, 5)).shape == (13, 14)


def test_solve_relation_13_3():
    solved = solve_relation(P13)
    assert solved.rank == 9
    assert solved.Q.degree == 2 and sorted(solved.Q.coeffs) == [0, 1, 2]
    assert verify(solved.relation(), t_sequence(P13), range(1, 7)).ok


def test_verify_detects_mutation():
    solved = solve_relation(P13)
    coeffs = dict(solved.Q.to_skew().coeffs)
    coeffs[1] = coeffs[1] + RatFun(MultiPoly.const(TM, 1))
    bad = type(solved.relation())(SkewOperator(coeffs), solved.B)
    rep = verify(bad, t_sequence(P13), range(1, 4))
    assert rep.failures() == [1, 2, 3]
    const = lambda n: MultiPoly.const(TM, 1)  # noqa: E731
    assert verify(SkewOperator({1: MultiPoly.const(TM, 1), 0: MultiPoly.const(TM, -1)}), const, range(5)).ok


def test_solve_relation_rejects_s2():
    with pytest.raises(UsageError):
        solve_relation(CableParams(9, 2))


def test_q_at_minus1_independent_of_r():
    a = eval_minus1_op(solve_relation(P13).Q)
    b = eval_minus1_op(solve_relation(CableParams(14, 3)).Q)
    assert proportional_over_M(a, b).proportional


@pytest.mark.parametrize("r,s,deg,n_max", [(9, 2, 4, 8), (-9, 2, 4, 5), (13, 3, 5, 6)])
def test_assemble_annihilator(r, s, deg, n_max):
    p = CableParams(r, s)
    ann = assemble_annihilator(p)
    assert ann.L_degree == deg
    assert verify_annihilator(ann, range(1, n_max + 1)).ok
    at = eval_minus1_op(ann.R)
    L = MultiPoly.monomial(ML, 0, 1)
    assert (L - 1).divides(at)


def test_annihilator_is_not_trivially_zero_on_other_sequence():
    ann = assemble_annihilator(CableParams(9, 2))
    other = cable_sequence(CableParams(11, 2))
    assert not verify(ann.R, other, range(1, 3)).ok
