import threading
import warnings

import pytest

from qknot.exact_poly import TM, MultiPoly, UsageError, from_text
from qknot.jones import (
    CableParams,
    KnotSequence,
    degree_table,
    degrees,
    degrees_alternating,
    degrees_cable,
    degrees_cable_general,
    degrees_fig8,
    jones_cable,
    jones_fig8,
    jones_unknot,
    t_seq,
)


def P(s):
    return from_text(s, TM)


def tp(k):
    return MultiPoly.monomial(TM, k, 0)


def test_unknot():
    assert jones_unknot(1) == MultiPoly.const(TM, 1)
    assert jones_unknot(2) == P("t^-2 + t^2")
    assert jones_unknot(0).is_zero()
    assert jones_unknot(-3) == -jones_unknot(3)
    assert jones_unknot(3) * (tp(2) - tp(-2)) == tp(6) - tp(-6)


def test_fig8_small():
    assert jones_fig8(1) == MultiPoly.const(TM, 1)
    assert jones_fig8(2) == P("t^-10 + t^10")
    assert degrees(jones_fig8(3)) == (-28, 28)
    assert jones_fig8(0).is_zero()
    assert jones_fig8(-4) == -jones_fig8(4)


@pytest.mark.parametrize("n", range(1, 16))
def test_fig8_degrees(n):
    assert degrees(jones_fig8(n)) == degrees_fig8(n)


def test_cable_small():
    for r in (9, -9, 7):
        p = CableParams(r, 2)
        assert jones_cable(p, 1) == MultiPoly.const(TM, 1)
        assert jones_cable(p, 0).is_zero()
        assert jones_cable(p, 2) == tp(-2 * r) * jones_fig8(3) - tp(-6 * r)
        assert jones_cable(p, -3) == -jones_cable(p, 3)


def test_t_seq():
    p = CableParams(13, 3)
    assert t_seq(p, 0) == tp(26) * jones_fig8(4) - tp(-26) * jones_fig8(2)
    for n in range(1, 6):
        assert t_seq(p, -n) == t_seq(p, n - 2)
    q = CableParams(9, 2)
    assert tp(36) * jones_cable(q, 2) - tp(-36) * jones_cable(q, 0) == t_seq(q, 0)


@pytest.mark.parametrize("r", [9, -9, 7])
def test_peel_identity_s2(r):
    p = CableParams(r, 2)
    for n in range(1, 9):
        lhs = tp(2 * r * n) * jones_cable(p, n + 1) + tp(-2 * r - 2 * r * n) * jones_cable(p, n)
        assert lhs == jones_fig8(2 * n + 1)


@pytest.mark.parametrize("r", [13, -13, 7])
def test_peel_identity_s3(r):
    p = CableParams(r, 3)
    for n in range(0, 7):
        k = 2 * r * 3 * (n + 1)
        assert tp(k) * jones_cable(p, n + 2) - tp(-k) * jones_cable(p, n) == t_seq(p, n)


def test_degrees_alternating():
    assert degrees_alternating(4, 0, 3, 3, 2) == (-10, 10)
    assert degrees_alternating(4, 0, 3, 3, 3) == (-28, 28)
    assert degrees_alternating(7, 3, 5, 4, 1) == (0, 0)
    with pytest.raises(UsageError):
        degrees_alternating(4, 0, 3, 2, 2)
    with pytest.raises(UsageError):
        degrees_alternating(4, 0, 3, 3, 0)


def test_degrees_cable_examples():
    assert degrees_cable(CableParams(9, 2), 2) == (-54, 10)
    assert degrees(jones_cable(CableParams(9, 2), 2)) == (-54, 10)
    assert degrees_cable(CableParams(13, 3), 3)[0] == -312
    for r, s in [(9, 2), (-9, 2), (13, 3), (-13, 3), (7, 3), (5, 2)]:
        assert degrees_cable(CableParams(r, s), 1) == (0, 0)


def test_degree_table_cells():
    rows = degree_table(CableParams(13, 3), 8)
    assert len(rows) == 8 and all(row[-1] for row in rows)
    # the one known cancellation: two lowest terms of J_C(2) cancel
    rows = degree_table(CableParams(7, 2), 4)
    assert [row[0] for row in rows if not row[-1]] == [2]
    assert rows[1][1:5] == (-42, 14, -34, 14)


def test_general_formula_matches_fig8_branch():
    for r, s in [(9, 2), (-9, 2), (13, 3), (-13, 3), (7, 3)]:
        for n in range(1, 9):
            assert degrees_cable_general(r, s, n, 4, 3, 0) == degrees_cable(CableParams(r, s), n)


def test_general_formula_warns_below_N():
    with pytest.warns(UserWarning):
        degrees_cable_general(9, 2, 2, 5, 3, 1)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        degrees_cable_general(9, 2, 6, 5, 3, 1)


@pytest.mark.parametrize("r,s", [(4, 2), (6, 3), (9, 1), (0, 3), (3, -2)])
def test_cable_params_invalid(r, s):
    with pytest.raises(UsageError):
        CableParams(r, s)


def test_cable_params_regime():
    assert CableParams(9, 2).regime == "proven"
    assert CableParams(-13, 3).regime == "proven"
    assert CableParams(7, 3).regime == "outside-theorem"
    assert not CableParams(7, 2).proven


def test_sequence_concurrent_reads():
    calls = []

    def rule(n):
        calls.append(n)
        return MultiPoly.monomial(TM, n, 0)

    seq = KnotSequence("probe", rule)
    out = []
    threads = [threading.Thread(target=lambda: out.append(seq(7))) for _ in range(8)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert all(v == tp(7) for v in out)
    assert seq(-7) == -tp(7)
    assert seq(0).is_zero()
