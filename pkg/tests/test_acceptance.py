"""Acceptance checks, one per criterion.

Run as a script to get one PASS/FAIL line per criterion:

    python3 tests/test_acceptance.py

Under pytest each criterion is a test. Parts known to disagree with exact
computation are strict xfails so that a silent change in behavior shows up.
"""

from __future__ import annotations

import sys
import time

import pytest

from qknot.ajcheck import (
    commutative_S,
    subsequence_check,
    formula_mu_S,
    proportional_over_M,
    q_at_minus1,
    resultant_annihilator,
)
from qknot.apoly import a_cable, a_cable_s2_reference, irreducible_quadratic, s2_reference_factor
from qknot.exact_poly import RatFun, mu
from qknot.jones import CableParams, degree_table, fig8_degree_table, jones_fig8, t_sequence
from qknot.qtorus import act, eval_minus1_op
from qknot.recurrences import (
    assemble_annihilator,
    fig8_relation,
    odd_closed_forms,
    odd_limit_product,
    odd_relation_s2,
    odd_subsequence,
    regularized_limit,
    solve_relation,
    verify,
    verify_annihilator,
)

CABLES = [(9, 2), (-9, 2), (7, 2), (13, 3), (-13, 3), (7, 3)]


# Each check returns (ok, detail).


def check_1():
    rel = fig8_relation(check_n=0)
    bad = [n for n in range(1, 16) if act(rel.op(), jones_fig8, n) != rel.b.eval_second_at_power(2 * n)]
    return not bad, f"failures at n={bad}" if bad else "n=1..15 exact"


def check_2_fig8():
    bad = [row[0] for row in fig8_degree_table(15) if not row[-1]]
    return not bad, bad


def check_2_cables():
    bad = []
    for r, s in CABLES:
        for n, plo, phi, clo, chi, ok in degree_table(CableParams(r, s), 8):
            if not ok:
                bad.append(((r, s), n, (plo, phi), (clo, chi)))
    return bad


def check_2():
    ok8, bad8 = check_2_fig8()
    bad = check_2_cables()
    detail = "figure eight ok" if ok8 else f"figure eight fails at {bad8}"
    if bad:
        detail += "; cable mismatches " + ", ".join(
            f"{p} n={n} predicted {pr} computed {co}" for p, n, pr, co in bad
        )
    return ok8 and not bad, detail


def check_3():
    rel = fig8_relation()
    solved = odd_relation_s2(9, check_n=0)
    rep = verify(solved.relation(), odd_subsequence(), range(0, 9))
    Q0, Q1, Q2 = odd_closed_forms(rel)
    raw = solved.extra["Q_raw"]
    forms = all(RatFun(q) == raw.coeffs.get(i) for i, q in enumerate((Q0, Q1, Q2)))
    lim = regularized_limit(solved.extra["B_raw"])
    lim_ok = lim == RatFun(odd_limit_product())
    ok = rep.ok and forms and lim_ok
    return ok, f"relation n=0..8 {rep.ok}, closed forms {forms}, limit product {lim_ok}"


def check_4():
    p = CableParams(9, 2)
    ann = assemble_annihilator(p)
    rep = verify_annihilator(ann, range(1, 9))
    at = eval_minus1_op(ann.R)
    pa = proportional_over_M(at, a_cable(p).poly).proportional
    pd = proportional_over_M(at, a_cable_s2_reference(9)).proportional
    ok = ann.L_degree == 4 and rep.ok and pa and pd
    return ok, f"L-degree {ann.L_degree}, annihilates n=1..8 {rep.ok}, ~a_cable {pa}, ~reference form {pd}"


def check_5():
    p = CableParams(13, 3)
    solved = solve_relation(p, check_n=0)
    rq = verify(solved.relation(), t_sequence(p), range(1, 7))
    ann = assemble_annihilator(p)
    rr = verify_annihilator(ann, range(1, 7))
    pa = proportional_over_M(eval_minus1_op(ann.R), a_cable(p).poly).proportional
    ok = solved.rank == 9 and rq.ok and ann.L_degree == 5 and rr.ok and pa
    return ok, (
        f"rank {solved.rank}, Q T_n = B n=1..6 {rq.ok}, L-degree {ann.L_degree}, "
        f"annihilates n=1..6 {rr.ok}, ~A_C {pa}"
    )


def check_6():
    R = resultant_annihilator(3)
    q13 = q_at_minus1(CableParams(13, 3))
    q14 = q_at_minus1(CableParams(14, 3))
    a = proportional_over_M(q13, R).proportional
    b = proportional_over_M(q14, R).proportional
    c = proportional_over_M(q13, q14).proportional
    return a and b and c, f"(13,3)~Res {a}, (14,3)~Res {b}, mutual {c}"


def check_7_constancy():
    return {s: subsequence_check(s, n_max=5).holds for s in (2, 3)}


def check_7_mu():
    out = {}
    for s in (2, 3):
        out[s] = [(n, mu(commutative_S(s, n)), formula_mu_S(s, n)) for n in range(2, 9)]
    return out


def check_7():
    const = check_7_constancy()
    mus = check_7_mu()
    mu_ok = all(c == e for rows in mus.values() for _, c, e in rows)
    detail = f"R(L) S_(sn) constant {const}; mu(S_n) computed vs expected " + "; ".join(
        f"s={s}: " + " ".join(f"{n}:{c}/{e}" for n, c, e in rows) for s, rows in mus.items()
    )
    return all(const.values()) and mu_ok, detail


def check_8():
    a = irreducible_quadratic(s2_reference_factor())
    b = irreducible_quadratic(q_at_minus1(CableParams(13, 3)))
    return a and b, f"s=2 quadratic {a}, Q(-1) for (13,3) {b}"


def check_9():
    import os

    import pytest as _pt

    here = os.path.dirname(os.path.abspath(__file__))
    files = [os.path.join(here, f) for f in ("test_properties.py",)]
    code = _pt.main(["-q", "-p", "no:cacheprovider", *files])
    return code == 0, f"pytest exit code {code}"


def check_10():
    rel = fig8_relation()
    bad = []
    for s in (2, 3, 5):
        got = [mu(p.eval_first_at(1).subs_second(0, s)) for p in rel.P]
        got.append(mu(rel.b_hat().subs_second(0, s)))
        want = [8 * s, 12 * s, 8 * s, 11 * s]
        if got != want:
            bad.append((s, got, want))
    return not bad, "s=2,3,5 ok" if not bad else f"mismatch {bad}"


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9, check_10]


# -- pytest view ----------------------------------------------------------


@pytest.mark.parametrize("k", [1, 3, 4, 5, 6, 8, 10])
def test_criterion(k):
    ok, detail = CHECKS[k - 1]()
    assert ok, detail


def test_criterion_2_fig8_degrees():
    ok, bad = check_2_fig8()
    assert ok, bad


KNOWN_DEGREE_CANCELLATION = {((7, 2), 2)}


def test_criterion_2_cable_degrees_except_cancellation():
    bad = {(p, n) for p, n, _, _ in check_2_cables()}
    assert bad <= KNOWN_DEGREE_CANCELLATION


@pytest.mark.xfail(strict=True, reason="leading terms cancel at (7,2), n=2: lowest degree is -34, formula gives -42")
def test_criterion_2_cable_degrees_all():
    assert not check_2_cables()


def test_criterion_7_constancy():
    assert all(check_7_constancy().values())


def test_criterion_7_mu_computed():
    for s, rows in check_7_mu().items():
        assert [c for _, c, _ in rows] == [4 * s * (n - 1) for n in range(2, 9)]


@pytest.mark.xfail(strict=True, reason="mu(S_n) is 4s(n-1); the closed form 11s, 4sn+3s does not hold")
def test_criterion_7_mu_closed_form():
    for rows in check_7_mu().values():
        for _, c, e in rows:
            assert c == e


def main() -> int:
    failed = 0
    for k, check in enumerate(CHECKS, 1):
        t0 = time.perf_counter()
        try:
            ok, detail = check()
        except Exception as exc:  # report and keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        dt = time.perf_counter() - t0
        failed += not ok
        print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  ({dt:.1f}s)  {detail}", flush=True)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
