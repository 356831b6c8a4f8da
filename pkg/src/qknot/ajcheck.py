"""AJ verification: annihilator at t = -1 against the A-polynomial.

Also the commutative (t = -1) analogue of the cable construction: a
sequence S_n over Q(M) driven by the figure-eight relation at t = -1, and
the resultant that annihilates its subsequences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .apoly import APoly, a_cable, irreducible_quadratic
from .exact_poly import (
    M_LAMBDA,
    ML,
    TM,
    MultiPoly,
    RatFun,
    UsageError,
    mu,
    ratfun_to_json_obj,
    resultant,
    to_json_obj,
)
from .jones import CableParams
from .qtorus import NormalizedOperator, eval_minus1_op
from .recurrences import (
    CableAnnihilator,
    assemble_annihilator,
    fig8_relation,
    solve_relation,
    verify_annihilator,
)

_LAM = ("L", "lambda")


# -- proportionality ----------------------------------------------------------


@dataclass
class Proportionality:
    proportional: bool
    witness: RatFun = None  # p / q when proportional

    def __bool__(self):
        return self.proportional


def proportional_over_M(p: MultiPoly, q: MultiPoly, var="L") -> Proportionality:
    """Decide p = C(M) q with C in Q(M), by cross-multiplying coefficients."""
    if p.is_zero() or q.is_zero():
        raise UsageError("proportionality test needs nonzero inputs")
    pc = p.coefficients_in(var)
    qc = q.coefficients_in(var)
    if set(pc) != set(qc):
        return Proportionality(False)
    keys = sorted(pc)
    for a in range(len(keys)):
        for b in range(a + 1, len(keys)):
            i, j = keys[a], keys[b]
            if pc[i] * qc[j] != pc[j] * qc[i]:
                return Proportionality(False)
    k = keys[0]
    return Proportionality(True, RatFun(pc[k]) / RatFun(qc[k]))


# -- the commutative sequence ----------------------------------------------


def _in_M(p: MultiPoly) -> MultiPoly:
    """Move a (t, M) polynomial free of t into the (M, L) ring."""
    return p.embed(ML, {"t": None, "M": "M"})


@lru_cache(maxsize=None)
def fig8_at_minus1(s: int):
    """P_0, P_1, P_2 at t = -1, M -> M^s, and the regularized b, over (M, L)."""
    rel = fig8_relation()
    P = [_in_M(p.eval_first_at_minus_one().subs_second(0, s)) for p in rel.P]
    bh = _in_M(rel.b_hat().subs_second(0, s))
    return P, bh


class CommutativeSeq:
    """S_0 = S_1 = 1 and P2 S_{n+2} + P1 S_{n+1} + P0 S_n = b at t = -1."""

    def __init__(self, s: int):
        if s < 2:
            raise UsageError("s must be at least 2")
        self.s = s
        (self.P0, self.P1, self.P2), self.b = fig8_at_minus1(s)
        one = RatFun(MultiPoly.const(ML, 1))
        self._memo = [one, one]

    def __call__(self, n: int) -> RatFun:
        if n < 0:
            raise UsageError("S_n is defined for n >= 0")
        memo = self._memo
        while len(memo) <= n:
            k = len(memo) - 2
            num = RatFun(self.b) - memo[k + 1] * RatFun(self.P1) - memo[k] * RatFun(self.P0)
            memo.append(num / RatFun(self.P2))
        return memo[n]

    def residual(self, n: int) -> RatFun:
        return (
            RatFun(self.P2) * self(n + 2) + RatFun(self.P1) * self(n + 1)
            + RatFun(self.P0) * self(n) - RatFun(self.b)
        )


@lru_cache(maxsize=None)
def commutative_seq(s: int) -> CommutativeSeq:
    return CommutativeSeq(s)


def commutative_S(s: int, n: int) -> RatFun:
    return commutative_seq(s)(n)


def formula_mu_S(s: int, n: int) -> int:
    """Candidate closed form for the M-degree of S_n: 0, 0, 11s, then 4sn + 3s.

    Kept for comparison; the computed degrees are 4s(n - 1) for n >= 2.
    """
    if n <= 1:
        return 0
    if n == 2:
        return 11 * s
    return 4 * s * n + 3 * s


def formula_mu_T(r: int, s: int, n: int) -> int:
    return max(r + 4 * s * s * n + 4 * s * s + 7 * s, -r + 4 * s * s * n + 4 * s * s - s)


# -- the resultant annihilator ---------------------------------------------


@lru_cache(maxsize=None)
def fig8_op_lambda(s: int) -> MultiPoly:
    """P2(-1, M^s) lambda^2 + P1(-1, M^s) lambda + P0(-1, M^s) over (M, lambda)."""
    P, _ = fig8_at_minus1(s)
    lam = MultiPoly.monomial(M_LAMBDA, 0, 1)
    out = MultiPoly.zero(M_LAMBDA)
    for i, p in enumerate(P):
        out = out + p.embed(M_LAMBDA, {"M": "M", "L": None}) * lam**i
    return out


@lru_cache(maxsize=None)
def resultant_annihilator(s: int) -> MultiPoly:
    """Res_lambda(alpha_E(-1, M^s, lambda), lambda^s - L) over (M, L)."""
    g = MultiPoly.monomial(_LAM, 0, s) - MultiPoly.monomial(_LAM, 1, 0)
    return resultant(fig8_op_lambda(s), g, "lambda", result_vars=ML)


def fig8_op_discriminant(s: int) -> MultiPoly:
    """Discriminant in lambda; nonzero means no repeated roots."""
    P, _ = fig8_at_minus1(s)
    return P[1] * P[1] - 4 * P[2] * P[0]


def apply_commutative(R: MultiPoly, seq, n: int) -> RatFun:
    """sum_i R_i(M) seq(n + i) for R over (M, L)."""
    total = RatFun(MultiPoly.zero(ML))
    for i, c in R.coefficients_in("L").items():
        total = total + RatFun(c) * seq(n + i)
    return total


@dataclass
class SubsequenceCheck:
    s: int
    holds: bool
    constant: RatFun
    values: list
    squarefree: bool


def subsequence_check(s: int, n_max: int = 5, R: MultiPoly = None) -> SubsequenceCheck:
    """R(L) applied to n -> S_{sn} must be independent of n."""
    seq = commutative_seq(s)
    R = resultant_annihilator(s) if R is None else R
    sub = lambda n: seq(s * n)  # noqa: E731
    values = [apply_commutative(R, sub, n) for n in range(n_max + 1)]
    holds = all(v == values[0] for v in values)
    return SubsequenceCheck(s, holds, values[0], values, not fig8_op_discriminant(s).is_zero())


def commutative_T(p: CableParams, n: int) -> RatFun:
    seq = commutative_seq(p.s)
    k = p.s * (n + 1)
    Mr = RatFun(MultiPoly.monomial(ML, p.r, 0))
    return Mr * seq(k + 1) - Mr.inverse() * seq(k - 1)


@dataclass
class ResultantIdentity:
    params: CableParams
    proportional: bool
    witness: RatFun
    resultant: MultiPoly
    q_minus1: MultiPoly
    t_constant: bool
    t_values: list = field(repr=False, default_factory=list)
    mu_T: list = field(default_factory=list)

    def __bool__(self):
        return self.proportional and self.t_constant


def q_at_minus1(p: CableParams) -> MultiPoly:
    return eval_minus1_op(solve_relation(p).Q)


def resultant_identity(p: CableParams, n_max: int = 4) -> ResultantIdentity:
    if p.s <= 2:
        raise UsageError("the resultant identity is stated for s > 2")
    R = resultant_annihilator(p.s)
    Q1 = q_at_minus1(p)
    prop = proportional_over_M(Q1, R)
    Tn = lambda n: commutative_T(p, n)  # noqa: E731
    vals = [apply_commutative(R, Tn, n) for n in range(n_max + 1)]
    mus = [mu(Tn(n)) for n in range(n_max + 1)]
    return ResultantIdentity(
        p, prop.proportional, prop.witness, R, Q1, all(v == vals[0] for v in vals), vals, mus
    )


# -- end to end -------------------------------------------------------------


@dataclass
class AJReport:
    params: CableParams
    annihilator: CableAnnihilator
    a_poly: APoly
    t_minus1: MultiPoly
    proportional: bool
    witness: RatFun
    empirical: list
    regime: str
    resultant_identity: object = None
    irreducible_factor: bool = None

    @property
    def annihilates(self) -> bool:
        return all(ok for _, ok in self.empirical)

    @property
    def verified(self) -> bool:
        ok = self.proportional and self.annihilates
        if self.resultant_identity is not None:
            ok = ok and bool(self.resultant_identity)
        return ok

    def to_json_obj(self) -> dict:
        p = self.params
        out = {
            "r": p.r,
            "s": p.s,
            "regime": self.regime,
            "verified": self.verified,
            "proportional": self.proportional,
            "witness": ratfun_to_json_obj(self.witness) if self.witness is not None else None,
            "empirical_annihilation": [{"n": n, "ok": ok} for n, ok in self.empirical],
            "annihilator": {
                "L_degree": self.annihilator.L_degree,
                "assembly": self.annihilator.assembly,
                "R": self.annihilator.R.to_json_obj(),
            },
            "t_minus1": to_json_obj(self.t_minus1),
            "a_poly": self.a_poly.to_json_obj(),
            "irreducible_factor": self.irreducible_factor,
        }
        ri = self.resultant_identity
        if ri is not None:
            out["resultant_identity"] = {
                "proportional": ri.proportional,
                "witness": ratfun_to_json_obj(ri.witness) if ri.witness is not None else None,
                "resultant": to_json_obj(ri.resultant),
                "T_recurrence_constant": ri.t_constant,
            }
        return out

    def summary(self) -> str:
        p = self.params
        lines = [
            f"cable (r, s) = ({p.r}, {p.s})  regime: {self.regime}",
            f"annihilator L-degree: {self.annihilator.L_degree}",
            "annihilates J_C at n = "
            + ", ".join(f"{n}:{'ok' if ok else 'FAIL'}" for n, ok in self.empirical),
            f"A-polynomial: {self.a_poly.poly}",
            f"proportional at t = -1: {self.proportional}",
        ]
        if self.witness is not None:
            lines.append(f"witness C(M) = {self.witness}")
        if self.irreducible_factor is not None:
            lines.append(f"nonabelian factor irreducible over C(M): {self.irreducible_factor}")
        if self.resultant_identity is not None:
            ri = self.resultant_identity
            lines.append(f"Q(-1, M, L) proportional to resultant: {ri.proportional}")
            lines.append(f"resultant annihilates commutative T_n: {ri.t_constant}")
        if p.regime != "proven":
            lines.append("warning: |r| < 4s, outside the range where minimality is proven")
        lines.append(f"verdict: {'VERIFIED' if self.verified else 'FAILED'}")
        return "\n".join(lines)


def aj_verify(p: CableParams, n_check: int = 6) -> AJReport:
    ann = assemble_annihilator(p)
    emp = verify_annihilator(ann, range(1, n_check + 1)).results
    at = eval_minus1_op(ann.R)
    A = a_cable(p)
    prop = proportional_over_M(at, A.poly)
    red = dict(A.factors)["Red(resultant)"]
    irr = irreducible_quadratic(red) if red.degree_range("L")[1] == 2 else None
    ri = resultant_identity(p) if p.s > 2 else None
    return AJReport(p, ann, A, at, prop.proportional, prop.witness, emp, p.regime, ri, irr)
