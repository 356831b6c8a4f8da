"""Annihilators of the figure-eight and cable sequences.

The figure-eight sequence satisfies an inhomogeneous second order relation
P2 L^2 + P1 L + P0 = b.  Linear combinations of its shifts give second
order inhomogeneous relations Q for the subsequences the cable formula
needs; composing with the peel operator and homogenizing gives an
annihilator R of the cable's sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .exact_poly import TM, MultiPoly, RatFun, UsageError, as_ratfun
from .jones import CableParams, KnotSequence, cable_sequence, fig8_seq, jones_fig8, t_sequence
from .qtorus import (
    InhomogRelation,
    NormalizedOperator,
    SkewOperator,
    act,
    homogenize_op,
    normalize_with_multiplier,
    skew_mul,
)


class IntegrityError(RuntimeError):
    """A construction failed its own exact self-check."""


class DegenerateSystem(RuntimeError):
    pass


t, M = MultiPoly.gens(TM)
ONE = MultiPoly.const(TM, 1)


def tm(a: int, b: int = 0, c=1) -> MultiPoly:
    return MultiPoly.monomial(TM, a, b, c)


@dataclass(frozen=True)
class Fig8Relation:
    P0: MultiPoly
    P1: MultiPoly
    P2: MultiPoly
    b: RatFun

    @property
    def P(self):
        return (self.P0, self.P1, self.P2)

    def op(self) -> SkewOperator:
        return SkewOperator({0: self.P0, 1: self.P1, 2: self.P2})

    def relation(self) -> InhomogRelation:
        return InhomogRelation(self.op(), self.b)

    def P_at(self, i: int, a: int, k: int) -> MultiPoly:
        """P_i(t, t^a M^k)."""
        return self.P[i].subs_second(a, k)

    def b_at(self, a: int, k: int) -> RatFun:
        return self.b.subs_second(a, k)

    def b_hat(self) -> MultiPoly:
        """(t^2 - t^-2) b at t = -1, a polynomial in M (still over (t, M))."""
        return (self.b * RatFun(tm(2) - tm(-2))).eval_first_at_minus_one().as_poly()


def _fig8_closed_forms():
    P2 = tm(10, 4) * (-1 + tm(4, 4))
    P1 = -(-1 + tm(4, 2)) * (1 + tm(4, 2)) * (1 - tm(4, 2) - tm(4, 4) - tm(12, 4) - tm(12, 6) + tm(16, 8))
    P0 = tm(6, 4) * (-1 + tm(12, 4))
    bnum = M * (1 + tm(4, 2)) * (-1 + tm(4, 4)) * (-tm(2) + tm(14, 4))
    b = RatFun(bnum) / RatFun(tm(2) - tm(-2))
    return P0, P1, P2, b


@lru_cache(maxsize=None)
def fig8_relation(check_n: int = 10) -> Fig8Relation:
    rel = Fig8Relation(*_fig8_closed_forms())
    r = rel.relation()
    for n in range(1, check_n + 1):
        if not r.holds_at(jones_fig8, n):
            raise IntegrityError(f"figure-eight relation fails at n={n}")
    return rel


# -- linear algebra over Q(t, M) ------------------------------------------


def nullspace(matrix):
    """Rank and a basis vector of the right nullspace of a RatFun matrix.

    Gauss-Jordan elimination; among the rows usable as pivot for a column
    the one whose entry has the fewest terms is chosen.  Returns
    ``(rank, vector)``; ``vector`` is None when the nullspace is trivial,
    otherwise the solution with the first free column set to 1.
    """
    rows = [[as_ratfun(x, TM) for x in row] for row in matrix]
    nrows, ncols = len(rows), len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        cand = [i for i in range(r, nrows) if not rows[i][c].is_zero()]
        if not cand:
            continue
        best = min(cand, key=lambda i: len(rows[i][c].num) + len(rows[i][c].den))
        rows[r], rows[best] = rows[best], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv if not x.is_zero() else x for x in rows[r]]
        for i in range(nrows):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b if not b.is_zero() else a for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    rank = len(pivots)
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return rank, None
    f = free[0]
    zero = RatFun(MultiPoly.zero(TM))
    vec = [zero] * ncols
    vec[f] = RatFun(ONE)
    for i, c in enumerate(pivots):
        vec[c] = -rows[i][f]
    return rank, vec


@dataclass
class SolvedRelation:
    """Q * seq = B with Q normalized; ``c`` are the combination weights.

    ``multiplier`` is the scalar that took the raw nullspace solution (with
    the chosen representative) to the normalized Q; B and c are scaled by
    it as well.
    """

    Q: NormalizedOperator
    B: RatFun
    c: list
    multiplier: RatFun
    rank: int
    seq: KnotSequence = field(repr=False, default=None)
    extra: dict = field(default_factory=dict, repr=False)

    def relation(self) -> InhomogRelation:
        return InhomogRelation(self.Q, self.B)


# -- s = 2: odd subsequence of the figure eight ------------------------------


def odd_subsequence() -> KnotSequence:
    return _odd_seq


_odd_seq = KnotSequence("J_E(2n+1)", lambda n: jones_fig8(2 * n + 1), odd=False)


def odd_system_s2(rel: Fig8Relation):
    """5 x 6 coefficient system, columns (c0, c1, c2, Q0, Q1, Q2)."""
    zero = MultiPoly.zero(TM)
    A = [[zero] * 6 for _ in range(5)]
    for j in range(3):
        for i in range(3):
            A[j + i][j] = rel.P_at(i, 2 * j + 2, 2)
    for i in range(3):
        A[2 * i][3 + i] = -ONE
    return A


def odd_closed_forms(rel: Fig8Relation):
    """Closed forms of Q0, Q1, Q2 for the odd subsequence, unnormalized."""
    P = lambda i, a: rel.P_at(i, a, 2)  # noqa: E731
    Q2 = P(2, 4) * P(1, 2) * P(2, 6)
    Q1 = P(0, 4) * P(1, 6) * P(2, 2) - P(1, 6) * P(1, 2) * P(1, 4) + P(2, 4) * P(1, 2) * P(0, 6)
    Q0 = P(0, 4) * P(1, 6) * P(0, 2)
    return Q0, Q1, Q2


def odd_limit_product() -> MultiPoly:
    """Closed form of lim_{t -> -1} (t^2 - t^-2) B for the s = 2 relation."""
    m = M
    return (
        (-1 + m) ** 6 * m**2 * (1 + m) ** 6 * (1 + m**2) ** 6 * (1 - m + m**2) * (1 + m + m**2)
        * (1 + m**4) ** 5 * (-1 + m**2 - m**4) * (1 - m**4 - 2 * m**8 - m**12 + m**16)
    )


def _combine(rel, c, shifts, k):
    B = RatFun(MultiPoly.zero(TM))
    for cj, a in zip(c, shifts):
        B = B + cj * rel.b_at(a, k)
    return B


@lru_cache(maxsize=None)
def odd_relation_s2(r: int = 1, check_n: int = 8) -> SolvedRelation:
    """Second order inhomogeneous relation for n -> J_E(2n + 1).

    ``r`` only has to be odd; it does not enter Q or B.
    """
    if r % 2 == 0:
        raise UsageError("r must be odd for s = 2")
    rel = fig8_relation()
    rank, vec = nullspace(odd_system_s2(rel))
    if rank != 5 or vec is None:
        raise DegenerateSystem(f"s=2 system has rank {rank}, expected 5")
    # representative with Q2 equal to its closed form (clears all denominators)
    Q2_ref = odd_closed_forms(rel)[2]
    vec = [x * (RatFun(Q2_ref) / vec[5]) for x in vec]
    c = vec[:3]
    Qraw = SkewOperator({0: vec[3], 1: vec[4], 2: vec[5]})
    B = _combine(rel, c, (2, 4, 6), 2)
    if B.is_zero():
        raise IntegrityError("inhomogeneous term vanished")
    Q, mult = normalize_with_multiplier(Qraw)
    solved = SolvedRelation(
        Q=Q, B=B * mult, c=[x * mult for x in c], multiplier=mult, rank=rank, seq=_odd_seq,
        extra={"Q_raw": Qraw, "B_raw": B, "c_raw": c},
    )
    r_ = solved.relation()
    for n in range(0, check_n + 1):
        if not r_.holds_at(_odd_seq, n):
            raise IntegrityError(f"odd-subsequence relation fails at n={n}")
    return solved


def regularized_limit(B: RatFun) -> RatFun:
    """lim_{t -> -1} (t^2 - t^-2) B, a rational function of M."""
    return (B * RatFun(tm(2) - tm(-2))).eval_first_at_minus_one()


# -- general s: the (2s+3) x (2s+4) matrix ----------------------------------


@dataclass
class CableMatrix:
    s: int
    r: int
    entries: list
    col_labels: list
    row_labels: list

    @property
    def shape(self):
        return len(self.entries), len(self.entries[0])


def build_matrix(p: CableParams) -> CableMatrix:
    """Coefficient matrix, columns (c_0..c_2s, Q_2, Q_1, Q_0).

    Row k stands for J_E at index s(n+1) - 1 + k.  Column c_j holds the
    relation at index s(n+1) - 1 + j; column Q_i holds the two terms of
    L^i T moved to the same side.
    """
    rel = fig8_relation()
    s, r = p.s, p.r
    nrows, ncols = 2 * s + 3, 2 * s + 4
    zero = MultiPoly.zero(TM)
    A = [[zero] * ncols for _ in range(nrows)]
    for j in range(2 * s + 1):
        for i in range(3):
            A[j + i][j] = rel.P_at(i, 2 * (s - 1 + j), s)
    qcol = {2: 2 * s + 1, 1: 2 * s + 2, 0: 2 * s + 3}
    for i in range(3):
        col = qcol[i]
        A[s * i][col] = A[s * i][col] + tm(-2 * r * (1 + i), -r)
        A[s * i + 2][col] = A[s * i + 2][col] - tm(2 * r * (1 + i), r)
    cols = [f"c_{j}" for j in range(2 * s + 1)] + ["Q_2", "Q_1", "Q_0"]
    rows = [f"J[s(n+1){k - 1:+d}]" for k in range(nrows)]
    return CableMatrix(s, r, A, cols, rows)


@lru_cache(maxsize=None)
def solve_relation(p: CableParams, check_n: int = 6, allow_s2: bool = False) -> SolvedRelation:
    """Second order inhomogeneous relation Q T = B for the auxiliary sequence T."""
    if p.s == 2 and not allow_s2:
        raise UsageError("the matrix construction is used for s > 2 only")
    s = p.s
    mat = build_matrix(p)
    rank, vec = nullspace(mat.entries)
    if rank != 2 * s + 3 or vec is None:
        raise DegenerateSystem(f"matrix has rank {rank}, expected {2 * s + 3}")
    q0 = vec[2 * s + 3]
    if q0.is_zero():
        raise IntegrityError("Q_0 vanished")
    vec = [x / q0 for x in vec]
    c = vec[: 2 * s + 1]
    Qraw = SkewOperator({0: vec[2 * s + 3], 1: vec[2 * s + 2], 2: vec[2 * s + 1]})
    rel = fig8_relation()
    B = _combine(rel, c, [2 * (s - 1 + k) for k in range(2 * s + 1)], s)
    if B.is_zero():
        raise IntegrityError("inhomogeneous term vanished")
    Q, mult = normalize_with_multiplier(Qraw)
    seq = t_sequence(p)
    solved = SolvedRelation(
        Q=Q, B=B * mult, c=[x * mult for x in c], multiplier=mult, rank=rank, seq=seq,
        extra={"Q_raw": Qraw, "B_raw": B},
    )
    if not allow_s2:
        r_ = solved.relation()
        for n in range(1, check_n + 1):
            if not r_.holds_at(seq, n):
                raise IntegrityError(f"Q T = B fails at n={n}")
    return solved


# -- assembly ---------------------------------------------------------------


def peel_operator(p: CableParams) -> SkewOperator:
    r, s = p.r, p.s
    if s == 2:
        return SkewOperator({1: tm(0, r), 0: tm(-2 * r, -r)})
    return SkewOperator({2: tm(2 * r * s, r * s), 0: -tm(-2 * r * s, -r * s)})


@dataclass
class CableAnnihilator:
    params: CableParams
    R: NormalizedOperator
    L_degree: int
    assembly: list
    solved: SolvedRelation = field(repr=False, default=None)

    def seq(self):
        return cable_sequence(self.params)


@lru_cache(maxsize=None)
def assemble_annihilator(p: CableParams) -> CableAnnihilator:
    """(L - 1) B^-1 Q P for the peel operator P of the cable."""
    if p.s == 2:
        solved = odd_relation_s2(p.r)
    else:
        solved = solve_relation(p)
    peel = peel_operator(p)
    QP = skew_mul(solved.Q.to_skew(), peel)
    R, _ = normalize_with_multiplier(homogenize_op(QP, solved.B))
    expected = 4 if p.s == 2 else 5
    if R.degree != expected:
        raise IntegrityError(f"annihilator has L-degree {R.degree}, expected {expected}")
    peel_desc = "M^r L + t^(-2r) M^(-r)" if p.s == 2 else "t^(2rs) M^(rs) L^2 - t^(-2rs) M^(-rs)"
    assembly = ["L - 1", "B^-1", "Q", peel_desc]
    return CableAnnihilator(p, R, R.degree, assembly, solved)


# -- verification harness -----------------------------------------------------


@dataclass
class VerifyReport:
    results: list  # [(n, ok)]

    @property
    def ok(self) -> bool:
        return all(v for _, v in self.results)

    def failures(self):
        return [n for n, v in self.results if not v]


def verify(rel, seq, n_range) -> VerifyReport:
    """Exact check of a relation (or homogeneous operator) on seq at each n."""
    out = []
    for n in n_range:
        if isinstance(rel, InhomogRelation):
            ok = rel.holds_at(seq, n)
        else:
            ok = act(rel, seq, n).is_zero()
        out.append((n, ok))
    return VerifyReport(out)


def verify_annihilator(ann: CableAnnihilator, n_range) -> VerifyReport:
    return verify(ann.R, cable_sequence(ann.params), n_range)
