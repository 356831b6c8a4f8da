"""Colored Jones sequences of the unknot, the figure eight and its cables.

All values are Laurent polynomials in t, carried as MultiPoly over (t, M)
with no M dependence.  J-type sequences are odd: J(-n) = -J(n), J(0) = 0.
"""

from __future__ import annotations

import math
import threading
import warnings

from .exact_poly import TM, MultiPoly, UsageError, degree_t

_T = MultiPoly.monomial(TM, 1, 0)
_ONE = MultiPoly.const(TM, 1)
_ZERO = MultiPoly.zero(TM)


def tpow(k: int) -> MultiPoly:
    return MultiPoly.monomial(TM, k, 0)


class KnotSequence:
    """Memoized n -> Laurent polynomial in t.

    ``rule`` computes the value for n > 0 (or for every n when ``odd`` is
    false).  A ``store`` with ``load(n)`` / ``save(n, value)`` may back the
    memo for persistence.
    """

    def __init__(self, name, rule, odd=True, store=None):
        self.name = name
        self._rule = rule
        self.odd = odd
        self.store = store
        self._memo = {}
        self._lock = threading.Lock()

    def __call__(self, n: int) -> MultiPoly:
        if self.odd:
            if n == 0:
                return _ZERO
            if n < 0:
                return -self(-n)
        v = self._memo.get(n)
        if v is not None:
            return v
        if self.store is not None:
            v = self.store.load(n)
        if v is None:
            v = self._rule(n)
            if self.store is not None:
                self.store.save(n, v)
        with self._lock:
            # first writer wins; later ones computed the same value
            v = self._memo.setdefault(n, v)
        return v

    def clear(self):
        with self._lock:
            self._memo.clear()


class CableParams:
    """Cabling slope r/s with gcd(|r|, s) = 1, s >= 2, r != 0."""

    __slots__ = ("r", "s")

    def __init__(self, r: int, s: int):
        if not isinstance(r, int) or not isinstance(s, int):
            raise UsageError("r and s must be integers")
        if s < 2:
            raise UsageError(f"s must be at least 2 (got s={s})")
        if r == 0:
            raise UsageError("r must be nonzero")
        if math.gcd(abs(r), s) != 1:
            raise UsageError(f"r and s must be coprime (got r={r}, s={s})")
        self.r = r
        self.s = s

    @property
    def proven(self) -> bool:
        return abs(self.r) > 4 * self.s

    @property
    def regime(self) -> str:
        return "proven" if self.proven else "outside-theorem"

    def flags(self) -> dict:
        return {
            "r>4s": self.r > 4 * self.s,
            "r<-4s": self.r < -4 * self.s,
            "|r|<4s": abs(self.r) < 4 * self.s,
        }

    def __eq__(self, other):
        return isinstance(other, CableParams) and (self.r, self.s) == (other.r, other.s)

    def __hash__(self):
        return hash((self.r, self.s))

    def __repr__(self):
        return f"CableParams(r={self.r}, s={self.s})"


# -- unknot and figure eight ---------------------------------------------------


def _unknot_rule(n):
    return MultiPoly(TM, {(2 * n - 2 - 4 * j, 0): 1 for j in range(n)})


jones_unknot_seq = KnotSequence("unknot", _unknot_rule)


def jones_unknot(n: int) -> MultiPoly:
    return jones_unknot_seq(n)


def _quantum_square(k):
    # (t^(2k) - t^(-2k))^2
    return MultiPoly(TM, {(4 * k, 0): 1, (0, 0): -2, (-4 * k, 0): 1})


def _fig8_rule(n):
    x = _quantum_square(n)
    total = _ONE
    prod = _ONE
    for i in range(1, n):
        prod = prod * (x - _quantum_square(i))
        total = total + prod
    return jones_unknot(n) * total


fig8_seq = KnotSequence("fig8", _fig8_rule)


def jones_fig8(n: int) -> MultiPoly:
    return fig8_seq(n)


def set_fig8_store(store):
    """Attach (or detach with None) a persistent store for J_E values."""
    fig8_seq.store = store


# -- cables --------------------------------------------------------------------

_cable_seqs = {}
_t_seqs = {}
_registry_lock = threading.Lock()


def _cable_rule(p):
    r, s = p.r, p.s

    def rule(n):
        total = _ZERO
        for j in range(-(n - 1), n, 2):
            total = total + tpow(r * s * j * j + 2 * r * j) * jones_fig8(j * s + 1)
        return tpow(-r * s * (n * n - 1)) * total

    return rule


def cable_sequence(p: CableParams) -> KnotSequence:
    with _registry_lock:
        seq = _cable_seqs.get(p)
        if seq is None:
            seq = _cable_seqs[p] = KnotSequence(f"cable({p.r},{p.s})", _cable_rule(p))
    return seq


def jones_cable(p: CableParams, n: int) -> MultiPoly:
    return cable_sequence(p)(n)


def _t_rule(p):
    r, s = p.r, p.s

    def rule(n):
        k = s * (n + 1)
        return tpow(2 * r * (n + 1)) * jones_fig8(k + 1) - tpow(-2 * r * (n + 1)) * jones_fig8(k - 1)

    return rule


def t_sequence(p: CableParams) -> KnotSequence:
    with _registry_lock:
        seq = _t_seqs.get(p)
        if seq is None:
            seq = _t_seqs[p] = KnotSequence(f"T({p.r},{p.s})", _t_rule(p), odd=False)
    return seq


def t_seq(p: CableParams, n: int) -> MultiPoly:
    return t_sequence(p)(n)


# -- degree predictors ------------------------------------------------------


def degrees(f: MultiPoly) -> tuple:
    """Computed (lowest, highest) t-degree."""
    return degree_t(f)


def degrees_alternating(N: int, w: int, s_plus: int, s_minus: int, n: int) -> tuple:
    """(lowest, highest) t-degree of J_n for an alternating knot, n > 0."""
    if n <= 0:
        raise UsageError("n must be positive")
    if s_plus + s_minus != N + 2:
        raise UsageError(f"s_plus + s_minus must equal N + 2 (got {s_plus} + {s_minus}, N={N})")
    hi = N * (n - 1) ** 2 - w * (n * n - 1) + 2 * (n - 1) * s_plus
    lo = -N * (n - 1) ** 2 - w * (n * n - 1) - 2 * (n - 1) * s_minus
    return lo, hi


def degrees_fig8(n: int) -> tuple:
    return degrees_alternating(4, 0, 3, 3, abs(n))


def degrees_cable_general(r: int, s: int, n: int, N: int, m: int, w: int) -> tuple:
    """Predicted (lowest, highest) degree of the (r, s)-cable over an alternating knot.

    The formulas are only claimed for n > N in general; a warning is issued
    below that range.
    """
    if n <= 0:
        raise UsageError("n must be positive")
    if n <= N and (N, m, w) != (4, 3, 0):
        warnings.warn(f"degree formula is only guaranteed for n > {N}", stacklevel=2)
    parity = (1 - (-1) ** (n - 1)) // 2
    if r > -(N - w) * s:
        hi = (
            (N - w) * s * s * n * n
            + (2 * r - 2 * (-2 + m + r + w - N) * s - 2 * (N - w) * s * s) * n
            + (-2 * r + 2 * (-2 + m + r + w - N) * s + (N - w) * s * s)
        )
    else:
        hi = -r * s * (n * n - 1) + parity * (s - 2) * (4 + r + (N - w) * s - 2 * m)
    if r < (N + w) * s:
        lo = (
            -(N + w) * s * s * n * n
            + (2 * r - 2 * (r + m + w) * s + 2 * (N + w) * s * s) * n
            + (-2 * r + 2 * (r + m + w) * s - (N + w) * s * s)
        )
    else:
        lo = -r * s * (n * n - 1) + parity * (s - 2) * (r - (N + w) * s + 2 * (N - m))
    return lo, hi


def degrees_cable(p: CableParams, n: int) -> tuple:
    """Predicted (lowest, highest) degree of J_{C,n}, figure-eight companion."""
    r, s = p.r, p.s
    if n <= 0:
        raise UsageError("n must be positive")
    parity = (1 - (-1) ** (n - 1)) // 2
    if r > -4 * s:
        hi = 4 * s * s * n * n + (2 * r + 6 * s - 2 * r * s - 8 * s * s) * n + (-2 * r - 6 * s + 2 * r * s + 4 * s * s)
    else:
        hi = -r * s * (n * n - 1) + parity * (s - 2) * (-2 + r + 4 * s)
    if r < 4 * s:
        lo = -4 * s * s * n * n + (2 * r - 6 * s - 2 * r * s + 8 * s * s) * n + (-2 * r + 6 * s + 2 * r * s - 4 * s * s)
    else:
        lo = -r * s * (n * n - 1) + parity * (s - 2) * (2 + r - 4 * s)
    return lo, hi


def degree_table(p: CableParams, n_max: int) -> list:
    """Rows (n, predicted lo, predicted hi, computed lo, computed hi, match)."""
    rows = []
    for n in range(1, n_max + 1):
        plo, phi = degrees_cable(p, n)
        clo, chi = degrees(jones_cable(p, n))
        rows.append((n, plo, phi, clo, chi, (plo, phi) == (clo, chi)))
    return rows


def fig8_degree_table(n_max: int) -> list:
    rows = []
    for n in range(1, n_max + 1):
        plo, phi = degrees_fig8(n)
        clo, chi = degrees(jones_fig8(n))
        rows.append((n, plo, phi, clo, chi, (plo, phi) == (clo, chi)))
    return rows
