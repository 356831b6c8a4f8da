"""Exact arithmetic kernel.

Sparse bivariate Laurent polynomials over Q (``MultiPoly``), reduced
fractions of them (``RatFun``), and the handful of ring-theoretic
operations the rest of the package is built on: gcd, squarefree part,
Sylvester resultants, degree functions and the square test in C(M).

A ``MultiPoly`` is stored as ``x^a * y^b * p(x, y)`` where ``p`` is an
ordinary polynomial (a python-flint ``fmpq_mpoly``) not divisible by either
variable.  That keeps Laurent exponents out of the backend and makes the
monomial part of every value explicit.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce

import flint

# Coefficients are plain ``fractions.Fraction`` values at the API boundary.
BigRat = Fraction


class UsageError(ValueError):
    """Raised when an operation is called outside its domain."""


def _ctx(names):
    return flint.fmpq_mpoly_ctx.get(tuple(names), "lex")


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _to_fmpq(c) -> flint.fmpq:
    c = Fraction(c)
    return flint.fmpq(c.numerator, c.denominator)


class MultiPoly:
    """Sparse Laurent polynomial in two named variables over Q.

    Values are immutable.  Equality is structural: same variable names and
    same terms.
    """

    __slots__ = ("vars", "_p", "_shift", "_hash")

    def __init__(self, vars, terms=None):
        vars = tuple(vars)
        if len(vars) != 2 or vars[0] == vars[1]:
            raise UsageError(f"need two distinct variable names, got {vars!r}")
        terms = terms or {}
        if not terms:
            self._set(vars, _ctx(vars).from_dict({}), (0, 0))
            return
        a = min(e[0] for e in terms)
        b = min(e[1] for e in terms)
        d = {}
        for (e1, e2), c in terms.items():
            if c:
                d[(e1 - a, e2 - b)] = _to_fmpq(c)
        self._set(vars, _ctx(vars).from_dict(d), (a, b))
        self._normalize_shift()

    # -- construction helpers ------------------------------------------------

    def _set(self, vars, p, shift):
        self.vars = vars
        self._p = p
        self._shift = shift
        self._hash = None

    @classmethod
    def _raw(cls, vars, p, shift=(0, 0), normalize=True):
        obj = cls.__new__(cls)
        obj._set(vars, p, shift)
        if normalize:
            obj._normalize_shift()
        elif p.is_zero():
            obj._shift = (0, 0)
        return obj

    def _normalize_shift(self):
        p = self._p
        if p.is_zero():
            self._shift = (0, 0)
            return
        tc = p.term_content()
        if tc.is_one():
            return
        e = [int(x) for x in tc.monoms()[0]]
        self._p = p / tc
        self._shift = (self._shift[0] + e[0], self._shift[1] + e[1])

    @classmethod
    def const(cls, vars, c=1):
        return cls(vars, {(0, 0): c} if c else {})

    @classmethod
    def zero(cls, vars):
        return cls(vars)

    @classmethod
    def monomial(cls, vars, e1=0, e2=0, c=1):
        return cls(vars, {(e1, e2): c} if c else {})

    @classmethod
    def gens(cls, vars):
        return cls.monomial(vars, 1, 0), cls.monomial(vars, 0, 1)

    # -- inspection ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __len__(self):
        return len(self._p)

    def terms(self) -> dict:
        a, b = self._shift
        return {(int(e[0]) + a, int(e[1]) + b): _to_fraction(c) for e, c in self._p.terms()}

    def sorted_terms(self) -> list:
        """Terms as ``[((e1, e2), coeff), ...]`` in ascending exponent order."""
        a, b = self._shift
        out = [((int(e[0]) + a, int(e[1]) + b), _to_fraction(c)) for e, c in self._p.terms()]
        out.reverse()
        return out

    def is_constant(self) -> bool:
        return self._p.is_constant() and self._shift == (0, 0)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise UsageError("not a constant")
        return _to_fraction(self._p.coefficient(0)) if not self.is_zero() else Fraction(0)

    def var_index(self, name) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise UsageError(f"{name!r} is not a variable of {self.vars}") from None

    def degree_range(self, var) -> tuple:
        """(lowest, highest) exponent of ``var`` over all terms."""
        if self.is_zero():
            raise UsageError("degree of the zero polynomial is undefined")
        i = var if isinstance(var, int) else self.var_index(var)
        lo = self._shift[i]
        return lo, lo + int(self._p.degrees()[i])

    def depends_on(self, var) -> bool:
        i = var if isinstance(var, int) else self.var_index(var)
        return not self.is_zero() and self._p.degrees()[i] > 0 or self._shift[i] != 0

    def last_coefficient(self) -> Fraction:
        """Coefficient of the largest exponent pair (last in ascending order)."""
        return _to_fraction(next(iter(self._p.terms()))[1])

    # -- ring operations -----------------------------------------------------

    def _check(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(self.vars, Fraction(other))
        elif other.vars != self.vars:
            raise UsageError(f"variable mismatch: {self.vars} vs {other.vars}")
        return other

    def _aligned(self, other):
        """Both polynomial parts brought to a common monomial shift."""
        a = min(self._shift[0], other._shift[0])
        b = min(self._shift[1], other._shift[1])
        return self._lift(a, b), other._lift(a, b), (a, b)

    def _lift(self, a, b):
        da, db = self._shift[0] - a, self._shift[1] - b
        if da == 0 and db == 0:
            return self._p
        x, y = self._p.context().gens()
        return self._p * (x**da * y**db)

    def __add__(self, other):
        other = self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        p, q, sh = self._aligned(other)
        return MultiPoly._raw(self.vars, p + q, sh)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.vars, -self._p, self._shift, normalize=False)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        if self.is_zero() or other.is_zero():
            return MultiPoly.zero(self.vars)
        sh = (self._shift[0] + other._shift[0], self._shift[1] + other._shift[1])
        return MultiPoly._raw(self.vars, self._p * other._p, sh, normalize=False)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            if isinstance(k, int) and self._is_monomial():
                return self.inverse_monomial() ** (-k)
            raise UsageError("exponent must be a non-negative integer")
        if k == 0:
            return MultiPoly.const(self.vars, 1)
        return MultiPoly._raw(self.vars, self._p**k, (self._shift[0] * k, self._shift[1] * k), normalize=False)

    def _is_monomial(self):
        return len(self._p) == 1

    def inverse_monomial(self):
        if not self._is_monomial():
            raise UsageError("only monomials are invertible in the Laurent ring")
        c = 1 / self.last_coefficient()
        return MultiPoly.monomial(self.vars, -self._shift[0], -self._shift[1], c)

    def exact_div(self, other):
        """Exact quotient in the Laurent ring; raises ArithmeticError otherwise."""
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        try:
            q = self._p / other._p
        except flint.DomainError:
            raise ArithmeticError("division is not exact") from None
        sh = (self._shift[0] - other._shift[0], self._shift[1] - other._shift[1])
        return MultiPoly._raw(self.vars, q, sh, normalize=False)

    def divides(self, other) -> bool:
        try:
            other.exact_div(self)
            return True
        except ArithmeticError:
            return False

    def scale(self, c):
        return self * MultiPoly.const(self.vars, c)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.vars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.vars == other.vars and self._shift == other._shift and self._p == other._p

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, tuple(self.sorted_terms())))
        return self._hash

    # -- substitution --------------------------------------------------------

    def map_exponents(self, f, vars=None, sign=None):
        """Rebuild from the terms with exponents mapped by ``f``.

        ``sign`` optionally maps an exponent pair to +1/-1 and multiplies the
        coefficient (used for ``t -> -1``).
        """
        out = {}
        for e, c in self.terms().items():
            ne = f(e)
            if sign is not None and sign(e) < 0:
                c = -c
            out[ne] = out.get(ne, 0) + c
        return MultiPoly(vars or self.vars, {e: c for e, c in out.items() if c})

    def subs_second(self, a, b):
        """Second variable ``y -> x^a * y^b`` (e.g. ``M -> t^a M^b``)."""
        if b == 0:
            raise UsageError("use eval_second_at_power for b == 0")
        if self.is_zero():
            return self
        if a >= 0 and b > 0:
            x, y = self._p.context().gens()
            p = self._p.compose(x, x**a * y**b)
            sa, sb = self._shift
            return MultiPoly._raw(self.vars, p, (sa + a * sb, b * sb))
        return self.map_exponents(lambda e: (e[0] + a * e[1], b * e[1]))

    def eval_second_at_power(self, k):
        """Second variable ``y -> x^k``; the result has y-degree 0."""
        if self.is_zero():
            return self
        if k >= 0:
            x, _ = self._p.context().gens()
            p = self._p.compose(x, x**k)
            sa, sb = self._shift
            return MultiPoly._raw(self.vars, p, (sa + k * sb, 0))
        return self.map_exponents(lambda e: (e[0] + k * e[1], 0))

    def subs_first(self, a, b):
        """First variable ``x -> x^a * y^b``."""
        return self.map_exponents(lambda e: (a * e[0], e[1] + b * e[0]))

    def eval_first_at_minus_one(self):
        """First variable ``x -> -1``; the result has x-degree 0."""
        if self.is_zero():
            return self
        x, y = self._p.context().gens()
        p = self._p.compose(self._p.context().constant(-1), y)
        if self._shift[0] % 2:
            p = -p
        return MultiPoly._raw(self.vars, p, (0, self._shift[1]))

    def eval_first_at(self, value):
        """First variable at a rational value; the result has x-degree 0."""
        value = Fraction(value)
        if value == 0 and self._shift[0] < 0:
            raise ZeroDivisionError("negative power at zero")
        x, y = self._p.context().gens()
        p = self._p.compose(self._p.context().constant(_to_fmpq(value)), y)
        p = p * _to_fmpq(value ** self._shift[0])
        return MultiPoly._raw(self.vars, p, (0, self._shift[1]))

    def embed(self, vars, mapping):
        """Rename into another variable pair.

        ``mapping`` sends each of this polynomial's variable names to a name
        in ``vars``; a variable may be dropped (mapped to ``None``) only if
        it does not occur.
        """
        vars = tuple(vars)
        idx = []
        for i, name in enumerate(self.vars):
            target = mapping.get(name, name if name in vars else None)
            if target is None:
                if self.depends_on(i):
                    raise UsageError(f"cannot drop variable {name!r}: it occurs")
                idx.append(None)
            else:
                idx.append(vars.index(target))

        def f(e):
            out = [0, 0]
            for i, j in enumerate(idx):
                if j is not None:
                    out[j] += e[i]
            return tuple(out)

        return self.map_exponents(f, vars=vars)

    def derivative(self, var):
        i = var if isinstance(var, int) else self.var_index(var)
        out = {}
        for e, c in self.terms().items():
            if e[i]:
                ne = (e[0] - 1, e[1]) if i == 0 else (e[0], e[1] - 1)
                out[ne] = c * e[i]
        return MultiPoly(self.vars, out)

    # -- coefficient views ---------------------------------------------------

    def coefficients_in(self, var) -> dict:
        """Split as sum_k c_k * var^k; returns {k: c_k} with c_k free of var."""
        i = var if isinstance(var, int) else self.var_index(var)
        groups = {}
        for e, c in self.terms().items():
            k = e[i]
            rest = (0, e[1]) if i == 0 else (e[0], 0)
            groups.setdefault(k, {})[rest] = c
        return {k: MultiPoly(self.vars, d) for k, d in groups.items()}

    # -- text ----------------------------------------------------------------

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"MultiPoly({self.vars!r}, {to_text(self)!r})"


def _check_same(a, b):
    if a.vars != b.vars:
        raise UsageError(f"variable mismatch: {a.vars} vs {b.vars}")


def ring_op(a: MultiPoly, b, kind: str) -> MultiPoly:
    """add / sub / mul / pow, dispatched by name."""
    if kind == "pow":
        if b < 0:
            raise UsageError("ring_op pow needs a nonnegative exponent")
        return a**b
    _check_same(a, b)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise UsageError(f"unknown ring operation {kind!r}")


# -- unit normalization ------------------------------------------------------


def unit_normal(p: MultiPoly) -> tuple:
    """Split ``p = u * q`` with ``u`` a unit (rational times monomial).

    ``q`` has content-free integer coefficients, minimal exponents zero and a
    positive coefficient on its largest exponent pair.  Returns ``(u, q)``.
    """
    if p.is_zero():
        return MultiPoly.const(p.vars, 1), p
    coeffs = [_to_fraction(c) for c in p._p.coeffs()]
    den = reduce(math.lcm, (c.denominator for c in coeffs), 1)
    num = reduce(math.gcd, (c.numerator for c in coeffs), 0)
    scale = Fraction(den, num)
    if coeffs[0] < 0:
        scale = -scale
    q = MultiPoly._raw(p.vars, p._p * _to_fmpq(scale), (0, 0), normalize=False)
    u = MultiPoly.monomial(p.vars, p._shift[0], p._shift[1], 1 / scale)
    return u, q


def normalize_unit(p: MultiPoly) -> MultiPoly:
    return unit_normal(p)[1]


def primitive_integer(p: MultiPoly) -> tuple:
    """Scale to content-free integer coefficients keeping monomials and sign.

    Returns ``(scale, q)`` with ``q = scale * p``.
    """
    if p.is_zero():
        return Fraction(1), p
    coeffs = [_to_fraction(c) for c in p._p.coeffs()]
    den = reduce(math.lcm, (c.denominator for c in coeffs), 1)
    num = reduce(math.gcd, (c.numerator for c in coeffs), 0)
    scale = Fraction(den, num)
    return scale, p.scale(scale)


def integer_content(polys) -> Fraction:
    """Positive rational c with every p / c integral and jointly content-free."""
    dens, nums = 1, 0
    for p in polys:
        for c in p._p.coeffs():
            c = _to_fraction(c)
            dens = math.lcm(dens, c.denominator)
            nums = math.gcd(nums, c.numerator)
    return Fraction(nums, dens) if nums else Fraction(1)


# -- degree functions -------------------------------------------------------


def degree_t(p: MultiPoly, var="t") -> tuple:
    """(lowest, highest) degree in ``var``; zero input raises UsageError."""
    return p.degree_range(var)


def mu(f, var="M") -> int:
    """Maximum ``var`` degree, extended to fractions by mu(f/g) = mu(f) - mu(g)."""
    if isinstance(f, RatFun):
        return mu(f.num, var) - mu(f.den, var)
    if f.is_zero():
        raise UsageError("mu of zero is undefined")
    return f.degree_range(var)[1]


# -- gcd and friends -------------------------------------------------------


def gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Normalized gcd in the Laurent ring (units stripped)."""
    _check_same(a, b)
    if a.is_zero() and b.is_zero():
        return a
    if a.is_zero():
        return normalize_unit(b)
    if b.is_zero():
        return normalize_unit(a)
    g = a._p.gcd(b._p)
    return normalize_unit(MultiPoly._raw(a.vars, g))


def gcd_many(polys) -> MultiPoly:
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        raise UsageError("gcd of no nonzero polynomials")
    polys.sort(key=len)
    g = polys[0]._p
    for p in polys[1:]:
        if g.is_constant():
            break
        g = g.gcd(p._p)
    return normalize_unit(MultiPoly._raw(polys[0].vars, g))


def squarefree_part(p: MultiPoly) -> MultiPoly:
    """Product of the distinct irreducible factors of p, normalized.

    Characteristic zero: every repeated factor f^e divides p and both
    partial derivatives with multiplicity exactly e - 1, so
    p / gcd(p, dp/dx, dp/dy) is the radical (monomial content dropped).
    """
    if p.is_zero():
        raise UsageError("squarefree part of zero")
    q = normalize_unit(p)
    g = q._p.gcd(q._p.derivative(0)).gcd(q._p.derivative(1)) if not q._p.is_constant() else q._p
    return normalize_unit(MultiPoly._raw(p.vars, q._p / g))


def _univariate_var(d: MultiPoly) -> int:
    dims = [i for i in (0, 1) if d._p.degrees()[i] > 0 or d._shift[i] != 0]
    if len(dims) > 1:
        raise UsageError("expected a polynomial in a single variable")
    return dims[0] if dims else 1


def yun_decomposition(d: MultiPoly) -> list:
    """Squarefree decomposition [(factor, multiplicity)] of a univariate polynomial.

    Monomial content is ignored.  Yun's algorithm over Q.
    """
    if d.is_zero():
        raise UsageError("squarefree decomposition of zero")
    i = _univariate_var(d)
    f = normalize_unit(d)._p
    if f.is_constant():
        return []
    df = f.derivative(i)
    a = f.gcd(df)
    b = f / a
    c = df / a
    dd = c - b.derivative(i)
    out = []
    k = 1
    while not b.is_constant():
        a = b.gcd(dd)
        b = b / a
        c = dd / a
        dd = c - b.derivative(i)
        if not a.is_constant():
            out.append((normalize_unit(MultiPoly._raw(d.vars, a)), k))
        k += 1
    return out


def is_square_in_CM(d: MultiPoly) -> bool:
    """True iff the univariate Laurent polynomial d is a square in C(M).

    Over C every root must have even multiplicity; the monomial part must be
    an even power.  Rational constants are squares over C.
    """
    if d.is_zero():
        raise UsageError("square test of zero")
    i = _univariate_var(d)
    if d._shift[i] % 2:
        return False
    return all(k % 2 == 0 for _, k in yun_decomposition(d))


# -- resultants --------------------------------------------------------------


def det_bareiss(matrix) -> MultiPoly:
    """Determinant of a square matrix of MultiPoly by fraction-free elimination."""
    n = len(matrix)
    if n == 0:
        raise UsageError("empty matrix")
    vars_ = next(e.vars for row in matrix for e in row)
    a = [list(row) for row in matrix]
    sign = 1
    prev = MultiPoly.const(vars_, 1)
    for k in range(n - 1):
        piv = [i for i in range(k, n) if not a[i][k].is_zero()]
        if not piv:
            return MultiPoly.zero(vars_)
        best = min(piv, key=lambda i: len(a[i][k]))
        if best != k:
            a[k], a[best] = a[best], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]).exact_div(prev)
            a[i][k] = MultiPoly.zero(vars_)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def sylvester_matrix(f_coeffs, g_coeffs):
    """Sylvester matrix with the column layout f_0..f_n down the first m columns.

    ``f_coeffs[k]`` is the coefficient of y^k (same for g).  Columns
    0..m-1 carry shifted copies of f, columns m..m+n-1 shifted copies of g.
    """
    n = len(f_coeffs) - 1
    m = len(g_coeffs) - 1
    vars_ = f_coeffs[0].vars
    size = m + n
    zero = MultiPoly.zero(vars_)
    mat = [[zero] * size for _ in range(size)]
    for j in range(m):
        for k, c in enumerate(f_coeffs):
            mat[j + k][j] = c
    for j in range(n):
        for k, c in enumerate(g_coeffs):
            mat[j + k][m + j] = c
    return mat


def resultant_coeffs(f_coeffs, g_coeffs) -> MultiPoly:
    """Resultant of two polynomials given by coefficient lists (low to high)."""
    f_coeffs = _trim(f_coeffs)
    g_coeffs = _trim(g_coeffs)
    if len(f_coeffs) < 2 or len(g_coeffs) < 2:
        raise UsageError("resultant needs positive degree in the eliminated variable")
    return det_bareiss(sylvester_matrix(f_coeffs, g_coeffs))


def _trim(cs):
    cs = list(cs)
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def _coeff_list(p: MultiPoly, var, out_vars, other_name):
    i = p.var_index(var)
    lo, hi = p.degree_range(i)
    if lo < 0:
        raise UsageError(f"negative powers of {var!r} in resultant input")
    parts = p.coefficients_in(i)
    mapping = {var: None}
    mapping[p.vars[1 - i]] = other_name
    return [
        parts[k].embed(out_vars, mapping) if k in parts else MultiPoly.zero(out_vars)
        for k in range(hi + 1)
    ]


def resultant(f: MultiPoly, g: MultiPoly, eliminate: str, result_vars=None) -> MultiPoly:
    """Res_y(f, g) as the Sylvester determinant, exact.

    f and g are bivariate and share the eliminated variable; their other
    variables end up in the result.  When both have the same other variable
    the result is univariate in it and lives in ``f.vars`` (with the
    eliminated variable absent) unless ``result_vars`` says otherwise.
    """
    of = f.vars[1 - f.var_index(eliminate)]
    og = g.vars[1 - g.var_index(eliminate)]
    if result_vars is None:
        result_vars = f.vars if of == og else (of, og)
    result_vars = tuple(result_vars)
    fc = _coeff_list(f, eliminate, result_vars, of)
    gc = _coeff_list(g, eliminate, result_vars, og)
    return resultant_coeffs(fc, gc)


# -- rational functions ----------------------------------------------------


class RatFun:
    """Reduced fraction num/den of MultiPoly values.

    The denominator is unit-normalized (content-free integer coefficients,
    minimal exponents zero, positive last coefficient); all units live in
    the numerator, so the representation is unique.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        if not isinstance(num, MultiPoly):
            raise UsageError("RatFun numerator must be a MultiPoly")
        if den is None:
            den = MultiPoly.const(num.vars, 1)
        _check_same(num, den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = num, MultiPoly.const(num.vars, 1)
            return
        if not _reduced:
            g = num._p.gcd(den._p)
            if not g.is_constant():
                num = MultiPoly._raw(num.vars, num._p / g, num._shift, normalize=False)
                den = MultiPoly._raw(den.vars, den._p / g, den._shift, normalize=False)
        u, den = unit_normal(den)
        if not u.is_constant() or u.constant_value() != 1:
            num = num * u.inverse_monomial()
        self.num, self.den = num, den

    @classmethod
    def from_poly(cls, p):
        return cls(p)

    @property
    def vars(self):
        return self.num.vars

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.is_constant()

    def as_poly(self) -> MultiPoly:
        if not self.is_polynomial():
            raise ArithmeticError("not a polynomial")
        return self.num.scale(1 / self.den.constant_value())

    def _coerce(self, other):
        if isinstance(other, RatFun):
            _check_same(self.num, other.num)
            return other
        if isinstance(other, MultiPoly):
            return RatFun(other)
        return RatFun(MultiPoly.const(self.vars, Fraction(other)))

    def __add__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        r = RatFun.__new__(RatFun)
        r.num, r.den = -self.num, self.den
        return r

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return RatFun(MultiPoly.zero(self.vars))
        # cross-cancel first to keep the products small
        g1 = self.num._p.gcd(other.den._p)
        g2 = other.num._p.gcd(self.den._p)
        n1 = MultiPoly._raw(self.vars, self.num._p / g1, self.num._shift, False)
        d2 = MultiPoly._raw(self.vars, other.den._p / g1, other.den._shift, False)
        n2 = MultiPoly._raw(self.vars, other.num._p / g2, other.num._shift, False)
        d1 = MultiPoly._raw(self.vars, self.den._p / g2, self.den._shift, False)
        return RatFun(n1 * n2, d1 * d2, _reduced=True)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFun(self.den, self.num, _reduced=True)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (MultiPoly, int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def map(self, fn):
        """Apply a ring homomorphism given on MultiPoly to both parts."""
        return RatFun(fn(self.num), fn(self.den))

    def subs_second(self, a, b):
        return self.map(lambda p: p.subs_second(a, b))

    def eval_second_at_power(self, k):
        d = self.den.eval_second_at_power(k)
        if d.is_zero():
            raise ZeroDivisionError("denominator vanishes under the substitution")
        return RatFun(self.num.eval_second_at_power(k), d)

    def eval_first_at_minus_one(self):
        d = self.den.eval_first_at_minus_one()
        if d.is_zero():
            raise ZeroDivisionError("denominator vanishes at -1")
        return RatFun(self.num.eval_first_at_minus_one(), d)

    def embed(self, vars, mapping):
        return RatFun(self.num.embed(vars, mapping), self.den.embed(vars, mapping))

    def __str__(self):
        if self.den.is_constant():
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self):
        return f"RatFun({self!s})"


def as_ratfun(x, vars=None) -> RatFun:
    if isinstance(x, RatFun):
        return x
    if isinstance(x, MultiPoly):
        return RatFun(x)
    return RatFun(MultiPoly.const(vars, Fraction(x)))


# -- canonical text form ---------------------------------------------------


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def to_text(p: MultiPoly) -> str:
    """Canonical text: ascending terms, ``c*x^e1*y^e2`` with unit pieces elided."""
    items = p.sorted_terms()
    if not items:
        return "0"
    parts = []
    for idx, ((e1, e2), c) in enumerate(items):
        mono = []
        for name, e in zip(p.vars, (e1, e2)):
            if e == 1:
                mono.append(name)
            elif e:
                mono.append(f"{name}^{e}")
        a = abs(c)
        if mono:
            body = "*".join(([_fmt_coeff(a)] if a != 1 else []) + mono)
        else:
            body = _fmt_coeff(a)
        if idx == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_]\w*)(?:\^(-?\d+))?|(\*)|([+-]))")


class ParseError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def from_text(text: str, vars) -> MultiPoly:
    """Parse the canonical text form (and reasonable variations of it)."""
    vars = tuple(vars)
    terms = {}
    pos = 0
    sign = 1
    sign_seen = False
    coeff, exps, have = Fraction(1), [0, 0], False
    s = text.strip()
    if s == "0":
        return MultiPoly(vars)

    def flush(at):
        nonlocal coeff, exps, have, sign
        if not have:
            raise ParseError("expected a term", at)
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + sign * coeff
        coeff, exps, have, sign = Fraction(1), [0, 0], False, 1

    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError("unexpected character", pos)
        num, name, exp, star, pm = m.groups()
        if pm:
            if have:
                flush(m.start())
            elif sign_seen:
                raise ParseError("dangling operator", m.start(5))
            sign = 1 if pm == "+" else -1
            sign_seen = True
        elif star:
            if not have:
                raise ParseError("'*' without a left operand", m.start(4))
        elif num:
            coeff *= Fraction(num)
            have = True
            sign_seen = False
        else:
            if name not in vars:
                raise ParseError(f"unknown variable {name!r}", m.start(2))
            exps[vars.index(name)] += int(exp) if exp is not None else 1
            have = True
            sign_seen = False
        pos = m.end()
    flush(len(s))
    return MultiPoly(vars, {e: c for e, c in terms.items() if c})


def to_json_obj(p: MultiPoly) -> dict:
    return {
        "vars": list(p.vars),
        "terms": [[e1, e2, _fmt_coeff(c)] for (e1, e2), c in p.sorted_terms()],
    }


def from_json_obj(obj) -> MultiPoly:
    try:
        vars = tuple(obj["vars"])
        terms = {}
        for e1, e2, c in obj["terms"]:
            if not isinstance(e1, int) or not isinstance(e2, int):
                raise ValueError("exponents must be integers")
            terms[(e1, e2)] = terms.get((e1, e2), 0) + Fraction(c)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed polynomial JSON: {exc}") from exc
    return MultiPoly(vars, {e: c for e, c in terms.items() if c})


def ratfun_to_json_obj(f: RatFun) -> dict:
    return {"num": to_json_obj(f.num), "den": to_json_obj(f.den)}


def ratfun_from_json_obj(obj) -> RatFun:
    try:
        return RatFun(from_json_obj(obj["num"]), from_json_obj(obj["den"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed rational function JSON: {exc}") from exc


# common variable pairs
TM = ("t", "M")
ML = ("M", "L")
M_LAMBDA = ("M", "lambda")
