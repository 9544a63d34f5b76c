"""Exact univariate rational functions in Hilbert shape and their Laurent expansions.

A :class:`HilbertRational` is ``numerator / (residual * prod(1 - t^d))`` where the
numerator lives in ``Q[t, 1/t]`` and ``residual`` is an ordinary polynomial with
constant term 1.  Hilbert series never need a residual; quotients such as
``phi`` may.

Expansions around 1 are written in powers of ``(1 - t)``; around infinity the
coefficient of ``t^(-j)`` is stored at index ``j``.
"""

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from ._expr import ExprError, evaluate

DEFAULT_TERMS = 16


class LaurentPolynomial:
    """Element of ``Q[t, 1/t]`` stored as a sparse ``{exponent: Fraction}`` map."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, v in dict(coeffs).items():
                v = Fraction(v)
                if v:
                    c[int(e)] = v
        self._c = c

    @classmethod
    def constant(cls, c):
        return cls({0: c})

    @classmethod
    def monomial(cls, e, c=1):
        return cls({e: c})

    @classmethod
    def from_dense(cls, coeffs, shift=0):
        return cls({i + shift: v for i, v in enumerate(coeffs)})

    @property
    def coeffs(self):
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def coefficient(self, e):
        return self._c.get(e, Fraction(0))

    def is_zero(self):
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def low(self):
        return min(self._c) if self._c else None

    def high(self):
        return max(self._c) if self._c else None

    def is_integral(self):
        return all(v.denominator == 1 for v in self._c.values())

    def is_monomial(self):
        return len(self._c) == 1

    def dense(self):
        """Return ``(low, [c_low, ..., c_high])``; ``(0, [])`` for zero."""
        if not self._c:
            return 0, []
        lo, hi = self.low(), self.high()
        return lo, [self._c.get(e, Fraction(0)) for e in range(lo, hi + 1)]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __neg__(self):
        return LaurentPolynomial({e: -v for e, v in self._c.items()})

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return LaurentPolynomial(c)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
        return LaurentPolynomial(c)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have inverses in Z[t, 1/t]")
            (e, v), = self._c.items()
            return LaurentPolynomial({e * n: v ** n})
        result = LaurentPolynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, a):
        """Multiply by ``t^a``."""
        return LaurentPolynomial({e + a: v for e, v in self._c.items()})

    def scale(self, c):
        return LaurentPolynomial({e: v * c for e, v in self._c.items()})

    def substitute_inverse(self):
        """Return ``p(1/t)``."""
        return LaurentPolynomial({-e: v for e, v in self._c.items()})

    def __call__(self, x):
        x = Fraction(x)
        return sum((v * x ** e for e, v in self._c.items()), Fraction(0))

    def exact_divide(self, other):
        """Quotient in ``Q[t, 1/t]``, or None when ``other`` does not divide."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if self.is_zero():
            return LaurentPolynomial()
        alo, a = self.dense()
        blo, b = other.dense()
        q, r = _pdivmod(a, b)
        if any(r):
            return None
        return LaurentPolynomial.from_dense(q, alo - blo)

    def __repr__(self):
        return f"LaurentPolynomial({format_laurent(self)!r})"

    def __str__(self):
        return format_laurent(self)


T = LaurentPolynomial.monomial(1)


def one_minus_t_power(d):
    return LaurentPolynomial({0: 1, d: -1})


# --- dense polynomial helpers over Q (index = exponent) --------------------

def _trim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pdivmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    r = [Fraction(x) for x in a]
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(q) - 1, -1, -1):
        c = r[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for j, y in enumerate(b):
                r[k + j] -= c * y
    return _trim(q), _trim(r[: len(b) - 1])


def _pgcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    if not a:
        return []
    return [x / a[-1] for x in a]


def _compose_one_minus(p):
    """Dense coefficients in s of ``p(1 - s)``."""
    out = []
    for c in reversed(p):
        out = _pmul(out, [Fraction(1), Fraction(-1)])
        if out:
            out[0] += c
        else:
            out = [Fraction(c)]
        out = _trim(out)
    return out


def _dense_parts(p):
    """``(a, dense)`` with ``p = t^a * dense(t)`` and ``dense(0) != 0``."""
    return p.dense()


# --- rational functions ------------------------------------------------------

class HilbertRational:
    """``numerator / (residual * prod_i (1 - t^{d_i}))`` with exact rational coefficients."""

    __slots__ = ("numerator", "dens", "residual", "canonical_form")

    def __init__(self, numerator, dens=(), residual=None, canonical_form=False):
        if not isinstance(numerator, LaurentPolynomial):
            numerator = LaurentPolynomial.constant(numerator)
        dens = tuple(sorted(int(d) for d in dens))
        if any(d < 1 for d in dens):
            raise ValueError(f"denominator exponents must be positive, got {dens}")
        if residual is None:
            residual = LaurentPolynomial.constant(1)
        if residual.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.numerator = numerator
        self.dens = dens
        self.residual = residual
        self.canonical_form = canonical_form

    @classmethod
    def from_fraction(cls, p, q):
        """Canonical form of ``p / q`` for Laurent polynomials ``p`` and ``q``."""
        return _canonicalize(p, q)

    @classmethod
    def constant(cls, c):
        return cls(LaurentPolynomial.constant(c))

    def is_zero(self):
        return self.numerator.is_zero()

    def expanded(self):
        """Return ``(P, Q)`` with value ``P / Q``."""
        q = self.residual
        for d in self.dens:
            q = q * one_minus_t_power(d)
        return self.numerator, q

    def canonical(self):
        if self.canonical_form:
            return self
        return _canonicalize(*self.expanded())

    def is_laurent_polynomial(self):
        """True when the function lies in ``Q[t, 1/t]`` (finite length)."""
        c = self.canonical()
        return not c.dens and c.residual == 1

    def as_laurent_polynomial(self):
        c = self.canonical()
        if c.dens or c.residual != 1:
            raise ValueError(f"{self} is not a Laurent polynomial")
        return c.numerator

    def is_hilbert_shaped(self):
        return self.residual == 1

    def __call__(self, x):
        p, q = self.expanded()
        return p(x) / q(x)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, LaurentPolynomial)):
            other = HilbertRational(other if isinstance(other, LaurentPolynomial) else LaurentPolynomial.constant(other))
        if not isinstance(other, HilbertRational):
            return NotImplemented
        return equal(self, other)

    def __hash__(self):
        c = self.canonical()
        return hash((c.numerator, c.dens, c.residual))

    def __add__(self, other):
        return combine("add", self, _as_rational(other))

    __radd__ = __add__

    def __sub__(self, other):
        return combine("sub", self, _as_rational(other))

    def __rsub__(self, other):
        return combine("sub", _as_rational(other), self)

    def __mul__(self, other):
        return combine("mul", self, _as_rational(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return combine("div", self, _as_rational(other))

    def __neg__(self):
        return HilbertRational(-self.numerator, self.dens, self.residual, self.canonical_form)

    def shift(self, a):
        """Multiply by ``t^a``."""
        return HilbertRational(self.numerator.shift(a), self.dens, self.residual, self.canonical_form)

    def __repr__(self):
        return f"HilbertRational({format_rational(self)!r})"

    def __str__(self):
        return format_rational(self)


def _as_rational(x):
    if isinstance(x, HilbertRational):
        return x
    if isinstance(x, LaurentPolynomial):
        return HilbertRational(x)
    if isinstance(x, (int, Fraction)):
        return HilbertRational.constant(x)
    raise TypeError(f"cannot treat {type(x).__name__} as a rational function")


def _canonicalize(p, q):
    if q.is_zero():
        raise ZeroDivisionError("rational function with zero denominator")
    if p.is_zero():
        return HilbertRational(LaurentPolynomial(), (), None, True)
    a, pd = _dense_parts(p)
    b, qd = _dense_parts(q)
    g = _pgcd(pd, qd)
    if len(g) > 1:
        pd, _ = _pdivmod(pd, g)
        qd, _ = _pdivmod(qd, g)
    dens = []
    for d in range(len(qd) - 1, 0, -1):
        factor = [Fraction(1)] + [Fraction(0)] * (d - 1) + [Fraction(-1)]
        while len(qd) > d:
            quo, rem = _pdivmod(qd, factor)
            if rem:
                break
            dens.append(d)
            qd = quo
    c0 = qd[0]
    numerator = LaurentPolynomial.from_dense([x / c0 for x in pd], a - b)
    residual = LaurentPolynomial.from_dense([x / c0 for x in qd])
    return HilbertRational(numerator, dens, residual, True)


def combine(op, f, g):
    """Exact ``f op g`` for ``op`` in add, sub, mul, div; result in canonical form."""
    p1, q1 = f.expanded()
    p2, q2 = g.expanded()
    if op == "add":
        return _canonicalize(p1 * q2 + p2 * q1, q1 * q2)
    if op == "sub":
        return _canonicalize(p1 * q2 - p2 * q1, q1 * q2)
    if op == "mul":
        return _canonicalize(p1 * p2, q1 * q2)
    if op == "div":
        if p2.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return _canonicalize(p1 * q2, q1 * p2)
    raise ValueError(f"unknown operation {op!r}")


def equal(f, g):
    """Decide ``f == g`` by cross-multiplying expanded numerators and denominators."""
    p1, q1 = f.expanded()
    p2, q2 = g.expanded()
    return p1 * q2 == p2 * q1


def invert_variable(f):
    """Substitute ``t -> 1/t`` and return the result in Hilbert shape."""
    num = f.numerator.substitute_inverse()
    # 1/(1 - t^-d) = -t^d / (1 - t^d)
    for d in f.dens:
        num = (-num).shift(d)
    res = f.residual.substitute_inverse()
    lo, dense = res.dense()
    c0 = dense[0]
    # res(1/t) = t^lo * dense(t) with lo = -deg(residual)
    num = num.shift(-lo).scale(1 / c0)
    residual = LaurentPolynomial.from_dense([x / c0 for x in dense])
    return HilbertRational(num, f.dens, residual, f.canonical_form)


# --- Laurent expansions --------------------------------------------------------

class Center(enum.Enum):
    ZERO = "0"
    ONE = "1"
    INFINITY = "inf"

    @classmethod
    def parse(cls, text):
        text = str(text).strip().lower()
        for c in cls:
            if text in (c.value, c.name.lower()):
                return c
        if text in ("infty", "oo", "∞"):
            return cls.INFINITY
        raise ValueError(f"unknown expansion center {text!r}")


@dataclass(frozen=True)
class LaurentExpansion:
    """Truncated Laurent series ``sum_j coefficients[j - order] * u^j``.

    ``u`` is ``t`` at 0, ``1 - t`` at 1 and ``1/t`` at infinity.  ``order`` is
    None for the zero series; coefficients are then all zero.
    """

    center: Center
    order: object
    coefficients: tuple

    @property
    def terms(self):
        return len(self.coefficients)

    @property
    def precision(self):
        """First exponent not covered by the stored coefficients."""
        if self.order is None:
            return math.inf
        return self.order + len(self.coefficients)

    def is_zero(self):
        return self.order is None

    def coefficient(self, j):
        if self.order is None:
            return Fraction(0)
        if j < self.order:
            return Fraction(0)
        if j >= self.precision:
            raise IndexError(f"coefficient {j} lies beyond the truncation at {self.precision}")
        return self.coefficients[j - self.order]

    def truncate(self, precision):
        """Keep only exponents below ``precision``."""
        if self.order is None:
            return self
        keep = max(0, min(len(self.coefficients), precision - self.order))
        return LaurentExpansion(self.center, self.order, self.coefficients[:keep])

    def __mul__(self, other):
        if self.center != other.center:
            raise ValueError("expansions around different centers")
        if self.order is None or other.order is None:
            return LaurentExpansion(self.center, None, ())
        n = min(self.terms, other.terms)
        a, b = self.coefficients, other.coefficients
        out = tuple(sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(n))
        return LaurentExpansion(self.center, self.order + other.order, out)

    def __add__(self, other):
        if self.center != other.center:
            raise ValueError("expansions around different centers")
        if self.order is None:
            return other
        if other.order is None:
            return self
        lo = min(self.order, other.order)
        hi = min(self.precision, other.precision)
        coeffs = [self.coefficient(j) + other.coefficient(j) for j in range(lo, hi)]
        return _normalize_expansion(self.center, lo, coeffs)

    def __neg__(self):
        return LaurentExpansion(self.center, self.order, tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        return self + (-other)

    def agrees_with(self, other, precision):
        """Coefficientwise equality for all exponents below ``precision``."""
        lo = min(x for x in (self.order, other.order, precision) if x is not None)
        return all(self.coefficient(j) == other.coefficient(j) for j in range(lo, precision))

    def __str__(self):
        if self.order is None:
            return "0"
        var = {Center.ZERO: "t", Center.ONE: "(1-t)", Center.INFINITY: "t"}[self.center]
        parts = []
        for k, c in enumerate(self.coefficients):
            if not c:
                continue
            j = self.order + k
            e = -j if self.center is Center.INFINITY else j
            mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
            parts.append(_signed_term(c, mono))
        return _join_terms(parts) + f" + O({var}^{(-self.precision if self.center is Center.INFINITY else self.precision)})"


def _normalize_expansion(center, order, coeffs):
    coeffs = list(coeffs)
    k = 0
    while k < len(coeffs) and not coeffs[k]:
        k += 1
    if k == len(coeffs):
        return LaurentExpansion(center, None, ())
    return LaurentExpansion(center, order + k, tuple(coeffs[k:]))


def _series_quotient(num, den, terms):
    """First ``terms`` coefficients and order of ``num(s)/den(s)`` at ``s = 0``."""
    num, den = _trim(num), _trim(den)
    if not num:
        return None, ()
    u = next(i for i, c in enumerate(num) if c)
    v = next(i for i, c in enumerate(den) if c)
    a, b = num[u:], den[v:]
    out = []
    for k in range(terms):
        s = a[k] if k < len(a) else Fraction(0)
        for i in range(1, min(k, len(b) - 1) + 1):
            s -= b[i] * out[k - i]
        out.append(s / b[0])
    return u - v, tuple(out)


def _shifted_one_minus(p):
    """``p(t)`` at ``t = 1 - s`` as ``(num_s, den_s)`` dense polynomials in s."""
    a, dense = _dense_parts(p)
    body = _compose_one_minus(dense)
    power = _compose_one_minus([Fraction(0)] * abs(a) + [Fraction(1)]) if a else [Fraction(1)]
    if a >= 0:
        return _pmul(body, power), [Fraction(1)]
    return body, power


def expand_fraction(p, q, center, terms=DEFAULT_TERMS):
    """Laurent expansion of ``p/q`` (Laurent polynomials) at ``center``."""
    center = Center.parse(center.value if isinstance(center, Center) else center)
    if q.is_zero():
        raise ZeroDivisionError("zero denominator")
    if p.is_zero():
        return LaurentExpansion(center, None, ())
    if center is Center.ZERO:
        a, pd = _dense_parts(p)
        b, qd = _dense_parts(q)
        order, coeffs = _series_quotient(pd, qd, terms)
        return LaurentExpansion(center, order + a - b, coeffs)
    if center is Center.INFINITY:
        e = expand_fraction(p.substitute_inverse(), q.substitute_inverse(), Center.ZERO, terms)
        return LaurentExpansion(center, e.order, e.coefficients)
    pn, pd = _shifted_one_minus(p)
    qn, qd = _shifted_one_minus(q)
    order, coeffs = _series_quotient(_pmul(pn, qd), _pmul(qn, pd), terms)
    return LaurentExpansion(center, order, coeffs)


def laurent_expand(f, center, terms=DEFAULT_TERMS):
    """Expansion of ``f`` around ``center`` starting at its true order."""
    p, q = f.expanded()
    return expand_fraction(p, q, center, terms)


def expansion_order(e):
    """Order of an expansion; ``math.inf`` for the zero series."""
    return math.inf if e.order is None else e.order


def pole_order(f, center=Center.ONE):
    """Order of the pole of ``f`` at ``center`` (negated expansion order)."""
    e = laurent_expand(f, center, 1)
    return -e.order if e.order is not None else -math.inf


# --- text format ----------------------------------------------------------------

def _format_coeff(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _signed_term(c, mono):
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if not mono:
        body = _format_coeff(a)
    elif a == 1:
        body = mono
    else:
        body = f"{_format_coeff(a)}*{mono}"
    return sign, body


def _join_terms(parts):
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def format_laurent(p):
    parts = []
    for e, c in p.items():
        mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
        parts.append(_signed_term(c, mono))
    return _join_terms(parts)


def format_rational(f):
    """Render as ``(<numerator>) / (1-t^d1)(1-t^d2)...``."""
    factors = []
    seen = []
    for d in f.dens:
        if d not in seen:
            seen.append(d)
    for d in seen:
        k = f.dens.count(d)
        base = "(1-t)" if d == 1 else f"(1-t^{d})"
        factors.append(base if k == 1 else f"{base}^{k}")
    if f.residual != 1:
        factors.append(f"({format_laurent(f.residual)})")
    den = "".join(factors) if factors else "1"
    return f"({format_laurent(f.numerator)}) / {den}"


_JUXTAPOSED = re.compile(r"(\d)\s*(?=[t(])")


def parse_laurent(text):
    # formatted output writes coefficients next to the variable, as in 3t^2
    return evaluate(_JUXTAPOSED.sub(r"\1*", text), {"t": T}, LaurentPolynomial.constant)


_HILBERT_FACTOR = re.compile(r"^1\s*-\s*t(?:\s*\^\s*(\d+))?$")


def _split_groups(text):
    """Split ``(a)(b)^2...`` into ``[(a, 1), (b, 2)]``."""
    groups = []
    i = 0
    text = text.strip()
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        if text[i] != "(":
            raise ExprError(f"expected '(' in {text!r}", i)
        depth = 0
        j = i
        while j < len(text):
            if text[j] == "(":
                depth += 1
            elif text[j] == ")":
                depth -= 1
                if depth == 0:
                    break
            j += 1
        if depth:
            raise ExprError(f"unbalanced parentheses in {text!r}", i)
        inner = text[i + 1:j]
        j += 1
        k = 1
        m = re.match(r"\s*\^\s*(\d+)", text[j:])
        if m:
            k = int(m.group(1))
            j += m.end()
        groups.append((inner, k))
        i = j
    return groups


def parse_rational(text):
    """Inverse of :func:`format_rational`."""
    text = text.strip()
    # numerator is the first balanced group; the rest follows a top-level '/'
    if not text.startswith("("):
        raise ExprError("rational function must start with '('", 0)
    depth = 0
    for idx, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                break
    numerator = parse_laurent(text[1:idx])
    rest = text[idx + 1:].strip()
    if not rest.startswith("/"):
        raise ExprError("expected '/' after the numerator", idx + 1)
    rest = rest[1:].strip()
    dens = []
    residual = LaurentPolynomial.constant(1)
    if rest != "1":
        for inner, k in _split_groups(rest):
            m = _HILBERT_FACTOR.match(inner.strip())
            if m:
                dens.extend([int(m.group(1) or 1)] * k)
            else:
                residual = residual * parse_laurent(inner) ** k
    lo, dense = residual.dense()
    if lo != 0 or not dense or dense[0] != 1:
        return HilbertRational.from_fraction(numerator, residual * HilbertRational(1, dens).expanded()[1])
    return HilbertRational(numerator, dens, residual)
