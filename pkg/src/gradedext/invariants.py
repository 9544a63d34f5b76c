"""Laurent coefficients, Euler-type sums of Ext, and verification reports.

Everything here is exact.  ``f^j(M)`` is the coefficient of ``1/(1-t)^(d-j)``
in the expansion of ``H_M`` at ``t = 1``, with ``d`` the dimension of the ring.
"""

import json
from dataclasses import dataclass
from fractions import Fraction

from .homalg import (
    ComputationFault,
    ext_table,
    krull_dimension,
    laurent_coefficient_list,
    module_hilbert,
    rank_over_domain,
    ring_hilbert,
)
from .polyring import ModulePresentation, RingPresentation
from .ratfun import (
    Center,
    HilbertRational,
    LaurentPolynomial,
    format_laurent,
    format_rational,
    invert_variable,
    laurent_expand,
    one_minus_t_power,
)

HOLDS = "holds"
FAILS = "fails"
NOT_CERTIFIED = "hypothesis-not-certified"

EXACT = "exact"
FINITE_LENGTH = "finite-length"
PERIODIC = "periodic"
MODES = (EXACT, FINITE_LENGTH, PERIODIC)


def ring_dimension(R):
    """Pole order of ``H_R`` at ``t = 1``."""
    return krull_dimension(ring_hilbert(R))


def module_dimension(M):
    return krull_dimension(module_hilbert(M))


# --- Laurent coefficients -----------------------------------------------------

@dataclass(frozen=True)
class LaurentCoefficientVector:
    ring_dimension: int
    coefficients: tuple

    def __getitem__(self, j):
        if j < 0:
            return Fraction(0)
        if j >= len(self.coefficients):
            raise IndexError(f"f^{j} not computed (have {len(self.coefficients)})")
        return self.coefficients[j]

    def __len__(self):
        return len(self.coefficients)

    def principal_part(self):
        """``sum_j f^j / (1-t)^(d-j)`` over the stored ``j < d``."""
        d = self.ring_dimension
        total = HilbertRational(0)
        for j, c in enumerate(self.coefficients[:d]):
            total = total + HilbertRational(LaurentPolynomial.constant(c), (1,) * (d - j))
        return total


def coefficients_of(h, d, count):
    """``LaurentCoefficientVector`` of a Hilbert series ``h`` relative to dimension ``d``."""
    return LaurentCoefficientVector(d, tuple(laurent_coefficient_list(h, d, count)))


def laurent_coeffs(M, count, d=None):
    """``f^0(M), ..., f^count(M)`` over the ring of ``M``."""
    d = ring_dimension(M.ring) if d is None else d
    return coefficients_of(module_hilbert(M), d, count)


@dataclass(frozen=True)
class MultiplicityData:
    e: LaurentPolynomial
    n: int
    e1: int

    def __str__(self):
        return f"e(t) = {format_laurent(self.e)}, dim = {self.n}, multiplicity = {self.e1}"


def multiplicity_from_series(h):
    n = krull_dimension(h)
    if n < 0:
        raise ValueError("the zero module has no multiplicity")
    e = (h * HilbertRational(one_minus_t_power(1) ** n)).canonical()
    if not e.is_laurent_polynomial():
        raise ComputationFault(f"{format_rational(h)} times (1-t)^{n} is not a Laurent polynomial")
    poly = e.as_laurent_polynomial()
    value = poly(1)
    if value <= 0 or Fraction(value).denominator != 1:
        raise ComputationFault(f"multiplicity {value} is not a positive integer")
    return MultiplicityData(poly, n, int(value))


def multiplicity_poly(N):
    """``e_N(t)`` and ``n = dim N`` with ``H_N = e_N / (1-t)^n``; standard grading only."""
    if not N.ring.ambient.is_standard():
        raise ValueError("multiplicity polynomial needs a ring generated in degree 1")
    return multiplicity_from_series(module_hilbert(N))


# --- phi and chi -------------------------------------------------------------

def phi_series(hM, hN, hR):
    return (invert_variable(hM) * hN / invert_variable(hR)).canonical()


def chi_series(hM, hN, hR):
    return (hM * hN / hR).canonical()


def phi(M, N):
    """``H_M(1/t) H_N(t) / H_R(1/t)``."""
    return phi_series(module_hilbert(M), module_hilbert(N), ring_hilbert(M.ring))


def chi(M, N):
    """``H_M(t) H_N(t) / H_R(t)``."""
    return chi_series(module_hilbert(M), module_hilbert(N), ring_hilbert(M.ring))


# --- epsilon and agreement ------------------------------------------------------

@dataclass(frozen=True)
class EpsilonVector:
    values: tuple
    ext_table: object

    def __getitem__(self, j):
        return self.values[j]


def _require(ext, j):
    if not ext.covers(j):
        raise ValueError(f"Ext table covers 0..{ext.computed_through}; index {j} needed")


def epsilon(M, N, j, ext, d=None):
    """``sum_{i<=j} (-1)^i f^j(Ext^i(M, N))``."""
    if j < 0:
        return Fraction(0)
    for i in range(j + 1):
        _require(ext, i)
    d = ring_dimension(M.ring) if d is None else d
    total = Fraction(0)
    for i in range(j + 1):
        f = coefficients_of(ext[i], d, j)[j]
        total += f if i % 2 == 0 else -f
    return total


def epsilon_vector(M, N, count, ext):
    d = ring_dimension(M.ring)
    return EpsilonVector(tuple(epsilon(M, N, j, ext, d) for j in range(count + 1)), ext)


def phi_coefficients(M, N, count):
    return coefficients_of(phi(M, N), ring_dimension(M.ring), count)


def agreement_level(M, N, ext, max_level):
    """Largest ``n <= max_level`` with ``eps^j = phi^j`` for all ``j <= n``.

    Returns ``max_level + 1`` when every level through ``max_level`` agrees
    and ``-1`` when already level 0 differs.
    """
    d = ring_dimension(M.ring)
    ph = coefficients_of(phi(M, N), d, max_level)
    for j in range(max_level + 1):
        if epsilon(M, N, j, ext, d) != ph[j]:
            return j - 1
    return max_level + 1


# --- reports -----------------------------------------------------------------

def _render_value(v):
    if isinstance(v, HilbertRational):
        return format_rational(v.canonical())
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return str(v)


@dataclass(frozen=True)
class VerificationReport:
    identity: str
    lhs: object
    rhs: object
    verdict: str
    hypotheses: tuple = ()
    caveats: tuple = ()
    details: tuple = ()

    @property
    def holds(self):
        return self.verdict == HOLDS

    def as_dict(self):
        return {
            "identity": self.identity,
            "lhs": _render_value(self.lhs),
            "rhs": _render_value(self.rhs),
            "verdict": self.verdict,
            "hypotheses": list(self.hypotheses),
            "caveats": list(self.caveats),
            "details": [[k, _render_value(v)] for k, v in self.details],
        }

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False)

    def __str__(self):
        lines = [
            f"identity: {self.identity}",
            f"lhs: {_render_value(self.lhs)}",
            f"rhs: {_render_value(self.rhs)}",
            f"verdict: {self.verdict}",
        ]
        if self.hypotheses:
            lines.append("hypotheses (asserted, not checked): " + ", ".join(self.hypotheses))
        for k, v in self.details:
            lines.append(f"{k}: {_render_value(v)}")
        for c in self.caveats:
            lines.append(f"caveat: {c}")
        return "\n".join(lines)


def _verdict(lhs, rhs):
    return HOLDS if lhs == rhs else FAILS


# --- Euler characteristic of Ext ------------------------------------------------

def detect_period(ext, max_period=4):
    """Find ``(start, period, shift)`` with ``H_{i+period} = t^-shift H_i`` on the computed tail.

    The relation must be observed on at least one full period beyond ``start``.
    Returns None when no such pattern is visible.
    """
    top = ext.computed_through
    for start in range(top + 1):
        for period in range(1, max_period + 1):
            if start + 2 * period - 1 > top:
                continue
            shift = None
            ok = True
            for i in range(start, top - period + 1):
                a, b = ext[i], ext[i + period]
                if a.is_zero() and b.is_zero():
                    continue
                if a.is_zero() or b.is_zero():
                    ok = False
                    break
                q = (a / b).canonical()
                if not q.is_laurent_polynomial() or not q.as_laurent_polynomial().is_monomial():
                    ok = False
                    break
                ((e, c),) = q.as_laurent_polynomial().items()
                if c != 1 or (shift is not None and shift != e):
                    ok = False
                    break
                shift = e
            if ok:
                return start, period, 0 if shift is None else shift
    return None


def periodic_sum(ext, pattern):
    """``sum_i (-1)^i H_{Ext^i}`` with the tail extended along ``pattern``."""
    start, period, shift = pattern
    head = HilbertRational(0)
    for i in range(start):
        head = head + (ext[i] if i % 2 == 0 else -ext[i])
    block = HilbertRational(0)
    for i in range(start, start + period):
        block = block + (ext[i] if i % 2 == 0 else -ext[i])
    sign = -1 if period % 2 else 1
    # one period multiplies by sign * t^-shift
    ratio = LaurentPolynomial.constant(1) - LaurentPolynomial.monomial(-shift, sign)
    if ratio.is_zero():
        raise ValueError("the periodic tail does not converge to a rational function")
    return (head + block / HilbertRational(ratio)).canonical()


def _finite_length(h):
    return h.is_laurent_polynomial()


def _infinity_agreement(partial, target, trunc):
    """Compare coefficients of ``t^-j`` for ``0 <= j <= trunc``."""
    a = laurent_expand(partial, Center.INFINITY, trunc + 40)
    b = laurent_expand(target, Center.INFINITY, trunc + 40)
    low = min(x for x in (a.order, b.order, 0) if x is not None)
    mismatch = [j for j in range(low, trunc + 1) if a.coefficient(j) != b.coefficient(j)]
    return mismatch


def check_theorem1(M, N, ext=None, mode=None, max_i=6, trunc=8):
    """Compare ``sum_i (-1)^i H_{Ext^i(M,N)}`` with ``phi(M, N)``.

    ``mode`` is ``exact`` (needs a resolution known to stop), ``finite-length``
    (compare expansions at infinity through ``trunc``) or ``periodic`` (extend
    a visible periodic tail; heuristic).
    """
    if ext is None:
        ext = ext_table(M, N, max_i)
    target = phi(M, N)
    label = "theorem1"
    if mode is None:
        if ext.vanishing_certified:
            mode = EXACT
        else:
            raise ValueError("Ext does not provably vanish beyond the table; choose a mode")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == EXACT:
        if not ext.vanishing_certified:
            return VerificationReport(label, ext.alternating_sum(), target, NOT_CERTIFIED,
                                      caveats=("resolution not known to terminate; the sum is partial",))
        if ext.projective_dimension > ext.computed_through:
            ext = ext_table(M, N, ext.projective_dimension)
        total = ext.alternating_sum()
        return VerificationReport(label, total, target, _verdict(total, target), details=(("mode", mode),))
    if mode == FINITE_LENGTH:
        if not _finite_length(module_hilbert(N)):
            raise ValueError(f"{N.name} does not have finite length")
        total = ext.alternating_sum(ext.computed_through)
        mismatch = _infinity_agreement(total, target, trunc)
        verdict = HOLDS if not mismatch else FAILS
        return VerificationReport(
            label, total, target, verdict,
            caveats=(f"expansions at infinity compared through t^-{trunc} only",),
            details=(("mode", mode), ("max_i", ext.computed_through),
                     ("first mismatch", mismatch[0] if mismatch else "none")))
    pattern = detect_period(ext)
    if pattern is None:
        return VerificationReport(label, ext.alternating_sum(), target, NOT_CERTIFIED,
                                  caveats=("no periodic tail visible in the computed table",))
    total = periodic_sum(ext, pattern)
    start, period, shift = pattern
    caveats = (
        "heuristic: the tail is extrapolated from the computed range",
        "infinitely many Ext modules may be nonzero, so the finite-sum hypothesis is not met",
    )
    return VerificationReport(label, total, target, _verdict(total, target), caveats=caveats,
                              details=(("mode", mode), ("period", period), ("tail start", start),
                                       ("degree shift per period", shift)))


def check_prop2(M, N, max_i, trunc, ext=None):
    """Finite-length ``N``: Ext series are Laurent polynomials and sums converge at infinity."""
    hN = module_hilbert(N)
    if not _finite_length(hN):
        raise ValueError(f"{N.name} does not have finite length")
    ext = ext if ext is not None else ext_table(M, N, max_i)
    orders = []
    for i in range(max_i + 1):
        h = ext[i]
        if not h.is_laurent_polynomial():
            raise ComputationFault(f"Ext^{i} is not a Laurent polynomial: {format_rational(h)}")
        e = laurent_expand(h, Center.INFINITY, 1)
        orders.append(e.order)
    nondecreasing_from = _nondecreasing_from(orders)
    total = ext.alternating_sum(max_i)
    target = phi(M, N)
    mismatch = _infinity_agreement(total, target, trunc)
    verdict = HOLDS if not mismatch else FAILS
    shown = ", ".join("-" if o is None else str(o) for o in orders)
    return VerificationReport(
        "prop2", total, target, verdict,
        caveats=(f"partial sum through Ext^{max_i}; compared through t^-{trunc}",),
        details=(("orders at infinity", shown), ("non-decreasing from index", nondecreasing_from),
                 ("first mismatch", mismatch[0] if mismatch else "none")))


def _nondecreasing_from(orders):
    """First index after which the nonzero orders never decrease."""
    start = 0
    last = None
    for i, o in enumerate(orders):
        if o is None:
            continue
        if last is not None and o < last:
            start = i
        last = o
    return start


# --- displayed identities --------------------------------------------------------

IDENTITIES = ("4.0", "4.1", "4.2", "6.1", "6.2", "BC1")

_NEEDS = {
    "4.0": "unique minimal prime with a field as localization",
    "4.1": "domain, regular in codimension 1",
    "4.2": "factorial domain, regular in codimension 2",
    "6.1": "domain, Gorenstein in codimension 1",
    "6.2": "factorial domain",
    "BC1": "normal domain",
}


def check_identity(M, N, which, ext=None, hypotheses=()):
    """Evaluate both sides of one of the numerical identities among Laurent coefficients.

    For ``6.1`` and ``6.2`` the second module is the ring itself and ``N`` is ignored.
    """
    if which not in IDENTITIES:
        raise ValueError(f"unknown identity {which!r}; choose from {', '.join(IDENTITIES)}")
    R = M.ring
    if which in ("6.1", "6.2"):
        N = ModulePresentation.free(R, (0,), name="R")
    d = ring_dimension(R)
    need = 2
    if ext is None:
        ext = ext_table(M, N, need)
    for i in range(need + 1):
        _require(ext, i)
    fR = coefficients_of(ring_hilbert(R), d, 2)
    fM = laurent_coeffs(M, 2, d)
    fN = laurent_coeffs(N, 2, d)
    fE = [coefficients_of(ext[i], d, 2) for i in range(need + 1)]
    eps = [epsilon(M, N, j, ext, d) for j in range(3)]
    caveats = [f"identity expected under: {_NEEDS[which]}"]
    if which == "4.0":
        lhs = fR[0] * eps[0]
        rhs = fM[0] * fN[0]
    elif which == "4.1":
        lhs = fR[0] * eps[1] - fR[1] * eps[0]
        rhs = fM[0] * fN[1] - fM[1] * fN[0]
    elif which == "4.2":
        lhs = fR[0] * eps[2] - fR[1] * eps[1] + (fR[2] - fR[1]) * eps[0]
        rhs = fM[0] * fN[2] - fM[1] * fN[1] + (fM[2] - fM[1]) * fN[0]
    else:
        rank_m = rank_over_domain(M)
        caveats.append("ranks computed as f^0(M)/f^0(R), valid over a domain")
        if which == "6.1":
            lhs = fE[0][1] - fE[1][1]
            rhs = 2 * fR[1] * rank_m - fM[1]
        elif which == "6.2":
            lhs = fE[0][2] - fE[1][2] + fE[2][2]
            rhs = (1 + 2 * fR[1] / fR[0]) * (fR[1] * rank_m - fM[1]) + fM[2]
        else:
            rank_n = rank_over_domain(N)
            lhs = fE[0][1] - fE[1][1]
            rhs = rank_m * rank_n * fR[1] + rank_m * fN[1] - rank_n * fM[1]
    return VerificationReport(which, Fraction(lhs), Fraction(rhs), _verdict(lhs, rhs),
                              hypotheses=tuple(hypotheses), caveats=tuple(caveats))


# --- Bass number bounds --------------------------------------------------------

Q_CAVEAT = ("q uses the divisor 1 + t + ... + t^(p^r - 1); the upper limit p^r read literally "
            "would contradict the p = 2, q = 1 case when -1 is not a root")


@dataclass(frozen=True)
class PowerBound:
    """``base ** exponent`` with an exact rational exponent."""

    base: int
    exponent: Fraction

    @property
    def is_integral(self):
        return self.exponent.denominator == 1

    def value(self):
        if not self.is_integral:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.base) ** int(self.exponent)

    def ceiling(self):
        """Least integer ``>=`` the bound."""
        if self.is_integral:
            v = self.value()
            return -((-v.numerator) // v.denominator)
        num, den = self.exponent.numerator, self.exponent.denominator
        # smallest m with m^den >= base^num
        target = Fraction(self.base) ** num
        m = 0
        while Fraction(m) ** den < target:
            m += 1
        return m

    def __str__(self):
        e = self.exponent
        shown = str(e.numerator) if e.denominator == 1 else f"({e.numerator}/{e.denominator})"
        return f"{self.base}^{shown}"


@dataclass(frozen=True)
class BassBound:
    divisible: bool
    q: object
    bound: object
    quotient: object
    caveats: tuple = (Q_CAVEAT,)

    def __iter__(self):
        return iter((self.divisible, self.q, self.bound))

    def __str__(self):
        lines = [f"divisible: {'yes' if self.divisible else 'no'}"]
        if self.divisible:
            lines.append(f"quotient: {format_laurent(self.quotient)}")
            lines.append(f"q: {self.q}")
            lines.append(f"bound: sum of Bass numbers >= {self.bound}")
        lines.extend(f"caveat: {c}" for c in self.caveats)
        return "\n".join(lines)


def _geometric(k):
    return LaurentPolynomial({s: 1 for s in range(k)})


def bass_bound(eN, eR, p, d, n):
    """Divisibility of ``e_N(t)`` by ``e_R(1/t)`` and the resulting lower bound."""
    if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    if not d >= n >= 0:
        raise ValueError(f"need d >= n >= 0, got d = {d}, n = {n}")
    quotient = eN.exact_divide(eR.substitute_inverse())
    if quotient is None or not quotient.is_integral():
        return BassBound(False, None, None, None)
    q = 1
    while True:
        nxt = q * p
        div = quotient.exact_divide(_geometric(nxt))
        if div is None or not div.is_integral():
            break
        q = nxt
    exponent = Fraction(d - n + q - 1, q * (p - 1))
    return BassBound(True, q, PowerBound(p, exponent), quotient)


def bass_bound_for(N, p=2):
    """``bass_bound`` with multiplicity data read off ``N`` and its ring."""
    mN = multiplicity_poly(N)
    mR = multiplicity_poly(ModulePresentation.free(N.ring, (0,), name="R"))
    return bass_bound(mN.e, mR.e, p, mR.n, mN.n)


# --- canonical module --------------------------------------------------------------

def _ring_as_module(R):
    """``R = Q/I`` as a cyclic module over its ambient polynomial ring."""
    return ModulePresentation.cyclic(RingPresentation.polynomial(R.ambient), R.relations, 0, R.name)


@dataclass(frozen=True)
class CanonicalCheck:
    series: HilbertRational
    verified: object
    notes: tuple


def canonical_hilbert(R, verify=False):
    """``(-1)^d H_R(1/t)``; with ``verify`` also compared to ``Ext^(e-d)_Q(R, W)``."""
    d = ring_dimension(R)
    hR = ring_hilbert(R)
    series = (invert_variable(hR) * HilbertRational(LaurentPolynomial.constant((-1) ** d))).canonical()
    if not verify:
        return series
    return CanonicalCheck(series, *_verify_canonical(R, d, series))


def _verify_canonical(R, d, series):
    spec = R.ambient
    e = spec.nvars
    Q = RingPresentation.polynomial(spec)
    W = ModulePresentation.free(Q, (sum(spec.weights),), name="W")
    notes = []
    ok = True
    A = _ring_as_module(R)
    table = ext_table(A, W, e)
    for i in range(e + 1):
        h = table[i]
        if i == e - d:
            if h != series:
                ok = False
                notes.append(f"Ext^{i}_Q(R, W) = {format_rational(h)} differs from {format_rational(series)}")
        elif not h.is_zero():
            notes.append(f"Ext^{i}_Q(R, W) = {format_rational(h)} is nonzero (ring not Cohen-Macaulay?)")
            ok = False
    dual = (invert_variable(ring_hilbert(R)) * HilbertRational(LaurentPolynomial.constant((-1) ** e))).canonical()
    if table.alternating_sum(e) != dual:
        ok = False
        notes.append("alternating sum of Ext_Q(R, W) does not match (-1)^e H_R(1/t)")
    for b in (-1, 0, 2):
        F = ModulePresentation.free(Q, (-b,), name=f"Q({b})")
        t2 = ext_table(F, W, e)
        want = module_hilbert(ModulePresentation.free(Q, (b + sum(spec.weights),)))
        if t2[0] != want or any(not t2[i].is_zero() for i in range(1, e + 1)):
            ok = False
            notes.append(f"Ext_Q(Q({b}), W) is not concentrated in degree 0 as Q({-b - sum(spec.weights)})")
    return ok, tuple(notes)
