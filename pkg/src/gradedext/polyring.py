"""Weighted polynomial rings, graded free modules, graded matrices and presentations.

Coefficients are ``gmpy2.mpq`` over the rationals and plain ints modulo ``p``
over a prime field.  Everything here is immutable.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2

from ._expr import evaluate
from .ratfun import HilbertRational, LaurentPolynomial

INHOMOGENEOUS = "inhomogeneous"


class HomogeneityError(ValueError):
    pass


@dataclass(frozen=True)
class Field:
    """The rationals (``p is None``) or the prime field with ``p`` elements."""

    p: object = None

    def __call__(self, x):
        if self.p is None:
            if isinstance(x, Fraction):
                return gmpy2.mpq(x.numerator, x.denominator)
            return gmpy2.mpq(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.p is None:
            return 1 / x
        return pow(int(x), -1, self.p)

    def to_fraction(self, x):
        if self.p is None:
            return Fraction(int(x.numerator), int(x.denominator))
        return Fraction(int(x))

    def __str__(self):
        return "QQ" if self.p is None else f"GF({self.p})"


QQ = Field()


@dataclass(frozen=True)
class WeightedRingSpec:
    """``K[X_1..X_e]`` with ``deg X_j = weights[j]``."""

    variables: tuple
    weights: tuple
    field: Field = QQ

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.variables) != len(self.weights):
            raise ValueError("one weight per variable is required")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"variable names must be distinct: {self.variables}")
        if any(w < 1 for w in self.weights):
            raise ValueError(f"weights must be positive: {self.weights}")

    @classmethod
    def standard(cls, variables, field=QQ):
        if isinstance(variables, str):
            variables = variables.split()
        return cls(tuple(variables), (1,) * len(variables), field)

    @property
    def nvars(self):
        return len(self.variables)

    def is_standard(self):
        return all(w == 1 for w in self.weights)

    def mono_degree(self, exps):
        return sum(w * e for w, e in zip(self.weights, exps))

    def zero(self):
        return MultiPoly(self, {})

    def one(self):
        return self.constant(1)

    def constant(self, c):
        return MultiPoly(self, {(0,) * self.nvars: self.field(c)})

    def monomial(self, exps, c=1):
        return MultiPoly(self, {tuple(exps): self.field(c)})

    def var(self, name):
        i = self.variables.index(name)
        exps = [0] * self.nvars
        exps[i] = 1
        return self.monomial(exps)

    def gens(self):
        return [self.var(v) for v in self.variables]

    def poly(self, text):
        """Parse a polynomial such as ``"x*v - y*u"``."""
        names = {v: self.var(v) for v in self.variables}
        return evaluate(text, names, self.constant)

    def __str__(self):
        vs = ", ".join(f"{v}:{w}" for v, w in zip(self.variables, self.weights))
        return f"poly(field: {self.field}; vars: {vs})"


class MultiPoly:
    """Sparse polynomial ``{exponent tuple: coefficient}`` in a :class:`WeightedRingSpec`."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction)) or type(other) is type(gmpy2.mpq()):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.ring.field.p
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            t[e] = v % p if p else v
        return MultiPoly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.p
        return MultiPoly(self.ring, {e: (-c) % p if p else -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.ring.field.p
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        if p:
            t = {e: c % p for e, c in t.items()}
        return MultiPoly(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers of polynomials are not polynomials")
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c):
        c = self.ring.field(c) if not isinstance(c, type(gmpy2.mpq())) else c
        return self * self.ring.constant(c)

    def degrees(self):
        return {self.ring.mono_degree(e) for e in self.terms}

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, 0)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r})"


def weighted_degree(p, spec=None):
    """Common weighted degree of the monomials of ``p`` or :data:`INHOMOGENEOUS`."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no degree")
    degs = p.degrees() if spec is None else {spec.mono_degree(e) for e in p.terms}
    if len(degs) != 1:
        return INHOMOGENEOUS
    return degs.pop()


def _mono_key(ring, e):
    return (ring.mono_degree(e), tuple(-x for x in reversed(e)))


def format_poly(p):
    if p.is_zero():
        return "0"
    ring = p.ring
    out = ""
    for e in sorted(p.terms, key=lambda e: _mono_key(ring, e), reverse=True):
        c = ring.field.to_fraction(p.terms[e])
        factors = []
        for name, k in zip(ring.variables, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        mono = "*".join(factors)
        neg = c < 0
        a = -c if neg else c
        astr = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        if not mono:
            body = astr
        elif a == 1:
            body = mono
        else:
            body = f"{astr}*{mono}"
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


# --- graded free modules and matrices ---------------------------------------

@dataclass(frozen=True)
class GradedFreeModule:
    """``⊕_k Q(-a_k)``: generator ``k`` sits in degree ``degrees[k]``."""

    degrees: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(a) for a in self.degrees))

    @property
    def rank(self):
        return len(self.degrees)

    def __add__(self, other):
        return GradedFreeModule(self.degrees + other.degrees)


def free_hilbert(F, spec):
    """``sum_k t^{a_k} / prod_j (1 - t^{d_j})``."""
    degrees = F.degrees if isinstance(F, GradedFreeModule) else tuple(F)
    num = LaurentPolynomial()
    for a in degrees:
        num = num + LaurentPolynomial.monomial(a)
    return HilbertRational(num, spec.weights)


def format_twists(degrees, ring_name="R"):
    """``R(-2)^2 ⊕ R(-3)`` style rendering of generator degrees."""
    if not degrees:
        return "0"
    counts = {}
    for a in degrees:
        counts[a] = counts.get(a, 0) + 1
    parts = []
    for a in sorted(counts):
        base = ring_name if a == 0 else f"{ring_name}({-a})"
        parts.append(base if counts[a] == 1 else f"{base}^{counts[a]}")
    return " ⊕ ".join(parts)


class GradedMatrix:
    """Homogeneous map ``⊕ Q(-col_degrees) -> ⊕ Q(-row_degrees)``.

    Entry ``(i, j)`` is zero or homogeneous of degree
    ``col_degrees[j] - row_degrees[i]``.
    """

    __slots__ = ("ring", "entries", "row_degrees", "col_degrees")

    def __init__(self, ring, entries, row_degrees, col_degrees, check=True):
        self.ring = ring
        self.row_degrees = tuple(int(a) for a in row_degrees)
        self.col_degrees = tuple(int(a) for a in col_degrees)
        rows = []
        for row in entries:
            rows.append(tuple(x if isinstance(x, MultiPoly) else ring.constant(x) for x in row))
        if len(rows) != len(self.row_degrees):
            raise ValueError(f"{len(rows)} rows but {len(self.row_degrees)} row degrees")
        for row in rows:
            if len(row) != len(self.col_degrees):
                raise ValueError(f"row of length {len(row)} but {len(self.col_degrees)} column degrees")
        self.entries = tuple(rows)
        if check:
            self.check_homogeneous()

    def check_homogeneous(self):
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                if x.is_zero():
                    continue
                want = self.col_degrees[j] - self.row_degrees[i]
                got = weighted_degree(x)
                if got != want:
                    raise HomogeneityError(
                        f"entry ({i}, {j}) = {x} has degree {got}, expected {want}")

    @classmethod
    def zero(cls, ring, row_degrees, col_degrees):
        z = ring.zero()
        return cls(ring, [[z] * len(col_degrees) for _ in row_degrees], row_degrees, col_degrees, check=False)

    @classmethod
    def identity(cls, ring, degrees):
        n = len(degrees)
        rows = [[ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)]
        return cls(ring, rows, degrees, degrees, check=False)

    @classmethod
    def from_columns(cls, ring, columns, row_degrees, col_degrees):
        """``columns[j]`` maps row index to polynomial."""
        z = ring.zero()
        rows = [[columns[j].get(i, z) for j in range(len(columns))] for i in range(len(row_degrees))]
        return cls(ring, rows, row_degrees, col_degrees)

    @property
    def shape(self):
        return len(self.row_degrees), len(self.col_degrees)

    @property
    def source(self):
        return GradedFreeModule(self.col_degrees)

    @property
    def target(self):
        return GradedFreeModule(self.row_degrees)

    def column(self, j):
        return {i: row[j] for i, row in enumerate(self.entries) if not row[j].is_zero()}

    def columns(self):
        return [self.column(j) for j in range(len(self.col_degrees))]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other):
        """Composition ``self ∘ other``."""
        if self.col_degrees != other.row_degrees:
            raise ValueError("degree mismatch in composition")
        n, m = self.shape
        _, k = other.shape
        z = self.ring.zero()
        rows = []
        for i in range(n):
            row = []
            for j in range(k):
                acc = z
                for l in range(m):
                    a, b = self.entries[i][l], other.entries[l][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            rows.append(row)
        return GradedMatrix(self.ring, rows, self.row_degrees, other.col_degrees)

    def transpose(self):
        """Dual map ``Hom(target, Q) -> Hom(source, Q)``."""
        n, m = self.shape
        rows = [[self.entries[i][j] for i in range(n)] for j in range(m)]
        return GradedMatrix(self.ring, rows, [-a for a in self.col_degrees],
                            [-a for a in self.row_degrees], check=False)

    def twist(self, a):
        """Shift every row and column degree by ``-a`` (the ``a``-th translate)."""
        return GradedMatrix(self.ring, self.entries, [d - a for d in self.row_degrees],
                            [d - a for d in self.col_degrees], check=False)

    def delete(self, rows=(), cols=()):
        rows, cols = set(rows), set(cols)
        keep_r = [i for i in range(len(self.row_degrees)) if i not in rows]
        keep_c = [j for j in range(len(self.col_degrees)) if j not in cols]
        entries = [[self.entries[i][j] for j in keep_c] for i in keep_r]
        return GradedMatrix(self.ring, entries, [self.row_degrees[i] for i in keep_r],
                            [self.col_degrees[j] for j in keep_c], check=False)

    def is_zero(self):
        return all(x.is_zero() for row in self.entries for x in row)

    def __eq__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return (self.entries == other.entries and self.row_degrees == other.row_degrees
                and self.col_degrees == other.col_degrees)

    def __hash__(self):
        return hash((self.entries, self.row_degrees, self.col_degrees))

    def __str__(self):
        if not self.entries or not self.col_degrees:
            return f"0 ({len(self.row_degrees)}x{len(self.col_degrees)})"
        cells = [[format_poly(x) for x in row] for row in self.entries]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("| " + "  ".join(c.rjust(width) for c in row) + " |" for row in cells)

    def __repr__(self):
        return f"GradedMatrix({self.shape[0]}x{self.shape[1]}, rows={self.row_degrees}, cols={self.col_degrees})"


def block_diagonal(ring, blocks):
    rows, rdeg, cdeg = [], [], []
    total_cols = sum(b.shape[1] for b in blocks)
    z = ring.zero()
    offset = 0
    for b in blocks:
        n, m = b.shape
        for i in range(n):
            row = [z] * total_cols
            row[offset:offset + m] = b.entries[i]
            rows.append(row)
        rdeg.extend(b.row_degrees)
        cdeg.extend(b.col_degrees)
        offset += m
    return GradedMatrix(ring, rows, rdeg, cdeg, check=False)


# --- ring and module presentations ---------------------------------------------

@dataclass(frozen=True)
class RingPresentation:
    """``R = Q/I`` with ``Q`` the ambient weighted polynomial ring."""

    ambient: WeightedRingSpec
    relations: tuple = ()
    name: str = field(default="R", compare=False)

    def __post_init__(self):
        rels = tuple(r for r in self.relations if not r.is_zero())
        for r in rels:
            d = weighted_degree(r)
            if d == INHOMOGENEOUS:
                raise HomogeneityError(f"relation {r} is not homogeneous")
            if d <= 0:
                raise HomogeneityError(f"relation {r} must have positive degree")
        object.__setattr__(self, "relations", rels)

    @classmethod
    def polynomial(cls, spec, name="Q"):
        return cls(spec, (), name)

    def is_polynomial_ring(self):
        return not self.relations

    def ambient_ring(self):
        return RingPresentation(self.ambient, (), self.name + "_ambient")

    def __str__(self):
        if not self.relations:
            return str(self.ambient)
        return f"quotient({self.ambient}; {', '.join(format_poly(r) for r in self.relations)})"


@dataclass(frozen=True)
class ModulePresentation:
    """Cokernel of ``matrix`` over ``ring``: ``M = coker(matrix) ⊗ R``."""

    ring: RingPresentation
    matrix: GradedMatrix
    name: str = field(default="M", compare=False)

    @property
    def generator_degrees(self):
        return self.matrix.row_degrees

    @classmethod
    def free(cls, ring, degrees=(0,), name="F"):
        m = GradedMatrix(ring.ambient, [[] for _ in degrees], degrees, ())
        return cls(ring, m, name)

    @classmethod
    def cyclic(cls, ring, generators, degree=0, name="M"):
        """``(R / (g_1, ..., g_k))(-degree)``."""
        gens = [g for g in generators if not g.is_zero()]
        cols = [weighted_degree(g) + degree for g in gens]
        m = GradedMatrix(ring.ambient, [gens], [degree], cols)
        return cls(ring, m, name)

    @classmethod
    def residue_field(cls, ring, name="K"):
        return cls.cyclic(ring, ring.ambient.gens(), 0, name)

    def twist(self, a):
        return twist(self, a)

    def direct_sum(self, other, name=None):
        m = block_diagonal(self.ring.ambient, [self.matrix, other.matrix])
        return ModulePresentation(self.ring, m, name or f"{self.name}+{other.name}")


def twist(M, a):
    """``M(a)`` with ``M(a)_n = M_{a+n}``."""
    return ModulePresentation(M.ring, M.matrix.twist(a), f"{M.name}({a})")
