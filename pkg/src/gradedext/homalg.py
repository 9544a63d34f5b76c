"""Hilbert series of presented modules and of graded Ext and Tor.

Ext and Tor come from a minimal resolution ``F`` of the first argument.  Each
term of ``Hom(F, N)`` (or ``F ⊗ N``) is a direct sum of twists of ``N``, i.e. a
quotient of a free module, so every kernel and image is measured through
Hilbert series of cokernels:

    H(Ext^i) = H(coker d_i^*) + H(coker d_{i+1}^*) - H(Hom(F_{i+1}, N))

and symmetrically for Tor.  A second, independent route computes single graded
pieces by dense linear algebra (:func:`ext_strand_dimension`).
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import flint

from .groebner import submodule_gb
from .polyring import ModulePresentation
from .ratfun import Center, HilbertRational, LaurentPolynomial, laurent_expand
from .resolve import ResolutionError, extend_resolution


class ComputationFault(RuntimeError):
    """An invariant that must hold mathematically was violated by a computation."""


@lru_cache(maxsize=None)
def _cokernel_hilbert(ring_pres, shifts, columns_key):
    columns = [dict(c) for c in columns_key]
    return submodule_gb(ring_pres, shifts, columns).quotient_hilbert().canonical()


def _freeze(columns):
    return tuple(tuple(sorted(c.items())) for c in columns)


def cokernel_hilbert(ring_pres, shifts, columns):
    """Hilbert series of ``(⊕ Q(-shifts)) / (<columns> + I*F)``."""
    return _cokernel_hilbert(ring_pres, tuple(shifts), _freeze(columns))


def module_hilbert(M):
    """Exact Hilbert series of the module presented by ``M``."""
    return cokernel_hilbert(M.ring, M.matrix.row_degrees, M.matrix.columns())


# --- resolution cache -----------------------------------------------------------

_RESOLUTIONS = {}


def resolution(M, steps):
    """Minimal resolution of ``M`` through ``steps`` (shared, write-once per key)."""
    key = (M, steps)
    if key in _RESOLUTIONS:
        return _RESOLUTIONS[key]
    best = None
    for (m, s), res in _RESOLUTIONS.items():
        if m == M and (best is None or s > best[0]):
            best = (s, res)
    if best is not None and (not best[1].truncated or best[1].length >= steps):
        res = best[1]
    else:
        res = extend_resolution(M, best[1] if best else None, steps)
    _RESOLUTIONS.setdefault(key, res)
    return _RESOLUTIONS[key]


# --- Ext -------------------------------------------------------------------------

class InsufficientResolution(ResolutionError):
    pass


@dataclass
class ExtSeriesTable:
    """Hilbert series of ``Ext^i_R(M, N)`` for ``i = 0..computed_through``."""

    entries: dict
    computed_through: int
    vanishing_certified: bool = False
    projective_dimension: object = None
    kind: str = "Ext"
    notes: list = field(default_factory=list)

    def __getitem__(self, i):
        if i in self.entries:
            return self.entries[i]
        if i < 0:
            return HilbertRational(0)
        if self.vanishing_certified and self.projective_dimension is not None and i > self.projective_dimension:
            return HilbertRational(0)
        raise InsufficientResolution(f"{self.kind}^{i} not computed (table reaches {self.computed_through})")

    def covers(self, i):
        try:
            self[i]
        except InsufficientResolution:
            return False
        return True

    def alternating_sum(self, upto=None):
        upto = self.computed_through if upto is None else upto
        total = HilbertRational(0)
        for i in range(upto + 1):
            h = self[i]
            total = total + h if i % 2 == 0 else total - h
        return total


def _check_same_ring(M, N):
    if M.ring != N.ring:
        raise ValueError(f"{M.name} and {N.name} are defined over different rings")


def _blocks(degrees, N, sign):
    """Shifts and relation columns of ``⊕_k N(sign * a_k)``."""
    b = N.generator_degrees
    g = len(b)
    shifts = tuple(bm - sign * ak for ak in degrees for bm in b)
    cols = []
    for k in range(len(degrees)):
        for col in N.matrix.columns():
            cols.append({k * g + m: poly for m, poly in col.items()})
    return shifts, cols


def _hom_term(res, N, i):
    return _blocks(res.free_module(i), N, +1)


def _dual_images(res, N, i):
    """Images of the generators of ``Hom(F_i, N)`` under ``d_{i+1}^*``."""
    D = res.differential(i + 1)
    g = len(N.generator_degrees)
    out = []
    for k in range(len(res.free_module(i))):
        for m in range(g):
            col = {}
            for l in range(len(res.free_module(i + 1))):
                x = D.entries[k][l]
                if x:
                    col[l * g + m] = x
            out.append(col)
    return out


def _twisted_sum(h, degrees, sign):
    """``H(⊕_k N(sign * a_k))`` from ``H_N``."""
    num = LaurentPolynomial()
    for a in degrees:
        num = num + LaurentPolynomial.monomial(-sign * a)
    return h * HilbertRational(num)


def _resolution_for(M, steps):
    res = resolution(M, steps)
    if res.truncated and res.length < steps:
        raise InsufficientResolution(f"resolution of {M.name} stops at step {res.length}, need {steps}")
    return res


def ext_table(M, N, max_i, res=None):
    """Hilbert series of ``Ext^i_R(M, N)`` for ``0 <= i <= max_i``."""
    _check_same_ring(M, N)
    res = res if res is not None else _resolution_for(M, max_i + 1)
    if res.truncated and res.length < max_i + 1:
        raise InsufficientResolution(
            f"Ext^{max_i} needs the resolution through step {max_i + 1}; have {res.length}")
    hN = module_hilbert(N)
    ring = M.ring

    def coker(i):
        """``H(coker d_i^*)`` where ``d_0^* = 0`` (so this is ``H(Hom(F_0, N))`` at i = 0)."""
        shifts, rels = _hom_term(res, N, i)
        if not shifts:
            return HilbertRational(0)
        images = _dual_images(res, N, i - 1) if i >= 1 else []
        return cokernel_hilbert(ring, shifts, rels + images)

    cache = {}

    def ck(i):
        if i not in cache:
            cache[i] = coker(i)
        return cache[i]

    entries = {}
    for i in range(max_i + 1):
        nxt = _twisted_sum(hN, res.free_module(i + 1), +1)
        entries[i] = (ck(i) + ck(i + 1) - nxt).canonical()
    pd = None if res.truncated else res.length
    return ExtSeriesTable(entries, max_i, not res.truncated, pd, "Ext")


def ext_hilbert(M, N, i):
    return ext_table(M, N, i)[i]


# --- Tor -------------------------------------------------------------------------

def _tensor_images(res, N, i):
    """Images of the generators of ``F_i ⊗ N`` under ``d_i ⊗ N``."""
    D = res.differential(i)
    g = len(N.generator_degrees)
    out = []
    for l in range(len(res.free_module(i))):
        for m in range(g):
            col = {}
            for k in range(len(res.free_module(i - 1))):
                x = D.entries[k][l]
                if x:
                    col[k * g + m] = x
            out.append(col)
    return out


def tor_table(M, N, max_i, res=None):
    """Hilbert series of ``Tor_i^R(M, N)`` for ``0 <= i <= max_i``."""
    _check_same_ring(M, N)
    res = res if res is not None else _resolution_for(M, max_i + 1)
    if res.truncated and res.length < max_i + 1:
        raise InsufficientResolution(
            f"Tor_{max_i} needs the resolution through step {max_i + 1}; have {res.length}")
    hN = module_hilbert(N)
    ring = M.ring
    cache = {}

    def ck(i):
        """``H(coker(d_i ⊗ N))`` inside ``F_{i-1} ⊗ N``; zero for i = 0."""
        if i not in cache:
            if i == 0:
                cache[i] = HilbertRational(0)
            else:
                shifts, rels = _blocks(res.free_module(i - 1), N, -1)
                cache[i] = (cokernel_hilbert(ring, shifts, rels + _tensor_images(res, N, i))
                            if shifts else HilbertRational(0))
        return cache[i]

    entries = {}
    for i in range(max_i + 1):
        prev = _twisted_sum(hN, res.free_module(i - 1), -1)
        entries[i] = (ck(i) + ck(i + 1) - prev).canonical()
    pd = None if res.truncated else res.length
    return ExtSeriesTable(entries, max_i, not res.truncated, pd, "Tor")


def tor_hilbert(M, N, i):
    return tor_table(M, N, i)[i]


# --- Bass numbers and ranks -------------------------------------------------------

def bass_numbers(N, max_i):
    """``[(i, mu^i)]`` with ``mu^i`` the total rank of ``Ext^i_R(K, N)``."""
    K = ModulePresentation.residue_field(N.ring)
    table = ext_table(K, N, max_i)
    out = []
    for i in range(max_i + 1):
        h = table[i]
        if not h.is_laurent_polynomial():
            raise ComputationFault(f"Ext^{i}(K, {N.name}) has non-polynomial Hilbert series {h}")
        out.append((i, int(h.as_laurent_polynomial()(1))))
    return out


def laurent_coefficient_list(h, d, count):
    """``[f^0, ..., f^count]`` with ``[h]_1 = sum_j f^j / (1 - t)^(d - j)``."""
    e = laurent_expand(h, Center.ONE, count + d + 1)
    if e.order is None:
        return [Fraction(0)] * (count + 1)
    if e.order < -d:
        raise ValueError(f"pole of order {-e.order} exceeds the ring dimension {d}")
    return [e.coefficient(j - d) for j in range(count + 1)]


def ring_hilbert(ring_pres):
    return module_hilbert(ModulePresentation.free(ring_pres, (0,)))


def krull_dimension(h):
    """Pole order at ``t = 1``; ``-1`` for the zero function."""
    e = laurent_expand(h, Center.ONE, 1)
    return -1 if e.order is None else max(-e.order, 0)


def rank_over_domain(M):
    """``f^0(M) / f^0(R)``; meaningful when ``R`` is a domain (not checked)."""
    hR = ring_hilbert(M.ring)
    d = krull_dimension(hR)
    f0R = laurent_coefficient_list(hR, d, 0)[0]
    if f0R == 0:
        raise ComputationFault("f^0(R) vanished")
    return laurent_coefficient_list(module_hilbert(M), d, 0)[0] / f0R


# --- degreewise dense oracle ---------------------------------------------------------

class StrandTooLarge(RuntimeError):
    """A dense strand exceeds the configured size budget."""


DEFAULT_STRAND_BUDGET = 4_000_000


@lru_cache(maxsize=None)
def _monomials(weights, degree):
    """All exponent vectors of weighted degree ``degree``."""
    if degree < 0:
        return ()
    if not weights:
        return ((),) if degree == 0 else ()
    out = []
    w = weights[-1]
    for k in range(degree // w + 1):
        for head in _monomials(weights[:-1], degree - k * w):
            out.append(head + (k,))
    return tuple(out)


def _column_degree(spec, shifts, col):
    for pos, poly in col.items():
        for e in poly.terms:
            return spec.mono_degree(e) + shifts[pos]
    return None


def _as_fraction(field, c):
    f = field.to_fraction(c)
    return f if field.p is None else int(f)


class _Dense:
    """Thin adapter over flint matrices for QQ and GF(p)."""

    def __init__(self, field):
        self.field = field

    def matrix(self, rows, ncols):
        """Dense matrix of sparse ``rows``; over QQ each row is scaled to integers."""
        flat = [0] * (len(rows) * ncols)
        p = self.field.p
        for i, r in enumerate(rows):
            base = i * ncols
            if p is None:
                den = math.lcm(*(Fraction(c).denominator for c in r.values())) if r else 1
                for j, c in r.items():
                    flat[base + j] = int(c * den)
            else:
                for j, c in r.items():
                    flat[base + j] = int(c) % p
        if p is None:
            return flint.fmpz_mat(len(rows), ncols, flat)
        return flint.nmod_mat(len(rows), ncols, flat, p)

    def rref(self, rows, ncols):
        """``(table, rank, den)``: reduced rows as lists, pivots equal to ``den``."""
        m = self.matrix(rows, ncols)
        if self.field.p is None:
            red, den, rank = m.rref()
            return red.tolist(), rank, int(den)
        red, rank = m.rref()
        return [[int(c) for c in row] for row in red.tolist()], rank, 1

    def rank(self, rows, ncols):
        rows = [r for r in rows if r]
        if not rows or not ncols:
            return 0
        return self.matrix(rows, ncols).rank()


@dataclass
class _Piece:
    """Degree-``m`` piece of a presented module, as a quotient of its ambient strand.

    ``coords`` maps an ambient index to a sparse coordinate vector over the
    chosen basis (the non-pivot ambient monomials).
    """

    basis: list
    index: dict
    coords: list

    @property
    def dim(self):
        return len(self.basis)


@lru_cache(maxsize=None)
def _piece(N, m):
    spec = N.ring.ambient
    field = spec.field
    dense = _Dense(field)
    shifts = N.generator_degrees
    ambient = [(pos, e) for pos, s in enumerate(shifts) for e in _monomials(spec.weights, m - s)]
    index = {b: i for i, b in enumerate(ambient)}
    cols = [dict(c) for c in N.matrix.columns()]
    for pos in range(len(shifts)):
        for r in N.ring.relations:
            cols.append({pos: r})
    rows = []
    for col in cols:
        d = _column_degree(spec, shifts, col)
        if d is None or d > m:
            continue
        for mono in _monomials(spec.weights, m - d):
            row = {}
            for pos, poly in col.items():
                for e, c in poly.terms.items():
                    j = index[(pos, tuple(a + b for a, b in zip(e, mono)))]
                    row[j] = row.get(j, 0) + _as_fraction(field, c)
            row = {j: c for j, c in row.items() if c}
            if row:
                rows.append(row)
    n = len(ambient)
    pivots = {}
    den = 1
    if rows:
        table, rank, den = dense.rref(rows, n)
        for r in range(rank):
            row = [int(c) for c in table[r]]
            p = next(j for j, c in enumerate(row) if c)
            pivots[p] = row
    free = [j for j in range(n) if j not in pivots]
    pos_of = {j: k for k, j in enumerate(free)}
    coords = []
    for j in range(n):
        if j in pos_of:
            coords.append({pos_of[j]: 1})
        else:
            row = pivots[j]
            coords.append({pos_of[q]: _quotient(field, -row[q], den) for q in free if row[q]})
    return _Piece([ambient[j] for j in free], index, coords)


def _piece_checked(N, m, budget):
    """:func:`_piece` after checking that its elimination fits in ``budget``."""
    spec = N.ring.ambient
    shifts = N.generator_degrees
    ncols = sum(len(_monomials(spec.weights, m - s)) for s in shifts)
    degs = [_column_degree(spec, shifts, c) for c in N.matrix.columns()]
    degs += [spec.mono_degree(next(iter(r.terms))) + s for s in shifts for r in N.ring.relations]
    nrows = sum(len(_monomials(spec.weights, m - d)) for d in degs if d is not None)
    if nrows * ncols > budget:
        raise StrandTooLarge(f"degree {m} piece {nrows} x {ncols} exceeds budget {budget}")
    return _piece(N, m)


def _quotient(field, a, b):
    if field.p is None:
        return Fraction(a, b)
    return a * pow(b, -1, field.p) % field.p


def _add(acc, vec, scale, field):
    for j, c in vec.items():
        v = acc.get(j, 0) + scale * c
        if field.p is not None:
            v %= field.p
        if v:
            acc[j] = v
        else:
            acc.pop(j, None)


def _hom_map_rank(res, N, j, n, dense, budget):
    """Rank of ``d_{j+1}^*`` in internal degree ``n`` (dense, over the field)."""
    field = N.ring.ambient.field
    src = res.free_module(j)
    dst = res.free_module(j + 1)
    if not src or not dst:
        return 0
    g = len(N.generator_degrees)
    spieces = [_piece_checked(N, n + a, budget) for a in src]
    tpieces = [_piece_checked(N, n + a, budget) for a in dst]
    offsets = list(itertools.accumulate([0] + [p.dim for p in tpieces]))
    nrows = sum(p.dim for p in spieces)
    if nrows == 0 or offsets[-1] == 0:
        return 0
    if nrows * offsets[-1] > budget:
        raise StrandTooLarge(f"strand matrix {nrows} x {offsets[-1]} exceeds budget {budget}")
    D = res.differential(j + 1)
    rows = []
    for k, sp in enumerate(spieces):
        for pos, e in sp.basis:
            row = {}
            for l, tp in enumerate(tpieces):
                f = D.entries[k][l]
                for e2, c in f.terms.items():
                    amb = tp.index[(pos, tuple(a + b for a, b in zip(e, e2)))]
                    shifted = {offsets[l] + q: v for q, v in tp.coords[amb].items()}
                    _add(row, shifted, _as_fraction(field, c), field)
            rows.append(row)
    return dense.rank(rows, offsets[-1])


def ext_strand_dimension(res, N, i, n, budget=DEFAULT_STRAND_BUDGET):
    """``dim_K Ext^i_R(M, N)_n`` from the degree-``n`` strand of ``Hom(F, N)``.

    Each summand ``N(a_k)_n = N_{n + a_k}`` is presented by dense row reduction
    of the relations in that degree; the differentials are then assembled as
    dense matrices and their ranks taken.  No Groebner bases are involved.
    """
    dense = _Dense(N.ring.ambient.field)
    dim = sum(_piece_checked(N, n + a, budget).dim for a in res.free_module(i))
    if dim == 0:
        return 0
    out_rank = _hom_map_rank(res, N, i, n, dense, budget)
    in_rank = _hom_map_rank(res, N, i - 1, n, dense, budget) if i >= 1 else 0
    return dim - out_rank - in_rank


def ext_strand_table(M, N, max_i, degrees, budget=DEFAULT_STRAND_BUDGET):
    """``{(i, n): dim Ext^i(M, N)_n}`` by the dense route."""
    res = _resolution_for(M, max_i + 1)
    return {(i, n): ext_strand_dimension(res, N, i, n, budget)
            for i, n in itertools.product(range(max_i + 1), degrees)}
