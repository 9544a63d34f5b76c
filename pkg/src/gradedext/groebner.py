"""Buchberger's algorithm for homogeneous submodules of graded free modules.

Internally a module term ``x^a e_k`` is the tuple
``(-block, -wdeg(a), a_n, ..., a_1, k)``: smaller tuples are *larger* terms, so the
leading term of a vector is ``min`` of its keys and a heap pops terms in
descending order.  Without blocks this is the weighted degree reverse
lexicographic order on monomials, term over position, lower positions first.
A block order (used for syzygies) compares the block of the position before
anything else.
"""

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .polyring import (GradedMatrix, HomogeneityError, INHOMOGENEOUS, MultiPoly,
                       weighted_degree)
from .ratfun import HilbertRational, LaurentPolynomial


@dataclass(frozen=True)
class MonomialOrder:
    """Weighted degrevlex, term over position; ``blocks[k]`` ranks position ``k``."""

    blocks: tuple = None

    def block(self, pos):
        return 0 if self.blocks is None else self.blocks[pos]


TOP = MonomialOrder()


class ModuleContext:
    """Ambient free module ``⊕ Q(-shifts[k])`` together with a monomial order."""

    def __init__(self, ring, shifts, order=TOP):
        self.ring = ring
        self.shifts = tuple(shifts)
        self.order = order
        self.n = ring.nvars
        self.p = ring.field.p
        self.rweights = tuple(reversed(ring.weights))

    # term helpers -------------------------------------------------------------
    def term(self, pos, exps):
        wdeg = sum(w * e for w, e in zip(self.ring.weights, exps))
        return (-self.order.block(pos), -wdeg) + tuple(reversed(exps)) + (pos,)

    def exps(self, key):
        return tuple(reversed(key[2:-1]))

    def degree(self, key):
        """Total (shifted) degree of a term."""
        return -key[1] + self.shifts[key[-1]]

    def mono_shift(self, key_from, key_to):
        """Monomial ``m`` (as an additive key) with ``m * key_from == key_to``."""
        return (0, key_to[1] - key_from[1]) + tuple(
            b - a for a, b in zip(key_from[2:-1], key_to[2:-1])) + (0,)

    def lcm(self, k1, k2):
        rev = tuple(max(a, b) for a, b in zip(k1[2:-1], k2[2:-1]))
        wdeg = sum(w * e for w, e in zip(self.rweights, rev))
        return (k1[0], -wdeg) + rev + (k1[-1],)

    # conversions ---------------------------------------------------------------
    def from_column(self, column):
        """``{pos: MultiPoly}`` -> internal vector."""
        vec = {}
        for pos, poly in column.items():
            for exps, c in poly.terms.items():
                if c:
                    vec[self.term(pos, exps)] = c
        return vec

    def to_column(self, vec):
        out = {}
        for key, c in vec.items():
            pos = key[-1]
            out.setdefault(pos, {})[self.exps(key)] = c
        return {pos: MultiPoly(self.ring, t) for pos, t in sorted(out.items())}

    def vector_degree(self, vec):
        degs = {self.degree(k) for k in vec}
        if len(degs) != 1:
            return INHOMOGENEOUS
        return degs.pop()


def _divides(a, b):
    """Does term ``a`` divide term ``b`` (same position and block)?"""
    if a[-1] != b[-1] or a[0] != b[0]:
        return False
    for x, y in zip(a[2:-1], b[2:-1]):
        if x > y:
            return False
    return True


def _mul_term(key, mono):
    return tuple(a + b for a, b in zip(key, mono))


class _Basis:
    """Mutable Gröbner basis under construction: monic vectors plus lead index."""

    def __init__(self, ctx):
        self.ctx = ctx
        self.elems = []
        self.leads = []
        self.by_pos = {}

    def add(self, vec):
        lead = min(vec)
        c = vec[lead]
        if c != 1:
            inv = self.ctx.ring.field.inv(c)
            p = self.ctx.p
            vec = {k: (v * inv) % p if p else v * inv for k, v in vec.items()}
        self.elems.append(vec)
        self.leads.append(lead)
        self.by_pos.setdefault((lead[0], lead[-1]), []).append(len(self.elems) - 1)
        return len(self.elems) - 1

    def find_divisor(self, key, skip=None):
        for i in self.by_pos.get((key[0], key[-1]), ()):
            if i == skip:
                continue
            if _divides(self.leads[i], key):
                return i
        return None

    def reduce(self, vec, skip=None):
        """Full normal form of ``vec`` modulo the current elements."""
        p = self.ctx.p
        f = dict(vec)
        heap = list(f)
        heapq.heapify(heap)
        rem = {}
        while heap:
            key = heapq.heappop(heap)
            c = f.pop(key, 0)
            if not c:
                continue
            i = self.find_divisor(key, skip)
            if i is None:
                rem[key] = c
                continue
            g = self.elems[i]
            mono = self.ctx.mono_shift(self.leads[i], key)
            for gk, gc in g.items():
                if gk == self.leads[i]:
                    continue
                k2 = _mul_term(gk, mono)
                old = f.get(k2)
                v = (0 if old is None else old) - c * gc
                if p:
                    v %= p
                if old is None:
                    heapq.heappush(heap, k2)
                f[k2] = v
        return rem


def _check_homogeneous(ctx, vecs):
    for v in vecs:
        if v and ctx.vector_degree(v) == INHOMOGENEOUS:
            raise HomogeneityError("buchberger requires homogeneous generators")


class GroebnerBasis:
    """Reduced Gröbner basis of a submodule of ``⊕ Q(-shifts)``."""

    def __init__(self, ctx, elems, truncated_at=None):
        self.ctx = ctx
        self.elements = elems
        self.truncated_at = truncated_at
        self._basis = _Basis(ctx)
        for e in elems:
            self._basis.add(e)

    @property
    def ring(self):
        return self.ctx.ring

    @property
    def shifts(self):
        return self.ctx.shifts

    def leading_terms(self):
        return [min(e) for e in self.elements]

    def normal_form_vec(self, vec):
        return self._basis.reduce(vec)

    def normal_form(self, column):
        """Normal form of a ``{pos: MultiPoly}`` vector; ``{}`` iff it lies in the submodule."""
        return self.ctx.to_column(self._basis.reduce(self.ctx.from_column(column)))

    def contains(self, column):
        return not self._basis.reduce(self.ctx.from_column(column))

    def columns(self):
        return [self.ctx.to_column(e) for e in self.elements]

    def lead_monomials_by_position(self):
        out = {k: [] for k in range(len(self.shifts))}
        for key in self.leading_terms():
            out[key[-1]].append(self.ctx.exps(key))
        return out

    def hilbert_numerator(self):
        return monomial_hilbert_numerator(self.lead_monomials_by_position(), self.ring, self.shifts)

    def quotient_hilbert(self):
        """Hilbert series of ``F / L`` for the submodule ``L`` spanned by the basis."""
        if self.truncated_at is not None:
            raise ValueError("Hilbert series needs a complete (untruncated) Gröbner basis")
        return HilbertRational(self.hilbert_numerator(), self.ring.weights)

    def spairs_reduce_to_zero(self):
        """Re-check Buchberger's criterion on every pair of basis elements."""
        b = self._basis
        for i, j in itertools.combinations(range(len(self.elements)), 2):
            li, lj = b.leads[i], b.leads[j]
            if li[-1] != lj[-1] or li[0] != lj[0]:
                continue
            if b.reduce(_spoly(self.ctx, b, i, j)):
                return False
        return True


def _spoly(ctx, basis, i, j):
    li, lj = basis.leads[i], basis.leads[j]
    l = ctx.lcm(li, lj)
    mi = ctx.mono_shift(li, l)
    mj = ctx.mono_shift(lj, l)
    p = ctx.p
    out = {}
    for k, c in basis.elems[i].items():
        out[_mul_term(k, mi)] = c
    for k, c in basis.elems[j].items():
        k2 = _mul_term(k, mj)
        v = out.get(k2, 0) - c
        if p:
            v %= p
        if v:
            out[k2] = v
        else:
            out.pop(k2, None)
    return out


def buchberger_vectors(ctx, vecs, degree_bound=None, rank_one=None):
    """Gröbner basis of the submodule spanned by internal vectors ``vecs``.

    Pairs are processed lowest degree first; with ``degree_bound`` the
    computation stops after that degree and the result is flagged truncated.
    """
    vecs = [v for v in vecs if v]
    _check_homogeneous(ctx, vecs)
    if rank_one is None:
        rank_one = len(ctx.shifts) == 1
    basis = _Basis(ctx)
    counter = itertools.count()
    queue = []
    for v in vecs:
        heapq.heappush(queue, (ctx.vector_degree(v), next(counter), "gen", v, None))
    pairs = {}
    truncated = False

    def update(h):
        """Gebauer-Möller style pair update for a new element index ``h``."""
        lh = basis.leads[h]
        key_h = (lh[0], lh[-1])
        # chain criterion on existing pairs
        for (i, j), lcm_ij in list(pairs.items()):
            if (basis.leads[i][0], basis.leads[i][-1]) != key_h:
                continue
            if (_divides(lh, lcm_ij) and ctx.lcm(basis.leads[i], lh) != lcm_ij
                    and ctx.lcm(basis.leads[j], lh) != lcm_ij):
                del pairs[(i, j)]
        new = []
        for i in basis.by_pos.get(key_h, ()):
            if i == h:
                continue
            new.append((ctx.lcm(basis.leads[i], lh), i))
        kept = []
        for l, i in new:
            # drop if another new pair's lcm properly divides this one
            if any(l2 != l and _divides(l2, l) for l2, _ in new):
                continue
            if any(l2 == l for l2, _ in kept):
                continue
            kept.append((l, i))
        for l, i in kept:
            li = basis.leads[i]
            if rank_one and all(min(a, b) == 0 for a, b in zip(li[2:-1], lh[2:-1])):
                continue
            pairs[(i, h)] = l
            heapq.heappush(queue, (ctx.degree(l), next(counter), "pair", i, h))

    while queue:
        deg, _, kind, a, b = heapq.heappop(queue)
        if degree_bound is not None and deg > degree_bound:
            truncated = True
            break
        if kind == "gen":
            vec = a
        else:
            if pairs.pop((a, b), None) is None:
                continue
            vec = _spoly(ctx, basis, a, b)
        rem = basis.reduce(vec)
        if rem:
            update(basis.add(rem))
    return _interreduce(ctx, basis, degree_bound if truncated else None)


def _interreduce(ctx, basis, truncated_at):
    idx = list(range(len(basis.elems)))
    keep = []
    for i in idx:
        li = basis.leads[i]
        if any(j != i and _divides(basis.leads[j], li) and (basis.leads[j] != li or j < i)
               for j in idx):
            continue
        keep.append(i)
    minimal = _Basis(ctx)
    for i in keep:
        minimal.add(basis.elems[i])
    out = []
    for n in range(len(minimal.elems)):
        vec = minimal.elems[n]
        lead = minimal.leads[n]
        tail = {k: c for k, c in vec.items() if k != lead}
        red = minimal.reduce(tail, skip=n) if tail else {}
        red[lead] = vec[lead]
        out.append(red)
    out.sort(key=min)
    return GroebnerBasis(ctx, out, truncated_at)


def buchberger(ring, shifts, columns, order=TOP, degree_bound=None):
    """Gröbner basis of the submodule of ``⊕ Q(-shifts)`` spanned by ``columns``.

    ``columns`` are ``{pos: MultiPoly}`` dictionaries; inhomogeneous input is rejected.
    """
    ctx = ModuleContext(ring, shifts, order)
    return buchberger_vectors(ctx, [ctx.from_column(c) for c in columns], degree_bound)


def relation_columns(ring_pres, rank):
    """Columns ``r * e_k`` for each ring relation ``r`` and each basis vector."""
    return [{k: r} for k in range(rank) for r in ring_pres.relations]


def submodule_gb(ring_pres, shifts, columns, degree_bound=None):
    """Gröbner basis of ``<columns> + I*F`` inside ``F = ⊕ Q(-shifts)``."""
    cols = list(columns) + relation_columns(ring_pres, len(shifts))
    return buchberger(ring_pres.ambient, shifts, cols, degree_bound=degree_bound)


def normal_form(column, gb):
    return gb.normal_form(column)


def syzygy_matrix(ring_pres, matrix, degree_bound=None):
    """Columns generating the syzygies over ``R = Q/I`` of the columns of ``matrix``.

    Computed by eliminating the target block in ``F ⊕ Q^m`` where each generator
    ``g_j`` is paired with a tracking basis vector.  Columns that vanish in ``R``
    are dropped; the output is otherwise not minimized.
    """
    ring = ring_pres.ambient
    nrows, m = matrix.shape
    shifts = tuple(matrix.row_degrees) + tuple(matrix.col_degrees)
    blocks = (1,) * nrows + (0,) * m
    ctx = ModuleContext(ring, shifts, MonomialOrder(blocks))
    vecs = []
    for j, col in enumerate(matrix.columns()):
        aug = dict(col)
        aug[nrows + j] = ring.one()
        vecs.append(ctx.from_column(aug))
    for col in relation_columns(ring_pres, nrows):
        vecs.append(ctx.from_column(col))
    gb = buchberger_vectors(ctx, vecs, degree_bound)
    syz = []
    for e in gb.elements:
        if min(e)[0] == 0:
            col = ctx.to_column(e)
            syz.append(({k - nrows: v for k, v in col.items()}, ctx.vector_degree(e)))
    if ring_pres.relations:
        # columns lying in I*F are zero over R
        ideal = buchberger(ring, (0,), [{0: r} for r in ring_pres.relations])
        syz = [(c, d) for c, d in syz if any(ideal.normal_form({0: v}) for v in c.values())]
    columns = [c for c, _ in syz]
    degrees = [d for _, d in syz]
    return GradedMatrix.from_columns(ring, columns, matrix.col_degrees, degrees)


# --- Hilbert numerators of monomial modules ------------------------------------

def _minimalize(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _numerator(gens, weights):
    """Numerator of ``H(Q/J)`` times ``prod(1 - t^w)`` as ``{exp: int}``."""
    if not gens:
        return ((0, 1),)
    supports = [frozenset(i for i, e in enumerate(g) if e) for g in gens]
    coprime = all(not (supports[a] & supports[b])
                  for a in range(len(gens)) for b in range(a + 1, len(gens)))
    if coprime:
        poly = {0: 1}
        for g in gens:
            d = sum(w * e for w, e in zip(weights, g))
            nxt = dict(poly)
            for e, c in poly.items():
                nxt[e + d] = nxt.get(e + d, 0) - c
            poly = {e: c for e, c in nxt.items() if c}
        return tuple(sorted(poly.items()))
    # pivot on the variable occurring in the most non-pure-power generators
    counts = [0] * len(weights)
    for g, s in zip(gens, supports):
        if len(s) > 1:
            for i in s:
                counts[i] += 1
    var = max(range(len(weights)), key=lambda i: (counts[i], -i))
    # in a minimal set, mixed exponents stay below any pure power of var, so x^e is not in J
    exps = sorted(g[var] for g, s in zip(gens, supports) if g[var] > 0 and len(s) > 1)
    e = exps[len(exps) // 2]
    pivot = tuple(e if i == var else 0 for i in range(len(weights)))
    with_pivot = _minimalize(gens + (pivot,))
    colon = _minimalize(tuple(tuple(max(a - b, 0) for a, b in zip(g, pivot)) for g in gens))
    shift = e * weights[var]
    out = dict(_numerator(with_pivot, weights))
    for k, c in _numerator(colon, weights):
        out[k + shift] = out.get(k + shift, 0) + c
    return tuple(sorted((k, c) for k, c in out.items() if c))


def monomial_hilbert_numerator(lead_terms, spec, generator_degrees):
    """``q(t)`` with ``H(F / L) = q(t) / prod_j (1 - t^{d_j})``.

    ``lead_terms`` maps each position to exponent tuples of the monomial
    submodule ``L`` at that position.
    """
    weights = tuple(spec.weights)
    total = {}
    for pos, a in enumerate(generator_degrees):
        gens = _minimalize(tuple(tuple(g) for g in lead_terms.get(pos, ())))
        for k, c in _numerator(gens, weights):
            total[k + a] = total.get(k + a, 0) + c
    return LaurentPolynomial(total)
