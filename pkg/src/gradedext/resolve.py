"""Graded free resolutions: iterated syzygies, minimalization, matrix factorizations."""

from dataclasses import dataclass, field

from .groebner import ModuleContext, buchberger, buchberger_vectors, relation_columns, syzygy_matrix
from .polyring import GradedMatrix, format_twists, weighted_degree


class ResolutionError(ValueError):
    pass


@dataclass(frozen=True)
class MatrixFactorizationPair:
    """Square matrices with ``A*B = B*A = f*Id`` over the ambient ring."""

    A: GradedMatrix
    B: GradedMatrix
    f: object

    def check(self):
        ring = self.A.ring
        n = self.A.shape[0]
        if self.A.shape != (n, n) or self.B.shape != (n, n):
            raise ResolutionError("matrix factorization needs square matrices of equal size")
        for X, Y in ((self.A, self.B), (self.B, self.A)):
            for i in range(n):
                for j in range(n):
                    acc = ring.zero()
                    for k in range(n):
                        acc = acc + X[i, k] * Y[k, j]
                    want = self.f if i == j else ring.zero()
                    if acc != want:
                        raise ResolutionError(f"A*B != f*Id at entry ({i}, {j}): {acc}")


@dataclass
class FreeResolution:
    """``F_L -> ... -> F_1 -> F_0`` with ``differentials[i-1] = d_i : F_i -> F_{i-1}``."""

    ring: object
    differentials: list
    modules: list = field(default_factory=list)
    minimal: bool = False
    truncated: bool = True

    def __post_init__(self):
        if not self.modules:
            if self.differentials:
                mods = [self.differentials[0].row_degrees]
                mods += [d.col_degrees for d in self.differentials]
            else:
                mods = [()]
            self.modules = [tuple(m) for m in mods]

    @property
    def length(self):
        return len(self.differentials)

    def free_module(self, i):
        """Generator degrees of ``F_i``; empty beyond a terminated resolution."""
        if i < 0:
            return ()
        if i < len(self.modules):
            return self.modules[i]
        if self.truncated:
            raise ResolutionError(f"resolution computed only through step {self.length}")
        return ()

    def differential(self, i):
        """``d_i : F_i -> F_{i-1}``; zero matrices outside the computed range."""
        if 1 <= i <= self.length:
            return self.differentials[i - 1]
        return GradedMatrix.zero(self.ring.ambient, self.free_module(i - 1), self.free_module(i))

    def covers(self, i):
        """True when steps ``0..i`` are known exactly."""
        return not self.truncated or i <= self.length

    def betti(self):
        return [len(m) for m in self.modules]

    def has_unit_entry(self):
        return _find_unit(self.differentials) is not None

    def __str__(self):
        return format_resolution(self)


def format_resolution(res, ring_name="R"):
    lines = []
    for i, degs in enumerate(res.modules):
        lines.append(f"F_{i} = {format_twists(degs, ring_name)}")
    if res.truncated:
        lines.append(f"(truncated after step {res.length})")
    else:
        lines.append(f"F_{res.length + 1} = 0")
    return "\n".join(lines)


# --- normal forms modulo the ring relations -------------------------------------

def _ideal_gb(ring_pres):
    if not ring_pres.relations:
        return None
    return buchberger(ring_pres.ambient, (0,), [{0: r} for r in ring_pres.relations])


def reduce_entries(ring_pres, matrix, gb=None):
    """Replace every entry by its normal form modulo the ring relations."""
    gb = gb if gb is not None else _ideal_gb(ring_pres)
    if gb is None:
        return matrix
    z = ring_pres.ambient.zero()
    rows = [[gb.normal_form({0: x}).get(0, z) if x else x for x in row] for row in matrix.entries]
    return GradedMatrix(matrix.ring, rows, matrix.row_degrees, matrix.col_degrees, check=False)


def compose_vanishes(ring_pres, first, second, gb=None):
    """Is ``first ∘ second`` zero over ``R``?"""
    prod = first @ second
    gb = gb if gb is not None else _ideal_gb(ring_pres)
    for row in prod.entries:
        for x in row:
            if x and (gb is None or not gb.contains({0: x})):
                return False
    return True


# --- minimal generators ----------------------------------------------------------

def _echelon_insert(echelon, vec, p):
    """Reduce ``vec`` against ``echelon`` (lead -> monic row); add it if independent."""
    vec = dict(vec)
    while vec:
        lead = min(vec)
        row = echelon.get(lead)
        if row is None:
            c = vec[lead]
            inv = (1 / c) if p is None else pow(int(c), -1, p)
            echelon[lead] = {k: (v * inv) % p if p else v * inv for k, v in vec.items()}
            return True
        c = vec[lead]
        for k, v in row.items():
            nv = vec.get(k, 0) - c * v
            if p:
                nv %= p
            if nv:
                vec[k] = nv
            else:
                vec.pop(k, None)
    return False


def minimal_generators(ring_pres, shifts, columns, degrees=None):
    """Indices of a minimal generating subset of ``columns`` modulo ``I*F``.

    Candidates are scanned by degree; one is kept when it is not in the span
    of lower-degree kept generators (via a truncated Gröbner basis) together
    with previously kept candidates of the same degree.
    """
    ring = ring_pres.ambient
    ctx = ModuleContext(ring, shifts)
    vecs = [ctx.from_column(c) for c in columns]
    if degrees is None:
        degrees = [ctx.vector_degree(v) if v else None for v in vecs]
    rel_vecs = [ctx.from_column(c) for c in relation_columns(ring_pres, len(shifts))]
    order = sorted((d, j) for j, d in enumerate(degrees) if vecs[j])
    kept = []
    by_degree = {}
    for d, j in order:
        by_degree.setdefault(d, []).append(j)
    for d in sorted(by_degree):
        gb = buchberger_vectors(ctx, [vecs[j] for j in kept] + rel_vecs, degree_bound=d)
        echelon = {}
        for j in by_degree[d]:
            nf = gb.normal_form_vec(vecs[j])
            if nf and _echelon_insert(echelon, nf, ring.field.p):
                kept.append(j)
    return sorted(kept, key=lambda j: (degrees[j], j))


# --- unit elimination --------------------------------------------------------------

def _unit(x):
    return bool(x) and all(sum(e) == 0 for e in x.terms)


def _find_unit(differentials):
    for i, d in enumerate(differentials):
        nrows, ncols = d.shape
        for c in range(ncols):
            for r in range(nrows):
                if _unit(d.entries[r][c]):
                    return i, r, c
    return None


def _eliminate(d, r, c):
    """``d - d[:,c] d[r,:] / u`` with row ``r`` and column ``c`` removed."""
    u = d.entries[r][c].constant_term()
    ring = d.ring
    inv = ring.field.inv(u)
    rows = []
    for i, row in enumerate(d.entries):
        if i == r:
            continue
        factor = row[c]
        new = []
        for j, x in enumerate(row):
            if j == c:
                continue
            if factor and d.entries[r][j]:
                x = x - factor * d.entries[r][j] * ring.constant(inv)
            new.append(x)
        rows.append(new)
    rdeg = [a for i, a in enumerate(d.row_degrees) if i != r]
    cdeg = [a for j, a in enumerate(d.col_degrees) if j != c]
    return GradedMatrix(ring, rows, rdeg, cdeg, check=False)


def prune_matrix(matrix):
    """Remove unit entries from a presentation matrix (same cokernel, fewer generators)."""
    while True:
        hit = _find_unit([matrix])
        if hit is None:
            return matrix
        _, r, c = hit
        matrix = _eliminate(matrix, r, c)


def minimalize(res):
    """Strip split-exact summands and redundant top generators from a resolution."""
    diffs = list(res.differentials)
    while True:
        hit = _find_unit(diffs)
        if hit is None:
            break
        i, r, c = hit
        diffs[i] = _eliminate(diffs[i], r, c)
        if i > 0:
            diffs[i - 1] = diffs[i - 1].delete(cols=[r])
        if i + 1 < len(diffs):
            diffs[i + 1] = diffs[i + 1].delete(rows=[c])
    if diffs and res.truncated:
        top = diffs[-1]
        keep = minimal_generators(res.ring, top.row_degrees, top.columns(), list(top.col_degrees))
        drop = [j for j in range(top.shape[1]) if j not in keep]
        if drop:
            diffs[-1] = top.delete(cols=drop)
    while diffs and diffs[-1].shape[1] == 0:
        diffs.pop()
    modules = [diffs[0].row_degrees] + [d.col_degrees for d in diffs] if diffs else [res.modules[0]]
    return FreeResolution(res.ring, diffs, [tuple(m) for m in modules], True, res.truncated)


# --- resolutions --------------------------------------------------------------------

def _select(ring_pres, matrix):
    """Minimal-generator subset of the columns of ``matrix``, entries reduced modulo I."""
    keep = minimal_generators(ring_pres, matrix.row_degrees, matrix.columns(), list(matrix.col_degrees))
    entries = [[row[j] for j in keep] for row in matrix.entries]
    out = GradedMatrix(matrix.ring, entries, matrix.row_degrees,
                       [matrix.col_degrees[j] for j in keep], check=False)
    return reduce_entries(ring_pres, out)


def minimal_resolution(M, max_step):
    """Minimal graded free resolution of ``M`` through homological degree ``max_step``."""
    return extend_resolution(M, None, max_step)


def extend_resolution(M, res, max_step):
    """Continue a minimal resolution of ``M`` (or start one when ``res`` is None)."""
    ring_pres = M.ring
    if res is None:
        pres = prune_matrix(M.matrix)
        d1 = _select(ring_pres, pres)
        diffs = [d1] if d1.shape[1] else []
        if not diffs:
            return FreeResolution(ring_pres, [], [tuple(d1.row_degrees)], True, False)
    else:
        if not res.truncated or res.length >= max_step:
            return res
        diffs = list(res.differentials)
    truncated = True
    while True:
        if len(diffs) >= max_step:
            # one more syzygy step settles whether the resolution stops here
            syz = syzygy_matrix(ring_pres, diffs[-1])
            nxt = _select(ring_pres, syz) if syz.shape[1] else syz
            truncated = nxt.shape[1] > 0
            break
        syz = syzygy_matrix(ring_pres, diffs[-1])
        nxt = _select(ring_pres, syz) if syz.shape[1] else syz
        if nxt.shape[1] == 0:
            truncated = False
            break
        diffs.append(nxt)
    return FreeResolution(ring_pres, diffs, [], True, truncated)


def schreyer_resolution(M, max_step):
    """Non-minimal resolution: raw syzygy generators at every step.

    Columns that vanish in ``R`` are dropped; nothing else is pruned.
    """
    ring_pres = M.ring
    gb = _ideal_gb(ring_pres)
    diffs = [reduce_entries(ring_pres, M.matrix, gb)] if M.matrix.shape[1] else []
    truncated = True
    while diffs and len(diffs) < max_step:
        syz = reduce_entries(ring_pres, syzygy_matrix(ring_pres, diffs[-1]), gb)
        zero = [j for j in range(syz.shape[1]) if not syz.column(j)]
        syz = syz.delete(cols=zero)
        if syz.shape[1] == 0:
            truncated = False
            break
        diffs.append(syz)
    if not diffs:
        return FreeResolution(ring_pres, [], [tuple(M.matrix.row_degrees)], False, False)
    return FreeResolution(ring_pres, diffs, [], False, truncated)


def _next_degrees(matrix, row_degrees):
    cols = []
    for j in range(matrix.shape[1]):
        for i in range(matrix.shape[0]):
            x = matrix.entries[i][j]
            if x:
                cols.append(row_degrees[i] + weighted_degree(x))
                break
        else:
            raise ResolutionError(f"column {j} of the factorization matrix is zero")
    return cols


def mf_resolution(pair, M0, periods):
    """2-periodic resolution ``... -B-> F_3 -A-> F_2 -(M0)-> F_1 -> F_0``."""
    pair.check()
    ring_pres = M0.ring
    if pair.f not in ring_pres.relations and ring_pres.relations:
        gb = _ideal_gb(ring_pres)
        if not gb.contains({0: pair.f}):
            raise ResolutionError("f is not zero in the ring of M0")
    first = M0.matrix
    diffs = [first] if first.shape[1] else []
    rows = list(first.col_degrees)
    for step in range(2 * periods):
        mat = pair.A if step % 2 == 0 else pair.B
        cols = _next_degrees(mat, rows)
        diffs.append(GradedMatrix(mat.ring, mat.entries, rows, cols))
        rows = cols
    gb = _ideal_gb(ring_pres)
    for a, b in zip(diffs, diffs[1:]):
        if not compose_vanishes(ring_pres, a, b, gb):
            raise ResolutionError("consecutive differentials do not compose to zero")
    return FreeResolution(ring_pres, diffs, [], True, True)


def check_complex(res):
    """``d_{i-1} ∘ d_i = 0`` in ``R`` for every computed step."""
    gb = _ideal_gb(res.ring)
    return all(compose_vanishes(res.ring, a, b, gb) for a, b in zip(res.differentials, res.differentials[1:]))
