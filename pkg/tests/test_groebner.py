import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from gradedext.groebner import buchberger, monomial_hilbert_numerator, normal_form, syzygy_matrix
from gradedext.polyring import GradedMatrix, RingPresentation, WeightedRingSpec
from gradedext.ratfun import LaurentPolynomial


def ideal_gb(spec, *gens):
    return buchberger(spec, (0,), [{0: spec.poly(g)} for g in gens])


def generators(gb):
    return sorted(str(c[0]) for c in gb.columns())


def test_principal_ideal_is_its_own_basis():
    Q = WeightedRingSpec.standard("x v y u")
    gb = ideal_gb(Q, "x*v - y*u")
    assert len(gb.elements) == 1
    assert gb.contains({0: Q.poly("x*v - y*u")})


def test_monomial_ideal_is_its_own_basis():
    Q = WeightedRingSpec.standard("x y")
    gb = ideal_gb(Q, "x^2", "x*y")
    assert generators(gb) == sorted(str(Q.poly(g)) for g in ("x^2", "x*y"))


def test_s_pair_adds_cubic():
    Q = WeightedRingSpec.standard("x y w v u z")
    gb = ideal_gb(Q, "x*w - u*z", "y*w - v*z")
    assert len(gb.elements) == 3
    cubic = Q.poly("z*(x*v - y*u)")
    assert any(c[0] == cubic or c[0] == -cubic for c in gb.columns())
    assert gb.spairs_reduce_to_zero()


def test_normal_form_examples():
    Q = WeightedRingSpec.standard("x v y u")
    gb = ideal_gb(Q, "x*v - y*u")
    assert normal_form({0: Q.poly("x*v - y*u")}, gb) == {}
    assert normal_form({0: Q.poly("x*v")}, gb) == {0: Q.poly("y*u")}
    assert normal_form({0: Q.poly("y*u")}, gb) == {0: Q.poly("y*u")}


def test_normal_form_is_additive_and_idempotent():
    Q = WeightedRingSpec.standard("x y w v u z")
    gb = ideal_gb(Q, "x*w - u*z", "y*w - v*z")
    a = {0: Q.poly("x*y*w + z^3")}
    b = {0: Q.poly("y*w*u - v^2*z")}
    nf_a = normal_form(a, gb)
    assert normal_form(nf_a, gb) == nf_a
    total = {0: a[0] + b[0]}
    partial = {0: nf_a.get(0, Q.zero()) + b[0]}
    assert normal_form(total, gb) == normal_form(partial, gb)


def composes_to_zero(ring, A, S):
    gb = buchberger(ring.ambient, (0,), [{0: r} for r in ring.relations]) if ring.relations else None
    for j in range(S.shape[1]):
        for i in range(A.shape[0]):
            acc = ring.ambient.zero()
            for k in range(A.shape[1]):
                acc = acc + A[i, k] * S[k, j]
            if gb is None:
                assert acc.is_zero()
            else:
                assert normal_form({0: acc}, gb) == {}


def test_koszul_syzygy():
    Q = WeightedRingSpec.standard("x y")
    R = RingPresentation(Q)
    x, y = Q.gens()
    A = GradedMatrix(Q, [[x, y]], [0], [1, 1])
    S = syzygy_matrix(R, A)
    assert S.shape == (2, 1)
    assert S.col_degrees == (2,)
    assert {S[0, 0], S[1, 0]} in ({y, -x}, {-y, x})
    composes_to_zero(R, A, S)


def test_syzygies_over_quadric():
    Q = WeightedRingSpec.standard("x y u v")
    R = RingPresentation(Q, (Q.poly("x*v - y*u"),))
    x, y, u, v = Q.gens()
    A = GradedMatrix(Q, [[u, v]], [0], [1, 1])
    S = syzygy_matrix(R, A)
    assert sorted(S.col_degrees) == [2, 2]
    cols = {tuple(str(S[i, j]) for i in range(2)) for j in range(2)}
    signs = [{(str(v), str(-u)), (str(-v), str(u))}, {(str(-y), str(x)), (str(y), str(-x))}]
    assert all(cols & s for s in signs)
    composes_to_zero(R, A, S)


def test_nonzerodivisor_has_no_syzygies():
    Q = WeightedRingSpec.standard("x y")
    A = GradedMatrix(Q, [[Q.poly("x*y")]], [0], [2])
    assert syzygy_matrix(RingPresentation(Q), A).shape[1] == 0


def test_numerator_examples():
    Q4 = WeightedRingSpec.standard("x y u v")
    assert monomial_hilbert_numerator({0: [(1, 0, 0, 1)]}, Q4, (0,)) == LaurentPolynomial({0: 1, 2: -1})
    Q2 = WeightedRingSpec.standard("x y")
    got = monomial_hilbert_numerator({0: [(2, 0), (1, 1)]}, Q2, (0,))
    assert got == LaurentPolynomial({0: 1, 2: -2, 3: 1})
    assert monomial_hilbert_numerator({0: []}, Q2, (0,)) == LaurentPolynomial({0: 1})


def standard_monomial_counts(gens, weights, top):
    counts = [0] * (top + 1)
    ranges = [range(top // w + 1) for w in weights]
    for e in itertools.product(*ranges):
        d = sum(a * w for a, w in zip(e, weights))
        if d > top:
            continue
        if not any(all(a >= b for a, b in zip(e, g)) for g in gens):
            counts[d] += 1
    return counts


def series_counts(num, weights, top):
    # multiply the numerator by prod 1/(1 - t^w) degree by degree
    series = [0] * (top + 1)
    for e, c in num.items():
        if 0 <= e <= top:
            series[e] += int(c)
    for w in weights:
        for n in range(w, top + 1):
            series[n] += series[n - w]
    return series


@st.composite
def monomial_ideals(draw):
    nv = draw(st.integers(1, 4))
    weights = tuple(draw(st.lists(st.integers(1, 2), min_size=nv, max_size=nv)))
    gens = draw(st.lists(
        st.lists(st.integers(0, 4), min_size=nv, max_size=nv)
        .filter(lambda e: 0 < sum(e) <= 4).map(tuple),
        max_size=5))
    return weights, gens


@settings(max_examples=80, deadline=None)
@given(monomial_ideals())
def test_numerator_matches_brute_force(data):
    weights, gens = data
    spec = WeightedRingSpec(tuple(f"x{i}" for i in range(len(weights))), weights)
    num = monomial_hilbert_numerator({0: gens}, spec, (0,))
    assert series_counts(num, weights, 12) == standard_monomial_counts(gens, weights, 12)
