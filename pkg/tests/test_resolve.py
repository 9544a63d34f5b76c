import pytest

from gradedext.cli import parse_session
from gradedext.homalg import module_hilbert, ring_hilbert
from gradedext.polyring import GradedFreeModule, GradedMatrix, free_hilbert
from gradedext.ratfun import HilbertRational, LaurentPolynomial
from gradedext.resolve import (
    FreeResolution,
    MatrixFactorizationPair,
    ResolutionError,
    check_complex,
    format_resolution,
    mf_resolution,
    minimal_resolution,
    minimalize,
    schreyer_resolution,
)

QUADRIC = """
ring Q = poly(field: QQ; vars: x:1, y:1, u:1, v:1)
ring R = quotient(Q; x*v - y*u)
module M = coker(R; rowdeg: [0]; coldeg: [1,1]; matrix: [[u, v]])
"""


def quadric():
    return parse_session(QUADRIC)


def euler_characteristic(res):
    """Alternating sum of the free modules, as multiples of the ring series."""
    total = HilbertRational(0)
    for i, degs in enumerate(res.modules):
        twists = sum((LaurentPolynomial.monomial(a) for a in degs), LaurentPolynomial())
        h = ring_hilbert(res.ring) * HilbertRational(twists)
        total = total + h if i % 2 == 0 else total - h
    return total


def test_principal_ideal_resolution():
    s = parse_session("ring Q = poly(field: QQ; vars: x:1)\nmodule K = residue(Q)")
    res = minimal_resolution(s.module("K"), 5)
    assert res.modules == [(0,), (1,)]
    assert not res.truncated
    assert format_resolution(res, "Q") == "F_0 = Q\nF_1 = Q(-1)\nF_2 = 0"


def test_quadric_resolution_twists():
    s = quadric()
    res = minimal_resolution(s.module("M"), 4)
    assert res.modules == [(0,), (1, 1), (2, 2), (3, 3), (4, 4)]
    assert res.truncated and res.minimal
    assert check_complex(res)
    assert not res.has_unit_entry()
    assert "F_2 = R(-2)^2" in format_resolution(res)


def test_resolution_over_hypersurface_section():
    text = """
ring Qp = poly(field: QQ; vars: x:1, y:1, z:1, u:1, v:1, w:1)
ring S = quotient(Qp; x*v - y*u, x*w - u*z, y*w - v*z, w)
module Mp = coker(S; rowdeg: [0]; coldeg: [1,1,1]; matrix: [[u, v, w]])
"""
    res = minimal_resolution(parse_session(text).module("Mp"), 2)
    assert res.modules == [(0,), (1, 1), (2, 2, 2, 2)]
    assert check_complex(res)


def factorization(s):
    Q = s.ring("R").ambient
    x, y, u, v = Q.gens()
    A = GradedMatrix(Q, [[v, -y], [-u, x]], [0, 0], [1, 1])
    B = GradedMatrix(Q, [[x, y], [u, v]], [0, 0], [1, 1])
    return MatrixFactorizationPair(A, B, Q.poly("x*v - y*u"))


def test_matrix_factorization_resolution():
    s = quadric()
    res = mf_resolution(factorization(s), s.module("M"), 2)
    assert res.modules == [(0,), (1, 1), (2, 2), (3, 3), (4, 4), (5, 5)]
    assert res.modules[:5] == minimal_resolution(s.module("M"), 4).modules
    assert check_complex(res)
    assert mf_resolution(factorization(s), s.module("M"), 0).length == 1


def test_matrix_factorization_pair_is_checked():
    s = quadric()
    good = factorization(s)
    bad = MatrixFactorizationPair(good.A, good.A, good.f)
    with pytest.raises(ResolutionError):
        mf_resolution(bad, s.module("M"), 1)


def test_minimalize_keeps_minimal_input():
    s = quadric()
    res = minimal_resolution(s.module("M"), 3)
    again = minimalize(res)
    assert again.modules == res.modules
    assert again.differentials == res.differentials


def test_minimalize_removes_split_summand():
    s = quadric()
    res = minimal_resolution(s.module("M"), 2)
    Q = s.ring("R").ambient
    d1, d2 = res.differentials
    # pad F_1 and F_2 with a copy of R(-1) mapped isomorphically onto itself
    one = Q.one()
    zero = Q.zero()
    d1p = GradedMatrix(Q, [list(row) + [zero] for row in d1.entries], d1.row_degrees, d1.col_degrees + (1,))
    d2_rows = [list(row) + [zero] for row in d2.entries] + [[zero] * d2.shape[1] + [one]]
    d2p = GradedMatrix(Q, d2_rows, d1p.col_degrees, d2.col_degrees + (1,))
    padded = FreeResolution(res.ring, [d1p, d2p], [], False, True)
    assert check_complex(padded)
    assert padded.has_unit_entry()
    assert minimalize(padded).modules == res.modules


def test_schreyer_then_minimalize():
    s = quadric()
    raw = schreyer_resolution(s.module("M"), 4)
    assert check_complex(raw)
    assert minimalize(raw).betti()[:4] == [1, 2, 2, 2]


def test_euler_characteristic_matches_hilbert_series():
    text = """
ring Q = poly(field: QQ; vars: x:1, y:2, z:1)
module A = coker(Q; rowdeg: [0]; coldeg: [2, 3, 2]; matrix: [[x*z, x*y, y]])
"""
    M = parse_session(text).module("A")
    res = minimal_resolution(M, 6)
    assert not res.truncated
    assert euler_characteristic(res) == module_hilbert(M)


def test_free_hilbert_of_resolution_over_polynomial_ring():
    s = parse_session("ring Q = poly(field: QQ; vars: x:1, y:1)\nmodule K = residue(Q)")
    res = minimal_resolution(s.module("K"), 4)
    spec = s.ring("Q").ambient
    alt = sum((free_hilbert(GradedFreeModule(d), spec) * (-1) ** i for i, d in enumerate(res.modules)), HilbertRational(0))
    assert alt == 1
