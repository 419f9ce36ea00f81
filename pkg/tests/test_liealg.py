from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from nilnorm.liealg import (LieComb, OrbitElement, bracket, bracket_filtered, comb_bracket,
                            comb_to_vectorfield, corollary_bracket, parse_element,
                            vectorfield_to_comb)
from nilnorm.polyvf import DimensionError, oracle_bracket, parse_cpoly
from nilnorm.sl2rep import triple
from nilnorm.symcoeff import ParamPoly

F = Fraction


def E3(l, mu, k=0):
    return OrbitElement(3, l, mu, k)


def test_element_text():
    e = parse_element("A[2, 3, 0]")
    assert e == E3(2, 3) and str(e) == "A[2,3,0]"
    assert parse_element("A[1,2]") == OrbitElement(2, 1, 2)
    assert str(OrbitElement(2, 1, 2)) == "A[1,2]"
    with pytest.raises(ValueError):
        parse_element("A[7,3,0]")
    with pytest.raises(DimensionError):
        parse_element("A[1,2]", dim=3)
    with pytest.raises(ValueError):
        parse_element("B[1,2]")


def test_grades():
    assert E3(0, 1).grade == 1
    assert E3(3, 2, 1).grade == 4
    assert OrbitElement(2, 2, 5).grade == 5


def test_golden_bracket_small_weights():
    got = bracket(E3(2, 3), E3(14, 13))
    assert got.terms == {
        E3(16, 16, 0): F(325, 16182),
        E3(14, 14, 1): F(-208, 93),
        E3(12, 12, 2): F(-7192640, 2001),
        E3(10, 10, 3): F(146578432, 23),
    }


def test_golden_bracket_with_delta():
    got = bracket(E3(8, 7, 2), E3(5, 7, 1))
    assert got.terms == {
        E3(13, 14, 3): F(-1001, 4011660),
        E3(11, 12, 4): F(-4004, 200583),
        E3(9, 10, 5): F(13505184, 482885),
        E3(7, 8, 6): F(-53760000, 5681),
        E3(5, 6, 7): F(5268480000, 3553),
        E3(3, 4, 8): F(-4330871193600, 46189),
        E3(1, 2, 9): F(312134860800, 221),
    }


def test_2d_bracket():
    for nu in range(1, 4):
        for m in range(1, 5):
            assert bracket(OrbitElement(2, 0, nu), OrbitElement(2, 0, m)).terms == (
                {OrbitElement(2, 0, m + nu): m - nu} if m != nu else {})
    # the binomial ratio is needed: [A^0_1, A^1_2] = (1)(C(2,1)/C(3,1)) A^1_3
    assert bracket(OrbitElement(2, 0, 1), OrbitElement(2, 1, 2)).terms == {OrbitElement(2, 1, 3): F(2, 3)}


def test_worked_example_bracket_table():
    assert bracket(E3(0, 1), E3(4, 2)).terms == {E3(4, 3): F(1, 15), E3(2, 1, 1): F(48, 5)}
    assert bracket(E3(0, 1), E3(0, 0, 1)).terms == {E3(0, 1, 1): 1}
    assert bracket(E3(0, 1), E3(1, 2)).terms == {E3(1, 3): F(2, 3)}
    assert bracket(E3(0, 1), E3(0, 2)).terms == {E3(0, 3): 1}
    assert bracket(E3(0, 1), E3(2, 2)).terms == {E3(2, 3): F(2, 5), E3(0, 1, 1): F(8, 5)}
    assert bracket(E3(0, 1), E3(3, 2)).terms == {E3(3, 3): F(1, 5), E3(1, 1, 1): F(24, 5)}


def test_filtered_and_corollary():
    assert bracket_filtered(E3(0, 1), E3(2, 2), 0).terms == {E3(2, 3): F(2, 5)}
    assert bracket_filtered(E3(0, 1), E3(2, 2), 10) == bracket(E3(0, 1), E3(2, 2))
    rng = random.Random(5)
    for _ in range(60):
        mu1, mu2 = rng.randint(0, 4), rng.randint(0, 4)
        e1 = E3(rng.randint(0, 2 * mu1), mu1, rng.randint(0, 2))
        e2 = E3(rng.randint(0, 2 * mu2), mu2, rng.randint(0, 2))
        assert bracket_filtered(e1, e2, e1.k + e2.k) == corollary_bracket(e1, e2)
    with pytest.raises(DimensionError):
        bracket_filtered(OrbitElement(2, 0, 1), OrbitElement(2, 0, 2), 0)


def test_additivity_of_grade_and_h_weight():
    rng = random.Random(11)
    for _ in range(200):
        mu1, mu2 = rng.randint(0, 5), rng.randint(0, 5)
        e1 = E3(rng.randint(0, 2 * mu1), mu1, rng.randint(0, 2))
        e2 = E3(rng.randint(0, 2 * mu2), mu2, rng.randint(0, 2))
        for e in bracket(e1, e2).terms:
            assert e.grade == e1.grade + e2.grade
            assert e.h_weight == e1.h_weight + e2.h_weight


def test_comb_bracket_with_n():
    N = LieComb.nilpotent(3)
    assert not comb_bracket(N, LieComb.single(E3(4, 2, 1)))
    a = ParamPoly.symbol("a")
    assert comb_bracket(N, LieComb.single(E3(0, 1), a)) == LieComb.single(E3(1, 1), a)
    u = LieComb(3, {E3(0, 1): 2, E3(1, 2): a}, n=1)
    assert not comb_bracket(u, u)


def test_realization():
    x, y, z = (parse_cpoly(s, 3) for s in "xyz")
    v = comb_to_vectorfield(LieComb.single(E3(0, 1)))
    assert v.components == (x * z, y * z, z * z)
    assert comb_to_vectorfield(LieComb.nilpotent(3)) == triple(3)["N"]
    assert comb_to_vectorfield(LieComb.single(E3(1, 1))) == triple(3)["E"].times(y.scale(2))
    w = LieComb(3, {E3(2, 2, 1): F(3, 7), E3(0, 0, 1): -1}, n=1)
    assert vectorfield_to_comb(comb_to_vectorfield(w)) == w


def test_json_round_trip():
    a = ParamPoly.symbol("a[1,1,0]")
    w = LieComb(3, {E3(1, 1): a * 2 - 1, E3(0, 2): F(-3, 4)}, n=1)
    assert LieComb.from_json(w.to_json()) == w
    obj = w.to_json_obj()
    assert obj["N"] is True
    assert [t["coeff"] for t in obj["terms"]] == ["2*a[1,1,0] - 1", "-3/4"]


def _elements(dim, mu_max, k_max):
    out = []
    for mu in range(mu_max + 1):
        for k in range(k_max + 1):
            for l in range((2 * mu if dim == 3 else mu) + 1):
                out.append(OrbitElement(dim, l, mu, k))
    return out


combs3 = st.dictionaries(st.sampled_from(_elements(3, 3, 1)),
                         st.fractions(min_value=-2, max_value=2, max_denominator=3), max_size=3)


@settings(max_examples=25, deadline=None)
@given(combs3, combs3, combs3)
def test_jacobi_and_antisymmetry(t1, t2, t3):
    u, v, w = (LieComb(3, t) for t in (t1, t2, t3))
    assert comb_bracket(u, v) == -comb_bracket(v, u)
    jac = (comb_bracket(u, comb_bracket(v, w)) + comb_bracket(v, comb_bracket(w, u))
           + comb_bracket(w, comb_bracket(u, v)))
    assert not jac


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(_elements(3, 3, 1)), st.sampled_from(_elements(3, 3, 1)))
def test_bracket_matches_vector_fields(e1, e2):
    lhs = comb_to_vectorfield(bracket(e1, e2))
    rhs = oracle_bracket(comb_to_vectorfield(LieComb.single(e1)), comb_to_vectorfield(LieComb.single(e2)))
    assert lhs == rhs
