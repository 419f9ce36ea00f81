from fractions import Fraction
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from nilnorm.liealg import LieComb, OrbitElement, bracket, comb_bracket, comb_to_vectorfield
from nilnorm.normalform import (COMMUTATOR, EXP, GradingError, NFProblem, NumericModeError,
                                apply_transform, detect_leading, example_input, first_level,
                                grade_2d, grade_3d, grade_delta0, normal_form,
                                predicted_slots_2d, replay, second_level, solve_generator_chain,
                                worked_example)
from nilnorm.polyvf import oracle_bracket
from nilnorm.sl2rep import triple
from nilnorm.symcoeff import ParamPoly

F = Fraction


def A2(l, mu):
    return OrbitElement(2, l, mu)


def A3(l, mu, k=0):
    return OrbitElement(3, l, mu, k)


def field(dim, terms):
    return LieComb(dim, terms, n=1)


def random_2d(rng, nu1, max_grade, lead=1):
    terms = {}
    for mu in range(nu1, max_grade + 1):
        for l in range(mu + 1):
            terms[A2(l, mu)] = F(rng.randint(-5, 5), rng.randint(1, 3))
    for mu in range(1, nu1):
        for l in range(1, mu + 1):
            terms[A2(l, mu)] = F(rng.randint(-5, 5), rng.randint(1, 3))
    terms[A2(0, nu1)] = F(lead)
    return field(2, terms)


def random_3d(rng, max_grade, lead_mu=1):
    terms = {}
    for k in range(max_grade // 2 + 1):
        for mu in range(max_grade - 2 * k + 1):
            if mu + 2 * k == 0:
                continue
            for l in range(2 * mu + 1):
                terms[A3(l, mu, k)] = F(rng.randint(-4, 4), rng.randint(1, 3))
    for mu in range(lead_mu):
        terms.pop(A3(0, mu, 0), None)
    terms[A3(0, lead_mu, 0)] = F(2)
    return field(3, terms)


# gradings ------------------------------------------------------------------

def test_grade_examples():
    assert grade_delta0(A3(0, 1)) == 1
    assert grade_delta0(A3(3, 2, 1)) == 4
    assert grade_delta0(A2(2, 5)) == 5
    for nu1 in (1, 2, 3):
        assert grade_2d(A2(0, nu1), nu1) == 2 * nu1
        assert grade_2d(A2(1, 4), nu1) == 2 * (4 + nu1)
    assert grade_2d(A2(2, 3), 1) == 10
    assert grade_3d(A3(0, 3, 2), 3, 2) == 3 + 4
    assert grade_3d(A3(2, 1, 0), 1, 0) == 3


def test_grade_additivity_under_bracket():
    rng = random.Random(3)
    for _ in range(300):
        r, s = rng.randint(0, 3), rng.randint(0, 2)
        mu1, mu2 = rng.randint(0, 4), rng.randint(0, 4)
        e1 = A3(rng.randint(0, 2 * mu1), mu1, rng.randint(0, 2))
        e2 = A3(rng.randint(0, 2 * mu2), mu2, rng.randint(0, 2))
        for e in bracket(e1, e2).terms:
            assert grade_3d(e, r, s) == grade_3d(e1, r, s) + grade_3d(e2, r, s)
        # N shifts l by one and carries r + 2s
        if e1.l < 2 * e1.mu:
            assert grade_3d(e1.shifted(1), r, s) == grade_3d(e1, r, s) + r + 2 * s
    for nu1 in (1, 2, 3):
        for m1 in range(1, 5):
            for m2 in range(1, 5):
                for l1 in range(m1 + 1):
                    for l2 in range(m2 + 1):
                        for e in bracket(A2(l1, m1), A2(l2, m2)).terms:
                            assert grade_2d(e, nu1) == grade_2d(A2(l1, m1), nu1) + grade_2d(A2(l2, m2), nu1)


# apply_transform -------------------------------------------------------------

def test_apply_transform_removes_orbit_term():
    for s in range(1, 5):
        v = field(2, {A2(1, s): 1})
        assert apply_transform(v, LieComb.single(A2(0, s)), 6) == LieComb.nilpotent(2)


def test_apply_transform_identity_and_errors():
    v = field(3, {A3(1, 1): 3, A3(0, 2): 1})
    assert apply_transform(v, LieComb(3), 4) == v
    with pytest.raises(GradingError):
        apply_transform(v, LieComb.nilpotent(3), 4)
    with pytest.raises(GradingError):
        apply_transform(v, LieComb.single(A3(0, 0, 0)), 4)
    with pytest.raises(ValueError):
        apply_transform(v, LieComb.single(A3(0, 1)), 4, mode="bogus")


def test_apply_transform_is_a_flow():
    # exp(ad_T) exp(ad_{-T}) is the identity modulo the truncation
    rng = random.Random(9)
    v = random_3d(rng, 4)
    T = LieComb(3, {A3(0, 1): F(1, 2), A3(1, 2): -1, A3(0, 0, 1): 3})
    assert apply_transform(apply_transform(v, T, 4), T.scale(-1), 4) == v.truncate(4)


def test_apply_transform_matches_vector_field_flow():
    # independent route: the same series built from componentwise brackets
    rng = random.Random(4)
    v = random_3d(rng, 3)
    T = LieComb(3, {A3(0, 1): F(2, 3), A3(2, 1): -1, A3(1, 2): F(1, 2)})
    Tf = comb_to_vectorfield(T)
    acc = term = comb_to_vectorfield(v)
    for j in range(1, 6):
        term = oracle_bracket(Tf, term).scale(F(1, j))
        acc = acc + term
    want = apply_transform(v, T, 3)
    from nilnorm.liealg import vectorfield_to_comb
    got = vectorfield_to_comb(acc).truncate(3)
    assert got == want


# level 1 -----------------------------------------------------------------------

def test_first_level_keeps_pure_kernel_input():
    v = field(3, {A3(0, 1): 1, A3(0, 0, 1): 2, A3(0, 3): -1})
    rep = first_level(NFProblem(3, v, 4))
    assert rep.result == v and rep.stages[0].generators == []


def test_first_level_two_step_elimination():
    a = F(5, 2)
    rep = first_level(NFProblem(3, field(3, {A3(2, 1): a}), 3))
    assert rep.result == LieComb.nilpotent(3)
    assert rep.stages[0].generators[0] == LieComb.single(A3(1, 1), a)


@pytest.mark.parametrize("dim,seed", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_first_level_lands_in_ker_M(dim, seed):
    rng = random.Random(seed)
    v = random_2d(rng, 1, 5) if dim == 2 else random_3d(rng, 4)
    rep = first_level(NFProblem(dim, v, 5 if dim == 2 else 4))
    out = rep.result
    assert all(e.l == 0 for e in out.terms)
    M = triple(dim)["M"]
    vf = comb_to_vectorfield(out.nonlinear())
    assert not oracle_bracket(M, vf)
    assert replay(v, rep.stages[0].generators, rep.problem.max_grade) == out


def test_first_level_symbolic_exp_equals_commutator():
    p = NFProblem(3, example_input(3), 3, "symbolic")
    assert first_level(p, EXP).result == first_level(p, COMMUTATOR).result


def test_worked_example_single_step_rules_differ_at_grade_three():
    # one combined grade 1+2 generator: the quadratic term of the series matters
    v1c, _, _ = worked_example(COMMUTATOR)
    v1e, _, _ = worked_example(EXP)
    assert v1c.filter(lambda e: e.grade <= 2) == v1e.filter(lambda e: e.grade <= 2)
    assert v1c.coeff(A3(0, 1, 1)) != v1e.coeff(A3(0, 1, 1))
    # the sequential pass equals the combined exponential
    p = NFProblem(3, example_input(3), 3, "symbolic")
    _, v2e, _ = worked_example(EXP)
    assert first_level(p).result == v2e


def test_worked_example_independent_route():
    # rebuild v + [T, v] from realized vector fields and re-decompose
    from nilnorm.liealg import vectorfield_to_comb
    v0 = example_input(3)
    v1, _, (T12, _) = worked_example(COMMUTATOR)
    vf = comb_to_vectorfield(v0)
    out = vf + oracle_bracket(comb_to_vectorfield(T12), vf)
    comps = []
    for c in out.components:
        comps.append(type(c)(c.dim, {e: x for e, x in c.terms.items() if sum(e) <= 4}))
    assert vectorfield_to_comb(type(out)(comps)) == v1


# generator chains ------------------------------------------------------------------

def test_chain_single_step():
    a = F(3)
    X = field(3, {A3(0, 1): a})
    T, (res, slot), rest = solve_generator_chain(X, A3(1, 2))
    assert T == LieComb.single(A3(0, 2), -1)
    assert slot == A3(0, 3)
    # [X, -A^0_2] + A^1_2 = -a [A^0_1, A^0_2] = -a * (2 - 1) * A^0_3
    assert res == -a
    assert not rest


@pytest.mark.parametrize("nu1,m,n", [(1, 2, 2), (2, 3, 3), (1, 4, 4), (3, 2, 2), (2, 5, 3)])
def test_chain_2d(nu1, m, n):
    a = F(-2, 3)
    X = field(2, {A2(0, nu1): a})
    T, (res, slot), rest = solve_generator_chain(X, A2(n, m))
    assert T.coeff(A2(n - 1, m)) == -1
    assert slot == A2(0, m + n * nu1)
    assert not rest
    lhs = comb_bracket(X, T) + LieComb.single(A2(n, m))
    assert lhs == LieComb.single(slot, res)
    # nonzero unless some step hits equal delta_0 grades
    degenerate = any(m + i * nu1 == nu1 for i in range(n))
    assert (res == 0) == degenerate


def test_chain_3d_residual_slot():
    X = field(3, {A3(0, 2, 0): F(1)})
    T, (res, slot), rest = solve_generator_chain(X, A3(3, 2, 1))
    assert slot == A3(0, 2 + 3 * 2, 1)
    assert res != 0
    lhs = comb_bracket(X, T) + LieComb.single(A3(3, 2, 1))
    assert lhs == LieComb.single(slot, res) + rest
    assert all(e.k > 1 for e in rest.terms)


def test_chain_errors():
    with pytest.raises(ValueError):
        solve_generator_chain(field(2, {A2(0, 1): 0}), A2(1, 2))
    with pytest.raises(ValueError):
        solve_generator_chain(field(2, {A2(0, 1): 1}), A2(0, 2))
    with pytest.raises(ValueError):
        solve_generator_chain(field(2, {A2(1, 1): 1}), A2(1, 2))


# leading data ------------------------------------------------------------------------

def test_detect_leading():
    lead = detect_leading(field(2, {A2(0, 2): 1, A2(0, 5): 3}))
    assert (lead.nu1, lead.nu2) == (2, 5)
    assert detect_leading(LieComb.nilpotent(2)).empty
    lead = detect_leading(field(3, {A3(0, 2, 1): 1}))
    assert lead.per_s == {1: 2} and (lead.r_s, lead.s) == (2, 1)


# levels 2 and 3 ---------------------------------------------------------------------------

def test_kernel_slot_survives_level_two():
    # N + A^0_1 + c A^0_3: s = 3 is the m = nu1 slot, outside the image of ad_X
    c = F(7)
    p = NFProblem(2, field(2, {A2(0, 1): 1, A2(0, 3): c}), 8)
    rep = normal_form(p)
    assert rep.stage(2).result.coeff(A2(0, 3)) == c
    assert A2(0, 3) not in rep.stage(2).removed


def test_second_level_image_at_kernel_slot():
    # the whole weight-3 image of ad_X is spanned by A^1_2 + A^0_3
    X = field(2, {A2(0, 1): F(1)})
    imgs = [comb_bracket(LieComb.single(e), X) for e in (A2(0, 2), A2(1, 1))]
    assert imgs[0] == LieComb(2, {A2(1, 2): -1, A2(0, 3): -1})
    assert not imgs[1]


def test_second_level_removes_predicted_slots():
    rng = random.Random(17)
    for nu1 in (1, 2, 3):
        mg = 4 * (1 + nu1)
        rep = normal_form(NFProblem(2, random_2d(rng, nu1, mg), mg), levels=2)
        pred = predicted_slots_2d(nu1, mg)
        assert sorted(e.mu for e in rep.stage(2).removed) == pred["level2"]
        for s in pred["level2"]:
            assert rep.result.coeff(A2(0, s)) == 0
        assert all(e.l == 0 for e in rep.result.terms)


def test_third_level_removes_proof_slot():
    rng = random.Random(23)
    for nu1 in (1, 2, 3):
        mg = 4 * (1 + nu1)
        rep = normal_form(NFProblem(2, random_2d(rng, nu1, mg), mg))
        nu2 = rep.leading.nu2
        want = predicted_slots_2d(nu1, mg, nu2)["level3"]
        assert [e.mu for e in rep.stage(3).removed] == want
        for s in want:
            assert rep.result.coeff(A2(0, s)) == 0


def test_level_three_without_second_term_is_noop():
    v = field(2, {A2(0, 2): 1})
    rep = normal_form(NFProblem(2, v, 6))
    assert rep.result == v
    assert "unique" in rep.stage(3).note


def test_levels_are_idempotent():
    rng = random.Random(31)
    v = random_2d(rng, 2, 10)
    p = NFProblem(2, v, 10)
    rep = normal_form(p)
    again = normal_form(NFProblem(2, rep.result, 10))
    assert again.result == rep.result
    assert all(not stage.generators for stage in again.stages)


def test_generators_are_homogeneous():
    rng = random.Random(37)
    nu1 = 2
    rep = normal_form(NFProblem(2, random_2d(rng, nu1, 12), 12))
    for T in rep.stage(2).generators:
        assert len({grade_2d(e, nu1) for e in T.terms}) == 1


def test_3d_second_level_slot_family():
    rng = random.Random(41)
    for r in (1, 2):
        mg = 7
        rep = normal_form(NFProblem(3, random_3d(rng, mg, lead_mu=r), mg), levels=2)
        removed = set(rep.stage(2).removed)
        for m in range(0, mg + 1):
            for k in range(0, mg):
                if m + 2 * k == r or m + 2 * k == 0:
                    continue  # equal delta_0 grade: the kernel case
                slot = A3(0, m + r + 2 * m * r, k)
                if slot.grade <= mg:
                    assert slot in removed, (r, m, k)
                    assert rep.result.coeff(slot) == 0
        assert all(e.l == 0 for e in rep.result.terms)


def test_3d_removes_the_delta_slot_of_the_worked_example_shape():
    # with a^0_{1,0} != 0 the kernel generator delta*E clears A^0_{1,1}
    X = field(3, {A3(0, 1): F(1)})
    img = comb_bracket(LieComb.single(A3(0, 0, 1)), X)
    assert img == LieComb.single(A3(0, 1, 1), -1)
    v = field(3, {A3(0, 1): 1, A3(0, 1, 1): 5, A3(0, 2): 1})
    rep = normal_form(NFProblem(3, v, 3))
    assert rep.result.coeff(A3(0, 1, 1)) == 0


def test_3d_delta_led_field_is_left_alone():
    v = field(3, {A3(0, 1, 1): 1, A3(0, 2, 1): 2})
    rep = normal_form(NFProblem(3, v, 6))
    assert rep.stage(2).result == rep.stage(1).result
    assert "unbounded" in rep.stage(2).note


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 6), st.integers(0, 3), st.integers(0, 6), st.integers(0, 3), st.integers(1, 3))
def test_equal_grade_kernel_generators_hit_distinct_slots(m1, k1, m2, k2, r):
    g1 = grade_3d(A3(2 * m1, m1, k1), r, 0)
    g2 = grade_3d(A3(2 * m2, m2, k2), r, 0)
    if (m1, k1) != (m2, k2) and g1 == g2:
        assert (m1 + r + 2 * m1 * r, k1) != (m2 + r + 2 * m2 * r, k2)


def test_numeric_mode_required_for_higher_levels():
    p = NFProblem(3, example_input(2), 2, "symbolic")
    rep = first_level(p)
    with pytest.raises(NumericModeError):
        second_level(p, rep)
    with pytest.raises(NumericModeError):
        NFProblem(2, field(2, {A2(0, 1): ParamPoly.symbol("a")}), 3)


def test_problem_validation():
    with pytest.raises(ValueError):
        NFProblem(2, LieComb(2, {A2(0, 1): 1}), 3)
    with pytest.raises(GradingError):
        NFProblem(3, field(3, {A3(0, 0, 0): 1}), 3)
    with pytest.raises(ValueError):
        NFProblem(2, field(2, {A2(0, 1): 1}), 0)


def test_report_json():
    rng = random.Random(2)
    p = NFProblem(2, random_2d(rng, 1, 6), 6)
    rep = normal_form(p)
    obj = json.loads(rep.to_json())
    assert [lv["level"] for lv in obj["levels"]] == [1, 2, 3]
    assert LieComb.from_json_obj(obj["result"]) == rep.result
    assert NFProblem.from_json_obj(obj["problem"]).input == p.input
    assert obj["leading"]["nu1"] == 1


def test_conjugacy_replay_random():
    rng = random.Random(53)
    for dim in (2, 3):
        v = random_2d(rng, 2, 9) if dim == 2 else random_3d(rng, 5)
        mg = 9 if dim == 2 else 5
        rep = normal_form(NFProblem(dim, v, mg))
        for stage in rep.stages:
            assert replay(stage.source, stage.generators, mg) == stage.result
        assert replay(v, rep.generators, mg) == rep.result
