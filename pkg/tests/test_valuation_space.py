import math
import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tamespace.admissible_geometry import AdmissibleInequality
from tamespace.errors import PreconditionError
from tamespace.field_poly import GF, QQ, Polynomial, parse_polynomial, variables
from tamespace.tame_group import TameWord, compose, invert, parse_word
from tamespace.valuation_space import (
    INF,
    ProjWeight,
    ValuationPoint,
    alpha_plus,
    fixed_inequalities,
    fixes,
    moved_valuation_witness,
    nu_eval,
    point_eval,
    points_equal,
    rho,
    rho_plus,
)

from conftest import fields, polys, weights

x1, x2 = variables(2)
z1, z2, z3 = variables(3)


def P3(text):
    return parse_polynomial(text, 3)


TRIPODE = parse_word('elem 2 "x1"\nperm [2,1]')  # (x2, x1 + x2)


def test_nu_eval_examples():
    assert nu_eval((2, 1), x1 + x2 ** 3) == -3
    assert nu_eval((2, 1), Polynomial.constant(2, 7)) == 0
    assert nu_eval((2, 1), Polynomial.zero(2)) == INF


def test_point_eval_examples():
    nu = ValuationPoint(TRIPODE, (2, 1))
    assert point_eval(nu, x1) == -1
    std = ValuationPoint.standard((3, 1))
    assert point_eval(std, x1 * x2) == nu_eval((3, 1), x1 * x2)


def test_inverse_components_have_valuation_minus_alpha():
    # the images of the inverse components sit at -α_i under the minimum convention
    f = parse_word('elem 1 "x2^2 + x3"\naff [[1,1,0],[0,2,0],[0,0,1]] [0,1,0]', 3)
    alpha = (5, 3, 2)
    nu = ValuationPoint(f, alpha)
    for i, gi in enumerate(invert(f).components):
        assert point_eval(nu, gi) == -alpha[i]


def test_alpha_plus():
    assert alpha_plus((1, 3, 2)) == (3, 2, 1)
    assert alpha_plus((3, 2, 1)) == (3, 2, 1)
    assert alpha_plus((2, 2, 1)) == (2, 2, 1)


def test_fixed_inequalities_examples():
    g = TameWord.elementary(0, z2 ** 2 * z3)
    assert fixed_inequalities(g) == [AdmissibleInequality(0, (0, 2, 1))]
    ex = TameWord.triangular((z1 + 5 * z3 ** 3 + 7 * z2 * z3, z2 + 3 * z3 ** 2, z3))
    got = {(c.i, c.m) for c in fixed_inequalities(ex)}
    assert got == {(0, (0, 0, 3)), (0, (0, 1, 1)), (1, (0, 0, 2))}
    assert fixed_inequalities(TameWord.identity(3)) == []


def test_fixes_examples():
    ex = TameWord.triangular((z1 + 5 * z3 ** 3 + 7 * z2 * z3, z2 + 3 * z3 ** 2, z3))
    assert fixes(ex, (3, 2, 1))
    g = TameWord.elementary(0, z2 * z3)
    assert fixes(g, (2, 1, 1))
    assert not fixes(g, (3, 2, 2))


@given(st.permutations(range(3)), st.lists(st.integers(1, 3), min_size=3, max_size=3))
def test_permutation_fixes_iff_weight_invariant(perm, alpha):
    s = TameWord.permutation(tuple(perm))
    moved = tuple(alpha[perm.index(i)] for i in range(3))
    assert fixes(s, alpha) == (moved == tuple(alpha))


def test_points_equal_examples():
    assert points_equal(ValuationPoint.standard((1, 2)), ValuationPoint(TRIPODE, (2, 1)))
    g = TameWord.elementary(0, x2 ** 3)
    assert points_equal(ValuationPoint.standard((3, 1)), ValuationPoint(g, (3, 1)))
    assert not points_equal(ValuationPoint.standard((3, 1)), ValuationPoint.standard((2, 1)))


def test_four_apartment_gluings():
    g = TameWord.elementary(0, x2 ** 3)
    h = TameWord.elementary(1, x1 ** 2)
    gh = compose(g, h)
    pts = {
        "id": ValuationPoint.standard((3, 1)),
        "g": ValuationPoint(g, (3, 1)),
    }
    assert points_equal(pts["id"], pts["g"])
    # E_h meets E_id along weights with a2 >= 2 a1
    assert points_equal(ValuationPoint.standard((1, 2)), ValuationPoint(h, (1, 2)))
    assert not points_equal(ValuationPoint.standard((1, 1)), ValuationPoint(h, (1, 1)))
    # E_gh meets E_g on the same wall
    assert points_equal(ValuationPoint(g, (1, 3)), ValuationPoint(gh, (1, 3)))


def test_rho_examples():
    assert rho_plus(ValuationPoint(TRIPODE, (1, 2))) == ProjWeight.of((2, 1))
    assert rho_plus(ValuationPoint.standard((3, 2, 1))) == ProjWeight.of((3, 2, 1))
    upper = parse_word("aff [[1,2,3],[0,1,4],[0,0,5]]\nelem 1 \"x2^2\"", 3)
    assert rho(ValuationPoint(upper, (3, 2, 1))) == ProjWeight.of((3, 2, 1))
    assert rho(ValuationPoint.standard((1, 3, 2))) == ProjWeight.of((1, 3, 2))
    sigma = (1, 2, 0)
    got = rho(ValuationPoint(TameWord.permutation(sigma), (3, 2, 1)))
    want = [None] * 3
    for k in range(3):
        want[sigma[k]] = (3, 2, 1)[k]
    assert got == ProjWeight.of(want)


@given(weights(3), st.sampled_from(list(permutations(range(3)))),
       st.sampled_from([QQ, GF(5)]).flatmap(lambda F: polys(3, F, max_deg=3)))
def test_permutation_equivariance(alpha, perm, P):
    f = parse_word('elem 1 "x2^2"\nelem 2 "x3"', 3, P.field)
    s = TameWord.permutation(perm, P.field)
    moved = [None] * 3
    for k in range(3):
        moved[perm[k]] = alpha[k]
    left = point_eval(ValuationPoint(compose(f, s), alpha), P)
    right = point_eval(ValuationPoint(f, tuple(moved)), P)
    assert left == right


@given(weights(3), fields.flatmap(lambda F: st.tuples(polys(3, F), polys(3, F))))
def test_valuation_axioms(alpha, pq):
    P, Q = pq
    assert nu_eval(alpha, P * Q) == nu_eval(alpha, P) + nu_eval(alpha, Q)
    assert nu_eval(alpha, P + Q) >= min(nu_eval(alpha, P), nu_eval(alpha, Q))


@given(weights(3), st.integers(0, 2 ** 32))
def test_linear_forms_bound(alpha, seed):
    rng = random.Random(seed)
    xs = variables(3)
    while True:
        A = [[Fraction(rng.randint(-2, 2)) for _ in range(3)] for _ in range(3)]
        det = (A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
               - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
               + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]))
        if det:
            break
    forms = [sum((c * x for c, x in zip(row, xs)), Polynomial.zero(3)) for row in A]
    ap = alpha_plus(alpha)
    for i in range(3):
        chosen = forms[i:]
        assert -sum(nu_eval(alpha, l) for l in chosen) >= sum(ap[i:])


def _random_point(rng):
    frames = [TameWord.identity(2), TRIPODE, TameWord.elementary(0, x2 ** 2),
              TameWord.elementary(1, x1), TameWord.permutation((1, 0))]
    f = rng.choice(frames)
    for _ in range(rng.randint(0, 2)):
        f = compose(f, rng.choice(frames))
    return ValuationPoint(f, (rng.choice((1, 2, 3)), rng.choice((1, 2))))


def test_points_equal_is_equivalence(rng):
    for _ in range(300):
        a, b, c = (_random_point(rng) for _ in range(3))
        assert points_equal(a, a)
        assert points_equal(a, b) == points_equal(b, a)
        if points_equal(a, b) and points_equal(b, c):
            assert points_equal(a, c)


def test_points_equal_ignores_sorting_choice():
    # repeated entries: any sorting permutation gives the same verdict
    f = TameWord.elementary(0, z2 * z3)
    a = ValuationPoint(compose(f, TameWord.permutation((0, 2, 1))), (2, 1, 1))
    b = ValuationPoint(f, (2, 1, 1))
    assert points_equal(a, b) and points_equal(b, a)


def test_points_equal_space_mismatch():
    with pytest.raises(PreconditionError):
        points_equal(ValuationPoint.standard((1, 1)), ValuationPoint.standard((1, 1, 1)))


def test_witness_translation():
    f = TameWord.translation((0, 1, 0))
    w = moved_valuation_witness(f)
    assert w.certified()
    assert w.point.weight == (1, 2, 1)
    assert w.point.frame.components == (z1 - z2 ** 2, z2, z3)
    assert w.poly == z1 + z2 ** 2
    assert w.values == (-1, -2, -2, -2)


def test_witness_scaling_and_permutation():
    for f in (TameWord.linear(((2, 0, 0), (0, 1, 0), (0, 0, 1))), TameWord.permutation((1, 0, 2))):
        w = moved_valuation_witness(f)
        assert w.certified()
        moved = ValuationPoint(compose(f, w.point.frame), w.point.weight)
        a, b = point_eval(w.point, w.poly), point_eval(w.point, w.normalizer)
        c, d = point_eval(moved, w.poly), point_eval(moved, w.normalizer)
        assert (a, b, c, d) == w.values and a * d != b * c


def test_witness_rejects_identity():
    with pytest.raises(PreconditionError):
        moved_valuation_witness(TameWord.identity(2))


def test_proj_weight_canonical():
    assert ProjWeight.of((4, 2, 2)) == ProjWeight.of((2, 1, 1))
    assert str(ProjWeight.of((3, 2))) == "3/2,1"
    assert math.isclose(float(ProjWeight.of((6, 3, 2)).values[0]), 3.0)
