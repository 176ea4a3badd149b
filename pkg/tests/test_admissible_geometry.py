import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tamespace.admissible_geometry import (
    AdmissibleInequality,
    FixedRegion,
    Infeasible,
    hyperplanes_meeting_ball,
    hyperplanes_through,
    local_radius,
    multiplicity,
    on_hyperplane,
    satisfies,
    simplicial_projection,
)
from tamespace.errors import PreconditionError
from tamespace.metric import apartment_distance

from conftest import weights


def eqs(alpha):
    return {h.equation_text() for h in hyperplanes_through(alpha)}


def test_satisfies_examples():
    assert on_hyperplane((3, 2, 1), AdmissibleInequality(0, (0, 1, 1)))
    assert on_hyperplane((6, 3, 2), AdmissibleInequality(0, (0, 2, 0)))
    assert on_hyperplane((6, 3, 2), AdmissibleInequality(0, (0, 0, 3)))
    assert satisfies((5, 2, 1), AdmissibleInequality(0, (0, 1, 1)))
    assert not satisfies((1, 2, 1), AdmissibleInequality(0, (0, 1, 1)))


def test_multiplicity_examples():
    assert eqs((3, 2, 1)) == {"a2 = 2*a3", "a1 = 3*a3", "a1 = 1*a2 + 1*a3"}
    assert multiplicity((6, 3, 2)) == 2
    assert {"a1 = 1*a2 + 4*a3", "a1 = 3*a2 + 1*a3"} <= eqs((11, 3, 2))
    assert multiplicity((7, 3, 1)) == 4


def test_projective_invariance():
    assert eqs((6, 4, 2)) == eqs((3, 2, 1))


@pytest.mark.parametrize("m,p", [(m, p) for m in range(2, 9) for p in range(1, m)])
def test_mp1_count(m, p):
    assert multiplicity((m, p, 1)) == m // p + 2


def test_bad_inequality():
    with pytest.raises(PreconditionError):
        AdmissibleInequality(0, (1, 1, 0))
    with pytest.raises(PreconditionError):
        AdmissibleInequality(0, (0, 0, 0))


def test_ball_tiny_radius_at_generic_weight():
    alpha = (Fraction(31, 10), Fraction(17, 10), 1)
    assert multiplicity(alpha) == 0
    assert hyperplanes_meeting_ball(alpha, 1e-3) == []


def test_ball_reaches_wall():
    found = {h.hyperplane_key() for h in hyperplanes_meeting_ball((3, 2, 1), 0.5)}
    assert AdmissibleInequality(0, (0, 1, 0)).hyperplane_key() in found


@given(weights(3, hi=6), st.floats(0.01, 0.5), st.floats(0.01, 0.5))
def test_ball_monotone_in_radius(alpha, r1, r2):
    lo, hi = sorted((r1, r2))
    small = {h.hyperplane_key() for h in hyperplanes_meeting_ball(alpha, lo)}
    big = {h.hyperplane_key() for h in hyperplanes_meeting_ball(alpha, hi)}
    assert small <= big


def _sample_in_ball(rng, alpha, r):
    # random point of the log ball, rationalised
    while True:
        d = [rng.uniform(-1, 1) for _ in alpha]
        mean = sum(d) / len(d)
        d = [x - mean for x in d]
        norm = math.sqrt(sum(x * x for x in d))
        if norm > 1e-9:
            break
    s = rng.uniform(0, r) * 0.999
    pt = tuple(Fraction(float(a) * math.exp(s * x / norm)).limit_denominator(10 ** 9) for a, x in zip(alpha, d))
    return pt


def test_local_radius_guarantee():
    # 10^4 exact membership checks in total
    rng = random.Random(7)
    for alpha in [(1, 1, 1), (3, 2, 1), (2, 2, 1), (Fraction(31, 10), Fraction(17, 10), 1), (6, 3, 2)]:
        eps = local_radius(alpha)
        assert eps > 0
        keys = {t.hyperplane_key() for t in hyperplanes_through(alpha)}
        other = [h for h in hyperplanes_meeting_ball(alpha, 1.0) if h.hyperplane_key() not in keys]
        normals = [(h.normal(), h.satisfied_by(alpha)) for h in other]
        checked = 0
        while checked < 2000:
            pt = _sample_in_ball(rng, alpha, eps)
            if apartment_distance(alpha, pt) >= eps:
                continue
            checked += 1
            d = math.lcm(*(q.denominator for q in pt))
            ints = [q.numerator * (d // q.denominator) for q in pt]
            for w, side in normals:
                slack = sum(a * b for a, b in zip(w, ints))
                # no other wall is touched or crossed inside the ball
                assert slack != 0 and (slack > 0) == side


def test_local_radius_at_centre_bounded_by_walls():
    eps = local_radius((1, 1, 1))
    assert eps <= apartment_distance((1, 1, 1), (2, 1, 1)) + 1e-9


def test_simplicial_projection_examples():
    pr = simplicial_projection((3, 2, 1))
    assert pr.alpha == (2, 2, 1)
    assert pr.vertex_types == (1,)
    assert simplicial_projection((1, 1, 1)).alpha == (1, 1, 1)
    assert simplicial_projection((2, 2, 1)).alpha == (2, 2, 1)


@given(weights(4))
def test_simplicial_projection_idempotent(alpha):
    once = simplicial_projection(alpha).alpha
    assert simplicial_projection(once).alpha == once
    assert all(1 <= a <= 2 for a in once)


def test_region_sample_point():
    region = FixedRegion.of([AdmissibleInequality(0, (0, 2, 0))])
    assert region.sample_point(3) == (2, 1, 1)
    assert FixedRegion.of([]).sample_point(3) == (1, 1, 1)
    assert FixedRegion.of([Infeasible(0, (1, 1, 0))]).sample_point(3) is None
    both = FixedRegion.of([AdmissibleInequality(0, (0, 1, 1)), AdmissibleInequality(1, (0, 0, 2))])
    pt = both.sample_point(3)
    assert both.contains(pt) and pt[0] >= pt[1] >= pt[2]
