import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tamespace.errors import ParseError, PreconditionError
from tamespace.field_poly import GF, QQ, parse_polynomial, variables
from tamespace.tame_group import (
    TameWord,
    bruhat_permutation,
    compose,
    diff_at_origin,
    enumerate_group,
    invert,
    mat_det,
    mat_mul,
    parse_word,
    permutation_matrix,
    split_translation,
)

x1, x2, x3 = variables(3)
y1, y2 = variables(2)


def tripode_f():
    # (x2, x1 + x2)
    return parse_word('elem 2 "x1"\nperm [2,1]')


def test_tripode_frame_components():
    assert tripode_f().components == (y2, y1 + y2)


def test_compose_by_hand():
    f = tripode_f()
    assert compose(f, f).components == (y1 + y2, y1 + 2 * y2)


def test_compose_inverse_is_identity():
    f = parse_word('elem 1 "x2^3 + x3"\naff [[1,2,0],[0,1,0],[1,0,1]] [1,0,-2]\nperm [3,1,2]')
    assert compose(f, invert(f)).is_identity()
    assert compose(invert(f), f).is_identity()


def test_permutation_product():
    s = TameWord.permutation((1, 2, 0))
    t = TameWord.permutation((0, 2, 1))
    st_ = compose(s, t)
    # x ∘ y on images: (s∘t)(j) = s(t(j))
    prod = tuple(s.gens[0].images[t.gens[0].images[j]] for j in range(3))
    assert st_ == TameWord.permutation(prod)


def test_invert_elementary():
    f = TameWord.elementary(0, y2 ** 3)
    assert invert(f).components == (y1 - y2 ** 3, y2)


def test_invert_affine():
    f = TameWord.affine(((2, 0), (0, 1)), (1, 0))
    assert invert(f).components == (y1 * Fraction(1, 2) - Fraction(1, 2), y2)


def test_double_inverse():
    f = parse_word('elem 1 "x2^2"\naff [[0,1],[1,1]] [3,1]')
    assert invert(invert(f)).components == f.components


def test_diff_examples():
    I3 = tuple(tuple(Fraction(int(i == j)) for j in range(3)) for i in range(3))
    assert diff_at_origin(TameWord.elementary(0, x2 ** 2)) == I3
    assert diff_at_origin(tripode_f()) == ((0, 1), (1, 1))
    A = ((1, 2, 0), (0, 1, 0), (3, 0, 1))
    assert diff_at_origin(TameWord.linear(A)) == A


def test_bruhat_examples():
    assert bruhat_permutation(((1, 5, 2), (0, 3, 1), (0, 0, 7))) == (0, 1, 2)
    assert bruhat_permutation(((0, 0, 1), (0, 1, 0), (1, 0, 0))) == (2, 1, 0)
    assert bruhat_permutation(((0, 1), (1, 1))) == (1, 0)


@given(st.permutations(range(4)))
def test_bruhat_of_permutation_matrix(perm):
    assert bruhat_permutation(permutation_matrix(perm)) == tuple(perm)


def _rand_matrix(rng, n, F, upper=False):
    if upper:
        return tuple(tuple(F(rng.randint(1, 4)) if i == j else F(rng.randint(-3, 3)) if j > i else F(0)
                           for j in range(n)) for i in range(n))
    return tuple(tuple(F(rng.randint(-2, 2)) for _ in range(n)) for _ in range(n))


@given(st.integers(2, 4), st.sampled_from([QQ, GF(5)]), st.integers(0, 2 ** 32))
def test_bruhat_invariant_under_borel(n, F, seed):
    rng = random.Random(seed)
    while True:
        a = _rand_matrix(rng, n, F)
        if mat_det(a, F):
            break
    b1, b2 = _rand_matrix(rng, n, F, True), _rand_matrix(rng, n, F, True)
    assert bruhat_permutation(mat_mul(mat_mul(b1, a, F), b2, F), F) == bruhat_permutation(a, F)


def test_split_translation_examples():
    t = TameWord.translation((1, 2))
    f0, tt = split_translation(t)
    assert f0.is_identity() and tt == t
    g = TameWord.elementary(0, y2 ** 2)
    f0, tt = split_translation(g)
    assert f0 == g and tt.is_identity()
    h = parse_word('elem 1 "x2^2 + 1"\naff [[1,0],[0,1]] [0,2]')
    # the affine step is substituted into the elementary one
    assert h.components == (y1 + y2 ** 2 + 4 * y2 + 5, y2 + 2)
    f0, tt = split_translation(h)
    assert not any(f0.constant_terms())
    assert compose(f0, tt) == h


def test_word_file_errors():
    with pytest.raises(ParseError) as err:
        parse_word('elem 1 "x2"\nrot 3')
    assert err.value.line == 2
    with pytest.raises(PreconditionError):
        parse_word('elem 1 "x1 + x2"')
    with pytest.raises(PreconditionError):
        parse_word("aff [[1,1],[1,1]] [0,0]")


def test_word_round_trip():
    f = parse_word('# frame\nelem 1 "3/2*x2^2"\nperm [2,1]\naff [[1,1],[0,1]] [1/3,0]')
    assert parse_word(f.to_text()) == f


def test_enumerate_gl2_f2():
    F = GF(2)
    a, b = variables(2, F)
    ball = enumerate_group([TameWord.elementary(0, b), TameWord.elementary(1, a)])
    assert ball.closed and len(ball) == 6
    for k in range(len(ball)):
        perm = ball.right_action(k)
        for i in range(len(ball)):
            assert ball.elements[perm[i]] == compose(ball.elements[i], ball.elements[k])


def _elem(i, c, e):
    return TameWord.elementary(i, parse_polynomial(f"{c}*x{(i + 1) % 3 + 1}^{e}", 3))


coeffs = st.integers(-3, 3).filter(bool)
# one quadratic step per word keeps triple products at degree 8
words = st.builds(
    lambda a, s, c: compose(compose(a, s), c),
    st.builds(_elem, st.integers(0, 2), coeffs, st.integers(0, 2)),
    st.permutations(range(3)).map(TameWord.permutation),
    st.builds(_elem, st.integers(0, 2), coeffs, st.integers(0, 1)),
)


@given(words, words, words)
def test_composition_associative(f, g, h):
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@given(words)
def test_inverse_both_sides(f):
    assert compose(f, invert(f)).is_identity()
    assert compose(invert(f), f).is_identity()
