import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tamespace import _kernels_py, kernels

compiled = pytest.importorskip("tamespace._kernels")


def rand_terms(rng, n, p, k=6, deg=4):
    out = {}
    for _ in range(k):
        e = tuple(rng.randint(0, deg) for _ in range(n))
        c = rng.randrange(1, p) if p else Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        if c:
            out[e] = c
    return out


@given(st.integers(0, 2 ** 32), st.sampled_from([0, 2, 5, 7, 101]), st.integers(1, 4))
def test_mul_agrees(seed, p, n):
    rng = random.Random(seed)
    a, b = rand_terms(rng, n, p), rand_terms(rng, n, p)
    assert compiled.mul_terms(a, b, p) == _kernels_py.mul_terms(a, b, p)


@given(st.integers(0, 2 ** 32), st.sampled_from([0, 3, 7]))
def test_substitute_agrees(seed, p):
    rng = random.Random(seed)
    n = 3
    one = 1 if p else Fraction(1)
    terms = rand_terms(rng, n, p, deg=3)
    gens = [rand_terms(rng, n, p, k=3, deg=2) for _ in range(n)]
    assert compiled.substitute_terms(terms, gens, n, p, one) == _kernels_py.substitute_terms(terms, gens, n, p, one)


@given(st.integers(0, 2 ** 32), st.sampled_from([0, 5]))
def test_add_scaled_agrees(seed, p):
    rng = random.Random(seed)
    a, b = rand_terms(rng, 2, p), rand_terms(rng, 2, p)
    scale = 3 if p else Fraction(-2, 3)
    assert compiled.add_scaled_into(dict(a), b, scale, p) == _kernels_py.add_scaled_into(dict(a), b, scale, p)


@given(st.lists(st.tuples(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50)), min_size=1),
       st.tuples(st.integers(1, 1000), st.integers(1, 1000), st.integers(1, 1000)))
def test_weighted_max_agrees(keys, w):
    assert compiled.weighted_max(keys, list(w)) == _kernels_py.weighted_max(keys, list(w))


def test_backend_is_compiled_when_built():
    assert kernels.BACKEND in ("cython", "python")
