import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tamespace.field_poly import GF, QQ, Polynomial

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE = {}


def record(num: int, title: str, ok: bool, detail: str = ""):
    ACCEPTANCE[num] = (title, ok, detail)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {title}" + (f" ({detail})" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[num]
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)


# random objects

def rand_poly(rng: random.Random, n: int, field, max_terms=4, max_deg=3, allow_zero=False) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(0 if allow_zero else 1, max_terms)):
        e = [0] * n
        for _ in range(rng.randint(0, max_deg)):
            e[rng.randrange(n)] += 1
        c = rng.randint(-4, 4) if field is QQ else rng.randrange(field.char)
        if c:
            terms[tuple(e)] = field(c)
    P = Polynomial(n, terms, field)
    if not allow_zero and P.is_zero():
        return Polynomial.constant(n, 1, field)
    return P


def rand_weight(rng: random.Random, n: int, hi=6) -> tuple:
    return tuple(Fraction(rng.randint(1, hi), rng.choice((1, 1, 2))) for _ in range(n))


@pytest.fixture
def rng():
    return random.Random(20240601)


fields = st.sampled_from([QQ, GF(2), GF(5), GF(7)])


@st.composite
def polys(draw, n=3, field=QQ, max_terms=4, max_deg=3):
    k = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(k):
        e = tuple(draw(st.lists(st.integers(0, max_deg), min_size=n, max_size=n)))
        if sum(e) > max_deg:
            continue
        c = draw(st.integers(-5, 5))
        terms[e] = field(c) if field is not QQ else Fraction(c)
    return Polynomial(n, {e: c for e, c in terms.items() if field(c)}, field)


@st.composite
def weights(draw, n=3, hi=8):
    return tuple(Fraction(draw(st.integers(1, hi)), draw(st.integers(1, 3))) for _ in range(n))
