"""Exact scalars and sparse multivariate polynomials.

Two coefficient fields are supported: the rationals (``QQ``, coefficients are
``fractions.Fraction``) and prime fields (``GF(p)``, coefficients are ints in
``range(p)``).  Polynomials are immutable sparse maps from exponent tuples to
nonzero coefficients.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from . import kernels
from .errors import DegreeCapExceeded, ParseError

Monomial = tuple  # exponent vector


class Field:
    char: int = 0
    zero: object
    one: object

    def __call__(self, x):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def format(self, a) -> str:
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def add(self, a, b):
        return self(a + b)

    def mul(self, a, b):
        return self(a * b)

    def neg(self, a):
        return self(-a)

    def __eq__(self, other):
        return isinstance(other, Field) and other.char == self.char

    def __hash__(self):
        return hash(("field", self.char))


class RationalField(Field):
    char = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, str):
            return Fraction(x.strip())
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def format(self, a) -> str:
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def __repr__(self):
        return "QQ"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.char = p
        self.zero = 0
        self.one = 1

    def __call__(self, x):
        p = self.char
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return x % p
        if isinstance(x, str):
            x = Fraction(x.strip())
        x = Fraction(x)
        if x.denominator % p == 0:
            raise ZeroDivisionError(f"{x} has no image in GF({p})")
        return x.numerator * pow(x.denominator, -1, p) % p

    def add(self, a, b):
        return (a + b) % self.char

    def mul(self, a, b):
        return a * b % self.char

    def neg(self, a):
        return -a % self.char

    def inv(self, a):
        if a % self.char == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.char)

    def format(self, a) -> str:
        return str(a)

    def __repr__(self):
        return f"GF({self.char})"


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_char(p: int) -> Field:
    return QQ if p == 0 else GF(p)


def _order_key(e):
    return (-sum(e), tuple(-x for x in e))


class Polynomial:
    """Immutable sparse polynomial in ``n`` variables over ``field``."""

    __slots__ = ("n", "field", "_terms", "_hash", "_deg")

    def __init__(self, n: int, terms: Mapping | None = None, field: Field = QQ):
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != n or any(x < 0 for x in e):
                    raise ValueError(f"bad exponent vector {e} for n={n}")
                c = field(c)
                if c:
                    clean[e] = field.add(clean.get(e, field.zero), c)
                    if not clean[e]:
                        del clean[e]
        self.n = n
        self.field = field
        self._terms = clean
        self._hash = None
        self._deg = None

    @classmethod
    def _raw(cls, n, field, terms):
        obj = cls.__new__(cls)
        obj.n = n
        obj.field = field
        obj._terms = terms
        obj._hash = None
        obj._deg = None
        return obj

    # constructors
    @classmethod
    def zero(cls, n, field=QQ):
        return cls._raw(n, field, {})

    @classmethod
    def constant(cls, n, c, field=QQ):
        c = field(c)
        return cls._raw(n, field, {(0,) * n: c} if c else {})

    @classmethod
    def variable(cls, n, i, field=QQ):
        """The coordinate x_{i+1} (``i`` is 0-based)."""
        e = [0] * n
        e[i] = 1
        return cls._raw(n, field, {tuple(e): field.one})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1, field=QQ):
        return cls(len(exps), {tuple(exps): coeff}, field)

    @classmethod
    def parse(cls, text: str, n: int | None = None, field: Field = QQ):
        return parse_polynomial(text, n, field)

    # basic access
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda t: _order_key(t[0]))

    def coeff(self, e) -> object:
        return self._terms.get(tuple(e), self.field.zero)

    def support(self) -> frozenset:
        return frozenset(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        if self._deg is None:
            self._deg = max((sum(e) for e in self._terms), default=-1)
        return self._deg

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self):
        return self._terms.get((0,) * self.n, self.field.zero)

    def variables(self) -> set[int]:
        return {j for e in self._terms for j, x in enumerate(e) if x}

    def linear_coeffs(self) -> tuple:
        out = []
        for j in range(self.n):
            e = [0] * self.n
            e[j] = 1
            out.append(self._terms.get(tuple(e), self.field.zero))
        return tuple(out)

    def filter(self, keep) -> "Polynomial":
        return Polynomial._raw(self.n, self.field, {e: c for e, c in self._terms.items() if keep(e)})

    # arithmetic
    def _check(self, other):
        if not isinstance(other, Polynomial):
            raise TypeError("expected Polynomial")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field!r} vs {other.field!r}")

    def _lift(self, x):
        if isinstance(x, Polynomial):
            self._check(x)
            return x
        return Polynomial.constant(self.n, x, self.field)

    def __add__(self, other):
        other = self._lift(other)
        acc = dict(self._terms)
        kernels.add_scaled_into(acc, other._terms, self.field.one, self.field.char)
        return Polynomial._raw(self.n, self.field, acc)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return Polynomial._raw(self.n, f, {e: f.neg(c) for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Polynomial":
        f = self.field
        c = f(c)
        if not c:
            return Polynomial.zero(self.n, f)
        return Polynomial._raw(self.n, f, {e: f.mul(c, v) for e, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        return Polynomial._raw(
            self.n, self.field, kernels.mul_terms(self._terms, other._terms, self.field.char)
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.n, 1, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, c):
        return self.scale(self.field.inv(self.field(c)))

    def substitute(self, gs: Sequence["Polynomial"], degree_cap: int | None = None) -> "Polynomial":
        return substitute(self, gs, degree_cap)

    # comparison / hashing
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.n == other.n and self.field == other.field and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.n, other, self.field)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.field.char, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_polynomial(self)


def poly_arith(P: Polynomial, Q, op: str) -> Polynomial:
    if op == "add":
        return P + Q
    if op == "mul":
        return P * Q
    if op == "scale":
        return P.scale(Q)
    raise ValueError(f"unknown op {op!r}")


def support(P: Polynomial) -> frozenset:
    return P.support()


def substitute(P: Polynomial, gs: Sequence[Polynomial], degree_cap: int | None = None) -> Polynomial:
    """P(g_1, ..., g_n), expanded exactly."""
    gs = list(gs)
    if len(gs) != P.n:
        raise ValueError(f"need {P.n} substitutions, got {len(gs)}")
    n = gs[0].n if gs else P.n
    for g in gs:
        if g.n != n:
            raise ValueError("substituted polynomials have mixed dimensions")
        if g.field != P.field:
            raise ValueError("field mismatch")
    if degree_cap is not None:
        degs = [g.degree() for g in gs]
        bound = max((sum(k * d for k, d in zip(e, degs)) for e in P._terms), default=0)
        # intermediate terms may still cancel, so only refuse obviously hopeless work
        if bound > degree_cap * max(degree_cap, 1) + degree_cap:
            raise DegreeCapExceeded(f"expansion bound {bound} exceeds cap {degree_cap}")
    f = P.field
    out = kernels.substitute_terms(P._terms, [g._terms for g in gs], n, f.char, f.one)
    result = Polynomial._raw(n, f, out)
    if degree_cap is not None and result.degree() > degree_cap:
        raise DegreeCapExceeded(f"result degree {result.degree()} exceeds cap {degree_cap}")
    return result


def variables(n: int, field: Field = QQ) -> list[Polynomial]:
    return [Polynomial.variable(n, i, field) for i in range(n)]


# text format

def _format_monomial(e) -> str:
    parts = []
    for j, k in enumerate(e):
        if k == 1:
            parts.append(f"x{j + 1}")
        elif k:
            parts.append(f"x{j + 1}^{k}")
    return "*".join(parts)


def format_polynomial(P: Polynomial) -> str:
    if P.is_zero():
        return "0"
    f = P.field
    out = []
    for e, c in P.items():
        mono = _format_monomial(e)
        neg = f.char == 0 and c < 0
        mag = -c if neg else c
        cs = f.format(mag)
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        else:
            body = f"{cs}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>x(?P<idx>\d+))|(?P<op>[-+*/^()]))")


class _Parser:
    def __init__(self, text, n, field, line):
        self.text = text
        self.field = field
        self.line = line
        self.toks = []
        pos = 0
        text_len = len(text.rstrip())
        while pos < text_len:
            m = _TOKEN.match(text, pos)
            if not m:
                col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
                raise ParseError(f"unexpected character {text[col - 1]!r}", line, col)
            start = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
            if m.group("num"):
                self.toks.append(("num", int(m.group("num")), start))
            elif m.group("var"):
                self.toks.append(("var", int(m.group("idx")), start))
            else:
                self.toks.append(("op", m.group("op"), start))
            pos = m.end()
        self.toks.append(("end", None, len(text)))
        self.i = 0
        max_idx = max((t[1] for t in self.toks if t[0] == "var"), default=1)
        if n is None:
            n = max_idx
        if max_idx > n:
            col = next(t[2] for t in self.toks if t[0] == "var" and t[1] > n) + 1
            raise ParseError(f"variable x{max_idx} exceeds dimension {n}", line, col)
        for t in self.toks:
            if t[0] == "var" and t[1] < 1:
                raise ParseError("variables are numbered from 1", line, t[2] + 1)
        self.n = n

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok[2] + 1)

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            self.fail(f"expected {op!r}", t)

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty polynomial")
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected token")
        return p

    def expr(self):
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self):
        t = self.take()
        if t[0] == "num":
            value = Fraction(t[1])
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                d = self.take()
                if d[0] != "num":
                    self.fail("expected denominator", d)
                if d[1] == 0:
                    self.fail("division by zero", d)
                value = value / d[1]
            try:
                base = Polynomial.constant(self.n, value, self.field)
            except ZeroDivisionError:
                self.fail("coefficient not defined in this field", t)
        elif t[0] == "var":
            base = Polynomial.variable(self.n, t[1] - 1, self.field)
        elif t[0] == "op" and t[1] == "(":
            base = self.expr()
            self.expect(")")
        else:
            self.fail("expected a coefficient, a variable or '('", t)
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            k = self.take()
            if k[0] != "num":
                self.fail("expected exponent", k)
            base = base ** k[1]
        return base


def parse_polynomial(text: str, n: int | None = None, field: Field = QQ, line: int = 1) -> Polynomial:
    """Parse the ``coef*x1^a*x2^b + ...`` grammar (parentheses also accepted)."""
    return _Parser(text, n, field, line).parse()


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}") from exc


def format_rational(q) -> str:
    return QQ.format(q)


def parse_weight(text: str) -> tuple[Fraction, ...]:
    return tuple(parse_rational(t) for t in text.split(","))


def from_terms(n: int, items: Iterable, field: Field = QQ) -> Polynomial:
    return Polynomial(n, dict(items), field)
