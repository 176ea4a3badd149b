"""Monomial valuations and the action of tame automorphisms on them.

``nu_eval(α, P)`` is the minimum of -Σ α_k i_k over the support of P, and a
frame f moves it to ``ν_{f,α}(P) = ν_{id,α}(P(f_1, ..., f_n))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from . import kernels
from .admissible_geometry import (
    AdmissibleInequality,
    FixedRegion,
    Infeasible,
    as_weight,
    sort_weight,
    sorting_permutation,
)
from .errors import BudgetExhausted, PreconditionError
from .field_poly import Polynomial, substitute, variables
from .tame_group import (
    TameWord,
    bruhat_permutation,
    compose,
    diff_at_origin,
    invert,
    permute_weight,
    split_translation,
)

INF = math.inf


@dataclass(frozen=True)
class ProjWeight:
    """A weight class [α], stored scaled so that the minimum coordinate is 1."""

    values: tuple

    @classmethod
    def of(cls, alpha) -> "ProjWeight":
        alpha = as_weight(alpha)
        lo = min(alpha)
        return cls(tuple(a / lo for a in alpha))

    @property
    def n(self):
        return len(self.values)

    @property
    def is_sorted(self) -> bool:
        return all(a >= b for a, b in zip(self.values, self.values[1:]))

    @property
    def is_interior(self) -> bool:
        return len(set(self.values)) == len(self.values)

    def sorted(self) -> "ProjWeight":
        return ProjWeight(sort_weight(self.values))

    def __str__(self):
        return ",".join(_fmt(a) for a in self.values)


def _fmt(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def same_class(alpha, beta) -> bool:
    """Projective equality by cross-multiplication."""
    return len(alpha) == len(beta) and all(a * beta[0] == b * alpha[0] for a, b in zip(alpha, beta))


def nu_eval(alpha, P: Polynomial):
    """min over supp P of -Σ α_k i_k; +∞ for P = 0."""
    if P.is_zero():
        return INF
    alpha = tuple(Fraction(a) for a in alpha)
    if len(alpha) != P.n:
        raise PreconditionError("weight and polynomial dimensions differ")
    d = lcm(*(a.denominator for a in alpha))
    w = [int(a * d) for a in alpha]
    return Fraction(-kernels.weighted_max(P._terms.keys(), w), d)


def weighted_degree(alpha, P: Polynomial):
    v = nu_eval(alpha, P)
    return -v if v != INF else -INF


@dataclass(frozen=True, eq=False)
class ValuationPoint:
    """ν_{f,[α]}; compare with points_equal, not ==."""

    frame: TameWord
    weight: tuple

    def __post_init__(self):
        w = as_weight(self.weight)
        if len(w) != self.frame.n:
            raise PreconditionError("frame and weight dimensions differ")
        object.__setattr__(self, "weight", w)

    @classmethod
    def standard(cls, alpha, field=None) -> "ValuationPoint":
        from .field_poly import QQ
        alpha = as_weight(alpha)
        return cls(TameWord.identity(len(alpha), field or QQ), alpha)

    @property
    def proj(self) -> ProjWeight:
        return ProjWeight.of(self.weight)

    def sorted_frame(self) -> "ValuationPoint":
        """The same point written with a sorted weight."""
        sigma = sorting_permutation(self.weight)
        if sigma == tuple(range(len(sigma))):
            return self
        frame = compose(self.frame, TameWord.permutation(sigma, self.frame.field))
        return ValuationPoint(frame, sort_weight(self.weight))

    def __repr__(self):
        return f"ν[{self.frame!r}, ({ProjWeight(self.weight)})]"


def point_eval(nu: ValuationPoint, P: Polynomial):
    return nu_eval(nu.weight, substitute(P, nu.frame.components, nu.frame.degree_cap))


def alpha_plus(alpha) -> tuple:
    return sort_weight(as_weight(alpha))


def fixed_inequalities(f: TameWord) -> list:
    """One half-space per non-x_i monomial of each component f_i."""
    out = []
    for i, comp in enumerate(f.components):
        unit = tuple(1 if j == i else 0 for j in range(f.n))
        for e in sorted(comp.support()):
            if e == unit or not any(e):
                continue
            if e[i] > 0:
                c = Infeasible(i, e)
            else:
                c = AdmissibleInequality(i, e)
            if c not in out:
                out.append(c)
    return out


def fixed_region(f: TameWord) -> FixedRegion:
    return FixedRegion.of(fixed_inequalities(f))


def fixes(f: TameWord, alpha) -> bool:
    """Whether f fixes ν_{id,[α]}."""
    alpha = as_weight(alpha)
    unit = [tuple(1 if j == i else 0 for j in range(f.n)) for i in range(f.n)]
    for i, comp in enumerate(f.components):
        ai = alpha[i]
        for e in comp._terms:
            if e == unit[i] or not any(e):
                continue
            if e[i]:
                return False
            if sum(k * a for k, a in zip(e, alpha)) > ai:
                return False
    return True


def points_equal(nu1: ValuationPoint, nu2: ValuationPoint) -> bool:
    if nu1.frame.n != nu2.frame.n or nu1.frame.field != nu2.frame.field:
        raise PreconditionError("points live in different spaces")
    a = sort_weight(nu1.weight)
    b = sort_weight(nu2.weight)
    if not same_class(a, b):
        return False
    s1 = nu1.sorted_frame()
    s2 = nu2.sorted_frame()
    return fixes(compose(invert(s1.frame), s2.frame), a)


def rho_plus(nu: ValuationPoint) -> ProjWeight:
    return ProjWeight.of(sort_weight(nu.weight))


def frame_permutation(f: TameWord) -> tuple:
    """σ_f: Bruhat permutation of the differential of the origin-fixing part of f."""
    f0, _ = split_translation(f)
    return bruhat_permutation(diff_at_origin(f0), f.field)


def rho(nu: ValuationPoint) -> ProjWeight:
    """Retraction onto the standard apartment: [σ_{f0}(α⁺)] after sorting."""
    s = nu.sorted_frame()
    sigma = frame_permutation(s.frame)
    return ProjWeight.of(permute_weight(sigma, s.weight))


# faithfulness

@dataclass(frozen=True)
class MovedWitness:
    point: ValuationPoint
    poly: Polynomial
    normalizer: Polynomial
    values: tuple  # ν(P), ν(M), (f·ν)(P), (f·ν)(M)

    def certified(self) -> bool:
        a, b, c, d = self.values
        return a * d != b * c


def _ratio_differs(v):
    a, b, c, d = v
    if INF in v or b == 0 or d == 0:
        return False
    return a * d != b * c


def _certify(f: TameWord, nu: ValuationPoint, candidates, normalizers):
    moved = ValuationPoint(compose(f, nu.frame), nu.weight)
    cache = {}

    def ev(point, P, tag):
        key = (tag, P)
        if key not in cache:
            cache[key] = point_eval(point, P)
        return cache[key]

    for M in normalizers:
        for P in candidates:
            if P == M:
                continue
            v = (ev(nu, P, 0), ev(nu, M, 0), ev(moved, P, 1), ev(moved, M, 1))
            if _ratio_differs(v):
                return MovedWitness(nu, P, M, v)
    return None


def moved_valuation_witness(f: TameWord, max_power: int = 7) -> MovedWitness:
    """A point ν and a polynomial P whose evaluations show [ν] ≠ [f·ν]."""
    n, F = f.n, f.field
    if f.is_identity():
        raise PreconditionError("the identity moves nothing")
    xs = variables(n, F)
    inv_comps = list(invert(f).components)
    pool = xs + list(f.components) + inv_comps
    weights = [tuple(Fraction(n - k) for k in range(n))]
    weights += [tuple(Fraction(k + 1) for k in range(n))]
    weights += [tuple(Fraction(2 if k == j else 1) for k in range(n)) for j in range(n)]
    for alpha in weights:
        nu = ValuationPoint(TameWord.identity(n, F), alpha)
        w = _certify(f, nu, pool, xs)
        if w is not None:
            return w
    # f fixes the standard apartment pointwise: conjugate by x_i ↦ x_i - x_j^r
    p = F.char
    for r in range(2, max_power + 1):
        if p and r % p == 0:
            continue
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                Pij = xs[i] + xs[j] ** r
                g = TameWord.elementary(i, -(xs[j] ** r))
                for big in (2, 3, r + 1):
                    alpha = tuple(Fraction(big if k == j else 1) for k in range(n))
                    nu = ValuationPoint(g, alpha)
                    w = _certify(f, nu, [Pij] + pool, [xs[j]] + xs)
                    if w is not None:
                        return w
    raise BudgetExhausted("no certificate found within the search budget")
