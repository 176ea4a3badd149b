"""Admissible equations α_i = Σ_{j≠i} m_j α_j and the half-spaces they bound.

Weights are tuples of positive rationals.  Indices are 0-based internally and
printed 1-based (``a1 = 2*a2 + 1*a3``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import PreconditionError


def as_weight(alpha: Iterable) -> tuple[Fraction, ...]:
    w = tuple(Fraction(a) for a in alpha)
    if not w or any(a <= 0 for a in w):
        raise PreconditionError(f"weights must be strictly positive, got {w}")
    return w


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


@dataclass(frozen=True, order=True)
class AdmissibleInequality:
    """α_i ≥ Σ_j m_j α_j with m_i = 0 and m ≠ 0."""

    i: int
    m: tuple

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        if not 0 <= self.i < len(m):
            raise PreconditionError("index out of range")
        if m[self.i] != 0 or any(x < 0 for x in m) or not any(m):
            raise PreconditionError(f"not an admissible coefficient vector: i={self.i}, m={m}")
        object.__setattr__(self, "m", m)

    @property
    def n(self) -> int:
        return len(self.m)

    def rhs(self, alpha) -> Fraction:
        return sum((mj * a for mj, a in zip(self.m, alpha)), Fraction(0))

    def slack(self, alpha) -> Fraction:
        return alpha[self.i] - self.rhs(alpha)

    def satisfied_by(self, alpha) -> bool:
        return self.slack(alpha) >= 0

    def on_hyperplane(self, alpha) -> bool:
        return self.slack(alpha) == 0

    def is_principal(self) -> bool:
        return sum(1 for x in self.m if x) == 1

    def normal(self) -> tuple:
        """Coefficients w with slack(α) = w·α."""
        return tuple(1 if j == self.i else -x for j, x in enumerate(self.m))

    def hyperplane_key(self) -> tuple:
        # α_i = α_k and α_k = α_i are the only two equations sharing a hyperplane
        if self.is_principal():
            k = next(j for j, x in enumerate(self.m) if x)
            if self.m[k] == 1:
                return ("swap", min(self.i, k), max(self.i, k), self.n)
        return ("eq", self.i, self.m)

    def _rhs_text(self) -> str:
        return " + ".join(f"{x}*a{j + 1}" for j, x in enumerate(self.m) if x)

    def equation_text(self) -> str:
        return f"a{self.i + 1} = {self._rhs_text()}"

    def __str__(self):
        return f"a{self.i + 1} >= {self._rhs_text()}"


@dataclass(frozen=True)
class Infeasible:
    """Marker for a component monomial that makes the fixed locus empty."""

    i: int
    monomial: tuple

    def satisfied_by(self, alpha) -> bool:
        return False

    def __str__(self):
        mono = "*".join(f"x{j + 1}^{k}" if k > 1 else f"x{j + 1}" for j, k in enumerate(self.monomial) if k)
        return f"never: component {self.i + 1} contains {mono}"


def satisfies(alpha, ineq: AdmissibleInequality) -> bool:
    return ineq.satisfied_by(as_weight(alpha))


def on_hyperplane(alpha, ineq: AdmissibleInequality) -> bool:
    return ineq.on_hyperplane(as_weight(alpha))


def dedupe_hyperplanes(ineqs: Iterable[AdmissibleInequality]) -> list[AdmissibleInequality]:
    seen = {}
    for h in ineqs:
        seen.setdefault(h.hyperplane_key(), h)
    return sorted(seen.values())


def _coefficient_vectors(alpha, i: int, cap: Fraction, max_total: int):
    """m with m_i = 0, m ≠ 0, Σ m_j α_j ≤ cap and Σ m_j ≤ max_total."""
    n = len(alpha)
    others = [j for j in range(n) if j != i]

    def rec(pos, m, used, total):
        if pos == len(others):
            if total:
                yield tuple(m)
            return
        j = others[pos]
        k = 0
        while used + k * alpha[j] <= cap and total + k <= max_total:
            m[j] = k
            yield from rec(pos + 1, m, used + k * alpha[j], total + k)
            k += 1
        m[j] = 0

    yield from rec(0, [0] * n, Fraction(0), 0)


def hyperplanes_through(alpha) -> list[AdmissibleInequality]:
    """Every admissible hyperplane containing [α] (one equation per hyperplane)."""
    alpha = as_weight(alpha)
    bound = _ceil(max(alpha) / min(alpha))
    found = []
    for i in range(len(alpha)):
        for m in _coefficient_vectors(alpha, i, alpha[i], bound):
            h = AdmissibleInequality(i, m)
            if h.on_hyperplane(alpha):
                found.append(h)
    return dedupe_hyperplanes(found)


def multiplicity(alpha) -> int:
    return len(hyperplanes_through(alpha))


def exp_upper(r: float) -> Fraction:
    """A rational E with E ≥ exp(r), rounded up with a safety margin."""
    e = math.nextafter(math.exp(r), math.inf)
    return Fraction(e) * Fraction(1_000_001, 1_000_000)


def hyperplanes_meeting_ball(alpha, r: float) -> list[AdmissibleInequality]:
    """Admissible hyperplanes meeting the log-metric ball of radius r at [α].

    The ball sits inside the box α'_k ∈ [α_k/E, α_k E] (E ≥ e^r), so a
    hyperplane can only meet it when its linear form changes sign on the box.
    May include near misses; never omits a hyperplane.
    """
    if r <= 0:
        raise PreconditionError("radius must be positive")
    alpha = as_weight(alpha)
    E2 = exp_upper(r) ** 2
    bound = _ceil(max(alpha) / min(alpha) * E2)
    found = []
    for i in range(len(alpha)):
        for m in _coefficient_vectors(alpha, i, alpha[i] * E2, bound):
            h = AdmissibleInequality(i, m)
            if alpha[i] <= h.rhs(alpha) * E2:
                found.append(h)
    return dedupe_hyperplanes(found)


def local_radius(alpha, iterations: int = 30) -> float:
    """Radius ε such that every admissible hyperplane meeting B([α], ε) contains [α]."""
    alpha = as_weight(alpha)
    through = {h.hyperplane_key() for h in hyperplanes_through(alpha)}

    def ok(r):
        return all(h.hyperplane_key() in through for h in hyperplanes_meeting_ball(alpha, r))

    lo = 1.0
    while not ok(lo):
        lo /= 2
        if lo < 1e-12:
            raise ArithmeticError("could not isolate the weight from its neighbours")
    if lo == 1.0:
        return lo
    hi = 2 * lo
    for _ in range(iterations):
        mid = (lo + hi) / 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class Projection:
    alpha: tuple
    drop_indices: tuple  # 1-based i with α'_{i-1} > α'_i, α'_0 = 2
    vertex_types: tuple  # type n - i + 1 of the vertex [x_i, ..., x_n]


def simplicial_projection(alpha) -> Projection:
    alpha = as_weight(alpha)
    n = len(alpha)
    lo = min(alpha)
    ap = tuple(min(Fraction(2), a / lo) for a in alpha)
    prev = (Fraction(2),) + ap
    drops = tuple(i + 1 for i in range(n) if prev[i] > ap[i])
    return Projection(ap, drops, tuple(sorted(n - i + 1 for i in drops)))


def sorting_permutation(alpha: Sequence) -> tuple:
    """The lexicographically smallest σ with σ(α⁺) = α, as images σ(k)."""
    return tuple(sorted(range(len(alpha)), key=lambda j: (-alpha[j], j)))


def sort_weight(alpha: Sequence) -> tuple:
    return tuple(sorted(alpha, reverse=True))


def _solve(rows, rhs):
    n = len(rows)
    M = [list(r) + [b] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


@dataclass(frozen=True)
class FixedRegion:
    """Conjunction of admissible half-spaces (plus possibly an infeasible marker)."""

    constraints: tuple

    @classmethod
    def of(cls, items: Iterable) -> "FixedRegion":
        uniq = []
        for c in items:
            if c not in uniq:
                uniq.append(c)
        return cls(tuple(uniq))

    def contains(self, alpha) -> bool:
        alpha = as_weight(alpha)
        return all(c.satisfied_by(alpha) for c in self.constraints)

    def intersect(self, other: "FixedRegion") -> "FixedRegion":
        return FixedRegion.of(self.constraints + other.constraints)

    def sample_point(self, n: int, sorted_only: bool = True, max_scale: int = 2 ** 40):
        """A rational vertex of the region (∩ sorted cone, α_n = 1), or None if empty.

        Among the vertices the lexicographically smallest one is returned, so
        that unconstrained regions give (1, ..., 1).
        """
        if any(isinstance(c, Infeasible) for c in self.constraints):
            return None
        forms = [c.normal() for c in self.constraints]
        if sorted_only:
            for k in range(n - 1):
                forms.append(tuple(1 if j == k else -1 if j == k + 1 else 0 for j in range(n)))
        else:
            forms.extend(tuple(1 if j == k else 0 for j in range(n)) for k in range(n))
        B = 4
        while B <= max_scale:
            best = self._best_vertex(forms, n, B)
            if best is not None:
                return best
            B *= 4
        return None

    @staticmethod
    def _best_vertex(forms, n, B):
        # variables α_0..α_{n-2}; α_{n-1} = 1; box α_j ≤ B
        box = [tuple(-1 if j == k else 0 for j in range(n)) + (B,) for k in range(n - 1)]
        hs = [tuple(f) + (0,) for f in forms] + box
        best = None
        if n == 1:
            return (Fraction(1),)
        for combo in itertools.combinations(hs, n - 1):
            rows = [[Fraction(h[j]) for j in range(n - 1)] for h in combo]
            rhs = [-(Fraction(h[n - 1]) + h[n]) for h in combo]
            sol = _solve(rows, rhs)
            if sol is None:
                continue
            pt = tuple(sol) + (Fraction(1),)
            if all(sum(h[j] * pt[j] for j in range(n)) + h[n] >= 0 for h in hs) and all(x > 0 for x in pt):
                if best is None or pt < best:
                    best = pt
        return best
