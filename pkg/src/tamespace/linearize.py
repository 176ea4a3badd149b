"""Linearizing a finite group of tame automorphisms that fixes a common
monomial valuation, by averaging the stabilizer decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .admissible_geometry import FixedRegion, as_weight
from .errors import BudgetExhausted, PreconditionError
from .field_poly import Polynomial
from .stabilizer import decompose_stabilizer, in_M_alpha
from .tame_group import Matrix, TameWord, compose, enumerate_group, invert
from .valuation_space import ProjWeight, fixed_inequalities, fixes


@dataclass
class FiniteGroupInput:
    elements: list

    def __post_init__(self):
        if not self.elements:
            raise PreconditionError("a group has at least the identity")
        uniq = {}
        for g in self.elements:
            uniq.setdefault(g.key, g)
        self.elements = list(uniq.values())
        self._verify()

    @classmethod
    def from_generators(cls, generators: Sequence[TameWord], bound: int = 10000) -> "FiniteGroupInput":
        try:
            ball = enumerate_group(generators, max_elements=bound)
        except BudgetExhausted as exc:
            raise BudgetExhausted(f"closure exceeds {bound} elements; group may be infinite") from exc
        return cls(list(ball.elements))

    @property
    def n(self) -> int:
        return self.elements[0].n

    @property
    def field(self):
        return self.elements[0].field

    @property
    def order(self) -> int:
        return len(self.elements)

    def _verify(self):
        n, F = self.elements[0].n, self.elements[0].field
        if any(g.n != n or g.field != F for g in self.elements):
            raise PreconditionError("elements live in different spaces")
        keys = {g.key for g in self.elements}
        if TameWord.identity(n, F).key not in keys:
            raise PreconditionError("identity missing from the group")
        for a in self.elements:
            if invert(a).key not in keys:
                raise PreconditionError(f"inverse of {a!r} missing")
            for b in self.elements:
                if compose(a, b).key not in keys:
                    raise PreconditionError(f"not closed: {a!r} ∘ {b!r}")

    def check_characteristic(self):
        p = self.field.char
        if p and self.order % p == 0:
            raise PreconditionError(f"characteristic {p} divides the group order {self.order}")


@dataclass(frozen=True)
class CommonFixed:
    region: FixedRegion
    sample: ProjWeight | None

    @property
    def empty(self) -> bool:
        return self.sample is None


def common_fixed_region(G: FiniteGroupInput) -> CommonFixed:
    """Weights in the sorted chamber fixed by every element."""
    cons = []
    for g in G.elements:
        cons.extend(fixed_inequalities(g))
    region = FixedRegion.of(cons)
    pt = region.sample_point(G.n, sorted_only=True)
    return CommonFixed(region, ProjWeight.of(pt) if pt is not None else None)


@dataclass
class Linearization:
    conjugator: TameWord
    weight: tuple
    linear_parts: dict  # element key -> matrix l_g

    def conjugate(self, g: TameWord) -> TameWord:
        return compose(compose(self.conjugator, g), invert(self.conjugator))


def linearize_at(G: FiniteGroupInput, alpha) -> Linearization:
    """h = (1/|G|) Σ_g l_g⁻¹∘g with g = m_g∘l_g; then h∘g = l_g∘h for all g."""
    alpha = as_weight(alpha)
    G.check_characteristic()
    for g in G.elements:
        if not fixes(g, alpha):
            raise PreconditionError(f"{g!r} does not fix the weight")
    n, F = G.n, G.field
    total = [Polynomial.zero(n, F) for _ in range(n)]
    parts = {}
    for g in G.elements:
        dec = decompose_stabilizer(g, alpha)
        parts[g.key] = dec.l
        term = compose(invert(dec.l_word()), g)
        total = [a + b for a, b in zip(total, term.components)]
    inv_order = F.inv(F(G.order))
    h = TameWord.triangular(tuple(c * inv_order for c in total))
    if not in_M_alpha(h, alpha):
        raise ArithmeticError("average left M_alpha")
    for g in G.elements:
        l = TameWord.linear(parts[g.key], F)
        if compose(h, g) != compose(l, h):
            raise ArithmeticError("intertwining h∘g = l_g∘h failed")
    return Linearization(h, alpha, parts)


def linearize(G: FiniteGroupInput, conjugate_by: TameWord | None = None) -> tuple[Linearization, TameWord]:
    """Linearize G, optionally after conjugating by c (G ↦ c⁻¹Gc).

    Returns the linearization of the conjugated group and the overall
    conjugator k with k∘g∘k⁻¹ linear for every original g.
    """
    if conjugate_by is not None:
        ci = invert(conjugate_by)
        G = FiniteGroupInput([compose(compose(ci, g), conjugate_by) for g in G.elements])
    fixed = common_fixed_region(G)
    if fixed.empty:
        raise BudgetExhausted("no common fixed weight in the standard chamber; try a conjugating word")
    lin = linearize_at(G, fixed.sample.values)
    k = lin.conjugator if conjugate_by is None else compose(lin.conjugator, invert(conjugate_by))
    return lin, k


def verify_linear(f: TameWord) -> bool:
    return f.degree() <= 1


def linear_matrix_of(f: TameWord) -> Matrix:
    if not verify_linear(f):
        raise PreconditionError("not affine")
    return f.linear_matrix()
