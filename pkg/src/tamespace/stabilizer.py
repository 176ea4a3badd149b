"""Point stabilizers: the unipotent part M_α, the block-diagonal part L_α,
the normal subgroup N_α at weights (m, p, 1), local equivalence and sectors.

Weights passed here must be sorted non-increasingly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .admissible_geometry import as_weight
from .errors import PreconditionError
from .field_poly import Field, Polynomial, variables
from .tame_group import (
    Matrix,
    TameWord,
    compose,
    invert,
    mat_identity,
    mat_inv,
)
from .valuation_space import fixed_inequalities, fixes, nu_eval


@dataclass(frozen=True)
class BlockStructure:
    values: tuple  # γ_1 > ... > γ_r
    sizes: tuple
    block_of: tuple  # block index of each coordinate

    @classmethod
    def of(cls, alpha) -> "BlockStructure":
        alpha = _sorted_weight(alpha)
        values, sizes, block_of = [], [], []
        for a in alpha:
            if not values or a != values[-1]:
                values.append(a)
                sizes.append(0)
            sizes[-1] += 1
            block_of.append(len(values) - 1)
        return cls(tuple(values), tuple(sizes), tuple(block_of))

    def blocks(self) -> list[list[int]]:
        out = [[] for _ in self.values]
        for i, b in enumerate(self.block_of):
            out[b].append(i)
        return out


def _sorted_weight(alpha) -> tuple:
    alpha = as_weight(alpha)
    if any(a < b for a, b in zip(alpha, alpha[1:])):
        raise PreconditionError(f"weight {tuple(str(a) for a in alpha)} is not sorted")
    return alpha


def _wdeg(alpha, P: Polynomial):
    return -nu_eval(alpha, P)


def in_M_alpha(f: TameWord, alpha) -> bool:
    """Unipotent triangular maps x_i + P_i with P_i in later blocks and of weighted degree ≤ α_i."""
    alpha = _sorted_weight(alpha)
    bs = BlockStructure.of(alpha)
    xs = variables(f.n, f.field)
    for i, comp in enumerate(f.components):
        P = comp - xs[i]
        if P.is_zero():
            continue
        if any(bs.block_of[j] <= bs.block_of[i] for j in P.variables()):
            return False
        if _wdeg(alpha, P) > alpha[i]:
            return False
    return True


def in_L_alpha(f: TameWord, alpha) -> bool:
    alpha = _sorted_weight(alpha)
    if f.degree() > 1 or any(f.constant_terms()):
        return False
    return is_block_diagonal(f.linear_matrix(), BlockStructure.of(alpha))


def is_block_diagonal(A: Matrix, bs: BlockStructure) -> bool:
    n = len(A)
    return all(not A[i][j] for i in range(n) for j in range(n) if bs.block_of[i] != bs.block_of[j])


def mp1_shape(alpha) -> tuple[int, int]:
    """(m, p) when [α] = [m, p, 1] with m > p > 1 integers, else raise."""
    alpha = _sorted_weight(alpha)
    if len(alpha) != 3:
        raise PreconditionError("the (m,p,1) analysis needs n = 3")
    m, p = alpha[0] / alpha[2], alpha[1] / alpha[2]
    if m.denominator != 1 or p.denominator != 1 or not m > p > 1:
        raise PreconditionError("weight is not of shape (m, p, 1) with m > p > 1")
    return int(m), int(p)


def is_mp1(alpha) -> bool:
    try:
        mp1_shape(alpha)
    except PreconditionError:
        return False
    return True


def in_N_alpha(f: TameWord, alpha) -> bool:
    alpha = _sorted_weight(alpha)
    m, p = mp1_shape(alpha)
    if not in_M_alpha(f, alpha):
        return False
    xs = variables(3, f.field)
    P = f.components[0] - xs[0]
    Q = f.components[1] - xs[1]
    w = (Fraction(m), Fraction(p), Fraction(1))
    return (P.is_zero() or _wdeg(w, P) < m) and (Q.is_zero() or Q.degree() < p)


@dataclass(frozen=True)
class StabDecomposition:
    m: TameWord
    l: Matrix

    def l_word(self) -> TameWord:
        return TameWord.linear(self.l, self.m.field)

    def recompose(self) -> TameWord:
        return compose(self.m, self.l_word())


def _violation(f: TameWord, alpha):
    for c in fixed_inequalities(f):
        if not c.satisfied_by(alpha):
            return c
    return None


def decompose_stabilizer(f: TameWord, alpha) -> StabDecomposition:
    """Write f = m∘l with m ∈ M_α and l ∈ L_α.

    Constants and the parts of degree ≥ 2 already lie in M_α once the linear
    part ℓ is factored out; ℓ itself is block upper triangular and splits as
    (unipotent) ∘ (block diagonal), so m = f∘l⁻¹ with l the diagonal blocks.
    """
    alpha = _sorted_weight(alpha)
    bad = _violation(f, alpha)
    if bad is not None:
        raise PreconditionError(f"automorphism does not fix the point: violates {bad}")
    F = f.field
    bs = BlockStructure.of(alpha)
    ell = f.linear_matrix()
    n = f.n
    l = tuple(tuple(ell[i][j] if bs.block_of[i] == bs.block_of[j] else F.zero for j in range(n))
              for i in range(n))
    m_comps = compose(f, TameWord.linear(mat_inv(l, F), F)).components
    m = TameWord.triangular(m_comps)
    if not in_M_alpha(m, alpha):
        raise ArithmeticError("unipotent factor left M_alpha")
    return StabDecomposition(m, l)


def unipotent_part(f: TameWord, alpha) -> TameWord:
    return decompose_stabilizer(f, alpha).m


def locally_equivalent(f: TameWord, g: TameWord, alpha) -> bool:
    """f ∼_ν g at ν = ν_{id,[α]}: the chambers E⁺_f, E⁺_g agree on a neighbourhood."""
    alpha = _sorted_weight(alpha)
    for w in (f, g):
        if not fixes(w, alpha):
            raise PreconditionError("both automorphisms must fix the point")
    if is_mp1(alpha):
        mf = unipotent_part(f, alpha)
        mg = unipotent_part(g, alpha)
        return in_N_alpha(compose(invert(mf), mg), alpha)
    return locally_equivalent_sampled(f, g, alpha)


def locally_equivalent_sampled(f: TameWord, g: TameWord, alpha) -> bool:
    from .metric import local_sample_points

    h = compose(invert(f), g)
    return all(fixes(h, pt) for pt in local_sample_points(alpha))


@dataclass(frozen=True)
class SectorDescriptor:
    kind: str  # "full", "case1", "case2", "case3"
    a: int | None
    b: int | None
    boundary: tuple  # ideal points the two bounding rays head to
    normal_form: TameWord

    def __str__(self):
        if self.kind == "full":
            return "full"
        if self.kind == "case1":
            return f"case 1 (a={self.a}, b={self.b})"
        if self.kind == "case2":
            return "case 2"
        return f"case 3 (b={self.b})"


def sector(f: TameWord, g: TameWord, alpha) -> SectorDescriptor:
    """Classify where E⁺_f and E⁺_g agree near ν_{id,[α]}, α = (m, p, 1)."""
    alpha = _sorted_weight(alpha)
    m, p = mp1_shape(alpha)
    for w in (f, g):
        if not fixes(w, alpha):
            raise PreconditionError("both automorphisms must fix the point")
    h = unipotent_part(compose(invert(f), g), alpha)
    F = h.field
    xs = variables(3, F)
    P = h.components[0] - xs[0]
    Q = h.components[1] - xs[1]
    P_top = P.filter(lambda e: e[0] == 0 and p * e[1] + e[2] == m)
    Q_top = Q.filter(lambda e: e == (0, 0, p))
    normal = TameWord.triangular((xs[0] + P_top, xs[1] + Q_top, xs[2]))
    exps = sorted(e[1] for e in P_top.support())
    one = Fraction(1)
    if P_top.is_zero() and Q_top.is_zero():
        return SectorDescriptor("full", None, None, (), normal)
    if Q_top.is_zero():
        a, b = exps[0], exps[-1]
        return SectorDescriptor("case1", a, b, ((Fraction(m - p * a), 0 * one, one), (Fraction(b), one, 0 * one)), normal)
    if P_top.is_zero():
        return SectorDescriptor("case2", None, None, ((0 * one, Fraction(p), one), (one, 0 * one, 0 * one)), normal)
    b = exps[-1]
    return SectorDescriptor("case3", None, b, ((one, 0 * one, 0 * one), (Fraction(b), one, 0 * one)), normal)


# generators of finite stabilizers

def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    phi = p - 1
    factors = {q for q in range(2, phi + 1) if phi % q == 0 and all(q % r for r in range(2, q))}
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in factors):
            return g
    raise ValueError("no primitive root")


def allowed_monomials(alpha, i: int) -> list[tuple]:
    """Exponents e (constant included) allowed in P_i for M_α."""
    alpha = _sorted_weight(alpha)
    bs = BlockStructure.of(alpha)
    later = [j for j in range(len(alpha)) if bs.block_of[j] > bs.block_of[i]]
    n = len(alpha)
    out = [(0,) * n]

    def rec(pos, e, used):
        if pos == len(later):
            if any(e):
                out.append(tuple(e))
            return
        j = later[pos]
        k = 0
        while used + k * alpha[j] <= alpha[i]:
            e[j] = k
            rec(pos + 1, e, used + k * alpha[j])
            k += 1
        e[j] = 0

    rec(0, [0] * n, Fraction(0))
    return sorted(set(out))


def stabilizer_generators(alpha, field: Field, include_linear: bool = True) -> list[TameWord]:
    """Generators of M_α ⋊ L_α (finite when the field is finite)."""
    alpha = _sorted_weight(alpha)
    n = len(alpha)
    bs = BlockStructure.of(alpha)
    xs = variables(n, field)
    gens = []
    for i in range(n):
        for e in allowed_monomials(alpha, i):
            gens.append(TameWord.elementary(i, Polynomial.monomial(e, 1, field)))
    if include_linear:
        for block in bs.blocks():
            for a, b in product(block, block):
                if a != b:
                    gens.append(TameWord.elementary(a, xs[b]))
            if field.char:
                g = primitive_root(field.char)
            else:
                g = 2
            if g != 1:
                for a in block[:1]:
                    D = [list(r) for r in mat_identity(n, field)]
                    D[a][a] = field(g)
                    gens.append(TameWord.linear(tuple(tuple(r) for r in D), field))
    return gens
