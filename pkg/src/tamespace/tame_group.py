"""Tame automorphisms stored as generator words.

A word ``g1 g2 ... gk`` denotes the composite ``g1 ∘ g2 ∘ ... ∘ gk`` whose
components satisfy ``(f∘g)_i = f_i(g_1, ..., g_n)``.  Words are never
canonicalized; two words are equal when their expanded components agree.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .errors import DegreeCapExceeded, ParseError, PreconditionError
from .field_poly import QQ, Field, Polynomial, parse_polynomial, substitute, variables

DEFAULT_DEGREE_CAP = 64

Matrix = tuple  # tuple of row tuples


# exact linear algebra over a Field

def mat_identity(n: int, F: Field = QQ) -> Matrix:
    return tuple(tuple(F.one if i == j else F.zero for j in range(n)) for i in range(n))


def mat_mul(A: Matrix, B: Matrix, F: Field = QQ) -> Matrix:
    m = len(B)
    cols = len(B[0]) if m else 0
    out = []
    for row in A:
        r = []
        for j in range(cols):
            s = F.zero
            for k in range(m):
                if row[k] and B[k][j]:
                    s = F.add(s, F.mul(row[k], B[k][j]))
            r.append(s)
        out.append(tuple(r))
    return tuple(out)


def mat_inv(A: Matrix, F: Field = QQ) -> Matrix:
    n = len(A)
    M = [list(F(x) for x in row) + [F.one if i == j else F.zero for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            raise PreconditionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = F.inv(M[c][c])
        M[c] = [F.mul(inv, x) for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [F.add(x, F.neg(F.mul(f, y))) for x, y in zip(M[r], M[c])]
    return tuple(tuple(row[n:]) for row in M)


def mat_det(A: Matrix, F: Field = QQ):
    n = len(A)
    M = [list(F(x) for x in row) for row in A]
    det = F.one
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return F.zero
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = F.neg(det)
        det = F.mul(det, M[c][c])
        inv = F.inv(M[c][c])
        for r in range(c + 1, n):
            if M[r][c]:
                f = F.mul(M[r][c], inv)
                M[r] = [F.add(x, F.neg(F.mul(f, y))) for x, y in zip(M[r], M[c])]
    return det


def is_upper_triangular(A: Matrix) -> bool:
    return all(not A[i][j] for i in range(len(A)) for j in range(i))


def permutation_matrix(images: Sequence[int], F: Field = QQ) -> Matrix:
    """Matrix with a 1 at (σ(j), j) for the 0-based permutation ``images``."""
    n = len(images)
    rows = [[F.zero] * n for _ in range(n)]
    for j, i in enumerate(images):
        rows[i][j] = F.one
    return tuple(tuple(r) for r in rows)


# generators

def _check_caps(comps, cap):
    if cap is not None:
        for c in comps:
            if c.degree() > cap:
                raise DegreeCapExceeded(f"component degree {c.degree()} exceeds cap {cap}")
    return comps


@dataclass(frozen=True)
class Affine:
    """x ↦ A x + t."""

    matrix: Matrix
    vector: tuple
    field: Field = QQ

    def __post_init__(self):
        F = self.field
        A = tuple(tuple(F(x) for x in row) for row in self.matrix)
        n = len(A)
        if any(len(r) != n for r in A):
            raise PreconditionError("affine matrix must be square")
        t = tuple(F(x) for x in (self.vector if self.vector is not None else (0,) * n))
        if len(t) != n:
            raise PreconditionError("translation vector has wrong length")
        if not mat_det(A, F):
            raise PreconditionError("affine matrix is singular")
        object.__setattr__(self, "matrix", A)
        object.__setattr__(self, "vector", t)

    @property
    def n(self):
        return len(self.matrix)

    def after(self, S, cap=None):
        F = self.field
        out = []
        for row, t in zip(self.matrix, self.vector):
            acc = {}
            for a, s in zip(row, S):
                if a:
                    for e, c in s._terms.items():
                        v = F.add(acc.get(e, F.zero), F.mul(a, c))
                        if v:
                            acc[e] = v
                        else:
                            acc.pop(e, None)
            if t:
                z = (0,) * S[0].n
                v = F.add(acc.get(z, F.zero), t)
                if v:
                    acc[z] = v
                else:
                    acc.pop(z, None)
            out.append(Polynomial._raw(S[0].n, F, acc))
        return _check_caps(tuple(out), cap)

    def inverse(self) -> "Affine":
        F = self.field
        Ai = mat_inv(self.matrix, F)
        t = tuple(F.neg(sum((F.mul(a, b) for a, b in zip(row, self.vector)), F.zero)) for row in Ai)
        return Affine(Ai, t, F)

    def to_line(self) -> str:
        fmt = self.field.format
        mat = "[" + ",".join("[" + ",".join(fmt(x) for x in row) + "]" for row in self.matrix) + "]"
        vec = "[" + ",".join(fmt(x) for x in self.vector) + "]"
        return f"aff {mat} {vec}"


@dataclass(frozen=True)
class Elementary:
    """x_i ↦ x_i + P with P free of x_i (``index`` is 0-based)."""

    index: int
    poly: Polynomial

    def __post_init__(self):
        if not 0 <= self.index < self.poly.n:
            raise PreconditionError("elementary index out of range")
        if self.index in self.poly.variables():
            raise PreconditionError(f"elementary polynomial involves x{self.index + 1}")

    @property
    def n(self):
        return self.poly.n

    @property
    def field(self):
        return self.poly.field

    def after(self, S, cap=None):
        out = list(S)
        out[self.index] = S[self.index] + substitute(self.poly, S, cap)
        return _check_caps(tuple(out), cap)

    def inverse(self) -> "Elementary":
        return Elementary(self.index, -self.poly)

    def to_line(self) -> str:
        return f'elem {self.index + 1} "{self.poly}"'


@dataclass(frozen=True)
class Permutation:
    """The automorphism (x_{σ⁻¹(1)}, ..., x_{σ⁻¹(n)}); ``images[j] = σ(j)``, 0-based."""

    images: tuple
    field: Field = QQ

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise PreconditionError(f"not a permutation: {imgs}")
        object.__setattr__(self, "images", imgs)

    @property
    def n(self):
        return len(self.images)

    def preimage(self) -> tuple:
        inv = [0] * self.n
        for j, i in enumerate(self.images):
            inv[i] = j
        return tuple(inv)

    def after(self, S, cap=None):
        pre = self.preimage()
        return tuple(S[pre[i]] for i in range(self.n))

    def inverse(self) -> "Permutation":
        return Permutation(self.preimage(), self.field)

    def to_line(self) -> str:
        return "perm [" + ",".join(str(i + 1) for i in self.images) + "]"


Generator = Affine | Elementary | Permutation


def permute_weight(images: Sequence[int], alpha: Sequence) -> tuple:
    """σ(α) = (α_{σ⁻¹(1)}, ..., α_{σ⁻¹(n)})."""
    n = len(images)
    inv = [0] * n
    for j, i in enumerate(images):
        inv[i] = j
    return tuple(alpha[inv[i]] for i in range(n))


# words

class TameWord:
    """A tame automorphism spelled as a word in generators."""

    __slots__ = ("gens", "n", "field", "degree_cap", "_components", "_pending", "_hash")

    def __init__(self, gens: Sequence[Generator], n: int | None = None, field: Field | None = None,
                 degree_cap: int | None = DEFAULT_DEGREE_CAP):
        gens = tuple(gens)
        if n is None:
            if not gens:
                raise PreconditionError("empty word needs an explicit dimension")
            n = gens[0].n
        if field is None:
            field = gens[0].field if gens else QQ
        for g in gens:
            if g.n != n:
                raise PreconditionError("generator dimension mismatch")
            if g.field != field:
                raise PreconditionError("generator field mismatch")
        self.gens = gens
        self.n = n
        self.field = field
        self.degree_cap = degree_cap
        self._components = None
        self._pending = None
        self._hash = None

    # constructors
    @classmethod
    def identity(cls, n: int, field: Field = QQ, degree_cap=DEFAULT_DEGREE_CAP) -> "TameWord":
        return cls((), n, field, degree_cap)

    @classmethod
    def of(cls, *gens: Generator, degree_cap=DEFAULT_DEGREE_CAP) -> "TameWord":
        return cls(gens, degree_cap=degree_cap)

    @classmethod
    def affine(cls, matrix, vector=None, field: Field = QQ) -> "TameWord":
        return cls.of(Affine(matrix, vector, field))

    @classmethod
    def linear(cls, matrix, field: Field = QQ) -> "TameWord":
        return cls.of(Affine(matrix, None, field))

    @classmethod
    def translation(cls, vector, field: Field = QQ) -> "TameWord":
        n = len(vector)
        return cls.of(Affine(mat_identity(n, field), vector, field))

    @classmethod
    def elementary(cls, index: int, poly: Polynomial | str, n: int | None = None,
                   field: Field = QQ) -> "TameWord":
        """x_{index+1} ↦ x_{index+1} + poly (index is 0-based)."""
        if isinstance(poly, str):
            poly = parse_polynomial(poly, n, field)
        return cls.of(Elementary(index, poly))

    @classmethod
    def permutation(cls, images: Sequence[int], field: Field = QQ) -> "TameWord":
        return cls.of(Permutation(tuple(images), field))

    @classmethod
    def triangular(cls, comps: Sequence[Polynomial]) -> "TameWord":
        """Word for (x_i + P_i) where each P_i only involves later variables."""
        n = len(comps)
        F = comps[0].field
        xs = variables(n, F)
        gens = []
        for i in range(n - 1, -1, -1):
            P = comps[i] - xs[i]
            if any(j <= i for j in P.variables()):
                raise PreconditionError(f"component {i + 1} is not triangular")
            if P:
                gens.append(Elementary(i, P))
        w = cls(gens, n, F)
        if w.components != tuple(comps):
            raise PreconditionError("triangular reconstruction failed")
        return w

    # expansion
    @property
    def components(self) -> tuple:
        if self._components is None:
            if self._pending is not None:
                f, g = self._pending
                self._components = _compose_components(f, g, self.degree_cap)
                self._pending = None
            else:
                S = tuple(variables(self.n, self.field))
                for gen in reversed(self.gens):
                    S = gen.after(S, self.degree_cap)
                self._components = S
        return self._components

    @property
    def key(self) -> tuple:
        return self.components

    def degree(self) -> int:
        return max(c.degree() for c in self.components)

    def is_identity(self) -> bool:
        return self.components == tuple(variables(self.n, self.field))

    def constant_terms(self) -> tuple:
        return tuple(c.constant_term() for c in self.components)

    def is_affine(self) -> bool:
        return self.degree() <= 1

    def linear_matrix(self) -> Matrix:
        return tuple(c.linear_coeffs() for c in self.components)

    # group operations
    def compose(self, other: "TameWord") -> "TameWord":
        return compose(self, other)

    def __matmul__(self, other):
        return compose(self, other)

    def inverse(self, verify: bool = False) -> "TameWord":
        return invert(self, verify)

    def __eq__(self, other):
        if not isinstance(other, TameWord):
            return NotImplemented
        return self.n == other.n and self.field == other.field and self.components == other.components

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.components)
        return self._hash

    def __repr__(self):
        return "TameWord(" + ", ".join(str(c) for c in self.components) + ")"

    def to_text(self) -> str:
        return "\n".join(g.to_line() for g in self.gens)


def _compose_components(f: TameWord, g: TameWord, cap) -> tuple:
    S = g.components
    if f._components is not None and len(f.gens) > 3:
        return tuple(substitute(c, S, cap) for c in f._components)
    for gen in reversed(f.gens):
        S = gen.after(S, cap)
    return S


def compose(f: TameWord, g: TameWord) -> TameWord:
    """f∘g, with (f∘g)_i = f_i(g_1, ..., g_n)."""
    if f.n != g.n:
        raise PreconditionError("dimension mismatch")
    if f.field != g.field:
        raise PreconditionError("field mismatch")
    cap = f.degree_cap if g.degree_cap is None else (
        g.degree_cap if f.degree_cap is None else min(f.degree_cap, g.degree_cap))
    w = TameWord(f.gens + g.gens, f.n, f.field, cap)
    if not f.gens:
        w._components = g._components
        if w._components is None:
            w._pending = (f, g)
    elif not g.gens:
        w._components = f._components
        if w._components is None:
            w._pending = (f, g)
    else:
        w._pending = (f, g)
    return w


def compose_all(words: Sequence[TameWord]) -> TameWord:
    out = words[0]
    for w in words[1:]:
        out = compose(out, w)
    return out


def invert(f: TameWord, verify: bool = False) -> TameWord:
    w = TameWord(tuple(g.inverse() for g in reversed(f.gens)), f.n, f.field, f.degree_cap)
    if verify and not compose(f, w).is_identity():
        raise ArithmeticError("word inverse does not compose to the identity")
    return w


def diff_at_origin(f: TameWord) -> Matrix:
    """Matrix of linear parts; rows are components."""
    if any(f.constant_terms()):
        raise PreconditionError("automorphism does not fix the origin")
    return f.linear_matrix()


def bruhat_permutation(a: Matrix, F: Field = QQ) -> tuple:
    """σ with a ∈ B σ B (B upper triangular), as 0-based images σ(j).

    Columns are scanned left to right; the pivot of each column is its lowest
    nonzero entry among rows not yet used.  Entries above the pivot are
    cleared by row operations (adding lower rows to upper ones) and entries to
    its right by column operations, both of which are upper triangular.
    """
    n = len(a)
    M = [[F(x) for x in row] for row in a]
    if not mat_det(tuple(tuple(r) for r in M), F):
        raise PreconditionError("singular matrix has no Bruhat cell")
    used = set()
    sigma = [0] * n
    for j in range(n):
        i = max(r for r in range(n) if r not in used and M[r][j])
        used.add(i)
        sigma[j] = i
        inv = F.inv(M[i][j])
        for l in range(j + 1, n):
            if M[i][l]:
                f = F.mul(M[i][l], inv)
                for r in range(n):
                    M[r][l] = F.add(M[r][l], F.neg(F.mul(f, M[r][j])))
        for r in range(i):
            if M[r][j]:
                f = F.mul(M[r][j], inv)
                M[r] = [F.add(x, F.neg(F.mul(f, y))) for x, y in zip(M[r], M[i])]
    return tuple(sigma)


def split_translation(f: TameWord) -> tuple[TameWord, TameWord]:
    """f = f0 ∘ t with t the translation sending f⁻¹(0) to 0."""
    F = f.field
    c = invert(f).constant_terms()
    if not any(c):
        return f, TameWord.identity(f.n, F)
    t = TameWord.translation(tuple(F.neg(x) for x in c), F)
    f0 = compose(f, TameWord.translation(c, F))
    return f0, t


# word files

_LIST = re.compile(r"\[[^\[\]]*\]")


def _parse_list(text: str, line: int):
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError(f"expected a bracketed list, got {text!r}", line)
    inner = text[1:-1].strip()
    if inner.startswith("["):
        rows = _LIST.findall(inner)
        if not rows:
            raise ParseError("bad nested list", line)
        return [_parse_list(r, line) for r in rows]
    if not inner:
        return []
    return [t.strip() for t in inner.split(",")]


def parse_generator(line_text: str, n: int | None, F: Field, line: int = 1) -> Generator:
    s = line_text.strip()
    kind, _, rest = s.partition(" ")
    rest = rest.strip()
    try:
        if kind == "aff":
            depth = 0
            for k, ch in enumerate(rest):
                depth += ch == "["
                depth -= ch == "]"
                if depth == 0:
                    split = k + 1
                    break
            else:
                raise ParseError("unbalanced brackets", line)
            mat = [[F(x) for x in row] for row in _parse_list(rest[:split], line)]
            vec_text = rest[split:].strip()
            vec = [F(x) for x in _parse_list(vec_text, line)] if vec_text else None
            return Affine(tuple(tuple(r) for r in mat), tuple(vec) if vec else None, F)
        if kind == "elem":
            m = re.fullmatch(r'(\d+)\s+"([^"]*)"', rest)
            if not m:
                raise ParseError('expected: elem i "P"', line)
            i = int(m.group(1)) - 1
            col = s.index('"') + 2
            try:
                P = parse_polynomial(m.group(2), n, F, line)
            except ParseError as exc:
                raise ParseError(str(exc).split(": ", 1)[1], line, col + exc.column - 1) from None
            return Elementary(i, P)
        if kind == "perm":
            imgs = [int(x) - 1 for x in _parse_list(rest, line)]
            return Permutation(tuple(imgs), F)
    except (ParseError, PreconditionError):
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), line) from None
    raise ParseError(f"unknown generator kind {kind!r}", line)


def parse_word(text: str, n: int | None = None, F: Field = QQ,
               degree_cap: int | None = DEFAULT_DEGREE_CAP) -> TameWord:
    """Parse a word file: one generator per line, composed left to right."""
    lines = [(k + 1, ln.split("#", 1)[0]) for k, ln in enumerate(text.splitlines())]
    lines = [(k, ln) for k, ln in lines if ln.strip()]
    if n is None:
        for _, ln in lines:
            kind = ln.split()[0]
            if kind in ("aff", "perm"):
                g = parse_generator(ln, None, F)
                n = g.n
                break
        else:
            n = max((int(v) for _, ln in lines for v in re.findall(r"x(\d+)", ln)), default=1)
            n = max(n, max((int(ln.split()[1]) for _, ln in lines if ln.split()[0] == "elem"), default=1))
    gens = [parse_generator(ln, n, F, k) for k, ln in lines]
    if any(g.n != n for g in gens):
        raise ParseError("generators have mixed dimensions")
    return TameWord(gens, n, F, degree_cap)


# finite group enumeration

@dataclass
class GroupBall:
    """Elements reached by right multiplication by generators, in BFS order.

    ``right[s][k]`` is the index of ``elements[k] ∘ generators[s]`` or -1 when
    that product lies outside the enumerated ball.
    """

    generators: list
    elements: list
    index: dict
    words: list
    right: np.ndarray
    closed: bool
    depth: list = dc_field(default_factory=list)

    def __len__(self):
        return len(self.elements)

    def right_action(self, k: int) -> np.ndarray:
        """Index permutation x ↦ x ∘ elements[k]; only valid on closed groups."""
        perm = np.arange(len(self.elements))
        for s in self.words[k]:
            perm = self.right[s][perm]
        return perm


def enumerate_group(generators: Sequence[TameWord], radius: int | None = None,
                    max_elements: int = 200000) -> GroupBall:
    gens = list(generators)
    if not gens:
        raise PreconditionError("need at least one generator")
    n, F = gens[0].n, gens[0].field
    ident = TameWord.identity(n, F, gens[0].degree_cap)
    elements = [ident]
    index = {ident.key: 0}
    words = [()]
    depth = [0]
    rows = [[] for _ in gens]
    queue = deque([0])
    closed = True
    while queue:
        k = queue.popleft()
        f = elements[k]
        for s, g in enumerate(gens):
            if radius is not None and depth[k] >= radius:
                rows[s].append(-1)
                closed = False
                continue
            h = compose(f, g)
            key = h.key
            j = index.get(key)
            if j is None:
                if len(elements) >= max_elements:
                    from .errors import BudgetExhausted
                    raise BudgetExhausted(f"group exceeds {max_elements} elements")
                j = len(elements)
                index[key] = j
                elements.append(h)
                words.append(words[k] + (s,))
                depth.append(depth[k] + 1)
                queue.append(j)
            rows[s].append(j)
    right = np.array(rows, dtype=np.int64).reshape(len(gens), len(elements))
    return GroupBall(gens, elements, index, words, right, closed, depth)
