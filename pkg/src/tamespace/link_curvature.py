"""Metric link graphs at a point of the three-dimensional space, their girth,
and the two worked angle examples (the Fano incidence graph and the
eight-arc cycle).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import networkx as nx
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .admissible_geometry import local_radius
from .errors import PreconditionError
from .field_poly import GF, Field, variables
from .metric import (
    Ray,
    angle,
    local_rays,
    sample_on_ray,
    sectors,
)
from .tame_group import TameWord, compose, enumerate_group, invert, mat_det
from .valuation_space import ValuationPoint, fixes, point_eval

TWO_PI = 2 * math.pi


@dataclass
class LinkGraph:
    weight: tuple
    rays: list  # Ray objects (sorted chamber)
    graph: nx.MultiGraph  # nodes (ray index, class); edges keyed (sector index, class)
    group_order: int
    closed: bool
    tags: dict = dc_field(default_factory=dict)

    @property
    def num_vertices(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def num_edges(self) -> int:
        return self.graph.number_of_edges()

    def vertex_counts(self) -> dict:
        out = {}
        for r, _ in self.graph.nodes:
            out[r] = out.get(r, 0) + 1
        return out

    def to_dot(self) -> str:
        names = {v: f"r{v[0]}_{v[1]}" for v in sorted(self.graph.nodes)}
        lines = ["graph link {"]
        for v in sorted(self.graph.nodes):
            lines.append(f'  {names[v]} [label="{self.rays[v[0]].label} #{v[1]}"];')
        for u, v, k, d in sorted(self.graph.edges(keys=True, data=True), key=lambda e: (e[2], e[0], e[1])):
            lines.append(f'  {names[u]} -- {names[v]} [label="{d["length"]:.6f}"];')
        lines.append("}")
        return "\n".join(lines)


def stabilizer_of_weight_permutations(alpha, field: Field) -> list[TameWord]:
    """Transpositions of equal coordinates (they fix ν_{id,[α]})."""
    n = len(alpha)
    out = []
    for i in range(n - 1):
        if alpha[i] == alpha[i + 1]:
            images = list(range(n))
            images[i], images[i + 1] = i + 1, i
            out.append(TameWord.permutation(images, field))
    return out


def _class_count_closed(ball, member_mask: np.ndarray) -> tuple[int, np.ndarray]:
    """Left cosets f·H with H = {h : member_mask[h]} as connected components."""
    N = len(ball)
    hs = np.flatnonzero(member_mask)
    rows, cols = [], []
    for h in hs:
        perm = ball.right_action(int(h))
        rows.append(np.arange(N))
        cols.append(perm)
    A = coo_matrix((np.ones(N * len(hs), dtype=np.int8), (np.concatenate(rows), np.concatenate(cols))), shape=(N, N))
    k, labels = connected_components(A, directed=False)
    if N % len(hs) or k != N // len(hs):
        raise ArithmeticError("coset count disagrees with the subgroup index")
    return k, labels


def _class_labels_open(frames: list[TameWord], pt) -> np.ndarray:
    # pairwise exact tests inside signature buckets
    F = frames[0].field
    n = frames[0].n
    xs = variables(n, F)
    probes = xs + [xs[0] + xs[1] ** 2, xs[0] + xs[n - 1] ** 3, xs[1] + xs[n - 1] ** 2]
    labels = np.full(len(frames), -1, dtype=np.int64)
    reps = []
    buckets = {}
    for k, f in enumerate(frames):
        nu = ValuationPoint(f, pt)
        sig = tuple(point_eval(nu, P) for P in probes)
        for c in buckets.get(sig, ()):
            if fixes(compose(invert(reps[c]), f), pt):
                labels[k] = c
                break
        else:
            labels[k] = len(reps)
            buckets.setdefault(sig, []).append(len(reps))
            reps.append(f)
    return labels


def build_link(nu: ValuationPoint, generators: Sequence[TameWord], radius: int | None = None,
               max_elements: int = 200000) -> LinkGraph:
    """Link of ν inside the union of sorted chambers E⁺_f, f in the generated group.

    Rays and sectors of the sorted chamber are sampled at exact points inside
    the isolation ball; (f, ray) and (g, ray) are one vertex iff f⁻¹g fixes
    the ray's sample point, likewise for edges and sectors.
    """
    if nu.frame.n != 3:
        raise PreconditionError("links are built for n = 3")
    s = nu.sorted_frame()
    alpha = s.weight
    F = s.frame.field
    base_inv = invert(s.frame)
    conj = []
    for g in generators:
        c = compose(compose(base_inv, g), s.frame)
        if not fixes(c, alpha):
            raise PreconditionError(f"generator {g!r} does not fix the point")
        conj.append(c)
    conj += stabilizer_of_weight_permutations(alpha, F)
    if not conj:
        conj = [TameWord.identity(3, F)]
    ball = enumerate_group(conj, radius=radius, max_elements=max_elements)
    r = local_radius(alpha)
    rays = local_rays(alpha, sorted_only=True)
    interior = len(set(alpha)) == len(alpha)
    secs = sectors(alpha, rays, cyclic=interior)
    ray_pts = [sample_on_ray(alpha, ray, r) for ray in rays]
    sec_pts = [sample_on_ray(alpha, b, r) for _, _, b in secs]

    def labels_at(pt):
        if ball.closed:
            mask = np.array([fixes(h, pt) for h in ball.elements])
            return _class_count_closed(ball, mask)[1]
        return _class_labels_open(ball.elements, pt)

    vlab = [labels_at(p) for p in ray_pts]
    G = nx.MultiGraph()
    for ri, lab in enumerate(vlab):
        G.add_nodes_from((ri, int(c)) for c in np.unique(lab))
    for si, ((i, j, _), pt) in enumerate(zip(secs, sec_pts)):
        lab = labels_at(pt)
        length = angle(alpha, rays[i], rays[j])
        first = {}
        for k, c in enumerate(lab):
            first.setdefault(int(c), k)
        for c, k in sorted(first.items()):
            G.add_edge((i, int(vlab[i][k])), (j, int(vlab[j][k])), key=(si, c), length=length)
    return LinkGraph(alpha, rays, G, len(ball), ball.closed)


def _simple_weighted(link: LinkGraph, unit: bool) -> list:
    return [(u, v, k, 1.0 if unit else d["length"]) for u, v, k, d in link.graph.edges(keys=True, data=True)]


def _girth(link: LinkGraph, unit: bool) -> float:
    """Shortest cycle: for each edge, the shortest path avoiding it plus the edge."""
    edges = _simple_weighted(link, unit)
    best = math.inf
    for u, v, key, w in edges:
        if u == v:
            best = min(best, w)
            continue
        H = nx.Graph()
        H.add_nodes_from(link.graph.nodes)
        for a, b, k2, w2 in edges:
            if k2 == key and {a, b} == {u, v}:
                continue
            if a == b:
                continue
            if H.has_edge(a, b):
                H[a][b]["w"] = min(H[a][b]["w"], w2)
            else:
                H.add_edge(a, b, w=w2)
        try:
            d = nx.dijkstra_path_length(H, u, v, weight="w")
        except nx.NetworkXNoPath:
            continue
        best = min(best, d + w)
    return best


def metric_girth(link: LinkGraph) -> float:
    return _girth(link, unit=False)


def combinatorial_girth(link: LinkGraph) -> float:
    return _girth(link, unit=True)


def combinatorial_diameter(link: LinkGraph) -> int:
    return nx.diameter(nx.Graph(link.graph))


@dataclass(frozen=True)
class Cat1Report:
    girth: float
    combinatorial_girth: float
    holds: bool
    closed: bool
    tolerance: float

    def __str__(self):
        scope = "full finite group" if self.closed else "generated ball only"
        verdict = "girth >= 2pi" if self.holds else "girth < 2pi"
        return (f"metric girth {self.girth:.12f}, combinatorial girth {self.combinatorial_girth:g}: "
                f"{verdict} ({scope})")


def check_cat1(link: LinkGraph, tol: float = 1e-9) -> Cat1Report:
    if link.num_edges == 0:
        raise PreconditionError("empty link")
    g = metric_girth(link)
    return Cat1Report(g, combinatorial_girth(link), g >= TWO_PI - tol, link.closed, tol)


# worked examples

def affine_generators(n: int, field: Field) -> list[TameWord]:
    """Generators of GL_n ⋉ translations over a prime field."""
    xs = variables(n, field)
    gens = []
    for i, j in itertools.permutations(range(n), 2):
        gens.append(TameWord.elementary(i, xs[j]))
    for i in range(n):
        gens.append(TameWord.elementary(i, xs[0] * 0 + field(1)))
    if field.char != 2:
        from .stabilizer import primitive_root
        g = primitive_root(field.char) if field.char else 2
        D = [[field(int(a == b)) for b in range(n)] for a in range(n)]
        D[0][0] = field(g)
        gens.append(TameWord.linear(tuple(tuple(r) for r in D), field))
    return gens


def fano_link() -> LinkGraph:
    F = GF(2)
    return build_link(ValuationPoint.standard((1, 1, 1), F), affine_generators(3, F))


def finite_stabilizer_link(alpha, field: Field | None = None) -> LinkGraph:
    from .stabilizer import stabilizer_generators

    field = field or GF(2)
    return build_link(ValuationPoint.standard(alpha, field), stabilizer_generators(alpha, field))


@dataclass
class AngleCycle:
    p: int
    q: int
    log_lengths: tuple
    simplex_lengths: tuple
    gluings: dict
    commute: bool

    @property
    def log_total(self) -> float:
        return math.fsum(self.log_lengths)

    @property
    def simplex_total(self) -> float:
        return math.fsum(self.simplex_lengths)


def example_angles_cycle(p: int, q: int, field: Field | None = None) -> AngleCycle:
    """Four chamber arcs from the ray toward [0,0,1] to the ray toward [0,1,0]
    at α = (pq, p, 1), through E_id, E_f, E_{fg}, E_g with
    f = (x1 + x2^q, x2, x3) and g = (x1 + x3^{pq}, x2, x3)."""
    if p < 1 or q < 1:
        raise PreconditionError("p, q >= 1")
    from .field_poly import QQ

    F = field or QQ
    m = p * q
    alpha = (Fraction(m), Fraction(p), Fraction(1))
    x1, x2, x3 = variables(3, F)
    f = TameWord.elementary(0, x2 ** q)
    g = TameWord.elementary(0, x3 ** m)
    fg, gf = compose(f, g), compose(g, f)
    down, side = Ray.toward((0, 0, 1)), Ray.toward((0, 1, 0))
    r = local_radius(alpha)
    pd, ps = sample_on_ray(alpha, down, r), sample_on_ray(alpha, side, r)
    ident = TameWord.identity(3, F)

    def same(a, b, pt):
        return fixes(compose(invert(a), b), pt)

    gluings = {
        "id~f on [0,0,1]": same(ident, f, pd),
        "id~g on [0,1,0]": same(ident, g, ps),
        "f~fg on [0,1,0]": same(f, fg, ps),
        "fg~g on [0,0,1]": same(fg, g, pd),
        "id!~g on [0,0,1]": not same(ident, g, pd),
        "id!~f on [0,1,0]": not same(ident, f, ps),
    }
    lo = angle(alpha, down, side, "log")
    si = angle(alpha, down, side, "simplex")
    return AngleCycle(p, q, (lo,) * 4, (si,) * 4, gluings, fg == gf)


def is_in_gl(f: TameWord) -> bool:
    return f.is_affine() and not any(f.constant_terms()) and mat_det(f.linear_matrix(), f.field) != 0
