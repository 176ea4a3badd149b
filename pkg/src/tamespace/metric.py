"""Log-Euclidean geometry on the weight simplex, angles at a weight, distance
bounds between valuation points, and the dimension-two tree.

Exact rationals are used for every membership test; only lengths and angles
are floats.
"""

from __future__ import annotations

import functools
import heapq
import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import networkx as nx

from .admissible_geometry import (
    AdmissibleInequality,
    as_weight,
    hyperplanes_through,
    local_radius,
)
from .errors import PreconditionError
from .field_poly import Field, Polynomial, variables
from .tame_group import TameWord, compose, invert
from .valuation_space import (
    ValuationPoint,
    fixes,
    point_eval,
    rho,
)

TOL = 1e-9


# log coordinates

@dataclass(frozen=True)
class LogPoint:
    beta: tuple

    def __post_init__(self):
        b = tuple(float(x) for x in self.beta)
        s = sum(b) / len(b)
        object.__setattr__(self, "beta", tuple(x - s for x in b))

    def weight(self) -> tuple:
        return tuple(math.exp(x) for x in self.beta)


def _log(q) -> float:
    q = Fraction(q)
    return math.log(q.numerator) - math.log(q.denominator)


def log_coords(alpha) -> LogPoint:
    return LogPoint(tuple(_log(a) for a in as_weight(alpha)))


def apartment_distance(alpha, beta) -> float:
    a, b = log_coords(alpha).beta, log_coords(beta).beta
    if len(a) != len(b):
        raise PreconditionError("dimension mismatch")
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def log_ratio_length(r) -> float:
    """Length of the n=2 segment from [i, 1] to [j, 1] with r = j/i."""
    return abs(_log(r)) / math.sqrt(2)


def halfspace_midpoint_check(ineq: AdmissibleInequality, alpha, beta, tol: float = 1e-12) -> bool:
    """The log-midpoint of two boundary weights stays in the half-space."""
    alpha, beta = as_weight(alpha), as_weight(beta)
    if not (ineq.on_hyperplane(alpha) and ineq.on_hyperplane(beta)):
        raise PreconditionError("both weights must lie on the hyperplane")
    mid = [math.sqrt(float(a) * float(b)) for a, b in zip(alpha, beta)]
    lhs = mid[ineq.i]
    rhs = sum(m * x for m, x in zip(ineq.m, mid))
    return lhs - rhs >= -tol * max(1.0, lhs)


# directions at a weight (n = 3)

def _center(v) -> tuple:
    s = sum(v, Fraction(0)) / len(v)
    return tuple(x - s for x in v)


def _cross(a, b) -> tuple:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _angle_between(u, v) -> float:
    u = [float(x) for x in u]
    v = [float(x) for x in v]
    nu = math.sqrt(_dot(u, u))
    nv = math.sqrt(_dot(v, v))
    if nu == 0 or nv == 0:
        raise PreconditionError("degenerate direction")
    c = _dot(u, v) / (nu * nv)
    # atan2 form keeps precision near 0 and π
    cr = _cross(u, v) if len(u) == 3 else (0.0, 0.0, 0.0)
    s = math.sqrt(_dot(cr, cr)) / (nu * nv)
    if len(u) != 3:
        return math.acos(max(-1.0, min(1.0, c)))
    return math.atan2(s, c)


@dataclass(frozen=True)
class Ray:
    """Half-line α + s·d (s ≥ 0) in weight space; d is exact."""

    direction: tuple
    label: str = ""

    @classmethod
    def toward(cls, point) -> "Ray":
        p = tuple(Fraction(x) for x in point)
        if any(x < 0 for x in p) or not any(p):
            raise PreconditionError("ideal points are non-negative and nonzero")
        return cls(p, "[" + ",".join(str(x) for x in p) + "]")

    @classmethod
    def along(cls, ineq: AdmissibleInequality, alpha, side: int) -> "Ray":
        """One of the two half-curves of ineq's hyperplane through [α].

        side=+1 follows (1,1,1) × ∇F, the rotation by +π/2 of the gradient
        of F = α_i − Σ m_j α_j in log coordinates.
        """
        alpha = as_weight(alpha)
        if len(alpha) != 3:
            raise PreconditionError("hyperplane rays need n = 3")
        if not ineq.on_hyperplane(alpha):
            raise PreconditionError(f"{ineq.equation_text()} does not pass through the weight")
        if side not in (1, -1):
            raise PreconditionError("side must be +1 or -1")
        t = _cross((1, 1, 1), gradient_tangent_normal(ineq, alpha))
        d = tuple(side * a * x for a, x in zip(alpha, t))
        sign = "+" if side > 0 else "-"
        return cls(d, f"{ineq.equation_text()} ({sign})")


def gradient_tangent_normal(ineq: AdmissibleInequality, alpha) -> tuple:
    """Centered gradient of exp β_i − Σ m_j exp β_j at β = log α."""
    g = tuple(Fraction(alpha[k]) if k == ineq.i else -ineq.m[k] * Fraction(alpha[k]) for k in range(len(alpha)))
    return _center(g)


def log_tangent(alpha, ray: Ray) -> tuple:
    alpha = as_weight(alpha)
    return _center(tuple(d / a for d, a in zip(ray.direction, alpha)))


def simplex_tangent(alpha, ray: Ray) -> tuple:
    alpha = as_weight(alpha)
    S = sum(alpha)
    D = sum(ray.direction, Fraction(0))
    return tuple((d * S - a * D) / (S * S) for d, a in zip(ray.direction, alpha))


def angle(alpha, ray1: Ray, ray2: Ray, metric: str = "log") -> float:
    alpha = as_weight(alpha)
    if len(alpha) != 3:
        raise PreconditionError("angles are computed for n = 3")
    if metric == "log":
        tan = log_tangent
    elif metric == "simplex":
        tan = simplex_tangent
    else:
        raise PreconditionError(f"unknown metric {metric!r}")
    t1, t2 = tan(alpha, ray1), tan(alpha, ray2)
    if not any(t1) or not any(t2):
        raise PreconditionError("direction does not leave the weight")
    return _angle_between(t1, t2)


# angular order in the Σβ = 0 plane, basis u1 = (1,-1,0), u2 = (1,1,-2) (orthogonal)

def _plane_xy(t) -> tuple:
    return (t[0] - t[1], t[0] + t[1] - 2 * t[2])


def _half(xy) -> int:
    x, y = xy
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _cmp_ccw(t1, t2) -> int:
    a, b = _plane_xy(t1), _plane_xy(t2)
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    cr = a[0] * b[1] - a[1] * b[0]
    return -1 if cr > 0 else (1 if cr < 0 else 0)


def _same_direction(t1, t2) -> bool:
    a, b = _plane_xy(t1), _plane_xy(t2)
    return a[0] * b[1] - a[1] * b[0] == 0 and a[0] * b[0] + a[1] * b[1] > 0


def _ccw_angle_is(t1, t2) -> int:
    """Sign of (ccw angle from t1 to t2) − π: -1, 0 or 1."""
    a, b = _plane_xy(t1), _plane_xy(t2)
    cr = a[0] * b[1] - a[1] * b[0]
    if cr > 0:
        return -1
    if cr < 0:
        return 1
    return 0 if a[0] * b[0] + a[1] * b[1] < 0 else 1


def in_sorted_cone(alpha, t) -> bool:
    """Whether the tangent t points into the closed sorted chamber at [α]."""
    return all(t[k] >= t[k + 1] for k in range(len(alpha) - 1) if alpha[k] == alpha[k + 1])


def local_rays(alpha, sorted_only: bool = False) -> list[Ray]:
    """Rays of the through-hyperplane arrangement at [α], counter-clockwise.

    A weight on no admissible hyperplane uses the three lines toward the
    vertices of the simplex instead.  With sorted_only, rays leaving the
    sorted chamber are dropped.
    """
    alpha = as_weight(alpha)
    if len(alpha) != 3:
        raise PreconditionError("local rays are computed for n = 3")
    rays = []
    hs = hyperplanes_through(alpha)
    if hs:
        for h in hs:
            rays.extend(Ray.along(h, alpha, s) for s in (1, -1))
    else:
        for k in range(3):
            e = tuple(Fraction(int(j == k)) for j in range(3))
            rays.append(Ray(e, f"toward e{k + 1}"))
            rays.append(Ray(tuple(-x for x in e), f"away from e{k + 1}"))
    out = []
    for r in rays:
        t = log_tangent(alpha, r)
        if sorted_only and not in_sorted_cone(alpha, t):
            continue
        if any(_same_direction(t, log_tangent(alpha, o)) for o in out):
            continue
        out.append(r)
    out.sort(key=functools.cmp_to_key(lambda r1, r2: _cmp_ccw(log_tangent(alpha, r1), log_tangent(alpha, r2))))
    if sorted_only and out:
        out = _rotate_to_arc(alpha, out)
    return out


def _rotate_to_arc(alpha, rays):
    """Start the cyclic list after its gap, so that consecutive pairs stay in the cone."""
    if all(alpha[k] != alpha[k + 1] for k in range(len(alpha) - 1)):
        return rays
    ts = [log_tangent(alpha, r) for r in rays]
    k = len(rays)
    for i in range(k):
        a, b = ts[i], ts[(i + 1) % k]
        mid = sector_tangent(a, b)
        if not in_sorted_cone(alpha, mid) or (k == 1):
            return rays[i + 1:] + rays[:i + 1]
    return rays


def sector_tangent(t1, t2) -> tuple:
    """A tangent strictly inside the ccw sector from t1 to t2."""
    s = _ccw_angle_is(t1, t2)
    if s < 0:
        return tuple(a + b for a, b in zip(t1, t2))
    if s == 0:
        return _cross((1, 1, 1), t1)
    return tuple(-(a + b) for a, b in zip(t1, t2))


def sectors(alpha, rays: Sequence[Ray], cyclic: bool) -> list[tuple[int, int, Ray]]:
    """(i, j, bisector) for consecutive rays i → j."""
    alpha = as_weight(alpha)
    k = len(rays)
    pairs = [(i, (i + 1) % k) for i in range(k if cyclic else k - 1)]
    out = []
    for i, j in pairs:
        t = sector_tangent(log_tangent(alpha, rays[i]), log_tangent(alpha, rays[j]))
        d = tuple(a * x for a, x in zip(alpha, t))
        out.append((i, j, Ray(d, f"between {rays[i].label} and {rays[j].label}")))
    return out


def sample_on_ray(alpha, ray: Ray, radius: float | None = None) -> tuple:
    """Exact point α + s·d with log distance below radius/2 from [α]."""
    alpha = as_weight(alpha)
    if radius is None:
        radius = local_radius(alpha)
    s = Fraction(1)
    while True:
        pt = tuple(a + s * d for a, d in zip(alpha, ray.direction))
        if all(x > 0 for x in pt) and apartment_distance(alpha, pt) < radius / 2:
            return pt
        s /= 2


def local_sample_points(alpha) -> list[tuple]:
    """One exact point per ray and per open sector around [α] (n = 2 or 3)."""
    alpha = as_weight(alpha)
    if len(alpha) == 2:
        r = local_radius(alpha)
        return [sample_on_ray(alpha, Ray((Fraction(1), Fraction(0))), r),
                sample_on_ray(alpha, Ray((Fraction(0), Fraction(1))), r)]
    if len(alpha) != 3:
        raise PreconditionError("local sampling is implemented for n = 2 and n = 3")
    r = local_radius(alpha)
    rays = local_rays(alpha)
    pts = [sample_on_ray(alpha, ray, r) for ray in rays]
    pts += [sample_on_ray(alpha, b, r) for _, _, b in sectors(alpha, rays, cyclic=True)]
    return pts


def tau_involution(p, point) -> tuple:
    """[α1, α2, α3] ↦ [α1, p·α3, α2/p]; also valid on ideal points."""
    p = Fraction(p)
    if p <= 0:
        raise PreconditionError("p must be positive")
    a1, a2, a3 = (Fraction(x) for x in point)
    return (a1, p * a3, a2 / p)


def tau_direction(p, ray: Ray) -> Ray:
    return Ray(tau_involution(p, ray.direction), "τ " + ray.label)


# distance bounds

def _translate(g: TameWord, nu: ValuationPoint) -> ValuationPoint:
    return ValuationPoint(compose(g, nu.frame), nu.weight)


def distance_lower(nu1: ValuationPoint, nu2: ValuationPoint) -> float:
    """max over g of d(ρ(g⁻¹ν₁), ρ(g⁻¹ν₂)), g ∈ {id, frame of ν₁, frame of ν₂}.

    Each term is a lower bound: g⁻¹ is an isometry and ρ does not expand.
    """
    if nu1.frame.n != nu2.frame.n or nu1.frame.field != nu2.frame.field:
        raise PreconditionError("points live in different spaces")
    best = 0.0
    seen = set()
    for g in (None, nu1.frame, nu2.frame):
        if g is not None:
            if g.key in seen:
                continue
            seen.add(g.key)
            gi = invert(g)
            a, b = _translate(gi, nu1), _translate(gi, nu2)
        else:
            seen.add(TameWord.identity(nu1.frame.n, nu1.frame.field).key)
            a, b = nu1, nu2
        best = max(best, apartment_distance(rho(a).values, rho(b).values))
    return best


@dataclass
class ChainWitness:
    hops: list  # (frame, weight) pairs
    length: float
    certificates: list = dc_field(default_factory=list)  # "segment" or "same point"

    def __str__(self):
        lines = []
        for (f, w), c in zip(self.hops, ["start"] + self.certificates):
            lines.append(f"{c}: {f!r} @ ({','.join(str(x) for x in w)})")
        lines.append(f"length {self.length:.12g}")
        return "\n".join(lines)


def _products(catalog: Sequence[TameWord], depth: int) -> list[TameWord]:
    out, layer = [], [None]
    for _ in range(depth):
        nxt = []
        for w in layer:
            for c in catalog:
                nxt.append(c if w is None else compose(w, c))
        out.extend(nxt)
        layer = nxt
    return out


def weight_mesh(n: int, top: Fraction, mesh: int, extra=()) -> list[tuple]:
    """Sorted rational grid with last coordinate 1 and every permutation of it."""
    vals = sorted({Fraction(1) + Fraction(j, mesh) * (top - 1) for j in range(mesh + 1)})
    pts = set()
    for combo in itertools.combinations_with_replacement(vals, n - 1):
        base = tuple(sorted(combo, reverse=True)) + (Fraction(1),)
        pts.update(itertools.permutations(base))
    for e in extra:
        e = as_weight(e)
        lo = min(e)
        pts.add(tuple(x / lo for x in e))
    return sorted(pts)


def chain_distance_upper(nu1: ValuationPoint, nu2: ValuationPoint, catalog: Sequence[TameWord] = (),
                         depth: int = 1, mesh: int = 4) -> tuple[float, ChainWitness | None]:
    """Shortest chain over the apartments of a finite frame set.

    Nodes are (frame, mesh weight); inside an apartment any two nodes are
    joined by their straight log segment; two frames meet at a weight when
    one is the other composed with something fixing that weight.
    """
    n, F = nu1.frame.n, nu1.frame.field
    if nu2.frame.n != n or nu2.frame.field != F:
        raise PreconditionError("points live in different spaces")
    frames = [nu1.frame, nu2.frame]
    for c in _products(list(catalog), depth):
        frames += [compose(nu1.frame, c), compose(nu2.frame, c), c]
    uniq = {}
    for f in frames:
        uniq.setdefault(f.key, f)
    frames = list(uniq.values())
    w1 = _normalize(nu1.weight)
    w2 = _normalize(nu2.weight)
    top = max(max(w1), max(w2), Fraction(2))
    pts = weight_mesh(n, top, mesh, extra=(w1, w2))
    pidx = {p: i for i, p in enumerate(pts)}
    i1 = frames.index(uniq[nu1.frame.key])
    i2 = frames.index(uniq[nu2.frame.key])
    src, dst = (i1, pidx[w1]), (i2, pidx[w2])
    rel = {}
    for a, b in itertools.combinations(range(len(frames)), 2):
        rel[a, b] = compose(invert(frames[b]), frames[a])
    meet = {}
    for p_i, p in enumerate(pts):
        for (a, b), h in rel.items():
            if fixes(h, p):
                meet.setdefault((a, p_i), []).append(b)
                meet.setdefault((b, p_i), []).append(a)
    dist = [[apartment_distance(p, q) for q in pts] for p in pts]
    best = {src: 0.0}
    prev = {}
    heap = [(0.0, src)]
    while heap:
        d, node = heapq.heappop(heap)
        if d > best.get(node, math.inf):
            continue
        if node == dst:
            break
        f_i, p_i = node
        steps = [((f_i, q), dist[p_i][q], "segment") for q in range(len(pts)) if q != p_i]
        steps += [((g, p_i), 0.0, "same point") for g in meet.get(node, ())]
        for nxt, w, tag in steps:
            nd = d + w
            if nd < best.get(nxt, math.inf) - 1e-15:
                best[nxt] = nd
                prev[nxt] = (node, tag)
                heapq.heappush(heap, (nd, nxt))
    if dst not in best:
        return math.inf, None
    hops, certs = [], []
    node = dst
    while node != src:
        p, tag = prev[node]
        hops.append((frames[node[0]], pts[node[1]]))
        certs.append(tag)
        node = p
    hops.append((frames[src[0]], pts[src[1]]))
    hops.reverse()
    certs.reverse()
    return best[dst], ChainWitness(hops, best[dst], certs)


def _normalize(w) -> tuple:
    w = as_weight(w)
    lo = min(w)
    return tuple(x / lo for x in w)


# the tree for n = 2

def affine_group_elements(field: Field) -> list[TameWord]:
    """All affine automorphisms of the plane over a prime field."""
    p = field.char
    if not p:
        raise PreconditionError("needs a finite field")
    out = []
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * d - b * c) % p == 0:
            continue
        for u, v in itertools.product(range(p), repeat=2):
            M = ((field(a), field(b)), (field(c), field(d)))
            out.append(TameWord.affine(M, (field(u), field(v)), field))
    return out


def vertex_stabilizer_elements(i: int, field: Field) -> list[TameWord]:
    """Elements of the stabilizer of s_i = [i, 1] over a prime field.

    For i ≥ 2 these are (a·x1 + P(x2), b·x2 + c) with deg P ≤ i, written as
    diag(a, b) ∘ (x1 + P/a, x2 + c/b).
    """
    if i == 1:
        return affine_group_elements(field)
    p = field.char
    xs = variables(2, field)
    out = []
    for coeffs in itertools.product(range(p), repeat=i + 1):
        P = Polynomial.zero(2, field)
        for k, c in enumerate(coeffs):
            if c:
                P = P + xs[1] ** k * field(c)
        for a, b in itertools.product(range(1, p), repeat=2):
            for c in range(p):
                tri = TameWord.triangular((xs[0] + P * field.inv(field(a)),
                                           xs[1] + field(c) * field.inv(field(b))))
                if a == 1 and b == 1:
                    out.append(tri)
                else:
                    D = ((field(a), field(0)), (field(0), field(b)))
                    out.append(compose(TameWord.linear(D, field), tri))
    return out


@dataclass
class TreeFragment:
    chambers: list  # frames
    vertices: dict  # class id -> (chamber index, i)
    edges: dict  # class id -> (chamber index, i) for the edge [i, i+1]
    graph: nx.MultiGraph
    cap: int

    @property
    def components(self) -> int:
        return nx.number_connected_components(self.graph)


def edge_length_ratio(i: int) -> Fraction:
    return Fraction(i + 1, i)


def edge_length(i: int) -> float:
    return log_ratio_length(edge_length_ratio(i))


_TEST_CACHE = {}


def _test_polys(field: Field) -> list[Polynomial]:
    if field not in _TEST_CACHE:
        x1, x2 = variables(2, field)
        _TEST_CACHE[field] = [x1, x2, x1 + x2, x1 + x2 ** 2, x1 + x2 ** 3, x1 * x2 + 1, x2 + x1 ** 2]
    return _TEST_CACHE[field]


def _signature(frame: TameWord, alpha) -> tuple:
    nu = ValuationPoint(frame, alpha)
    return tuple(point_eval(nu, P) for P in _test_polys(frame.field))


class _Classes:
    """Exact classes of points ν_{f,α} at a fixed α, bucketed by signature."""

    def __init__(self, alpha):
        self.alpha = as_weight(alpha)
        self.buckets = {}
        self.reps = []

    def find_or_add(self, frame: TameWord) -> tuple[int, bool]:
        sig = _signature(frame, self.alpha)
        for k in self.buckets.get(sig, ()):
            if fixes(compose(invert(self.reps[k]), frame), self.alpha):
                return k, False
        k = len(self.reps)
        self.reps.append(frame)
        self.buckets.setdefault(sig, []).append(k)
        return k, True


def x2_tree_ball(root: ValuationPoint, depth: int, cap: int = 3, field: Field | None = None) -> TreeFragment:
    """Truncated chambers {ν_{f,[t,1]} : 1 ≤ t ≤ cap} reachable in `depth` vertex hops.

    Each hop replaces a chamber f by f∘g with g fixing one of the vertices
    s_i = [i, 1]; chambers, vertices and edges are glued by exact point
    equality.
    """
    if root.frame.n != 2:
        raise PreconditionError("the tree lives in dimension 2")
    field = field or root.frame.field
    if root.frame.field != field:
        raise PreconditionError("root frame is over a different field")
    s = root.sorted_frame().frame
    stabs = {i: vertex_stabilizer_elements(i, field) for i in range(1, cap + 1)}
    lo, hi = (Fraction(1), Fraction(1)), (Fraction(cap), Fraction(1))
    inner = (Fraction(2 * cap + 1, 2) if cap > 1 else Fraction(3, 2), Fraction(1))

    chambers = []
    buckets = {}

    def add_chamber(f):
        sig = (_signature(f, lo), _signature(f, hi), _signature(f, inner))
        for k in buckets.get(sig, ()):
            h = compose(invert(chambers[k]), f)
            if fixes(h, lo) and fixes(h, hi):
                return None
        buckets.setdefault(sig, []).append(len(chambers))
        chambers.append(f)
        return len(chambers) - 1

    add_chamber(s)
    layer = [0]
    for _ in range(depth):
        nxt = []
        for k in layer:
            f = chambers[k]
            for i in range(1, cap + 1):
                for g in stabs[i]:
                    j = add_chamber(compose(f, g))
                    if j is not None:
                        nxt.append(j)
        layer = nxt

    vclasses = {i: _Classes((Fraction(i), Fraction(1))) for i in range(1, cap + 1)}
    eclasses = {i: _Classes((Fraction(2 * i + 1, 2), Fraction(1))) for i in range(1, cap)}
    G = nx.MultiGraph()
    vertices, edges = {}, {}
    for c, f in enumerate(chambers):
        vid = {}
        for i in range(1, cap + 1):
            k, new = vclasses[i].find_or_add(f)
            vid[i] = ("s", i, k)
            if new:
                vertices[vid[i]] = (c, i)
                G.add_node(vid[i], weight=f"{i},1")
        for i in range(1, cap):
            k, new = eclasses[i].find_or_add(f)
            if new:
                edges[("e", i, k)] = (c, i)
                G.add_edge(vid[i], vid[i + 1], key=("e", i, k), length=edge_length(i))
    return TreeFragment(chambers, vertices, edges, G, cap)


def x2_acyclicity_check(frag: TreeFragment) -> bool:
    """A graph is a forest iff #edges = #vertices − #components."""
    G = frag.graph
    return G.number_of_edges() == G.number_of_nodes() - nx.number_connected_components(G)
