"""Command-line front end.

Words are given either as a path to a file with one generator per line, or
inline with ``;`` separating generators (``"perm [2,1]; elem 1 \\"x2^2\\""``);
``id`` is the identity.  Weights are comma-separated rationals.
"""

from __future__ import annotations

import json
import math
import os
import random
import sys
from dataclasses import dataclass, replace
from fractions import Fraction

import click

from . import BACKEND, __version__
from .admissible_geometry import (
    AdmissibleInequality,
    hyperplanes_meeting_ball,
    hyperplanes_through,
    local_radius,
    simplicial_projection,
)
from .errors import BudgetExhausted, DegreeCapExceeded, ParseError, PreconditionError
from .field_poly import Field, field_from_char, format_rational, parse_polynomial, parse_weight
from .tame_group import TameWord, bruhat_permutation, compose, diff_at_origin, invert, parse_word, split_translation

CONFIG_ENV = "TAMESPACE_CONFIG"


@dataclass(frozen=True)
class SessionConfig:
    field: str = "Q"  # "Q" or a prime
    n: int | None = None
    degree_cap: int = 64
    tolerance: float = 1e-9
    mesh: int = 4
    depth: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.n is not None and self.n < 2:
            raise PreconditionError("dimension must be at least 2")
        if self.tolerance <= 0:
            raise PreconditionError("tolerance must be positive")
        self.make_field()

    def make_field(self) -> Field:
        if str(self.field).upper() in ("Q", "QQ", "0"):
            return field_from_char(0)
        try:
            p = int(self.field)
        except ValueError:
            raise PreconditionError(f"field must be Q or a prime, got {self.field!r}") from None
        return field_from_char(p)

    @classmethod
    def load(cls, path: str | None) -> "SessionConfig":
        if not path:
            return cls()
        try:
            with open(path) as fh:
                data = json.load(fh)
        except FileNotFoundError:
            raise PreconditionError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad config: {exc.msg}", exc.lineno, exc.colno) from None
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise PreconditionError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


class Session:
    def __init__(self, cfg: SessionConfig):
        self.cfg = cfg
        self.field = cfg.make_field()
        random.seed(cfg.seed)

    def word(self, source: str, n: int | None = None) -> TameWord:
        n = n or self.cfg.n
        if source.strip() == "id":
            if n is None:
                raise PreconditionError("the identity needs -n or a weight to fix the dimension")
            return TameWord.identity(n, self.field, self.cfg.degree_cap)
        if os.path.isfile(source):
            with open(source) as fh:
                text = fh.read()
        else:
            text = source.replace(";", "\n")
        w = parse_word(text, n, self.field, self.cfg.degree_cap)
        return w

    def weight(self, text: str) -> tuple:
        return parse_weight(text)


def _fmt_weight(w) -> str:
    return ",".join(format_rational(Fraction(x)) for x in w)


def _fmt_float(x: float) -> str:
    return "inf" if x == math.inf else f"{x:.12f}"


def _word_lines(w: TameWord) -> str:
    return "(" + ", ".join(str(c) for c in w.components) + ")"


def _session(ctx) -> Session:
    return ctx.obj


@click.group()
@click.option("--config", "config_path", envvar=CONFIG_ENV, default=None,
              help=f"JSON config file (default from ${CONFIG_ENV}).")
@click.option("--field", "field_", default=None, help="Q or a prime p.")
@click.option("-n", "--dim", type=int, default=None, help="Dimension when it cannot be inferred.")
@click.option("--degree-cap", type=int, default=None)
@click.option("--tol", type=float, default=None, help="Metric tolerance.")
@click.option("--seed", type=int, default=None, help="Seed for randomized checks.")
@click.version_option(__version__)
@click.pass_context
def cli(ctx, config_path, field_, dim, degree_cap, tol, seed):
    """Tame automorphisms acting on monomial valuations."""
    cfg = SessionConfig.load(config_path)
    over = {k: v for k, v in dict(field=field_, n=dim, degree_cap=degree_cap, tolerance=tol, seed=seed).items()
            if v is not None}
    cfg = replace(cfg, **over)
    ctx.obj = Session(cfg)


# tame

@cli.group()
def tame():
    """Words in the tame group."""


@tame.command("expand")
@click.argument("word")
@click.pass_context
def tame_expand(ctx, word):
    click.echo(_word_lines(_session(ctx).word(word)))


@tame.command("compose")
@click.argument("f")
@click.argument("g")
@click.pass_context
def tame_compose(ctx, f, g):
    s = _session(ctx)
    fw = s.word(f)
    click.echo(_word_lines(compose(fw, s.word(g, fw.n))))


@tame.command("invert")
@click.argument("word")
@click.pass_context
def tame_invert(ctx, word):
    w = invert(_session(ctx).word(word), verify=True)
    click.echo(w.to_text())
    click.echo(_word_lines(w))


@tame.command("diff")
@click.argument("word")
@click.pass_context
def tame_diff(ctx, word):
    """Differential at the origin of the origin-fixing part."""
    f0, _ = split_translation(_session(ctx).word(word))
    for row in diff_at_origin(f0):
        click.echo(" ".join(format_rational(x) for x in row))


@tame.command("bruhat")
@click.argument("word")
@click.pass_context
def tame_bruhat(ctx, word):
    s = _session(ctx)
    f0, _ = split_translation(s.word(word))
    sigma = bruhat_permutation(diff_at_origin(f0), s.field)
    click.echo("perm [" + ",".join(str(i + 1) for i in sigma) + "]")


# val

@cli.group()
def val():
    """Valuation points ν_{f,[α]}."""


def _point(s: Session, frame: str, weight: str):
    from .valuation_space import ValuationPoint

    w = s.weight(weight)
    return ValuationPoint(s.word(frame, len(w)), w)


@val.command("eval")
@click.option("--frame", default="id")
@click.option("-w", "--weight", required=True)
@click.argument("poly")
@click.pass_context
def val_eval(ctx, frame, weight, poly):
    from .valuation_space import point_eval

    s = _session(ctx)
    nu = _point(s, frame, weight)
    v = point_eval(nu, parse_polynomial(poly, nu.frame.n, s.field))
    click.echo("inf" if v == math.inf else format_rational(v))


@val.command("equal")
@click.option("--frame1", default="id")
@click.option("--w1", required=True)
@click.option("--frame2", default="id")
@click.option("--w2", required=True)
@click.pass_context
def val_equal(ctx, frame1, w1, frame2, w2):
    from .valuation_space import points_equal

    s = _session(ctx)
    click.echo("true" if points_equal(_point(s, frame1, w1), _point(s, frame2, w2)) else "false")


@val.command("tripode")
@click.pass_context
def val_tripode(ctx):
    """The three equalities among the apartments of id, (x2, x1+x2), (x1+x2, x1)."""
    from .valuation_space import ValuationPoint, points_equal

    s = _session(ctx)
    ident = TameWord.identity(2, s.field)
    f = s.word('elem 2 "x1"; perm [2,1]', 2)
    g = s.word('perm [2,1]; elem 2 "x1"', 2)
    pairs = [("id", ident, "f", f), ("f", f, "g", g), ("g", g, "id", ident)]
    ok = True
    for a, fa, b, fb in pairs:
        eq = points_equal(ValuationPoint(fa, (1, 2)), ValuationPoint(fb, (2, 1)))
        ok &= eq
        click.echo(f"nu[{a},(1,2)] = nu[{b},(2,1)]: {'true' if eq else 'false'}")
    ctx.exit(0 if ok else 1)


@val.command("fixes")
@click.argument("word")
@click.option("-w", "--weight", required=True)
@click.pass_context
def val_fixes(ctx, word, weight):
    from .valuation_space import fixes

    s = _session(ctx)
    w = s.weight(weight)
    click.echo("true" if fixes(s.word(word, len(w)), w) else "false")


@val.command("act")
@click.argument("word")
@click.option("--frame", default="id")
@click.option("-w", "--weight", required=True)
@click.pass_context
def val_act(ctx, word, frame, weight):
    """g·ν_{f,[α]} = ν_{g∘f,[α]}."""
    from .valuation_space import ValuationPoint, rho

    s = _session(ctx)
    nu = _point(s, frame, weight)
    moved = compose(s.word(word, nu.frame.n), nu.frame)
    click.echo(f"frame {_word_lines(moved)}")
    click.echo(f"weight {_fmt_weight(nu.weight)}")
    click.echo(f"rho {_fmt_weight(rho(ValuationPoint(moved, nu.weight)).values)}")


@val.command("rho")
@click.option("--frame", default="id")
@click.option("-w", "--weight", required=True)
@click.pass_context
def val_rho(ctx, frame, weight):
    from .valuation_space import rho, rho_plus

    nu = _point(_session(ctx), frame, weight)
    click.echo(f"rho+ {_fmt_weight(rho_plus(nu).values)}")
    click.echo(f"rho  {_fmt_weight(rho(nu).values)}")


@val.command("region")
@click.argument("word")
@click.pass_context
def val_region(ctx, word):
    from .valuation_space import fixed_inequalities

    for c in fixed_inequalities(_session(ctx).word(word)):
        click.echo(str(c))


# adm

@cli.group()
def adm():
    """Admissible equations and their arrangement."""


@adm.command("mult")
@click.option("-w", "--weight", required=True)
@click.pass_context
def adm_mult(ctx, weight):
    click.echo(str(len(hyperplanes_through(_session(ctx).weight(weight)))))


@adm.command("list")
@click.option("-w", "--weight", required=True)
@click.pass_context
def adm_list(ctx, weight):
    for h in hyperplanes_through(_session(ctx).weight(weight)):
        click.echo(h.equation_text())


@adm.command("ball")
@click.option("-w", "--weight", required=True)
@click.option("-r", "--radius", type=float, required=True)
@click.pass_context
def adm_ball(ctx, weight, radius):
    """Hyperplanes that may meet the log ball (a superset, never missing one)."""
    for h in hyperplanes_meeting_ball(_session(ctx).weight(weight), radius):
        click.echo(h.equation_text())


@adm.command("radius")
@click.option("-w", "--weight", required=True)
@click.pass_context
def adm_radius(ctx, weight):
    click.echo(_fmt_float(local_radius(_session(ctx).weight(weight))))


@adm.command("project")
@click.option("-w", "--weight", required=True)
@click.pass_context
def adm_project(ctx, weight):
    p = simplicial_projection(_session(ctx).weight(weight))
    click.echo(f"alpha' {_fmt_weight(p.alpha)}")
    click.echo("drops " + ",".join(map(str, p.drop_indices)))
    click.echo("types " + ",".join(map(str, p.vertex_types)))


# stab

@cli.group()
def stab():
    """Point stabilizers at sorted weights."""


@stab.command("decompose")
@click.argument("word")
@click.option("-w", "--weight", required=True)
@click.pass_context
def stab_decompose(ctx, word, weight):
    from .stabilizer import decompose_stabilizer

    s = _session(ctx)
    w = s.weight(weight)
    d = decompose_stabilizer(s.word(word, len(w)), w)
    click.echo("m " + _word_lines(d.m))
    click.echo("l " + json.dumps([[s.field.format(x) for x in row] for row in d.l]))


@stab.command("member")
@click.argument("word")
@click.option("-w", "--weight", required=True)
@click.option("--group", "group", type=click.Choice(["M", "L", "N"]), default="M")
@click.pass_context
def stab_member(ctx, word, weight, group):
    from .stabilizer import in_L_alpha, in_M_alpha, in_N_alpha

    s = _session(ctx)
    w = s.weight(weight)
    test = {"M": in_M_alpha, "L": in_L_alpha, "N": in_N_alpha}[group]
    click.echo("true" if test(s.word(word, len(w)), w) else "false")


@stab.command("equiv")
@click.argument("f")
@click.argument("g")
@click.option("-w", "--weight", required=True)
@click.pass_context
def stab_equiv(ctx, f, g, weight):
    from .stabilizer import locally_equivalent

    s = _session(ctx)
    w = s.weight(weight)
    click.echo("true" if locally_equivalent(s.word(f, len(w)), s.word(g, len(w)), w) else "false")


@stab.command("sector")
@click.argument("f")
@click.argument("g")
@click.option("-w", "--weight", required=True)
@click.pass_context
def stab_sector(ctx, f, g, weight):
    from .stabilizer import sector

    s = _session(ctx)
    w = s.weight(weight)
    d = sector(s.word(f, len(w)), s.word(g, len(w)), w)
    click.echo(str(d))
    for b in d.boundary:
        click.echo("toward [" + ",".join(format_rational(x) for x in b) + "]")
    click.echo("normal form " + _word_lines(d.normal_form))


# dist

@cli.group()
def dist():
    """Distance bounds."""


def _catalog(s: Session, path: str | None, n: int) -> list:
    if not path:
        return []
    return [s.word(block, n) for block in _blocks(path)]


def _blocks(path: str) -> list[str]:
    with open(path) as fh:
        text = fh.read()
    out, cur = [], []
    for line in text.splitlines():
        if line.strip() == "---":
            if cur:
                out.append("\n".join(cur))
            cur = []
        else:
            cur.append(line)
    if any(x.strip() and not x.strip().startswith("#") for x in cur):
        out.append("\n".join(cur))
    return out


@dist.command("lower")
@click.option("--frame1", default="id")
@click.option("--w1", required=True)
@click.option("--frame2", default="id")
@click.option("--w2", required=True)
@click.pass_context
def dist_lower(ctx, frame1, w1, frame2, w2):
    from .metric import distance_lower

    s = _session(ctx)
    click.echo(_fmt_float(distance_lower(_point(s, frame1, w1), _point(s, frame2, w2))))


@dist.command("upper")
@click.option("--frame1", default="id")
@click.option("--w1", required=True)
@click.option("--frame2", default="id")
@click.option("--w2", required=True)
@click.option("--catalog", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Words separated by '---' lines.")
@click.option("--depth", type=int, default=None)
@click.option("--mesh", type=int, default=None)
@click.pass_context
def dist_upper(ctx, frame1, w1, frame2, w2, catalog, depth, mesh):
    from .metric import chain_distance_upper, distance_lower

    s = _session(ctx)
    a, b = _point(s, frame1, w1), _point(s, frame2, w2)
    d, witness = chain_distance_upper(a, b, _catalog(s, catalog, a.frame.n),
                                      depth if depth is not None else s.cfg.depth,
                                      mesh if mesh is not None else s.cfg.mesh)
    lo = distance_lower(a, b)
    click.echo(f"lower {_fmt_float(lo)}")
    click.echo(f"upper {_fmt_float(d)}")
    if witness is None:
        click.echo("no chain within the catalog connects the two frames")
    else:
        for (f, w), tag in zip(witness.hops, ["start"] + witness.certificates):
            click.echo(f"  {tag}: {_word_lines(f)} @ {_fmt_weight(w)}")


def _tree(ctx, depth, cap):
    from .metric import edge_length, x2_acyclicity_check, x2_tree_ball
    from .valuation_space import ValuationPoint

    s = _session(ctx)
    F = s.field if s.field.char else field_from_char(2)
    frag = x2_tree_ball(ValuationPoint.standard((1, 1), F), depth, cap, F)
    G = frag.graph
    click.echo(f"chambers {len(frag.chambers)}")
    click.echo(f"vertices {G.number_of_nodes()}")
    click.echo(f"edges {G.number_of_edges()}")
    click.echo(f"components {frag.components}")
    click.echo(f"acyclic {'true' if x2_acyclicity_check(frag) else 'false'}")
    for i in range(1, cap):
        click.echo(f"length e{i} = log({i + 1}/{i})/sqrt2 = {edge_length(i):.15f}")


@dist.command("tree")
@click.option("--depth", type=int, default=3)
@click.option("--cap", type=int, default=3)
@click.pass_context
def dist_tree(ctx, depth, cap):
    """Ball in the dimension-two tree over a finite field (default F2)."""
    _tree(ctx, depth, cap)


@cli.group()
def tree():
    """The dimension-two tree."""


@tree.command("ball")
@click.option("--depth", type=int, default=3)
@click.option("--cap", type=int, default=3)
@click.pass_context
def tree_ball(ctx, depth, cap):
    _tree(ctx, depth, cap)


# angle

def _direction(text: str, alpha):
    from .metric import Ray

    text = text.strip()
    if text.startswith("["):
        return Ray.toward(parse_weight(text.strip("[]")))
    eq, _, side = text.partition(":")
    return Ray.along(parse_equation(eq, len(alpha)), alpha, -1 if side.strip() == "-" else 1)


def parse_equation(text: str, n: int) -> AdmissibleInequality:
    """'a1 = 2*a2 + 1*a3' (coefficients optional)."""
    lhs, sep, rhs = text.partition("=")
    if not sep:
        raise ParseError("expected an equation a_i = ...", 1, 1)
    lhs = lhs.strip()
    if not lhs.startswith("a") or not lhs[1:].isdigit():
        raise ParseError(f"bad left side {lhs!r}", 1, 1)
    i = int(lhs[1:]) - 1
    m = [0] * n
    col = len(lhs) + 2
    for part in rhs.split("+"):
        part = part.strip()
        coef, star, var = part.partition("*")
        if not star:
            coef, var = "1", coef
        if not var.startswith("a") or not var[1:].isdigit() or not coef.isdigit():
            raise ParseError(f"bad term {part!r}", 1, col)
        j = int(var[1:]) - 1
        if not 0 <= j < n:
            raise ParseError(f"index out of range in {part!r}", 1, col)
        m[j] += int(coef)
        col += len(part) + 1
    return AdmissibleInequality(i, tuple(m))


@cli.command("angle")
@click.option("-w", "--weight", required=True)
@click.option("--dir", "dirs", multiple=True, required=True,
              help="'[0,0,1]' for an ideal point or 'a1 = 3*a3:+' for a hyperplane side.")
@click.option("--metric", type=click.Choice(["log", "simplex"]), default="log")
@click.pass_context
def angle_cmd(ctx, weight, dirs, metric):
    """Angles between consecutive directions at [α] (n = 3)."""
    from .metric import angle

    alpha = _session(ctx).weight(weight)
    if len(dirs) < 2:
        raise PreconditionError("need at least two directions")
    rays = [_direction(d, alpha) for d in dirs]
    for a, b in zip(rays, rays[1:]):
        t = angle(alpha, a, b, metric)
        click.echo(f"{a.label} -> {b.label}: {t:.15f} ({t / math.pi:.12f} pi)")


# link

@cli.group()
def link():
    """Metric links at a point (n = 3)."""


def _link_from_opts(ctx, weight, gens, radius, stabilizer):
    from .link_curvature import build_link, finite_stabilizer_link
    from .valuation_space import ValuationPoint

    s = _session(ctx)
    alpha = s.weight(weight)
    if stabilizer:
        return finite_stabilizer_link(alpha, s.field)
    words = _catalog(s, gens, len(alpha)) if gens else []
    return build_link(ValuationPoint.standard(alpha, s.field), words, radius)


def _link_options(f):
    f = click.option("-w", "--weight", required=True)(f)
    f = click.option("--gens", type=click.Path(exists=True, dir_okay=False), default=None,
                     help="Generator words separated by '---' lines.")(f)
    f = click.option("--radius", type=int, default=None, help="Word-length bound for the group ball.")(f)
    f = click.option("--stabilizer", is_flag=True, help="Use generators of the full M⋊L stabilizer.")(f)
    return f


@link.command("build")
@_link_options
@click.option("--dot", type=click.Path(dir_okay=False, writable=True), default=None)
@click.pass_context
def link_build(ctx, weight, gens, radius, stabilizer, dot):
    L = _link_from_opts(ctx, weight, gens, radius, stabilizer)
    click.echo(f"group {L.group_order} ({'closed' if L.closed else 'ball'})")
    click.echo(f"vertices {L.num_vertices}")
    click.echo(f"edges {L.num_edges}")
    for r, c in sorted(L.vertex_counts().items()):
        click.echo(f"  ray {L.rays[r].label}: {c}")
    if dot:
        with open(dot, "w") as fh:
            fh.write(L.to_dot() + "\n")


@link.command("girth")
@_link_options
@click.pass_context
def link_girth(ctx, weight, gens, radius, stabilizer):
    from .link_curvature import combinatorial_girth, metric_girth

    L = _link_from_opts(ctx, weight, gens, radius, stabilizer)
    click.echo(f"metric {_fmt_float(metric_girth(L))}")
    click.echo(f"combinatorial {combinatorial_girth(L):g}")


@link.command("cat1")
@_link_options
@click.pass_context
def link_cat1(ctx, weight, gens, radius, stabilizer):
    from .link_curvature import check_cat1

    L = _link_from_opts(ctx, weight, gens, radius, stabilizer)
    click.echo(str(check_cat1(L, _session(ctx).cfg.tolerance)))


@link.command("fano")
@click.option("--dot", type=click.Path(dir_okay=False, writable=True), default=None)
def link_fano(dot):
    from .link_curvature import check_cat1, combinatorial_diameter, fano_link

    L = fano_link()
    click.echo(f"vertices {L.num_vertices}")
    click.echo(f"edges {L.num_edges}")
    rep = check_cat1(L)
    click.echo(f"combinatorial girth {rep.combinatorial_girth:g}")
    click.echo(f"metric girth {_fmt_float(rep.girth)}")
    click.echo(f"diameter {combinatorial_diameter(L)}")
    if dot:
        with open(dot, "w") as fh:
            fh.write(L.to_dot() + "\n")


@link.command("octangle")
@click.option("-p", type=int, required=True)
@click.option("-q", type=int, required=True)
def link_octangle(p, q):
    from .link_curvature import example_angles_cycle

    c = example_angles_cycle(p, q)
    click.echo("log arcs " + " ".join(f"{x:.12f}" for x in c.log_lengths))
    click.echo(f"log total {c.log_total:.12f} ({c.log_total / math.pi:.12f} pi)")
    click.echo("simplex arcs " + " ".join(f"{x:.12f}" for x in c.simplex_lengths))
    click.echo(f"simplex total {c.simplex_total:.12f} ({c.simplex_total / math.pi:.12f} pi)")
    click.echo(f"simplex below 2pi {'true' if c.simplex_total < 2 * math.pi else 'false'}")
    for k, v in c.gluings.items():
        click.echo(f"  {k}: {'true' if v else 'false'}")


# linearize

@cli.command("linearize")
@click.option("--group", "group_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Group elements separated by '---' lines.")
@click.option("--generators", is_flag=True, help="Treat the blocks as generators and close them up.")
@click.option("--conjugate-by", "conj", default=None)
@click.option("--bound", type=int, default=10000, help="Closure budget with --generators.")
@click.pass_context
def linearize_cmd(ctx, group_path, generators, conj, bound):
    from .linearize import FiniteGroupInput, linearize

    s = _session(ctx)
    words = [s.word(b) for b in _blocks(group_path)]
    if not words:
        raise PreconditionError("empty group file")
    G = FiniteGroupInput.from_generators(words, bound) if generators else FiniteGroupInput(words)
    c = s.word(conj, G.n) if conj else None
    lin, k = linearize(G, c)
    click.echo(f"order {G.order}")
    click.echo(f"weight {_fmt_weight(lin.weight)}")
    click.echo("conjugator " + _word_lines(k))
    for g in G.elements:
        img = compose(compose(k, g), invert(k))
        click.echo(f"  {_word_lines(g)} -> {_word_lines(img)}")


# witness

@cli.command("witness")
@click.argument("word")
@click.pass_context
def witness_cmd(ctx, word):
    """A valuation moved by a non-identity automorphism, with its certificate."""
    from .valuation_space import moved_valuation_witness

    w = moved_valuation_witness(_session(ctx).word(word))
    a, b, c, d = w.values
    click.echo(f"frame {_word_lines(w.point.frame)}")
    click.echo(f"weight {_fmt_weight(w.point.weight)}")
    click.echo(f"P {w.poly}")
    click.echo(f"M {w.normalizer}")
    click.echo(f"nu(P) {format_rational(a)} nu(M) {format_rational(b)}")
    click.echo(f"f.nu(P) {format_rational(c)} f.nu(M) {format_rational(d)}")


# names used in the interface description
tame.add_command(tame_expand, "components")
val.add_command(val_fixes, "fix")
val.add_command(witness_cmd, "witness")
adm.add_command(adm_list, "through")


@cli.command("info")
def info():
    click.echo(f"tamespace {__version__} ({BACKEND} kernels)")


EXIT_PRECONDITION = 2
EXIT_BUDGET = 3


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="tamespace", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_PRECONDITION
    except click.Abort:
        return 1
    except ParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        return EXIT_PRECONDITION
    except PreconditionError as exc:
        click.echo(f"precondition violated: {exc}", err=True)
        return EXIT_PRECONDITION
    except (BudgetExhausted, DegreeCapExceeded) as exc:
        click.echo(f"budget exhausted: {exc}", err=True)
        return EXIT_BUDGET
    return 0


def run(argv) -> int:
    return main(list(argv))


if __name__ == "__main__":
    sys.exit(main())
