import math

import networkx as nx
import pytest

from tamespace.errors import PreconditionError
from tamespace.field_poly import GF, variables
from tamespace.link_curvature import (
    affine_generators,
    build_link,
    check_cat1,
    combinatorial_diameter,
    combinatorial_girth,
    example_angles_cycle,
    fano_link,
    finite_stabilizer_link,
    is_in_gl,
    metric_girth,
)
from tamespace.tame_group import TameWord
from tamespace.valuation_space import ValuationPoint

TWO_PI = 2 * math.pi


@pytest.fixture(scope="module")
def fano():
    return fano_link()


def test_hexagon_from_empty_generators():
    link = build_link(ValuationPoint.standard((1, 1, 1), GF(2)), [])
    assert link.num_vertices == 6 and link.num_edges == 6
    assert abs(metric_girth(link) - TWO_PI) < 1e-9
    assert combinatorial_girth(link) == 6


def test_interior_weight_hexagon():
    link = build_link(ValuationPoint.standard((3, 2, 1)), [])
    assert link.num_edges == link.num_vertices
    assert abs(metric_girth(link) - TWO_PI) < 1e-9


def test_fano_structure(fano):
    assert fano.group_order == 1344 and fano.closed
    assert fano.num_vertices == 14 and fano.num_edges == 21
    assert sorted(fano.vertex_counts().values()) == [7, 7]
    G = nx.Graph(fano.graph)
    assert nx.is_bipartite(G)
    assert all(d == 3 for _, d in G.degree())
    assert combinatorial_girth(fano) == 6
    assert combinatorial_diameter(fano) == 3
    assert abs(metric_girth(fano) - TWO_PI) < 1e-9


def test_fano_edges_are_pi_over_3(fano):
    for _, _, d in fano.graph.edges(data=True):
        assert abs(d["length"] - math.pi / 3) < 1e-12


def test_fano_cat1(fano):
    rep = check_cat1(fano)
    assert rep.holds and rep.closed
    assert "girth >= 2pi" in str(rep)


def test_link_at_221_over_f2():
    link = finite_stabilizer_link((2, 2, 1))
    assert link.closed
    assert combinatorial_girth(link) >= 6
    assert check_cat1(link).holds


def test_dot_export(fano):
    dot = fano.to_dot()
    assert dot.startswith("graph link {") and dot.rstrip().endswith("}")
    assert dot.count(" -- ") == 21


def test_generator_must_fix_point():
    x1, x2, x3 = variables(3, GF(2))
    with pytest.raises(PreconditionError):
        build_link(ValuationPoint.standard((1, 1, 1), GF(2)), [TameWord.elementary(0, x2 ** 2)])


def test_affine_generators_are_affine():
    gens = affine_generators(3, GF(3))
    assert all(g.is_affine() for g in gens)
    assert any(is_in_gl(g) for g in gens)
    assert not all(is_in_gl(g) for g in gens)


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("q", [1, 2, 3])
def test_octangle_log_total(p, q):
    cyc = example_angles_cycle(p, q)
    assert abs(cyc.log_total - 8 * math.pi / 3) < 1e-9
    assert all(cyc.gluings.values())
    assert cyc.commute


def test_octangle_simplex_arcs_shrink():
    arcs = [example_angles_cycle(1, q).simplex_lengths[0] for q in (1, 2, 3, 4)]
    assert all(a > math.pi / 3 for a in arcs)
    assert all(a > b for a, b in zip(arcs, arcs[1:]))
    assert example_angles_cycle(2, 3).simplex_total < TWO_PI
