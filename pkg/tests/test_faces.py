"""Face traversal: cones, neighbor steps, invariants of barycenters."""

import pytest
from gmpy2 import mpq as Q

from quotlat.catalog import L87_RAY_R, L87_RAY_RP, L87_RAY_RPP, entry
from quotlat.codes import Code
from quotlat.exact import evaluate, mat_add, mat_eq, mat_mul, mat_scale, \
    transpose
from quotlat.faces import (
    class_face_space, extreme_rays, extreme_rays_of_cone, face_invariants,
    neighbor_vertex, traverse_face,
)
from quotlat.feasibility import feasibility
from quotlat.lattices import GramMatrix, kissing_half


def test_cone_octant():
    rays, lin = extreme_rays_of_cone([[1, 0], [0, 1]], 2)
    assert not lin
    assert sorted(tuple(r) for r in rays) == [(0, 1), (1, 0)]


def test_cone_halfplane_has_lineality():
    rays, lin = extreme_rays_of_cone([[1, 0]], 2)
    assert len(lin) == 1


def test_cone_three_constraints():
    rows = [[1, 0], [0, 1], [1, 1]]
    rays, lin = extreme_rays_of_cone(rows, 2)
    assert not lin and len(rays) == 2


def test_cone_simplicial_3d():
    rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]
    rays, lin = extreme_rays_of_cone(rows, 3)
    assert not lin and len(rays) == 3


def test_point_face_has_no_rays():
    out = feasibility(Code(4, (2,), ((1, 1, 1, 1),)))
    fd = face_invariants(out)
    assert len(fd.vertices) == 1
    assert fd.polytope_dim == 0
    assert (fd.s, fd.r) == (12, 10)


def test_traversal_invariants_d5_row():
    out = feasibility(Code(9, (5,), ((1, 1, 1, 1, 1, 1, 1, 1, 2),)))
    fd = face_invariants(out)
    assert (fd.s, fd.r, fd.s_prime) == (18, 17, 9)
    # every vertex satisfies the slice equalities with minimum exactly 1
    for v in fd.vertices:
        assert v.minimum() == 1
        for e in out.geometry.ebar:
            assert evaluate(v.mat, e) == 1
    # barycenter is fixed by all face automorphisms (it is the average)
    bary = fd.barycenter
    assert kissing_half(bary) == 18


def test_l87_octahedron():
    """The face of the order-12 class: six vertices in opposite pairs."""
    g = entry("L87").gram
    scaled = GramMatrix(mat_scale(g.mat, Q(1, 4)), check=False)
    space = class_face_space(scaled)
    seed = GramMatrix(mat_scale(mat_add(g.mat, L87_RAY_R), Q(1, 4)),
                      check=False)
    assert seed.minimum() == 1
    fd = traverse_face(space, seed, budget=64)
    assert len(fd.vertices) == 6
    assert fd.polytope_dim == 3
    assert (fd.s, fd.r) == (87, 42)
    assert fd.face_dim == 3
    svals = sorted(v.s() for v in fd.vertices)
    assert svals == [99, 99, 136, 136, 136, 136]
    # the barycenter of the octahedron is the original matrix
    assert mat_eq(fd.barycenter.mat, scaled.mat)
    # vertices come in opposite pairs around the barycenter
    keys = {v.key() for v in fd.vertices}
    for v in fd.vertices:
        opposite = [[2 * b - a for a, b in zip(row_v, row_c)]
                    for row_v, row_c in zip(v.mat, scaled.mat)]
        assert GramMatrix(opposite, check=False).key() in keys


def test_l87_named_perturbations():
    g = entry("L87").gram
    for ray, s_val in [(L87_RAY_R, 136), (L87_RAY_RP, 136), (L87_RAY_RPP, 99)]:
        plus = GramMatrix(mat_add(g.mat, ray), check=False)
        minus = GramMatrix(mat_add(g.mat, mat_scale(ray, -1)), check=False)
        assert plus.minimum() == 4 and minus.minimum() == 4
        assert plus.s() == s_val and minus.s() == s_val


def test_neighbor_ray_scale_invariance():
    out = feasibility(Code(9, (5,), ((1, 1, 1, 1, 1, 1, 1, 1, 2),)))
    fd = face_invariants(out)
    space = fd.space
    y = fd.vertex_ys[0]
    rays = extreme_rays(space, y)
    assert rays
    ray = rays[0]
    rho1, y1 = neighbor_vertex(space, y, ray)
    rho2, y2 = neighbor_vertex(space, y, [3 * c for c in ray])
    assert y1 == y2
    assert rho1 == 3 * rho2


def test_face_dim_consistency_unrestricted():
    # full-space traversal: polytope dimension equals face dimension
    out = feasibility(Code(6, (2, 2), ((1, 1, 1, 1, 0, 0),
                                       (0, 0, 1, 1, 1, 1))),
                      symmetrize=False)
    fd = face_invariants(out, budget=256)
    n = 6
    assert fd.polytope_dim == n * (n + 1) // 2 - fd.r
    assert fd.complete
