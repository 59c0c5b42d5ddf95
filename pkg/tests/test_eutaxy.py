"""Eutaxy certificates and the distinguished point of a face."""

from gmpy2 import mpq as Q

from quotlat.catalog import entry, zn_gram
from quotlat.codes import Code
from quotlat.eutaxy import eutaxy_class, reconstruct_inverse, \
    weakly_eutactic_point
from quotlat.exact import mat_eq, mat_inverse, mat_scale, mat_add
from quotlat.faces import class_face_space, face_invariants, traverse_face
from quotlat.feasibility import feasibility
from quotlat.lattices import GramMatrix, half_set_permutations


def test_identity_strong():
    res = eutaxy_class(zn_gram(5))
    assert res.klass == "strong"
    assert all(c == 1 for c in res.coefficients.values())


def test_catalog_classes():
    assert eutaxy_class(entry("L81").gram).klass == "strong"
    assert eutaxy_class(entry("L99").gram).klass == "eutactic"
    assert eutaxy_class(entry("L87").gram).klass == "eutactic"
    assert eutaxy_class(entry("E8").gram).klass == "strong"
    assert eutaxy_class(entry("D4").gram).klass == "strong"


def test_certificate_reconstruction():
    for name in ["D4", "E6", "L87", "L99"]:
        g = entry(name).gram
        res = eutaxy_class(g)
        assert res.klass in ("eutactic", "strong")
        acc = reconstruct_inverse(g, res.coefficients)
        assert mat_eq(acc, mat_inverse(g.mat))
        if res.klass == "eutactic":
            assert all(c > 0 for c in res.coefficients.values())


def test_orbit_averaged_agrees():
    g = entry("L99").gram
    plain = eutaxy_class(g)
    _, perms = half_set_permutations(g)
    averaged = eutaxy_class(g, half_perms=perms)
    assert plain.klass == averaged.klass == "eutactic"
    acc = reconstruct_inverse(g, averaged.coefficients)
    assert mat_eq(acc, mat_inverse(g.mat))


def test_class_ordering_on_catalog():
    order = ["none", "weak", "eutactic", "strong"]
    for name in ["A2", "A4", "D4", "D5", "E7", "E8", "L81", "L87", "L99"]:
        res = eutaxy_class(entry(name).gram)
        assert res.klass in order
        if res.klass in ("eutactic", "strong"):
            assert all(c > 0 for c in res.coefficients.values())


def test_weakly_eutactic_point_z2_class():
    # the square lattice sits in the middle of its segment-shaped face
    g = zn_gram(2)
    space = class_face_space(g)
    fd = traverse_face(space, _vertex_of(space, g), budget=16)
    w = weakly_eutactic_point(fd)
    assert w is not None
    assert mat_eq(w.mat, g.mat)


def _vertex_of(space, gram):
    # walk to a vertex: the hexagonal forms at the segment ends
    from quotlat.faces import extreme_rays, neighbor_vertex
    y = space.coords_of(gram.mat)
    rays = extreme_rays_or_empty(space, y)
    while rays:
        _, y = neighbor_vertex(space, y, rays[0])
        rays = extreme_rays_or_empty(space, y)
    return GramMatrix(space.gram_rows(y), check=False)


def extreme_rays_or_empty(space, y):
    from quotlat.faces import extreme_rays
    try:
        return extreme_rays(space, y)
    except Exception:
        return []


def test_weakly_eutactic_point_l87_centroid():
    from quotlat.catalog import L87_RAY_R
    g = entry("L87").gram
    scaled = GramMatrix(mat_scale(g.mat, Q(1, 4)), check=False)
    space = class_face_space(scaled)
    seed = GramMatrix(mat_scale(mat_add(g.mat, L87_RAY_R), Q(1, 4)),
                      check=False)
    fd = traverse_face(space, seed, budget=16)
    w = weakly_eutactic_point(fd)
    assert w is not None
    assert mat_eq(w.mat, scaled.mat)


def test_weakly_eutactic_point_found_off_center():
    # the 9-dimensional order-2 class: the distinguished point exists but
    # is not the barycenter of the segment
    out = feasibility(Code(9, (2,), ((1,) * 9,)))
    fd = face_invariants(out)
    assert fd.polytope_dim == 1
    assert eutaxy_class(fd.barycenter).klass == "none"
    w = weakly_eutactic_point(fd)
    assert w is not None
    assert eutaxy_class(w).klass != "none"
    assert sorted(w.half_set()) == sorted(fd.barycenter.half_set())


def test_weakly_eutactic_point_none_is_permitted():
    # higher-dimensional face whose barycenter is not weakly eutactic:
    # the search reports absence
    out = feasibility(Code(9, (4,), ((1, 1, 1, 1, 1, 1, 1, 2, 2),)))
    fd = face_invariants(out)
    if fd.polytope_dim > 1 and eutaxy_class(fd.barycenter).klass == "none":
        assert weakly_eutactic_point(fd) is None
