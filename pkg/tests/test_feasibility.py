"""Feasibility engine: geometry, symmetry reduction, soundness of answers."""

import pytest
from gmpy2 import mpq as Q

from quotlat.codes import Code
from quotlat.exact import det, evaluate, mat_eq, snf_divisors
from quotlat.feasibility import (
    CodeGeometry, build_geometry, code_permutation_group, face_automorphisms,
    face_space, feasibility, initial_vector_set, invariant_subspace,
    separation_cut,
)
from quotlat.lattices import minimum, shortest_vectors
from quotlat.simplex import INFEASIBLE, ExactLP


def test_geometry_index_two():
    geom = build_geometry(Code(4, (2,), ((1, 1, 1, 1),)))
    assert geom.index == 2
    assert det(geom.basis) == Q(1, 2)
    assert len(initial_vector_set(geom)) == 16


def test_geometry_index_three():
    geom = build_geometry(Code(9, (3,), ((1,) * 9,)))
    assert geom.index == 3
    assert det(geom.basis) == Q(1, 3)
    assert len(initial_vector_set(geom)) == 81


def test_geometry_rejects_dependent_generators():
    with pytest.raises(ValueError):
        build_geometry(Code(4, (2, 2), ((1, 1, 1, 1), (1, 1, 1, 1))))


def test_geometry_quotient_type():
    geom = build_geometry(Code(9, (6, 2), ((0, 1, 1, 1, 1, 2, 2, 2, 3),
                                           (1, 0, 0, 0, 1, 0, 0, 1, 1))))
    divs = [x for x in snf_divisors(geom.ebar) if x > 1]
    assert sorted(divs, reverse=True) == [6, 2]


def test_code_permutation_group():
    # fully symmetric code: all column transpositions preserve it
    gens = code_permutation_group(Code(5, (2,), ((1, 1, 1, 1, 1),)))
    assert len(gens) >= 4
    # block code: only block permutations survive
    gens = code_permutation_group(Code(9, (4,), ((1, 1, 1, 1, 2, 2, 2, 0, 0),)))
    moved = {j for g in gens for j in range(9) if g[j] != j}
    assert moved <= {0, 1, 2, 3} | {4, 5, 6} | {7, 8}
    # generic asymmetric code: trivial group
    assert code_permutation_group(Code(3, (7,), ((1, 2, 3),))) == []
    # equal residues give identical columns, which do commute
    gens = code_permutation_group(Code(5, (7,), ((1, 1, 2, 3, 3),)))
    assert (1, 0, 2, 3, 4) in gens and (0, 1, 2, 4, 3) in gens


def test_invariant_subspace_dimensions():
    # no symmetry: the whole space of symmetric matrices
    assert len(invariant_subspace([], 4)) == 10
    # full signed permutations fix only multiples of the identity
    n = 3
    mats = []
    perm = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
    cyc = [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    flip = [[-1, 0, 0], [0, 1, 0], [0, 0, 1]]
    mats = [perm, cyc, flip]
    assert len(invariant_subspace(mats, n)) == 1


def test_symmetrized_space_dimension_for_all_ones():
    geom = build_geometry(Code(9, (3,), ((1,) * 9,)))
    space = face_space(geom.ebar, geom.n, face_automorphisms(geom))
    assert space.dim == 1


def test_face_automorphisms_are_integral_and_preserve_slice():
    geom = build_geometry(Code(9, (4,), ((1, 1, 1, 1, 2, 2, 2, 2, 2),)))
    mats = face_automorphisms(geom)
    ebar = {tuple(e) for e in geom.ebar}
    for M in mats:
        for e in geom.ebar:
            img = tuple(sum(e[i] * M[i][j] for i in range(9)) for j in range(9))
            assert img in ebar


def test_feasible_d4_code():
    out = feasibility(Code(4, (2,), ((1, 1, 1, 1),)))
    assert out.feasible
    g = out.witness
    assert minimum(g) == 1
    for e in out.geometry.ebar:
        assert evaluate(g.mat, e) == 1
    divs = [x for x in snf_divisors(out.geometry.ebar) if x > 1]
    assert divs == [2]


def test_infeasible_with_reverifiable_certificate():
    out = feasibility(Code(5, (3,), ((1,) * 5,)))
    assert out.status == "infeasible"
    # an independent fresh LP over the returned vector set must be empty
    space = out.space
    lp = ExactLP(space.dim, [Q(0)] * space.dim)
    for v in out.vectors:
        coeffs, rhs = space.constraint(v)
        lp.add_ge(coeffs, rhs)
    assert lp.solve().status == INFEASIBLE


def test_symmetrize_agreement_small():
    for code in [Code(4, (2,), ((1, 1, 1, 1),)),
                 Code(6, (3,), ((1,) * 6,)),
                 Code(5, (3,), ((1,) * 5,)),
                 Code(7, (4,), ((1, 1, 1, 1, 2, 2, 2),)),
                 Code(6, (2, 2), ((1, 1, 1, 1, 0, 0), (0, 0, 1, 1, 1, 1)))]:
        a = feasibility(code, symmetrize=True)
        b = feasibility(code, symmetrize=False)
        assert a.status == b.status == ("feasible" if a.feasible else "infeasible")


def test_separation_cut_stays_violated():
    rows = [[Q(1), Q(0)], [Q(0), Q(-1)]]
    big = [10 ** 9, -7 * 10 ** 8]
    cut = separation_cut(rows, big)
    assert any(cut)
    assert evaluate(rows, cut) < 1
    assert max(abs(c) for c in cut) <= 64


def test_monotone_vector_growth_guard():
    # duplicated cuts would break the loop's progress argument
    out = feasibility(Code(9, (5,), ((1, 1, 1, 1, 1, 1, 1, 1, 2),)))
    assert out.feasible
    assert len(set(out.vectors)) == len(out.vectors)
