"""Code layer: admissibility, candidates, binary invariants, equivalence."""

import random

import pytest
from gmpy2 import mpq as Q

from quotlat.codes import (
    Code, canonical_form, codes_equivalent, cyclic_closed_form, dedupe_codes,
    format_code, generate_cyclic_candidates, is_complete, parse_code,
    predicted_invariants, type_of_word, uncovered_pairs, unit_images,
    unit_orbit, watson_filter, watson_identity_check, watson_sum,
    weight4_words, word_of_type,
)
from quotlat.exact import identity, mat_add, mat_mul, transpose


H8 = Code(8, (2, 2, 2, 2), ((1, 1, 1, 1, 0, 0, 0, 0),
                            (0, 0, 1, 1, 1, 1, 0, 0),
                            (0, 1, 0, 1, 0, 1, 0, 1),
                            (1, 1, 1, 1, 1, 1, 1, 1)))


def test_code_validation():
    with pytest.raises(ValueError):
        Code(4, (2,), ((0, 0, 0, 0),))  # zero word has no order
    with pytest.raises(ValueError):
        Code(4, (4,), ((2, 2, 0, 0),))  # order 2, not 4
    c = Code(4, (2,), ((1, 1, 1, 1),))
    assert c.order() == 2 and c.quotient_type() == (2,)


def test_code_elements_and_type():
    c = Code(9, (6, 2), ((0, 1, 1, 1, 1, 2, 2, 2, 3),
                         (1, 0, 0, 0, 1, 0, 0, 1, 1)))
    assert c.order() == 12
    assert c.quotient_type() == (6, 2)
    assert c.independent_generators()
    assert not c.trivially_extends()
    c2 = Code(9, (2, 2), ((1, 1, 1, 1, 0, 0, 0, 0, 0),
                          (0, 0, 0, 0, 1, 1, 1, 1, 0)))
    assert c2.trivially_extends()


def test_watson_identity_random():
    rng = random.Random(2)
    for _ in range(250):
        n = rng.randint(2, 7)
        M = [[Q(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)]
             for _ in range(n)]
        E = mat_add(mat_mul(M, transpose(M)), identity(n))
        a = [rng.randint(-7, 7) for _ in range(n)]
        d = rng.randint(2, 12)
        lhs, rhs = watson_identity_check(E, a, d)
        assert lhs == rhs


def test_watson_identity_all_ones():
    n, d = 6, 4
    lhs, rhs = watson_identity_check(identity(n), [1] * n, d)
    assert lhs == rhs == Q((n - 2 * d) * n, d * d)


def test_watson_identity_zero_coefficients_drop_out():
    E = identity(5)
    l1, r1 = watson_identity_check(E, [2, 0, 1, 0, 3], 4)
    assert l1 == r1


def test_watson_filter_examples():
    assert not watson_filter((5,), 3)            # five ones, sum 5 < 6
    assert watson_filter((4,), 2)                # sum 4 >= 4
    assert not watson_filter((7, 1), 5)          # sum 9 < 10
    assert watson_filter((1, 8), 5)              # orbit image of (8,1)? no:
    # (1,8): sum 17 >= 10, image (8,1): 8+2=10 >= 10


def test_unit_orbit():
    assert unit_orbit((4, 4), 5) == (4, 4)
    assert unit_orbit((8, 1), 5) == (1, 8)
    imgs = unit_images((6, 1, 2), 7)
    assert len(imgs) == 3
    canon = unit_orbit((6, 1, 2), 7)
    assert canon == min(imgs)
    # idempotence
    assert unit_orbit(canon, 7) == canon


def test_generate_cyclic_candidates():
    assert generate_cyclic_candidates(9, 2) == [(9,)]
    assert generate_cyclic_candidates(9, 3) == [(9,)]
    assert len(generate_cyclic_candidates(9, 5)) == 4
    assert generate_cyclic_candidates(5, 3) == []
    for t in generate_cyclic_candidates(9, 6):
        assert sum(t) == 9 and watson_filter(t, 6)
        assert unit_orbit(t, 6) == t


def test_closed_form_small_orders():
    cf = cyclic_closed_form(9, 5)
    assert cf == {(1, 8): (18, 17), (2, 7): (9, 9), (3, 6): (9, 9),
                  (4, 5): (9, 9)}
    cf4 = cyclic_closed_form(9, 4)
    assert cf4[(4, 5)] == (17, 15)
    assert cf4[(9, 0)] == (9, 9)
    assert (1, 8) not in cf4  # m1 >= 4 required
    cf6 = cyclic_closed_form(9, 6)
    assert len(cf6) == 20
    assert cf6[unit_orbit((4, 5, 0), 6)] == (23, 20)
    assert cf6[unit_orbit((6, 3, 0), 6)] == (18, 17)
    assert cf6[unit_orbit((1, 5, 3), 6)] == (23, 20)
    assert cyclic_closed_form(4, 2) == {(4,): (12, 10)}
    assert cyclic_closed_form(6, 3) == {(6,): (12, 11)}
    assert cyclic_closed_form(5, 2) == {(5,): (5, 5)}


def test_binary_h8():
    assert weight4_words(H8) == 14
    assert uncovered_pairs(H8) == 0
    assert is_complete(H8)
    assert predicted_invariants(H8) == (120, 36)


def test_binary_single_word():
    c = Code(9, (2,), ((1, 1, 1, 1, 0, 0, 0, 0, 0),))
    assert weight4_words(c) == 1
    assert predicted_invariants(c)[0] == 17


def test_binary_chain_is_complete():
    for m in (3, 4):
        words = []
        for i in range(m - 1):
            w = [0] * (2 * m)
            w[2 * i:2 * i + 4] = [1, 1, 1, 1]
            words.append(tuple(w))
        c = Code(2 * m, (2,) * (m - 1), tuple(words))
        assert is_complete(c)
        # the lifted lattice is the even-coordinate-sum lattice: s = n(n-1)
        assert predicted_invariants(c)[0] == 2 * m * (2 * m - 1)


def test_binary_weight_guard():
    with pytest.raises(ValueError):
        weight4_words(Code(4, (2, 2), ((1, 1, 1, 1), (1, 1, 0, 0))))


def test_equivalence_scrambled():
    rng = random.Random(5)
    base = Code(9, (6, 2), ((0, 1, 1, 1, 1, 2, 2, 2, 3),
                            (1, 0, 0, 0, 1, 0, 0, 1, 1)))
    for _ in range(5):
        perm = list(range(9))
        rng.shuffle(perm)
        flips = [rng.choice([1, -1]) for _ in range(9)]
        w1 = tuple((flips[j] * base.words[0][perm[j]]) % 6 for j in range(9))
        w2 = tuple((flips[j] * base.words[1][perm[j]]) % 2 for j in range(9))
        other = Code(9, (6, 2), (w1, w2))
        assert codes_equivalent(base, other)


def test_equivalence_regeneration():
    # replacing a generator by itself plus another one keeps the subgroup
    base = Code(9, (4, 2), ((1, 1, 1, 1, 2, 2, 2, 0, 0),
                            (0, 0, 0, 0, 0, 1, 1, 1, 1)))
    e_plus_2f = tuple((a + 2 * b) % 4 for a, b in zip(*base.words))
    other = Code(9, (4, 2), (e_plus_2f, base.words[1]))
    assert codes_equivalent(base, other)


def test_equivalence_distinguishes_weight_systems():
    c1 = Code(9, (2, 2), ((1, 1, 1, 1, 0, 0, 0, 0, 0),
                          (0, 0, 0, 0, 1, 1, 1, 1, 1)))
    c4 = Code(9, (2, 2), ((1, 1, 1, 1, 1, 0, 0, 0, 0),
                          (0, 0, 0, 0, 1, 1, 1, 1, 1)))
    assert not codes_equivalent(c1, c4)


def test_equivalence_relation_spot_checks():
    rng = random.Random(9)
    codes = []
    for _ in range(4):
        w1 = tuple(rng.randint(0, 1) for _ in range(6))
        if not any(w1):
            w1 = (1, 1, 1, 1, 0, 0)
        codes.append(Code(6, (2,), (w1,)))
    for c in codes:
        assert codes_equivalent(c, c)
    for a in codes:
        for b in codes:
            assert codes_equivalent(a, b) == codes_equivalent(b, a)


def test_dedupe_codes():
    a = Code(6, (2, 2), ((1, 1, 1, 1, 0, 0), (0, 0, 1, 1, 1, 1)))
    b = Code(6, (2, 2), ((0, 0, 1, 1, 1, 1), (1, 1, 1, 1, 0, 0)))
    assert len(dedupe_codes([a, b])) == 1


def test_code_text_roundtrip():
    text = format_code(H8)
    back = parse_code(text)
    assert back == H8
    assert parse_code("4 2\n1 1 1 1\n") == Code(4, (2,), ((1, 1, 1, 1),))
