from itertools import chain, combinations

import pytest

from vset import (
    ONE,
    TWO,
    ZERO,
    LimitError,
    big_union,
    construct,
    famprod,
    famsum,
    image,
    kpair,
    ordinal,
    parse_hfset,
    random_family,
    random_hfset,
    rank,
    stage_members,
    std_product,
    std_sum,
    std_tuple,
    stream_iterate,
    stream_tuples,
    vapply,
    vfunspace,
    vlambda,
    vpair,
    vproduct,
    vstream,
    vsum,
)

TAG_0 = construct([ZERO])
TAG_1 = construct([ONE])


def test_vpair_examples():
    assert vpair(ZERO, ZERO) == ZERO
    assert vpair(ONE, ZERO) == parse_hfset("{{{0}}}")
    assert vpair(ONE, ZERO) == construct([kpair(ZERO, ZERO)])


def test_vpair_left_empty(rng):
    for _ in range(20):
        b = random_hfset(rng, 4)
        assert vpair(ZERO, b) == std_product(TAG_1, b)


def test_vpair_injective_over_v3():
    pool = stage_members(3)
    for a in pool:
        for b in pool:
            p = vpair(a, b)
            assert image(p, TAG_0) == a
            assert image(p, TAG_1) == b


def test_vpair_preserves_unions(rng):
    for _ in range(100):
        a, a2, b = random_hfset(rng, 4), random_hfset(rng, 4), random_hfset(rng, 4)
        assert vpair(a | a2, b) == vpair(a, b) | vpair(a2, b)
        assert vpair(b, a | a2) == vpair(b, a) | vpair(b, a2)


def test_vlambda_examples():
    assert vlambda({}) == ZERO
    assert vlambda({ZERO: ZERO, ONE: ZERO, TWO: ZERO}) == ZERO
    assert vlambda({ZERO: ONE, ONE: ONE}) == construct([kpair(ZERO, ZERO), kpair(ONE, ZERO)])


def test_vapply_examples():
    f = vlambda({ZERO: ONE, ONE: ZERO})
    assert vapply(f, ZERO) == ONE
    assert vapply(f, ONE) == ZERO
    assert vapply(f, TWO) == ZERO
    assert vapply(ZERO, TWO) == ZERO


def test_vapply_inverts_vlambda(rng):
    for _ in range(100):
        fam = random_family(rng)
        f = vlambda(fam)
        for x, b in fam.items():
            assert vapply(f, x) == b


def test_relations_are_variant_functions(rng):
    pool = stage_members(3)
    for _ in range(100):
        keep = rng.random((len(pool), len(pool))) < 0.3
        r = construct(
            kpair(x, y) for i, x in enumerate(pool) for j, y in enumerate(pool) if keep[i, j]
        )
        domain = {x for i, x in enumerate(pool) if keep[i].any()}
        assert r == vlambda({x: image(r, construct([x])) for x in domain})


def test_vlambda_stays_two_stages_up(rng):
    # keys and members of values in V_3 give variant functions included in V_5
    pool = stage_members(3)
    for x in pool:
        for b in stage_members(4):
            assert all(rank(m) < 5 for m in vlambda({x: b}))
    for _ in range(100):
        fam = random_family(rng, max_size=4, stage=3)
        assert all(rank(m) < 5 for m in vlambda(fam))


def test_vlambda_intersection_with_stage(rng):
    v = {n: set(stage_members(n)) for n in range(5)}
    for _ in range(100):
        fam = random_family(rng, stage=3)
        f = vlambda(fam)
        for n in range(1, 4):
            lhs = construct(m for m in f if m in v[n + 1])
            rhs = vlambda({x: construct(y for y in b if y in v[n]) for x, b in fam.items()})
            assert lhs <= rhs


@pytest.mark.parametrize("size", [1, 2])
def test_vfunspace_identities(size):
    i = ordinal(size)
    assert vfunspace(i, ONE) == ONE
    assert vfunspace(i, ZERO) == ZERO


def test_vfunspace_example():
    assert vfunspace(ONE, TWO) == construct([ZERO, construct([kpair(ZERO, ZERO)])])


def test_vfunspace_empty_domain():
    assert vfunspace(ZERO, TWO) == ONE


def test_vfunspace_limit():
    with pytest.raises(LimitError):
        vfunspace(ordinal(3), construct([ordinal(6)]))


def test_vfunspace_matches_definition(rng):
    # brute force: f <= A x U(B) with f``{x} in B for every x in A
    for _ in range(30):
        a = random_hfset(rng, 3, 0.6)
        b = random_hfset(rng, 4, 0.4)
        cells = list(std_product(a, big_union(b)))
        subsets = chain.from_iterable(combinations(cells, k) for k in range(len(cells) + 1))
        expected = construct(
            construct(f)
            for f in subsets
            if all(image(construct(f), construct([x])) in b for x in a)
        )
        assert vfunspace(a, b) == expected


def test_variant_algebra_examples():
    assert vproduct(construct([ONE]), construct([ZERO])) == construct([vpair(ONE, ZERO)])
    assert vproduct(construct([ONE]), construct([ZERO])) == parse_hfset("{{{{0}}}}")
    assert vsum(ZERO, ZERO) == ZERO
    assert famsum({ZERO: construct([ONE]), ONE: ZERO}) == construct([vpair(ZERO, ONE)])


def test_vsum_tags_disjoint(rng):
    pool = stage_members(3)
    for a in pool:
        for b in pool:
            assert vpair(ZERO, a) != vpair(ONE, b)
    for _ in range(50):
        a, b = random_hfset(rng, 3), random_hfset(rng, 3)
        assert len(vsum(a, b)) == len(a) + len(b)


def test_famprod_constant_family_is_funspace(rng):
    for _ in range(20):
        a = random_hfset(rng, 3, 0.6)
        b = random_hfset(rng, 4, 0.5)
        assert famprod({x: b for x in a}) == vfunspace(a, b)


def test_famprod_limit():
    big = construct(stage_members(4))
    with pytest.raises(LimitError):
        famprod({ZERO: construct([big]), ONE: construct([big])})


def _nonempty(rng, stage, density=0.5):
    while True:
        h = random_hfset(rng, stage, density)
        if not h.is_empty():
            return h


def test_sums_and_products_bound_their_factors(rng):
    for _ in range(50):
        a, b = _nonempty(rng, 3), _nonempty(rng, 3)
        for op in (std_sum, vproduct, vsum):
            n = rank(op(a, b))
            assert all(rank(x) < n for x in a)
            assert all(rank(y) < n for y in b)


def test_vstream_matches_tuples(rng):
    for _ in range(50):
        heads = [random_hfset(rng, 3) for _ in range(int(rng.integers(0, 5)))]
        assert vstream(heads) == stream_tuples(heads)


def test_stream_iterate():
    assert stream_iterate(ONE, 0) == ZERO
    assert stream_iterate(ONE, 1) == construct([std_tuple(ZERO, ZERO)])
    assert stream_iterate(ONE, 2) == construct(
        [std_tuple(ZERO, ZERO), std_tuple(ONE, ZERO, ZERO)]
    )
    for n in range(5):
        assert stream_iterate(ONE, n + 1) == vpair(ONE, stream_iterate(ONE, n))
