import functools

import pytest
from hypothesis import given, strategies as st

from _groups import group, orders, sub
from siglat.corpus import builtin_corpus
from siglat.errors import NotSigmaFull, ParseError
from siglat.perm import generate_group, is_normal
from siglat.sigma import (
    SIGMA0,
    Block,
    PrimePartition,
    complete_hall_sets,
    hall_subgroups,
    is_fully_permutable,
    is_sigma0,
    is_sigma_full,
    is_sigma_nilpotent,
    is_sigma_nilpotent_direct,
    is_sigma_number,
    is_sigma_permutable,
    is_sigma_primary,
    is_sigma_subnormal,
    parse_partition,
    s_permutable_family,
    sigma_core,
    sigma_nilpotent_residual,
    sigma_of_group,
    sigma_permutable_family,
    sigma_residual,
    sigma_residual_by_normals,
    sigma_subnormal_masks,
)
from siglat.subgroups import all_normal_subgroups, all_subgroups

CORPUS = [spec.name for spec in builtin_corpus()]
PARTITIONS = ["sigma0", "pi:2", "pi:2,3", "blocks:[2,5][3];rest=singletons", "pi:3", "blocks:[3];rest=one_block"]


def B(*primes):
    return Block(frozenset(primes))


# --- partitions ---------------------------------------------------------


def test_parse_examples():
    s0 = parse_partition("sigma0")
    assert s0 == SIGMA0 and is_sigma0(s0)
    assert s0.classify(7) == B(7)
    pi = parse_partition("pi:2,3")
    assert pi.classify(3) == B(2, 3)
    assert pi.classify(5) == pi.classify(7) == Block(frozenset({2, 3}), complement=True)
    bl = parse_partition("blocks:[2,5][3];rest=singletons")
    assert bl.classify(5) == B(2, 5) and bl.classify(3) == B(3) and bl.classify(11) == B(11)
    assert is_sigma0(parse_partition("blocks:[2][3]"))


@pytest.mark.parametrize("text", PARTITIONS)
def test_names_round_trip(text):
    sigma = parse_partition(text)
    assert parse_partition(sigma.name) == sigma


@pytest.mark.parametrize(
    "text,column",
    [("pi:2,x", 6), ("blocks:[2][4]", 12), ("blocks:2", 8), ("blocks:[2];rest=many", 17), ("tau", 1), ("pi:", 4)],
)
def test_parse_errors(text, column):
    with pytest.raises(ParseError) as info:
        parse_partition(text)
    assert info.value.column == column


def test_overlapping_blocks_rejected():
    with pytest.raises(ParseError):
        parse_partition("blocks:[2,3][3]")
    with pytest.raises(ValueError):
        PrimePartition((frozenset({2}), frozenset({2, 5})))


@given(st.sampled_from(PARTITIONS), st.integers(2, 200))
def test_classify_is_a_partition(text, p):
    sigma = parse_partition(text)
    if all(p % q for q in range(2, p)):
        block = sigma.classify(p)
        assert p in block
        assert sigma.classify(p) == block


def test_sigma_numbers():
    assert is_sigma_number(12, B(2, 3))
    assert is_sigma_number(1, B(5))
    assert not is_sigma_number(10, B(2, 3))
    assert sigma_of_group(group("S4"), SIGMA0) == [B(2), B(3)]


# --- Hall subgroups and fullness ----------------------------------------


def test_hall_examples():
    assert orders(hall_subgroups(group("S3"), B(2))) == [2, 2, 2]
    assert orders(hall_subgroups(group("A5"), B(2, 3))) == [12] * 5
    assert hall_subgroups(group("A5"), B(2, 5)) == []


def test_complete_hall_sets():
    assert len(complete_hall_sets(group("S4"), SIGMA0)) == 12
    A5 = group("A5")
    three = parse_partition("blocks:[3];rest=one_block")
    assert not is_sigma_full(A5, three)
    assert complete_hall_sets(A5, three) == []
    C1 = group("C1")
    sets = complete_hall_sets(C1, SIGMA0)
    assert is_sigma_full(C1, SIGMA0) and len(sets) == 1 and sets[0].members == ()


# --- sigma-permutability ------------------------------------------------


def test_sigma_permutable_examples():
    S3 = group("S3")
    assert is_sigma_permutable(S3, sub(S3, "(1 2 3)"), SIGMA0)
    assert not is_sigma_permutable(S3, sub(S3, "(1 2)"), SIGMA0)
    A5 = group("A5")
    with pytest.raises(NotSigmaFull):
        is_sigma_permutable(A5, A5.trivial(), parse_partition("blocks:[3];rest=one_block"))


def test_sigma_permutable_family_examples():
    assert orders(sigma_permutable_family(group("S3"), SIGMA0)) == [1, 3, 6]
    Q8 = group("Q8")
    assert len(sigma_permutable_family(Q8, SIGMA0)) == len(all_subgroups(Q8)) == 6
    assert orders(sigma_permutable_family(group("A5"), SIGMA0)) == [1, 60]
    with pytest.raises(NotSigmaFull):
        sigma_permutable_family(group("A5"), parse_partition("pi:2"))


@pytest.mark.parametrize("name", CORPUS)
def test_sigma0_family_is_s_permutable_family(name):
    G = group(name)
    assert sigma_permutable_family(G, SIGMA0).masks == s_permutable_family(G).masks


# --- sigma-subnormality -------------------------------------------------


def literal_subnormal(G, sigma):
    """Forward chain search with cores taken over every element of the larger subgroup."""
    fam = all_subgroups(G)

    def core(x, y):
        out = x
        for g in G.members(y):
            out &= G.conjugate_mask(x, g)
        return out

    @functools.lru_cache(maxsize=None)
    def reaches(x):
        if x == G.full_mask:
            return True
        for Y in fam:
            y = Y.members
            if y == x or x & y != x:
                continue
            c = core(x, y)
            if (c == x or is_sigma_primary(Y.order // c.bit_count(), sigma)) and reaches(y):
                return True
        return False

    return frozenset(H.members for H in fam if reaches(H.members))


@pytest.mark.parametrize("name", ["S3", "A4", "S4", "D12", "SL(2,3)", "A5", "S3xC4", "F20", "C7:C3"])
@pytest.mark.parametrize("text", ["sigma0", "pi:2", "pi:2,3"])
def test_subnormal_matches_chain_search(name, text):
    G = group(name)
    sigma = parse_partition(text)
    assert sigma_subnormal_masks(G, sigma) == literal_subnormal(G, sigma)


def test_subnormal_examples():
    A4, S4 = group("A4"), group("S4")
    assert is_sigma_subnormal(S4, sub(S4, "(1 2)(3 4)", "(1 3)(2 4)"), SIGMA0)
    assert not is_sigma_subnormal(A4, sub(A4, "(1 2 3)"), SIGMA0)
    assert not is_sigma_subnormal(S4, sub(S4, "(1 2 3 4)", "(1 3)"), SIGMA0)


# --- nilpotency, cores and residuals ------------------------------------


def test_nilpotent_examples():
    assert not is_sigma_nilpotent(group("S3"), SIGMA0)
    assert is_sigma_nilpotent(group("S3"), parse_partition("pi:2,3"))
    assert is_sigma_nilpotent(group("C6"), SIGMA0)
    assert is_sigma_primary(group("C8"), SIGMA0) and not is_sigma_primary(group("C6"), SIGMA0)
    assert is_sigma_primary(group("C1"), SIGMA0)


@pytest.mark.parametrize("name", CORPUS)
@pytest.mark.parametrize("text", ["sigma0", "pi:2", "pi:2,3", "blocks:[2,5][3];rest=singletons"])
def test_nilpotency_matches_direct_product(name, text):
    G = group(name)
    sigma = parse_partition(text)
    assert is_sigma_nilpotent(G, sigma) == is_sigma_nilpotent_direct(G, sigma)


def test_core_examples():
    S4, S3 = group("S4"), group("S3")
    assert sigma_core(S4, B(2)) == sub(S4, "(1 2)(3 4)", "(1 3)(2 4)")
    assert sigma_core(S3, B(3)) == sub(S3, "(1 2 3)")
    assert sigma_core(S3, B(2)).order == 1


def test_residual_examples():
    S3 = group("S3")
    assert sigma_residual(S3, B(2)) == sub(S3, "(1 2 3)")
    assert sigma_residual(group("C2xC2"), B(2)).order == 1
    assert sigma_residual(S3, B(3)) == S3.whole()


@pytest.mark.parametrize("name", CORPUS)
def test_residual_two_ways(name):
    G = group(name)
    for sigma in (SIGMA0, parse_partition("pi:2,3")):
        for b in sigma_of_group(G, sigma):
            R = sigma_residual(G, b)
            assert R == sigma_residual_by_normals(G, b)
            assert is_normal(G, R)


def test_nilpotent_residual_examples():
    S3, S4 = group("S3"), group("S4")
    assert sigma_nilpotent_residual(S3, SIGMA0) == sub(S3, "(1 2 3)")
    assert sigma_nilpotent_residual(group("C2xC4"), SIGMA0).order == 1
    assert sigma_nilpotent_residual(S4, SIGMA0) == sub(S4, "(1 2 3)", "(1 2)(3 4)")


def test_fully_permutable_examples():
    S3 = group("S3")
    for N in all_normal_subgroups(S3):
        assert is_fully_permutable(S3, N, SIGMA0)
    assert not is_fully_permutable(S3, sub(S3, "(1 2)"), SIGMA0)
    Q8 = group("Q8")
    assert all(is_fully_permutable(Q8, A, SIGMA0) for A in all_subgroups(Q8))


@pytest.mark.parametrize("name", CORPUS)
@pytest.mark.parametrize("text", ["sigma0", "pi:2", "pi:2,3"])
def test_nilpotent_iff_everything_permutable(name, text):
    G = group(name)
    sigma = parse_partition(text)
    if is_sigma_full(G, sigma):
        everything = len(sigma_permutable_family(G, sigma)) == len(all_subgroups(G))
        assert is_sigma_nilpotent(G, sigma) == everything


def test_trivial_group_conventions():
    G = generate_group(1, [])
    assert is_sigma_full(G, SIGMA0) and is_sigma_nilpotent(G, SIGMA0) and is_sigma_primary(G, SIGMA0)
    assert orders(sigma_permutable_family(G, SIGMA0)) == [1]
