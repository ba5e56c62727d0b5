import itertools

import pytest
from hypothesis import given, strategies as st

from _groups import group, sub
from siglat.corpus import builtin_corpus
from siglat.errors import ElementNotInLattice, NotComparable, NotJoinClosed, NotMeetClosed
from siglat.lattice import (
    build_lattice,
    find_diamond,
    interval,
    is_distributive,
    is_distributive_by_forbidden,
    is_meet_distributive_element,
    is_modular,
    lattice_from_order,
)
from siglat.subgroups import SubgroupFamily, all_normal_subgroups, all_subgroups

CORPUS = [spec.name for spec in builtin_corpus()]


def full(name):
    return build_lattice(all_subgroups(group(name)))


def orders_at(L, idxs):
    return sorted(L.family[i].order for i in idxs)


# --- building -----------------------------------------------------------


def test_chain_in_s3():
    S3 = group("S3")
    L = build_lattice(SubgroupFamily.of(S3, [S3.trivial(), sub(S3, "(1 2 3)"), S3.whole()]))
    assert len(L) == 3
    assert L.covers() == [(0, 1), (1, 2)]
    assert (L.bottom, L.top) == (0, 2)


def test_not_join_closed_payload():
    S3 = group("S3")
    a, b = sub(S3, "(1 2)"), sub(S3, "(1 3)")
    with pytest.raises(NotJoinClosed) as info:
        build_lattice(SubgroupFamily.of(S3, [S3.trivial(), a, b]))
    assert {info.value.a, info.value.b} == {a, b}
    assert info.value.result == S3.whole()
    assert info.value.operation == "join"


def test_not_meet_closed_payload():
    S4 = group("S4")
    V4 = sub(S4, "(1 2)(3 4)", "(1 3)(2 4)")
    K = sub(S4, "(1 2)", "(3 4)")
    D8 = S4.subgroup(S4.join_mask(V4.members, K.members))
    with pytest.raises(NotMeetClosed) as info:
        build_lattice(SubgroupFamily.of(S4, [S4.trivial(), V4, K, D8, S4.whole()]))
    assert info.value.result == sub(S4, "(1 2)(3 4)")


@pytest.mark.parametrize("name", CORPUS)
def test_full_lattice_builds_and_absorbs(name):
    L = full(name)
    n = len(L)
    for a, b in itertools.product(range(n), repeat=2):
        assert L.meet[a][L.join[a][b]] == a
        assert L.join[a][L.meet[a][b]] == a


# --- law checks ---------------------------------------------------------


def test_distributive_examples():
    assert is_distributive(build_lattice(SubgroupFamily.of(group("S3"), [group("S3").whole()])))
    V = full("C2xC2")
    check = is_distributive(V)
    assert not check
    assert orders_at(V, check.witness) == [2, 2, 2]
    assert is_distributive(full("C12"))


def test_modular_examples():
    assert is_modular(full("C2xC2"))
    S3 = full("S3")
    assert is_modular(S3) and not is_distributive(S3)


@pytest.mark.parametrize("name", CORPUS)
def test_normal_lattices_are_modular(name):
    assert is_modular(build_lattice(all_normal_subgroups(group(name))))


def test_meet_distributive_examples():
    V = full("C2xC2")
    assert is_meet_distributive_element(V, V.bottom)
    assert is_meet_distributive_element(V, V.top)
    atom = next(i for i, H in enumerate(V.family) if H.order == 2)
    assert not is_meet_distributive_element(V, atom)
    with pytest.raises(ElementNotInLattice):
        is_meet_distributive_element(V, group("S3").whole())


def test_diamond_examples():
    V = full("C2xC2")
    assert orders_at(V, find_diamond(V)) == [2, 2, 2]
    S3 = group("S3")
    chain = build_lattice(SubgroupFamily.of(S3, [S3.trivial(), sub(S3, "(1 2 3)"), S3.whole()]))
    assert find_diamond(chain) is None
    Q = full("Q8")
    assert orders_at(Q, find_diamond(Q)) == [4, 4, 4]


def test_interval_examples():
    L = full("S3")
    whole = interval(L, L.bottom, L.top)
    assert len(whole) == len(L)
    S3 = group("S3")
    top = interval(L, sub(S3, "(1 2 3)"), S3.whole())
    assert [H.order for H in top.family] == [3, 6]
    assert len(interval(L, L.top, L.top)) == 1
    with pytest.raises(NotComparable):
        interval(L, sub(S3, "(1 2)"), sub(S3, "(1 3)"))


# --- abstract lattices --------------------------------------------------


def divisor_lattice(n):
    return lattice_from_order([d for d in range(1, n + 1) if n % d == 0], lambda a, b: b % a == 0)


def m3():
    return lattice_from_order(["0", "a", "b", "c", "1"], lambda x, y: x == y or x == "0" or y == "1")


def n5():
    order = {("0", "a"), ("0", "b"), ("0", "c"), ("a", "c"), ("0", "1"), ("a", "1"), ("b", "1"), ("c", "1")}
    return lattice_from_order(["0", "a", "b", "c", "1"], lambda x, y: x == y or (x, y) in order)


def partition_lattice(n):
    def partitions(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for p in partitions(rest):
            yield [[first]] + p
            for i in range(len(p)):
                yield p[:i] + [[first] + p[i]] + p[i + 1 :]

    labels = [frozenset(frozenset(b) for b in p) for p in partitions(list(range(n)))]
    return lattice_from_order(labels, lambda x, y: all(any(b <= c for c in y) for b in x))


def test_forbidden_sublattices():
    assert not is_modular(n5()) and not is_distributive(n5())
    assert is_modular(m3()) and not is_distributive(m3()) and find_diamond(m3()) is not None
    assert is_distributive(divisor_lattice(360))
    P4 = partition_lattice(4)
    assert len(P4) == 15 and not is_modular(P4)


@pytest.mark.parametrize("L", [n5(), m3(), divisor_lattice(60), partition_lattice(3), partition_lattice(4)])
def test_triple_law_matches_forbidden_test_on_abstract_lattices(L):
    assert bool(is_distributive(L)) == is_distributive_by_forbidden(L)


# --- random sublattices of subgroup lattices ----------------------------

SOURCES = ["S3", "D8", "Q8", "A4", "S4", "C2xC2xC2", "D12", "S3xC4", "SL(2,3)", "F20", "S3xS3"]


def close_family(G, masks):
    masks = set(masks) | {1, G.full_mask}
    while True:
        extra = set()
        for a, b in itertools.combinations(masks, 2):
            for m in (a & b, G.join_mask(a, b)):
                if m not in masks:
                    extra.add(m)
        if not extra:
            return SubgroupFamily.of(G, (G.subgroup(m) for m in masks))
        masks |= extra


@st.composite
def random_lattice(draw):
    G = group(draw(st.sampled_from(SOURCES)))
    fam = all_subgroups(G)
    picks = draw(st.lists(st.integers(0, len(fam) - 1), min_size=0, max_size=4))
    return build_lattice(close_family(G, [fam[i].members for i in picks]))


@given(random_lattice())
def test_lattice_laws_on_random_sublattices(L):
    n = len(L)
    dist = bool(is_distributive(L))
    assert dist == is_distributive_by_forbidden(L)
    if dist:
        assert is_modular(L)
    for a, b in itertools.product(range(n), repeat=2):
        assert L.meet[a][L.join[a][b]] == a
        assert L.join[a][L.meet[a][b]] == a


@given(random_lattice(), st.data())
def test_intervals_of_distributive_lattices_are_distributive(L, data):
    a = data.draw(st.integers(0, len(L) - 1))
    above = [x for x in range(len(L)) if L.leq(a, x)]
    b = data.draw(st.sampled_from(above))
    sublattice = interval(L, a, b)
    if is_distributive(L):
        assert is_distributive(sublattice)


@pytest.mark.parametrize("name", CORPUS)
def test_ore_criterion(name):
    G = group(name)
    L = full(name)
    assert bool(is_distributive(L)) == G.is_cyclic
    assert bool(is_distributive(L)) == is_distributive_by_forbidden(L)
