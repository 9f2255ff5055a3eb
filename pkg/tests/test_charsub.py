import pytest

from fusionlab.charsub import (
    ZJ,
    abelian_subgroups_max_order,
    char_sub_report,
    enumerate_strongly_closed,
    thompson_J,
)
from fusionlab.errors import NotPGroupError, NotSylowError
from fusionlab.permcore import (
    all_subgroups,
    automorphism_group,
    center,
    conjugate_subgroup,
    is_normal,
    normalizer,
    prime_divisors,
    sylow,
)

import oracles
from conftest import builtin

P_GROUPS = ["C2", "C4", "C8", "C9", "D8", "Q8", "D16", "SD16", "He3"]


def test_abelian_input_is_its_own_witness(C4):
    assert abelian_subgroups_max_order(C4) == [C4.whole()]
    assert thompson_J(C4) == C4.whole()
    assert ZJ(C4) == C4.whole()


def test_dihedral_eight(D8):
    maxab = abelian_subgroups_max_order(D8)
    assert [A.order for A in maxab] == [4, 4, 4]
    assert sorted(max(x.order for x in A) for A in maxab) == [2, 2, 4]
    assert thompson_J(D8) == D8.whole()
    assert ZJ(D8) == center(D8)
    assert ZJ(D8).order == 2


def test_quaternion(Q8):
    maxab = abelian_subgroups_max_order(Q8)
    assert [A.order for A in maxab] == [4, 4, 4]
    assert all(max(x.order for x in A) == 4 for A in maxab)
    assert thompson_J(Q8) == Q8.whole()


@pytest.mark.parametrize("name", ["C2", "C3", "C5", "C7", "C11"])
def test_prime_order(name):
    G = builtin(name)
    assert thompson_J(G) == ZJ(G) == G.whole()


def test_rejects_non_p_groups(S3):
    with pytest.raises(NotPGroupError):
        thompson_J(S3)


@pytest.mark.parametrize("name", P_GROUPS)
def test_max_abelians_match_scan(name):
    G = builtin(name)
    subs = all_subgroups(G)
    ab = [frozenset(H.elements) for H in subs if oracles.is_abelian(H.elements)]
    top = max(map(len, ab))
    assert {frozenset(A.elements) for A in abelian_subgroups_max_order(G)} == {A for A in ab if len(A) == top}


@pytest.mark.parametrize("name", P_GROUPS)
def test_J_and_ZJ_are_characteristic(name):
    G = builtin(name)
    rep = char_sub_report(G)
    assert rep.z_of_j == center(rep.thompson)
    assert rep.z_of_j <= rep.thompson <= rep.base
    if G.order > 1:
        assert rep.z_of_j.order > 1
    for a in automorphism_group(G):
        m = dict(zip(a.source.indices, a.images))
        for H in (rep.thompson, rep.z_of_j):
            assert {m[x] for x in H.indices} == set(H.indices)


@pytest.mark.parametrize("name", ["S4", "SL(2,3)", "GL(2,3)", "C3xS3", "He3", "A5"])
def test_J_and_ZJ_normalized_by_sylow_normalizer(name):
    G = builtin(name)
    for p in prime_divisors(G.order):
        P = sylow(G, p)
        N = normalizer(G, P)
        for H in (thompson_J(P), ZJ(P)):
            assert all(conjugate_subgroup(H, g) == H for g in N.indices)


def test_strongly_closed_examples(S4):
    P2 = sylow(S4, 2)
    sc = enumerate_strongly_closed(S4, P2)
    assert [Q.order for Q in sc] == [1, 4, 8]
    assert is_normal(sc[1], S4)
    P3 = sylow(S4, 3)
    assert enumerate_strongly_closed(S4, P3) == [S4.trivial(), P3]


def test_strongly_closed_requires_sylow(S4):
    with pytest.raises(NotSylowError):
        enumerate_strongly_closed(S4, all_subgroups(sylow(S4, 2))[5])


@pytest.mark.parametrize("name", ["S4", "A4", "C3xS3", "SL(2,3)", "GL(2,3)", "C2xA4", "D12", "He3"])
def test_strongly_closed_matches_definition(name):
    G = builtin(name)
    for p in prime_divisors(G.order):
        P = sylow(G, p)
        sc = enumerate_strongly_closed(G, P)
        expected = [Q for Q in all_subgroups(P) if oracles.strongly_closed_scan(G.elements, P.elements, Q.elements)]
        assert sc == expected
        assert sc[0].is_trivial() and sc[-1] == P
        assert all(is_normal(Q, P) for Q in sc)
