import pytest
from hypothesis import given, settings, strategies as st

from fusionlab.errors import ForeignElementError, IllFormedMorphism, NotSylowError
from fusionlab.fusion import (
    FusionMorphism,
    aut_P,
    centralizer_subsystem,
    focal_subgroup,
    frobenius_criterion,
    fusion_axiom_violations,
    fusion_of_group,
    generated_subsystem,
    inner_fusion,
    is_centric_check,
    is_fully_normalized,
    is_nilpotent,
    is_saturated,
    is_strongly_closed_F,
    k_normalizer_subsystem,
    normalizer_subsystem,
    o_p_of_F,
    p_centralizer_subsystem,
    saturation_witness,
)
from fusionlab.permcore import (
    GroupHom,
    all_subgroups,
    automorphism_group,
    centralizer,
    derived_subgroup,
    frattini,
    intersection,
    is_normal,
    is_p_nilpotent,
    is_strongly_closed_group,
    normalizer,
    conjugate_subgroup,
    prime_divisors,
    sylow,
)

import oracles
from conftest import builtin

CORPUS_SMALL = ["S3", "S4", "A4", "D8", "Q8", "D12", "C6", "C3xS3", "SL(2,3)", "C2xA4", "F21", "A5"]


def fusion(name, p):
    G = builtin(name)
    P = sylow(G, p)
    return G, P, fusion_of_group(G, P, p)


def pairs(names):
    return [(n, p) for n in names for p in prime_divisors(builtin(n).order)]


# --- construction -------------------------------------------------------------

def test_fusion_of_p_group_of_order_two():
    G = builtin("C2")
    F = inner_fusion(G)
    W = G.whole()
    assert F.hom_images(W, W) == {W.indices}


def test_s3_examples(S3):
    _, P3, F3 = fusion("S3", 3)
    assert len(F3.aut(P3)) == 2
    _, P2, F2 = fusion("S3", 2)
    assert F2.same_homs(inner_fusion(P2))


@pytest.mark.parametrize("name,p", pairs(["S3", "S4", "A4", "D8", "SL(2,3)", "C3xS3"]))
def test_hom_sets_match_transporter_scan(name, p):
    G, P, F = fusion(name, p)
    U = G
    for A in F.subgroups:
        for B in F.subgroups:
            mine = {frozenset((U.elements[x], U.elements[y]) for x, y in zip(A.indices, img))
                    for img in F.hom_images(A, B)}
            assert mine == oracles.transporter_homs(G.elements, A.elements, B.elements)


def test_fusion_of_group_requires_sylow(S4):
    with pytest.raises(NotSylowError):
        fusion_of_group(S4, sylow(S4, 3), 2)


def test_inner_fusion_examples(V4, D8):
    T = V4.trivial()
    assert inner_fusion(T, 2).morphism_count == 1
    W = V4.whole()
    assert inner_fusion(V4).aut(W) == {W.indices}
    assert len(inner_fusion(D8).aut(D8.whole())) == 4


# --- nilpotency -----------------------------------------------------------------

def test_is_nilpotent_examples(D8):
    assert is_nilpotent(inner_fusion(D8))
    assert not is_nilpotent(fusion("S3", 3)[2])
    assert is_nilpotent(fusion("S3", 2)[2])


def test_frobenius_examples(S3, D8):
    assert frobenius_criterion(D8, D8.whole(), 2)
    assert not frobenius_criterion(S3, sylow(S3, 3), 3)
    assert frobenius_criterion(S3, sylow(S3, 2), 2)


@pytest.mark.parametrize("name,p", pairs(CORPUS_SMALL))
def test_triple_equivalence(name, p):
    G, P, F = fusion(name, p)
    assert is_nilpotent(F) == frobenius_criterion(G, P, p) == is_p_nilpotent(G, p)


# --- strong closure ----------------------------------------------------------------

def test_strong_closure_examples(S4):
    G, P, F = fusion("S4", 2)
    assert is_strongly_closed_F(F, P)
    assert not is_strongly_closed_F(F, frattini(P))
    klein = next(Q for Q in F.subgroups if Q.order == 4 and is_normal(Q, G))
    assert is_strongly_closed_F(F, klein)


@pytest.mark.parametrize("name,p", pairs(CORPUS_SMALL))
def test_strong_closure_provenance(name, p):
    G, P, F = fusion(name, p)
    for Q in F.subgroups:
        assert is_strongly_closed_F(F, Q) == is_strongly_closed_group(G, P, Q)


# --- normalizer subsystems -------------------------------------------------------------

def test_k_normalizer_examples(S4):
    G, P, F = fusion("S4", 2)
    T = G.trivial()
    assert k_normalizer_subsystem(F, T, [T.indices]).same_homs(F)
    klein = next(Q for Q in F.subgroups if Q.order == 4 and is_normal(Q, G))
    assert normalizer_subsystem(F, klein).same_homs(F)

    G3, P3, F3 = fusion("S4", 3)
    N = normalizer_subsystem(F3, P3)
    model = fusion_of_group(normalizer(G3, P3), P3, 3)
    assert N.same_homs(model)
    assert len(N.aut(P3)) == 2
    assert not is_nilpotent(N)


def test_explicit_full_automorphism_group_equals_default(S4):
    G, P, F = fusion("S4", 2)
    for Q in F.subgroups:
        K = automorphism_group(Q)
        assert k_normalizer_subsystem(F, Q, K).same_homs(normalizer_subsystem(F, Q))


def test_k_normalizer_errors(S4):
    G, P, F = fusion("S4", 2)
    klein = next(Q for Q in F.subgroups if Q.order == 4 and is_normal(Q, G))
    auts = automorphism_group(klein)
    order3 = [a for a in auts if a.images != klein.indices][:1]
    with pytest.raises(ValueError):
        k_normalizer_subsystem(F, klein, order3)
    with pytest.raises(ForeignElementError):
        normalizer_subsystem(F, sylow(G, 3))


def test_normalizer_of_trivial_is_everything():
    _, _, F = fusion("A4", 2)
    assert normalizer_subsystem(F, F.P.parent.trivial()).same_homs(F)


@pytest.mark.parametrize("name", ["D8", "Q8", "D16", "SD16", "He3"])
def test_normalizer_in_inner_fusion(name):
    G = builtin(name)
    F = inner_fusion(G)
    for Q in F.subgroups:
        NPQ = normalizer(G, Q)
        assert normalizer_subsystem(F, Q).same_homs(inner_fusion(NPQ, F.p))


@pytest.mark.parametrize("name,p", pairs(["S4", "A4", "SL(2,3)", "C3xS3", "C2xA4", "D12", "A5", "GL(2,3)"]))
def test_group_model_normalizer_and_centralizer(name, p):
    G, P, F = fusion(name, p)
    for Q in F.subgroups:
        if not is_fully_normalized(F, Q):
            continue
        NF = normalizer_subsystem(F, Q)
        assert NF.same_homs(fusion_of_group(normalizer(G, Q), normalizer(P, Q), p))
        CF = centralizer_subsystem(F, Q)
        assert CF.same_homs(fusion_of_group(centralizer(G, Q), centralizer(P, Q), p))


def test_pc_subsystem_base_contains_q_centralizer():
    G, P, F = fusion("SL(2,3)", 2)
    for Q in F.subgroups:
        PC = p_centralizer_subsystem(F, Q)
        assert PC.P == F.canonical(normalizer(P, Q))
        assert len(aut_P(P, Q)) == normalizer(P, Q).order // centralizer(P, Q).order


# --- generated subsystems ----------------------------------------------------------------

def test_generated_empty_seed_is_inner(D8):
    assert generated_subsystem(D8, []).same_homs(inner_fusion(D8))


@pytest.mark.parametrize("name,p", pairs(["S4", "A4", "SL(2,3)", "C3xS3"]))
def test_generated_idempotent(name, p):
    _, P, F = fusion(name, p)
    E = generated_subsystem(P, list(F.morphisms()), p)
    assert E.same_homs(F)


def test_generated_from_order_three_automorphism_is_a4_fusion(A4):
    V = sylow(A4, 2)
    g = next(i for i, x in enumerate(A4.elements) if x.order == 3)
    phi = GroupHom(V, V, tuple(int(v) for v in A4.conj[g, V.arr]))
    E = generated_subsystem(V, [phi], 2)
    assert E.same_homs(fusion_of_group(A4, V, 2))
    assert is_saturated(E)


def test_generated_rejects_ill_formed(V4):
    W = V4.whole()
    with pytest.raises(IllFormedMorphism):
        generated_subsystem(V4, [GroupHom(W, W, (W.indices[0],) * 4)], 2)
    moves_identity = GroupHom(W, W, (W.indices[1], W.indices[0], W.indices[2], W.indices[3]))
    with pytest.raises(IllFormedMorphism):
        generated_subsystem(V4, [moves_identity], 2)


@given(st.data())
@settings(max_examples=25, deadline=None)
def test_generated_closure_properties(data):
    G = builtin(data.draw(st.sampled_from(["D8", "Q8", "C4", "D16"])))
    auts = automorphism_group(G)
    subs = all_subgroups(G)
    seed = []
    for a in data.draw(st.lists(st.sampled_from(auts), max_size=2)):
        A = data.draw(st.sampled_from(subs))
        phi = FusionMorphism(a.source, a.target, a.images).restrict(A, G.whole())
        seed.append(phi)
    E = generated_subsystem(G, seed)
    assert fusion_axiom_violations(E) == []
    for phi in seed:
        assert phi.images in E.hom_images(phi.source, G.whole())
    assert generated_subsystem(G, list(E.morphisms())).same_homs(E)


# --- saturation ---------------------------------------------------------------------------

def test_saturation_of_inner_and_group_systems():
    for name in ["D8", "Q8", "D16", "SD16", "He3", "C9"]:
        assert is_saturated(inner_fusion(builtin(name)))
    for name, p in pairs(CORPUS_SMALL):
        assert is_saturated(fusion(name, p)[2])


def test_non_saturated_klein_swap(V4):
    W = V4.whole()
    swaps = [a for a in automorphism_group(V4)
             if sum(x != y for x, y in zip(W.indices, a.images)) == 2]
    E = generated_subsystem(V4, [swaps[0]], 2)
    assert len(E.aut(W)) == 2
    assert len(aut_P(W, W)) == 1
    assert not is_saturated(E)
    assert W in saturation_witness(E)


# --- O_p, centric, focal -----------------------------------------------------------------------

def test_op_examples(D8):
    assert o_p_of_F(inner_fusion(D8)) == D8.whole()
    G, P, F = fusion("S4", 2)
    Q = o_p_of_F(F)
    assert Q.order == 4 and is_normal(Q, G)
    _, P3, F3 = fusion("S3", 3)
    assert o_p_of_F(F3) == P3


@pytest.mark.parametrize("name,p", pairs(CORPUS_SMALL))
def test_op_contains_group_op(name, p):
    G, P, F = fusion(name, p)
    core = intersection(*[conjugate_subgroup(P, g) for g in range(G.order)])
    assert core <= o_p_of_F(F)


def test_centric_examples(D8):
    F = inner_fusion(D8)
    assert is_centric_check(F, D8.whole())
    assert not is_centric_check(F, D8.trivial())
    G, P, F2 = fusion("S4", 2)
    klein = next(Q for Q in F2.subgroups if Q.order == 4 and is_normal(Q, G))
    assert is_centric_check(F2, klein)


def test_focal_examples(D8):
    assert focal_subgroup(inner_fusion(D8)) == derived_subgroup(D8)
    _, P3, F3 = fusion("S3", 3)
    assert focal_subgroup(F3) == P3
    assert focal_subgroup(inner_fusion(D8.trivial(), 2)).is_trivial()


@pytest.mark.parametrize("name,p", pairs(CORPUS_SMALL))
def test_focal_subgroup_is_sylow_meet_derived(name, p):
    G, P, F = fusion(name, p)
    assert focal_subgroup(F) == intersection(P, derived_subgroup(G))


@pytest.mark.parametrize("name,p", pairs(CORPUS_SMALL))
def test_fusion_axioms(name, p):
    assert fusion_axiom_violations(fusion(name, p)[2]) == []


def test_morphism_helpers(S4):
    G, P, F = fusion("S4", 2)
    phi = F.hom(P, P)[1]
    sub = F.subgroups[3]
    r = phi.restrict(sub, P)
    assert all(r(x) == phi(x) for x in sub.indices)
    both = phi.then(phi)
    assert all(both(x) == phi(phi(x)) for x in P.indices)
    assert F.morphism_count == sum(len(F.hom(A, B)) for A in F.subgroups for B in F.subgroups)
