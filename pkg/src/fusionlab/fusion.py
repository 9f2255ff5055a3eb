"""Materialized fusion systems over a finite p-group.

A fusion system is stored through its isomorphisms: for each subgroup A of
the base p-group, the set of injective maps out of A, each given as an
image tuple aligned with ``A.indices``.  Hom(A, B) is then the set of those
maps whose image lies in B.  Every constructor here produces a family that
is closed under restriction and under "iso followed by inclusion", so the
two descriptions carry the same information.  ``homs`` exposes the
explicit (A, B) -> hom set association.

Conjugation maps are c_g : x -> g^-1 x g.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ForeignElementError, IllFormedMorphism, NotSylowError
from .permcore import (
    GroupHom,
    GroupLike,
    PermGroup,
    Subgroup,
    all_subgroups,
    as_subgroup,
    centralizer,
    closure_in,
    is_normal,
    is_p_power,
    is_sylow,
    join,
    normalizer,
    p_part,
    prime_divisors,
    subgroup_from_members,
)

Images = tuple[int, ...]


@dataclass(frozen=True)
class FusionMorphism(GroupHom):
    """An injective homomorphism between subgroups of the base p-group."""

    @property
    def image_mask(self) -> int:
        m = 0
        for y in self.images:
            m |= 1 << y
        return m

    def restrict(self, A: Subgroup, B: Subgroup | None = None) -> "FusionMorphism":
        pos = {x: k for k, x in enumerate(self.source.indices)}
        try:
            imgs = tuple(self.images[pos[x]] for x in A.indices)
        except KeyError:
            raise ForeignElementError("restriction to a subgroup outside the source") from None
        return FusionMorphism(A, B if B is not None else self.target, imgs)

    def then(self, other: "FusionMorphism") -> "FusionMorphism":
        """Composite: apply self, then other."""
        pos = {x: k for k, x in enumerate(other.source.indices)}
        try:
            imgs = tuple(other.images[pos[y]] for y in self.images)
        except KeyError:
            raise ForeignElementError("image does not lie in the source of the second map") from None
        return FusionMorphism(self.source, other.target, imgs)


def _mask_of(values: Iterable[int]) -> int:
    m = 0
    for v in values:
        m |= 1 << int(v)
    return m


class FusionSystem:
    """A fusion system over the subgroup ``P`` of some universe group.

    ``isos[A]`` is a frozenset of image tuples (aligned with A.indices).
    ``provenance`` is the realizing (G, P) pair when built from a group.
    """

    def __init__(
        self,
        P: Subgroup,
        p: int,
        isos: Mapping[Subgroup, Iterable[Images]],
        subgroups: Sequence[Subgroup] | None = None,
        provenance: tuple[Subgroup, Subgroup] | None = None,
    ):
        self.P = P
        self.p = p
        self.subgroups = list(subgroups) if subgroups is not None else all_subgroups(P)
        self.by_mask = {A.mask: A for A in self.subgroups}
        self.isos = {A: frozenset(isos.get(A, ())) for A in self.subgroups}
        self.provenance = provenance

    @property
    def universe(self) -> PermGroup:
        return self.P.parent

    def sub(self, mask: int) -> Subgroup:
        return self.by_mask[mask]

    def canonical(self, H: Subgroup) -> Subgroup:
        try:
            return self.by_mask[H.mask]
        except KeyError:
            raise ForeignElementError("subgroup is not contained in the base p-group") from None

    @cached_property
    def _image_masks(self) -> dict[Subgroup, dict[Images, int]]:
        return {A: {img: _mask_of(img) for img in maps} for A, maps in self.isos.items()}

    @cached_property
    def homs(self) -> dict[tuple[Subgroup, Subgroup], frozenset[Images]]:
        out = {}
        for A in self.subgroups:
            imgs = self._image_masks[A]
            for B in self.subgroups:
                bm = B.mask
                out[(A, B)] = frozenset(i for i, m in imgs.items() if m & ~bm == 0)
        return out

    def hom_images(self, A: Subgroup, B: Subgroup) -> frozenset[Images]:
        return self.homs[(self.canonical(A), self.canonical(B))]

    def hom(self, A: Subgroup, B: Subgroup) -> list[FusionMorphism]:
        A = self.canonical(A)
        B = self.canonical(B)
        return [FusionMorphism(A, B, img) for img in sorted(self.homs[(A, B)])]

    def isos_between(self, A: Subgroup, C: Subgroup) -> list[Images]:
        """Isomorphisms from A onto C (image exactly C)."""
        A = self.canonical(A)
        cm = C.mask
        return sorted(i for i, m in self._image_masks[A].items() if m == cm)

    def aut(self, Q: Subgroup) -> frozenset[Images]:
        return frozenset(self.isos_between(Q, Q))

    def morphisms(self) -> Iterable[FusionMorphism]:
        for (A, B), maps in self.homs.items():
            for img in sorted(maps):
                yield FusionMorphism(A, B, img)

    @property
    def morphism_count(self) -> int:
        """Number of (A, B, map) triples."""
        return sum(len(v) for v in self.homs.values())

    def conjugates(self, Q: Subgroup) -> list[Subgroup]:
        """All F-conjugates of Q (including Q)."""
        Q = self.canonical(Q)
        return [self.by_mask[m] for m in sorted(set(self._image_masks[Q].values()))]

    def same_homs(self, other: "FusionSystem") -> bool:
        return self.P == other.P and self.homs == other.homs

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(repr(self.P.indices).encode())
        for A in self.subgroups:
            h.update(repr((A.indices, sorted(self.isos[A]))).encode())
        return h.hexdigest()

    def __repr__(self):
        return f"<FusionSystem over order {self.P.order} (p={self.p}), {self.morphism_count} morphisms>"


# ----------------------------------------------------------------------
# construction
# ----------------------------------------------------------------------

def _infer_p(P: Subgroup, p: int | None) -> int:
    ps = prime_divisors(P.order)
    if p is None:
        return ps[0] if ps else 2
    if ps and ps != [p]:
        raise ValueError(f"base of order {P.order} is not a {p}-group")
    return p


def _transporter_isos(G: Subgroup, P: Subgroup, A: Subgroup) -> set[Images]:
    U = G.parent
    M = U.conj[np.ix_(G.arr, A.arr)]
    ok = P.bool_mask[M].all(axis=1)
    rows = np.unique(M[ok], axis=0)
    return {tuple(int(v) for v in r) for r in rows}


def fusion_of_group(X: GroupLike, P: Subgroup, p: int, subgroups: Sequence[Subgroup] | None = None) -> FusionSystem:
    """F_P(G): Hom(A, B) = {c_g restricted to A : g in G, A^g <= B}."""
    G = as_subgroup(X)
    if P.parent is not G.parent:
        raise ForeignElementError("P and G live in different ambient groups")
    if not is_sylow(P, G, p):
        raise NotSylowError(f"subgroup of order {P.order} is not a Sylow {p}-subgroup of a group of order {G.order}")
    subs = list(subgroups) if subgroups is not None else all_subgroups(P)
    isos = {A: _transporter_isos(G, P, A) for A in subs}
    return FusionSystem(P, p, isos, subs, provenance=(G, P))


def inner_fusion(X: GroupLike, p: int | None = None, subgroups: Sequence[Subgroup] | None = None) -> FusionSystem:
    """F_P(P)."""
    P = as_subgroup(X)
    p = _infer_p(P, p)
    return fusion_of_group(P, P, p, subgroups)


def _validate_morphism(P: Subgroup, phi: GroupHom) -> None:
    if phi.source.parent is not P.parent or phi.target.parent is not P.parent:
        raise IllFormedMorphism("morphism lives in a different ambient group")
    if not (phi.source <= P and phi.target <= P):
        raise IllFormedMorphism("source or target is not a subgroup of P")
    if len(phi.images) != phi.source.order:
        raise IllFormedMorphism("image tuple has the wrong length")
    if len(set(phi.images)) != len(phi.images):
        raise IllFormedMorphism("morphism is not injective")
    if _mask_of(phi.images) & ~phi.target.mask:
        raise IllFormedMorphism("image escapes the target")
    if not phi.is_homomorphism():
        raise IllFormedMorphism("map is not a homomorphism")


class _Positions:
    """Cached index -> position maps for subgroups."""

    def __init__(self):
        self._cache: dict[int, dict[int, int]] = {}

    def __call__(self, A: Subgroup) -> dict[int, int]:
        pos = self._cache.get(A.mask)
        if pos is None:
            pos = {x: k for k, x in enumerate(A.indices)}
            self._cache[A.mask] = pos
        return pos


def generated_subsystem(X: GroupLike, seed: Iterable[GroupHom], p: int | None = None) -> FusionSystem:
    """Smallest family over P containing the P-inner maps and ``seed``.

    Closed under composition, restriction, inverses of isomorphisms and
    iso-plus-inclusion factorization.  The result need not be saturated.
    """
    P = as_subgroup(X)
    p = _infer_p(P, p)
    subs = all_subgroups(P)
    by_mask = {A.mask: A for A in subs}
    below = {A: [B for B in subs if B <= A and B != A] for A in subs}
    position = _Positions()

    isos: dict[Subgroup, set[Images]] = {A: set() for A in subs}
    into: dict[Subgroup, set[tuple[Subgroup, Images]]] = {A: set() for A in subs}
    queue: list[tuple[Subgroup, Images]] = []

    def add(A: Subgroup, img: Images):
        if img in isos[A]:
            return
        isos[A].add(img)
        into[by_mask[_mask_of(img)]].add((A, img))
        queue.append((A, img))

    for A, maps in inner_fusion(P, p, subs).isos.items():
        for img in maps:
            add(A, img)
    for phi in seed:
        _validate_morphism(P, phi)
        add(by_mask[phi.source.mask], tuple(phi.images))

    while queue:
        A, img = queue.pop()
        C = by_mask[_mask_of(img)]
        posC = position(C)
        # inverse
        inv = [0] * len(img)
        for x, y in zip(A.indices, img):
            inv[posC[y]] = x
        add(C, tuple(inv))
        # restrictions
        posA = position(A)
        for B in below[A]:
            add(B, tuple(img[posA[x]] for x in B.indices))
        # composites psi o phi and phi o chi
        for psi in list(isos[C]):
            add(A, tuple(psi[posC[y]] for y in img))
        for D, chi in list(into[A]):
            add(D, tuple(img[posA[y]] for y in chi))

    return FusionSystem(P, p, isos, subs)


# ----------------------------------------------------------------------
# nilpotency and strong closure
# ----------------------------------------------------------------------

def is_nilpotent(F: FusionSystem) -> bool:
    """F = F_P(P)."""
    return F.same_homs(inner_fusion(F.P, F.p, F.subgroups))


def frobenius_criterion(X: GroupLike, P: Subgroup, p: int, subgroups: Sequence[Subgroup] | None = None) -> bool:
    """|N_G(Q)| / |C_G(Q)| is a power of p for every Q <= P."""
    G = as_subgroup(X)
    if not is_sylow(P, G, p):
        raise NotSylowError("P is not a Sylow subgroup")
    for Q in subgroups or all_subgroups(P):
        if not is_p_power(normalizer(G, Q).order // centralizer(G, Q).order, p):
            return False
    return True


@dataclass(frozen=True)
class StrongClosureWitness:
    morphism: FusionMorphism
    element: int
    image: int


def strong_closure_witness_F(F: FusionSystem, Q: Subgroup) -> StrongClosureWitness | None:
    """First morphism moving an element of Q outside Q, or None."""
    if not Q <= F.P:
        raise ForeignElementError("Q is not contained in P")
    qm = Q.mask
    for A in F.subgroups:
        pos = [k for k, x in enumerate(A.indices) if (qm >> x) & 1]
        if not pos:
            continue
        for img in sorted(F.isos[A]):
            for k in pos:
                if not (qm >> img[k]) & 1:
                    return StrongClosureWitness(
                        FusionMorphism(A, F.by_mask[_mask_of(img)], img), A.indices[k], img[k]
                    )
    return None


def is_strongly_closed_F(F: FusionSystem, Q: Subgroup) -> bool:
    return strong_closure_witness_F(F, Q) is None


# ----------------------------------------------------------------------
# normalizer-type subsystems
# ----------------------------------------------------------------------

def aut_P(P: Subgroup, Q: Subgroup) -> frozenset[Images]:
    """Aut_P(Q) = {c_x restricted to Q : x in N_P(Q)}."""
    U = Q.parent
    N = normalizer(P, Q)
    rows = np.unique(U.conj[np.ix_(N.arr, Q.arr)], axis=0)
    return frozenset(tuple(int(v) for v in r) for r in rows)


def _check_closed(K: frozenset[Images], Q: Subgroup) -> None:
    pos = {x: k for k, x in enumerate(Q.indices)}
    ident = tuple(Q.indices)
    if ident not in K:
        raise ValueError("K does not contain the identity of Q")
    for a in K:
        for b in K:
            if tuple(b[pos[y]] for y in a) not in K:
                raise ValueError("K is not closed under composition")


def k_normalizer_subsystem(F: FusionSystem, Q: Subgroup, K: Iterable | None = None) -> FusionSystem:
    """N_F^K(Q) for K a subgroup of Aut(Q); K=None means all of Aut(Q).

    Base: {x in N_P(Q) : c_x|Q in K}.  A map phi: A -> B is kept when some
    phi_bar in Hom_F(QA, QB) restricts to phi on A, maps Q onto Q, and acts
    on Q by an element of K.
    """
    if not Q <= F.P:
        raise ForeignElementError("Q is not contained in P")
    Q = F.canonical(Q)
    U = F.universe
    if K is not None:
        K = frozenset(tuple(k.images) if isinstance(k, GroupHom) else tuple(k) for k in K)
        _check_closed(K, Q)

    NPQ = normalizer(F.P, Q)
    if K is None:
        base = NPQ
    else:
        keep = np.zeros(U.order, dtype=np.bool_)
        for x in NPQ.indices:
            if tuple(int(v) for v in U.conj[x, Q.arr]) in K:
                keep[x] = True
        base = subgroup_from_members(U, keep)
    base = F.canonical(base)
    subs = [A for A in F.subgroups if A <= base]
    qm = Q.mask

    isos: dict[Subgroup, set[Images]] = {}
    for A in subs:
        QA = F.canonical(join(Q, A))
        pos = {x: k for k, x in enumerate(QA.indices)}
        qpos = [pos[x] for x in Q.indices]
        apos = [pos[x] for x in A.indices]
        keep_maps = set()
        for ext in F.isos[QA]:
            if _mask_of(ext[k] for k in qpos) != qm:
                continue
            if K is not None and tuple(ext[k] for k in qpos) not in K:
                continue
            img = tuple(ext[k] for k in apos)
            # phi(A) <= B <= base; phi_bar(QA) = Q phi(A) <= QB then holds
            if _mask_of(img) & ~base.mask:
                continue
            keep_maps.add(img)
        isos[A] = keep_maps
    return FusionSystem(base, F.p, isos, subs)


def normalizer_subsystem(F: FusionSystem, Q: Subgroup) -> FusionSystem:
    """N_F(Q)."""
    return k_normalizer_subsystem(F, Q, None)


def centralizer_subsystem(F: FusionSystem, Q: Subgroup) -> FusionSystem:
    """C_F(Q): extensions act trivially on Q."""
    Q = F.canonical(Q)
    return k_normalizer_subsystem(F, Q, [tuple(Q.indices)])


def p_centralizer_subsystem(F: FusionSystem, Q: Subgroup) -> FusionSystem:
    """PC_F(Q) = N_F^K(Q) with K = Aut_P(Q)."""
    Q = F.canonical(Q)
    return k_normalizer_subsystem(F, Q, aut_P(F.P, Q))


# ----------------------------------------------------------------------
# saturation
# ----------------------------------------------------------------------

def conjugacy_classes_of_subgroups(F: FusionSystem) -> list[list[Subgroup]]:
    seen: set[int] = set()
    out = []
    for Q in F.subgroups:
        if Q.mask in seen:
            continue
        cls = F.conjugates(Q)
        seen.update(C.mask for C in cls)
        out.append(cls)
    return out


def is_fully_automized(F: FusionSystem, Q: Subgroup) -> bool:
    autF = F.aut(Q)
    autP = aut_P(F.P, Q)
    return autP <= autF and len(autP) == p_part(len(autF), F.p)


def is_receptive(F: FusionSystem, Q: Subgroup) -> bool:
    """Every F-isomorphism phi: Q' -> Q extends to N_phi."""
    U = F.universe
    Q = F.canonical(Q)
    autP = aut_P(F.P, Q)
    for Qp in F.conjugates(Q):
        NQp = normalizer(F.P, Qp)
        posQp = {x: k for k, x in enumerate(Qp.indices)}
        for phi in F.isos_between(Qp, Q):
            # phi c_g phi^-1 on Q, written against Q.indices
            back = {y: x for x, y in zip(Qp.indices, phi)}
            keep = np.zeros(U.order, dtype=np.bool_)
            for g in NQp.indices:
                conj_g = U.conj[g]
                m = tuple(phi[posQp[int(conj_g[back[y]])]] for y in Q.indices)
                if m in autP:
                    keep[g] = True
            N_phi = F.canonical(subgroup_from_members(U, keep))
            pos = {x: k for k, x in enumerate(N_phi.indices)}
            sel = [pos[x] for x in Qp.indices]
            if not any(tuple(ext[k] for k in sel) == phi for ext in F.isos[N_phi]):
                return False
    return True


def saturation_witness(F: FusionSystem) -> list[Subgroup] | None:
    """An F-conjugacy class with no fully automized receptive member, or None."""
    for cls in conjugacy_classes_of_subgroups(F):
        if not any(is_fully_automized(F, Q) and is_receptive(F, Q) for Q in cls):
            return cls
    return None


def is_saturated(F: FusionSystem) -> bool:
    return saturation_witness(F) is None


# ----------------------------------------------------------------------
# O_p(F), centric subgroups, focal subgroup
# ----------------------------------------------------------------------

def is_normal_in_F(F: FusionSystem, Q: Subgroup) -> bool:
    Q = F.canonical(Q)
    if not is_normal(Q, F.P) or not is_strongly_closed_F(F, Q):
        return False
    return normalizer_subsystem(F, Q).same_homs(F)


def o_p_of_F(F: FusionSystem) -> Subgroup:
    """Largest subgroup of P normal in F."""
    normal = [Q for Q in reversed(F.subgroups) if is_normal_in_F(F, Q)]
    masks = {Q.mask for Q in normal}
    for a in normal:
        for b in normal:
            if join(a, b).mask not in masks:
                raise AssertionError("F-normal subgroups are not closed under join")
    top = normal[0]
    assert all(Q <= top for Q in normal)
    return top


def is_fully_normalized(F: FusionSystem, Q: Subgroup) -> bool:
    n = normalizer(F.P, Q).order
    return all(normalizer(F.P, R).order <= n for R in F.conjugates(Q))


def is_centric_check(F: FusionSystem, Q: Subgroup) -> bool:
    """C_P(Q') <= Q' for every F-conjugate Q' of Q."""
    return all(centralizer(F.P, R) <= R for R in F.conjugates(Q))


def focal_subgroup(F: FusionSystem) -> Subgroup:
    """<x^-1 phi(x) : phi a morphism of F, x in its source>."""
    U = F.universe
    gens = set()
    for A, maps in F.isos.items():
        for img in maps:
            for x, y in zip(A.indices, img):
                gens.add(int(U.table[U.inv[x], y]))
    return F.canonical(closure_in(U, sorted(gens)))


# ----------------------------------------------------------------------
# axiom scan
# ----------------------------------------------------------------------

def fusion_axiom_violations(F: FusionSystem) -> list[str]:
    """Check P-inner containment and closure under restriction, inverse and composition."""
    problems = []
    inner = inner_fusion(F.P, F.p, F.subgroups)
    for A in F.subgroups:
        if not inner.isos[A] <= F.isos[A]:
            problems.append(f"inner maps missing at subgroup of order {A.order}")
    below = {A: [B for B in F.subgroups if B <= A] for A in F.subgroups}
    for A in F.subgroups:
        posA = {x: k for k, x in enumerate(A.indices)}
        for img in F.isos[A]:
            C = F.by_mask[_mask_of(img)] if _mask_of(img) in F.by_mask else None
            if C is None:
                problems.append("image of a morphism is not a subgroup of P")
                continue
            posC = {y: k for k, y in enumerate(C.indices)}
            inv = [0] * len(img)
            for x, y in zip(A.indices, img):
                inv[posC[y]] = x
            if tuple(inv) not in F.isos[C]:
                problems.append("inverse missing")
            for B in below[A]:
                if tuple(img[posA[x]] for x in B.indices) not in F.isos[B]:
                    problems.append("restriction missing")
            for psi in F.isos[C]:
                if tuple(psi[posC[y]] for y in img) not in F.isos[A]:
                    problems.append("composite missing")
    return problems
