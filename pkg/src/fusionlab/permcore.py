"""Finite permutation groups with fully materialized element sets.

Conventions
-----------
* Permutations act on the right: ``(x * y)(i) == y(x(i))``.
* Conjugation is ``x ** g == g**-1 * x * g``.
* Elements of a :class:`PermGroup` are stored in lexicographic order of
  their image sequences, and a :class:`Subgroup` is a sorted tuple of
  indices into its parent's element list.  Because the parent order is
  lexicographic, comparing sorted index tuples is the same as comparing
  sorted element lists, which gives the canonical subgroup order
  ``(order, elements)`` for free.

All computations on subgroups of one ambient group stay in that group's
index space; the ambient group is called the *universe* below.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

from ._kernels import kernels
from .errors import (
    CycleParseError,
    EngineInconsistency,
    ForeignElementError,
    GroupTooLarge,
)

DEFAULT_ORDER_CAP = 1000
DEFAULT_SUBGROUP_CAP = 400


# ----------------------------------------------------------------------
# number theory helpers
# ----------------------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, math.isqrt(n) + 1))


def prime_divisors(n: int) -> list[int]:
    return [q for q in range(2, n + 1) if n % q == 0 and is_prime(q)]


def p_part(n: int, p: int) -> int:
    """Largest power of p dividing n."""
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def is_p_power(n: int, p: int) -> bool:
    return p_part(n, p) == n


# ----------------------------------------------------------------------
# Permutation
# ----------------------------------------------------------------------

class Permutation:
    """A bijection of {0, ..., degree-1}, stored as its image tuple."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Sequence[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> "Permutation":
        """Parse 1-based cycle notation such as ``"(1 2 3)(4 5)"``; ``"()"`` is the identity.

        Cycles are composed left to right.
        """
        images = list(range(degree))
        pos = 0
        n = len(text)
        while pos < n:
            ch = text[pos]
            if ch.isspace():
                pos += 1
                continue
            if ch != "(":
                raise CycleParseError("expected '('", text, pos + 1)
            close = text.find(")", pos)
            nested = text.find("(", pos + 1)
            if close < 0 or (0 <= nested < close):
                raise CycleParseError("unclosed cycle", text, pos + 1)
            body = text[pos + 1:close]
            points = []
            for m in re.finditer(r"[^\s,]+", body):
                tok = m.group()
                col = pos + 2 + m.start()
                if not tok.isdigit():
                    raise CycleParseError(f"bad point {tok!r}", text, col)
                pt = int(tok)
                if not 1 <= pt <= degree:
                    raise CycleParseError(f"point {pt} outside 1..{degree}", text, col)
                if pt - 1 in points:
                    raise CycleParseError(f"point {pt} repeated in cycle", text, col)
                points.append(pt - 1)
            if points:
                cyc = list(range(degree))
                for a, b in zip(points, points[1:] + points[:1]):
                    cyc[a] = b
                images = [cyc[i] for i in images]
            pos = close + 1
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        o = other.images
        return Permutation(tuple(o[i] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def __pow__(self, k):
        if isinstance(k, Permutation):
            return k.inverse() * self * k
        if k < 0:
            return self.inverse() ** (-k)
        out = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    @property
    def order(self) -> int:
        out = 1
        for c in self.cycles():
            out = math.lcm(out, len(c))
        return out

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 0-based, each starting at its smallest point."""
        seen = set()
        out = []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cyc)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Permutation({self.cycle_string()!r}, degree={self.degree})"

    def __str__(self):
        return self.cycle_string()


# ----------------------------------------------------------------------
# Schreier-Sims order (independent of element materialization)
# ----------------------------------------------------------------------

def stabilizer_chain_order(generators: Sequence[Permutation], degree: int) -> int:
    """Group order as the product of basic orbit lengths of a stabilizer chain.

    Deterministic Schreier-Sims; works from the generators alone.
    """
    ident = Permutation.identity(degree)
    strong = [g for g in generators if not g.is_identity()]
    base: list[int] = []

    def extend_base(g):
        if all(g(b) == b for b in base):
            base.append(next(i for i in range(degree) if g(i) != i))

    for g in strong:
        extend_base(g)

    def build_levels():
        levels = []
        for k, b in enumerate(base):
            gens_k = [s for s in strong if all(s(c) == c for c in base[:k])]
            trans = {b: ident}
            queue = [b]
            for beta in queue:
                for s in gens_k:
                    gamma = s(beta)
                    if gamma not in trans:
                        trans[gamma] = trans[beta] * s
                        queue.append(gamma)
            levels.append((b, gens_k, trans))
        return levels

    def sift(g, levels, start):
        for b, _, trans in levels[start:]:
            beta = g(b)
            if beta not in trans:
                return g
            g = g * trans[beta].inverse()
        return g

    while True:
        levels = build_levels()
        residue = None
        for k, (b, gens_k, trans) in enumerate(levels):
            for beta, u in trans.items():
                for s in gens_k:
                    sch = u * s * trans[s(beta)].inverse()
                    h = sift(sch, levels, k + 1)
                    if not h.is_identity():
                        residue = h
                        break
                if residue is not None:
                    break
            if residue is not None:
                break
        if residue is None:
            return math.prod(len(t) for _, _, t in levels)
        strong.append(residue)
        extend_base(residue)


# ----------------------------------------------------------------------
# groups and subgroups
# ----------------------------------------------------------------------

class PermGroup:
    """A finite permutation group with its element set materialized.

    Build one with :func:`group_closure`; the constructor trusts its input.
    Index-level data (Cayley table, inverses, conjugation table, element
    orders) is computed lazily by the array kernels.
    """

    def __init__(self, degree: int, generators: Sequence[Permutation], elements: Sequence[Permutation]):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self.order = len(self.elements)

    @cached_property
    def index(self) -> dict[Permutation, int]:
        return {x: i for i, x in enumerate(self.elements)}

    @cached_property
    def images(self) -> np.ndarray:
        arr = np.array([x.images for x in self.elements], dtype=np.int32)
        return arr.reshape(self.order, self.degree)

    @cached_property
    def table(self) -> np.ndarray:
        return kernels.multiplication_table(self.images)

    @cached_property
    def identity_index(self) -> int:
        return self.index[Permutation.identity(self.degree)]

    @cached_property
    def inv(self) -> np.ndarray:
        return kernels.inverses(self.table, self.identity_index)

    @cached_property
    def conj(self) -> np.ndarray:
        """``conj[g, x]`` is the index of ``x ** g``."""
        return kernels.conjugation_table(self.table, self.inv)

    @cached_property
    def element_orders(self) -> np.ndarray:
        return kernels.element_orders(self.table, self.identity_index)

    @cached_property
    def stabilizer_order(self) -> int:
        return stabilizer_chain_order(self.generators, self.degree)

    def whole(self) -> "Subgroup":
        return self._whole

    @cached_property
    def _whole(self) -> "Subgroup":
        gens = tuple(sorted({self.index[g] for g in self.generators} - {self.identity_index}))
        return Subgroup(self, range(self.order), gens)

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (self.identity_index,), ())

    def to_index(self, x: Union[Permutation, int]) -> int:
        if isinstance(x, Permutation):
            try:
                return self.index[x]
            except KeyError:
                raise ForeignElementError(f"{x} is not an element of the group") from None
        x = int(x)
        if not 0 <= x < self.order:
            raise ForeignElementError(f"index {x} out of range")
        return x

    def __contains__(self, x) -> bool:
        return x in self.index

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        gens = ", ".join(g.cycle_string() for g in self.generators)
        return f"<PermGroup degree={self.degree} order={self.order} gens=[{gens}]>"


class Subgroup:
    """A subgroup of a materialized :class:`PermGroup` (the parent).

    Identity is the element set: two Subgroup objects with the same parent
    and the same indices are equal and hash alike.  ``gens`` is some
    generating set (indices), used to seed closures.
    """

    __slots__ = ("parent", "indices", "mask", "gens", "_group", "_arr", "_bool")

    def __init__(self, parent: PermGroup, indices: Iterable[int], gens: Iterable[int] = ()):
        self.parent = parent
        self.indices = tuple(sorted(int(i) for i in indices))
        m = 0
        for i in self.indices:
            m |= 1 << i
        self.mask = m
        self.gens = tuple(int(g) for g in gens)
        self._group = None
        self._arr = None
        self._bool = None

    @classmethod
    def _from_bool(cls, parent: PermGroup, flags: np.ndarray, gens=()) -> "Subgroup":
        sub = cls(parent, np.flatnonzero(flags).tolist(), gens)
        sub._bool = flags
        return sub

    @property
    def order(self) -> int:
        return len(self.indices)

    @property
    def arr(self) -> np.ndarray:
        if self._arr is None:
            self._arr = np.array(self.indices, dtype=np.int32)
        return self._arr

    @property
    def bool_mask(self) -> np.ndarray:
        if self._bool is None:
            flags = np.zeros(self.parent.order, dtype=np.bool_)
            flags[list(self.indices)] = True
            self._bool = flags
        return self._bool

    @property
    def elements(self) -> tuple[Permutation, ...]:
        els = self.parent.elements
        return tuple(els[i] for i in self.indices)

    @property
    def generators(self) -> tuple[Permutation, ...]:
        els = self.parent.elements
        return tuple(els[i] for i in self.gens)

    @property
    def group(self) -> PermGroup:
        """This subgroup as a standalone PermGroup."""
        if self._group is None:
            self._group = PermGroup(self.parent.degree, self.generators, self.elements)
        return self._group

    def sort_key(self):
        return (self.order, self.indices)

    def is_trivial(self) -> bool:
        return self.order == 1

    def __le__(self, other: "Subgroup") -> bool:
        _same_universe(self, other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "Subgroup") -> bool:
        return self <= other and self.mask != other.mask

    def __contains__(self, x) -> bool:
        if isinstance(x, Permutation):
            i = self.parent.index.get(x)
            return i is not None and (self.mask >> i) & 1 == 1
        return (self.mask >> int(x)) & 1 == 1

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.parent is other.parent and self.mask == other.mask

    def __hash__(self):
        return hash(self.mask)

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        gens = ", ".join(g.cycle_string() for g in self.generators) or "()"
        return f"<Subgroup order={self.order} of {self.parent.order} gens=[{gens}]>"


GroupLike = Union[PermGroup, Subgroup]


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism between two subgroups of one universe.

    ``images[k]`` is the index of the image of ``source.indices[k]``.
    """

    source: Subgroup
    target: Subgroup
    images: tuple[int, ...]

    def __call__(self, x):
        U = self.source.parent
        i = U.to_index(x)
        k = self.source.indices.index(i)
        out = self.images[k]
        return U.elements[out] if isinstance(x, Permutation) else out

    @property
    def map(self) -> dict[Permutation, Permutation]:
        els = self.source.parent.elements
        return {els[a]: els[b] for a, b in zip(self.source.indices, self.images)}

    def is_homomorphism(self) -> bool:
        U = self.source.parent
        table = U.table
        pos = dict(zip(self.source.indices, self.images))
        for a, fa in pos.items():
            for b, fb in pos.items():
                if pos[int(table[a, b])] != table[fa, fb]:
                    return False
        return True


def as_subgroup(X: GroupLike) -> Subgroup:
    if isinstance(X, Subgroup):
        return X
    if isinstance(X, PermGroup):
        return X.whole()
    raise TypeError(f"expected PermGroup or Subgroup, got {type(X).__name__}")


def _same_universe(*subs: Subgroup) -> PermGroup:
    U = subs[0].parent
    for s in subs[1:]:
        if s.parent is not U:
            raise ForeignElementError("subgroups live in different ambient groups")
    return U


def _require_inside(inner: Subgroup, outer: Subgroup, what: str = "subgroup"):
    _same_universe(inner, outer)
    if inner.mask & ~outer.mask:
        raise ForeignElementError(f"{what} is not contained in the ambient subgroup")


# ----------------------------------------------------------------------
# closure
# ----------------------------------------------------------------------

def group_closure(
    generators: Sequence[Permutation], degree: int, cap: int | None = DEFAULT_ORDER_CAP
) -> PermGroup:
    """The group generated by ``generators``, fully materialized.

    Raises ValueError on a degree mismatch and GroupTooLarge once more than
    ``cap`` elements have been produced.  The element count is cross-checked
    against a Schreier-Sims stabilizer chain.
    """
    generators = list(generators)
    for g in generators:
        if g.degree != degree:
            raise ValueError(f"generator {g} has degree {g.degree}, expected {degree}")
    ident = Permutation.identity(degree)
    gens = [g for g in dict.fromkeys(generators) if g != ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if cap is not None and len(seen) > cap:
                        raise GroupTooLarge(len(seen), cap)
        frontier = nxt
    G = PermGroup(degree, generators, sorted(seen))
    if G.stabilizer_order != G.order:
        raise EngineInconsistency(
            f"closure produced {G.order} elements, stabilizer chain says {G.stabilizer_order}"
        )
    return G


def closure_in(U: PermGroup, gens: Iterable[int]) -> Subgroup:
    """Subgroup of U generated by the given element indices."""
    gens = tuple(dict.fromkeys(int(g) for g in gens if int(g) != U.identity_index))
    flags = kernels.closure(U.table, np.array(gens, dtype=np.int32), U.identity_index)
    return Subgroup._from_bool(U, flags, gens)


def subgroup_from_members(U: PermGroup, members: Iterable[int] | np.ndarray) -> Subgroup:
    """Wrap a set of indices known to be a subgroup, choosing a small generating set."""
    if isinstance(members, np.ndarray) and members.dtype == np.bool_:
        flags = members
    else:
        flags = np.zeros(U.order, dtype=np.bool_)
        flags[list(members)] = True
    todo = np.flatnonzero(flags)
    gens: list[int] = []
    cur = np.zeros(U.order, dtype=np.bool_)
    cur[U.identity_index] = True
    # largest element orders first keeps the generating set short
    orders = U.element_orders[todo]
    for x in todo[np.argsort(-orders, kind="stable")]:
        if not cur[x]:
            gens.append(int(x))
            cur = kernels.closure(U.table, np.array(gens, dtype=np.int32), U.identity_index)
    if not np.array_equal(cur, flags):
        raise EngineInconsistency("member set is not a subgroup")
    return Subgroup._from_bool(U, flags, gens)


def join(*subs: Subgroup) -> Subgroup:
    U = _same_universe(*subs)
    gens = [g for s in subs for g in s.gens]
    return closure_in(U, gens)


def intersection(*subs: Subgroup) -> Subgroup:
    U = _same_universe(*subs)
    flags = subs[0].bool_mask.copy()
    for s in subs[1:]:
        flags &= s.bool_mask
    return subgroup_from_members(U, flags)


def is_abelian(X: GroupLike) -> bool:
    H = as_subgroup(X)
    U = H.parent
    a = H.arr
    return bool(kernels.centralizing(U.table, a)[a].all())


def is_p_group(X: GroupLike, p: int) -> bool:
    return is_p_power(as_subgroup(X).order, p)


def is_normal(H: Subgroup, X: GroupLike) -> bool:
    G = as_subgroup(X)
    _require_inside(H, G)
    U = G.parent
    ok = kernels.transporter(U.conj, H.arr, H.bool_mask)
    return bool(ok[G.arr].all())


def derived_subgroup(X: GroupLike) -> Subgroup:
    G = as_subgroup(X)
    U = G.parent
    a = G.arr
    # [x, y] = x^-1 y^-1 x y
    t = U.table
    inv = U.inv
    comm = t[t[inv[a][:, None], inv[a][None, :]], t[a[:, None], a[None, :]]]
    return closure_in(U, np.unique(comm))


# ----------------------------------------------------------------------
# subgroup enumeration
# ----------------------------------------------------------------------

def cyclic_subgroups(X: GroupLike) -> list[Subgroup]:
    G = as_subgroup(X)
    U = G.parent
    seen: dict[int, Subgroup] = {}
    for x in G.indices:
        if x == U.identity_index:
            continue
        C = closure_in(U, (x,))
        seen.setdefault(C.mask, C)
    return sorted(seen.values(), key=Subgroup.sort_key)


def all_subgroups(X: GroupLike, cap: int | None = DEFAULT_SUBGROUP_CAP) -> list[Subgroup]:
    """Every subgroup of X exactly once, in canonical order.

    Cyclic extension: begin with the cyclic subgroups and keep joining each
    new subgroup with every cyclic subgroup it does not contain.
    """
    G = as_subgroup(X)
    if cap is not None and G.order > cap:
        raise GroupTooLarge(G.order, cap, "group for subgroup enumeration")
    U = G.parent
    cyclics = cyclic_subgroups(G)
    trivial = U.trivial()
    known: dict[int, Subgroup] = {trivial.mask: trivial}
    frontier = []
    for C in cyclics:
        known[C.mask] = C
        frontier.append(C)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclics:
                if C.mask & ~H.mask == 0:
                    continue
                K = closure_in(U, H.gens + C.gens)
                if K.mask not in known:
                    known[K.mask] = K
                    nxt.append(K)
        frontier = nxt
    return sorted(known.values(), key=Subgroup.sort_key)


def maximal_subgroups(X: GroupLike, subgroups: list[Subgroup] | None = None) -> list[Subgroup]:
    G = as_subgroup(X)
    subs = [H for H in (subgroups or all_subgroups(G)) if H != G]
    return [H for H in subs if not any(H < K for K in subs)]


# ----------------------------------------------------------------------
# normalizers, centralizers, conjugacy
# ----------------------------------------------------------------------

def normalizer(X: GroupLike, H: Subgroup) -> Subgroup:
    """N_X(H) = {g in X : H^g = H}.  H must live in the same universe as X."""
    G = as_subgroup(X)
    U = _same_universe(G, H)
    ok = kernels.transporter(U.conj, H.arr, H.bool_mask) & G.bool_mask
    return subgroup_from_members(U, ok)


def _element_indices(U: PermGroup, S) -> np.ndarray:
    if isinstance(S, Subgroup):
        _same_universe(S, U.whole())
        return S.arr
    return np.array(sorted({U.to_index(s) for s in S}), dtype=np.int32)


def centralizer(X: GroupLike, S) -> Subgroup:
    """C_X(S) for S a Subgroup or an iterable of elements (Permutations or indices)."""
    G = as_subgroup(X)
    U = G.parent
    idx = _element_indices(U, S)
    if idx.size and not G.bool_mask[idx].all() and not isinstance(S, Subgroup):
        raise ForeignElementError("element set is not contained in the group")
    ok = kernels.centralizing(U.table, idx) & G.bool_mask
    return subgroup_from_members(U, ok)


def center(X: GroupLike) -> Subgroup:
    G = as_subgroup(X)
    return centralizer(G, G)


def conjugate_subgroup(H: Subgroup, g: int) -> Subgroup:
    U = H.parent
    imgs = U.conj[g, H.arr]
    return Subgroup(U, imgs.tolist(), U.conj[g, list(H.gens)].tolist() if H.gens else ())


def _class_indices(G: Subgroup, x: int) -> np.ndarray:
    U = G.parent
    return np.unique(U.conj[G.arr, x])


def conjugacy_class(X: GroupLike, x) -> frozenset:
    """{x^g : g in X}.  Returns Permutations (or indices if x was given as an index)."""
    G = as_subgroup(X)
    U = G.parent
    i = U.to_index(x)
    if i not in G:
        raise ForeignElementError(f"{x} is not in the group")
    cls = _class_indices(G, i)
    if isinstance(x, Permutation):
        return frozenset(U.elements[j] for j in cls)
    return frozenset(int(j) for j in cls)


def is_conjugate(X: GroupLike, x, y) -> bool:
    G = as_subgroup(X)
    U = G.parent
    j = U.to_index(y)
    if j not in G:
        raise ForeignElementError(f"{y} is not in the group")
    return j in conjugacy_class(G, U.to_index(x))


# ----------------------------------------------------------------------
# Sylow, Frattini, p-nilpotency, strong closure
# ----------------------------------------------------------------------

def sylow(X: GroupLike, p: int) -> Subgroup:
    """The canonically first Sylow p-subgroup of X.

    Grows a p-subgroup inside its normalizer until it reaches the full
    p-part of |X|, then returns the least conjugate in canonical order.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    G = as_subgroup(X)
    U = G.parent
    target = p_part(G.order, p)
    P = U.trivial()
    orders = U.element_orders
    while P.order < target:
        N = normalizer(G, P)
        grown = False
        for g in N.indices:
            if g in P:
                continue
            o = int(orders[g])
            m = o // p_part(o, p)
            h = g
            for _ in range(m - 1):
                h = int(U.table[h, g])
            if h in P:
                continue
            P = closure_in(U, P.gens + (h,))
            grown = True
            break
        if not grown:
            raise EngineInconsistency("p-subgroup below Sylow order could not be extended")
    best = P
    for g in G.indices:
        Q = conjugate_subgroup(P, g)
        if Q.indices < best.indices:
            best = Q
    return best


def is_sylow(P: Subgroup, X: GroupLike, p: int) -> bool:
    G = as_subgroup(X)
    return P <= G and P.order == p_part(G.order, p) and is_p_power(P.order, p)


def power_commutator_subgroup(X: GroupLike, p: int) -> Subgroup:
    """<[x, y], x^p : x, y in X>."""
    G = as_subgroup(X)
    U = G.parent
    D = derived_subgroup(G)
    pows = []
    for x in G.indices:
        y = x
        for _ in range(p - 1):
            y = int(U.table[y, x])
        pows.append(y)
    return closure_in(U, D.gens + tuple(pows))


def frattini(X: GroupLike, subgroups: list[Subgroup] | None = None) -> Subgroup:
    """Intersection of the maximal subgroups of X.

    For a p-group this is also computed as the subgroup generated by
    commutators and p-th powers; a disagreement raises EngineInconsistency.
    """
    G = as_subgroup(X)
    maxes = maximal_subgroups(G, subgroups)
    phi = intersection(*maxes) if maxes else G
    if G.order > 1:
        ps = prime_divisors(G.order)
        if len(ps) == 1:
            alt = power_commutator_subgroup(G, ps[0])
            if alt != phi:
                raise EngineInconsistency(
                    f"Frattini subgroup mismatch: maximal intersection has order {phi.order}, "
                    f"commutator/power subgroup has order {alt.order}"
                )
    return phi


def p_complement_candidates(X: GroupLike, p: int) -> np.ndarray:
    """Indices of the elements of X whose order is prime to p."""
    G = as_subgroup(X)
    orders = G.parent.element_orders[G.arr]
    return G.arr[orders % p != 0]


def is_p_nilpotent(X: GroupLike, p: int) -> bool:
    """True iff the p'-elements of X form a (necessarily normal) subgroup."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    G = as_subgroup(X)
    U = G.parent
    members = p_complement_candidates(G, p)
    flags = np.zeros(U.order, dtype=np.bool_)
    flags[members] = True
    closed = kernels.is_closed(U.table, members, flags)
    if closed and members.size != G.order // p_part(G.order, p):
        raise EngineInconsistency(
            f"p'-elements closed but number {members.size} != {G.order // p_part(G.order, p)}"
        )
    return closed


def is_strongly_closed_group(X: GroupLike, P: Subgroup, Q: Subgroup) -> bool:
    """Every G-conjugate of an element of Q that lies in P lies in Q."""
    return strong_closure_violation(X, P, Q) is None


def strong_closure_violation(X: GroupLike, P: Subgroup, Q: Subgroup):
    """First (x, g, x^g) with x in Q, x^g in P outside Q; None if Q is strongly closed."""
    G = as_subgroup(X)
    _require_inside(P, G, "P")
    _require_inside(Q, P, "Q")
    U = G.parent
    pm = P.bool_mask
    qm = Q.bool_mask
    for x in Q.indices:
        imgs = U.conj[G.arr, x]
        bad = pm[imgs] & ~qm[imgs]
        if bad.any():
            k = int(np.argmax(bad))
            return x, int(G.arr[k]), int(imgs[k])
    return None


# ----------------------------------------------------------------------
# automorphisms
# ----------------------------------------------------------------------

def _word_tree(G: Subgroup, gens: Sequence[int]):
    """BFS spanning tree: for each element other than 1, (parent, generator slot)."""
    U = G.parent
    tree = []
    seen = {U.identity_index}
    frontier = [U.identity_index]
    while frontier:
        nxt = []
        for x in frontier:
            for t, g in enumerate(gens):
                y = int(U.table[x, g])
                if y not in seen:
                    seen.add(y)
                    tree.append((y, x, t))
                    nxt.append(y)
        frontier = nxt
    return tree


def automorphism_group(X: GroupLike, cap: int | None = DEFAULT_SUBGROUP_CAP) -> list[GroupHom]:
    """All automorphisms of X, by brute force over generator images.

    Every candidate assignment of images (of matching element orders) is
    extended along a word tree and then validated on all pairs of elements.
    """
    Q = as_subgroup(X)
    if cap is not None and Q.order > cap:
        raise GroupTooLarge(Q.order, cap, "group for automorphism search")
    U = Q.parent
    if Q.order == 1:
        return [GroupHom(Q, Q, Q.indices)]
    gens = list(subgroup_from_members(U, Q.bool_mask).gens)
    tree = _word_tree(Q, gens)
    orders = U.element_orders
    choices = [[x for x in Q.indices if orders[x] == orders[g]] for g in gens]

    a = Q.arr
    pos = np.full(U.order, -1, dtype=np.int64)
    pos[a] = np.arange(a.size)
    local_table = pos[U.table[np.ix_(a, a)]]
    out = []

    def search(slot, chosen):
        if slot == len(gens):
            f = {U.identity_index: U.identity_index}
            for y, x, t in tree:
                f[y] = int(U.table[f[x], chosen[t]])
            img = np.array([f[x] for x in Q.indices], dtype=np.int64)
            if np.unique(img).size != a.size:
                return
            if not np.array_equal(img[local_table], U.table[np.ix_(img, img)]):
                return
            out.append(GroupHom(Q, Q, tuple(int(v) for v in img)))
            return
        for c in choices[slot]:
            chosen.append(c)
            search(slot + 1, chosen)
            chosen.pop()

    search(0, [])
    out.sort(key=lambda h: h.images)
    return out


def inner_automorphism(Q: Subgroup, g: int) -> GroupHom:
    """Conjugation x -> x^g restricted to Q (g must normalize Q)."""
    U = Q.parent
    imgs = tuple(int(v) for v in U.conj[g, Q.arr])
    return GroupHom(Q, Q, imgs)
