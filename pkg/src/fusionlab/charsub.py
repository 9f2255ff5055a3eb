"""Thompson subgroup, its center, and strongly closed subgroups of a Sylow.

J(P) is taken to be the subgroup generated by the abelian subgroups of P
of maximal order (not maximal rank, not elementary abelian).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPGroupError, NotSylowError
from .permcore import (
    GroupLike,
    Subgroup,
    all_subgroups,
    as_subgroup,
    center,
    is_abelian,
    is_sylow,
    join,
    prime_divisors,
)


def _require_p_group(P: Subgroup) -> None:
    if len(prime_divisors(P.order)) > 1:
        raise NotPGroupError(f"order {P.order} is not a prime power")


@dataclass(frozen=True)
class CharSubReport:
    base: Subgroup
    thompson: Subgroup
    z_of_j: Subgroup
    witness_abelians: tuple[Subgroup, ...]


def abelian_subgroups_max_order(X: GroupLike, subgroups: list[Subgroup] | None = None) -> list[Subgroup]:
    P = as_subgroup(X)
    _require_p_group(P)
    if is_abelian(P):
        return [P]
    abelians = [A for A in (subgroups or all_subgroups(P)) if is_abelian(A)]
    top = max(A.order for A in abelians)
    return [A for A in abelians if A.order == top]


def thompson_J(X: GroupLike, subgroups: list[Subgroup] | None = None) -> Subgroup:
    return join(*abelian_subgroups_max_order(X, subgroups))


def ZJ(X: GroupLike, subgroups: list[Subgroup] | None = None) -> Subgroup:
    return center(thompson_J(X, subgroups))


def char_sub_report(X: GroupLike) -> CharSubReport:
    P = as_subgroup(X)
    abelians = abelian_subgroups_max_order(P)
    J = join(*abelians)
    return CharSubReport(P, J, center(J), tuple(abelians))


def fused_in(X: GroupLike, P: Subgroup) -> dict[int, int]:
    """For each x in P, the bitmask of its G-conjugates that lie in P."""
    G = as_subgroup(X)
    U = G.parent
    pm = P.bool_mask
    out = {}
    for x in P.indices:
        imgs = np.unique(U.conj[G.arr, x])
        bits = 0
        for y in imgs[pm[imgs]]:
            bits |= 1 << int(y)
        out[x] = bits
    return out


def enumerate_strongly_closed(
    X: GroupLike, P: Subgroup, subgroups: list[Subgroup] | None = None
) -> list[Subgroup]:
    """All Q <= P strongly closed in P with respect to G, in canonical order."""
    G = as_subgroup(X)
    ps = prime_divisors(P.order)
    if len(ps) > 1 or (ps and not is_sylow(P, G, ps[0])) or (not ps and G.order > 1 and P.order != 1):
        raise NotSylowError("P is not a Sylow subgroup of G")
    if not ps:
        return [P]
    fused = fused_in(G, P)
    out = []
    for Q in subgroups or all_subgroups(P):
        reach = 0
        for x in Q.indices:
            reach |= fused[x]
        if reach & ~Q.mask == 0:
            out.append(Q)
    return out
