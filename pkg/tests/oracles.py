"""Brute-force reference computations.

These use only Permutation arithmetic and Python sets, never the Cayley
tables or kernels the engine runs on.
"""
from __future__ import annotations

import itertools

from fusionlab.permcore import Permutation


def closure(gens, degree) -> frozenset:
    ident = Permutation.identity(degree)
    seen = {ident}
    todo = [ident]
    while todo:
        x = todo.pop()
        for g in gens:
            y = x * g
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(seen)


def is_subgroup(subset, degree) -> bool:
    s = set(subset)
    if Permutation.identity(degree) not in s:
        return False
    return all(a * b in s for a in s for b in s)


def subgroups_by_subsets(elements, degree) -> set[frozenset]:
    """Every subset that is closed under multiplication (tiny groups only)."""
    out = set()
    els = list(elements)
    for r in range(1, len(els) + 1):
        for combo in itertools.combinations(els, r):
            if is_subgroup(combo, degree):
                out.add(frozenset(combo))
    return out


def subgroups_by_generating_sets(elements, degree, k) -> set[frozenset]:
    """Closures of all subsets of size <= k."""
    els = sorted(elements)
    out = {frozenset([Permutation.identity(degree)])}
    for r in range(1, k + 1):
        for combo in itertools.combinations(els, r):
            out.add(closure(combo, degree))
    return out


def conj(x, g):
    return g.inverse() * x * g


def class_scan(G, x) -> frozenset:
    return frozenset(conj(x, g) for g in G)


def centralizer_scan(G, S) -> frozenset:
    return frozenset(g for g in G if all(g * s == s * g for s in S))


def normalizer_scan(G, H) -> frozenset:
    H = frozenset(H)
    return frozenset(g for g in G if frozenset(conj(h, g) for h in H) == H)


def p_part(n, p):
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def p_nilpotent_by_normal_complement(G, degree, p, subgroups) -> bool:
    """G has a normal subgroup of order |G| / |G|_p."""
    G = frozenset(G)
    want = len(G) // p_part(len(G), p)
    for H in subgroups:
        if len(H) == want and normalizer_scan(G, H) == G:
            return True
    return False


def transporter_homs(G, A, B) -> set[frozenset]:
    """{c_g restricted to A : A^g <= B} as frozensets of (x, x^g) pairs."""
    B = frozenset(B)
    out = set()
    for g in G:
        m = frozenset((a, conj(a, g)) for a in A)
        if all(y in B for _, y in m):
            out.add(m)
    return out


def strongly_closed_scan(G, P, Q) -> bool:
    P = frozenset(P)
    Q = frozenset(Q)
    return all(conj(x, g) in Q for x in Q for g in G if conj(x, g) in P)


def maximal_intersection(subgroups, whole) -> frozenset:
    whole = frozenset(whole)
    proper = [H for H in subgroups if H != whole]
    maxes = [H for H in proper if not any(H < K for K in proper)]
    out = whole
    for M in maxes:
        out &= M
    return out


def is_abelian(H) -> bool:
    return all(a * b == b * a for a in H for b in H)
