"""Array kernels behind the group engine.

Every group is handled through its Cayley table: elements are indexed
0..n-1 in lexicographic order of their image sequences and
``table[i, j]`` is the index of ``elements[i] * elements[j]`` (apply i
first, then j).

Each kernel has a numba ``@njit`` body and a pure-numpy twin. The numba
path is used when numba imports and ``FUSIONLAB_DISABLE_NUMBA`` is unset
(or "0"); the numpy path is always importable as ``numpy_kernels`` so the
two can be compared directly.
"""
from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

INDEX_DTYPE = np.int32

_HASH_WEIGHTS = np.random.default_rng(20240611).integers(
    1, 2**62, size=4096, dtype=np.int64
).astype(np.uint64)


# ----------------------------------------------------------------------
# numpy implementations
# ----------------------------------------------------------------------

def _row_codes(rows: np.ndarray) -> np.ndarray:
    d = rows.shape[-1]
    return (rows.astype(np.uint64) * _HASH_WEIGHTS[:d]).sum(axis=-1)


def np_multiplication_table(images: np.ndarray) -> np.ndarray:
    n, d = images.shape
    codes = _row_codes(images)
    order = np.argsort(codes, kind="stable")
    sorted_codes = codes[order]
    if n > 1 and np.any(sorted_codes[1:] == sorted_codes[:-1]):
        raise RuntimeError("hash collision among group elements")
    table = np.empty((n, n), dtype=INDEX_DTYPE)
    for i in range(n):
        # (x_i x_j)(k) = x_j(x_i(k))
        prod = images[:, images[i]]
        pos = np.searchsorted(sorted_codes, _row_codes(prod))
        pos = np.minimum(pos, n - 1)
        idx = order[pos]
        if not np.array_equal(images[idx], prod):
            raise ValueError("element set is not closed under multiplication")
        table[i] = idx
    return table


def np_inverses(table: np.ndarray, identity: int) -> np.ndarray:
    rows, cols = np.nonzero(table == identity)
    inv = np.empty(table.shape[0], dtype=INDEX_DTYPE)
    inv[rows] = cols
    return inv


def np_conjugation_table(table: np.ndarray, inv: np.ndarray) -> np.ndarray:
    # conj[g, x] = g^-1 x g
    n = table.shape[0]
    left = table[inv]
    return table[left, np.arange(n)[:, None]].astype(INDEX_DTYPE)


def np_closure(table: np.ndarray, gens: np.ndarray, identity: int) -> np.ndarray:
    n = table.shape[0]
    mask = np.zeros(n, dtype=np.bool_)
    mask[identity] = True
    if gens.size == 0:
        return mask
    frontier = np.array([identity], dtype=INDEX_DTYPE)
    while frontier.size:
        new = np.unique(table[np.ix_(frontier, gens)].ravel())
        new = new[~mask[new]]
        mask[new] = True
        frontier = new
    return mask


def np_element_orders(table: np.ndarray, identity: int) -> np.ndarray:
    n = table.shape[0]
    orders = np.zeros(n, dtype=np.int64)
    idx = np.arange(n)
    cur = idx.copy()
    k = 1
    while True:
        hit = (cur == identity) & (orders == 0)
        orders[hit] = k
        if np.all(orders):
            return orders
        cur = table[cur, idx]
        k += 1


def np_transporter(conj: np.ndarray, source: np.ndarray, target_mask: np.ndarray) -> np.ndarray:
    """Boolean over g: is source^g inside the target set."""
    if source.size == 0:
        return np.ones(conj.shape[0], dtype=np.bool_)
    return target_mask[conj[:, source]].all(axis=1)


def np_is_closed(table: np.ndarray, members: np.ndarray, mask: np.ndarray) -> bool:
    if members.size == 0:
        return True
    return bool(mask[table[np.ix_(members, members)]].all())


def np_centralizing(table: np.ndarray, elements: np.ndarray) -> np.ndarray:
    """Boolean over g: does g commute with every listed element."""
    if elements.size == 0:
        return np.ones(table.shape[0], dtype=np.bool_)
    return (table[:, elements] == table[elements, :].T).all(axis=1)


numpy_kernels = SimpleNamespace(
    name="numpy",
    multiplication_table=np_multiplication_table,
    inverses=np_inverses,
    conjugation_table=np_conjugation_table,
    closure=np_closure,
    element_orders=np_element_orders,
    transporter=np_transporter,
    is_closed=np_is_closed,
    centralizing=np_centralizing,
)


# ----------------------------------------------------------------------
# numba implementations
# ----------------------------------------------------------------------

def _build_numba_kernels():
    from numba import njit

    @njit(cache=True)
    def _lex_search(images, row):
        lo = 0
        hi = images.shape[0] - 1
        d = images.shape[1]
        while lo <= hi:
            mid = (lo + hi) // 2
            cmp = 0
            for k in range(d):
                a = images[mid, k]
                b = row[k]
                if a < b:
                    cmp = -1
                    break
                if a > b:
                    cmp = 1
                    break
            if cmp == 0:
                return mid
            if cmp < 0:
                lo = mid + 1
            else:
                hi = mid - 1
        return -1

    @njit(cache=True)
    def _multiplication_table(images):
        n, d = images.shape
        table = np.empty((n, n), dtype=np.int32)
        row = np.empty(d, dtype=images.dtype)
        for i in range(n):
            for j in range(n):
                for k in range(d):
                    row[k] = images[j, images[i, k]]
                pos = _lex_search(images, row)
                if pos < 0:
                    return table, False
                table[i, j] = pos
        return table, True

    def multiplication_table(images):
        # binary search needs lexicographically sorted rows
        table, ok = _multiplication_table(np.ascontiguousarray(images))
        if not ok:
            raise ValueError("element set is not closed under multiplication")
        return table

    @njit(cache=True)
    def inverses(table, identity):
        n = table.shape[0]
        inv = np.empty(n, dtype=np.int32)
        for i in range(n):
            for j in range(n):
                if table[i, j] == identity:
                    inv[i] = j
                    break
        return inv

    @njit(cache=True)
    def conjugation_table(table, inv):
        n = table.shape[0]
        conj = np.empty((n, n), dtype=np.int32)
        for g in range(n):
            gi = inv[g]
            for x in range(n):
                conj[g, x] = table[table[gi, x], g]
        return conj

    @njit(cache=True)
    def closure(table, gens, identity):
        n = table.shape[0]
        mask = np.zeros(n, dtype=np.bool_)
        queue = np.empty(n, dtype=np.int32)
        mask[identity] = True
        queue[0] = identity
        head = 0
        tail = 1
        while head < tail:
            x = queue[head]
            head += 1
            for t in range(gens.shape[0]):
                y = table[x, gens[t]]
                if not mask[y]:
                    mask[y] = True
                    queue[tail] = y
                    tail += 1
        return mask

    @njit(cache=True)
    def element_orders(table, identity):
        n = table.shape[0]
        orders = np.zeros(n, dtype=np.int64)
        for x in range(n):
            k = 1
            cur = x
            while cur != identity:
                cur = table[cur, x]
                k += 1
            orders[x] = k
        return orders

    @njit(cache=True)
    def transporter(conj, source, target_mask):
        n = conj.shape[0]
        out = np.ones(n, dtype=np.bool_)
        for g in range(n):
            for t in range(source.shape[0]):
                if not target_mask[conj[g, source[t]]]:
                    out[g] = False
                    break
        return out

    @njit(cache=True)
    def _is_closed(table, members, mask):
        m = members.shape[0]
        for a in range(m):
            for b in range(m):
                if not mask[table[members[a], members[b]]]:
                    return False
        return True

    def is_closed(table, members, mask):
        return bool(_is_closed(table, members, mask))

    @njit(cache=True)
    def centralizing(table, elements):
        n = table.shape[0]
        out = np.ones(n, dtype=np.bool_)
        for g in range(n):
            for t in range(elements.shape[0]):
                s = elements[t]
                if table[g, s] != table[s, g]:
                    out[g] = False
                    break
        return out

    return SimpleNamespace(
        name="numba",
        multiplication_table=multiplication_table,
        inverses=inverses,
        conjugation_table=conjugation_table,
        closure=closure,
        element_orders=element_orders,
        transporter=transporter,
        is_closed=is_closed,
        centralizing=centralizing,
    )


def _numba_requested() -> bool:
    return os.environ.get("FUSIONLAB_DISABLE_NUMBA", "0").strip().lower() in ("", "0", "false", "no")


numba_kernels = None
if _numba_requested():
    try:
        numba_kernels = _build_numba_kernels()
    except ImportError:
        numba_kernels = None

kernels = numba_kernels if numba_kernels is not None else numpy_kernels
