import os
import subprocess
import sys

import numpy as np
import pytest

from fusionlab import _kernels
from fusionlab._kernels import numba_kernels, numpy_kernels

from conftest import builtin

GROUPS = ["S3", "D8", "Q8", "A4", "SL(2,3)", "C3xS3", "A5"]

needs_numba = pytest.mark.skipif(numba_kernels is None, reason="numba unavailable or disabled")


def _images(G):
    return G.images


@pytest.mark.parametrize("name", GROUPS)
def test_multiplication_table_matches_permutation_products(name):
    G = builtin(name)
    table = numpy_kernels.multiplication_table(G.images)
    els = G.elements
    for i in range(0, G.order, max(1, G.order // 7)):
        for j in range(G.order):
            assert els[table[i, j]] == els[i] * els[j]


@needs_numba
@pytest.mark.parametrize("name", GROUPS)
def test_numba_and_numpy_agree(name):
    G = builtin(name)
    a, b = numba_kernels, numpy_kernels
    t = a.multiplication_table(G.images)
    assert np.array_equal(t, b.multiplication_table(G.images))
    e = G.identity_index
    inv = a.inverses(t, e)
    assert np.array_equal(inv, b.inverses(t, e))
    conj = a.conjugation_table(t, inv)
    assert np.array_equal(conj, b.conjugation_table(t, inv))
    assert np.array_equal(a.element_orders(t, e), b.element_orders(t, e))
    for gens in ([], [1], [1, G.order - 1], list(range(0, G.order, 5))):
        g = np.array(gens, dtype=np.int32)
        assert np.array_equal(a.closure(t, g, e), b.closure(t, g, e))
    sub = a.closure(t, np.array([G.order - 1], dtype=np.int32), e)
    members = np.flatnonzero(sub).astype(np.int32)
    assert np.array_equal(a.transporter(conj, members, sub), b.transporter(conj, members, sub))
    assert a.is_closed(t, members, sub) == b.is_closed(t, members, sub) is True
    assert np.array_equal(a.centralizing(t, members), b.centralizing(t, members))


def test_non_closed_element_set_rejected():
    G = builtin("S3")
    with pytest.raises(ValueError):
        numpy_kernels.multiplication_table(G.images[:4])


def test_env_flag_selects_numpy_path():
    code = "from fusionlab._kernels import kernels; print(kernels.name)"
    env = dict(os.environ, FUSIONLAB_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


@needs_numba
def test_default_path_is_numba():
    if os.environ.get("FUSIONLAB_DISABLE_NUMBA", "0") not in ("", "0"):
        pytest.skip("numba disabled in this environment")
    assert _kernels.kernels.name == "numba"
