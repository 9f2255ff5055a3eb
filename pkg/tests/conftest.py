import functools

import pytest

from fusionlab.harness.corpus import builtin_corpus
from fusionlab.permcore import Permutation, group_closure


def perm(text, degree):
    return Permutation.from_cycles(text, degree)


def make(gens, degree):
    return group_closure([perm(g, degree) for g in gens], degree)


@functools.lru_cache(maxsize=None)
def builtin(name):
    for e in builtin_corpus():
        if e.name == name:
            return e.build()
    raise KeyError(name)


@pytest.fixture(scope="session")
def S3():
    return builtin("S3")


@pytest.fixture(scope="session")
def S4():
    return builtin("S4")


@pytest.fixture(scope="session")
def A4():
    return builtin("A4")


@pytest.fixture(scope="session")
def D8():
    return builtin("D8")


@pytest.fixture(scope="session")
def Q8():
    return builtin("Q8")


@pytest.fixture(scope="session")
def V4():
    return make(["(1 2)", "(3 4)"], 4)


@pytest.fixture(scope="session")
def C4():
    return builtin("C4")
