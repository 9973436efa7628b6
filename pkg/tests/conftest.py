import functools

import numpy as np
import pytest

from prank import catalog


@functools.lru_cache(maxsize=None)
def built(label):
    """Catalog instance by label, built once per session."""
    return catalog.entry(label).build()


ENUMERABLE = [e.label for e in catalog.entries() if e.enumerable]
ALL_LABELS = [e.label for e in catalog.entries()]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_vectors(rng, p, n, count):
    return rng.integers(0, p, size=(count, n)).astype(np.int64)


def permute_algebra(A, perm):
    """Relabel basis: new basis vector i is old basis vector perm[i]."""
    from prank.liecore import Algebra

    perm = np.asarray(perm)
    S = A.structure[np.ix_(perm, perm, perm)]
    P = A.pmap_basis[np.ix_(perm, perm)]
    return Algebra(A.p, [A.names[i] for i in perm], S, P, name=A.name + "~")


# -- acceptance result lines ---------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
