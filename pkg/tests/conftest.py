# Copyright 2026 The novikov-cubes Developers

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import numpy as np
import pytest
import os

from novikov_cubes.homalg import FreeComplex, GradedMap, SparseMatrix
from novikov_cubes.rings import CoefficientRing, LaurentRing


np.random.seed(42)


# ==========================================================
# Some useful global variables

ZZ = CoefficientRing.integers()
QQ = CoefficientRing.rationals()
F5 = CoefficientRing.integers_mod(5)

# integers and Laurent rings in one and two variables over them
R0 = LaurentRing(ZZ, 0)
L1 = LaurentRing(ZZ, 1)
L2 = LaurentRing(ZZ, 2)


def two_term(ring, entry, degree=0):
    """``ring --entry--> ring`` in degrees ``degree, degree + 1``."""
    return FreeComplex(ring, {degree: 1, degree + 1: 1}, {degree: SparseMatrix(ring, (1, 1), {(0, 0): entry})})


# ==========================================================
# random instances


def random_element(ring, rng, spread=2, terms=2):
    value = ring.zero
    for _ in range(terms):
        c = int(rng.integers(-spread, spread + 1))
        e = tuple(int(a) for a in rng.integers(-1, 2, size=ring.nvars))
        value = value + ring.monomial(e, c)
    return value


def random_matrix(ring, shape, rng, density=0.5):
    entries = {}
    for i in range(shape[0]):
        for j in range(shape[1]):
            if rng.random() < density:
                entries[(i, j)] = random_element(ring, rng)
    return SparseMatrix(ring, shape, entries)


def random_unimodular(ring, n, rng, steps=3):
    """A product of elementary matrices and its inverse."""
    P = SparseMatrix.identity(ring, n)
    P_inv = SparseMatrix.identity(ring, n)
    if n < 2:
        return P, P_inv
    for _ in range(steps):
        i, j = (int(a) for a in rng.choice(n, size=2, replace=False))
        c = random_element(ring, rng, terms=1)
        P = (SparseMatrix.identity(ring, n) + SparseMatrix(ring, (n, n), {(i, j): c})) @ P
        P_inv = P_inv @ (SparseMatrix.identity(ring, n) - SparseMatrix(ring, (n, n), {(i, j): c}))
    return P, P_inv


def random_complex(ring, rng, length=3, max_rank=3, start=0):
    """Sum of two-term pieces ``R --c--> R`` and free summands, conjugated by
    unimodular matrices degreewise."""
    degrees = list(range(start, start + length))
    ranks = {l: int(rng.integers(1, max_rank + 1)) for l in degrees}
    incoming = {start: 0}
    pairs = {}
    for l in degrees[:-1]:
        cap = min(ranks[l] - incoming[l], ranks[l + 1])
        pairs[l] = int(rng.integers(0, cap + 1))
        incoming[l + 1] = pairs[l]
    changes = {l: random_unimodular(ring, ranks[l], rng) for l in degrees}
    blocks = {}
    for l, k in pairs.items():
        entries = {}
        for j in range(k):
            c = random_element(ring, rng)
            entries[(j, incoming[l] + j)] = c if c else ring.one
        standard = SparseMatrix(ring, (ranks[l + 1], ranks[l]), entries)
        blocks[l] = changes[l + 1][0] @ standard @ changes[l][1]
    return FreeComplex(ring, ranks, blocks)


def random_graded(C, degree, rng, density=0.5):
    blocks = {l: random_matrix(C.ring, (C.rank(l + degree), r), rng, density) for l, r in C.ranks.items()}
    return GradedMap(C.ring, degree, C.ranks, C.ranks, blocks, source=C, target=C)


def random_commuting_maps(C, rng, count):
    """Polynomials in the null-homotopic map ``dK + Kd``; they commute and are cochain maps."""
    K = random_graded(C, -1, rng)
    h = C.differential @ K + K @ C.differential
    maps = []
    for _ in range(count):
        a, b, c = (int(v) for v in rng.integers(-2, 3, size=3))
        maps.append(GradedMap.identity(C, a) + h * b + (h @ h) * c)
    return maps


def random_homotopy_data(D, rng):
    """``(C, α, β, G)`` with ``C = D``, ``α = id``, a random ``G`` and
    ``β = id + dG + Gd``, so that ``dG + Gd = αβ - id``."""
    G = random_graded(D, -1, rng)
    beta = GradedMap.identity(D) + D.differential @ G + G @ D.differential
    return D, GradedMap.identity(D), beta, G


# ==========================================================
# pytest fixtures


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: randomized suites with hundreds of instances")


POINTS = 20


@pytest.fixture(scope="session")
def points():
    """Number of random specialization points."""
    return int(os.environ.get("POINTS", POINTS))


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture(params=[ZZ, QQ, F5], ids=str)
def base(request):
    return request.param


@pytest.fixture(scope="session")
def complex_factory():
    """Fixture to create random complexes over a ring"""
    return random_complex


@pytest.fixture(scope="session")
def maps_factory():
    """Fixture to create pairwise commuting cochain maps on a complex"""
    return random_commuting_maps


@pytest.fixture(scope="session")
def homotopy_factory():
    """Fixture to create domination data ``(C, α, β, G)`` on a complex"""
    return random_homotopy_data
