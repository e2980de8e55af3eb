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
"""Tests for multicomplexes, windows and the contraction of cocycles"""
import pytest

from novikov_cubes.cubes import derive_cube, scalar_map, totalise, trivial_cube
from novikov_cubes.exceptions import PreconditionError, StructuralError
from novikov_cubes.homalg import SparseMatrix
from novikov_cubes.multicomplex import (
    MultiComplex,
    TruncationWindow,
    compare_with_torus,
    contract_cocycle,
    from_trivial_cube,
    partial_tot_2complex,
    realize_L,
    subset_totalisation,
    tot_sum,
    tr_tot,
)
from novikov_cubes.tori import mapping_torus

from conftest import R0, random_commuting_maps, random_complex, random_homotopy_data, two_term


def _one(value):
    return SparseMatrix.from_rows(R0, [[value]])


def _acyclic_cube(rng, n=2):
    """Trivial cube whose first map is -id, so its totalisation is acyclic."""
    C = random_complex(R0, rng, max_rank=2)
    maps = [scalar_map(C, -1)] + random_commuting_maps(C, rng, n - 1)
    return trivial_cube(C, maps)


def _boundary_on_window(E, window, m, rng):
    """``d(b)`` restricted to the window for random ``b`` supported on it."""
    b = {}
    for a in window.positions():
        r = E.rank(a + (m - 1 - sum(a),))
        if r:
            b[a] = {i: R0.constant(int(rng.integers(-3, 4))) for i in range(r)}
            b[a] = {i: v for i, v in b[a].items() if v}
    c = E.apply_total(b, m - 1)
    return {a: v for a, v in c.items() if window.contains(a)}


class TestMultiComplex:
    """Construction and anticommutation"""

    def test_position_length(self):
        """Test that positions need n + 1 coordinates"""
        with pytest.raises(StructuralError):
            MultiComplex(R0, 1, {(0,): 1})

    def test_shape(self):
        """Test that differentials must match the ranks"""
        with pytest.raises(StructuralError):
            MultiComplex(R0, 1, {(0, 0): 1, (1, 0): 2}, {(1, (0, 0)): _one(1)})

    def test_detects_commuting_square(self):
        """Test that a commuting (rather than anticommuting) square is reported"""
        ranks = {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1}
        differentials = {
            (1, (0, 0)): _one(1),
            (2, (0, 0)): _one(1),
            (1, (0, 1)): _one(1),
            (2, (1, 0)): _one(1),
        }
        E = MultiComplex(R0, 1, ranks, differentials)
        assert E.check_anticommutation() == ((0, 0), 1, 2)

    def test_anticommuting_square(self):
        """Test that flipping one sign makes the square anticommute"""
        ranks = {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1}
        differentials = {
            (1, (0, 0)): _one(1),
            (2, (0, 0)): _one(1),
            (1, (0, 1)): _one(1),
            (2, (1, 0)): _one(-1),
        }
        E = MultiComplex(R0, 1, ranks, differentials)
        assert E.check_anticommutation() is None
        assert E.cells == [(0,), (1,)]

    def test_column(self):
        """Test that the last direction gives the vertical complex"""
        C = two_term(R0, 3)
        E = from_trivial_cube(C, [scalar_map(C, 1)])
        assert E.column((1,)).d(0) == _one(-3)
        assert not E.cohomology_in_direction((0,)).is_acyclic


class TestTotalisations:
    """Direct-sum totalisations agree with the cube totalisation"""

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_from_trivial_cube(self, n, rng):
        """Test that tot_sum of the (n + 1)-complex is Tot Triv"""
        C = random_complex(R0, rng, max_rank=2)
        maps = random_commuting_maps(C, rng, n)
        E = from_trivial_cube(C, maps)
        assert E.check_anticommutation() is None
        assert tot_sum(E).complex == totalise(trivial_cube(C, maps)).complex

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_partial_totalisation(self, n, rng):
        """Test that the labelled 2-complex totalises to Tot Triv block by block"""
        C = random_complex(R0, rng, max_rank=2)
        maps = random_commuting_maps(C, rng, n)
        E = partial_tot_2complex(C, maps)
        assert E.check_anticommutation() is None
        expected = totalise(trivial_cube(C, maps))
        total = subset_totalisation(E)
        assert total.complex == expected.complex
        for l in expected.complex.degrees:
            for A in expected.index.keys_in(l):
                assert total.index.span(l, A) == expected.index.span(l, A)


class TestRealization:
    """Ł(F) on a box against the mapping torus"""

    @pytest.mark.parametrize("n", [1, 2])
    def test_trivial_cube(self, n, rng):
        """Test that Ł of a trivial cube matches the mapping torus on the box"""
        C = random_complex(R0, rng, max_rank=2)
        F = trivial_cube(C, random_commuting_maps(C, rng, n))
        E = realize_L(F, radius=2)
        report = compare_with_torus(E, mapping_torus(F), radius=2)
        assert report.matches
        assert report.checked > 0

    @pytest.mark.parametrize("n", [1, 2])
    def test_derived_cube(self, n, rng):
        """Test that Ł of a derived cube matches its mapping torus"""
        D = random_complex(R0, rng, max_rank=2)
        C, alpha, beta, G = random_homotopy_data(D, rng)
        F = derive_cube(C, D, alpha, beta, G, random_commuting_maps(D, rng, n))
        E = realize_L(F, radius=1)
        report = compare_with_torus(E, mapping_torus(F), radius=1)
        assert report.matches
        assert report.to_dict()["matches"]

    def test_outflow(self):
        """Test that blocks leaving the box are kept as outflow"""
        C = two_term(R0, 2)
        E = realize_L(trivial_cube(C, [scalar_map(C, 1)]), radius=1)
        assert E.cells == [(-1,), (0,), (1,)]
        assert all(position[0] == 1 for _, position in E.outflow)


class TestTruncation:
    """Windows and the truncated totalisation"""

    def test_window_positions(self):
        """Test that windows are cut by the hook and the bound"""
        window = TruncationWindow(2, 0, 1)
        assert window.positions() == [(0, 0), (1, 0), (0, 1)]
        assert window.contains((1, 0))
        assert not window.contains((-1, 1))
        assert window.interior((0, 0)) and not window.interior((1, 0))

    def test_zero_variables(self):
        """Test the window of a 1-complex"""
        assert TruncationWindow(0, 0, 0).positions() == [()]

    def test_tr_tot(self, rng):
        """Test that the truncated totalisation is a complex with recorded outflow"""
        F = _acyclic_cube(rng)
        E = realize_L(F, radius=2)
        window = TruncationWindow(2, -1, 1)
        truncated = tr_tot(E, window)
        for a in truncated.multicomplex.cells:
            assert window.contains(a)
        assert truncated.outflow
        assert truncated.complex.degrees

    def test_tr_tot_mismatch(self, rng):
        """Test that the window must have as many coordinates as the multicomplex"""
        E = realize_L(_acyclic_cube(rng), radius=1)
        with pytest.raises(StructuralError):
            tr_tot(E, TruncationWindow(1, 0, 1))


class TestContraction:
    """Explicit preimages of cocycles of the truncated product"""

    @pytest.mark.slow
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_random_cocycles(self, m, rng):
        """Test that random boundaries on the window are contracted"""
        for _ in range(100):
            F = _acyclic_cube(rng)
            E = realize_L(F, radius=2)
            window = TruncationWindow(2, -1, 1)
            c = _boundary_on_window(E, window, m, rng)
            result = contract_cocycle(E, c, window, m)
            assert result.verified
            assert E.apply_total(result.preimage, m - 1).keys() >= {a for a, v in c.items() if v}

    def test_zero(self, rng):
        """Test that the zero cocycle contracts to zero"""
        E = realize_L(_acyclic_cube(rng), radius=1)
        result = contract_cocycle(E, {}, TruncationWindow(2, 0, 1), 1)
        assert result.preimage == {}

    def test_column_not_exact(self):
        """Test that a column with cohomology is refused"""
        C = two_term(R0, 2)
        E = realize_L(trivial_cube(C, [scalar_map(C, 0)]), radius=1)
        with pytest.raises(PreconditionError, match="not exact"):
            contract_cocycle(E, {}, TruncationWindow(1, 0, 1), 1)

    def test_window_outside_region(self, rng):
        """Test that the window must lie in the box of Ł"""
        E = realize_L(_acyclic_cube(rng), radius=1)
        with pytest.raises(PreconditionError, match="outside the multicomplex"):
            contract_cocycle(E, {}, TruncationWindow(2, 0, 3), 1)

    def test_stray_support(self, rng):
        """Test that support outside the window is refused"""
        E = realize_L(_acyclic_cube(rng), radius=2)
        window = TruncationWindow(2, 0, 1)
        c = {(2, 0): {0: R0.one}}
        with pytest.raises(PreconditionError, match="outside the window"):
            contract_cocycle(E, c, window, 2)

    def test_not_cocycle(self):
        """Test that a family with nonzero boundary is refused"""
        C = two_term(R0, 1)
        E = realize_L(trivial_cube(C, [scalar_map(C, -1)]), radius=1)
        window = TruncationWindow(1, 0, 1)
        # total degree 0 lives in the C^0 summand of the empty subset, d_2 sends it on
        c = {(0,): {0: R0.one}}
        with pytest.raises(PreconditionError, match="not a cocycle"):
            contract_cocycle(E, c, window, 0)
