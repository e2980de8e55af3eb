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
"""Tests for mapping tori, comparison maps, ψ and domination witnesses"""
import itertools

import pytest

from novikov_cubes.cubes import SpecialCubeData, derive_cube, scalar_map, trivial_cube, verify_special
from novikov_cubes.exceptions import ContractViolation, UnsupportedError
from novikov_cubes.homalg import FreeComplex, GradedMap, SparseMatrix, cohomology
from novikov_cubes.rings import LaurentRing, random_points
from novikov_cubes.tori import (
    build_psi,
    contractible_witness,
    cyclic_witness,
    domination_witness,
    koszul,
    koszul_slice,
    mapping_torus,
    mather_J,
    mather_K,
    mather_L,
    mather_M,
    psi_spot_check,
    tensor_witness,
    unipotent_witness,
)

from conftest import L1, L2, R0, ZZ, random_commuting_maps, random_complex, random_homotopy_data, two_term


class TestMappingTorus:
    """Mapping tori of special cubes"""

    def test_one_variable(self):
        """Test that the torus of (L; x) is L⊗L --x⊗1 - 1⊗x--> L⊗L"""
        D = FreeComplex(L1, {0: 1})
        torus = mapping_torus(trivial_cube(D, [scalar_map(D, L1.variable(1))]))
        ring = torus.ring
        assert ring.nvars == 2
        assert torus.complex.ranks == {0: 1, 1: 1}
        assert torus.complex.d(0) == SparseMatrix(ring, (1, 1), {(0, 0): ring.variable(1) - ring.variable(2)})

    def test_extended_is_cube(self, rng):
        """Test that the extended data of random special cubes is again a cube"""
        for n in (1, 2):
            D = random_complex(R0, rng, length=3, max_rank=2)
            C, alpha, beta, G = random_homotopy_data(D, rng)
            data = derive_cube(C, D, alpha, beta, G, random_commuting_maps(D, rng, n))
            torus = mapping_torus(data)
            assert verify_special(torus.extended)
            assert torus.ring.nvars == n

    def test_rejects_non_cube(self):
        """Test that data failing the criterion is rejected"""
        C = two_term(R0, 1)
        H = GradedMap.between(C, C, -1, {1: [[1]]})
        bad = SpecialCubeData(2, C, {1: scalar_map(C, 1), 2: scalar_map(C, 1)}, {3: H})
        with pytest.raises(ContractViolation):
            mapping_torus(bad)


class TestMatherMaps:
    """Comparison maps between totalisations are quasi-isomorphisms"""

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_m_and_l(self, n, rng):
        """Test that M and L are cochain maps, with acyclic cones over Z on the first 50"""
        for k in range(100):
            D = random_complex(R0, rng, length=3, max_rank=2)
            C, alpha, beta, G = random_homotopy_data(D, rng)
            hs = random_commuting_maps(D, rng, n)
            M = mather_M(D, alpha @ beta, G, hs)
            L = mather_L(C, D, alpha, beta, G, hs)
            assert M.commutes and M.diagonal_matches
            assert L.commutes and L.diagonal_matches
            if k < 50:
                assert M.is_quasi_iso()
                assert L.is_quasi_iso()

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_k_and_j(self, n, rng):
        """Test that K and J are cochain maps between the mapping tori"""
        for _ in range(100):
            D = random_complex(R0, rng, length=3, max_rank=2)
            C, alpha, beta, G = random_homotopy_data(D, rng)
            hs = random_commuting_maps(D, rng, n)
            K = mather_K(D, alpha @ beta, G, hs)
            J = mather_J(C, D, alpha, beta, G, hs)
            assert K.commutes and K.diagonal_matches
            assert J.commutes and J.diagonal_matches

    def test_operators_refused(self):
        """Test that comparison maps need matrix data"""
        w = cyclic_witness(ZZ)
        with pytest.raises(UnsupportedError):
            mather_M(w.D, GradedMap.identity(w.D), w.G, [scalar_map(w.D, L1.variable(1))])


class TestKoszul:
    """Koszul complexes and their multidegree slices"""

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_ranks(self, n):
        """Test that ranks are binomial coefficients"""
        from math import comb

        assert koszul(n).ranks == {k: comb(n, k) for k in range(n + 1)}

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_slices(self, n):
        """Test that slice cohomology is R in degree n at multidegree 0 and zero elsewhere"""
        for m in itertools.product(range(3), repeat=n):
            betti = cohomology(koszul_slice(n, m)).betti()
            if any(m):
                assert betti == {}
            else:
                assert betti == {n: 1}

    def test_slice_length(self):
        """Test that multidegrees of the wrong length raise"""
        with pytest.raises(ValueError):
            koszul_slice(2, (0,))


class TestPsi:
    """The resolution map ψ"""

    @pytest.mark.parametrize(
        "D",
        [
            FreeComplex(L1, {0: 1}),
            two_term(L1, 2),
            FreeComplex(L2, {0: 1}),
        ],
    )
    def test_cone_acyclic(self, D, points, rng):
        """Test that ψ is a cochain map whose windowed cone is acyclic at random points"""
        psi = build_psi(D)
        assert psi_spot_check(psi, random_points(D.ring.nvars, points, rng))

    def test_needs_scalar_entries(self, rng):
        """Test that the windowed check refuses polynomial differentials"""
        psi = build_psi(two_term(L1, L1.variable(1) - 1))
        with pytest.raises(UnsupportedError):
            psi_spot_check(psi, random_points(1, 1, rng))


class TestWitnesses:
    """Library domination witnesses"""

    def test_cyclic(self):
        """Test that the (x - 1) witness satisfies its identities"""
        w = cyclic_witness(ZZ)
        assert w.check(radius=3)
        assert not w.is_finite

    def test_unipotent(self):
        """Test that tensor powers of the (x - 1) witness satisfy their identities"""
        w = unipotent_witness(ZZ, 2)
        assert w.D.ring.nvars == 2
        assert w.check(radius=1)

    def test_tensor_of_contractible(self):
        """Test that tensoring with a contractible witness gives a witness with C = 0"""
        D = two_term(L1, L1.variable(1))
        w = tensor_witness(contractible_witness(D), cyclic_witness(ZZ))
        assert w.check(radius=1)
        assert not w.C.ranks

    def test_contractible(self):
        """Test that an invertible monomial differential is contracted by -d^{-1}"""
        D = two_term(L1, L1.monomial((2,), -1))
        w = contractible_witness(D)
        assert w.check()
        assert w.is_finite

    def test_contractible_rejects(self):
        """Test that non-monomial differentials are rejected"""
        with pytest.raises(ValueError):
            contractible_witness(two_term(L1, L1.variable(1) - 1))

    def test_wrong_homotopy(self):
        """Test that a witness with a wrong homotopy fails its check"""
        w = cyclic_witness(ZZ)
        w.G = GradedMap.zero(w.D.ring, -1, w.D.ranks, w.D.ranks, source=w.D, target=w.D)
        with pytest.raises(ContractViolation):
            w.check()


class TestDominationWitness:
    """Finite complexes built from witnesses"""

    def test_cyclic_betti(self, points, rng):
        """Test that the torus of the (x - 1) witness matches Σ D at random points"""
        result = domination_witness(cyclic_witness(ZZ), points=points, rng=rng)
        assert result.betti_checked and result.betti_agree
        assert result.complex.ring.nvars == 1

    def test_contractible_maps(self, rng):
        """Test that matrix witnesses also get the comparison maps checked"""
        ring = LaurentRing(ZZ, 1)
        D = two_term(ring, ring.variable(1))
        result = domination_witness(contractible_witness(D), points=5, rng=rng)
        assert result.betti_agree
        assert result.mather["K"].commutes
        # C lives over R, not over the ring of D
        assert "J" not in result.mather
        assert "J" in result.mather_unchecked
        assert "K" not in result.mather_unchecked

    def test_operator_maps_unchecked(self, rng):
        """Test that operator witnesses name K and J as not checked"""
        result = domination_witness(cyclic_witness(ZZ), points=3, rng=rng)
        assert not result.mather
        assert set(result.to_dict()["mather_unchecked"]) == {"J", "K"}

    def test_subspace(self):
        """Test that a proper subset of variables gives a complex over those variables"""
        result = domination_witness(unipotent_witness(ZZ, 2), variables=(1,), radius=1)
        assert result.complex.ring.nvars == 1
        assert not result.betti_checked
        assert result.to_dict()["variables"] == [1]

    def test_unknown_variable(self):
        """Test that variables outside x1..xn raise"""
        with pytest.raises(ValueError):
            domination_witness(cyclic_witness(ZZ), variables=(2,))
