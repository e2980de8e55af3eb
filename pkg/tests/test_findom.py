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
"""Tests for the finite-domination pipelines"""
import importlib

import pytest

from novikov_cubes import findom
from novikov_cubes.exceptions import ContractViolation, ParseError, PreconditionError, StructuralError
from novikov_cubes.findom import (
    FINITELY_DOMINATED,
    INCONCLUSIVE,
    NOT_FINITELY_DOMINATED,
    DominationInput,
    FindomReport,
    FinitenessChecker,
    aggregate,
    read_config,
    toric_findom_test,
)
from novikov_cubes.homalg import FreeComplex, GradedMap, TensorProduct
from novikov_cubes.rings import LaurentPolynomial, LaurentRing
from novikov_cubes.tori import contractible_witness, cyclic_witness, unipotent_witness
from novikov_cubes.toric import Cone, Fan, nov_acyclicity, ray_fan, standard_fan

from conftest import L1, L2, QQ, ZZ, two_term


def _cyclic(text, base=ZZ):
    ring = LaurentRing(base, 1)
    return two_term(ring, LaurentPolynomial.parse(text, ring))


@pytest.fixture
def checker():
    return FinitenessChecker(order=8, max_order=16, points=3, seed=7, homotopy_radius=1)


class TestAggregate:
    """Combining per-cone statuses"""

    @pytest.mark.parametrize(
        "statuses, conclusion",
        [
            (["acyclic", "acyclic"], FINITELY_DOMINATED),
            (["acyclic", "nonacyclic"], NOT_FINITELY_DOMINATED),
            (["inconclusive", "nonacyclic"], NOT_FINITELY_DOMINATED),
            (["acyclic", "inconclusive"], INCONCLUSIVE),
            ([], FINITELY_DOMINATED),
        ],
    )
    def test_aggregate(self, statuses, conclusion):
        """Test that one refutation decides and all-acyclic certifies"""
        assert aggregate(statuses) == conclusion


class TestRanicki:
    """The one-variable test over the two rays"""

    @pytest.mark.parametrize(
        "text, base, conclusion",
        [
            ("x1 - 1", ZZ, FINITELY_DOMINATED),
            ("1 - 2*x1", ZZ, NOT_FINITELY_DOMINATED),
            ("1 - 2*x1", QQ, FINITELY_DOMINATED),
            ("2", ZZ, NOT_FINITELY_DOMINATED),
            ("x1^2 - 3*x1 + 1", ZZ, FINITELY_DOMINATED),
        ],
    )
    def test_examples(self, text, base, conclusion, checker):
        """Test the one-variable examples over the integers and the rationals"""
        report = checker.ranicki_test(_cyclic(text, base))
        assert report.conclusion == conclusion
        assert report.test == "ranicki"
        assert len(report.verdicts) == 2

    def test_verdicts_carry_cones(self, checker):
        """Test that each verdict names its fan cone and the dual it was tested over"""
        report = checker.ranicki_test(_cyclic("1 - 2*x1"))
        by_sigma = {tuple(map(tuple, v["sigma"])): v for v in report.verdicts}
        assert by_sigma[((1,),)]["status"] == "acyclic"
        assert by_sigma[((-1,),)]["status"] == "nonacyclic"
        assert by_sigma[((-1,),)]["cone"] == [[-1]]

    def test_zero_complex(self, checker):
        """Test that the zero complex is finitely dominated"""
        report = checker.ranicki_test(FreeComplex(L1, {}))
        assert report.conclusion == FINITELY_DOMINATED

    def test_needs_one_variable(self, checker):
        """Test that two variables are refused"""
        with pytest.raises(StructuralError):
            checker.ranicki_test(two_term(L2, 2))

    def test_module_level(self):
        """Test the entry point using the default checker"""
        assert findom.ranicki_test(_cyclic("x1 - 1")).conclusion == FINITELY_DOMINATED


class TestToric:
    """The fan criterion"""

    def test_koszul(self, checker):
        """Test that (x - 1, y - 1) is finitely dominated over the standard fan"""
        D = TensorProduct(_cyclic("x1 - 1"), _cyclic("x1 - 1")).complex
        report = checker.toric_findom_test(DominationInput(D))
        assert report.conclusion == FINITELY_DOMINATED
        assert len(report.verdicts) == 8
        assert all("sigma" in v for v in report.verdicts)
        assert report.fan_check["complete"]

    def test_refuted(self, checker):
        """Test that (1 - 2x, y - 1) is not finitely dominated"""
        D = TensorProduct(_cyclic("1 - 2*x1"), _cyclic("x1 - 1")).complex
        report = checker.toric_findom_test(DominationInput(D))
        assert report.conclusion == NOT_FINITELY_DOMINATED
        refuted = [v["sigma"] for v in report.verdicts if v["status"] == "nonacyclic"]
        assert [[-1, 0]] in refuted

    def test_diagonal(self, checker):
        """Test that L / (x1 - x2) is not finitely dominated"""
        D = two_term(L2, L2.variable(1) - L2.variable(2))
        assert checker.toric_findom_test(DominationInput(D)).conclusion == NOT_FINITELY_DOMINATED

    def test_other_fan(self, checker):
        """Test that a non-standard complete fan gives the same answer"""
        cones = [
            Cone([(1, 0), (1, 1)]),
            Cone([(1, 1), (0, 1)]),
            Cone([(0, 1), (-1, 0)]),
            Cone([(-1, 0), (0, -1)]),
            Cone([(0, -1), (1, 0)]),
            Cone([(1, 0)]),
            Cone([(1, 1)]),
            Cone([(0, 1)]),
            Cone([(-1, 0)]),
            Cone([(0, -1)]),
            Cone.zero(2),
        ]
        D = TensorProduct(_cyclic("x1 - 1"), _cyclic("x1 - 1")).complex
        report = checker.toric_findom_test(DominationInput(D, Fan(cones, 2)))
        assert report.conclusion == FINITELY_DOMINATED
        assert len(report.verdicts) == 10

    def test_incomplete_fan(self, checker):
        """Test that an incomplete fan is refused"""
        fan = Fan([Cone([(1,)]), Cone.zero(1)], 1)
        with pytest.raises(PreconditionError, match="not complete"):
            checker.toric_findom_test(DominationInput(_cyclic("x1 - 1"), fan))

    def test_fan_rank(self):
        """Test that the fan must live in the rank of the variables"""
        with pytest.raises(StructuralError):
            DominationInput(_cyclic("x1 - 1"), standard_fan(2))

    def test_module_level(self):
        """Test the entry point using the default checker"""
        report = toric_findom_test(DominationInput(_cyclic("x1 - 1")))
        assert report.conclusion == FINITELY_DOMINATED

    def test_cone_test_matches(self, checker):
        """Test that a decided cone is not retried"""
        D = _cyclic("1 - 2*x1")
        tau = Cone([(-1,)])
        assert checker.cone_test(D, tau).to_dict() == nov_acyclicity(D, tau, checker.order).to_dict()

    def test_cone_test_doubles_on_audit(self):
        """Test that an insufficient pivot audit is retried at doubled order"""
        D = _cyclic("x1^-20 - x1^-19")
        tau = Cone([(1,)])
        assert nov_acyclicity(D, tau, 16).status == "inconclusive"
        result = FinitenessChecker(order=16, max_order=64).cone_test(D, tau)
        assert result.status == "acyclic"
        assert result.order == 32

    def test_cone_test_stops_at_max_order(self):
        """Test that doubling stops at max_order"""
        D = _cyclic("x1^-20 - x1^-19")
        result = FinitenessChecker(order=16, max_order=16).cone_test(D, Cone([(1,)]))
        assert result.status == "inconclusive"
        assert result.insufficient_audits == 1


class TestConsequences:
    """What a domination witness implies"""

    def test_cyclic(self, checker):
        """Test the consequences of the (x - 1) witness"""
        w = cyclic_witness(ZZ)
        report = checker.verify_findom_consequences(DominationInput(w.D, ray_fan(), w))
        assert report.certified
        assert report.betti_checked
        assert report.first_orthant["status"] == "acyclic"
        assert len(report.fan_verdicts) == 2
        assert report.to_dict()["witness"] == "cyclic"
        assert set(report.to_dict()["mather_unchecked"]) == {"J", "K"}

    def test_contractible(self, checker):
        """Test that a contractible complex has a zero torus up to homotopy"""
        D = two_term(L1, L1.variable(1))
        report = checker.verify_findom_consequences(DominationInput(D, witness=contractible_witness(D)))
        assert report.certified
        assert "K" in report.mather
        assert "K" not in report.mather_unchecked

    def test_unipotent_subspaces(self, checker):
        """Test that subspace complexes are reported for each tuple of variables"""
        w = unipotent_witness(ZZ, 2)
        report = checker.verify_findom_consequences(DominationInput(w.D, witness=w), subspaces=[(1,), (2,)])
        assert [s["variables"] for s in report.subspaces] == [[1], [2]]
        assert report.certified

    def test_needs_witness(self, checker):
        """Test that consequences need a witness"""
        with pytest.raises(PreconditionError):
            checker.verify_findom_consequences(DominationInput(_cyclic("x1 - 1")))

    def test_witness_must_match(self):
        """Test that the witness must dominate the given complex"""
        with pytest.raises(StructuralError):
            DominationInput(_cyclic("1 - 2*x1"), witness=cyclic_witness(ZZ))

    def test_broken_witness(self, checker):
        """Test that a witness failing its identities is rejected"""
        w = cyclic_witness(ZZ)
        w.G = GradedMap.zero(w.D.ring, -1, w.D.ranks, w.D.ranks, source=w.D, target=w.D)
        with pytest.raises(ContractViolation):
            checker.verify_findom_consequences(DominationInput(w.D, witness=w))


class TestReport:
    """Report serialization"""

    def test_json(self, checker):
        """Test that a report is read back from its JSON text"""
        report = checker.ranicki_test(_cyclic("1 - 2*x1"))
        again = FindomReport.from_json(report.to_json())
        assert again.conclusion == report.conclusion
        assert again.verdicts == report.verdicts
        assert again.test == "ranicki"

    def test_bad_json(self):
        """Test that malformed reports raise ParseError"""
        with pytest.raises(ParseError):
            FindomReport.from_json("{")
        with pytest.raises(ParseError):
            FindomReport.from_json("{}")

    def test_unknown_conclusion(self):
        """Test that conclusions are validated"""
        with pytest.raises(ValueError):
            FindomReport("Maybe")

    def test_summary(self, checker):
        """Test the one-line summary"""
        report = checker.ranicki_test(_cyclic("1 - 2*x1"))
        assert report.summary() == "NotFinitelyDominatedCertified (2 cones: acyclic 1, nonacyclic 1)"


class TestConfiguration:
    """Defaults from the TOML file, the environment and keyword options"""

    def test_file_defaults(self):
        """Test that class defaults come from the shipped TOML file"""
        config = read_config(FinitenessChecker.config_filepath)
        assert FinitenessChecker.points == config["specialization"]["points"]
        assert FinitenessChecker.radius == config["window"]["radius"]
        assert FinitenessChecker.homotopy_radius == config["witness"]["homotopy_radius"]
        assert config["novikov"]["order"] <= config["novikov"]["max_order"]

    def test_keyword_options(self):
        """Test that keyword options override the defaults"""
        checker = FinitenessChecker(order=4, seed=1, points=2)
        assert (checker.order, checker.seed, checker.points) == (4, 1, 2)

    def test_max_order_raised(self):
        """Test that max_order is at least the initial order"""
        assert FinitenessChecker(order=32, max_order=8).max_order == 32

    @pytest.mark.parametrize("options", [{"colour": 1}, {"order": 0}])
    def test_bad_options(self, options):
        """Test that unknown or invalid options raise"""
        with pytest.raises(ValueError):
            FinitenessChecker(**options)

    def test_environment(self, monkeypatch):
        """Test that environment variables override the file"""
        monkeypatch.setenv("NOVIKOV_CUBES_ORDER", "5")
        monkeypatch.setenv("NOVIKOV_CUBES_SEED", "99")
        try:
            module = importlib.reload(findom)
            checker = module.FinitenessChecker()
            assert checker.order == 5
            assert checker.seed == 99
            assert module.FinitenessChecker(order=6).order == 6
        finally:
            monkeypatch.delenv("NOVIKOV_CUBES_ORDER")
            monkeypatch.delenv("NOVIKOV_CUBES_SEED")
            importlib.reload(findom)
