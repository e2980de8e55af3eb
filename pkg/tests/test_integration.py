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
"""Tests that the command line tools work on JSON documents end to end"""
import json

import pytest

from novikov_cubes import formats
from novikov_cubes._version import __version__
from novikov_cubes.cli import INPUT_ERROR, NEGATIVE, POSITIVE, main
from novikov_cubes.cubes import SpecialCubeData, scalar_map, trivial_cube
from novikov_cubes.homalg import GradedMap
from novikov_cubes.rings import LaurentPolynomial
from novikov_cubes.toric import Cone, Fan

from conftest import L1, L2, R0, two_term


def _write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(formats.dumps(data), encoding="utf-8")
    return str(path)


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def cone_cube(tmp_path):
    C = two_term(R0, 2)
    return _write(tmp_path, "cube.json", formats.cube_to_dict(trivial_cube(C, [scalar_map(C, -1)])))


@pytest.fixture
def complex_file(tmp_path):
    def write(text, ring=L1, name="complex.json"):
        return _write(tmp_path, name, formats.complex_to_dict(two_term(ring, LaurentPolynomial.parse(text, ring))))

    return write


class TestCubes:
    """check-cube, derive, totalise and torus"""

    def test_check_cube(self, capsys, cone_cube):
        """Test that a trivial cube passes the check"""
        code, report = _run(capsys, "check-cube", cone_cube)
        assert code == POSITIVE
        assert report["cube"] and report["first_failure"] is None

    def test_check_bad_cube(self, capsys, tmp_path):
        """Test that a wrong homotopy is reported with exit code 1"""
        C = two_term(R0, 1)
        H = GradedMap.between(C, C, -1, {1: [[1]]})
        bad = SpecialCubeData(2, C, {1: scalar_map(C, 1), 2: scalar_map(C, 1)}, {3: H})
        code, report = _run(capsys, "check-cube", _write(tmp_path, "bad.json", formats.cube_to_dict(bad)))
        assert code == NEGATIVE
        assert not report["cube"]
        assert report["first_failure"] is not None

    def test_derive_witness(self, capsys, tmp_path):
        """Test that the (x - 1) witness derives a one-dimensional cube"""
        path = _write(tmp_path, "derive.json", {"witness": {"kind": "cyclic", "ring": "ZZ"}})
        code, report = _run(capsys, "derive", path)
        assert code == POSITIVE
        assert report["cube"]["n"] == 1
        assert report["check"]["cube"]

    def test_totalise(self, capsys, cone_cube):
        """Test that the summands of the cone are listed per degree"""
        code, report = _run(capsys, "totalise", cone_cube)
        assert code == POSITIVE
        assert report["summands"] == {"0": [[]], "1": [[], [1]], "2": [[1]]}
        assert report["complex"]["degrees"] == {"0": 1, "1": 2, "2": 1}

    def test_torus(self, capsys, cone_cube):
        """Test that the mapping torus gains one variable"""
        code, report = _run(capsys, "torus", cone_cube)
        assert code == POSITIVE
        assert report["complex"]["variables"] == 1

    def test_torus_mather(self, capsys, tmp_path):
        """Test that matrix witnesses get K and J checked"""
        D = two_term(R0, 2)
        identity = formats.map_to_dict(GradedMap.identity(D))
        document = {
            "C": formats.complex_to_dict(D),
            "D": formats.complex_to_dict(D),
            "alpha": identity,
            "beta": identity,
            "G": {"degree": -1, "blocks": {}},
            "h": [formats.map_to_dict(GradedMap.identity(D, 3))],
        }
        code, report = _run(capsys, "torus", _write(tmp_path, "derive.json", document), "--check-mather")
        assert code == POSITIVE
        assert report["mather"]["K"]["cochain_map"]
        assert report["mather"]["J"]["cochain_map"]

    def test_torus_mather_needs_witness(self, capsys, cone_cube):
        """Test that --check-mather on a bare cube is an input error"""
        code, _ = _run(capsys, "torus", cone_cube, "--check-mather")
        assert code == INPUT_ERROR


class TestComplexes:
    """cohomology and tr-tot"""

    def test_cohomology(self, capsys, tmp_path):
        """Test that Z --2--> Z has H^1 = Z/2"""
        code, report = _run(capsys, "cohomology", _write(tmp_path, "c.json", formats.complex_to_dict(two_term(R0, 2))))
        assert code == NEGATIVE
        assert report["cohomology"]["1"]["torsion"] == ["2"]
        assert not report["acyclic"]

    def test_cohomology_at_point(self, capsys, complex_file):
        """Test that x - 1 is acyclic at x = 2 and not at x = 1"""
        path = complex_file("x1 - 1")
        code, report = _run(capsys, "cohomology", path, "--at", "2")
        assert code == POSITIVE
        assert report["acyclic"]
        code, report = _run(capsys, "cohomology", path, "--at", "1")
        assert code == NEGATIVE
        assert not report["acyclic"]

    def test_bad_point(self, capsys, complex_file):
        """Test that an unparsable point is an input error"""
        code, _ = _run(capsys, "cohomology", complex_file("x1 - 1"), "--at", "two")
        assert code == INPUT_ERROR

    def test_tr_tot(self, capsys, cone_cube):
        """Test that the truncated totalisation reports its window"""
        code, report = _run(capsys, "tr-tot", cone_cube, "--radius", "1", "--hook", "0", "--bound", "1")
        assert code == POSITIVE
        assert report["multicomplex"]["window"] == {"n": 1, "hook": 0, "bound": 1}
        assert report["region"] == {"radius": 1}


class TestNovikov:
    """novikov-test"""

    @pytest.mark.parametrize("cone, code", [("1", POSITIVE), ("-1", NEGATIVE)])
    def test_rays(self, capsys, complex_file, cone, code):
        """Test that 1 - 2x is acyclic over x and refuted over x^-1"""
        result, report = _run(capsys, "novikov-test", complex_file("1 - 2*x1"), "--cone", cone)
        assert result == code
        assert report["cone"] == [[int(cone)]]

    def test_weight(self, capsys, complex_file):
        """Test that an explicit weight is used"""
        code, report = _run(capsys, "novikov-test", complex_file("1 - 2*x1"), "--cone", "-1", "--weight", "-2")
        assert code == NEGATIVE
        assert report["weight"] == [-2]

    def test_dual(self, capsys, complex_file):
        """Test that --dual tests over the dual of a ray"""
        path = complex_file("x1 - x2", ring=L2)
        code, report = _run(capsys, "novikov-test", path, "--cone", "1,0", "--dual")
        assert code == POSITIVE
        assert report["status"] == "acyclic"

    def test_not_full_dimensional(self, capsys, complex_file):
        """Test that a ray is not accepted as a cone of exponents in rank two"""
        code, _ = _run(capsys, "novikov-test", complex_file("x1 - x2", ring=L2), "--cone", "1,0")
        assert code == INPUT_ERROR


class TestFindom:
    """findom"""

    def test_dominated(self, capsys, complex_file):
        """Test that x - 1 is certified finitely dominated"""
        code, report = _run(capsys, "findom", complex_file("x1 - 1"))
        assert code == POSITIVE
        assert report["conclusion"] == "FinitelyDominatedCertified"

    def test_refuted(self, capsys, complex_file):
        """Test that 1 - 2x is certified not finitely dominated"""
        code, report = _run(capsys, "findom", complex_file("1 - 2*x1"), "--order", "4")
        assert code == NEGATIVE
        assert report["conclusion"] == "NotFinitelyDominatedCertified"

    def test_witness(self, capsys, tmp_path, complex_file):
        """Test that a witness adds the consequence checks"""
        witness = _write(tmp_path, "witness.json", {"kind": "cyclic", "ring": "ZZ"})
        code, report = _run(capsys, "findom", complex_file("x1 - 1"), "--witness", witness)
        assert code == POSITIVE
        assert report["consequences"]["certified"]

    def test_fan_file(self, capsys, tmp_path, complex_file):
        """Test that a fan file replaces the standard fan"""
        fan = Fan([Cone([(1,)]), Cone([(-1,)]), Cone.zero(1)], 1)
        path = _write(tmp_path, "fan.json", formats.fan_to_dict(fan))
        code, report = _run(capsys, "findom", complex_file("x1 - 1"), "--fan", path)
        assert code == POSITIVE
        assert len(report["verdicts"]) == 2

    def test_incomplete_fan(self, capsys, tmp_path, complex_file):
        """Test that an incomplete fan is an input error"""
        path = _write(tmp_path, "fan.json", {"n": 1, "cones": [[[1]], []]})
        code, out = _run(capsys, "findom", complex_file("x1 - 1"), "--fan", path)
        assert code == INPUT_ERROR
        assert out is None


class TestInputErrors:
    """Malformed input and the global options"""

    def test_bad_json(self, capsys, tmp_path):
        """Test that invalid JSON exits with code 3"""
        path = tmp_path / "broken.json"
        path.write_text("{", encoding="utf-8")
        assert _run(capsys, "cohomology", str(path))[0] == INPUT_ERROR

    def test_missing_file(self, capsys, tmp_path):
        """Test that a missing file exits with code 3"""
        assert _run(capsys, "check-cube", str(tmp_path / "nothing.json"))[0] == INPUT_ERROR

    def test_bad_ring(self, capsys, tmp_path):
        """Test that an unknown coefficient ring exits with code 3"""
        path = _write(tmp_path, "c.json", {"ring": "RR", "variables": 0, "degrees": {"0": 1}})
        assert _run(capsys, "cohomology", path)[0] == INPUT_ERROR

    def test_version(self, capsys):
        """Test that --version prints the package version"""
        with pytest.raises(SystemExit) as e:
            main(["--version"])
        assert e.value.code == 0
        assert __version__ in capsys.readouterr().out
