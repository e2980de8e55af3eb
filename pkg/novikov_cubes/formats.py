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
"""
UTF-8 JSON documents for complexes, maps, cubes, fans, witnesses and
multicomplex windows.

Matrices are stored sparsely as ``[row, column, "entry"]`` triples with
entries in the textual polynomial form; degrees and subset bitmasks are JSON
object keys and therefore strings.
"""
import json
import pathlib

from .cubes import SpecialCubeData, elements, scalar_map
from .exceptions import ParseError, StructuralError
from .homalg import FreeComplex, GradedMap, SparseMatrix
from .rings import CoefficientRing, LaurentRing
from .tori import contractible_witness, cyclic_witness, unipotent_witness
from .toric import Cone, Fan


def dumps(data):
    """Deterministic text form: sorted keys, two-space indent, UTF-8 symbols kept."""
    return json.dumps(data, sort_keys=True, ensure_ascii=False, indent=2)


def load(path):
    path = pathlib.Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ParseError(f"{path} is not valid JSON: {e}") from e


def _field(data, key, where):
    try:
        return data[key]
    except (KeyError, TypeError) as e:
        raise ParseError(f"{where} needs the field {key!r}") from e


# ==========================================================
# rings and matrices


def ring_to_dict(ring):
    return {"ring": str(ring.base), "variables": ring.nvars}


def ring_from_dict(data):
    base = CoefficientRing.parse(str(_field(data, "ring", "A complex")))
    return LaurentRing(base, int(data.get("variables", 0)))


def matrix_to_list(matrix):
    return [[i, j, str(value)] for i, j, value in matrix.triples()]


def _entry(value):
    return value if isinstance(value, str) else str(value)


def matrix_from_list(ring, shape, triples):
    try:
        entries = [(int(i), int(j), _entry(v)) for i, j, v in triples]
    except (TypeError, ValueError) as e:
        raise ParseError(f"Malformed matrix entries: {e}") from e
    return SparseMatrix.from_triples(ring, shape, entries)


# ==========================================================
# complexes and graded maps


def complex_to_dict(C):
    data = ring_to_dict(C.ring)
    data["degrees"] = {str(l): r for l, r in sorted(C.ranks.items())}
    data["differential"] = {str(l): matrix_to_list(block) for l, block in sorted(C.differential.blocks.items())}
    return data


def complex_from_dict(data, check=True):
    ring = ring_from_dict(data)
    ranks = {int(l): int(r) for l, r in _field(data, "degrees", "A complex").items()}
    blocks = {}
    for l, triples in data.get("differential", {}).items():
        l = int(l)
        blocks[l] = matrix_from_list(ring, (ranks.get(l + 1, 0), ranks.get(l, 0)), triples)
    return FreeComplex(ring, ranks, blocks, check=check)


def map_to_dict(phi):
    return {
        "degree": phi.degree,
        "blocks": {str(l): matrix_to_list(block) for l, block in sorted(phi.blocks.items())},
    }


def map_from_dict(data, source, target, ring=None):
    """A graded map between known complexes; entries live in ``ring``, by
    default the ring of ``target``."""
    ring = ring or target.ring
    degree = int(_field(data, "degree", "A graded map"))
    blocks = {}
    for l, triples in data.get("blocks", {}).items():
        l = int(l)
        blocks[l] = matrix_from_list(ring, (target.rank(l + degree), source.rank(l)), triples)
    return GradedMap(ring, degree, source.ranks, target.ranks, blocks, source=source, target=target)


# ==========================================================
# cubes


def cube_to_dict(data):
    return {
        "n": data.n,
        "complex": complex_to_dict(data.complex),
        "f": {str(k): map_to_dict(fk) for k, fk in sorted(data.f.items())},
        "H": {str(S): map_to_dict(HS) for S, HS in sorted(data.H.items())},
    }


def cube_from_dict(data):
    """A special cube; ``H`` is keyed by subset bitmasks and may omit zero maps."""
    n = int(_field(data, "n", "A cube"))
    C = complex_from_dict(_field(data, "complex", "A cube"))
    f = {int(k): map_from_dict(m, C, C) for k, m in _field(data, "f", "A cube").items()}
    H = {int(S): map_from_dict(m, C, C) for S, m in data.get("H", {}).items()}
    return SpecialCubeData(n, C, f, H)


# ==========================================================
# fans and witnesses


def fan_to_dict(fan):
    return fan.to_dict()


def fan_from_dict(data):
    try:
        return Fan.from_dict(data)
    except (KeyError, TypeError) as e:
        raise ParseError(f"Malformed fan: {e}") from e


def cone_from_text(text, n):
    """Parse generators written as ``"1,0;0,1"``."""
    gens = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            gens.append(tuple(int(a) for a in chunk.split(",")))
        except ValueError as e:
            raise ParseError(f"Cannot parse cone generator {chunk!r}") from e
    return Cone(gens, n)


def witness_from_dict(data, D=None):
    """Build one of the library witnesses.

    ``{"kind": "cyclic", "ring": "ZZ"}``, ``{"kind": "unipotent", "n": 2,
    "ring": "ZZ"}`` or ``{"kind": "contractible"}``; the last one needs the
    complex ``D`` it contracts.
    """
    kind = _field(data, "kind", "A witness")
    if kind == "contractible":
        if D is None:
            raise ParseError("A contractible witness needs the complex it contracts")
        return contractible_witness(D)
    base = CoefficientRing.parse(str(data.get("ring", "ZZ")))
    if kind == "cyclic":
        return cyclic_witness(base)
    if kind == "unipotent":
        return unipotent_witness(base, int(data.get("n", 1)))
    raise ParseError(f"Unknown witness kind {kind!r}")


def derive_input_from_dict(data):
    """Arguments of ``derive_cube`` from a document.

    Either explicit matrices ``{"C", "D", "alpha", "beta", "G", "h"}`` over the
    ring of ``D``, or ``{"witness": {...}, "variables": [k, ...]}`` using
    multiplication by ``x_k`` as the commuting maps.

    Returns:
        tuple: ``(C, D, alpha, beta, G, hs)``
    """
    if "witness" in data:
        witness = witness_from_dict(data["witness"])
        D = witness.D
        variables = data.get("variables", list(range(1, D.ring.nvars + 1)))
        hs = [scalar_map(D, D.ring.variable(int(k))) for k in variables]
        return witness.C, D, witness.alpha, witness.beta, witness.G, hs
    D = complex_from_dict(_field(data, "D", "A derive document"))
    C = complex_from_dict(_field(data, "C", "A derive document"))
    if C.ring != D.ring:
        raise StructuralError(f"C is over {C.ring} and D over {D.ring}; matrix data needs one ring")
    alpha = map_from_dict(_field(data, "alpha", "A derive document"), C, D)
    beta = map_from_dict(_field(data, "beta", "A derive document"), D, C)
    G = map_from_dict(_field(data, "G", "A derive document"), D, D)
    hs = [map_from_dict(h, D, D) for h in data.get("h", [])]
    return C, D, alpha, beta, G, hs


# ==========================================================
# multicomplex windows


def _position_key(position):
    return ",".join(str(a) for a in position)


def multicomplex_to_dict(E, window=None):
    """Position-indexed dump of a (windowed) multicomplex."""
    data = ring_to_dict(E.ring)
    data["n"] = E.n
    if window is not None:
        data["window"] = window.to_dict()
    data["positions"] = {_position_key(p): E.rank(p) for p in E.positions}
    data["differentials"] = {
        f"{i}|{_position_key(p)}": matrix_to_list(m) for (i, p), m in sorted(E.differentials.items())
    }
    data["labels"] = {
        _position_key(p): [[elements(label) if isinstance(label, int) else str(label), r] for label, r in parts]
        for p, parts in sorted(E.labels.items())
    }
    data["outflow"] = sorted(f"{i}|{_position_key(p)}" for (i, p) in E.outflow)
    return data
