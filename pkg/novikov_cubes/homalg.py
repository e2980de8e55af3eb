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
Graded maps and bounded cochain complexes of finitely generated free modules.

Matrices are sparse: a :class:`SparseMatrix` stores its nonzero entries as
``(row, col) -> LaurentPolynomial``. A block of a graded map in degree ``l``
has rows indexed by the target basis in degree ``l + degree`` and columns by
the source basis in degree ``l``.

Cohomology, solving and ranks go through Smith normal form over the integers,
the rationals or a prime field, computed on numpy object arrays.
"""
import itertools
import logging
from dataclasses import dataclass, field
import numpy as np

from .exceptions import (
    ContractViolation,
    StructuralError,
    UnsupportedRingError,
)
from .rings import CoefficientRing, LaurentRing, specialization_ring

logger = logging.getLogger(__name__)


# ==========================================================
# vectors


def add_vectors(u, v, sign=1):
    """Sum ``u + sign * v`` of sparse vectors ``index -> polynomial``."""
    result = dict(u)
    for i, value in v.items():
        if sign != 1:
            value = -value
        total = result[i] + value if i in result else value
        if total:
            result[i] = total
        else:
            result.pop(i, None)
    return result


def scale_vector(u, scalar):
    result = {}
    for i, value in u.items():
        product = value * scalar
        if product:
            result[i] = product
    return result


def basis_vector(ring, index):
    return {index: ring.one}


# ==========================================================
# sparse matrices


class SparseMatrix:
    """Matrix with Laurent polynomial entries over a :class:`LaurentRing`.

    Args:
        ring (LaurentRing): ring of the entries
        shape (tuple[int, int]): number of rows and columns
        entries (dict): ``(row, col) -> value``; values are coerced into ``ring``
    """

    __slots__ = ("ring", "shape", "entries")

    def __init__(self, ring, shape, entries=None):
        rows, cols = shape
        clean = {}
        for (i, j), value in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise StructuralError(f"Entry ({i}, {j}) outside a {rows}x{cols} matrix")
            value = ring(value)
            if value:
                clean[(i, j)] = value
        self.ring = ring
        self.shape = (rows, cols)
        self.entries = clean

    @classmethod
    def _raw(cls, ring, shape, entries):
        matrix = cls.__new__(cls)
        matrix.ring = ring
        matrix.shape = shape
        matrix.entries = entries
        return matrix

    @classmethod
    def zeros(cls, ring, rows, cols):
        return cls._raw(ring, (rows, cols), {})

    @classmethod
    def identity(cls, ring, size, scalar=1):
        value = ring(scalar)
        if not value:
            return cls.zeros(ring, size, size)
        return cls._raw(ring, (size, size), {(i, i): value for i in range(size)})

    @classmethod
    def from_rows(cls, ring, rows, ncols=None):
        """Build from a dense list of rows; entries may be numbers or strings."""
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise StructuralError(f"Row {i} has {len(row)} entries, expected {ncols}")
            for j, value in enumerate(row):
                entries[(i, j)] = value
        return cls(ring, (nrows, ncols), entries)

    @classmethod
    def from_triples(cls, ring, shape, triples):
        return cls(ring, shape, {(int(i), int(j)): value for i, j, value in triples})

    @classmethod
    def from_dense(cls, ring, array):
        array = np.asarray(array, dtype=object)
        if array.ndim != 2:
            raise StructuralError(f"Expected a 2-dimensional array, got shape {array.shape}")
        entries = {(i, j): array[i, j] for i, j in zip(*np.nonzero(array != 0))}
        return cls(ring, array.shape, entries)

    @classmethod
    def from_columns(cls, ring, nrows, columns):
        entries = {}
        for j, column in enumerate(columns):
            for i, value in column.items():
                entries[(i, j)] = value
        return cls._raw(ring, (nrows, len(columns)), {k: v for k, v in entries.items() if v})

    @property
    def nrows(self):
        return self.shape[0]

    @property
    def ncols(self):
        return self.shape[1]

    def __getitem__(self, index):
        return self.entries.get(index, self.ring.zero)

    def __repr__(self):
        return f"SparseMatrix({self.shape[0]}x{self.shape[1]}, {len(self.entries)} nonzero, {self.ring})"

    def triples(self):
        return [(i, j, self.entries[(i, j)]) for i, j in sorted(self.entries)]

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.ring == other.ring and self.entries == other.entries

    __hash__ = None

    def _check_same(self, other):
        if not isinstance(other, SparseMatrix):
            raise StructuralError(f"Expected a SparseMatrix, got {type(other).__name__}")
        if other.shape != self.shape:
            raise StructuralError(f"Shape mismatch: {self.shape} and {other.shape}")
        if other.ring != self.ring:
            raise StructuralError(f"Ring mismatch: {self.ring} and {other.ring}")

    def __add__(self, other):
        self._check_same(other)
        entries = dict(self.entries)
        for key, value in other.entries.items():
            total = entries[key] + value if key in entries else value
            if total:
                entries[key] = total
            else:
                entries.pop(key, None)
        return SparseMatrix._raw(self.ring, self.shape, entries)

    def __neg__(self):
        return SparseMatrix._raw(self.ring, self.shape, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        """Multiply every entry by a scalar or a ring element."""
        if isinstance(scalar, SparseMatrix):
            raise TypeError("Use @ for matrix products")
        entries = {}
        for key, value in self.entries.items():
            product = value * scalar
            if product:
                entries[key] = product
        return SparseMatrix._raw(self.ring, self.shape, entries)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise StructuralError(f"Cannot multiply {self.shape} by {other.shape}")
        if self.ring != other.ring:
            raise StructuralError(f"Ring mismatch: {self.ring} and {other.ring}")
        by_row = {}
        for (k, j), value in other.entries.items():
            by_row.setdefault(k, []).append((j, value))
        entries = {}
        for (i, k), left in self.entries.items():
            for j, right in by_row.get(k, ()):
                product = left * right
                key = (i, j)
                entries[key] = entries[key] + product if key in entries else product
        entries = {k: v for k, v in entries.items() if v}
        return SparseMatrix._raw(self.ring, (self.nrows, other.ncols), entries)

    def transpose(self):
        return SparseMatrix._raw(
            self.ring, (self.ncols, self.nrows), {(j, i): v for (i, j), v in self.entries.items()}
        )

    def submatrix(self, rows, cols):
        """Rows and columns picked (and reordered) by index lists."""
        row_pos = {r: a for a, r in enumerate(rows)}
        col_pos = {c: b for b, c in enumerate(cols)}
        entries = {
            (row_pos[i], col_pos[j]): v
            for (i, j), v in self.entries.items()
            if i in row_pos and j in col_pos
        }
        return SparseMatrix._raw(self.ring, (len(rows), len(cols)), entries)

    def map_entries(self, fn, ring):
        entries = {}
        for key, value in self.entries.items():
            image = fn(value)
            if image:
                entries[key] = image
        return SparseMatrix._raw(ring, self.shape, entries)

    def extend_scalars(self, ring, offset=0):
        if ring == self.ring:
            return self
        return self.map_entries(lambda p: p.embed(ring, offset), ring)

    def specialize(self, point):
        """Evaluate all entries at ``point``; returns a matrix over the scalars."""
        target = LaurentRing(specialization_ring(self.ring, point), 0)
        return self.map_entries(lambda p: target.constant(p.specialize(point)), target)

    def column(self, j):
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def apply(self, vector):
        result = {}
        by_col = {}
        for (i, j), value in self.entries.items():
            by_col.setdefault(j, []).append((i, value))
        for j, coefficient in vector.items():
            if coefficient.ring != self.ring:
                coefficient = coefficient.embed(self.ring)
            for i, value in by_col.get(j, ()):
                product = value * coefficient
                result[i] = result[i] + product if i in result else product
        return {i: v for i, v in result.items() if v}

    def to_dense(self):
        """numpy object array of scalars; entries must be constants."""
        base = self.ring.base
        array = np.full(self.shape, base.zero, dtype=object)
        for (i, j), value in self.entries.items():
            if not value.is_constant():
                raise UnsupportedRingError(
                    f"Entry ({i}, {j}) = {value} is not a scalar; specialize first"
                )
            array[i, j] = value.constant_value()
        return array


def assemble(ring, row_sizes, col_sizes, blocks):
    """Block matrix from ``(row_block, col_block) -> SparseMatrix``."""
    row_offsets = np.concatenate([[0], np.cumsum(row_sizes, dtype=int)]).tolist()
    col_offsets = np.concatenate([[0], np.cumsum(col_sizes, dtype=int)]).tolist()
    entries = {}
    for (a, b), block in blocks.items():
        if block.shape != (row_sizes[a], col_sizes[b]):
            raise StructuralError(
                f"Block ({a}, {b}) has shape {block.shape}, expected {(row_sizes[a], col_sizes[b])}"
            )
        for (i, j), value in block.entries.items():
            entries[(row_offsets[a] + i, col_offsets[b] + j)] = value
    return SparseMatrix._raw(ring, (row_offsets[-1], col_offsets[-1]), entries)


def kron(left, right):
    """Kronecker product; row index ``i * right.nrows + k``."""
    if left.ring != right.ring:
        raise StructuralError(f"Ring mismatch: {left.ring} and {right.ring}")
    entries = {}
    rr, rc = right.shape
    for (i, j), a in left.entries.items():
        for (k, l), b in right.entries.items():
            product = a * b
            if product:
                entries[(i * rr + k, j * rc + l)] = product
    return SparseMatrix._raw(left.ring, (left.nrows * rr, left.ncols * rc), entries)


# ==========================================================
# graded maps and complexes


def _clean_ranks(ranks):
    return {int(l): int(r) for l, r in ranks.items() if int(r) > 0}


class GradedMap:
    """Map of graded free modules of a fixed degree.

    Args:
        ring (LaurentRing): ring of the matrix entries
        degree (int): the map sends degree ``l`` to degree ``l + degree``
        source_ranks (dict[int, int]): ranks of the source
        target_ranks (dict[int, int]): ranks of the target
        blocks (dict[int, SparseMatrix]): block per source degree; missing
            blocks are zero
        source (FreeComplex): source complex, if known
        target (FreeComplex): target complex, if known
    """

    def __init__(self, ring, degree, source_ranks, target_ranks, blocks=None, source=None, target=None):
        self.ring = ring
        self.degree = int(degree)
        self.source_ranks = _clean_ranks(source_ranks)
        self.target_ranks = _clean_ranks(target_ranks)
        self.source = source
        self.target = target
        self.blocks = {}
        for l, block in (blocks or {}).items():
            l = int(l)
            if not isinstance(block, SparseMatrix):
                block = SparseMatrix.from_rows(ring, block)
            if block.ring != ring:
                raise StructuralError(f"Block in degree {l} is over {block.ring}, expected {ring}")
            expected = (self.target_ranks.get(l + self.degree, 0), self.source_ranks.get(l, 0))
            if block.shape != expected:
                raise StructuralError(
                    f"Block in degree {l} has shape {block.shape}, expected {expected}"
                )
            if not block.is_zero():
                self.blocks[l] = block

    @classmethod
    def between(cls, source, target, degree, blocks=None, ring=None):
        return cls(
            ring or target.ring, degree, source.ranks, target.ranks, blocks, source=source, target=target
        )

    @classmethod
    def zero(cls, ring, degree, source_ranks, target_ranks, source=None, target=None):
        return cls(ring, degree, source_ranks, target_ranks, {}, source=source, target=target)

    @classmethod
    def identity(cls, complex_, scalar=1):
        ring = complex_.ring
        blocks = {l: SparseMatrix.identity(ring, r, scalar) for l, r in complex_.ranks.items()}
        return cls(ring, 0, complex_.ranks, complex_.ranks, blocks, source=complex_, target=complex_)

    def _like(self, blocks, degree=None, target_ranks=None, source_ranks=None, source=None, target=None):
        gm = GradedMap.__new__(GradedMap)
        gm.ring = self.ring
        gm.degree = self.degree if degree is None else degree
        gm.source_ranks = self.source_ranks if source_ranks is None else source_ranks
        gm.target_ranks = self.target_ranks if target_ranks is None else target_ranks
        gm.source = self.source if source is None else source
        gm.target = self.target if target is None else target
        gm.blocks = {l: b for l, b in blocks.items() if not b.is_zero()}
        return gm

    def __repr__(self):
        return f"GradedMap(degree={self.degree}, blocks={sorted(self.blocks)}, ring={self.ring})"

    def block(self, l):
        if l in self.blocks:
            return self.blocks[l]
        return SparseMatrix.zeros(
            self.ring, self.target_ranks.get(l + self.degree, 0), self.source_ranks.get(l, 0)
        )

    def is_zero(self):
        return not self.blocks

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.ring == other.ring
            and self.source_ranks == other.source_ranks
            and self.target_ranks == other.target_ranks
            and self.blocks == other.blocks
        )

    __hash__ = None

    def _check_parallel(self, other):
        if (
            self.degree != other.degree
            or self.source_ranks != other.source_ranks
            or self.target_ranks != other.target_ranks
        ):
            raise StructuralError(f"Cannot add {self!r} and {other!r}: different shapes or degrees")

    def __add__(self, other):
        self._check_parallel(other)
        blocks = dict(self.blocks)
        for l, block in other.blocks.items():
            blocks[l] = blocks[l] + block if l in blocks else block
        return self._like(blocks)

    def __neg__(self):
        return self._like({l: -b for l, b in self.blocks.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return self._like({l: b * scalar for l, b in self.blocks.items()})

    __rmul__ = __mul__

    def __matmul__(self, other):
        """Composite ``self ∘ other``."""
        if not isinstance(other, GradedMap):
            return NotImplemented
        if other.target_ranks != self.source_ranks:
            raise StructuralError("Cannot compose graded maps: ranks do not match")
        blocks = {}
        for l, block in other.blocks.items():
            mid = l + other.degree
            if mid in self.blocks:
                blocks[l] = self.blocks[mid] @ block
        return self._like(
            blocks,
            degree=self.degree + other.degree,
            source_ranks=other.source_ranks,
            target_ranks=self.target_ranks,
            source=other.source,
            target=self.target,
        )

    def apply(self, l, vector):
        if l not in self.blocks:
            return {}
        return self.blocks[l].apply(vector)

    def extend_scalars(self, ring, offset=0, source=None, target=None):
        gm = self._like({l: b.extend_scalars(ring, offset) for l, b in self.blocks.items()})
        gm.ring = ring
        gm.source = source
        gm.target = target
        return gm

    def specialize(self, point, source=None, target=None):
        gm = self._like({l: b.specialize(point) for l, b in self.blocks.items()})
        gm.ring = LaurentRing(specialization_ring(self.ring, point), 0)
        gm.source = source
        gm.target = target
        return gm

    def cochain_defect(self, source=None, target=None):
        """First degree ``l`` where ``d f != (-1)^deg f d``, or ``None``."""
        source = source or self.source
        target = target or self.target
        if source is None or target is None:
            raise StructuralError("Source and target complexes are needed to test the cochain identity")
        if source.ring != self.ring:
            source = source.extend_scalars(self.ring)
        if target.ring != self.ring:
            target = target.extend_scalars(self.ring)
        sign = -1 if self.degree % 2 else 1
        for l in sorted(set(self.source_ranks) | {l - 1 for l in self.source_ranks}):
            left = target.d(l + self.degree) @ self.block(l)
            right = self.block(l + 1) @ source.d(l)
            if left != right * sign:
                return l
        return None


class FreeComplex:
    """Bounded cochain complex of finitely generated free modules.

    Args:
        ring (LaurentRing): ring of the modules
        ranks (dict[int, int]): rank per cohomological degree
        differential (dict[int, SparseMatrix] or GradedMap): ``d^l`` per degree
        check (bool): verify ``d∘d = 0`` on construction
    """

    def __init__(self, ring, ranks, differential=None, check=True):
        if not isinstance(ring, LaurentRing):
            ring = LaurentRing(ring, 0)
        self.ring = ring
        self.ranks = _clean_ranks(ranks)
        if isinstance(differential, GradedMap):
            blocks = differential.blocks
        else:
            blocks = differential or {}
        self.differential = GradedMap(ring, 1, self.ranks, self.ranks, blocks, source=self, target=self)
        if check and not check_complex(self):
            raise StructuralError("The differential does not square to zero")

    @classmethod
    def zero(cls, ring):
        return cls(ring, {})

    @classmethod
    def concentrated(cls, ring, degree, rank=1):
        return cls(ring, {degree: rank})

    def __repr__(self):
        return f"FreeComplex(ranks={dict(sorted(self.ranks.items()))}, ring={self.ring})"

    @property
    def degrees(self):
        return sorted(self.ranks)

    def rank(self, l):
        return self.ranks.get(l, 0)

    def d(self, l):
        return self.differential.block(l)

    def is_zero(self):
        return not self.ranks

    def __eq__(self, other):
        if not isinstance(other, FreeComplex):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.ranks == other.ranks
            and self.differential.blocks == other.differential.blocks
        )

    __hash__ = None

    def identity(self, scalar=1):
        return GradedMap.identity(self, scalar)

    def zero_map(self, target, degree=0):
        return GradedMap.zero(target.ring, degree, self.ranks, target.ranks, source=self, target=target)

    def extend_scalars(self, ring, offset=0):
        return FreeComplex(
            ring,
            self.ranks,
            {l: b.extend_scalars(ring, offset) for l, b in self.differential.blocks.items()},
            check=False,
        )

    def specialize(self, point):
        ring = LaurentRing(specialization_ring(self.ring, point), 0)
        return FreeComplex(
            ring, self.ranks, {l: b.specialize(point) for l, b in self.differential.blocks.items()}, check=False
        )

    def direct_sum(self, other):
        if other.ring != self.ring:
            raise StructuralError(f"Ring mismatch: {self.ring} and {other.ring}")
        degrees = set(self.ranks) | set(other.ranks)
        ranks = {l: self.rank(l) + other.rank(l) for l in degrees}
        blocks = {}
        for l in degrees:
            blocks[l] = assemble(
                self.ring,
                [self.rank(l + 1), other.rank(l + 1)],
                [self.rank(l), other.rank(l)],
                {(0, 0): self.d(l), (1, 1): other.d(l)},
            )
        return FreeComplex(self.ring, ranks, blocks, check=False)


def check_complex(C):
    """Whether every composite ``d^{l+1} ∘ d^l`` vanishes."""
    for l in C.degrees:
        if not (C.d(l + 1) @ C.d(l)).is_zero():
            logger.debug("d∘d does not vanish in degree %d", l)
            return False
    return True


def shift(C, k):
    """``shift(C, k)^l = C^{l+k}`` with differential multiplied by ``(-1)^k``."""
    sign = -1 if k % 2 else 1
    ranks = {l - k: r for l, r in C.ranks.items()}
    blocks = {l - k: b * sign for l, b in C.differential.blocks.items()}
    return FreeComplex(C.ring, ranks, blocks, check=False)


# ==========================================================
# Smith normal form


def _pid(ring):
    base = ring.base if isinstance(ring, LaurentRing) else ring
    if not base.is_pid:
        raise UnsupportedRingError(f"{base} is not a principal ideal domain")
    return base


def _as_array(A, base):
    if isinstance(A, SparseMatrix):
        array = A.to_dense()
    else:
        array = np.array(A, dtype=object)
        if array.ndim == 1:
            array = array.reshape(1, -1) if array.size else np.zeros((0, 0), dtype=object)
    array = np.array([[base(v) for v in row] for row in array], dtype=object).reshape(array.shape)
    return array


def _eye(n, base):
    eye = np.full((n, n), base.zero, dtype=object)
    for i in range(n):
        eye[i, i] = base.one
    return eye


def exgcd(a, b):
    """2x2 integer matrix ``M`` of determinant 1 with ``M @ [a, b] = [g, 0]``.

    If ``a`` divides ``b`` the first row is ``[1, 0]`` so the pivot is kept.
    """
    if b % a == 0:
        return np.array([[1, 0], [-(b // a), 1]], dtype=object)
    x0, x1, y0, y1, r0, r1 = 1, 0, 0, 1, a, b
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return np.array([[x0, y0], [-(b // r0), a // r0]], dtype=object)


def _integer_diagonalize(D, U, V):
    m, n = D.shape
    t = 0
    while t < min(m, n):
        nonzero = np.argwhere(D[t:, t:] != 0)
        if not len(nonzero):
            break
        i, j = min(nonzero.tolist(), key=lambda ij: abs(D[t + ij[0], t + ij[1]]))
        i, j = i + t, j + t
        D[[t, i]] = D[[i, t]]
        U[[t, i]] = U[[i, t]]
        D[:, [t, j]] = D[:, [j, t]]
        V[:, [t, j]] = V[:, [j, t]]
        while True:
            for i in range(t + 1, m):
                if D[i, t] != 0:
                    M = exgcd(D[t, t], D[i, t])
                    D[[t, i]] = M @ D[[t, i]]
                    U[[t, i]] = M @ U[[t, i]]
            clean = True
            for j in range(t + 1, n):
                if D[t, j] != 0:
                    M = exgcd(D[t, t], D[t, j])
                    D[:, [t, j]] = D[:, [t, j]] @ M.T
                    V[:, [t, j]] = V[:, [t, j]] @ M.T
            if any(D[i, t] != 0 for i in range(t + 1, m)):
                clean = False
            if not clean:
                continue
            # divisibility chain
            pivot = D[t, t]
            rest = np.argwhere(D[t + 1:, t + 1:] % pivot != 0)
            if len(rest):
                i = rest[0][0] + t + 1
                D[t] = D[t] + D[i]
                U[t] = U[t] + U[i]
                continue
            break
        if D[t, t] < 0:
            D[t] = -D[t]
            U[t] = -U[t]
        t += 1


def _field_diagonalize(D, U, V, base):
    m, n = D.shape
    reduce = np.vectorize(base.reduce, otypes=[object])
    t = 0
    while t < min(m, n):
        nonzero = np.argwhere(D[t:, t:] != 0)
        if not len(nonzero):
            break
        i, j = nonzero[0][0] + t, nonzero[0][1] + t
        D[[t, i]] = D[[i, t]]
        U[[t, i]] = U[[i, t]]
        D[:, [t, j]] = D[:, [j, t]]
        V[:, [t, j]] = V[:, [j, t]]
        inverse = base.inverse(D[t, t])
        D[t] = reduce(D[t] * inverse)
        U[t] = reduce(U[t] * inverse)
        for i in range(m):
            if i != t and D[i, t] != 0:
                c = D[i, t]
                D[i] = reduce(D[i] - c * D[t])
                U[i] = reduce(U[i] - c * U[t])
        for j in range(t + 1, n):
            if D[t, j] != 0:
                c = D[t, j]
                D[:, j] = reduce(D[:, j] - c * D[:, t])
                V[:, j] = reduce(V[:, j] - c * V[:, t])
        t += 1


@dataclass
class SmithForm:
    """Result of :func:`smith_normal_form`: ``U @ A @ V == S``."""

    S: np.ndarray
    U: np.ndarray
    V: np.ndarray
    ring: CoefficientRing

    @property
    def invariants(self):
        """Nonzero diagonal entries ``s1 | s2 | ...``."""
        k = min(self.S.shape)
        return [self.S[i, i] for i in range(k) if self.S[i, i] != 0]

    @property
    def rank(self):
        return len(self.invariants)


def smith_normal_form(A, ring=None):
    """Smith normal form of a matrix over a principal ideal domain.

    Args:
        A (SparseMatrix or array_like): the matrix; array input is read over
            ``ring`` (integers by default)
        ring (CoefficientRing or LaurentRing): overrides the ring of ``A``

    Returns:
        SmithForm: diagonal ``S`` with divisibility chain and invertible ``U``,
        ``V`` with ``U @ A @ V == S``

    Raises:
        UnsupportedRingError: for ``ZZ/m`` with composite ``m`` or non-scalar entries
    """
    if ring is None:
        ring = A.ring if isinstance(A, SparseMatrix) else CoefficientRing.integers()
    base = _pid(ring)
    D = _as_array(A, base)
    m, n = D.shape
    U, V = _eye(m, base), _eye(n, base)
    if base.is_field:
        _field_diagonalize(D, U, V, base)
    else:
        _integer_diagonalize(D, U, V)
    return SmithForm(D, U, V, base)


def matrix_rank(A, ring=None):
    return smith_normal_form(A, ring).rank


def kernel_basis(A, ring=None):
    """Basis of the kernel (saturated over the integers) as a list of arrays."""
    snf = smith_normal_form(A, ring)
    return [snf.V[:, j].copy() for j in range(snf.rank, snf.V.shape[1])]


def solve_linear(A, y, ring=None):
    """A solution ``x`` of ``A @ x == y`` over the ring, or ``None``.

    Over the integers solvability is decided exactly from the Smith form.
    """
    snf = smith_normal_form(A, ring)
    base = snf.ring
    m, n = snf.S.shape
    y = np.array([base(v) for v in np.asarray(y, dtype=object).reshape(-1)], dtype=object)
    if y.shape[0] != m:
        raise StructuralError(f"Right-hand side has length {y.shape[0]}, expected {m}")
    w = snf.U @ y if m else y
    w = np.array([base.reduce(v) for v in w], dtype=object)
    z = np.full(n, base.zero, dtype=object)
    r = snf.rank
    for i in range(m):
        s = snf.S[i, i] if i < min(m, n) else 0
        if i < r:
            if base.is_field:
                z[i] = base.reduce(w[i] * base.inverse(s))
            elif w[i] % s:
                return None
            else:
                z[i] = w[i] // s
        elif w[i] != 0:
            return None
    x = snf.V @ z if n else z
    return np.array([base.reduce(v) for v in x], dtype=object)


# ==========================================================
# cohomology


@dataclass(frozen=True)
class DegreeCohomology:
    free_rank: int
    torsion: tuple = ()

    def is_zero(self):
        return self.free_rank == 0 and not self.torsion


@dataclass
class CohomologyReport:
    """Free rank and torsion divisors of ``H^l`` for each degree of a complex."""

    ring: CoefficientRing
    degrees: dict = field(default_factory=dict)

    def __getitem__(self, l):
        return self.degrees.get(l, DegreeCohomology(0))

    @property
    def is_acyclic(self):
        return all(h.is_zero() for h in self.degrees.values())

    def betti(self):
        return {l: h.free_rank for l, h in self.degrees.items() if h.free_rank}

    def to_dict(self):
        return {
            "ring": str(self.ring),
            "cohomology": {
                str(l): {"free_rank": h.free_rank, "torsion": [str(t) for t in h.torsion]}
                for l, h in sorted(self.degrees.items())
            },
            "acyclic": self.is_acyclic,
        }


def cohomology(C):
    """Cohomology of a complex over a principal ideal domain.

    Raises:
        UnsupportedRingError: for composite moduli or Laurent rings with
            variables
    """
    base = _pid(C.ring)
    if C.ring.nvars and any(
        not v.is_constant() for b in C.differential.blocks.values() for v in b.entries.values()
    ):
        raise UnsupportedRingError(f"Cohomology over {C.ring} needs a specialization first")
    forms = {}
    for l in set(C.ranks) | {l - 1 for l in C.ranks}:
        block = C.d(l)
        if block.nrows and block.ncols:
            forms[l] = smith_normal_form(block, base)
    report = CohomologyReport(base)
    for l in C.degrees:
        outgoing = forms[l].rank if l in forms else 0
        incoming = forms.get(l - 1)
        rank_in = incoming.rank if incoming else 0
        torsion = ()
        if incoming is not None and not base.is_field:
            torsion = tuple(abs(s) for s in incoming.invariants if not base.is_unit(s))
        report.degrees[l] = DegreeCohomology(C.rank(l) - outgoing - rank_in, torsion)
    return report


def is_acyclic(C):
    return cohomology(C).is_acyclic


# ==========================================================
# cones and quasi-isomorphisms


def mapping_cone(phi, source=None, target=None):
    """Mapping cone ``C^l ⊕ C'^{l-1}`` with differential ``[[d, 0], [φ, -d']]``.

    Raises:
        ContractViolation: if ``phi`` is not a cochain map
    """
    source = source or phi.source
    target = target or phi.target
    if source is None or target is None:
        raise StructuralError("mapping_cone needs the source and target complexes")
    if phi.degree != 0:
        raise StructuralError(f"Cochain maps have degree 0, got {phi.degree}")
    defect = phi.cochain_defect(source, target)
    if defect is not None:
        raise ContractViolation(f"Map is not a cochain map in degree {defect}", where=defect)
    ring = phi.ring
    if source.ring != ring:
        source = source.extend_scalars(ring)
    if target.ring != ring:
        target = target.extend_scalars(ring)
    degrees = set(source.ranks) | {l + 1 for l in target.ranks}
    ranks = {l: source.rank(l) + target.rank(l - 1) for l in degrees}
    blocks = {}
    for l in degrees:
        blocks[l] = assemble(
            ring,
            [source.rank(l + 1), target.rank(l)],
            [source.rank(l), target.rank(l - 1)],
            {(0, 0): source.d(l), (1, 0): phi.block(l), (1, 1): -target.d(l - 1)},
        )
    return FreeComplex(ring, ranks, blocks)


def is_quasi_iso(phi, points=None, source=None, target=None):
    """Whether ``phi`` induces isomorphisms on cohomology.

    Over a principal ideal domain the cone is tested for acyclicity exactly.
    Over a Laurent ring the cone is specialized at each of ``points``; then
    ``True`` means "not falsified".

    Raises:
        UnsupportedRingError: Laurent ring without specialization points
    """
    cone = mapping_cone(phi, source, target)
    constant = all(v.is_constant() for b in cone.differential.blocks.values() for v in b.entries.values())
    if not cone.ring.nvars or constant:
        return is_acyclic(cone)
    if not points:
        raise UnsupportedRingError(f"Quasi-isomorphism over {cone.ring} needs specialization points")
    for point in points:
        if not is_acyclic(cone.specialize(point)):
            logger.debug("cone not acyclic at %s", point)
            return False
    return True


# ==========================================================
# tensor products


class TensorProduct:
    """``C1 ⊗_R C2`` with ``d(a⊗b) = da⊗b + (-1)^p a⊗db`` for ``a`` in degree ``p``.

    The variables of ``C1`` come first in the ring of the product. In each
    degree the summands ``C1^p ⊗ C2^q`` are ordered by ``p`` and the basis
    element ``e_i ⊗ e_j`` sits at ``offset + i * rank(C2^q) + j``.
    """

    def __init__(self, left, right):
        if left.ring.base != right.ring.base:
            raise StructuralError(f"Base rings differ: {left.ring} and {right.ring}")
        self.left = left
        self.right = right
        self.ring = LaurentRing(left.ring.base, left.ring.nvars + right.ring.nvars)
        self.layout = {}
        for p, q in itertools.product(left.degrees, right.degrees):
            self.layout.setdefault(p + q, []).append((p, q))
        self.offsets = {}
        ranks = {}
        for n, pairs in self.layout.items():
            pairs.sort()
            offset = 0
            for p, q in pairs:
                self.offsets[(p, q)] = offset
                offset += left.rank(p) * right.rank(q)
            ranks[n] = offset
        blocks = {}
        for n, pairs in self.layout.items():
            entries = {}
            for p, q in pairs:
                one_left = SparseMatrix.identity(left.ring, left.rank(p))
                one_right = SparseMatrix.identity(right.ring, right.rank(q))
                pieces = []
                if (p + 1, q) in self.offsets:
                    pieces.append(((p + 1, q), kron(self._lift_left(left.d(p)), self._lift_right(one_right))))
                if (p, q + 1) in self.offsets:
                    sign = -1 if p % 2 else 1
                    pieces.append(((p, q + 1), kron(self._lift_left(one_left), self._lift_right(right.d(q))) * sign))
                for key, block in pieces:
                    row0, col0 = self.offsets[key], self.offsets[(p, q)]
                    for (i, j), value in block.entries.items():
                        entries[(row0 + i, col0 + j)] = value
            blocks[n] = SparseMatrix._raw(self.ring, (ranks.get(n + 1, 0), ranks[n]), entries)
        self.complex = FreeComplex(self.ring, ranks, blocks, check=False)

    def _lift_left(self, matrix):
        return matrix.extend_scalars(self.ring, 0)

    def _lift_right(self, matrix):
        return matrix.extend_scalars(self.ring, self.left.ring.nvars)

    def index(self, p, i, q, j):
        return self.offsets[(p, q)] + i * self.right.rank(q) + j

    def split(self, n, index):
        """Inverse of :meth:`index`: ``(p, i, q, j)``."""
        for p, q in self.layout.get(n, ()):
            offset = self.offsets[(p, q)]
            size = self.left.rank(p) * self.right.rank(q)
            if offset <= index < offset + size:
                i, j = divmod(index - offset, self.right.rank(q))
                return p, i, q, j
        raise StructuralError(f"Index {index} is outside degree {n} of the tensor product")

    def tensor_vectors(self, p, u, q, v):
        """``u ⊗ v`` for ``u`` in degree ``p`` of the left factor and ``v`` in
        degree ``q`` of the right factor."""
        result = {}
        for i, a in u.items():
            a = a.embed(self.ring, 0)
            for j, b in v.items():
                value = a * b.embed(self.ring, self.left.ring.nvars)
                if value:
                    result[self.index(p, i, q, j)] = value
        return result


# ==========================================================
# R-linear operators on free Laurent modules


class MonomialOperator:
    """R-linear map between free Laurent modules given on monomial basis
    elements ``x^a e_i`` of the source.

    Args:
        degree (int): cohomological degree of the map
        rule (callable): ``rule(l, i, a)`` returns the image of ``x^a e_i`` in
            degree ``l`` as a sparse vector over ``ring``
        ring (LaurentRing): ring of the image vectors
    """

    def __init__(self, degree, rule, ring):
        self.degree = degree
        self.rule = rule
        self.ring = ring
        self._images = {}

    def image(self, l, index, exponent):
        key = (l, index, exponent)
        if key not in self._images:
            self._images[key] = self.rule(l, index, exponent)
        return self._images[key]

    def apply(self, l, vector):
        result = {}
        for i, poly in vector.items():
            for exponent, coefficient in poly.terms.items():
                for j, value in self.image(l, i, exponent).items():
                    term = value.scale(coefficient)
                    result[j] = result[j] + term if j in result else term
        return {j: v for j, v in result.items() if v}


class OperatorChain:
    """Composite ``ops[0] ∘ ops[1] ∘ ...`` of objects with ``apply(l, vector)``."""

    def __init__(self, *ops):
        self.ops = ops
        self.degree = sum(op.degree for op in ops)

    def apply(self, l, vector):
        for op in reversed(self.ops):
            vector = op.apply(l, vector)
            l += op.degree
            if not vector:
                return {}
        return vector


def sample_vectors(ring, rank, radius):
    """Monomial basis vectors ``x^a e_i`` with ``|a_k| <= radius``."""
    if not ring.nvars:
        for i in range(rank):
            yield {i: ring.one}
        return
    box = range(-radius, radius + 1)
    for i in range(rank):
        for exponent in itertools.product(box, repeat=ring.nvars):
            yield {i: ring.monomial(exponent)}


# ==========================================================
# direct-sum decompositions


class SummandIndex:
    """Ordered decomposition of a graded free module into keyed summands.

    Args:
        keys (list): summand keys in block order
        ranks (dict): ``key -> {total degree: rank}``
    """

    def __init__(self, keys, ranks):
        self.keys = list(keys)
        self.ranks = {key: {l: r for l, r in ranks.get(key, {}).items() if r} for key in self.keys}
        self.offsets = {}
        self.totals = {}
        for key in self.keys:
            for l, r in sorted(self.ranks[key].items()):
                self.offsets.setdefault(l, {})[key] = self.totals.get(l, 0)
                self.totals[l] = self.totals.get(l, 0) + r

    def __repr__(self):
        return f"SummandIndex({len(self.keys)} summands, ranks={dict(sorted(self.totals.items()))})"

    def rank(self, key, l):
        return self.ranks.get(key, {}).get(l, 0)

    def span(self, l, key):
        """Index range of summand ``key`` inside degree ``l``."""
        start = self.offsets.get(l, {}).get(key)
        if start is None:
            return range(0)
        return range(start, start + self.ranks[key][l])

    def locate(self, l, index):
        for key, start in self.offsets.get(l, {}).items():
            if start <= index < start + self.ranks[key][l]:
                return key, index - start
        raise StructuralError(f"Index {index} is outside degree {l}")

    def restrict(self, keep):
        keep = set(keep)
        return SummandIndex([k for k in self.keys if k in keep], self.ranks)

    def keys_in(self, l):
        return list(self.offsets.get(l, {}))


def assemble_graded(ring, source_index, target_index, degree, pieces):
    """Graded map whose ``(target, source)`` block in source degree ``l`` is
    given by ``pieces``: an iterable of ``(l, target_key, source_key, matrix)``."""
    entries = {}
    for l, target_key, source_key, matrix in pieces:
        if matrix.is_zero():
            continue
        rows = target_index.span(l + degree, target_key)
        cols = source_index.span(l, source_key)
        if matrix.shape != (len(rows), len(cols)):
            raise StructuralError(
                f"Block {target_key}<-{source_key} in degree {l} has shape {matrix.shape}, "
                f"expected {(len(rows), len(cols))}"
            )
        block = entries.setdefault(l, {})
        for (i, j), value in matrix.entries.items():
            key = (rows[i], cols[j])
            total = block[key] + value if key in block else value
            if total:
                block[key] = total
            else:
                block.pop(key, None)
    blocks = {
        l: SparseMatrix._raw(ring, (target_index.totals.get(l + degree, 0), source_index.totals.get(l, 0)), e)
        for l, e in entries.items()
    }
    return GradedMap(ring, degree, source_index.totals, target_index.totals, blocks)


def extract_block(matrix, target_index, source_index, l, degree, target_key, source_key):
    rows = list(target_index.span(l + degree, target_key))
    cols = list(source_index.span(l, source_key))
    return matrix.submatrix(rows, cols)


class TotalisedComplex:
    """A complex together with the summand decomposition it was assembled from."""

    def __init__(self, complex_, index):
        self.complex = complex_
        self.index = index

    def __repr__(self):
        return f"TotalisedComplex({self.complex!r}, {len(self.index.keys)} summands)"

    @property
    def ring(self):
        return self.complex.ring

    def block(self, l, target_key, source_key):
        """Block ``D_{target, source}`` of the differential on degree ``l``."""
        return extract_block(self.complex.d(l), self.index, self.index, l, 1, target_key, source_key)

    def map_block(self, phi, l, target, target_key, source_key):
        """Block of a graded map ``phi`` from this totalisation to ``target``."""
        return extract_block(phi.block(l), target.index, self.index, l, phi.degree, target_key, source_key)

    def restrict(self, keep):
        """Sub- or quotient complex on the summands in ``keep``; the caller is
        responsible for ``keep`` being closed in the right direction."""
        index = self.index.restrict(keep)
        blocks = {}
        for l in set(index.totals) | {l - 1 for l in index.totals}:
            rows = [i for key in index.keys for i in self.index.span(l + 1, key)]
            cols = [j for key in index.keys for j in self.index.span(l, key)]
            if rows and cols:
                blocks[l] = self.complex.d(l).submatrix(rows, cols)
        return TotalisedComplex(FreeComplex(self.ring, index.totals, blocks, check=False), index)

    def relabel(self, rename, order=None):
        """Same complex with summand keys renamed by ``rename`` and reordered
        by ``order`` (a sort key on the new names)."""
        renamed = {key: rename(key) for key in self.index.keys}
        keys = sorted(renamed, key=lambda k: order(renamed[k])) if order else list(self.index.keys)
        index = SummandIndex([renamed[k] for k in keys], {renamed[k]: self.index.ranks[k] for k in keys})
        blocks = {}
        for l in set(index.totals) | {l - 1 for l in index.totals}:
            rows = [i for key in keys for i in self.index.span(l + 1, key)]
            cols = [j for key in keys for j in self.index.span(l, key)]
            if rows and cols:
                blocks[l] = self.complex.d(l).submatrix(rows, cols)
        return TotalisedComplex(FreeComplex(self.ring, index.totals, blocks, check=False), index)
