"""Exact arithmetic in Z/p^k and dense matrices over it.

Elements are canonical residues in ``[0, p^k)`` held as plain Python ints,
so every operation is exact and hashable.  Matrices are immutable tuples of
tuples in row-major order.  All elimination routines pivot on unit entries
only, which is the correct notion of pivoting over a local ring: a square
matrix over Z/p^k is invertible exactly when its reduction mod p is.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

from .errors import DomainError, NonUnit, SingularMatrix

Vector = Tuple[int, ...]

MAX_MODULUS = 1 << 31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def binom2(e: int) -> int:
    """e*(e-1)/2 as an exact integer, valid for negative e as well."""
    return e * (e - 1) // 2


@dataclass(frozen=True)
class LocalRingSpec:
    """The local ring Z/p^k with maximal ideal (p) and residue field F_p."""

    p: int
    k: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise DomainError("p must be prime", p=self.p)
        if self.k < 1:
            raise DomainError("k must be at least 1", k=self.k)
        if self.p ** self.k > MAX_MODULUS:
            raise DomainError("modulus exceeds 2^31", p=self.p, k=self.k)

    @property
    def modulus(self) -> int:
        return self.p ** self.k

    @property
    def residue_field(self) -> "LocalRingSpec":
        return LocalRingSpec(self.p, 1)

    @property
    def is_field(self) -> bool:
        return self.k == 1

    def reduce(self, a: int) -> int:
        return a % self.modulus

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.modulus

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.modulus

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.modulus

    def neg(self, a: int) -> int:
        return (-a) % self.modulus

    def is_unit(self, a: int) -> bool:
        return a % self.p != 0

    def inv(self, a: int) -> int:
        """Inverse of a unit, by extended Euclid on (a, p^k)."""
        a = self.reduce(a)
        if not self.is_unit(a):
            raise NonUnit("element is divisible by p", value=a, p=self.p, k=self.k)
        g, s, _ = _egcd(a, self.modulus)
        assert g == 1
        return s % self.modulus

    def valuation(self, a: int) -> Optional[int]:
        """Largest e <= k with p^e | a; ``None`` marks +infinity (a = 0)."""
        a = self.reduce(a)
        if a == 0:
            return None
        e = 0
        while a % self.p == 0:
            a //= self.p
            e += 1
        return e

    def two_torsion_elements(self) -> Tuple[int, ...]:
        """Residues d with 2d = 0; the admissible Gram diagonal values."""
        if self.p == 2:
            return (0, self.modulus // 2)
        return (0,)

    def elements(self) -> range:
        return range(self.modulus)


def _egcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, s, t) with g = gcd(a, b) and s*a + t*b = g."""
    if b == 0:
        return a, 1, 0
    g, s, t = _egcd(b, a % b)
    return g, t, s - (a // b) * t


def int_valuation(a: int, p: int) -> Optional[int]:
    """p-adic valuation of an arbitrary integer; ``None`` for a = 0."""
    if a == 0:
        return None
    a = abs(a)
    e = 0
    while a % p == 0:
        a //= p
        e += 1
    return e


@dataclass(frozen=True)
class MatrixR:
    """Immutable row-major matrix with canonical residues over a fixed ring."""

    ring: LocalRingSpec
    entries: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, ring: LocalRingSpec, rows: Sequence[Sequence[int]]) -> "MatrixR":
        q = ring.modulus
        ents = tuple(tuple(x % q for x in row) for row in rows)
        if not ents or not ents[0]:
            raise DomainError("matrix must be nonempty")
        width = len(ents[0])
        if any(len(row) != width for row in ents):
            raise DomainError("ragged rows")
        return cls(ring, ents)

    @classmethod
    def identity(cls, ring: LocalRingSpec, n: int) -> "MatrixR":
        return cls.from_rows(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring: LocalRingSpec, rows: int, cols: int) -> "MatrixR":
        return cls.from_rows(ring, [[0] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, ring: LocalRingSpec, cols: Sequence[Sequence[int]]) -> "MatrixR":
        return cls.from_rows(ring, [[col[i] for col in cols] for i in range(len(cols[0]))])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> Tuple[Vector, ...]:
        return tuple(self.column(j) for j in range(self.cols))

    def transpose(self) -> "MatrixR":
        return MatrixR(self.ring, tuple(zip(*self.entries)))

    def add(self, other: "MatrixR") -> "MatrixR":
        q = self.ring.modulus
        return MatrixR(self.ring, tuple(
            tuple((a + b) % q for a, b in zip(r1, r2))
            for r1, r2 in zip(self.entries, other.entries)))

    def neg(self) -> "MatrixR":
        q = self.ring.modulus
        return MatrixR(self.ring, tuple(tuple((-a) % q for a in row) for row in self.entries))

    def scale(self, c: int) -> "MatrixR":
        q = self.ring.modulus
        return MatrixR(self.ring, tuple(tuple((c * a) % q for a in row) for row in self.entries))

    def mul(self, other: "MatrixR") -> "MatrixR":
        if self.cols != other.rows:
            raise DomainError("dimension mismatch", left=self.cols, right=other.rows)
        q = self.ring.modulus
        ot = tuple(zip(*other.entries))
        return MatrixR(self.ring, tuple(
            tuple(sum(a * b for a, b in zip(row, col)) % q for col in ot)
            for row in self.entries))

    def matvec(self, v: Sequence[int]) -> Vector:
        q = self.ring.modulus
        return tuple(sum(a * b for a, b in zip(row, v)) % q for row in self.entries)

    def vecmat(self, v: Sequence[int]) -> Vector:
        q = self.ring.modulus
        return tuple(
            sum(v[i] * self.entries[i][j] for i in range(self.rows)) % q
            for j in range(self.cols))

    def is_zero(self) -> bool:
        return all(a == 0 for row in self.entries for a in row)

    def to_lists(self) -> list:
        return [list(row) for row in self.entries]


def reduce_mod_p(m: MatrixR) -> MatrixR:
    """Entrywise residue mod p: the reduction map onto the residue field."""
    field = m.ring.residue_field
    p = m.ring.p
    return MatrixR(field, tuple(tuple(a % p for a in row) for row in m.entries))


def det_mod_p(m: MatrixR) -> int:
    """Determinant of the mod-p reduction, by Gaussian elimination over F_p."""
    if not m.is_square:
        raise DomainError("determinant of a non-square matrix", rows=m.rows, cols=m.cols)
    p = m.ring.p
    a = [[x % p for x in row] for row in m.entries]
    n = len(a)
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] % p != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = (-det) % p
        det = (det * a[col][col]) % p
        inv = pow(a[col][col], p - 2, p) if p > 2 else a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = (a[r][col] * inv) % p
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[col])]
    return det % p


def invert_unit(m: MatrixR) -> MatrixR:
    """Inverse over Z/p^k by Gauss-Jordan elimination on unit pivots.

    Deterministic pivot choice: the lowest-index remaining row whose entry in
    the working column is a unit.
    """
    if not m.is_square:
        raise DomainError("inverse of a non-square matrix", rows=m.rows, cols=m.cols)
    ring = m.ring
    q = ring.modulus
    n = m.rows
    a = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(m.entries)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if ring.is_unit(a[r][col])), None)
        if pivot is None:
            raise SingularMatrix("no unit pivot in column", column=col)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
        inv = ring.inv(a[col][col])
        a[col] = [(inv * x) % q for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [(x - f * y) % q for x, y in zip(a[r], a[col])]
    return MatrixR.from_rows(ring, [row[n:] for row in a])


def solve_row(lmbda: MatrixR, rhs: Sequence[int]) -> Vector:
    """Solve v * lmbda = rhs exactly over the ring.

    Works whenever lmbda is invertible over the local ring (its reduction mod
    p is invertible), by eliminating the transposed system on unit pivots.
    """
    if not lmbda.is_square or len(rhs) != lmbda.rows:
        raise DomainError("shape mismatch in solve_row", n=lmbda.rows, rhs=len(rhs))
    ring = lmbda.ring
    q = ring.modulus
    n = lmbda.rows
    # Augmented transposed system: lmbda^T v^T = rhs^T.
    a = [list(col) + [rhs[i] % q] for i, col in enumerate(zip(*lmbda.entries))]
    for col in range(n):
        pivot = next((r for r in range(col, n) if ring.is_unit(a[r][col])), None)
        if pivot is None:
            raise SingularMatrix("no unit pivot in column", column=col)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
        inv = ring.inv(a[col][col])
        a[col] = [(inv * x) % q for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [(x - f * y) % q for x, y in zip(a[r], a[col])]
    return tuple(a[i][n] for i in range(n))


# Field-only elimination helpers (require k = 1).

def _require_field(ring: LocalRingSpec):
    if not ring.is_field:
        raise DomainError("operation requires the residue field (k = 1)", k=ring.k)


def rref_field(m: MatrixR) -> Tuple[MatrixR, Tuple[int, ...]]:
    """Reduced row-echelon form over F_p with the list of pivot columns."""
    _require_field(m.ring)
    p = m.ring.p
    a = [list(row) for row in m.entries]
    nrows, ncols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        pivot = next((i for i in range(r, nrows) if a[i][c] % p != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = pow(a[r][c], p - 2, p) if p > 2 else a[r][c]
        a[r] = [(inv * x) % p for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return MatrixR.from_rows(m.ring, a), tuple(pivots)


def rank_field(m: MatrixR) -> int:
    _, pivots = rref_field(m)
    return len(pivots)


def kernel_field(m: MatrixR) -> Tuple[Vector, ...]:
    """Deterministic right-kernel basis over F_p, one vector per free column."""
    red, pivots = rref_field(m)
    p = m.ring.p
    ncols = m.cols
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-red.entries[r][f]) % p
        basis.append(tuple(v))
    return tuple(basis)


def solve_field(m: MatrixR, rhs: Sequence[int]) -> Optional[Vector]:
    """One solution of m x = rhs over F_p (free variables zero), or None."""
    _require_field(m.ring)
    p = m.ring.p
    aug = MatrixR.from_rows(m.ring, [list(row) + [rhs[i] % p] for i, row in enumerate(m.entries)])
    red, pivots = rref_field(aug)
    ncols = m.cols
    if ncols in pivots:
        return None
    x = [0] * ncols
    for r, c in enumerate(pivots):
        x[c] = red.entries[r][ncols]
    return tuple(x)


def vector_from_index(index: int, p: int, n: int) -> Vector:
    """Coordinate j is the j-th base-p digit of index (least significant first)."""
    coords = []
    for _ in range(n):
        coords.append(index % p)
        index //= p
    return tuple(coords)


def field_vectors(p: int, n: int, skip_zero: bool = False) -> Iterator[Vector]:
    """All vectors of F_p^n in base-p counting order."""
    start = 1 if skip_zero else 0
    for idx in range(start, p ** n):
        yield vector_from_index(idx, p, n)


def vec_add(ring: LocalRingSpec, u: Sequence[int], v: Sequence[int]) -> Vector:
    q = ring.modulus
    return tuple((a + b) % q for a, b in zip(u, v))


def vec_sub(ring: LocalRingSpec, u: Sequence[int], v: Sequence[int]) -> Vector:
    q = ring.modulus
    return tuple((a - b) % q for a, b in zip(u, v))


def vec_scale(ring: LocalRingSpec, c: int, v: Sequence[int]) -> Vector:
    q = ring.modulus
    return tuple((c * a) % q for a in v)


def vec_dot(ring: LocalRingSpec, u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v)) % ring.modulus
