"""Skew-symmetric forms over Z/p^k: symplectic bases, completion, lifting.

Conventions, fixed here because matrix conventions are never canonical:

* ``gram[i][j]`` is the value of the form on the i-th and j-th coordinate
  vectors, so for coordinate columns ``u, v`` the pairing is ``u^T G v``.
* A change of basis with column matrix P (columns = new basis vectors in old
  coordinates) turns the Gram matrix into ``P^T G P``.
* Symplectic bases are interleaved ``(a_1, b_1, ..., a_t, b_t)`` and are
  serialized as the 2t columns of their matrix.
* Search order: coordinate vectors of F_p^n are enumerated in base-p counting
  order, coordinate 0 being the least significant digit; the first hit wins.

Skew-symmetry means ``G + G^T = 0``, which permits nonzero diagonal entries d
with 2d = 0; such diagonals actually occur when p = 2, and the algorithms
below never assume the alternating (zero-diagonal) special case.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .errors import (
    DegenerateForm,
    DimensionOdd,
    DomainError,
    NotIsotropic,
    NotSkew,
    TooLarge,
)
from .localring import (
    LocalRingSpec,
    MatrixR,
    Vector,
    det_mod_p,
    field_vectors,
    kernel_field,
    rank_field,
    reduce_mod_p,
    solve_field,
    solve_row,
    vec_scale,
    vec_sub,
)

MAX_ISOTROPIC_SPACE = 1 << 20
_ENUM_CAP = 1 << 22


@dataclass(frozen=True)
class GramForm:
    """A skew-symmetric bilinear form given by its Gram matrix over Z/p^k.

    The constructor enforces skew-symmetry and even positive dimension.
    Degeneracy is allowed here (so it can be reported); the basis-producing
    algorithms reject degenerate forms with :class:`DegenerateForm`.
    """

    ring: LocalRingSpec
    gram: MatrixR

    def __post_init__(self):
        if self.gram.ring != self.ring:
            raise DomainError("gram matrix ring mismatch")
        if not self.gram.is_square:
            raise DomainError("gram matrix must be square",
                              rows=self.gram.rows, cols=self.gram.cols)
        if self.gram.rows % 2 != 0:
            raise DimensionOdd("form dimension must be even", n=self.gram.rows)
        if not self.gram.add(self.gram.transpose()).is_zero():
            raise NotSkew("gram + gram^T must vanish")

    @classmethod
    def from_rows(cls, ring: LocalRingSpec, rows: Sequence[Sequence[int]]) -> "GramForm":
        return cls(ring, MatrixR.from_rows(ring, rows))

    @classmethod
    def standard(cls, ring: LocalRingSpec, t: int) -> "GramForm":
        """Block-diagonal form with t blocks [[0, 1], [-1, 0]]."""
        n = 2 * t
        q = ring.modulus
        rows = [[0] * n for _ in range(n)]
        for i in range(t):
            rows[2 * i][2 * i + 1] = 1
            rows[2 * i + 1][2 * i] = q - 1
        return cls.from_rows(ring, rows)

    @property
    def n(self) -> int:
        return self.gram.rows

    @property
    def t(self) -> int:
        return self.n // 2

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        """omega(u, v) = u^T G v."""
        gv = self.gram.matvec(v)
        return sum(u[i] * gv[i] for i in range(len(gv))) % self.ring.modulus

    def self_pair(self, u: Sequence[int]) -> int:
        return self.pair(u, u)

    def reduction(self) -> "GramForm":
        return GramForm(self.ring.residue_field, reduce_mod_p(self.gram))


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^n given by an independent list of coordinate vectors."""

    ring: LocalRingSpec
    basis: Tuple[Vector, ...]

    def __post_init__(self):
        if not self.ring.is_field:
            raise DomainError("subspaces are taken over the residue field", k=self.ring.k)
        canon = tuple(tuple(x % self.ring.p for x in v) for v in self.basis)
        object.__setattr__(self, "basis", canon)
        if canon:
            mat = MatrixR.from_rows(self.ring, canon)
            if rank_field(mat) != len(canon):
                raise DomainError("listed vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class SymplecticBasis:
    """Ordered vectors (a_1, b_1, ..., a_t, b_t) relative to a form.

    The container itself does not validate; :func:`check_symplectic` is the
    (total) validity predicate, and every constructor in this module runs it
    before returning.
    """

    form: GramForm
    vectors: Tuple[Vector, ...]

    @property
    def t(self) -> int:
        return len(self.vectors) // 2

    def matrix(self) -> MatrixR:
        return MatrixR.from_columns(self.form.ring, self.vectors)

    def a_vector(self, i: int) -> Vector:
        return self.vectors[2 * i]

    def b_vector(self, i: int) -> Vector:
        return self.vectors[2 * i + 1]


def is_nondegenerate(f: GramForm) -> bool:
    """True iff the Gram determinant is a unit, i.e. nonzero mod p."""
    return det_mod_p(f.gram) != 0


def check_symplectic(basis: SymplecticBasis) -> bool:
    """Exact check of all pairing conditions plus invertibility of the basis."""
    f = basis.form
    vectors = basis.vectors
    if len(vectors) != f.n or len(vectors) % 2 != 0:
        return False
    if any(len(v) != f.n for v in vectors):
        return False
    t = len(vectors) // 2
    for i in range(t):
        if f.pair(vectors[2 * i], vectors[2 * i + 1]) != 1:
            return False
        for j in range(t):
            if j == i:
                continue
            if f.pair(vectors[2 * i], vectors[2 * j + 1]) != 0:
                return False
            if f.pair(vectors[2 * i], vectors[2 * j]) != 0:
                return False
            if f.pair(vectors[2 * i + 1], vectors[2 * j + 1]) != 0:
                return False
    return det_mod_p(MatrixR.from_columns(f.ring, vectors)) != 0


def is_isotropic(f: GramForm, sub: Subspace) -> bool:
    """Whether the form vanishes identically on the subspace.

    Pairwise vanishing on a basis is not enough when p = 2 because of the
    possibly nonzero diagonal, so the self-pairings are checked too.
    """
    for i, u in enumerate(sub.basis):
        if f.self_pair(u) != 0:
            return False
        for v in sub.basis[i + 1:]:
            if f.pair(u, v) != 0:
                return False
    return True


def _require_field_form(f: GramForm):
    if not f.ring.is_field:
        raise DomainError("operation requires a form over the residue field", k=f.ring.k)


def orthogonal_complement(f: GramForm, sub: Subspace) -> Subspace:
    """Basis of {v : omega(v, l) = 0 for all l in the subspace}.

    When the restriction of the form to the subspace is nondegenerate, the
    complement is a true direct complement; this is asserted.
    """
    _require_field_form(f)
    if not is_nondegenerate(f):
        raise DegenerateForm("complement requires a nondegenerate ambient form")
    if not sub.basis:
        return Subspace(f.ring, tuple(tuple(v) for v in _standard_basis(f.ring, f.n)))
    rows = [f.gram.matvec(l) for l in sub.basis]
    basis = kernel_field(MatrixR.from_rows(f.ring, rows))
    if sub.basis and _restricted_det(f, sub.basis) != 0:
        assert len(basis) == f.n - sub.dim
        combined = MatrixR.from_rows(f.ring, list(sub.basis) + list(basis))
        assert rank_field(combined) == f.n
    return Subspace(f.ring, basis)


def _standard_basis(ring: LocalRingSpec, n: int) -> List[Vector]:
    return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]


def _restricted_gram(f: GramForm, vecs: Sequence[Vector]) -> MatrixR:
    return MatrixR.from_rows(f.ring, [[f.pair(u, v) for v in vecs] for u in vecs])


def _restricted_det(f: GramForm, vecs: Sequence[Vector]) -> int:
    return det_mod_p(_restricted_gram(f, vecs))


def _combine(ring: LocalRingSpec, space: Sequence[Vector], coords: Sequence[int]) -> Vector:
    q = ring.modulus
    n = len(space[0])
    out = [0] * n
    for c, vec in zip(coords, space):
        if c:
            for i in range(n):
                out[i] = (out[i] + c * vec[i]) % q
    return tuple(out)


def find_nondeg_2dim(f: GramForm) -> Tuple[Vector, Vector]:
    """Two vectors spanning a 2-dimensional subspace with invertible Gram.

    First branch: the first self-orthogonal nonzero vector u paired with the
    first v such that omega(u, v) != 0 (such v exists by nondegeneracy).
    Second branch (reachable only when p = 2 and no nonzero vector is
    self-orthogonal): a pair of independent vectors y, z with omega(y, z) = 0
    and nonzero self-pairings.  The search raises DegenerateForm only after
    the entire space has been exhausted.
    """
    _require_field_form(f)
    if not is_nondegenerate(f):
        raise DegenerateForm("form has zero determinant mod p")
    pair = _find_pair_in_gram(f.gram)
    if pair is None:
        raise DegenerateForm("no 2-dimensional nondegenerate subspace found")
    return pair


def _find_pair_in_gram(gram: MatrixR) -> Tuple[Vector, Vector] | None:
    """Worker for :func:`find_nondeg_2dim` on a raw Gram matrix over F_p."""
    ring = gram.ring
    p = ring.p
    m = gram.rows

    def pr(u, v):
        gv = gram.matvec(v)
        return sum(u[i] * gv[i] for i in range(m)) % p

    for u in field_vectors(p, m, skip_zero=True):
        if pr(u, u) == 0:
            for v in field_vectors(p, m, skip_zero=True):
                if pr(u, v) != 0:
                    return u, v
            return None
    # No isotropic vector: every nonzero vector has a unit self-pairing.
    for y in field_vectors(p, m, skip_zero=True):
        for z in field_vectors(p, m, skip_zero=True):
            if pr(y, z) != 0 or pr(z, z) == 0:
                continue
            cand = MatrixR.from_rows(ring, [[pr(y, y), pr(y, z)], [pr(z, y), pr(z, z)]])
            if rank_field(MatrixR.from_rows(ring, [y, z])) == 2 and det_mod_p(cand) != 0:
                return y, z
    return None


def _pair_base_case(f: GramForm, space: Sequence[Vector]) -> List[Vector]:
    """Symplectic basis of a 2-dimensional nondegenerate subspace.

    Picks u as the first listed basis vector with omega(u, u) = 0 if one
    exists, otherwise the first basis vector; then scans restricted
    coordinates for a partner z outside span{u} with omega(u, z) != 0 and
    rescales z so the pairing is exactly 1.
    """
    ring = f.ring
    p = ring.p
    g = _restricted_gram(f, space)
    if g.entries[0][0] == 0:
        u_r = (1, 0)
    elif g.entries[1][1] == 0:
        u_r = (0, 1)
    else:
        u_r = (1, 0)
    for z_r in field_vectors(p, 2, skip_zero=True):
        if (u_r[0] * z_r[1] - u_r[1] * z_r[0]) % p == 0:
            continue
        val = sum(u_r[i] * g.entries[i][j] * z_r[j] for i in range(2) for j in range(2)) % p
        if val != 0:
            b_r = vec_scale(ring, ring.inv(val), z_r)
            return [_combine(ring, space, u_r), _combine(ring, space, b_r)]
    raise DegenerateForm("restriction to a 2-dimensional subspace is degenerate")


def _complement_in_space(f: GramForm, space: Sequence[Vector],
                         marked: Sequence[Vector]) -> List[Vector]:
    """Vectors of span(space) orthogonal to every marked vector."""
    rows = [[f.pair(s, mvec) for s in space] for mvec in marked]
    coords = kernel_field(MatrixR.from_rows(f.ring, rows))
    return [_combine(f.ring, space, c) for c in coords]


def _basis_worker(f: GramForm, space: List[Vector]) -> List[Vector]:
    m = len(space)
    if m % 2 != 0:
        raise DimensionOdd("internal subspace of odd dimension", n=m)
    if m == 2:
        return _pair_base_case(f, space)
    pair = _find_pair_in_gram(_restricted_gram(f, space))
    if pair is None:
        raise DegenerateForm("no nondegenerate plane inside subspace")
    u = _combine(f.ring, space, pair[0])
    v = _combine(f.ring, space, pair[1])
    head = _pair_base_case(f, [u, v])
    tail_space = _complement_in_space(f, space, [u, v])
    return head + _basis_worker(f, tail_space)


def symplectic_basis_field(f: GramForm) -> SymplecticBasis:
    """A symplectic basis of a nondegenerate form over F_p.

    Recursive construction: split off a nondegenerate plane, put it in the
    (a, b) shape with the base case, and recurse on its orthogonal
    complement; the concatenation of the partial bases is symplectic.
    """
    _require_field_form(f)
    if not is_nondegenerate(f):
        raise DegenerateForm("form has zero determinant mod p")
    vectors = _basis_worker(f, _standard_basis(f.ring, f.n))
    basis = SymplecticBasis(f, tuple(vectors))
    assert check_symplectic(basis)
    return basis


def complete_isotropic(f: GramForm, sub: Subspace, b1_index: int = 0) -> SymplecticBasis:
    """Symplectic basis whose b-part spans a superspace of an isotropic subspace.

    The subspace basis becomes (b_1, ..., b_s) with the distinguished vector
    first; dual partners a_r are found one at a time as solutions of the
    linear conditions omega(a_r, b_j) = delta_{rj}, omega(a_r, a_i) = 0, and
    the remaining pairs come from a symplectic basis of the orthogonal
    complement of the span built so far.
    """
    _require_field_form(f)
    if f.ring != sub.ring:
        raise DomainError("form and subspace over different fields")
    if sub.dim == 0:
        raise DomainError("isotropic subspace must be nonzero")
    if not 0 <= b1_index < sub.dim:
        raise DomainError("distinguished index out of range",
                          index=b1_index, dim=sub.dim)
    if not is_nondegenerate(f):
        raise DegenerateForm("form has zero determinant mod p")
    if not is_isotropic(f, sub):
        raise NotIsotropic("subspace carries a nonzero pairing value")

    b_list = [sub.basis[b1_index]] + [v for i, v in enumerate(sub.basis) if i != b1_index]
    s = len(b_list)
    a_list: List[Vector] = []
    for r in range(s):
        rows = [f.gram.matvec(b) for b in b_list]
        rhs = [1 if j == r else 0 for j in range(s)]
        for a_prev in a_list:
            rows.append(f.gram.matvec(a_prev))
            rhs.append(0)
        sol = solve_field(MatrixR.from_rows(f.ring, rows), rhs)
        if sol is None:
            raise DegenerateForm("dual partner system is inconsistent", step=r)
        a_list.append(sol)

    vectors: List[Vector] = []
    for a, b in zip(a_list, b_list):
        vectors.extend([a, b])
    if 2 * s < f.n:
        rest_space = _complement_in_space(f, _standard_basis(f.ring, f.n), vectors)
        vectors.extend(_basis_worker(f, rest_space))
    basis = SymplecticBasis(f, tuple(vectors))
    assert check_symplectic(basis)
    return basis


def lift_basis(f: GramForm, b1_lift: Vector, field_basis: SymplecticBasis) -> SymplecticBasis:
    """Lift a mod-p symplectic basis to Z/p^k, keeping the given b_1 vector.

    Starting from the entrywise lift of the field basis (with the b_1 slot
    replaced by ``b1_lift``), the basis is corrected pairwise: multiples of
    a_r clear all pairings against b_r; a row solve against the invertible
    Gram block of the later vectors clears the pairings of a_r against them
    (the solution lies in the maximal ideal, so reductions are untouched);
    finally a_r is rescaled by the unit omega(a_r, b_r)^-1.
    """
    from .errors import ReductionMismatch

    ring = f.ring
    p = ring.p
    q = ring.modulus
    n = f.n
    if reduce_mod_p(f.gram) != field_basis.form.gram:
        raise DomainError("field basis belongs to a different reduction")
    if not is_nondegenerate(f):
        raise DegenerateForm("form has zero determinant mod p")
    b1_lift = tuple(x % q for x in b1_lift)
    if tuple(x % p for x in b1_lift) != field_basis.vectors[1]:
        raise ReductionMismatch("b_1 lift does not reduce to the field b_1")

    vecs: List[Vector] = [tuple(x % q for x in v) for v in field_basis.vectors]
    vecs[1] = b1_lift
    t = n // 2
    for r in range(t):
        a_pos, b_pos = 2 * r, 2 * r + 1
        unit = f.pair(vecs[a_pos], vecs[b_pos])
        assert ring.is_unit(unit)
        unit_inv = ring.inv(unit)
        for j in range(b_pos + 1, n):
            c = f.pair(vecs[j], vecs[b_pos])
            if c:
                coef = (c * unit_inv) % q
                assert coef % p == 0
                vecs[j] = vec_sub(ring, vecs[j], vec_scale(ring, coef, vecs[a_pos]))
        if r < t - 1:
            rest = vecs[b_pos + 1:]
            lam = _restricted_gram(f, rest)
            rhs = [f.pair(vecs[a_pos], w) for w in rest]
            corr = solve_row(lam, rhs)
            assert all(x % p == 0 for x in corr)
            shift = [0] * n
            for cj, w in zip(corr, rest):
                if cj:
                    for i in range(n):
                        shift[i] = (shift[i] + cj * w[i]) % q
            vecs[a_pos] = vec_sub(ring, vecs[a_pos], shift)
        unit = f.pair(vecs[a_pos], vecs[b_pos])
        vecs[a_pos] = vec_scale(ring, ring.inv(unit), vecs[a_pos])

    lifted = SymplecticBasis(f, tuple(vecs))
    assert check_symplectic(lifted)
    assert all(tuple(x % p for x in v) == w
               for v, w in zip(lifted.vectors, field_basis.vectors))
    return lifted


def skew_normal_form(f: GramForm) -> Tuple[MatrixR, Tuple[Tuple[int, int], ...]]:
    """Congruence P^T G P to the block form with pair blocks [[a_i, 1], [-1, b_i]].

    P's columns are a symplectic basis obtained on the residue field and
    lifted back to the ring; the block diagonal entries are the
    self-pairings of the basis vectors and satisfy 2*a_i = 2*b_i = 0.
    The congruence identity is verified exactly before returning.
    """
    if not is_nondegenerate(f):
        raise DegenerateForm("form has zero determinant mod p")
    field_f = f.reduction()
    field_basis = symplectic_basis_field(field_f)
    b1_lift = tuple(int(x) for x in field_basis.vectors[1])
    lifted = lift_basis(f, b1_lift, field_basis)
    pmat = lifted.matrix()
    blocks = tuple(
        (f.self_pair(lifted.a_vector(i)), f.self_pair(lifted.b_vector(i)))
        for i in range(lifted.t))
    assert pmat.transpose().mul(f.gram).mul(pmat) == block_matrix(f.ring, blocks)
    return pmat, blocks


def block_matrix(ring: LocalRingSpec, blocks: Sequence[Tuple[int, int]]) -> MatrixR:
    """Block-diagonal matrix with 2x2 blocks [[a_i, 1], [-1, b_i]]."""
    n = 2 * len(blocks)
    q = ring.modulus
    rows = [[0] * n for _ in range(n)]
    for i, (alpha, beta) in enumerate(blocks):
        rows[2 * i][2 * i] = alpha % q
        rows[2 * i][2 * i + 1] = 1
        rows[2 * i + 1][2 * i] = q - 1
        rows[2 * i + 1][2 * i + 1] = beta % q
    return MatrixR.from_rows(ring, rows)


def max_isotropic_dim_bruteforce(f: GramForm, space_limit: int = MAX_ISOTROPIC_SPACE) -> int:
    """Maximum isotropic dimension by exhaustive subspace enumeration.

    Subspaces are enumerated once each through their reduced row-echelon
    bases, dimension by dimension; if no isotropic subspace of some dimension
    exists, none of any higher dimension can, so the scan stops.  Intended as
    a test oracle, not for large spaces.
    """
    _require_field_form(f)
    p = f.ring.p
    n = f.n
    if p ** n > space_limit:
        raise TooLarge("space too large to enumerate", states=p ** n, limit=space_limit)
    best = 0
    states = 0
    for d in range(1, n + 1):
        found = False
        for rows in _echelon_bases(p, n, d):
            states += 1
            if states > _ENUM_CAP:
                raise TooLarge("subspace enumeration exceeded cap", limit=_ENUM_CAP)
            if _rows_isotropic(f, rows):
                found = True
                break
        if not found:
            break
        best = d
    return best


def _rows_isotropic(f: GramForm, rows: Sequence[Vector]) -> bool:
    for i, u in enumerate(rows):
        if f.self_pair(u) != 0:
            return False
        for v in rows[i + 1:]:
            if f.pair(u, v) != 0:
                return False
    return True


def _echelon_bases(p: int, n: int, d: int):
    """All rank-d reduced row-echelon bases of F_p^n, each subspace once."""
    from itertools import combinations

    for pivots in combinations(range(n), d):
        free_positions = [
            (i, j)
            for i in range(d)
            for j in range(n)
            if j > pivots[i] and j not in pivots
        ]
        total = p ** len(free_positions)
        for code in range(total):
            rows = [[0] * n for _ in range(d)]
            for i in range(d):
                rows[i][pivots[i]] = 1
            c = code
            for (i, j) in free_positions:
                rows[i][j] = c % p
                c //= p
            yield tuple(tuple(r) for r in rows)
