"""Demushkin invariants, relator normalization, and retraction witnesses.

``normalize_relator`` rewrites a candidate one-relator presentation into the
shape  w_1^q [w_1, z_1] [w_2, z_2] ... [w_t, z_t]  at the level of
(exponent vector, quadratic pairing) data.  The substitution matrix S holds
the new generators as exponent columns over Z/p^precision; it is the
dual-basis transpose of a symplectic basis of the relator pairing, built
with the isotropic-completion and lifting machinery.

Transformation dictionary used throughout (and verified by the tests with an
independent word-level recomputation): re-expressing the relator in the new
generators sends the exponent vector a to S^-1 a and the pairing Gram C to
S^-1 C S^-T mod p, while a functional psi evaluates on the new generator
with column s as the dot product psi . s.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import (
    ConstraintTooLarge,
    DistinguishedIncompatible,
    DistinguishedMissing,
    DomainError,
    NoWitness,
    NotCandidate,
    NotIsotropic,
)
from .localring import (
    LocalRingSpec,
    MatrixR,
    Vector,
    binom2,
    invert_unit,
    reduce_mod_p,
    solve_field,
    vec_dot,
)
from .magnus import (
    FreeWord,
    RelatorAnalysis,
    analyze,
    demushkin_relator,
    substitute,
)
from .symplectic import (
    GramForm,
    Subspace,
    SymplecticBasis,
    block_matrix,
    complete_isotropic,
    is_isotropic,
    lift_basis,
    symplectic_basis_field,
)


def subgroup_rank(d_group: int, index: int) -> int:
    """Minimal generator count of an open subgroup: (d - 2) * index + 2."""
    if d_group < 2:
        raise DomainError("rank formula needs d >= 2", d=d_group)
    if index < 1:
        raise DomainError("index must be positive", index=index)
    return (d_group - 2) * index + 2


def solvable_guard(d: int) -> bool:
    """True iff d <= 2; such groups bypass the symplectic machinery."""
    return d <= 2


@dataclass(frozen=True)
class DemushkinInvariants:
    """Rank, prime, and torsion invariant (q = 0 or a positive power of p)."""

    d: int
    p: int
    q: int

    def __post_init__(self):
        if self.d < 2 or self.d % 2 != 0:
            raise DomainError("rank must be even and at least 2", d=self.d)
        if self.q != 0:
            q = self.q
            if q < self.p:
                raise DomainError("q must be 0 or a positive power of p", q=q)
            while q % self.p == 0:
                q //= self.p
            if q != 1:
                raise DomainError("q must be 0 or a positive power of p", q=self.q)

    @property
    def t(self) -> int:
        return self.d // 2


@dataclass(frozen=True)
class NormalShape:
    """Target presentation shape at the chosen precision.

    gamma and delta are only determined modulo p^(v+1) by degree-<=2 data;
    the stored residues live modulo p^precision_k and only their classes
    modulo p^(v+1) are meaningful.
    """

    p: int
    t: int
    q: int
    v: Optional[int]
    precision_k: int
    block_diagonal: Tuple[Tuple[int, int], ...]
    gamma_residue: int
    delta_residue: Optional[int]


@dataclass(frozen=True)
class NormalizationVerification:
    """Re-verification of the three normalization postconditions."""

    pairing_ok: bool
    linear_ok: bool
    constraint_ok: Optional[bool]
    transformed_linear: Tuple[int, ...]
    transformed_gram: Tuple[Tuple[int, ...], ...]

    @property
    def all_ok(self) -> bool:
        return self.pairing_ok and self.linear_ok and self.constraint_ok is not False


@dataclass(frozen=True)
class NormalizationResult:
    substitution: MatrixR
    shape: NormalShape
    verification: NormalizationVerification
    analysis: RelatorAnalysis
    field_basis: SymplecticBasis


def distinguished_functional(analysis: RelatorAnalysis) -> Vector:
    """The unique functional d with pairing(eta, d) = eta(relator root) mod p.

    The relator root is the mod-p class u of (exponent vector) / q, so d
    solves C d = u over F_p.  This realizes, inside this library's pairing
    convention, the functional that the normalization pins to the b_1 slot;
    callers with an external source for it should cross-check against this.
    """
    if analysis.v is None or analysis.v < 1:
        raise DomainError("distinguished functional needs q = p^v with v >= 1",
                          v=analysis.v)
    if analysis.cup_form is None:
        raise DomainError("pairing undefined for odd generator count")
    p = analysis.p
    q = analysis.q
    u = tuple((a // q) % p for a in analysis.magnus.linear)
    sol = solve_field(analysis.cup_form.gram, u)
    if sol is None:
        raise DomainError("pairing is degenerate; no distinguished functional")
    return sol


def _target_blocks(p: int, t: int, q: int) -> Tuple[Tuple[int, int], ...]:
    first = (binom2(q) % p if q else 0, 0)
    return (first,) + tuple((0, 0) for _ in range(t - 1))


def _pairing_liftable(analysis: RelatorAnalysis, ring: LocalRingSpec) -> bool:
    """Whether a skew lift of the pairing to Z/p^K with matching reduction exists.

    Over Z/2^K with K >= 2 the admissible diagonal entries {0, 2^(K-1)} all
    reduce to 0 mod 2, so a mod-2 pairing with an odd diagonal entry (the
    q = 2 relator family) has no skew lift at higher precision.
    """
    if ring.k == 1 or ring.p != 2:
        return True
    c = analysis.magnus.quadratic
    return all(c[i][i] % 2 == 0 for i in range(analysis.n))


def _lifted_pairing(analysis: RelatorAnalysis, ring: LocalRingSpec) -> GramForm:
    """Skew lift of the pairing to Z/p^K with a canonical 2-torsion diagonal."""
    n = analysis.n
    qmod = ring.modulus
    c = analysis.magnus.quadratic
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        if ring.p == 2 and c[i][i] % 2 == 1:
            rows[i][i] = qmod // 2
        for j in range(i + 1, n):
            rows[i][j] = c[i][j] % qmod
            rows[j][i] = (-c[i][j]) % qmod
    return GramForm.from_rows(ring, rows)


def normalize_relator(
    r: FreeWord,
    p: int,
    precision_k: Optional[int] = None,
    constraint: Optional[Subspace] = None,
    distinguished_index: Optional[int] = None,
) -> NormalizationResult:
    """Substitution putting a candidate relator into the torsion-commutator shape.

    Returns S over Z/p^K (columns = exponent vectors of w_1, z_1, ..., w_t,
    z_t in the old generators) such that, re-expressed in the new generators,

    1. the pairing Gram becomes the block form whose only possibly nonzero
       diagonal entry is binom2(q) mod p in the w_1 slot,
    2. the exponent vector becomes (q, 0, ..., 0) modulo p^(v+1), and
    3. every functional of the constraint subspace vanishes on every w_i
       column.

    When q != 0 the caller must supply the constraint together with the index
    of the distinguished functional inside it; the functional must be
    compatible with the exponent data (see :func:`distinguished_functional`).
    """
    ana = analyze(r, p)
    if not ana.is_demushkin_candidate:
        raise NotCandidate(
            "relator fails the candidate checks",
            n_even=ana.n % 2 == 0,
            linear_divisible=ana.linear_divisible,
            nondegenerate=ana.nondegenerate,
        )
    assert ana.cup_form is not None
    n = ana.n
    t = n // 2
    v = ana.v
    q = ana.q

    if precision_k is None:
        precision_k = v + 2 if v else 2
    if precision_k < 1:
        raise DomainError("precision must be at least 1", precision_k=precision_k)
    if v is not None and precision_k < v + 1:
        raise DomainError("precision too small to verify the exponent shape",
                          precision_k=precision_k, needed=v + 1)

    cup = ana.cup_form
    if constraint is not None:
        if constraint.ring.p != p:
            raise DomainError("constraint over a different prime", p=constraint.ring.p)
        if constraint.dim > t:
            raise ConstraintTooLarge("isotropic subspaces have dimension at most t",
                                     dim=constraint.dim, t=t)
        if not is_isotropic(cup, constraint):
            raise NotIsotropic("constraint subspace is not isotropic for the pairing")

    if q != 0:
        if constraint is None or distinguished_index is None:
            raise DistinguishedMissing(
                "q != 0 requires a constraint containing the distinguished functional")
        if not 0 <= distinguished_index < constraint.dim:
            raise DomainError("distinguished index out of range",
                              index=distinguished_index, dim=constraint.dim)
        dist = constraint.basis[distinguished_index]
        u = tuple((a // q) % p for a in ana.magnus.linear)
        if cup.gram.matvec(dist) != u:
            raise DistinguishedIncompatible(
                "pairing against the distinguished functional must equal the "
                "mod-p exponent class of the relator root",
                expected=list(u), got=list(cup.gram.matvec(dist)))

    if constraint is not None:
        field_basis = complete_isotropic(cup, constraint, distinguished_index or 0)
    else:
        field_basis = symplectic_basis_field(cup)

    ring = LocalRingSpec(p, precision_k)
    if _pairing_liftable(ana, ring):
        lifted_form = _lifted_pairing(ana, ring)
        assert reduce_mod_p(lifted_form.gram) == cup.gram
        b1 = tuple(int(x) for x in field_basis.vectors[1])
        lifted = lift_basis(lifted_form, b1, field_basis)
        pmat = lifted.matrix()
    else:
        # p = 2 with odd pairing diagonal: no skew lift exists, and none is
        # needed; the postconditions only see the substitution mod p and the
        # exact exponent arithmetic, so the entrywise lift serves.
        pmat = MatrixR.from_columns(
            ring, [tuple(int(x) for x in vec) for vec in field_basis.vectors])
    substitution = invert_unit(pmat.transpose())

    shape = NormalShape(
        p=p, t=t, q=q, v=v, precision_k=precision_k,
        block_diagonal=_target_blocks(p, t, q),
        gamma_residue=0, delta_residue=None,
    )
    verification = _verify_normalization(ana, substitution, shape, constraint)
    shape = NormalShape(
        p=p, t=t, q=q, v=v, precision_k=precision_k,
        block_diagonal=shape.block_diagonal,
        gamma_residue=verification.transformed_linear[0],
        delta_residue=verification.transformed_linear[2] if t >= 2 else None,
    )
    assert verification.all_ok
    return NormalizationResult(
        substitution=substitution,
        shape=shape,
        verification=verification,
        analysis=ana,
        field_basis=field_basis,
    )


def _verify_normalization(
    ana: RelatorAnalysis,
    substitution: MatrixR,
    shape: NormalShape,
    constraint: Optional[Subspace],
) -> NormalizationVerification:
    """Recompute the three postconditions from the substitution matrix alone."""
    p = shape.p
    ring = substitution.ring
    n = ana.n
    field = LocalRingSpec(p, 1)
    assert ana.cup_form is not None

    s_field = reduce_mod_p(substitution)
    s_field_inv = invert_unit(s_field)
    transformed = s_field_inv.mul(ana.cup_form.gram).mul(s_field_inv.transpose())
    target = block_matrix(field, shape.block_diagonal)
    pairing_ok = transformed == target

    inv_sub = invert_unit(substitution)
    a_mod = [a % ring.modulus for a in ana.magnus.linear]
    transformed_linear = inv_sub.matvec(a_mod)
    if shape.v is None:
        linear_ok = all(x == 0 for x in transformed_linear)
    else:
        mod = p ** (shape.v + 1)
        linear_ok = transformed_linear[0] % mod == shape.q % mod and all(
            x % mod == 0 for x in transformed_linear[1:])

    constraint_ok: Optional[bool] = None
    if constraint is not None:
        constraint_ok = all(
            vec_dot(field, psi, tuple(x % p for x in substitution.column(2 * i))) == 0
            for psi in constraint.basis
            for i in range(shape.t))

    return NormalizationVerification(
        pairing_ok=pairing_ok,
        linear_ok=linear_ok,
        constraint_ok=constraint_ok,
        transformed_linear=transformed_linear,
        transformed_gram=transformed.entries,
    )


@dataclass(frozen=True)
class RetractionWitness:
    """Generator images solving the retraction embedding problem.

    ``mu_x`` entries are the identity; ``mu_y`` entries are the canonical
    coset representatives, recorded as words in the target's generators.
    Both verification flags are computed symbolically and exactly.
    """

    p: int
    d_target: int
    shape: Tuple[int, int, int]
    lambda_x: Tuple[Vector, ...]
    lambda_y: Tuple[Vector, ...]
    mu_x: Tuple[FreeWord, ...]
    mu_y: Tuple[FreeWord, ...]
    relator_identity: bool
    frattini_match: bool


def retraction_witness(
    shape: Tuple[int, int, int],
    d_target: int,
    lambda_x: Sequence[Sequence[int]],
    lambda_y: Sequence[Sequence[int]],
    p: int,
) -> RetractionWitness:
    """Extend the partial map mu(x_i) = 1, mu(y_i) = lift of lambda(y_i).

    Applies only when every lambda(x_i) vanishes; then the relator image
    collapses syllable by syllable (each factor x_i^g [x_i, y_i] dies with
    mu(x_i) = 1), which is confirmed by substituting into the relator word
    and reducing freely.  The Frattini compatibility phi(mu(g)) = lambda(g)
    is checked as exact vector equality mod p.
    """
    gamma, delta, t = shape
    if t < 1:
        raise DomainError("t must be at least 1", t=t)
    if d_target < 1:
        raise DomainError("target rank must be positive", d_target=d_target)
    if len(lambda_x) != t or len(lambda_y) != t:
        raise DomainError("need one lambda value per generator",
                          got_x=len(lambda_x), got_y=len(lambda_y), t=t)
    lam_x = tuple(tuple(c % p for c in vec) for vec in lambda_x)
    lam_y = tuple(tuple(c % p for c in vec) for vec in lambda_y)
    if any(len(vec) != d_target for vec in lam_x + lam_y):
        raise DomainError("lambda values must live in (Z/p)^d_target")
    for i, vec in enumerate(lam_x):
        if any(c != 0 for c in vec):
            raise NoWitness("construction needs lambda(x_i) = 0 for all i",
                            index=i + 1)

    mu_x = tuple(FreeWord.empty(d_target) for _ in range(t))
    mu_y = tuple(
        FreeWord.from_syllables(
            d_target, [(j + 1, c) for j, c in enumerate(vec) if c])
        for vec in lam_y)

    relator = demushkin_relator(t, gamma, delta)
    images: List[FreeWord] = []
    for i in range(t):
        images.extend([mu_x[i], mu_y[i]])
    image_word = substitute(relator, images) if not relator.is_empty \
        else FreeWord.empty(d_target)
    relator_identity = image_word.is_empty

    frattini_match = all(
        tuple(c % p for c in w.exponent_vector()) == lam
        for w, lam in list(zip(mu_x, lam_x)) + list(zip(mu_y, lam_y)))

    return RetractionWitness(
        p=p,
        d_target=d_target,
        shape=(gamma, delta, t),
        lambda_x=lam_x,
        lambda_y=lam_y,
        mu_x=mu_x,
        mu_y=mu_y,
        relator_identity=relator_identity,
        frattini_match=frattini_match,
    )
