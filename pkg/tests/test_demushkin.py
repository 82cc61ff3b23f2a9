import pytest

from propp.demushkin import (
    DemushkinInvariants,
    distinguished_functional,
    normalize_relator,
    retraction_witness,
    solvable_guard,
    subgroup_rank,
)
from propp.errors import (
    ConstraintTooLarge,
    DistinguishedIncompatible,
    DistinguishedMissing,
    DomainError,
    NoWitness,
    NotCandidate,
    NotIsotropic,
)
from propp.localring import LocalRingSpec, MatrixR, invert_unit, reduce_mod_p
from propp.magnus import (
    FreeWord,
    analyze,
    cup_gram_rows,
    demushkin_relator,
    expand,
    substitute,
)
from propp.oracle import SplitMix64, random_invertible_matrix
from propp.symplectic import Subspace, block_matrix


def words_from_matrix(mat: MatrixR):
    """Generator images whose exponent vectors are the matrix columns."""
    n = mat.rows
    return [
        FreeWord.from_syllables(
            n, [(j + 1, mat.entries[j][i]) for j in range(n) if mat.entries[j][i]])
        for i in range(mat.cols)
    ]


def scramble(word: FreeWord, mat: MatrixR) -> FreeWord:
    return substitute(word, words_from_matrix(mat))


class TestRankFormula:
    def test_examples(self):
        assert subgroup_rank(4, 1) == 4
        assert subgroup_rank(4, 3) == 8
        for index in (1, 2, 7, 100):
            assert subgroup_rank(2, index) == 2

    def test_transitivity_random(self):
        rng = SplitMix64(41)
        for _ in range(1000):
            d = 2 + rng.below(99)
            a = 1 + rng.below(50)
            b = 1 + rng.below(50)
            assert subgroup_rank(subgroup_rank(d, a), b) == subgroup_rank(d, a * b)

    def test_guards(self):
        with pytest.raises(DomainError):
            subgroup_rank(1, 3)
        with pytest.raises(DomainError):
            subgroup_rank(4, 0)

    def test_solvable_guard(self):
        assert solvable_guard(2)
        assert not solvable_guard(3)
        assert solvable_guard(0)


class TestInvariantsType:
    def test_validation(self):
        DemushkinInvariants(4, 2, 0)
        DemushkinInvariants(4, 2, 8)
        with pytest.raises(DomainError):
            DemushkinInvariants(3, 2, 0)
        with pytest.raises(DomainError):
            DemushkinInvariants(4, 2, 6)
        with pytest.raises(DomainError):
            DemushkinInvariants(4, 2, 1)

    def test_t(self):
        assert DemushkinInvariants(6, 3, 9).t == 3


class TestDistinguishedFunctional:
    def test_standard_family_is_y1_dual(self):
        for p, v in ((2, 1), (2, 2), (3, 1), (3, 2)):
            for t in (1, 2, 3):
                ana = analyze(demushkin_relator(t, p ** v), p)
                d = distinguished_functional(ana)
                assert d == tuple(1 if i == 1 else 0 for i in range(2 * t))

    def test_transport_under_scramble(self):
        # the functional transports by the inverse transpose of the scramble
        rng = SplitMix64(43)
        p, t, v = 3, 2, 1
        ring = LocalRingSpec(p, v + 2)
        r = demushkin_relator(t, p ** v)
        mat = random_invertible_matrix(ring, 2 * t, rng)
        scrambled = scramble(r, mat)
        d_direct = distinguished_functional(analyze(scrambled, p))
        d_orig = distinguished_functional(analyze(r, p))
        transported = reduce_mod_p(invert_unit(mat).transpose()).matvec(d_orig)
        assert d_direct == transported

    def test_needs_torsion(self):
        with pytest.raises(DomainError):
            distinguished_functional(analyze(demushkin_relator(2, 0), 2))


class TestNormalizeRelator:
    def test_already_normal_q0(self):
        res = normalize_relator(demushkin_relator(2, 0), 2)
        assert res.substitution == MatrixR.identity(res.substitution.ring, 4)
        assert res.shape.q == 0
        assert res.verification.all_ok

    def test_power_relator_with_constraint(self):
        p = 2
        r = demushkin_relator(2, 4)
        ana = analyze(r, p)
        d = distinguished_functional(ana)
        sub = Subspace(LocalRingSpec(p, 1), (d,))
        res = normalize_relator(r, p, constraint=sub, distinguished_index=0)
        assert res.shape.q == 4
        assert res.shape.precision_k == 4  # v + 2
        assert res.verification.all_ok
        assert res.verification.constraint_ok
        mod = p ** (res.shape.v + 1)
        assert res.shape.gamma_residue % mod == 4 % mod

    def test_errors(self):
        p = 2
        with pytest.raises(NotCandidate):
            normalize_relator(FreeWord.from_syllables(2, [(1, 2)]), p)
        r = demushkin_relator(1, 0)
        with pytest.raises(ConstraintTooLarge):
            normalize_relator(r, p, constraint=Subspace(
                LocalRingSpec(p, 1), ((1, 0), (0, 1))))
        r2 = demushkin_relator(2, 0)
        with pytest.raises(NotIsotropic):
            normalize_relator(r2, p, constraint=Subspace(
                LocalRingSpec(p, 1), ((1, 0, 0, 0), (0, 1, 0, 0))))
        r4 = demushkin_relator(2, 4)
        with pytest.raises(DistinguishedMissing):
            normalize_relator(r4, p)
        with pytest.raises(DistinguishedMissing):
            normalize_relator(r4, p, constraint=Subspace(
                LocalRingSpec(p, 1), ((0, 1, 0, 0),)))
        with pytest.raises(DistinguishedIncompatible):
            normalize_relator(r4, p,
                              constraint=Subspace(LocalRingSpec(p, 1),
                                                  ((0, 0, 0, 1),)),
                              distinguished_index=0)
        with pytest.raises(DomainError):
            normalize_relator(r4, p, precision_k=2,
                              constraint=Subspace(LocalRingSpec(p, 1),
                                                  ((0, 1, 0, 0),)),
                              distinguished_index=0)  # needs K >= v + 1

    def test_scramble_roundtrip_with_independent_recomputation(self):
        rng = SplitMix64(47)
        cases = [(p, t, v) for p in (2, 3) for t in (1, 2, 3) for v in (0, 1, 2)]
        for p, t, v in cases:
            q = 0 if v == 0 else p ** v
            prec = (v + 2) if q else 2
            ring = LocalRingSpec(p, prec)
            r0 = demushkin_relator(t, q)
            mat = random_invertible_matrix(ring, 2 * t, rng)
            r1 = scramble(r0, mat)
            field = LocalRingSpec(p, 1)
            if q:
                d = distinguished_functional(analyze(r1, p))
                sub = Subspace(field, (d,))
                res = normalize_relator(r1, p, constraint=sub,
                                        distinguished_index=0)
            else:
                sub = None
                res = normalize_relator(r1, p)
            assert res.verification.all_ok
            assert reduce_mod_p(res.substitution) is not None
            from propp.localring import det_mod_p

            assert det_mod_p(res.substitution) != 0

            # independent recomputation: re-express the relator in the new
            # generators at the word level and expand from scratch
            sub_inv = invert_unit(res.substitution)
            r2 = substitute(r1, words_from_matrix(sub_inv))
            data = expand(r2)
            if q:
                mod = p ** (v + 1)
                assert data.linear[0] % mod == q % mod
                assert all(x % mod == 0 for x in data.linear[1:])
            else:
                assert all(x % (p ** prec) == 0 for x in data.linear)
            gram = MatrixR.from_rows(field, cup_gram_rows(data, p))
            assert gram == block_matrix(field, res.shape.block_diagonal)
            if sub is not None:
                for psi in sub.basis:
                    for i in range(t):
                        col = res.substitution.column(2 * i)
                        assert sum(a * b for a, b in zip(psi, col)) % p == 0


class TestRetractionWitness:
    def test_trivial(self):
        w = retraction_witness((0, 0, 1), 1, [(0,)], [(0,)], 2)
        assert w.relator_identity and w.frattini_match
        assert all(m.is_empty for m in w.mu_x + w.mu_y)

    def test_standard_example(self):
        w = retraction_witness((0, 0, 2), 2, [(0, 0), (0, 0)],
                               [(1, 0), (0, 1)], 3)
        assert w.relator_identity and w.frattini_match
        assert w.mu_y[0].syllables == ((1, 1),)
        assert w.mu_y[1].syllables == ((2, 1),)

    def test_torsion_shape(self):
        w = retraction_witness((4, 2, 3), 2, [(0, 0)] * 3,
                               [(1, 1), (0, 1), (1, 0)], 2)
        assert w.relator_identity and w.frattini_match

    def test_no_witness(self):
        with pytest.raises(NoWitness):
            retraction_witness((0, 0, 1), 1, [(1,)], [(0,)], 2)

    def test_frattini_exactness(self):
        # canonical lifts reduce to the given lambda values mod p
        w = retraction_witness((0, 0, 2), 3, [(0, 0, 0), (0, 0, 0)],
                               [(2, 1, 0), (0, 2, 2)], 3)
        assert w.frattini_match
        assert w.mu_y[0].exponent_vector() == (2, 1, 0)
