"""Independent brute-force verifiers and seeded deterministic samplers.

The verifiers here deliberately re-derive results through different code
paths than the main algorithms (vector-tuple search instead of echelon
enumeration, letter-at-a-time expansion instead of the syllable formula), so
that agreement between the two is meaningful evidence.

All randomness comes from a 64-bit SplitMix-style generator specified
bit-exactly below, so every stream is reproducible across platforms and
across reimplementations in other languages:

    state = (state + 0x9E3779B97F4A7C15) mod 2^64
    z = state
    z = ((z XOR (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z = ((z XOR (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output = z XOR (z >> 31)

Bounded draws are output mod bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Tuple

from .errors import TooLarge
from .localring import (
    LocalRingSpec,
    MatrixR,
    Vector,
    det_mod_p,
    vector_from_index,
)
from .magnus import FreeWord, MagnusData
from .symplectic import GramForm, Subspace

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """The documented 64-bit generator; see the module docstring for the update."""

    GAMMA = 0x9E3779B97F4A7C15
    MULT1 = 0xBF58476D1CE4E5B9
    MULT2 = 0x94D049BB133111EB

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next64(self) -> int:
        self.state = (self.state + self.GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * self.MULT1) & _MASK64
        z = ((z ^ (z >> 27)) * self.MULT2) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        if bound < 1:
            raise ValueError("bound must be positive")
        return self.next64() % bound


@dataclass(frozen=True)
class EnumerationBudget:
    """Hard cap on enumerated states; exceeding it is an error, never truncation."""

    max_states: int = 1 << 22

    def __post_init__(self):
        if self.max_states < 1:
            raise ValueError("budget must be positive")


DEFAULT_BUDGET = EnumerationBudget()


def all_skew_invertible(n: int, ring: LocalRingSpec,
                        budget: EnumerationBudget = DEFAULT_BUDGET) -> Iterator[GramForm]:
    """Every skew-symmetric matrix over the ring with unit determinant, once each.

    Free parameters are the strict upper triangle (any residue) and the
    diagonal (2-torsion residues only); the lower triangle is forced.  Odd n
    yields nothing, since no invertible skew form exists there.
    """
    if n % 2 != 0 or n <= 0:
        return
    q = ring.modulus
    diag_choices = ring.two_torsion_elements()
    upper_positions = [(i, j) for i in range(n) for j in range(i + 1, n)]
    total = (len(diag_choices) ** n) * (q ** len(upper_positions))
    if total > budget.max_states:
        raise TooLarge("skew enumeration over budget", states=total,
                       budget=budget.max_states)
    for code in range(total):
        c = code
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = diag_choices[c % len(diag_choices)]
            c //= len(diag_choices)
        for (i, j) in upper_positions:
            val = c % q
            c //= q
            rows[i][j] = val
            rows[j][i] = (-val) % q
        mat = MatrixR.from_rows(ring, rows)
        if det_mod_p(mat) != 0:
            yield GramForm(ring, mat)


def _isotropic_span_levels(f: GramForm,
                           budget: EnumerationBudget) -> List[List[Tuple[Vector, ...]]]:
    """Closure of isotropic spans by one-vector extensions, one level per dimension.

    Level d holds the canonical echelon bases of every d-dimensional
    isotropic subspace; level d+1 is obtained by adjoining, to each span,
    every compatible vector of the ambient space.  Every subspace of an
    isotropic subspace is isotropic, so each level seeds the next completely.
    """
    p = f.ring.p
    n = f.n
    if not f.ring.is_field:
        raise TooLarge("oracle runs over the residue field only", k=f.ring.k)
    if p ** n > budget.max_states:
        raise TooLarge("vector space over budget", states=p ** n,
                       budget=budget.max_states)
    vectors = [vector_from_index(i, p, n) for i in range(1, p ** n)]
    good = [w for w in vectors if f.self_pair(w) == 0]
    visits = 0
    levels: List[List[Tuple[Vector, ...]]] = []
    current = {(): None}
    while True:
        next_level = {}
        for rows in current:
            pivots = [next(j for j, x in enumerate(row) if x) for row in rows]
            for w in good:
                visits += 1
                if visits > budget.max_states:
                    raise TooLarge("closure over budget", budget=budget.max_states)
                if any(f.pair(w, r) != 0 for r in rows):
                    continue
                reduced = list(w)
                for row, c in zip(rows, pivots):
                    if reduced[c]:
                        coeff = reduced[c]
                        reduced = [(x - coeff * y) % p for x, y in zip(reduced, row)]
                if not any(reduced):
                    continue  # already inside the span
                key = _canonical_span(f.ring, list(rows) + [w])
                next_level[key] = None
        if not next_level:
            break
        levels.append(sorted(next_level))
        current = next_level
    return levels


def _canonical_span(ring: LocalRingSpec, rows: List[Vector]) -> Tuple[Vector, ...]:
    from .localring import rref_field

    red, pivots = rref_field(MatrixR.from_rows(ring, rows))
    return tuple(red.entries[i] for i in range(len(pivots)))


def exhaustive_isotropic_max(f: GramForm,
                             budget: EnumerationBudget = DEFAULT_BUDGET) -> int:
    """Maximum isotropic dimension via the span-closure search.

    Independent of the echelon generate-and-test in the symplectic module.
    Works for degenerate forms too (where the bound n/2 need not apply).
    """
    return len(_isotropic_span_levels(f, budget))


def all_isotropic_subspaces(f: GramForm,
                            budget: EnumerationBudget = DEFAULT_BUDGET) -> List[Subspace]:
    """Every nonzero isotropic subspace, once each, in a deterministic order."""
    levels = _isotropic_span_levels(f, budget)
    return [Subspace(f.ring, rows) for level in levels for rows in level]


def expand_letterwise(w: FreeWord,
                      budget: EnumerationBudget = DEFAULT_BUDGET) -> MagnusData:
    """Re-expansion multiplying one letter (exponent +-1) at a time.

    A single letter g contributes 1 + X_g; its inverse 1 - X_g + X_g^2.
    Shares no code with the syllable formula, including the binomial
    shortcut, so the two paths cross-validate each other.
    """
    if w.letter_count > budget.max_states:
        raise TooLarge("word too long for the letterwise oracle",
                       letters=w.letter_count, budget=budget.max_states)
    n = w.n
    linear = [0] * n
    quad = [[0] * n for _ in range(n)]
    for g, e in w.syllables:
        idx = g - 1
        sign = 1 if e > 0 else -1
        for _ in range(abs(e)):
            # Multiply (1 + A + C) by (1 + sign*X_idx [+ X_idx^2 if inverse]).
            for i in range(n):
                if linear[i]:
                    quad[i][idx] += linear[i] * sign
            if sign < 0:
                quad[idx][idx] += 1
            linear[idx] += sign
    return MagnusData(tuple(linear), tuple(tuple(row) for row in quad))


def random_invertible_matrix(ring: LocalRingSpec, n: int, rng: SplitMix64) -> MatrixR:
    """Uniform residue entries, resampled until the reduction is invertible."""
    q = ring.modulus
    while True:
        rows = [[rng.below(q) for _ in range(n)] for _ in range(n)]
        mat = MatrixR.from_rows(ring, rows)
        if det_mod_p(mat) != 0:
            return mat


def random_skew_invertible(ring: LocalRingSpec, n: int, rng: SplitMix64) -> GramForm:
    """A random invertible skew form: free upper triangle, 2-torsion diagonal."""
    if n % 2 != 0 or n <= 0:
        raise TooLarge("no invertible skew form in odd dimension", n=n)
    q = ring.modulus
    diag = ring.two_torsion_elements()
    while True:
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = diag[rng.below(len(diag))]
            for j in range(i + 1, n):
                val = rng.below(q)
                rows[i][j] = val
                rows[j][i] = (-val) % q
        mat = MatrixR.from_rows(ring, rows)
        if det_mod_p(mat) != 0:
            return GramForm(ring, mat)


def random_congruence_scramble(f: GramForm, seed: int) -> Tuple[GramForm, MatrixR]:
    """Apply a seeded random congruence: returns (P^T G P, P) with P invertible."""
    rng = SplitMix64(seed)
    pmat = random_invertible_matrix(f.ring, f.n, rng)
    scrambled = pmat.transpose().mul(f.gram).mul(pmat)
    return GramForm(f.ring, scrambled), pmat


def random_word(n: int, max_letters: int, rng: SplitMix64) -> FreeWord:
    """A freely reduced word assembled from single letters with random signs."""
    count = rng.below(max_letters + 1)
    sylls = []
    for _ in range(count):
        g = 1 + rng.below(n)
        e = 1 if rng.below(2) == 0 else -1
        sylls.append((g, e))
    return FreeWord.from_syllables(n, sylls)
