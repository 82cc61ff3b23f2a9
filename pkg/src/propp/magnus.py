"""Free-group words and their degree-<=2 truncated Magnus expansion.

A word on generators g_1, ..., g_n maps into the ring of noncommutative
power series truncated past degree 2 by g_i -> 1 + X_i.  The expansion of a
word is then ``1 + sum a_i X_i + sum c_ij X_i X_j`` with exact integer
coefficients: ``a`` is the exponent-sum vector and ``c`` records the
commutator and p-th-power structure of the word two steps down its lower
q-central filtration.

Group-likeness forces the shuffle identities

    c[i][j] + c[j][i] = a_i * a_j   (i != j),      c[i][i] = a_i*(a_i-1)/2,

which the tests use as exactness checks on random words.

The relator analysis turns the quadratic coefficients into a skew Gram
matrix over F_p, called the *relator pairing* here.  It is validated
structurally (shuffle identities, nondegeneracy for the standard relator
families, the binomial self-pairing of torsion relators) but is not claimed
to be the literal Galois-cohomological cup product: the sign and transpose
normalization of that dictionary is a convention of this library.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import DomainError, EmptyRelator
from .localring import LocalRingSpec, binom2, int_valuation
from .symplectic import GramForm, is_nondegenerate

Syllable = Tuple[int, int]


@dataclass(frozen=True)
class FreeWord:
    """A freely reduced word in syllable form on generators 1..n."""

    n: int
    syllables: Tuple[Syllable, ...]

    def __post_init__(self):
        for g, e in self.syllables:
            if not 1 <= g <= self.n:
                raise DomainError("generator index out of range", index=g, n=self.n)
            if e == 0:
                raise DomainError("zero exponent in syllable", index=g)
        for (g1, _), (g2, _) in zip(self.syllables, self.syllables[1:]):
            if g1 == g2:
                raise DomainError("word is not freely reduced", index=g1)

    @classmethod
    def from_syllables(cls, n: int, syllables: Sequence[Syllable]) -> "FreeWord":
        """Build a word, merging and cancelling adjacent equal-generator syllables."""
        stack: List[List[int]] = []
        for g, e in syllables:
            if e == 0:
                continue
            if stack and stack[-1][0] == g:
                stack[-1][1] += e
                if stack[-1][1] == 0:
                    stack.pop()
            else:
                stack.append([g, e])
        return cls(n, tuple((g, e) for g, e in stack))

    @classmethod
    def empty(cls, n: int) -> "FreeWord":
        return cls(n, ())

    @classmethod
    def generator(cls, n: int, index: int, exponent: int = 1) -> "FreeWord":
        return cls.from_syllables(n, [(index, exponent)])

    @property
    def is_empty(self) -> bool:
        return not self.syllables

    @property
    def letter_count(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def exponent_vector(self) -> Tuple[int, ...]:
        out = [0] * self.n
        for g, e in self.syllables:
            out[g - 1] += e
        return tuple(out)


def inverse(w: FreeWord) -> FreeWord:
    return FreeWord(w.n, tuple((g, -e) for g, e in reversed(w.syllables)))


def concat(*words: FreeWord) -> FreeWord:
    if not words:
        raise DomainError("concat needs at least one word")
    n = words[0].n
    if any(w.n != n for w in words):
        raise DomainError("words over different generator counts")
    sylls: List[Syllable] = []
    for w in words:
        sylls.extend(w.syllables)
    return FreeWord.from_syllables(n, sylls)


def commutator(w1: FreeWord, w2: FreeWord) -> FreeWord:
    return concat(w1, w2, inverse(w1), inverse(w2))


def word_power(w: FreeWord, e: int) -> FreeWord:
    if e == 0:
        return FreeWord.empty(w.n)
    if e < 0:
        return word_power(inverse(w), -e)
    out = w
    for _ in range(e - 1):
        out = concat(out, w)
    return out


def substitute(w: FreeWord, images: Sequence[FreeWord]) -> FreeWord:
    """Replace generator i by images[i-1]; the result lives on the images' alphabet."""
    if len(images) != w.n:
        raise DomainError("need one image per generator", images=len(images), n=w.n)
    if not images:
        raise DomainError("empty image list")
    target_n = images[0].n
    if any(im.n != target_n for im in images):
        raise DomainError("images over different generator counts")
    pieces = [word_power(images[g - 1], e) for g, e in w.syllables]
    if not pieces:
        return FreeWord.empty(target_n)
    return concat(*pieces)


@dataclass(frozen=True)
class MagnusData:
    """Exact integer coefficients of a truncated expansion 1 + sum a_i X_i + sum c_ij X_i X_j."""

    linear: Tuple[int, ...]
    quadratic: Tuple[Tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.linear)

    @classmethod
    def one(cls, n: int) -> "MagnusData":
        return cls(tuple([0] * n), tuple(tuple([0] * n) for _ in range(n)))


def expand(w: FreeWord) -> MagnusData:
    """Truncated expansion computed syllable by syllable.

    Each syllable g^e contributes the series 1 + e*X_g + binom2(e)*X_g^2;
    multiplying series truncated past degree 2 only ever adds the outer
    product of the accumulated linear part with the new syllable's linear
    part, so the whole pass is a single left-to-right sweep.
    """
    n = w.n
    linear = [0] * n
    quad = [[0] * n for _ in range(n)]
    for g, e in w.syllables:
        idx = g - 1
        for i in range(n):
            if linear[i]:
                quad[i][idx] += linear[i] * e
        quad[idx][idx] += binom2(e)
        linear[idx] += e
    return MagnusData(tuple(linear), tuple(tuple(row) for row in quad))


def truncated_product(m1: MagnusData, m2: MagnusData) -> MagnusData:
    if m1.n != m2.n:
        raise DomainError("mismatched generator counts", left=m1.n, right=m2.n)
    n = m1.n
    linear = tuple(a + b for a, b in zip(m1.linear, m2.linear))
    quad = tuple(
        tuple(m1.quadratic[i][j] + m2.quadratic[i][j] + m1.linear[i] * m2.linear[j]
              for j in range(n))
        for i in range(n))
    return MagnusData(linear, quad)


def truncated_inverse(m: MagnusData) -> MagnusData:
    n = m.n
    linear = tuple(-a for a in m.linear)
    quad = tuple(
        tuple(m.linear[i] * m.linear[j] - m.quadratic[i][j] for j in range(n))
        for i in range(n))
    return MagnusData(linear, quad)


def shuffle_identities_hold(m: MagnusData) -> bool:
    """The group-like coefficient identities, as exact integer equalities."""
    n = m.n
    for i in range(n):
        if m.quadratic[i][i] != binom2(m.linear[i]):
            return False
        for j in range(i + 1, n):
            if m.quadratic[i][j] + m.quadratic[j][i] != m.linear[i] * m.linear[j]:
                return False
    return True


def demushkin_relator(t: int, gamma: int, delta: int = 0) -> FreeWord:
    """The word x_1^gamma [x_1,y_1] x_2^delta [x_2,y_2] [x_3,y_3] ... [x_t,y_t].

    Generators are ordered (x_1, y_1, ..., x_t, y_t) on n = 2t letters;
    delta is ignored when t = 1.  Zero exponents elide their factor.
    """
    if t < 1:
        raise DomainError("t must be at least 1", t=t)
    n = 2 * t
    sylls: List[Syllable] = []
    if gamma:
        sylls.append((1, gamma))
    sylls.extend([(1, 1), (2, 1), (1, -1), (2, -1)])
    for i in range(2, t + 1):
        x, y = 2 * i - 1, 2 * i
        if i == 2 and delta:
            sylls.append((x, delta))
        sylls.extend([(x, 1), (y, 1), (x, -1), (y, -1)])
    return FreeWord.from_syllables(n, sylls)


@dataclass(frozen=True)
class RelatorAnalysis:
    """Torsion invariant and relator pairing of a candidate one-relator presentation.

    ``v`` is None when the exponent vector vanishes (torsion-free
    abelianization, q = 0, "p to the infinity"); otherwise q = p^v with v the
    minimum p-adic valuation of the exponent sums.  ``cup_form`` is None when
    the generator count is odd, which is reported rather than fatal.
    """

    word: FreeWord
    p: int
    magnus: MagnusData
    v: Optional[int]
    linear_divisible: bool
    cup_form: Optional[GramForm]
    is_demushkin_candidate: bool

    @property
    def q(self) -> int:
        return 0 if self.v is None else self.p ** self.v

    @property
    def n(self) -> int:
        return self.word.n

    @property
    def nondegenerate(self) -> bool:
        return self.cup_form is not None and is_nondegenerate(self.cup_form)


def cup_gram_rows(magnus: MagnusData, p: int) -> List[List[int]]:
    """Skewed quadratic matrix mod p defining the relator pairing.

    For i < j the entry is c[i][j] mod p with the mirror entry -c[i][j];
    the diagonal is c[i][i] mod p when p = 2 and zero otherwise (forced by
    skew-symmetry, and equal to c[i][i] mod p whenever the pairing is
    well-defined, i.e. when all exponent sums are divisible by p).
    """
    n = magnus.n
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        if p == 2:
            rows[i][i] = magnus.quadratic[i][i] % 2
        for j in range(i + 1, n):
            rows[i][j] = magnus.quadratic[i][j] % p
            rows[j][i] = (-magnus.quadratic[i][j]) % p
    return rows


def analyze(r: FreeWord, p: int) -> RelatorAnalysis:
    """Torsion invariant, relator pairing, and the Demushkin candidate flag.

    The candidate flag requires an even generator count, exponent sums all
    divisible by p (which makes the pairing well-defined), and a
    nondegenerate pairing.
    """
    if r.is_empty:
        raise EmptyRelator("relator word is empty")
    field = LocalRingSpec(p, 1)
    magnus = expand(r)
    linear = magnus.linear
    if all(a == 0 for a in linear):
        v: Optional[int] = None
    else:
        v = min(int_valuation(a, p) for a in linear if a != 0)
    divisible = all(a % p == 0 for a in linear)
    cup_form = None
    if r.n % 2 == 0 and r.n > 0:
        cup_form = GramForm.from_rows(field, cup_gram_rows(magnus, p))
    candidate = (cup_form is not None and divisible and is_nondegenerate(cup_form))
    return RelatorAnalysis(
        word=r,
        p=p,
        magnus=magnus,
        v=v,
        linear_divisible=divisible,
        cup_form=cup_form,
        is_demushkin_candidate=candidate,
    )
