"""JSON codecs for the CLI: matrices, forms, words, bases, reports.

Document shapes (all numeric values are integers; no floats exist anywhere):

* ring:      {"p": 2, "k": 2}
* matrix:    {"ring": <ring>, "matrix": [[...], ...]}        (row-major)
* form:      same as matrix (validated skew, even dimension)
* basis:     {"ring": <ring>, "columns": [[...], ...]}       (a_1, b_1, ...)
* word:      {"alphabet": ["x1", ...], "word": [["x1", 4], ...]}
* subspace:  {"vectors": [[...], ...]}  with an optional
             "distinguished_index" alongside where relevant

Structural problems raise :class:`MalformedInput` (CLI exit 2); anything that
parses but violates mathematics surfaces as a domain error (exit 1).
"""

from __future__ import annotations

from typing import Any, Dict, List, Sequence, Tuple

from .errors import MalformedInput
from .howson import HowsonReport
from .localring import LocalRingSpec, MatrixR
from .magnus import FreeWord
from .symplectic import GramForm, Subspace, SymplecticBasis


def _expect_dict(doc: Any, what: str) -> Dict:
    if not isinstance(doc, dict):
        raise MalformedInput(f"{what} must be a JSON object", got=type(doc).__name__)
    return doc


def _expect_int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedInput(f"{what} must be an integer", got=repr(value))
    return value


def _expect_key(doc: Dict, key: str, what: str) -> Any:
    if key not in doc:
        raise MalformedInput(f"missing '{key}' in {what}")
    return doc[key]


def ring_from_json(doc: Any) -> LocalRingSpec:
    doc = _expect_dict(doc, "ring")
    p = _expect_int(_expect_key(doc, "p", "ring"), "ring p")
    k = _expect_int(_expect_key(doc, "k", "ring"), "ring k")
    return LocalRingSpec(p, k)


def ring_to_json(ring: LocalRingSpec) -> Dict:
    return {"p": ring.p, "k": ring.k}


def _int_rows(raw: Any, what: str) -> List[List[int]]:
    if not isinstance(raw, list) or not raw:
        raise MalformedInput(f"{what} must be a nonempty array of arrays")
    rows = []
    for row in raw:
        if not isinstance(row, list) or not row:
            raise MalformedInput(f"{what} rows must be nonempty arrays")
        rows.append([_expect_int(x, f"{what} entry") for x in row])
    return rows


def matrix_from_json(doc: Any) -> MatrixR:
    doc = _expect_dict(doc, "matrix document")
    ring = ring_from_json(_expect_key(doc, "ring", "matrix document"))
    rows = _int_rows(_expect_key(doc, "matrix", "matrix document"), "matrix")
    return MatrixR.from_rows(ring, rows)


def matrix_to_json(m: MatrixR) -> Dict:
    return {"ring": ring_to_json(m.ring), "matrix": m.to_lists()}


def form_from_json(doc: Any) -> GramForm:
    m = matrix_from_json(doc)
    return GramForm(m.ring, m)


def form_to_json(f: GramForm) -> Dict:
    return matrix_to_json(f.gram)


def basis_to_json(basis: SymplecticBasis) -> Dict:
    return {
        "ring": ring_to_json(basis.form.ring),
        "columns": [list(v) for v in basis.vectors],
    }


def basis_columns_from_json(doc: Any) -> Tuple[LocalRingSpec, List[Tuple[int, ...]]]:
    doc = _expect_dict(doc, "basis document")
    ring = ring_from_json(_expect_key(doc, "ring", "basis document"))
    cols = _int_rows(_expect_key(doc, "columns", "basis document"), "columns")
    return ring, [tuple(c) for c in cols]


def vector_from_json(raw: Any, what: str) -> Tuple[int, ...]:
    if not isinstance(raw, list) or not raw:
        raise MalformedInput(f"{what} must be a nonempty array of integers")
    return tuple(_expect_int(x, f"{what} entry") for x in raw)


def subspace_from_json(doc: Any, ring: LocalRingSpec) -> Subspace:
    doc = _expect_dict(doc, "subspace")
    vectors = _int_rows(_expect_key(doc, "vectors", "subspace"), "vectors")
    return Subspace(ring, tuple(tuple(v) for v in vectors))


def default_alphabet(n: int) -> List[str]:
    """x1, y1, x2, y2, ... matching the interleaved generator convention."""
    names = []
    for i in range(1, n // 2 + 1):
        names.extend([f"x{i}", f"y{i}"])
    if n % 2 == 1:
        names.append(f"x{n // 2 + 1}")
    return names


def word_from_json(doc: Any) -> Tuple[FreeWord, List[str]]:
    doc = _expect_dict(doc, "word document")
    alphabet = _expect_key(doc, "alphabet", "word document")
    if (not isinstance(alphabet, list) or not alphabet
            or any(not isinstance(a, str) for a in alphabet)):
        raise MalformedInput("alphabet must be a nonempty array of strings")
    if len(set(alphabet)) != len(alphabet):
        raise MalformedInput("alphabet names must be distinct")
    index = {name: i + 1 for i, name in enumerate(alphabet)}
    raw = _expect_key(doc, "word", "word document")
    if not isinstance(raw, list):
        raise MalformedInput("word must be an array of [name, exponent] pairs")
    sylls = []
    for item in raw:
        if not isinstance(item, list) or len(item) != 2:
            raise MalformedInput("word entries must be [name, exponent] pairs",
                                 got=repr(item))
        name, exp = item
        if not isinstance(name, str) or name not in index:
            raise MalformedInput("unknown generator name", name=repr(name))
        sylls.append((index[name], _expect_int(exp, "exponent")))
    return FreeWord.from_syllables(len(alphabet), sylls), list(alphabet)


def word_to_json(w: FreeWord, alphabet: Sequence[str]) -> Dict:
    if len(alphabet) != w.n:
        raise MalformedInput("alphabet size mismatch", alphabet=len(alphabet), n=w.n)
    return {
        "alphabet": list(alphabet),
        "word": [[alphabet[g - 1], e] for g, e in w.syllables],
    }


def report_to_json(report: HowsonReport) -> Dict:
    return {
        "p": report.p,
        "dG": report.d_g,
        "dA": report.d_a,
        "dB": report.d_b,
        "case": report.case,
        "n": report.n,
        "joint_index": report.joint_index,
        "dA0_bound": report.d_a0_bound,
        "dB0_bound": report.d_b0_bound,
        "dC_bound": report.d_c_bound,
        "hn_bound": report.hn_bound,
        "final_bound": report.final_bound,
        "closed_form": report.closed_form,
        "chain": [
            {"label": s.label, "expression": s.expression, "value": s.value}
            for s in report.chain
        ],
    }
