"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

All checks are exact (tolerance zero); nothing here uses floating point.
Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import functools
import io
import json
import time

from propp.cli import run as cli_run
from propp.demushkin import normalize_relator, subgroup_rank
from propp.howson import (
    bound,
    chain_depth,
    hanna_neumann_bound,
    open_case_bound,
    schreier_bound,
    trace,
)
from propp.localring import LocalRingSpec, MatrixR, binom2, det_mod_p, invert_unit, reduce_mod_p, solve_field
from propp.magnus import (
    FreeWord,
    analyze,
    cup_gram_rows,
    demushkin_relator,
    expand,
    substitute,
)
from propp.oracle import (
    SplitMix64,
    all_isotropic_subspaces,
    all_skew_invertible,
    exhaustive_isotropic_max,
    expand_letterwise,
    random_invertible_matrix,
    random_skew_invertible,
    random_word,
)
from propp.symplectic import (
    GramForm,
    Subspace,
    block_matrix,
    check_symplectic,
    complete_isotropic,
    lift_basis,
    max_isotropic_dim_bruteforce,
    skew_normal_form,
    symplectic_basis_field,
)

F2 = LocalRingSpec(2, 1)
F3 = LocalRingSpec(3, 1)


def criterion(num, name, limit_seconds):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper():
            start = time.monotonic()
            ok = False
            try:
                fn()
                ok = True
            finally:
                elapsed = time.monotonic() - start
                status = "PASS" if ok else "FAIL"
                print(f"ACCEPTANCE {num:2d} {name}: {status} "
                      f"({elapsed:.1f}s, limit {limit_seconds}s)")
            assert elapsed < limit_seconds, f"criterion {num} over time budget"
        return wrapper
    return decorate


@criterion(1, "normal form, exhaustive over F2 and F3", 60)
def test_criterion_1_normal_form_exhaustive():
    cases = [(F2, 2), (F2, 4), (F3, 2)]
    total = 0
    for field, n in cases:
        for f in all_skew_invertible(n, field):
            pmat, blocks = skew_normal_form(f)
            assert pmat.transpose().mul(f.gram).mul(pmat) == \
                block_matrix(field, blocks)
            assert det_mod_p(pmat) != 0
            for a, b in blocks:
                assert (2 * a) % field.modulus == 0
                assert (2 * b) % field.modulus == 0
            total += 1
    assert total > 0


@criterion(2, "lifting of mod-p symplectic bases, 500 seeded forms", 60)
def test_criterion_2_lifting():
    rng = SplitMix64(2024)
    rings = [LocalRingSpec(2, 2), LocalRingSpec(2, 3), LocalRingSpec(3, 2)]
    dims = (2, 4, 6)
    done = 0
    while done < 500:
        ring = rings[done % len(rings)]
        n = dims[(done // len(rings)) % len(dims)]
        p = ring.p
        f = random_skew_invertible(ring, n, rng)
        field_basis = symplectic_basis_field(f.reduction())
        b1 = tuple((int(x) + p * rng.below(ring.modulus // p)) % ring.modulus
                   for x in field_basis.vectors[1])
        lifted = lift_basis(f, b1, field_basis)
        assert check_symplectic(lifted)
        assert lifted.vectors[1] == b1
        assert all(tuple(x % p for x in v) == w
                   for v, w in zip(lifted.vectors, field_basis.vectors))
        done += 1


@criterion(3, "isotropic completion over all subspaces and pivots", 120)
def test_criterion_3_isotropic_completion():
    for field in (F2, F3):
        f = GramForm.standard(field, 2)
        p = field.p
        for sub in all_isotropic_subspaces(f):
            # every nonzero vector of the subspace as the distinguished one
            span_vectors = set()
            coeffs = range(p)
            from itertools import product

            for combo in product(coeffs, repeat=sub.dim):
                if all(c == 0 for c in combo):
                    continue
                vec = tuple(
                    sum(c * row[i] for c, row in zip(combo, sub.basis)) % p
                    for i in range(f.n))
                span_vectors.add(vec)
            for chosen in sorted(span_vectors):
                rows = [chosen]
                for cand in sub.basis:
                    probe = MatrixR.from_rows(field, rows + [cand])
                    from propp.localring import rank_field

                    if rank_field(probe) == len(rows) + 1:
                        rows.append(cand)
                rebased = Subspace(field, tuple(rows))
                basis = complete_isotropic(f, rebased, 0)
                assert check_symplectic(basis)
                assert basis.b_vector(0) == chosen
                b_cols = MatrixR.from_columns(
                    field, [basis.b_vector(i) for i in range(basis.t)])
                for v in sub.basis:
                    assert solve_field(b_cols, v) is not None


@criterion(4, "isotropic dimension bound, two oracles agree", 120)
def test_criterion_4_half_bound():
    for n in (2, 4):
        for f in all_skew_invertible(n, F2):
            main = max_isotropic_dim_bruteforce(f)
            other = exhaustive_isotropic_max(f)
            assert main == other
            assert main <= n // 2


@criterion(5, "expansion paths and shuffle identities on 10000 words", 30)
def test_criterion_5_magnus():
    rng = SplitMix64(555)
    for _ in range(10_000):
        n = 1 + rng.below(6)
        w = random_word(n, 40, rng)
        a = expand(w)
        b = expand_letterwise(w)
        assert a == b
        for i in range(n):
            assert a.quadratic[i][i] == binom2(a.linear[i])
            for j in range(i + 1, n):
                assert a.quadratic[i][j] + a.quadratic[j][i] == \
                    a.linear[i] * a.linear[j]


@criterion(6, "detection of the standard relator families", 5)
def test_criterion_6_detection():
    surface = demushkin_relator(2, 0)
    for p in (2, 3):
        ana = analyze(surface, p)
        assert ana.q == 0
        assert ana.cup_form == GramForm.standard(LocalRingSpec(p, 1), 2)
        assert ana.is_demushkin_candidate
    power = analyze(demushkin_relator(2, 4), 2)
    assert power.q == 4
    assert power.magnus.quadratic[0][0] == 6 == binom2(4)
    assert power.is_demushkin_candidate


@criterion(7, "normalization round-trip on 200 seeded scrambles", 60)
def test_criterion_7_normalization():
    combos = [(p, t, v) for p in (2, 3) for t in (1, 2, 3) for v in (0, 1, 2)]
    seed = 7000
    done = 0
    while done < 200:
        p, t, v = combos[done % len(combos)]
        q = 0 if v == 0 else p ** v
        prec = (v + 2) if q else 2
        ring = LocalRingSpec(p, prec)
        field = LocalRingSpec(p, 1)
        rng = SplitMix64(seed + done)
        n = 2 * t

        r0 = demushkin_relator(t, q)
        mat = random_invertible_matrix(ring, n, rng)
        images = [
            FreeWord.from_syllables(
                n, [(j + 1, mat.entries[j][i]) for j in range(n)
                    if mat.entries[j][i]])
            for i in range(n)]
        r1 = substitute(r0, images)

        transport = reduce_mod_p(invert_unit(mat).transpose())
        constraint = None
        dist_idx = None
        if q:
            vectors = [transport.matvec(tuple(1 if i == 1 else 0
                                              for i in range(n)))]
            if t >= 2 and done % 2 == 0:
                vectors.append(transport.matvec(tuple(1 if i == 3 else 0
                                                      for i in range(n))))
            constraint = Subspace(field, tuple(vectors))
            dist_idx = 0
        elif done % 2 == 0:
            constraint = Subspace(
                field, (transport.matvec(tuple(1 if i == 1 else 0
                                               for i in range(n))),))

        res = normalize_relator(r1, p, constraint=constraint,
                                distinguished_index=dist_idx)
        sub = res.substitution
        assert det_mod_p(sub) != 0

        # postconditions recomputed from scratch at the word level
        inv_cols = invert_unit(sub)
        re_images = [
            FreeWord.from_syllables(
                n, [(j + 1, inv_cols.entries[j][i]) for j in range(n)
                    if inv_cols.entries[j][i]])
            for i in range(n)]
        r2 = substitute(r1, re_images)
        data = expand(r2)
        if q:
            mod = p ** (v + 1)
            assert data.linear[0] % mod == q % mod
            assert all(x % mod == 0 for x in data.linear[1:])
        else:
            assert all(x % ring.modulus == 0 for x in data.linear)
        gram = MatrixR.from_rows(field, cup_gram_rows(data, p))
        assert gram == block_matrix(field, res.shape.block_diagonal)
        expected_first = binom2(q) % p if q else 0
        assert res.shape.block_diagonal[0] == (expected_first, 0)
        assert all(pair == (0, 0) for pair in res.shape.block_diagonal[1:])
        if constraint is not None:
            for psi in constraint.basis:
                for i in range(t):
                    col = sub.column(2 * i)
                    assert sum(a * b for a, b in zip(psi, col)) % p == 0
        assert res.verification.all_ok
        done += 1


@criterion(8, "closed-form numbers and audited traces", 1)
def test_criterion_8_howson_numbers():
    assert bound(2, 2, 2) == 17
    assert bound(3, 3, 2) == 163
    assert chain_depth(2, 2, 2) == 2
    assert schreier_bound(3, 4) == 9
    assert hanna_neumann_bound(3, 3) == 5
    assert open_case_bound(2, 4) == 3
    trace(2, 4, 2, 2, 4)
    trace(2, 3, 2, 2, 16)
    trace(3, 4, 3, 3, 81)


@criterion(9, "rank formula and its transitivity", 1)
def test_criterion_9_rank_formula():
    assert subgroup_rank(4, 1) == 4
    assert subgroup_rank(4, 3) == 8
    rng = SplitMix64(909)
    for _ in range(1000):
        d = 2 + rng.below(99)
        a = 1 + rng.below(50)
        b = 1 + rng.below(50)
        assert subgroup_rank(subgroup_rank(d, a), b) == subgroup_rank(d, a * b)


ACCEPTANCE_FIXTURES = [
    ["howson", "bound", "--p", "2", "--dA", "2", "--dB", "2"],
    ["howson", "bound", "--p", "3", "--dA", "3", "--dB", "2"],
    ["howson", "depth", "--p", "2", "--dA", "2", "--dB", "2"],
    ["howson", "schreier", "--d", "3", "--index", "4"],
    ["howson", "hn", "--d1", "3", "--d2", "3"],
    ["howson", "trace", "--p", "2", "--dG", "4", "--dA", "2", "--dB", "2",
     "--joint-index", "4"],
    ["howson", "trace", "--p", "3", "--dG", "4", "--dA", "3", "--dB", "3",
     "--joint-index", "81"],
    ["demushkin", "rank", "--d", "4", "--index", "3"],
    ["relator", "build", "--t", "1", "--gamma", "2"],
    ["relator", "build", "--t", "2", "--gamma", "0"],
    ["relator", "expand", "--json",
     '{"alphabet":["x1","y1"],"word":[["x1",1],["y1",1],["x1",-1],["y1",-1]]}'],
    ["relator", "analyze", "--p", "2", "--json",
     '{"alphabet":["x1","y1","x2","y2"],"word":[["x1",1],["y1",1],["x1",-1],'
     '["y1",-1],["x2",1],["y2",1],["x2",-1],["y2",-1]]}'],
    ["relator", "normalize", "--p", "2", "--json",
     '{"alphabet":["x1","y1","x2","y2"],"word":[["x1",5],["y1",1],["x1",-1],'
     '["y1",-1],["x2",1],["y2",1],["x2",-1],["y2",-1]],'
     '"constraint":{"vectors":[[0,1,0,0]],"distinguished_index":0}}'],
    ["form", "check", "--json",
     '{"ring":{"p":2,"k":1},"matrix":[[1,1],[1,0]]}'],
    ["form", "normal-form", "--json",
     '{"ring":{"p":3,"k":2},"matrix":[[0,1],[8,0]]}'],
    ["form", "normal-form", "--json",
     '{"ring":{"p":2,"k":3},"matrix":[[0,3],[5,4]]}'],
    ["form", "complete-isotropic", "--json",
     '{"form":{"ring":{"p":2,"k":1},"matrix":[[0,1,0,0],[1,0,0,0],'
     '[0,0,0,1],[0,0,1,0]]},"subspace":{"vectors":[[0,1,0,0],[0,0,0,1]]}}'],
    ["retraction", "witness", "--json",
     '{"t":2,"gamma":0,"delta":0,"p":3,"d_target":2,'
     '"lambda_x":[[0,0],[0,0]],"lambda_y":[[1,0],[0,1]]}'],
]


@criterion(10, "CLI determinism and malformed-input handling", 30)
def test_criterion_10_cli():
    def run_suite():
        outputs = []
        for argv in ACCEPTANCE_FIXTURES:
            buf = io.StringIO()
            code = cli_run(argv, out=buf)
            assert code == 0, (argv, buf.getvalue())
            outputs.append(buf.getvalue())
        return outputs

    first = run_suite()
    second = run_suite()
    assert first == second  # byte-identical

    buf = io.StringIO()
    code = cli_run(["relator", "analyze", "--p", "2", "--json", "{oops"],
                   out=buf)
    assert code == 2
    err = json.loads(buf.getvalue())
    assert set(err["error"]) == {"code", "message", "context"}
    assert err["error"]["code"] == "MalformedInput"
