"""Command-line frontend: every public operation behind JSON input/output.

Exit codes: 0 success, 1 domain error (a JSON object {"error": {code,
message, context}} is printed), 2 malformed input.  Outputs are
deterministic: keys are sorted, values are integers/strings/booleans only,
and --pretty changes whitespace but nothing else.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, List, Optional

from . import demushkin, howson, jsonio, magnus, symplectic
from .errors import CalcError, DomainError, MalformedInput
from .localring import LocalRingSpec, det_mod_p
from .symplectic import SymplecticBasis


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="propp",
        description="Exact symplectic forms over Z/p^k, relator analysis, "
                    "and intersection rank bounds.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", nargs="?", default=None,
                        help="path of the JSON input document, or - for stdin")
    common.add_argument("--json", dest="inline_json", default=None,
                        help="inline JSON input document")
    flags = argparse.ArgumentParser(add_help=False)
    flags.add_argument("--p", type=int, default=None, help="prime p")
    flags.add_argument("--k", type=int, default=None, help="ring exponent k")
    flags.add_argument("--seed", type=int, default=0,
                       help="seed (reserved; current subcommands do not sample)")
    flags.add_argument("--budget", type=int, default=None,
                       help="enumeration budget (reserved; current subcommands "
                            "do not enumerate)")
    flags.add_argument("--pretty", action="store_true", help="indent the output")

    top = parser.add_subparsers(dest="group", required=True)

    form = top.add_parser("form", help="skew form operations").add_subparsers(
        dest="command", required=True)
    form.add_parser("check", parents=[common, flags],
                    help="validate a Gram matrix and report nondegeneracy")
    form.add_parser("normal-form", parents=[common, flags],
                    help="congruence to the paired block form")
    form.add_parser("complete-isotropic", parents=[common, flags],
                    help="complete an isotropic subspace to a symplectic basis")
    form.add_parser("lift", parents=[common, flags],
                    help="lift a mod-p symplectic basis to the ring")

    relator = top.add_parser("relator", help="free-group relator operations") \
        .add_subparsers(dest="command", required=True)
    relator.add_parser("expand", parents=[common, flags],
                       help="degree-<=2 truncated expansion")
    relator.add_parser("analyze", parents=[common, flags],
                       help="torsion invariant, pairing, candidate flag")
    norm = relator.add_parser("normalize", parents=[common, flags],
                              help="normalize to the torsion-commutator shape")
    norm.add_argument("--precision-k", type=int, default=None)
    build = relator.add_parser("build", parents=[common, flags],
                               help="construct x1^g [x1,y1] x2^d [x2,y2] ...")
    build.add_argument("--t", type=int, required=True)
    build.add_argument("--gamma", type=int, default=0)
    build.add_argument("--delta", type=int, default=0)

    dem = top.add_parser("demushkin", help="rank formulas").add_subparsers(
        dest="command", required=True)
    rank = dem.add_parser("rank", parents=[common, flags],
                          help="open subgroup rank (d-2)*index + 2")
    rank.add_argument("--d", type=int, required=True)
    rank.add_argument("--index", type=int, required=True)

    how = top.add_parser("howson", help="intersection rank bounds").add_subparsers(
        dest="command", required=True)
    hb = how.add_parser("bound", parents=[common, flags])
    hb.add_argument("--dA", type=int, required=True)
    hb.add_argument("--dB", type=int, required=True)
    hd = how.add_parser("depth", parents=[common, flags])
    hd.add_argument("--dA", type=int, required=True)
    hd.add_argument("--dB", type=int, required=True)
    hs = how.add_parser("schreier", parents=[common, flags])
    hs.add_argument("--d", type=int, required=True)
    hs.add_argument("--index", type=int, required=True)
    hn = how.add_parser("hn", parents=[common, flags])
    hn.add_argument("--d1", type=int, required=True)
    hn.add_argument("--d2", type=int, required=True)
    ht = how.add_parser("trace", parents=[common, flags])
    ht.add_argument("--dG", type=int, required=True)
    ht.add_argument("--dA", type=int, required=True)
    ht.add_argument("--dB", type=int, required=True)
    ht.add_argument("--joint-index", type=int, required=True)
    ht.add_argument("--report-dir", default=None,
                    help="also write chain.csv and chain.png to this directory")

    retr = top.add_parser("retraction", help="retraction witnesses") \
        .add_subparsers(dest="command", required=True)
    retr.add_parser("witness", parents=[common, flags])

    return parser


def _load_document(args) -> Any:
    path = getattr(args, "input", None)
    inline = getattr(args, "inline_json", None)
    if path is not None and inline is not None:
        raise MalformedInput("give either an input path or --json, not both")
    if path is None and inline is None:
        raise MalformedInput("an input document is required (path, -, or --json)")
    if inline is not None:
        text = inline
    elif path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r") as fh:
                text = fh.read()
        except OSError as exc:
            raise MalformedInput("cannot read input file", path=path,
                                 reason=str(exc))
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput("input is not valid JSON", reason=str(exc))


def _need_p(args) -> int:
    if args.p is None:
        raise MalformedInput("this command needs --p")
    return args.p


def _cmd_form_check(args) -> Dict:
    doc = _load_document(args)
    doc = jsonio._expect_dict(doc, "form document")
    ring = jsonio.ring_from_json(jsonio._expect_key(doc, "ring", "form document"))
    rows = jsonio._int_rows(jsonio._expect_key(doc, "matrix", "form document"),
                            "matrix")
    from .localring import MatrixR

    mat = MatrixR.from_rows(ring, rows)
    square = mat.is_square
    even = square and mat.rows % 2 == 0 and mat.rows > 0
    skew = square and mat.add(mat.transpose()).is_zero()
    nondeg: Optional[bool] = None
    if square:
        nondeg = det_mod_p(mat) != 0
    return {
        "ring": jsonio.ring_to_json(ring),
        "n": mat.rows,
        "square": square,
        "even_dimension": even,
        "skew": skew,
        "nondegenerate": nondeg,
        "valid": square and even and skew,
    }


def _cmd_form_normal_form(args) -> Dict:
    f = jsonio.form_from_json(_load_document(args))
    pmat, blocks = symplectic.skew_normal_form(f)
    return {
        "P": jsonio.matrix_to_json(pmat),
        "blocks": [list(b) for b in blocks],
        "block_matrix": jsonio.matrix_to_json(
            symplectic.block_matrix(f.ring, blocks)),
        "verified": True,
    }


def _cmd_form_complete_isotropic(args) -> Dict:
    doc = jsonio._expect_dict(_load_document(args), "input document")
    f = jsonio.form_from_json(jsonio._expect_key(doc, "form", "input document"))
    sub = jsonio.subspace_from_json(
        jsonio._expect_key(doc, "subspace", "input document"), f.ring)
    idx = doc.get("distinguished_index", 0)
    if not isinstance(idx, int) or isinstance(idx, bool):
        raise MalformedInput("distinguished_index must be an integer")
    basis = symplectic.complete_isotropic(f, sub, idx)
    return {"basis": jsonio.basis_to_json(basis), "symplectic": True}


def _cmd_form_lift(args) -> Dict:
    doc = jsonio._expect_dict(_load_document(args), "input document")
    f = jsonio.form_from_json(jsonio._expect_key(doc, "form", "input document"))
    b1 = jsonio.vector_from_json(jsonio._expect_key(doc, "b1", "input document"),
                                 "b1")
    ring_field, cols = jsonio.basis_columns_from_json(
        jsonio._expect_key(doc, "field_basis", "input document"))
    field_form = f.reduction()
    if ring_field != field_form.ring:
        raise DomainError("field basis ring must be the residue field of the form")
    field_basis = SymplecticBasis(field_form, tuple(cols))
    if not symplectic.check_symplectic(field_basis):
        raise DomainError("field_basis is not a symplectic basis of the reduction")
    lifted = symplectic.lift_basis(f, b1, field_basis)
    return {"basis": jsonio.basis_to_json(lifted)}


def _cmd_relator_expand(args) -> Dict:
    word, _ = jsonio.word_from_json(_load_document(args))
    if word.is_empty and word.n == 0:
        raise MalformedInput("empty alphabet")
    data = magnus.expand(word)
    return {
        "n": data.n,
        "linear": list(data.linear),
        "quadratic": [list(row) for row in data.quadratic],
        "shuffle_ok": magnus.shuffle_identities_hold(data),
    }


def _cmd_relator_analyze(args) -> Dict:
    p = _need_p(args)
    word, _ = jsonio.word_from_json(_load_document(args))
    ana = magnus.analyze(word, p)
    return {
        "p": p,
        "n": ana.n,
        "q": ana.q,
        "v": ana.v,
        "linear": list(ana.magnus.linear),
        "linear_divisible": ana.linear_divisible,
        "cup_form": None if ana.cup_form is None
        else jsonio.matrix_to_json(ana.cup_form.gram),
        "nondegenerate": ana.nondegenerate,
        "candidate": ana.is_demushkin_candidate,
    }


def _cmd_relator_normalize(args) -> Dict:
    p = _need_p(args)
    doc = jsonio._expect_dict(_load_document(args), "input document")
    word, _ = jsonio.word_from_json(doc)
    constraint = None
    dist_idx = None
    if "constraint" in doc:
        cdoc = jsonio._expect_dict(doc["constraint"], "constraint")
        constraint = jsonio.subspace_from_json(cdoc, LocalRingSpec(p, 1))
        if "distinguished_index" in cdoc:
            raw = cdoc["distinguished_index"]
            if not isinstance(raw, int) or isinstance(raw, bool):
                raise MalformedInput("distinguished_index must be an integer")
            dist_idx = raw
    result = demushkin.normalize_relator(
        word, p, precision_k=args.precision_k,
        constraint=constraint, distinguished_index=dist_idx)
    shape = result.shape
    ver = result.verification
    return {
        "substitution": jsonio.matrix_to_json(result.substitution),
        "shape": {
            "p": shape.p,
            "t": shape.t,
            "q": shape.q,
            "v": shape.v,
            "precision_k": shape.precision_k,
            "block_diagonal": [list(b) for b in shape.block_diagonal],
            "gamma_residue": shape.gamma_residue,
            "delta_residue": shape.delta_residue,
        },
        "verification": {
            "pairing_ok": ver.pairing_ok,
            "linear_ok": ver.linear_ok,
            "constraint_ok": ver.constraint_ok,
            "transformed_linear": list(ver.transformed_linear),
            "transformed_gram": [list(r) for r in ver.transformed_gram],
        },
    }


def _cmd_relator_build(args) -> Dict:
    word = magnus.demushkin_relator(args.t, args.gamma, args.delta)
    return jsonio.word_to_json(word, jsonio.default_alphabet(word.n))


def _cmd_demushkin_rank(args) -> Dict:
    return {"rank": demushkin.subgroup_rank(args.d, args.index)}


def _cmd_howson_bound(args) -> Dict:
    return {"bound": howson.bound(_need_p(args), args.dA, args.dB)}


def _cmd_howson_depth(args) -> Dict:
    return {"depth": howson.chain_depth(_need_p(args), args.dA, args.dB)}


def _cmd_howson_schreier(args) -> Dict:
    return {"bound": howson.schreier_bound(args.d, args.index)}


def _cmd_howson_hn(args) -> Dict:
    return {"bound": howson.hanna_neumann_bound(args.d1, args.d2)}


def _cmd_howson_trace(args) -> Dict:
    report = howson.trace(_need_p(args), args.dG, args.dA, args.dB,
                          args.joint_index)
    out = jsonio.report_to_json(report)
    if args.report_dir:
        from .report import render_howson_report

        out["report_files"] = render_howson_report(report, args.report_dir)
    return out


def _cmd_retraction_witness(args) -> Dict:
    doc = jsonio._expect_dict(_load_document(args), "input document")

    def geti(key):
        val = jsonio._expect_key(doc, key, "witness document")
        if not isinstance(val, int) or isinstance(val, bool):
            raise MalformedInput(f"{key} must be an integer")
        return val

    t = geti("t")
    gamma = geti("gamma")
    delta = doc.get("delta", 0)
    if not isinstance(delta, int) or isinstance(delta, bool):
        raise MalformedInput("delta must be an integer")
    p = geti("p")
    d_target = geti("d_target")
    lam_x = [jsonio.vector_from_json(v, "lambda_x entry")
             for v in jsonio._expect_key(doc, "lambda_x", "witness document")]
    lam_y = [jsonio.vector_from_json(v, "lambda_y entry")
             for v in jsonio._expect_key(doc, "lambda_y", "witness document")]
    witness = demushkin.retraction_witness((gamma, delta, t), d_target,
                                           lam_x, lam_y, p)
    target_alphabet = [f"k{i + 1}" for i in range(d_target)]
    return {
        "target_alphabet": target_alphabet,
        "mu_x": [jsonio.word_to_json(w, target_alphabet)["word"]
                 for w in witness.mu_x],
        "mu_y": [jsonio.word_to_json(w, target_alphabet)["word"]
                 for w in witness.mu_y],
        "relator_identity": witness.relator_identity,
        "frattini_match": witness.frattini_match,
    }


_HANDLERS = {
    ("form", "check"): _cmd_form_check,
    ("form", "normal-form"): _cmd_form_normal_form,
    ("form", "complete-isotropic"): _cmd_form_complete_isotropic,
    ("form", "lift"): _cmd_form_lift,
    ("relator", "expand"): _cmd_relator_expand,
    ("relator", "analyze"): _cmd_relator_analyze,
    ("relator", "normalize"): _cmd_relator_normalize,
    ("relator", "build"): _cmd_relator_build,
    ("demushkin", "rank"): _cmd_demushkin_rank,
    ("howson", "bound"): _cmd_howson_bound,
    ("howson", "depth"): _cmd_howson_depth,
    ("howson", "schreier"): _cmd_howson_schreier,
    ("howson", "hn"): _cmd_howson_hn,
    ("howson", "trace"): _cmd_howson_trace,
    ("retraction", "witness"): _cmd_retraction_witness,
}


def _emit(obj: Dict, pretty: bool, out) -> None:
    if pretty:
        text = json.dumps(obj, sort_keys=True, indent=2)
    else:
        text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    out.write(text + "\n")


def run(argv: List[str], out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    pretty = bool(getattr(args, "pretty", False))
    try:
        handler = _HANDLERS[(args.group, args.command)]
        result = handler(args)
    except MalformedInput as exc:
        _emit({"error": {"code": exc.code, "message": exc.message,
                         "context": _stringify(exc.context)}}, pretty, out)
        return 2
    except CalcError as exc:
        _emit({"error": {"code": exc.code, "message": exc.message,
                         "context": _stringify(exc.context)}}, pretty, out)
        return 1
    _emit(result, pretty, out)
    return 0


def _stringify(context: Dict) -> Dict:
    out = {}
    for key, val in context.items():
        if isinstance(val, (int, str, bool)) and not isinstance(val, float):
            out[key] = val
        elif isinstance(val, (list, tuple)):
            out[key] = [x if isinstance(x, (int, str, bool)) else str(x) for x in val]
        else:
            out[key] = str(val)
    return out


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
