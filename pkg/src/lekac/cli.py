"""Command line interface: ``lekac <command> [options]``.

Every command prints (or writes with ``--out``) a JSON document
``{schema_version, command, params, rows, failures, pass}`` or, with
``--format csv``, one CSV row per result.  Each row names the claim it
checks in its ``claim`` column.

Exit status: 0 all checks pass, 1 some check failed, 2 (n, p) beyond the
supported capacity, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys

from .field_linalg import CapacityError, check_capacity
from .hamiltonian import LE, LEBAR, Weight, all_weights, build_algebra

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CAPACITY = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- helpers -----------------------------------------------------------------


def _which(name):
    return {"le": LE, "lebar": LEBAR}[name]


def _weight(text, n, p, which):
    try:
        return Weight.parse(text, n, p, with_delta=(which == LEBAR))
    except ValueError as exc:
        raise UsageError(f"bad weight {text!r}: {exc}") from None


def _cell(v):
    if isinstance(v, (list, tuple)):
        return ";".join(_cell(x) for x in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    return str(v)


def _jsonable(v):
    if isinstance(v, Weight):
        return str(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):
        return v.item()
    return v


def render(command, params, rows, fmt):
    rows = [dict(r, schema_version=SCHEMA_VERSION) for r in rows]
    failures = [r for r in rows if r.get("pass") is False]
    if fmt == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "params": params,
            "rows": rows,
            "failures": failures,
            "pass": not failures,
        }
        return json.dumps(_jsonable(doc), indent=1) + "\n"
    cols = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_cell(_jsonable(r.get(c))) for c in cols])
    return buf.getvalue()


# -- commands ----------------------------------------------------------------


def cmd_algebra(args):
    from .hamiltonian import de_rank

    which = _which(args.which)
    alg = build_algebra(which, args.n, args.p)
    n, p = args.n, args.p
    formula = 2**n * p**n - 1 + (1 if which == LEBAR else 0)
    oracle = de_rank(n, p) + (1 if which == LEBAR else 0)
    graded = {str(j): len(alg.graded_piece(j)) for j in alg.degrees()}
    even = sum(1 for x in alg.parity if x == 0)
    return [
        {
            "claim": "algebra-dimension",
            "algebra": args.which,
            "n": n,
            "p": p,
            "dim": alg.dim,
            "dim_even": even,
            "dim_odd": alg.dim - even,
            "graded_dims": graded,
            "dim_formula": formula,
            "dim_de_rank": oracle,
            "pass": alg.dim == formula == oracle,
        }
    ]


def cmd_bracket_table(args):
    alg = build_algebra(_which(args.which), args.n, args.p)
    return [
        {"claim": "structure-constant", "i": alg.label(i), "j": alg.label(j), "k": alg.label(k), "coef": c}
        for i, j, k, c in alg.brackets_sparse()
    ]


def cmd_check_identities(args):
    from .hamiltonian import (
        anticommutativity_failures,
        de_homomorphism_failures,
        jacobi_failures,
        structure_tensor,
    )

    alg = build_algebra(_which(args.which), args.n, args.p)
    C = structure_tensor(alg)
    hom = de_homomorphism_failures(args.n, args.p, args.samples, args.seed)
    anti = anticommutativity_failures(alg, C)
    jac = jacobi_failures(alg, C) if not args.skip_jacobi else None
    rows = [
        {"claim": "de-bracket-homomorphism", "checked": args.samples, "failures": len(hom), "pass": not hom},
        {"claim": "super-anticommutativity", "checked": alg.dim**2, "failures": len(anti), "pass": not anti},
    ]
    if jac is not None:
        rows.append({"claim": "super-jacobi", "checked": alg.dim**3, "failures": len(jac), "pass": not jac})
    even = alg.even_basis()
    bad_p = [x for x in even if any(alg.degree[k] != alg.p * alg.degree[x] for k in alg.ppower(x))]
    rows.append({"claim": "p-map-degree", "checked": len(even), "failures": len(bad_p), "pass": not bad_p})
    return rows


def cmd_borel(args):
    from .borel_chain import reflection_chain, validate_datum
    from .divided_power import format_monomial

    alg = build_algebra(LEBAR, args.n, args.p)
    chain = reflection_chain(alg, validate=False)

    def names(idx):
        return [alg.label(i) for i in idx]

    rows = []
    final = set(chain[0].n_plus) - {i for i in range(alg.dim) if alg.degree[i] > 0}
    final |= set(alg.graded_piece(-1))
    for d in chain:
        problems = validate_datum(alg, d)
        if d.k == 2 * alg.n and set(d.n_plus) != final:
            problems.append("last positive part is not n+_[0] + g_[-1]")
        rows.append(
            {
                "claim": "borel-chain-step",
                "k": d.k,
                "added": None if d.added is None else format_monomial(alg.potentials[d.added]),
                "dim_n_plus": len(d.n_plus),
                "dim_n_minus": len(d.n_minus),
                "n_plus": names(d.n_plus),
                "n_minus": names(d.n_minus),
                "removed": names(d.removed),
                "literal_removed": None if d.literal_removed is None else names(d.literal_removed),
                "literal_removed_matches": d.literal_match,
                "consistency": "ok" if not problems else "mismatch",
                "problems": problems,
                "pass": not problems,
            }
        )
    return rows


def cmd_simple_head(args):
    from .borel_chain import reflection_chain
    from .highest_weight import highest_weight_wrt, is_irreducible, j_length, simple_head
    from .typicality import is_typical, predicted_length

    alg = build_algebra(LEBAR, args.n, args.p)
    lam = _weight(args.lam, args.n, args.p, LEBAR)
    L = simple_head(alg, lam)
    chain = reflection_chain(alg, validate=False)
    hws = [str(highest_weight_wrt(L, d.n_plus, d.k).weight) for d in chain]
    irr = is_irreducible(L)
    return [
        {
            "claim": "simple-head",
            "lambda": str(lam),
            "typical": is_typical(lam),
            "dim": L.dim,
            "length": j_length(L),
            "length_pred": predicted_length(lam),
            "irreducible": irr,
            "chain_highest_weights": hws,
            "pass": irr,
        }
    ]


def cmd_kac(args):
    from .highest_weight import (
        degree_zero_decomposition,
        is_irreducible,
        j_length,
        kac_module,
        primitive_space,
    )
    from .typicality import is_typical

    which = _which(args.which)
    alg = build_algebra(which, args.n, args.p)
    lam = _weight(args.lam, args.n, args.p, which)
    K = kac_module(alg, lam)
    irr = is_irreducible(K)
    nplus = [i for i in range(alg.dim) if alg.degree[i] > 0] + degree_zero_decomposition(alg)[2]
    P = primitive_space(K, nplus)
    prim = sorted({str(K.weight(int(next(i for i, c in enumerate(v) if c)))) for v in P.basis})
    dimL0 = K.dim // (2**args.n * args.p**args.n)
    typ = is_typical(lam)
    return [
        {
            "claim": "kac-irreducible-iff-typical",
            "algebra": args.which,
            "lambda": str(lam),
            "typical": typ,
            "dimL0": dimL0,
            "dimKac": K.dim,
            "irreducible": irr,
            "length": j_length(K),
            "primitive_weights": prim,
            "pass": irr == typ,
        }
    ]


def _sweep_weights(args):
    if args.lam:
        return [_weight(args.lam, args.n, args.p, LEBAR)]
    return all_weights(args.n, args.p, True)


def cmd_proposition_check(args):
    from .typicality import sweep_one

    rows = []
    for lam in _sweep_weights(args):
        rec = sweep_one(lam, chain=True, le=False)
        if rec.error:
            rows.append({"claim": "shift-rule", "lambda": str(lam), "error": rec.error, "pass": False})
            continue
        for k, pred, comp, rule in rec.chain_shifts:
            rows.append(
                {
                    "claim": f"shift-rule-{rule}",
                    "lambda": str(lam),
                    "k": k,
                    "rule": rule,
                    "predicted": str(pred),
                    "computed": str(comp),
                    "pass": pred == comp,
                }
            )
    return rows


def cmd_theorem_sweep(args):
    from .typicality import check_le_theorem, check_theorem

    if args.sample is not None and args.seed is None:
        raise UsageError("--atypical-plus-sample needs --seed")
    scope = "all" if args.sample is None else "atypical-plus-sample"
    rows = []
    if args.algebra in ("lebar", "both"):
        recs = check_theorem(
            args.n,
            args.p,
            scope,
            sample=args.sample or 0,
            seed=args.seed or 0,
            chain=not args.no_chain,
            le=False,
            workers=args.workers,
        )
        for r in recs:
            rows.append(
                {
                    "lambda": str(r.lam),
                    "typical": r.typical,
                    "irreducible": r.computed_irreducible,
                    "dimL0": r.dimL0,
                    "dimKac": r.dimKac,
                    "length_pred": r.predicted_length,
                    "length_comp": r.computed_length,
                    "pass": r.passed if not args.no_chain else (r.theorem_pass and r.length_pass),
                    "theorem_pass": r.theorem_pass,
                    "length_pass": r.length_pass,
                    "shift_pass": r.shift_pass if not args.no_chain else None,
                    "length_chain": r.chain_length,
                    "error": r.error,
                    "algebra": "lebar",
                    "claim": "kac-irreducible-iff-typical",
                }
            )
    if args.algebra in ("le", "both"):
        for lam, typ, irr in check_le_theorem(args.n, args.p):
            rows.append(
                {
                    "lambda": str(lam),
                    "typical": typ,
                    "irreducible": irr,
                    "pass": typ == irr,
                    "algebra": "le",
                    "claim": "le-kac-irreducible-iff-typical",
                }
            )
    return rows


def cmd_automorphism_check(args):
    from .torus_aut import check_ad_ppower, check_weight_reduction, sample_checks, torus_element

    fails = sample_checks(args.n, args.p, args.samples, args.seed)
    names = {
        "scalar-euler": "fphi-scalar-fixes-euler",
        "scalar-de": "fphi-scalar-rescales-de",
        "symplectic-euler": "fphi-symplectic-fixes-euler",
        "symplectic-de": "fphi-symplectic-de",
        "automorphism": "fphi-automorphism",
        "derivation": "fphi-derivation",
    }
    rows = [
        {"claim": names[k], "checked": args.samples, "failures": len(v), "pass": not v} for k, v in fails.items()
    ]
    alg = build_algebra(LEBAR, args.n, args.p)
    rng = random.Random(args.seed)
    tori = [
        torus_element(rng.randrange(1, args.p), [rng.randrange(1, args.p) for _ in range(args.n)], args.p)
        for _ in range(3)
    ]
    red = check_weight_reduction(alg, tori)
    rows.append({"claim": "torus-weight-reduction", "checked": alg.dim, "failures": len(red), "pass": not red})
    adp = [f for t in tori for f in check_ad_ppower(alg, t)]
    rows.append({"claim": "torus-ad-p-power", "checked": len(alg.even_basis()), "failures": len(adp), "pass": not adp})
    return rows


COMMANDS = {
    "algebra": cmd_algebra,
    "bracket-table": cmd_bracket_table,
    "check-identities": cmd_check_identities,
    "borel": cmd_borel,
    "simple-head": cmd_simple_head,
    "kac": cmd_kac,
    "proposition-check": cmd_proposition_check,
    "theorem-sweep": cmd_theorem_sweep,
    "automorphism-check": cmd_automorphism_check,
}


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--n", type=int, required=True)
    common.add_argument("--p", type=int, required=True)
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--out", default=None, help="output file (format from extension unless --format)")

    parser = _Parser(prog="lekac", description="Restricted Kac modules of le(n) and lebar(n) over F_p.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    a = add("algebra", "basis counts and grading")
    a.add_argument("--which", choices=("le", "lebar"), default="le")
    a = add("bracket-table", "all nonzero structure constants")
    a.add_argument("--which", choices=("le", "lebar"), default="lebar")
    a = add("check-identities", "De homomorphism, anticommutativity, Jacobi")
    a.add_argument("--which", choices=("le", "lebar"), default="le")
    a.add_argument("--samples", type=int, default=1000)
    a.add_argument("--seed", type=int, required=True)
    a.add_argument("--skip-jacobi", action="store_true")
    add("borel", "the chain of triangular decompositions")
    a = add("simple-head", "the simple head of a Kac module")
    a.add_argument("--lambda", dest="lam", required=True)
    a = add("kac", "a restricted Kac module")
    a.add_argument("--lambda", dest="lam", required=True)
    a.add_argument("--which", choices=("le", "lebar"), default="lebar")
    a = add("proposition-check", "highest weights along the chain against the shift rules")
    a.add_argument("--lambda", dest="lam", default=None)
    a = add("theorem-sweep", "irreducibility against typicality over many weights")
    g = a.add_mutually_exclusive_group()
    g.add_argument("--all", action="store_true")
    g.add_argument("--atypical-plus-sample", dest="sample", type=int, default=None)
    a.add_argument("--seed", type=int, default=None)
    a.add_argument("--algebra", choices=("le", "lebar", "both"), default="lebar")
    a.add_argument("--workers", type=int, default=1)
    a.add_argument("--no-chain", action="store_true", help="skip the chain highest weights")
    a = add("automorphism-check", "CSP automorphisms and the torus action")
    a.add_argument("--samples", type=int, default=500)
    a.add_argument("--seed", type=int, required=True)
    return parser


def _format(args):
    if args.format:
        return args.format
    if args.out and args.out.endswith(".csv"):
        return "csv"
    return "json"


def run(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.n < 1 or args.p < 2:
            raise UsageError("n must be >= 1 and p prime")
        check_capacity(args.n, args.p)
        rows = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "out", "format")}
    text = render(args.command, params, rows, _format(args))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK if all(r.get("pass") is not False for r in rows) else EXIT_FAIL


def main(argv=None):
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
