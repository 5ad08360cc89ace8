"""Command-line entry point.

Exit codes: 0 ok, 1 schema error, 2 precondition violated, 3 verification failure.
"""

import argparse
import json
import os
import random
import sys

import mpmath

from . import __version__
from .cones import common_eigenvector, pf_eigenvector
from .dyn_degrees import check_degree_bound, check_log_concavity, degrees_via_limit, model_profile
from .dyn_rank import (
    GroupRep,
    build_quasi_nef_sequence,
    dynamical_rank,
    kernel_check,
    wedge_oracle,
)
from .errors import ConeDynError, PreconditionError, SchemaError, VerificationError
from .exact.field import to_mpf
from .exact.matrix import ExactMatrix
from .free_group import LaurentPoly, derived_level, non_fg_witness, phi, reduce, to_laurent
from .io import load_cone, load_group, load_json, load_matrix, render_json, render_tsv
from .model_en import SymClass, hodge_gram, is_positive_definite, sym_action

COMMANDS = ("dyndeg", "rank", "cone-eig", "common-eig", "en-action", "hodge", "freegroup")


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _precision(text):
    v = int(text)
    if v < 30:
        raise argparse.ArgumentTypeError("must be >= 30")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with default option values")
    common.add_argument("--eps", type=_positive_float, default=None, help="radius tolerance (default 1e-9)")
    common.add_argument("--precision", type=_precision, default=None, help="decimal digits (default 60)")
    common.add_argument("--seed", type=int, default=None, help="sampling seed (default 0)")
    common.add_argument("--format", choices=("json", "tsv"), default=None)
    common.add_argument("-o", "--output", default=None, help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="conedyn", description="Dynamics of matrix groups on cones.")
    p.add_argument("--version", action="version", version=f"conedyn {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dyndeg", parents=[common], help="dynamical degrees in the E^n model")
    s.add_argument("--model", choices=("en",), default="en")
    s.add_argument("--matrix", required=True)
    s.add_argument("--limit-check", type=int, default=0, metavar="M")

    s = sub.add_parser("rank", parents=[common], help="characters and dynamical rank of a group")
    s.add_argument("--group", required=True)
    s.add_argument("--model", choices=("en", "wedge"), default="en")
    s.add_argument("--max-word-len", type=int, default=6)

    s = sub.add_parser("cone-eig", parents=[common], help="Perron-Frobenius eigenvector in a cone")
    s.add_argument("--matrix", required=True)
    s.add_argument("--cone", help="cone JSON (default: positive orthant)")

    s = sub.add_parser("common-eig", parents=[common], help="common eigenvector of a group in its cone")
    s.add_argument("--group", required=True)

    s = sub.add_parser("en-action", parents=[common], help="induced action on Sym_n")
    s.add_argument("--matrix", required=True)

    s = sub.add_parser("hodge", parents=[common], help="Hodge form on the primitive hyperplane")
    s.add_argument("--classes", required=True, help="JSON list of n-1 symmetric matrices")

    s = sub.add_parser("freegroup", parents=[common], help="free group computations")
    fsub = s.add_subparsers(dest="action", required=True)
    e = fsub.add_parser("eval", parents=[common])
    e.add_argument("--word", required=True, help='letters a, b, a-, b-, e.g. "a b a- b-"')
    w = fsub.add_parser("witness", parents=[common])
    w.add_argument("--span", required=True, help="JSON list of Laurent polynomials [[i, j, c], ...]")
    return p


def resolve_config(args):
    defaults = {"eps": 1e-9, "precision": 60, "seed": 0, "format": "json", "output": None}
    if args.config:
        data = load_json(args.config)
        if not isinstance(data, dict):
            raise SchemaError("config must be a JSON object")
        unknown = set(data) - set(defaults)
        if unknown:
            raise SchemaError(f"unknown config keys: {sorted(unknown)}")
        defaults.update(data)
    env = os.environ.get("CONEDYN_PRECISION")
    if env:
        try:
            defaults["precision"] = int(env)
        except ValueError as exc:
            raise SchemaError("CONEDYN_PRECISION must be an integer") from exc
    cfg = {}
    for key, val in defaults.items():
        arg = getattr(args, key, None)
        cfg[key] = arg if arg is not None else val
    if not float(cfg["eps"]) > 0:
        raise SchemaError("eps must be > 0")
    if int(cfg["precision"]) < 30:
        raise SchemaError("precision must be >= 30")
    cfg["eps"] = float(cfg["eps"])
    cfg["precision"] = int(cfg["precision"])
    cfg["seed"] = int(cfg["seed"])
    return cfg


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def cmd_dyndeg(args, cfg):
    a = load_matrix(args.matrix)
    prof = model_profile(a, cfg["eps"])
    out = prof.to_json()
    lc, lc_at = check_log_concavity(prof)
    db, db_at = check_degree_bound(prof)
    out["checks"] = {
        "log_concavity": {"pass": lc, "index": lc_at},
        "degree_bound": {"pass": db, "index": db_at},
    }
    if args.limit_check:
        out["limit_series"] = degrees_via_limit(a, 1, args.limit_check, dps=cfg["precision"])
    return out


def _rep_from_group(path, model):
    dim, gens, cone, _ = load_group(path)
    if model == "en":
        return GroupRep.from_model(gens, load_cone(cone, dim * (dim + 1) // 2) if cone else None)
    return GroupRep(dim, gens, load_cone(cone, dim), 2)


def cmd_rank(args, cfg):
    rep = _rep_from_group(args.group, args.model)
    oracle = wedge_oracle if args.model == "wedge" else None
    _, cs = build_quasi_nef_sequence(rep, oracle)
    report = dynamical_rank(rep, cs)
    rows = kernel_check(rep, cs, args.max_word_len, dps=cfg["precision"])
    out = report.to_json()
    out["null_entropy_kernel_witnesses"] = [
        {"word": r["word"], "null_entropy": r["null_entropy"]} for r in rows if r["null_entropy"]
    ]
    out["kernel_check"] = {
        "words": len(rows),
        "mismatches": [r["word"] for r in rows if not r["agree"]],
        "pass": all(r["agree"] for r in rows),
    }
    out["characters"] = cs.to_json(dps=min(cfg["precision"], 30))
    out["product_one"] = {"pass": all(cs.product_one.values())}
    return out


def cmd_cone_eig(args, cfg):
    g = load_matrix(args.matrix)
    cone = load_cone(load_json(args.cone) if args.cone else None, g.dim)
    res = pf_eigenvector(g, cone)
    out = res.to_json()
    out["field"] = res.field.describe()
    out["eigenvalue_approx"] = mpmath.nstr(to_mpf(res.eigenvalue, cfg["precision"]), 20)
    return out


def cmd_common_eig(args, cfg):
    dim, gens, cone, _ = load_group(args.group)
    names = list(gens)
    res = common_eigenvector([gens[k] for k in names], load_cone(cone, dim))
    out = res.to_json()
    out["chi"] = dict(zip(names, out["chi"]))
    out["field"] = res.field.describe()
    return out


def cmd_en_action(args, cfg):
    a = load_matrix(args.matrix)
    s = sym_action(a)
    prof = model_profile(a, cfg["eps"])
    return {"sym_action": s.to_json(), "dim": s.dim, "degrees": [d.to_json() for d in prof.degrees]}


def cmd_hodge(args, cfg):
    data = load_json(args.classes)
    if not isinstance(data, list) or not data:
        raise SchemaError("classes must be a non-empty JSON list of matrices")
    hs = [SymClass(ExactMatrix.from_json(m).tolist()) for m in data]
    basis, gram = hodge_gram(hs)
    return {
        "basis": [b.to_json() for b in basis],
        "gram": [[str(x) for x in row] for row in gram],
        "positive_definite": is_positive_definite(gram) if gram else True,
    }


def cmd_freegroup(args, cfg):
    if args.action == "eval":
        w = reduce(args.word)
        level = derived_level(w)
        out = {"word": str(w), "phi": phi(w).to_json(), "derived_level": ">=2" if level == 2 else level}
        if level >= 1:
            p = to_laurent(w)
            out["laurent"] = {"terms": p.to_json(), "str": str(p)}
        return out
    data = load_json(args.span)
    if not isinstance(data, list):
        raise SchemaError("span must be a JSON list of Laurent polynomials")
    return non_fg_witness([LaurentPoly.from_json(p) for p in data]).to_json()


HANDLERS = {
    "dyndeg": cmd_dyndeg,
    "rank": cmd_rank,
    "cone-eig": cmd_cone_eig,
    "common-eig": cmd_common_eig,
    "en-action": cmd_en_action,
    "hodge": cmd_hodge,
    "freegroup": cmd_freegroup,
}


def _echo(args, cfg):
    echo = {k: v for k, v in vars(args).items() if k not in ("config",) and v is not None}
    echo.update(cfg)
    return echo


def run(argv=None, stdout=None, stderr=None):
    """Parse ``argv``, run the command and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        cfg = resolve_config(args)
        random.seed(cfg["seed"])
        with mpmath.workdps(cfg["precision"]):
            result = HANDLERS[args.command](args, cfg)
        report = {"tool": "conedyn", "version": __version__, "config": _echo(args, cfg), "result": result}
        text = render_tsv(report) if cfg["format"] == "tsv" else render_json(report)
        if cfg["output"]:
            with open(cfg["output"], "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            stdout.write(text)
        return 0
    except SchemaError as exc:
        stderr.write(f"schema error: {exc}\n")
        return 1
    except PreconditionError as exc:
        stderr.write(f"precondition violated ({type(exc).__name__}): {exc}\n")
        return 2
    except VerificationError as exc:
        stderr.write(f"verification failed ({type(exc).__name__}): {exc}\n")
        return 3
    except ConeDynError as exc:
        stderr.write(f"error: {exc}\n")
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
