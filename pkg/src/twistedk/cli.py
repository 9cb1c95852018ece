"""Command-line surface: model loading, page computation, reports.

Exit codes: 0 success, 2 parse error, 3 precondition violation,
4 documented-unsupported input.  Reports are deterministic: identical
inputs and configuration produce byte-identical JSON.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import __version__
from . import exact_linalg
from .exact_linalg import FGAbelianGroup, FieldScalar, Mat
from .cache import SnfCache
from .complexes import (
    CatalogError,
    ComplexError,
    SimplicialComplex,
    builtin_model,
    cohomology,
)
from .cdga import CDGAError, CDGAModel, builtin_cdga, from_json as cdga_json
from .cohomology_ops import Cochain, CochainError
from .ahss_twisted_k import (
    TwistCocycle,
    UnsupportedError,
    e2_page,
    e4_and_einfinity,
    mv_s3,
)
from .twisted_derham import (
    PeriodicComplex,
    TwistError,
    massey_vs_oracle,
    twisted_cohomology,
)
from .cohomology_ops import MasseyCoset, Undefined, massey_iterated
from .diff_refinement import (
    GerbeData,
    GerbeError,
    TwistForm,
    assemble_khat,
    standard_gerbe,
)
from .filtered_ss import converged

PARSE_ERROR = 2
PRECONDITION_ERROR = 3
UNSUPPORTED_ERROR = 4


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _hash_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _load_complex(args) -> tuple:
    if getattr(args, "model", None):
        try:
            K = builtin_model(args.model)
        except CatalogError as e:
            raise CliError(str(e), PARSE_ERROR)
        return K, {"model": args.model, "hash": _hash_text(args.model)}
    path = getattr(args, "complex", None)
    if not path:
        raise CliError("need --model or --complex", PARSE_ERROR)
    try:
        with open(path) as fh:
            text = fh.read()
        K = SimplicialComplex.from_json(text)
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}", PARSE_ERROR)
    except ComplexError as e:
        raise CliError(str(e), PARSE_ERROR)
    return K, {"file": path, "hash": _hash_text(text)}


def _load_cdga(spec: str) -> tuple:
    if spec and os.path.exists(spec):
        try:
            with open(spec) as fh:
                text = fh.read()
            return cdga_json(text), {"file": spec, "hash": _hash_text(text)}
        except (OSError, CDGAError) as e:
            raise CliError(f"bad CDGA input: {e}", PARSE_ERROR)
    name = spec
    if name.endswith(".json"):
        name = name[:-5]
    try:
        return builtin_cdga(name), {"model": name, "hash": _hash_text(name)}
    except CDGAError as e:
        raise CliError(str(e), PARSE_ERROR)


def _load_twist(args, K) -> tuple:
    if getattr(args, "twist", None):
        path = args.twist
        try:
            with open(path) as fh:
                text = fh.read()
            h = Cochain.from_json(K, text)
            return TwistCocycle(K, h), {"file": path,
                                        "hash": _hash_text(text)}
        except OSError as e:
            raise CliError(f"cannot read {path}: {e}", PARSE_ERROR)
        except CochainError as e:
            raise CliError(str(e), PRECONDITION_ERROR)
    m = getattr(args, "twist_int", 0) or 0
    try:
        return (TwistCocycle.from_multiple(K, m),
                {"twist_int": m, "hash": _hash_text(str(m))})
    except CochainError as e:
        raise CliError(str(e), PRECONDITION_ERROR)


def _report(command, args, inputs, result) -> dict:
    return {
        "schema": 1,
        "command": command,
        "engine_version": __version__,
        "sign_convention": getattr(args, "sign", -1),
        "inputs": inputs,
        "result": result,
    }


def _emit(report, fmt, table_fn):
    if fmt == "json":
        print(json.dumps(report, sort_keys=True, default=str))
    else:
        table_fn(report)


def _group_str(g):
    return str(g)


# --- subcommands ----------------------------------------------------------

def cmd_cohomology(args):
    K, kinfo = _load_complex(args)
    groups = cohomology(K, args.coeff)
    result = {"coeff": args.coeff,
              "groups": {f"H{p}": str(g) for p, g in enumerate(groups)}}
    if args.coeff == "RZ":
        result["torus_ranks"] = {f"H{p}": g.torus_rank
                                 for p, g in enumerate(groups)}
    rep = _report("cohomology", args, {"complex": kinfo}, result)

    def table(rep):
        line = " ".join(f"{p}={v}" for p, v in
                        sorted(rep["result"]["groups"].items(),
                               key=lambda kv: int(kv[0][1:])))
        print(line)
    _emit(rep, args.format, table)
    return 0


def _page_rows(page, K):
    rows = {}
    for q in (2, 0, -2):
        rows[q] = [str(page.entry(p, q)) for p in range(K.dim + 1)]
    return rows


def cmd_ahss(args):
    K, kinfo = _load_complex(args)
    tw, tinfo = _load_twist(args, K)
    pages = sorted(set(int(p) for p in args.pages.split(",")))
    result = {"dimension": K.dim, "pages": {}}
    try:
        for r in pages:
            if r == 2 or r == 3:
                page = e2_page(K)
                result["pages"][str(r)] = {
                    str(p): str(page.entry(p, 0))
                    for p in range(K.dim + 1)}
            elif r >= 4:
                page = e4_and_einfinity(K, tw, args.sign)
                result["pages"][str(r)] = {
                    str(p): str(g) for p, g in page.groups.items()}
                result["K0_graded"] = [
                    [p, str(g)] for p, g in page.convergence["K0_graded"]]
                result["K1_graded"] = [
                    [p, str(g)] for p, g in page.convergence["K1_graded"]]
                result["K0_extension_ambiguous"] = \
                    page.convergence["K0_extension_ambiguous"]
                result["K1_extension_ambiguous"] = \
                    page.convergence["K1_extension_ambiguous"]
    except UnsupportedError as e:
        raise CliError(str(e), UNSUPPORTED_ERROR)
    rep = _report("ahss", args, {"complex": kinfo, "twist": tinfo}, result)

    def table(rep):
        res = rep["result"]
        for r, entries in sorted(res["pages"].items()):
            print(f"page E{r}  (p across, q even rows repeat; q odd rows "
                  "vanish)")
            ps = sorted(entries, key=int)
            print("  q=0   " + "  ".join(f"p={p}: {entries[p]}" for p in ps))
        if "K0_graded" in res:
            k0 = " + ".join(g for _, g in res["K0_graded"]
                            if g != "0") or "0"
            k1 = " + ".join(g for _, g in res["K1_graded"]
                            if g != "0") or "0"
            print(f"graded K0 = {k0}")
            print(f"graded K1 = {k1}")
    _emit(rep, args.format, table)
    return 0


def cmd_mv_s3(args):
    if args.twist_int is None or args.twist_int < 0:
        raise CliError("mv-s3 needs --twist >= 0", PRECONDITION_ERROR)
    r = mv_s3(args.twist_int)
    result = {
        "block_matrix": r["block_matrix"],
        "cokernel_over_Z": str(r["cokernel_over_Z"]),
        "torus_kernel": ("Q/Z" if r["torus_kernel_rank"]
                         else str(r["torus_kernel_torsion"])),
        "torus_kernel_generators": r["torus_kernel_generators"],
        "generator_note": r["generator_note"],
    }
    rep = _report("mv-s3", args,
                  {"twist": {"twist_int": args.twist_int}}, result)

    def table(rep):
        res = rep["result"]
        print(f"cokernel over Z: {res['cokernel_over_Z']}; "
              f"kernel over Q/Z: {res['torus_kernel']}")
        if res["torus_kernel_generators"]:
            print(f"kernel generators: {res['torus_kernel_generators']}")
    _emit(rep, args.format, table)
    return 0


def cmd_derham(args):
    A, ainfo = _load_cdga(args.cdga)
    try:
        H = A.parse_element(args.twist_elem) if args.twist_elem else A.zero()
        even, odd = twisted_cohomology(A, H)
    except (CDGAError, TwistError) as e:
        raise CliError(str(e), PRECONDITION_ERROR)
    result = {"even_dim": even, "odd_dim": odd}
    if args.verify_oracle:
        pc = PeriodicComplex(A, H)
        repc = converged(pc.as_filtration())
        result["oracle_total"] = {str(k): v
                                  for k, v in repc.total_cohomology.items()}
        result["oracle_agrees"] = (repc.total_cohomology[0] == even
                                   and repc.total_cohomology[1] == odd)
    rep = _report("derham", args, {"cdga": ainfo,
                                   "twist": {"element": args.twist_elem}},
                  result)

    def table(rep):
        res = rep["result"]
        print(f"twisted cohomology: even dim {res['even_dim']}, "
              f"odd dim {res['odd_dim']}")
        if "oracle_agrees" in res:
            print(f"oracle agreement = {str(res['oracle_agrees']).lower()}")
    _emit(rep, args.format, table)
    return 0


def cmd_massey(args):
    A, ainfo = _load_cdga(args.cdga)
    try:
        H = A.parse_element(args.twist_elem)
        x = A.parse_element(args.on)
    except CDGAError as e:
        raise CliError(str(e), PARSE_ERROR)
    try:
        out = massey_iterated(A, H, x, args.k)
    except (CDGAError, CochainError) as e:
        raise CliError(str(e), PRECONDITION_ERROR)
    if isinstance(out, Undefined):
        result = {"defined": False, "stage": out.stage,
                  "reason": out.reason}
    else:
        result = {"defined": True,
                  "degree": out.degree,
                  "representative": repr(out.representative),
                  "zero_coset": out.is_zero_coset(),
                  "indeterminacy_dim": out.indeterminacy.dim}
        if args.verify_oracle:
            agree = massey_vs_oracle(A, H, x, args.k)
            result["oracle_agrees"] = bool(agree.agrees
                                           and agree.indeterminacy_absorbed)
    rep = _report("massey", args,
                  {"cdga": ainfo, "twist": {"element": args.twist_elem},
                   "on": args.on, "k": args.k}, result)

    def table(rep):
        res = rep["result"]
        if not res["defined"]:
            print(f"undefined at stage {res['stage']}: {res['reason']}")
            return
        flavor = "zero" if res["zero_coset"] else "nonzero"
        print(f"iterated product in degree {res['degree']}: {flavor} coset, "
              f"representative {res['representative']}")
        if "oracle_agrees" in res:
            print(f"oracle agreement = {str(res['oracle_agrees']).lower()}")
    _emit(rep, args.format, table)
    return 0


_PRESET_PAIRS = {
    ("sphere(3)", "s3"): "s3",
    ("torus3", "torus3"): "torus3",
    ("torus2_7vertex", "torus2"): "torus2",
    ("sphere(2)", "s2"): "s2_exact",
    ("rp2_6vertex", "rp2_rational"): "rp2",
    ("cp2_9vertex", "cp2_rational"): "cp2",
    ("wedge(sphere(2),sphere(3),sphere(7))", "synthetic_massey"):
        "synthetic",
}


def cmd_diffk(args):
    model_name = args.model or ""
    cdga_name = (args.cdga or "").removesuffix(".json")
    preset = _PRESET_PAIRS.get((model_name, cdga_name))
    if preset is None:
        raise CliError(
            "diffk needs a matched complex/model pair from the catalog: "
            + ", ".join(f"{k[0]} + {k[1]}" for k in _PRESET_PAIRS),
            PARSE_ERROR)
    m = args.twist_int or 0
    try:
        K, A, G = standard_gerbe(preset, m)
        rep_k = assemble_khat(K, A, G, args.degree, args.sign)
    except (GerbeError, CochainError, TwistError) as e:
        raise CliError(str(e), PRECONDITION_ERROR)
    except UnsupportedError as e:
        raise CliError(str(e), UNSUPPORTED_ERROR)
    discrete = []
    for p, (rank, fin) in sorted(rep_k.discrete_parts.items()):
        parts = []
        if rank:
            parts.append(f"(R/Z)^{rank}" if rank > 1 else "R/Z")
        if not fin.is_trivial():
            parts.append(str(fin))
        if parts:
            discrete.append([p, " + ".join(parts)])
    result = {
        "degree": args.degree,
        "discrete": discrete,
        "form_dim": rep_k.form_entry.dimension,
        "form_note": rep_k.form_note,
        "extension_ambiguous": rep_k.extension_ambiguous,
        "curvature_constraints": [[p, str(v.coords)] for p, v in
                                  rep_k.curvature_constraints],
    }
    rep = _report("diffk", args,
                  {"complex": {"model": model_name},
                   "cdga": {"model": cdga_name},
                   "twist": {"twist_int": m}}, result)

    def table(rep):
        res = rep["result"]
        disc = " + ".join(s for _, s in res["discrete"]) or "0"
        parity = "even" if res["degree"] == 0 else "odd"
        print(f"{disc} (+) twisted-closed {parity} forms "
              f"(model dim {res['form_dim']})")
        print(f"note: {res['form_note']}")
    _emit(rep, args.format, table)
    return 0


# --- driver ---------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="twistedk",
        description="exact twisted K-theory spectral sequences on finite "
                    "complexes and CDGA models")
    ap.add_argument("--cache-dir", default=os.environ.get("AHSS_CACHE_DIR"),
                    help="directory for Smith-form caching")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", "--report", dest="format",
                       choices=("table", "json"), default="table")
        p.add_argument("--sign", type=int, choices=(1, -1), default=-1,
                       help="sign convention for the twist term")

    p = sub.add_parser("cohomology", help="graded cohomology of a complex")
    p.add_argument("--model")
    p.add_argument("--complex")
    p.add_argument("--coeff", choices=("Z", "Z2", "Q", "RZ"), default="Z")
    common(p)
    p.set_defaults(fn=cmd_cohomology)

    p = sub.add_parser("ahss", help="twisted AHSS pages and graded K")
    p.add_argument("--model")
    p.add_argument("--complex")
    p.add_argument("--twist")
    p.add_argument("--twist-int", type=int, default=0)
    p.add_argument("--pages", default="2,4")
    common(p)
    p.set_defaults(fn=cmd_ahss)

    p = sub.add_parser("mv-s3", help="two-chart gluing matrices for S^3")
    p.add_argument("--twist", dest="twist_int", type=int, required=True)
    common(p)
    p.set_defaults(fn=cmd_mv_s3)

    p = sub.add_parser("derham", help="twisted de Rham cohomology of a "
                                      "CDGA model")
    p.add_argument("--cdga", required=True)
    p.add_argument("--twist-elem", default="")
    p.add_argument("--verify-oracle", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_derham)

    p = sub.add_parser("massey", help="iterated twist products in a model")
    p.add_argument("--cdga", required=True)
    p.add_argument("--twist-elem", required=True)
    p.add_argument("--on", required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--verify-oracle", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_massey)

    p = sub.add_parser("diffk", help="refined twisted K of catalog pairs")
    p.add_argument("--model", required=True)
    p.add_argument("--cdga", required=True)
    p.add_argument("--twist", dest="twist_int", type=int, default=0)
    p.add_argument("--degree", type=int, choices=(0, 1), required=True)
    common(p)
    p.set_defaults(fn=cmd_diffk)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return PARSE_ERROR if e.code not in (0, None) else 0
    if args.cache_dir:
        exact_linalg.SNF_CACHE = SnfCache(args.cache_dir)
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    finally:
        exact_linalg.SNF_CACHE = None


if __name__ == "__main__":
    sys.exit(main())
