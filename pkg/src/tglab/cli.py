"""Command line front end.

``tglab <command> --spec <file> [flags]`` reads a JSON problem
specification, runs the requested family of checks and prints a
human-readable summary (default) or a machine report (``--json``).

Exit codes: 0 when every executed mathematical check passes, 1 when a
mathematical check fails (the report carries the witness), 2 for input or
usage errors.  TGLAB_THREADS is honored as an upper bound on parallelism;
the current implementation runs single-threaded, which satisfies any cap
and keeps reports byte-deterministic.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from tglab import errors
from tglab.errors import ParseError
from tglab.intlinalg import IntegerMatrix
from tglab.lgfamily import build_family, classify_parameter, restrict_to_km
from tglab.models import build_model
from tglab.polytopes import normalized_volume
from tglab.qdmcheck import annihilation_check, homogeneity_check, quot_landing_check
from tglab.semigroups import (
    AffineSemigroup,
    doubled_semigroup,
    gorenstein_shift_check,
    interior_shift_check_ungraded,
    saturation_check,
)
from tglab.toricfan import (
    Fan,
    anticanonical_consistency_check,
    class_is_nef,
    conv_in_support_check,
    nef_cone_anticones,
    nef_cone_pl,
    nef_cone_pullback_check,
    total_space_fan,
    validate_fan,
    w_set_convexity,
)
from tglab.weylops import (
    beta_outside_verified_regime,
    fl_hat_generators,
    fl_match_homogenized,
    gkz_generators,
    homogenized_generators,
)

SCHEMA = 1


def load_spec(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read spec: {exc}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(raw, dict) or "fan" not in raw:
        raise ParseError("spec must be an object with a 'fan' field")
    fan_data = raw["fan"]
    try:
        rays = [tuple(int(x) for x in r) for r in fan_data["rays"]]
        cones = [tuple(int(i) - 1 for i in c) for c in fan_data["max_cones"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad fan data: {exc}")
    if any(i < 0 for c in cones for i in c):
        raise ParseError("max_cones indices are 1-based and must be positive")
    bundles = raw.get("bundles", [])
    try:
        bundle_rows = [tuple(int(x) for x in row) for row in bundles]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad bundle rows: {exc}")
    opts = raw.get("options", {})
    spec = {
        "fan": Fan.make(rays, cones),
        "bundles": bundle_rows,
        "basis_p": raw.get("basis_p"),
        "degree_bound": int(opts.get("degree_bound", 6)),
        "dmax": int(opts.get("dmax", 8)),
        "seed": int(opts.get("seed", 0)),
        "stabilization_window": int(opts.get("stabilization_window", 3)),
    }
    return spec


def bundle_matrix(spec) -> IntegerMatrix:
    fan = spec["fan"]
    if not spec["bundles"]:
        return IntegerMatrix(0, fan.n_rays, ())
    return IntegerMatrix.from_rows(spec["bundles"])


def _thread_cap() -> int:
    raw = os.environ.get("TGLAB_THREADS", "")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        return 1


def cmd_validate(spec, args) -> dict:
    fan = spec["fan"]
    d = bundle_matrix(spec)
    diag = validate_fan(fan)
    out = {
        "fan": {
            "is_fan": diag.is_fan,
            "smooth": diag.smooth,
            "complete": diag.complete,
            "simplicial": diag.simplicial,
        }
    }
    nef_rows = [class_is_nef(fan, row) for row in d.entries]
    out["bundle_nef"] = nef_rows
    coeffs = [
        1 - sum(d.entries[j][i] for j in range(d.rows)) for i in range(fan.n_rays)
    ]
    out["adjoint_class_nef"] = class_is_nef(fan, coeffs)
    ok = diag.is_fan and diag.smooth and diag.complete and all(nef_rows)
    if ok:
        total = total_space_fan(fan, d)
        out["total_fan"] = {
            "rays": [list(r) for r in total.rays],
            "max_cones": [[i + 1 for i in c] for c in total.max_cones],
            "smooth": validate_fan(total).smooth,
        }
    out["passed"] = bool(ok and out["adjoint_class_nef"])
    return out


def cmd_construct(spec, args) -> dict:
    fan = spec["fan"]
    d = bundle_matrix(spec)
    model = build_model(fan, d, basis_p=spec["basis_p"])
    nef = nef_cone_anticones(fan)
    pl = nef_cone_pl(fan)
    out = {
        "A": model.A.to_lists(),
        "A_prime": model.Aprime.to_lists(),
        "A_double_prime": model.Adoubleprime.to_lists(),
        "kernel_basis": model.L.to_lists(),
        "section_C": model.C.to_lists(),
        "section_M": model.M.to_lists(),
        "section_D": model.C.mul(model.Aprime).transpose().to_lists(),
        "nef_cone_rays": [list(g) for g in nef.generators],
        "nef_cones_agree": nef.equals(pl),
        "nef_pullback_identity": nef_cone_pullback_check(fan, d),
        "anticanonical_consistency": anticanonical_consistency_check(fan, d),
        "w_set_convex": w_set_convexity(fan, d),
        "conv_in_support": conv_in_support_check(fan, d),
    }
    out["passed"] = bool(
        out["nef_cones_agree"]
        and out["nef_pullback_identity"]
        and out["anticanonical_consistency"]
    )
    return out


def cmd_semigroup(spec, args) -> dict:
    fan = spec["fan"]
    d = bundle_matrix(spec)
    bound = args.degree if args.degree is not None else spec["degree_bound"]
    total = total_space_fan(fan, d, allow_negative=True)
    Btot = total.ray_matrix()
    vol = normalized_volume(
        [tuple(0 for _ in range(Btot.rows))] + [Btot.col(i) for i in range(Btot.cols)]
    )
    S = doubled_semigroup(Btot)
    saturated, witness = saturation_check(S, bound)
    out = {
        "degree_bound": bound,
        "normalized_volume": vol,
        "saturated_up_to_bound": saturated,
        "witness": list(witness) if witness else None,
    }
    if saturated:
        c = d.rows
        shift = list(S.gen(0))
        for j in range(c):
            gen = S.gen(1 + fan.n_rays + j)
            shift = [a + b for a, b in zip(shift, gen)]
        out["gorenstein_shift"] = gorenstein_shift_check(S, shift, bound)
        Ap = total.ray_matrix()
        Sprime = AffineSemigroup(
            Ap, graded=False, cone_index_sets=tuple(tuple(cc) for cc in total.max_cones)
        )
        shiftp = [0] * Ap.rows
        for j in range(c):
            col = Ap.col(fan.n_rays + j)
            shiftp = [a + b for a, b in zip(shiftp, col)]
        out["interior_shift"] = interior_shift_check_ungraded(Sprime, S, shiftp, bound)
        out["passed"] = bool(out["gorenstein_shift"] and out["interior_shift"])
    else:
        out["passed"] = False
    return out


def cmd_gkz(spec, args) -> dict:
    fan = spec["fan"]
    d = bundle_matrix(spec)
    model = build_model(fan, d, basis_p=spec["basis_p"])
    variant = args.variant
    beta = [int(b) for b in args.beta.split(",")] if args.beta else None
    out = {"variant": variant}
    if variant == "plain":
        beta = beta if beta is not None else [0] * model.Aprime.rows
        g = gkz_generators(model.Aprime, beta, kernel_basis=model.L)
        ops = g["boxes"] + g["eulers"]
    elif variant == "homog":
        beta = beta if beta is not None else [0] * (model.Aprime.rows + 1)
        g = homogenized_generators(model.Adoubleprime, beta, kernel_basis=model.L)
        ops = g["boxes"] + g["eulers"]
    elif variant == "hat":
        beta = beta if beta is not None else [0] * (model.Aprime.rows + 1)
        g = fl_hat_generators(model.Aprime, beta, kernel_basis=model.L)
        ops = g["boxes"] + [g["ehat"]] + g["eulers"]
        out["fl_matches"] = [
            fl_match_homogenized(model.Aprime, model.L.col(a)) | {"relation": list(model.L.col(a))}
            for a in range(model.r)
        ]
        for row in out["fl_matches"]:
            row["relation"] = list(row["relation"])
    elif variant == "star":
        beta = beta if beta is not None else [0] * (model.Aprime.rows + 1)
        g = model.star_generators(beta)
        ops = g["boxes"] + g["eulers"]
    elif variant == "qdm":
        g = model.qdm_generators()
        ops = g["boxes"] + [g["euler"]]
        beta = []
    else:
        raise ParseError(f"unknown gkz variant {variant!r}")
    out["beta"] = beta
    out["parameter_outside_verified_regime"] = beta_outside_verified_regime(beta or [])
    out["operators"] = [op.to_records() for op in ops]
    out["passed"] = True
    if "fl_matches" in out:
        out["passed"] = all(r["matches"] for r in out["fl_matches"])
    return out


def cmd_lg(spec, args) -> dict:
    fan = spec["fan"]
    d = bundle_matrix(spec)
    model = build_model(fan, d, basis_p=spec["basis_p"])
    B = model.Aprime
    fam = build_family(B)
    km = restrict_to_km(B, model.M, model.m)
    rng = random.Random(args.seed if args.seed is not None else spec["seed"])
    window = spec["stabilization_window"]
    cones = [tuple(c) for c in model.total.max_cones]
    vol = normalized_volume(
        [tuple(0 for _ in range(B.rows))] + [B.col(i) for i in range(B.cols)]
    )
    samples = []
    good = 0
    for _ in range(args.samples):
        lam = [Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(B.cols)]
        verdict = classify_parameter(
            B,
            lam,
            stabilization_window=window,
            cutoff=args.cutoff,
            cone_index_sets=cones,
        )
        row = {
            "lambda": [str(x) for x in lam],
            "verdict": verdict["verdict"],
            "volume": verdict["evidence"]["volume"],
        }
        if "jacobian_dim" in verdict["evidence"]:
            row["jacobian_dim"] = verdict["evidence"]["jacobian_dim"]
        if verdict["verdict"] == "good":
            good += 1
        samples.append(row)
    out = {
        "family_monomials": sorted(str(k) for k in fam.coeffs),
        "km_family_monomials": sorted(
            [list(e), str(v)] for e, v in km.coeffs.items()
        ),
        "normalized_volume": vol,
        "samples": samples,
        "passed": good == len(samples),
    }
    return out


def cmd_ifun(spec, args) -> dict:
    fan = spec["fan"]
    d = bundle_matrix(spec)
    model = build_model(fan, d, basis_p=spec["basis_p"])
    dmax = args.dmax if args.dmax is not None else spec["dmax"]
    table = model.i_table(dmax + 1)
    g = model.qdm_generators()
    rows = []
    all_zero = True
    for a, box in enumerate(g["boxes"]):
        rep = annihilation_check(box, model.ring, model.L, table, dmax)
        ctop = model.chern["c_top"]
        euler = model.chern["euler_class"]
        landing = quot_landing_check(
            box, model.ring, model.L, ctop, euler, table, dmax
        )
        for brow, lrow in zip(rep["rows"], landing["rows"]):
            rows.append(
                {
                    "degree": list(brow["degree"]),
                    "relation": list(model.L.col(a)),
                    "B_d_is_zero": brow["is_zero"],
                    "c_top_landing": lrow["lands"],
                }
            )
        all_zero = all_zero and rep["all_zero"]
    hom = homogeneity_check(model.ring, model.L, table, dmax)
    out = {
        "dmax": dmax,
        "rows": rows,
        "homogeneity": hom["all_homogeneous"],
        "passed": bool(all_zero and hom["all_homogeneous"]),
    }
    return out


COMMANDS = {
    "validate": cmd_validate,
    "construct": cmd_construct,
    "semigroup": cmd_semigroup,
    "gkz": cmd_gkz,
    "lg": cmd_lg,
    "ifun": cmd_ifun,
}


def human_lines(report: dict, prefix=""):
    for key in sorted(report):
        value = report[key]
        if isinstance(value, dict):
            yield f"{prefix}{key}:"
            yield from human_lines(value, prefix + "  ")
        elif isinstance(value, list) and len(value) > 6:
            yield f"{prefix}{key}: [{len(value)} entries]"
        else:
            yield f"{prefix}{key}: {value}"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="tglab", description=__doc__)
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--spec", required=True, help="path to the JSON problem spec")
    parser.add_argument("--json", action="store_true", help="emit the JSON report")
    parser.add_argument("--gkz-variant", dest="variant", default="plain",
                        choices=["plain", "homog", "hat", "star", "qdm"])
    parser.add_argument("--beta", default=None, help="comma-separated integers")
    parser.add_argument("--degree", type=int, default=None)
    parser.add_argument("--dmax", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--samples", type=int, default=3)
    parser.add_argument("--cutoff", type=int, default=None,
                        help="slice cutoff for the Jacobian dimension sweep")
    args = parser.parse_args(argv)

    _thread_cap()  # upper bound on parallelism; execution is serial

    try:
        spec = load_spec(args.spec)
    except ParseError as exc:
        print(f"tglab: {exc}", file=sys.stderr)
        return 2

    try:
        result = COMMANDS[args.command](spec, args)
    except ParseError as exc:
        print(f"tglab: {exc}", file=sys.stderr)
        return 2
    except errors.TglabError as exc:
        report = {
            "schema": SCHEMA,
            "command": args.command,
            "error": {"type": type(exc).__name__, "message": str(exc)},
            "passed": False,
        }
        print(json.dumps(report, sort_keys=True, indent=2) if args.json
              else f"{type(exc).__name__}: {exc}")
        return 1

    report = {"schema": SCHEMA, "command": args.command, "results": result}
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2, default=str))
    else:
        for line in human_lines(report):
            print(line)
    return 0 if result.get("passed", True) else 1


if __name__ == "__main__":
    sys.exit(main())
