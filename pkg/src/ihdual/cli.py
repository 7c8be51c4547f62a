"""Command-line interface.

Exit codes: 0 when every check passes or is explicitly skipped, 1 when any
check produces a defect witness, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from . import diagrams, signcalc, spacefile
from .complex import StratifiedComplex, barycentric_subdivide
from .exactfield import determinant, parse_field, SparseMatrix
from .ichains import ih_dims

EXIT_OK, EXIT_DEFECT, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# --------------------------------------------------------------------------
# argument helpers


def parse_degrees(text: Optional[str], top: int) -> List[int]:
    """``"1"``, ``"0,2"`` or ``"0-2"``; None means every degree up to ``top``."""
    if text is None:
        return list(range(top + 1))
    out = []
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part[1:]:
                k = part.index("-", 1)
                lo, hi = int(part[:k]), int(part[k + 1:])
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise InputError("bad degree list %r" % text) from None
    return sorted(set(out))


def load_space(arg: str) -> StratifiedComplex:
    from .corpus import get_space
    if os.path.exists(arg):
        try:
            return spacefile.load(arg)
        except spacefile.SpaceFileError as e:
            raise InputError("%s: %s" % (arg, e)) from None
        except OSError as e:
            raise InputError(str(e)) from None
    try:
        return get_space(arg)
    except KeyError:
        raise InputError("%s: no such file or corpus space" % arg) from None


def perversities(X: StratifiedComplex, spec: Optional[str], seed: int):
    from .corpus import perversity_grid
    from .perversity import parse_perversity
    if spec is None or spec == "grid":
        return perversity_grid(X, seed)
    try:
        return [parse_perversity(s, X) for s in _split_specs(spec)]
    except (ValueError, KeyError) as e:
        raise InputError("bad perversity %r: %s" % (spec, e)) from None


def _split_specs(spec: str) -> List[str]:
    """Split on top-level ``;`` so inline JSON tables survive."""
    if spec.lstrip().startswith("{"):
        return [spec]
    return [s for s in spec.split(";") if s.strip()]


def field_of(args):
    try:
        return parse_field(args.field)
    except ValueError as e:
        raise InputError(str(e)) from None


def emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def emit_reports(args, reports) -> int:
    if args.format == "json":
        emit(args, diagrams.reports_json(reports))
    else:
        emit(args, diagrams.reports_tsv(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_DEFECT


def _spaces(args) -> List[StratifiedComplex]:
    from .corpus import closed_spaces
    if args.space:
        return [load_space(s) for s in args.space]
    return list(closed_spaces().values())


# --------------------------------------------------------------------------
# commands


def cmd_ih(args) -> int:
    X = load_space(args.space)
    F = field_of(args)
    degs = parse_degrees(args.degrees, X.dim)
    rows = []
    for p in perversities(X, args.perversity, args.seed):
        dims = ih_dims(X, p, F)
        rows.append({"perversity": p.label, "table": {str(k): v for k, v in sorted(p.values.items())},
                     "dims": {str(i): dims[i] for i in degs if 0 <= i <= X.dim}})
    warnings = [] if X.is_flag_like() else ["triangulation is not flag-like; consider one barycentric subdivision"]
    if args.format == "json":
        emit(args, json.dumps({"space": X.name, "field": str(F), "rows": rows, "warnings": warnings},
                              indent=2, sort_keys=True) + "\n")
    else:
        lines = ["perversity\t" + "\t".join("IH_%d" % i for i in degs if 0 <= i <= X.dim)]
        for r in rows:
            lines.append(r["perversity"] + "\t" + "\t".join(str(v) for v in r["dims"].values()))
        lines += ["# warning: " + w for w in warnings]
        emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_dual_check(args) -> int:
    F = field_of(args)
    reports = []
    for X in _spaces(args):
        ps = perversities(X, args.perversity, args.seed)
        for p in ps:
            reports.append(diagrams.check_duality_ranks(X, p, F))
            if args.triangle:
                reports.append(diagrams.check_triangle_I(
                    X, p, F, args.subdiv_limit,
                    None if args.degrees is None else parse_degrees(args.degrees, X.dim)))
        if args.cube:
            reports.append(diagrams.check_cube_backface(X, F))
    return emit_reports(args, sorted(reports, key=lambda r: r.key))


def cmd_pairing(args) -> int:
    from .products import duality_map, nu_pairing
    X = load_space(args.space)
    F = field_of(args)
    degs = parse_degrees(args.degrees, X.dim)
    out = []
    status = EXIT_OK
    for p in perversities(X, args.perversity or "zero", args.seed):
        for i in degs:
            dm = duality_map(X, p, i, F, args.subdiv_limit)
            entry = {"perversity": p.label, "degree": i, "certified": dm.certified}
            if not dm.certified:
                entry["reason"] = dm.reason
                out.append(entry)
                continue
            pr = nu_pairing(dm.system, i)
            entry["certified"] = pr.certified
            if not pr.certified:
                entry["reason"] = pr.reason
                out.append(entry)
                continue
            entry["subdivisions"] = dm.subdivisions
            entry["nu"] = [[F.format(x) for x in row] for row in pr.nu]
            entry["triangle_I"] = pr.nu == pr.kappa_pd
            if pr.nu and pr.nu[0]:
                M = SparseMatrix.from_dense(pr.nu, F)
                entry["determinant"] = F.format(determinant(M)) if M.nrows == M.ncols else None
            if not entry["triangle_I"]:
                status = EXIT_DEFECT
            out.append(entry)
    if args.format == "json":
        emit(args, json.dumps({"space": X.name, "pairings": out}, indent=2, sort_keys=True) + "\n")
    else:
        lines = []
        for e in out:
            head = "%s\tdegree %d" % (e["perversity"], e["degree"])
            if "nu" not in e:
                lines.append(head + "\tskipped: " + e.get("reason", ""))
                continue
            lines.append("%s\ttriangle-I %s\tdet %s" % (head, "pass" if e["triangle_I"] else "FAIL",
                                                         e.get("determinant")))
            lines += ["\t" + " ".join(row) for row in e["nu"]]
        emit(args, "\n".join(lines) + "\n")
    return status


def cmd_cone_check(args) -> int:
    from .corpus import cone_links
    F = field_of(args)
    links = [load_space(s) for s in args.space] if args.space else list(cone_links().values())
    reports = []
    for L in links:
        apex = parse_degrees(args.apex, L.dim + 1) if args.apex else list(range(-1, L.dim + 2))
        reports.append(diagrams.check_cone_formula(L, apex, F))
    return emit_reports(args, reports)


def cmd_signcalc_test(args) -> int:
    F = field_of(args)
    ns = parse_degrees(args.degrees, 3)
    rows = []
    ok = True
    for n in ns:
        tally = signcalc.run_trials(n, args.trials, args.seed, F)
        for law in signcalc.LAWS:
            p, t = tally[law]
            rows.append({"n": n, "law": law, "passed": p, "trials": t})
            ok = ok and p == t
    if args.format == "json":
        emit(args, json.dumps({"field": str(F), "seed": args.seed, "results": rows},
                              indent=2, sort_keys=True) + "\n")
    else:
        lines = ["n\tlaw\tpassed\ttrials\tstatus"]
        for r in rows:
            lines.append("%d\t%s\t%d\t%d\t%s" % (r["n"], r["law"], r["passed"], r["trials"],
                                                 "pass" if r["passed"] == r["trials"] else "FAIL"))
        emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_DEFECT


def cmd_subdivide(args) -> int:
    X = load_space(args.space)
    Y = X
    for _ in range(args.times):
        Y = barycentric_subdivide(Y)
    if args.check:
        F = field_of(args)
        reports = [diagrams.check_subdivision(X, p, F) for p in perversities(X, args.perversity, args.seed)]
        code = emit_reports(args, reports)
        return code
    emit(args, spacefile.dumps(Y))
    return EXIT_OK


def cmd_validate(args) -> int:
    X = load_space(args.space)
    rep = X.validate()
    flag = X.is_flag_like()
    info = {
        "space": X.name,
        "dimension": X.dim,
        "f_vector": list(X.f_vector),
        "strata": [{"index": st.index, "codim": st.codim, "simplices": len(st.simplices)}
                   for st in X.strata],
        "flag_like": flag,
        "errors": rep.errors,
        "warnings": rep.warnings + ([] if flag else ["not flag-like; consider one barycentric subdivision"]),
    }
    if args.format == "json":
        emit(args, json.dumps(info, indent=2, sort_keys=True) + "\n")
    else:
        lines = ["space\t%s" % X.name, "dimension\t%d" % X.dim,
                 "f_vector\t%s" % " ".join(map(str, info["f_vector"])),
                 "strata\t%d" % len(info["strata"]), "flag_like\t%s" % flag]
        lines += ["error\t" + e for e in rep.errors]
        lines += ["warning\t" + w for w in info["warnings"]]
        lines.append("status\t" + ("ok" if rep.ok else "invalid"))
        emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if rep.ok else EXIT_INPUT


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="q", help="q or p:PRIME (default q)")
    common.add_argument("--perversity", help="GM name, const:K, D(...), JSON table, 'grid', or ';'-separated list")
    common.add_argument("--degrees", help="degree list, e.g. 1 or 0,2 or 0-3")
    common.add_argument("--subdiv-limit", type=int, default=2, dest="subdiv_limit")
    common.add_argument("--format", choices=("tsv", "json"), default="tsv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the report here instead of stdout")

    ap = argparse.ArgumentParser(prog="ihdual", description="Exact intersection homology and duality checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ih", parents=[common], help="intersection homology dimensions")
    p.add_argument("space", help="space file or corpus name")
    p.set_defaults(func=cmd_ih)

    p = sub.add_parser("dual-check", parents=[common], help="duality ranks, triangle I and cube checks")
    p.add_argument("space", nargs="*", help="space files or corpus names (default: closed corpus)")
    p.add_argument("--no-triangle", dest="triangle", action="store_false")
    p.add_argument("--no-cube", dest="cube", action="store_false")
    p.set_defaults(func=cmd_dual_check)

    p = sub.add_parser("pairing", parents=[common], help="the duality pairing matrices")
    p.add_argument("space")
    p.set_defaults(func=cmd_pairing)

    p = sub.add_parser("cone-check", parents=[common], help="cone formula against its oracle")
    p.add_argument("space", nargs="*", help="link spaces (default: corpus links)")
    p.add_argument("--apex", help="apex perversity values, e.g. -1-2")
    p.set_defaults(func=cmd_cone_check)

    p = sub.add_parser("signcalc-test", parents=[common], help="randomized sign-law trials")
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=cmd_signcalc_test)

    p = sub.add_parser("subdivide", parents=[common], help="barycentric subdivision")
    p.add_argument("space")
    p.add_argument("--times", type=int, default=1)
    p.add_argument("--check", action="store_true", help="report IH stability instead of writing the space")
    p.set_defaults(func=cmd_subdivide)

    p = sub.add_parser("validate", parents=[common], help="validate a space file")
    p.add_argument("space")
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
