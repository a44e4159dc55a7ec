"""Command-line front end.

    clusterbasis cluster   --input roots.json
    clusterbasis basis     --picture "((* * *)_1 * * *)_0" --trace
    clusterbasis lambda    --input - --format json
    clusterbasis disc      --input roots.json
    clusterbasis transform --input roots.json --op shift:7 --op rescale:2,0
    clusterbasis check     --max-roots 7 --sample 2000 --seed 1

Exit status: 0 on success, 1 for unreadable input, 2 for a validation or
identity failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .basis import basis_sequence
from .cluster import ClusterPicture, build_picture_from_roots, validate_integrality
from .errors import InputError, ValidationError
from .exact import fmt, half, parse_rational
from .harness import EnumSpec, count_pictures, run_check
from .lambda_formula import (disc_valuation_from_picture, disc_valuation_from_roots,
                             hyperdisc_order, lambda8, lambda_result)
from .notation import load_input, parse_picture, picture_to_json
from . import transforms as tf

EXIT_OK, EXIT_INPUT, EXIT_VALIDATION = 0, 1, 2


# --- input -----------------------------------------------------------------------


def _read_text(args) -> str:
    if args.picture is not None:
        return args.picture
    if args.input in (None, "-"):
        return sys.stdin.read()
    try:
        with open(args.input, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc.strerror}") from None


def _load(args):
    """Returns (picture, roots_payload or None)."""
    vcf = parse_rational(args.vcf) if args.vcf is not None else None
    text = _read_text(args)
    if args.picture is not None:
        return parse_picture(text, 0 if vcf is None else vcf), None
    kind, payload = load_input(text, p=args.p, vcf=vcf)
    if kind == "roots":
        roots, c_f, p = payload
        P = build_picture_from_roots(roots, c_f, p)
        if vcf is not None:
            P = P.replace(vcf=vcf)
        return P, payload
    return payload, None


# --- rendering --------------------------------------------------------------------


def _table(headers, rows) -> str:
    cols = [headers] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cols) for k in range(len(headers))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cols)


def _centre(z) -> str:
    return z if isinstance(z, str) else fmt(z)


def _emit(args, data: dict, text: str):
    if args.format == "json":
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        print(text)


def _cluster_rows(P: ClusterPicture):
    rows = []
    for c in sorted(P.clusters, key=P.path):
        d = P.depth(c)
        rows.append({
            "path": P.path_label(c),
            "cluster": P.subtree_text(c),
            "size": P.size(c),
            "depth": fmt(d),
            "rel_depth": None if c == P.top else fmt(P.rel_depth(c)),
            "nu": fmt(P.nu(c)),
            "nu_half_minus_d": fmt(half(P.nu(c)) - d),
            "principal": P.is_principal(c),
        })
    return rows


# --- subcommands ------------------------------------------------------------------


def cmd_cluster(args) -> int:
    P, _ = _load(args)
    rows = _cluster_rows(P)
    report = validate_integrality(P)
    data = picture_to_json(P)
    data.update(genus=P.genus, n_roots=P.n, clusters=rows, integrality=report.as_dict())
    lines = [f"picture  {data['picture']}", f"vcf      {data['vcf']}", f"genus    {P.genus}", ""]
    lines.append(_table(
        ["cluster", "size", "d", "δ", "ν", "ν/2-d", "principal"],
        [[r["path"], r["size"], r["depth"], r["rel_depth"] or "-", r["nu"],
          r["nu_half_minus_d"], "yes" if r["principal"] else "no"] for r in rows]))
    for msg in report.problems:
        lines.append(f"warning: {msg}")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_basis(args) -> int:
    P, _ = _load(args)
    res = basis_sequence(P, trace=args.trace)
    steps = [{"i": st.index, "cluster": P.subtree_text(st.cluster),
              "path": P.path_label(st.cluster), "e": fmt(st.exponent),
              "centre": _centre(st.centre)} for st in res.steps]
    data = {"genus": P.genus, "steps": steps, "mu": res.mu_text(),
            "sum_e": fmt(sum(res.exponents)), "warnings": res.warnings}
    lines = [_table(["i", "s_i", "e_i", "centre"],
                    [[s["i"], s["path"], s["e"], s["centre"]] for s in steps]), ""]
    lines += [f"mu_{k} = {m}" for k, m in enumerate(data["mu"])]
    lines.append(f"sum e_i = {data['sum_e']}")
    if args.trace:
        order = sorted(P.clusters, key=P.path)
        trace = []
        for i, row in enumerate(res.trace):
            trace.append({P.path_label(c): fmt(row[c]) for c in order})
        data["trace"] = trace
        header = ["cluster", "ν", "d"] + [f"step {i}" for i in range(len(res.trace))]
        body = []
        for c in order:
            cells = [P.path_label(c), fmt(P.nu(c)), fmt(P.depth(c))]
            for i, row in enumerate(res.trace):
                v = fmt(row[c])
                cells.append(f"[{v}]" if res.steps[i].cluster == c else v)
            body.append(cells)
        lines += ["", _table(header, body), "[x] marks the cluster chosen at that step"]
    lines += [f"warning: {w}" for w in res.warnings]
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_lambda(args) -> int:
    P, _ = _load(args)
    lam = lambda_result(P)
    data = lam.as_dict()
    data.update(v_disc=fmt(disc_valuation_from_picture(P)), hyperdisc_order=fmt(hyperdisc_order(P)))
    report = validate_integrality(P)
    if report.problems:
        data["warnings"] = report.problems
    text = "\n".join([f"8 v(lambda)     = {data['eight_v_lambda']}",
                      f"v(lambda)       = {data['v_lambda']}",
                      f"integral        = {'yes' if lam.integral else 'no'}",
                      f"v(disc)         = {data['v_disc']}",
                      f"hyperdisc order = {data['hyperdisc_order']}"]
                     + [f"warning: {w}" for w in report.problems])
    _emit(args, data, text)
    return EXIT_OK


def cmd_disc(args) -> int:
    P, payload = _load(args)
    if payload is None:
        raise InputError("disc needs root input ({\"p\", \"leading_coeff\", \"roots\"})")
    roots, c_f, p = payload
    from_roots = disc_valuation_from_roots(roots, c_f, p)
    from_picture = disc_valuation_from_picture(P)
    data = {"v_disc": fmt(from_roots), "hyperdisc_order": fmt(hyperdisc_order(P)),
            "v_disc_from_picture": fmt(from_picture)}
    _emit(args, data, "\n".join([f"v(disc)              = {data['v_disc']}",
                                 f"v(disc) from picture = {data['v_disc_from_picture']}",
                                 f"hyperdisc order      = {data['hyperdisc_order']}"]))
    if from_roots != from_picture:
        print("error: discriminant valuations disagree", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_transform(args) -> int:
    P, _ = _load(args)
    if not args.op:
        raise InputError("give at least one --op")
    specs = [tf.parse_op(o) for o in args.op]
    steps, ok = [], True
    lines = [f"start  {P.canonical_text()}  vcf={fmt(P.vcf)}"]
    for spec in specs:
        before = lambda8(P)
        Q = tf.apply(P, spec)
        predicted = tf.predicted_lambda8_change(P, spec)
        actual = lambda8(Q) - before
        step = {"op": str(spec), "picture": Q.canonical_text(), "vcf": fmt(Q.vcf),
                "predicted_lambda8_change": fmt(predicted),
                "actual_lambda8_change": fmt(actual), "ok": predicted == actual}
        line = (f"{str(spec):<20} {step['picture']}  vcf={step['vcf']}  "
                f"Δ(8vλ) predicted {step['predicted_lambda8_change']}, "
                f"recomputed {step['actual_lambda8_change']}")
        if spec.kind in ("rescale", "shift"):
            h0, h1 = hyperdisc_order(P), hyperdisc_order(Q)
            step.update(hyperdisc_before=fmt(h0), hyperdisc_after=fmt(h1))
            step["ok"] = step["ok"] and h0 == h1
            line += f", hyperdisc {fmt(h0)} -> {fmt(h1)}"
        ok = ok and step["ok"]
        steps.append(step)
        lines.append(line + ("" if step["ok"] else "  MISMATCH"))
        P = Q
    data = {"steps": steps, "result": picture_to_json(P), "ok": ok}
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if ok else EXIT_VALIDATION


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def cmd_check(args) -> int:
    spec = EnumSpec(max_roots=args.max_roots, rel_depths=_int_list(args.depths),
                    d_R_set=_int_list(args.dr), vcf_set=_int_list(args.vcf),
                    seed=args.seed, sample=args.sample, cap=args.cap)
    total = count_pictures(spec)
    report = run_check(spec, jobs=args.jobs)
    data = report.as_dict()
    data["grid_size"] = total
    lines = [f"pictures checked: {report.pictures_checked} of {total}"
             + (" (sampled)" if report.sampled else ""),
             f"failures: {len(report.failures)}"]
    for f in report.failures[:50]:
        lines.append(f"  {f.picture}  {f.identity}: expected {f.expected}, got {f.got}")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if report.ok else EXIT_VALIDATION


# --- argument parsing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="clusterbasis",
                                 description="Integral differentials and v(λ) from cluster pictures.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, vcf=True):
        p.add_argument("--input", default="-", help="roots JSON, picture JSON or picture text; '-' = stdin")
        p.add_argument("--picture", help="picture text given inline instead of --input")
        p.add_argument("--p", type=int, help="prime (overrides the one in roots JSON)")
        if vcf:
            p.add_argument("--vcf", help="v(c_f) as a rational (overrides the input)")
        p.add_argument("--format", choices=("text", "json"), default="text")

    common(sub.add_parser("cluster", help="picture, depths and ν table"))
    b = sub.add_parser("basis", help="greedy cluster sequence, e_i and μ_i")
    common(b)
    b.add_argument("--trace", action="store_true", help="show the objective table per step")
    common(sub.add_parser("lambda", help="8·v(λ), v(λ) and discriminant data"))
    common(sub.add_parser("disc", help="discriminant valuation (needs roots)"))
    t = sub.add_parser("transform", help="apply transforms and compare λ changes")
    common(t)
    t.add_argument("--op", action="append",
                   help="deepen:t | add-root | redistribute:<path>:t | scale-leading:m | "
                        "rescale:t,s | shift:z (repeatable)")
    c = sub.add_parser("check", help="run the identity harness over a grid of pictures")
    c.add_argument("--max-roots", type=int, default=8)
    c.add_argument("--depths", default="1,2,3", help="relative depths, comma-separated")
    c.add_argument("--dr", default="0,1", help="top depths, comma-separated")
    c.add_argument("--vcf", default="0,2", help="v(c_f) values, comma-separated")
    c.add_argument("--sample", type=int, help="check a uniform sample of this size")
    c.add_argument("--seed", type=int)
    c.add_argument("--cap", type=int, default=EnumSpec.cap,
                   help="sample when the grid is larger than this")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--format", choices=("text", "json"), default="text")
    return ap


COMMANDS = {"cluster": cmd_cluster, "basis": cmd_basis, "lambda": cmd_lambda,
            "disc": cmd_disc, "transform": cmd_transform, "check": cmd_check}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
