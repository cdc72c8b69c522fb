"""Command-line frontend.

Every subcommand wraps one library operation, prints a short human
report by default and a RunReport JSON document with --json. Exit codes:
0 on success, 2 when a verdict is NO_CONCLUSION and --strict was given,
1 on any error (usage errors included).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .criteria import (
    GaussianInput,
    b2_rule_enriques,
    check_bel,
    check_cliff_criterion,
    check_degree_corollaries,
    check_main_theorem,
    cliff_upper_bound,
    clifford_of_series,
    corank_low_genus,
    gonality,
    tetragonal_corank,
)
from .divexpr import render, resolve
from .enumeration import (
    FIXTURES,
    enumerate_bogreider,
    enumerate_destab,
    verify_all,
    verify_case,
)
from .errors import DivcalcError, EvidenceError, ModelError
from .lattice import pair, reflect_nodal
from .surfaces import (
    chi,
    config_from_json_dict,
    genus,
    get_config,
    get_surface,
    list_configs,
    list_surfaces,
    phi,
    scroll_invariants,
)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _load_surface(args, required=True):
    cfg_name = getattr(args, "config", None)
    surf_name = getattr(args, "surface", None)
    if cfg_name and surf_name:
        raise ModelError("pass either --surface or --config, not both")
    if cfg_name:
        if os.path.exists(cfg_name):
            with open(cfg_name, encoding="utf-8") as fh:
                doc = json.load(fh)
            base = os.path.splitext(os.path.basename(cfg_name))[0]
            return config_from_json_dict(doc).to_surface(base)
        return get_config(cfg_name).to_surface(cfg_name)
    if surf_name:
        return get_surface(surf_name)
    if required:
        raise ModelError("this subcommand needs --surface or --config")
    return None


def _one_curve(args, surf):
    curves = args.curve or []
    if len(curves) != 1:
        raise ModelError("expected exactly one --curve expression")
    return resolve(curves[0], surf)


def _need(args, *names):
    missing = [
        "--" + n.replace("_", "-") for n in names if getattr(args, n) is None
    ]
    if missing:
        raise EvidenceError(
            "missing required evidence: " + ", ".join(missing),
            missing=tuple(missing),
        )


# Each handler returns (payload, surface_name, human_lines,
# no_conclusion, failed).


def _cmd_pair(args):
    surf = _load_surface(args)
    curves = args.curve or []
    if len(curves) != 2:
        raise ModelError("pair needs exactly two --curve expressions")
    A, B = (resolve(c, surf) for c in curves)
    val = pair(A, B)
    payload = {"a": render(A), "b": render(B), "value": val}
    return payload, surf.name, [f"({payload['a']}).({payload['b']}) = {val}"], False, False


def _cmd_self(args):
    surf = _load_surface(args)
    D = _one_curve(args, surf)
    val = pair(D, D)
    return (
        {"curve": render(D), "square": val},
        surf.name,
        [f"({render(D)})^2 = {val}"],
        False,
        False,
    )


def _cmd_genus(args):
    surf = _load_surface(args)
    D = _one_curve(args, surf)
    g = genus(surf, D)
    return (
        {"curve": render(D), "genus": g},
        surf.name,
        [f"genus({render(D)}) = {g}"],
        False,
        False,
    )


def _cmd_chi(args):
    surf = _load_surface(args)
    D = _one_curve(args, surf)
    val = chi(surf, D)
    return (
        {"curve": render(D), "chi": val},
        surf.name,
        [f"chi({render(D)}) = {val}"],
        False,
        False,
    )


def _cmd_phi(args):
    surf = _load_surface(args)
    D = _one_curve(args, surf)
    mode = "boxed" if args.box is not None else "sublattice"
    res = phi(surf, D, mode=mode, box=args.box)
    payload = {"curve": render(D)}
    payload.update(res.to_json_dict())
    rel = "=" if res.certified else "<="
    lines = [f"phi({render(D)}) {rel} {res.value}"]
    if res.witness is not None:
        lines.append(f"witness: {render(res.witness)}")
    lines += [f"note: {n}" for n in res.notes]
    return payload, surf.name, lines, False, False


def _cmd_reflect(args):
    surf = _load_surface(args)
    D = _one_curve(args, surf)
    if not args.nodal:
        raise ModelError("reflect needs --nodal <divexpr>")
    delta = resolve(args.nodal, surf)
    img = reflect_nodal(D, delta)
    payload = {
        "curve": render(D),
        "nodal": render(delta),
        "image": render(img),
        "image_coords": list(img.coords),
    }
    return payload, surf.name, [f"reflection: {render(img)}"], False, False


def _cmd_enumerate(args):
    surf = _load_surface(args)
    D = _one_curve(args, surf)
    if args.k is None:
        raise ModelError("enumerate needs --k <int>")
    mod4 = {"auto": None, "on": True, "off": False}[args.mod4]
    res = enumerate_bogreider(surf, D, args.k, mod4=mod4, budget=args.box)
    lines = [
        f"curve {render(D)}, k = {args.k}, parity filter "
        f"{'on' if res.mod4_applied else 'off'}, "
        f"{res.visited} candidates visited",
    ]
    for d in res.survivors:
        extra = f" ({'; '.join(d.notes)})" if d.notes else ""
        lines.append(f"  L = {d.expr}  L^2 = {d.L2}, M.L = {d.ML}, z = {d.z}{extra}")
    if not res.survivors:
        lines.append("  no survivors")
    lines.append(
        "rejected: "
        + ", ".join(f"{k}={v}" for k, v in sorted(res.rejected.items()))
    )
    return res.to_json_dict(), surf.name, lines, False, False


def _cmd_destab(args):
    res = enumerate_destab()
    lines = ["candidate splittings passing all numeric constraints:"]
    for c in res.survivors:
        lines.append(
            f"  a={c.a}, a1={c.a1}: A^2={c.A2}, B^2={c.B2}, "
            f"A.B={c.AB}, lenW={c.lenW}"
        )
    return res.to_json_dict(), "blq", lines, False, False


def _cmd_gonality(args):
    _need(args, "l2", "phi")
    val = gonality(args.l2, args.phi, not args.two_d_special)
    payload = {
        "L2": args.l2,
        "phi": args.phi,
        "not_2D_special": not args.two_d_special,
        "gonality": val,
    }
    return payload, None, [f"gonality = {val}"], False, False


def _cmd_cliff(args):
    if args.d is not None or args.h0 is not None:
        _need(args, "d", "h0")
        val = clifford_of_series(args.d, args.h0)
        payload = {"mode": "series", "d": args.d, "h0": args.h0, "cliff": val}
        return payload, None, [f"Cliff = {val}"], False, False
    if args.g is not None:
        val = cliff_upper_bound(args.g)
        payload = {"mode": "upper_bound", "g": args.g, "value": val}
        return payload, None, [f"Cliff(C) <= {val}"], False, False
    raise ModelError("cliff needs --d and --h0, or --g")


def _verdict_outcome(verdict, surface=None):
    lines = [f"{verdict.status_label} via {verdict.rule}"]
    lines += [f"qualifier: {q}" for q in verdict.qualifiers]
    lines += [f"note: {n}" for n in verdict.notes]
    return (
        verdict.to_json_dict(),
        surface,
        lines,
        verdict.status == "NO_CONCLUSION",
        False,
    )


def _cmd_gaussian(args):
    rule = args.rule
    if rule == "main":
        _need(args, "l2")
        g = args.g if args.g is not None else args.l2 // 2 + 1
        inp = GaussianInput(
            g=g,
            L2=args.l2,
            phi=args.phi,
            degM=args.deg_m,
            h1M=args.h1_m,
            h0_residual=args.h0_residual,
            cliff=args.cliff,
        )
        return _verdict_outcome(check_main_theorem(inp))
    if rule == "cliff":
        _need(args, "cliff", "h0_2k_minus_m")
        return _verdict_outcome(
            check_cliff_criterion(args.cliff, args.h0_2k_minus_m)
        )
    if rule == "bel":
        _need(args, "g", "deg_m", "h1_m", "h0_2k_minus_m", "cliff")
        return _verdict_outcome(
            check_bel(args.g, args.deg_m, args.h1_m,
                      args.h0_2k_minus_m, args.cliff)
        )
    if rule == "degree":
        _need(args, "g", "deg_m")
        return _verdict_outcome(
            check_degree_corollaries(
                args.g, args.deg_m,
                plane_quintic=args.plane_quintic,
                trigonal=args.trigonal,
                M_eq_special=args.m_eq_special,
            )
        )
    if rule == "tetragonal":
        _need(args, "h0_2k_minus_m", "h0_2k_minus_m_b2a")
        return _verdict_outcome(
            tetragonal_corank(
                args.h0_2k_minus_m,
                args.h0_2k_minus_m_b2a,
                h1M_zero=(args.h1_m == 0),
                mu_surjective=args.mu_surjective,
            )
        )
    raise ModelError(f"unknown rule {rule!r}")


def _cmd_corank(args):
    _need(args, "g")
    aux = {}
    for item in args.aux or []:
        key, sep, val = item.partition("=")
        if not sep or not val.lstrip("-").isdigit():
            raise ModelError(
                f"--aux expects KEY=INT, got {item!r} "
                "(e.g. --aux 4K-M=5)"
            )
        aux[key] = int(val)
    inp = GaussianInput(
        g=args.g,
        h1M=args.h1_m,
        h0_2K_minus_M=args.h0_2k_minus_m,
        cork_mu=args.cork_mu,
        aux_h0=aux,
    )
    verdict = corank_low_genus(
        inp,
        plane_quintic=args.plane_quintic,
        trigonal=args.trigonal,
        nontrigonal=args.nontrigonal,
    )
    return _verdict_outcome(verdict)


def _cmd_scroll(args):
    _need(args, "g", "b1")
    inv = scroll_invariants(args.g, args.b1)
    lines = [
        f"b2 = {inv.b2}, bundle degree {inv.degV}, scroll degree "
        f"{inv.degY}, hyperplane-section genus {inv.pa_hyperplane}, "
        f"quadric-generation bound {'holds' if inv.n2_holds else 'fails'}",
    ]
    return inv.to_json_dict(), None, lines, False, False


def _cmd_b2rule(args):
    _need(args, "l2", "phi")
    res = b2_rule_enriques(args.l2, args.phi)
    lines = [f"{res.status}"]
    lines += [f"qualifier: {q}" for q in res.qualifiers]
    lines += [f"note: {n}" for n in res.notes]
    return (
        res.to_json_dict(), None, lines, res.status == "unknown", False,
    )


def _cmd_verify(args):
    if args.all == bool(args.case):
        raise ModelError("verify needs exactly one of --case <id> or --all")
    reports = verify_all() if args.all else [verify_case(args.case)]
    payload = [r.to_json_dict() for r in reports]
    lines = []
    failed = False
    for r in reports:
        lines.append(f"{r.status}  {r.case_id}")
        if r.status != "PASS":
            failed = True
            lines += [f"    {t}" for t in r.trace]
    if not args.all:
        payload = payload[0]
    return payload, None, lines, False, failed


def _cmd_surface(args):
    if args.surface or args.config:
        surf = _load_surface(args)
        model = surf.model
        payload = model.to_json_dict()
        lines = [
            f"{model.name}: rank {model.rank}, basis "
            + ", ".join(model.labels),
            f"canonical {render(model.canonical_class)}, chi(O) = {model.chi}",
        ]
        for row in model.gram:
            lines.append("  " + " ".join(f"{v:4d}" for v in row))
        return payload, model.name, lines, False, False
    payload = {"surfaces": list_surfaces(), "configs": list_configs()}
    lines = ["surfaces: " + ", ".join(payload["surfaces"]),
             "configs:  " + ", ".join(payload["configs"])]
    return payload, None, lines, False, False


def build_parser() -> _Parser:
    parser = _Parser(prog="divcalc", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    sub.required = True

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit a RunReport JSON document")
    common.add_argument("--strict", action="store_true",
                        help="exit 2 when the verdict is NO_CONCLUSION")

    surf_p = argparse.ArgumentParser(add_help=False)
    surf_p.add_argument("--surface", help="builtin surface name or JSON path")
    surf_p.add_argument("--config",
                        help="builtin configuration name or JSON path")

    curve_p = argparse.ArgumentParser(add_help=False)
    curve_p.add_argument("--curve", action="append",
                         help="divisor expression, e.g. 6H-2G1-2G2 or -2K")

    def add(name, handler, parents, help_text, configure=None):
        p = sub.add_parser(name, parents=parents, help=help_text)
        if configure:
            configure(p)
        p.set_defaults(handler=handler)
        return p

    add("pair", _cmd_pair, [common, surf_p, curve_p],
        "intersection pairing of two classes (pass --curve twice)")
    add("self", _cmd_self, [common, surf_p, curve_p],
        "self-intersection of a class")
    add("genus", _cmd_genus, [common, surf_p, curve_p],
        "arithmetic genus of a class")
    add("chi", _cmd_chi, [common, surf_p, curve_p],
        "Euler characteristic of a class")
    add("phi", _cmd_phi, [common, surf_p, curve_p],
        "pencil invariant (min |F.L| over isotropic F)",
        lambda p: p.add_argument("--box", type=int,
                                 help="coordinate box: searches instead of "
                                      "certifying"))
    add("reflect", _cmd_reflect, [common, surf_p, curve_p],
        "reflect a class in a nodal (-2) class",
        lambda p: p.add_argument("--nodal", help="nodal class expression"))

    def conf_enum(p):
        p.add_argument("--k", type=int, help="pencil degree")
        p.add_argument("--box", type=int,
                       help="override the ample-pairing budget")
        p.add_argument("--mod4", choices=["auto", "on", "off"],
                       default="auto", help="residual parity filter")

    add("enumerate", _cmd_enumerate, [common, surf_p, curve_p],
        "search decompositions C = L + M passing the pencil filters",
        conf_enum)
    add("destab", _cmd_destab, [common],
        "grade the 16 candidate destabilizing splittings on blq")

    def conf_gon(p):
        p.add_argument("--l2", type=int, help="class square")
        p.add_argument("--phi", type=int, help="pencil invariant")
        p.add_argument("--two-d-special", action="store_true",
                       help="the class IS twice a square-10 invariant-3 "
                            "class (pattern-(b) exclusion)")

    add("gonality", _cmd_gonality, [common],
        "gonality of a general curve from (L2, phi)", conf_gon)

    def conf_cliff(p):
        p.add_argument("--d", type=int, help="series degree")
        p.add_argument("--h0", type=int, help="series section count")
        p.add_argument("--g", type=int, help="genus (upper-bound mode)")

    add("cliff", _cmd_cliff, [common],
        "Clifford contribution of a series, or the genus upper bound",
        conf_cliff)

    def conf_gauss(p):
        p.add_argument("--rule",
                       choices=["main", "cliff", "bel", "degree",
                                "tetragonal"],
                       default="main", help="criterion family")
        p.add_argument("--g", type=int, help="curve genus")
        p.add_argument("--l2", type=int, help="curve class square")
        p.add_argument("--phi", type=int, help="pencil invariant")
        p.add_argument("--deg-m", type=int, help="deg M")
        p.add_argument("--h1-m", type=int, help="h1(M)")
        p.add_argument("--h0-residual", type=int,
                       help="h0 of the branch residual twist")
        p.add_argument("--cliff", type=int, help="Clifford index")
        p.add_argument("--h0-2k-minus-m", type=int, help="h0(2K - M)")
        p.add_argument("--h0-2k-minus-m-b2a", type=int,
                       help="h0(2K - M - b2 A) for the tetragonal rule")
        p.add_argument("--mu-surjective", action="store_true",
                       help="the multiplication map is surjective")
        p.add_argument("--plane-quintic", action="store_true")
        p.add_argument("--trigonal", action="store_true")
        p.add_argument("--m-eq-special", action="store_true",
                       help="M equals the branch's excluded bundle")

    add("gaussian", _cmd_gaussian, [common],
        "Gaussian-map surjectivity verdicts", conf_gauss)

    def conf_corank(p):
        p.add_argument("--g", type=int, help="curve genus")
        p.add_argument("--h1-m", type=int, help="h1(M)")
        p.add_argument("--cork-mu", type=int,
                       help="corank of the multiplication map")
        p.add_argument("--h0-2k-minus-m", type=int, help="h0(2K - M)")
        p.add_argument("--aux", action="append", metavar="KEY=INT",
                       help="extra section count, e.g. --aux 4K-M=5")
        p.add_argument("--plane-quintic", action="store_true")
        p.add_argument("--trigonal", action="store_true")
        p.add_argument("--nontrigonal", action="store_true")

    add("corank", _cmd_corank, [common],
        "corank bounds for low genus / quintic / trigonal curves",
        conf_corank)

    def conf_scroll(p):
        p.add_argument("--g", type=int, help="curve genus")
        p.add_argument("--b1", type=int, help="first scrollar invariant")

    add("scroll", _cmd_scroll, [common],
        "scroll invariants of a tetragonal canonical curve", conf_scroll)

    def conf_b2(p):
        p.add_argument("--l2", type=int, help="class square")
        p.add_argument("--phi", type=int, help="pencil invariant")

    add("b2rule", _cmd_b2rule, [common],
        "second scrollar invariant bound on Enriques tetragonal curves",
        conf_b2)

    def conf_verify(p):
        p.add_argument("--case", help="fixture id, e.g. g1kondelp-d")
        p.add_argument("--all", action="store_true",
                       help="replay the whole catalog")

    add("verify", _cmd_verify, [common],
        f"replay frozen case fixtures ({len(FIXTURES)} shipped)",
        conf_verify)
    add("surface", _cmd_surface, [common, surf_p],
        "list shipped surfaces/configs, or show one model")

    return parser


_EXPR_FLAGS = ("--curve", "--nodal")


def _fuse_expr_flags(argv):
    """Join --curve -2K into --curve=-2K so argparse does not mistake a
    leading-minus expression for an option string."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _EXPR_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    raw = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_fuse_expr_flags(raw))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1

    t0 = time.perf_counter_ns()
    try:
        payload, surface_name, lines, no_conclusion, failed = args.handler(args)
    except DivcalcError as exc:
        print(f"divcalc: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"divcalc: error: {exc}", file=sys.stderr)
        return 1
    elapsed_ms = (time.perf_counter_ns() - t0) // 1_000_000

    if args.json:
        report = {
            "command": ["divcalc"] + raw,
            "surface": surface_name,
            "result": payload,
            "elapsed_ms": elapsed_ms,
            "version": __version__,
        }
        print(json.dumps(report, indent=2))
    else:
        for line in lines:
            print(line)

    if failed:
        return 1
    if no_conclusion and args.strict:
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
