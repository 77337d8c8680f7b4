"""Command line surface: classify, verify, params, atlas, sduality.

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage or
parse error.  Structured output is byte-deterministic; the --approx
flag only changes how exact scalars are displayed, never what is
verified.
"""

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import report as report_mod
from .atlas import differential_text, load_atlas, parse_coordinate
from .dolbeault import DolbeaultModule, atlas_differential, check_d_squared
from .hpl import load_scenarios, replay_theorem
from .retracts import (holo_prime_retract, holo_retract,
                       side_condition_report, verify_retract)
from .scalars import I, Scalar, parse_scalar
from .spectral import TWISTOR_SUPPORT, possible_d2_arrows
from .susy import (CouplingConstant, INFINITY, KWPoint, canonical_parameter,
                   identify, is_square_zero, kappa_level, kw_coordinates,
                   orbit_invariant_s, orbit_label, parse_supercharge,
                   rank_type, s_duality, susy_to_deformation)

DEFAULT_CONFIG = {"truncation": 2, "z2_identification": "antipodal"}

# fixed sample values for parameters left unset on the command line
DEFAULT_PARAMS = {"a": "2", "b1": "-1", "b2": "1/3", "t": "2/3"}

EXPECTED_D2_ARROWS = [((1, 0, 2), (0, 1, 1)), ((1, 1, 3), (0, 2, 2))]


def load_config(path):
    config = dict(DEFAULT_CONFIG)
    if path is None:
        return config
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError("%s:%d: expected key = value" % (path, lineno))
            key, value = (part.strip() for part in line.split("=", 1))
            if key == "truncation":
                config[key] = int(value)
            elif key == "z2_identification":
                if value not in ("antipodal", "none"):
                    raise ValueError("%s:%d: bad identification %r"
                                     % (path, lineno, value))
                config[key] = value
            else:
                raise ValueError("%s:%d: unknown key %r" % (path, lineno, key))
    return config


def approx_text(s: Scalar) -> str:
    z = s.approx()
    if z.imag == 0:
        return "%.6g" % z.real
    if z.real == 0:
        return "%.6gi" % z.imag
    return "%.6g%+.6gi" % (z.real, z.imag)


def scalar_text(s, approx=False) -> str:
    if s is INFINITY:
        return "infinity"
    return approx_text(s) if approx else s.text()


def _parse_value(text, allow_infinity=False):
    text = text.strip()
    if allow_infinity and text in ("inf", "infinity"):
        return INFINITY
    return parse_scalar(text)


def emit_record(record, fmt, out):
    if fmt == "json":
        out.write(json.dumps(report_mod.jsonify(record), sort_keys=True,
                             indent=2, ensure_ascii=False) + "\n")
        return
    if fmt == "md":
        out.write("| field | value |\n| --- | --- |\n")
        for key, value in record.items():
            out.write("| %s | %s |\n" % (key, report_mod.jsonify(value)))
        return
    width = max(len(k) for k in record)
    for key, value in record.items():
        out.write("%-*s  %s\n" % (width, key, report_mod.jsonify(value)))


# -- classify -------------------------------------------------------------

def cmd_classify(args, config, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        q = parse_supercharge(args.supercharge)
    except ValueError as exc:
        err.write("classify: %s\n" % exc)
        return 2
    square_zero = is_square_zero(q)
    rt = rank_type(q)
    record = {
        "input": args.supercharge,
        "square_zero": square_zero,
        "rank": "(%d,%d)" % (rt.p, rt.q),
        "orbit": orbit_label(rt),
    }
    if square_zero and (rt.p, rt.q) == (2, 2):
        record["s_invariant"] = scalar_text(orbit_invariant_s(q), args.approx)
    point = kw_coordinates(q)
    if point is not None:
        wp, wm = point.coords()
        record["w_plus"] = scalar_text(wp, args.approx)
        record["w_minus"] = scalar_text(wm, args.approx)
    emit_record(record, args.format, out)
    return 0


# -- params ---------------------------------------------------------------

def cmd_params(args, config, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    has_def = any(v is not None for v in (args.a, args.b1, args.b2))
    has_hodge = args.lam is not None or args.mu is not None
    has_tt = args.t is not None
    if sum(map(bool, (has_def, has_hodge, has_tt))) != 1:
        err.write("params: give exactly one of --t, --lam/--mu, "
                  "or --a/--b1/--b2\n")
        return 2
    try:
        tau = None if args.tau is None else CouplingConstant(
            _parse_value(args.tau))
        record = {}
        if has_def:
            a = _parse_value(args.a or "0")
            b1 = _parse_value(args.b1 or "0")
            b2 = _parse_value(args.b2 or "0")
            c_z1, c_z2, c_eps = susy_to_deformation(a, b1, b2)
            record["a"] = scalar_text(a, args.approx)
            record["b1"] = scalar_text(b1, args.approx)
            record["b2"] = scalar_text(b2, args.approx)
            record["c_z1"] = scalar_text(c_z1, args.approx)
            record["c_z2"] = scalar_text(c_z2, args.approx)
            record["c_eps"] = scalar_text(c_eps, args.approx)
            if tau is not None:
                record["kappa"] = scalar_text(
                    kappa_level(tau, c_z1, c_eps), args.approx)
        elif has_hodge:
            if args.lam is None or args.mu is None or tau is None:
                err.write("params: --lam/--mu need each other and --tau\n")
                return 2
            lam = _parse_value(args.lam)
            mu = _parse_value(args.mu)
            record["lam"] = scalar_text(lam, args.approx)
            record["mu"] = scalar_text(mu, args.approx)
            record["kappa"] = scalar_text(
                kappa_level(tau, lam, mu), args.approx)
        else:
            if tau is None:
                err.write("params: --t needs --tau\n")
                return 2
            t = _parse_value(args.t, allow_infinity=True)
            psi = canonical_parameter(tau, t)
            record["tau"] = scalar_text(tau.tau, args.approx)
            record["t"] = scalar_text(t, args.approx)
            record["psi"] = scalar_text(psi, args.approx)
            if psi is INFINITY:
                record["note"] = "B-type pole (quasi-coherent locus)"
            if t is not INFINITY:
                kappa = kappa_level(tau, t, -(t * t + Scalar(1)))
                record["kappa"] = scalar_text(kappa, args.approx)
                record["psi_equals_kappa"] = psi == kappa
    except ValueError as exc:
        err.write("params: %s\n" % exc)
        return 2
    emit_record(record, args.format, out)
    return 0


# -- atlas ----------------------------------------------------------------

def cmd_atlas(args, config, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    atlas = load_atlas()
    rows = [dict(row, differential_text=differential_text(row["differential"]))
            for row in atlas["twists"]]
    nodes = [dict(node,
                  differential_text=differential_text(node["differential"]))
             for node in atlas["deformation_graph"]]
    if args.format == "json":
        doc = {"version": atlas["version"], "twists": rows,
               "aliases": atlas["aliases"], "deformation_graph": nodes}
        out.write(json.dumps(doc, sort_keys=True, indent=2,
                             ensure_ascii=False) + "\n")
        return 0
    if args.format == "md":
        out.write("| id | rank | w+ | w- | differential | dual |\n")
        out.write("| --- | --- | --- | --- | --- | --- |\n")
        for row in rows:
            out.write("| %s | (%d,%d) | %s | %s | %s | %s |\n"
                      % (row["id"], row["rank"][0], row["rank"][1],
                         row["w_plus"], row["w_minus"],
                         row["differential_text"], row["dual"]))
        out.write("\n| node | supercharge | differential | targets |\n")
        out.write("| --- | --- | --- | --- |\n")
        for node in nodes:
            out.write("| %s | %s | %s | %s |\n"
                      % (node["id"], node["supercharge"],
                         node["differential_text"],
                         " ".join(node["targets"])))
        return 0
    for row in rows:
        out.write("%-10s (%d,%d)  w=(%s, %s)  %-28s dual %s\n"
                  % (row["id"], row["rank"][0], row["rank"][1],
                     row["w_plus"], row["w_minus"],
                     row["differential_text"], row["dual"]))
    out.write("\ndeformations:\n")
    for node in nodes:
        arrows = " -> " + ", ".join(node["targets"]) if node["targets"] else ""
        out.write("%-10s %-28s %s%s\n"
                  % (node["id"], node["supercharge"],
                     node["differential_text"], arrows))
    return 0


# -- sduality -------------------------------------------------------------

def cmd_sduality(args, config, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        wp = _parse_value(args.w_plus, allow_infinity=True)
        wm = _parse_value(args.w_minus, allow_infinity=True)
        point = KWPoint(wp, wm)
        tau = CouplingConstant(_parse_value(args.tau))
        moved = s_duality(point, tau, approx=args.approx)
    except ValueError as exc:
        err.write("sduality: %s\n" % exc)
        return 2
    record = {
        "w_plus": scalar_text(wp, args.approx),
        "w_minus": scalar_text(wm, args.approx),
        "tau": scalar_text(tau.tau, args.approx),
    }
    if isinstance(moved, KWPoint):
        mp, mm = moved.coords()
        record["image_w_plus"] = scalar_text(mp, args.approx)
        record["image_w_minus"] = scalar_text(mm, args.approx)
        convention = config["z2_identification"]
        record["identification"] = convention
        orbit = identify(moved, convention)
        record["orbit"] = sorted(
            "(%s, %s)" % (scalar_text(q.coords()[0], args.approx),
                          scalar_text(q.coords()[1], args.approx))
            for q in orbit)
    else:
        mp, mm = moved
        record["image_w_plus"] = "infinity" if mp is INFINITY else repr(mp)
        record["image_w_minus"] = "infinity" if mm is INFINITY else repr(mm)
        record["note"] = "approximate display only"
    emit_record(record, args.format, out)
    return 0


# -- verify scenarios -----------------------------------------------------

def _eps_module(n):
    return DolbeaultModule(n, 1, odd_vars={"eps"})


def _run_table1_row(row, n):
    subs = {"t": DEFAULT_PARAMS["t"]} if any(
        "t" in coeff for coeff, _ in row["differential"]) else None
    m = _eps_module(n)
    d = atlas_differential(row["differential"], m, subs)
    witness = check_d_squared(d, m)
    params = {"truncation": n, "row": row["id"]}
    if subs:
        params["t"] = subs["t"]
    if witness is None:
        return "pass", [], params
    return "fail", [witness], params


def _run_duality(config):
    tau = CouplingConstant(I)
    atlas = load_atlas()
    witnesses = []
    checked = []
    from .atlas import alias_point
    for row in atlas["twists"]:
        if row["dual"] == "self" or row["rank"] != [2, 2]:
            continue
        moved = s_duality(alias_point(row["id"]), tau)
        target = alias_point(row["dual"])
        convention = config["z2_identification"]
        if target not in identify(moved, convention):
            witnesses.append({"pair": (row["id"], row["dual"]),
                              "image": repr(moved)})
        checked.append((row["id"], row["dual"]))
    # this pair must match without any identification
    moved = s_duality(alias_point("K_A"), tau)
    if moved != alias_point("J_B"):
        witnesses.append({"pair": ("K_A", "J_B"), "image": repr(moved),
                          "identification": "none"})
    params = {"tau": "i", "pairs": checked,
              "identification": config["z2_identification"]}
    return ("pass" if not witnesses else "fail"), witnesses, params


def _run_retract(factory, n_max):
    witnesses = []
    levels = list(range(0, min(n_max, 2) + 1))
    for n in levels:
        r = factory(n)
        rep = verify_retract(r)
        if not rep["ok"]:
            witnesses.append({"truncation": n, "failed": sorted(
                k for k, v in rep.items() if v is False)})
        side = side_condition_report(r)
        if not side["ok"]:
            witnesses.append({"truncation": n, "failed_side": sorted(
                k for k, v in side.items() if v is False)})
    params = {"truncations": levels}
    return ("pass" if not witnesses else "fail"), witnesses, params


def _run_graph_node(node, n):
    subs = {k: DEFAULT_PARAMS[k] for k in node.get("params", [])}
    literal = node["supercharge"]
    for name, val in subs.items():
        literal = literal.replace(name + "*", "(%s)*" % val)
    witnesses = []
    q = parse_supercharge(literal)
    if not is_square_zero(q):
        witnesses.append({"supercharge": literal, "failed": "square_zero"})
    rt = rank_type(q)
    if [rt.p, rt.q] != node["rank"]:
        witnesses.append({"supercharge": literal, "failed": "rank",
                          "got": [rt.p, rt.q], "want": node["rank"]})
    m = _eps_module(n)
    d = atlas_differential(node["differential"], m, subs)
    witness = check_d_squared(d, m)
    if witness is not None:
        witnesses.append(witness)
    params = dict(subs)
    params.update({"truncation": n, "node": node["id"]})
    return ("pass" if not witnesses else "fail"), witnesses, params


def _run_theorem(scenario, n, cli_params):
    values = {}
    for key in scenario["active"]:
        given = cli_params.get(key)
        values[key] = given if given is not None else DEFAULT_PARAMS[key]
    rep = replay_theorem(scenario["name"], n, values)
    witnesses = []
    if not rep["ok"]:
        witnesses.append({"failed": sorted(
            k for k, v in rep.items()
            if v is False and k != "ok")})
    params = {k: str(v) for k, v in values.items()}
    params["truncation"] = n
    a = parse_scalar(str(values.get("a", "0")))
    b1 = parse_scalar(str(values.get("b1", "0")))
    b2 = parse_scalar(str(values.get("b2", "0")))
    c_z1, c_z2, c_eps = susy_to_deformation(a, b1, b2)
    params["c_z1"], params["c_z2"], params["c_eps"] = (
        c_z1.text(), c_z2.text(), c_eps.text())
    return ("pass" if not witnesses else "fail"), witnesses, params


def _run_spectral_support():
    arrows = possible_d2_arrows(TWISTOR_SUPPORT)
    if arrows == EXPECTED_D2_ARROWS:
        return "pass", [], {"support_cells": len(TWISTOR_SUPPORT)}
    return "fail", [{"arrows": [list(map(list, a)) for a in arrows]}], {}


def build_registry(config, n, cli_params):
    """Ordered mapping scenario id -> zero-argument runner."""
    registry = {}
    atlas = load_atlas()
    for row in atlas["twists"]:
        registry["table1_" + row["id"]] = (
            lambda row=row: _run_table1_row(row, n))
    registry["duality_table1"] = lambda: _run_duality(config)
    registry["retract_holo"] = lambda: _run_retract(holo_retract, n)
    registry["retract_holo_prime"] = (
        lambda: _run_retract(holo_prime_retract, n))
    for node in atlas["deformation_graph"]:
        registry["graph_" + node["id"]] = (
            lambda node=node: _run_graph_node(node, n))
    for scenario in load_scenarios():
        registry[scenario["name"]] = (
            lambda scenario=scenario: _run_theorem(scenario, n, cli_params))
    registry["spectral_support"] = _run_spectral_support
    return registry


GROUPS = {
    "all": lambda sid: True,
    "table1": lambda sid: sid.startswith("table1_") or sid == "duality_table1",
    "retracts": lambda sid: sid.startswith("retract_"),
    "graph": lambda sid: sid.startswith("graph_"),
    "theorems": lambda sid: sid.startswith("thm_"),
}


def select_scenarios(registry, ids):
    selected = []
    for requested in ids:
        if requested in GROUPS:
            selected.extend(sid for sid in registry
                            if GROUPS[requested](sid))
        elif requested in registry:
            selected.append(requested)
        else:
            raise KeyError(requested)
    seen = set()
    out = []
    for sid in selected:
        if sid not in seen:
            seen.add(sid)
            out.append(sid)
    return out


def _timed(sid, runner):
    start = time.perf_counter()
    try:
        status, witnesses, params = runner()
    except Exception as exc:  # noqa: BLE001 - reported, not raised
        elapsed = (time.perf_counter() - start) * 1000.0
        return report_mod.make_result(
            sid, "error", {}, [{"exception": "%s: %s"
                                % (type(exc).__name__, exc)}], elapsed)
    elapsed = (time.perf_counter() - start) * 1000.0
    return report_mod.make_result(sid, status, params, witnesses, elapsed)


def cmd_verify(args, config, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    n = args.truncation if args.truncation is not None else config["truncation"]
    cli_params = {"a": args.a, "b1": args.b1, "b2": args.b2}
    registry = build_registry(config, n, cli_params)
    try:
        ids = select_scenarios(registry, args.ids or ["all"])
    except KeyError as exc:
        err.write("verify: unknown scenario id %s\n" % exc)
        return 2
    jobs = max(1, args.jobs)
    if jobs == 1:
        results = [_timed(sid, registry[sid]) for sid in ids]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_timed, sid, registry[sid]) for sid in ids]
            results = [f.result() for f in futures]
    results.sort(key=lambda r: r["scenario_id"])
    invocation = ["verify"] + list(args.ids or ["all"]) + [
        "--truncation", str(n)]
    canonical = report_mod.canonical_report(invocation, results)
    report_mod.write_report(canonical, "verify.json")
    if args.format == "json":
        out.write(report_mod.render_json(canonical))
    elif args.format == "md":
        out.write(report_mod.render_md(results))
    else:
        out.write(report_mod.render_table(results))
        n_pass = sum(1 for r in results if r["status"] == "pass")
        out.write("%d/%d scenarios pass\n" % (n_pass, len(results)))
    return 0 if all(r["status"] == "pass" for r in results) else 1


# -- entry point ----------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="twistbv",
        description="Exact verification of the twisted multiplet atlas, "
                    "retracts, and transfer theorems.")
    parser.add_argument("--config", help="key = value configuration file")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("table", "json", "md"),
                       default="table")
        p.add_argument("--approx", action="store_true",
                       help="display scalars as decimals (display only)")

    p = sub.add_parser("classify", help="classify a supercharge literal")
    p.add_argument("supercharge")
    common(p)

    p = sub.add_parser("verify", help="run verification scenarios")
    p.add_argument("ids", nargs="*",
                   help="scenario ids or groups (default: all)")
    p.add_argument("--truncation", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--a")
    p.add_argument("--b1")
    p.add_argument("--b2")
    common(p)

    p = sub.add_parser("params", help="parameter dictionary lookups")
    p.add_argument("--tau")
    p.add_argument("--t")
    p.add_argument("--lam")
    p.add_argument("--mu")
    p.add_argument("--a")
    p.add_argument("--b1")
    p.add_argument("--b2")
    common(p)

    p = sub.add_parser("atlas", help="print the twist atlas")
    common(p)

    p = sub.add_parser("sduality", help="apply S-duality to a point")
    p.add_argument("--w-plus", required=True, dest="w_plus")
    p.add_argument("--w-minus", required=True, dest="w_minus")
    p.add_argument("--tau", default="i")
    common(p)

    return parser


COMMANDS = {
    "classify": cmd_classify,
    "verify": cmd_verify,
    "params": cmd_params,
    "atlas": cmd_atlas,
    "sduality": cmd_sduality,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code in (0,) else 2
    try:
        config = load_config(args.config)
    except (OSError, ValueError) as exc:
        sys.stderr.write("config: %s\n" % exc)
        return 2
    return COMMANDS[args.command](args, config)


if __name__ == "__main__":
    sys.exit(main())
