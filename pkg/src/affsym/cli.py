"""Scenario-driven command line front end.

Subcommands:

* ``check-geometry --scenario PATH`` — induced structure, curvature,
  fundamental residuals, operator checks and the rank theorem at every
  sample point of a scenario; emits a JSON report.
* ``oracles [--filter GLOB]`` — seeded draws of the closed-form oracle
  catalog, grouped per family and operator power.
* ``decompose FILE`` — canonical pair, classification and rank for a
  matrix file (JSON with row-major ``A``, ``H`` and ``dim``).
* ``list-oracles`` — the catalog as JSON.

Exit codes: 0 no failures, 1 at least one FAIL record (or WARN under
``--strict``), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import fnmatch
import json
import sys
import time

import numpy as np

from . import __version__, canonical, geometry, verify
from .model import RealBlock
from .scenarios import ScenarioFormatError, load_scenario, scenario_digest
from .tensor_ops import (CovariantField, GeometricCurvature,
                         alternating_sum_identity, nabla_S_codazzi)

_DEFAULT_CHECKS = (
    {"name": "frame", "tol": 1e-9},
    {"name": "fundamental", "tol": 1e-8},
    {"name": "gauss_model", "tol": 1e-8},
    {"name": "equiaffine", "tol": 1e-9},
    {"name": "codazzi_shape", "tol": 1e-8},
    {"name": "rank_theorem", "p_max": 3, "tol": 1e-8},
    {"name": "alternating_identity", "p_max": 1, "tol": 1e-7, "trials": 50},
)


def _to_jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, dict):
        return {k: _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    return value


def _record(name, status, value=None, tol=None, params=None, wall_ms=0.0):
    return {
        "name": name,
        "status": status,
        "value": _to_jsonable(value),
        "tol": tol,
        "params": _to_jsonable(params or {}),
        "wall_ms": round(wall_ms, 3),
    }


def _emit(report, output):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w") as fh:
            fh.write(text)


def _finish(records, base, output, strict):
    records.sort(key=lambda r: (r["name"], json.dumps(r["params"], sort_keys=True)))
    counts = {"pass": 0, "fail": 0, "vacuous": 0, "warn": 0}
    for r in records:
        counts[r["status"].lower()] = counts.get(r["status"].lower(), 0) + 1
    base["checks"] = records
    base["summary"] = counts
    base["generated_unix"] = round(time.time(), 3)
    _emit(base, output)
    if counts["fail"] > 0:
        return 1
    if strict and counts["warn"] > 0:
        return 1
    return 0


def _geometry_records(sc, seed, tol_cli, p_max_cli):
    checks = sc.checks if sc.checks else _DEFAULT_CHECKS
    records = []
    for pi, point in enumerate(sc.sample_points):
        st = geometry.induced_structure(sc, point)
        curv = geometry.curvature(st)
        for check in checks:
            name = check["name"]
            tol = float(check.get("tol", tol_cli))
            p_max = int(check.get("p_max", p_max_cli))
            label = f"{name}@point{pi}"
            t0 = time.perf_counter()
            if name == "frame":
                value = geometry.frame_residual(sc, point)
                status = "PASS" if value < tol else "FAIL"
                records.append(_record(label, status, value, tol,
                                       {"point": point},
                                       (time.perf_counter() - t0) * 1e3))
            elif name == "fundamental":
                res = geometry.fundamental_residuals(st, curv)
                for part in ("gauss", "codazzi_h", "codazzi_s", "ricci"):
                    value = getattr(res, part)
                    records.append(_record(
                        f"fundamental.{part}@point{pi}",
                        "PASS" if value < tol else "FAIL", value, tol,
                        {"point": point}, (time.perf_counter() - t0) * 1e3))
            elif name == "gauss_model":
                value = float(np.max(np.abs(
                    curv.R - geometry.gauss_curvature_tensor(st.S, st.h))))
                records.append(_record(label, "PASS" if value < tol else "FAIL",
                                       value, tol, {"point": point},
                                       (time.perf_counter() - t0) * 1e3))
            elif name == "equiaffine":
                dtau = float(np.max(np.abs(st.dtau)))
                hs = st.h @ st.S
                selfadj = float(np.max(np.abs(hs - hs.T)))
                value = max(dtau, selfadj)
                records.append(_record(label, "PASS" if value < tol else "FAIL",
                                       value, tol,
                                       {"point": point, "dtau": dtau,
                                        "h_selfadjoint": selfadj},
                                       (time.perf_counter() - t0) * 1e3))
            elif name == "codazzi_shape":
                sj = geometry.structure_jets(sc, point, order=1)
                worst = 0.0
                for i in range(sc.dim):
                    for j in range(i + 1, sc.dim):
                        a, b = nabla_S_codazzi(sj, i, j)
                        worst = max(worst, float(np.max(np.abs(a - b))))
                records.append(_record(label, "PASS" if worst < tol else "FAIL",
                                       worst, tol, {"point": point},
                                       (time.perf_counter() - t0) * 1e3))
            elif name == "rank_theorem":
                verdicts = [verify.check_rank_theorem(sc, p, tol, point=point)
                            for p in range(1, p_max + 1)]
                triggered = [v for v in verdicts if v.verdict != "VACUOUS"]
                if not triggered:
                    status, chosen = "VACUOUS", verdicts[-1]
                else:
                    chosen = triggered[0]
                    status = chosen.verdict
                records.append(_record(
                    label, status, chosen.max_r_power, tol,
                    {"point": point, "power": chosen.power,
                     "rank_S": chosen.rank_s,
                     "max_nabla": chosen.max_nabla,
                     "final_form": chosen.final_form},
                    (time.perf_counter() - t0) * 1e3))
            elif name == "alternating_identity":
                trials = int(check.get("trials", 50))
                rng = np.random.default_rng((seed, 17, pi))
                order = 2 * p_max
                sj = geometry.structure_jets(sc, point, order=max(1, order - 1))
                prov = GeometricCurvature(curv.R)
                field = CovariantField.constant(sc.omega_at(point))
                worst = 0.0
                for _ in range(trials):
                    pairs = [(int(a), int(b)) for a, b in
                             rng.integers(0, sc.dim, size=(p_max, 2))]
                    ys = [int(v) for v in rng.integers(0, sc.dim, size=2)]
                    lhs, rhs = alternating_sum_identity(
                        field, sj, prov, p_max, pairs, ys)
                    worst = max(worst, abs(lhs - rhs))
                records.append(_record(label, "PASS" if worst < tol else "FAIL",
                                       worst, tol,
                                       {"point": point, "k": p_max,
                                        "trials": trials},
                                       (time.perf_counter() - t0) * 1e3))
            else:
                records.append(_record(label, "WARN", None, tol,
                                       {"reason": f"unknown check '{name}'"},
                                       (time.perf_counter() - t0) * 1e3))
    return records


def cmd_check_geometry(args):
    try:
        sc = load_scenario(args.scenario)
    except (ScenarioFormatError, geometry.GeometryError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    base = {
        "tool": "affsym",
        "version": __version__,
        "command": "check-geometry",
        "scenario": sc.name,
        "scenario_digest": scenario_digest(args.scenario),
        "master_seed": args.seed,
        "parameters": {"tol": args.tol, "p_max": args.p_max},
    }
    records = _geometry_records(sc, args.seed, args.tol, args.p_max)
    return _finish(records, base, args.output, args.strict)


def cmd_oracles(args):
    pattern = args.filter or "*"
    matched = [oid for oid, _ in verify.list_oracles()
               if fnmatch.fnmatch(oid, pattern)]
    if not matched:
        print(f"error: filter {pattern!r} matches no oracle id", file=sys.stderr)
        return 2
    base = {
        "tool": "affsym",
        "version": __version__,
        "command": "oracles",
        "filter": pattern,
        "master_seed": args.seed,
        "parameters": {"draws": args.trials, "p_max": args.p_max},
    }
    records = []
    for oid in matched:
        t0 = time.perf_counter()
        results = verify.run_family(oid, args.trials, seed=args.seed,
                                    p_max=args.p_max)
        by_power = {}
        for r in results:
            by_power.setdefault(verify.power_of(oid, r.params), []).append(r)
        for power in sorted(by_power):
            group = by_power[power]
            worst = max(group, key=lambda r: r.scaled_err)
            status = "PASS" if worst.scaled_err <= verify.ORACLE_RTOL else "FAIL"
            records.append(_record(
                f"{oid}[p={power}]", status, worst.scaled_err, verify.ORACLE_RTOL,
                {"draws": len(group), "worst_abs_err": worst.abs_err,
                 "worst_brute": worst.brute, "worst_closed": worst.closed},
                (time.perf_counter() - t0) * 1e3))
    return _finish(records, base, args.output, args.strict)


def cmd_decompose(args):
    try:
        with open(args.matrix_file) as fh:
            data = json.load(fh)
        dim = int(data["dim"])
        a = np.asarray(data["A"], dtype=float).reshape(dim, dim)
        h = np.asarray(data["H"], dtype=float).reshape(dim, dim)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as err:
        print(f"error: cannot read matrix file: {err}", file=sys.stderr)
        return 2
    base = {
        "tool": "affsym",
        "version": __version__,
        "command": "decompose",
        "matrix_file": args.matrix_file,
        "master_seed": args.seed,
        "parameters": {"tol": args.tol},
    }
    t0 = time.perf_counter()
    try:
        pair = canonical.decompose(a, h)
    except canonical.NotSelfadjointError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except canonical.CanonicalError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    wall = (time.perf_counter() - t0) * 1e3
    summary = canonical.classify(pair)
    blocks = []
    for b in pair.blocks:
        if isinstance(b, RealBlock):
            blocks.append({"kind": "real", "size": b.size,
                           "eigenvalue": b.eigenvalue, "sign": b.sign})
        else:
            blocks.append({"kind": "complex", "half_size": b.half_size,
                           "alpha": b.alpha, "beta": b.beta})
    records = [
        _record("decompose", "PASS" if max(pair.residual_jordan,
                                           pair.residual_h) < 1e-6 else "WARN",
                max(pair.residual_jordan, pair.residual_h), 1e-6,
                {"blocks": blocks,
                 "residual_jordan": pair.residual_jordan,
                 "residual_h": pair.residual_h,
                 "warnings": list(pair.warnings)}, wall),
        _record("classify", "PASS", None, None, {
            "counts": [list(c) for c in summary.counts],
            "max_real_size": summary.max_real_size,
            "has_complex": summary.has_complex,
            "admissible_shape": summary.admissible_shape,
            "final_form": summary.final_form,
            "sign_classes": [[lam, size, list(signs)]
                             for lam, size, signs in summary.sign_classes]}),
        _record("rank", "PASS", canonical.rank(a), None, {}),
    ]
    return _finish(records, base, args.output, args.strict)


def cmd_list_oracles(args):
    base = {
        "tool": "affsym",
        "version": __version__,
        "command": "list-oracles",
        "oracles": [{"id": oid, "description": desc}
                    for oid, desc in verify.list_oracles()],
    }
    _emit(base, args.output)
    return 0


def _add_common(p):
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--tol", type=float, default=1e-8,
                   help="default residual tolerance (default 1e-8)")
    p.add_argument("--p-max", dest="p_max", type=int, default=3,
                   help="maximum operator power (default 3)")
    p.add_argument("--output", default=None,
                   help="report path (default stdout)")
    p.add_argument("--strict", action="store_true",
                   help="treat WARN records as failures")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="affsym",
        description="Induced affine structure workbench: geometry checks, "
                    "closed-form oracles, canonical pairs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-geometry", help="run all checks on a scenario")
    p.add_argument("--scenario", required=True,
                   help="scenario file path or builtin name")
    _add_common(p)
    p.set_defaults(func=cmd_check_geometry)

    p = sub.add_parser("oracles", help="run the closed-form oracle catalog")
    p.add_argument("--filter", default=None, help="glob over oracle ids")
    p.add_argument("--trials", type=int, default=100,
                   help="seeded draws per family (default 100)")
    _add_common(p)
    p.set_defaults(func=cmd_oracles, p_max=4)

    p = sub.add_parser("decompose", help="canonical pair of an (A, H) file")
    p.add_argument("matrix_file", help="JSON file with dim, A, H (row-major)")
    _add_common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("list-oracles", help="print the oracle registry")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_list_oracles)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
