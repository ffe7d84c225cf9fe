"""Command-line front end.

Exit codes: 0 success, 2 input/schema error, 3 a theorem-level check failed
(completeness, Schmidt rank, the 1/2 ceiling, oracle agreement).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .entanglement import (ME_TOL, RANK_TOL, bell_discrimination, detector_contributions,
                           is_maximally_entangled, me_success_probability, schmidt)
from .io import (InputError, SCHEMAS, SCHEMA_VERSION, load_circuit, load_optimizer_config,
                 load_state, matrix_to_json)
from .modes import validate_unitary
from .optimize import BOUND, BOUND_SLACK, optimize, verify_bound
from .povm import completeness_check, oracle_crosscheck, povm_elements, single_qudit_povm, formula_probabilities
from .fock import detection_probabilities, encode, evolve
from .states import FERMION, Statistics, TwoQuditState

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 2, 3
DEFAULT_TOL = 1e-10


def _report(command: str, config: dict, **body) -> dict:
    return {"tool": "linpovm", "version": __version__, "schema_version": SCHEMA_VERSION,
            "command": command, "config": config, **body}


def _stats(args) -> Statistics:
    return Statistics.parse(args.statistics)


def _check_d(U, d: int, need: int):
    if d < 1 or U.n < need * d:
        raise InputError(f"--d {d} needs at least {need * d} modes, circuit has {U.n}")


def cmd_compose(args):
    U, _ = load_circuit(args.circuit)
    res = validate_unitary(U.matrix)
    checks = {"unitary": res <= args.tolerance}
    return _report("compose", {"circuit": args.circuit, "tolerance": args.tolerance},
                   n=U.n, unitary=matrix_to_json(U.matrix), unitarity_residual=res, checks=checks)


def cmd_single_qudit(args):
    U, _ = load_circuit(args.circuit)
    _check_d(U, args.d, 1)
    povm = single_qudit_povm(U, args.d)
    res = povm.completeness_residual()
    return _report("single-qudit", {"circuit": args.circuit, "d": args.d, "tolerance": args.tolerance},
                   vectors=matrix_to_json(povm.vectors), completeness_residual=res,
                   checks={"completeness": res <= args.tolerance})


def _parse_pattern(text: str, stats: Statistics):
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"--pattern: expected 'i,j', got {text!r}") from exc
    i, j = min(i, j), max(i, j)
    if i == j and stats is FERMION:
        raise InputError(f"--pattern {i},{j}: double clicks are impossible for fermions (Pauli exclusion)")
    return i, j


def cmd_povm(args):
    U, _ = load_circuit(args.circuit)
    stats = _stats(args)
    _check_d(U, args.d, 2)
    wanted = _parse_pattern(args.pattern, stats) if args.pattern else None
    if wanted and wanted[1] > U.n:
        raise InputError(f"--pattern {args.pattern}: mode exceeds n={U.n}")
    elements = povm_elements(U, args.d, stats)
    res = completeness_check(elements, args.d)
    rows, max_rank = [], 0
    for el in elements:
        sv = np.linalg.svd(el.P, compute_uv=False)
        if not el.is_null:
            max_rank = max(max_rank, schmidt(el.P, RANK_TOL).numerical_rank)
        if wanted and (el.pattern.i, el.pattern.j) != wanted:
            continue
        rows.append({"pattern": [el.pattern.i, el.pattern.j], "double_click": el.pattern.double_click,
                     "weight": el.weight, "singular_values": sv.tolist(), "null": el.is_null,
                     "P": matrix_to_json(el.P)})
    return _report("povm", {"circuit": args.circuit, "d": args.d, "statistics": stats.value,
                            "pattern": list(wanted) if wanted else None, "tolerance": args.tolerance},
                   elements=rows, completeness_residual=res, max_schmidt_rank=max_rank,
                   checks={"completeness": res <= args.tolerance, "schmidt_rank_le_2": max_rank <= 2})


def cmd_analyze(args):
    U, _ = load_circuit(args.circuit)
    stats = _stats(args)
    _check_d(U, args.d, 2)
    elements = povm_elements(U, args.d, stats)
    rows, max_rank = [], 0
    for el in elements:
        row = {"pattern": [el.pattern.i, el.pattern.j], "weight": el.weight,
               "singular_values": np.linalg.svd(el.P, compute_uv=False).tolist(), "null": el.is_null,
               "schmidt_rank": None, "maximally_entangled": False, "kappa": 0.0}
        if not el.is_null:
            sd = schmidt(el.P, RANK_TOL)
            me = is_maximally_entangled(el.P, args.me_tolerance)
            max_rank = max(max_rank, sd.numerical_rank)
            row.update(schmidt_rank=sd.numerical_rank, maximally_entangled=me.is_me, kappa=me.kappa)
        rows.append(row)
    p_me = me_success_probability(elements, args.d, args.me_tolerance)
    by_tol = {f"{t:g}": me_success_probability(elements, args.d, t) for t in (1e-5, 1e-7, 1e-9)}
    shares = [vars(s) for s in detector_contributions(U, elements, args.d, args.me_tolerance)]
    res = completeness_check(elements, args.d)
    checks = {"completeness": res <= args.tolerance, "schmidt_rank_le_2": max_rank <= 2}
    if args.d == 2:
        checks["me_success_le_half"] = p_me <= BOUND + 1e-9
    else:
        checks["no_me_elements_for_d_gt_2"] = p_me == 0.0
    return _report("analyze", {"circuit": args.circuit, "d": args.d, "statistics": stats.value,
                               "me_tolerance": args.me_tolerance, "tolerance": args.tolerance},
                   elements=rows, max_schmidt_rank=max_rank, me_success_probability=p_me,
                   me_success_by_tolerance=by_tol, detectors=shares, completeness_residual=res, checks=checks)


def cmd_bell(args):
    U, _ = load_circuit(args.circuit)
    stats = _stats(args)
    _check_d(U, args.d, 2)
    rep = bell_discrimination(U, args.d, stats, args.me_tolerance)
    rows = [{"pattern": list(r.pattern),
             "probabilities": {f"{m},{k}": p for (m, k), p in r.probabilities.items()},
             "identified_state": list(r.identified_state) if r.identified_state else None,
             "maximally_entangled": r.me.is_me, "kappa": r.me.kappa,
             "singular_values": r.schmidt_values.tolist()} for r in rep.rows]
    totals = {}
    for r in rep.rows:
        for key, p in r.probabilities.items():
            totals[key] = totals.get(key, 0.0) + p
    checks = {"bell_inputs_normalized": all(abs(t - 1) <= args.tolerance for t in totals.values())}
    if args.d == 2:
        checks["success_le_half"] = (rep.success_uniform_bell <= BOUND + 1e-9
                                     and rep.success_maximally_mixed <= BOUND + 1e-9)
    return _report("bell", {"circuit": args.circuit, "d": args.d, "statistics": stats.value,
                            "me_tolerance": args.me_tolerance, "tolerance": args.tolerance},
                   patterns=rows, identified_states=[list(s) for s in rep.identified_states],
                   success_uniform_bell=rep.success_uniform_bell,
                   success_maximally_mixed=rep.success_maximally_mixed, checks=checks)


def cmd_crosscheck(args):
    U, _ = load_circuit(args.circuit)
    state = load_state(args.state)
    if args.statistics:
        state = TwoQuditState(state.C, _stats(args))
    if U.n < 2 * state.d:
        raise InputError(f"state with d={state.d} needs at least {2 * state.d} modes, circuit has {U.n}")
    dev = oracle_crosscheck(U, state)
    formula = formula_probabilities(U, state)
    oracle = detection_probabilities(evolve(encode(state, U.n), U))
    probs = [{"pattern": list(k), "formula": formula.get(k, 0.0), "oracle": oracle.get(k, 0.0)}
             for k in sorted(set(formula) | set(oracle))]
    return _report("crosscheck", {"circuit": args.circuit, "state": args.state,
                                  "statistics": state.statistics.value, "tolerance": args.tolerance},
                   max_abs_deviation=dev, probabilities=probs, checks={"oracle_agreement": dev <= args.tolerance})


def cmd_optimize(args):
    config = load_optimizer_config(args.config)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.sharpness is not None:
        try:
            config = replace(config, sharpness=args.sharpness)
        except ValueError as exc:
            raise InputError(f"--sharpness: {exc}") from exc
    result = optimize(config)
    body = result.to_dict()
    resolved = body.pop("config")
    checks = {}
    if config.d == 2:
        checks["bound_respected"] = verify_bound([result], 2)
    else:
        checks["no_me_elements_for_d_gt_2"] = result.best_hard_success == 0.0
    return _report("optimize", {**resolved, "config_path": args.config, "bound_slack": BOUND_SLACK},
                   **body, checks=checks)


def cmd_schema(args):
    return SCHEMAS[args.name]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="linpovm", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"linpovm {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, d=False, stats=False, me=False):
        sp.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
        sp.add_argument("--tolerance", type=float, default=DEFAULT_TOL, help="tolerance for invariant checks")
        if d:
            sp.add_argument("--d", type=int, default=2, help="qudit dimension")
        if stats:
            sp.add_argument("--statistics", choices=["boson", "fermion"], default="boson")
        if me:
            sp.add_argument("--me-tolerance", type=float, default=ME_TOL,
                            help="relative singular-value spread counted as maximally entangled")

    sp = sub.add_parser("compose", help="compose a circuit into its mode unitary")
    sp.add_argument("circuit")
    common(sp)
    sp.set_defaults(func=cmd_compose)

    sp = sub.add_parser("single-qudit", help="POVM induced on one qudit")
    sp.add_argument("circuit")
    common(sp, d=True)
    sp.set_defaults(func=cmd_single_qudit)

    sp = sub.add_parser("povm", help="two-qudit click POVM and completeness residual")
    sp.add_argument("circuit")
    sp.add_argument("--pattern", help="restrict the element table to one click pattern 'i,j'")
    common(sp, d=True, stats=True)
    sp.set_defaults(func=cmd_povm)

    sp = sub.add_parser("analyze", help="Schmidt ranks, ME classification, success probability")
    sp.add_argument("circuit")
    common(sp, d=True, stats=True, me=True)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("bell", help="generalized Bell-state discrimination report")
    sp.add_argument("circuit")
    common(sp, d=True, stats=True, me=True)
    sp.set_defaults(func=cmd_bell)

    sp = sub.add_parser("crosscheck", help="compare click probabilities with the Fock-space oracle")
    sp.add_argument("circuit")
    sp.add_argument("state")
    common(sp)
    sp.add_argument("--statistics", choices=["boson", "fermion"], default=None,
                    help="override the statistics given in the state file")
    sp.set_defaults(func=cmd_crosscheck)

    sp = sub.add_parser("optimize", help="restarted simplex search for the best Bell-type POVM")
    sp.add_argument("config")
    sp.add_argument("--seed", type=int, default=None, help="override the seed in the config file")
    sp.add_argument("--sharpness", type=float, default=None,
                    help="surrogate sharpening exponent (>= 1; 2 is recommended for fermions)")
    common(sp)
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("schema", help="print a JSON schema")
    sp.add_argument("name", choices=sorted(SCHEMAS))
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_schema)
    return p


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        report = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = json.dumps(report, indent=2, default=_jsonable)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    failed = [name for name, ok in report.get("checks", {}).items() if not ok]
    if failed:
        print(f"invariant check(s) failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
