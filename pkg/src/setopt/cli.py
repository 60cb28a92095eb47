"""Command-line surface.

Five commands: ``solve`` sweeps a scalarization base and verifies the
collected minimizers, ``verify`` checks a user-supplied candidate set,
``oracle`` runs the brute-force finite-instance checks, ``cvp`` solves
a discretized variational sweep, and ``catalog`` lists the built-in
problems.

Exit codes carry the mathematical verdict so pipelines can branch on it:
0 for a verified sc-solution (or all checks passing), 2 for an
infimizer-only verdict (or a flagged non-attaining direction), 3 for a
failed verification, 1 for input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import catalog, jsonio
from ._version import __version__
from .calcvar import CvpOptions, cvp_sweep
from .cones import DualBase, base_directions, default_anchor, interior_base
from .errors import SetOptError
from .oracle import (campaign_commutation, campaign_lemma, check_commutation,
                     check_inf_translation_lemma, corrupting_override,
                     enumerate_lattice_minimizers)
from .setfuns import CandidateSet
from .solver import (SearchOptions, collect_candidate, probe_points, sweep,
                     verify_sc_solution)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PARTIAL = 2
EXIT_FAIL = 3

_VERDICT_CODE = {"sc-solution": EXIT_OK, "infimizer-only": EXIT_PARTIAL,
                 "fail": EXIT_FAIL}


def _parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",") if t.strip() != ""])
    except ValueError as exc:
        raise SetOptError(f"cannot parse vector {text!r}") from exc


def _parse_points(text: str) -> np.ndarray:
    rows = [r for r in text.split(";") if r.strip() != ""]
    if not rows:
        raise SetOptError("empty point list")
    return np.stack([_parse_vector(r) for r in rows])


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", help="problem JSON path")
    p.add_argument("--catalog", help="catalog problem name")
    p.add_argument("--tol", type=float, default=None, help="verdict tolerance")
    p.add_argument("--seed", type=int, default=1, help="seed for all sampling")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", default="json,csv",
                   help="comma list of output formats (json, csv)")


def _add_solve_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--base-res", type=int, default=None,
                   help="number of scalarization directions")
    p.add_argument("--anchor", default=None,
                   help="base anchor, comma separated")
    p.add_argument("--probe-res", type=int, default=33,
                   help="verification probe resolution per axis")
    p.add_argument("--co-samples", type=int, default=32,
                   help="extra convex-combination samples in verification")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="setopt",
        description="Scalarization sweeps, verification and brute-force "
                    "checks for lattice-valued minimization.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="sweep a base and verify the minimizers")
    _add_common(ps)
    _add_solve_flags(ps)

    pv = sub.add_parser("verify", help="verify a given candidate point set")
    _add_common(pv)
    _add_solve_flags(pv)
    pv.add_argument("--m", default=None,
                    help="candidate points, semicolon separated (else from JSON)")

    po = sub.add_parser("oracle", help="finite-instance brute-force checks")
    _add_common(po)
    po.add_argument("--instances", type=int, default=200,
                    help="campaign size when no instance is given")
    po.add_argument("--inject-fault", action="store_true",
                    help="corrupt one translated value to exercise detection")

    pc = sub.add_parser("cvp", help="discretized variational sweep")
    _add_common(pc)
    pc.add_argument("--base-res", type=int, default=None,
                    help="number of scalarization directions")
    pc.add_argument("--mesh", type=int, default=None, help="mesh intervals")
    pc.add_argument("--grad-tol", type=float, default=1e-8,
                    help="gradient sup-norm stopping tolerance")

    pl = sub.add_parser("catalog", help="list built-in problems")
    pl.add_argument("--out", default=None, help=argparse.SUPPRESS)
    return p


def _formats(args) -> set:
    return {t.strip() for t in args.format.split(",") if t.strip()}


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_problem(args):
    """Problem plus extras from either --problem or --catalog."""
    if args.problem:
        data = jsonio.load_json(args.problem)
        fn, extras = jsonio.problem_from_dict(data)
        prob = extras.get("problem")
        if prob is None:
            cone = fn.cone
            prob = catalog.Problem(fn.label, fn, default_anchor(cone), "full",
                                   181 if cone.dim == 2 else 1,
                                   np.zeros(fn.space.dim), "table problem")
        return prob, extras
    if args.catalog:
        return catalog.make_problem(args.catalog), {}
    raise SetOptError("need --problem or --catalog")


def _base_for(prob, args) -> DualBase:
    anchor = _parse_vector(args.anchor) if args.anchor else prob.anchor
    count = args.base_res if args.base_res else prob.default_directions
    if args.anchor is None and count == prob.default_directions:
        return catalog.directions_for(prob, count)
    cone = prob.setfn.cone
    if prob.base_kind == "interior":
        return interior_base(cone, anchor, count + 1)
    if cone.dim == 1 or count == 1:
        return DualBase(cone, anchor, np.atleast_2d(anchor / (anchor @ anchor)))
    return base_directions(cone, anchor, count - 1)


def _sweep_rows(results, alphas):
    rows = []
    for i, r in enumerate(results):
        rows.append({
            "direction": r.direction,
            "alpha": None if alphas is None else alphas[i],
            "minimizer": None if r.minimizer is None else r.minimizer,
            "value": r.value,
            "iterations": r.iterations,
            "converged": r.converged,
            "note": r.note,
        })
    return rows


def _solution_payload(report, config, sweep_rows=None) -> dict:
    payload = jsonio.base_report(config)
    payload.update({
        "verdict": report.verdict,
        "tol": report.tol,
        "directions": report.directions,
        "alphas": report.alphas,
        "candidate": {"points": report.candidate.points,
                      "label": report.candidate.label},
        "gaps": {"per_direction": report.gaps,
                 "max": report.max_gap,
                 "co_gap": report.co_gap,
                 "candidate_minima": report.candidate_minima,
                 "probe_minima": report.probe_minima},
        "condition3": {"residuals": report.condition3_residuals,
                       "max": report.max_residual,
                       "directions": report.condition3_direction},
        "lattice_minimizers": report.lattice_min_verdicts,
        "infimum": jsonio.value_to_dict(report.infimum),
        "sampling": report.sampling,
    })
    if sweep_rows is not None:
        payload["sweep"] = sweep_rows
    return payload


def _emit_solution(args, prob, base, report, sweep_rows, prefix) -> None:
    out = _outdir(args)
    formats = _formats(args)
    config = {
        "command": prefix,
        "problem": args.problem or args.catalog,
        "base_res": len(base),
        "anchor": base.anchor,
        "tol": report.tol,
        "seed": args.seed,
        "probe_res": args.probe_res,
        "co_samples": args.co_samples,
        "merge_tol": 1e-5,
    }
    if "json" in formats:
        jsonio.write_json(out / f"{prefix}_report.json",
                          _solution_payload(report, config, sweep_rows))
    if "csv" in formats:
        jsonio.support_csv(out / "support.csv", base, report.candidate_minima)
        if prob.setfn.cone.dim == 2:
            jsonio.polyline_csv(out / "infimum_polyline.csv", report.infimum)


def run_solve(args) -> int:
    prob, _ = _load_problem(args)
    base = _base_for(prob, args)
    opts = SearchOptions(start=prob.start)
    results = sweep(prob.setfn, base, opts)
    cand = collect_candidate(results)
    probe = probe_points(prob.setfn.space, resolution=args.probe_res,
                         seed=args.seed)
    report = verify_sc_solution(prob.setfn, cand, base, probe, tol=args.tol,
                                co_extra=args.co_samples, seed=args.seed)
    _emit_solution(args, prob, base, report,
                   _sweep_rows(results, report.alphas), "solve")
    return _VERDICT_CODE[report.verdict]


def run_verify(args) -> int:
    prob, extras = _load_problem(args)
    if args.m is not None:
        m = _parse_points(args.m)
    elif "m" in extras:
        m = extras["m"]
    else:
        raise SetOptError("verify needs candidate points (--m or an 'm' field)")
    if m.size == 0:
        raise SetOptError("candidate set is empty")
    cand = CandidateSet(points=m, label="given")
    base = _base_for(prob, args)
    probe = probe_points(prob.setfn.space, resolution=args.probe_res,
                         seed=args.seed)
    report = verify_sc_solution(prob.setfn, cand, base, probe, tol=args.tol,
                                co_extra=args.co_samples, seed=args.seed)
    _emit_solution(args, prob, base, report, None, "verify")
    return _VERDICT_CODE[report.verdict]


def _oracle_instance_payload(inst, m, dirs, args) -> tuple:
    anchor = default_anchor(inst.cone)
    if dirs is None:
        dirs = base_directions(inst.cone, anchor, 4).directions
    if m is None:
        m = inst.grid
    override = None
    if args.inject_fault:
        override = corrupting_override(inst, m)
    lemma = check_inf_translation_lemma(inst, m, seed=args.seed,
                                        fhat_override=override)
    gap = check_commutation(inst, m, dirs, fhat_override=override)
    minimizers = enumerate_lattice_minimizers(inst)
    gap_ok = gap <= 1e-12
    payload = {
        "instance": {"label": inst.label, "points": inst.size},
        "lemma": lemma.as_dict(),
        "commutation_gap": gap,
        "commutation_pass": gap_ok,
        "lattice_minimizers": minimizers,
        "fault_injected": bool(args.inject_fault),
    }
    return payload, (lemma.passed and gap_ok)


def run_oracle(args) -> int:
    out = _outdir(args)
    config = {"command": "oracle", "seed": args.seed,
              "instances": args.instances,
              "problem": args.problem or args.catalog,
              "inject_fault": bool(args.inject_fault)}
    payload = jsonio.base_report(config)
    if args.problem or args.catalog:
        if args.problem:
            inst, m, dirs = jsonio.instance_from_dict(jsonio.load_json(args.problem))
        else:
            inst, m, dirs = catalog.make_instance(args.catalog), None, None
        body, ok = _oracle_instance_payload(inst, m, dirs, args)
        payload.update(body)
    else:
        com = campaign_commutation(args.instances, seed=args.seed)
        lem = campaign_lemma(max(1, args.instances // 2), seed=args.seed + 4)
        ok = com.passed and lem.passed
        payload.update({"commutation_campaign": com.as_dict(),
                        "lemma_campaign": lem.as_dict()})
    if "json" in _formats(args):
        jsonio.write_json(out / "oracle_report.json", payload)
    return EXIT_OK if ok else EXIT_FAIL


def run_cvp(args) -> int:
    if args.problem:
        lag, boundary, mesh, dirs = jsonio.cvp_from_dict(jsonio.load_json(args.problem))
        name = args.problem
    else:
        cvp = catalog.make_cvp(args.catalog or "quadratic_cvp")
        lag, boundary, mesh, dirs = (cvp.lagrangian, cvp.boundary, cvp.mesh,
                                     cvp.directions)
        name = cvp.name
    if args.mesh:
        mesh = args.mesh
    if args.base_res:
        alphas = np.linspace(0.1, 0.9, args.base_res)
        dirs = np.stack([alphas, 1.0 - alphas], axis=1)
    phi_tol = args.tol if args.tol is not None else 1e-4
    opts = CvpOptions(grad_tol=args.grad_tol)
    report = cvp_sweep(lag, dirs, boundary, mesh, opts, phi_tol=phi_tol,
                       seed=args.seed)
    out = _outdir(args)
    formats = _formats(args)
    config = {"command": "cvp", "problem": name, "mesh": mesh,
              "grad_tol": args.grad_tol, "phi_tol": phi_tol, "seed": args.seed,
              "directions": len(dirs)}
    if "json" in formats:
        payload = jsonio.base_report(config)
        payload.update({
            "directions": report.directions,
            "values": report.values,
            "grad_norms": report.grad_norms,
            "iterations": report.iterations,
            "converged": report.converged,
            "residuals": report.residuals,
            "notes": report.notes,
            "translation": {"margin": report.translation_margin,
                            "pass": report.translation_pass},
        })
        jsonio.write_json(out / "cvp_report.json", payload)
    if "csv" in formats:
        jsonio.front_csv(out / "front.csv", report)
        jsonio.arcs_csv(out / "arcs.csv", report)
    if not report.all_converged:
        return EXIT_PARTIAL
    if report.max_residual > 1e-6 or not report.translation_pass:
        return EXIT_FAIL
    return EXIT_OK


def run_catalog(args) -> int:
    lines = ["solve/verify problems:"]
    for name in catalog.SOLVE_NAMES:
        lines.append(f"  {name}: {catalog.make_problem(name).description}")
    lines.append("variational problems:")
    for name in catalog.CVP_NAMES:
        lines.append(f"  {name}: {catalog.make_cvp(name).description}")
    lines.append("finite oracle instances:")
    for name in catalog.INSTANCE_NAMES:
        lines.append(f"  {name}: {catalog.make_instance(name).label}, "
                     f"{catalog.make_instance(name).size} points")
    print("\n".join(lines))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"solve": run_solve, "verify": run_verify, "oracle": run_oracle,
                "cvp": run_cvp, "catalog": run_catalog}
    try:
        return handlers[args.command](args)
    except SetOptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
