"""Command-line front end.

Exit codes: 0 success, 1 negative verdict (infeasible ensemble), 2 invalid
input, 3 failed internal cross-check.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import baselines, ensemble_io, montecarlo, solver2oo2, solver2oo3
from .ensemble import comparison_povm, is_comparable, witness_pattern, witness_povm
from .errors import StateCompError, ValidationError

EXIT_OK, EXIT_NEGATIVE, EXIT_INVALID, EXIT_CHECK = 0, 1, 2, 3
SIM_SIGMAS = 5.0


def _j(x):
    """JSON number with 12 significant digits."""
    return None if x is None else float(f"{float(x):.12g}") + 0.0


def _h(x):
    return f"{float(x):.6g}"


def _matrix_json(m):
    return [[[_j(z.real), _j(z.imag)] for z in row] for row in np.asarray(m)]


def _matrix_text(m, indent="    "):
    lines = []
    for row in np.asarray(m):
        cells = []
        for z in row:
            cells.append(_h(z.real) if abs(z.imag) < 1e-15 else f"{_h(z.real)}{z.imag:+.6g}j")
        lines.append(indent + "  ".join(f"{c:>12}" for c in cells))
    return "\n".join(lines)


def _emit(args, doc, human_lines):
    if getattr(args, "json", False):
        print(json.dumps(doc, indent=2))
    else:
        print("\n".join(human_lines))


def cmd_solve2(args) -> int:
    q1, c = args.q1, args.costheta
    po, star = solver2oo2.p_opt(q1, c, allow_limit=args.allow_limit)
    ps, ds = baselines.p_sep(q1, c, allow_limit=args.allow_limit)
    g = po - ps
    limit = not (0.0 < c < 1.0)
    sol = None if limit else solver2oo2.solve(q1, c)

    sim = None
    status = EXIT_OK
    if args.simulate:
        if sol is None:
            raise ValidationError("simulation needs 0 < cos_theta < 1")
        cfg = montecarlo.SimConfig(args.simulate, args.seed, sol.povm,
                                   sol.instance.ensemble(), 2,
                                   shards=_shard_plan(args.simulate, args.shards),
                                   workers=args.shards)
        rep = montecarlo.simulate(cfg)
        tol = SIM_SIGMAS * max(rep.std_error, 1.0 / args.simulate)
        ok = rep.error_count == 0 and abs(rep.empirical_p - po) <= tol
        sim = {"trials": rep.trials, "seed": args.seed, "empirical_p": rep.empirical_p,
               "std_error": rep.std_error, "error_count": rep.error_count, "agrees": ok}
        if not ok:
            status = EXIT_CHECK

    if args.csv:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["q1", "cos_theta", "p_opt", "star", "p_sep", "doublestar", "gain",
                    "alpha", "beta"])
        w.writerow([repr(q1), repr(c), repr(po), int(star), repr(ps), int(ds), repr(g),
                    "" if sol is None else repr(sol.alpha), "" if sol is None else repr(sol.beta)])
        return status

    doc = {
        "command": "solve2", "q1": _j(q1), "cos_theta": _j(c),
        "p_opt": _j(po), "branch": "star" if star else "else",
        "p_sep": _j(ps), "doublestar": bool(ds), "gain": _j(g),
        "alpha": None if sol is None else _j(sol.alpha),
        "beta": None if sol is None else _j(sol.beta),
        "povm": None if sol is None else {lab: _matrix_json(m) for lab, m in sol.povm.elements.items()},
        "simulation": None if sim is None else {k: (_j(v) if isinstance(v, float) else v)
                                                for k, v in sim.items()},
    }
    lines = [
        f"q1 = {_h(q1)}  cos_theta = {_h(c)}",
        f"P_opt = {_h(po)}  (branch: {'(*) holds' if star else 'else'})",
        f"P_sep = {_h(ps)}  (branch: {'(**) holds' if ds else 'else'})",
        f"gain  = {_h(g)}",
    ]
    if sol is not None:
        lines.append(f"alpha = {_h(sol.alpha)}  beta = {_h(sol.beta)}")
        for lab, m in sol.povm.elements.items():
            lines.append(f"F_{lab} =")
            lines.append(_matrix_text(m))
    if sim is not None:
        lines.append(
            f"Monte Carlo: {sim['trials']} trials, seed {sim['seed']}: "
            f"P = {_h(sim['empirical_p'])} +- {_h(sim['std_error'])}, "
            f"errors = {sim['error_count']} -> {'ok' if sim['agrees'] else 'MISMATCH'}")
    _emit(args, doc, lines)
    return status


def _shard_plan(trials: int, shards: int):
    shards = max(1, int(shards))
    base, extra = divmod(trials, shards)
    return [base + (1 if k < extra else 0) for k in range(shards)]


def cmd_gain_grid(args) -> int:
    grid = baselines.gain_grid(args.steps, args.steps_c)
    try:
        with open(args.out, "w", newline="") as fh:
            grid.write_csv(fh)
    except OSError as exc:
        raise ValidationError(f"cannot write {args.out}: {exc.strerror}") from exc
    q, c, g = grid.argmax()
    print(f"wrote {len(grid)} rows to {args.out}; max gain {_h(g)} at q1 = {_h(q)}, "
          f"cos_theta = {_h(c)}")
    return EXIT_OK


def cmd_solve3(args) -> int:
    rep = solver2oo3.p_opt3(args.costheta)
    heur = solver2oo3.separable_heuristic3(args.costheta)
    doc = {"command": "solve3", "cos_theta": _j(rep.cos_theta),
           "dim_H_prime": rep.dim_H_prime, "dim_kcap_a": rep.dim_kcap_a,
           "dim_kcap_b": rep.dim_kcap_b, "region_ok": rep.region_ok,
           "p_opt": _j(rep.p_opt), "boundary": _j(rep.boundary),
           "p_sep_heuristic": _j(heur)}
    lines = [
        f"cos_theta = {_h(rep.cos_theta)}",
        f"dims (H', K_a, K_b) = {rep.dims}",
        f"region boundary = {_h(rep.boundary)}; in region: {'yes' if rep.region_ok else 'no'}",
        f"P_opt = {_h(rep.p_opt)}" if rep.region_ok
        else "P_opt = n/a (outside the region where the optimum is known)",
        f"separable (heuristic grid search) = {_h(heur)}",
    ]
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_feasible(args) -> int:
    ens = ensemble_io.load(args.input)
    rep = is_comparable(ens)
    doc = {"command": "feasible", "feasible": rep.comparable,
           "states": [{"index": d.index, "contained": d.contained, "residual": _j(d.residual)}
                      for d in rep.states],
           "witness": None}
    lines = []
    for d in rep.states:
        verdict = "contained in the others' supports" if d.contained else "not contained"
        lines.append(f"state {d.index}: {verdict} (residual {_h(d.residual)})")
    lines.append(f"unambiguous comparison possible: {'yes' if rep.comparable else 'no'}")
    if args.witness and rep.comparable:
        w = witness_povm(ens)
        table = witness_pattern(w, ens)
        doc["witness"] = {"povm": {lab: _matrix_json(m) for lab, m in w.elements.items()},
                          "pattern": [[_j(x) for x in row] for row in table],
                          "success": _j(montecarlo.exact_success(
                              comparison_povm(w, args.copies), ens, args.copies))}
        lines.append("witness POVM:")
        for lab, m in w.elements.items():
            lines.append(f"F_{lab} =")
            lines.append(_matrix_text(m))
        lines.append("tr(F_i pi_j):")
        lines.append(_matrix_text(table))
        lines.append(f"success with {args.copies} copies measured locally: "
                     f"{_h(doc['witness']['success'])}")
    _emit(args, doc, lines)
    return EXIT_OK if rep.comparable else EXIT_NEGATIVE


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="statecomp", description="Unambiguous quantum state comparison.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s2 = sub.add_parser("solve2", help="two out of two pure states")
    s2.add_argument("--q1", type=float, required=True)
    s2.add_argument("--costheta", type=float, required=True)
    fmt = s2.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    s2.add_argument("--simulate", type=int, metavar="TRIALS", default=0)
    s2.add_argument("--seed", type=int, default=0)
    s2.add_argument("--shards", type=int, default=1)
    s2.add_argument("--allow-limit", action="store_true",
                    help="accept cos_theta in {0, 1} and report one-sided limits")
    s2.set_defaults(func=cmd_solve2)

    gg = sub.add_parser("gain-grid", help="CSV of P_opt, P_sep and gain over (q1, cos_theta)")
    gg.add_argument("--steps", type=int, required=True)
    gg.add_argument("--steps-c", type=int, default=None)
    gg.add_argument("--out", required=True)
    gg.set_defaults(func=cmd_gain_grid)

    s3 = sub.add_parser("solve3", help="two out of three equal-overlap states")
    s3.add_argument("--costheta", type=float, required=True)
    s3.add_argument("--json", action="store_true")
    s3.set_defaults(func=cmd_solve3)

    fe = sub.add_parser("feasible", help="check whether comparison is possible at all")
    fe.add_argument("--input", required=True)
    fe.add_argument("--witness", action="store_true")
    fe.add_argument("--copies", type=int, default=2)
    fe.add_argument("--json", action="store_true")
    fe.set_defaults(func=cmd_feasible)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, ValueError) as exc:
        print(f"statecomp {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except StateCompError as exc:
        print(f"statecomp {args.command}: cross-check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
