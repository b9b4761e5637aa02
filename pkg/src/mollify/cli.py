"""Command line entry point.

Every subcommand prints one JSON report to stdout and exits with
0 (all checks passed), 1 (usage error) or 2 (a check failed).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__, arith, exponents, selberg
from .errors import MollifyError
from .euler import verify as euler_verify
from .moment import MomentParams, default_p, eval_v
from .optimizer import SearchSpace, evaluate_theorem_a, optimize

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return exponents.as_rational(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _check(check_id, inputs, value, expected, passed) -> dict:
    return {"check_id": check_id, "inputs": inputs, "value": value,
            "expected": expected, "pass": bool(passed)}


# -- subcommands -----------------------------------------------------------------

def cmd_optimize(args) -> tuple[dict, list]:
    if args.search:
        space = SearchSpace(polish_iterations=args.polish)
        res = optimize(args.theta, space, args.guard)
        result = {"best_upsilon": res.best_upsilon, "best_c_tilde": res.best_c_tilde,
                  "evaluations": res.evaluations, **res.result.as_dict(),
                  "trace": [list(t) for t in res.trace]}
        br = res.result
    else:
        if args.upsilon is None or args.ctilde is None:
            raise UsageError("--upsilon and --ctilde are required unless --search is given")
        br = evaluate_theorem_a(args.theta, args.upsilon, args.ctilde, args.guard)
        result = br.as_dict()
    checks = [_check("bound_finite", {}, br.bound, "finite > 0",
                     math.isfinite(br.bound) and br.bound > 0),
              _check("N_floor", {}, br.N, "floor(bound)", br.N == math.floor(br.bound))]
    return result, checks


def cmd_exponents(args) -> tuple[dict, list]:
    th = args.theta
    result = {"theta": th, "delta_max": exponents.delta_max(th),
              "omega": exponents.omega(th),
              "kmv_effective_delta": exponents.kmv_effective_delta(),
              "alpha_thm_b": exponents.alpha_thm_b(th), "x_amp": exponents.x_amp(th),
              "spectral_deltas": list(exponents.spectral_deltas(th))}
    checks = []
    if th < Fraction(1, 2):
        alpha = exponents.alpha_prop_d(th)
        eff = exponents.prop_d_effective_delta(th, alpha)
        result["alpha_prop_d"] = alpha
        result["prop_d_effective_delta"] = eff
        checks.append(_check("prop_d_equalization", {"alpha": alpha}, eff,
                             result["delta_max"], eff == result["delta_max"]))
    x_star, expo = exponents.amplifier_optimum(th)
    lines = exponents.amplifier_lines(th)
    result["amplifier_optimum"] = {"x": x_star, "exponent": expo}
    checks.append(_check("amplifier_x_star", {}, x_star, result["x_amp"],
                         x_star == result["x_amp"]))
    checks.append(_check("amplifier_lines_equal", {}, [ln(x_star) for ln in lines], expo,
                         all(ln(x_star) == expo for ln in lines)))
    checks.append(_check("amplifier_exponent", {}, expo, 1 - 2 * result["omega"],
                         expo == 1 - 2 * result["omega"]))
    return result, checks


def cmd_verify_euler(args) -> tuple[dict, list]:
    cls = args.prime_class
    reports = []
    if cls in ("split", "all"):
        reports += [euler_verify.verify_bbb(),
                    euler_verify.verify_local_unit("split")]
    if cls in ("ramified", "all"):
        reports += [euler_verify.verify_aaa(),
                    euler_verify.verify_local_unit("ramified")]
    if cls in ("at_q", "all"):
        defect = euler_verify.q_local_defect()
        at0 = defect.subs({"Q": 0})
        reports.append(euler_verify.VerificationReport(
            identity="q_defect_at_Q0", prime_class="at_q", holds=at0 == 1,
            residual=str(at0.cross_difference(1)), degrees=defect.total_degrees(),
            detail={"defect": str(defect)}))
    if args.equal_uv:
        reports += [r for r in euler_verify.verify_all(equal_uv=True)
                    if cls == "all" or r.prime_class == cls]
    result = {"reports": [r.as_dict() for r in reports]}
    checks = [_check(r.identity, {"class": r.prime_class}, r.residual, "0", r.holds)
              for r in reports]
    return result, checks


def cmd_kloosterman(args) -> tuple[dict, list]:
    failures = []
    count = 0
    for c in range(1, args.max_c + 1):
        block = arith.kloosterman_block(args.max_mn, args.max_mn, c)
        for m in range(1, args.max_mn + 1):
            for n in range(1, args.max_mn + 1):
                count += 1
                if abs(block[m - 1, n - 1]) > arith.weil_bound(m, n, c) + arith.WEIL_SLACK:
                    failures.append([m, n, c, float(block[m - 1, n - 1])])
    result = {"checks_run": count, "failures": failures}
    checks = [_check("weil_bound", {"max_c": args.max_c, "max_mn": args.max_mn},
                     len(failures), 0, not failures)]
    return result, checks


def cmd_selberg(args) -> tuple[dict, list]:
    rng = np.random.default_rng(args.seed)
    checks = []
    for i in range(args.cases):
        f, box = selberg.random_case(rng)
        lhs = selberg.selberg_lhs(f, box)
        rhs = selberg.selberg_rhs(f, box)
        checks.append(_check(f"case_{i}", {"box": [box.w0, box.w1, box.h, box.w],
                                           "zeros": [[z.real, z.imag, m] for z, m in f.zeros]},
                             rhs, lhs, abs(lhs - rhs) <= 1e-8 * (1 + abs(lhs))))
    return {"cases": args.cases, "seed": args.seed}, checks


def cmd_eval_v(args) -> tuple[dict, list]:
    params = MomentParams(args.delta, default_p(args.upsilon))
    value = eval_v(args.u, args.v, params, limit=True)
    return {"V": value, "in_regime": params.in_regime}, [
        _check("V_at_least_one", {}, value, ">= 1", value >= 1.0)]


COMMANDS = {
    "optimize": cmd_optimize,
    "exponents": cmd_exponents,
    "verify-euler": cmd_verify_euler,
    "kloosterman": cmd_kloosterman,
    "selberg": cmd_selberg,
    "eval-v": cmd_eval_v,
}


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = _Parser(prog="mollify", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"mollify {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--csv", metavar="PATH", help="also write checks as CSV")
    common.add_argument("--config", metavar="PATH", help="key = value defaults")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    subs = {}

    p = sub.add_parser("optimize", parents=[common], help="zero bound at or near given parameters")
    p.add_argument("--theta", type=_rational, required=True, help="p/q literal")
    p.add_argument("--upsilon", type=float)
    p.add_argument("--ctilde", type=float)
    p.add_argument("--guard", type=float, default=1e-10)
    p.add_argument("--search", action="store_true", help="grid search plus simplex polish")
    p.add_argument("--polish", type=int, default=200, help="polish iterations")
    subs["optimize"] = p

    p = sub.add_parser("exponents", parents=[common], help="exact exponent identities")
    p.add_argument("--theta", type=_rational, required=True)
    subs["exponents"] = p

    p = sub.add_parser("verify-euler", parents=[common], help="local factor certification")
    p.add_argument("--class", dest="prime_class", default="all",
                   choices=("split", "ramified", "at_q", "all"))
    p.add_argument("--equal-uv", action="store_true", help="also rerun with U = V")
    subs["verify-euler"] = p

    p = sub.add_parser("kloosterman", parents=[common], help="Weil bound sweep")
    p.add_argument("--max-c", type=int, default=300)
    p.add_argument("--max-mn", type=int, default=20)
    subs["kloosterman"] = p

    p = sub.add_parser("selberg", parents=[common], help="zero-counting identity on random cases")
    p.add_argument("--cases", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    subs["selberg"] = p

    p = sub.add_parser("eval-v", parents=[common], help="evaluate V(u, v)")
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--upsilon", type=float, required=True)
    subs["eval-v"] = p
    return parser, subs


def read_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _apply_config(sub_parser: argparse.ArgumentParser, cfg: dict) -> None:
    # keys may name the destination or the long option (dashes read as underscores)
    actions = {}
    for a in sub_parser._actions:
        if a.dest == "help":
            continue
        actions[a.dest] = a
        for opt in a.option_strings:
            if opt.startswith("--"):
                actions[opt[2:].replace("-", "_")] = a
    for key, value in cfg.items():
        if key not in actions or actions[key].dest in ("config", "csv"):
            raise UsageError(f"unknown config key {key!r}")
        action = actions[key]
        if isinstance(action, argparse._StoreTrueAction):
            low = value.lower()
            if low not in _TRUE | _FALSE:
                raise UsageError(f"config key {key!r} expects a boolean")
            action.default = low in _TRUE
        else:
            action.default = value      # converted by argparse like a CLI string
        action.required = False


def _prescan(argv) -> tuple[str | None, str | None]:
    # the config has to be applied before required flags are enforced
    command = next((a for a in argv if a in COMMANDS), None)
    config = None
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            config = argv[i + 1]
        elif a.startswith("--config="):
            config = a.split("=", 1)[1]
    return command, config


def _parse(argv) -> argparse.Namespace:
    parser, subs = build_parser()
    command, config = _prescan(argv)
    if command and config:
        _apply_config(subs[command], read_config(config))
    return parser.parse_args(argv)


def _write_csv(path: str, checks: list) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["check_id", "inputs", "value", "expected", "pass"])
        for c in checks:
            writer.writerow([c["check_id"], json.dumps(_jsonable(c["inputs"])),
                             json.dumps(_jsonable(c["value"])),
                             json.dumps(_jsonable(c["expected"])), c["pass"]])


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = _parse(argv)
    except UsageError as exc:
        print(f"mollify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:            # --help / --version
        return int(exc.code or 0)
    except OSError as exc:
        print(f"mollify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    params = {k: v for k, v in vars(args).items() if k not in ("command",)}
    start = time.perf_counter()
    try:
        result, checks = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"mollify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MollifyError, ValueError, TypeError) as exc:
        print(f"mollify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    elapsed = time.perf_counter() - start

    ok = all(c["pass"] for c in checks)
    report = {"tool": "mollify", "version": __version__, "command": args.command,
              "params": params, "wall_time": elapsed, "ok": ok,
              "result": result, "checks": checks}
    print(json.dumps(_jsonable(report), indent=2, sort_keys=True))
    if args.csv:
        _write_csv(args.csv, checks)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
