"""Command-line drivers for the hidden shift algorithms.

Every command prints one ``key=value`` line per run, or a JSON document with
``--json``. Output is a pure function of the parameters, the seed and the
library version; ``--timing`` adds wall-clock time and gives that up.

Seeding: the master seed (``--seed``, else ``$CHARSHIFT_SEED``, else 0) feeds
``numpy.random.SeedSequence``; trial ``i`` uses ``SeedSequence(seed).spawn(T)[i]``
with numpy's default PCG64 generator, so any trial can be replayed alone.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .errors import CapacityError, CharShiftError, DomainError, PromiseViolation, ShiftMiss, UnresolvedError
from .finfield import MultCharFF, field_make
from .homocrypt import MAX_RETRIES, break_cryptosystem, homo_new
from .oracles import brute_force_shift, is_coset, run_suite
from .qsim import GroupSpec
from .ringchar import RingChar
from .shiftalgos import (
    HcpInstance,
    ShiftInstanceFF,
    cyclic_group,
    field_group,
    ring_shift_values,
    solve_hidden_coset,
    solve_shift_ff,
    solve_shift_ring,
    solve_shift_unknown_n,
)

SCHEMA = "charshift.report/1"

EXIT_OK, EXIT_PARAM, EXIT_VERIFY, EXIT_CAPACITY = 0, 2, 3, 4


def trial_rngs(seed: int, trials: int) -> list[np.random.Generator]:
    return [np.random.default_rng(ss) for ss in np.random.SeedSequence(seed).spawn(trials)]


def _jsonable(value):
    if isinstance(value, complex):
        return [float(f"{value.real:.17g}"), float(f"{value.imag:.17g}")]
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (set, frozenset)):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


def emit(report: dict, as_json: bool, out=None):
    out = out or sys.stdout
    report = _jsonable(report)
    if as_json:
        out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
        return
    flat = {k: v for k, v in report.items() if k not in ("schema", "params")}
    flat.update(report.get("params", {}))
    out.write(" ".join(f"{k}={json.dumps(v, separators=(',', ':'), sort_keys=True)}" for k, v in flat.items()) + "\n")


def _base(args, command: str, params: dict) -> dict:
    return {"schema": SCHEMA, "version": __version__, "command": command, "params": params,
            "seed": args.seed, "mode": getattr(args, "mode", None)}


def _ring_char(n: int, text: str) -> RingChar:
    if text in ("quadratic", "2-torsion", "jacobi"):
        return RingChar.quadratic(n)
    try:
        return RingChar(n, [int(k) for k in text.split(",")])
    except ValueError:
        raise DomainError(f"cannot parse character {text!r}; use 'quadratic' or k1,k2,...") from None


def _pick_shift(args, dim: int) -> int:
    if args.shift is not None:
        if not 0 <= args.shift < dim:
            raise DomainError(f"shift {args.shift} outside [0, {dim})")
        return args.shift
    return int(np.random.default_rng(np.random.SeedSequence([args.seed, 0xFEED])).integers(dim))


def _sampled_trials(run, trials: int, seed: int, truth) -> dict:
    """Run ``run(rng)`` per trial; a trial succeeds when it returns ``truth``."""
    hits, misses, wrong = 0, 0, 0
    for rng in trial_rngs(seed, trials):
        try:
            found = run(rng)
        except ShiftMiss:
            misses += 1
            continue
        if found == truth:
            hits += 1
        else:
            wrong += 1
    return {"trials": trials, "successes": hits, "misses": misses, "wrong": wrong,
            "empirical_success": hits / trials}


def cmd_solve_ff(args) -> dict:
    ctx = field_make(args.p, args.r)
    shift = _pick_shift(args, ctx.q)
    inst = ShiftInstanceFF.make(ctx, args.char_index, shift)
    theory = (1 - Fraction(1, ctx.q)) ** 2
    report = _base(args, "solve-ff", {"p": args.p, "r": args.r, "char_index": args.char_index, "shift": shift})
    truth = brute_force_shift(inst.f, inst.chi.values(), field_group(ctx))
    if args.mode == "exact":
        sol, prob = solve_shift_ff(inst)
        report.update(solution=sol.solution_set, success_probability=prob, theoretical_probability=theory,
                      verified=sol.solution_set == truth)
    else:
        stats = _sampled_trials(lambda rng: solve_shift_ff(inst, "sampled", rng)[0].solution_set,
                                args.trials, args.seed, truth)
        sigma = math.sqrt(float(theory) * (1 - float(theory)) / args.trials)
        report.update(solution=truth, theoretical_probability=theory, sigma=sigma,
                      within_3sigma=abs(stats["empirical_success"] - float(theory)) <= 3 * sigma, **stats)
        report["verified"] = report["within_3sigma"]
    return report


def cmd_solve_ring(args) -> dict:
    chi = _ring_char(args.n, args.char)
    shift = _pick_shift(args, args.n)
    f = ring_shift_values(chi, shift)
    group = cyclic_group(args.n)
    truth = brute_force_shift(f, chi.values(), group)
    ell = chi.period
    theory = Fraction(chi.n - sum(1 for x in range(chi.n) if math.gcd(x, chi.n) != 1), chi.n) \
        * Fraction(sum(1 for x in range(ell) if math.gcd(x, ell) == 1), ell) ** 2
    report = _base(args, "solve-ring", {"n": args.n, "char": list(chi.indices), "shift": shift})
    if args.mode == "exact":
        sol, prob = solve_shift_ring(chi, f)
        report.update(solution=sol.solution_set, period=sol.period, subgroup=sol.subgroup,
                      success_probability=prob, theoretical_probability=theory,
                      verified=sol.solution_set == truth and is_coset(sol.solution_set, sol.subgroup, group))
    else:
        stats = _sampled_trials(lambda rng: solve_shift_ring(chi, f, "sampled", rng)[0].solution_set,
                                args.trials, args.seed, truth)
        report.update(solution=truth, period=ell, theoretical_probability=theory, **stats)
        report["verified"] = stats["wrong"] == 0
    return report


def cmd_solve_unknown_n(args) -> dict:
    chi = _ring_char(args.n, args.char)
    shift = _pick_shift(args, args.n)
    f = lambda x: chi((x + shift) % chi.n)
    g = lambda x: chi(x % chi.n)
    sol = solve_shift_unknown_n(f, g, args.bound, args.eps, np.random.default_rng(args.seed))
    truth = brute_force_shift(ring_shift_values(chi, shift)[: sol.period], chi.values()[: sol.period],
                              cyclic_group(sol.period)) if chi.period == sol.period else frozenset()
    report = _base(args, "solve-unknown-n", {"n": args.n, "char": list(chi.indices), "shift": shift,
                                              "bound": args.bound, "eps": args.eps})
    report.update(period=sol.period, solution=sol.solution_set, verified=sol.solution_set == truth)
    return report


def hcp_preset(name: str) -> tuple[GroupSpec, np.ndarray]:
    """Known functions for the hidden coset command."""
    if name == "z8":
        # spectrum on the odd frequencies only: alpha = 3/4, beta = 1/2
        h = np.array([0, 1j, np.exp(-1j * np.pi / 4), 1])
        x = np.arange(8)
        return GroupSpec.cyclic(8), np.exp(2j * np.pi * x / 8) * h[x % 4]
    if name == "z4xz4":
        # chirp w_4**(x1*x2): flat spectrum, alpha = beta = 1
        group = GroupSpec.product([4, 4])
        c = group.coords(group.elements())
        return group, np.exp(2j * np.pi * (c[:, 0] * c[:, 1] % 4) / 4)
    if name.startswith("ring:"):
        n = int(name.split(":", 1)[1])
        return GroupSpec.cyclic(n), RingChar.quadratic(n).values()
    raise DomainError(f"unknown preset {name!r}")


def cmd_solve_hcp(args) -> dict:
    group, g = hcp_preset(args.preset)
    shift = _pick_shift(args, group.dim)
    inst = HcpInstance.make(group, g, shift)
    truth = brute_force_shift(inst.f, g, group)
    alpha = Fraction(int((np.abs(g) > 1e-9).sum()), group.dim)
    beta = Fraction(int((np.abs(group.transform(g)) > 1e-9).sum()), group.dim)
    report = _base(args, "solve-hcp", {"preset": args.preset, "shift": shift})
    if args.mode == "exact":
        sol, prob = solve_hidden_coset(inst)
        report.update(solution=sol.solution_set, success_probability=prob, alpha=alpha, beta=beta,
                      theoretical_probability=alpha * beta, verified=sol.solution_set == truth)
    else:
        stats = _sampled_trials(lambda rng: solve_hidden_coset(inst, "sampled", rng)[0].solution_set,
                                args.trials, args.seed, truth)
        report.update(solution=truth, alpha=alpha, beta=beta, theoretical_probability=alpha * beta, **stats)
        report["verified"] = stats["wrong"] == 0
    return report


def cmd_break_homo(args) -> dict:
    secret = args.secret
    if secret is None:
        secret = int(np.random.default_rng(np.random.SeedSequence([args.seed, 0xC0DE])).integers(args.p))
    oracle, es = homo_new(args.p, secret, seed=args.seed)
    result = break_cryptosystem(oracle, es, args.mode, seed=args.seed, max_retries=args.retries)
    report = _base(args, "break-homo", {"p": args.p, "retries": args.retries})
    report.update(recovered=result.secret, verified=result.secret == secret % args.p, attempts=result.attempts,
                  oracle_calls=result.oracle_calls, simulated_calls=result.simulated_calls,
                  logical_queries=result.logical_queries, max_call_cost=result.max_call_cost,
                  call_cost_bound=8 * math.log2(args.p))
    return report


def cmd_gauss_table(args) -> dict:
    if args.n is not None:
        chi = _ring_char(args.n, args.char)
        group, values = cyclic_group(args.n), chi.values()
        conj_chi = np.conj(values)
        params = {"n": args.n, "char": list(chi.indices), "primitive": chi.is_primitive()}
    else:
        ctx = field_make(args.p, args.r)
        chi = MultCharFF(ctx, args.k)
        if chi.is_trivial:
            raise DomainError("the trivial character has no Gauss-sum identity")
        group, values = field_group(ctx), chi.values()
        conj_chi = np.conj(values)
        params = {"p": args.p, "r": args.r, "k": args.k}
    spectrum = group.transform(values)
    residual = float(np.max(np.abs(spectrum - conj_chi * spectrum[1])))
    report = _base(args, "gauss-table", params)
    report.pop("mode")
    report.update(chi_hat=[complex(v) for v in spectrum], chi_hat_1_magnitude=float(abs(spectrum[1])),
                  residual=residual, verified=residual < 1e-9)
    return report


def cmd_verify(args) -> dict:
    reports = run_suite(args.seed)
    out = _base(args, "verify", {})
    out.pop("mode")
    out.update(checks=[r.line() for r in reports], verified=all(r.passed for r in reports))
    return out


def build_parser() -> argparse.ArgumentParser:
    env_seed = os.environ.get("CHARSHIFT_SEED")
    parser = argparse.ArgumentParser(prog="charshift", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=int(env_seed) if env_seed else 0)
    common.add_argument("--json", action="store_true", help="emit a full JSON document")
    common.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    modes = argparse.ArgumentParser(add_help=False)
    modes.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    modes.add_argument("--trials", type=int, default=1)
    shifts = argparse.ArgumentParser(add_help=False)
    grp = shifts.add_mutually_exclusive_group()
    grp.add_argument("--shift", type=int)
    grp.add_argument("--random-shift", action="store_true")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("solve-ff", parents=[common, modes, shifts], help="shifted character over F_q")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--char-index", type=int, required=True)
    p.set_defaults(func=cmd_solve_ff)

    p = sub.add_parser("solve-ring", parents=[common, modes, shifts], help="shifted character over Z_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--char", default="quadratic", help="'quadratic' (alias 2-torsion, jacobi) or k1,k2,...")
    p.set_defaults(func=cmd_solve_ring)

    p = sub.add_parser("solve-unknown-n", parents=[common, shifts], help="shifted character, n hidden")
    p.add_argument("--n", type=int, required=True, help="hidden modulus used to build the oracle")
    p.add_argument("--char", default="quadratic")
    p.add_argument("--bound", type=int, required=True, help="upper bound N on the period")
    p.add_argument("--eps", type=float, default=0.1)
    p.set_defaults(func=cmd_solve_unknown_n, mode="sampled")

    p = sub.add_parser("solve-hcp", parents=[common, modes, shifts], help="hidden coset by deconvolution")
    p.add_argument("--preset", default="z8", help="z8, z4xz4 or ring:<odd n>")
    p.set_defaults(func=cmd_solve_hcp)

    p = sub.add_parser("break-homo", parents=[common], help="recover E(s) through A, M, Z")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--secret", type=int)
    p.add_argument("--mode", choices=["exact", "sampled"], default="sampled")
    p.add_argument("--retries", type=int, default=MAX_RETRIES)
    p.set_defaults(func=cmd_break_homo)

    p = sub.add_parser("gauss-table", parents=[common], help="character spectrum and Gauss-sum identity")
    p.add_argument("--p", type=int)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--char", default="quadratic")
    p.set_defaults(func=cmd_gauss_table)

    p = sub.add_parser("verify", parents=[common], help="run the brute-force oracle suite")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be positive")
    if args.command == "gauss-table" and args.n is None and (args.p is None or args.k is None):
        parser.error("gauss-table needs --n, or --p and --k")
    start = time.perf_counter()
    try:
        report = args.func(args)
    except (DomainError, PromiseViolation) as exc:
        print(f"charshift: error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except CapacityError as exc:
        print(f"charshift: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (UnresolvedError, CharShiftError) as exc:
        print(f"charshift: unresolved: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    if args.timing:
        report["wall_time"] = time.perf_counter() - start
    emit(report, args.json)
    return EXIT_OK if report.get("verified", True) else EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
