"""Command-line driver for the toolkit.

Subcommands map onto the library modules: integral tables, envelope
computation, zero counting, distribution search, Riccati separatrices,
series coefficients, simulation, the identity suite, Darboux verification,
and the small-amplitude constructions.  Machine-readable output goes to
CSV (17 significant digits) and optionally JSON; results are deterministic
for a fixed seed.

Exit codes: 0 success, 1 computation / verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

DEFAULT_TOL = 1e-9
TOL_ENV_VAR = "EIGHTLOOP_TOL"


def _tol(args) -> float:
    if args.tol is not None:
        return args.tol
    env = os.environ.get(TOL_ENV_VAR)
    return float(env) if env else DEFAULT_TOL


class CliError(Exception):
    """Computation-level failure (exit code 1)."""


def read_coeff_file(path: str):
    """Parse a flat key-value coefficient file (`a10 = 1.0` per line)."""
    from .hamiltonian import PerturbationCoeffs

    entries = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CliError(f"{path}:{lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            key = key.strip()
            try:
                entries[key] = float(val.strip())
            except ValueError:
                raise CliError(f"{path}:{lineno}: bad number {val.strip()!r}")
    try:
        return PerturbationCoeffs.from_dict(entries)
    except (KeyError, ValueError) as exc:
        raise CliError(f"{path}: {exc}")


def _parse_grid(spec: str):
    try:
        lo, hi, n = spec.split(":")
        grid = np.linspace(float(lo), float(hi), int(n))
    except ValueError:
        raise CliError(f"bad grid spec {spec!r}, expected lo:hi:n")
    return grid


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def write_outputs(args, header, rows, extra=None):
    """Print a table and mirror it to CSV/JSON when requested."""
    widths = [max(len(h), 12) for h in header]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for row in rows:
        print("  ".join(_fmt(v).ljust(w) for v, w in zip(row, widths)))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
    if args.json:
        payload = {"columns": list(header),
                   "rows": [[_fmt(v) for v in row] for row in rows]}
        if extra:
            payload.update(extra)
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def cmd_integrals(args) -> int:
    from .hamiltonian import OvalSpec
    from .quadrature import basic_integral

    if args.check:
        import math

        tol = _tol(args)
        errs = {
            "I0(0)": abs(basic_integral(0, OvalSpec(0.0)).value - 4.0 / 3.0),
            "I2(0)": abs(basic_integral(2, OvalSpec(0.0)).value - 16.0 / 15.0),
        }
        for h in np.linspace(-0.249, -0.001, 50):
            errs[f"I1({h:.3f})"] = abs(
                basic_integral(1, OvalSpec(h)).value
                - math.pi * math.sqrt(2.0) * (h + 0.25))
        worst = max(errs.values())
        print(f"integrals check: worst residual {worst:.3e} (tol {tol:g})")
        return 0 if worst <= tol else 1
    grid = _parse_grid(args.h_grid) if args.h_grid else [args.h]
    rows = []
    for h in grid:
        spec = OvalSpec(float(h))
        rows.append([h] + [basic_integral(k, spec).value
                           for k in range(args.kmax + 1)])
    write_outputs(args, ["h"] + [f"I{k}" for k in range(args.kmax + 1)], rows)
    return 0


def cmd_envelope(args) -> int:
    from . import melnikov as mk
    from .hamiltonian import Annulus, OvalSpec

    p = read_coeff_file(args.coeffs)
    maker = {1: mk.m1_envelope, 2: mk.m2_envelope,
             3: mk.m3_envelope, 4: mk.m4_envelope}[args.order]
    annulus = Annulus.LEFT if args.side == "left" else Annulus.RIGHT
    e = maker(p, annulus)
    print(f"order-{args.order} envelope ({args.side}):")
    for name, v in zip(("alpha0", "alpha1", "beta0", "beta1",
                        "gamma0", "gamma1"), e.coeffs()):
        print(f"  {name} = {_fmt(v)}")
    if args.h_grid:
        rows = [[h, mk.evaluate_envelope(e, OvalSpec(float(h)))]
                for h in _parse_grid(args.h_grid)]
        write_outputs(args, ["h", f"M{args.order}"], rows)
    return 0


def cmd_zeros(args) -> int:
    from . import melnikov as mk
    from . import zeros as zr
    from .hamiltonian import Annulus

    if args.check:
        import math

        rep = zr.count_zeros(lambda h: math.pi * math.sqrt(2) * (h + 0.25))
        ok = rep.count == 0
        env, _ = mk.derive_delta_ladder("FiveZero")
        rep2 = zr.count_zeros(zr.envelope_function(env))
        ok = ok and rep2.count == 5 and all(m == 1 for _, m in rep2.zeros)
        print(f"zeros check: I1 count {rep.count} (want 0), "
              f"FiveZero count {rep2.count} (want 5 simple)")
        return 0 if ok else 1
    if args.envelope:
        vals = [float(v) for v in args.envelope.split(",")]
        if len(vals) != 6:
            raise CliError("--envelope needs 6 comma-separated values")
        e = mk.Envelope(*vals, order=2)
    else:
        if not args.coeffs:
            raise CliError("need --coeffs or --envelope")
        e = mk.m2_envelope(read_coeff_file(args.coeffs))
    annulus = Annulus.LEFT if args.side == "left" else Annulus.RIGHT
    rep = zr.count_zeros(zr.envelope_function(e, annulus))
    rows = [[h, m] for h, m in rep.zeros]
    write_outputs(args, ["h", "multiplicity"], rows,
                  extra={"count": rep.count,
                         "count_with_multiplicity": rep.count_with_multiplicity})
    print(f"zeros: {rep.count} distinct, "
          f"{rep.count_with_multiplicity} with multiplicity")
    return 0


def cmd_distribution(args) -> int:
    from . import zeros as zr

    if args.search:
        try:
            tr, tl = (int(v) for v in args.search.split(","))
        except ValueError:
            raise CliError("--search needs R,L")
        res = zr.search_distribution((tr, tl), budget=args.budget,
                                     seed=args.seed)
        print(f"target ({tr},{tl}): achieved {res.achieved} "
              f"after {res.evaluations} evaluations")
        rows = [[v] for v in res.coeffs]
        write_outputs(args, ["coefficient"], rows,
                      extra={"achieved": list(res.achieved)})
        return 0 if res.success else 1
    if not args.coeffs:
        raise CliError("need --coeffs or --search")
    p = read_coeff_file(args.coeffs)
    right, left = zr.distribution(p)
    print(f"distribution: right {right.count}, left {left.count}")
    rows = ([[h, m, 0] for h, m in right.zeros]
            + [[h, m, 1] for h, m in left.zeros])
    write_outputs(args, ["h", "multiplicity", "is_left"], rows)
    return 0


def cmd_riccati(args) -> int:
    from . import riccati as rc

    sys_ = rc.SYSTEMS.get(args.system)
    if sys_ is None:
        raise CliError(f"unknown system {args.system!r}; "
                       f"choose from {sorted(rc.SYSTEMS)}")
    if args.check:
        rep = rc.check_geometry(sys_)
        grid = np.linspace(-0.24, -0.01, 24)
        sep = rc.separatrix(sys_, grid).value
        direct = [rc.ratio_from_integrals(sys_, h) for h in grid]
        worst = float(np.max(np.abs(sep - np.asarray(direct))))
        print(f"{sys_.name}: geometry ok={rep.ok} violations={rep.violations} "
              f"separatrix-vs-integrals {worst:.3e}")
        return 0 if rep.ok and worst <= 1e-6 else 1
    grid = _parse_grid(args.grid) if args.grid else \
        np.linspace(-0.249, -0.001, 200)
    curve = rc.separatrix(sys_, grid)
    write_outputs(args, ["h", sys_.name.lower()],
                  [[h, v] for h, v in zip(curve.h, curve.value)])
    return 0


def cmd_series(args) -> int:
    from . import picard_fuchs as pf

    if args.end == "center":
        se = pf.series_at_center(args.terms)
        header = ["k", "I0_coeff", "I2_coeff"]
        rows = [[k, float(a), float(c)]
                for k, (a, c) in enumerate(zip(se.coeffs_I0, se.coeffs_I2))]
        extra = {"rational_I0": [str(a) for a in se.coeffs_I0],
                 "rational_I2": [str(c) for c in se.coeffs_I2]}
    else:
        se = pf.series_at_zero(min(args.terms, 8))
        phi0, phi2 = se.log_coeffs
        n = max(len(se.coeffs_I0), len(phi0))

        def pick(t, k):
            return float(t[k]) if k < len(t) else 0.0

        header = ["k", "J0_analytic", "J0_log", "J2_analytic", "J2_log"]
        rows = [[k, pick(se.coeffs_I0, k), pick(phi0, k),
                 pick(se.coeffs_I2, k), pick(phi2, k)] for k in range(n)]
        extra = None
    write_outputs(args, header, rows, extra=extra)
    return 0


def cmd_simulate(args) -> int:
    from . import simulator as sim
    from .hamiltonian import Annulus

    p = read_coeff_file(args.coeffs)
    annulus = Annulus.LEFT if args.side == "left" else Annulus.RIGHT
    if args.find_cycles:
        findings = sim.find_limit_cycles(p, eps=args.eps, annulus=annulus)
        print(f"{len(findings)} limit cycle(s) at eps={args.eps:g} "
              f"({args.side})")
        rows = [[f.h_star, f.residual, 1.0 if f.stability == "stable" else 0.0]
                for f in findings]
        write_outputs(args, ["h_star", "residual", "stable"], rows)
        return 0
    grid = _parse_grid(args.h_grid) if args.h_grid else [args.h]
    rows = []
    for h in grid:
        s = sim.displacement_map(float(h), p, args.eps, annulus)
        rows.append([s.h, s.eps, s.d, s.return_time])
    write_outputs(args, ["h", "eps", "d", "return_time"], rows)
    return 0


def cmd_identities(args) -> int:
    from .identities import verify_all

    tol = max(_tol(args), 1e-8)
    table = verify_all()
    rows = [[i, r] for i, (_, r) in enumerate(sorted(table.items()))]
    worst = max(table.values())
    for ident in sorted(table):
        status = "pass" if table[ident] <= tol else "FAIL"
        print(f"{ident:7s} residual {table[ident]:.3e}  {status}")
    if args.out or args.json:
        write_outputs(args, ["index", "residual"], rows,
                      extra={"identities": sorted(table)})
    return 0 if worst <= tol else 1


def cmd_darboux(args) -> int:
    from . import simulator as sim

    if args.example:
        from .hamiltonian import PerturbationCoeffs
        from .melnikov import darboux_parameters

        p = PerturbationCoeffs.from_dict({
            "a00": 1.0, "a20": -1.0, "a01": 10.0, "a21": 2.0,
            "b10": 1.0, "b30": -1.0, "b11": 2.0, "b12": 4.0})
        dx = darboux_parameters(p, 1.0)
        saddle = dx.value(0.0, -1.0 / 11.0)
        loop_level = (5 + 1.0 / 11.0) ** 2 / (2 + 1.0 / 11.0 - 1.0 / 121.0)
        resid = sim.darboux_residual(p, 1.0, seed=args.seed)
        print(f"example: H1(0,-1/11) = {_fmt(saddle)} "
              f"(loop level {_fmt(loop_level)}), "
              f"gradient residual {resid:.3e}")
        ok = abs(saddle - loop_level) < 1e-10 and resid <= 1e-12
        return 0 if ok else 1
    p = read_coeff_file(args.coeffs)
    resid = sim.darboux_residual(p, args.eps, seed=args.seed)
    print(f"darboux gradient residual: {resid:.3e}")
    return 0 if resid <= 1e-10 else 1


_TARGET_ALIASES = {"5+0": "FiveZero", "4+1": "FourOne", "3+3": "ThreeThree",
                   "FiveZero": "FiveZero", "FourOne": "FourOne",
                   "ThreeThree": "ThreeThree"}


def cmd_theorem4(args) -> int:
    from . import melnikov as mk
    from . import zeros as zr
    from .hamiltonian import Annulus

    target = _TARGET_ALIASES.get(args.target)
    if target is None:
        raise CliError(f"unknown target {args.target!r}")
    base, _ = mk.theorem4_construction(target)
    print(f"{target} base parameters:")
    for name, v in zip(("alpha0", "alpha1", "beta0", "beta1",
                        "gamma0", "gamma1"), base.coeffs()):
        print(f"  {name} = {_fmt(v)}")
    env, deltas = mk.derive_delta_ladder(target)
    right = zr.count_zeros(zr.envelope_function(env, Annulus.RIGHT))
    left = zr.count_zeros(zr.envelope_function(env, Annulus.LEFT))
    print(f"delta ladder: {[f'{d:.6e}' for d in deltas]}")
    print(f"envelope zero counts: right {right.count}, left {left.count}")
    rows = [[h, m, 0] for h, m in right.zeros] \
        + [[h, m, 1] for h, m in left.zeros]
    write_outputs(args, ["h", "multiplicity", "is_left"], rows)
    if args.simulate:
        from . import simulator as sim

        p = mk.realize_m2(env)
        nr = len(sim.find_limit_cycles(p, args.eps, Annulus.RIGHT))
        nl = len(sim.find_limit_cycles(p, args.eps, Annulus.LEFT))
        print(f"simulator at eps={args.eps:g}: {nr} right, {nl} left")
        want = mk._T4_COUNTS[target]
        return 0 if (nr, nl) == want else 1
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="eightloop",
        description="numerical toolkit for cubic perturbations of the "
                    "figure-eight Hamiltonian")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="CSV output path")
        sp.add_argument("--json", help="JSON output path")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", type=float, default=None,
                        help=f"tolerance (or set ${TOL_ENV_VAR})")
        sp.add_argument("--check", action="store_true",
                        help="run the module invariant checks instead")

    sp = sub.add_parser("integrals", help="basic integral tables")
    sp.add_argument("--h", type=float, default=-0.1)
    sp.add_argument("--h-grid")
    sp.add_argument("--kmax", type=int, default=2)
    common(sp)
    sp.set_defaults(fn=cmd_integrals)

    sp = sub.add_parser("envelope", help="Melnikov envelope of a perturbation")
    sp.add_argument("--order", type=int, choices=(1, 2, 3, 4), default=2)
    sp.add_argument("--coeffs", required=True)
    sp.add_argument("--side", choices=("right", "left"), default="right")
    sp.add_argument("--h-grid")
    common(sp)
    sp.set_defaults(fn=cmd_envelope)

    sp = sub.add_parser("zeros", help="zero count of an envelope")
    sp.add_argument("--coeffs")
    sp.add_argument("--envelope", help="a0,a1,b0,b1,g0,g1")
    sp.add_argument("--side", choices=("right", "left"), default="right")
    common(sp)
    sp.set_defaults(fn=cmd_zeros)

    sp = sub.add_parser("distribution", help="(right, left) zero counts")
    sp.add_argument("--coeffs")
    sp.add_argument("--search", help="target R,L")
    sp.add_argument("--budget", type=int, default=2000)
    common(sp)
    sp.set_defaults(fn=cmd_distribution)

    sp = sub.add_parser("riccati", help="ratio separatrices")
    sp.add_argument("--system", default="Nu")
    sp.add_argument("--grid")
    common(sp)
    sp.set_defaults(fn=cmd_riccati)

    sp = sub.add_parser("series", help="series coefficients at interval ends")
    sp.add_argument("--end", choices=("center", "zero"), default="center")
    sp.add_argument("--terms", type=int, default=20)
    common(sp)
    sp.set_defaults(fn=cmd_series)

    sp = sub.add_parser("simulate", help="displacement map / cycle search")
    sp.add_argument("--coeffs", required=True)
    sp.add_argument("--eps", type=float, default=1e-3)
    sp.add_argument("--h", type=float, default=-0.1)
    sp.add_argument("--h-grid")
    sp.add_argument("--side", choices=("right", "left"), default="right")
    sp.add_argument("--find-cycles", action="store_true")
    common(sp)
    sp.set_defaults(fn=cmd_simulate)

    sp = sub.add_parser("identities", help="on-cycle identity suite")
    common(sp)
    sp.set_defaults(fn=cmd_identities)

    sp = sub.add_parser("darboux", help="Darboux first-integral residuals")
    sp.add_argument("--coeffs")
    sp.add_argument("--eps", type=float, default=1e-2)
    sp.add_argument("--example", action="store_true",
                    help="verify the printed worked example")
    common(sp)
    sp.set_defaults(fn=cmd_darboux)

    sp = sub.add_parser("theorem4", help="small-amplitude constructions")
    sp.add_argument("--target", default="FiveZero",
                    help="FiveZero/FourOne/ThreeThree or 5+0/4+1/3+3")
    sp.add_argument("--eps", type=float, default=1e-3)
    sp.add_argument("--simulate", action="store_true")
    common(sp)
    sp.set_defaults(fn=cmd_theorem4)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:          # computation errors -> exit 1
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
