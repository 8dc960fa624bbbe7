"""Command-line front end.

Every subcommand prints a short text report, or with ``--json`` a flat
object ``{"N", "s", "p", "value", "err", "method", "checks"}``. Exit codes:
0 pass, 1 invalid input, 2 numerical failure, 3 a checked inequality failed.
"""

import argparse
import concurrent.futures
import csv
import json
import logging
import math
import os
import sys

import numpy as np

from . import constants, graph_gsr, inequalities, lorentz, radial, rearrangement
from .errors import ConvergenceFailure, HardyError, InvalidParams
from .params import make_params

log = logging.getLogger("fracthardy")

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_CONTRACT = 0, 1, 2, 3


class Report:
    def __init__(self, params=None, value=None, err=None, method=None):
        self.params = params
        self.value = value
        self.err = err
        self.method = method
        self.checks = []
        self.lines = []

    def check(self, name, delta, ok):
        self.checks.append({"name": name, "delta": float(delta), "pass": bool(ok)})

    def say(self, line):
        self.lines.append(line)

    @property
    def ok(self):
        return all(c["pass"] for c in self.checks)

    def as_dict(self):
        P = self.params
        return {
            "N": P.N if P else None,
            "s": P.s if P else None,
            "p": P.p if P else None,
            "value": self.value,
            "err": self.err,
            "method": self.method,
            "checks": self.checks,
        }

    def emit(self, as_json, out=None):
        out = out or sys.stdout
        if as_json:
            out.write(json.dumps(self.as_dict()) + "\n")
            return
        for line in self.lines:
            out.write(line + "\n")
        if self.value is not None and not self.lines:
            out.write(f"value = {self.value:.17g}\n")
        for c in self.checks:
            out.write(f"{c['name']}: delta = {c['delta']:.3e} [{'PASS' if c['pass'] else 'FAIL'}]\n")


def _params(a):
    return make_params(a.N, a.s, a.p)


def _float_or_inf(x):
    return math.inf if x.lower() in ("inf", "infinity") else float(x)


def _rng(a):
    return np.random.default_rng(a.seed)


# --- subcommands -----------------------------------------------------------


def cmd_constant(a):
    P = _params(a)
    rep = constants.hardy_constant(P, a.tol)
    R = Report(P, rep.value, rep.error_estimate, rep.method.value)
    R.say(f"C_{{{P.N},{P.s:g},{P.p:g}}} = {rep.value:.17g}  (err ~ {rep.error_estimate:.1e}, {rep.method.value})")
    scale = abs(rep.value)
    if P.p == 2.0:
        d = rep.value - constants.hardy_constant_p2(P)
        R.check("closed_form_p2", d, abs(d) <= 1e-8 * scale)
    if P.N == 1 and P.p == 1.0:
        d = rep.value - constants.hardy_constant_p1n1(P)
        R.check("closed_form_p1n1", d, abs(d) <= 1e-8 * scale)
    if a.crosscheck:
        d = rep.value - constants.hardy_constant_crosscheck(P).value
        R.check("radial_double_integral", d, abs(d) <= 1e-6 * scale)
    return R


def cmd_cp(a):
    if a.p < 2:
        raise InvalidParams("c_p is defined for p >= 2")
    c = constants.remainder_constant(a.p)
    R = Report(None, c, 0.0, "golden_section")
    R.say(f"c_{a.p:g} = {c:.17g}")
    tau = np.linspace(1e-6, 0.5 - 1e-6, 20001)
    d = float(np.min(inequalities.boundary_profile(tau, a.p))) - c
    R.check("grid_minimum_not_below", d, d >= -1e-10)
    return R


def cmd_phi(a):
    P = _params(a)
    v = constants.phi_kernel(P, a.r)
    R = Report(P, float(v), None, "graded_gauss_legendre")
    R.say(f"Phi({a.r:g}) = {float(v):.17g}")
    return R


def cmd_sharpness(a):
    P = _params(a)
    C = constants.hardy_constant(P).value
    rows = radial.sharpness_scan(P, a.n, a.m_factor, C=C)
    R = Report(P, C, None, "trial_functions")
    R.say("n,ratio,gap")
    for n, q, g in rows:
        R.say(f"{n},{q:.17g},{g:.17g}")
    gaps = [g for _, _, g in rows]
    R.check("ratios_above_C", min(gaps), min(gaps) > 0)
    dec = min((g0 - g1 for g0, g1 in zip(gaps, gaps[1:])), default=0.0)
    R.check("gaps_decreasing", dec, dec > 0)
    return R


def _load_radial(a):
    if a.file:
        return radial.read_radial_file(a.file)
    if a.radii and a.heights:
        return radial.step_function(a.radii, a.heights)
    raise InvalidParams("give --file or --radii/--heights")


def cmd_remainder_check(a):
    P = _params(a)
    u = _load_radial(a)
    lhs, rem = radial.remainder_check(P, u)
    R = Report(P, lhs, None, "radial_reduction")
    R.say(f"E - C*W = {lhs:.17g}")
    R.say(f"c_p * remainder = {rem:.17g}")
    R.check("lhs_ge_remainder", lhs - rem, lhs >= rem * (1 - 1e-4))
    if P.p == 2.0:
        d = lhs - rem
        R.check("p2_equality", d, abs(d) <= 1e-5 * max(abs(lhs), abs(rem)))
    return R


def cmd_graph_check(a):
    if a.file:
        g, omega, u = graph_gsr.read_graph_file(a.file)
    else:
        g, omega, u = graph_gsr.random_instance(a.random, _rng(a))
    rep = graph_gsr.gsr_identity(g, omega, u, a.p)
    R = Report(None, rep.energy, None, "graph_gsr")
    rel = abs(rep.residual) / rep.scale
    ok = rel < 1e-10
    R.say(f"energy = {rep.energy:.17g}, phi_sum = {rep.phi_sum:.17g}, potential = {rep.potential_term:.17g}")
    R.say(f"identity {'OK' if ok else 'FAILED'} (rel err {'<' if ok else '='} {1e-10 if ok else rel:.0e})")
    R.check("identity", rel, ok)
    R.check("phi_nonneg", rep.phi_min, rep.phi_min >= -1e-12 * rep.scale)
    if a.p >= 2:
        gap = graph_gsr.gsr_remainder_gap(g, omega, u, a.p)
        R.check("remainder_gap", gap, gap >= -1e-10 * rep.scale)
    return R


def cmd_jacobi_check(a):
    rng = _rng(a)
    omega = np.array(a.omega) if a.omega else np.exp(rng.uniform(np.log(0.1), np.log(10.0), a.n))
    u = np.array(a.u) if a.u else rng.normal(size=a.n)
    rep = graph_gsr.jacobi_case(len(omega), omega, u)
    R = Report(None, rep.energy, None, "jacobi")
    rel = abs(rep.residual) / rep.scale
    R.say(f"E = {rep.energy:.17g} = phi_sum {rep.phi_sum:.17g} + potential {rep.potential_term:.17g}")
    R.check("identity", rel, rel <= 1e-12)
    return R


def _kernel(text):
    kind, _, val = text.partition(":")
    if kind == "power":
        return rearrangement.PowerKernel(float(val or 1.5))
    if kind == "geom":
        return rearrangement.GeometricKernel(float(val or 0.5))
    raise InvalidParams(f"unknown kernel {text!r}")


_JS = {"abs": rearrangement.J_ABS, "square": rearrangement.J_SQUARE,
       "cube": rearrangement.J_CUBE, "asym": rearrangement.J_ASYM}


def cmd_rearrange_check(a):
    k = _kernel(a.kernel)
    Js = list(_JS) if a.J == "all" else [a.J]
    R = Report(None, None, None, "lattice_rearrangement")
    if a.exhaustive:
        M, maxval = a.exhaustive
        for name in Js:
            good, total, gmin = rearrangement.exhaustive_sweep(M, maxval, k, _JS[name])
            R.say(f"J={name}: {good}/{total} nonneg gaps (min gap {gmin:.3e})")
            R.check(f"sweep_{name}", gmin, good == total)
    else:
        if not a.file:
            raise InvalidParams("give --exhaustive M MAXVAL or --file")
        vals = np.loadtxt(a.file, ndmin=1)
        u = rearrangement.GridFunction1D(tuple(vals))
        for name in Js:
            gap = rearrangement.rearrangement_gap(u, k, _JS[name])
            scale = max(1.0, rearrangement.lattice_energy(u, k, _JS[name]))
            R.say(f"J={name}: gap = {gap:.17g}")
            R.check(f"gap_{name}", gap, gap >= -1e-12 * scale)
    return R


def _load_steps(a):
    u = _load_radial(a)
    if any(c != 0.0 for c, _, _ in u.pieces):
        raise InvalidParams("Lorentz norms need a step function (c = 0 in every piece)")
    return lorentz.StepRadialFunction(u.breakpoints[1:], tuple(d for _, _, d in u.pieces))


def cmd_lorentz(a):
    u = _load_steps(a)
    r = _float_or_inf(a.r)
    v = lorentz.lorentz_norm(u, a.N, a.q, r)
    R = Report(None, v, 0.0, "exact_layer_sum")
    R.say(f"||u||_({a.q:g},{a.r}) = {v:.17g}")
    return R


def cmd_symmdecr_check(a):
    P = _params(a)
    u = _load_steps(a)
    gap = lorentz.symmdecr_identity_gap(P, u)
    scale = lorentz.lorentz_norm(u, P.N, P.p_star, P.p)
    R = Report(P, gap, 0.0, "exact_layer_sum")
    R.check("symmdecr_identity", gap, abs(gap) <= 1e-10 * scale)
    return R


def cmd_isoperimetric_check(a):
    P = make_params(a.N, a.s, 1.0)
    lhs, rhs = radial.isoperimetric_check(P, a.R)
    R = Report(P, rhs, None, "radial_reduction")
    R.say(f"|B_R|^((N-s)/N) = {lhs:.17g}")
    R.say(f"rhs             = {rhs:.17g}")
    R.check("ball_equality", rhs - lhs, abs(rhs - lhs) <= 1e-5 * lhs)
    return R


def cmd_gaussian_check(a):
    P = _params(a)
    gap = lorentz.gaussian_decomposition_gap(P, a.z)
    m = 0.5 * (P.N + P.ps)
    scale = math.gamma(m) * a.z ** (-2 * m)
    R = Report(P, gap, None, "adaptive_quadrature")
    R.check("gaussian_identity", gap, abs(gap) <= 1e-8 * scale)
    return R


def _table_cell(cell):
    N, s, p, tol = cell
    P = make_params(N, s, p)
    rep = constants.hardy_constant(P, tol)
    return N, s, p, rep.value, rep.error_estimate, rep.method.value


def cmd_table(a):
    cells, skipped = [], []
    for N in a.N:
        for s in a.s:
            for p in a.p:
                if abs(N - p * s) < 1e-12:
                    skipped.append((N, s, p))
                    log.warning("skipping N=%s s=%s p=%s: p = N/s", N, s, p)
                else:
                    cells.append((N, s, p, a.tol))
    threads = int(os.environ.get("HARDY_THREADS", "1") or 1)
    out = sys.stdout
    writer = csv.writer(out, lineterminator="\n")
    if a.format == "csv":
        writer.writerow(["N", "s", "p", "value", "err", "method"])
    ex = concurrent.futures.ProcessPoolExecutor(threads) if threads > 1 else None
    results = ex.map(_table_cell, cells) if ex else map(_table_cell, cells)
    try:
        for N, s, p, v, e, m in results:
            if a.format == "csv":
                writer.writerow([N, repr(s), repr(p), f"{v:.17g}", f"{e:.17g}", m])
            else:
                out.write(json.dumps({"N": N, "s": s, "p": p, "value": v, "err": e,
                                      "method": m, "checks": []}) + "\n")
            out.flush()
    finally:
        if ex:
            ex.shutdown(cancel_futures=True)
    for N, s, p in skipped:
        print(f"skipped N={N} s={s!r} p={p!r} (p = N/s)", file=sys.stderr)
    return None


# --- parser ----------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-10, help="relative tolerance")
    common.add_argument("--json", action="store_true", help="emit one JSON object")
    common.add_argument("--seed", type=int, default=0)

    nsp = argparse.ArgumentParser(add_help=False)
    nsp.add_argument("--N", type=int, required=True)
    nsp.add_argument("--s", type=float, required=True)
    nsp.add_argument("--p", type=float, required=True)

    radial_in = argparse.ArgumentParser(add_help=False)
    radial_in.add_argument("--file", help="radial function file ('break r' / 'piece c beta d')")
    radial_in.add_argument("--radii", type=float, nargs="+")
    radial_in.add_argument("--heights", type=float, nargs="+")

    ap = argparse.ArgumentParser(prog="fracthardy", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("constant", parents=[common, nsp], help="sharp Hardy constant")
    sp.add_argument("--crosscheck", action="store_true", help="also run the double integral")
    sp.set_defaults(func=cmd_constant)

    sp = sub.add_parser("cp", parents=[common], help="remainder constant c_p")
    sp.add_argument("--p", type=float, required=True)
    sp.set_defaults(func=cmd_cp)

    sp = sub.add_parser("phi", parents=[common, nsp], help="angular kernel Phi(r)")
    sp.add_argument("--r", type=float, required=True)
    sp.set_defaults(func=cmd_phi)

    sp = sub.add_parser("sharpness", parents=[common, nsp], help="trial-function quotients")
    sp.add_argument("--n", type=int, nargs="+", default=[10, 100, 1000])
    sp.add_argument("--m-factor", type=float, default=10.0, help="m = factor * n when N < ps")
    sp.set_defaults(func=cmd_sharpness)

    sp = sub.add_parser("remainder-check", parents=[common, nsp, radial_in], help="Hardy gap versus ground state remainder (p >= 2)")
    sp.set_defaults(func=cmd_remainder_check)

    sp = sub.add_parser("graph-check", parents=[common], help="ground state identity on a finite graph")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--file")
    g.add_argument("--random", type=int, metavar="n")
    sp.add_argument("--p", type=float, default=2.0)
    sp.set_defaults(func=cmd_graph_check)

    sp = sub.add_parser("jacobi-check", parents=[common], help="p = 2 identity on a path graph")
    sp.add_argument("--n", type=int, default=20)
    sp.add_argument("--omega", type=float, nargs="+")
    sp.add_argument("--u", type=float, nargs="+")
    sp.set_defaults(func=cmd_jacobi_check)

    sp = sub.add_parser("rearrange-check", parents=[common], help="lattice rearrangement gaps")
    sp.add_argument("--exhaustive", type=int, nargs=2, metavar=("M", "MAXVAL"))
    sp.add_argument("--file", help="whitespace-separated values at sites -M..M")
    sp.add_argument("--kernel", default="power:1.5", help="power:EXP or geom:RATIO")
    sp.add_argument("--J", default="all", choices=["all"] + list(_JS))
    sp.set_defaults(func=cmd_rearrange_check)

    sp = sub.add_parser("lorentz", parents=[common, radial_in], help="Lorentz quasinorm of a radial step function")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--r", default="inf")
    sp.set_defaults(func=cmd_lorentz)

    sp = sub.add_parser("symmdecr-check", parents=[common, nsp, radial_in], help="Lorentz norm versus weighted L_p norm")
    sp.set_defaults(func=cmd_symmdecr_check)

    sp = sub.add_parser("isoperimetric-check", parents=[common], help="p = 1 ball equality")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--R", type=float, default=1.0)
    sp.set_defaults(func=cmd_isoperimetric_check)

    sp = sub.add_parser("gaussian-check", parents=[common, nsp], help="Gamma integral behind the kernel decomposition")
    sp.add_argument("--z", type=float, default=1.0)
    sp.set_defaults(func=cmd_gaussian_check)

    sp = sub.add_parser("table", parents=[common], help="constants over a parameter grid")
    sp.add_argument("--N", type=int, nargs="+", required=True)
    sp.add_argument("--s", type=float, nargs="+", required=True)
    sp.add_argument("--p", type=float, nargs="+", required=True)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.set_defaults(func=cmd_table)
    return ap


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        R = args.func(args)
    except ConvergenceFailure as exc:
        sys.stdout.flush()
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (HardyError, ValueError, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if R is None:
        return EXIT_OK
    R.emit(args.json)
    return EXIT_OK if R.ok else EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
