"""Command-line front end.

Subcommands: check-form, integrate, verify, sweep, cayley.  Options come
from flags or a JSON config document (flags win).  Exit codes: 0 ok,
1 usage, 2 invalid form, 3 incompatible/exceptional, 4 solver failure,
5 assertion failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys as _sys

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainError,
    Exceptional,
    Incompatible,
    LiouvintError,
    NoConvergence,
    NotExact,
    NotHamiltonian,
    NotSeparable,
    NotSymmetric,
    NotSymplectic,
    Singular,
)
from . import dynamics, forms, induced_map, linalg, verify
from .integrators import PRESETS, IntegratorSpec, integrate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID_FORM = 2
EXIT_INCOMPATIBLE = 3
EXIT_NO_CONVERGENCE = 4
EXIT_ASSERTION = 5


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(_sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="liouvint", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, system=False, run=False):
        p.add_argument("--config", help="JSON config document")
        p.add_argument("--family", help="phi | abg | named | matrix-S | from-symplectic | preset")
        p.add_argument("--param", help="family parameters, comma separated")
        p.add_argument("--n", type=int, help="degrees of freedom for form-only commands")
        p.add_argument("--seed", type=int, help="seed for any randomized input")
        p.add_argument("--out", help="output file path (CSV)")
        if system:
            p.add_argument("--system", help="harmonic | pendulum | kepler | linear | linear-random")
            p.add_argument("--z0", help="initial state, comma separated")
            p.add_argument("--h", type=float, help="step size")
        if run:
            p.add_argument("--steps", type=int, help="number of steps")
        p.add_argument("--plot", dest="plot", action="store_true", default=None,
                       help="render figures next to the CSV (default)")
        p.add_argument("--no-plot", dest="plot", action="store_false",
                       help="suppress figure rendering")

    p_check = sub.add_parser("check-form", help="validate a form and print its induced map")
    common(p_check)
    p_check.add_argument("--form", help="read a previously emitted form JSON")
    p_check.add_argument("--emit-form", help="write the validated form as JSON")

    p_int = sub.add_parser("integrate", help="run an integration and write the trajectory CSV")
    common(p_int, system=True, run=True)

    p_ver = sub.add_parser("verify", help="certify one method on one system")
    common(p_ver, system=True, run=True)
    p_ver.add_argument("--eps-fd", type=float, default=verify.FD_EPS_DEFAULT)
    p_ver.add_argument("--drift-tol", type=float, default=1e-2)
    p_ver.add_argument("--assert", dest="assert_", action="store_true",
                       help="exit 5 if any check fails")

    p_sw = sub.add_parser("sweep", help="symplecticity sweep over a family grid")
    common(p_sw, system=True)
    p_sw.add_argument("--eps-fd", type=float, default=verify.FD_EPS_DEFAULT)
    p_sw.add_argument("--tolerance", type=float, default=verify.SYMPLECTIC_TOL)
    p_sw.add_argument("--assert", dest="assert_", action="store_true",
                      help="exit 5 if any grid point fails")

    p_cay = sub.add_parser("cayley", help="Cayley-transform a matrix read from a JSON file")
    p_cay.add_argument("matrix_file")
    return parser


def _load_config(args) -> dict:
    cfg = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = json.load(fh)
    # explicit flags override the document
    for key in ("family", "param", "system", "z0", "h", "steps", "n", "seed", "out"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def _floats(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(tok) for tok in str(text).split(",") if tok.strip()]


def _resolve_system(cfg) -> dynamics.HamiltonianSystem:
    name = cfg.get("system")
    if not name:
        raise DimensionMismatch("no system given (--system or config)")
    if name == "linear":
        sigma = cfg.get("sigma")
        if sigma is None:
            raise DimensionMismatch("linear system needs 'sigma' in the config")
        return dynamics.linear_system(np.asarray(sigma, dtype=float))
    if name == "linear-random":
        n = int(cfg.get("n") or 1)
        rng = np.random.default_rng(int(cfg.get("seed") or 0))
        M = rng.uniform(-1.0, 1.0, (2 * n, 2 * n))
        return dynamics.linear_system((M + M.T) / 2, name="linear-random")
    return dynamics.builtin(name)


def _family_form(cfg, n: int) -> forms.ProductForm:
    family = cfg.get("family")
    if family == "phi":
        return forms.phi_family(n, _floats(cfg.get("param")))
    if family == "abg":
        vals = _floats(cfg.get("param"))
        if len(vals) != 3:
            raise DimensionMismatch("abg family needs exactly 3 parameters")
        return forms.abg_family(n, *vals)
    if family == "named":
        return forms.named_form(str(cfg.get("param")).strip(), n)
    if family == "matrix-S":
        S = cfg.get("S")
        if S is None:
            raise DimensionMismatch("matrix-S family needs 'S' in the config")
        return forms.form_from_S(np.asarray(S, dtype=float), label="matrix-S")
    if family == "from-symplectic":
        Psi = cfg.get("Psi")
        if Psi is None:
            raise DimensionMismatch("from-symplectic family needs 'Psi' in the config")
        _, S = forms.form_for_symplectic(np.asarray(Psi, dtype=float))
        return forms.form_from_S(S, label="from-symplectic")
    raise DimensionMismatch(f"unknown family {family!r}")


def _method(cfg, n: int):
    """(label, map-or-preset-tag) for the integrate/verify commands."""
    family = cfg.get("family")
    if family == "preset" or (family is None and cfg.get("param") in PRESETS):
        tag = str(cfg.get("param"))
        if tag not in PRESETS:
            raise DimensionMismatch(f"unknown preset {tag!r}; expected one of {PRESETS}")
        return tag, tag
    pf = _family_form(cfg, n)
    return pf.label or family, induced_map.from_form(pf)


def _spec(cfg, method) -> IntegratorSpec:
    return IntegratorSpec(
        map=method,
        h=float(cfg.get("h")),
        solver=cfg.get("solver", "fixed_point"),
        solver_tol=float(cfg.get("solver_tol", 1e-13)),
        max_iter=int(cfg.get("max_iter", 100)),
    )


def _fmt_matrix(M) -> str:
    return np.array2string(np.asarray(M), precision=6, suppress_small=True)


def _rho_description(m: induced_map.InducedMap) -> str:
    n = m.n
    I, Z = np.eye(n), np.zeros((n, n))
    B_a = np.block([[Z, Z], [Z, I]])
    B_b = np.block([[I, Z], [Z, Z]])
    if np.array_equal(m.B, B_a):
        return "rho(z, Z) = (Q, p)"
    if np.array_equal(m.B, B_b):
        return "rho(z, Z) = (q, P)"
    if np.array_equal(m.S, np.zeros_like(m.S)):
        return "rho(z, Z) = (z + Z)/2"
    return "rho(z, Z) = B z + C Z"


def _cmd_check_form(args) -> int:
    cfg = _load_config(args)
    if getattr(args, "form", None):
        with open(args.form) as fh:
            pf = forms.from_dict(json.load(fh))
    else:
        n = int(cfg.get("n") or 1)
        pf = _family_form(cfg, n)
        pf = forms.make_product_form(pf.n, pf.R, pf.label)  # re-validate
    print(f"form: {pf.label or '(unlabeled)'}  n={pf.n}")
    print("exactness: ok")
    if getattr(args, "emit_form", None):
        with open(args.emit_form, "w") as fh:
            json.dump(forms.to_dict(pf), fh, sort_keys=True)
            fh.write("\n")
        print(f"wrote form to {args.emit_form}")
    if not forms.compat_check(pf):
        K1, _, K3 = forms.blocks(pf)
        gap = float(np.max(np.abs(K1 - K3)))
        print(f"compatibility: FAILED (|K1 - K3| = {gap:.3e}); "
              "no symplectic map is induced")
        return EXIT_INCOMPATIBLE
    print("compatibility: ok (K1 = K3)")
    m = induced_map.from_form(pf)
    print(f"S =\n{_fmt_matrix(m.S)}")
    print(f"B =\n{_fmt_matrix(m.B)}")
    print(f"C =\n{_fmt_matrix(m.C)}")
    print(_rho_description(m))
    print(f"classification: {induced_map.classify(m.B, m.C).value}")
    try:
        psi = induced_map.consistency_map(m)
        res = linalg.symplectic_residual(psi)
        print(f"consistency map psi =\n{_fmt_matrix(psi)}")
        print(f"psi symplectic residual: {res:.3e}")
    except Exceptional as exc:
        print(f"consistency map: exceptional ({exc})")
    return EXIT_OK


def _write_trajectory_csv(path, traj, n: int) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = (["step", "t"] + [f"q{i+1}" for i in range(n)]
                  + [f"p{i+1}" for i in range(n)] + ["H", "iters"])
        writer.writerow(header)
        for k, (t, z, e, it) in enumerate(
            zip(traj.times, traj.states, traj.energies, traj.solver_iters)
        ):
            writer.writerow([k, repr(float(t))] + [repr(float(v)) for v in z]
                            + [repr(float(e)), int(it)])


def _cmd_integrate(args) -> int:
    cfg = _load_config(args)
    sys_ = _resolve_system(cfg)
    label, method = _method(cfg, sys_.n)
    spec = _spec(cfg, method)
    z0 = np.asarray(_floats(cfg.get("z0")), dtype=float)
    steps = int(cfg.get("steps"))
    out = cfg.get("out")
    try:
        traj = integrate(spec, sys_, z0, steps)
    except NoConvergence as exc:
        if exc.partial is not None and out:
            _write_trajectory_csv(out, exc.partial, sys_.n)
            print(f"solver failure at step {exc.partial.diagnostics['steps_completed'] + 1}: {exc}")
            print(f"PARTIAL trajectory ({exc.partial.diagnostics['steps_completed']} steps) "
                  f"written to {out}")
        else:
            print(f"solver failure: {exc}")
        return EXIT_NO_CONVERGENCE
    drift, slope = verify.energy_drift(traj)
    if out:
        _write_trajectory_csv(out, traj, sys_.n)
        print(f"trajectory written to {out}")
        if args.plot is not False:
            from .plots import save_trajectory_figures

            for p in save_trajectory_figures(traj, f"{sys_.name}/{label}", out):
                print(f"figure written to {p}")
    print(f"{sys_.name}/{label}: {steps} steps of h={spec.h:g}; "
          f"max energy drift {drift:.3e}; secular slope {slope:.3e}; "
          f"mean solver iters {float(np.mean(traj.solver_iters[1:])):.2f}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    cfg = _load_config(args)
    sys_ = _resolve_system(cfg)
    label, method = _method(cfg, sys_.n)
    spec = _spec(cfg, method)
    z0 = np.asarray(_floats(cfg.get("z0")), dtype=float)
    steps = int(cfg.get("steps") or 100)

    reports = []
    D = verify.step_jacobian(spec, sys_, z0, args.eps_fd)
    reports.append(verify.VerifyReport(
        subject=f"{sys_.name}/{label}", metric="symplectic_residual",
        value=verify.symplectic_residual(D), tolerance=verify.SYMPLECTIC_TOL,
        metadata={"h": spec.h, "eps_fd": args.eps_fd},
    ))
    m = spec.map if isinstance(spec.map, induced_map.InducedMap) else None
    if m is None:
        from .integrators import resolve_map

        m = resolve_map(spec, sys_.n)
    reports.append(verify.VerifyReport(
        subject=f"{sys_.name}/{label}", metric="bc_identity",
        value=float(np.max(np.abs(m.B + m.C - np.eye(2 * sys_.n)))), tolerance=0.0,
        metadata={"h": spec.h},
    ))
    try:
        psi = induced_map.consistency_map(m)
        reports.append(verify.VerifyReport(
            subject=f"{sys_.name}/{label}", metric="consistency_symplectic",
            value=linalg.symplectic_residual(psi), tolerance=1e-10,
            metadata={"h": spec.h},
        ))
    except Exceptional:
        pass
    traj = integrate(spec, sys_, z0, steps)
    drift, slope = verify.energy_drift(traj)
    reports.append(verify.VerifyReport(
        subject=f"{sys_.name}/{label}", metric="max_energy_drift",
        value=drift, tolerance=args.drift_tol,
        metadata={"h": spec.h, "steps": steps, "secular_slope": slope},
    ))

    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.metric}: "
              f"{r.value:.3e} (tol {r.tolerance:.1e})")
    out = cfg.get("out")
    if out:
        verify.reports_to_csv(reports, out)
        print(f"report written to {out}")
        if args.plot is not False:
            from .plots import save_report_figure

            print(f"figure written to {save_report_figure(reports, out)}")
    if args.assert_ and not all(r.passed for r in reports):
        return EXIT_ASSERTION
    return EXIT_OK


def _sweep_members(cfg, n: int, seed):
    family = cfg.get("family")
    if family == "phi":
        return verify.phi_grid_members(n, _floats(cfg.get("param")))
    if family == "abg":
        grid = cfg.get("grid")
        if grid:
            return verify.abg_grid_members(
                n, grid["alpha"], grid["beta"], grid["gamma"])
        vals = _floats(cfg.get("param"))
        return verify.abg_grid_members(n, [vals[0]], [vals[1]], [vals[2]])
    if family == "random-S":
        count = int(cfg.get("count") or cfg.get("param") or 10)
        rng = np.random.default_rng(seed if seed is not None else 0)
        return verify.random_S_members(n, count, rng)
    raise DimensionMismatch(f"sweep does not support family {family!r}")


def _cmd_sweep(args) -> int:
    cfg = _load_config(args)
    sys_ = _resolve_system(cfg)
    z0 = np.asarray(_floats(cfg.get("z0")), dtype=float)
    h = float(cfg.get("h"))
    members = _sweep_members(cfg, sys_.n, cfg.get("seed"))
    reports = verify.sweep_symplecticity(
        members, sys_, z0, h, eps_fd=args.eps_fd, tolerance=args.tolerance)
    n_pass = sum(r.passed for r in reports)
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.subject}: {r.value:.3e}")
    print(f"sweep: {n_pass}/{len(reports)} within tolerance {args.tolerance:.1e}")
    out = cfg.get("out")
    if out:
        verify.reports_to_csv(reports, out)
        print(f"report written to {out}")
        if args.plot is not False:
            from .plots import save_report_figure

            print(f"figure written to {save_report_figure(reports, out)}")
    if args.assert_ and n_pass != len(reports):
        return EXIT_ASSERTION
    return EXIT_OK


def _cmd_cayley(args) -> int:
    with open(args.matrix_file) as fh:
        doc = json.load(fh)
    M = np.asarray(doc["M"] if isinstance(doc, dict) else doc, dtype=float)
    ham = linalg.is_hamiltonian(M) if M.shape[0] % 2 == 0 else False
    sym = linalg.is_symplectic(M) if M.shape[0] % 2 == 0 else False
    print(f"input ({M.shape[0]}x{M.shape[0]}): hamiltonian={ham} symplectic={sym}")
    out = linalg.cayley(M)
    oham = linalg.is_hamiltonian(out) if M.shape[0] % 2 == 0 else False
    osym = linalg.is_symplectic(out) if M.shape[0] % 2 == 0 else False
    print(f"cayley(M) =\n{_fmt_matrix(out)}")
    print(f"output: hamiltonian={oham} symplectic={osym}")
    back = linalg.cayley(out)
    print(f"involution residual: {float(np.max(np.abs(back - M))):.3e}")
    return EXIT_OK


_COMMANDS = {
    "check-form": _cmd_check_form,
    "integrate": _cmd_integrate,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "cayley": _cmd_cayley,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except NotExact as exc:
        print(f"invalid form: {exc}", file=_sys.stderr)
        return EXIT_INVALID_FORM
    except (NotSymmetric, NotHamiltonian, NotSymplectic) as exc:
        print(f"invalid input matrix: {exc}", file=_sys.stderr)
        return EXIT_INVALID_FORM
    except (Incompatible, Exceptional, Singular) as exc:
        print(f"incompatible/exceptional: {exc}", file=_sys.stderr)
        return EXIT_INCOMPATIBLE
    except NoConvergence as exc:
        print(f"solver failure: {exc}", file=_sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (DomainError,) as exc:
        print(f"domain error: {exc}", file=_sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (DimensionMismatch, NotSeparable, LiouvintError, OSError, KeyError,
            TypeError, ValueError) as exc:
        print(f"usage error: {exc}", file=_sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
