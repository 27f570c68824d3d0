"""Numerical certification: finite-difference one-step Jacobians,
symplecticity residuals, pullback congruences, energy-drift statistics and
convergence-order estimation.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DimensionMismatch, LiouvintError
from . import linalg
from .dynamics import HamiltonianSystem
from .induced_map import InducedMap, from_S
from .integrators import IntegratorSpec, integrate, step

# decouples finite-difference truncation from solver noise during stencils
_STENCIL_TOL = 1e-14
FD_EPS_DEFAULT = 1e-6
SYMPLECTIC_TOL = 1e-6


@dataclass
class VerifyReport:
    """One certified measurement; passed is true iff value <= tolerance."""

    subject: str
    metric: str
    value: float
    tolerance: float
    passed: bool = field(init=False)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.value <= self.tolerance)


def step_jacobian(
    spec: IntegratorSpec, sys: HamiltonianSystem, z0, eps_fd: float = FD_EPS_DEFAULT
) -> np.ndarray:
    """Central-difference Jacobian of the one-step map z0 -> z_h.

    The inner solver tolerance is tightened to 1e-14 so differentiation
    noise stays below the O(eps^2) truncation error.
    """
    if not (1e-8 <= eps_fd <= 1e-4):
        raise ValueError(f"eps_fd must lie in [1e-8, 1e-4], got {eps_fd:g}")
    z = np.asarray(z0, dtype=float)
    d = 2 * sys.n
    tight = replace(spec, solver_tol=min(spec.solver_tol, _STENCIL_TOL))
    D = np.empty((d, d))
    for j in range(d):
        e = np.zeros(d)
        e[j] = eps_fd
        zp, _ = step(tight, sys, z + e)
        zm, _ = step(tight, sys, z - e)
        D[:, j] = (zp - zm) / (2.0 * eps_fd)
    return D


def symplectic_residual(D) -> float:
    """max |D^T Omega D - Omega| of a one-step Jacobian."""
    return linalg.symplectic_residual(D)


def pullback_check(M, Gsrc, Gdst, tol: float) -> bool:
    """True iff M^T Gdst M = Gsrc within tol (M maps source to target)."""
    A = np.asarray(M, dtype=float)
    Gs = linalg.as_square(Gsrc, "Gsrc")
    Gd = linalg.as_square(Gdst, "Gdst")
    if A.ndim != 2 or A.shape[0] != Gd.shape[0] or A.shape[1] != Gs.shape[0]:
        raise DimensionMismatch(
            f"incompatible sides: M {A.shape}, Gsrc {Gs.shape}, Gdst {Gd.shape}"
        )
    return float(np.max(np.abs(A.T @ Gd @ A - Gs))) <= tol


def energy_drift(traj) -> tuple[float, float]:
    """(max |H - H0|, least-squares slope of H against t)."""
    e = np.asarray(traj.energies, dtype=float)
    t = np.asarray(traj.times, dtype=float)
    if e.size == 0:
        raise DimensionMismatch("trajectory is empty")
    max_drift = float(np.max(np.abs(e - e[0])))
    if e.size < 2:
        return max_drift, 0.0
    slope = float(np.polyfit(t, e, 1)[0])
    return max_drift, slope


def convergence_order(
    spec: IntegratorSpec,
    sys: HamiltonianSystem,
    z0,
    T: float,
    hs,
    reference=None,
) -> float:
    """Least-squares slope of log(global error at T) against log h.

    The reference endpoint is the exact flow when the system has one,
    otherwise a midpoint run at h_ref = min(hs)/100; a precomputed
    endpoint can be passed to amortize that run across calls.
    """
    steps_list = []
    for h in hs:
        steps = round(T / h)
        if abs(steps * h - T) > 1e-9 * max(1.0, abs(T)):
            raise DimensionMismatch(f"T/h must be integral, got T={T}, h={h}")
        steps_list.append(steps)
    z = np.asarray(z0, dtype=float)
    if reference is None:
        reference = reference_endpoint(sys, z, T, min(hs))
    errs = []
    for h, steps in zip(hs, steps_list):
        traj = integrate(replace(spec, h=h), sys, z, steps)
        errs.append(float(np.linalg.norm(traj.states[-1] - reference)))
    return float(np.polyfit(np.log(np.asarray(hs, dtype=float)), np.log(errs), 1)[0])


def reference_endpoint(sys: HamiltonianSystem, z0, T: float, h_min: float) -> np.ndarray:
    """High-accuracy endpoint at time T: exact flow if available, else a
    midpoint run at h_min/100."""
    z = np.asarray(z0, dtype=float)
    if sys.exact_flow is not None:
        return sys.exact_flow(z, T)
    h_ref = h_min / 100.0
    ref_spec = IntegratorSpec(map="midpoint", h=h_ref, solver_tol=1e-14)
    traj = integrate(ref_spec, sys, z, round(T / h_ref))
    return traj.states[-1]


def sweep_symplecticity(
    members,
    sys: HamiltonianSystem,
    z0,
    h: float,
    eps_fd: float = FD_EPS_DEFAULT,
    tolerance: float = SYMPLECTIC_TOL,
    solver_tol: float = 1e-13,
) -> list[VerifyReport]:
    """One symplecticity report per (label, InducedMap) grid member.

    Each point measures the finite-difference Jacobian residual at eps_fd
    with a Richardson cross-check at 2*eps_fd recorded in the metadata.
    Per-point failures are recorded and the sweep continues.
    """
    reports = []
    for label, m in members:
        meta = {"h": h, "eps_fd": eps_fd}
        spec = IntegratorSpec(map=m, h=h, solver_tol=solver_tol)
        try:
            D = step_jacobian(spec, sys, z0, eps_fd)
            value = symplectic_residual(D)
            if 2 * eps_fd <= 1e-4:
                D2 = step_jacobian(spec, sys, z0, 2 * eps_fd)
                meta["residual_2eps"] = symplectic_residual(D2)
        except LiouvintError as exc:
            value = float("inf")
            meta["error"] = str(exc)
        reports.append(
            VerifyReport(
                subject=str(label),
                metric="symplectic_residual",
                value=value,
                tolerance=tolerance,
                metadata=meta,
            )
        )
    return reports


def phi_grid_members(n: int, phis) -> list[tuple[str, InducedMap]]:
    """(label, map) members for a grid of broadcast angles."""
    from .forms import phi_family
    from .induced_map import from_form

    return [(f"phi={phi:.6g}", from_form(phi_family(n, phi))) for phi in phis]


def abg_grid_members(n: int, alphas, betas, gammas) -> list[tuple[str, InducedMap]]:
    """(label, map) members for the cartesian (alpha, beta, gamma) grid."""
    from .forms import abg_family
    from .induced_map import from_form

    out = []
    for a in alphas:
        for b in betas:
            for g in gammas:
                label = f"abg=({a:.6g},{b:.6g},{g:.6g})"
                out.append((label, from_form(abg_family(n, a, b, g))))
    return out


def random_S_members(
    n: int, count: int, rng: np.random.Generator
) -> list[tuple[str, InducedMap]]:
    """(label, map) members for seeded random symmetric S matrices."""
    out = []
    for k in range(count):
        S = rng.uniform(-1.0, 1.0, (2 * n, 2 * n))
        S = (S + S.T) / 2
        out.append((f"random-S[{k}]", from_S(S)))
    return out


_CSV_FIELDS = ("subject", "metric", "value", "tolerance", "pass", "h", "eps_fd", "params")


def reports_to_csv(reports, path) -> None:
    """Flat CSV with the stable column set (subject, metric, value,
    tolerance, pass, h, eps_fd, params)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CSV_FIELDS)
        for r in reports:
            meta = dict(r.metadata)
            h = meta.pop("h", "")
            eps = meta.pop("eps_fd", "")
            params = ";".join(f"{k}={v}" for k, v in sorted(meta.items()))
            writer.writerow(
                [r.subject, r.metric, repr(r.value), repr(r.tolerance),
                 str(r.passed).lower(), h, eps, params]
            )


def reports_to_json(reports, path) -> None:
    """Structured document mirroring the report records."""
    payload = [
        {
            "subject": r.subject,
            "metric": r.metric,
            "value": r.value,
            "tolerance": r.tolerance,
            "pass": r.passed,
            "metadata": r.metadata,
        }
        for r in reports
    ]
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
