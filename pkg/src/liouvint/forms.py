"""Constant one-forms with symplectic differential, on phase space and on
the doubled (product) phase space.

A form is stored through its coefficient matrix in the convention
theta(z) = sum_i (A z)_i dz_i with coordinates ordered (q_1..q_n, p_1..p_n);
on the product space the order is (q, p, Q, P) and the matrix is called R.
Exactness d theta = omega pins the antisymmetric part: A^T - A = Omega
(resp. R^T - R = diag(Omega, -Omega)).  The symmetric part is free and is
what distinguishes one integrator from another.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    Incompatible,
    NotExact,
    NotSymmetric,
    NotSymplectic,
)
from . import linalg
from .linalg import as_square, cayley, complex_structure, jtilde_matrix, omega_matrix

EXACTNESS_TOL = 1e-12
COMPAT_TOL = 1e-9


@dataclass(frozen=True)
class LiouvillianForm:
    """Constant one-form on 2n-dimensional phase space, coefficient matrix A."""

    n: int
    A: np.ndarray


@dataclass(frozen=True)
class ProductForm:
    """Constant one-form on the 4n-dimensional product space, coefficient
    matrix R in coordinates (q, p, Q, P)."""

    n: int
    R: np.ndarray
    label: str | None = None


def make_form(n: int, A) -> LiouvillianForm:
    """Validate the coefficient matrix A (side 2n) and wrap it.

    Raises NotExact when A^T - A differs from Omega beyond 1e-12; the
    exception carries the residual matrix.
    """
    M = as_square(A, "A")
    if M.shape[0] != 2 * n:
        raise DimensionMismatch(f"A has side {M.shape[0]}, expected {2 * n}")
    res = M.T - M - omega_matrix(n)
    err = float(np.max(np.abs(res)))
    if err > EXACTNESS_TOL:
        raise NotExact(
            f"A^T - A differs from Omega by {err:.3e} (> {EXACTNESS_TOL:.0e})",
            residual=res,
        )
    return LiouvillianForm(n=n, A=M)


def make_product_form(n: int, R, label: str | None = None) -> ProductForm:
    """Validate the product-space coefficient matrix R (side 4n) and wrap it."""
    M = as_square(R, "R")
    if M.shape[0] != 4 * n:
        raise DimensionMismatch(f"R has side {M.shape[0]}, expected {4 * n}")
    res = M.T - M - jtilde_matrix(n)
    err = float(np.max(np.abs(res)))
    if err > EXACTNESS_TOL:
        raise NotExact(
            f"R^T - R differs from diag(Omega,-Omega) by {err:.3e}",
            residual=res,
        )
    return ProductForm(n=n, R=M, label=label)


def decompose(f: LiouvillianForm) -> tuple[np.ndarray, np.ndarray]:
    """Split A into symmetric and antisymmetric parts (S_part, A_part).

    For a valid form A_part equals -Omega/2 up to validation tolerance.
    """
    S_part = (f.A + f.A.T) / 2
    A_part = (f.A - f.A.T) / 2
    return S_part, A_part


def add_symmetric(f: LiouvillianForm, S_extra) -> LiouvillianForm:
    """Add a symmetric matrix to the coefficients; exactness is preserved
    because the antisymmetric part is untouched."""
    S = as_square(S_extra, "S'")
    if S.shape[0] != 2 * f.n:
        raise DimensionMismatch(f"S' has side {S.shape[0]}, expected {2 * f.n}")
    if not linalg.is_symmetric(S, EXACTNESS_TOL):
        raise NotSymmetric("S' must be symmetric within 1e-12")
    return LiouvillianForm(n=f.n, A=f.A + S)


def dim_liouvillian_space(n: int) -> int:
    """Dimension n(2n+1) of the space of valid constant forms."""
    if n < 1:
        raise DimensionMismatch(f"n must be positive, got {n}")
    return n * (2 * n + 1)


def blocks(pf: ProductForm) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """K blocks of the symmetrized coefficients sym(R) = [[K1, K2], [K2^T, K3]]."""
    K = (pf.R + pf.R.T) / 2
    m = 2 * pf.n
    return K[:m, :m], K[:m, m:], K[m:, m:]


def compat_check(pf: ProductForm, tol: float = COMPAT_TOL) -> bool:
    """True iff K1 = K3 within tol: the condition for the projected
    submanifold to be symplectic (the Z -> z limit returns the identity)."""
    K1, _, K3 = blocks(pf)
    return float(np.max(np.abs(K1 - K3))) <= tol


def extract_S(pf: ProductForm, tol: float = COMPAT_TOL) -> np.ndarray:
    """Symmetric matrix S = K1 - K2 driving the induced intermediate map.

    Raises Incompatible when the K1 = K3 condition fails.
    """
    K1, K2, K3 = blocks(pf)
    gap = float(np.max(np.abs(K1 - K3)))
    if gap > tol:
        raise Incompatible(
            f"K1 - K3 deviates by {gap:.3e} (> {tol:.0e}); "
            "this form does not induce a symplectic map"
        )
    S = K1 - K2
    # the adapted class also needs a symmetric cross block
    asym = float(np.max(np.abs(S - S.T)))
    if asym > EXACTNESS_TOL:
        raise Incompatible(
            f"cross block K2 is not symmetric (S asymmetry {asym:.3e}); "
            "this form does not induce a symplectic map"
        )
    return S


def tau_reduce(pf: ProductForm, tau: float, tol: float = COMPAT_TOL) -> ProductForm:
    """Slide the free parameter tau along the invariance family of the form.

    The diagonal K blocks become K1 - tau*K2 and the off-diagonal block
    (1-tau)*K2; extract_S is invariant.  tau = 1 lands on the canonical
    block-diagonal representative.
    """
    K1, K2, K3 = blocks(pf)
    gap = float(np.max(np.abs(K1 - K3)))
    if gap > tol:
        raise Incompatible(f"K1 - K3 deviates by {gap:.3e}; tau reduction undefined")
    m = 2 * pf.n
    Kd = K1 - tau * K2
    Ko = (1.0 - tau) * K2
    K = np.zeros_like(pf.R)
    K[:m, :m] = Kd
    K[:m, m:] = Ko
    K[m:, :m] = Ko.T
    K[m:, m:] = Kd
    antisym = (pf.R - pf.R.T) / 2
    return ProductForm(n=pf.n, R=K + antisym, label=pf.label)


def _scatter_pairs(n: int, local_blocks) -> np.ndarray:
    """Assemble a 4n x 4n coefficient matrix from per-pair 4x4 blocks.

    Pair i occupies the coordinate indices (q_i, p_i, Q_i, P_i) =
    (i, n+i, 2n+i, 3n+i).
    """
    R = np.zeros((4 * n, 4 * n))
    for i, loc in enumerate(local_blocks):
        idx = np.array([i, n + i, 2 * n + i, 3 * n + i])
        R[np.ix_(idx, idx)] = loc
    return R


def _broadcast(value, n: int, what: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if arr.size == 1:
        return np.full(n, arr[0])
    if arr.size != n:
        raise DimensionMismatch(f"{what} needs 1 or {n} values, got {arr.size}")
    return arr


def phi_family(n: int, phis) -> ProductForm:
    """One-angle-per-pair family sweeping from the type-II form (phi = 0)
    through the type-III form (phi = pi/2).

    Per pair, with c = cos(phi_i) and s = sin(phi_i), the form reads
    c^2 p dq - s^2 q dp - s^2 P dQ + c^2 Q dP + cs(q dq - p dp + Q dQ - P dP).
    A scalar phi is broadcast to all pairs.
    """
    angles = _broadcast(phis, n, "phis")
    locs = []
    for phi in angles:
        c, s = np.cos(phi), np.sin(phi)
        locs.append(
            np.array(
                [
                    [c * s, c * c, 0.0, 0.0],
                    [-s * s, -c * s, 0.0, 0.0],
                    [0.0, 0.0, c * s, -s * s],
                    [0.0, 0.0, c * c, -c * s],
                ]
            )
        )
    label = f"phi={np.array2string(angles, precision=6)}"
    return ProductForm(n=n, R=_scatter_pairs(n, locs), label=label)


def abg_family(n: int, alpha, beta, gamma) -> ProductForm:
    """Three-parameter family: per pair the form reads
    alpha p dq - (1-alpha) q dp - (1-alpha) P dQ + alpha Q dP
    + beta (q dq + Q dQ) - gamma (p dp + P dP).

    Exact for every (alpha, beta, gamma); scalars broadcast to all pairs.
    """
    a = _broadcast(alpha, n, "alpha")
    b = _broadcast(beta, n, "beta")
    g = _broadcast(gamma, n, "gamma")
    locs = []
    for ai, bi, gi in zip(a, b, g):
        locs.append(
            np.array(
                [
                    [bi, ai, 0.0, 0.0],
                    [ai - 1.0, -gi, 0.0, 0.0],
                    [0.0, 0.0, bi, ai - 1.0],
                    [0.0, 0.0, ai, -gi],
                ]
            )
        )
    label = f"abg=({a[0]:g},{b[0]:g},{g[0]:g})" if n == 1 else "abg"
    return ProductForm(n=n, R=_scatter_pairs(n, locs), label=label)


_NAMED_LOCAL = {
    # (row, col, value) entries of the local 4x4 block in (q, p, Q, P) order
    "I": [(0, 1, 1.0), (2, 3, -1.0)],  # p dq - P dQ
    "II": [(0, 1, 1.0), (3, 2, 1.0)],  # p dq + Q dP
    "III": [(1, 0, -1.0), (2, 3, -1.0)],  # -q dp - P dQ
    "IV": [(1, 0, -1.0), (3, 2, 1.0)],  # -q dp + Q dP
}


def named_form(kind: str, n: int) -> ProductForm:
    """Coefficient matrix of one of the four classical generating-function
    forms; "minus" is an alias for type I (the twisted canonical form)."""
    key = "I" if kind == "minus" else kind
    if key not in _NAMED_LOCAL:
        raise DimensionMismatch(f"unknown form kind {kind!r}; use I/II/III/IV/minus")
    loc = np.zeros((4, 4))
    for r, c, v in _NAMED_LOCAL[key]:
        loc[r, c] = v
    return ProductForm(n=n, R=_scatter_pairs(n, [loc] * n), label=f"type-{key}")


def form_from_S(S, label: str | None = None) -> ProductForm:
    """Canonical block-diagonal product form whose extract_S equals S."""
    M = as_square(S, "S")
    if not linalg.is_symmetric(M, 1e-10):
        raise NotSymmetric("S must be symmetric")
    d = M.shape[0]
    if d % 2 != 0:
        raise DimensionMismatch("S must have even side")
    n = d // 2
    Jt = jtilde_matrix(n)
    R = np.zeros((4 * n, 4 * n))
    R[:d, :d] = M
    R[d:, d:] = M
    return ProductForm(n=n, R=R - 0.5 * Jt, label=label)


def e1_matrix(n: int) -> np.ndarray:
    """Signed permutation (q, p, Q, P) -> (q, -Q, p, P) identifying the
    product space with the cotangent bundle of the doubled base."""
    E = np.zeros((4 * n, 4 * n))
    I = np.eye(n)
    E[0 * n : 1 * n, 0 * n : 1 * n] = I
    E[1 * n : 2 * n, 2 * n : 3 * n] = -I
    E[2 * n : 3 * n, 1 * n : 2 * n] = I
    E[3 * n : 4 * n, 3 * n : 4 * n] = I
    return E


def cotangent_form_matrix(n: int) -> np.ndarray:
    """Canonical form matrix on the cotangent bundle of the doubled base:
    coordinates (x, X, y, Y) with 2n positions first, 2n momenta after."""
    return omega_matrix(2 * n)


def form_for_symplectic(Psi, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Hamiltonian matrix H and symmetric S adapted to a symplectic map Psi.

    H = cayley(Psi) and S solves 2*Jc*S = H with Jc the complex structure,
    so the induced intermediate map has consistency map exactly Psi.

    Raises
    ------
    NotSymplectic
        If Psi fails the congruence test at tol.
    Exceptional
        If det(I + Psi) is too small for the Cayley transform.
    """
    M = as_square(Psi, "Psi")
    if not linalg.is_symplectic(M, tol):
        raise NotSymplectic(
            f"Psi^T Omega Psi - Omega exceeds {tol:.0e}; not a symplectic matrix"
        )
    H = cayley(M, tol)
    n = M.shape[0] // 2
    S = 0.5 * (omega_matrix(n) @ H)
    S = (S + S.T) / 2  # symmetrize away roundoff
    return H, S


def to_dict(pf: ProductForm) -> dict:
    """JSON-ready dictionary {n, R, label}; floats round-trip bit-exactly."""
    return {"n": pf.n, "R": pf.R.tolist(), "label": pf.label}


def from_dict(d: dict) -> ProductForm:
    """Rebuild (and re-validate) a product form from its dictionary."""
    return make_product_form(int(d["n"]), d["R"], d.get("label"))
