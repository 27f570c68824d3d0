"""Small dense real matrix kernel: canonical structure matrices, the
symplectic/Hamiltonian predicates and the Cayley transform.

All matrices are plain float64 numpy arrays; sizes stay tiny (4n x 4n with
n rarely above 3), so everything is dense and solves go through LU with
partial pivoting.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import DimensionMismatch, Exceptional, OddDimension, Singular

DEFAULT_TOL = 1e-9
PIVOT_TOL = 1e-14


def as_square(M, name="matrix") -> np.ndarray:
    """Validate and return M as a finite float64 square array."""
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DimensionMismatch(f"{name} contains non-finite entries")
    return A


def _even_side(M, name="matrix") -> int:
    d = M.shape[0]
    if d % 2 != 0:
        raise OddDimension(f"{name} must have even side, got {d}")
    return d // 2


def omega_matrix(n: int) -> np.ndarray:
    """Canonical symplectic form matrix on 2n-dimensional phase space.

    Block layout [[0, -I], [I, 0]] in coordinates (q_1..q_n, p_1..p_n),
    so that u^T Omega v evaluates sum(dp_i ^ dq_i) on the pair (u, v).
    """
    if n < 1:
        raise DimensionMismatch(f"n must be positive, got {n}")
    O = np.zeros((2 * n, 2 * n))
    O[:n, n:] = -np.eye(n)
    O[n:, :n] = np.eye(n)
    return O


def complex_structure(n: int) -> np.ndarray:
    """Compatible complex structure [[0, I], [-I, 0]] (the inverse of Omega).

    This is the multiplier that rotates gradients into Hamiltonian vector
    fields and scales S inside the intermediate-point map.
    """
    return -omega_matrix(n)


def jtilde_matrix(n: int) -> np.ndarray:
    """Twisted structure diag(Omega, -Omega) on the 4n-dimensional product
    space with coordinates (q, p, Q, P); squares to -I."""
    O = omega_matrix(n)
    J = np.zeros((4 * n, 4 * n))
    J[: 2 * n, : 2 * n] = O
    J[2 * n :, 2 * n :] = -O
    return J


def is_symmetric(M, tol: float = DEFAULT_TOL) -> bool:
    """True iff max |M - M^T| <= tol."""
    A = as_square(M)
    return float(np.max(np.abs(A - A.T))) <= tol


def is_hamiltonian(M, tol: float = DEFAULT_TOL) -> bool:
    """True iff Omega M is symmetric within tol (M^T Omega + Omega M = 0)."""
    A = as_square(M)
    n = _even_side(A)
    return is_symmetric(omega_matrix(n) @ A, tol)


def is_symplectic(M, tol: float = DEFAULT_TOL) -> bool:
    """True iff M^T Omega M = Omega within tol (entrywise max)."""
    A = as_square(M)
    n = _even_side(A)
    O = omega_matrix(n)
    return float(np.max(np.abs(A.T @ O @ A - O))) <= tol


def symplectic_residual(M) -> float:
    """max |M^T Omega M - Omega|; zero exactly for symplectic M."""
    A = as_square(M)
    n = _even_side(A)
    O = omega_matrix(n)
    return float(np.max(np.abs(A.T @ O @ A - O)))


def is_non_exceptional(M, tol: float = DEFAULT_TOL) -> bool:
    """True iff |det(I + M)| > tol, i.e. the Cayley transform is defined."""
    A = as_square(M)
    return abs(det(np.eye(A.shape[0]) + A)) > tol


def cayley(M, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Cayley transform (I - M)(I + M)^{-1}.

    The two factor orders coincide because the factors commute; the
    transform is an involution on non-exceptional matrices and exchanges
    Hamiltonian with symplectic matrices.

    Raises
    ------
    Exceptional
        If |det(I + M)| <= tol.
    """
    A = as_square(M)
    I = np.eye(A.shape[0])
    d = det(I + A)
    if abs(d) <= tol:
        raise Exceptional(f"det(I + M) = {d:.3e} is within tol={tol:.1e}")
    return solve(I + A, I - A)


def solve(A, rhs) -> np.ndarray:
    """Solve A x = rhs by LU with partial pivoting.

    Raises Singular when any pivot magnitude falls at or below 1e-14.
    """
    M = as_square(A, "A")
    b = np.asarray(rhs, dtype=float)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # pivot check below reports instead
            lu, piv = lu_factor(M)
    except Exception as exc:  # LinAlgError on hard singularity
        raise Singular(str(exc)) from exc
    small = np.min(np.abs(np.diag(lu)))
    if small <= PIVOT_TOL:
        raise Singular(f"pivot magnitude {small:.3e} <= {PIVOT_TOL:.1e}")
    return lu_solve((lu, piv), b)


def inverse(A) -> np.ndarray:
    """Matrix inverse realized as an LU solve against the columns of I."""
    M = as_square(A, "A")
    return solve(M, np.eye(M.shape[0]))


def det(A) -> float:
    """Determinant of a square matrix."""
    return float(np.linalg.det(as_square(A, "A")))


# Elementwise/product helpers are plain numpy; exported as names so callers
# that only import this module have the complete matrix surface.
def matmul(A, B) -> np.ndarray:
    return np.asarray(A, dtype=float) @ np.asarray(B, dtype=float)


def add(A, B) -> np.ndarray:
    return np.asarray(A, dtype=float) + np.asarray(B, dtype=float)


def scale(c: float, A) -> np.ndarray:
    return float(c) * np.asarray(A, dtype=float)


def transpose(A) -> np.ndarray:
    return np.asarray(A, dtype=float).T.copy()
