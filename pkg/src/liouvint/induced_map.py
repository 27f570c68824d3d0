"""Intermediate-point maps rho(z, Z) = B z + C Z derived from a form, from
its symmetric matrix S, or from a Hamiltonian matrix.

B = I/2 - Jc S and C = I/2 + Jc S with Jc = [[0, I], [-I, 0]].  The sign of
Jc is calibrated so the type-II form produces rho = (Q, p) and the type-III
form produces rho = (q, P), the two classical symplectic Euler evaluation
points.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHamiltonian, NotSymmetric
from . import linalg
from .forms import ProductForm, extract_S
from .linalg import as_square, cayley, complex_structure, jtilde_matrix, omega_matrix


class MapClass(enum.Enum):
    """Behaviour classes for an implicit two-point map with coefficients (B, C)."""

    NOT_CONSISTENT_SYMPLECTIC = "NotConsistentSymplectic"
    TWO_DISTINCT_SYMPLECTIC = "TwoDistinctSymplectic"
    SINGLE_FLOW_LINE = "SingleFlowLine"
    NOT_INTERLEAVING = "NotInterleaving"


@dataclass(frozen=True)
class InducedMap:
    """Linear intermediate-point map with coefficient matrices B and C.

    Invariants: B + C = I holds bitwise, C - B = 2 Jc S is Hamiltonian,
    S is symmetric.
    """

    n: int
    S: np.ndarray
    B: np.ndarray
    C: np.ndarray


def _paired_complement(b: float) -> float:
    """Double c closest to 1 - b with fl(b + c) == 1 exactly.

    fl(1 - b) can land one ulp off the additive complement; scan the
    immediate neighbours until the sum is bitwise 1.
    """
    c = 1.0 - b
    if b + c == 1.0:
        return c
    for steps in (1, -1, 2, -2):
        cand = c
        for _ in range(abs(steps)):
            cand = math.nextafter(cand, math.inf if steps > 0 else -math.inf)
        if b + cand == 1.0:
            return cand
    return c


def from_S(S, tol: float = 1e-10) -> InducedMap:
    """Build the intermediate map from its symmetric matrix S."""
    M = as_square(S, "S")
    d = M.shape[0]
    if d % 2 != 0:
        raise DimensionMismatch("S must have even side")
    if not linalg.is_symmetric(M, tol):
        raise NotSymmetric(f"S fails symmetry at tol {tol:.0e}")
    n = d // 2
    X = complex_structure(n) @ M
    B = 0.5 * np.eye(d) - X
    C = np.eye(d) - B
    # pin the diagonal so B + C = I is bitwise true, not just to one ulp
    for i in range(d):
        C[i, i] = _paired_complement(B[i, i])
    return InducedMap(n=n, S=M, B=B, C=C)


def from_form(pf: ProductForm, tol: float = 1e-9) -> InducedMap:
    """Build the intermediate map induced by a compatible product form."""
    return from_S(extract_S(pf, tol))


def from_hamiltonian_matrix(H, tol: float = 1e-9) -> InducedMap:
    """Build the intermediate map whose consistency map is cayley(H).

    S solves 2 Jc S = H, i.e. S = Omega H / 2.
    """
    M = as_square(H, "H")
    if not linalg.is_hamiltonian(M, tol):
        raise NotHamiltonian(f"Omega H fails symmetry at tol {tol:.0e}")
    n = M.shape[0] // 2
    S = 0.5 * (omega_matrix(n) @ M)
    S = (S + S.T) / 2
    return from_S(S)


def evaluate(m: InducedMap, z, Z) -> np.ndarray:
    """Intermediate point B z + C Z, computed in the anchored form
    (z + Z)/2 + (C - B)/2 (Z - z) so that evaluate(m, z, z) == z bitwise."""
    a = np.asarray(z, dtype=float)
    b = np.asarray(Z, dtype=float)
    d = 2 * m.n
    if a.shape != (d,) or b.shape != (d,):
        raise DimensionMismatch(f"states must have length {d}")
    return 0.5 * (a + b) + 0.5 * ((m.C - m.B) @ (b - a))


def classify(B, C, tol: float = 1e-9) -> MapClass:
    """Classify an implicit two-point map by the Hamiltonian structure of
    b1 = B - I/2 and b2 = C - I/2.

    Returns NOT_INTERLEAVING unless B + C = I within tol and the difference
    b1 - b2 is Hamiltonian.  Residuals within a factor 10 of tol are
    reported through warnings rather than silently branched.
    """
    Bm = as_square(B, "B")
    Cm = as_square(C, "C")
    if Bm.shape != Cm.shape:
        raise DimensionMismatch("B and C must have equal shape")
    d = Bm.shape[0]
    if d % 2 != 0:
        raise DimensionMismatch("B and C must have even side")

    def _tie(name, residual):
        if tol / 10 < residual <= tol * 10:
            warnings.warn(
                f"classify: {name} residual {residual:.3e} is within a factor 10 "
                f"of tol {tol:.0e}",
                stacklevel=2,
            )

    sum_res = float(np.max(np.abs(Bm + Cm - np.eye(d))))
    _tie("B+C-I", sum_res)
    if sum_res > tol:
        return MapClass.NOT_INTERLEAVING

    b1 = Bm - 0.5 * np.eye(d)
    b2 = Cm - 0.5 * np.eye(d)
    O = omega_matrix(d // 2)

    def _ham_residual(M):
        W = O @ M
        return float(np.max(np.abs(W - W.T)))

    r1, r2 = _ham_residual(b1), _ham_residual(b2)
    rb = _ham_residual(b1 - b2)
    for name, r in (("b1", r1), ("b2", r2), ("b", rb)):
        _tie(name, r)

    if r1 <= tol and r2 <= tol:
        opp = float(np.max(np.abs(b1 + b2)))
        _tie("b1+b2", opp)
        if opp <= tol:
            return MapClass.SINGLE_FLOW_LINE
        return MapClass.TWO_DISTINCT_SYMPLECTIC
    if rb <= tol:
        return MapClass.NOT_CONSISTENT_SYMPLECTIC
    return MapClass.NOT_INTERLEAVING


def consistency_map(m: InducedMap, tol: float = 1e-9) -> np.ndarray:
    """Explicit map psi = (I + H)^{-1}(I - H) with H = 2 Jc S; symplectic
    whenever defined.  Raises Exceptional for exceptional H."""
    H = 2.0 * (complex_structure(m.n) @ m.S)
    return cayley(H, tol)


def hamiltonian_matrix(m: InducedMap) -> np.ndarray:
    """The Hamiltonian matrix H = 2 Jc S = C - B of the map."""
    return 2.0 * (complex_structure(m.n) @ m.S)


def projection_commutes(n: int, v) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the projection/structure commutation identity.

    lhs applies the twisted structure first and then the summed projection
    [I I]; rhs applies the signed projection [I -I] first and the phase
    space structure after.  The two sides agree exactly for every v.
    """
    w = np.asarray(v, dtype=float)
    if w.shape != (4 * n,):
        raise DimensionMismatch(f"v must have length {4 * n}")
    tw = jtilde_matrix(n) @ w
    lhs = tw[: 2 * n] + tw[2 * n :]
    rhs = omega_matrix(n) @ (w[: 2 * n] - w[2 * n :])
    return lhs, rhs
