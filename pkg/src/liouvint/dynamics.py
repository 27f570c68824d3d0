"""Benchmark Hamiltonian systems: energies, analytic gradients, vector
fields and exact flows where available.

States are flat arrays z = (q_1..q_n, p_1..p_n).  The vector field follows
X_H = (dH/dp, -dH/dq), i.e. X_H = Jc grad H with Jc = [[0, I], [-I, 0]].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import expm

from .errors import DimensionMismatch, DomainError, NotSymmetric
from . import linalg
from .linalg import complex_structure


@dataclass(frozen=True)
class Separable:
    """Derivative pair (T'(p), V'(q)) for energies H = T(p) + V(q)."""

    dT: Callable[[np.ndarray], np.ndarray]
    dV: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class HamiltonianSystem:
    """Immutable system record.

    grad returns (dH/dq, dH/dp) stacked; hessian (optional) returns the
    2n x 2n matrix of second derivatives of H; exact_flow (optional) maps
    (z, t) to the exact solution through z.
    """

    n: int
    name: str
    energy: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    separable: Separable | None = None
    exact_flow: Callable[[np.ndarray, float], np.ndarray] | None = None
    hessian: Callable[[np.ndarray], np.ndarray] | None = None


def vector_field(sys: HamiltonianSystem, z) -> np.ndarray:
    """Hamiltonian vector field (dH/dp, -dH/dq) at z."""
    state = np.asarray(z, dtype=float)
    if state.shape != (2 * sys.n,):
        raise DimensionMismatch(f"state must have length {2 * sys.n}")
    g = sys.grad(state)
    return np.concatenate([g[sys.n :], -g[: sys.n]])


def field_jacobian(sys: HamiltonianSystem, z, eps: float = 1e-6) -> np.ndarray:
    """Jacobian of the vector field: Jc Hess H analytically when the system
    carries a Hessian, central differences of the field otherwise."""
    state = np.asarray(z, dtype=float)
    d = 2 * sys.n
    if sys.hessian is not None:
        return complex_structure(sys.n) @ sys.hessian(state)
    D = np.empty((d, d))
    for j in range(d):
        e = np.zeros(d)
        e[j] = eps
        D[:, j] = (vector_field(sys, state + e) - vector_field(sys, state - e)) / (
            2 * eps
        )
    return D


def harmonic() -> HamiltonianSystem:
    """Unit harmonic oscillator H = (q^2 + p^2)/2, n = 1."""
    return linear_system(np.eye(2), name="harmonic")


def pendulum() -> HamiltonianSystem:
    """Planar pendulum H = p^2/2 - cos q, n = 1."""

    def energy(z):
        q, p = z
        return 0.5 * p * p - np.cos(q)

    def grad(z):
        q, p = z
        return np.array([np.sin(q), p])

    def hessian(z):
        q, _ = z
        return np.array([[np.cos(q), 0.0], [0.0, 1.0]])

    return HamiltonianSystem(
        n=1,
        name="pendulum",
        energy=energy,
        grad=grad,
        separable=Separable(dT=lambda p: p, dV=lambda q: np.sin(q)),
        hessian=hessian,
    )


_KEPLER_RMIN = 1e-8


def kepler() -> HamiltonianSystem:
    """Planar Kepler problem H = |p|^2/2 - 1/|q|, n = 2.

    Softening-free; states with |q| <= 1e-8 raise DomainError.
    """

    def _r(q):
        r = float(np.linalg.norm(q))
        if r <= _KEPLER_RMIN:
            raise DomainError(f"Kepler state too close to collision: |q| = {r:.2e}")
        return r

    def energy(z):
        q, p = z[:2], z[2:]
        return 0.5 * float(p @ p) - 1.0 / _r(q)

    def grad(z):
        q, p = z[:2], z[2:]
        r = _r(q)
        return np.concatenate([q / r**3, p])

    def dV(q):
        return q / _r(q) ** 3

    def hessian(z):
        q = z[:2]
        r = _r(q)
        Vqq = np.eye(2) / r**3 - 3.0 * np.outer(q, q) / r**5
        H = np.zeros((4, 4))
        H[:2, :2] = Vqq
        H[2:, 2:] = np.eye(2)
        return H

    return HamiltonianSystem(
        n=2,
        name="kepler",
        energy=energy,
        grad=grad,
        separable=Separable(dT=lambda p: p, dV=dV),
        hessian=hessian,
    )


def linear_system(Sigma, name: str | None = None) -> HamiltonianSystem:
    """Quadratic energy H = z^T Sigma z / 2 with symmetric Sigma.

    Carries the exact flow exp(t Jc Sigma) z (scaling-and-squaring matrix
    exponential); separable split provided when Sigma is block diagonal.
    """
    M = linalg.as_square(Sigma, "Sigma")
    if not linalg.is_symmetric(M, 1e-12):
        raise NotSymmetric("Sigma must be symmetric")
    d = M.shape[0]
    if d % 2 != 0:
        raise DimensionMismatch("Sigma must have even side")
    n = d // 2
    L = complex_structure(n) @ M

    def energy(z):
        return 0.5 * float(z @ (M @ z))

    def grad(z):
        return M @ z

    def exact_flow(z, t):
        return expm(t * L) @ np.asarray(z, dtype=float)

    separable = None
    if np.allclose(M[:n, n:], 0.0, atol=0.0):
        Sq, Sp = M[:n, :n].copy(), M[n:, n:].copy()
        separable = Separable(dT=lambda p: Sp @ p, dV=lambda q: Sq @ q)

    return HamiltonianSystem(
        n=n,
        name=name or "linear",
        energy=energy,
        grad=grad,
        separable=separable,
        exact_flow=exact_flow,
        hessian=lambda z: M,
    )


_BUILTINS = {
    "harmonic": harmonic,
    "pendulum": pendulum,
    "kepler": kepler,
}


def builtin(name: str, Sigma=None) -> HamiltonianSystem:
    """System catalog lookup; "linear" requires the Sigma matrix."""
    if name == "linear":
        if Sigma is None:
            raise DimensionMismatch("linear system needs a Sigma matrix")
        return linear_system(Sigma)
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise DimensionMismatch(
            f"unknown system {name!r}; available: {sorted(_BUILTINS)} or linear"
        ) from None


def sample_state(sys: HamiltonianSystem, rng: np.random.Generator) -> np.ndarray:
    """Random state inside the system's safe sampling domain (test helper)."""
    if sys.name == "kepler":
        angle = rng.uniform(0.0, 2 * np.pi)
        radius = rng.uniform(0.5, 2.0)
        q = radius * np.array([np.cos(angle), np.sin(angle)])
        p = rng.uniform(-1.0, 1.0, 2)
        return np.concatenate([q, p])
    return rng.uniform(-2.0, 2.0, 2 * sys.n)
