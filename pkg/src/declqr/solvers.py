"""Discrete-time Lyapunov and Riccati machinery with unit weights.

The Riccati equation solved here is the unit-weight DARE

    X = A^T X A - A^T X B (I + B^T X B)^{-1} B^T X A + I,

whose stabilizing solution satisfies X >= I.  Residuals are measured in
the Frobenius norm relative to the size of the terms being combined, so
the same tolerance stays meaningful across the many orders of magnitude
the parameter sweeps cover.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla


class UnstableDynamicsError(ValueError):
    """Closed-loop matrix has spectral radius at or above one."""


class DareConvergenceError(RuntimeError):
    """Riccati iteration failed to reach the requested residual."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


def spectral_radius(f):
    return float(np.max(np.abs(np.linalg.eigvals(np.asarray(f, dtype=float)))))


def shrink_factor(y):
    """Strictly increasing map y -> y / (1 + y) of [0, inf) onto [0, 1).

    At y equal to the squared smallest singular value of B this is the
    guaranteed fraction of the one-step (deadbeat) cost that no
    controller, centralized or not, can undercut.
    """
    return y / (1.0 + y)


def _sym(m):
    return 0.5 * (m + m.T)


def _rel_fro(m, scale):
    return float(np.linalg.norm(m, "fro") / max(1.0, scale))


def solve_dlyap(f, m, tol=1e-11, delta_stab=1e-9):
    """Solve Z = F^T Z F + M for a Schur-stable F.

    Uses the direct Kronecker linear solve for n <= 30 and the bilinear
    transformation above that.  Raises UnstableDynamicsError when the
    spectral radius of F reaches 1 - delta_stab, and RuntimeError when
    the verified residual exceeds tol (relative to max(1, ||Z||_F)).
    """
    f = np.asarray(f, dtype=float)
    m = np.asarray(m, dtype=float)
    n = f.shape[0]
    if f.shape != (n, n) or m.shape != (n, n):
        raise ValueError(f"shape mismatch: F {f.shape}, M {m.shape}")
    rho = spectral_radius(f)
    if rho >= 1.0 - delta_stab:
        raise UnstableDynamicsError(
            f"spectral radius {rho:.12g} is not below {1.0 - delta_stab}")
    method = "direct" if n <= 30 else "bilinear"
    with warnings.catch_warnings():
        # scipy warns on conditioning; the residual check below is the
        # actual accept/reject criterion, so the warning is redundant.
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        z = sla.solve_discrete_lyapunov(f.T, m, method=method)
    if np.allclose(m, m.T, rtol=0, atol=1e-13 * max(1.0, np.linalg.norm(m))):
        z = _sym(z)
    residual = _rel_fro(f.T @ z @ f + m - z, np.linalg.norm(z, "fro"))
    if residual > tol:
        raise RuntimeError(f"Lyapunov residual {residual:.3e} exceeds tol {tol:.3e}")
    return z


@dataclass(frozen=True)
class DareSolution:
    """Stabilizing Riccati solution with its verified relative residual."""

    X: np.ndarray
    residual: float
    iterations: int


def _dare_rhs(a, b, x):
    bx = b.T @ x
    bxa = bx @ a
    gain_part = np.linalg.solve(np.eye(b.shape[1]) + bx @ b, bxa)
    return _sym(a.T @ x @ a - bxa.T @ gain_part) + np.eye(a.shape[0])


def _dare_residual(a, b, x):
    # Backward-error scaling: the subtraction cancels terms of size
    # ||A^T X A||, so anything tighter than eps relative to that is noise.
    scale = max(np.linalg.norm(x, "fro"),
                np.linalg.norm(a.T @ x @ a, "fro"))
    return _rel_fro(_dare_rhs(a, b, x) - x, scale)


def _sda(a, b, tol, max_iter=100):
    """Structured doubling iteration; quadratically convergent fallback."""
    n = a.shape[0]
    ak = a.copy()
    g = b @ b.T
    h = np.eye(n)
    for it in range(1, max_iter + 1):
        w = np.eye(n) + g @ h
        w_inv_a = np.linalg.solve(w, ak)
        h_w_inv = np.linalg.solve(w.T, h.T).T
        h_next = _sym(h + ak.T @ h_w_inv @ ak)
        g = _sym(g + ak @ np.linalg.solve(w, g) @ ak.T)
        step = _rel_fro(h_next - h, np.linalg.norm(h_next, "fro"))
        ak = ak @ w_inv_a
        h = h_next
        if not np.isfinite(h).all():
            raise DareConvergenceError("doubling iteration diverged", float("nan"))
        if step <= max(tol * 1e-2, 1e-15):
            return h, it
    return h, max_iter


def solve_dare(a, b, tol=1e-12, max_iter=10000):
    """Stabilizing solution of the unit-weight DARE.

    Runs the monotone fixed-point iteration from X = I, which keeps
    every iterate at or above I; if progress stalls (slow closed-loop
    contraction) it switches to a structured doubling iteration.  Raises
    DareConvergenceError, carrying the last residual, when neither route
    reaches tol.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or b.shape[0] != n or b.ndim != 2:
        raise ValueError(f"shape mismatch: A {a.shape}, B {b.shape}")
    x = np.eye(n)
    deltas = []
    iterations = 0
    stalled = False
    with np.errstate(over="ignore", invalid="ignore"):
        for it in range(1, max_iter + 1):
            xn = _dare_rhs(a, b, x)
            iterations = it
            if not np.isfinite(xn).all():
                # diverging iterates: no stabilizing solution reachable this way
                stalled = True
                break
            delta = _rel_fro(xn - x, np.linalg.norm(xn, "fro"))
            x = xn
            if delta <= tol:
                break
            deltas.append(delta)
            if len(deltas) >= 400 and deltas[-1] > 0.5 * deltas[-400]:
                stalled = True
                break
        residual = _dare_residual(a, b, x)
        if not math.isfinite(residual):
            residual = math.inf
        if residual > tol or stalled:
            try:
                x2, extra = _sda(a, b, tol)
            except DareConvergenceError:
                x2 = None
            if x2 is not None:
                residual2 = _dare_residual(a, b, x2)
                if math.isfinite(residual2) and residual2 < residual:
                    x, residual = x2, residual2
                    iterations += extra
    if residual > tol:
        raise DareConvergenceError(
            f"Riccati residual {residual:.3e} exceeds tol {tol:.3e}", residual)
    return DareSolution(X=_sym(x), residual=residual, iterations=iterations)


def dare_gain(a, b, solution):
    """Optimal feedback K = -(I + B^T X B)^{-1} B^T X A for a DARE solution."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    x = solution.X if isinstance(solution, DareSolution) else np.asarray(solution, dtype=float)
    bx = b.T @ x
    return -np.linalg.solve(np.eye(b.shape[1]) + bx @ b, bx @ a)


def matrix_inversion_identity_check(x, y, z):
    """Max elementwise gap in X - X Y (I + Z X Y)^{-1} Z X = (X^{-1} + Y Z)^{-1}."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    k = z.shape[0]
    lhs = x - x @ y @ np.linalg.solve(np.eye(k) + z @ x @ y, z @ x)
    rhs = np.linalg.inv(np.linalg.inv(x) + y @ z)
    return float(np.max(np.abs(lhs - rhs)))
