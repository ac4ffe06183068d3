"""Small dense kernels: Cholesky PD test, Jacobi eigensolver, LU solve, scalar roots.

Everything here is sized for n <= 42 and written for clarity over speed,
except the eigensolver which rotates disjoint index pairs together (round-robin
ordering) so a full cyclic sweep costs n - 1 vectorized steps.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BranchCut, NewtonDiverged, NoBracket, NoConvergence, SingularMatrix

EIG_TOL = 1e-12
PIVOT_TOL = 1e-12
ROOT_TOL = 1e-10


@dataclass(frozen=True)
class CholeskyResult:
    pd: bool
    min_pivot: float
    factor: np.ndarray | None = field(default=None, repr=False)


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)
    iterations: int


@dataclass
class RootResult:
    root: complex
    residual: float
    iterations: int = 0
    # filled by callers that know the branch structure, e.g. {"xi_p": True, "xi_v": True}
    branch_certificate: dict | None = None


def cholesky_pd(M, pivot_tol: float = PIVOT_TOL) -> CholeskyResult:
    """Try M = L L^T; PD iff every pivot exceeds pivot_tol * |trace(M)| / n.

    The pivot is the diagonal of the Schur complement before the square root.
    Factorization stops at the first failing pivot; ``min_pivot`` is the
    smallest pivot seen.
    """
    A = np.array(M, dtype=float)
    n = A.shape[0]
    thresh = pivot_tol * abs(np.trace(A)) / n
    L = np.zeros_like(A)
    min_pivot = math.inf
    for k in range(n):
        d = A[k, k] - L[k, :k] @ L[k, :k]
        min_pivot = min(min_pivot, d)
        if not d > thresh:
            return CholeskyResult(False, float(min_pivot), None)
        L[k, k] = math.sqrt(d)
        L[k + 1 :, k] = (A[k + 1 :, k] - L[k + 1 :, :k] @ L[k, :k]) / L[k, k]
    return CholeskyResult(True, float(min_pivot), L)


def _round_robin(m: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairings for m players (m even): m-1 rounds of m/2 disjoint pairs."""
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        half = m // 2
        p = np.array(players[:half])
        q = np.array(players[half:][::-1])
        rounds.append((np.minimum(p, q), np.maximum(p, q)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def sym_eigen(M, tol: float = EIG_TOL, max_sweeps: int = 50) -> EigenResult:
    """Cyclic Jacobi eigensolver for a real symmetric matrix.

    Sweeps until the off-diagonal Frobenius norm is at most ``tol * ||M||_F``.
    Eigenvalues are returned ascending with matching eigenvector columns.
    """
    A = np.array(M, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    if n == 1:
        return EigenResult(A.diagonal().copy(), V, 0)
    norm = np.linalg.norm(A)
    target = tol * norm
    m = n + (n % 2)
    rounds = []
    for p, q in _round_robin(m):
        keep = q < n  # drop the dummy player when n is odd
        rounds.append((p[keep], q[keep]))

    def off(a):
        return float(np.linalg.norm(a - np.diag(np.diag(a))))

    sweeps = 0
    while off(A) > target:
        if sweeps >= max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
        for p, q in rounds:
            apq = A[p, q]
            app = A[p, p]
            aqq = A[q, q]
            c = np.ones_like(apq)
            s = np.zeros_like(apq)
            act = np.abs(apq) > 1e-300
            if np.any(act):
                theta = (aqq[act] - app[act]) / (2.0 * apq[act])
                big = np.abs(theta) > 1e150
                th = np.where(big, 1.0, theta)
                t = np.where(big, 0.5 / np.where(big, theta, 1.0),
                             np.sign(th) / (np.abs(th) + np.sqrt(1.0 + th * th)))
                t[theta == 0.0] = 1.0
                c[act] = 1.0 / np.sqrt(1.0 + t * t)
                s[act] = t * c[act]
            R = np.eye(n)
            R[p, p] = c
            R[q, q] = c
            R[p, q] = s
            R[q, p] = -s
            A = R.T @ A @ R
            A = 0.5 * (A + A.T)
            V = V @ R
        sweeps += 1
    w = A.diagonal().copy()
    order = np.argsort(w, kind="stable")
    return EigenResult(w[order], V[:, order], sweeps)


def _as_array(M):
    A = np.array(M)
    return A.astype(complex if np.iscomplexobj(A) else float)


def _lu(M, pivot_tol: float):
    A = _as_array(M)
    n = A.shape[0]
    perm = np.arange(n)
    sign = 1.0
    scale = max(float(np.max(np.abs(A))) if A.size else 0.0, 1e-300)
    for k in range(n):
        i = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[i, k]) <= pivot_tol * scale:
            raise SingularMatrix(f"pivot {A[i, k]!r} below threshold at column {k}")
        if i != k:
            A[[k, i]] = A[[i, k]]
            perm[[k, i]] = perm[[i, k]]
            sign = -sign
        A[k + 1 :, k] /= A[k, k]
        A[k + 1 :, k + 1 :] -= np.outer(A[k + 1 :, k], A[k, k + 1 :])
    return A, perm, sign


def lin_solve(M, b, pivot_tol: float = 1e-13):
    """Solve M x = b by partial-pivot LU; ``b`` may hold several columns.

    Real and complex inputs are both accepted.
    """
    LU, perm, _ = _lu(M, pivot_tol)
    n = LU.shape[0]
    x = _as_array(b)
    if np.iscomplexobj(LU):
        x = x.astype(complex)
    x = x[perm]
    for k in range(n):
        x[k + 1 :] -= np.multiply.outer(LU[k + 1 :, k], x[k])
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - LU[k, k + 1 :] @ x[k + 1 :]) / LU[k, k]
    return x


def determinant(M):
    """Determinant via LU; complex input gives a complex result."""
    try:
        LU, _, sign = _lu(M, 0.0)
    except SingularMatrix:
        return 0.0
    d = sign * np.prod(np.diag(LU))
    return complex(d) if np.iscomplexobj(LU) else float(d)


def solve_lower(L, B):
    """Forward substitution L X = B for lower-triangular L."""
    X = np.array(B, dtype=float)
    for k in range(L.shape[0]):
        X[k] = (X[k] - L[k, :k] @ X[:k]) / L[k, k]
    return X


def principal_sqrt(z: complex) -> complex:
    """Principal square root (Re >= 0); refuses radicands on the negative real axis."""
    z = complex(z)
    if z.imag == 0.0 and z.real < 0.0:
        raise BranchCut(f"radicand {z!r} lies on the branch cut")
    return cmath.sqrt(z)


def find_root_1d(
    f: Callable,
    *,
    mode: str,
    bracket: tuple[float, float] | None = None,
    seed: complex | None = None,
    fprime: Callable | None = None,
    xtol: float = 4e-16,
    ftol: float = ROOT_TOL,
    max_iter: int = 200,
    domain: Callable[[complex], bool] | None = None,
) -> RootResult:
    """Scalar root finding.

    ``mode="real_bisect"`` needs a sign-changing ``bracket`` and halves it until
    its width is below ``xtol * max(1, |x|)``.  ``mode="complex_newton"`` runs
    Newton from ``seed``; ``domain`` (if given) must hold for every iterate.
    """
    if mode == "real_bisect":
        if bracket is None:
            raise NoBracket("real_bisect needs a bracket")
        a, b = float(bracket[0]), float(bracket[1])
        fa, fb = f(a), f(b)
        if fa == 0.0:
            return RootResult(a, 0.0)
        if fb == 0.0:
            return RootResult(b, 0.0)
        if not (np.isfinite(fa) and np.isfinite(fb)) or fa * fb > 0.0:
            raise NoBracket(f"no sign change on [{a!r}, {b!r}]: f={fa!r}, {fb!r}")
        it = 0
        while True:
            mid = 0.5 * (a + b)
            if abs(b - a) <= xtol * max(1.0, abs(mid)) or mid in (a, b):
                break
            fm = f(mid)
            it += 1
            if fm == 0.0:
                a = b = mid
                break
            if (fm < 0.0) == (fa < 0.0):
                a, fa = mid, fm
            else:
                b, fb = mid, fm
        x = a if abs(fa) <= abs(fb) else b
        return RootResult(x, abs(f(x)), it)

    if mode == "complex_newton":
        if seed is None or not cmath.isfinite(complex(seed)):
            raise NewtonDiverged("complex_newton needs a finite seed")
        z = complex(seed)

        def deriv(x):
            if fprime is not None:
                return fprime(x)
            h = 1e-7 * (1.0 + abs(x))
            return (f(x + h) - f(x - h)) / (2.0 * h)

        fz = f(z)
        for it in range(1, max_iter + 1):
            d = deriv(z)
            if d == 0 or not cmath.isfinite(d):
                raise NewtonDiverged(f"zero or non-finite derivative at {z!r}")
            step = fz / d
            z = z - step
            if not cmath.isfinite(z) or (domain is not None and not domain(z)):
                raise NewtonDiverged(f"iterate left the domain at {z!r}")
            fz = f(z)
            if abs(step) <= 4e-16 * (1.0 + abs(z)) or fz == 0:
                break
        else:
            if not abs(fz) <= ftol:
                raise NewtonDiverged(f"no convergence in {max_iter} iterations (|f|={abs(fz)!r})")
        if not abs(fz) <= ftol:
            raise NewtonDiverged(f"stalled with |f|={abs(fz)!r} at {z!r}")
        return RootResult(z, abs(fz), it)

    raise ValueError(f"unknown mode {mode!r}")
