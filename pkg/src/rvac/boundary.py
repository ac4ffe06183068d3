"""Boundary-characteristic analysis and recovery of normal derivatives.

The vacuum side is noncharacteristic in the expansion regime, so every
normal derivative of ``V`` follows from tangential ones.  The plasma side is
characteristic with a rank-two boundary matrix; only the normal velocity and
the total pressure have recoverable normal derivatives, plus ``H1`` through
the divergence constraint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .densenum import lin_solve, sym_eigen
from .errors import SingularBoundaryMatrix, SingularMatrix, SingularTransform, SuperluminalInterface
from .state import Eos, InterfaceBaseState, derive_plasma
from .symbols import (
    assemble_plasma_symbols,
    boundary_symbols,
    maxwell_symbols,
    mirror_upper,
    secondary_symmetrizer,
)


def vacuum_boundary_matrix(dtphi: float, d2phi: float, d3phi: float) -> np.ndarray:
    """B1 - dtphi I - d2phi B2 - d3phi B3 for a front with the given slopes."""
    vs = maxwell_symbols()
    return vs.B1 - dtphi * np.eye(6) - d2phi * vs.B2 - d3phi * vs.B3


def secondary_boundary_matrix(nu, dtphi: float, d2phi: float, d3phi: float) -> np.ndarray:
    """Secondary-symmetrized boundary matrix for a general front; nu picks the family member."""
    sec = secondary_symmetrizer(nu)
    return mirror_upper(sec.Bc1 - dtphi * sec.Bc0 - d2phi * sec.Bc2 - d3phi * sec.Bc3)


@dataclass(frozen=True)
class BoundarySpectrum:
    lambdas: tuple
    numeric: tuple
    n_incoming_plasma: int
    n_incoming_vacuum: int
    regime: str

    @property
    def mismatch(self) -> float:
        return float(np.max(np.abs(np.sort(self.lambdas) - np.asarray(self.numeric))))


def vacuum_boundary_eigen(dtphi: float, d2phi: float = 0.0, d3phi: float = 0.0) -> BoundarySpectrum:
    """Eigenvalues of -B1tilde(phi) in closed form, checked against a Jacobi solve.

    The matrix is symmetric, so the symmetric solver applies directly.
    """
    norm_n = math.sqrt(1.0 + d2phi * d2phi + d3phi * d3phi)
    if not abs(dtphi) / norm_n < 1.0:
        raise SuperluminalInterface(
            f"front speed |dtphi|/|N| = {abs(dtphi) / norm_n!r} is not below 1"
        )
    lam = (
        dtphi + norm_n, dtphi + norm_n,
        dtphi - norm_n, dtphi - norm_n,
        dtphi, dtphi,
    )
    numeric = sym_eigen(-vacuum_boundary_matrix(dtphi, d2phi, d3phi)).eigenvalues
    regime = "expansion" if dtphi <= 0.0 else "shrinkage"
    return BoundarySpectrum(
        lambdas=lam,
        numeric=tuple(float(x) for x in numeric),
        n_incoming_plasma=1,
        n_incoming_vacuum=sum(1 for x in lam if x > 0.0),
        regime=regime,
    )


def e12(n: int = 8) -> np.ndarray:
    """Matrix with ones at (0, 1) and (1, 0) and zeros elsewhere."""
    E = np.zeros((n, n))
    E[0, 1] = E[1, 0] = 1.0
    return E


@dataclass(frozen=True)
class WTransform:
    """U = J W with W = (q, Gamma v_N, u2, u3, H, S); K = J^-1."""

    J: np.ndarray
    K: np.ndarray
    residual: float
    cond: float


def w_transform(base: InterfaceBaseState, eos: Eos | None = None) -> WTransform:
    eos = eos or base.eos
    d = derive_plasma(base.plasma, eos)
    Hh = base.plasma.H
    g = d.gamma
    K = np.zeros((8, 8))
    K[0, 0] = 1.0
    # q = p + (b,H)/G + ((v,H)(H,u) - B^2 (v,u))/G
    K[0, 1:4] = (float(d.v @ Hh) * Hh - d.B2 * d.v) / g
    K[0, 4:7] = d.b / g
    # Gamma v_1 = u_1 - v1 (v,u)
    K[1, 1:4] = np.eye(3)[0] - d.v[0] * d.v
    for row, col in enumerate(range(2, 8), start=2):
        K[row, col] = 1.0
    try:
        J = lin_solve(K, np.eye(8))
    except SingularMatrix as exc:
        raise SingularTransform(str(exc)) from exc
    cond = float(np.abs(K).sum(axis=0).max() * np.abs(J).sum(axis=0).max())
    if cond > 1e12:
        raise SingularTransform(f"transform condition number {cond:.3e} exceeds 1e12")
    A1hat = boundary_symbols(base, eos).A1hat
    res = float(np.max(np.abs(J.T @ A1hat @ J - e12())))
    return WTransform(J=J, K=K, residual=res, cond=cond)


@dataclass(frozen=True)
class NormalRecovery:
    """Linear maps giving normal derivatives from tangential data.

    vacuum_map: 6x18, acting on (dtV, d2V, d3V).
    plasma_map: 2x32, acting on (dtU, d2U, d3U, F), giving (d1 v1, d1 q).
    h_map: 1x24, acting on (dtU, d2U, d3U), giving d1 H1.
    v1_row, q_row: the linear functionals v1(U) and q(U).
    """

    vacuum_map: np.ndarray
    plasma_map: np.ndarray
    h_map: np.ndarray
    v1_row: np.ndarray
    q_row: np.ndarray


def normal_recovery(base: InterfaceBaseState, eos: Eos | None = None) -> NormalRecovery:
    eos = eos or base.eos
    bs = boundary_symbols(base, eos)
    if base.kappa == 0.0 or bs.det_B1hat == 0.0:
        raise SingularBoundaryMatrix("B1 - kappa I is singular (kappa = 0)")
    vs = maxwell_symbols()
    try:
        vacuum_map = lin_solve(bs.B1hat, np.hstack((np.eye(6), vs.B2, vs.B3)))
    except SingularMatrix as exc:
        raise SingularBoundaryMatrix(str(exc)) from exc

    ps = assemble_plasma_symbols(base.plasma, eos)
    wt = w_transform(base, eos)
    g = derive_plasma(base.plasma, eos).gamma
    # A1hat d1U = F - A0 dtU - A2 d2U - A3 d3U; J^T A1hat = E12 K, so the
    # first two rows of J^T (...) are Gamma d1v1 and d1q.
    rhs = np.hstack((-ps.A0, -ps.A2, -ps.A3, np.eye(8)))
    proj = wt.J.T[:2] @ rhs
    plasma_map = np.vstack((proj[0] / g, proj[1]))

    h_map = np.zeros((1, 24))
    h_map[0, 8 + 5] = -1.0
    h_map[0, 16 + 6] = -1.0
    return NormalRecovery(
        vacuum_map=vacuum_map,
        plasma_map=plasma_map,
        h_map=h_map,
        v1_row=wt.K[1] / g,
        q_row=wt.K[0].copy(),
    )


def det_b1hat_closed_form(kappa: float) -> float:
    return kappa * kappa * (1.0 - kappa * kappa) ** 2

