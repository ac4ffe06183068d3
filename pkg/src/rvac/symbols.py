"""Symbol matrices of the symmetrized RMHD and vacuum Maxwell systems.

Plasma unknown ordering: (p, u1, u2, u3, H1, H2, H3, S).
Vacuum unknown ordering: (Hc1, Hc2, Hc3, E1, E2, E3).
Axis arguments ``j`` run over 1, 2, 3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .densenum import determinant
from .errors import BaseStateViolatesBoundaryAssumptions
from .state import DerivedPlasma, Eos, InterfaceBaseState, PlasmaState, base_state_violations, derive_plasma

I3 = np.eye(3)


def _e(j: int) -> np.ndarray:
    return I3[j - 1]


def mirror_upper(M: np.ndarray) -> np.ndarray:
    """Symmetric matrix built from the upper triangle of M."""
    U = np.triu(M)
    return U + np.triu(M, 1).T


def _outer_sym(a, b):
    return np.outer(a, b) + np.outer(b, a)


@dataclass(frozen=True)
class PlasmaBlocks:
    """The 3x3 blocks that make up A0 and A_j."""

    calA: np.ndarray
    calM: np.ndarray
    calN: tuple  # N_1, N_2, N_3
    calAj: tuple  # script-A_1..3
    calG: tuple  # script-G_1..3


def plasma_blocks(state: PlasmaState, eos: Eos, derived: DerivedPlasma | None = None) -> PlasmaBlocks:
    d = derived or derive_plasma(state, eos)
    G, v, H, b, B2 = d.gamma, d.v, state.H, d.b, d.B2
    rhoh = d.rho * d.h
    H2 = float(H @ H)
    vH = float(v @ H)
    vv = np.outer(v, v)
    HH = np.outer(H, H)
    sym_vH = _outer_sym(v, H)

    calA = (
        (rhoh * G + H2 / G) * I3
        - (rhoh * G + (H2 + B2) / G) * vv
        - HH / G
        + (vH / G) * sym_vH
    )
    calM = (I3 + np.outer(state.u, state.u)) / G
    Ns, Ajs, Gjs = [], [], []
    for j in (1, 2, 3):
        ej = _e(j)
        vj, Hj = v[j - 1], H[j - 1]
        Ns.append(np.outer(b, ej) / G - (vj / G) * np.outer(b, v) - (Hj / G**2) * I3)
        h_part = (Hj / G) * (sym_vH / G**2 - 2.0 * vH * (I3 - vv))
        tail = (vH / G) * _outer_sym(H, ej) - (B2 / G) * _outer_sym(v, ej)
        Ajs.append(
            vj * ((rhoh * G + H2 / G) * I3 - (rhoh * G + (H2 - B2) / G) * vv - HH / G)
            + h_part
            + tail
        )
        Gjs.append(vj * (2.0 * (B2 / G) * vv - (vH / G) * sym_vH) + h_part + tail)
    return PlasmaBlocks(calA, calM, tuple(Ns), tuple(Ajs), tuple(Gjs))


def _assemble8(corner, row, big, N, M, last):
    A = np.zeros((8, 8))
    A[0, 0] = corner
    A[0, 1:4] = row
    A[1:4, 0] = row
    A[1:4, 1:4] = big
    A[1:4, 4:7] = N.T
    A[4:7, 1:4] = N
    A[4:7, 4:7] = M
    A[7, 7] = last
    return mirror_upper(A)


def _a0(d: DerivedPlasma, blk: PlasmaBlocks) -> np.ndarray:
    return _assemble8(d.gamma / (d.rho * d.a2), d.v, blk.calA, np.zeros((3, 3)), blk.calM, 1.0)


def _aj(state: PlasmaState, d: DerivedPlasma, blk: PlasmaBlocks, j: int) -> np.ndarray:
    vj = d.v[j - 1]
    return _assemble8(
        state.u[j - 1] / (d.rho * d.a2), _e(j), blk.calAj[j - 1], blk.calN[j - 1], vj * blk.calM, vj
    )


def plasma_a0(state: PlasmaState, eos: Eos) -> np.ndarray:
    d = derive_plasma(state, eos)
    return _a0(d, plasma_blocks(state, eos, d))


def plasma_aj(state: PlasmaState, eos: Eos, j: int) -> np.ndarray:
    d = derive_plasma(state, eos)
    return _aj(state, d, plasma_blocks(state, eos, d), j)


def assemble_G(state: PlasmaState, eos: Eos, j: int) -> np.ndarray:
    """G_j with A_j = v_j A0 + G_j."""
    d = derive_plasma(state, eos)
    blk = plasma_blocks(state, eos, d)
    vj = d.v[j - 1]
    return _assemble8(0.0, _e(j) - vj * d.v, blk.calG[j - 1], blk.calN[j - 1], np.zeros((3, 3)), 0.0)


@dataclass(frozen=True)
class PlasmaSymbols:
    A0: np.ndarray
    A1: np.ndarray
    A2: np.ndarray
    A3: np.ndarray
    blocks: PlasmaBlocks

    def A(self, j: int) -> np.ndarray:
        return (self.A0, self.A1, self.A2, self.A3)[j]


def assemble_plasma_symbols(state: PlasmaState, eos: Eos) -> PlasmaSymbols:
    d = derive_plasma(state, eos)
    blk = plasma_blocks(state, eos, d)
    return PlasmaSymbols(
        A0=_a0(d, blk),
        A1=_aj(state, d, blk, 1),
        A2=_aj(state, d, blk, 2),
        A3=_aj(state, d, blk, 3),
        blocks=blk,
    )


# ---------------------------------------------------------------- vacuum


@dataclass(frozen=True)
class VacuumSymbols:
    B1: np.ndarray
    B2: np.ndarray
    B3: np.ndarray

    def B(self, j: int) -> np.ndarray:
        return (None, self.B1, self.B2, self.B3)[j]


def _from_entries(entries: dict) -> np.ndarray:
    M = np.zeros((6, 6))
    for (i, k), val in entries.items():
        M[i - 1, k - 1] = val
        M[k - 1, i - 1] = val
    return M


def maxwell_symbols() -> VacuumSymbols:
    """Curl symbols of dt Hc + curl E = 0, dt E - curl Hc = 0."""
    B1 = _from_entries({(2, 6): -1.0, (3, 5): 1.0})
    B2 = _from_entries({(1, 6): 1.0, (3, 4): -1.0})
    B3 = _from_entries({(1, 5): -1.0, (2, 4): 1.0})
    return VacuumSymbols(B1, B2, B3)


@dataclass(frozen=True)
class SecondarySymmetrizer:
    nu: np.ndarray
    Bc0: np.ndarray
    Bc1: np.ndarray
    Bc2: np.ndarray
    Bc3: np.ndarray
    R1: np.ndarray
    R2: np.ndarray
    K1: np.ndarray
    K2: np.ndarray
    K3: np.ndarray

    @property
    def positive_definite(self) -> bool:
        return float(self.nu @ self.nu) < 1.0

    def Bc(self, j: int) -> np.ndarray:
        return (self.Bc0, self.Bc1, self.Bc2, self.Bc3)[j]

    def K(self, j: int) -> np.ndarray:
        return (None, self.K1, self.K2, self.K3)[j]


def secondary_symmetrizer(nu) -> SecondarySymmetrizer:
    """The symmetrizer family built from the extra conserved cross products Hc x E."""
    n1, n2, n3 = (float(x) for x in nu)
    Bc0 = np.eye(6) + _from_entries(
        {(1, 5): n3, (1, 6): -n2, (2, 4): -n3, (2, 6): n1, (3, 4): n2, (3, 5): -n1}
    )
    Bc1 = _from_entries(
        {
            (1, 1): n1, (1, 2): n2, (1, 3): n3,
            (2, 2): -n1, (2, 6): -1.0,
            (3, 3): -n1, (3, 5): 1.0,
            (4, 4): n1, (4, 5): n2, (4, 6): n3,
            (5, 5): -n1,
            (6, 6): -n1,
        }
    )
    Bc2 = _from_entries(
        {
            (1, 1): -n2, (1, 2): n1, (1, 6): 1.0,
            (2, 2): n2, (2, 3): n3,
            (3, 3): -n2, (3, 4): -1.0,
            (4, 4): -n2, (4, 5): n1,
            (5, 5): n2, (5, 6): n3,
            (6, 6): -n2,
        }
    )
    Bc3 = _from_entries(
        {
            (1, 1): -n3, (1, 3): n1, (1, 5): -1.0,
            (2, 2): -n3, (2, 3): n2, (2, 4): 1.0,
            (3, 3): n3,
            (4, 4): -n3, (4, 6): n1,
            (5, 5): -n3, (5, 6): n2,
            (6, 6): n3,
        }
    )
    nuv = np.array([n1, n2, n3])
    R1 = np.concatenate((nuv, np.zeros(3)))
    R2 = np.concatenate((np.zeros(3), nuv))
    Ks = [np.kron(np.eye(2), np.outer(nuv, _e(j))) for j in (1, 2, 3)]
    return SecondarySymmetrizer(nuv, Bc0, Bc1, Bc2, Bc3, R1, R2, *Ks)


# ---------------------------------------------------------------- boundary


@dataclass(frozen=True)
class BoundarySymbols:
    A1hat: np.ndarray
    B1hat: np.ndarray
    Bc1hat: np.ndarray
    det_B1hat: float

    @property
    def invertible(self) -> bool:
        return self.det_B1hat != 0.0


def boundary_symbols(base: InterfaceBaseState, eos: Eos | None = None) -> BoundarySymbols:
    """Boundary matrices of the constant-coefficient problem, with nu = v-hat."""
    eos = eos or base.eos
    k = base.kappa
    d = derive_plasma(base.plasma, eos)
    A1hat = mirror_upper(plasma_aj(base.plasma, eos, 1) - k * plasma_a0(base.plasma, eos))
    B1hat = maxwell_symbols().B1 - k * np.eye(6)
    sec = secondary_symmetrizer(d.v)
    Bc1hat = mirror_upper(sec.Bc1 - k * sec.Bc0)
    return BoundarySymbols(A1hat, B1hat, Bc1hat, determinant(B1hat))


def perturbation_velocity(base: InterfaceBaseState, u) -> np.ndarray:
    """Linearized 3-velocity (u - (v,u) v) / Gamma for a 4-velocity perturbation u."""
    d = derive_plasma(base.plasma, base.eos)
    u = np.asarray(u, dtype=float)
    return (u - float(d.v @ u) * d.v) / d.gamma


def perturbation_B2(base: InterfaceBaseState, u, H) -> float:
    """First variation of B^2 for perturbations (u, H)."""
    d = derive_plasma(base.plasma, base.eos)
    Hh = base.plasma.H
    u = np.asarray(u, dtype=float)
    H = np.asarray(H, dtype=float)
    return (2.0 / d.gamma) * (
        float(d.b @ H) + float(d.v @ Hh) * float(Hh @ u) - d.B2 * float(d.v @ u)
    )


def plasma_boundary_form(base: InterfaceBaseState, U, eos: Eos | None = None):
    """Return ((A1hat U, U), q(U), v_N(U)) for a planar constant base state.

    q = p + dB2/2 is the total-pressure perturbation and v_N = v_1.  On a
    valid base the first equals 2 Gamma q v_N.  ``U`` may also be an (n, 8)
    batch, in which case three length-n arrays are returned.
    """
    eos = eos or base.eos
    bad = [m for m in base_state_violations(base) if m.startswith(("v1", "H1"))]
    if bad:
        raise BaseStateViolatesBoundaryAssumptions("; ".join(bad))
    U = np.asarray(U, dtype=float)
    A1hat = boundary_symbols(base, eos).A1hat
    d = derive_plasma(base.plasma, eos)
    Hh = base.plasma.H
    u, H = U[..., 1:4], U[..., 4:7]
    form = np.einsum("...i,ij,...j->...", U, A1hat, U)
    dB2 = (2.0 / d.gamma) * (H @ d.b + float(d.v @ Hh) * (u @ Hh) - d.B2 * (u @ d.v))
    q = U[..., 0] + 0.5 * dB2
    vN = (u[..., 0] - (u @ d.v) * d.v[0]) / d.gamma
    if U.ndim == 1:
        return float(form), float(q), float(vN)
    return form, q, vN
