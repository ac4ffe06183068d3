"""Order-42 sufficient stability test for the planar plasma-vacuum interface.

The boundary sum  sum_a d_a(phi) d_a(E1)  is turned into a volume quadratic
form in Z = (dtU, dtV, d2U, d2V, d3U, d3V):

1. front slopes come from the traces of H1 and Hc1, the front speed from the
   kinematic condition;
2. dt E1 is traded for tangential vacuum derivatives;
3. every product f * dk(g) at the boundary becomes the volume integrand
   dk(f) d1(g) - d1(f) dk(g);
4. normal derivatives are eliminated with the recovery maps.

Two bookkeeping routes (term by term, and grouped by the matrices M_k) are
kept so they can be checked against each other.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .boundary import NormalRecovery, normal_recovery
from .densenum import cholesky_pd, solve_lower, sym_eigen
from .errors import FrontSymbolDegenerate, InvalidBaseState, RvacError
from .state import (
    Eos,
    InterfaceBaseState,
    derive_plasma,
    front_symbol_gap,
    make_base_state,
    mu_hat,
)
from .symbols import mirror_upper, plasma_a0, secondary_symmetrizer

DIM = 42
SLOT = {"t": 0, 2: 1, 3: 2}
# boundary atoms: the Y unknowns and the six vacuum components
V_INDEX = {"Hc1": 0, "Hc2": 1, "Hc3": 2, "E1": 3, "E2": 4, "E3": 5}


@dataclass(frozen=True)
class PhiElimination:
    """d2phi = a1[0] H1 + a1[1] Hc1, d3phi = a2[0] H1 + a2[1] Hc1,
    dtphi = v1 + a0[0] H1 + a0[1] Hc1 (all traces at the interface)."""

    a1: tuple
    a2: tuple
    a0: tuple
    D: float

    def slopes(self, H1: float, Hc1: float) -> tuple[float, float]:
        return (
            self.a1[0] * H1 + self.a1[1] * Hc1,
            self.a2[0] * H1 + self.a2[1] * Hc1,
        )

    def speed(self, v1: float, H1: float, Hc1: float) -> float:
        return v1 + self.a0[0] * H1 + self.a0[1] * Hc1


def phi_elimination(base: InterfaceBaseState) -> PhiElimination:
    D = front_symbol_gap(base)
    if D == 0.0:
        raise FrontSymbolDegenerate("plasma and vacuum tangential fields are parallel (D = 0)")
    H, Hc = base.plasma.H, base.vacuum.Hc
    a1 = (Hc[2] / D, -H[2] / D)
    a2 = (-Hc[1] / D, H[1] / D)
    v = derive_plasma(base.plasma, base.eos).v
    a0 = tuple(-v[1] * a1[j] - v[2] * a2[j] for j in range(2))
    return PhiElimination(a1=a1, a2=a2, a0=a0, D=D)


@dataclass(frozen=True)
class StabilityMatrices:
    Afrak: np.ndarray
    Q: np.ndarray
    Q1: np.ndarray
    muhat: float
    Q_grouped: np.ndarray = field(repr=False)

    @property
    def route_mismatch(self) -> float:
        return float(np.max(np.abs(self.Q - self.Q_grouped)))


class _Atoms:
    """Tangential and normal derivative functionals of the boundary atoms."""

    def __init__(self, nr: NormalRecovery):
        self.nr = nr

    def state_row(self, atom: str) -> np.ndarray:
        x = np.zeros(14)
        if atom == "v1":
            x[:8] = self.nr.v1_row
        elif atom == "H1":
            x[4] = 1.0
        else:
            x[8 + V_INDEX[atom]] = 1.0
        return x

    def tangential(self, atom: str, k) -> np.ndarray:
        z = np.zeros(DIM)
        off = 14 * SLOT[k]
        z[off : off + 14] = self.state_row(atom)
        return z

    def normal(self, atom: str) -> tuple[np.ndarray, np.ndarray]:
        z = np.zeros(DIM)
        f = np.zeros(8)
        if atom == "v1":
            pm = self.nr.plasma_map[0]
            for s in range(3):
                z[14 * s : 14 * s + 8] = pm[8 * s : 8 * s + 8]
            f = pm[24:].copy()
        elif atom == "H1":
            hm = self.nr.h_map[0]
            for s in range(3):
                z[14 * s : 14 * s + 8] = hm[8 * s : 8 * s + 8]
        else:
            vm = self.nr.vacuum_map[V_INDEX[atom]]
            for s in range(3):
                z[14 * s + 8 : 14 * s + 14] = vm[6 * s : 6 * s + 6]
        return z, f


def _boundary_terms(base: InterfaceBaseState, pe: PhiElimination):
    """The boundary sum as a list of (coef, f_atom, k, g_atom) meaning coef * f * dk(g)."""
    k = base.kappa
    terms = []
    for kk, a in ((2, pe.a1), (3, pe.a2)):
        terms.append((a[0], "H1", kk, "E1"))
        terms.append((a[1], "Hc1", kk, "E1"))
    # dtE1 = d2(Hc3 - kappa E2) - d3(Hc2 + kappa E3)
    dt_e1 = ((1.0, 2, "Hc3"), (-k, 2, "E2"), (-1.0, 3, "Hc2"), (-k, 3, "E3"))
    for cf, fa in ((1.0, "v1"), (pe.a0[0], "H1"), (pe.a0[1], "Hc1")):
        for cg, kk, ga in dt_e1:
            terms.append((cf * cg, fa, kk, ga))
    return terms


def boundary_matrices_M(base: InterfaceBaseState, pe: PhiElimination | None = None) -> dict:
    """M_k with sum_k (M_k Y, dk V) equal to the boundary sum; Y = (v1, H1, Hc1)."""
    pe = pe or phi_elimination(base)
    yidx = {"v1": 0, "H1": 1, "Hc1": 2}
    M = {2: np.zeros((6, 3)), 3: np.zeros((6, 3))}
    for c, fa, kk, ga in _boundary_terms(base, pe):
        M[kk][V_INDEX[ga], yidx[fa]] += c
    return M


def _integrate(P, P1, atoms: _Atoms, c, f_row_t, f_norm, g_row_t, g_norm):
    """Add c * (dk f d1 g - d1 f dk g) to the bilinear form (P, P1)."""
    nz, nf = f_norm
    P += c * np.outer(f_row_t, g_norm)
    P -= c * np.outer(nz, g_row_t)
    P1 -= c * np.outer(g_row_t, nf)


def _route_termwise(base, atoms, pe):
    P = np.zeros((DIM, DIM))
    P1 = np.zeros((DIM, 8))
    for c, fa, kk, ga in _boundary_terms(base, pe):
        _integrate(
            P, P1, atoms, c,
            atoms.tangential(fa, kk), atoms.normal(fa),
            atoms.tangential(ga, kk), atoms.normal(ga)[0],
        )
    return P, P1


def _route_grouped(base, atoms, pe):
    """Integrate (M_k Y, dk V) with g taken as the whole combination row of M_k."""
    P = np.zeros((DIM, DIM))
    P1 = np.zeros((DIM, 8))
    names = list(V_INDEX)
    normals_v = np.array([atoms.normal(n)[0] for n in names])
    for kk, M in boundary_matrices_M(base, pe).items():
        tang_v = np.array([atoms.tangential(n, kk) for n in names])
        for j, fa in enumerate(("v1", "H1", "Hc1")):
            col = M[:, j]
            if not np.any(col):
                continue
            _integrate(
                P, P1, atoms, 1.0,
                atoms.tangential(fa, kk), atoms.normal(fa),
                col @ tang_v, col @ normals_v,
            )
    return P, P1


def afrak(base: InterfaceBaseState, eos: Eos | None = None) -> np.ndarray:
    eos = eos or base.eos
    d = derive_plasma(base.plasma, eos)
    block = np.zeros((14, 14))
    block[:8, :8] = plasma_a0(base.plasma, eos) / d.gamma
    block[8:, 8:] = secondary_symmetrizer(d.v).Bc0
    return mirror_upper(np.kron(np.eye(3), block))


def assemble_Q(base: InterfaceBaseState, eos: Eos | None = None) -> StabilityMatrices:
    eos = eos or base.eos
    if eos is not base.eos:
        base = InterfaceBaseState(base.plasma, base.vacuum, base.kappa, eos)
    pe = phi_elimination(base)
    atoms = _Atoms(normal_recovery(base, eos))
    P, P1 = _route_termwise(base, atoms, pe)
    Pg, _ = _route_grouped(base, atoms, pe)
    m = mu_hat(base)
    return StabilityMatrices(
        Afrak=afrak(base, eos),
        Q=mirror_upper(P + P.T),
        Q1=2.0 * m * P1,
        muhat=m,
        Q_grouped=mirror_upper(Pg + Pg.T),
    )


def mu_interval(Afrak: np.ndarray, Q: np.ndarray, rel_tol: float = 1e-12) -> tuple[float, float]:
    """The interval of s around 0 on which Afrak + s Q stays positive definite."""
    chol = cholesky_pd(Afrak)
    if not chol.pd:
        raise InvalidBaseState(["Afrak is not positive definite"])
    L = chol.factor
    X = solve_lower(L, Q)
    C = solve_lower(L, X.T)
    lam = sym_eigen(0.5 * (C + C.T)).eigenvalues
    scale = float(np.max(np.abs(lam))) if lam.size else 0.0
    thresh = rel_tol * scale
    hi, lo = lam[-1], lam[0]
    lower = -1.0 / hi if hi > thresh else -math.inf
    upper = -1.0 / lo if lo < -thresh else math.inf
    return float(lower), float(upper)


@dataclass(frozen=True)
class StabilityVerdict:
    condition122: bool
    min_eig: float
    mu_interval: tuple
    ellipticity_ok: bool
    muhat: float
    D: float
    epsilon: float

    @property
    def sufficient_stable(self) -> bool:
        return self.condition122 and self.ellipticity_ok

    def as_dict(self) -> dict:
        return {
            "cond122": self.condition122,
            "min_eig": self.min_eig,
            "mu_interval": list(self.mu_interval),
            "ellipticity_ok": self.ellipticity_ok,
            "sufficient_stable": self.sufficient_stable,
            "mu_hat": self.muhat,
            "D": self.D,
            "epsilon": self.epsilon,
        }


def default_epsilon(base: InterfaceBaseState) -> float:
    return 1e-6 * (float(np.linalg.norm(base.plasma.H)) * float(np.linalg.norm(base.vacuum.Hc)) + 1.0)


def check_condition_122(
    base: InterfaceBaseState,
    eos: Eos | None = None,
    epsilon: float | None = None,
    delta: float = 1e-3,
) -> StabilityVerdict:
    if not base.kappa <= -delta:
        raise InvalidBaseState([f"kappa must satisfy kappa <= -{delta!r} (got {base.kappa!r})"])
    eos = eos or base.eos
    eps = default_epsilon(base) if epsilon is None else float(epsilon)
    sm = assemble_Q(base, eos)
    M = mirror_upper(sm.Afrak + sm.muhat * sm.Q)
    D = front_symbol_gap(base)
    return StabilityVerdict(
        condition122=cholesky_pd(M).pd,
        min_eig=float(sym_eigen(M).eigenvalues[0]),
        mu_interval=mu_interval(sm.Afrak, sm.Q),
        ellipticity_ok=abs(D) >= eps,
        muhat=sm.muhat,
        D=D,
        epsilon=eps,
    )


# ---------------------------------------------------------------- sweeps

SWEEPABLE = ("p", "u2", "u3", "H2", "H3", "Hc2", "Hc3", "E1", "kappa", "S")


@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    stop: float
    steps: int

    def values(self) -> list[float]:
        if self.steps <= 0:
            return []
        if self.steps == 1:
            return [float(self.start)]
        return [float(x) for x in np.linspace(self.start, self.stop, self.steps)]


@dataclass
class SweepRow:
    idx: int
    params: dict
    hyperbolic: bool | None = None
    D: float = math.nan
    mu_hat: float = math.nan
    min_eig: float = math.nan
    cond122: bool | None = None
    mode_verdict: str = "n/a"
    err: str = ""
    runtime: float = 0.0


def sweep_points(axes) -> list[dict]:
    pts = [{}]
    for ax in axes:
        pts = [dict(p, **{ax.name: v}) for p in pts for v in ax.values()]
    return pts


def _sweep_one(idx, fixed, point, eos, epsilon, delta, modes_fn):
    params = dict(fixed, **point)
    row = SweepRow(idx=idx, params=point)
    t0 = time.perf_counter()
    try:
        base = make_base_state(eos=eos, **params)
        row.hyperbolic = True
        row.D = front_symbol_gap(base)
        row.mu_hat = mu_hat(base)
        if modes_fn is not None:
            row.mode_verdict = modes_fn(base)
        v = check_condition_122(base, eos, epsilon, delta)
        row.min_eig = v.min_eig
        row.cond122 = v.condition122
    except InvalidBaseState as exc:
        row.hyperbolic = not any("hyperbolicity" in m for m in exc.violations)
        row.err = type(exc).__name__
    except RvacError as exc:
        row.err = type(exc).__name__
    row.runtime = time.perf_counter() - t0
    return row


def sweep_stability(
    fixed: dict,
    axes,
    eos: Eos | None = None,
    epsilon: float | None = None,
    delta: float = 1e-3,
    threads: int = 1,
    modes: bool = True,
) -> list[SweepRow]:
    """Evaluate the stability verdict on a row-major grid.

    ``fixed`` holds base-state parameters held constant; each axis varies one
    of them.  Failures become row-level error tags.  Output order is the grid
    order whatever the thread count.
    """
    eos = eos or Eos()
    for ax in axes:
        if ax.name not in SWEEPABLE:
            raise ValueError(f"cannot sweep {ax.name!r}")
    modes_fn = None
    if modes:
        from .modes import sweep_mode_label

        modes_fn = sweep_mode_label
    pts = sweep_points(axes)
    jobs = [(i, fixed, p, eos, epsilon, delta, modes_fn) for i, p in enumerate(pts)]
    if threads <= 1:
        return [_sweep_one(*j) for j in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda j: _sweep_one(*j), jobs))
