"""Equation of state, RMHD primitive/derived quantities and interface base states.

Units: the speed of light is 1.  The plasma unknown is ``U = (p, u, H, S)``
with ``u`` the spatial part of the 4-velocity, the vacuum unknown is
``V = (Hc, E)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidBaseState, NonPositiveDensity, SuperluminalVelocity


def _vec3(x) -> np.ndarray:
    a = np.array(x, dtype=float).reshape(3)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Eos:
    """Polytropic closure ``p = K exp(S) rho**gamma_ad``.

    The specific internal energy is ``e = p / ((gamma_ad - 1) rho)`` which makes
    the closure thermodynamically consistent (de = T dS + p/rho^2 drho).
    """

    adiabatic_index: float = 5.0 / 3.0
    entropy_scale: float = 1.0

    def __post_init__(self):
        if not self.adiabatic_index > 1.0:
            raise ValueError("adiabatic_index must be > 1")
        if not self.entropy_scale > 0.0:
            raise ValueError("entropy_scale must be > 0")

    def density(self, p: float, S: float) -> float:
        base = p / (self.entropy_scale * math.exp(S))
        if not base > 0.0:
            raise NonPositiveDensity(f"density inversion gives rho <= 0 for p={p!r}")
        return base ** (1.0 / self.adiabatic_index)

    def pressure(self, rho: float, S: float) -> float:
        return self.entropy_scale * math.exp(S) * rho**self.adiabatic_index

    def internal_energy(self, rho: float, S: float) -> float:
        return self.pressure(rho, S) / ((self.adiabatic_index - 1.0) * rho)

    def dp_drho(self, rho: float, S: float) -> float:
        """a^2 = p_rho at fixed entropy."""
        return self.adiabatic_index * self.pressure(rho, S) / rho


@dataclass(frozen=True)
class PlasmaState:
    p: float
    u: np.ndarray
    H: np.ndarray
    S: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "u", _vec3(self.u))
        object.__setattr__(self, "H", _vec3(self.H))
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "S", float(self.S))

    def vector(self) -> np.ndarray:
        """The 8-component primitive vector (p, u, H, S)."""
        return np.concatenate(([self.p], self.u, self.H, [self.S]))


@dataclass(frozen=True)
class DerivedPlasma:
    rho: float
    gamma: float
    v: np.ndarray
    b: np.ndarray
    b0: float
    B2: float
    e: float
    h: float
    q: float
    a2: float
    cs2: float


@dataclass(frozen=True)
class VacuumState:
    Hc: np.ndarray
    E: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "Hc", _vec3(self.Hc))
        object.__setattr__(self, "E", _vec3(self.E))

    def vector(self) -> np.ndarray:
        return np.concatenate((self.Hc, self.E))


@dataclass(frozen=True)
class InterfaceBaseState:
    """Piecewise-constant plasma/vacuum state with planar front ``x1 = kappa t``."""

    plasma: PlasmaState
    vacuum: VacuumState
    kappa: float
    eos: Eos = field(default_factory=Eos)


def derive_plasma(state: PlasmaState, eos: Eos) -> DerivedPlasma:
    u, H = state.u, state.H
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(H))):
        raise SuperluminalVelocity("non-finite velocity or field")
    gamma = math.sqrt(1.0 + float(u @ u))
    v = u / gamma
    if not float(v @ v) < 1.0:
        raise SuperluminalVelocity(f"|v| >= 1 (Gamma={gamma!r})")
    if not state.p > 0.0:
        raise NonPositiveDensity(f"pressure must be positive, got {state.p!r}")
    rho = eos.density(state.p, state.S)
    b0 = float(u @ H)
    b = H / gamma + b0 * v
    B2 = float(b @ b) - b0 * b0
    e = eos.internal_energy(rho, state.S)
    h = 1.0 + e + state.p / rho
    a2 = eos.dp_drho(rho, state.S)
    return DerivedPlasma(
        rho=rho,
        gamma=gamma,
        v=v,
        b=b,
        b0=b0,
        B2=B2,
        e=e,
        h=h,
        q=state.p + 0.5 * B2,
        a2=a2,
        cs2=a2 / h,
    )


def magnetic_pressure_alt(state: PlasmaState) -> float:
    """B^2 from the 3-vector form |H|^2/Gamma^2 + (v, H)^2."""
    gamma2 = 1.0 + float(state.u @ state.u)
    vH = float(state.u @ state.H) / math.sqrt(gamma2)
    return float(state.H @ state.H) / gamma2 + vH * vH


@dataclass(frozen=True)
class AdmissibilityReport:
    rho_positive: bool
    p_rho_positive: bool
    causal: bool
    subluminal: bool
    a0_positive_definite: bool
    a0_min_pivot: float
    cs2: float

    @property
    def analytic_ok(self) -> bool:
        return self.rho_positive and self.p_rho_positive and self.causal and self.subluminal

    @property
    def consistent(self) -> bool:
        # the analytic flags are sufficient for A0 > 0, not necessary
        return (not self.analytic_ok) or self.a0_positive_definite

    def as_dict(self) -> dict:
        return {
            "rho_positive": self.rho_positive,
            "p_rho_positive": self.p_rho_positive,
            "causal": self.causal,
            "subluminal": self.subluminal,
            "a0_positive_definite": self.a0_positive_definite,
            "a0_min_pivot": self.a0_min_pivot,
            "cs2": self.cs2,
            "analytic_ok": self.analytic_ok,
            "consistent": self.consistent,
        }


def check_hyperbolic(state: PlasmaState, eos: Eos) -> AdmissibilityReport:
    from .densenum import cholesky_pd
    from .symbols import _a0, plasma_blocks

    try:
        d = derive_plasma(state, eos)
    except NonPositiveDensity:
        return AdmissibilityReport(False, False, False, True, False, float("nan"), float("nan"))
    except SuperluminalVelocity:
        return AdmissibilityReport(True, True, False, False, False, float("nan"), float("nan"))
    pd = cholesky_pd(_a0(d, plasma_blocks(state, eos, d)))
    return AdmissibilityReport(
        rho_positive=d.rho > 0.0,
        p_rho_positive=d.a2 > 0.0,
        causal=0.0 < d.cs2 < 1.0,
        subluminal=float(d.v @ d.v) < 1.0,
        a0_positive_definite=pd.pd,
        a0_min_pivot=pd.min_pivot,
        cs2=d.cs2,
    )


def lorentz_u1(kappa: float, u2: float, u3: float) -> float:
    """u1 such that u1 / Gamma = kappa given the tangential components."""
    return kappa * math.sqrt((1.0 + u2 * u2 + u3 * u3) / (1.0 - kappa * kappa))


def make_base_state(
    *,
    p: float,
    u2: float,
    u3: float,
    H2: float,
    H3: float,
    Hc2: float,
    Hc3: float,
    E1: float,
    kappa: float,
    S: float = 0.0,
    u1: float | None = None,
    eos: Eos | None = None,
    require_expansion: bool = True,
) -> InterfaceBaseState:
    """Build the constant solution of the planar front problem.

    ``u1`` is derived from ``kappa`` unless supplied, in which case it must be
    consistent with ``v1 = kappa``.  ``E2, E3`` are assigned from the jump
    relations and the normal field components are zero by construction.
    ``require_expansion=False`` admits ``kappa = 0`` (normal-mode families).
    """
    eos = eos or Eos()
    bad = []
    if not abs(kappa) < 1.0:
        bad.append(f"|kappa| < 1 violated (kappa={kappa!r})")
    elif kappa > 0.0:
        bad.append(f"kappa must be <= 0, shrinkage regime unsupported (kappa={kappa!r})")
    elif require_expansion and kappa == 0.0:
        bad.append("kappa = 0 rejected: the stability pipeline needs det(B1 - kappa I) != 0")
    if bad:
        raise InvalidBaseState(bad)

    derived_u1 = lorentz_u1(kappa, u2, u3)
    if u1 is not None and abs(u1 - derived_u1) > 1e-12 * max(1.0, abs(derived_u1)):
        bad.append(f"u1={u1!r} inconsistent with v1=kappa (expected {derived_u1!r})")
    plasma = PlasmaState(p=p, u=(derived_u1, u2, u3), H=(0.0, H2, H3), S=S)
    vacuum = VacuumState(Hc=(0.0, Hc2, Hc3), E=(E1, kappa * Hc3, -kappa * Hc2))
    if not bad:
        rep = check_hyperbolic(plasma, eos)
        if not rep.analytic_ok:
            flags = [k for k in ("rho_positive", "p_rho_positive", "causal", "subluminal")
                     if not getattr(rep, k)]
            bad.append("hyperbolicity violated: " + ", ".join(flags))
    if bad:
        raise InvalidBaseState(bad)
    return InterfaceBaseState(plasma=plasma, vacuum=vacuum, kappa=float(kappa), eos=eos)


def base_state_violations(base: InterfaceBaseState, tol: float = 1e-12) -> list[str]:
    """Relations of the constant solution that ``base`` fails, if any."""
    out = []
    d = derive_plasma(base.plasma, base.eos)
    k = base.kappa
    Hc, E = base.vacuum.Hc, base.vacuum.E
    if abs(d.v[0] - k) > tol:
        out.append(f"v1 != kappa ({d.v[0]!r} vs {k!r})")
    if abs(base.plasma.H[0]) > tol:
        out.append("H1 != 0")
    if abs(Hc[0]) > tol:
        out.append("Hc1 != 0")
    if abs(E[1] - k * Hc[2]) > tol:
        out.append("E2 != kappa*Hc3")
    if abs(E[2] + k * Hc[1]) > tol:
        out.append("E3 != -kappa*Hc2")
    if not abs(k) < 1.0:
        out.append("|kappa| >= 1")
    return out


def mu_hat(base: InterfaceBaseState) -> float:
    """Signed coefficient E1 + v2 Hc3 - v3 Hc2; its modulus is the smallness parameter."""
    d = derive_plasma(base.plasma, base.eos)
    Hc = base.vacuum.Hc
    return float(base.vacuum.E[0] + d.v[1] * Hc[2] - d.v[2] * Hc[1])


def front_symbol_gap(base: InterfaceBaseState) -> float:
    """D = H2 Hc3 - H3 Hc2; the front symbol is elliptic iff D != 0."""
    H, Hc = base.plasma.H, base.vacuum.Hc
    return float(H[1] * Hc[2] - H[2] * Hc[1])


def random_admissible_state(rng: np.random.Generator, eos: Eos | None = None) -> PlasmaState:
    """Draw p in [0.1, 10], |u| <= 2, |H| <= 3, S in [-1, 1]."""

    def ball(radius):
        d = rng.normal(size=3)
        return d / np.linalg.norm(d) * radius * rng.uniform() ** (1.0 / 3.0)

    return PlasmaState(p=rng.uniform(0.1, 10.0), u=ball(2.0), H=ball(3.0), S=rng.uniform(-1.0, 1.0))
