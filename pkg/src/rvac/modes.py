"""Normal-mode analysis for the two closed-form families of planar interfaces.

Both families have v1 = v2 = 0, H1 = H2 = 0, kappa = 0 and transverse wave
vector (1, 0).  Case A has Hc2 = 0, case B has Hc3 = 0 and H3 Hc2 != 0.
Modes behave like exp(tau t + xi x1 + i x2) and decay into both media, so a
root with Re tau > 0 and Re xi < 0 on both sides means exponential growth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .densenum import determinant, find_root_1d, principal_sqrt
from .errors import BranchCut, NewtonDiverged, NoBracket, OutOfFamily
from .state import (
    Eos,
    InterfaceBaseState,
    PlasmaState,
    VacuumState,
    derive_plasma,
)
from .symbols import assemble_plasma_symbols, maxwell_symbols

FAMILY_TOL = 1e-12
CONTINUATION_KAPPA = 0.05


@dataclass(frozen=True)
class DispersionParams:
    w2: float
    m: float
    r: float
    ell: float
    cs2: float
    # The boundary relation couples q to v1 = u1 / Gamma, not to u1, so the
    # residuals use coupling = ell / Gamma = 1 / inertia.
    inertia: float  # rho h Gamma^2 + H3^2
    coupling: float


@dataclass(frozen=True)
class ModeRoot:
    tau: complex
    xi_p: complex
    xi_v: complex
    residual: float
    det_residual: float
    branch_certificate: dict
    method: str

    def as_dict(self) -> dict:
        return {
            "tau": [self.tau.real, self.tau.imag],
            "xi_p": [self.xi_p.real, self.xi_p.imag],
            "xi_v": [self.xi_v.real, self.xi_v.imag],
            "residual": self.residual,
            "det_residual": self.det_residual,
            "branch_certificate": dict(self.branch_certificate),
            "method": self.method,
        }


@dataclass(frozen=True)
class ModeVerdict:
    classification: str  # unstable | weakly_stable | degenerate_out_of_family
    family: str | None
    label: str = ""
    roots: tuple = ()
    continuation: bool = False
    notes: tuple = ()

    def as_dict(self) -> dict:
        return {
            "classification": self.classification,
            "family": self.family,
            "label": self.label,
            "continuation": self.continuation,
            "roots": [r.as_dict() for r in self.roots],
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class ScanSpec:
    re_max: float = 10.0
    im_max: float = 10.0
    grid: int = 40
    re_tol: float = 1e-4
    root_tol: float = 1e-10
    y_max: float = 100.0
    n_real: int = 2000
    gamma_prime: tuple = (1.0, 0.0)


# ---------------------------------------------------------------- family


def _common_violations(base: InterfaceBaseState, kappa_tol: float) -> list[str]:
    d = derive_plasma(base.plasma, base.eos)
    H, Hc = base.plasma.H, base.vacuum.Hc
    out = []
    if abs(base.kappa) > kappa_tol:
        out.append(f"kappa = 0 required (got {base.kappa!r})")
    if abs(d.v[0] - base.kappa) > FAMILY_TOL:
        out.append("v1 != kappa")
    if abs(d.v[1]) > FAMILY_TOL:
        out.append("v2 != 0")
    if abs(H[0]) > FAMILY_TOL or abs(H[1]) > FAMILY_TOL:
        out.append("H1 = H2 = 0 required")
    if abs(Hc[0]) > FAMILY_TOL:
        out.append("Hc1 != 0")
    return out


def family_of(base: InterfaceBaseState) -> str | None:
    """'A', 'B' or None for a base satisfying the common family conditions."""
    H3 = base.plasma.H[2]
    Hc2, Hc3 = base.vacuum.Hc[1], base.vacuum.Hc[2]
    if abs(Hc2) <= FAMILY_TOL:
        return "A"
    if abs(Hc3) <= FAMILY_TOL and H3 * Hc2 != 0.0:
        return "B"
    return None


def at_kappa_zero(base: InterfaceBaseState) -> InterfaceBaseState:
    """The same fields with the front at rest (used for small-kappa continuation)."""
    u = base.plasma.u
    plasma = PlasmaState(p=base.plasma.p, u=(0.0, u[1], u[2]), H=base.plasma.H, S=base.plasma.S)
    vacuum = VacuumState(Hc=base.vacuum.Hc, E=(base.vacuum.E[0], 0.0, 0.0))
    return InterfaceBaseState(plasma, vacuum, 0.0, base.eos)


def dispersion_params(base: InterfaceBaseState, eos: Eos | None = None) -> DispersionParams:
    eos = eos or base.eos
    bad = _common_violations(base, 0.0)
    if bad:
        raise OutOfFamily(bad)
    d = derive_plasma(base.plasma, eos)
    H3 = base.plasma.H[2]
    v3 = d.v[2]
    w2 = 1.0 - v3 * v3 * d.cs2
    m = H3 / math.sqrt(d.a2 * d.rho)
    r = w2 * (d.gamma**2 + m * m * d.cs2) / (d.cs2 * (1.0 + m * m * w2))
    inertia = d.rho * d.h * d.gamma**2 + H3 * H3
    ell = d.gamma / inertia
    return DispersionParams(
        w2=w2, m=m, r=r, ell=ell, cs2=d.cs2, inertia=inertia, coupling=1.0 / inertia
    )


# ---------------------------------------------------------------- xi branches


def xi_roots(tau: complex, params: DispersionParams) -> tuple[complex, complex]:
    """Decaying exponents -sqrt(1 + r tau^2) and -sqrt(1 + tau^2), principal branch."""
    tau = complex(tau)
    return -principal_sqrt(1.0 + params.r * tau * tau), -principal_sqrt(1.0 + tau * tau)


def branch_certificate(xi_p: complex, xi_v: complex) -> dict:
    return {"xi_p": xi_p.real < 0.0, "xi_v": xi_v.real < 0.0}


def plasma_symbol(tau: complex, xi: complex, base: InterfaceBaseState) -> np.ndarray:
    """tau A0 + xi A1hat + i A2 without the entropy row and column."""
    ps = assemble_plasma_symbols(base.plasma, base.eos)
    A1hat = ps.A1 - base.kappa * ps.A0
    return (tau * ps.A0 + xi * A1hat + 1j * ps.A2)[:7, :7]


def vacuum_symbol(tau: complex, xi: complex, kappa: float = 0.0) -> np.ndarray:
    vs = maxwell_symbols()
    return tau * np.eye(6) - xi * (vs.B1 - kappa * np.eye(6)) + 1j * vs.B2


def interior_residuals(tau: complex, base: InterfaceBaseState) -> tuple[float, float]:
    """Relative determinant residuals of both interior symbols at the chosen branches."""
    params = dispersion_params(base)
    xp, xv = xi_roots(tau, params)
    out = []
    for M in (plasma_symbol(tau, xp, base), vacuum_symbol(tau, xv)):
        scale = float(np.prod(np.linalg.norm(M, axis=1)))
        out.append(abs(determinant(M)) / max(scale, 1e-300))
    return out[0], out[1]


# ---------------------------------------------------------------- dispersion functions


def _fields(base):
    return base.vacuum.E[0], base.vacuum.Hc[1], base.vacuum.Hc[2]


def _caseA_f(tau, p: DispersionParams, E1, Hc3):
    s1 = np.sqrt(1.0 + tau * tau)
    s2 = np.sqrt(1.0 + p.r * tau * tau)
    a = E1 + 1j * Hc3 * tau
    f = tau * tau * s1 - p.coupling * a * a * s2
    df = 2 * tau * s1 + tau**3 / s1 - p.coupling * (2j * Hc3 * a * s2 + a * a * p.r * tau / s2)
    return f, df


def _caseB_f(tau, p: DispersionParams, E1, Hc2):
    s1 = np.sqrt(1.0 + tau * tau)
    s2 = np.sqrt(1.0 + p.r * tau * tau)
    c = E1 * E1 - Hc2 * Hc2 * (1.0 + tau * tau)
    f = tau * tau * s1 - p.coupling * c * s2
    df = 2 * tau * s1 + tau**3 / s1 - p.coupling * (-2 * Hc2 * Hc2 * tau * s2 + c * p.r * tau / s2)
    return f, df


@dataclass(frozen=True)
class LopatinskiValue:
    det: complex
    residual: complex
    consistency: float


def lopatinski_caseA(tau: complex, base: InterfaceBaseState, eos: Eos | None = None) -> LopatinskiValue:
    """Boundary determinant for Hc2 = 0 and the scalar dispersion residual.

    On the chosen branches det = i * inertia * residual, so the two vanish together.
    """
    if eos is not None:
        base = InterfaceBaseState(base.plasma, base.vacuum, base.kappa, eos)
    p = dispersion_params(base)
    if family_of(base) != "A":
        raise OutOfFamily(["Hc2 = 0 required for case A"])
    tau = complex(tau)
    E1, _, Hc3 = _fields(base)
    xp, xv = xi_roots(tau, p)
    M = np.array(
        [
            [1.0, 0.0, E1 + 1j * tau * Hc3],
            [xp, tau * p.inertia, 0.0],
            [0.0, 1j * E1 - tau * Hc3, -1j * tau * xv],
        ],
        dtype=complex,
    )
    det = determinant(M)
    res = complex(_caseA_f(tau, p, E1, Hc3)[0])
    return LopatinskiValue(det=det, residual=res, consistency=abs(det - 1j * p.inertia * res))


def caseB_G(y: float, params: DispersionParams, E1: float, Hc2: float) -> float:
    """G(y) = y sqrt(1+y) - coupling (E1^2 - Hc2^2 (1+y)) sqrt(1+r y) for real y >= 0."""
    return y * math.sqrt(1.0 + y) - params.coupling * (E1 * E1 - Hc2 * Hc2 * (1.0 + y)) * math.sqrt(
        1.0 + params.r * y
    )


def caseB_system(tau: complex, base: InterfaceBaseState) -> np.ndarray:
    """Linear system in (q, v1, E1, E2, E3, Hc2) from the boundary and interior relations."""
    p = dispersion_params(base)
    E1, Hc2, _ = _fields(base)
    xp, xv = xi_roots(tau, p)
    return np.array(
        [
            [1, 0, E1, 0, 0, -Hc2],
            [0, 1j * E1, 0, tau, 0, 0],
            [0, Hc2, 0, 0, 1, 0],
            [xp, tau * p.inertia, 0, 0, 0, 0],
            [0, 0, 0, 0, xv, tau],
            [0, 0, -xv, 1j, 0, 0],
        ],
        dtype=complex,
    )


def lopatinski_caseB(tau: complex, base: InterfaceBaseState, eos: Eos | None = None) -> LopatinskiValue:
    """Case B residual in tau (G at y = tau^2 for real tau) and the 6x6 system determinant.

    Eliminating E3, Hc2, E2, E1 and q leaves det = -inertia * tau * residual.
    """
    if eos is not None:
        base = InterfaceBaseState(base.plasma, base.vacuum, base.kappa, eos)
    p = dispersion_params(base)
    if family_of(base) != "B":
        raise OutOfFamily(["Hc3 = 0 and H3 Hc2 != 0 required for case B"])
    tau = complex(tau)
    E1, Hc2, _ = _fields(base)
    det = determinant(caseB_system(tau, base))
    res = complex(_caseB_f(tau, p, E1, Hc2)[0])
    return LopatinskiValue(det=det, residual=res, consistency=abs(det + p.inertia * tau * res))


# ---------------------------------------------------------------- root search


def _newton_grid(fun, scan: ScanSpec, iters: int = 60) -> np.ndarray:
    re = np.linspace(scan.re_max / scan.grid, scan.re_max, scan.grid)
    im = np.linspace(-scan.im_max, scan.im_max, scan.grid)
    z = (re[:, None] + 1j * im[None, :]).ravel()
    with np.errstate(all="ignore"):
        for _ in range(iters):
            f, df = fun(z)
            step = f / df
            z = z - step
            ok = np.isfinite(z) & (np.abs(z) < 10.0 * max(scan.re_max, scan.im_max))
            z = z[ok]
            if z.size == 0:
                break
    return z


def _polish(fun, seed, scan: ScanSpec):
    try:
        res = find_root_1d(
            lambda t: complex(fun(t)[0]),
            mode="complex_newton",
            seed=seed,
            fprime=lambda t: complex(fun(t)[1]),
            ftol=scan.root_tol,
        )
    except (NewtonDiverged, ZeroDivisionError, OverflowError):
        return None
    return res.root


def _accept(tau, scan: ScanSpec) -> bool:
    return (
        tau.real > scan.re_tol
        and abs(tau.real) <= scan.re_max * (1 + 1e-9)
        and abs(tau.imag) <= scan.im_max * (1 + 1e-9)
    )


def _dedupe(taus):
    out = []
    for t in sorted(taus, key=lambda z: (z.real, z.imag)):
        if not any(abs(t - u) <= 1e-8 * (1.0 + abs(t)) for u in out):
            out.append(t)
    return out


def _make_root(tau, base, p, case, method, scan) -> ModeRoot | None:
    try:
        xp, xv = xi_roots(tau, p)
    except BranchCut:
        return None
    if case == "A":
        lv = lopatinski_caseA(tau, base)
        det_res = abs(lv.det) / p.inertia
    else:
        lv = lopatinski_caseB(tau, base)
        det_res = abs(lv.det) / (p.inertia * abs(tau))
    resid = abs(lv.residual)
    if not resid <= scan.root_tol:
        return None
    return ModeRoot(
        tau=tau, xi_p=xp, xi_v=xv, residual=resid, det_residual=det_res,
        branch_certificate=branch_certificate(xp, xv), method=method,
    )


def complex_scan(base: InterfaceBaseState, case: str, scan: ScanSpec = ScanSpec()) -> list[ModeRoot]:
    """Grid-seeded Newton search for roots with Re tau > re_tol inside the box."""
    p = dispersion_params(base)
    E1, Hc2, Hc3 = _fields(base)
    if case == "A":
        fun = lambda t: _caseA_f(t, p, E1, Hc3)  # noqa: E731
    else:
        fun = lambda t: _caseB_f(t, p, E1, Hc2)  # noqa: E731
    z = _newton_grid(fun, scan)
    z = z[np.isfinite(z) & (z.real > 0)]
    with np.errstate(all="ignore"):
        f = fun(z)[0]
    # true roots have converged quadratically by now; stalled seeds are not worth polishing
    z = z[np.abs(f) <= 1e-6 * (1.0 + np.abs(z) ** 3)]
    cands = _dedupe([complex(c) for c in z])
    roots = []
    for c in cands:
        t = _polish(fun, c, scan)
        if t is None or not _accept(t, scan):
            continue
        r = _make_root(t, base, p, case, "newton", scan)
        if r is not None:
            roots.append(r)
    uniq = _dedupe([r.tau for r in roots])
    return [next(r for r in roots if r.tau == t) for t in uniq]


def caseA_real_root(base: InterfaceBaseState, scan: ScanSpec = ScanSpec()) -> ModeRoot | None:
    """Positive real root when Hc3 = 0 and E1 != 0, by bisection in y = tau^2."""
    p = dispersion_params(base)
    E1, _, Hc3 = _fields(base)
    if Hc3 != 0.0 or E1 == 0.0:
        return None

    def g(y):
        return y * math.sqrt(1.0 + y) - p.coupling * E1 * E1 * math.sqrt(1.0 + p.r * y)

    hi = 1.0
    while g(hi) <= 0.0:
        hi *= 2.0
        if hi > 1e12:
            raise NoBracket("no sign change found for the real case-A residual")
    y = find_root_1d(g, mode="real_bisect", bracket=(0.0, hi)).root
    return _make_root(complex(math.sqrt(y)), base, p, "A", "bisection", scan)


def caseB_real_root(base: InterfaceBaseState, scan: ScanSpec = ScanSpec()) -> ModeRoot | None:
    """Positive real root of G: bracketed on (0, y*) when E1^2 > Hc2^2, scanned otherwise."""
    p = dispersion_params(base)
    E1, Hc2, _ = _fields(base)
    G = lambda y: caseB_G(y, p, E1, Hc2)  # noqa: E731
    if E1 * E1 > Hc2 * Hc2:
        ystar = E1 * E1 / (Hc2 * Hc2) - 1.0
        if not (G(0.0) < 0.0 < G(ystar)):
            raise NoBracket(f"G(0)={G(0.0)!r}, G(y*)={G(ystar)!r}: bracket (0, y*) invalid")
        bracket = (0.0, ystar)
    else:
        ys = np.linspace(0.0, scan.y_max, scan.n_real + 1)
        vals = [G(float(y)) for y in ys]
        bracket = None
        for a, b, fa, fb in zip(ys[:-1], ys[1:], vals[:-1], vals[1:]):
            if fa == 0.0 and a > 0.0:
                bracket = (a, a)
                break
            if fa * fb < 0.0:
                bracket = (float(a), float(b))
                break
        if bracket is None:
            return None
    if bracket[0] == bracket[1]:
        y = bracket[0]
    else:
        y = find_root_1d(G, mode="real_bisect", bracket=bracket).root
    if not y > 0.0:
        return None
    return _make_root(complex(math.sqrt(y)), base, p, "B", "bisection", scan)


def classify(base: InterfaceBaseState, eos: Eos | None = None, scan: ScanSpec = ScanSpec()) -> ModeVerdict:
    """Stability verdict from the closed-form dispersion relations.

    Bases with |kappa| <= 0.05 are analysed at kappa = 0 and tagged as
    continuation results.  A zero transverse wave vector is the 1D problem,
    which is well posed by the energy estimate and is not searched.
    """
    if eos is not None:
        base = InterfaceBaseState(base.plasma, base.vacuum, base.kappa, eos)
    bad = _common_violations(base, CONTINUATION_KAPPA)
    if bad:
        raise OutOfFamily(bad)
    continuation = base.kappa != 0.0
    notes = []
    if continuation:
        notes.append(f"kappa={base.kappa!r} analysed at kappa=0 by continuity")
        base = at_kappa_zero(base)
    gp = tuple(float(x) for x in scan.gamma_prime)
    if gp == (0.0, 0.0):
        notes.append("1D problem: E1 vanishes and the energy estimate gives well-posedness")
        return ModeVerdict("weakly_stable", family_of(base), "1d-energy", (), continuation, tuple(notes))
    if gp != (1.0, 0.0):
        raise OutOfFamily([f"transverse wave vector must be (1, 0), got {gp}"])
    fam = family_of(base)
    if fam is None:
        return ModeVerdict(
            "degenerate_out_of_family", None, "", (), continuation,
            tuple(notes + ["neither Hc2 = 0 nor (Hc3 = 0 and H3 Hc2 != 0)"]),
        )
    family = "caseA_parallel_Hc_zero" if fam == "A" else "caseB_Hc2_only"
    found = []
    real = caseA_real_root(base, scan) if fam == "A" else caseB_real_root(base, scan)
    if real is not None:
        found.append(real)
    found.extend(complex_scan(base, fam, scan))
    roots = []
    for r in sorted(found, key=lambda r: (r.tau.real, r.tau.imag)):
        if all(r.branch_certificate.values()) and not any(
            abs(r.tau - s.tau) <= 1e-8 * (1 + abs(r.tau)) for s in roots
        ):
            roots.append(r)
    if roots:
        return ModeVerdict("unstable", family, "", tuple(roots), continuation, tuple(notes))
    return ModeVerdict("weakly_stable", family, "scan-neutral", (), continuation, tuple(notes))


def sweep_mode_label(base: InterfaceBaseState) -> str:
    """Short verdict for sweep tables; 'n/a' outside the closed-form families."""
    try:
        v = classify(base)
    except OutOfFamily:
        return "n/a"
    label = v.classification
    if v.continuation:
        label += "(cont)"
    return label
