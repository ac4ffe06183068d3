"""INI run configuration: parsing, validation and canonical serialization.

Example::

    [eos]
    gamma_ad = 1.6666666666666667

    [plasma]
    p = 1.0
    u = auto, 0.0, 0.2      # u1 = auto derives it from kappa
    H = 0, 0, 2
    S = 0

    [vacuum]
    Hc = 0, 0.5, 0
    E1 = 0.05

    [interface]
    kappa = -0.1

    [sweep]
    axis1 = E1, 0, 1, 11
    axis2 = Hc2, 0.1, 1, 11
"""

from __future__ import annotations

import configparser
import hashlib
import math
import re
from dataclasses import dataclass, field

from .errors import ParseError, ValidationError
from .state import Eos, make_base_state
from .stability import SWEEPABLE, SweepAxis

SCHEMA = {
    "eos": {"gamma_ad": False, "entropy_scale": False},
    "plasma": {"p": True, "u": True, "H": True, "S": False},
    "vacuum": {"Hc": True, "E1": True},
    "interface": {"kappa": True, "epsilon": False, "delta": False},
    "sweep": None,  # axisN keys
    "modes": {"grid": False, "re_max": False, "im_max": False, "gamma_prime": False},
}
VECTOR_KEYS = {"u", "H", "Hc", "gamma_prime"}
AXIS_KEY = re.compile(r"axis[1-9][0-9]*$")


@dataclass(frozen=True)
class RunConfig:
    gamma_ad: float = 5.0 / 3.0
    entropy_scale: float = 1.0
    plasma: dict | None = None  # p, u (u1 may be None for auto), H, S
    vacuum: dict | None = None  # Hc, E1
    interface: dict | None = None  # kappa, epsilon (None = default), delta
    sweep: tuple = ()
    modes: dict = field(default_factory=dict)

    @property
    def eos(self) -> Eos:
        return Eos(self.gamma_ad, self.entropy_scale)

    def base_params(self) -> dict:
        """Keyword arguments for make_base_state."""
        if self.plasma is None or self.vacuum is None or self.interface is None:
            missing = [n for n in ("plasma", "vacuum", "interface") if getattr(self, n) is None]
            raise ValidationError([(n, "section required for this command") for n in missing])
        u, H, Hc = self.plasma["u"], self.plasma["H"], self.vacuum["Hc"]
        return dict(
            p=self.plasma["p"], u2=u[1], u3=u[2], H2=H[1], H3=H[2],
            Hc2=Hc[1], Hc3=Hc[2], E1=self.vacuum["E1"], kappa=self.interface["kappa"],
            S=self.plasma["S"], u1=u[0],
        )

    def base_state(self, require_expansion: bool = True):
        return make_base_state(eos=self.eos, require_expansion=require_expansion, **self.base_params())


def _float(text: str) -> float:
    x = float(text)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {text!r}")
    return x


def _line_numbers(text: str) -> dict:
    """Map (section, key) to the 1-based line where the key is defined."""
    out, section = {}, None
    for i, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if s.startswith("[") and s.endswith("]"):
            section = s[1:-1].strip()
        elif section and ("=" in s) and not s.startswith(("#", ";")):
            out[(section, s.split("=", 1)[0].strip())] = i
    return out


def parse_config(text: str) -> RunConfig:
    """Parse and validate; every problem found is reported, not only the first."""
    cp = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#", ";"), strict=True, delimiters=("=",)
    )
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        raise ParseError([(exc.lineno, "key outside of any section")]) from None
    except configparser.ParsingError as exc:
        raise ParseError([(ln, f"cannot parse {line.strip()!r}") for ln, line in exc.errors]) from None
    except (configparser.DuplicateSectionError, configparser.DuplicateOptionError) as exc:
        raise ParseError([(exc.lineno, exc.message.split(":")[-1].strip() or str(exc))]) from None

    lines = _line_numbers(text)
    errors: list = []

    def err(path, msg):
        errors.append((path, msg))

    for sec in cp.sections():
        if sec not in SCHEMA:
            err(sec, "unknown section")
            continue
        for key in cp[sec]:
            known = AXIS_KEY.match(key) if sec == "sweep" else key in SCHEMA[sec]
            if not known:
                err(f"{sec}.{key}", f"unknown key (line {lines.get((sec, key), '?')})")
        if SCHEMA[sec]:
            for key, required in SCHEMA[sec].items():
                if required and key not in cp[sec]:
                    err(f"{sec}.{key}", "missing required key")

    def num(sec, key, default=None):
        if sec not in cp or key not in cp[sec]:
            return default
        try:
            return _float(cp[sec][key])
        except ValueError:
            err(f"{sec}.{key}", f"not a number: {cp[sec][key]!r}")
            return default

    def vec(sec, key, allow_auto=False):
        if sec not in cp or key not in cp[sec]:
            return None
        parts = [s.strip() for s in cp[sec][key].split(",")]
        if len(parts) != (2 if key == "gamma_prime" else 3):
            err(f"{sec}.{key}", f"expected {2 if key == 'gamma_prime' else 3} comma-separated values")
            return None
        out = []
        for i, s in enumerate(parts):
            if allow_auto and i == 0 and s == "auto":
                out.append(None)
                continue
            try:
                out.append(_float(s))
            except ValueError:
                err(f"{sec}.{key}[{i + 1}]", f"not a number: {s!r}")
                return None
        return tuple(out)

    gamma_ad = num("eos", "gamma_ad", 5.0 / 3.0)
    entropy_scale = num("eos", "entropy_scale", 1.0)
    if gamma_ad is not None and not gamma_ad > 1.0:
        err("eos.gamma_ad", "must be > 1")
    if entropy_scale is not None and not entropy_scale > 0.0:
        err("eos.entropy_scale", "must be > 0")

    plasma = vacuum = interface = None
    if "plasma" in cp:
        p = num("plasma", "p")
        if p is not None and not p > 0.0:
            err("plasma.p", "pressure must be positive")
        H = vec("plasma", "H")
        if H is not None and H[0] != 0.0:
            err("plasma.H[1]", "normal field component must be 0")
        plasma = {"p": p, "u": vec("plasma", "u", allow_auto=True), "H": H, "S": num("plasma", "S", 0.0)}
    if "vacuum" in cp:
        Hc = vec("vacuum", "Hc")
        if Hc is not None and Hc[0] != 0.0:
            err("vacuum.Hc[1]", "normal field component must be 0")
        vacuum = {"Hc": Hc, "E1": num("vacuum", "E1")}
    if "interface" in cp:
        kappa = num("interface", "kappa")
        if kappa is not None:
            if kappa > 0.0:
                err("interface.kappa", "kappa must be negative (expansion regime)")
            elif not kappa > -1.0:
                err("interface.kappa", "kappa must exceed -1")
        eps = num("interface", "epsilon")
        if eps is not None and not eps > 0.0:
            err("interface.epsilon", "must be > 0")
        delta = num("interface", "delta", 1e-3)
        if delta is not None and not delta > 0.0:
            err("interface.delta", "must be > 0")
        interface = {"kappa": kappa, "epsilon": eps, "delta": delta}
    if plasma and plasma["u"] is not None and plasma["u"][0] is None and interface is None:
        err("plasma.u[1]", "auto requires [interface] kappa")

    axes = []
    if "sweep" in cp:
        for key in sorted(cp["sweep"], key=lambda k: int(k[4:]) if AXIS_KEY.match(k) else 0):
            if not AXIS_KEY.match(key):
                continue
            parts = [s.strip() for s in cp["sweep"][key].split(",")]
            if len(parts) != 4:
                err(f"sweep.{key}", "expected: name, start, stop, steps")
                continue
            name = parts[0]
            if name not in SWEEPABLE:
                err(f"sweep.{key}", f"unknown parameter {name!r}; choose from {', '.join(SWEEPABLE)}")
                continue
            try:
                start, stop = _float(parts[1]), _float(parts[2])
                steps = int(parts[3])
            except ValueError:
                err(f"sweep.{key}", "start/stop must be numbers and steps an integer")
                continue
            if steps < 0:
                err(f"sweep.{key}", "steps must be >= 0")
                continue
            axes.append(SweepAxis(name, start, stop, steps))
        names = [a.name for a in axes]
        if len(set(names)) != len(names):
            err("sweep", "an axis name is repeated")

    modes = {}
    if "modes" in cp:
        for key in ("grid", "re_max", "im_max"):
            x = num("modes", key)
            if x is not None:
                if not x > 0:
                    err(f"modes.{key}", "must be > 0")
                modes[key] = int(x) if key == "grid" else x
        gp = vec("modes", "gamma_prime")
        if gp is not None:
            modes["gamma_prime"] = gp

    if errors:
        raise ValidationError(errors)
    return RunConfig(
        gamma_ad=gamma_ad,
        entropy_scale=entropy_scale,
        plasma=plasma,
        vacuum=vacuum,
        interface=interface,
        sweep=tuple(axes),
        modes=modes,
    )


def _fmt(x) -> str:
    if x is None:
        return "auto"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def serialize(cfg: RunConfig) -> str:
    """Canonical INI text; parse_config(serialize(cfg)) == cfg."""
    out = ["[eos]", f"gamma_ad = {_fmt(cfg.gamma_ad)}", f"entropy_scale = {_fmt(cfg.entropy_scale)}"]
    if cfg.plasma is not None:
        pl = cfg.plasma
        out += [
            "", "[plasma]", f"p = {_fmt(pl['p'])}",
            "u = " + ", ".join(_fmt(x) for x in pl["u"]),
            "H = " + ", ".join(_fmt(x) for x in pl["H"]),
            f"S = {_fmt(pl['S'])}",
        ]
    if cfg.vacuum is not None:
        out += [
            "", "[vacuum]",
            "Hc = " + ", ".join(_fmt(x) for x in cfg.vacuum["Hc"]),
            f"E1 = {_fmt(cfg.vacuum['E1'])}",
        ]
    if cfg.interface is not None:
        it = cfg.interface
        out += ["", "[interface]", f"kappa = {_fmt(it['kappa'])}"]
        if it["epsilon"] is not None:
            out.append(f"epsilon = {_fmt(it['epsilon'])}")
        out.append(f"delta = {_fmt(it['delta'])}")
    if cfg.sweep:
        out += ["", "[sweep]"]
        for i, ax in enumerate(cfg.sweep, start=1):
            out.append(f"axis{i} = {ax.name}, {_fmt(ax.start)}, {_fmt(ax.stop)}, {ax.steps}")
    if cfg.modes:
        out += ["", "[modes]"]
        for key in ("grid", "re_max", "im_max"):
            if key in cfg.modes:
                out.append(f"{key} = {_fmt(cfg.modes[key])}")
        if "gamma_prime" in cfg.modes:
            out.append("gamma_prime = " + ", ".join(_fmt(x) for x in cfg.modes["gamma_prime"]))
    return "\n".join(out) + "\n"


def config_hash(cfg: RunConfig) -> str:
    return hashlib.sha256(serialize(cfg).encode()).hexdigest()
