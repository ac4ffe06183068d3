"""Command-line front end.

    rvac COMMAND --config run.ini [--out DIR] [--format csv|jsonl] [--threads N]

Commands: check, matrices, boundary, stability, modes, sweep.  Results are
written as files under ``--out`` (or to stdout without it).  A short summary
goes to stderr.  The exit status is 0 whenever the analysis ran, including
unstable verdicts; 2 means a bad config, 3 an analysis that could not run,
4 an output error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .boundary import normal_recovery, vacuum_boundary_eigen, w_transform
from .config import RunConfig, config_hash, parse_config
from .densenum import sym_eigen
from .errors import OutOfFamily, ParseError, RvacError, ValidationError
from .modes import ScanSpec, at_kappa_zero, classify, dispersion_params
from .stability import assemble_Q, check_condition_122, sweep_stability
from .state import base_state_violations, check_hyperbolic, derive_plasma, PlasmaState
from .symbols import assemble_G, assemble_plasma_symbols, boundary_symbols, maxwell_symbols, secondary_symmetrizer

COMMANDS = ("check", "matrices", "boundary", "stability", "modes", "sweep")
SWEEP_TAIL = ("hyperbolic", "D", "mu_hat", "min_eig", "cond122", "mode_verdict", "err")

EXIT_OK, EXIT_CONFIG, EXIT_ANALYSIS, EXIT_IO = 0, 2, 3, 4


# ---------------------------------------------------------------- serialization


def fmt_float(x) -> str:
    return format(float(x), ".17g")


def to_json(obj) -> str:
    """Compact JSON with 17-significant-digit floats; non-finite floats become null."""
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return _json_str(obj)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{_json_str(str(k))}:{to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _json_str(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return fmt_float(x) if math.isfinite(x) else ("nan" if math.isnan(x) else ("inf" if x > 0 else "-inf"))
    if isinstance(x, (list, tuple)):
        return '"' + " ".join(_csv_cell(v) for v in x) + '"'
    s = str(x)
    if any(c in s for c in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def matrix_csv(name: str, M) -> str:
    M = np.asarray(M, dtype=float)
    dim = str(M.shape[0]) if M.shape[0] == M.shape[1] else f"{M.shape[0]}x{M.shape[1]}"
    lines = [f"# matrix {name} dim {dim}"]
    lines += [",".join(fmt_float(x) for x in row) for row in M]
    return "\n".join(lines) + "\n"


def _flatten(d: dict, prefix: str = "") -> list:
    out = []
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out += _flatten(v, key + ".")
        else:
            out.append((key, v))
    return out


def record_text(record: dict, fmt: str) -> str:
    if fmt == "jsonl":
        return to_json(record) + "\n"
    rows = ["key,value"] + [f"{_csv_cell(k)},{_csv_cell(v)}" for k, v in _flatten(record)]
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------- bundle


@dataclass
class OutputBundle:
    command: str
    fmt: str
    files: dict = field(default_factory=dict)  # file name -> text
    summary: list = field(default_factory=list)  # (label, value, good?) for the terminal
    meta: dict = field(default_factory=dict)


def _meta(cmd: str, cfg: RunConfig, fmt: str) -> dict:
    return {
        "tool": "rvac",
        "version": __version__,
        "command": cmd,
        "format": fmt,
        "config_sha256": config_hash(cfg),
        "eos": {"gamma_ad": cfg.gamma_ad, "entropy_scale": cfg.entropy_scale},
    }


def _plasma_only(cfg: RunConfig) -> PlasmaState:
    if cfg.plasma is None:
        raise ValidationError([("plasma", "section required for this command")])
    pl = cfg.plasma
    u = pl["u"]
    if u[0] is None:
        from .state import lorentz_u1

        u = (lorentz_u1(cfg.interface["kappa"], u[1], u[2]), u[1], u[2])
    return PlasmaState(p=pl["p"], u=u, H=pl["H"], S=pl["S"])


def _has_base(cfg: RunConfig) -> bool:
    return None not in (cfg.plasma, cfg.vacuum, cfg.interface)


def _cmd_check(cfg, fmt, threads):
    state = _plasma_only(cfg)
    rep = check_hyperbolic(state, cfg.eos)
    record = {"admissibility": rep.as_dict()}
    if rep.rho_positive and rep.subluminal:
        d = derive_plasma(state, cfg.eos)
        record["derived"] = {
            "rho": d.rho, "gamma": d.gamma, "h": d.h, "q": d.q, "B2": d.B2, "a2": d.a2, "cs2": d.cs2,
        }
    if _has_base(cfg):
        try:
            base = cfg.base_state(require_expansion=False)
            record["base_state_violations"] = base_state_violations(base)
        except RvacError as exc:
            record["base_state_violations"] = getattr(exc, "violations", [str(exc)])
    ok = rep.analytic_ok and rep.a0_positive_definite
    return {f"check.{fmt}": record_text(record, fmt)}, [("admissible", ok, ok)]


def _matrices(cfg):
    state = _plasma_only(cfg)
    eos = cfg.eos
    ps = assemble_plasma_symbols(state, eos)
    vs = maxwell_symbols()
    sec = secondary_symmetrizer(derive_plasma(state, eos).v)
    mats = [("A0", ps.A0), ("A1", ps.A1), ("A2", ps.A2), ("A3", ps.A3)]
    mats += [(f"G{j}", assemble_G(state, eos, j)) for j in (1, 2, 3)]
    mats += [("B1", vs.B1), ("B2", vs.B2), ("B3", vs.B3)]
    mats += [(f"Bc{j}", sec.Bc(j)) for j in range(4)]
    mats += [(f"K{j}", sec.K(j)) for j in (1, 2, 3)]
    if _has_base(cfg):
        base = cfg.base_state(require_expansion=False)
        bs = boundary_symbols(base)
        mats += [("A1hat", bs.A1hat), ("B1hat", bs.B1hat), ("Bc1hat", bs.Bc1hat)]
        if base.kappa < 0.0:
            try:
                sm = assemble_Q(base)
                mats += [("Afrak", sm.Afrak), ("Q", sm.Q), ("Q1", sm.Q1)]
            except RvacError:
                pass
    return mats


def _cmd_matrices(cfg, fmt, threads):
    # matrix dumps are always CSV, one file each; --format only affects records
    mats = _matrices(cfg)
    files = {f"matrix_{name}.csv": matrix_csv(name, M) for name, M in mats}
    return files, [("matrices", len(mats), True)]


def _cmd_boundary(cfg, fmt, threads):
    base = cfg.base_state(require_expansion=False)
    spec = vacuum_boundary_eigen(base.kappa, 0.0, 0.0)
    bs = boundary_symbols(base)
    A = bs.A1hat
    eig = sym_eigen(A).eigenvalues
    tol = 1e-10 * float(np.linalg.norm(A))
    wt = w_transform(base)
    record = {
        "regime": spec.regime,
        "lambdas": list(spec.lambdas),
        "lambdas_numeric": list(spec.numeric),
        "n_incoming_vacuum": spec.n_incoming_vacuum,
        "n_incoming_plasma": spec.n_incoming_plasma,
        "plasma_signature": {
            "positive": int(np.sum(eig > tol)),
            "negative": int(np.sum(eig < -tol)),
            "zero": int(np.sum(np.abs(eig) <= tol)),
        },
        "A1hat_eigenvalues": list(eig),
        "det_B1hat": bs.det_B1hat,
        "w_transform_residual": wt.residual,
        "normal_recovery_available": base.kappa != 0.0,
    }
    if base.kappa != 0.0:
        normal_recovery(base)
    return {f"boundary.{fmt}": record_text(record, fmt)}, [("regime", spec.regime, True)]


def _cmd_stability(cfg, fmt, threads):
    base = cfg.base_state()
    it = cfg.interface
    v = check_condition_122(base, epsilon=it["epsilon"], delta=it["delta"])
    record = v.as_dict()
    return {f"stability.{fmt}": record_text(record, fmt)}, [
        ("sufficient_stable", v.sufficient_stable, v.sufficient_stable),
        ("mu_hat", v.muhat, None),
    ]


def _scan_spec(cfg) -> ScanSpec:
    kw = {k: cfg.modes[k] for k in ("grid", "re_max", "im_max") if k in cfg.modes}
    if "gamma_prime" in cfg.modes:
        kw["gamma_prime"] = tuple(cfg.modes["gamma_prime"])
    return ScanSpec(**kw)


def _cmd_modes(cfg, fmt, threads):
    base = cfg.base_state(require_expansion=False)
    verdict = classify(base, scan=_scan_spec(cfg))
    record = verdict.as_dict()
    try:
        p = dispersion_params(at_kappa_zero(base) if base.kappa != 0.0 else base)
        record["dispersion"] = {
            "w2": p.w2, "m": p.m, "r": p.r, "ell": p.ell, "coupling": p.coupling, "cs2": p.cs2,
        }
    except OutOfFamily:
        record["dispersion"] = None
    record["eos"] = {"gamma_ad": cfg.gamma_ad, "entropy_scale": cfg.entropy_scale}
    good = verdict.classification != "unstable"
    return {f"modes.{fmt}": record_text(record, fmt)}, [("classification", verdict.classification, good)]


def _cmd_sweep(cfg, fmt, threads):
    fixed = cfg.base_params()
    names = [ax.name for ax in cfg.sweep]
    for n in names:
        fixed.pop(n, None)
    it = cfg.interface
    rows = sweep_stability(
        fixed, cfg.sweep, eos=cfg.eos, epsilon=it["epsilon"], delta=it["delta"], threads=threads
    )
    header = ["idx", *names, *SWEEP_TAIL]
    if fmt == "csv":
        lines = [",".join(header)]
        for r in rows:
            cells = [r.idx, *(r.params[n] for n in names), r.hyperbolic, r.D, r.mu_hat, r.min_eig,
                     r.cond122, r.mode_verdict, r.err]
            lines.append(",".join(_csv_cell(c) for c in cells))
        text = "\n".join(lines) + "\n"
    else:
        text = "".join(
            to_json({
                "idx": r.idx, **{n: r.params[n] for n in names},
                "hyperbolic": r.hyperbolic, "D": r.D, "mu_hat": r.mu_hat, "min_eig": r.min_eig,
                "cond122": r.cond122, "mode_verdict": r.mode_verdict, "err": r.err,
            }) + "\n"
            for r in rows
        )
    n_ok = sum(1 for r in rows if r.cond122)
    return {f"sweep.{fmt}": text}, [("points", len(rows), True), ("cond122 true", n_ok, None)]


HANDLERS = {
    "check": _cmd_check,
    "matrices": _cmd_matrices,
    "boundary": _cmd_boundary,
    "stability": _cmd_stability,
    "modes": _cmd_modes,
    "sweep": _cmd_sweep,
}


def run_command(cmd: str, cfg: RunConfig, fmt: str = "jsonl", threads: int = 1) -> OutputBundle:
    if cmd not in HANDLERS:
        raise ValueError(f"unknown command {cmd!r}")
    if fmt not in ("csv", "jsonl"):
        raise ValueError(f"unknown format {fmt!r}")
    files, summary = HANDLERS[cmd](cfg, fmt, threads)
    meta = _meta(cmd, cfg, fmt)
    files[f"{cmd}.meta.json"] = to_json(meta) + "\n"
    return OutputBundle(command=cmd, fmt=fmt, files=files, summary=summary, meta=meta)


def write_output(bundle: OutputBundle, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in bundle.files.items():
        path = out / name
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        written.append(path)
    return written


# ---------------------------------------------------------------- entry point


def _use_color(stream) -> bool:
    return "RVAC_NO_COLOR" not in os.environ and hasattr(stream, "isatty") and stream.isatty()


def _paint(text: str, good, color: bool) -> str:
    if not color or good is None:
        return text
    return f"\033[{'32' if good else '31'}m{text}\033[0m"


def _value_text(v) -> str:
    if isinstance(v, float):
        return format(v, ".6g")
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rvac", description="Plasma-vacuum interface stability analysis")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, metavar="PATH", help="INI run configuration")
    ap.add_argument("--out", metavar="DIR", help="output directory (default: print to stdout)")
    ap.add_argument("--format", choices=("csv", "jsonl"), default="jsonl")
    ap.add_argument("--threads", type=int, default=1, metavar="N", help="worker threads for sweeps")
    ap.add_argument("--version", action="version", version=f"rvac {__version__}")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    err = sys.stderr
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"rvac: cannot read config {args.config}: {exc.strerror}", file=err)
        return EXIT_CONFIG
    try:
        cfg = parse_config(text)
    except (ParseError, ValidationError) as exc:
        print(f"rvac: invalid config {args.config}:", file=err)
        for line in str(exc).splitlines():
            print(f"  {line}", file=err)
        return EXIT_CONFIG
    try:
        bundle = run_command(args.command, cfg, args.format, max(1, args.threads))
    except ValidationError as exc:
        print(f"rvac: config incomplete for {args.command}: {exc}", file=err)
        return EXIT_CONFIG
    except RvacError as exc:
        print(f"rvac: {args.command} failed: {type(exc).__name__}: {exc}", file=err)
        return EXIT_ANALYSIS
    if args.out:
        try:
            paths = write_output(bundle, args.out)
        except OSError as exc:
            print(f"rvac: cannot write {exc.filename}: {exc.strerror}", file=err)
            return EXIT_IO
    else:
        paths = []
        for name, body in bundle.files.items():
            if not name.endswith(".meta.json"):
                sys.stdout.write(body)
    color = _use_color(err)
    for label, value, good in bundle.summary:
        print(f"{label}: {_paint(_value_text(value), good, color)}", file=err)
    for p in paths:
        print(f"wrote {p}", file=err)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
