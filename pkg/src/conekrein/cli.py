"""Batch command-line front end.

Subcommands (all emit machine-readable JSON or CSV on stdout):

    cone-smatrix   diagonal S-matrix of the infinite cone on a lambda grid
    spectrum       eigenvalues of a selected extension (or Friedrichs)
    shift          spectral shift function on a t grid
    trace-check    Krein trace identity residual at one lambda
    det-ratio      determinant-comparison data (d, D*(0), Gamma, ratio)
    sphere-s0      harmonic-limit 2x2 block of the genus-0 sphere example
    torus-s00      marked-torus log-channel entry on a lambda grid
    relzeta        relative zeta data from spectra (model pair, CSV, or preset)

Option precedence is flags > config file > defaults; the config file is
INI-style key=value with [model], [bc] and [run] sections.  Floating-point
output is serialized with 17 significant digits, so identical inputs give
byte-identical output.  Exit codes: 0 success, 2 validation error, 3
numerical-convergence error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import configparser
import json
import math
import sys

import numpy as np

from . import krein, relzeta
from .channels import ChannelSet, ExtensionBC, friedrichs_bc, rotation_bc
from .errors import ConvergenceError, ValidationError, ConeKreinError
from .models import (
    SpectrumList,
    TorusLattice,
    TorusPointModel,
    TruncatedConeModel,
    cone_s_matrix,
    model_from_json,
)
from .sphere import SphereConfig, SphereS54Model, hexagon_config, s0_block

# ----------------------------------------------------------------------
# deterministic serialization
# ----------------------------------------------------------------------


def _fmt_float(v: float) -> str:
    if isinstance(v, float) and (math.isnan(v) or math.isinf(v)):
        return '"%s"' % repr(v)
    return format(float(v), ".17g")


def to_json_text(obj) -> str:
    """JSON with floats at 17 significant digits and sorted keys."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, complex):
        return "[%s, %s]" % (_fmt_float(obj.real), _fmt_float(obj.imag))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: kv[0])
        return "{" + ", ".join(json.dumps(str(k)) + ": " + to_json_text(v) for k, v in items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(to_json_text(v) for v in obj) + "]"
    raise ValidationError(f"cannot serialize {type(obj).__name__}")


def _emit(args, payload: dict, csv_rows=None, csv_header=None):
    if args.out == "json":
        sys.stdout.write(to_json_text(payload) + "\n")
    else:
        if csv_rows is None:
            raise ValidationError("this command has no CSV form")
        sys.stdout.write(",".join(csv_header) + "\n")
        for row in csv_rows:
            cells = []
            for c in row:
                if isinstance(c, (float, np.floating)):
                    cells.append(format(float(c), ".17g"))
                else:
                    cells.append(str(c))
            sys.stdout.write(",".join(cells) + "\n")


# ----------------------------------------------------------------------
# argument parsing helpers
# ----------------------------------------------------------------------


def _parse_model(text: str):
    if text is None:
        raise ValidationError("no model given (use --model or a config file)")
    text = text.strip()
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return model_from_json(json.load(fh))
    if text.startswith("{"):
        return model_from_json(json.loads(text))
    kind, _, rest = text.partition(":")
    opts = {}
    if rest:
        for item in rest.split(","):
            k, _, v = item.partition("=")
            opts[k.strip()] = v.strip()
    if kind in ("tc", "truncated-cone", "truncated_cone"):
        return TruncatedConeModel(
            theta=float(opts.get("theta", 4.0 * math.pi)),
            radius=float(opts.get("radius", opts.get("R", 1.0))),
        )
    if kind == "torus":
        v1 = [float(x) for x in opts.get("v1", "1 0").split()]
        v2 = [float(x) for x in opts.get("v2", "0 1").split()]
        return TorusPointModel(TorusLattice(tuple(v1), tuple(v2)))
    if kind in ("sphere-hex", "sphere_hex"):
        return SphereS54Model(hexagon_config(float(opts.get("scale", 1.0))))
    if kind == "sphere":
        pts = _parse_sphere_points(opts.get("z", ""))
        return SphereS54Model(SphereConfig(pts))
    raise ValidationError(f"unknown model spec {text!r}")


def _parse_sphere_points(text: str) -> tuple:
    pts = []
    for part in text.split(";"):
        if not part.strip():
            continue
        re_s, _, im_s = part.partition(" ")
        pts.append(complex(float(re_s), float(im_s or 0.0)))
    if len(pts) != 6:
        raise ValidationError("sphere model needs six 're im' pairs separated by ';'")
    return tuple(pts)


def _parse_bc(text: str, cs: ChannelSet) -> ExtensionBC:
    if text is None or text.strip() in ("", "friedrichs"):
        return friedrichs_bc(cs)
    text = text.strip()
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return ExtensionBC.from_json(fh.read())
    if text.startswith("{"):
        return ExtensionBC.from_json(text)
    if text.startswith("rotation:"):
        angles = {}
        for item in text[len("rotation:"):].split(","):
            key, _, val = item.partition("=")
            pid_s, _, k_s = key.partition(":")
            angles[(int(pid_s), int(k_s))] = float(val)
        return rotation_bc(cs, angles)
    raise ValidationError(f"unknown bc spec {text!r}")


def _parse_lambdas(args) -> np.ndarray:
    if getattr(args, "lam", None):
        return np.array([float(x) for x in args.lam.split(",")])
    grid = getattr(args, "lambda_grid", None)
    if grid:
        kind, a, b, n = (grid.split(":") + ["", "", ""])[:4]
        a, b, n = float(a), float(b), int(n)
        if kind == "lin":
            return np.linspace(a, b, n)
        if kind == "geom":
            if a == 0 or b == 0 or (a < 0) != (b < 0):
                raise ValidationError("geom grid needs same-sign nonzero endpoints")
            sgn = -1.0 if a < 0 else 1.0
            return sgn * np.geomspace(abs(a), abs(b), n)
        raise ValidationError("grid must be lin:a:b:n or geom:a:b:n")
    return np.array([])


def _shift_worker(payload):
    model_d, bc_json, t = payload
    model = model_from_json(model_d)
    bc = ExtensionBC.from_json(bc_json)
    return krein.spectral_shift(bc, model, t)


def _s00_worker(payload):
    model_d, lam = payload
    return model_from_json(model_d).s00(lam)


def _pool_map(fn, items, jobs: int):
    """Ordered map; fans out to a process pool when jobs > 1."""
    if jobs <= 1:
        return [fn(x) for x in items]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))  # ordered by input regardless of completion


# ----------------------------------------------------------------------
# subcommand implementations
# ----------------------------------------------------------------------


def _cmd_cone_smatrix(args):
    lams = _parse_lambdas(args)
    rows = []
    entries = []
    cs = None
    for lam in lams:
        cs, mat = cone_s_matrix(args.theta, float(lam))
        per = {c.label(): float(mat[i, i]) for i, c in enumerate(cs.channels)}
        entries.append({"lambda": float(lam), "entries": per})
        for c in cs.channels:
            rows.append((float(lam), c.label(), per[c.label()]))
    payload = {
        "op": "cone-smatrix",
        "inputs": {"theta": args.theta, "lambdas": [float(x) for x in lams]},
        "value": entries,
        "diagnostics": {"channels": [c.label() for c in cs.channels] if cs else []},
    }
    _emit(args, payload, rows, ["lambda", "channel", "value"])


def _cmd_spectrum(args):
    model = _parse_model(args.model)
    bc = _parse_bc(args.bc, model.channel_set())
    if float(np.max(np.abs(bc.Q))) < 1e-13:
        spec = model.friedrichs_eigenvalues(args.lmax)
    else:
        spec = krein.secular_spectrum(bc, model, args.lmax)
    payload = {
        "op": "spectrum",
        "inputs": {"model": model.to_json_dict(), "lmax": args.lmax},
        "value": [
            {"eigenvalue": v, "multiplicity": m, "channel": lab}
            for v, m, lab in spec.rows()
        ],
        "diagnostics": {"count": spec.total},
    }
    _emit(args, payload, spec.rows(), ["eigenvalue", "multiplicity", "channel"])


def _cmd_shift(args):
    model = _parse_model(args.model)
    bc = _parse_bc(args.bc, model.channel_set())
    ts = _parse_lambdas(args)
    if args.jobs > 1:
        payloads = [(model.to_json_dict(), bc.to_json(), float(t)) for t in ts]
        xs = _pool_map(_shift_worker, payloads, args.jobs)
    else:
        xs = [krein.spectral_shift(bc, model, float(t)) for t in ts]
    ds = [krein.d_function(bc, model, float(t)) for t in ts]
    payload = {
        "op": "shift",
        "inputs": {"model": model.to_json_dict(), "t": [float(t) for t in ts]},
        "value": [
            {"t": float(t), "re_d": d.real, "im_d": d.imag, "xi": x}
            for t, d, x in zip(ts, ds, xs)
        ],
        "diagnostics": {},
    }
    rows = [(float(t), d.real, d.imag, x) for t, d, x in zip(ts, ds, xs)]
    _emit(args, payload, rows, ["lambda", "re_d", "im_d", "xi"])


def _cmd_trace_check(args):
    model = _parse_model(args.model)
    bc = _parse_bc(args.bc, model.channel_set())
    lams = _parse_lambdas(args)
    if lams.size == 0:
        raise ValidationError("trace-check needs --lambda")
    rows = []
    vals = []
    for lam in lams:
        r = krein.trace_identity_residual(bc, model, float(lam), lmax=args.lmax)
        vals.append(r)
        rows.append((r["lam"], r["trace_side"], r["eigenvalue_side"], r["residual"], r["tail_bound"]))
    payload = {
        "op": "trace-check",
        "inputs": {"model": model.to_json_dict(), "lmax": args.lmax},
        "value": vals,
        "diagnostics": {"tol": args.tol},
    }
    _emit(args, payload, rows,
          ["lambda", "trace_side", "eigenvalue_side", "residual", "tail_bound"])


def _cmd_det_ratio(args):
    model = _parse_model(args.model)
    bc = _parse_bc(args.bc, model.channel_set())
    res = krein.det_ratio(bc, model, lam_tilde=args.lambda_tilde)
    payload = {
        "op": "det-ratio",
        "inputs": {"model": model.to_json_dict()},
        "value": {
            "d": res.d,
            "d_star_0": complex(res.d_star_0),
            "gamma": complex(res.gamma),
            "ratio": complex(res.ratio),
            "delta_l": res.delta_l,
            "delta_f": res.delta_f,
            "kernel_consistent": res.kernel_consistent,
            "shifted_value": None if res.shifted_value is None else complex(res.shifted_value),
        },
        "diagnostics": {},
    }
    _emit(args, payload)


def _cmd_sphere_s0(args):
    if args.hexagon:
        cfg = hexagon_config(args.scale)
    else:
        cfg = SphereConfig(_parse_sphere_points(args.z or ""))
    blk = s0_block(cfg)
    payload = {
        "op": "sphere-s0",
        "inputs": {"z_points": [[z.real, z.imag] for z in cfg.z_points]},
        "value": {
            "channels": ["0:-1", "0:1"],
            "block": [[complex(blk[i, j]) for j in range(2)] for i in range(2)],
        },
        "diagnostics": {},
    }
    _emit(args, payload)


def _cmd_torus_s00(args):
    model = _parse_model(args.model or "torus")
    if not isinstance(model, TorusPointModel):
        raise ValidationError("torus-s00 needs a torus model")
    lams = _parse_lambdas(args)
    if args.jobs > 1:
        vals = _pool_map(_s00_worker, [(model.to_json_dict(), float(l)) for l in lams], args.jobs)
    else:
        vals = [model.s00(float(lam)) for lam in lams]
    payload = {
        "op": "torus-s00",
        "inputs": {"model": model.to_json_dict(), "lambdas": [float(x) for x in lams]},
        "value": [{"lambda": float(l), "s00": v} for l, v in zip(lams, vals)],
        "diagnostics": {"anchor": model.anchor_lam},
    }
    _emit(args, payload, list(zip(lams, vals)), ["lambda", "s00"])


def _relzeta_spectra(args):
    if args.pair:
        kind, _, rest = args.pair.partition(":")
        if kind != "half-channel":
            raise ValidationError("only the half-channel preset pair exists")
        opts = dict(kv.split("=") for kv in rest.split(",") if kv)
        n = int(opts.get("n", 10000))
        radius = float(opts.get("R", 1.0))
        return relzeta.half_channel_spectra(n, radius)
    if args.spec_l and args.spec_f:
        return relzeta.spectrum_from_csv(args.spec_l), relzeta.spectrum_from_csv(args.spec_f)
    if args.model:
        model = _parse_model(args.model)
        bc = _parse_bc(args.bc, model.channel_set())
        mu = krein.secular_spectrum(bc, model, args.lmax, include_untouched=False)
        cs = model.channel_set()
        coupled = [
            cs.channels[j]
            for j in range(cs.n)
            if float(np.max(np.abs(bc.Q[:, j])) + np.max(np.abs(bc.Q[j, :]))) > 1e-13
        ]
        towers, mults, labs = [], [], []
        for c in coupled:
            tw = model.channel_tower(c.k, args.lmax)
            towers.append(tw.values)
            mults.append(np.ones(tw.values.size, dtype=int))
            labs += [c.label()] * tw.values.size
        lam = SpectrumList.from_unsorted(
            np.concatenate(towers), np.concatenate(mults), labs
        )
        return mu, lam
    raise ValidationError("relzeta needs --pair, --spec-l/--spec-f, or --model")


def _cmd_relzeta(args):
    mu, lam = _relzeta_spectra(args)
    shift = None if args.lambda_tilde is None else args.lambda_tilde
    res = relzeta.rel_zeta_result(mu, lam, lam_shift=shift)
    values = {}
    if args.s_values:
        for s in args.s_values.split(","):
            s = float(s)
            values[format(s, ".6g")] = relzeta.relative_zeta(
                mu, lam, s, lam_shift=shift if shift is not None else 0.0
            )
    payload = {
        "op": "relzeta",
        "inputs": {"n_modes": res.n_modes, "lam_shift": res.lam_shift},
        "value": {
            "zeta_at_zero": res.zeta_at_zero,
            "zeta_prime_at_zero": res.zeta_prime_at_zero,
            "det_ratio": res.det_ratio,
            "zeta_values": values,
        },
        "diagnostics": {"tail_bound": res.tail_bound},
    }
    _emit(args, payload)


# ----------------------------------------------------------------------
# argument wiring
# ----------------------------------------------------------------------


def _add_common(sp, model=True, bc=True, lams=True):
    if model:
        sp.add_argument("--model", help="model spec (tc:..., torus:..., sphere-hex, @file.json, or JSON)")
    if bc:
        sp.add_argument("--bc", help="boundary pair: friedrichs | rotation:pid:k=angle,... | JSON | @file")
    if lams:
        sp.add_argument("--lambda", dest="lam", help="comma-separated values")
        sp.add_argument("--lambda-grid", dest="lambda_grid", help="lin:a:b:n or geom:a:b:n")
    sp.add_argument("--out", choices=("json", "csv"), default="json")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--tol", type=float, default=1e-10, help="reporting tolerance")
    sp.add_argument("--config", help="INI config file ([model]/[bc]/[run] sections)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="conekrein",
        description="Scattering matrices, Krein determinants and zeta "
        "determinant comparisons for Laplacians on flat cones.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("cone-smatrix", help="infinite-cone S-matrix on a grid")
    sp.add_argument("--theta", type=float, required=True)
    _add_common(sp, model=False, bc=False)
    sp.set_defaults(func=_cmd_cone_smatrix)

    sp = sub.add_parser("spectrum", help="eigenvalues of the selected extension")
    sp.add_argument("--lmax", type=float, default=200.0)
    _add_common(sp, lams=False)
    sp.set_defaults(func=_cmd_spectrum)

    sp = sub.add_parser("shift", help="spectral shift on a t grid")
    _add_common(sp)
    sp.set_defaults(func=_cmd_shift)

    sp = sub.add_parser("trace-check", help="Krein trace identity residual")
    sp.add_argument("--lmax", type=float, default=4.0e5, help="oracle spectrum cutoff")
    _add_common(sp)
    sp.set_defaults(func=_cmd_trace_check)

    sp = sub.add_parser("det-ratio", help="determinant comparison data")
    sp.add_argument("--lambda-tilde", type=float, default=None)
    _add_common(sp, lams=False)
    sp.set_defaults(func=_cmd_det_ratio)

    sp = sub.add_parser("sphere-s0", help="genus-0 harmonic scattering block")
    sp.add_argument("--hexagon", action="store_true")
    sp.add_argument("--scale", type=float, default=1.0)
    sp.add_argument("--z", help="six 're im' pairs separated by ';'")
    _add_common(sp, model=False, bc=False, lams=False)
    sp.set_defaults(func=_cmd_sphere_s0)

    sp = sub.add_parser("torus-s00", help="marked-torus log channel entry")
    _add_common(sp, bc=False)
    sp.set_defaults(func=_cmd_torus_s00)

    sp = sub.add_parser("relzeta", help="relative zeta data from spectra")
    sp.add_argument("--pair", help="half-channel:n=...,R=...")
    sp.add_argument("--spec-l", help="CSV of selected-extension eigenvalues")
    sp.add_argument("--spec-f", help="CSV of Friedrichs eigenvalues")
    sp.add_argument("--lmax", type=float, default=4.0e5)
    sp.add_argument("--lambda-tilde", type=float, default=None)
    sp.add_argument("--s-values", help="comma list of s points to evaluate")
    _add_common(sp, lams=False)
    sp.set_defaults(func=_cmd_relzeta)

    return ap


def _apply_config(args):
    path = getattr(args, "config", None)
    if not path:
        return args
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise ValidationError(f"config file {path!r} not found")
    if cp.has_section("model") and getattr(args, "model", None) is None:
        kind = cp.get("model", "type", fallback=None)
        if kind is None:
            raise ValidationError("[model] section needs a 'type' key")
        opts = {k: v for k, v in cp.items("model") if k != "type"}
        args.model = kind + (":" + ",".join(f"{k}={v}" for k, v in opts.items()) if opts else "")
    if cp.has_section("bc") and getattr(args, "bc", None) is None:
        args.bc = cp.get("bc", "preset", fallback="friedrichs")
    if cp.has_section("run"):
        for key in ("lam", "lambda_grid"):
            ini_key = {"lam": "lambda", "lambda_grid": "lambda_grid"}[key]
            if getattr(args, key, None) is None and cp.has_option("run", ini_key):
                setattr(args, key, cp.get("run", ini_key))
        if cp.has_option("run", "out") and args.out == "json":
            args.out = cp.get("run", "out")
        if cp.has_option("run", "jobs") and args.jobs == 1:
            args.jobs = cp.getint("run", "jobs")
    return args


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args = _apply_config(args)
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return 3
    except ConeKreinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
