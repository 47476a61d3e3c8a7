"""Command-line interface.

    pbswanson params    --preset fig1-a --format json
    pbswanson spectrum  --omega 0.5 --lambda 0.1 --alpha 0.3 --beta 0.35 --n-max 10
    pbswanson verify    --preset fig1-b --suite algebra
    pbswanson bicoherent --preset fig1-c --z 1,0.5 --format csv --out states.csv
    pbswanson figure1   --out figdata/ --format csv

Values are resolved as preset < config file (``--config``, flat key=value) < flags.
Exit codes: 0 success, 1 verification failure, 2 parameter error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import bicoherent as bc
from .checks import SUITES, run_suite
from .eigensystem import Flavor, build_family, norm_products
from .params import PRESETS, ModelParams, ParameterError, derive, normalization_candidates, spectrum

EXIT_OK, EXIT_FAIL, EXIT_PARAM, EXIT_IO = 0, 1, 2, 3

DEFAULTS = {"n_max": 30, "L": 60, "R": 6.0, "precision": "standard", "format": None,
            "out": None, "z": "0,0", "seed": 0, "suite": "all", "x_range": "-6,6,0.05",
            "method": "closed_form"}
MODEL_KEYS = ("omega", "lambda", "alpha", "beta")
CONFIG_KEYS = set(MODEL_KEYS) | set(DEFAULTS) | {"preset", "n-max", "x-range"}
CONFIG_ALIASES = {"nmax": "n_max", "xrange": "x_range", "n-max": "n_max", "x-range": "x_range"}


class IOFailure(Exception):
    pass


@dataclass
class RunConfig:
    model: ModelParams
    n_max: int = 30
    L: int = 60
    R: float = 6.0
    precision: str = "standard"
    format: str | None = None
    out: str | None = None
    z: complex = 0j
    seed: int = 0
    preset: str | None = None
    model_explicit: bool = False
    extra: dict = field(default_factory=dict)

    def validate(self):
        self.model.validate()
        if self.L < 1:
            raise ParameterError("L must be >= 1")
        if not self.R > 0:
            raise ParameterError("R must be positive")
        if self.n_max < 0:
            raise ParameterError("n-max must be non-negative")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["model"] = {"omega": self.model.omega, "lambda": self.model.lam,
                      "alpha": self.model.alpha, "beta": self.model.beta}
        d["z"] = [self.z.real, self.z.imag]
        d.pop("model_explicit")
        return d


def read_config_file(path: str) -> dict:
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IOFailure(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = CONFIG_ALIASES.get(key, key)
        if key not in CONFIG_KEYS:
            raise ParameterError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def parse_complex(text: str) -> complex:
    parts = [p.strip() for p in str(text).split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ParameterError(f"cannot parse z={text!r}; expected RE,IM")


def parse_x_range(text: str) -> np.ndarray:
    try:
        lo, hi, step = (float(v) for v in str(text).split(","))
    except ValueError:
        raise ParameterError(f"cannot parse x-range {text!r}; expected MIN,MAX,STEP") from None
    if not (hi > lo and step > 0):
        raise ParameterError("x-range needs MIN < MAX and STEP > 0")
    n = int(round((hi - lo) / step))
    return lo + step * np.arange(n + 1)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    file_vals = read_config_file(args.config) if args.config else {}
    flag_vals = {k: v for k, v in vars(args).items()
                 if v is not None and k not in ("command", "config", "func")}
    merged = {**file_vals, **flag_vals}

    preset = merged.get("preset")
    if preset is not None and preset not in PRESETS:
        raise ParameterError(f"unknown preset {preset!r}")
    base = PRESETS[preset] if preset else PRESETS["fig1-a"]
    vals = {"omega": base.omega, "lambda": base.lam, "alpha": base.alpha, "beta": base.beta}
    explicit = False
    for key in MODEL_KEYS:
        if key in merged:
            try:
                vals[key] = float(merged[key])
            except ValueError:
                raise ParameterError(f"{key} must be a number, got {merged[key]!r}") from None
            explicit = True
    model = ModelParams(vals["omega"], vals["lambda"], vals["alpha"], vals["beta"])

    opts = {**DEFAULTS, **{k: v for k, v in merged.items() if k in DEFAULTS}}
    try:
        cfg = RunConfig(
            model=model,
            n_max=int(opts["n_max"]),
            L=int(opts["L"]),
            R=float(opts["R"]),
            precision=str(opts["precision"]),
            format=opts["format"],
            out=opts["out"],
            z=parse_complex(opts["z"]),
            seed=int(opts["seed"]),
            preset=preset,
            model_explicit=explicit,
            extra={"suite": opts["suite"], "x_range": opts["x_range"], "method": opts["method"]},
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParameterError):
            raise
        raise ParameterError(str(exc)) from exc
    if cfg.precision not in ("standard", "extended"):
        raise ParameterError(f"unknown precision {cfg.precision!r}")
    if cfg.format not in (None, "csv", "json"):
        raise ParameterError(f"unknown format {cfg.format!r}")
    cfg.validate()
    return cfg


# -- output ----------------------------------------------------------------------


def render(cfg: RunConfig, command: str, columns: list[str] | None, rows: list | None,
           results: dict, fmt: str) -> str:
    if fmt == "json":
        payload = {"version": __version__, "command": command, "config": cfg.as_dict(),
                   "results": dict(results)}
        if columns is not None:
            payload["results"]["table"] = {"columns": columns, "rows": rows}
        return json.dumps(payload, indent=2, default=_json_default) + "\n"
    buf = io.StringIO()
    buf.write(f"# pbswanson {__version__} {command}\n")
    buf.write(f"# config: {json.dumps(cfg.as_dict(), default=_json_default)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    if columns is None:
        writer.writerow(["key", "value"])
        for k, v in _flatten(results):
            writer.writerow([k, _fmt(v)])
    else:
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _flatten(d: dict, prefix=""):
    for k, v in d.items():
        if isinstance(v, dict):
            yield from _flatten(v, f"{prefix}{k}.")
        else:
            yield f"{prefix}{k}", v


def _fmt(v):
    if isinstance(v, (np.floating, np.integer)):
        v = v.item()
    if isinstance(v, float):
        return repr(v)
    return v


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    return str(o)


def emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        path = Path(out)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise IOFailure(f"cannot write {out}: {exc}") from exc


# -- commands ----------------------------------------------------------------------


def cmd_params(cfg: RunConfig) -> int:
    d = derive(cfg.model, cfg.precision)
    checks = {
        "theta_plus_times_theta_minus": float(d.theta_plus * d.theta_minus - 0.5),
        "theta_ratio_minus_exp_2theta0": float(d.theta_plus / d.theta_minus - np.exp(2 * float(d.theta0))),
        "k_minus_alpha_plus_beta_over_sqrt2": float(d.k - (cfg.model.alpha + cfg.model.beta) / np.sqrt(2)),
        "Omega_cosh_2theta0_minus_omega": float(d.Omega * np.cosh(2 * float(d.theta0)) - cfg.model.omega),
    }
    results = {"derived": d.as_dict(), "invariant_residuals": checks,
               "normalization": normalization_candidates(d),
               "normalization_note": "n_phi = n_psi fixed by <phi_0, psi_0> = 1 via exact Gaussian integral",
               "degenerate": d.degenerate}
    if cfg.format is None:
        lines = [f"pbswanson {__version__}  params"]
        if d.degenerate:
            lines.append("WARNING degenerate: alpha == beta, H is self-adjoint")
        lines += [f"  {k:<14s} {v:.15g}" for k, v in d.as_dict().items()]
        lines.append("  invariant residuals:")
        lines += [f"    {k:<40s} {v:.3e}" for k, v in checks.items()]
        lines.append("  normalization (enforced by <phi_0, psi_0> = 1):")
        lines += [f"    {k:<30s} {v:.15g}" for k, v in normalization_candidates(d).items()]
        emit("\n".join(lines) + "\n", cfg.out)
    else:
        emit(render(cfg, "params", None, None, results, cfg.format), cfg.out)
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig) -> int:
    d = derive(cfg.model, cfg.precision)
    energies = spectrum(d, cfg.n_max)
    phi = build_family(d, Flavor.PHI, "recursion", cfg.n_max)
    psi = build_family(d, Flavor.PSI, "recursion", cfg.n_max)
    prods = norm_products(phi, psi)
    rows = [[n, e, p] for n, (e, p) in enumerate(zip(energies, prods))]
    cols = ["n", "E_n", "norm_phi_times_norm_psi"]
    fmt = cfg.format or "csv"
    emit(render(cfg, "spectrum", cols, rows, {"Omega": float(d.Omega), "gamma": float(d.gamma)}, fmt),
         cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    suite = cfg.extra["suite"]
    if suite not in SUITES + ("all",):
        raise ParameterError(f"unknown suite {suite!r}")
    d = derive(cfg.model, cfg.precision)
    lines = [f"pbswanson {__version__}  verify suite={suite} seed={cfg.seed}"]
    if d.degenerate:
        lines.append("WARNING degenerate: alpha == beta (bosonic limit, B = A†)")
    checks = run_suite(suite, d, n_max=cfg.n_max, L=cfg.L, R=cfg.R, seed=cfg.seed)
    lines += [c.line() for c in checks]
    ok = all(c.passed for c in checks)
    lines.append(f"{'ALL PASS' if ok else 'FAILURES'}: {sum(c.passed for c in checks)}/{len(checks)}")
    sys.stdout.write("\n".join(lines) + "\n")
    if cfg.format is not None:
        results = {"suite": suite, "seed": cfg.seed, "degenerate": d.degenerate, "all_pass": ok,
                   "checks": [c.as_dict() for c in checks]}
        if cfg.format == "json":
            text = render(cfg, "verify", None, None, results, "json")
        else:
            rows = [[c.name, c.measured, c.tolerance, c.passed] for c in checks]
            text = render(cfg, "verify", ["check", "measured", "tolerance", "passed"], rows, {}, "csv")
        emit(text, cfg.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bicoherent(cfg: RunConfig) -> int:
    d = derive(cfg.model, cfg.precision)
    xs = parse_x_range(cfg.extra["x_range"])
    method = cfg.extra["method"]
    try:
        method = bc.StateMethod(method)
    except ValueError:
        raise ParameterError(f"unknown method {method!r}") from None
    states = {fl: bc.build_state(d, fl, cfg.z, method, cfg.L) for fl in Flavor}
    vals = {fl: states[fl].values(xs) for fl in Flavor}
    rows = [[x, p.real, p.imag, s.real, s.imag]
            for x, p, s in zip(xs, vals[Flavor.PHI], vals[Flavor.PSI])]
    cols = ["x", "phi_re", "phi_im", "psi_re", "psi_im"]
    summary = {
        "method": method.value,
        "eigen_residual_phi": bc.eigen_residual(d, states[Flavor.PHI]),
        "eigen_residual_psi": bc.eigen_residual(d, states[Flavor.PSI]),
    }
    emit(render(cfg, "bicoherent", cols, rows, summary, cfg.format or "csv"), cfg.out)
    return EXIT_OK


def figure1_data(model: ModelParams, z: complex, xs: np.ndarray, precision="standard"):
    """x, |phi(z;x)|^2, |psi(z;x)|^2 from the closed-form states."""
    d = derive(model, precision)
    phi = np.abs(bc.closed_form_state(d, Flavor.PHI, z).values(xs)) ** 2
    psi = np.abs(bc.closed_form_state(d, Flavor.PSI, z).values(xs)) ** 2
    return phi, psi


def cmd_figure1(cfg: RunConfig) -> int:
    xs = parse_x_range(cfg.extra["x_range"])
    if cfg.preset:
        targets = {cfg.preset: cfg.model}
    elif cfg.model_explicit:
        targets = {"custom": cfg.model}
    else:
        targets = dict(PRESETS)
    fmt = cfg.format or "csv"
    outdir = Path(cfg.out or ".")
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IOFailure(f"cannot create {outdir}: {exc}") from exc
    for name, model in targets.items():
        phi, psi = figure1_data(model, cfg.z, xs, cfg.precision)
        rows = [[x, a, b] for x, a, b in zip(xs, phi, psi)]
        sub = RunConfig(**{**cfg.__dict__, "model": model, "preset": name})
        text = render(sub, "figure1", ["x", "phi_density", "psi_density"], rows,
                      {"preset": name, "z": cfg.z}, fmt)
        path = outdir / f"figure1_{name}.{fmt}"
        emit(text, str(path))
        sys.stdout.write(f"wrote {path}\n")
    return EXIT_OK


COMMANDS = {"params": cmd_params, "spectrum": cmd_spectrum, "verify": cmd_verify,
            "bicoherent": cmd_bicoherent, "figure1": cmd_figure1}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model and run options")
    g.add_argument("--omega", type=float)
    g.add_argument("--lambda", dest="lambda", type=float)
    g.add_argument("--alpha", type=float)
    g.add_argument("--beta", type=float)
    g.add_argument("--preset", choices=sorted(PRESETS))
    g.add_argument("--n-max", dest="n_max", type=int)
    g.add_argument("--L", dest="L", type=int)
    g.add_argument("--R", dest="R", type=float)
    g.add_argument("--z", help="complex label as RE,IM; write --z=-1,0 for negative RE")
    g.add_argument("--precision", choices=["standard", "extended"])
    g.add_argument("--format", choices=["csv", "json"])
    g.add_argument("--out", help="output file (figure1: output directory)")
    g.add_argument("--seed", type=int)
    g.add_argument("--config", help="flat key=value file; flags override it")
    g.add_argument("--x-range", dest="x_range", help="MIN,MAX,STEP (default -6,6,0.05); write --x-range=-1,1,0.1 for negative MIN")

    parser = argparse.ArgumentParser(prog="pbswanson", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"pbswanson {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("params", parents=[common], help="derived constants and invariant checks")
    sub.add_parser("spectrum", parents=[common], help="E_n and the norm-product diagnostic")
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", choices=list(SUITES) + ["all"])
    b = sub.add_parser("bicoherent", parents=[common], help="evaluate bi-coherent states")
    b.add_argument("--method", choices=[m.value for m in bc.StateMethod])
    sub.add_parser("figure1", parents=[common], help="density data for the four presets")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if cfg.model.degenerate:
            sys.stderr.write("warning: alpha == beta, degenerate (self-adjoint) case\n")
        return COMMANDS[args.command](cfg)
    except ParameterError as exc:
        sys.stderr.write(f"parameter error: {exc}\n")
        return EXIT_PARAM
    except IOFailure as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
