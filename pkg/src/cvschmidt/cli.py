"""
Command line front end.

    cvschmidt decompose [options]   lambdas.csv, metrics.json, modes.csv, coefficients.csv
    cvschmidt sweep     [options]   sweep.csv over basis widths and cutoffs
    cvschmidt modes     [options]   modes.csv and, optionally, monomial.json

Options may also come from a JSON config file (``--config``); explicit flags
win. ``--save-config`` writes the effective configuration back out.

Exit codes: 0 success, 2 bad usage or configuration, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .amplitude import DEFAULT_PHYSICAL, PdcParams, normalize, pdc_amplitude, pdc_from_physical
from .basis import BasisFamily, BasisKind
from .errors import InputError, NumericalError
from .expr import parse_expression
from .quadrature import auto_order
from .schmidt import (compute_coefficients, decompose, default_rules, delta_coefficients,
                      eval_mode, metrics, mode_to_monomial)

OUTPUT_KINDS = ("lambdas", "metrics", "modes", "coefficients")
EXPRESSION_HELP = (
    "expression over p and q: numbers, + - * / ^, parentheses and "
    "exp sin cos sinc sqrt abs, e.g. 'exp(-(p+q)^2)*sinc((2.135*p+7.455*q)/2)'"
)


@dataclass
class JobConfig:
    """Everything needed to reproduce one run."""

    amplitude: str = "pdc"
    tau_e: float = DEFAULT_PHYSICAL["tau_e"]
    tau_o: float = DEFAULT_PHYSICAL["tau_o"]
    sigma: float = DEFAULT_PHYSICAL["sigma"]
    omega_bar: float = DEFAULT_PHYSICAL["omega_bar"]
    lp: float | None = None
    lq: float | None = None
    expr: str | None = None
    n_max: int | None = None
    basis1: str = "hermite"
    basis2: str = "hermite"
    beta1: float = 1.0
    beta2: float = 1.0
    m0: int = 25
    n0: int = 25
    quad_order: int | str = "auto"
    outputs: list = field(default_factory=lambda: ["lambdas", "metrics"])
    out: str = "."
    threads: int = 1
    k_min: float = -5.0
    k_max: float = 5.0
    k_step: float = 0.01
    indices: list = field(default_factory=lambda: [0, 1, 2, 3])
    monomial_degree: int | None = None
    betas: list = field(default_factory=lambda: [1.0, 0.5, 2.0])
    cutoffs: list = field(default_factory=lambda: [10, 15, 20, 25])

    def validate(self) -> "JobConfig":
        if self.amplitude not in ("pdc", "expr", "delta"):
            raise InputError(f"unknown amplitude kind {self.amplitude!r}")
        if self.amplitude == "expr" and not self.expr:
            raise InputError("--amplitude expr needs --expr")
        if (self.lp is None) != (self.lq is None):
            raise InputError("--lp and --lq must be given together")
        for name in ("basis1", "basis2"):
            try:
                BasisKind(getattr(self, name))
            except ValueError:
                raise InputError(f"unknown basis kind {getattr(self, name)!r}") from None
        for name in ("beta1", "beta2"):
            if not getattr(self, name) > 0:
                raise InputError(f"{name} must be positive")
        if any(b <= 0 for b in self.betas):
            raise InputError("sweep betas must be positive")
        for name in ("m0", "n0"):
            if int(getattr(self, name)) != getattr(self, name) or getattr(self, name) < 0:
                raise InputError(f"{name} must be a nonnegative integer")
        if not self.betas or not self.cutoffs or any(c < 0 for c in self.cutoffs):
            raise InputError("sweep axes must be nonempty with nonnegative cutoffs")
        if self.quad_order != "auto":
            try:
                self.quad_order = int(self.quad_order)
            except (TypeError, ValueError):
                raise InputError("--quad-order must be an integer or 'auto'") from None
            if self.quad_order < 1:
                raise InputError("--quad-order must be positive")
        bad = set(self.outputs) - set(OUTPUT_KINDS)
        if bad:
            raise InputError(f"unknown outputs {sorted(bad)}")
        if not (self.k_max > self.k_min and self.k_step > 0):
            raise InputError("mode sampling range must satisfy k_min < k_max and k_step > 0")
        if self.threads < 1:
            raise InputError("--threads must be at least 1")
        return self

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "JobConfig":
        data = json.loads(text)
        unknown = set(data) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise InputError(f"unknown config keys {sorted(unknown)}")
        return cls(**data)


# --- building blocks -------------------------------------------------------

def _num(x) -> str:
    return f"{float(x):.12g}"


def _clean(obj):
    """Round floats to 12 significant digits for stable JSON."""
    if isinstance(obj, float) or isinstance(obj, np.floating):
        return float(_num(obj))
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def build_amplitude(cfg: JobConfig):
    """The (normalized, where possible) amplitude and its parameters."""
    if cfg.amplitude == "pdc":
        if cfg.lp is not None:
            params = PdcParams(L_p=cfg.lp, L_q=cfg.lq)
        else:
            params = pdc_from_physical(cfg.tau_e, cfg.tau_o, cfg.sigma, cfg.omega_bar)
        return normalize(pdc_amplitude(params))
    return parse_expression(cfg.expr)


def bases(cfg: JobConfig, beta1=None, beta2=None):
    return (BasisFamily(cfg.basis1, cfg.beta1 if beta1 is None else beta1),
            BasisFamily(cfg.basis2, cfg.beta2 if beta2 is None else beta2))


def _order(cfg: JobConfig, m0: int, n0: int) -> int:
    return auto_order(max(m0, n0)) if cfg.quad_order == "auto" else int(cfg.quad_order)


def run_decomposition(cfg: JobConfig, m0=None, n0=None, beta1=None, beta2=None):
    """Return ``(amplitude or None, rules or None, decomposition)``."""
    m0 = cfg.m0 if m0 is None else m0
    n0 = cfg.n0 if n0 is None else n0
    b1, b2 = bases(cfg, beta1, beta2)
    if cfg.amplitude == "delta":
        if b1 != b2:
            raise InputError("the delta decomposition needs the same basis on both sides")
        n_max = cfg.n_max if cfg.n_max is not None else m0
        return None, None, decompose(delta_coefficients(n_max, b1))
    amp = build_amplitude(cfg)
    rules = default_rules(b1, b2, m0, n0, _order(cfg, m0, n0))
    C = compute_coefficients(amp, b1, b2, m0, n0, *rules, workers=cfg.threads)
    return amp, rules, decompose(C)


def _metrics_record(cfg, amp, rules, dec) -> dict:
    rule_p, rule_q = rules if rules else (None, None)
    record = metrics(dec, amp, rule_p, rule_q)
    src = dec.source
    record.update({
        "norm_f_squared": src.norm_f_squared,
        "norm_source": src.norm_source,
        "cutoffs": list(src.cutoffs),
        "basis": {"1": src.basis_1.describe(), "2": src.basis_2.describe()},
        "quadrature": None if rules is None else {"p": rule_p.describe(), "q": rule_q.describe(),
                                                   "requested": cfg.quad_order},
        "amplitude": {"kind": cfg.amplitude, "label": src.label,
                      **({} if amp is None else {k: v for k, v in amp.metadata.items() if k != "kind"})},
        "rank": dec.rank,
        "version": __version__,
    })
    return record


def _k_grid(cfg: JobConfig) -> np.ndarray:
    n = int(round((cfg.k_max - cfg.k_min) / cfg.k_step))
    return cfg.k_min + cfg.k_step * np.arange(n + 1)


def write_modes(path: Path, cfg: JobConfig, dec, indices) -> None:
    k = _k_grid(cfg)
    columns, header = [], ["k"]
    for side in (1, 2):
        count = len(dec.modes(side))
        for i in indices:
            if not 0 <= i < count:
                raise InputError(f"mode index {i} out of range for side {side} (have {count})")
        lo, hi = dec.basis(side).domain
        inside = (k >= lo) & (k <= hi)
        for i in indices:
            values = np.full(k.shape, np.nan, dtype=complex if np.iscomplexobj(dec.modes(side)) else float)
            values[inside] = eval_mode(dec, side, i, k[inside])
            if np.iscomplexobj(values):
                header += [f"psi{side}_{i}_re", f"psi{side}_{i}_im"]
                columns += [values.real, values.imag]
            else:
                header.append(f"psi{side}_{i}")
                columns.append(values)
    rows = ([_num(kv)] + ["" if np.isnan(c[j]) else _num(c[j]) for c in columns]
            for j, kv in enumerate(k))
    _write_csv(path, header, rows)


# --- commands --------------------------------------------------------------

def cmd_decompose(cfg: JobConfig) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    amp, rules, dec = run_decomposition(cfg)
    if "lambdas" in cfg.outputs:
        _write_csv(out / "lambdas.csv", ["n", "lambda"], ([i, _num(v)] for i, v in enumerate(dec.lambdas)))
    if "metrics" in cfg.outputs:
        _write_json(out / "metrics.json", _metrics_record(cfg, amp, rules, dec))
    if "modes" in cfg.outputs:
        write_modes(out / "modes.csv", cfg, dec, cfg.indices)
    if "coefficients" in cfg.outputs:
        C = dec.source.entries
        _write_csv(out / "coefficients.csv", ["m", "n", "re", "im"],
                   ([m, n, _num(C[m, n].real), _num(np.imag(C[m, n]))]
                    for m in range(C.shape[0]) for n in range(C.shape[1])))
    return 0


def cmd_sweep(cfg: JobConfig) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    top = max(cfg.cutoffs)
    rows = []
    for beta in cfg.betas:
        if cfg.amplitude == "delta":
            points = []
            for c in cfg.cutoffs:
                t0 = time.perf_counter()
                _, _, dec = run_decomposition(dataclasses.replace(cfg, n_max=c), c, c, beta, beta)
                points.append((c, dec, None, None, t0))
        else:
            amp, rules, full = run_decomposition(cfg, top, top, beta, beta)
            points = []
            for c in cfg.cutoffs:
                t0 = time.perf_counter()
                points.append((c, decompose(full.source.truncate(c, c)), amp, rules, t0))
        for c, dec, amp, rules, t0 in points:
            m = metrics(dec, amp, *(rules or (None, None)))
            elapsed = 1e3 * (time.perf_counter() - t0)
            rows.append([_num(beta), c, c] + ["" if m[key] is None else _num(m[key])
                                              for key in ("d1", "d2", "entropy", "schmidt_number")]
                        + [f"{elapsed:.3f}"])
    _write_csv(out / "sweep.csv", ["beta", "m0", "n0", "d1", "d2", "entropy", "schmidt_number", "wall_time_ms"],
               rows)
    return 0


def cmd_modes(cfg: JobConfig) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    _, _, dec = run_decomposition(cfg)
    write_modes(out / "modes.csv", cfg, dec, cfg.indices)
    if cfg.monomial_degree is not None:
        record = {"max_degree": cfg.monomial_degree, "envelope": "exp(-(beta*k)^2/2)"}
        for side in (1, 2):
            record[f"side{side}"] = {
                "beta": dec.basis(side).scale,
                "modes": {str(i): list(mode_to_monomial(dec, side, i, cfg.monomial_degree))
                          for i in cfg.indices},
            }
        _write_json(out / "monomial.json", record)
    return 0


COMMANDS = {"decompose": cmd_decompose, "sweep": cmd_sweep, "modes": cmd_modes}


# --- argument parsing ------------------------------------------------------

def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _strings(text):
    return [v.strip() for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("job")
    g.add_argument("--config", help="JSON config file; explicit flags override it")
    g.add_argument("--save-config", help="write the effective config to this path")
    g.add_argument("--amplitude", choices=["pdc", "expr", "delta"])
    g.add_argument("--expr", help=EXPRESSION_HELP)
    g.add_argument("--tau-e", type=float, help="(k - k'_e) L in ps")
    g.add_argument("--tau-o", type=float, help="(k - k'_o) L in ps")
    g.add_argument("--sigma", type=float, help="pump width in 1/ps")
    g.add_argument("--omega-bar", type=float, help="central frequency in 1/ps (metadata)")
    g.add_argument("--lp", type=float, help="dimensionless L_p (overrides physical parameters)")
    g.add_argument("--lq", type=float, help="dimensionless L_q")
    g.add_argument("--n-max", type=int, help="delta truncation (defaults to --m0)")
    g.add_argument("--basis1", choices=[k.value for k in BasisKind])
    g.add_argument("--basis2", choices=[k.value for k in BasisKind])
    g.add_argument("--beta1", type=float)
    g.add_argument("--beta2", type=float)
    g.add_argument("--m0", type=int)
    g.add_argument("--n0", type=int)
    g.add_argument("--quad-order", help="quadrature order or 'auto' (4*max cutoff + 40)")
    g.add_argument("--out", help="output directory")
    g.add_argument("--threads", type=int, help="worker cap; does not change results")
    g.add_argument("--k-min", type=float)
    g.add_argument("--k-max", type=float)
    g.add_argument("--k-step", type=float)

    parser = argparse.ArgumentParser(prog="cvschmidt", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("decompose", parents=[common], help="decompose one configuration")
    p.add_argument("--outputs", type=_strings, help=f"comma list from {','.join(OUTPUT_KINDS)}")
    p.add_argument("--indices", type=_ints, help="mode indices for modes.csv")
    p = sub.add_parser("sweep", parents=[common], help="grid over basis widths and cutoffs")
    p.add_argument("--betas", type=_floats, help="comma list, applied to both sides")
    p.add_argument("--cutoffs", type=_ints, help="comma list of m0 = n0 values")
    p = sub.add_parser("modes", parents=[common], help="sample modes and export monomials")
    p.add_argument("--indices", type=_ints)
    p.add_argument("--monomial-degree", type=int)
    return parser


def config_from_args(args: argparse.Namespace) -> JobConfig:
    if args.config:
        try:
            cfg = JobConfig.from_json(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError, TypeError) as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from None
    else:
        cfg = JobConfig()
    for f in dataclasses.fields(JobConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            setattr(cfg, f.name, value)
    if args.expr is not None and args.amplitude is None:
        cfg.amplitude = "expr"
    return cfg.validate()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        if args.save_config:
            Path(args.save_config).write_text(cfg.to_json())
        return COMMANDS[args.command](cfg)
    except InputError as exc:
        print(f"cvschmidt: error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"cvschmidt: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
