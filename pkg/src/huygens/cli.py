"""Command-line front end: parameter sweeps, oracle verification, receiver
networks and commutator probes.

    huygens sweep configs/capacity_vs_R.cfg
    huygens verify --seed 42 --per-case 3 --tol 1e-6
    huygens network configs/network.cfg
    huygens probe --alpha 1.5 --eta 10 --eta-p 1 --R 2

Exit codes: 0 success, 1 invalid input, 2 computation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .commutator import commutator_matter, window_integrated_commutator
from .cosmo import ConformalWindow, CosmologyParams, conformal_from_comoving
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateReceiverError,
    DomainError,
    HuygensError,
    UnsupportedCosmologyError,
)
from .oracle import random_geometries, s2_oracle_matter, s2_oracle_mode_sum
from .signalling import (
    DetectorSpec,
    DetectorState,
    channel_capacity,
    classify_case,
    optimal_detector_states,
    s2,
    signal_breakdown,
    state_prefactor,
)

log = logging.getLogger("huygens")

COLUMNS = ["varied_name", "varied_value", "case", "s_delta", "s_theta", "s2", "capacity", "capacity_delta_only"]
POLICIES = ("fixed-comoving-duration", "fixed-conformal-duration", "fixed-conformal-ratio")
EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2


# -- configuration -------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    min: float
    max: float
    points: int
    spacing: str = "linear"

    def __post_init__(self):
        if not self.min < self.max:
            raise ConfigError(f"grid.min ({self.min}) must be below grid.max ({self.max})")
        if self.points < 2:
            raise ConfigError(f"grid.points must be >= 2, got {self.points}")
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"grid.spacing must be linear or log, got {self.spacing!r}")
        if self.spacing == "log" and not self.min > 0:
            raise ConfigError("log grid needs grid.min > 0")

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, self.points)
        return np.linspace(self.min, self.max, self.points)


@dataclass(frozen=True)
class SweepConfig:
    """Sweep over R or T_iB.  Times and lengths are in units of ``delta``."""

    cosmology: CosmologyParams
    delta: float = 1.0
    t_iA: float = 1.0 / 30.0
    receiver_policy: str = "fixed-comoving-duration"
    vary: str = "R"
    grid: Grid | None = None
    fixed: float = 10.0
    couplings: tuple[float, float] = (1.0, 1.0)
    states: tuple[DetectorState, DetectorState] = field(default_factory=optimal_detector_states)
    output_path: str | None = None
    output_format: str = "csv"
    tol: float = 1e-8
    spacing: float = 1.0  # network lattice spacing
    slices: tuple[float, ...] = ()  # network B-slices (T_iB values)

    def __post_init__(self):
        if not self.delta > 0:
            raise ConfigError(f"delta must be positive, got {self.delta}")
        if not self.t_iA > 0:
            raise ConfigError(f"t_iA must be positive, got {self.t_iA}")
        if self.receiver_policy not in POLICIES:
            raise ConfigError(f"receiver_policy must be one of {POLICIES}, got {self.receiver_policy!r}")
        if self.vary not in ("R", "T_iB"):
            raise ConfigError(f"vary must be R or T_iB, got {self.vary!r}")
        if not self.fixed > 0:
            raise ConfigError(f"fixed value must be positive, got {self.fixed}")
        if self.grid is not None and not self.grid.min > 0:
            raise ConfigError("all times and separations must be positive (grid.min > 0)")
        if any(not c >= 0 for c in self.couplings):
            raise ConfigError("couplings must be non-negative")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"output.format must be csv or json, got {self.output_format!r}")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if not self.spacing > 0:
            raise ConfigError("network.spacing must be positive")
        if any(not s > 0 for s in self.slices):
            raise ConfigError("network.slices must be positive")


def _parse_scalar(text: str):
    try:
        return float(Fraction(text.replace(" ", "")))
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return float(text)  # 1e-8, inf
    except ValueError:
        return text


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines into a nested dict (dots in keys nest)."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value")
        node = out
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"line {lineno}: {key!r} clashes with a scalar key")
        if parts[-1] in node:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        node[parts[-1]] = value
    return out


def _number(d, key, default=None):
    if key not in d:
        if default is None:
            raise ConfigError(f"missing key {key!r}")
        return default
    v = _parse_scalar(d[key]) if isinstance(d[key], str) else d[key]
    if not isinstance(v, float):
        raise ConfigError(f"{key!r} must be a number, got {d[key]!r}")
    return v


def _states(raw) -> tuple[DetectorState, DetectorState]:
    if raw is None or raw == "optimal":
        return optimal_detector_states()
    if not isinstance(raw, dict):
        raise ConfigError(f"states must be 'optimal' or states.A/B.excited/ground entries, got {raw!r}")
    out = []
    for who in ("A", "B"):
        sub = raw.get(who)
        if not isinstance(sub, dict) or set(sub) != {"excited", "ground"}:
            raise ConfigError(f"states.{who} needs exactly 'excited' and 'ground'")
        try:
            ex, gr = (complex(sub[k].replace(" ", "")) for k in ("excited", "ground"))
        except ValueError as exc:
            raise ConfigError(f"states.{who}: {exc}") from None
        out.append(DetectorState(ex, gr))
    return out[0], out[1]


def config_from_dict(d: dict) -> SweepConfig:
    d = dict(d)
    try:
        if "alpha" in d and "w" in d:
            raise ConfigError("give either w or alpha, not both")
        eta_star = _number(d, "eta_star", 1.0)
        if "alpha" in d:
            cosmo = CosmologyParams.from_alpha(_number(d, "alpha"), eta_star)
        else:
            cosmo = CosmologyParams.from_w(_number(d, "w", 0.0), eta_star)
        grid = None
        if "grid" in d:
            g = d["grid"]
            grid = Grid(_number(g, "min"), _number(g, "max"), int(_number(g, "points")), g.get("spacing", "linear"))
        vary = d.get("vary", "R")
        fixed_raw = d.get("fixed", {})
        if isinstance(fixed_raw, dict):
            other = "T_iB" if vary == "R" else "R"
            fixed = _number(fixed_raw, other, 10.0 if other == "T_iB" else 0.1)
        else:
            fixed = _number(d, "fixed")
        couplings = d.get("couplings", {})
        out = d.get("output", {})
        net = d.get("network", {})
        slices = tuple(float(Fraction(s.strip())) for s in net.get("slices", "").split(",") if s.strip())
        known = {"alpha", "w", "eta_star", "delta", "t_iA", "receiver_policy", "vary", "grid", "fixed",
                 "couplings", "states", "output", "tol", "network"}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return SweepConfig(
            cosmology=cosmo,
            delta=_number(d, "delta", 1.0),
            t_iA=_number(d, "t_iA", 1.0 / 30.0),
            receiver_policy=d.get("receiver_policy", "fixed-comoving-duration"),
            vary=vary,
            grid=grid,
            fixed=fixed,
            couplings=(_number(couplings, "A", 1.0), _number(couplings, "B", 1.0)),
            states=_states(d.get("states")),
            output_path=out.get("path"),
            output_format=out.get("format", "csv"),
            tol=_number(d, "tol", 1e-8),
            spacing=_number(net, "spacing", 1.0),
            slices=slices,
        )
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load_config(path: str | Path) -> SweepConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(parse_config_text(text))


# -- geometry --------------------------------------------------------------------

def sender_window(config: SweepConfig) -> ConformalWindow:
    d = config.delta
    return ConformalWindow.from_comoving(config.t_iA * d, (config.t_iA + 1.0) * d, config.cosmology)


def receiver_window(t_iB: float, config: SweepConfig, wA: ConformalWindow | None = None) -> ConformalWindow:
    """B's conformal window switched on at comoving ``t_iB`` (units of delta)."""
    wA = wA or sender_window(config)
    d = config.delta
    if config.receiver_policy == "fixed-comoving-duration":
        return ConformalWindow.from_comoving(t_iB * d, (t_iB + 1.0) * d, config.cosmology)
    eta_i = conformal_from_comoving(t_iB * d, config.cosmology)
    if config.receiver_policy == "fixed-conformal-duration":
        return ConformalWindow(eta_i, eta_i + wA.length)
    return ConformalWindow(eta_i, eta_i * (wA.eta_f / wA.eta_i))


def _detectors(config, wA, wB):
    sA, sB = config.states
    lA, lB = config.couplings
    dA = DetectorSpec.from_state(lA, wA.eta_i, wA.eta_f, sA, clock="conformal")
    dB = DetectorSpec.from_state(lB, wB.eta_i, wB.eta_f, sB, clock="conformal")
    return dA, dB


# -- sweep -----------------------------------------------------------------------

def _point(config: SweepConfig, wA, wB, R) -> dict:
    dA, dB = _detectors(config, wA, wB)
    if config.cosmology.is_matter:
        b = signal_breakdown(wA, wB, R, dA, dB)
        return dict(case=int(b.case_label), s_delta=b.s_delta, s_theta=b.s_theta, s2=b.s2,
                    capacity=b.capacity, capacity_delta_only=b.capacity_delta_only)
    rep = s2_oracle_mode_sum(dA, dB, R, config.cosmology.alpha, config.tol)
    s2_delta = state_prefactor(dA.state, dB.state) / math.pi * rep.s_delta_numeric
    return dict(case=int(classify_case(wA, wB, R)), s_delta=rep.s_delta_numeric, s_theta=rep.s_theta_numeric,
                s2=rep.s2_numeric, capacity=channel_capacity(rep.s2_numeric, dA, dB),
                capacity_delta_only=channel_capacity(s2_delta, dA, dB))


def run_sweep(config: SweepConfig) -> list[dict]:
    """One row per grid point, in grid order.  Failed points carry an ``error`` field."""
    if config.grid is None:
        raise ConfigError("sweep needs grid.min, grid.max and grid.points")
    if not config.cosmology.is_matter:
        log.warning("alpha = %g has no closed form; using the mode sum (slow)", config.cosmology.alpha)
    wA = sender_window(config)
    rows = []
    for value in config.grid.values():
        value = float(value)
        row = dict(varied_name=config.vary, varied_value=value)
        try:
            if config.vary == "R":
                R, t_iB = value * config.delta, config.fixed
            else:
                R, t_iB = config.fixed * config.delta, value
            row.update(_point(config, wA, receiver_window(t_iB, config, wA), R))
        except HuygensError as exc:
            row.update(case=0, **{k: math.nan for k in COLUMNS[3:]}, error=f"{type(exc).__name__}: {exc}")
        rows.append(row)
    return rows


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def format_rows(rows: list[dict], fmt: str = "csv") -> str:
    columns = COLUMNS + (["error"] if any("error" in r for r in rows) else [])
    if fmt == "json":
        clean = [{k: (None if isinstance(r.get(k), float) and math.isnan(r[k]) else r.get(k, ""))
                  for k in columns} for r in rows]
        return json.dumps(clean, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(k, "")) for k in columns])
    return buf.getvalue()


# -- verification ----------------------------------------------------------------

@dataclass(frozen=True)
class VerifyEntry:
    case: int
    window_a: tuple[float, float]
    window_b: tuple[float, float]
    R: float
    closed_form: float
    oracle: float
    deviation: float
    passed: bool


@dataclass(frozen=True)
class VerifyReport:
    seed: int
    tol: float
    entries: tuple[VerifyEntry, ...]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def max_deviation(self) -> float:
        return max((e.deviation for e in self.entries), default=0.0)


def run_verify(seed: int = 42, per_case: int = 3, tol: float = 1e-6) -> VerifyReport:
    """Closed form against the direct-quadrature oracle on random geometries.

    Deviation is relative, or absolute (against ``tol * 1e-4``) when the closed
    form is exactly zero.  A geometry passes when deviation < tol.
    """
    if per_case < 1:
        raise ConfigError(f"per_case must be >= 1, got {per_case}")
    if not tol >= 0:
        raise ConfigError(f"tol must be >= 0, got {tol}")
    params = CosmologyParams.from_w(0.0)
    sA, sB = optimal_detector_states()
    entries = []
    for g in random_geometries(seed, per_case):
        wA, wB = g.window_a, g.window_b
        dA = DetectorSpec.from_state(1.0, wA.eta_i, wA.eta_f, sA, clock="conformal")
        dB = DetectorSpec.from_state(1.0, wB.eta_i, wB.eta_f, sB, clock="conformal")
        closed = s2(dA, dB, g.R, params).s2
        ref = s2_oracle_matter(dA, dB, g.R, params, tol=min(1e-12, tol * 1e-3) if tol > 0 else 1e-12)
        if closed == 0.0:
            dev = abs(ref.s2_numeric) / 1e-4
        else:
            dev = abs(ref.s2_numeric - closed) / abs(closed)
        entries.append(VerifyEntry(int(g.case), (wA.eta_i, wA.eta_f), (wB.eta_i, wB.eta_f), g.R,
                                   closed, ref.s2_numeric, dev, dev < tol))
    return VerifyReport(seed, tol, tuple(entries))


# -- receiver network ------------------------------------------------------------

@dataclass(frozen=True)
class NetworkResult:
    slice_tiB: float
    eta_gap: float
    receiver_count: int
    per_receiver_capacity: float
    total_bits: float


def count_lattice_sites(radius: float) -> int:
    """Sites n of Z^3, n != 0, with |n| < radius."""
    if not radius > 0:
        return 0
    r2 = radius * radius
    n = int(math.floor(radius))
    count = 0
    for i in range(-n, n + 1):
        for j in range(-n, n + 1):
            m = r2 - i * i - j * j
            if m <= 0:
                continue
            s = math.isqrt(int(math.floor(m)))
            while s * s >= m:
                s -= 1
            while (s + 1) * (s + 1) < m:
                s += 1
            count += 2 * s + 1
    return count - 1  # Alice's own site


def run_network(slice_tiB: float, delta: float, lattice_spacing: float, policy: str,
                config: SweepConfig) -> NetworkResult:
    """Receivers on a cubic comoving lattice around Alice, switched on at ``slice_tiB``.

    A site at distance R is kept when ``R < eta_iB - eta_fA`` (strictly inside
    Alice's light cone, case 5), where its capacity does not depend on R.
    """
    if not config.cosmology.is_matter:
        raise ConfigError("network experiment needs alpha = 3/2")
    if policy not in POLICIES:
        raise ConfigError(f"policy must be one of {POLICIES}, got {policy!r}")
    if not lattice_spacing > 0:
        raise ConfigError("lattice_spacing must be positive")
    cfg = SweepConfig(**{**config.__dict__, "delta": delta, "receiver_policy": policy})
    wA = sender_window(cfg)
    wB = receiver_window(slice_tiB, cfg, wA)
    gap = wB.eta_i - wA.eta_f
    if not gap > 0:
        return NetworkResult(slice_tiB, gap, 0, 0.0, 0.0)
    count = count_lattice_sites(gap / lattice_spacing)
    dA, dB = _detectors(cfg, wA, wB)
    per = signal_breakdown(wA, wB, 0.5 * gap, dA, dB).capacity
    return NetworkResult(slice_tiB, gap, count, per, count * per)


# -- commutator probe ------------------------------------------------------------

def run_commutator_probe(alpha: float, eta: float, eta_p: float, R: float, *,
                         windowed: bool = False, width: float = 1.0, tol: float = 1e-10) -> dict:
    """Pointwise commutator (alpha = 3/2), or its integral over the windows
    A = [eta, eta + width], B = [eta_p, eta_p + width] for any alpha."""
    params = CosmologyParams.from_alpha(alpha)
    if not windowed:
        v = commutator_matter(eta, eta_p, R, params)
        return dict(alpha=alpha, eta=eta, eta_p=eta_p, R=R,
                    delta_retarded_strength=v.delta_retarded_strength,
                    delta_advanced_strength=v.delta_advanced_strength,
                    interior_value=v.interior_value)
    wA = ConformalWindow(eta, eta + width)
    wB = ConformalWindow(eta_p, eta_p + width)
    res = window_integrated_commutator(alpha, wA, wB, R, tol, full_output=True)
    out = dict(alpha=alpha, window_a=[wA.eta_i, wA.eta_f], window_b=[wB.eta_i, wB.eta_f], R=R,
               case=int(classify_case(wA, wB, R)), windowed=res.value, error_estimate=res.error_estimate)
    if params.is_matter:
        sA, sB = optimal_detector_states()
        dA = DetectorSpec.from_state(1.0, wA.eta_i, wA.eta_f, sA, clock="conformal")
        dB = DetectorSpec.from_state(1.0, wB.eta_i, wB.eta_f, sB, clock="conformal")
        b = signal_breakdown(wA, wB, R, dA, dB)
        closed = (b.s_delta + b.s_theta) / (4.0 * math.pi)
        out.update(closed_form=closed, deviation=abs(res.value - closed))
    return out


# -- entry point -----------------------------------------------------------------

def _write(text: str, path: str | None):
    if path in (None, "", "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
        log.info("wrote %s", path)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="huygens", description=" ".join(__doc__.split("\n\n")[0].split()))
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sweep", help="capacity sweep over R or T_iB")
    sp.add_argument("config")
    sp.add_argument("--output", help="override output.path ('-' for stdout)")
    sp.add_argument("--format", choices=("csv", "json"), help="override output.format")

    vp = sub.add_parser("verify", help="closed form vs. quadrature oracle on random geometries")
    vp.add_argument("--seed", type=int, default=42)
    vp.add_argument("--per-case", type=int, default=3)
    vp.add_argument("--tol", type=float, default=1e-6)

    np_ = sub.add_parser("network", help="receiver-lattice aggregation over B-slices")
    np_.add_argument("config")
    np_.add_argument("--output", help="override output.path ('-' for stdout)")

    pp = sub.add_parser("probe", help="evaluate the commutator at a pair of events or windows")
    pp.add_argument("--alpha", type=float, default=1.5)
    pp.add_argument("--eta", type=float, required=True)
    pp.add_argument("--eta-p", type=float, required=True)
    pp.add_argument("--R", type=float, required=True)
    pp.add_argument("--windowed", action="store_true")
    pp.add_argument("--width", type=float, default=1.0)
    pp.add_argument("--tol", type=float, default=1e-10)
    return p


def _cmd_sweep(args) -> int:
    config = load_config(args.config)
    rows = run_sweep(config)
    fmt = args.format or config.output_format
    _write(format_rows(rows, fmt), args.output if args.output is not None else config.output_path)
    failed = [r for r in rows if "error" in r]
    for r in failed:
        log.error("%s = %s: %s", r["varied_name"], r["varied_value"], r["error"])
    return EXIT_FAILED if failed else EXIT_OK


def _cmd_verify(args) -> int:
    report = run_verify(args.seed, args.per_case, args.tol)
    for e in report.entries:
        status = "PASS" if e.passed else "FAIL"
        print(f"{status} case {e.case} A={e.window_a} B={e.window_b} R={e.R:.6g} "
              f"closed={e.closed_form:.17g} oracle={e.oracle:.17g} dev={e.deviation:.3g}")
    n_pass = sum(e.passed for e in report.entries)
    print(f"{n_pass}/{len(report.entries)} passed at tol {report.tol:g}; max deviation {report.max_deviation:.3g}")
    return EXIT_OK if report.passed else EXIT_FAILED


def _cmd_network(args) -> int:
    config = load_config(args.config)
    if not config.slices:
        raise ConfigError("network needs network.slices")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["slice_tiB", "eta_gap", "receiver_count", "per_receiver_capacity", "total_bits"])
    for t in config.slices:
        r = run_network(t, config.delta, config.spacing, config.receiver_policy, config)
        w.writerow([_fmt(r.slice_tiB), _fmt(r.eta_gap), r.receiver_count,
                    _fmt(r.per_receiver_capacity), _fmt(r.total_bits)])
    _write(buf.getvalue(), args.output if args.output is not None else config.output_path)
    return EXIT_OK


def _cmd_probe(args) -> int:
    out = run_commutator_probe(args.alpha, args.eta, args.eta_p, args.R,
                               windowed=args.windowed, width=args.width, tol=args.tol)
    for k, v in out.items():
        print(f"{k}: {_fmt(v)}")
    if "closed_form" in out:
        agree = out["deviation"] <= max(10 * out["error_estimate"], 1e-8 * abs(out["closed_form"]))
        print(f"agreement with closed form: {'yes' if agree else 'NO'}")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    handler = {"sweep": _cmd_sweep, "verify": _cmd_verify, "network": _cmd_network, "probe": _cmd_probe}
    try:
        return handler[args.command](args)
    except (ConfigError, DomainError, UnsupportedCosmologyError, DegenerateReceiverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ConvergenceError, HuygensError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
