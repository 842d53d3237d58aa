"""Command-line front end: figure-data sweeps as CSV and an oracle check.

Exit codes: 0 success, 1 usage error, 2 tolerance failure, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from . import entanglement as ent
from . import freefermion, linalg, oracle
from .errors import HCBError, InvalidInputError, ResourceLimitError
from .model import ModelParams

EXIT_OK, EXIT_USAGE, EXIT_TOLERANCE, EXIT_RESOURCE = 0, 1, 2, 3
DIVERGENT = "divergent"
CRITICAL_WINDOW = 1e-9
NEGATIVITY_IDENTITY_TOL = 1e-12

COMMANDS = ("ground-sweep", "thermal-size-sweep", "thermal-grid-sweep", "oracle-check")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Range:
    min: float
    max: float
    step: float

    def __post_init__(self):
        if not self.step > 0:
            raise UsageError(f"range step must be > 0, got {self.step}")
        if self.min > self.max:
            raise UsageError(f"range min {self.min} exceeds max {self.max}")

    def values(self) -> list[float]:
        n = int(math.floor((self.max - self.min) / self.step + 1e-9)) + 1
        return [round(self.min + i * self.step, 12) for i in range(n)]


@dataclass
class SweepConfig:
    command: str
    w: Range
    mu: Range
    T: Range
    sites: list[int]
    r_max: int
    out: Optional[str] = None
    format: str = "csv"
    tolerance: float = 2e-2
    max_parallel: int = 1
    memory_limit_mb: Optional[float] = None
    el_sites: int = 0

    def __post_init__(self):
        if self.r_max < 1:
            raise UsageError(f"r_max must be >= 1, got {self.r_max}")
        if self.max_parallel < 1:
            raise UsageError(f"max-parallel must be >= 1, got {self.max_parallel}")
        if self.format not in ("csv", "gnuplot"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.format == "gnuplot" and not self.out:
            raise UsageError("--format gnuplot needs --out for the CSV it references")

    def as_json(self) -> str:
        # scheduling knobs do not change results, so they stay out of the record
        d = {k: v for k, v in asdict(self).items() if k not in ("max_parallel", "memory_limit_mb")}
        return json.dumps(d, sort_keys=True, separators=(",", ":"))


# --------------------------------------------------------------------------
# formatting and scheduling


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return format(x, ".12g")


def pmap(fn: Callable, items: Sequence, workers: int) -> list:
    """Ordered map; results come back in input order whatever the completion order."""
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def oracle_workers(cfg: SweepConfig, L: int) -> int:
    if cfg.memory_limit_mb is None:
        return cfg.max_parallel
    per_point = 4 * 16 * 4**L / 2**20  # four dense complex matrices
    return max(1, min(cfg.max_parallel, int(cfg.memory_limit_mb // per_point)))


def write_table(cfg: SweepConfig, header: Sequence[str], rows: Iterable[Sequence], stdout) -> None:
    lines = [",".join(header), "# config: " + cfg.as_json()]
    lines += [",".join(fmt(c) for c in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8", newline="\n")
        if cfg.format == "gnuplot":
            _write_gnuplot(cfg, header)
    else:
        stdout.write(text)


def _write_gnuplot(cfg: SweepConfig, header: Sequence[str]) -> None:
    csv_path = Path(cfg.out)
    name = csv_path.name
    lines = [
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set key autotitle columnhead",
        f"set xlabel '{header[0]}'",
    ]
    if cfg.command == "ground-sweep":
        lines += [
            "set multiplot layout 2,1",
            f"plot '{name}' using 1:3 with lines",
            "set ylabel 'dE/dmu'",
            f"plot '{name}' using 1:4 with lines",
            "unset multiplot",
        ]
    elif cfg.command == "thermal-grid-sweep":
        lines += [f"set ylabel '{header[1]}'", "set pm3d"]
        lines += [f"splot '{name}' using 1:2:{c} with points" for c in range(3, len(header) + 1)]
    else:
        cols = ", ".join(f"'{name}' using 1:{c} with linespoints" for c in range(2, len(header) + 1))
        lines.append(f"plot {cols}")
    csv_path.with_suffix(".gp").write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


# --------------------------------------------------------------------------
# commands


def ground_sweep(cfg: SweepConfig) -> tuple[list[str], list[list]]:
    header = ["mu", "w", "E", "dE_dmu"]
    rows = []
    for mu in cfg.mu.values():
        for w in cfg.w.values():
            if not w > 0:
                raise UsageError(f"hopping w must be > 0, got {w}")
            E = ent.global_entanglement(freefermion.ground_magnetization(w, mu))
            gap = abs(mu) - 2.0 * w
            if abs(gap) <= CRITICAL_WINDOW:
                dE = DIVERGENT
            elif gap > 0:
                dE = "0"
            else:
                dE = ent.global_entanglement_derivative(w, mu)
            rows.append([mu, w, E, dE])
    return header, rows


def thermal_size_sweep(cfg: SweepConfig, stderr) -> tuple[list[str], list[list]]:
    w, mu, T = cfg.w.min, cfg.mu.min, cfg.T.min
    header = ["L"] + [f"N_r{r}" for r in range(1, cfg.r_max + 1)] + ["E_L"]

    def negativities(L: int) -> list:
        params = ModelParams(w, mu, L)
        return [ent.thermal_negativity(params, T, r) if r < L else None for r in range(1, cfg.r_max + 1)]

    el_sites = [L for L in cfg.sites if L % 2 == 0 and L <= ent.ORACLE_EL_MAX_SITES]
    skipped = [L for L in cfg.sites if L % 2 == 0 and L > ent.ORACLE_EL_MAX_SITES]
    if skipped:
        print(f"warning: E_L left empty for L={skipped} (oracle limit {ent.ORACLE_EL_MAX_SITES})", file=stderr)
    n_rows = pmap(negativities, cfg.sites, cfg.max_parallel)
    el_vals = pmap(
        lambda L: ent.thermal_multipartite(ModelParams(w, mu, L), T),
        el_sites,
        oracle_workers(cfg, max(el_sites, default=2)),
    )
    el = dict(zip(el_sites, el_vals))
    rows = [[L] + n + [el.get(L)] for L, n in zip(cfg.sites, n_rows)]
    return header, rows


def thermal_grid_sweep(cfg: SweepConfig) -> tuple[list[str], list[list]]:
    w = cfg.w.min
    temps = cfg.T.values()
    if any(t <= 0 for t in temps):
        raise UsageError("temperature range must be strictly positive")
    L = cfg.sites[0]
    points = [(mu, T) for mu in cfg.mu.values() for T in temps]
    header = ["mu", "T", "N"] + (["E_L"] if cfg.el_sites else [])

    def n_at(pt):
        mu, T = pt
        return ent.thermal_negativity(ModelParams(w, mu, L), T, 1)

    Ns = pmap(n_at, points, cfg.max_parallel)
    if cfg.el_sites:
        if cfg.el_sites % 2 or cfg.el_sites > ent.ORACLE_EL_MAX_SITES:
            raise UsageError(f"--el-sites must be even and <= {ent.ORACLE_EL_MAX_SITES}")

        def el_at(pt):
            mu, T = pt
            return ent.thermal_multipartite(ModelParams(w, mu, cfg.el_sites), T)

        Els = pmap(el_at, points, oracle_workers(cfg, cfg.el_sites))
        return header, [[mu, T, n, e] for (mu, T), n, e in zip(points, Ns, Els)]
    return header, [[mu, T, n] for (mu, T), n in zip(points, Ns)]


def _oracle_rows(w: float, mu: float, T: float, L: int, r_max: int) -> list[list]:
    params = ModelParams(w, mu, L)
    rho = oracle.density_matrix(params, T)
    ff = freefermion.correlator_set(params, T, r_max)
    exact = freefermion.parity_projected_correlators(params, T, r_max) if T > 0 else None
    ed = {"M": oracle.magnetization(rho)}
    for r in range(1, r_max + 1):
        ed[f"Kxx({r})"] = oracle.correlator(rho, "x", 1, 1 + r)
        ed[f"Kzz({r})"] = oracle.correlator(rho, "z", 1, 1 + r)

    def pick(c: freefermion.CorrelatorSet, key: str) -> float:
        if key == "M":
            return c.M
        r = int(key[4:-1])
        return c.Kxx[r] if key.startswith("Kxx") else c.Kzz[r]

    rows = []
    for key, ref in ed.items():
        val = pick(ff, key)
        pp = abs(pick(exact, key) - ref) if exact is not None else None
        rows.append([L, key, val, ref, abs(val - ref), pp])
    for r in range(1, r_max + 1):
        xs = ent.two_site_rho(ed["M"], ed[f"Kxx({r})"], ed[f"Kzz({r})"])
        n9 = ent.negativity_xstate(xs)
        n8 = ent.negativity_general(linalg.partial_trace(rho, L, {1, 1 + r}), 2, {2})
        rows.append([L, f"N({r})", n9, n8, abs(n9 - n8), None])
    return rows


def oracle_check(cfg: SweepConfig, stdout, stderr) -> int:
    w, mu, T = cfg.w.min, cfg.mu.min, cfg.T.min
    for L in cfg.sites:
        if L > oracle.MAX_SITES:
            raise ResourceLimitError(f"L={L} exceeds the dense limit of {oracle.MAX_SITES} sites")
        if cfg.r_max >= L:
            raise UsageError(f"r_max {cfg.r_max} must be < L={L}")
    per_L = pmap(lambda L: _oracle_rows(w, mu, T, L, cfg.r_max), cfg.sites, oracle_workers(cfg, max(cfg.sites)))
    header = ["L", "quantity", "free_fermion", "oracle", "abs_error", "parity_projected_error"]
    rows = [row for block in per_L for row in block]

    failures = []
    for L, key, _, _, err, _ in rows:
        tol = NEGATIVITY_IDENTITY_TOL if key.startswith("N(") else cfg.tolerance
        if err > tol:
            failures.append(f"{key}@L={L}")
    if len(cfg.sites) > 1:
        errors: dict[str, list[float]] = {}
        for L, key, _, _, err, _ in rows:
            if not key.startswith("N("):
                errors.setdefault(key, []).append(err)
        for key, errs in errors.items():
            if any(b >= a for a, b in zip(errs, errs[1:])):
                failures.append(f"trend:{key}")

    write_table(cfg, header, rows, stdout)
    max_err = max(r[4] for r in rows if not r[1].startswith("N("))
    status = "fail" if failures else "pass"
    summary = f"# SUMMARY status={status} max_abs_error={fmt(max_err)} checks={len(rows)} failing={';'.join(failures) or '-'}"
    print(summary, file=stdout)
    if failures:
        print("tolerance exceeded: " + ", ".join(failures), file=stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


# --------------------------------------------------------------------------
# argument handling


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_range(text: str) -> Range:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            v = float(parts[0])
            return Range(v, v, 1.0)
        if len(parts) == 3:
            return Range(*(float(p) for p in parts))
    except ValueError:
        pass
    raise UsageError(f"bad range {text!r}; expected min:max:step")


def _single(value: float) -> Range:
    return Range(value, value, 1.0)


DEFAULTS = {
    "ground-sweep": dict(mu="-3:3:0.1", T="0", sites="10000", rmax=1),
    "thermal-size-sweep": dict(mu="0.2", T="0.5", sites="4:24:1", rmax=3),
    "thermal-grid-sweep": dict(mu="-2:2:0.1", T="0.1:1:0.1", sites="10000", rmax=1, el_sites=6),
    "oracle-check": dict(mu="0.2", T="0.5", sites="8", rmax=2),
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hcb", description="Entanglement in the hardcore-boson Hubbard chain.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--w", type=float, help="hopping amplitude (default 1)")
    p.add_argument("--w-range", help="hopping range min:max:step (ground-sweep)")
    p.add_argument("--mu", type=float, help="chemical potential")
    p.add_argument("--mu-range", help="chemical potential range min:max:step")
    p.add_argument("--temp", type=float, help="temperature")
    p.add_argument("--temp-range", help="temperature range min:max:step")
    p.add_argument("--sites", type=int, help="number of sites L")
    p.add_argument("--sites-range", help="site-count range min:max:step")
    p.add_argument("--rmax", type=int, help="largest two-site separation")
    p.add_argument("--el-sites", type=int, help="L for the E_L column of thermal-grid-sweep (0 disables)")
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.add_argument("--format", choices=("csv", "gnuplot"), default="csv")
    p.add_argument("--tolerance", type=float, default=2e-2, help="oracle-check finite-L tolerance")
    p.add_argument("--max-parallel", type=int, help="concurrent grid points (env HCB_MAX_PARALLEL)")
    p.add_argument("--memory-limit", type=float, help="memory ceiling in MB for concurrent oracle points")
    return p


def resolve_config(argv: Sequence[str], env: Optional[dict] = None) -> SweepConfig:
    env = os.environ if env is None else env
    a = build_parser().parse_args(list(argv))
    d = DEFAULTS[a.command]

    w = _parse_range(a.w_range) if a.w_range else _single(a.w if a.w is not None else 1.0)
    if a.mu_range:
        mu = _parse_range(a.mu_range)
    else:
        mu = _single(a.mu) if a.mu is not None else _parse_range(d["mu"])
    if a.temp_range:
        T = _parse_range(a.temp_range)
    else:
        T = _single(a.temp) if a.temp is not None else _parse_range(d["T"])
    if a.sites_range:
        sr = _parse_range(a.sites_range)
        sites = [int(round(v)) for v in sr.values()]
    elif a.sites is not None:
        sites = [a.sites]
    else:
        sr = _parse_range(d["sites"])
        sites = [int(round(v)) for v in sr.values()]
    if any(L < 2 for L in sites):
        raise UsageError("site counts must be >= 2")
    if T.min < 0:
        raise UsageError("temperature must be >= 0")

    if a.max_parallel is not None:
        par = a.max_parallel
    elif env.get("HCB_MAX_PARALLEL"):
        try:
            par = int(env["HCB_MAX_PARALLEL"])
        except ValueError:
            raise UsageError(f"HCB_MAX_PARALLEL must be an integer, got {env['HCB_MAX_PARALLEL']!r}")
    else:
        par = os.cpu_count() or 1
    el_sites = a.el_sites if a.el_sites is not None else d.get("el_sites", 0)

    return SweepConfig(
        command=a.command,
        w=w,
        mu=mu,
        T=T,
        sites=sites,
        r_max=a.rmax if a.rmax is not None else d["rmax"],
        out=a.out,
        format=a.format,
        tolerance=a.tolerance,
        max_parallel=par,
        memory_limit_mb=a.memory_limit,
        el_sites=el_sites,
    )


def run(argv: Sequence[str], stdout=None, stderr=None, env: Optional[dict] = None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        cfg = resolve_config(argv, env)
        if cfg.command == "ground-sweep":
            write_table(cfg, *ground_sweep(cfg), stdout)
        elif cfg.command == "thermal-size-sweep":
            write_table(cfg, *thermal_size_sweep(cfg, stderr), stdout)
        elif cfg.command == "thermal-grid-sweep":
            write_table(cfg, *thermal_grid_sweep(cfg), stdout)
        else:
            return oracle_check(cfg, stdout, stderr)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=stderr)
        return EXIT_RESOURCE
    except (InvalidInputError, HCBError) as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))
