"""Command-line runner: one subcommand per check, JSON or CSV reports.

    noisecube verify-theorem --n 1..4 --q 2,inf --eps 0.1,0.25 --samples 50
    noisecube certify-proof --q 2..64
    noisecube weight-report --r 2 --m 5 --format csv

Exit status is 0 when every case passes, 1 when some case fails and 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import margin, matroid, onedim, proofcert, rmcodes
from .cube import read_function
from .reports import Report, emit

COMMANDS = ("verify-theorem", "verify-1d", "certify-proof", "matroid-check",
            "rm-threshold", "bsc-sim", "weight-report", "lambda-table")

DEFAULT_EPS = tuple(round(0.05 * i, 2) for i in range(11))


def parse_number(text: str):
    t = text.strip().lower()
    if t in ("inf", "infinity", "∞"):
        return math.inf
    v = float(t)
    return int(v) if v.is_integer() and "." not in t and "e" not in t else v


def parse_list(text) -> list:
    """'2,3,inf' -> [2, 3, inf]; 'a..b' is an inclusive integer range,
    'a..b:step' a float range."""
    if isinstance(text, (list, tuple)):
        return list(text)
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            rng, _, step = part.partition(":")
            lo, hi = (parse_number(v) for v in rng.split(".."))
            if step:
                s = float(step)
                count = int(math.floor((hi - lo) / s + 1e-9)) + 1
                out.extend(round(lo + i * s, 12) for i in range(count))
            else:
                out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(parse_number(part))
    return out


@dataclass
class RunConfig:
    command: str
    q: list | None = None
    eps: list | None = None
    p: list | None = None
    n: list | None = None
    r: list | None = None
    m: list | None = None
    k: int | None = None
    x: list | None = None
    y: list | None = None
    trials: int = 10_000
    samples: int = 20
    seed: int = 0
    tol: float | None = None
    mode: str = "auto"
    format: str = "json"
    out: str | None = None
    function: str | None = None
    generator: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        for name in ("q", "eps", "p", "n", "r", "m", "x", "y"):
            v = getattr(self, name)
            if v is not None and not isinstance(v, list):
                setattr(self, name, parse_list(v))
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")


_LIST_FIELDS = {"q", "eps", "p", "n", "r", "m", "x", "y"}
_INT_FIELDS = {"k", "trials", "samples", "seed"}


def read_config(path) -> dict:
    """key=value lines; '#' starts a comment; keys may use '-' or '_'."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key = key.strip().replace("-", "_")
        if key not in {f.name for f in dataclasses.fields(RunConfig)}:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _coerce(key, value.strip())
    return out


def _coerce(key: str, value: str):
    if key in _LIST_FIELDS:
        return parse_list(value)
    if key in _INT_FIELDS:
        return int(value)
    if key == "tol":
        return float(value)
    return value


def _one(values, name: str, default=None):
    if not values:
        if default is None:
            raise ValueError(f"--{name} is required")
        return default
    if len(values) != 1:
        raise ValueError(f"--{name} takes a single value here, got {values}")
    return values[0]


def _finite_q(q_values) -> list:
    return [q for q in q_values if not math.isinf(q)]


# -- subcommands ---------------------------------------------------------------

def _verify_theorem(cfg: RunConfig, rep: Report) -> None:
    q_values = cfg.q or [2]
    eps_grid = cfg.eps or list(DEFAULT_EPS)
    tol = margin.INEQUALITY_TOL if cfg.tol is None else cfg.tol
    if cfg.function:
        f = read_function(cfg.function)
        for q in q_values:
            table = margin.log_conditional_norms(f, q) if cfg.mode in ("auto", "exact") \
                and f.n <= margin.EXACT_MAX_DIM else None
            for e in eps_grid:
                rep.add(margin.verify_theorem(f, e, q, tol=tol, mode=cfg.mode, trials=cfg.trials,
                                              seed=cfg.seed, table=table,
                                              description=f"{cfg.function} q={q} eps={e}"))
        return
    n_values = cfg.n or [4]
    if cfg.mode == "exact" and max(n_values) > margin.EXACT_MAX_DIM:
        raise ValueError(f"exact mode enumerates subsets only for n <= {margin.EXACT_MAX_DIM}; "
                         "use --mode sampled")
    for n in n_values:
        for idx in range(cfg.samples):
            profile = margin.PROFILES[idx % len(margin.PROFILES)]
            f = margin.random_nonneg_function(n, profile, rng=margin.make_rng(cfg.seed, n, idx))
            exact = cfg.mode == "exact" or (cfg.mode == "auto" and n <= margin.EXACT_MAX_DIM)
            for q in q_values:
                table = margin.log_conditional_norms(f, q) if exact else None
                for e in eps_grid:
                    rep.add(margin.verify_theorem(
                        f, e, q, tol=tol, mode=cfg.mode, trials=cfg.trials,
                        seed=cfg.seed + idx, table=table,
                        description=f"random n={n} #{idx} {profile} q={q} eps={e}"))


def _verify_1d(cfg: RunConfig, rep: Report) -> None:
    q_values = cfg.q or [2, 3, 4, math.inf]
    eps_grid = cfg.eps or list(DEFAULT_EPS)
    x_grid = cfg.x or [i / 20 for i in range(21)]
    tol = onedim.ONEDIM_TOL if cfg.tol is None else cfg.tol
    rep.extend(onedim.onedim_grid_cases(q_values, eps_grid, x_grid, tol=tol))
    for q in _finite_q(q_values):
        rep.extend(onedim.check_concavity(q, seed=cfg.seed).cases)


def _certify_proof(cfg: RunConfig, rep: Report) -> None:
    q_values = [int(q) for q in (cfg.q or list(range(2, proofcert.DEFAULT_Q_MAX + 1)))]
    runtimes = {}
    for cert in proofcert.certify_range(q_values):
        rec = dataclasses.asdict(cert)
        runtimes[str(cert.q)] = rec.pop("runtime")
        rec["description"] = f"certificate q={cert.q}"
        rep.add(rec)
    for ident in proofcert.certify_identities(q_values):
        rep.add(ident)
    rep.metadata["certificate_runtime"] = runtimes


def _matroid_check(cfg: RunConfig, rep: Report) -> None:
    p_values = cfg.p or [round(0.1 * i, 1) for i in range(1, 10)]
    tol = matroid.MATROID_TOL if cfg.tol is None else cfg.tol
    mode = "exact" if cfg.mode == "auto" else cfg.mode
    if cfg.generator:
        codes = [(cfg.generator, matroid.read_generator(cfg.generator))]
    else:
        n_values = cfg.n or [8]
        codes = []
        for n in n_values:
            for idx in range(cfg.samples):
                k = cfg.k if cfg.k is not None else int(
                    matroid.make_rng(cfg.seed, 13, n, idx).integers(0, n + 1))
                codes.append((f"random k={k} n={n} #{idx}",
                              matroid.random_generator(k, n, seed=cfg.seed * 100_003 + idx)))
    for label, M in codes:
        if mode == "exact" and M.n > matroid.EXACT_MAX_COLUMNS:
            raise ValueError(f"exact mode needs n <= {matroid.EXACT_MAX_COLUMNS}; use --mode sampled")
        for p in p_values:
            rep.add(matroid.verify_matroid(M, p, tol=tol, mode=mode, trials=cfg.trials,
                                           seed=cfg.seed, description=f"{label} p={p}"))


def _rm_family(cfg: RunConfig) -> list[tuple[int, int]]:
    r_values = cfg.r or [1]
    m_values = cfg.m or [3, 4, 5, 6]
    return [(int(r), int(m)) for r in r_values for m in m_values if r <= m]


def _rm_threshold(cfg: RunConfig, rep: Report) -> None:
    p = _one(cfg.p, "p", 0.05)
    sub = rmcodes.family_threshold_report(_rm_family(cfg), p, trials=cfg.trials, seed=cfg.seed)
    rep.params.update(sub.params)
    rep.cases.extend(sub.cases)


def _bsc_sim(cfg: RunConfig, rep: Report) -> None:
    rep.params["transmission"] = "uniform random codeword"
    for r, m in _rm_family(cfg):
        code = rmcodes.rm_code(r, m)
        for p in cfg.p or [0.05]:
            res = dataclasses.asdict(rmcodes.bsc_block_error(code, p, cfg.trials, seed=cfg.seed))
            if code.n <= rmcodes.MAX_EXACT_BLOCK:
                res["exact"] = rmcodes.exact_block_error(code, p)
            rep.add(res)


def _weight_report(cfg: RunConfig, rep: Report) -> None:
    r = int(_one(cfg.r, "r"))
    m = int(_one(cfg.m, "m"))
    sub = rmcodes.weight_bound_report(rmcodes.rm_code(r, m))
    rep.params.update(sub.params)
    rep.cases.extend(sub.cases)


def _lambda_table(cfg: RunConfig, rep: Report) -> None:
    tol = 1e-15 if cfg.tol is None else cfg.tol
    for q in cfg.q or [2, 3, math.inf]:
        for e in cfg.eps or list(DEFAULT_EPS):
            new = float(margin.lambda_param(q, e, allow_real=True))
            old = float(margin.lambda_old(q, e))
            rep.add({"description": f"lambda q={q} eps={e}", "q": q, "eps": e,
                     "lambda_new": new, "lambda_old": old, "margin": old - new,
                     "passed": bool(new <= old + tol)})


_DISPATCH = {
    "verify-theorem": _verify_theorem,
    "verify-1d": _verify_1d,
    "certify-proof": _certify_proof,
    "matroid-check": _matroid_check,
    "rm-threshold": _rm_threshold,
    "bsc-sim": _bsc_sim,
    "weight-report": _weight_report,
    "lambda-table": _lambda_table,
}


def _params(cfg: RunConfig) -> dict:
    skip = {"command", "format", "out"}
    return {k: v for k, v in dataclasses.asdict(cfg).items() if k not in skip and v is not None}


def run(config: RunConfig) -> Report:
    """Run one subcommand; the metadata block carries the timestamp and runtime."""
    rep = Report(config.command, _params(config))
    start = time.perf_counter()
    _DISPATCH[config.command](config, rep)
    rep.metadata.update({"runtime_seconds": time.perf_counter() - start,
                         "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds")})
    return rep


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noisecube", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in COMMANDS:
        sp = sub.add_parser(name)
        for flag in ("q", "eps", "p", "n", "r", "m", "x", "y"):
            sp.add_argument(f"--{flag}", help="comma list, a..b range, or inf")
        sp.add_argument("--k", type=int, help="generator rows for random matroids")
        sp.add_argument("--trials", type=int, help="Monte Carlo trials")
        sp.add_argument("--samples", type=int, help="random instances per size")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--tol", type=float)
        sp.add_argument("--mode", choices=("auto", "exact", "sampled"))
        sp.add_argument("--format", choices=("json", "csv"))
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--config", help="key=value file; flags take precedence")
        sp.add_argument("--function", help="cube function file ('n' line, then 2^n values)")
        sp.add_argument("--generator", help="generator file ('k n' line, then 0/1 rows)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = read_config(args.config) if args.config else {}
    for key, value in vars(args).items():
        if key in ("config", "command") or value is None:
            continue
        values[key] = parse_list(value) if key in _LIST_FIELDS else value
    values.pop("command", None)
    return RunConfig(command=args.command, **values)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        rep = run(cfg)
        columns = rmcodes.WEIGHT_CSV_COLUMNS if cfg.command == "weight-report" else None
        data = emit(rep, cfg.format, columns if cfg.format == "csv" else None)
        if cfg.out:
            Path(cfg.out).write_bytes(data)
        else:
            sys.stdout.buffer.write(data)
            sys.stdout.flush()
    except (ValueError, OSError) as exc:
        print(f"noisecube {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if not rep.ok:
        print(f"noisecube {args.command}: {rep.failures} of {len(rep.cases)} cases failed",
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
