"""Benchmark command line: single solves and multi-algorithm sweeps.

``regret-forge solve`` runs one configuration and writes a convergence CSV
with the columns::

    run_id,game,algorithm,iteration,nodes_touched,elapsed_ms,br_vs_p1,br_vs_p2,exploit_avg

``regret-forge sweep`` runs several algorithms (and, for the sampled
variants, several seeds) over one game from a JSON config file, writing one
CSV per run plus a merged comparison CSV.  Exit codes: 0 success, 1 bad
configuration, 2 game validation failure, 3 numeric failure.

Everything but wall-clock time is deterministic: re-running a config
reproduces every CSV byte-for-byte outside the elapsed_ms column.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

from .cfr import CfrRun, PRESETS, SolveConfig, preset_config
from .evaluate import ConvergenceRecord, to_mbb
from .games.builtin import BUILTIN_NAMES, GameSpecError, game_from_name
from .games.loader import GameFileError
from .games.model import Game, validate_game
from .mccfr import MccfrConfig, MccfrRun
from .minimizers import DiscountSchedule, NumericError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3

CSV_HEADER = ("run_id,game,algorithm,iteration,nodes_touched,elapsed_ms,"
              "br_vs_p1,br_vs_p2,exploit_avg")

CFR_ALGS = tuple(PRESETS)
MCCFR_ALGS = ("mccfr", "mccfr-discount", "mccfr-initial-discount")
OPTIMISTIC_ALGS = ("lcfr", "dcfr", "dcfr-prune")

THREADS_ENV = "REGRET_FORGE_THREADS"


class ConfigError(ValueError):
    """The run configuration is invalid."""


@dataclass
class RunConfig:
    """One fully resolved benchmark run."""

    game: str
    alg: str = "dcfr"
    alpha: float | None = None
    beta: float | None = None
    gamma: float | None = None
    minimizer: str | None = None
    optimistic: bool = False
    iters: int | None = None
    eval_every: str | int = "pow2"
    seed: int = 1
    seeds: int = 1
    period_nodes: int = 100_000
    budget_nodes: int = 1_000_000
    out: str | None = None
    unit: str = "chips"
    big_blind: float = 1.0
    track_pure_switch: bool = False

    DEFAULT_ITERS = 8192

    def __post_init__(self):
        if self.alg not in CFR_ALGS + MCCFR_ALGS:
            raise ConfigError(
                f"unknown algorithm {self.alg!r}; valid: "
                f"{', '.join(CFR_ALGS + MCCFR_ALGS)}")
        if self.alg in MCCFR_ALGS:
            if self.iters is not None:
                raise ConfigError(
                    "sampled runs are budgeted in nodes touched; "
                    "use budget_nodes instead of iters")
            if self.optimistic or self.minimizer or self.alpha is not None \
                    or self.beta is not None or self.gamma is not None:
                raise ConfigError(
                    "minimizer/discount overrides apply only to the "
                    "full-traversal algorithms")
        if self.optimistic and self.alg not in OPTIMISTIC_ALGS:
            raise ConfigError(
                f"the optimistic rule is only exposed for "
                f"{', '.join(OPTIMISTIC_ALGS)}")
        if self.minimizer is not None and self.minimizer not in ("rm", "rm+", "nh"):
            raise ConfigError(f"unknown minimizer {self.minimizer!r}")
        if self.unit not in ("chips", "mbb"):
            raise ConfigError(f"unit must be 'chips' or 'mbb', got {self.unit!r}")
        if self.unit == "mbb" and not self.big_blind > 0:
            raise ConfigError("mbb output needs a positive big_blind")
        if self.seeds < 1:
            raise ConfigError("seeds must be >= 1")
        if isinstance(self.eval_every, str) and self.eval_every != "pow2":
            raise ConfigError(
                f"eval_every must be 'pow2' or an integer, got {self.eval_every!r}")

    @property
    def is_sampled(self) -> bool:
        return self.alg in MCCFR_ALGS

    def solver_config(self) -> SolveConfig:
        cfg = preset_config(self.alg)
        schedule = cfg.schedule
        if self.alpha is not None or self.beta is not None or self.gamma is not None:
            try:
                schedule = DiscountSchedule(
                    schedule.alpha if self.alpha is None else self.alpha,
                    schedule.beta if self.beta is None else self.beta,
                    schedule.gamma if self.gamma is None else self.gamma)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        minimizer = self.minimizer or cfg.minimizer
        if minimizer == "rm+" and schedule.beta != -math.inf:
            raise ConfigError("minimizer rm+ requires beta = -inf")
        try:
            return SolveConfig(
                minimizer=minimizer,
                optimistic=self.optimistic or cfg.optimistic,
                schedule=schedule,
                iterations=self.iters or self.DEFAULT_ITERS,
                eval_every=self.eval_every,
                track_pure_switch=self.track_pure_switch,
                label=self.alg)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def mccfr_config(self, run_index: int = 0) -> MccfrConfig:
        variant = {"mccfr": "vanilla",
                   "mccfr-discount": "discounted",
                   "mccfr-initial-discount": "initial-discount"}[self.alg]
        try:
            return MccfrConfig(
                variant=variant, seed=self.seed, run_index=run_index,
                budget_nodes=self.budget_nodes, period_nodes=self.period_nodes,
                eval_every=self.eval_every, label=self.alg)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


_CONFIG_KEYS = {f.name: f for f in fields(RunConfig)}
_INT_KEYS = {"iters", "seed", "seeds", "period_nodes", "budget_nodes"}
_FLOAT_KEYS = {"alpha", "beta", "gamma", "big_blind"}
_BOOL_KEYS = {"optimistic", "track_pure_switch"}


def _coerce(key: str, value):
    if key in _BOOL_KEYS:
        if not isinstance(value, bool):
            raise ConfigError(f"key {key!r}: expected bool, got {type(value).__name__}")
        return value
    if key in _INT_KEYS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"key {key!r}: expected int, got {type(value).__name__}")
        return value
    if key in _FLOAT_KEYS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"key {key!r}: expected number, got {type(value).__name__}")
        return float(value)
    if key == "eval_every":
        return parse_eval_every(value)
    if not isinstance(value, str):
        raise ConfigError(f"key {key!r}: expected str, got {type(value).__name__}")
    return value


def parse_eval_every(value):
    if value == "pow2":
        return "pow2"
    if isinstance(value, bool):
        raise ConfigError("key 'eval_every': expected 'pow2' or positive int")
    if isinstance(value, int):
        if value < 1:
            raise ConfigError("key 'eval_every': expected 'pow2' or positive int")
        return value
    if isinstance(value, str) and value.isdigit() and int(value) >= 1:
        return int(value)
    raise ConfigError(
        f"key 'eval_every': expected 'pow2' or positive int, got {value!r}")


def load_config(path: str | Path) -> RunConfig:
    """Parse a solve config file with full validation."""
    data = _read_json_object(path)
    return config_from_dict(data)


def config_from_dict(data: dict) -> RunConfig:
    kwargs = {}
    for key, value in data.items():
        if key not in _CONFIG_KEYS:
            raise ConfigError(
                f"unknown key {key!r}; valid keys: "
                f"{', '.join(sorted(_CONFIG_KEYS))}")
        kwargs[key] = _coerce(key, value)
    if "game" not in kwargs:
        raise ConfigError("missing key 'game'")
    return RunConfig(**kwargs)


def _read_json_object(path: str | Path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config {path}: expected a JSON object")
    return data


# ---------------------------------------------------------------------------
# CSV output


def record_row(rec: ConvergenceRecord, run_id: str, game: str, alg: str) -> str:
    return ",".join([
        run_id, game, alg, str(rec.iteration), str(rec.nodes_touched),
        repr(rec.elapsed_ms), repr(rec.br_vs_p1), repr(rec.br_vs_p2),
        repr(rec.exploit_avg),
    ])


def write_csv(path: Path, rows: list[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join([CSV_HEADER] + rows) + "\n")


def default_out_name(game: str, alg: str, seed_suffix: str = "") -> str:
    safe = "".join(c if c.isalnum() or c in "-_" else "-" for c in game)
    return f"{safe}_{alg}{seed_suffix}.csv"


# ---------------------------------------------------------------------------
# solve


def _build_game(name: str) -> Game:
    try:
        return game_from_name(name)
    except (GameSpecError, GameFileError) as exc:
        raise ConfigError(str(exc)) from None


def _execute_run(game: Game, cfg: RunConfig, run_index: int = 0
                 ) -> tuple[str, list[ConvergenceRecord], dict]:
    """Run one solve; returns (run_id, records, extras)."""
    if cfg.is_sampled:
        run = MccfrRun(game, cfg.mccfr_config(run_index))
        run.run()
        run_id = f"{cfg.alg}-s{run_index}" if cfg.seeds > 1 else cfg.alg
        return run_id, run.records, {}
    solver = CfrRun(game, cfg.solver_config())
    solver.run()
    extras = {}
    if cfg.track_pure_switch:
        extras["pure_switch"] = solver.pure_switch_iteration
    return cfg.alg, solver.records, extras


def solve_command(args) -> int:
    try:
        cfg = _args_to_config(args)
        # resolve the engine configuration eagerly so bad parameter
        # combinations fail before any work happens
        cfg.mccfr_config() if cfg.is_sampled else cfg.solver_config()
        game = _build_game(cfg.game)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    report = validate_game(game)
    if not report.ok:
        print(f"game {cfg.game!r} failed validation:", file=sys.stderr)
        print(report.summary(), file=sys.stderr)
        return EXIT_VALIDATION
    try:
        run_id, records, extras = _execute_run(game, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    out = Path(cfg.out) if cfg.out else Path(default_out_name(cfg.game, cfg.alg))
    write_csv(out, [record_row(r, run_id, cfg.game, cfg.alg) for r in records])

    final = records[-1] if records else None
    if final is not None:
        value = final.exploit_avg
        unit = cfg.unit
        if unit == "mbb":
            value = to_mbb(value, cfg.big_blind)
        print(f"final exploitability: {value!r} {unit} "
              f"(iteration {final.iteration}, nodes {final.nodes_touched})")
    if "pure_switch" in extras:
        it = extras["pure_switch"]
        print("pure strategy first played at iteration "
              f"{it if it is not None else 'never'}")
    print(f"wrote {out}")
    return EXIT_OK


def _args_to_config(args) -> RunConfig:
    data: dict = {}
    if args.config:
        data.update(_read_json_object(args.config))
    cli_keys = ["game", "alg", "alpha", "beta", "gamma", "minimizer", "iters",
                "eval_every", "seed", "seeds", "period_nodes", "budget_nodes",
                "out", "unit", "big_blind"]
    for key in cli_keys:
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            data[key] = value
    if getattr(args, "optimistic", False):
        data["optimistic"] = True
    if getattr(args, "track_pure_switch", False):
        data["track_pure_switch"] = True
    if "eval_every" in data:
        data["eval_every"] = parse_eval_every(data["eval_every"])
    return config_from_dict(data)


# ---------------------------------------------------------------------------
# sweep


def _sweep_task(task: dict):
    """Worker: one run of a sweep.  Returns (key, rows, records, error)."""
    game_name = task["game"]
    cfg = config_from_dict(task["config"])
    run_index = task["run_index"]
    try:
        game = _build_game(game_name)
        report = validate_game(game)
        if not report.ok:
            return task["key"], None, None, (EXIT_VALIDATION, report.summary())
        run_id, records, _ = _execute_run(game, cfg, run_index)
        rows = [record_row(r, run_id, game_name, cfg.alg) for r in records]
        payload = [(r.iteration, r.nodes_touched, r.elapsed_ms, r.br_vs_p1,
                    r.br_vs_p2, r.exploit_avg, r.checkpoint) for r in records]
        return task["key"], rows, payload, None
    except ConfigError as exc:
        return task["key"], None, None, (EXIT_CONFIG, str(exc))
    except NumericError as exc:
        return task["key"], None, None, (EXIT_NUMERIC, str(exc))


def _thread_cap() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1, got {cap}")
    return cap


def sweep_command(args) -> int:
    try:
        data = _read_json_object(args.config)
        algs = data.pop("algs", None)
        out_dir = Path(args.out_dir or data.pop("out_dir", "sweep-out"))
        if not isinstance(algs, list) or not algs:
            raise ConfigError("sweep config needs a non-empty 'algs' list")
        shared = dict(data)
        seeds = shared.get("seeds", 1)
        tasks = []
        for alg in algs:
            run_config = dict(shared)
            run_config["alg"] = alg
            cfg = config_from_dict(run_config)  # validate eagerly
            n_runs = cfg.seeds if cfg.is_sampled else 1
            for i in range(n_runs):
                suffix = f"_s{i}" if n_runs > 1 else ""
                tasks.append({
                    "key": (alg, i),
                    "game": cfg.game,
                    "config": run_config,
                    "run_index": i,
                    "out": out_dir / default_out_name(cfg.game, alg, suffix),
                })
        cap = min(_thread_cap(), len(tasks))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if cap > 1:
        with ProcessPoolExecutor(max_workers=cap) as pool:
            results = list(pool.map(_sweep_task, tasks))
    else:
        results = [_sweep_task(t) for t in tasks]

    by_key = {r[0]: r for r in results}
    merged_rows: list[str] = []
    mean_groups: dict[str, list] = {}
    exit_code = EXIT_OK
    for task in tasks:
        key, rows, payload, error = by_key[task["key"]]
        alg, run_index = key
        if error is not None:
            code, message = error
            print(f"run {alg} (seed index {run_index}) failed: {message}",
                  file=sys.stderr)
            exit_code = max(exit_code, code)
            continue
        write_csv(task["out"], rows)
        print(f"wrote {task['out']}")
        merged_rows.extend(rows)
        mean_groups.setdefault(alg, []).append(payload)

    game_name = tasks[0]["game"] if tasks else "sweep"
    merged = out_dir / default_out_name(game_name, "sweep")
    write_csv(merged, merged_rows)
    print(f"wrote {merged}")

    for alg, runs in mean_groups.items():
        if len(runs) > 1:
            write_csv(out_dir / default_out_name(game_name, alg, "_mean"),
                      _mean_rows(runs, game_name, alg))
    return exit_code


def _mean_rows(runs: list, game_name: str, alg: str) -> list[str]:
    """Average aligned checkpoints across seeds of one algorithm."""
    n_points = min(len(r) for r in runs)
    rows = []
    for i in range(n_points):
        points = [r[i] for r in runs]
        checkpoint = points[0][6]
        nodes = checkpoint if checkpoint is not None else \
            round(sum(p[1] for p in points) / len(points))
        rec = ConvergenceRecord(
            iteration=round(sum(p[0] for p in points) / len(points)),
            nodes_touched=int(nodes),
            elapsed_ms=sum(p[2] for p in points) / len(points),
            br_vs_p1=sum(p[3] for p in points) / len(points),
            br_vs_p2=sum(p[4] for p in points) / len(points),
            exploit_avg=sum(p[5] for p in points) / len(points))
        rows.append(record_row(rec, f"{alg}-mean", game_name, alg))
    return rows


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regret-forge",
        description="CFR-family solvers and benchmarks for two-player "
                    "zero-sum games")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run one algorithm on one game")
    s.add_argument("--game", help=f"{', '.join(BUILTIN_NAMES)}, "
                   "matrix:<path>, bandit:<p0,p1,...>, or file:<path>")
    s.add_argument("--alg", help=f"{', '.join(CFR_ALGS + MCCFR_ALGS)}")
    s.add_argument("--alpha", type=float)
    s.add_argument("--beta", type=float)
    s.add_argument("--gamma", type=float)
    s.add_argument("--minimizer", choices=["rm", "rm+", "nh"])
    s.add_argument("--optimistic", action="store_true")
    s.add_argument("--iters", type=int)
    s.add_argument("--eval-every", dest="eval_every")
    s.add_argument("--seed", type=int)
    s.add_argument("--seeds", type=int)
    s.add_argument("--period-nodes", dest="period_nodes", type=int)
    s.add_argument("--budget-nodes", dest="budget_nodes", type=int)
    s.add_argument("--out")
    s.add_argument("--config", help="JSON file with the same keys; CLI flags win")
    s.add_argument("--track-pure-switch", dest="track_pure_switch",
                   action="store_true",
                   help="report the first iteration whose strategy is pure")
    s.add_argument("--unit", choices=["chips", "mbb"])
    s.add_argument("--big-blind", dest="big_blind", type=float)
    s.set_defaults(func=solve_command)

    w = sub.add_parser("sweep", help="run several algorithms over one game")
    w.add_argument("--config", required=True)
    w.add_argument("--out-dir", dest="out_dir")
    w.set_defaults(func=sweep_command)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def entry() -> None:
    sys.exit(main())
