"""The toolkit's commands: solve, circuit, verify and bench."""

import logging
import math
import time
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Tuple

from lib.algorithms import (
    ALGORITHMS,
    BACKTRACKING,
    BUILDERS,
    COLUMN_GATE_MODES,
    DIRECT,
    PIPELINE,
    Builder,
    PipelineOptions,
)
from lib.board import BoardLayout, Solution
from lib.circuit_format import emit_text
from lib.command_handler import (
    EXIT_FAILED,
    EXIT_OK,
    SWITCH,
    Command,
    CommandHandler,
    FlagSpec,
    parse_bool,
    parse_flags,
    result,
)
from lib.config_loader import ConfigLoader, QueensConfig
from lib.errors import DecodeFailure, ResourceLimit, UsageError
from lib.oracle import (
    KNOWN_COUNTS,
    backtracking_branch_probability,
    count_solutions,
    search_space_sizes,
    solve_classical,
)
from lib.report import EXACT, MODES, SHOTS, CircuitStats, Report, render_report, render_stats, render_table
from lib.report_manager import ReportManager
from lib.simulator import RunResult, Simulator, extract_solutions
from lib.wstate import STRATEGIES

log = logging.getLogger(__name__)

TOLERANCE = 1e-9
BRANCH_PROBABILITY_TOLERANCE = 1e-12


def _choice(options) -> Any:
    def convert(value: str) -> str:
        if value not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got '{value}'")
        return value

    return convert


CIRCUIT_FLAGS: FlagSpec = {
    "n": int,
    "algorithm": _choice(ALGORITHMS),
    "column-gate": _choice(COLUMN_GATE_MODES),
    "dynamic": parse_bool,
    "strategy": _choice(STRATEGIES),
    "force": SWITCH,
}

SOLVE_FLAGS: FlagSpec = dict(
    CIRCUIT_FLAGS,
    **{
        "mode": _choice(MODES),
        "shots": int,
        "seed": int,
        "json": str,
        "max-branches": int,
    },
)

VERIFY_FLAGS: FlagSpec = {
    "n-max": int,
    "column-gate": _choice(COLUMN_GATE_MODES),
    "dynamic": parse_bool,
    "strategy": _choice(STRATEGIES),
    "max-branches": int,
    "force": SWITCH,
}


def _check_n(n: Optional[int], config: QueensConfig, force: bool, flag: str = "--n") -> int:
    if n is None:
        raise UsageError(f"{flag} is required")
    if n < 1:
        raise UsageError(f"{flag} must be at least 1, got {n}")
    if n > config.max_n and not force:
        raise UsageError(f"{flag} {n} exceeds the configured maximum {config.max_n}; pass --force to run anyway")
    return n


def _options(flags: Dict[str, Any], config: QueensConfig) -> PipelineOptions:
    try:
        return PipelineOptions(
            column_gate_mode=flags.get("column_gate", config.column_gate),
            dynamic=flags.get("dynamic", config.dynamic),
            wstate_strategy=flags.get("strategy", config.wstate_strategy),
        )
    except ValueError as e:
        raise UsageError(str(e))


def _simulator(flags: Dict[str, Any], config: QueensConfig) -> Simulator:
    effective = config.with_overrides(max_branches=flags.get("max_branches"))
    return Simulator(effective.max_branches, effective.prune_threshold)


def solve(
    n: int,
    algorithm: str,
    options: PipelineOptions,
    simulator: Simulator,
    mode: str = EXACT,
    shots: int = 4096,
    seed: int = 0,
    builders: Mapping[str, Builder] = BUILDERS,
) -> Report:
    """Build, run and check one circuit against the classical solver.

    Raises:
        ResourceLimit: exact mode exceeded the simulator's branch cap
        DecodeFailure: a post-selected board is not a permutation
    """
    if mode not in MODES:
        raise UsageError(f"Unknown mode '{mode}'")
    if algorithm not in builders:
        raise UsageError(f"Unknown algorithm '{algorithm}'")
    layout = BoardLayout(n)
    circuit, post = builders[algorithm](layout, options)

    started = time.perf_counter()
    if mode == EXACT:
        run = simulator.run_exact(circuit)
    else:
        run = RunResult.from_counts(simulator.run_shots(circuit, shots, seed), shots)
    wall_time_ms = (time.perf_counter() - started) * 1000

    solutions, success = extract_solutions(run, layout, post)
    oracle = solve_classical(n)
    found = [cols for cols, _ in solutions]
    if mode == EXACT:
        match = set(found) == set(oracle)
    else:
        match = set(found) <= set(oracle)

    stats = CircuitStats.of(circuit)
    stats.branches_explored = run.stats.branches_explored
    stats.peak_support = run.stats.peak_support
    log.info("solve n=%d %s %s: %d solutions, success %.6g", n, algorithm, mode, len(solutions), success)
    return Report(
        n=n,
        algorithm=algorithm,
        mode=mode,
        solutions=solutions,
        success_probability=success,
        oracle_count=len(oracle),
        oracle_match=match,
        circuit=stats,
        search_space=search_space_sizes(n),
        wall_time_ms=wall_time_ms,
        seed=seed if mode == SHOTS else None,
        shots=shots if mode == SHOTS else None,
        options={
            "column_gate": options.column_gate_mode,
            "dynamic": options.dynamic,
            "wstate_strategy": options.wstate_strategy,
        },
    )


def expected_success(n: int, algorithm: str, solutions: List[Solution]) -> float:
    """Exact success probability each construction should reach."""
    count = len(solutions)
    if algorithm == PIPELINE:
        return count / n ** n
    if algorithm == DIRECT:
        return count / math.factorial(n)
    return float(sum((backtracking_branch_probability(n, s) for s in solutions), Fraction(0)))


def verify_cell(
    n: int, algorithm: str, options: PipelineOptions, simulator: Simulator, builders: Mapping[str, Builder]
) -> Tuple[Optional[str], List[Solution]]:
    """Check one (n, algorithm) pair; returns (failure or None, solutions found)."""
    try:
        report = solve(n, algorithm, options, simulator, builders=builders)
    except DecodeFailure as e:
        return f"decode failure: {e}", []
    oracle = solve_classical(n)
    found = report.solution_set
    if not report.oracle_match:
        return f"solutions {sorted(found)} differ from oracle {oracle}", found
    if n in KNOWN_COUNTS and len(found) != KNOWN_COUNTS[n]:
        return f"found {len(found)} solutions, expected {KNOWN_COUNTS[n]}", found
    expected = expected_success(n, algorithm, oracle)
    if abs(report.success_probability - expected) > TOLERANCE:
        return f"success probability {report.success_probability!r} != {expected!r}", found
    if algorithm == BACKTRACKING:
        for cols, probability in report.solutions:
            exact = float(backtracking_branch_probability(n, cols))
            if abs(probability - exact) > BRANCH_PROBABILITY_TOLERANCE:
                return f"solution {list(cols)} has probability {probability!r}, expected {exact!r}", found
    return None, found


def _solve_command(command: Command, config: QueensConfig, builders: Mapping[str, Builder]) -> Dict[str, Any]:
    """solve --n <int> [--algorithm ...] [--mode exact|shots] [--json path]"""
    flags = parse_flags(command.args, SOLVE_FLAGS)
    n = _check_n(flags.get("n"), config, flags.get("force", False))
    shots = flags.get("shots", config.shots)
    seed = flags.get("seed", config.seed)
    if shots < 1:
        raise UsageError(f"--shots must be at least 1, got {shots}")
    if seed < 0:
        raise UsageError(f"--seed must be non-negative, got {seed}")

    report = solve(
        n,
        flags.get("algorithm", PIPELINE),
        _options(flags, config),
        _simulator(flags, config),
        mode=flags.get("mode", EXACT),
        shots=shots,
        seed=seed,
        builders=builders,
    )
    message = render_report(report)
    if "json" in flags:
        message += "\n" + ReportManager().save_report(report, flags["json"])
    return result(message, EXIT_OK if report.oracle_match else EXIT_FAILED, report=report)


def _circuit_command(command: Command, config: QueensConfig, builders: Mapping[str, Builder]) -> Dict[str, Any]:
    """circuit --n <int> [--algorithm ...] [--stats]"""
    flags = parse_flags(command.args, dict(CIRCUIT_FLAGS, stats=SWITCH))
    n = _check_n(flags.get("n"), config, flags.get("force", False))
    algorithm = flags.get("algorithm", PIPELINE)
    circuit, _ = builders[algorithm](BoardLayout(n), _options(flags, config))
    if flags.get("stats"):
        return result(render_stats(circuit), circuit=circuit)
    return result(emit_text(circuit).rstrip("\n"), circuit=circuit)


def _verify_command(command: Command, config: QueensConfig, builders: Mapping[str, Builder]) -> Dict[str, Any]:
    """verify [--n-max <int>]: every algorithm for n = 1..n-max against the oracle."""
    flags = parse_flags(command.args, VERIFY_FLAGS)
    n_max = _check_n(flags.get("n_max", config.verify_n_max), config, flags.get("force", False), "--n-max")
    options = _options(flags, config)
    simulator = _simulator(flags, config)

    rows = []
    failures = []
    for n in range(1, n_max + 1):
        row: List[Any] = [n, count_solutions(n)]
        reference: Optional[List[Solution]] = None
        for algorithm in ALGORITHMS:
            failure, found = verify_cell(n, algorithm, options, simulator, builders)
            if failure is None and reference is not None and set(found) != set(reference):
                failure = f"disagrees with {ALGORITHMS[0]}: {sorted(found)} vs {sorted(reference)}"
            if reference is None:
                reference = found
            row.append("PASS" if failure is None else "FAIL")
            if failure is not None:
                failures.append(f"n={n} algorithm={algorithm}: {failure}")
        rows.append(row)

    table = render_table(["n", "count"] + list(ALGORITHMS), rows)
    passed = len(rows) * len(ALGORITHMS) - len(failures)
    summary = f"{passed}/{len(rows) * len(ALGORITHMS)} checks passed"
    if failures:
        return result(f"{table}\n{summary}\nFirst failure: {failures[0]}", EXIT_FAILED, failures=failures)
    return result(f"{table}\n{summary}")


def _bench_command(command: Command, config: QueensConfig, builders: Mapping[str, Builder]) -> Dict[str, Any]:
    """bench [--n-max <int>]: size, depth and exact-run time per algorithm."""
    flags = parse_flags(command.args, VERIFY_FLAGS)
    n_max = _check_n(flags.get("n_max", config.verify_n_max), config, flags.get("force", False), "--n-max")
    options = _options(flags, config)
    simulator = _simulator(flags, config)

    rows = []
    for n in range(1, n_max + 1):
        for algorithm in ALGORITHMS:
            report = None
            try:
                report = solve(n, algorithm, options, simulator, builders=builders)
            except ResourceLimit as e:
                log.warning("bench n=%d %s: %s", n, algorithm, e)
            if report is None:
                circuit, _ = builders[algorithm](BoardLayout(n), options)
                stats = CircuitStats.of(circuit)
                elapsed = "limit"
            else:
                stats = report.circuit
                elapsed = f"{report.wall_time_ms:.1f}"
            rows.append([n, algorithm, stats.qubits, sum(stats.gate_histogram.values()), stats.depth, elapsed])
    return result(render_table(["n", "algorithm", "qubits", "gates", "depth", "exact_ms"], rows))


def create_queens_command_handler(
    config: Optional[QueensConfig] = None, builders: Optional[Mapping[str, Builder]] = None
) -> CommandHandler:
    """Command handler with the toolkit's commands registered.

    Args:
        config: Settings (default: loaded from config/defaults.yaml and the environment)
        builders: Algorithm name -> circuit builder (default: the real builders)
    """
    config = config or ConfigLoader().load()
    builders = builders or BUILDERS
    handler = CommandHandler()

    handler.register_command(
        "solve", lambda cmd: _solve_command(cmd, config, builders), "Build, run and check one circuit"
    )
    handler.register_command(
        "circuit", lambda cmd: _circuit_command(cmd, config, builders), "Print a circuit dump or its stats"
    )
    handler.register_command(
        "verify", lambda cmd: _verify_command(cmd, config, builders), "Check every algorithm against the oracle"
    )
    handler.register_command(
        "bench", lambda cmd: _bench_command(cmd, config, builders), "Tabulate circuit sizes and run times"
    )
    return handler
