"""Command-line front end: presets, experiment sweeps, and instance analysis.

Subcommands:

* ``run``      — Monte Carlo sweep over (algorithm, horizon) cells, CSV output
* ``analyze``  — classification, gaps, hardness, and rate bounds for an instance
* ``presets``  — list the built-in benchmark instances

Configuration comes from an optional JSON file (``--config``) with flags
overriding file values. Arm indices are reported 1-based in human-facing
output; the Python API and CSV contain no arm indices.
"""

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

from .algorithms import ALGORITHMS, BudgetTooSmallError
from .gaps import NotAllInfeasibleError, lb_rate_all_infeasible, lb_rate_two_arm
from .model import BanditInstance, NonUniqueOptimalError, classify_instance
from .montecarlo import ALGORITHM_ORDER, ErrorEstimate, derive_cell_seed, replication_rng, sweep
from .presets import PRESETS, PresetError, build_instance, instance_from_description

__all__ = [
    "ParseError",
    "ValidationError",
    "ExperimentConfig",
    "load_config",
    "records_to_csv",
    "parse_csv",
    "cmd_run",
    "cmd_analyze",
    "cmd_presets",
    "main",
]

CSV_HEADER = "instance_id,algorithm,T,runs,errors,e_hat,log_e_hat,ci_lo,ci_hi,seed"

_CONFIG_KEYS = {
    "instance", "algorithms", "horizons", "runs", "seed", "threads",
    "out", "json", "trace",
}

_DEFAULT_HORIZONS = tuple(range(1000, 10001, 1000))


class ParseError(ValueError):
    """A config or CSV document could not be parsed."""


class ValidationError(ValueError):
    """A config value is structurally valid but semantically wrong."""


@dataclass
class ExperimentConfig:
    """A fully validated experiment description."""

    instance: str | dict
    algorithms: tuple[str, ...]
    horizons: tuple[int, ...]
    runs: int | None  # None -> per-instance default
    seed: int
    threads: int
    out: str | None = None
    json_out: str | None = None
    trace: bool = False


def _validate_algorithms(value) -> tuple[str, ...]:
    if isinstance(value, str):
        value = [v.strip() for v in value.split(",") if v.strip()]
    algorithms = list(value)
    if not algorithms:
        raise ValidationError("'algorithms' must not be empty")
    for a in algorithms:
        if a not in ALGORITHMS:
            raise ValidationError(
                f"'algorithms' contains unknown identifier {a!r}; expected {ALGORITHM_ORDER}"
            )
    # canonical order, duplicates dropped
    return tuple(a for a in ALGORITHM_ORDER if a in algorithms)


def _validate_horizons(value) -> tuple[int, ...]:
    if isinstance(value, str):
        value = [v.strip() for v in value.split(",") if v.strip()]
    try:
        horizons = sorted({int(h) for h in value})
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"'horizons' must be a list of integers: {exc}") from exc
    if not horizons:
        raise ValidationError("'horizons' must not be empty")
    if horizons[0] < 1:
        raise ValidationError("'horizons' must be positive")
    return tuple(horizons)


def _validate_threads(value) -> int:
    if value in (None, "auto"):
        return os.cpu_count() or 1
    try:
        threads = int(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError("'threads' must be an integer or 'auto'") from exc
    if threads < 1:
        raise ValidationError("'threads' must be at least 1")
    return threads


def load_config(path: str | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Merge defaults, an optional JSON config file, and flag overrides."""
    merged = {
        "instance": None,
        "algorithms": ("csr", "if"),
        "horizons": _DEFAULT_HORIZONS,
        "runs": None,
        "seed": 0,
        "threads": "auto",
        "out": None,
        "json": None,
        "trace": False,
    }
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                document = json.load(fh)
        except OSError as exc:
            raise ParseError(f"cannot read config {path!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"config {path!r} is not valid JSON "
                f"(line {exc.lineno}, column {exc.colno}): {exc.msg}"
            ) from exc
        if not isinstance(document, dict):
            raise ValidationError("config document must be a JSON object")
        unknown = set(document) - _CONFIG_KEYS
        if unknown:
            raise ValidationError(f"unknown config keys: {', '.join(sorted(unknown))}")
        merged.update(document)
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value

    if merged["instance"] is None:
        raise ValidationError("no instance given; use --instance or a config file")
    runs = merged["runs"]
    if runs is not None:
        runs = int(runs)
        if runs < 1:
            raise ValidationError("'runs' must be at least 1")
    seed = int(merged["seed"])
    if seed < 0:
        raise ValidationError("'seed' must be nonnegative")
    return ExperimentConfig(
        instance=merged["instance"],
        algorithms=_validate_algorithms(merged["algorithms"]),
        horizons=_validate_horizons(merged["horizons"]),
        runs=runs,
        seed=seed,
        threads=_validate_threads(merged["threads"]),
        out=merged["out"],
        json_out=merged["json"],
        trace=bool(merged["trace"]),
    )


def resolve_instance(spec: str | dict) -> tuple[BanditInstance, str, int]:
    """Turn an instance spec into (instance, id, default replication count)."""
    if isinstance(spec, dict):
        instance = instance_from_description(spec)
        return instance, str(spec.get("name", "custom")), int(spec.get("default_runs", 10000))
    if spec in PRESETS:
        return build_instance(spec), spec, PRESETS[spec]["default_runs"]
    if os.path.exists(spec):
        try:
            with open(spec, "r", encoding="utf-8") as fh:
                record = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"instance file {spec!r} is not valid JSON "
                f"(line {exc.lineno}, column {exc.colno}): {exc.msg}"
            ) from exc
        if not isinstance(record, dict):
            raise ValidationError("instance description must be a JSON object")
        return resolve_instance(record)
    raise PresetError(
        f"unknown instance {spec!r}: not a preset ({', '.join(sorted(PRESETS))}) "
        "and not an existing description file"
    )


def format_float(x: float) -> str:
    """Shortest round-trip decimal; infinities as bare 'inf' / '-inf' tokens."""
    return repr(float(x))


def records_to_csv(records) -> str:
    """Serialize estimates to the stable CSV schema (LF line endings)."""
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            ",".join(
                (
                    r.instance_id,
                    r.algorithm,
                    str(r.T),
                    str(r.runs),
                    str(r.errors),
                    format_float(r.e_hat),
                    format_float(r.log_e_hat),
                    format_float(r.ci_lo),
                    format_float(r.ci_hi),
                    str(r.base_seed),
                )
            )
        )
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> list[ErrorEstimate]:
    """Parse ``records_to_csv`` output back into estimates (lossless)."""
    lines = [line for line in text.splitlines() if line]
    if not lines or lines[0] != CSV_HEADER:
        raise ParseError(f"unexpected CSV header; want {CSV_HEADER!r}")
    records = []
    for ln, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 10:
            raise ParseError(f"line {ln}: expected 10 fields, got {len(parts)}")
        records.append(
            ErrorEstimate(
                instance_id=parts[0],
                algorithm=parts[1],
                T=int(parts[2]),
                runs=int(parts[3]),
                errors=int(parts[4]),
                e_hat=float(parts[5]),
                log_e_hat=float(parts[6]),
                ci_lo=float(parts[7]),
                ci_hi=float(parts[8]),
                base_seed=int(parts[9]),
            )
        )
    return records


def _record_json(r: ErrorEstimate) -> dict:
    return {
        "instance_id": r.instance_id,
        "algorithm": r.algorithm,
        "T": r.T,
        "runs": r.runs,
        "errors": r.errors,
        "e_hat": r.e_hat,
        # JSON has no -inf literal; keep the CSV token
        "log_e_hat": r.log_e_hat if math.isfinite(r.log_e_hat) else format_float(r.log_e_hat),
        "ci_lo": r.ci_lo,
        "ci_hi": r.ci_hi,
        "seed": r.base_seed,
    }


def _trace_lines(instance, instance_id, algorithms, horizons, base_seed):
    """One traced replication (r = 0) per cell, one line per rejection."""
    lines = []
    for algorithm in algorithms:
        for T in sorted(horizons):
            cell_seed = derive_cell_seed(base_seed, algorithm, T)
            out = ALGORITHMS[algorithm](instance, T, replication_rng(cell_seed, 0), trace=True)
            for rec in out.trace:
                gaps = " ".join(
                    f"{arm + 1}:{format_float(val)}" for arm, val in sorted(rec.gaps.items())
                )
                lines.append(
                    f"instance={instance_id} algorithm={algorithm} T={T} "
                    f"phase={rec.phase} rejected={rec.rejected + 1} "
                    f"j_hat={rec.j_hat + 1} gaps={gaps}"
                )
            lines.append(
                f"instance={instance_id} algorithm={algorithm} T={T} "
                f"recommended={out.recommended_arm + 1} feasible={out.feasibility_flag}"
            )
    return lines


def cmd_run(config: ExperimentConfig) -> int:
    """Execute the sweep and write the CSV (and optional JSON mirror)."""
    instance, instance_id, default_runs = resolve_instance(config.instance)
    runs = config.runs if config.runs is not None else default_runs
    result = sweep(
        instance,
        config.algorithms,
        config.horizons,
        runs,
        base_seed=config.seed,
        parallelism=config.threads,
        instance_id=instance_id,
    )
    csv_text = records_to_csv(result.records)
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    if config.json_out:
        payload = {
            "metadata": result.metadata,
            "records": [_record_json(r) for r in result.records],
        }
        with open(config.json_out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    if config.trace:
        lines = _trace_lines(instance, instance_id, config.algorithms, config.horizons, config.seed)
        trace_path = (config.out + ".trace") if config.out else None
        if trace_path:
            with open(trace_path, "w", encoding="utf-8") as fh:
                fh.write("\n".join(lines) + "\n")
        else:
            sys.stderr.write("\n".join(lines) + "\n")
    return 0


def _fmt12(x: float) -> str:
    """Report formatting: 12 significant digits so hand-checkable values read clean."""
    return format(float(x), ".12g")


def _analyze_report(instance: BanditInstance, instance_id: str) -> str:
    analysis = classify_instance(instance)
    lines = [
        f"instance: {instance_id}",
        f"arms: {instance.K}  tau: {_fmt12(instance.tau)}  "
        f"a1: {_fmt12(instance.a1)}  a2: {_fmt12(instance.a2)}",
        f"feasible: {analysis.feasible_flag}  "
        f"feasible arms: {{{', '.join(str(i + 1) for i in analysis.feasible_set)}}}",
        f"optimal arm: J = {analysis.optimal_arm + 1}",
        "",
        "arm  class                  mu1          mu2          delta(J,i)             Delta(J,i)",
    ]
    for i in range(instance.K):
        lines.append(
            f"{i + 1:>3}  {analysis.classes[i].value:<21}  "
            f"{_fmt12(instance.mu1[i]):<11}  {_fmt12(instance.mu2[i]):<11}  "
            f"{_fmt12(analysis.delta_to_opt[i]):<21}  "
            f"{_fmt12(analysis.Delta_to_opt[i])}"
        )
    lines.append("")
    lines.append("ordering: " + " ".join(str(i + 1) for i in analysis.ordering))
    lines.append(f"H1 = {_fmt12(analysis.H1)}")
    lines.append(f"H2 = {_fmt12(analysis.H2)}")
    if instance.K == 2:
        report = lb_rate_two_arm(instance)
        lines.append(
            f"two-arm rate bound: Delta^2 = {_fmt12(report.rate_theorem1)}  "
            f"case {report.case} constant-carrying rate = {_fmt12(report.rate_appendix)}"
        )
    try:
        all_inf = lb_rate_all_infeasible(instance)
    except NotAllInfeasibleError:
        pass
    else:
        lines.append(
            f"all-infeasible rate bound = {_fmt12(all_inf.rate)}  "
            f"(supplementary H1 identity = {_fmt12(all_inf.h1_supplementary)})"
        )
    return "\n".join(lines) + "\n"


def cmd_analyze(config: ExperimentConfig) -> int:
    """Write the gap/hardness analysis report for the configured instance."""
    instance, instance_id, _ = resolve_instance(config.instance)
    report = _analyze_report(instance, instance_id)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(report)
    else:
        sys.stdout.write(report)
    return 0


def cmd_presets() -> int:
    """List the built-in instances."""
    for name in sorted(PRESETS):
        record = PRESETS[name]
        arms = " ".join(f"({m[0]}, {m[1]})" for m in record["means"])
        sys.stdout.write(
            f"{name}: tau={record['tau']} default_runs={record['default_runs']}\n"
            f"  arms: {arms}\n"
            f"  {record['summary']}\n"
        )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="banditlab",
        description="Fixed-budget constrained best-arm identification laboratory.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.add_argument("--instance", help="preset name or instance description JSON file")
        p.add_argument("--out", help="output path (default: stdout)")

    run = sub.add_parser("run", help="run a Monte Carlo sweep and write CSV")
    add_common(run)
    run.add_argument("--algorithms", help="comma-separated subset of csr,if,sr")
    run.add_argument("--horizons", help="comma-separated budgets, e.g. 1000,2000")
    run.add_argument("--runs", type=int, help="replications per cell")
    run.add_argument("--seed", type=int, help="base seed (default 0)")
    run.add_argument("--threads", help="worker processes, or 'auto'")
    run.add_argument("--json", dest="json_out", help="also write a JSON mirror here")
    run.add_argument("--trace", action="store_true",
                     help="write one traced replication per cell")

    analyze = sub.add_parser("analyze", help="report gaps, hardness, and rate bounds")
    add_common(analyze)

    sub.add_parser("presets", help="list built-in instances")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "presets":
            return cmd_presets()
        overrides = {
            "instance": args.instance,
            "out": args.out,
        }
        if args.command == "run":
            overrides.update(
                algorithms=args.algorithms,
                horizons=args.horizons,
                runs=args.runs,
                seed=args.seed,
                threads=args.threads,
                json=args.json_out,
                trace=args.trace or None,
            )
        config = load_config(args.config, overrides)
        if args.command == "run":
            return cmd_run(config)
        return cmd_analyze(config)
    except (ParseError, ValidationError, PresetError, NonUniqueOptimalError,
            NotAllInfeasibleError, BudgetTooSmallError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
