"""Command-line driver: classify partitions, verify them against the rank
oracle, sweep ranges, and emit figure grids and fixture tables.

Config precedence is flags, then environment (SECANT_PRIME, SECANT_SEED,
SECANT_TRIALS), then defaults. Exit codes: 0 success or MATCH, 1 verified
mismatch, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator

from .formulas import (
    classify,
    classify_case,
    dim_IZ_theory,
    expected_dim_IZ,
    is_defective,
)
from .gfpoly import DEFAULT_PRIME, PrimeField
from .oracle import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    VERDICT_MATCH,
    oracle_dim_IZ,
    verify,
)
from .partitions import Partition, PartitionError, derived, enumerate_partitions

ENV_PRIME = "SECANT_PRIME"
ENV_SEED = "SECANT_SEED"
ENV_TRIALS = "SECANT_TRIALS"


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings for one command invocation."""

    prime: int = DEFAULT_PRIME
    trials: int = DEFAULT_TRIALS
    base_seed: int = DEFAULT_SEED
    output_format: str = "json"
    d_max: int = 10
    r_min: int = 2
    r_max: int | None = None
    mode: str = "classify"
    jobs: int = 1

    def validate(self) -> None:
        PrimeField(self.prime)  # raises ValueError unless prime and in range
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.d_max < 2:
            raise ValueError(f"d-max must be >= 2, got {self.d_max}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")


def parse_partition(text: str) -> Partition:
    """Parse a comma-separated degree list such as '9,7,2' (auto-sorted)."""
    tokens = [tok.strip() for tok in text.split(",")]
    try:
        degrees = [int(tok) for tok in tokens if tok != ""]
    except ValueError:
        raise PartitionError(
            f"cannot parse {text!r}: expected comma-separated integers"
        ) from None
    return Partition(degrees)


def _env_int(name: str) -> int | None:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None


def _pick(flag_value: int | None, env_name: str, default: int) -> int:
    if flag_value is not None:
        return flag_value
    env_value = _env_int(env_name)
    return default if env_value is None else env_value


def _config_from(args: argparse.Namespace) -> RunConfig:
    r_min = getattr(args, "r_min", 2)
    r_max = getattr(args, "r_max", None)
    if getattr(args, "r", None) is not None:
        r_min = r_max = args.r
    config = RunConfig(
        prime=_pick(getattr(args, "prime", None), ENV_PRIME, DEFAULT_PRIME),
        trials=_pick(getattr(args, "trials", None), ENV_TRIALS, DEFAULT_TRIALS),
        base_seed=_pick(getattr(args, "seed", None), ENV_SEED, DEFAULT_SEED),
        output_format=getattr(args, "format", "json"),
        d_max=getattr(args, "d_max", 10),
        r_min=r_min,
        r_max=r_max,
        mode=getattr(args, "mode", "classify"),
        jobs=getattr(args, "jobs", 1),
    )
    config.validate()
    return config


def _flatten(record: dict, prefix: str = "") -> dict:
    """Flatten nested dicts (dotted keys) and lists (comma-joined) for CSV cells."""
    flat: dict = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, prefix=name + "."))
        elif isinstance(value, (list, tuple)):
            flat[name] = ",".join(str(v) for v in value)
        elif isinstance(value, bool):
            flat[name] = "true" if value else "false"
        else:
            flat[name] = value
    return flat


def _emit(records: Iterable[dict], output_format: str, stream) -> None:
    """Write records as JSON Lines (streamed) or CSV with a header row, LF endings."""
    if output_format == "json":
        for record in records:
            stream.write(json.dumps(record, separators=(",", ":")) + "\n")
        return
    rows = [_flatten(r) for r in records]
    if not rows:
        return
    writer = csv.DictWriter(stream, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


def _diff(measured: dict, predicted: dict) -> dict:
    """Machine-readable measured-vs-predicted differences."""
    diff: dict = {}
    for key in ("dim_IF_d", "dim_sigma2", "dim_IZ"):
        if measured[key] != predicted[key]:
            diff[key] = {"measured": measured[key], "predicted": predicted[key]}
    hilbert = [
        {"j": j, "measured": m, "predicted": p}
        for j, (m, p) in enumerate(zip(measured["hilbert"], predicted["hilbert"]))
        if m != p
    ]
    if hilbert:
        diff["hilbert"] = hilbert
    return diff


def cmd_classify(args: argparse.Namespace) -> int:
    config = _config_from(args)
    partition = parse_partition(args.partition)
    _emit([classify(partition).to_dict()], config.output_format, sys.stdout)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    config = _config_from(args)
    partition = parse_partition(args.partition)
    report = verify(
        partition,
        prime=config.prime,
        trials=config.trials,
        base_seed=config.base_seed,
    )
    payload = report.to_dict()
    if report.verdict != VERDICT_MATCH:
        payload["diff"] = _diff(report.measured, report.predicted)
    _emit([payload], config.output_format, sys.stdout)
    return 0 if report.verdict == VERDICT_MATCH else 1


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _config_from(args)
    partitions = list(
        enumerate_partitions(config.d_max, config.r_min, config.r_max)
    )
    if config.mode == "classify":
        records = (classify(p).to_dict() for p in partitions)
        _emit(records, config.output_format, sys.stdout)
        return 0

    def run_one(partition: Partition):
        return verify(
            partition,
            prime=config.prime,
            trials=config.trials,
            base_seed=config.base_seed,
        )

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            reports = list(pool.map(run_one, partitions))
    else:
        reports = [run_one(p) for p in partitions]
    mismatches = sum(1 for r in reports if r.verdict != VERDICT_MATCH)
    summary = {
        "summary": {
            "partitions": len(reports),
            "matches": len(reports) - mismatches,
            "mismatches": mismatches,
        }
    }
    if config.output_format == "json":
        records: Iterator[dict] = iter([r.to_dict() for r in reports] + [summary])
        _emit(records, "json", sys.stdout)
    else:
        _emit((r.to_dict() for r in reports), "csv", sys.stdout)
        print(f"mismatches: {mismatches}", file=sys.stderr)
    return 1 if mismatches else 0


def _tails(length: int, max_part: int) -> Iterator[tuple[int, ...]]:
    """Non-increasing tuples with entries in 1..max_part, ascending lex order."""
    if length == 0:
        yield ()
        return
    for head in range(1, max_part + 1):
        for rest in _tails(length - 1, min(head, max_part)):
            yield (head, *rest)


def figure_records(r: int, max_part: int) -> list[dict]:
    """Grid rows underlying the defectivity region picture for r factors.

    The sign of 2p - 3s depends only on the tail (d2, ..., dr), so each row uses
    the representative partition [s, d2, ..., dr], which is unbalanced and
    canonical for every tail.
    """
    records = []
    for tail in _tails(r - 1, max_part):
        representative = Partition([sum(tail), *tail])
        q = derived(representative)
        record: dict = {f"d{i + 2}": v for i, v in enumerate(tail)}
        record["two_p_minus_three_s"] = 2 * q.p - 3 * q.s
        record["defective_unbalanced"] = is_defective(representative)
        record["case_label"] = classify_case(representative).value
        records.append(record)
    return records


def cmd_figure_data(args: argparse.Namespace) -> int:
    config = _config_from(args)
    if args.max_part < 1:
        raise ValueError(f"max-part must be >= 1, got {args.max_part}")
    _emit(figure_records(args.r, args.max_part), config.output_format, sys.stdout)
    return 0


# Fixture-table identifiers are part of the CLI contract.
_DESCENT_CASES = (
    (3, 2, 2),
    (4, 3, 2),
    (5, 4, 2),
    (6, 5, 2),
    (2, 1, 1, 1),
    (3, 2, 1, 1),
    (4, 3, 1, 1),
)


def table_rows(name: str) -> list[dict]:
    """Regenerate a named fixture table from the closed forms (byte-stable)."""
    rows: list[dict] = []
    if name == "lemma45":
        # Near-balanced three-factor families [a,a,1] and [a+1,a,1].
        for a in range(1, 7):
            for parts in ((a, a, 1), (a + 1, a, 1)):
                partition = Partition(parts)
                rows.append(
                    {
                        "a": a,
                        "lambda": list(parts),
                        "dim_IZ": dim_IZ_theory(partition),
                    }
                )
    elif name == "lemma46":
        # Unbalanced-descent fixtures: each case against its e=1 reduction.
        for parts in _DESCENT_CASES:
            partition = Partition(parts)
            reduced = partition.decrement(1)
            rows.append(
                {
                    "case": list(parts),
                    "exp_dim_IZ": expected_dim_IZ(partition),
                    "lambda_reduced": list(reduced.parts),
                    "dim_IZ_reduced": dim_IZ_theory(reduced),
                }
            )
    elif name == "lemma47":
        # Two-factor closed form ((d1-d2)^2 + 3(d1+d2) + 2)/2, always positive.
        for d in range(2, 11):
            for d1 in range((d + 1) // 2, d):
                d2 = d - d1
                closed = ((d1 - d2) ** 2 + 3 * (d1 + d2) + 2) // 2
                rows.append(
                    {
                        "lambda": [d1, d2],
                        "exp_dim_IZ": closed,
                        "dim_IZ": dim_IZ_theory(Partition((d1, d2))),
                    }
                )
    else:
        raise ValueError(f"unknown table {name!r}")
    return rows


def cmd_table(args: argparse.Namespace) -> int:
    config = _config_from(args)
    rows = table_rows(args.name)
    mismatches = 0
    if args.check:
        for row in rows:
            checked = []
            for key, column in (("case", "exp_dim_IZ"), ("lambda", "dim_IZ"), ("lambda_reduced", "dim_IZ_reduced")):
                if key not in row:
                    continue
                measured = oracle_dim_IZ(
                    Partition(row[key]),
                    trials=config.trials,
                    base_seed=config.base_seed,
                    prime=config.prime,
                )
                row[f"oracle_{column}"] = measured
                checked.append(measured == row[column])
            row["match"] = all(checked)
            if not row["match"]:
                mismatches += 1
    _emit(rows, config.output_format, sys.stdout)
    return 1 if mismatches else 0


def _add_oracle_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--prime", type=int, default=None, help="prime field modulus (default 1000003, env SECANT_PRIME)")
    sub.add_argument("--trials", type=int, default=None, help="independent random trials (default 3, env SECANT_TRIALS)")
    sub.add_argument("--seed", type=int, default=None, help="base seed for all randomness (default 0, env SECANT_SEED)")


def _add_format_option(sub: argparse.ArgumentParser, default: str) -> None:
    sub.add_argument("--format", choices=("json", "csv"), default=default, help=f"output format (default {default})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secantlines",
        description=(
            "Classify secant line varieties of reducible plane curves as defective "
            "or not, and verify every prediction with an exact finite-field rank oracle."
        ),
        epilog=(
            "Partitions are comma-separated positive degrees, auto-sorted (e.g. 9,7,2). "
            "Environment variables SECANT_PRIME, SECANT_SEED and SECANT_TRIALS supply "
            "defaults; flags override them. Exit codes: 0 ok/MATCH, 1 mismatch, 2 usage."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("classify", help="closed-form classification of one partition")
    sp.add_argument("partition")
    _add_format_option(sp, "json")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("verify", help="measure one partition with the rank oracle and compare")
    sp.add_argument("partition")
    _add_oracle_options(sp)
    _add_format_option(sp, "json")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="classify or verify every partition in a range")
    sp.add_argument("--d-max", dest="d_max", type=int, default=10, help="maximum total degree (default 10)")
    sp.add_argument("--r-min", dest="r_min", type=int, default=2, help="minimum part count (default 2)")
    sp.add_argument("--r-max", dest="r_max", type=int, default=None, help="maximum part count (default: no limit)")
    sp.add_argument("--r", type=int, default=None, help="fix the part count (sets both --r-min and --r-max)")
    sp.add_argument("--mode", choices=("classify", "verify"), default="classify")
    sp.add_argument("--jobs", type=int, default=1, help="worker threads for verify sweeps (default 1)")
    _add_oracle_options(sp)
    _add_format_option(sp, "json")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("figure-data", help="grid of 2p-3s sign data underlying the region pictures")
    sp.add_argument("--r", type=int, choices=(3, 4, 5), required=True, help="number of factors")
    sp.add_argument("--max-part", dest="max_part", type=int, default=12, help="largest tail degree (default 12)")
    _add_format_option(sp, "csv")
    sp.set_defaults(func=cmd_figure_data)

    sp = sub.add_parser("table", help="regenerate a named fixture table from the closed forms")
    sp.add_argument("name", choices=("lemma45", "lemma46", "lemma47"))
    sp.add_argument("--check", action="store_true", help="re-verify every row with the rank oracle")
    _add_oracle_options(sp)
    _add_format_option(sp, "csv")
    sp.set_defaults(func=cmd_table)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles its own usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (PartitionError, ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
