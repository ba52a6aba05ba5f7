"""Command-line front door: run levels, validate files, hunt mutants.

Exit status: 0 on success, 1 when validation or a check fails, 2 for
usage errors (bad flags, unreadable input files).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import engine, mutation
from .blocklang import canonical_json, emit_ast
from .levels import (
    LevelSyntaxError,
    ValidationFailedError,
    builtin_catalog,
    get_builtin,
    load_level,
    validate_level,
)

_LABEL_WIDTH = 26
_DETAIL_WIDTH = 7
_POINTS_WIDTH = 8


def _format_breakdown(breakdown) -> str:
    lines = []
    for row in breakdown.components:
        lines.append(f"{row.label:<{_LABEL_WIDTH}}{row.detail:>{_DETAIL_WIDTH}}{row.points:>{_POINTS_WIDTH}}")
    lines.append(f"{'Total':<{_LABEL_WIDTH}}{'':>{_DETAIL_WIDTH}}{breakdown.total:>{_POINTS_WIDTH}}")
    lines.append(f"{'Stars':<{_LABEL_WIDTH}}{'':>{_DETAIL_WIDTH}}{breakdown.stars:>{_POINTS_WIDTH}}")
    return "\n".join(lines)


def _read_file(parser: argparse.ArgumentParser, path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        parser.error(f"cannot read {path}: {exc.strerror or exc}")
        raise AssertionError  # parser.error exits


def _load_level_arg(parser: argparse.ArgumentParser, value: str):
    builtin_ids = {level.id for level in builtin_catalog()}
    if value in builtin_ids:
        return get_builtin(value)
    text = _read_file(parser, value)
    try:
        return load_level(text)
    except LevelSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(1) from None
    except ValidationFailedError as exc:
        for diagnostic in exc.diagnostics:
            print(f"{diagnostic.severity} {diagnostic.code}: {diagnostic.message}", file=sys.stderr)
        raise SystemExit(1) from None


def _load_tests_arg(parser: argparse.ArgumentParser, level, path: str):
    text = _read_file(parser, path)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        print(f"error: tests file is not valid JSON: {exc}", file=sys.stderr)
        raise SystemExit(1) from None
    try:
        tests = engine.parse_test_config(level, obj)
    except engine.InvalidTestConfigError as exc:
        for diagnostic in exc.diagnostics:
            print(f"error {diagnostic.code}: {diagnostic.message}", file=sys.stderr)
        raise SystemExit(1) from None
    diagnostics = engine.validate_tests(level, tests)
    errors = [d for d in diagnostics if d.severity == "error"]
    if errors:
        for diagnostic in errors:
            print(f"error {diagnostic.code}: {diagnostic.message}", file=sys.stderr)
        raise SystemExit(1)
    return tests


def _cmd_run(parser, args) -> int:
    level = _load_level_arg(parser, args.level)
    tests = _load_tests_arg(parser, level, args.tests)
    result, timeline = engine.simulate(level, tests, args.seed)
    breakdown = engine.score_run(level, result, args.setup_seconds)
    if args.out:
        Path(args.out).write_text(timeline.canonical_text() + "\n", encoding="utf-8")
    if args.format == "json":
        print(canonical_json({"result": result.to_jsonable(), "score": breakdown.to_jsonable()}))
    else:
        print(_format_breakdown(breakdown))
    return 0


def _print_diagnostics(diagnostics, as_json: bool, level_id: str | None, ok: bool):
    if as_json:
        print(canonical_json({
            "diagnostics": [d.to_jsonable() for d in diagnostics],
            "level": level_id,
            "ok": ok,
        }))
        return
    for diagnostic in diagnostics:
        print(f"{diagnostic.severity} {diagnostic.code}: {diagnostic.message}")
    if ok:
        print(f"{level_id}: ok")


def _cmd_validate(parser, args) -> int:
    text = _read_file(parser, args.level_file)
    as_json = args.format == "json"
    try:
        level = load_level(text)
    except LevelSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValidationFailedError as exc:
        _print_diagnostics(exc.diagnostics, as_json, None, ok=False)
        return 1
    _print_diagnostics(validate_level(level), as_json, level.id, ok=True)
    return 0


def _cmd_mutants(parser, args) -> int:
    level = _load_level_arg(parser, args.level)
    if args.generate:
        operators = tuple(args.operators.split(",")) if args.operators else mutation.ALL_OPERATORS
        catalog = mutation.generate_mutants(
            level.program, level.schema, operators=operators, limit=args.limit,
            context=level.kind,
        )
    else:
        catalog = level.mutant_catalog
    print(canonical_json(catalog.to_jsonable()))
    return 0


def _cmd_solve(parser, args) -> int:
    level = _load_level_arg(parser, args.level)
    try:
        found = mutation.solve_min_test(
            level, args.max_assertions, args.max_depth,
            literal_max=args.literal_max, budget=args.budget,
        )
    except mutation.BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if found is None:
        print("no adequate test within bounds", file=sys.stderr)
        return 1
    if level.kind == "loop":
        print(emit_ast(found))
    else:
        print(canonical_json(engine.tests_to_jsonable(found, level.kind)))
    return 0


def _cmd_replay(parser, args) -> int:
    level = _load_level_arg(parser, args.level)
    tests = _load_tests_arg(parser, level, args.tests)
    text = _read_file(parser, args.timeline)
    try:
        timeline = json.loads(text)
    except json.JSONDecodeError as exc:
        print(f"error: timeline file is not valid JSON: {exc}", file=sys.stderr)
        return 1
    verified = engine.verify_timeline(level, tests, args.seed, timeline)
    if args.format == "json":
        print(canonical_json({"verified": verified}))
        return 0 if verified else 1
    if verified:
        print("ok: timeline matches the authoritative replay")
        return 0
    print("mismatch: timeline does not match the authoritative replay", file=sys.stderr)
    return 1


def _cmd_serve(parser, args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(data_dir=args.data, admin_token=args.admin_token)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="critters",
        description="Run, validate and analyze critter levels; serve the game API.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a level and print the scoreboard")
    run.add_argument("--level", required=True, help="built-in level id or a level file")
    run.add_argument("--tests", required=True, help="tests file (portals or signposts)")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--setup-seconds", type=float, default=0.0)
    run.add_argument("--out", help="write the canonical timeline to this file")
    run.add_argument("--format", choices=("text", "json"), default="text")

    validate = sub.add_parser("validate", help="validate a level file")
    validate.add_argument("level_file")
    validate.add_argument("--format", choices=("text", "json"), default="text")

    mutants = sub.add_parser("mutants", help="list or generate mutants for a level")
    mutants.add_argument("--level", required=True)
    mutants.add_argument("--generate", action="store_true",
                         help="derive mutants from the healthy program instead of "
                              "printing the authored catalog")
    mutants.add_argument("--operators", help="comma-separated operator subset")
    mutants.add_argument("--limit", type=int, default=None)

    solve = sub.add_parser("solve", help="search for a minimal adequate test")
    solve.add_argument("--level", required=True)
    solve.add_argument("--max-assertions", type=int, required=True)
    solve.add_argument("--max-depth", type=int, required=True)
    solve.add_argument("--literal-max", type=int, default=mutation.DEFAULT_LITERAL_MAX)
    solve.add_argument("--budget", type=int, default=mutation.DEFAULT_BUDGET)

    replay = sub.add_parser("replay", help="verify a timeline against a fresh run")
    replay.add_argument("--level", required=True)
    replay.add_argument("--tests", required=True)
    replay.add_argument("--seed", type=int, required=True)
    replay.add_argument("--timeline", required=True)
    replay.add_argument("--format", choices=("text", "json"), default="text")

    serve = sub.add_parser("serve", help="start the HTTP game server")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--data", default=None, help="data directory (default: $DATA_DIR)")
    serve.add_argument("--admin-token", default=None, help="token for /api/metrics/export")

    return parser


_COMMANDS = {
    "run": _cmd_run,
    "validate": _cmd_validate,
    "mutants": _cmd_mutants,
    "solve": _cmd_solve,
    "replay": _cmd_replay,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](parser, args)
    except engine.InvalidTestConfigError as exc:
        for diagnostic in exc.diagnostics:
            print(f"error {diagnostic.code}: {diagnostic.message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
