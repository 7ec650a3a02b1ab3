"""Command line interface: run matches, replay records, render tables, serve.

Subcommands:

* ``match``  — play a series between two agents and write results/records
* ``mirror`` — a match of one agent against itself (seat-balance studies)
* ``replay`` — re-drive a recorded game through the engine and verify it
* ``table``  — merge one or more result.json files into a single table
* ``serve``  — start the local play service (and web UI if built)
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .arena import MatchResult, MatchSpec, render_table, run_series, summarize, summary_csv, summary_json
from .config import ConfigError, load_config, match_spec_from_config
from .records import RecordError, read_record, replay_record, write_record


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, RecordError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boop-arena",
        description="boop. agents: experiment arena, record tools, play service",
    )
    sub = parser.add_subparsers(required=True)

    p_match = sub.add_parser("match", help="play a series between two agents")
    _add_match_args(p_match, mirror=False)
    p_match.set_defaults(func=cmd_match)

    p_mirror = sub.add_parser("mirror", help="play one agent against itself")
    _add_match_args(p_mirror, mirror=True)
    p_mirror.set_defaults(func=cmd_mirror)

    p_replay = sub.add_parser("replay", help="verify and display a game record")
    p_replay.add_argument("record", help="path to a game record JSON file")
    p_replay.add_argument("--show-board", action="store_true",
                          help="print the final board position")
    p_replay.set_defaults(func=cmd_replay)

    p_table = sub.add_parser("table", help="summarize result.json files")
    p_table.add_argument("results", nargs="+", help="result.json files")
    p_table.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p_table.set_defaults(func=cmd_table)

    p_serve = sub.add_parser("serve", help="start the local play service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--ui-dir", default=None,
                         help="directory of built web UI assets (default: autodetect)")
    p_serve.add_argument("--config", default=None, help="YAML config file")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def _add_match_args(p: argparse.ArgumentParser, mirror: bool) -> None:
    if mirror:
        p.add_argument("--agent", required=True, help="agent spec, e.g. vanilla")
    else:
        p.add_argument("--a", required=True, help="agent A spec, e.g. mcts+SEP")
        p.add_argument("--b", required=True, help="agent B spec, e.g. vanilla")
    p.add_argument("--games", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    budget = p.add_mutually_exclusive_group()
    budget.add_argument("--budget-ms", type=float, default=None,
                        help="wall-clock budget per move in milliseconds")
    budget.add_argument("--iters", type=int, default=None,
                        help="fixed iteration budget per move (deterministic)")
    p.add_argument("--seats", choices=("alternate", "fixed"), default=None)
    p.add_argument("--jobs", type=int, default=None, help="parallel games")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--config", default=None, help="YAML config file")
    p.add_argument("--quiet", action="store_true")


def _spec_from_args(args: argparse.Namespace, agent_a: str, agent_b: str) -> MatchSpec:
    config = load_config(args.config) if args.config else {}
    overrides = {
        "games": args.games,
        "base_seed": args.seed,
        "jobs": args.jobs,
        "budget_s": args.budget_ms / 1000.0 if args.budget_ms is not None else None,
        "budget_iters": args.iters,
    }
    if args.seats is not None:
        from .arena import SeatPolicy

        overrides["seat_policy"] = SeatPolicy(args.seats)
    return match_spec_from_config(config, agent_a, agent_b, **overrides)


def _write_outputs(result: MatchResult, out_dir: str | None, quiet: bool) -> None:
    rows = summarize([result])
    if not quiet:
        print(render_table(rows))
    if out_dir is None:
        return
    out = Path(out_dir)
    (out / "records").mkdir(parents=True, exist_ok=True)
    for i, record in enumerate(result.records):
        write_record(record, out / "records" / f"game_{i:04d}.json")
    (out / "result.json").write_text(
        json.dumps(result.to_obj(), sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    (out / "summary.csv").write_text(summary_csv(rows), encoding="utf-8")
    (out / "summary.txt").write_text(render_table(rows) + "\n", encoding="utf-8")
    if not quiet:
        print(f"wrote {len(result.records)} records and result.json to {out}")


def cmd_match(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args, args.a, args.b)
    result = run_series(spec)
    _write_outputs(result, args.out, args.quiet)
    return 0


def cmd_mirror(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args, args.agent, args.agent)
    result = run_series(spec)
    _write_outputs(result, args.out, args.quiet)
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    record = read_record(args.record)
    final = replay_record(record)
    print(f"record ok: {len(record.events)} events, {record.ply_count} plies, "
          f"winner P{record.winner}"
          + (f" (anomaly: {record.anomaly})" if record.anomaly else ""))
    print(f"players: P1={record.player1.label}  P2={record.player2.label}  "
          f"seed={record.seed}")
    if args.show_board:
        print(final.board.pretty())
    return 0


def cmd_table(args: argparse.Namespace) -> int:
    rows = []
    for path in args.results:
        try:
            obj = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise RecordError(f"cannot load {path}: {exc}") from exc
        rows.append(
            {
                "agent": obj["agent_a"],
                "opponent": obj["agent_b"],
                "games": obj["games"],
                "wins_as_p1": obj["wins_a_as_p1"],
                "wins_as_p2": obj["wins_a_as_p2"],
                "win_rate": obj["win_rate_a"],
                "p1_wins_total": obj["wins_a_as_p1"] + obj["wins_b_as_p1"],
                "p2_wins_total": obj["wins_a_as_p2"] + obj["wins_b_as_p2"],
                "anomalies": obj["anomalies"],
            }
        )
    if args.format == "csv":
        print(summary_csv(rows), end="")
    elif args.format == "json":
        print(summary_json(rows), end="")
    else:
        print(render_table(rows))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app, find_ui_dir

    config = load_config(args.config) if args.config else {}
    ui_dir = args.ui_dir or find_ui_dir()
    app = create_app(config=config, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0
