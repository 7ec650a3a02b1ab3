"""Arena: series running, seat fairness, records, replay, summaries, CLI."""

import json

import pytest

from boopai.arena import (
    MatchResult,
    MatchSpec,
    SeatPolicy,
    play_game,
    render_table,
    run_series,
    summarize,
    summary_csv,
)
from boopai.cli import main as cli_main
from boopai.records import (
    GameRecord,
    PlaceEvent,
    RecordError,
    ReplayError,
    read_record,
    record_from_json,
    record_to_json,
    replay_record,
    write_record,
)
from boopai.search import SearchParams, parse_agent_spec

ITERS = SearchParams(budget_s=None, budget_iters=8)


def fast_agent(spec, **kw):
    return parse_agent_spec(spec, params=ITERS, **kw)


@pytest.fixture(scope="module")
def small_series():
    spec = MatchSpec(
        agent_a=fast_agent("heuristic"),
        agent_b=fast_agent("vanilla"),
        games=5,
        base_seed=21,
    )
    return spec, run_series(spec)


class TestSeries:
    def test_wins_partition_games(self, small_series):
        _spec, res = small_series
        assert res.wins_a + res.wins_b == res.games == 5
        assert res.anomalies == 0

    def test_seat_alternation_is_fair(self, small_series):
        spec, res = small_series
        seats = [spec.seats_for_game(i)[0] for i in range(spec.games)]
        a_as_p1 = seats.count("a")
        assert abs(a_as_p1 - (spec.games - a_as_p1)) <= 1

    def test_fixed_seats(self):
        spec = MatchSpec(
            agent_a=fast_agent("heuristic"),
            agent_b=fast_agent("vanilla"),
            games=3,
            seat_policy=SeatPolicy.FIXED,
            base_seed=5,
        )
        assert [spec.seats_for_game(i)[0] for i in range(3)] == ["a", "a", "a"]
        res = run_series(spec)
        assert res.wins_a_as_p2 == 0 and res.wins_b_as_p1 == 0

    def test_reproducible_and_parallel_identical(self, small_series):
        spec, res = small_series
        import dataclasses

        again = run_series(spec)
        parallel = run_series(dataclasses.replace(spec, jobs=2))
        for other in (again, parallel):
            assert [record_to_json(r) for r in other.records] == [
                record_to_json(r) for r in res.records
            ]
            assert (other.wins_a, other.wins_b) == (res.wins_a, res.wins_b)

    def test_every_record_replays_to_its_winner(self, small_series):
        _spec, res = small_series
        for record in res.records:
            final = replay_record(record)
            assert final.result == record.winner
            assert final.ply == record.ply_count

    def test_move_times_collected(self, small_series):
        _spec, res = small_series
        assert res.move_times["a"].moves > 0
        assert res.move_times["b"].max_s >= res.move_times["b"].mean_s >= 0

    def test_ply_cap_anomaly_counts_as_loss_for_mover(self):
        record, _ = play_game(
            fast_agent("vanilla", seed=1), fast_agent("vanilla", seed=2),
            seed=3, ply_cap=4,
        )
        assert record.anomaly == "ply-cap"
        assert record.ply_count == 4
        # 4 plies: P1 P2 P1 P2, so P1 is to move and forfeits.
        assert record.winner == 2


class TestRecords:
    def test_round_trip_identity(self, small_series):
        _spec, res = small_series
        for record in res.records:
            text = record_to_json(record)
            again = record_from_json(text)
            assert again == record
            assert record_to_json(again) == text  # byte-identical

    def test_file_round_trip(self, small_series, tmp_path):
        _spec, res = small_series
        path = tmp_path / "game.json"
        write_record(res.records[0], path)
        assert read_record(path) == res.records[0]

    def test_truncated_file_is_a_parse_error(self, small_series, tmp_path):
        _spec, res = small_series
        text = record_to_json(res.records[0])
        path = tmp_path / "broken.json"
        path.write_text(text[: len(text) // 2], encoding="utf-8")
        with pytest.raises(RecordError) as err:
            read_record(path)
        assert "JSON" in str(err.value)

    def test_unknown_format_rejected(self):
        with pytest.raises(RecordError):
            record_from_json(json.dumps({"format": "boop-record/999"}))

    def test_illegal_move_replay_names_the_event(self, small_series):
        _spec, res = small_series
        record = res.records[0]
        events = list(record.events)
        first = events[0]
        events.insert(1, PlaceEvent(first.player, first.move))  # duplicate placement
        broken = GameRecord(
            seed=record.seed,
            player1=record.player1,
            player2=record.player2,
            events=tuple(events),
            winner=record.winner,
            ply_count=record.ply_count,
        )
        with pytest.raises(ReplayError) as err:
            replay_record(broken)
        assert "event 1" in str(err.value)

    def test_wrong_winner_detected(self, small_series):
        _spec, res = small_series
        record = res.records[0]
        lied = GameRecord(
            seed=record.seed,
            player1=record.player1,
            player2=record.player2,
            events=record.events,
            winner=3 - record.winner,
            ply_count=record.ply_count,
        )
        with pytest.raises(ReplayError):
            replay_record(lied)

    def test_human_seat_round_trips(self, small_series):
        _spec, res = small_series
        record = res.records[0]
        human_game = GameRecord(
            seed=record.seed,
            player1=None,
            player2=record.player2,
            events=record.events,
            winner=record.winner,
            ply_count=record.ply_count,
        )
        assert record_from_json(record_to_json(human_game)) == human_game


class TestSummaries:
    def _result(self, wins_p1, wins_p2, games=100):
        spec = MatchSpec(
            agent_a=fast_agent("mcts+SEP"), agent_b=fast_agent("vanilla"), games=games
        )
        res = MatchResult(spec=spec)
        res.wins_a_as_p1, res.wins_a_as_p2 = wins_p1, wins_p2
        res.wins_b_as_p1 = (games // 2) - wins_p2
        res.wins_b_as_p2 = (games - games // 2) - wins_p1
        res.records = tuple([None] * games)  # only counted, never read
        return res

    def test_win_rate_row(self):
        rows = summarize([self._result(47, 49)])
        row = rows[0]
        assert row["wins_as_p1"] == 47 and row["wins_as_p2"] == 49
        assert row["win_rate"] == 0.96
        assert row["agent"] == "mcts+SEP" and row["opponent"] == "vanilla"

    def test_zero_wins_row(self):
        assert summarize([self._result(0, 0)])[0]["win_rate"] == 0.0

    def test_mirror_seat_totals(self):
        rows = summarize([self._result(3, 4, games=100)])
        row = rows[0]
        assert row["p1_wins_total"] == 3 + (100 // 2 - 4)
        assert row["p2_wins_total"] == 4 + (100 - 100 // 2 - 3)

    def test_renderings(self):
        rows = summarize([self._result(47, 49)])
        text = render_table(rows)
        assert "mcts+SEP" in text and "0.96" in text
        csv_text = summary_csv(rows)
        assert csv_text.splitlines()[0].startswith("agent,opponent,games")

    def test_empty_results_rejected(self):
        with pytest.raises(ValueError):
            summarize([])


class TestCli:
    def test_match_writes_outputs(self, tmp_path, capsys):
        out = tmp_path / "run"
        code = cli_main([
            "match", "--a", "heuristic", "--b", "vanilla",
            "--games", "3", "--iters", "8", "--seed", "2",
            "--out", str(out),
        ])
        assert code == 0
        assert (out / "result.json").exists()
        assert len(list((out / "records").glob("game_*.json"))) == 3
        assert "heuristic" in capsys.readouterr().out

    def test_replay_command(self, tmp_path, capsys):
        out = tmp_path / "run"
        cli_main([
            "mirror", "--agent", "heuristic", "--games", "1",
            "--iters", "8", "--seed", "4", "--out", str(out), "--quiet",
        ])
        record_path = next((out / "records").glob("game_*.json"))
        assert cli_main(["replay", str(record_path), "--show-board"]) == 0
        assert "record ok" in capsys.readouterr().out

    def test_table_command(self, tmp_path, capsys):
        out = tmp_path / "run"
        cli_main([
            "match", "--a", "heuristic", "--b", "vanilla", "--games", "2",
            "--iters", "8", "--out", str(out), "--quiet",
        ])
        assert cli_main(["table", str(out / "result.json"), "--format", "csv"]) == 0
        assert "heuristic" in capsys.readouterr().out

    def test_bad_agent_spec_is_a_clean_error(self, capsys):
        code = cli_main(["match", "--a", "mcts+Q", "--b", "vanilla", "--games", "1"])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_config_file_drives_match(self, tmp_path, capsys):
        cfg = tmp_path / "dash.yaml"
        cfg.write_text(
            "match:\n  agent_a: heuristic\n  agent_b: heuristic\n  games: 2\n"
            "  base_seed: 9\n"
            "search:\n  budget_s: null\n  budget_iters: 6\n"
            "weights:\n  center: 0.4\n",
            encoding="utf-8",
        )
        out = tmp_path / "run"
        code = cli_main(["mirror", "--agent", "heuristic", "--config", str(cfg),
                         "--out", str(out), "--quiet"])
        assert code == 0
        result = json.loads((out / "result.json").read_text())
        assert result["games"] == 2
        record = read_record(next((out / "records").glob("game_*.json")))
        assert record.player1.weights.center == 0.4
        assert record.player1.params.budget_iters == 6
