"""Rules engine: push mechanics, turn resolution, wins, decisions."""

import pytest

from boopai.engine import (
    Board,
    GraduateOne,
    IllegalChoiceError,
    IllegalMoveError,
    IllegalStateError,
    Move,
    Phase,
    PieceKind,
    Pool,
    RemoveAlignment,
    Square,
    apply_move,
    border_choice,
    compute_boops,
    find_alignments,
    game_result,
    legal_moves,
    resolve_decision,
    state_from_pieces,
)

from oracles import alignments_oracle

S, L = PieceKind.SMALL, PieceKind.LARGE


def sq(text):
    return Square.parse(text)


def mv(text):
    return Move.parse(text)


class TestNotation:
    def test_square_round_trip(self):
        assert sq("c3") == Square(3, 3)
        assert sq("a1").index == 0
        assert sq("f6").index == 35
        assert Square(5, 2).notation == "b5"
        for i in range(36):
            s = Square.from_index(i)
            assert Square.parse(s.notation) is s

    def test_move_round_trip(self):
        m = mv("L@f6")
        assert m.piece is L and m.at == Square(6, 6)
        assert m.notation == "L@f6"
        assert Move.parse("S@a1") == Move(S, Square(1, 1))

    @pytest.mark.parametrize("bad", ["g1", "a7", "a0", "11", "c"])
    def test_bad_square(self, bad):
        with pytest.raises(ValueError):
            Square.parse(bad)


class TestLegalMoves:
    def test_initial_36_small_only(self, start):
        moves = legal_moves(start)
        assert len(moves) == 36
        assert all(m.piece is S for m in moves)
        assert len({m.at for m in moves}) == 36

    def test_two_kinds_double_the_moves(self):
        state = state_from_pieces(
            {"a1": (1, "S"), "b1": (1, "S"), "c1": (1, "S"),
             "d1": (2, "S"), "e1": (2, "S"), "f1": (2, "S")},
            to_move=1,
            pools={1: (2, 3), 2: (5, 0)},
        )
        moves = legal_moves(state)
        assert len(moves) == 30 * 2
        assert sum(1 for m in moves if m.piece is L) == 30

    def test_empty_pool_placement_is_rejected(self):
        state = state_from_pieces(
            {"a1": (1, "S"), "c1": (1, "S"), "e1": (1, "S"),
             "a3": (1, "S"), "c3": (1, "S"), "e3": (1, "S"),
             "a5": (1, "S"), "e5": (1, "S")},
            to_move=1,
            pools={1: (0, 0)},
        )
        with pytest.raises(IllegalStateError):
            legal_moves(state)

    def test_finished_game_rejected(self, start):
        done = start._replace(result=1)
        with pytest.raises(IllegalStateError):
            legal_moves(done)

    def test_ordering_is_row_major_then_kind(self):
        state = state_from_pieces({}, to_move=1, pools={1: (4, 4)})
        moves = legal_moves(state)
        assert moves[0] == mv("S@a1")
        assert moves[1] == mv("L@a1")
        assert moves[2] == mv("S@b1")
        keys = [(m.at.index, int(m.piece)) for m in moves]
        assert keys == sorted(keys)


class TestBoops:
    def test_push_and_block(self):
        # White small on c3: pushes the black piece b2 -> a1, but the white
        # piece on d4 stays put because e5 blocks it.
        board = Board.from_pieces({
            sq("c3"): (1, S), sq("b2"): (2, S), sq("d4"): (1, S), sq("e5"): (1, S),
        })
        moved = compute_boops(board, sq("c3"), S)
        assert moved == [(sq("b2"), sq("a1"))]

    def test_small_cannot_push_large(self):
        board = Board.from_pieces({sq("c3"): (1, S), sq("c4"): (2, L)})
        assert compute_boops(board, sq("c3"), S) == []

    def test_large_pushes_anything(self):
        board = Board.from_pieces({sq("c3"): (1, L), sq("c4"): (2, L), sq("b2"): (2, S)})
        moved = dict(compute_boops(board, sq("c3"), L))
        assert moved[sq("c4")] == sq("c5")
        assert moved[sq("b2")] == sq("a1")

    def test_push_off_board(self):
        board = Board.from_pieces({sq("b1"): (1, S), sq("a1"): (2, S)})
        assert compute_boops(board, sq("b1"), S) == [(sq("a1"), None)]

    def test_requires_piece_on_origin(self):
        with pytest.raises(IllegalStateError):
            compute_boops(Board.empty(), sq("c3"), S)

    def test_booped_off_returns_to_pool_with_kind(self):
        state = state_from_pieces(
            {"a1": (2, "L")}, to_move=1, pools={1: (7, 1), 2: (7, 0)}
        )
        nxt = apply_move(state, mv("L@b1"))
        assert nxt.board.piece_at(sq("a1")) is None
        assert nxt.pool_of(2) == Pool(7, 1)
        assert nxt.board.piece_at(sq("b1")) == (1, L)


class TestApplyMove:
    def test_rejections(self, start):
        occupied = apply_move(start, mv("S@c3"))
        with pytest.raises(IllegalMoveError) as err:
            apply_move(occupied, mv("S@c3"))
        assert err.value.reason == "occupied"
        with pytest.raises(IllegalMoveError) as err:
            apply_move(start, mv("L@a1"))
        assert err.value.reason == "unavailable"
        finished = start._replace(result=2)
        with pytest.raises(IllegalMoveError) as err:
            apply_move(finished, mv("S@a1"))
        assert err.value.reason == "wrong-phase"

    def test_turn_passes_and_ply_counts(self, start):
        nxt = apply_move(start, mv("S@c3"))
        assert nxt.to_move == 2
        assert nxt.ply == 1
        assert nxt.pool_of(1) == Pool(7, 0)
        assert nxt.board.piece_at(sq("c3")) == (1, S)

    def test_three_large_aligned_wins(self):
        state = state_from_pieces(
            {"a1": (1, "L"), "b1": (1, "L")}, to_move=1, pools={1: (5, 1)}
        )
        nxt = apply_move(state, mv("L@c1"))
        assert nxt.result == 1
        assert game_result(nxt) == 1

    def test_eight_large_on_board_wins(self):
        pieces = {"a1": (1, "L"), "b1": (1, "L"), "d1": (1, "L"), "e1": (1, "L"),
                  "a3": (1, "L"), "b3": (1, "L"), "d3": (1, "L")}
        state = state_from_pieces(pieces, to_move=1, pools={1: (0, 1)})
        nxt = apply_move(state, mv("L@f5"))
        assert nxt.result == 1

    def test_opponent_large_line_made_by_boop_wins_for_opponent(self):
        state = state_from_pieces(
            {"a1": (2, "L"), "b2": (2, "L"), "c4": (2, "L")},
            to_move=1,
            pools={1: (7, 1)},
        )
        nxt = apply_move(state, mv("L@c5"))
        assert nxt.board.piece_at(sq("c3")) == (2, L)
        assert nxt.result == 2

    def test_mover_precedence_when_both_sides_complete_lines(self):
        state = state_from_pieces(
            {"a1": (1, "L"), "b1": (1, "L"),
             "c2": (2, "L"), "c4": (2, "L"), "c5": (2, "L")},
            to_move=1,
            pools={1: (5, 1)},
        )
        nxt = apply_move(state, mv("L@c1"))
        # The boop completes P2's c3-c4-c5 line, but P1 completed its own.
        assert nxt.board.piece_at(sq("c3")) == (2, L)
        assert nxt.result == 1

    def test_three_smalls_auto_promote(self):
        state = state_from_pieces(
            {"a1": (1, "S"), "b1": (1, "S")}, to_move=1, pools={1: (6, 0)}
        )
        nxt = apply_move(state, mv("S@c1"))
        assert nxt.result is None
        assert nxt.phase is Phase.PLACEMENT
        assert nxt.pool_of(1) == Pool(5, 3)
        assert nxt.board.count(1) == 0
        assert nxt.to_move == 2

    def test_mixed_line_is_removal_not_win(self):
        state = state_from_pieces(
            {"a1": (1, "S"), "b1": (1, "S")}, to_move=1, pools={1: (5, 1)}
        )
        nxt = apply_move(state, mv("L@c1"))
        assert nxt.result is None
        assert nxt.pool_of(1) == Pool(5, 3)

    def test_four_in_a_row_offers_two_windows(self):
        state = state_from_pieces(
            {"a1": (1, "S"), "b1": (1, "S"), "d1": (1, "S"), "e1": (2, "S")},
            to_move=1,
            pools={1: (5, 0), 2: (7, 0)},
        )
        nxt = apply_move(state, mv("S@c1"))
        assert nxt.phase is Phase.AWAITING_DECISION
        assert nxt.to_move == 1
        assert nxt.choices == (
            RemoveAlignment((sq("a1"), sq("b1"), sq("c1"))),
            RemoveAlignment((sq("b1"), sq("c1"), sq("d1"))),
        )

    def test_full_board_triggers_graduation_choices(self):
        pieces = {"a1": (1, "S"), "c1": (1, "S"), "e1": (1, "S"),
                  "a3": (1, "S"), "c3": (1, "S"), "e3": (1, "S"), "a5": (1, "S")}
        state = state_from_pieces(pieces, to_move=1, pools={1: (1, 0)})
        nxt = apply_move(state, mv("S@e5"))
        assert nxt.phase is Phase.AWAITING_DECISION
        assert len(nxt.choices) == 8
        assert all(isinstance(c, GraduateOne) for c in nxt.choices)
        assert nxt.choices[0] == GraduateOne(sq("a1"))

    def test_opponent_small_line_persists_until_their_turn_ends(self):
        state = state_from_pieces(
            {"a1": (2, "S"), "b2": (2, "S"), "c4": (2, "S")},
            to_move=1,
            pools={1: (8, 0)},
        )
        after_boop = apply_move(state, mv("S@c5"))
        # P1's boop pushed c4 -> c3, completing a P2 diagonal of smalls:
        # nothing is removed at the end of P1's turn.
        assert after_boop.result is None
        assert after_boop.phase is Phase.PLACEMENT
        assert after_boop.to_move == 2
        assert after_boop.board.piece_at(sq("c3")) == (2, S)
        # P2 places far away; at the end of P2's own turn the line promotes.
        after_p2 = apply_move(after_boop, mv("S@f6"))
        assert after_p2.pool_of(2).large == 3
        assert after_p2.board.piece_at(sq("a1")) is None


class TestResolveDecision:
    def _two_window_state(self):
        state = state_from_pieces(
            {"a1": (1, "S"), "b1": (1, "S"), "d1": (1, "S"), "e1": (2, "S")},
            to_move=1,
            pools={1: (5, 0), 2: (7, 0)},
        )
        return apply_move(state, mv("S@c1"))

    def test_leftmost_window_removal(self):
        pending = self._two_window_state()
        nxt = resolve_decision(pending, pending.choices[0])
        assert nxt.pool_of(1).large == 3
        assert nxt.board.piece_at(sq("d1")) == (1, S)
        assert nxt.board.piece_at(sq("a1")) is None
        assert nxt.to_move == 2
        assert nxt.phase is Phase.PLACEMENT

    def test_choice_must_be_offered(self):
        pending = self._two_window_state()
        rogue = RemoveAlignment((sq("c1"), sq("d1"), sq("e1")))
        with pytest.raises(IllegalChoiceError):
            resolve_decision(pending, rogue)

    def test_no_pending_decision(self, start):
        with pytest.raises(IllegalStateError):
            resolve_decision(start, GraduateOne(sq("a1")))

    def test_graduate_small_promotes(self):
        pieces = {s: (1, "S") for s in ("a1", "c1", "e1", "a3", "c3", "e3", "a5")}
        state = state_from_pieces(pieces, to_move=1, pools={1: (1, 0)})
        pending = apply_move(state, mv("S@e5"))
        nxt = resolve_decision(pending, GraduateOne(sq("c3")))
        assert nxt.board.piece_at(sq("c3")) is None
        assert nxt.pool_of(1) == Pool(0, 1)
        assert nxt.to_move == 2

    def test_graduate_large_stays_large(self):
        squares = {"a1": (1, "L"), "c1": (1, "S"), "e1": (1, "S"), "a3": (1, "S"),
                   "c3": (1, "S"), "e3": (1, "S"), "a5": (1, "S")}
        state = state_from_pieces(squares, to_move=1, pools={1: (1, 0)})
        pending = apply_move(state, mv("S@e5"))
        nxt = resolve_decision(pending, GraduateOne(sq("a1")))
        assert nxt.pool_of(1) == Pool(0, 1)
        assert nxt.board.mask(1, L) == 0


class TestAlignments:
    def test_empty_board(self):
        assert find_alignments(Board.empty(), 1) == []

    def test_single_diagonal(self):
        board = Board.from_pieces({sq("a1"): (1, S), sq("b2"): (1, S), sq("c3"): (1, L)})
        found = find_alignments(board, 1)
        assert found == [(sq("a1"), sq("b2"), sq("c3"))]
        assert find_alignments(board, 2) == []

    def test_run_of_four_gives_two_windows(self):
        cells = {sq(s): (1, S) for s in ("a1", "b1", "c1", "d1")}
        board = Board.from_pieces(cells)
        found = find_alignments(board, 1)
        assert len(found) == 2
        assert {frozenset(w) for w in found} == alignments_oracle(cells, 1)

    def test_matches_oracle_on_dense_boards(self):
        names = ("b2", "b3", "b4", "c2", "c3", "c4", "d2", "d3")
        cells = {sq(s): (1, L if i % 2 else S) for i, s in enumerate(names)}
        board = Board.from_pieces(cells)
        found = {frozenset(w) for w in find_alignments(board, 1)}
        assert found == alignments_oracle(cells, 1)


class TestBorderChoice:
    def test_prefers_border_square(self):
        choices = (GraduateOne(sq("c3")), GraduateOne(sq("a1")))
        assert border_choice(choices, Board.empty()) == GraduateOne(sq("a1"))

    def test_single_choice(self):
        only = (GraduateOne(sq("d4")),)
        assert border_choice(only, Board.empty()) == only[0]

    def test_tie_takes_first_offered(self):
        first = RemoveAlignment((sq("a1"), sq("b1"), sq("c1")))
        second = RemoveAlignment((sq("d1"), sq("e1"), sq("f1")))
        assert border_choice((first, second), Board.empty()) == first
        assert border_choice((second, first), Board.empty()) == second

    def test_counts_border_squares(self):
        edge = RemoveAlignment((sq("a1"), sq("a2"), sq("a3")))
        inner = RemoveAlignment((sq("c3"), sq("c4"), sq("d3")))
        mixed = RemoveAlignment((sq("b2"), sq("b1"), sq("c2")))
        assert border_choice((inner, mixed, edge), Board.empty()) == edge


class TestGameResult:
    def test_initial_none(self, start):
        assert game_result(start) is None

    def test_reports_winner(self):
        state = state_from_pieces(
            {"a1": (1, "L"), "b1": (1, "L")}, to_move=1, pools={1: (5, 1)}
        )
        assert game_result(apply_move(state, mv("L@c1"))) == 1
