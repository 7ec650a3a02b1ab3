"""Position evaluation: a normalized score in [-1, 1] for non-terminal states.

The raw score is a weighted sum of player differences (mover minus
opponent): pieces on the board, pieces on the 16 center squares, pieces
on the 20 border squares, Large pieces owned (board plus pool), and
counts of 2-in-a-line and 3-in-a-line windows of own adjacent pieces,
weighted by the kind composition of the window (all Small, mixed, or all
Large). The raw score is divided by a normalizer ``max_raw`` computed
from the weight table so the result lies in [-1, 1]; a defensive clamp
guards against misconfigured weights.

Adjacent pairs are counted as raw windows regardless of whether the line
can be extended; see the weight table notes in the README.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .engine import (
    CENTER_MASK,
    BORDER_MASK,
    GameState,
    IllegalStateError,
    LINE_STEPS,
    PIECES_PER_PLAYER,
)

Score = float

# Admissible caps on the number of pair / triple windows one player's
# 8 pieces can form (the true maxima are 17 and ~6; these are safe
# over-approximations, verified by brute force in the test suite).
PAIR_WINDOW_CAP = 20
TRIPLE_WINDOW_CAP = 8


@dataclass(frozen=True)
class AlignmentWeights:
    """Per-composition weight of an alignment window."""

    all_small: float
    mixed: float
    all_large: float

    @property
    def max_abs(self) -> float:
        return max(abs(self.all_small), abs(self.mixed), abs(self.all_large))


@dataclass(frozen=True)
class HeuristicWeights:
    count: float
    center: float
    border: float
    large_owned: float
    align2: AlignmentWeights
    align3: AlignmentWeights

    @cached_property
    def max_raw(self) -> float:
        """Upper bound on |raw score|, maximizing each term independently."""
        per_piece = (
            abs(self.count) + abs(self.center) + abs(self.border) + abs(self.large_owned)
        )
        return (
            PIECES_PER_PLAYER * per_piece
            + PAIR_WINDOW_CAP * self.align2.max_abs
            + TRIPLE_WINDOW_CAP * self.align3.max_abs
        )


# Defaults chosen so that all-Large triple > all-Large pair > Large owned
# > center > count > border, with a small penalty for own pieces on the
# border (they are the ones at risk of being pushed off). Runtime
# configurable; see README for the full table and rationale.
DEFAULT_WEIGHTS = HeuristicWeights(
    count=0.25,
    center=0.5,
    border=-0.1,
    large_owned=2.0,
    align2=AlignmentWeights(all_small=0.8, mixed=1.2, all_large=4.0),
    align3=AlignmentWeights(all_small=2.5, mixed=3.0, all_large=4.5),
)


def evaluate(
    state: GameState, perspective: int, weights: HeuristicWeights = DEFAULT_WEIGHTS
) -> Score:
    """Score a non-terminal state from ``perspective``'s point of view."""
    if state.result is not None:
        raise IllegalStateError("terminal state; use terminal_score")
    b = state.board
    raw = _raw_score(
        b[0], b[1], b[2], b[3],
        state.pools[0].large, state.pools[1].large,
        perspective, weights,
    )
    return _normalize(raw, weights)


def terminal_score(state: GameState, perspective: int) -> Score:
    """+1 when ``perspective`` won, -1 when it lost."""
    if state.result is None:
        raise IllegalStateError("state is not terminal")
    return 1.0 if state.result == perspective else -1.0


def _normalize(raw: float, weights: HeuristicWeights) -> float:
    value = raw / weights.max_raw
    if value > 1.0:
        return 1.0
    if value < -1.0:
        return -1.0
    return value


def _raw_score(
    p1s: int, p1l: int, p2s: int, p2l: int,
    pool1_large: int, pool2_large: int,
    perspective: int, w: HeuristicWeights,
) -> float:
    """Raw (unnormalized) score on bare masks; hot path for the solver."""
    if perspective == 1:
        osb, olb, xsb, xlb = p1s, p1l, p2s, p2l
        own_pool_large, opp_pool_large = pool1_large, pool2_large
    else:
        osb, olb, xsb, xlb = p2s, p2l, p1s, p1l
        own_pool_large, opp_pool_large = pool2_large, pool1_large
    own = osb | olb
    opp = xsb | xlb

    raw = w.count * (own.bit_count() - opp.bit_count())
    raw += w.center * ((own & CENTER_MASK).bit_count() - (opp & CENTER_MASK).bit_count())
    raw += w.border * ((own & BORDER_MASK).bit_count() - (opp & BORDER_MASK).bit_count())
    raw += w.large_owned * (
        olb.bit_count() + own_pool_large - xlb.bit_count() - opp_pool_large
    )

    w2, w3 = w.align2, w.align3
    for delta, one, two in LINE_STEPS:
        o1, x1 = own >> delta, opp >> delta
        own_pairs = (own & o1 & one).bit_count()
        opp_pairs = (opp & x1 & one).bit_count()
        if own_pairs or opp_pairs:
            own_ll = (olb & (olb >> delta) & one).bit_count()
            own_ss = (osb & (osb >> delta) & one).bit_count()
            opp_ll = (xlb & (xlb >> delta) & one).bit_count()
            opp_ss = (xsb & (xsb >> delta) & one).bit_count()
            raw += w2.all_large * (own_ll - opp_ll)
            raw += w2.all_small * (own_ss - opp_ss)
            raw += w2.mixed * ((own_pairs - own_ll - own_ss) - (opp_pairs - opp_ll - opp_ss))

            delta2 = 2 * delta
            own_tri = (own & o1 & (own >> delta2) & two).bit_count()
            opp_tri = (opp & x1 & (opp >> delta2) & two).bit_count()
            if own_tri or opp_tri:
                own_tll = (olb & (olb >> delta) & (olb >> delta2) & two).bit_count()
                own_tss = (osb & (osb >> delta) & (osb >> delta2) & two).bit_count()
                opp_tll = (xlb & (xlb >> delta) & (xlb >> delta2) & two).bit_count()
                opp_tss = (xsb & (xsb >> delta) & (xsb >> delta2) & two).bit_count()
                raw += w3.all_large * (own_tll - opp_tll)
                raw += w3.all_small * (own_tss - opp_tss)
                raw += w3.mixed * (
                    (own_tri - own_tll - own_tss) - (opp_tri - opp_tll - opp_tss)
                )
    return raw
