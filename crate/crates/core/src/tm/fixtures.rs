//! Hand-built machines shared by tests, benches and demos.

use crate::tm::{Move, TmSpec};

/// The two-state busy beaver champion, written with an explicit third state that
/// the final transition enters. From a blank tape it runs 6 transitions and
/// leaves 4 marks.
pub fn bb2_champion() -> TmSpec {
    TmSpec::from_rules(
        3,
        2,
        &[
            ((0, 0), (1, Move::Right, 1)),
            ((0, 1), (1, Move::Left, 1)),
            ((1, 0), (1, Move::Left, 0)),
            ((1, 1), (1, Move::Right, 2)),
        ],
    )
    .expect("fixture is well-formed")
}

/// Runs right forever, erasing whatever it crosses. Never halts and revisits no
/// configuration, so only a space bound can prove its divergence.
pub fn runner() -> TmSpec {
    TmSpec::from_rules(1, 2, &[((0, 0), (0, Move::Right, 0)), ((0, 1), (0, Move::Right, 0))])
        .expect("fixture is well-formed")
}

/// Spins in place on the same cell. Diverges within constant space, so cycle
/// detection catches it immediately.
pub fn spinner() -> TmSpec {
    TmSpec::from_rules(1, 2, &[((0, 0), (0, Move::Stay, 0)), ((0, 1), (1, Move::Stay, 0))])
        .expect("fixture is well-formed")
}

/// Erases its unary input and halts with an empty tape: computes the constant 0.
pub fn eraser() -> TmSpec {
    TmSpec::from_rules(1, 2, &[((0, 1), (0, Move::Right, 0))]).expect("fixture is well-formed")
}

/// Halts at once on every input: computes `n + 1` under the unary conventions.
pub fn successor() -> TmSpec {
    TmSpec::from_rules(1, 2, &[]).expect("fixture is well-formed")
}

/// Keeps the first mark, erases the rest: computes the constant 1, which under
/// the conventions is the characteristic function of "all naturals".
pub fn constant_one() -> TmSpec {
    TmSpec::from_rules(2, 2, &[((0, 1), (1, Move::Right, 1)), ((1, 1), (0, Move::Right, 1))])
        .expect("fixture is well-formed")
}

/// Flips the scanned cell every step, forever, alternating between two states.
/// Its trajectory cycles with period 2 while the cell's value never settles,
/// which is exactly the situation where limsup and liminf disagree.
pub fn blinker() -> TmSpec {
    TmSpec::from_rules(
        2,
        2,
        &[
            ((0, 0), (1, Move::Stay, 1)),
            ((0, 1), (0, Move::Stay, 1)),
            ((1, 0), (1, Move::Stay, 0)),
            ((1, 1), (0, Move::Stay, 0)),
        ],
    )
    .expect("fixture is well-formed")
}

/// Steps left once, marks the cell there, and halts. Under the accelerated
/// layout (head starting one cell right of the output square) this marks the
/// square on every input, so its output settles at a fixed internal step.
pub fn square_marker() -> TmSpec {
    TmSpec::from_rules(
        3,
        2,
        &[
            ((0, 0), (0, Move::Left, 1)),
            ((0, 1), (1, Move::Left, 1)),
            ((1, 0), (1, Move::Stay, 2)),
        ],
    )
    .expect("fixture is well-formed")
}

/// Marks the cell left of its start, then erases it again: the second change is
/// exactly what the write-once output discipline must catch.
pub fn square_toggler() -> TmSpec {
    TmSpec::from_rules(
        4,
        2,
        &[
            ((0, 0), (0, Move::Left, 1)),
            ((0, 1), (1, Move::Left, 1)),
            ((1, 0), (1, Move::Stay, 2)),
            ((2, 1), (0, Move::Stay, 3)),
        ],
    )
    .expect("fixture is well-formed")
}

/// Halts exactly on odd inputs (the input convention writes `n + 1` marks, so
/// odd `n` means an even block). Exercises machines whose halting set is
/// decidable yet genuinely input-dependent.
///
/// Scans the block flipping between two states; on the blank past the block,
/// one state halts by leaving the pair uncovered and the other runs right
/// forever.
pub fn halts_on_odd() -> TmSpec {
    TmSpec::from_rules(
        2,
        2,
        &[
            ((0, 1), (1, Move::Right, 1)),
            ((1, 1), (1, Move::Right, 0)),
            // no blank rule for state 0: that is the halting exit
            ((1, 0), (0, Move::Right, 1)),
        ],
    )
    .expect("fixture is well-formed")
}
