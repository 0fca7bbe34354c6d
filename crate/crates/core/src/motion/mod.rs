//! Playful trajectory synthesis and alphanumeric stroke generation.

pub mod glyph;
pub mod traj;

use thiserror::Error;

pub use glyph::{glyph_strokes, CellFrame, GlyphStrokes, Segment};
pub use traj::{
    check_guidelines, gradient, objective, optimize, optimize_toward, peak_deviation,
    playful_offsets, seed_straight, GuidelineReport, OptimizeReport, PlayfulParams, Trajectory,
};

#[derive(Debug, Error, PartialEq)]
pub enum MotionError {
    #[error("objective became non-finite at iteration {iteration}")]
    NonFiniteObjective { iteration: usize },
    #[error("character {ch:?} has no stroke table entry")]
    UnsupportedGlyph { ch: char },
    #[error("anchor points coincide; frame undefined")]
    DegenerateAnchors,
}
