//! Six-line alphanumeric strokes on a unit cell, anchored by two recorded
//! points (the cell center and its upper-right corner).

use serde::{Deserialize, Serialize};

use crate::geom::Vec2;
use crate::motion::MotionError;

/// One stroke in cell-local coordinates (unit square, origin bottom-left).
pub type Segment = (Vec2, Vec2);

/// Anchor pair defining the drawing frame: where the cell center sits and
/// where its upper-right corner sits. Their difference fixes scale and
/// orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellFrame {
    pub center: Vec2,
    pub upper_right: Vec2,
}

impl CellFrame {
    /// Map a cell-local point into the anchor frame.
    pub fn place(&self, local: Vec2) -> Vec2 {
        // the local (0.5, 0.5) -> (1, 1) corner vector maps onto
        // upper_right - center; complex multiplication applies the implied
        // rotation and scale
        let w = self.upper_right.sub(self.center).complex_div(Vec2::new(0.5, 0.5));
        self.center.add(w.complex_mul(local.sub(Vec2::new(0.5, 0.5))))
    }
}

/// Strokes of one character plus the frame they are drawn in.
#[derive(Debug, Clone, PartialEq)]
pub struct GlyphStrokes {
    pub character: char,
    /// At most six segments, endpoints inside the unit cell.
    pub segments: Vec<Segment>,
    pub frame: CellFrame,
}

impl GlyphStrokes {
    /// Segments transformed into the anchor frame.
    pub fn world_segments(&self) -> Vec<Segment> {
        self.segments
            .iter()
            .map(|(a, b)| (self.frame.place(*a), self.frame.place(*b)))
            .collect()
    }

    /// CSV of world segment endpoints: `x0,y0,x1,y1` per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x0,y0,x1,y1\n");
        for (a, b) in self.world_segments() {
            out.push_str(&format!("{},{},{},{}\n", a.x, a.y, b.x, b.y));
        }
        out
    }
}

// stroke endpoints on the unit cell
const TL: Vec2 = Vec2 { x: 0.0, y: 1.0 };
const TR: Vec2 = Vec2 { x: 1.0, y: 1.0 };
const ML: Vec2 = Vec2 { x: 0.0, y: 0.5 };
const MR: Vec2 = Vec2 { x: 1.0, y: 0.5 };
const BL: Vec2 = Vec2 { x: 0.0, y: 0.0 };
const BR: Vec2 = Vec2 { x: 1.0, y: 0.0 };
const TC: Vec2 = Vec2 { x: 0.5, y: 1.0 };
const MC: Vec2 = Vec2 { x: 0.5, y: 0.5 };
const BC: Vec2 = Vec2 { x: 0.5, y: 0.0 };

// seven-segment pieces
const SEG_A: Segment = (TL, TR);
const SEG_B: Segment = (TR, MR);
const SEG_C: Segment = (MR, BR);
const SEG_D: Segment = (BL, BR);
const SEG_E: Segment = (ML, BL);
const SEG_F: Segment = (TL, ML);
const SEG_G: Segment = (ML, MR);
// full-height strokes
const LEFT_FULL: Segment = (TL, BL);
const RIGHT_FULL: Segment = (TR, BR);
const CENTER_FULL: Segment = (TC, BC);

/// Built-in stroke table: at most six line segments per character.
pub fn local_segments(ch: char) -> Option<Vec<Segment>> {
    let segs: Vec<Segment> = match ch {
        '0' => vec![SEG_A, SEG_B, SEG_C, SEG_D, SEG_E, SEG_F],
        '1' => vec![SEG_B, SEG_C],
        '2' => vec![SEG_A, SEG_B, SEG_G, SEG_E, SEG_D],
        '3' => vec![SEG_A, SEG_B, SEG_G, SEG_C, SEG_D],
        '4' => vec![SEG_F, SEG_G, SEG_B, SEG_C],
        '5' => vec![SEG_A, SEG_F, SEG_G, SEG_C, SEG_D, (BC, BL)],
        '6' => vec![SEG_A, SEG_F, SEG_E, SEG_D, SEG_C, SEG_G],
        '7' => vec![SEG_A, SEG_B, SEG_C],
        '8' => vec![SEG_A, SEG_D, SEG_G, LEFT_FULL, RIGHT_FULL],
        '9' => vec![SEG_A, SEG_B, SEG_C, SEG_D, SEG_F, SEG_G],
        'A' => vec![SEG_A, SEG_F, SEG_E, SEG_B, SEG_C, SEG_G],
        'B' => vec![LEFT_FULL, SEG_A, SEG_B, SEG_C, SEG_D, SEG_G],
        'C' => vec![SEG_A, SEG_F, SEG_E, SEG_D],
        'D' => vec![LEFT_FULL, SEG_A, SEG_B, SEG_C, SEG_D],
        'E' => vec![SEG_A, SEG_F, SEG_E, SEG_D, SEG_G],
        'F' => vec![SEG_A, SEG_F, SEG_E, SEG_G],
        'G' => vec![SEG_A, SEG_F, SEG_E, SEG_D, SEG_C, (MC, MR)],
        'H' => vec![SEG_F, SEG_E, SEG_B, SEG_C, SEG_G],
        'I' => vec![CENTER_FULL],
        'J' => vec![SEG_B, SEG_C, SEG_D, SEG_E],
        'K' => vec![SEG_F, SEG_E, (ML, TR), (ML, BR)],
        'L' => vec![SEG_F, SEG_E, SEG_D],
        'M' => vec![LEFT_FULL, RIGHT_FULL, (TL, MC), (TR, MC)],
        'N' => vec![LEFT_FULL, RIGHT_FULL, (TL, BR)],
        'O' => vec![LEFT_FULL, RIGHT_FULL, SEG_A, SEG_D],
        'P' => vec![SEG_A, SEG_B, SEG_G, SEG_F, SEG_E],
        'Q' => vec![LEFT_FULL, RIGHT_FULL, SEG_A, SEG_D, (MC, BR)],
        'R' => vec![SEG_A, SEG_B, SEG_G, SEG_F, SEG_E, (MC, BR)],
        'S' => vec![SEG_A, SEG_F, SEG_G, SEG_C, SEG_D],
        'T' => vec![SEG_A, CENTER_FULL],
        'U' => vec![LEFT_FULL, RIGHT_FULL, SEG_D],
        'V' => vec![(TL, BC), (TR, BC)],
        'W' => vec![LEFT_FULL, RIGHT_FULL, (BL, MC), (BR, MC)],
        'X' => vec![(TL, BR), (TR, BL)],
        'Y' => vec![(TL, MC), (TR, MC), (MC, BC)],
        'Z' => vec![SEG_A, (TR, BL), SEG_D],
        _ => return None,
    };
    Some(segs)
}

/// All characters the table covers, in a fixed order.
pub const SUPPORTED: &str = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// Look up a character's strokes and anchor them in the frame defined by
/// the two recorded points.
pub fn glyph_strokes(ch: char, anchors: (Vec2, Vec2)) -> Result<GlyphStrokes, MotionError> {
    let (center, upper_right) = anchors;
    if center.dist(upper_right) < 1e-12 {
        return Err(MotionError::DegenerateAnchors);
    }
    let upper = ch.to_ascii_uppercase();
    let segments = local_segments(upper).ok_or(MotionError::UnsupportedGlyph { ch })?;
    Ok(GlyphStrokes { character: upper, segments, frame: CellFrame { center, upper_right } })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canonical(segs: &[Segment]) -> Vec<((i64, i64), (i64, i64))> {
        let q = |v: Vec2| ((v.x * 1000.0).round() as i64, (v.y * 1000.0).round() as i64);
        let mut out: Vec<((i64, i64), (i64, i64))> = segs
            .iter()
            .map(|(a, b)| {
                let (pa, pb) = (q(*a), q(*b));
                if pa <= pb {
                    (pa, pb)
                } else {
                    (pb, pa)
                }
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn zero_uses_the_six_piece_outline() {
        let segs = local_segments('0').unwrap();
        assert_eq!(segs.len(), 6);
        assert_eq!(canonical(&segs), canonical(&[SEG_A, SEG_B, SEG_C, SEG_D, SEG_E, SEG_F]));
    }

    #[test]
    fn one_is_two_collinear_vertical_segments() {
        let segs = local_segments('1').unwrap();
        assert_eq!(segs.len(), 2);
        for (a, b) in &segs {
            assert_eq!(a.x, 1.0);
            assert_eq!(b.x, 1.0);
        }
    }

    #[test]
    fn all_characters_have_at_most_six_distinct_segments() {
        for ch in SUPPORTED.chars() {
            let segs = local_segments(ch).unwrap();
            assert!(segs.len() <= 6, "{ch} has {} segments", segs.len());
            assert!(!segs.is_empty());
            let canon = canonical(&segs);
            let mut dedup = canon.clone();
            dedup.dedup();
            assert_eq!(canon.len(), dedup.len(), "{ch} repeats a segment");
            // endpoints within the unit cell
            for (a, b) in &segs {
                for p in [a, b] {
                    assert!((0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y));
                }
            }
        }
    }

    #[test]
    fn all_36_characters_are_pairwise_distinct() {
        let chars: Vec<char> = SUPPORTED.chars().collect();
        assert_eq!(chars.len(), 36);
        for i in 0..chars.len() {
            for j in (i + 1)..chars.len() {
                let a = canonical(&local_segments(chars[i]).unwrap());
                let b = canonical(&local_segments(chars[j]).unwrap());
                assert_ne!(a, b, "{} and {} share a stroke set", chars[i], chars[j]);
            }
        }
    }

    #[test]
    fn unsupported_character_is_an_error() {
        let anchors = (Vec2::new(0.0, 0.0), Vec2::new(0.5, 0.5));
        assert!(matches!(
            glyph_strokes('?', anchors),
            Err(MotionError::UnsupportedGlyph { ch: '?' })
        ));
    }

    #[test]
    fn coincident_anchors_are_an_error() {
        let anchors = (Vec2::new(0.1, 0.1), Vec2::new(0.1, 0.1));
        assert!(matches!(glyph_strokes('A', anchors), Err(MotionError::DegenerateAnchors)));
    }

    #[test]
    fn lowercase_maps_to_uppercase() {
        let anchors = (Vec2::new(0.0, 0.0), Vec2::new(0.5, 0.5));
        let g = glyph_strokes('k', anchors).unwrap();
        assert_eq!(g.character, 'K');
    }

    #[test]
    fn identity_frame_keeps_local_offsets() {
        // center at origin, corner at (0.5, 0.5): local (1,1) lands on (0.5, 0.5)
        let frame = CellFrame { center: Vec2::ZERO, upper_right: Vec2::new(0.5, 0.5) };
        let p = frame.place(Vec2::new(1.0, 1.0));
        assert!((p.x - 0.5).abs() < 1e-12 && (p.y - 0.5).abs() < 1e-12);
        let q = frame.place(Vec2::new(0.5, 0.5));
        assert!(q.x.abs() < 1e-12 && q.y.abs() < 1e-12);
    }

    #[test]
    fn rotated_frame_rotates_strokes() {
        // corner vector along +y only: cell rotated 45 degrees and scaled
        let frame = CellFrame { center: Vec2::ZERO, upper_right: Vec2::new(0.0, 1.0) };
        // local TR corner maps onto the anchor itself
        let p = frame.place(Vec2::new(1.0, 1.0));
        assert!((p.x - 0.0).abs() < 1e-12 && (p.y - 1.0).abs() < 1e-12);
        // local TL corner maps perpendicular
        let q = frame.place(Vec2::new(0.0, 1.0));
        assert!((q.x + 1.0).abs() < 1e-12 && q.y.abs() < 1e-12);
    }

    #[test]
    fn csv_lists_one_line_per_segment() {
        let anchors = (Vec2::new(0.0, 0.0), Vec2::new(0.5, 0.5));
        let g = glyph_strokes('7', anchors).unwrap();
        let csv = g.to_csv();
        assert_eq!(csv.lines().count(), 1 + 3);
        assert!(csv.starts_with("x0,y0,x1,y1\n"));
    }
}
