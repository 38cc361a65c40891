use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// A smooth primitive, parametrized over local `t ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Segment {
    Line {
        start: C64,
        end: C64,
    },
    /// `center + radius·e^{i(start_angle + t·sweep)}`; positive sweep is counterclockwise.
    Arc {
        center: C64,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
}

impl Segment {
    pub fn line(start: C64, end: C64) -> Self {
        Segment::Line { start, end }
    }

    pub fn arc(center: C64, radius: f64, start_angle: f64, sweep: f64) -> Self {
        Segment::Arc {
            center,
            radius,
            start_angle,
            sweep,
        }
    }

    /// Full circle about `center` through `start`; `turns > 0` is counterclockwise.
    pub fn circle_through(center: C64, start: C64, turns: f64) -> Self {
        let d = start - center;
        Segment::arc(center, d.norm(), d.arg(), TAU * turns)
    }

    pub fn point(&self, t: f64) -> C64 {
        match *self {
            Segment::Line { start, end } => start + (end - start) * t,
            Segment::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => center + C64::from_polar(radius, start_angle + t * sweep),
        }
    }

    /// `dγ/dt`.
    pub fn tangent(&self, t: f64) -> C64 {
        match *self {
            Segment::Line { start, end } => end - start,
            Segment::Arc {
                radius,
                start_angle,
                sweep,
                ..
            } => C64::i() * C64::from_polar(radius * sweep, start_angle + t * sweep),
        }
    }

    pub fn start(&self) -> C64 {
        match *self {
            Segment::Line { start, .. } => start,
            _ => self.point(0.0),
        }
    }

    pub fn end(&self) -> C64 {
        match *self {
            Segment::Line { end, .. } => end,
            _ => self.point(1.0),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { start, end } => (end - start).norm(),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    /// `γ(t) − γ(0)` computed without cancellation for small `t`.
    pub fn offset_from_start(&self, t: f64) -> C64 {
        match *self {
            Segment::Line { start, end } => (end - start) * t,
            Segment::Arc {
                radius,
                start_angle,
                sweep,
                ..
            } => chord(radius, start_angle, t * sweep),
        }
    }

    /// `γ(1 − t) − γ(1)` computed without cancellation for small `t`.
    pub fn offset_from_end(&self, t: f64) -> C64 {
        match *self {
            Segment::Line { start, end } => (start - end) * t,
            Segment::Arc {
                radius,
                start_angle,
                sweep,
                ..
            } => chord(radius, start_angle + sweep, -t * sweep),
        }
    }

    pub fn reversed(&self) -> Self {
        match *self {
            Segment::Line { start, end } => Segment::line(end, start),
            Segment::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => Segment::arc(center, radius, start_angle + sweep, -sweep),
        }
    }

    /// Distance from `a` to the segment.
    pub fn distance_to(&self, a: C64) -> f64 {
        match *self {
            Segment::Line { start, end } => {
                let d = end - start;
                let len2 = d.norm_sqr();
                let t = if len2 > 0.0 {
                    (((a - start) * d.conj()).re / len2).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                (start + d * t - a).norm()
            }
            Segment::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let rel = a - center;
                let ends = (self.point(0.0) - a).norm().min((self.point(1.0) - a).norm());
                if rel.norm() == 0.0 {
                    return radius;
                }
                // is the closest point of the full circle on the arc?
                let phi = rel.arg();
                let mut off = (phi - start_angle) * sweep.signum();
                off = off.rem_euclid(TAU);
                if off <= sweep.abs() {
                    (rel.norm() - radius).abs()
                } else {
                    ends
                }
            }
        }
    }
}

/// `r·e^{iα}(e^{iδ} − 1) = r·e^{iα}·2i·sin(δ/2)·e^{iδ/2}`.
fn chord(radius: f64, alpha: f64, delta: f64) -> C64 {
    C64::from_polar(2.0 * radius * (0.5 * delta).sin(), alpha + 0.5 * delta) * C64::i()
}

/// A segment occupying the parameter interval `[s0, s1]` of its path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub s0: f64,
    pub s1: f64,
    pub segment: Segment,
}

impl Piece {
    fn local(&self, s: f64) -> f64 {
        ((s - self.s0) / (self.s1 - self.s0)).clamp(0.0, 1.0)
    }

    /// Parameter speed `|dγ/ds|`.
    pub fn speed(&self) -> f64 {
        self.segment.length() / (self.s1 - self.s0)
    }
}

/// A point of a path, remembering its exact parameter distance to the
/// ends of its piece so that offsets from piece endpoints stay accurate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathParam {
    pub piece: usize,
    pub s: f64,
    pub from_start: f64,
    pub from_end: f64,
}

/// A piecewise smooth map `[0, 1] → ℂ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pieces: Vec<Piece>,
}

impl Path {
    /// Pieces with explicit parameter intervals; they must tile `[0, 1]`
    /// and consecutive segments must share endpoints.
    pub fn from_pieces(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidArgument("a path needs at least one segment".into()));
        }
        if pieces[0].s0 != 0.0 || pieces[pieces.len() - 1].s1 != 1.0 {
            return Err(Error::InvalidArgument("path parameters must span [0, 1]".into()));
        }
        for w in pieces.windows(2) {
            if w[0].s1 != w[1].s0 {
                return Err(Error::InvalidArgument("path parameter intervals must tile".into()));
            }
            let gap = (w[0].segment.end() - w[1].segment.start()).norm();
            let scale = 1.0 + w[0].segment.end().norm();
            if gap > 1e-12 * scale {
                return Err(Error::InvalidArgument(format!(
                    "consecutive segments do not meet (gap {gap:e})"
                )));
            }
        }
        if pieces.iter().any(|p| !(p.s1 > p.s0)) {
            return Err(Error::InvalidArgument("empty parameter interval".into()));
        }
        Ok(Path { pieces })
    }

    /// Segments parametrized proportionally to arc length.
    pub fn from_segments(segments: Vec<Segment>) -> Result<Self> {
        let segments: Vec<Segment> = segments.into_iter().filter(|s| s.length() > 0.0).collect();
        let total: f64 = segments.iter().map(|s| s.length()).sum();
        if !(total > 0.0) {
            return Err(Error::InvalidArgument("path has zero length".into()));
        }
        Path::from_pieces(distribute(&segments, 0.0, 1.0, total))
    }

    pub fn line(a: C64, b: C64) -> Result<Self> {
        Path::from_segments(vec![Segment::line(a, b)])
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn start(&self) -> C64 {
        self.pieces[0].segment.start()
    }

    pub fn end(&self) -> C64 {
        self.pieces[self.pieces.len() - 1].segment.end()
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(|p| p.segment.length()).sum()
    }

    pub fn piece_index(&self, s: f64) -> usize {
        let idx = self.pieces.partition_point(|p| p.s1 <= s);
        idx.min(self.pieces.len() - 1)
    }

    pub fn param(&self, s: f64) -> PathParam {
        let piece = self.piece_index(s);
        self.param_in(piece, s)
    }

    pub fn param_in(&self, piece: usize, s: f64) -> PathParam {
        let p = &self.pieces[piece];
        PathParam {
            piece,
            s,
            from_start: s - p.s0,
            from_end: p.s1 - s,
        }
    }

    pub fn eval(&self, s: f64) -> C64 {
        let p = &self.pieces[self.piece_index(s)];
        p.segment.point(p.local(s))
    }

    pub fn point(&self, q: &PathParam) -> C64 {
        let p = &self.pieces[q.piece];
        if q.from_start <= q.from_end {
            p.segment.start() + p.segment.offset_from_start(q.from_start / (p.s1 - p.s0))
        } else {
            p.segment.end() + p.segment.offset_from_end(q.from_end / (p.s1 - p.s0))
        }
    }

    /// `dγ/ds`.
    pub fn derivative(&self, q: &PathParam) -> C64 {
        let p = &self.pieces[q.piece];
        p.segment.tangent(p.local(q.s)) / (p.s1 - p.s0)
    }

    /// `γ(s) − a`, exact in relative terms when `a` is an endpoint of the piece.
    pub fn offset(&self, q: &PathParam, a: C64) -> C64 {
        let p = &self.pieces[q.piece];
        let len = p.s1 - p.s0;
        if a == p.segment.start() && q.from_start <= q.from_end {
            p.segment.offset_from_start(q.from_start / len)
        } else if a == p.segment.end() && q.from_end < q.from_start {
            p.segment.offset_from_end(q.from_end / len)
        } else {
            self.point(q) - a
        }
    }

    /// `s ↦ γ(1 − s)`.
    pub fn reversed(&self) -> Path {
        let pieces = self
            .pieces
            .iter()
            .rev()
            .map(|p| Piece {
                s0: 1.0 - p.s1,
                s1: 1.0 - p.s0,
                segment: p.segment.reversed(),
            })
            .collect::<Vec<_>>();
        let mut pieces = pieces;
        // keep the tiling exact after the 1 − s map
        pieces[0].s0 = 0.0;
        let last = pieces.len() - 1;
        pieces[last].s1 = 1.0;
        for k in 1..pieces.len() {
            pieces[k].s0 = pieces[k - 1].s1;
        }
        Path { pieces }
    }

    /// `self` on `[0, 1/2]` followed by `other` on `[1/2, 1]`.
    pub fn concat(&self, other: &Path) -> Result<Path> {
        let gap = (self.end() - other.start()).norm();
        if gap > 1e-12 * (1.0 + self.end().norm()) {
            return Err(Error::InvalidArgument(format!(
                "paths do not meet (gap {gap:e})"
            )));
        }
        let mut pieces: Vec<Piece> = self
            .pieces
            .iter()
            .map(|p| Piece {
                s0: 0.5 * p.s0,
                s1: 0.5 * p.s1,
                segment: p.segment,
            })
            .collect();
        pieces.extend(other.pieces.iter().map(|p| Piece {
            s0: 0.5 + 0.5 * p.s0,
            s1: 0.5 + 0.5 * p.s1,
            segment: p.segment,
        }));
        Path::from_pieces(pieces)
    }

    pub fn distance_to(&self, a: C64) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.segment.distance_to(a))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("paths serialize")
    }
}

/// Spread segments over `[s0, s1]` proportionally to their lengths.
pub(crate) fn distribute(segments: &[Segment], s0: f64, s1: f64, total: f64) -> Vec<Piece> {
    let mut out = Vec::with_capacity(segments.len());
    let mut acc = 0.0;
    let mut prev = s0;
    for (k, seg) in segments.iter().enumerate() {
        acc += seg.length();
        let next = if k + 1 == segments.len() {
            s1
        } else {
            s0 + (s1 - s0) * acc / total
        };
        out.push(Piece {
            s0: prev,
            s1: next,
            segment: *seg,
        });
        prev = next;
    }
    out
}
