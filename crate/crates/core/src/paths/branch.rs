use std::f64::consts::FRAC_PI_4;

use super::path::{Path, PathParam};
use crate::{Error, Result, C64};

/// Bound on the argument change of `γ − a` between consecutive samples.
pub const MAX_STEP_ARG: f64 = FRAC_PI_4;

/// Steps are limited to this fraction of the distance to the base point,
/// which keeps the per-step argument change below `asin(fraction)`.
const STEP_FRACTION: f64 = 0.5;

const MIN_DISTANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Sample {
    s: f64,
    d: C64,
    theta: f64,
}

/// A continuous lift of `arg(γ(s) − a)` along a path, defining a branch of
/// `(z − a)^{1/N}`.
///
/// When `a` is the start (end) point of the path the lift is anchored on
/// the first (last) piece, where `γ − a` is computed from exact offsets.
#[derive(Clone, Debug)]
pub struct BranchTrace {
    path: Path,
    base: C64,
    order: u32,
    samples: Vec<Sample>,
}

impl BranchTrace {
    /// Continue the branch with value `initial` at `s = 0`.
    pub fn continue_branch(path: &Path, a: C64, order: u32, initial: C64) -> Result<Self> {
        Self::continue_branch_refined(path, a, order, initial, STEP_FRACTION)
    }

    /// As [`continue_branch`](Self::continue_branch) with steps limited to
    /// `fraction × distance`.
    pub fn continue_branch_refined(
        path: &Path,
        a: C64,
        order: u32,
        initial: C64,
        fraction: f64,
    ) -> Result<Self> {
        check_order(order)?;
        let d0 = path.start() - a;
        if d0.norm() < MIN_DISTANCE {
            return Err(hit(a, d0.norm()));
        }
        let mismatch = (initial.powu(order) - d0).norm() / d0.norm();
        if !(mismatch <= 1e-9) {
            return Err(Error::BadInitialBranch(mismatch));
        }
        let theta0 = order as f64 * initial.arg();
        Self::trace(path, a, order, 0.0, theta0, fraction)
    }

    /// The branch that starts principal: the principal root at `s = 0`, or,
    /// when `a` is the start point, the principal root along the first piece.
    pub fn principal(path: &Path, a: C64, order: u32) -> Result<Self> {
        check_order(order)?;
        if a == path.start() {
            let first = &path.pieces()[0];
            let mid = 0.5 * (first.s0 + first.s1);
            let d = path.offset(&path.param_in(0, mid), a);
            Self::trace(path, a, order, mid, d.arg(), STEP_FRACTION)
        } else {
            let d0 = path.start() - a;
            if d0.norm() < MIN_DISTANCE {
                return Err(hit(a, d0.norm()));
            }
            Self::trace(path, a, order, 0.0, d0.arg(), STEP_FRACTION)
        }
    }

    fn trace(
        path: &Path,
        a: C64,
        order: u32,
        s_lo: f64,
        theta_lo: f64,
        fraction: f64,
    ) -> Result<Self> {
        let pieces = path.pieces();
        let last = pieces.len() - 1;
        let s_hi = if a == path.end() {
            0.5 * (pieces[last].s0 + pieces[last].s1)
        } else {
            1.0
        };
        let mut samples: Vec<Sample> = Vec::new();
        let mut theta = theta_lo;
        let mut prev: Option<C64> = None;
        for (k, piece) in pieces.iter().enumerate() {
            if piece.s1 < s_lo || piece.s0 > s_hi {
                continue;
            }
            let lo = piece.s0.max(s_lo);
            let hi = piece.s1.min(s_hi);
            let speed = piece.speed();
            let mut s = lo;
            loop {
                let q = path.param_in(k, s);
                let d = path.offset(&q, a);
                let dist = d.norm();
                if !(dist >= MIN_DISTANCE) {
                    return Err(hit(a, dist));
                }
                if let Some(p) = prev {
                    theta += (d / p).arg();
                }
                samples.push(Sample { s, d, theta });
                prev = Some(d);
                if s >= hi {
                    break;
                }
                let step = if speed > 0.0 {
                    fraction * dist / speed
                } else {
                    hi - s
                };
                s = if s + step >= hi { hi } else { s + step };
            }
        }
        Ok(BranchTrace {
            path: path.clone(),
            base: a,
            order,
            samples,
        })
    }

    pub fn base(&self) -> C64 {
        self.base
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }

    /// Largest argument change between consecutive samples.
    pub fn max_step_change(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| (w[1].theta - w[0].theta).abs())
            .fold(0.0, f64::max)
    }

    /// `(γ(s) − a, θ(s))` with `θ` the continuous argument.
    pub fn lift(&self, q: &PathParam) -> (C64, f64) {
        let idx = self.samples.partition_point(|x| x.s <= q.s).max(1) - 1;
        let anchor = &self.samples[idx];
        let d = self.path.offset(q, self.base);
        (d, anchor.theta + (d / anchor.d).arg())
    }

    /// `((γ(s) − a)^{1/N})^m` on the tracked branch.
    pub fn power(&self, q: &PathParam, m: i64) -> C64 {
        let (d, theta) = self.lift(q);
        let e = m as f64 / self.order as f64;
        C64::from_polar(d.norm().powf(e), theta * e)
    }

    /// `(γ(s) − a)^{1/N}` on the tracked branch.
    pub fn value(&self, q: &PathParam) -> C64 {
        self.power(q, 1)
    }

    pub fn value_at(&self, s: f64) -> C64 {
        self.value(&self.path.param(s))
    }

    pub fn start_value(&self) -> Result<C64> {
        self.endpoint_check(self.path.start())?;
        Ok(self.value_at(0.0))
    }

    pub fn end_value(&self) -> Result<C64> {
        self.endpoint_check(self.path.end())?;
        let last = self.path.pieces().len() - 1;
        Ok(self.value(&self.path.param_in(last, 1.0)))
    }

    /// `θ(1) − θ(0)`.
    pub fn total_arg_change(&self) -> Result<f64> {
        self.endpoint_check(self.path.start())?;
        self.endpoint_check(self.path.end())?;
        let last = self.path.pieces().len() - 1;
        let (_, t1) = self.lift(&self.path.param_in(last, 1.0));
        let (_, t0) = self.lift(&self.path.param_in(0, 0.0));
        Ok(t1 - t0)
    }

    fn endpoint_check(&self, p: C64) -> Result<()> {
        if p == self.base {
            Err(hit(self.base, 0.0))
        } else {
            Ok(())
        }
    }

    /// The same branch along the reversed path.
    pub fn reversed(&self) -> BranchTrace {
        let path = self.path.reversed();
        let samples = self
            .samples
            .iter()
            .rev()
            .map(|x| Sample {
                s: 1.0 - x.s,
                d: x.d,
                theta: x.theta,
            })
            .collect();
        BranchTrace {
            path,
            base: self.base,
            order: self.order,
            samples,
        }
    }
}

/// Continuous change of `arg(γ − a)` along the whole path.
pub fn total_arg_change(path: &Path, a: C64) -> Result<f64> {
    BranchTrace::principal(path, a, 1)?.total_arg_change()
}

fn check_order(order: u32) -> Result<()> {
    if order == 0 {
        Err(Error::InvalidArgument("root order must be positive".into()))
    } else {
        Ok(())
    }
}

fn hit(a: C64, distance: f64) -> Error {
    Error::PathHitsBasePoint {
        point: format!("{a}"),
        distance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::Segment;
    use std::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn circle(center: C64, radius: f64, turns: f64) -> Path {
        Path::from_segments(vec![Segment::circle_through(
            center,
            center + radius,
            turns,
        )])
        .unwrap()
    }

    #[test]
    fn straight_segment_principal_root() {
        let p = Path::line(c(1.0, 0.0), c(2.0, 0.0)).unwrap();
        let t = BranchTrace::continue_branch(&p, c(0.0, 0.0), 2, c(1.0, 0.0)).unwrap();
        assert!((t.end_value().unwrap() - c(2f64.sqrt(), 0.0)).norm() < 1e-15);
        assert_eq!(total_arg_change(&p, c(0.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn full_circle_monodromy() {
        for n in 2..7u32 {
            let p = circle(c(0.5, -0.2), 0.7, 1.0);
            let a = c(0.5, -0.2);
            let init = C64::from_polar(0.7f64.powf(1.0 / n as f64), 0.0);
            let t = BranchTrace::continue_branch(&p, a, n, init).unwrap();
            let zeta = C64::from_polar(1.0, TAU / n as f64);
            assert!((t.end_value().unwrap() - zeta * init).norm() < 1e-14);
            assert!(t.max_step_change() < MAX_STEP_ARG);
        }
    }

    #[test]
    fn half_circle_square_root() {
        let p = Path::from_segments(vec![Segment::arc(c(0.0, 0.0), 1.0, 0.0, PI)]).unwrap();
        let t = BranchTrace::continue_branch(&p, c(0.0, 0.0), 2, c(1.0, 0.0)).unwrap();
        assert!((t.end_value().unwrap() - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn arg_change_counts_windings() {
        let a = c(0.0, 0.0);
        let once = circle(a, 1.0, 1.0);
        assert!((total_arg_change(&once, a).unwrap() - TAU).abs() < 1e-12);
        let twice = once.concat(&once).unwrap();
        assert!((total_arg_change(&twice, a).unwrap() - 2.0 * TAU).abs() < 1e-12);
        let cw = circle(a, 1.0, -1.0);
        assert!((total_arg_change(&cw, a).unwrap() + TAU).abs() < 1e-12);
        // a point outside the loop sees no net winding
        assert!(total_arg_change(&once, c(3.0, 0.5)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn base_point_on_path_is_rejected() {
        let p = Path::line(c(-1.0, 0.0), c(1.0, 0.0)).unwrap();
        let err = BranchTrace::principal(&p, c(0.0, 0.0), 3).unwrap_err();
        assert!(matches!(err, Error::PathHitsBasePoint { .. }));
    }

    #[test]
    fn wrong_initial_branch_is_rejected() {
        let p = Path::line(c(1.0, 0.0), c(2.0, 0.0)).unwrap();
        let err = BranchTrace::continue_branch(&p, c(0.0, 0.0), 2, c(1.1, 0.0)).unwrap_err();
        assert!(matches!(err, Error::BadInitialBranch(_)));
        // another root of the same radicand is fine
        let t = BranchTrace::continue_branch(&p, c(0.0, 0.0), 2, c(-1.0, 0.0)).unwrap();
        assert!((t.end_value().unwrap() + c(2f64.sqrt(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn anchored_endpoints_use_exact_offsets() {
        let a = c(0.0, 0.0);
        let b = c(0.0, 2.0);
        let p = Path::line(a, b).unwrap();
        let ta = BranchTrace::principal(&p, a, 5).unwrap();
        let q = p.param_in(0, 1e-280);
        let v = ta.power(&q, 5);
        assert!((v - c(0.0, 2e-280)).norm() < 1e-14 * 2e-280);
        let tb = BranchTrace::principal(&p, b, 5).unwrap();
        let q = PathParam {
            piece: 0,
            s: 1.0,
            from_start: 1.0,
            from_end: 1e-280,
        };
        assert!((tb.power(&q, 5) - c(0.0, -2e-280)).norm() < 1e-14 * 2e-280);
        assert!(ta.total_arg_change().is_err());
        assert!(tb.end_value().is_err());
    }

    #[test]
    fn refinement_and_reversal_are_stable() {
        let p = Path::from_segments(vec![
            Segment::line(c(2.0, 0.0), c(0.0, 2.0)),
            Segment::arc(c(0.0, 0.0), 2.0, PI / 2.0, 3.0 * PI),
            Segment::line(c(0.0, -2.0), c(0.3, 0.1)),
        ])
        .unwrap();
        let a = c(0.1, 0.05);
        let init = C64::from_polar((c(2.0, 0.0) - a).norm().cbrt(), (c(2.0, 0.0) - a).arg() / 3.0);
        let coarse = BranchTrace::continue_branch(&p, a, 3, init).unwrap();
        let fine = BranchTrace::continue_branch_refined(&p, a, 3, init, 0.25).unwrap();
        let e1 = coarse.end_value().unwrap();
        let e2 = fine.end_value().unwrap();
        assert!((e1 - e2).norm() < 1e-10 * e1.norm());
        assert!(fine.sample_count() > coarse.sample_count());
        assert!(((e1.powu(3) - (p.end() - a)).norm()) < 1e-10 * (p.end() - a).norm());

        let rev = coarse.reversed();
        for &s in &[0.0, 0.13, 0.5, 0.77, 1.0] {
            let lhs = rev.value_at(1.0 - s);
            let rhs = coarse.value_at(s);
            assert!((lhs - rhs).norm() < 1e-13, "s = {s}");
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn continuation_is_a_root_and_refinement_stable(
                r in 0.5f64..2.0,
                sweep in -9.0f64..9.0,
                ax in -0.3f64..0.3,
                ay in -0.3f64..0.3,
                order in 2u32..7,
            ) {
                let a = c(ax, ay);
                let p = Path::from_segments(vec![
                    Segment::line(c(2.5, 0.0), c(r, 0.0)),
                    Segment::arc(c(0.0, 0.0), r, 0.0, sweep),
                ])
                .unwrap();
                prop_assume!(p.distance_to(a) > 0.1);
                let coarse = BranchTrace::principal(&p, a, order).unwrap();
                let fine = BranchTrace::continue_branch_refined(&p, a, order, coarse.start_value().unwrap(), 0.5)
                    .unwrap();
                let e1 = coarse.end_value().unwrap();
                let e2 = fine.end_value().unwrap();
                let target = p.end() - a;
                prop_assert!((e1.powu(order) - target).norm() < 1e-10 * target.norm());
                prop_assert!((e1 - e2).norm() < 1e-10 * e1.norm());
            }
        }
    }
}