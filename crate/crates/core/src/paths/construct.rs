use std::f64::consts::PI;

use super::path::{distribute, Path, Piece, Segment};
use crate::{Error, Result, C64};

pub fn min_pairwise_distance(points: &[C64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            best = best.min((points[i] - points[j]).norm());
        }
    }
    best
}

/// `min(0.1, d/4)` with `d` the minimum pairwise distance.
pub fn default_epsilon(points: &[C64]) -> f64 {
    (0.25 * min_pairwise_distance(points)).min(0.1)
}

/// A path from `c_start` to `c_end` that
///
/// - leaves as `c_start + s` and arrives as `c_end − s` for `s < ε`,
/// - passes every obstacle (and both endpoints) at distance at least `ε/2`,
///   using arcs of radius `ε/2` where the straight route comes closer,
/// - winds `winding` extra times counterclockwise about
///   `obstacles[winding_center]` through loops spliced right after the
///   initial ray.
pub fn build_gamma(
    c_start: C64,
    c_end: C64,
    obstacles: &[C64],
    winding_center: Option<usize>,
    winding: i64,
    eps: f64,
) -> Result<Path> {
    if c_start == c_end {
        return Err(Error::GeometryInfeasible("start and end coincide".into()));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::GeometryInfeasible(format!(
            "collar length must lie in (0, 1/2) (got {eps})"
        )));
    }
    let mut all = vec![c_start, c_end];
    all.extend_from_slice(obstacles);
    let d_min = min_pairwise_distance(&all);
    if !(eps < 0.5 * d_min) {
        return Err(Error::GeometryInfeasible(format!(
            "ε = {eps} is not below half the minimum point distance {d_min}"
        )));
    }
    let rho = 0.5 * eps;
    let p = c_start + eps;
    let q = c_end - eps;

    let mut middle = Vec::new();
    if winding != 0 {
        let idx = winding_center.ok_or_else(|| {
            Error::InvalidArgument("winding requested without a winding center".into())
        })?;
        let center = *obstacles.get(idx).ok_or(Error::InvalidIndex {
            index: idx,
            max: obstacles.len(),
        })?;
        let dir = (p - center) / (p - center).norm();
        let b = center + dir * rho;
        let others: Vec<C64> = all.iter().copied().filter(|&x| x != center).collect();
        let approach = route(p, b, &others, rho)?;
        middle.extend_from_slice(&approach);
        middle.push(Segment::arc(center, rho, dir.arg(), 2.0 * PI * winding as f64));
        middle.extend(approach.iter().rev().map(|s| s.reversed()));
    }
    middle.extend(route(p, q, &all, rho)?);

    let total: f64 = middle.iter().map(|s| s.length()).sum();
    let mut pieces = vec![Piece {
        s0: 0.0,
        s1: eps,
        segment: Segment::line(c_start, p),
    }];
    pieces.extend(distribute(&middle, eps, 1.0 - eps, total));
    pieces.push(Piece {
        s0: 1.0 - eps,
        s1: 1.0,
        segment: Segment::line(q, c_end),
    });
    Path::from_pieces(pieces)
}

/// Straight route with minor-arc detours of radius `rho` about every point
/// closer than `rho`; a point on the route is passed on the left.
fn route(from: C64, to: C64, points: &[C64], rho: f64) -> Result<Vec<Segment>> {
    let len = (to - from).norm();
    if len == 0.0 {
        return Ok(Vec::new());
    }
    let u = (to - from) / len;
    let mut detours: Vec<(f64, Segment)> = Vec::new();
    for &o in points {
        if Segment::line(from, to).distance_to(o) >= rho {
            continue;
        }
        let local = (o - from) * u.conj();
        let (t, h) = (local.re, local.im);
        let w = (rho * rho - h * h).max(0.0).sqrt();
        if t - w <= 0.0 || t + w >= len {
            return Err(Error::GeometryInfeasible(format!(
                "detour about {o} would pass an end of the route"
            )));
        }
        let entry = from + u * (t - w);
        let exit = from + u * (t + w);
        let a_in = (entry - o).arg();
        let sweep = if h.abs() < 1e-12 * rho {
            -PI
        } else {
            ((exit - o) / (entry - o)).arg()
        };
        detours.push((t, Segment::arc(o, rho, a_in, sweep)));
    }
    detours.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = Vec::new();
    let mut cursor = from;
    for (_, arc) in detours {
        let start = arc.start();
        if (start - cursor).norm() > 0.0 {
            out.push(Segment::line(cursor, start));
        }
        out.push(arc);
        cursor = arc.end();
    }
    if (to - cursor).norm() > 0.0 {
        out.push(Segment::line(cursor, to));
    }
    Ok(out)
}

/// The commutator loop `ℓ_a ℓ_b ℓ_a⁻¹ ℓ_b⁻¹` based at the midpoint of `a`
/// and `b`, with `ℓ_p` a counterclockwise circle of radius `clearance`
/// about `p` reached along the line through `a` and `b`.
pub fn pochhammer_contour(a: C64, b: C64, clearance: f64) -> Result<Path> {
    let d = (b - a).norm();
    if !(d > 0.0) || !(clearance > 0.0 && clearance < 0.25 * d) {
        return Err(Error::GeometryInfeasible(format!(
            "clearance {clearance} must lie in (0, |a − b|/4) with |a − b| = {d}"
        )));
    }
    let m = 0.5 * (a + b);
    let lp = |p: C64| {
        let u = (p - m) / (p - m).norm();
        let foot = p - u * clearance;
        vec![
            Segment::line(m, foot),
            Segment::circle_through(p, foot, 1.0),
            Segment::line(foot, m),
        ]
    };
    let inv = |segs: &[Segment]| segs.iter().rev().map(|s| s.reversed()).collect::<Vec<_>>();
    let la = lp(a);
    let lb = lp(b);
    let mut segs = Vec::new();
    segs.extend_from_slice(&la);
    segs.extend_from_slice(&lb);
    segs.extend(inv(&la));
    segs.extend(inv(&lb));
    Path::from_segments(segs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{total_arg_change, BranchTrace};
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    const L1: C64 = C64::new(-0.7, 0.3);
    const L2: C64 = C64::new(1.9, -0.4);

    #[test]
    fn unobstructed_gamma_is_straight_with_collars() {
        let eps = 0.1;
        let g = build_gamma(c(0.0, 0.0), c(1.0, 0.0), &[L1, L2], Some(1), 0, eps).unwrap();
        for &s in &[0.0, 0.03, 0.0999] {
            assert!((g.eval(s) - c(s, 0.0)).norm() < 1e-15);
            assert!((g.eval(1.0 - s) - c(1.0 - s, 0.0)).norm() < 1e-15);
        }
        for &o in &[L1, L2] {
            let straight = ((c(1.0, 0.0) - o) / (c(0.0, 0.0) - o)).arg();
            assert!((total_arg_change(&g, o).unwrap() - straight).abs() < 1e-12);
        }
    }

    #[test]
    fn winding_loops_shift_lambda2_only() {
        let eps = 0.1;
        let base = build_gamma(c(0.0, 0.0), c(1.0, 0.0), &[L1, L2], Some(1), 0, eps).unwrap();
        let t2 = total_arg_change(&base, L2).unwrap();
        let t1 = total_arg_change(&base, L1).unwrap();
        for l in [-1i64, 1, 2] {
            let g = build_gamma(c(0.0, 0.0), c(1.0, 0.0), &[L1, L2], Some(1), l, eps).unwrap();
            let d2 = total_arg_change(&g, L2).unwrap() - t2;
            assert!((d2 - TAU * l as f64).abs() < 1e-9, "l = {l}: {d2}");
            assert!((total_arg_change(&g, L1).unwrap() - t1).abs() < 1e-9);
            assert!((g.eval(0.05) - c(0.05, 0.0)).norm() < 1e-15);
            assert!(g.distance_to(L2) >= 0.5 * eps - 1e-12);
        }
    }

    #[test]
    fn obstacle_on_route_is_detoured() {
        let eps = 0.1;
        let o = c(0.5, 0.0);
        let g = build_gamma(c(0.0, 0.0), c(1.0, 0.0), &[o], None, 0, eps).unwrap();
        assert!(g.distance_to(o) >= 0.5 * eps - 1e-12);
        // passed on the left: the lift about o decreases by π
        let change = total_arg_change(&g, o).unwrap();
        assert!((change + PI).abs() < 1e-12, "{change}");
        // a slightly offset obstacle is passed on its far side
        let o2 = c(0.5, 0.01);
        let g = build_gamma(c(0.0, 0.0), c(1.0, 0.0), &[o2], None, 0, eps).unwrap();
        assert!(g.distance_to(o2) >= 0.5 * eps - 1e-12);
        assert!(total_arg_change(&g, o2).unwrap() > 0.0);
    }

    #[test]
    fn backwards_route_detours_around_the_start() {
        let eps = 0.05;
        let g = build_gamma(c(0.0, 0.0), c(-1.0, 0.0), &[L1, L2], Some(1), 1, eps).unwrap();
        assert!((g.eval(0.01) - c(0.01, 0.0)).norm() < 1e-15);
        assert!((g.eval(0.99) - c(-1.01, 0.0)).norm() < 1e-15);
        let interior: Vec<f64> = (1..200).map(|k| eps + (1.0 - 2.0 * eps) * k as f64 / 200.0).collect();
        for s in interior {
            let z = g.eval(s);
            assert!((z - c(0.0, 0.0)).norm() >= 0.5 * eps - 1e-12);
            assert!((z - c(-1.0, 0.0)).norm() >= 0.5 * eps - 1e-12);
        }
    }

    #[test]
    fn infeasible_epsilon() {
        let err = build_gamma(c(0.0, 0.0), c(1.0, 0.0), &[c(0.5, 0.1)], None, 0, 0.3).unwrap_err();
        assert!(matches!(err, Error::GeometryInfeasible(_)));
    }

    #[test]
    fn pochhammer_contour_is_branch_neutral() {
        let a = c(0.0, 0.0);
        let b = c(1.0, 0.0);
        let p = pochhammer_contour(a, b, 0.2).unwrap();
        assert!(p.is_closed());
        assert!(total_arg_change(&p, a).unwrap().abs() < 1e-12);
        assert!(total_arg_change(&p, b).unwrap().abs() < 1e-12);
        assert!(total_arg_change(&p, c(-0.7, 0.3)).unwrap().abs() < 1e-12);
        // individual loops do wind: the trace passes through ±2π
        let t = BranchTrace::principal(&p, a, 1).unwrap();
        let quarter = t.value_at(0.25);
        assert!(quarter.norm() > 0.0);
        assert!(pochhammer_contour(a, b, 0.3).is_err());
    }

    mod properties {
        use super::*;
        use crate::paths::Path;
        use proptest::prelude::*;

        fn point() -> impl Strategy<Value = C64> {
            (-2.0f64..3.0, -1.5f64..1.5).prop_map(|(x, y)| C64::new(x, y))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn gamma_meets_its_construction_conditions(l1 in point(), l2 in point(), end in point()) {
                let start = c(0.0, 0.0);
                let pts = [start, end, l1, l2];
                prop_assume!(min_pairwise_distance(&pts) > 0.05);
                let eps = default_epsilon(&pts);
                let base = build_gamma(start, end, &[l1, l2], Some(1), 0, eps).unwrap();
                let t1 = total_arg_change(&base, l1).unwrap();
                let t2 = total_arg_change(&base, l2).unwrap();
                for l in [-1i64, 0, 1, 2] {
                    let g = build_gamma(start, end, &[l1, l2], Some(1), l, eps).unwrap();
                    prop_assert!((g.start() - start).norm() < 1e-15 && (g.end() - end).norm() < 1e-12);
                    for o in [l1, l2] {
                        prop_assert!(g.distance_to(o) >= 0.5 * eps - 1e-12);
                    }
                    // unit-speed rays on [0, ε] and [1 − ε, 1]
                    let (d0, d1) = (g.derivative(&g.param(0.0)), g.derivative(&g.param(1.0)));
                    for k in 1..4 {
                        let s = eps * k as f64 / 4.0;
                        prop_assert!((g.eval(s) - start - s * d0).norm() < 1e-12);
                        prop_assert!((g.eval(1.0 - s) - end + s * d1).norm() < 1e-12);
                    }
                    prop_assert!((d0.norm() - 1.0).abs() < 1e-12 && (d1.norm() - 1.0).abs() < 1e-12);
                    let d2 = total_arg_change(&g, l2).unwrap() - t2;
                    prop_assert!((d2 - TAU * l as f64).abs() < 1e-9);
                    prop_assert!((total_arg_change(&g, l1).unwrap() - t1).abs() < 1e-9);
                }
            }

            #[test]
            fn arg_change_is_additive_under_concatenation(a in point(), m in point(), b in point(), o in point()) {
                prop_assume!((a - m).norm() > 0.1 && (m - b).norm() > 0.1);
                let p1 = Path::line(a, m).unwrap();
                let p2 = Path::line(m, b).unwrap();
                prop_assume!(p1.distance_to(o) > 0.05 && p2.distance_to(o) > 0.05);
                let whole = p1.concat(&p2).unwrap();
                let sum = total_arg_change(&p1, o).unwrap() + total_arg_change(&p2, o).unwrap();
                prop_assert!((total_arg_change(&whole, o).unwrap() - sum).abs() < 1e-12);
            }
        }
    }
}