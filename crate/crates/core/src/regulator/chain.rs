use rayon::prelude::*;

use crate::algebra::{pochhammer, ratio, rational_to_f64};
use crate::paths::{BranchTrace, Path, PathParam};
use crate::periods::{Curve, ModelConfig};
use crate::quadrature::{Estimate, QuadPoint, QuadratureConfig, Rule};
use crate::{Error, Result, C64};

/// The path `γ_j^l`, its branch data and the sheet index of one 2-chain.
#[derive(Clone, Debug)]
pub struct TriangleChain {
    config: ModelConfig,
    j: usize,
    winding: i64,
    sheet: i64,
    rotated: bool,
    path: Path,
    lambda1: BranchTrace,
    lambda2: BranchTrace,
    c: Vec<BranchTrace>,
}

impl TriangleChain {
    /// Chain for `(j, l, i)`; the sheet factor `ζ^{Ai}` is applied to integrals.
    pub fn new(config: &ModelConfig, j: usize, winding: i64, sheet: i64) -> Result<Self> {
        let path = config.gamma(j, winding)?;
        Self::build(config, j, winding, sheet, path, false)
    }

    /// As [`new`](Self::new) with an explicit collar length.
    pub fn with_epsilon(
        config: &ModelConfig,
        j: usize,
        winding: i64,
        sheet: i64,
        eps: f64,
    ) -> Result<Self> {
        let path = config.gamma_with_epsilon(j, winding, eps)?;
        Self::build(config, j, winding, sheet, path, false)
    }

    /// Sheet `i` realized by rotating the seed of `(z − λ₂)^{1/N}` by `ζ^i`
    /// (the action of `σ^i` on `v`) instead of multiplying by `ζ^{Ai}`.
    pub fn rotated(config: &ModelConfig, j: usize, winding: i64, sheet: i64) -> Result<Self> {
        let path = config.gamma(j, winding)?;
        Self::build(config, j, winding, sheet, path, true)
    }

    fn build(
        config: &ModelConfig,
        j: usize,
        winding: i64,
        sheet: i64,
        path: Path,
        rotated: bool,
    ) -> Result<Self> {
        let n = config.cover_degree();
        let s1 = config.seeds(Curve::First);
        let s2 = config.seeds(Curve::Second);
        let rot = if rotated { sheet } else { 0 };
        let lambda1 = BranchTrace::continue_branch(&path, config.lambda1(), n, s1[0])?;
        let lambda2 =
            BranchTrace::continue_branch(&path, config.lambda2(), n, config.zeta_pow(rot) * s2[0])?;
        let end1 = lambda1.end_value()?;
        if (end1 - s1[j - 1]).norm() > 1e-9 * s1[j - 1].norm() {
            return Err(Error::BranchMismatch(format!(
                "(z − λ₁)^(1/N) arrives at {end1}, seed for c_{j} is {}",
                s1[j - 1]
            )));
        }
        let end2 = lambda2.end_value()?;
        let want2 = config.zeta_pow(winding + rot) * s2[j - 1];
        if (end2 - want2).norm() > 1e-9 * want2.norm() {
            return Err(Error::BranchMismatch(format!(
                "(z − λ₂)^(1/N) arrives at {end2}, expected ζ^l times the seed for c_{j}: {want2}"
            )));
        }
        let c = config
            .c()
            .iter()
            .map(|&ck| BranchTrace::principal(&path, ck, n))
            .collect::<Result<Vec<_>>>()?;
        let big = n as i64;
        Ok(TriangleChain {
            config: config.clone(),
            j,
            winding,
            sheet: sheet.rem_euclid(big),
            rotated,
            path,
            lambda1,
            lambda2,
            c,
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// Number of extra turns about `λ₂` built into the path.
    pub fn winding(&self) -> i64 {
        self.winding
    }

    /// `l mod N`.
    pub fn l(&self) -> i64 {
        self.winding.rem_euclid(self.config.cover_degree() as i64)
    }

    pub fn sheet(&self) -> i64 {
        self.sheet
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn lambda1_trace(&self) -> &BranchTrace {
        &self.lambda1
    }

    pub fn lambda2_trace(&self) -> &BranchTrace {
        &self.lambda2
    }

    /// `ζ^{Ai}` unless the sheet is already encoded in the seeds.
    pub fn sheet_factor(&self) -> C64 {
        if self.rotated {
            C64::new(1.0, 0.0)
        } else {
            self.config
                .zeta_pow(self.config.exponent() as i64 * self.sheet)
        }
    }

    /// Minimum distance from `λ` to the other marked points and to the path.
    pub fn clearance(&self, curve: Curve) -> f64 {
        let lambda = self.config.lambda(curve);
        let other = self.config.lambda(match curve {
            Curve::First => Curve::Second,
            Curve::Second => Curve::First,
        });
        self.config
            .c()
            .iter()
            .map(|c| (c - lambda).norm())
            .fold((other - lambda).norm(), f64::min)
            .min(self.path.distance_to(lambda))
    }

    /// Trace of `(z − λ')^{1/N}` with the seed moved continuously from `λ`.
    pub(crate) fn moved_trace(&self, curve: Curve, lambda: C64) -> Result<BranchTrace> {
        let n = self.config.cover_degree();
        let base = match curve {
            Curve::First => &self.lambda1,
            Curve::Second => &self.lambda2,
        };
        let start = self.path.start();
        let old = self.config.lambda(curve);
        let seed = base.start_value()? * principal_root((start - lambda) / (start - old), n);
        BranchTrace::continue_branch(&self.path, lambda, n, seed)
    }

    fn c_power(&self, q: &PathParam, m: i64) -> C64 {
        self.c.iter().map(|t| t.power(q, m)).product()
    }

    /// `γ'(s)/f(γ(s))^{A/N}`.
    fn f_integrand(&self, t1: &BranchTrace, q: &PathParam) -> C64 {
        let a = self.config.exponent() as i64;
        self.path.derivative(q) * t1.power(q, -a) * self.c_power(q, -a)
    }

    /// `γ'(s)/g(γ(s))^{(N−A)/N}`.
    fn g_integrand(&self, t2: &BranchTrace, q: &PathParam) -> C64 {
        let b = (self.config.cover_degree() - self.config.exponent()) as i64;
        self.path.derivative(q) * t2.power(q, -b) * self.c_power(q, -b)
    }
}

/// `(p/q)_k` as a float.
pub(crate) fn poch_ratio(p: i64, q: i64, k: u32) -> f64 {
    rational_to_f64(&pochhammer(&ratio(p, q), k))
}

fn principal_root(z: C64, n: u32) -> C64 {
    C64::from_polar(z.norm().powf(1.0 / n as f64), z.arg() / n as f64)
}

/// Which variable is integrated innermost.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ordering {
    /// `∫ F(s₁) [∫_0^{s₁} G] ds₁`
    InnerS2,
    /// `∫ G(s₂) [∫_{s₂}^1 F] ds₂`
    InnerS1,
}

struct OuterNode {
    q: PathParam,
    weight: f64,
    inner: C64,
}

fn params(path: &Path, rule: &Rule, k: usize) -> Vec<(PathParam, f64)> {
    let p = &path.pieces()[k];
    rule.points(p.s0, p.s1)
        .map(|x| {
            (
                PathParam {
                    piece: k,
                    s: x.x,
                    from_start: x.from_a,
                    from_end: x.from_b,
                },
                x.weight,
            )
        })
        .collect()
}

/// Inner nodes on very short intervals can underflow onto the interval
/// ends; their weights underflow with them and they are dropped.
fn resolved(x: &QuadPoint) -> bool {
    x.weight > 0.0 && x.from_a > 0.0 && x.from_b > 0.0
}

/// Outer nodes with the cached inner integral: `∫_0^{s} h` (`upper = false`)
/// or `∫_s^1 h` (`upper = true`). Each inner integral stays inside one piece
/// and is taken from whichever piece end is nearer to `s`.
fn outer_nodes<H>(path: &Path, rule: &Rule, h: H, upper: bool) -> Vec<OuterNode>
where
    H: Fn(&PathParam) -> C64 + Sync,
{
    let pieces = path.pieces();
    let totals: Vec<C64> = (0..pieces.len())
        .into_par_iter()
        .map(|k| {
            params(path, rule, k)
                .iter()
                .map(|(q, w)| h(q) * w)
                .sum::<C64>()
        })
        .collect();
    let mut out = Vec::new();
    for k in 0..pieces.len() {
        let (s0, s1) = (pieces[k].s0, pieces[k].s1);
        let before: C64 = totals[..k].iter().sum();
        let after: C64 = totals[k + 1..].iter().sum();
        let nodes: Vec<OuterNode> = params(path, rule, k)
            .into_par_iter()
            .map(|(q, weight)| {
                // ∫_{s0}^{s} h and ∫_{s}^{s1} h on the same piece
                let left = |q: &PathParam| -> C64 {
                    rule.points(s0, q.s)
                        .filter(resolved)
                        .map(|x| {
                            let r = PathParam {
                                piece: k,
                                s: x.x,
                                from_start: x.from_a,
                                from_end: x.from_b + q.from_end,
                            };
                            h(&r) * x.weight
                        })
                        .sum()
                };
                let right = |q: &PathParam| -> C64 {
                    rule.points(q.s, s1)
                        .filter(resolved)
                        .map(|x| {
                            let r = PathParam {
                                piece: k,
                                s: x.x,
                                from_start: q.from_start + x.from_a,
                                from_end: x.from_b,
                            };
                            h(&r) * x.weight
                        })
                        .sum()
                };
                let near_start = q.from_start <= q.from_end;
                let inner = match (upper, near_start) {
                    (false, true) => before + left(&q),
                    (false, false) => before + totals[k] - right(&q),
                    (true, true) => after + totals[k] - left(&q),
                    (true, false) => after + right(&q),
                };
                OuterNode { q, weight, inner }
            })
            .collect();
        out.extend(nodes);
    }
    out
}

/// The triangle integral as a function of one `λ`, with the inner integral
/// over the other variable cached at the outer nodes.
pub struct KFunction<'a> {
    chain: &'a TriangleChain,
    curve: Curve,
    nodes: Vec<OuterNode>,
}

impl<'a> KFunction<'a> {
    /// `curve = First` varies `λ₁` (inner integral over `s₂`), `Second` varies `λ₂`.
    pub fn new(chain: &'a TriangleChain, curve: Curve, rule: &Rule) -> Self {
        let nodes = match curve {
            Curve::First => outer_nodes(
                &chain.path,
                rule,
                |q| chain.g_integrand(&chain.lambda2, q),
                false,
            ),
            Curve::Second => outer_nodes(
                &chain.path,
                rule,
                |q| chain.f_integrand(&chain.lambda1, q),
                true,
            ),
        };
        KFunction {
            chain,
            curve,
            nodes,
        }
    }

    fn sum_with(&self, trace: &BranchTrace) -> C64 {
        let ch = self.chain;
        let outer = |q: &PathParam| match self.curve {
            Curve::First => ch.f_integrand(trace, q),
            Curve::Second => ch.g_integrand(trace, q),
        };
        let mut acc = C64::new(0.0, 0.0);
        for n in &self.nodes {
            acc += outer(&n.q) * n.inner * n.weight;
        }
        acc * ch.sheet_factor()
    }

    /// Value at the chain's own `λ`.
    pub fn value(&self) -> C64 {
        let t = match self.curve {
            Curve::First => &self.chain.lambda1,
            Curve::Second => &self.chain.lambda2,
        };
        self.sum_with(t)
    }

    /// Value with `λ` (of the selected curve) moved to `lambda`, path fixed.
    pub fn eval(&self, lambda: C64) -> Result<C64> {
        let t = self.chain.moved_trace(self.curve, lambda)?;
        Ok(self.sum_with(&t))
    }
}

/// `ζ^{Ai} ∫_Δ γ'(s₁)γ'(s₂) ds₁ds₂ / (f(γ(s₁))^{A/N} g(γ(s₂))^{(N−A)/N})`
/// over `Δ = {0 < s₂ ≤ s₁ < 1}`, with the level-below value as error estimate.
pub fn double_integral_k(chain: &TriangleChain, quad: &QuadratureConfig) -> Result<Estimate> {
    double_integral_k_ordered(chain, quad, Ordering::InnerS2)
}

pub fn double_integral_k_ordered(
    chain: &TriangleChain,
    quad: &QuadratureConfig,
    ordering: Ordering,
) -> Result<Estimate> {
    quad.validate()?;
    let curve = match ordering {
        Ordering::InnerS2 => Curve::First,
        Ordering::InnerS1 => Curve::Second,
    };
    let fine = KFunction::new(chain, curve, &quad.rule()).value();
    let coarse = KFunction::new(chain, curve, &quad.coarse_rule()).value();
    finite(fine)?;
    Estimate {
        value: fine,
        error: (fine - coarse).norm(),
    }
    .check(quad.tolerance)
}

fn finite(v: C64) -> Result<()> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(())
    } else {
        Err(Error::SingularityOnPath("non-finite integral".into()))
    }
}

fn path_integral<H>(path: &Path, quad: &QuadratureConfig, h: H) -> Result<Estimate>
where
    H: Fn(&PathParam) -> C64,
{
    let mut fine = C64::new(0.0, 0.0);
    let mut coarse = C64::new(0.0, 0.0);
    for (rule, acc) in [(quad.rule(), &mut fine), (quad.coarse_rule(), &mut coarse)] {
        for k in 0..path.pieces().len() {
            for (q, w) in params(path, &rule, k) {
                *acc += h(&q) * w;
            }
        }
    }
    finite(fine)?;
    Estimate {
        value: fine,
        error: (fine - coarse).norm(),
    }
    .check(quad.tolerance)
}

/// The boundary integral left after Stokes' theorem.
///
/// `First`: `(A/N)_{n−1} ∫ γ' ds / ((γ−λ₁)^{n−1} (γ−λ₁)^{A/N} (γ−λ₂)^{(N−A)/N})`.
/// `Second`: `−((N−A)/N)_{n−1} ∫ γ' ds / ((γ−λ₂)^{n−1} (γ−λ₂)^{(N−A)/N} (γ−λ₁)^{A/N})`.
/// Both carry the sheet factor.
pub fn stokes_reduced_integral(
    chain: &TriangleChain,
    curve: Curve,
    quad: &QuadratureConfig,
) -> Result<Estimate> {
    quad.validate()?;
    let cfg = &chain.config;
    let big = cfg.cover_degree() as i64;
    let a = cfg.exponent() as i64;
    let n = cfg.n() as u32;
    let (lead, main, other, e_main, e_other, sign) = match curve {
        Curve::First => (a, &chain.lambda1, &chain.lambda2, a, big - a, 1.0),
        Curve::Second => (big - a, &chain.lambda2, &chain.lambda1, big - a, a, -1.0),
    };
    let poch = poch_ratio(lead, big, n - 1);
    let shift = big * (n as i64 - 1);
    let est = path_integral(&chain.path, quad, |q| {
        chain.path.derivative(q) * main.power(q, -(shift + e_main)) * other.power(q, -e_other)
    })?;
    let f = chain.sheet_factor() * poch * sign;
    Ok(Estimate {
        value: est.value * f,
        error: est.error * f.norm(),
    })
}

/// The same boundary integral after the substitution `u = (γ−λ₂)^{1/N}/(γ−λ₁)^{1/N}`
/// (`First`) or its reciprocal (`Second`), integrated numerically along `u(s)`.
///
/// `First`: `−N/(λ₁−λ₂)^{n−1} (A/N)_{n−1} ∫ (u^N−1)^{n−2} u^{A−1} du`.
/// `Second`: `N/(λ₂−λ₁)^{n−1} ((N−A)/N)_{n−1} ∫ (w^N−1)^{n−2} w^{N−A−1} dw`.
pub fn u_substitution_integral(
    chain: &TriangleChain,
    curve: Curve,
    quad: &QuadratureConfig,
) -> Result<Estimate> {
    quad.validate()?;
    let cfg = &chain.config;
    let big = cfg.cover_degree();
    let a = cfg.exponent() as i64;
    let n = cfg.n();
    let (l1, l2) = (cfg.lambda1(), cfg.lambda2());
    let (num, den, lead, pre) = match curve {
        Curve::First => (
            &chain.lambda2,
            &chain.lambda1,
            a,
            -(big as f64) / (l1 - l2).powi(n as i32 - 1),
        ),
        Curve::Second => (
            &chain.lambda1,
            &chain.lambda2,
            big as i64 - a,
            big as f64 / (l2 - l1).powi(n as i32 - 1),
        ),
    };
    let (pnum, pden) = (num.base(), den.base());
    let est = path_integral(&chain.path, quad, |q| {
        let u = num.value(q) / den.value(q);
        let g = chain.path.point(q);
        let dz = chain.path.derivative(q);
        let du = u / big as f64 * (dz / (g - pnum) - dz / (g - pden));
        (u.powu(big) - 1.0).powi(n as i32 - 2) * u.powi(lead as i32 - 1) * du
    })?;
    let poch = poch_ratio(lead, big as i64, n as u32 - 1);
    let f = chain.sheet_factor() * pre * poch;
    Ok(Estimate {
        value: est.value * f,
        error: est.error * f.norm(),
    })
}
