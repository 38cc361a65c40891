use crate::{Error, Result, C64};

/// Thin singular value decomposition `M = U Σ Vᴴ` with singular values in
/// nonincreasing order.
#[derive(Clone, Debug)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    /// Columns are left singular vectors, stored as `u[k][row]`.
    pub u: Vec<Vec<C64>>,
    /// Columns are right singular vectors, stored as `v[k][col]`.
    pub v: Vec<Vec<C64>>,
}

const MAX_SWEEPS: usize = 80;

/// One-sided (Hestenes) Jacobi SVD of a dense row-major matrix.
///
/// Wide matrices are handled through their conjugate transpose so the
/// rotations act on the shorter dimension.
pub fn svd(rows: &[Vec<C64>]) -> Result<Svd> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if m == 0 || n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("matrix must be nonempty and rectangular".into()));
    }
    if rows.iter().flatten().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    if m < n {
        let t: Vec<Vec<C64>> = (0..n).map(|c| (0..m).map(|r| rows[r][c].conj()).collect()).collect();
        let s = tall_svd(&t);
        return Ok(Svd {
            singular_values: s.singular_values,
            u: s.v,
            v: s.u,
        });
    }
    Ok(tall_svd(rows))
}

fn tall_svd(rows: &[Vec<C64>]) -> Svd {
    let m = rows.len();
    let n = rows[0].len();
    // a[k] is column k of the working matrix, v[k] column k of the rotation
    let mut a: Vec<Vec<C64>> = (0..n).map(|c| rows.iter().map(|r| r[c]).collect()).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|c| (0..n).map(|r| if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect())
        .collect();
    let tol = f64::EPSILON * (m as f64).sqrt();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = a[p].iter().zip(&a[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = a
        .iter()
        .enumerate()
        .map(|(k, col)| (col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(), k))
        .collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0));

    let mut sv = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut vv = Vec::with_capacity(n);
    for (sigma, k) in order {
        sv.push(sigma);
        u.push(if sigma > 0.0 {
            a[k].iter().map(|z| z / sigma).collect()
        } else {
            vec![C64::new(0.0, 0.0); m]
        });
        vv.push(v[k].clone());
    }
    Svd {
        singular_values: sv,
        u,
        v: vv,
    }
}

/// Columns `(p, q) ← (p, q)·[[c, s·g], [−s·ḡ, c]]`.
fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, g: C64) {
    let (lo, hi) = cols.split_at_mut(q);
    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let (xp, yq) = (*x, *y);
        *x = c * xp - s * g.conj() * yq;
        *y = s * g * xp + c * yq;
    }
}

impl Svd {
    /// `‖M − UΣVᴴ‖_F / ‖M‖_F`.
    pub fn reconstruction_error(&self, rows: &[Vec<C64>]) -> f64 {
        let mut diff = 0.0;
        let mut total = 0.0;
        for (r, row) in rows.iter().enumerate() {
            for (c, m) in row.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..self.singular_values.len() {
                    acc += self.u[k][r] * self.singular_values[k] * self.v[k][c].conj();
                }
                diff += (m - acc).norm_sqr();
                total += m.norm_sqr();
            }
        }
        if total == 0.0 {
            diff.sqrt()
        } else {
            (diff / total).sqrt()
        }
    }
}
