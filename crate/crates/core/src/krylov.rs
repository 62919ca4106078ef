//! Restarted GMRES for the dense nonsymmetric systems of the PACF solver.

use nalgebra::DMatrix;

pub(crate) struct GmresOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub rel_residual: f64,
    /// Smallest real part among the Ritz values of the first Arnoldi cycle.
    pub ritz_min_re: Option<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solves `A x = b` from `x = 0`, with `apply(v, out)` computing `out = A v`.
pub(crate) fn gmres<F>(
    mut apply: F,
    b: &[f64],
    rtol: f64,
    restart: usize,
    max_iter: usize,
) -> GmresOutcome
where
    F: FnMut(&[f64], &mut [f64]),
{
    let n = b.len();
    let bnorm = norm(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return GmresOutcome {
            x,
            iterations: 0,
            rel_residual: 0.0,
            ritz_min_re: None,
        };
    }
    let m = restart.max(1).min(n.max(1));
    let mut r = b.to_vec();
    let mut total = 0usize;
    let mut rel = 1.0;
    let mut ritz_min_re = None;
    let mut first_cycle = true;
    let mut tmp = vec![0.0; n];

    while total < max_iter {
        let beta = norm(&r);
        rel = beta / bnorm;
        if rel <= rtol {
            break;
        }
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        let mut h = vec![vec![0.0; m]; m + 1];
        let mut raw = if first_cycle {
            vec![vec![0.0; m]; m + 1]
        } else {
            Vec::new()
        };
        let mut cs = vec![0.0; m];
        let mut sn = vec![0.0; m];
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        let mut k_done = 0;
        for k in 0..m {
            if total >= max_iter {
                break;
            }
            apply(&basis[k], &mut tmp);
            total += 1;
            let mut w = tmp.clone();
            // Two passes of modified Gram–Schmidt.
            for _ in 0..2 {
                for (j, q) in basis.iter().enumerate() {
                    let c = dot(&w, q);
                    h[j][k] += c;
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi -= c * qi;
                    }
                }
            }
            let wn = norm(&w);
            h[k + 1][k] = wn;
            k_done = k + 1;
            if first_cycle {
                for j in 0..=k + 1 {
                    raw[j][k] = h[j][k];
                }
                if let Some(v) = ritz_min(&raw, k_done) {
                    ritz_min_re = Some(v);
                }
            }
            for j in 0..k {
                let t = cs[j] * h[j][k] + sn[j] * h[j + 1][k];
                h[j + 1][k] = -sn[j] * h[j][k] + cs[j] * h[j + 1][k];
                h[j][k] = t;
            }
            let denom = (h[k][k] * h[k][k] + h[k + 1][k] * h[k + 1][k]).sqrt();
            if denom == 0.0 {
                break;
            }
            cs[k] = h[k][k] / denom;
            sn[k] = h[k + 1][k] / denom;
            h[k][k] = denom;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            rel = g[k + 1].abs() / bnorm;
            if rel <= rtol || wn <= 1e-300 {
                break;
            }
            basis.push(w.iter().map(|v| v / wn).collect());
        }
        // Back substitution on the rotated triangle.
        let mut yv = vec![0.0; k_done];
        for i in (0..k_done).rev() {
            let mut s = g[i];
            for j in (i + 1)..k_done {
                s -= h[i][j] * yv[j];
            }
            yv[i] = s / h[i][i];
        }
        for (j, yj) in yv.iter().enumerate() {
            for (xi, qi) in x.iter_mut().zip(&basis[j]) {
                *xi += yj * qi;
            }
        }
        first_cycle = false;
        apply(&x, &mut tmp);
        for i in 0..n {
            r[i] = b[i] - tmp[i];
        }
        rel = norm(&r) / bnorm;
        if rel <= rtol {
            break;
        }
    }
    GmresOutcome {
        x,
        iterations: total,
        rel_residual: rel,
        ritz_min_re,
    }
}

/// Ritz values of the leading `k × k` block of the Arnoldi Hessenberg,
/// recomputed only at a few sizes.
fn ritz_min(h: &[Vec<f64>], k: usize) -> Option<f64> {
    if !(k == 8 || k == 24 || k == 48) {
        return None;
    }
    let mat = DMatrix::from_fn(k, k, |i, j| h[i][j]);
    mat.complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .reduce(f64::min)
}
