//! Small numerical building blocks shared by the modules: compensated
//! summation, power-series arithmetic and Gauss–Legendre rules.

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// Compensated dot product.
pub fn compensated_dot(a: &[f64], b: &[f64]) -> f64 {
    compensated_sum(a.iter().zip(b).map(|(x, y)| x * y))
}

/// Truncated product of two power series, keeping `len` coefficients.
pub fn series_mul(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Divides the power series `num` by the polynomial `den` (with `den[0] != 0`),
/// as the linear recurrence `out[n] = (num[n] - sum_{j>=1} den[j] out[n-j]) / den[0]`.
pub fn series_div_poly(num: &[f64], den: &[f64], len: usize) -> Vec<f64> {
    let d0 = den[0];
    let mut out = vec![0.0; len];
    for n in 0..len {
        let mut acc = num.get(n).copied().unwrap_or(0.0);
        for (j, &dj) in den.iter().enumerate().skip(1) {
            if j > n {
                break;
            }
            acc -= dj * out[n - j];
        }
        out[n] = acc / d0;
    }
    out
}

/// Reciprocal of a power series with nonzero constant term.
pub fn series_reciprocal(a: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    if len == 0 {
        return out;
    }
    let inv0 = 1.0 / a[0];
    out[0] = inv0;
    for n in 1..len {
        let mut acc = CompensatedSum::new();
        for k in 1..=n.min(a.len() - 1) {
            acc.add(a[k] * out[n - k]);
        }
        out[n] = -acc.value() * inv0;
    }
    out
}

/// `exp(g(z))` for a power series `g`, by `n e_n = sum_{k=1}^n k g_k e_{n-k}`.
pub fn series_exp(g: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    if len == 0 {
        return out;
    }
    out[0] = g.first().copied().unwrap_or(0.0).exp();
    for n in 1..len {
        let mut acc = CompensatedSum::new();
        for k in 1..=n.min(g.len().saturating_sub(1)) {
            acc.add(k as f64 * g[k] * out[n - k]);
        }
        out[n] = acc.value() / n as f64;
    }
    out
}

/// Coefficients of `(1 - z)^{-e}` by the ratio recursion
/// `t_0 = 1`, `t_n = t_{n-1} (n - 1 + e) / n`.
pub fn binomial_series(e: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut t = 1.0;
    for n in 0..len {
        if n > 0 {
            t *= (n as f64 - 1.0 + e) / n as f64;
        }
        out.push(t);
    }
    out
}

/// Evaluates a polynomial with ascending coefficients.
pub fn poly_eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|v| v * half).collect(),
    )
}

/// `∫_a^∞ t^{-p1} (t + shift)^{-p2} dt` for `a > 0`, `shift >= 0` and
/// `p1 + p2 > 1`.
///
/// With `e = p1 + p2 - 1` the substitution `t = a w^{-1/e}` turns this into
/// `a^{-e}/e ∫_0^1 (1 + shift w^{1/e} / a)^{-p2} dw`, which has a bounded
/// integrand.
pub fn power_tail_integral(a: f64, shift: f64, p1: f64, p2: f64) -> f64 {
    let e = p1 + p2 - 1.0;
    assert!(e > 0.0 && a > 0.0, "tail integral diverges");
    let scale = a.powf(-e) / e;
    if shift == 0.0 {
        return scale;
    }
    let (x, w) = gauss_legendre_on(48, 0.0, 1.0);
    let body: f64 = x
        .iter()
        .zip(&w)
        .map(|(&t, &wt)| wt * (1.0 + shift * t.powf(1.0 / e) / a).powf(-p2))
        .sum();
    scale * body
}
