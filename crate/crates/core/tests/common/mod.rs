//! Independent reference implementations shared by the integration tests
//! and the acceptance gate.
#![allow(dead_code)]

use num::{BigRational, One, ToPrimitive, Zero};

pub const POLY5: [f64; 6] = [-1.0, -6.0, 5.0, 5.0, -5.0, 1.0];
pub const POLY9: [f64; 10] = [0.0, -11.0, -25.0, 13.0, 44.0, 1.0, -21.0, -4.5, 3.0, 1.0];

pub fn ulp(x: f64) -> f64 {
    let a = x.abs();
    f64::from_bits(a.to_bits() + 1) - a
}

/// Σ|aᵢ||x|ⁱ: the magnitude at which a polynomial is evaluated in floating
/// point. Near a root the value itself is far smaller than any f64 rounding
/// of the terms, so errors are counted in ulps of this scale.
pub fn poly_scale(c: &[f64], x: f64) -> f64 {
    c.iter().enumerate().map(|(k, a)| a.abs() * x.abs().powi(k as i32)).sum()
}

pub fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

/// Correctly rounded value of `Σ cᵢ xⁱ`, computed in exact rationals.
pub fn poly_exact(c: &[f64], x: f64) -> f64 {
    let xr = rat(x);
    let mut acc = BigRational::zero();
    let mut p = BigRational::one();
    for &a in c {
        acc += rat(a) * &p;
        p *= &xr;
    }
    acc.to_f64().unwrap()
}

pub fn poly_power_sum(c: &[f64], x: f64) -> f64 {
    c.iter().enumerate().map(|(k, a)| a * x.powi(k as i32)).sum()
}

pub fn poly5_factored(x: f64) -> f64 {
    x * (x - 1.0) * (x + 1.0) * (x - 2.0) * (x - 3.0) - 1.0
}

/// Largest `|f − oracle|` in ulps of the evaluation scale over `n` points.
pub fn worst_poly_ulps(f: fn(f64) -> f64, oracle: impl Fn(f64) -> f64, c: &[f64], (lo, hi): (f64, f64), n: usize) -> f64 {
    (0..n)
        .map(|i| {
            let u = i as f64 / (n - 1) as f64;
            let x = lo * (1.0 - u) + hi * u;
            (f(x) - oracle(x)).abs() / ulp(poly_scale(c, x))
        })
        .fold(0.0, f64::max)
}

/// Least squares by Householder QR. `a` holds `m ≥ n` rows of length `n`.
pub fn householder_lstsq(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let m = a.len();
    let n = a[0].len();
    for j in 0..n {
        let norm = (j..m).map(|i| a[i][j] * a[i][j]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..m).map(|i| a[i][j]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        for k in j..n {
            let f = 2.0 * (j..m).map(|i| v[i - j] * a[i][k]).sum::<f64>() / vv;
            for (row, vi) in a[j..m].iter_mut().zip(&v) {
                row[k] -= f * vi;
            }
        }
        let f = 2.0 * (j..m).map(|i| v[i - j] * b[i]).sum::<f64>() / vv;
        for i in j..m {
            b[i] -= f * v[i - j];
        }
    }
    let mut x = vec![0.0; n];
    for j in (0..n).rev() {
        let s: f64 = (j + 1..n).map(|k| a[j][k] * x[k]).sum();
        x[j] = (b[j] - s) / a[j][j];
    }
    x
}

/// Ridge with a free intercept as the stacked problem
/// `[X 1; √α·I 0]·[w; b] ≈ [y; 0]`. `rows` are the rows of X.
pub fn ridge_oracle<'a>(rows: impl Iterator<Item = &'a [f64]>, y: &[f64], alpha: f64) -> (Vec<f64>, f64) {
    let mut a: Vec<Vec<f64>> = rows.map(|r| r.iter().copied().chain(std::iter::once(1.0)).collect()).collect();
    let p = a[0].len() - 1;
    let mut rhs = y.to_vec();
    for j in 0..p {
        let mut r = vec![0.0; p + 1];
        r[j] = alpha.sqrt();
        a.push(r);
        rhs.push(0.0);
    }
    let mut sol = householder_lstsq(a, rhs);
    let b = sol.pop().unwrap();
    (sol, b)
}
