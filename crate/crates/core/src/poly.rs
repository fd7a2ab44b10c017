//! Dense real polynomials, coefficients in descending powers.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linops::general_eig;

/// Drops leading zero coefficients (keeps at least one entry).
pub fn trim(p: &[f64]) -> Vec<f64> {
    let first = p.iter().position(|&c| c != 0.0).unwrap_or(p.len().saturating_sub(1));
    p[first.min(p.len())..].to_vec()
}

pub fn degree(p: &[f64]) -> usize {
    trim(p).len().saturating_sub(1)
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let len = a.len().max(b.len());
    let mut out = vec![0.0; len];
    for (k, &x) in a.iter().enumerate() {
        out[len - a.len() + k] += x;
    }
    for (k, &y) in b.iter().enumerate() {
        out[len - b.len() + k] += y;
    }
    out
}

pub fn scale(p: &[f64], s: f64) -> Vec<f64> {
    p.iter().map(|c| c * s).collect()
}

/// Coefficients of `p(-s)`.
pub fn reflect(p: &[f64]) -> Vec<f64> {
    let deg = p.len().saturating_sub(1);
    p.iter()
        .enumerate()
        .map(|(k, &c)| if (deg - k) % 2 == 1 { -c } else { c })
        .collect()
}

pub fn derivative(p: &[f64]) -> Vec<f64> {
    let deg = p.len().saturating_sub(1);
    if deg == 0 {
        return vec![0.0];
    }
    p[..deg]
        .iter()
        .enumerate()
        .map(|(k, &c)| c * (deg - k) as f64)
        .collect()
}

pub fn eval(p: &[f64], x: f64) -> f64 {
    p.iter().fold(0.0, |acc, &c| acc * x + c)
}

pub fn eval_complex(p: &[f64], z: Complex64) -> Complex64 {
    p.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Monic polynomial with the given roots. Roots must be closed under
/// conjugation for the result to be real; imaginary residue is dropped.
pub fn from_roots(roots: &[Complex64]) -> Vec<f64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, &v) in c.iter().enumerate() {
            next[k] += v;
            next[k + 1] -= v * r;
        }
        c = next;
    }
    c.into_iter().map(|v| v.re).collect()
}

/// Companion matrix of a polynomial (normalized to monic).
pub fn companion(p: &[f64]) -> Result<DMatrix<f64>> {
    let p = trim(p);
    if p.is_empty() || p[0] == 0.0 {
        return Err(Error::InvalidArgument("zero polynomial".into()));
    }
    let n = p.len() - 1;
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        m[(0, j)] = -p[j + 1] / p[0];
    }
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    Ok(m)
}

/// All complex roots via the companion matrix, refined by a few Newton steps.
pub fn roots(p: &[f64]) -> Result<Vec<Complex64>> {
    let p = trim(p);
    if p.is_empty() || p[0] == 0.0 {
        return Err(Error::InvalidArgument("zero polynomial has no finite root set".into()));
    }
    if p.len() == 1 {
        return Ok(Vec::new());
    }
    let comp = companion(&p)?;
    let raw = general_eig(&comp)?;
    let dp = derivative(&p);
    Ok(raw.values().iter().map(|&z| polish(&p, &dp, z)).collect())
}

fn polish(p: &[f64], dp: &[f64], mut z: Complex64) -> Complex64 {
    let mut best = eval_complex(p, z).norm();
    for _ in 0..4 {
        let d = eval_complex(dp, z);
        if d.norm() == 0.0 {
            break;
        }
        let cand = z - eval_complex(p, z) / d;
        let val = eval_complex(p, cand).norm();
        if !(val < best) {
            break;
        }
        best = val;
        z = cand;
    }
    if z.im.abs() <= 1e-14 * z.norm() {
        z.im = 0.0;
    }
    z
}
