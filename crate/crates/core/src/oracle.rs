//! Polynomial cross-checks for SISO spectral zeros: the even polynomial
//! `n(s)d(−s) + n(−s)d(s)`, its roots, Vieta-type identities and the
//! realness of zeros of `Σ q_k/(x² − p_k²)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{RationalFunction, Spectrum};
use crate::poly;

/// Relative size below which odd coefficients count as cancelled.
const ODD_CANCEL_TOL: f64 = 1e-12;

/// Relative tolerance of the identity checks.
pub const IDENTITY_TOL: f64 = 1e-8;

/// Polynomial in `s` with only even powers, stored as
/// `a_{2n}, a_{2n−2}, …, a_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenPolynomial {
    coeffs: Vec<f64>,
}

impl EvenPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyInput("even polynomial coefficients"));
        }
        Ok(EvenPolynomial { coeffs })
    }

    /// `a_{2n}, a_{2n−2}, …, a_0`; equivalently the coefficients of the
    /// polynomial in `x = s²`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree in `s`.
    pub fn degree(&self) -> usize {
        2 * (self.coeffs.len() - 1)
    }

    /// Dense coefficients in `s`, descending, odd entries zero.
    pub fn dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.degree() + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[2 * k] = c;
        }
        out
    }
}

/// `n(s)d(−s) + n(−s)d(s)`; odd coefficients (which cancel) are zeroed.
pub fn szp_polynomial(f: &RationalFunction) -> Result<EvenPolynomial> {
    let (n, d) = (f.num(), f.den());
    let full = poly::add(&poly::mul(n, &poly::reflect(d)), &poly::mul(&poly::reflect(n), d));
    let scale = full.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    let deg = full.len() - 1;
    let mut coeffs = Vec::with_capacity(deg / 2 + 1);
    for (k, &c) in full.iter().enumerate() {
        if (deg - k) % 2 == 1 {
            if c.abs() > ODD_CANCEL_TOL * scale {
                return Err(Error::Convergence(format!("odd coefficient {c:.3e} failed to cancel")));
            }
        } else {
            coeffs.push(c);
        }
    }
    EvenPolynomial::new(coeffs)
}

/// All `2n` roots: roots `x_j` of the polynomial in `x = s²`, then `±√x_j`.
pub fn szp_roots(p: &EvenPolynomial) -> Result<Spectrum> {
    if p.coeffs()[0] == 0.0 {
        return Err(Error::InvalidArgument(
            "leading coefficient of the even polynomial is zero".into(),
        ));
    }
    let xs = poly::roots(p.coeffs())?;
    let mut values = Vec::with_capacity(2 * xs.len());
    for x in xs {
        let r = x.sqrt();
        values.push(r);
        values.push(-r);
    }
    Ok(Spectrum::new(values))
}

/// All `2n` spectral zeros of `f` from its even polynomial.
pub fn oracle_spectral_zeros(f: &RationalFunction) -> Result<Spectrum> {
    szp_roots(&szp_polynomial(f)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VietaReport {
    /// `|μ_1⋯μ_n|` over the stable roots.
    pub product: f64,
    /// `√(p_1⋯p_n·z_1⋯z_n)`.
    pub product_expected: f64,
    /// `Σ μ_i²`.
    pub sum_of_squares: f64,
    /// `Σp_iΣz_i − Σ_{i<k}p_ip_k − Σ_{i<k}z_iz_k`.
    pub sum_of_squares_expected: f64,
    pub product_rel_err: f64,
    pub sum_rel_err: f64,
    pub holds: bool,
}

fn real_negative_roots(p: &[f64], what: &str) -> Result<Vec<f64>> {
    let roots = poly::roots(p)?;
    let scale = roots.iter().fold(1.0f64, |a, z| a.max(z.norm()));
    if let Some(z) = roots.iter().find(|z| z.im.abs() > 1e-8 * scale || z.re >= 0.0) {
        return Err(Error::InvalidPoles(format!(
            "{what} {}{:+}j is not real and negative",
            z.re, z.im
        )));
    }
    Ok(roots.iter().map(|z| z.re).collect())
}

fn pair_sum(v: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..v.len() {
        for k in (i + 1)..v.len() {
            s += v[i] * v[k];
        }
    }
    s
}

fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Product and sum-of-squares identities of the stable spectral zeros
/// against the poles and zeros of `f`.
pub fn vieta_checks(f: &RationalFunction) -> Result<VietaReport> {
    let p = real_negative_roots(f.den(), "pole")?;
    let z = real_negative_roots(f.num(), "zero")?;
    let mu = oracle_spectral_zeros(f)?;
    let stable = mu.stable();
    if stable.len() != f.degree() {
        return Err(Error::HalfPlaneCount {
            expected: f.degree(),
            found: stable.len(),
        });
    }
    let product = stable.iter().fold(Complex64::new(1.0, 0.0), |a, &m| a * m).norm();
    let product_expected = (p.iter().product::<f64>() * z.iter().product::<f64>()).sqrt();
    let sum_of_squares = stable.iter().map(|m| m * m).sum::<Complex64>().re;
    let sum_of_squares_expected = p.iter().sum::<f64>() * z.iter().sum::<f64>() - pair_sum(&p) - pair_sum(&z);
    let product_rel_err = rel_err(product, product_expected);
    let sum_rel_err = rel_err(sum_of_squares, sum_of_squares_expected);
    Ok(VietaReport {
        product,
        product_expected,
        sum_of_squares,
        sum_of_squares_expected,
        product_rel_err,
        sum_rel_err,
        holds: product_rel_err <= IDENTITY_TOL && sum_rel_err <= IDENTITY_TOL,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealZeroReport {
    /// Zeros of `Σ q_k/(x² − p_k²)`, from the cleared numerator.
    pub zeros: Vec<Complex64>,
    pub max_imag: f64,
    pub all_real: bool,
}

/// Zeros of `f(x) = Σ q_k/(x² − p_k²)` with `q_k > 0`, found as `±√y` for
/// the roots `y` of `Σ_k q_k Π_{j≠k}(y − p_j²)`.
pub fn real_zero_lemma_check(p: &[f64], q: &[f64]) -> Result<RealZeroReport> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} poles but {} weights",
            p.len(),
            q.len()
        )));
    }
    if p.is_empty() {
        return Err(Error::EmptyInput("weights"));
    }
    if let Some(bad) = q.iter().find(|&&v| !(v > 0.0)) {
        return Err(Error::InvalidArgument(format!("weights must be positive, got {bad}")));
    }
    let squares: Vec<Complex64> = p.iter().map(|v| Complex64::new(v * v, 0.0)).collect();
    let mut cleared = vec![0.0];
    for (k, &w) in q.iter().enumerate() {
        let others: Vec<Complex64> = squares
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, &s)| s)
            .collect();
        cleared = poly::add(&cleared, &poly::scale(&poly::from_roots(&others), w));
    }
    let ys = poly::roots(&cleared)?;
    let mut zeros = Vec::with_capacity(2 * ys.len());
    for y in ys {
        let r = y.sqrt();
        zeros.push(r);
        zeros.push(-r);
    }
    let scale = zeros.iter().fold(1.0f64, |a, z| a.max(z.norm()));
    let max_imag = zeros.iter().fold(0.0f64, |a, z| a.max(z.im.abs()));
    Ok(RealZeroReport {
        zeros,
        max_imag,
        all_real: max_imag <= 1e-8 * scale,
    })
}
