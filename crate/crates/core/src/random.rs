//! Seeded generators of random test systems.
//!
//! Used by the property tests, the acceptance suite and the benchmarks.
//! Every generator is deterministic given the RNG state.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::interlace::inverse_system;
use crate::linops;
use crate::model::{PortSign, RationalFunction, Realization};

/// A biproper SISO function with strictly interlaced negative poles and zeros.
#[derive(Debug, Clone)]
pub struct ZipSample {
    pub f: RationalFunction,
    /// Ascending.
    pub poles: Vec<f64>,
    /// Ascending.
    pub zeros: Vec<f64>,
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// `count` values log-uniform in `[lo, hi]`, ascending, with consecutive
/// ratios at least `1 + min_rel_gap`.
fn separated_magnitudes<R: Rng + ?Sized>(rng: &mut R, count: usize, lo: f64, hi: f64, min_rel_gap: f64) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..count).map(|_| log_uniform(rng, lo, hi)).collect();
        v.sort_by(f64::total_cmp);
        if v.windows(2).all(|w| w[1] >= w[0] * (1.0 + min_rel_gap)) {
            return v;
        }
    }
}

/// Orders `1..=max_order`, magnitudes log-uniform in `[0.1, 10]`, random
/// orientation and gain.
pub fn zip_function<R: Rng + ?Sized>(rng: &mut R, max_order: usize) -> ZipSample {
    let n = rng.random_range(1..=max_order.max(1));
    let mut values: Vec<f64> = separated_magnitudes(rng, 2 * n, 0.1, 10.0, 0.01)
        .into_iter()
        .map(|v| -v)
        .collect();
    values.sort_by(f64::total_cmp);
    let zeros_first = rng.random_bool(0.5);
    let (mut zeros, mut poles) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for (k, v) in values.into_iter().enumerate() {
        if (k % 2 == 0) == zeros_first {
            zeros.push(v);
        } else {
            poles.push(v);
        }
    }
    let gain = log_uniform(rng, 0.2, 5.0);
    let f = RationalFunction::from_roots(gain, &zeros, &poles).expect("interlaced data is biproper");
    ZipSample { f, poles, zeros }
}

fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    gaussian(rng, n, n).qr().q()
}

fn random_spd<R: Rng + ?Sized>(rng: &mut R, m: usize) -> DMatrix<f64> {
    let g = gaussian(rng, m, m);
    let scale = log_uniform(rng, 0.3, 3.0);
    (&g * g.transpose() / m as f64 + DMatrix::identity(m, m) * 0.2) * scale
}

/// Largest accepted ratio of extreme Hankel singular values in
/// [`symmetric_system`]. Beyond this the extremal storages become too
/// ill-conditioned for `K_max·K_min = I` to be checked at `1e−8`.
pub const MAX_HANKEL_SPREAD_SYMMETRIC: f64 = 1e5;

/// Same bound for [`strictly_passive_system`]. Tighter, since the
/// quasi-balanced Form-II storage `diag(σ⁻)` spreads like its square.
pub const MAX_HANKEL_SPREAD: f64 = 3e2;

/// Rescales `b` so that `‖Bᵀ(−A)⁻¹B‖ = ratio·‖D‖`; keeps the dynamic part
/// of `G(0) = D + Bᵀ(−A)⁻¹B` comparable to the feedthrough.
fn balance_gain(a: &DMatrix<f64>, b: DMatrix<f64>, d: &DMatrix<f64>, ratio: f64) -> DMatrix<f64> {
    let Some(x) = (-a).lu().solve(&b) else {
        return b;
    };
    let g = (b.transpose() * x).norm();
    if g > 0.0 {
        b * (ratio * d.norm() / g).sqrt()
    } else {
        b
    }
}

/// Ratio of the largest to the smallest Hankel singular value of
/// `(a, b, bᵀ)`.
fn hankel_spread(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let bbt = -(b * b.transpose());
    let (Ok(p), Ok(q)) = (linops::lyapunov(&a.transpose(), &bbt), linops::lyapunov(a, &bbt)) else {
        return f64::INFINITY;
    };
    let Ok(spectrum) = linops::general_eig(&(p * q)) else {
        return f64::INFINITY;
    };
    let re = spectrum.real_parts();
    let (lo, hi) = re
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if lo > 0.0 {
        (hi / lo).sqrt()
    } else {
        f64::INFINITY
    }
}

/// Symmetric strictly passive realization with `2 ≤ n ≤ max_order`,
/// `1 ≤ m ≤ min(3, n−1)`, distinct stable poles and `B = ±Cᵀ`. Draws whose
/// Hankel spread exceeds [`MAX_HANKEL_SPREAD_SYMMETRIC`] are redrawn.
pub fn symmetric_system<R: Rng + ?Sized>(rng: &mut R, max_order: usize, sign: PortSign) -> Realization {
    let (a, b, d) = loop {
        let n = rng.random_range(2..=max_order.max(2));
        let m = rng.random_range(1..=(n - 1).min(3));
        let lambdas = separated_magnitudes(rng, n, 0.1, 10.0, 0.02);
        let q = random_orthogonal(rng, n);
        let a = &q * DMatrix::from_diagonal(&DVector::from_iterator(n, lambdas.iter().map(|l| -l))) * q.transpose();
        let a = (&a + a.transpose()) * 0.5;
        let d = random_spd(rng, m);
        let ratio = log_uniform(rng, 0.2, 5.0);
        let b = balance_gain(&a, gaussian(rng, n, m), &d, ratio);
        if hankel_spread(&a, &b) <= MAX_HANKEL_SPREAD_SYMMETRIC {
            break (a, b, d);
        }
    };
    let plus = Realization::new(a, b.clone(), b.transpose(), d).expect("consistent dimensions");
    match sign {
        PortSign::Plus => plus,
        PortSign::Minus => {
            let y = inverse_system(&plus).expect("D is positive definite");
            // clean the roundoff asymmetry of the inverse
            let a = (y.a() + y.a().transpose()) * 0.5;
            let d = (y.d() + y.d().transpose()) * 0.5;
            let b = y.b().clone();
            Realization::new(a, b.clone(), -b.transpose(), d).expect("consistent dimensions")
        }
    }
}

/// Strictly passive realization without symmetry: `A = −(SSᵀ + αI) + W`
/// with `W` skew, `C = Bᵀ`, `D` positive definite (so `K = I` is a strict
/// storage), followed by a random well-conditioned state transform. Draws
/// whose Hankel spread exceeds [`MAX_HANKEL_SPREAD`] are redrawn.
pub fn strictly_passive_system<R: Rng + ?Sized>(rng: &mut R, max_order: usize) -> Realization {
    let base = loop {
        let n = rng.random_range(2..=max_order.max(2));
        let m = rng.random_range(1..=(n - 1).min(3));
        let s = gaussian(rng, n, n) / (n as f64).sqrt();
        let w = gaussian(rng, n, n);
        let skew = (&w - w.transpose()) * 0.5;
        let alpha = log_uniform(rng, 0.1, 1.0);
        let a = -(&s * s.transpose() + DMatrix::identity(n, n) * alpha) + skew;
        let d = random_spd(rng, m);
        let ratio = log_uniform(rng, 0.2, 5.0);
        let b = balance_gain(&a, gaussian(rng, n, m), &d, ratio);
        if hankel_spread(&a, &b) <= MAX_HANKEL_SPREAD {
            break Realization::new(a, b.clone(), b.transpose(), d).expect("consistent dimensions");
        }
    };
    let n = base.n();
    let t = DMatrix::identity(n, n) + gaussian(rng, n, n) * (0.3 / (n as f64).sqrt());
    base.transform(&t).unwrap_or(base)
}
