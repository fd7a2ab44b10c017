//! System zeros, pole/zero interlacing (ZIP) certificates, spectral-zero
//! sandwich checks, the gap condition on the poles and the feed-through
//! scaling scan.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linops;
use crate::model::{order_reals, OrderedReals, PortSign, Realization, Spectrum, SYMMETRY_TOL};
use crate::passivity;

/// Relative tolerance under which two chain entries count as touching.
pub const VERGE_TOL: f64 = 1e-6;

/// Relative tolerance for the spectral-zero sandwich inequalities.
pub const SANDWICH_TOL: f64 = 1e-8;

/// Relative tolerance on imaginary parts of spectra expected to be real.
pub const REALNESS_TOL: f64 = 1e-8;

/// Relative spacing below which poles count as repeated.
pub const REPEATED_POLE_TOL: f64 = 1e-8;

/// Relative threshold of the PBH controllability test.
pub const PBH_TOL: f64 = 1e-8;

/// Relative width at which the threshold bisection stops.
pub const BISECTION_WIDTH: f64 = 1e-3;

/// `Σ_Y = (A − BD⁻¹C, BD⁻¹, −D⁻¹C, D⁻¹)`, a realization of `G(s)⁻¹`.
pub fn inverse_system(r: &Realization) -> Result<Realization> {
    let d_inv = r.d().clone().try_inverse().ok_or(Error::Singular("D"))?;
    let b_y = r.b() * &d_inv;
    let c_y = -(&d_inv * r.c());
    let a_y = r.a() - &b_y * r.c();
    Realization::new(a_y, b_y, c_y, d_inv)
}

/// Poles of `G(s)⁻¹`: `λ(A − BD⁻¹C)`.
pub fn system_zeros(r: &Realization) -> Result<Spectrum> {
    linops::general_eig(inverse_system(r)?.a())
}

/// System poles `λ(A)`.
pub fn system_poles(r: &Realization) -> Result<Spectrum> {
    linops::general_eig(r.a())
}

/// Real parts of a spectrum that must be real, ascending.
pub fn real_values(s: &Spectrum) -> Result<OrderedReals> {
    let scale = s.values().iter().fold(1.0f64, |a, z| a.max(z.norm()));
    let max_imag = s.max_imag();
    if max_imag > REALNESS_TOL * scale {
        return Err(Error::NonRealSpectralZeros { max_imag });
    }
    order_reals(&s.real_parts())
}

/// Orientation of a strict pole/zero interlacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `z_1 < p_1 < z_2 < … < z_n < p_n`
    ZerosFirst,
    /// `p_1 < z_1 < p_2 < … < p_n < z_n`
    PolesFirst,
    None,
}

impl Orientation {
    pub fn name(self) -> &'static str {
        match self {
            Orientation::ZerosFirst => "zip_z_before_p",
            Orientation::PolesFirst => "zip_p_before_z",
            Orientation::None => "none",
        }
    }
}

/// Pole/zero interlacing certificate, optionally with the spectral-zero
/// sandwich `z_i ≤ μ_i ≤ p_i` (or reversed).
#[derive(Debug, Clone, PartialEq)]
pub struct InterlacingReport {
    pub poles: OrderedReals,
    pub zeros: OrderedReals,
    pub stable_spectral: Option<OrderedReals>,
    /// Set only when the chain holds strictly.
    pub orientation: Orientation,
    pub strict: bool,
    /// The best chain touches (some gap within the verge tolerance).
    pub verge: bool,
    /// Smallest gap of the better of the two candidate chains; negative when
    /// the chain is violated.
    pub zip_margin: f64,
    pub sandwich: Vec<bool>,
    /// Per-index slack of the sandwich inequalities.
    pub margins: Vec<f64>,
    /// Strict chain through zeros, spectral zeros and poles; present only
    /// when the ZIP chain itself is strict.
    pub full_chain: Option<bool>,
}

impl InterlacingReport {
    pub fn remark(&self) -> &'static str {
        if self.strict {
            "interlaced"
        } else if self.verge {
            "verge-of interlaced"
        } else {
            "not interlaced"
        }
    }

    pub fn sandwich_holds(&self) -> bool {
        !self.sandwich.is_empty() && self.sandwich.iter().all(|&b| b)
    }

    pub fn min_margin(&self) -> Option<f64> {
        self.margins.iter().copied().reduce(f64::min)
    }
}

fn chain_gap(first: &[f64], second: &[f64]) -> f64 {
    let chain: Vec<f64> = first.iter().zip(second).flat_map(|(&a, &b)| [a, b]).collect();
    chain.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

/// Decides strict interlacing of poles and zeros and its orientation.
pub fn zip_check(poles: &OrderedReals, zeros: &OrderedReals) -> Result<InterlacingReport> {
    if poles.len() != zeros.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} poles but {} zeros",
            poles.len(),
            zeros.len()
        )));
    }
    let (p, z) = (poles.values(), zeros.values());
    let scale = p.iter().chain(z).fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = VERGE_TOL * scale.max(f64::MIN_POSITIVE);
    let zeros_first = chain_gap(z, p);
    let poles_first = chain_gap(p, z);
    let (gap, candidate) = if zeros_first >= poles_first {
        (zeros_first, Orientation::ZerosFirst)
    } else {
        (poles_first, Orientation::PolesFirst)
    };
    let strict = gap > tol;
    Ok(InterlacingReport {
        poles: poles.clone(),
        zeros: zeros.clone(),
        stable_spectral: None,
        orientation: if strict { candidate } else { Orientation::None },
        strict,
        verge: gap.abs() <= tol,
        zip_margin: gap,
        sandwich: Vec::new(),
        margins: Vec::new(),
        full_chain: None,
    })
}

fn require_symmetric(r: &Realization) -> Result<PortSign> {
    let cert = r.symmetry(SYMMETRY_TOL);
    if !cert.is_symmetric {
        return Err(Error::NotSymmetric { defect: cert.defect });
    }
    Ok(cert.sign)
}

fn symmetric_spectrum(m: &DMatrix<f64>) -> Result<OrderedReals> {
    order_reals(&linops::sym_eig(&linops::symmetrize(m))?.eigenvalues)
}

/// Poles, zeros and stable spectral zeros of a symmetric realization with
/// the ZIP decision and the per-index sandwich.
pub fn spectral_interlace_check(r: &Realization) -> Result<InterlacingReport> {
    let sign = require_symmetric(r)?;
    let poles = symmetric_spectrum(r.a())?;
    let zeros = symmetric_spectrum(inverse_system(r)?.a())?;
    let spectral = passivity::spectral_zeros(r)?;
    let scale = spectral.values().iter().fold(1.0f64, |a, z| a.max(z.norm()));
    let max_imag = spectral.max_imag();
    if max_imag > REALNESS_TOL * scale {
        return Err(Error::NonRealSpectralZeros { max_imag });
    }
    let stable = order_reals(&spectral.stable().iter().map(|z| z.re).collect::<Vec<_>>())?;
    if stable.len() != r.n() {
        return Err(Error::HalfPlaneCount {
            expected: r.n(),
            found: stable.len(),
        });
    }

    let mut report = zip_check(&poles, &zeros)?;
    let tol = SANDWICH_TOL * scale;
    let (p, z, mu) = (poles.values(), zeros.values(), stable.values());
    let margins: Vec<f64> = (0..r.n())
        .map(|i| match sign {
            PortSign::Plus => (mu[i] - z[i]).min(p[i] - mu[i]),
            PortSign::Minus => (mu[i] - p[i]).min(z[i] - mu[i]),
        })
        .collect();
    report.sandwich = margins.iter().map(|&s| s >= -tol).collect();
    report.margins = margins;
    if report.strict {
        let (lo, hi) = match sign {
            PortSign::Plus => (z, p),
            PortSign::Minus => (p, z),
        };
        let chain: Vec<f64> = (0..r.n()).flat_map(|i| [lo[i], mu[i], hi[i]]).collect();
        report.full_chain = Some(chain.windows(2).all(|w| w[1] > w[0]));
    }
    report.stable_spectral = Some(stable);
    Ok(report)
}

/// Gap condition `ν_min(λ(A)) > λ_max(BD⁻¹Bᵀ)` for symmetric realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct ZipCondition {
    pub poles: OrderedReals,
    /// `None` for a single pole.
    pub nu_min: Option<f64>,
    pub lambda_max: f64,
    pub condition: bool,
    /// PBH test: every eigenvector `x` of `A` has `Bᵀx ≠ 0`.
    pub controllable: bool,
    /// `min_i ‖Bᵀx_i‖` over orthonormal eigenvectors of `A`.
    pub pbh_margin: f64,
    /// Orientation the condition implies, fixed by the sign in `B = ±Cᵀ`.
    pub orientation: Orientation,
}

impl ZipCondition {
    /// The condition together with controllability guarantees strict ZIP.
    pub fn implies_strict_zip(&self) -> bool {
        self.condition && self.controllable
    }
}

pub fn zip_sufficient_condition(r: &Realization) -> Result<ZipCondition> {
    let sign = require_symmetric(r)?;
    let eig = linops::sym_eig(&linops::symmetrize(r.a()))?;
    let poles = order_reals(&eig.eigenvalues)?;
    let a_norm = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if let Some(gap) = poles.nu_min() {
        if gap <= REPEATED_POLE_TOL * a_norm {
            return Err(Error::RepeatedPoles { gap });
        }
    }
    let d_inv = r.d().clone().try_inverse().ok_or(Error::Singular("D"))?;
    let m = linops::symmetrize(&(r.b() * d_inv * r.b().transpose()));
    let lambda_max = linops::sym_eig(&m)?.eigenvalues.last().copied().unwrap_or(0.0);

    let bt_x = r.b().transpose() * &eig.eigenvectors;
    let pbh_margin = (0..r.n()).map(|i| bt_x.column(i).norm()).fold(f64::INFINITY, f64::min);
    let controllable = pbh_margin > PBH_TOL * r.b().norm();

    let nu_min = poles.nu_min();
    Ok(ZipCondition {
        condition: nu_min.map_or(true, |nu| nu > lambda_max),
        nu_min,
        lambda_max,
        poles,
        controllable,
        pbh_margin,
        orientation: match sign {
            PortSign::Plus => Orientation::ZerosFirst,
            PortSign::Minus => Orientation::PolesFirst,
        },
    })
}

/// One row of the feed-through scan `D = η·D0`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaScanRow {
    pub eta: f64,
    pub zeros: OrderedReals,
    pub stable_spectral: OrderedReals,
    pub poles: OrderedReals,
    /// Strict pole/zero interlacing.
    pub zip: bool,
    /// Strict chain through zeros, spectral zeros and poles.
    pub full_interlace: bool,
    pub report: InterlacingReport,
}

fn scaled(r: &Realization, d0: &DMatrix<f64>, eta: f64) -> Result<Realization> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "scaling factor must be positive, got {eta}"
        )));
    }
    r.with_d(d0 * eta)
}

fn check_scan_inputs(r: &Realization, d0: &DMatrix<f64>) -> Result<()> {
    require_symmetric(r)?;
    if d0.shape() != (r.m(), r.m()) {
        return Err(Error::DimensionMismatch("D0 must be m x m".into()));
    }
    if !linops::is_spd(d0) {
        return Err(Error::NotPositiveDefinite("D0"));
    }
    Ok(())
}

pub fn eta_row(r: &Realization, d0: &DMatrix<f64>, eta: f64) -> Result<EtaScanRow> {
    check_scan_inputs(r, d0)?;
    let report = spectral_interlace_check(&scaled(r, d0, eta)?)?;
    Ok(EtaScanRow {
        eta,
        zeros: report.zeros.clone(),
        stable_spectral: report.stable_spectral.clone().expect("set by spectral_interlace_check"),
        poles: report.poles.clone(),
        zip: report.strict,
        full_interlace: report.full_chain == Some(true),
        report,
    })
}

/// Rows for each `η` in the order given.
pub fn eta_scan(r: &Realization, d0: &DMatrix<f64>, etas: &[f64]) -> Result<Vec<EtaScanRow>> {
    if etas.is_empty() {
        return Err(Error::EmptyInput("list of scaling factors"));
    }
    check_scan_inputs(r, d0)?;
    etas.iter().map(|&eta| eta_row(r, d0, eta)).collect()
}

/// Largest failing and smallest passing `η` among scanned rows, when the
/// passing one lies above the failing one.
pub fn threshold_bracket(rows: &[EtaScanRow]) -> Option<(f64, f64)> {
    let pass = rows
        .iter()
        .filter(|r| r.zip)
        .map(|r| r.eta)
        .fold(f64::INFINITY, f64::min);
    let fail = rows
        .iter()
        .filter(|r| !r.zip && r.eta < pass)
        .map(|r| r.eta)
        .fold(f64::NEG_INFINITY, f64::max);
    (pass.is_finite() && fail.is_finite()).then_some((fail, pass))
}

/// Bisects `[lo, hi]` (ZIP failing at `lo`, holding at `hi`) to relative
/// width [`BISECTION_WIDTH`]; returns the passing end.
pub fn eta_threshold(r: &Realization, d0: &DMatrix<f64>, lo: f64, hi: f64) -> Result<f64> {
    check_scan_inputs(r, d0)?;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidArgument(format!(
            "invalid bisection bracket [{lo}, {hi}]"
        )));
    }
    let (mut lo, mut hi) = (lo, hi);
    if eta_row(r, d0, lo)?.zip {
        return Err(Error::InvalidArgument(format!(
            "interlacing already holds at the lower end {lo}"
        )));
    }
    if !eta_row(r, d0, hi)?.zip {
        return Err(Error::InvalidArgument(format!(
            "interlacing fails at the upper end {hi}"
        )));
    }
    while hi - lo > BISECTION_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        if eta_row(r, d0, mid)?.zip {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Eigenvalue interlacing of `P` and `P + M` for symmetric `P` and
/// positive semidefinite, rank-deficient `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylReport {
    pub lambda_p: Vec<f64>,
    pub lambda_pm: Vec<f64>,
    /// `λ_max(M) ≤ ν_min(P)`.
    pub applicable: bool,
    /// `λ_i(P) ≤ λ_i(P+M) ≤ λ_{i+1}(P)` for all `i`.
    pub bounds_hold: bool,
    /// Every inequality strict.
    pub strict: bool,
    /// Strictness predicted: `Mx ≠ 0` for every eigenvector and
    /// `λ_max(M) < ν_min(P)`.
    pub strict_predicted: bool,
}

pub fn weyl_interlace_bounds(p: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<WeylReport> {
    if p.shape() != m.shape() {
        return Err(Error::DimensionMismatch("P and M must have equal shapes".into()));
    }
    let n = p.nrows();
    let ep = linops::sym_eig(p)?;
    let em = linops::sym_eig(m)?;
    let scale = ep
        .eigenvalues
        .iter()
        .chain(&em.eigenvalues)
        .fold(1.0f64, |a, v| a.max(v.abs()));
    let tol = 1e-12 * scale * n as f64;
    if em.eigenvalues.first().is_some_and(|&l| l < -tol) {
        return Err(Error::InvalidArgument("M is not positive semidefinite".into()));
    }
    if crate::model::numerical_rank(m) >= n {
        return Err(Error::InvalidArgument("M must be rank deficient".into()));
    }
    let lp = ep.eigenvalues;
    let nu_min = lp.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if nu_min <= tol {
        return Err(Error::InvalidArgument("P has repeated eigenvalues".into()));
    }
    let lambda_max_m = em.eigenvalues.last().copied().unwrap_or(0.0);
    let lpm = linops::sym_eig(&linops::symmetrize(&(p + m)))?.eigenvalues;

    let mut bounds_hold = true;
    let mut strict = true;
    for i in 0..n {
        let lower = lpm[i] - lp[i];
        let upper = if i + 1 < n { lp[i + 1] - lpm[i] } else { f64::INFINITY };
        bounds_hold &= lower >= -tol && upper >= -tol;
        strict &= lower > tol && upper > tol;
    }
    let mx = m * &ep.eigenvectors;
    let no_shared = (0..n).all(|i| mx.column(i).norm() > tol);
    Ok(WeylReport {
        applicable: lambda_max_m <= nu_min,
        strict_predicted: no_shared && lambda_max_m < nu_min,
        lambda_p: lp,
        lambda_pm: lpm,
        bounds_hold,
        strict,
    })
}

/// Spectrum of `P(P + M)` against the bounds `λ_i(P)² ≤ λ_i ≤ λ_i(P+M)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductReport {
    pub eigenvalues: Vec<f64>,
    pub max_imag: f64,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub bounds_hold: bool,
}

pub fn product_eigen_bounds(p: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<ProductReport> {
    if p.shape() != m.shape() {
        return Err(Error::DimensionMismatch("P and M must have equal shapes".into()));
    }
    linops::cholesky(p).map_err(|_| Error::NotPositiveDefinite("P"))?;
    let em = linops::sym_eig(m)?;
    let pm = linops::symmetrize(&(p + m));
    let scale = pm.norm().max(1.0);
    if em.eigenvalues.first().is_some_and(|&l| l < -1e-12 * scale) {
        return Err(Error::InvalidArgument("M is not positive semidefinite".into()));
    }
    let spectrum = linops::general_eig(&(p * &pm))?;
    let eigenvalues: Vec<f64> = spectrum.real_parts();
    let lower: Vec<f64> = linops::sym_eig(p)?.eigenvalues.iter().map(|l| l * l).collect();
    let upper: Vec<f64> = linops::sym_eig(&pm)?.eigenvalues.iter().map(|l| l * l).collect();
    let tol = 1e-9 * scale * scale;
    let bounds_hold =
        (0..eigenvalues.len()).all(|i| eigenvalues[i] >= lower[i] - tol && eigenvalues[i] <= upper[i] + tol);
    Ok(ProductReport {
        max_imag: spectrum.max_imag(),
        eigenvalues,
        lower,
        upper,
        bounds_hold,
    })
}
