//! Positive-real balancing and the two quasi-balanced forms.
//!
//! All transforms act on the state, `x = T x̃`, so a storage matrix `K`
//! becomes `TᵀKT` in the new coordinates.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linops;
use crate::model::{Realization, SYMMETRY_TOL};
use crate::passivity::{self, StoragePair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BalanceForm {
    /// `K_max = K_min⁻¹ = diag(1/σ)`
    PositiveReal,
    /// `K_max = I`, `K_min = diag(σ⁺)`
    QuasiI,
    /// `K_min = I`, `K_max = diag(σ⁻)`
    QuasiII,
}

impl BalanceForm {
    pub fn name(self) -> &'static str {
        match self {
            BalanceForm::PositiveReal => "positive-real",
            BalanceForm::QuasiI => "quasi-I",
            BalanceForm::QuasiII => "quasi-II",
        }
    }
}

/// A transformed realization in one of the balanced forms, with its
/// ascending `σ` list and the state transform from the source.
#[derive(Debug, Clone)]
pub struct BalancedRealization {
    pub realization: Realization,
    pub form: BalanceForm,
    pub sigma: Vec<f64>,
    pub t: DMatrix<f64>,
}

impl BalancedRealization {
    /// `K_min` and `K_max` the form claims for the transformed realization.
    pub fn claimed_storage(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let n = self.sigma.len();
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.sigma.clone()));
        let inv = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, self.sigma.iter().map(|s| 1.0 / s)));
        match self.form {
            BalanceForm::PositiveReal => (diag, inv),
            BalanceForm::QuasiI => (diag, DMatrix::identity(n, n)),
            BalanceForm::QuasiII => (DMatrix::identity(n, n), diag),
        }
    }

    /// Recomputes the extremal solutions of the transformed realization and
    /// returns the largest elementwise deviation from the claimed form,
    /// relative to the size of the claimed matrices.
    pub fn verify(&self) -> Result<f64> {
        let pair = passivity::extremal_solutions(&self.realization)?;
        let (k_min, k_max) = self.claimed_storage();
        let dev_min = (&pair.k_min - &k_min).amax() / k_min.amax().max(1.0);
        let dev_max = (&pair.k_max - &k_max).amax() / k_max.amax().max(1.0);
        Ok(dev_min.max(dev_max))
    }
}

fn apply(r: &Realization, t: &DMatrix<f64>, t_inv: &DMatrix<f64>) -> Result<Realization> {
    Realization::new(t_inv * r.a() * t, t_inv * r.b(), r.c() * t, r.d().clone())
}

fn inverse(t: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    t.clone().try_inverse().ok_or(Error::Singular("state transform"))
}

/// Positive-real balancing from an already computed storage pair, by the
/// square-root method: `K_max⁻¹ = UUᵀ`, `K_min = LLᵀ`, `UᵀL = WΣVᵀ`,
/// `T = UWΣ^{-1/2}`, `T⁻¹ = Σ^{-1/2}VᵀLᵀ`.
pub fn pr_balance_with(r: &Realization, pair: &StoragePair) -> Result<BalancedRealization> {
    let n = r.n();
    let rmax = linops::cholesky(&pair.k_max).map_err(|_| Error::Indefinite("K_max"))?;
    let u = rmax
        .solve_upper_triangular(&DMatrix::identity(n, n))
        .ok_or(Error::Singular("Cholesky factor of K_max"))?;
    let l = linops::cholesky(&pair.k_min)
        .map_err(|_| Error::Indefinite("K_min"))?
        .transpose();
    let svd = (u.transpose() * &l).svd(true, true);
    let w = svd.u.ok_or_else(|| Error::Convergence("SVD left vectors".into()))?;
    let vt = svd.v_t.ok_or_else(|| Error::Convergence("SVD right vectors".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));

    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    if sigma.first().is_some_and(|&s| s <= 0.0) {
        return Err(Error::Indefinite("K_min"));
    }
    let mut t = DMatrix::zeros(n, n);
    let mut t_inv = DMatrix::zeros(n, n);
    let lt = l.transpose();
    for (k, &i) in order.iter().enumerate() {
        let s = sigma[k].sqrt();
        t.set_column(k, &(&u * w.column(i) / s));
        t_inv.set_row(k, &(vt.row(i) * &lt / s));
    }
    Ok(BalancedRealization {
        realization: apply(r, &t, &t_inv)?,
        form: BalanceForm::PositiveReal,
        sigma,
        t,
    })
}

/// Realization with `K_max = K_min⁻¹ = diag(1/σ)`, `σ` ascending in `(0, 1]`.
pub fn pr_balance(r: &Realization) -> Result<BalancedRealization> {
    pr_balance_with(r, &passivity::extremal_solutions(r)?)
}

pub fn quasi_balance_form1_with(r: &Realization, pair: &StoragePair) -> Result<BalancedRealization> {
    let cong = linops::simultaneous_diagonalize(&pair.k_max, &pair.k_min)?;
    let t_inv = inverse(&cong.t)?;
    Ok(BalancedRealization {
        realization: apply(r, &cong.t, &t_inv)?,
        form: BalanceForm::QuasiI,
        sigma: cong.diagonal,
        t: cong.t,
    })
}

/// Realization with `K_max = I` and `K_min = diag(σ⁺)` ascending.
pub fn quasi_balance_form1(r: &Realization) -> Result<BalancedRealization> {
    quasi_balance_form1_with(r, &passivity::extremal_solutions(r)?)
}

pub fn quasi_balance_form2_with(r: &Realization, pair: &StoragePair) -> Result<BalancedRealization> {
    let cong = linops::simultaneous_diagonalize(&pair.k_min, &pair.k_max)?;
    let t_inv = inverse(&cong.t)?;
    Ok(BalancedRealization {
        realization: apply(r, &cong.t, &t_inv)?,
        form: BalanceForm::QuasiII,
        sigma: cong.diagonal,
        t: cong.t,
    })
}

/// Realization with `K_min = I` and `K_max = diag(σ⁻)` ascending.
pub fn quasi_balance_form2(r: &Realization) -> Result<BalancedRealization> {
    quasi_balance_form2_with(r, &passivity::extremal_solutions(r)?)
}

/// Form-I to Form-II by `T = diag(σ⁺)^{-1/2}` followed by the permutation
/// that re-sorts `σ⁻ = 1/σ⁺` ascending.
pub fn form1_to_form2(b1: &BalancedRealization) -> Result<BalancedRealization> {
    if b1.form != BalanceForm::QuasiI {
        return Err(Error::WrongForm {
            expected: BalanceForm::QuasiI.name(),
            found: b1.form.name(),
        });
    }
    let n = b1.sigma.len();
    if b1.sigma.iter().any(|&s| s <= 0.0) {
        return Err(Error::InvalidArgument("quasi-singular values must be positive".into()));
    }
    let recip: Vec<f64> = b1.sigma.iter().map(|s| 1.0 / s).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| recip[i].total_cmp(&recip[j]));
    let mut t = DMatrix::zeros(n, n);
    let mut t_inv = DMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        t[(i, k)] = 1.0 / b1.sigma[i].sqrt();
        t_inv[(k, i)] = b1.sigma[i].sqrt();
    }
    Ok(BalancedRealization {
        realization: apply(&b1.realization, &t, &t_inv)?,
        form: BalanceForm::QuasiII,
        sigma: order.iter().map(|&i| recip[i]).collect(),
        t: &b1.t * t,
    })
}

/// `σ`, `√σ⁺` and `1/√σ⁻`, each sorted ascending and obtained by an
/// independent transform.
#[derive(Debug, Clone)]
pub struct SigmaRelations {
    pub sigma: Vec<f64>,
    pub sqrt_sigma_plus: Vec<f64>,
    pub inv_sqrt_sigma_minus: Vec<f64>,
    /// Largest absolute difference among the three lists.
    pub max_deviation: f64,
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

pub fn singular_value_relations(r: &Realization) -> Result<SigmaRelations> {
    let pair = passivity::extremal_solutions(r)?;
    let sigma = sorted(pr_balance_with(r, &pair)?.sigma);
    let sqrt_sigma_plus = sorted(
        quasi_balance_form1_with(r, &pair)?
            .sigma
            .iter()
            .map(|s| s.sqrt())
            .collect(),
    );
    let inv_sqrt_sigma_minus = sorted(
        quasi_balance_form2_with(r, &pair)?
            .sigma
            .iter()
            .map(|s| 1.0 / s.sqrt())
            .collect(),
    );
    let max_deviation = (0..sigma.len())
        .map(|i| {
            let (a, b, c) = (sigma[i], sqrt_sigma_plus[i], inv_sqrt_sigma_minus[i]);
            (a - b).abs().max((a - c).abs()).max((b - c).abs())
        })
        .fold(0.0, f64::max);
    Ok(SigmaRelations {
        sigma,
        sqrt_sigma_plus,
        inv_sqrt_sigma_minus,
        max_deviation,
    })
}

/// Outcome of the reciprocity test `K_max·K_min = I` on a symmetric
/// realization.
#[derive(Debug, Clone)]
pub struct SymmetricBalanceReport {
    pub reciprocity_defect: f64,
    /// Riccati residual of `K_max⁻¹`, expected to vanish like that of `K_max`.
    pub inverse_residual_max: f64,
    /// Riccati residual of `K_min⁻¹`.
    pub inverse_residual_min: f64,
    pub balanced: bool,
}

pub fn check_symmetric_implies_balanced(r: &Realization) -> Result<SymmetricBalanceReport> {
    let cert = r.symmetry(SYMMETRY_TOL);
    if !cert.is_symmetric {
        return Err(Error::NotSymmetric { defect: cert.defect });
    }
    let pair = passivity::extremal_solutions(r)?;
    let kmax_inv = inverse(&pair.k_max)?;
    let kmin_inv = inverse(&pair.k_min)?;
    let inverse_residual_max = passivity::are_residual(r, &linops::symmetrize(&kmax_inv))?;
    let inverse_residual_min = passivity::are_residual(r, &linops::symmetrize(&kmin_inv))?;
    let reciprocity_defect = pair.reciprocity_defect();
    // Riccati scale of K⁻¹ times κ(K), since inverting K amplifies its
    // relative error by that much
    let h = passivity::hamiltonian(r)?;
    let scale = |k: &DMatrix<f64>, k_inv: &DMatrix<f64>| {
        let nk = k_inv.norm();
        let kappa = k.norm() * nk;
        ((1.0 + r.a().norm()) * (1.0 + nk) + h.r.norm() + h.q.norm() * nk * nk) * kappa
    };
    let balanced = reciprocity_defect <= 1e-8 * (1.0 + pair.k_max.norm() * pair.k_min.norm())
        && inverse_residual_max <= 1e-8 * scale(&pair.k_max, &kmax_inv)
        && inverse_residual_min <= 1e-8 * scale(&pair.k_min, &kmin_inv);
    Ok(SymmetricBalanceReport {
        reciprocity_defect,
        inverse_residual_max,
        inverse_residual_min,
        balanced,
    })
}
