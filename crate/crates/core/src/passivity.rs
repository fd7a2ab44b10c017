//! Passivity Hamiltonian, spectral zeros, Riccati residuals and the
//! extremal storage functions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linops::{self, HalfPlane, IMAGINARY_AXIS_GUARD};
use crate::model::{Realization, Spectrum};

/// `H = [[P, Q], [R, −Pᵀ]]` with `W = (D + Dᵀ)⁻¹`, `P = A − BWC`,
/// `Q = BWBᵀ`, `R = −CᵀWC`.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub matrix: DMatrix<f64>,
    pub p: DMatrix<f64>,
    pub q: DMatrix<f64>,
    pub r: DMatrix<f64>,
}

impl Hamiltonian {
    /// Half the order of `H`.
    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    /// `‖JH − (JH)ᵀ‖_max` with `J = [[0, I], [−I, 0]]`; zero for a
    /// Hamiltonian matrix.
    pub fn structure_defect(&self) -> f64 {
        let n = self.n();
        let mut j = DMatrix::zeros(2 * n, 2 * n);
        j.view_mut((0, n), (n, n)).fill_with_identity();
        j.view_mut((n, 0), (n, n)).copy_from(&(-DMatrix::<f64>::identity(n, n)));
        linops::symmetric_defect(&(j * &self.matrix))
    }
}

fn feedthrough_inverse(r: &Realization) -> Result<DMatrix<f64>> {
    let dsym = r.d() + r.d().transpose();
    dsym.try_inverse().ok_or(Error::Singular("D + Dᵀ"))
}

pub fn hamiltonian(r: &Realization) -> Result<Hamiltonian> {
    let n = r.n();
    let w = feedthrough_inverse(r)?;
    let p = r.a() - r.b() * &w * r.c();
    let q = r.b() * &w * r.b().transpose();
    let rr = -(r.c().transpose() * &w * r.c());
    let mut matrix = DMatrix::zeros(2 * n, 2 * n);
    matrix.view_mut((0, 0), (n, n)).copy_from(&p);
    matrix.view_mut((0, n), (n, n)).copy_from(&q);
    matrix.view_mut((n, 0), (n, n)).copy_from(&rr);
    matrix.view_mut((n, n), (n, n)).copy_from(&(-p.transpose()));
    Ok(Hamiltonian { matrix, p, q, r: rr })
}

fn check_guard_band(h: &DMatrix<f64>, spectrum: &Spectrum) -> Result<()> {
    let band = IMAGINARY_AXIS_GUARD * h.norm();
    match spectrum.values().iter().find(|z| z.re.abs() < band) {
        Some(z) => Err(Error::ImaginaryAxisEigenvalue { re: z.re, im: z.im }),
        None => Ok(()),
    }
}

/// All `2n` spectral zeros, i.e. the eigenvalues of the Hamiltonian.
pub fn spectral_zeros(r: &Realization) -> Result<Spectrum> {
    let h = hamiltonian(r)?;
    let spectrum = linops::general_eig(&h.matrix)?;
    check_guard_band(&h.matrix, &spectrum)?;
    Ok(spectrum)
}

/// Frobenius norm of `AᵀK + KA + (KB − Cᵀ)(D + Dᵀ)⁻¹(BᵀK − C)`.
pub fn are_residual(r: &Realization, k: &DMatrix<f64>) -> Result<f64> {
    if k.shape() != (r.n(), r.n()) {
        return Err(Error::DimensionMismatch("K must be n x n".into()));
    }
    let w = feedthrough_inverse(r)?;
    let kb_c = k * r.b() - r.c().transpose();
    let lhs = r.a().transpose() * k + k * r.a() + &kb_c * w * kb_c.transpose();
    Ok(lhs.norm())
}

/// Extremal symmetric positive definite Riccati solutions.
#[derive(Debug, Clone)]
pub struct StoragePair {
    pub k_min: DMatrix<f64>,
    pub k_max: DMatrix<f64>,
    pub residual_min: f64,
    pub residual_max: f64,
}

impl StoragePair {
    /// `‖K_max·K_min − I‖_max`.
    pub fn reciprocity_defect(&self) -> f64 {
        let n = self.k_min.nrows();
        (&self.k_max * &self.k_min - DMatrix::identity(n, n)).amax()
    }
}

/// `K_max` from the antistable and `K_min` from the stable invariant
/// subspace of the Hamiltonian.
pub fn extremal_solutions(r: &Realization) -> Result<StoragePair> {
    let h = hamiltonian(r)?;
    let k_max = linops::stable_invariant_subspace(&h.matrix, HalfPlane::Antistable)?.riccati_solution()?;
    let k_min = linops::stable_invariant_subspace(&h.matrix, HalfPlane::Stable)?.riccati_solution()?;

    if !linops::is_spd(&k_min) {
        return Err(Error::Indefinite("K_min"));
    }
    if !linops::is_spd(&k_max) {
        return Err(Error::Indefinite("K_max"));
    }
    let gap = linops::sym_eig(&linops::symmetrize(&(&k_max - &k_min)))?;
    if gap.eigenvalues.first().copied().unwrap_or(0.0) < -1e-8 * k_max.norm() {
        return Err(Error::Indefinite("K_max - K_min"));
    }

    let residual_min = are_residual(r, &k_min)?;
    let residual_max = are_residual(r, &k_max)?;
    for (res, k) in [(residual_min, &k_min), (residual_max, &k_max)] {
        let scale = (1.0 + r.a().norm()) * (1.0 + k.norm()) + h.r.norm() + h.q.norm() * k.norm().powi(2);
        if !(res <= 1e-6 * scale) {
            return Err(Error::Convergence(format!(
                "Riccati residual {res:.3e} too large for the problem scale {scale:.3e}"
            )));
        }
    }
    Ok(StoragePair {
        k_min,
        k_max,
        residual_min,
        residual_max,
    })
}

/// Quadratic storage `aᵀKa`.
pub fn energy(k: &DMatrix<f64>, a: &DVector<f64>) -> Result<f64> {
    if k.shape() != (a.len(), a.len()) {
        return Err(Error::DimensionMismatch("state vector length must match K".into()));
    }
    Ok(a.dot(&(k * a)))
}

/// Outcome of the strict passivity test with the reason for any failure.
#[derive(Debug, Clone)]
pub struct PassivityReport {
    pub strictly_passive: bool,
    pub feedthrough_positive: bool,
    /// First Hamiltonian eigenvalue found inside the imaginary-axis guard band.
    pub axis_eigenvalue: Option<Complex64>,
    pub storage: Option<StoragePair>,
    pub reasons: Vec<String>,
}

/// Strictly passive iff `D + Dᵀ ≻ 0`, no Hamiltonian eigenvalue lies in the
/// imaginary-axis guard band, and the extremal solutions exist and are
/// positive definite.
pub fn is_strictly_passive(r: &Realization) -> PassivityReport {
    let mut report = PassivityReport {
        strictly_passive: false,
        feedthrough_positive: false,
        axis_eigenvalue: None,
        storage: None,
        reasons: Vec::new(),
    };
    let dsym = r.d() + r.d().transpose();
    report.feedthrough_positive = linops::is_spd(&dsym);
    if !report.feedthrough_positive {
        report.reasons.push("D + Dᵀ is not positive definite".into());
        return report;
    }
    let h = match hamiltonian(r) {
        Ok(h) => h,
        Err(e) => {
            report.reasons.push(e.to_string());
            return report;
        }
    };
    match linops::general_eig(&h.matrix) {
        Ok(spectrum) => {
            if let Err(Error::ImaginaryAxisEigenvalue { re, im }) = check_guard_band(&h.matrix, &spectrum) {
                report.axis_eigenvalue = Some(Complex64::new(re, im));
                report.reasons.push(format!(
                    "Hamiltonian eigenvalue {re:+.3e}{im:+.3e}j on the imaginary axis"
                ));
                return report;
            }
        }
        Err(e) => {
            report.reasons.push(e.to_string());
            return report;
        }
    }
    match extremal_solutions(r) {
        Ok(pair) => {
            report.storage = Some(pair);
            report.strictly_passive = true;
        }
        Err(e) => report.reasons.push(e.to_string()),
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn scalar() -> Realization {
        let s3 = 3f64.sqrt();
        Realization::from_rows(1, 1, &[-1.0], &[s3], &[s3], &[1.0]).unwrap()
    }

    fn sec2b() -> Realization {
        Realization::from_rows(2, 1, &[-3.0, 0.0, 0.0, -4.0], &[2.0, -6.0], &[1.0, 1.0], &[1.0]).unwrap()
    }

    fn sec1b() -> Realization {
        let s2 = 2f64.sqrt();
        Realization::from_rows(2, 1, &[-1.0, 0.0, 0.0, -3.0], &[s2, 1.0], &[s2, 1.0], &[1.0]).unwrap()
    }

    #[test]
    fn hamiltonian_of_scalar() {
        let h = hamiltonian(&scalar()).unwrap();
        assert_relative_eq!(
            h.matrix,
            DMatrix::from_row_slice(2, 2, &[-2.5, 1.5, -1.5, 2.5]),
            epsilon = 1e-15
        );
        assert!(h.structure_defect() < 1e-15);
    }

    #[test]
    fn decoupled_hamiltonian_when_b_is_zero() {
        let r = Realization::from_rows(2, 1, &[-1.0, 2.0, 0.0, -3.0], &[0.0, 0.0], &[1.0, 1.0], &[1.0]).unwrap();
        let h = hamiltonian(&r).unwrap();
        assert_eq!(h.matrix.view((0, 0), (2, 2)), r.a().view((0, 0), (2, 2)));
        assert_eq!(h.q, DMatrix::zeros(2, 2));
        assert_eq!(h.p, r.a().clone());
    }

    #[test]
    fn complex_spectral_zeros_of_sec2b() {
        let s = spectral_zeros(&sec2b()).unwrap();
        assert_eq!(s.len(), 4);
        for z in s.values() {
            assert!((z.re.abs() - 2.05).abs() < 0.01, "{z}");
            assert!((z.im.abs() - 0.84).abs() < 0.01, "{z}");
        }
    }

    #[test]
    fn real_spectral_zeros_of_sec1b() {
        let s = spectral_zeros(&sec1b()).unwrap();
        assert!(s.is_real(1e-12));
        let stable = s.stable();
        let expect = [-(7.5 + 105f64.sqrt() / 2.0).sqrt(), -(7.5 - 105f64.sqrt() / 2.0).sqrt()];
        assert_relative_eq!(stable[0].re, expect[0], epsilon = 1e-12);
        assert_relative_eq!(stable[1].re, expect[1], epsilon = 1e-12);
    }

    #[test]
    fn residual_examples() {
        let r = scalar();
        let one = |v: f64| DMatrix::from_element(1, 1, v);
        assert!(are_residual(&r, &one(3.0)).unwrap() < 1e-14);
        assert!(are_residual(&r, &one(1.0 / 3.0)).unwrap() < 1e-14);
        assert_relative_eq!(are_residual(&r, &one(1.0)).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn scalar_extremal_solutions() {
        let pair = extremal_solutions(&scalar()).unwrap();
        assert_relative_eq!(pair.k_max[(0, 0)], 3.0, epsilon = 1e-12);
        assert_relative_eq!(pair.k_min[(0, 0)], 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn symmetric_system_has_reciprocal_storage() {
        let pair = extremal_solutions(&sec1b()).unwrap();
        assert!(pair.reciprocity_defect() < 1e-10);
    }

    #[test]
    fn energy_examples() {
        let e = energy(&DMatrix::identity(2, 2), &DVector::from_vec(vec![1.0, 0.0])).unwrap();
        assert_eq!(e, 1.0);
        let k = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0 / 3.0]));
        assert_relative_eq!(energy(&k, &DVector::from_vec(vec![1.0, 1.0])).unwrap(), 10.0 / 3.0);
        assert_relative_eq!(
            energy(&DMatrix::from_element(1, 1, 3.0), &DVector::from_element(1, 2.0)).unwrap(),
            12.0
        );
    }

    #[test]
    fn strict_passivity_reports() {
        assert!(is_strictly_passive(&sec1b()).strictly_passive);
        // G(s) = s/(s+1) has a zero at the origin: H has a double eigenvalue 0
        let r = Realization::from_rows(1, 1, &[-1.0], &[1.0], &[-1.0], &[1.0]).unwrap();
        let rep = is_strictly_passive(&r);
        assert!(!rep.strictly_passive);
        assert!(rep.axis_eigenvalue.is_some());
        // integrator pole on the axis
        let r = Realization::from_rows(1, 1, &[0.0], &[1.0], &[1.0], &[1.0]).unwrap();
        assert!(!is_strictly_passive(&r).strictly_passive);
        // negative feed-through
        let r = Realization::from_rows(1, 1, &[-1.0], &[1.0], &[1.0], &[-1.0]).unwrap();
        assert!(!is_strictly_passive(&r).feedthrough_positive);
    }
}
