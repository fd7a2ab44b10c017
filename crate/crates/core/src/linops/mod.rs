//! Dense linear-algebra kernels: symmetric eigensolver, Cholesky, SPD
//! square root, general eigenvalues and ordered invariant subspaces.

mod schur;

pub use schur::RealSchur;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::Spectrum;

/// Relative tolerance for treating an input as symmetric.
const SYMMETRIC_INPUT_TOL: f64 = 1e-9;

/// Relative width of the imaginary-axis guard band.
pub const IMAGINARY_AXIS_GUARD: f64 = 1e-8;

/// Smallest reciprocal condition number accepted for the `X` block of an
/// invariant subspace basis.
const MIN_BASIS_RCOND: f64 = 1e-12;

/// Symmetric eigendecomposition `M = Q diag(λ) Qᵀ`, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigenSym {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

pub(crate) fn symmetric_defect(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax()
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let defect = symmetric_defect(m);
    if defect > SYMMETRIC_INPUT_TOL * m.amax().max(1.0) {
        return Err(Error::NotSymmetricMatrix { defect });
    }
    Ok(())
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Solves `FᵀX + XF = C` through a real Schur form of `F`, one diagonal
/// block column at a time. Needs `λ_i(F) + λ_j(F) ≠ 0` for all pairs.
pub fn lyapunov(f: &DMatrix<f64>, c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = f.nrows();
    if !f.is_square() || c.shape() != (n, n) {
        return Err(Error::DimensionMismatch("Lyapunov operands must be n x n".into()));
    }
    let schur = RealSchur::new(f)?;
    let blocks = schur.blocks();
    let (u, t) = schur.into_parts();
    let ct = u.transpose() * c * &u;
    let mut x = DMatrix::<f64>::zeros(n, n);
    for (j0, b) in blocks {
        let mut rhs = ct.columns(j0, b).into_owned();
        if j0 > 0 {
            rhs -= x.columns(0, j0) * t.view((0, j0), (j0, b));
        }
        // (I_b ⊗ Tᵀ + T_jjᵀ ⊗ I_n) vec(X_j) = vec(rhs)
        let mut sys = DMatrix::<f64>::zeros(n * b, n * b);
        for q in 0..b {
            sys.view_mut((q * n, q * n), (n, n)).copy_from(&t.transpose());
            for p in 0..b {
                let tpq = t[(j0 + p, j0 + q)];
                for i in 0..n {
                    sys[(q * n + i, p * n + i)] += tpq;
                }
            }
        }
        let v = DMatrix::from_column_slice(n * b, 1, rhs.as_slice());
        let sol = sys
            .lu()
            .solve(&v)
            .ok_or_else(|| Error::Convergence("singular Lyapunov operator".into()))?;
        for q in 0..b {
            x.column_mut(j0 + q).copy_from(&sol.rows(q * n, n));
        }
    }
    Ok(&u * x * u.transpose())
}

/// Eigenvalues ascending; each eigenvector is signed so that its largest
/// component is positive, which makes the output deterministic.
pub fn sym_eig(m: &DMatrix<f64>) -> Result<EigenSym> {
    check_symmetric(m)?;
    let n = m.nrows();
    let eig = SymmetricEigen::new(symmetrize(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut vectors = DMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(i).clone_owned();
        let pivot = col.iamax();
        if col[pivot] < 0.0 {
            col.neg_mut();
        }
        vectors.set_column(k, &col);
    }
    Ok(EigenSym {
        eigenvalues: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        eigenvectors: vectors,
    })
}

/// Upper-triangular `R` with `M = RᵀR`.
pub fn cholesky(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_symmetric(m)?;
    let chol = symmetrize(m).cholesky().ok_or(Error::NotPositiveDefinite("matrix"))?;
    Ok(chol.l().transpose())
}

pub fn is_spd(m: &DMatrix<f64>) -> bool {
    cholesky(m).is_ok()
}

/// The unique symmetric positive definite square root.
pub fn sqrt_spd(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    cholesky(m)?;
    let eig = sym_eig(m)?;
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::NotPositiveDefinite("matrix"));
    }
    let q = &eig.eigenvectors;
    let mut scaled = q.clone();
    for (j, l) in eig.eigenvalues.iter().enumerate() {
        scaled.column_mut(j).scale_mut(l.sqrt());
    }
    Ok(symmetrize(&(scaled * q.transpose())))
}

/// All eigenvalues of a real square matrix.
pub fn general_eig(m: &DMatrix<f64>) -> Result<Spectrum> {
    let schur = RealSchur::new(m)?;
    Ok(Spectrum::new(schur.eigenvalues()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfPlane {
    Stable,
    Antistable,
}

/// Invariant subspace `H [X; Y] = [X; Y] R` of a `2n×2n` matrix.
#[derive(Debug, Clone)]
pub struct InvariantSubspace {
    pub basis: DMatrix<f64>,
    pub restriction: DMatrix<f64>,
    pub eigenvalues: Vec<Complex64>,
}

impl InvariantSubspace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Upper `n×n` block of the basis.
    pub fn x(&self) -> DMatrix<f64> {
        let n = self.basis.nrows() / 2;
        self.basis.rows(0, n).clone_owned()
    }

    /// Lower `n×n` block of the basis.
    pub fn y(&self) -> DMatrix<f64> {
        let n = self.basis.nrows() / 2;
        self.basis.rows(n, n).clone_owned()
    }

    /// `‖H·basis − basis·R‖_F`.
    pub fn residual(&self, h: &DMatrix<f64>) -> f64 {
        (h * &self.basis - &self.basis * &self.restriction).norm()
    }

    /// `K = Y X⁻¹`, symmetrized. Fails when `X` is numerically singular.
    pub fn riccati_solution(&self) -> Result<DMatrix<f64>> {
        let x = self.x();
        let sv = x.clone().singular_values();
        let smax = sv.max();
        let rcond = if smax > 0.0 { sv.min() / smax } else { 0.0 };
        if rcond < MIN_BASIS_RCOND {
            return Err(Error::SingularBasis { rcond });
        }
        let kt = x
            .transpose()
            .lu()
            .solve(&self.y().transpose())
            .ok_or(Error::SingularBasis { rcond })?;
        Ok(symmetrize(&kt.transpose()))
    }
}

/// Invariant subspace of a `2n×2n` matrix for its `n` eigenvalues in the
/// requested open half-plane.
pub fn stable_invariant_subspace(h: &DMatrix<f64>, half_plane: HalfPlane) -> Result<InvariantSubspace> {
    let n2 = h.nrows();
    if !h.is_square() || n2 % 2 != 0 {
        return Err(Error::DimensionMismatch(format!(
            "expected an even-order square matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let schur = RealSchur::new(h)?;
    let band = IMAGINARY_AXIS_GUARD * h.norm();
    if let Some(z) = schur.eigenvalues().into_iter().find(|z| z.re.abs() < band) {
        return Err(Error::ImaginaryAxisEigenvalue { re: z.re, im: z.im });
    }
    let select = move |z: Complex64| match half_plane {
        HalfPlane::Stable => z.re < 0.0,
        HalfPlane::Antistable => z.re > 0.0,
    };
    ordered_subspace(schur, select, n2 / 2)
}

/// Invariant subspace spanned by the eigenvalues accepted by `select`;
/// complex pairs are selected or rejected together.
pub fn invariant_subspace<F>(m: &DMatrix<f64>, select: F) -> Result<InvariantSubspace>
where
    F: Fn(Complex64) -> bool,
{
    let schur = RealSchur::new(m)?;
    let k = schur.eigenvalues().into_iter().filter(|&z| select(z)).count();
    ordered_subspace(schur, select, k)
}

fn ordered_subspace<F>(mut schur: RealSchur, select: F, expected: usize) -> Result<InvariantSubspace>
where
    F: Fn(Complex64) -> bool,
{
    let found = schur.reorder(&select)?;
    if found != expected {
        return Err(Error::HalfPlaneCount { expected, found });
    }
    let eigenvalues = schur.eigenvalues()[..found].to_vec();
    let (q, t) = schur.into_parts();
    Ok(InvariantSubspace {
        basis: q.columns(0, found).clone_owned(),
        restriction: t.view((0, 0), (found, found)).clone_owned(),
        eigenvalues,
    })
}

/// Congruence `T` with `TᵀKmaxT = I` and `TᵀKminT = diag(λ)` ascending.
#[derive(Debug, Clone)]
pub struct Congruence {
    pub t: DMatrix<f64>,
    pub diagonal: Vec<f64>,
}

pub fn simultaneous_diagonalize(kmax: &DMatrix<f64>, kmin: &DMatrix<f64>) -> Result<Congruence> {
    if kmax.shape() != kmin.shape() {
        return Err(Error::DimensionMismatch(
            "congruence pair must have equal shapes".into(),
        ));
    }
    let r = cholesky(kmax).map_err(|e| match e {
        Error::NotPositiveDefinite(_) => Error::NotPositiveDefinite("first matrix of the pair"),
        other => other,
    })?;
    cholesky(kmin).map_err(|e| match e {
        Error::NotPositiveDefinite(_) => Error::NotPositiveDefinite("second matrix of the pair"),
        other => other,
    })?;
    let n = r.nrows();
    let s = r
        .solve_upper_triangular(&DMatrix::identity(n, n))
        .ok_or(Error::Singular("Cholesky factor"))?;
    let p = symmetrize(&(s.transpose() * kmin * &s));
    let eig = sym_eig(&p)?;
    Ok(Congruence {
        t: s * eig.eigenvectors,
        diagonal: eig.eigenvalues,
    })
}
