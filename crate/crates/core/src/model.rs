//! Domain types: state-space realizations, rational transfer functions,
//! pole/residue data, spectra and the ascending ordering convention.

use std::cmp::Ordering;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{linops, poly};

/// Default absolute, elementwise tolerance for symmetry tests.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// State-space quadruple `(A, B, C, D)` with a square transfer matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    c: DMatrix<f64>,
    d: DMatrix<f64>,
}

impl Realization {
    /// Checks dimensions only; rank and `n > m` are checked by
    /// [`validate_realization`].
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>, d: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "A must be square, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        let m = d.nrows();
        if m == 0 || d.ncols() != m {
            return Err(Error::DimensionMismatch(format!(
                "D must be square and nonempty, got {}x{}",
                d.nrows(),
                d.ncols()
            )));
        }
        if b.shape() != (n, m) {
            return Err(Error::DimensionMismatch(format!(
                "B must be {n}x{m}, got {}x{}",
                b.nrows(),
                b.ncols()
            )));
        }
        if c.shape() != (m, n) {
            return Err(Error::DimensionMismatch(format!(
                "C must be {m}x{n}, got {}x{}",
                c.nrows(),
                c.ncols()
            )));
        }
        if [&a, &b, &c, &d].iter().any(|x| x.iter().any(|v| !v.is_finite())) {
            return Err(Error::InvalidArgument("realization has non-finite entries".into()));
        }
        Ok(Realization { a, b, c, d })
    }

    /// Builds a realization from row-major slices.
    pub fn from_rows(n: usize, m: usize, a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Result<Self> {
        let check = |name: &str, v: &[f64], len: usize| {
            if v.len() == len {
                Ok(())
            } else {
                Err(Error::DimensionMismatch(format!(
                    "{name} needs {len} entries, got {}",
                    v.len()
                )))
            }
        };
        check("A", a, n * n)?;
        check("B", b, n * m)?;
        check("C", c, m * n)?;
        check("D", d, m * m)?;
        Realization::new(
            DMatrix::from_row_slice(n, n, a),
            DMatrix::from_row_slice(n, m, b),
            DMatrix::from_row_slice(m, n, c),
            DMatrix::from_row_slice(m, m, d),
        )
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn c(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn d(&self) -> &DMatrix<f64> {
        &self.d
    }

    /// State dimension.
    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    /// Port dimension.
    pub fn m(&self) -> usize {
        self.d.nrows()
    }

    pub fn is_siso(&self) -> bool {
        self.m() == 1
    }

    /// Same dynamics with a different feed-through matrix.
    pub fn with_d(&self, d: DMatrix<f64>) -> Result<Self> {
        Realization::new(self.a.clone(), self.b.clone(), self.c.clone(), d)
    }

    /// Transpose image `(Aᵀ, Cᵀ, Bᵀ, Dᵀ)`, which realizes `G(s)ᵀ`.
    pub fn dual(&self) -> Self {
        Realization {
            a: self.a.transpose(),
            b: self.c.transpose(),
            c: self.b.transpose(),
            d: self.d.transpose(),
        }
    }

    /// State transform `x = T x̃`: returns `(T⁻¹AT, T⁻¹B, CT, D)`.
    pub fn transform(&self, t: &DMatrix<f64>) -> Result<Self> {
        if t.shape() != (self.n(), self.n()) {
            return Err(Error::DimensionMismatch("state transform must be n x n".into()));
        }
        let lu = t.clone().lu();
        let a = lu.solve(&(&self.a * t)).ok_or(Error::Singular("state transform"))?;
        let b = lu.solve(&self.b).ok_or(Error::Singular("state transform"))?;
        Realization::new(a, b, &self.c * t, self.d.clone())
    }

    /// Symmetry certificate against `A = Aᵀ, D = Dᵀ, B = ±Cᵀ`.
    pub fn symmetry(&self, tol: f64) -> SymmetryCertificate {
        let ct = self.c.transpose();
        let dev_a = max_abs(&(&self.a - self.a.transpose()));
        let dev_d = max_abs(&(&self.d - self.d.transpose()));
        let dev_plus = max_abs(&(&self.b - &ct));
        let dev_minus = max_abs(&(&self.b + &ct));
        let (sign, dev_b) = if dev_minus < dev_plus {
            (PortSign::Minus, dev_minus)
        } else {
            (PortSign::Plus, dev_plus)
        };
        let defect = dev_a.max(dev_d).max(dev_b);
        SymmetryCertificate {
            is_symmetric: defect <= tol,
            sign,
            defect,
        }
    }

    /// `G(s) = C (sI − A)⁻¹ B + D` at a complex frequency.
    pub fn transfer_at(&self, s: Complex64) -> Result<DMatrix<Complex64>> {
        let n = self.n();
        let a = self.a.map(|v| Complex64::new(v, 0.0));
        let b = self.b.map(|v| Complex64::new(v, 0.0));
        let c = self.c.map(|v| Complex64::new(v, 0.0));
        let d = self.d.map(|v| Complex64::new(v, 0.0));
        if n == 0 {
            return Ok(d);
        }
        let resolvent = DMatrix::<Complex64>::identity(n, n) * s - a;
        let x = resolvent.lu().solve(&b).ok_or(Error::Singular("sI - A"))?;
        Ok(c * x + d)
    }

    /// SISO transfer function `D·det(sI − A + BD⁻¹C) / det(sI − A)`.
    pub fn transfer_function(&self) -> Result<RationalFunction> {
        if !self.is_siso() {
            return Err(Error::NotSiso { m: self.m() });
        }
        let d = self.d[(0, 0)];
        if d == 0.0 {
            return Err(Error::NotBiproper("D = 0".into()));
        }
        let den = poly::from_roots(linops::general_eig(&self.a)?.values());
        let a_y = &self.a - &self.b * &self.c / d;
        let num = poly::scale(&poly::from_roots(linops::general_eig(&a_y)?.values()), d);
        RationalFunction::new(num, den)
    }
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Sign relating `B` and `Cᵀ` in a symmetric realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PortSign {
    /// `B = Cᵀ`
    Plus,
    /// `B = −Cᵀ`
    Minus,
}

impl PortSign {
    pub fn value(self) -> f64 {
        match self {
            PortSign::Plus => 1.0,
            PortSign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryCertificate {
    pub is_symmetric: bool,
    /// The closer of the two candidate relations `B = ±Cᵀ`.
    pub sign: PortSign,
    pub defect: f64,
}

/// Checks dimensions, `n > m`, and full rank of `B` (columns) and `C`
/// (rows), then certifies symmetry.
pub fn validate_realization(r: &Realization, tol: f64) -> Result<SymmetryCertificate> {
    let (n, m) = (r.n(), r.m());
    if n <= m {
        return Err(Error::StateDimensionTooSmall { n, m });
    }
    let rank_b = numerical_rank(r.b());
    if rank_b < m {
        return Err(Error::RankDeficient {
            which: "B",
            rank: rank_b,
            expected: m,
        });
    }
    let rank_c = numerical_rank(r.c());
    if rank_c < m {
        return Err(Error::RankDeficient {
            which: "C",
            rank: rank_c,
            expected: m,
        });
    }
    Ok(r.symmetry(tol))
}

/// Rank with singular-value threshold `max(rows, cols)·ε·σ_max`.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    if smax == 0.0 {
        return 0;
    }
    let thresh = m.nrows().max(m.ncols()) as f64 * f64::EPSILON * smax;
    sv.iter().filter(|&&s| s > thresh).count()
}

/// Biproper SISO transfer function `n(s)/d(s)`, coefficients in descending
/// powers, denominator normalized monic.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl RationalFunction {
    pub fn new(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        if num.iter().chain(&den).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        let num = poly::trim(&num);
        let den = poly::trim(&den);
        if num.is_empty() || den.is_empty() || den[0] == 0.0 {
            return Err(Error::EmptyInput("numerator or denominator"));
        }
        if num[0] == 0.0 {
            return Err(Error::NotBiproper("numerator is identically zero".into()));
        }
        if num.len() != den.len() {
            return Err(Error::NotBiproper(format!(
                "numerator degree {} differs from denominator degree {}",
                num.len() - 1,
                den.len() - 1
            )));
        }
        let lead = den[0];
        Ok(RationalFunction {
            num: num.iter().map(|c| c / lead).collect(),
            den: den.iter().map(|c| c / lead).collect(),
        })
    }

    /// Builds `g · Π(s − z) / Π(s − p)` from real roots.
    pub fn from_roots(gain: f64, zeros: &[f64], poles: &[f64]) -> Result<Self> {
        let to_c = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
        let num = poly::scale(&poly::from_roots(&to_c(zeros)), gain);
        RationalFunction::new(num, poly::from_roots(&to_c(poles)))
    }

    pub fn num(&self) -> &[f64] {
        &self.num
    }

    pub fn den(&self) -> &[f64] {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.den.len() - 1
    }

    /// `G(∞)`, the ratio of leading coefficients.
    pub fn high_frequency_gain(&self) -> f64 {
        self.num[0]
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        poly::eval_complex(&self.num, s) / poly::eval_complex(&self.den, s)
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        poly::roots(&self.den)
    }

    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        poly::roots(&self.num)
    }
}

/// Sign shared by all residues of a [`PoleResidue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResidueSign {
    Positive,
    Negative,
}

impl ResidueSign {
    pub fn name(self) -> &'static str {
        match self {
            ResidueSign::Positive => "positive",
            ResidueSign::Negative => "negative",
        }
    }
}

/// Partial-fraction data `G(s) = g_∞ + Σ g_k / (s − p_k)` with real,
/// distinct, negative poles (ascending) and residues of one sign.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleResidue {
    g_inf: f64,
    poles: Vec<f64>,
    residues: Vec<f64>,
    sign: ResidueSign,
}

impl PoleResidue {
    /// Validates and sorts the poles ascending, carrying residues along.
    pub fn new(g_inf: f64, poles: Vec<f64>, residues: Vec<f64>) -> Result<Self> {
        if poles.len() != residues.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} poles but {} residues",
                poles.len(),
                residues.len()
            )));
        }
        if !g_inf.is_finite() || g_inf <= 0.0 {
            return Err(Error::InvalidArgument(format!("g_inf must be positive, got {g_inf}")));
        }
        let mut pairs: Vec<(f64, f64)> = poles.into_iter().zip(residues).collect();
        if pairs.iter().any(|(p, g)| !p.is_finite() || !g.is_finite()) {
            return Err(Error::InvalidArgument("non-finite pole or residue".into()));
        }
        if let Some((p, _)) = pairs.iter().find(|(p, _)| *p >= 0.0) {
            return Err(Error::InvalidPoles(format!("pole {p} is not negative")));
        }
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let scale = pairs.iter().fold(0.0f64, |a, (p, _)| a.max(p.abs()));
        for w in pairs.windows(2) {
            let gap = w[1].0 - w[0].0;
            if gap <= 1e-12 * scale {
                return Err(Error::RepeatedPoles { gap });
            }
        }
        if let Some((p, _)) = pairs.iter().find(|(_, g)| *g == 0.0) {
            return Err(Error::ZeroResidue { pole: *p });
        }
        let positive = pairs.iter().filter(|(_, g)| *g > 0.0).count();
        let sign = if positive == pairs.len() {
            ResidueSign::Positive
        } else if positive == 0 {
            ResidueSign::Negative
        } else {
            return Err(Error::MixedResidueSigns);
        };
        let (poles, residues) = pairs.into_iter().unzip();
        Ok(PoleResidue {
            g_inf,
            poles,
            residues,
            sign,
        })
    }

    pub fn g_inf(&self) -> f64 {
        self.g_inf
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    pub fn residues(&self) -> &[f64] {
        &self.residues
    }

    /// Residue sign; `Positive` when there are no poles.
    pub fn sign(&self) -> ResidueSign {
        self.sign
    }

    pub fn order(&self) -> usize {
        self.poles.len()
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.poles
            .iter()
            .zip(&self.residues)
            .fold(Complex64::new(self.g_inf, 0.0), |acc, (&p, &g)| acc + g / (s - p))
    }

    /// Recombines the partial fractions into `n(s)/d(s)`.
    pub fn to_rational(&self) -> Result<RationalFunction> {
        let roots: Vec<Complex64> = self.poles.iter().map(|&p| Complex64::new(p, 0.0)).collect();
        let den = poly::from_roots(&roots);
        let mut num = poly::scale(&den, self.g_inf);
        for (k, &g) in self.residues.iter().enumerate() {
            let others: Vec<Complex64> = roots
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, &r)| r)
                .collect();
            num = poly::add(&num, &poly::scale(&poly::from_roots(&others), g));
        }
        RationalFunction::new(num, den)
    }
}

fn complex_order(x: &Complex64, y: &Complex64) -> Ordering {
    x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
}

/// Eigenvalue multiset ordered by real part, then imaginary part, with
/// its open left/right half-plane partition.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<Complex64>,
    stable: Vec<usize>,
    antistable: Vec<usize>,
}

impl Spectrum {
    pub fn new(mut values: Vec<Complex64>) -> Self {
        values.sort_by(complex_order);
        let stable = (0..values.len()).filter(|&i| values[i].re < 0.0).collect();
        let antistable = (0..values.len()).filter(|&i| values[i].re > 0.0).collect();
        Spectrum {
            values,
            stable,
            antistable,
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Indices (into `values`) with negative real part.
    pub fn stable_indices(&self) -> &[usize] {
        &self.stable
    }

    /// Indices (into `values`) with positive real part.
    pub fn antistable_indices(&self) -> &[usize] {
        &self.antistable
    }

    pub fn stable(&self) -> Vec<Complex64> {
        self.stable.iter().map(|&i| self.values[i]).collect()
    }

    pub fn antistable(&self) -> Vec<Complex64> {
        self.antistable.iter().map(|&i| self.values[i]).collect()
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, z| a.max(z.im.abs()))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    /// Real parts of all values, ascending.
    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }
}

/// Largest relative distance `|a − b| / max(1, |a|)` under a greedy
/// nearest-neighbour matching of two complex multisets; infinite when the
/// sizes differ.
pub fn matching_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("sizes match");
        used[j] = true;
        worst = worst.max(d / x.norm().max(1.0));
    }
    worst
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|z| {
                if z.im == 0.0 {
                    format!("{:.6}", z.re)
                } else {
                    format!("{:.6}{:+.6}j", z.re, z.im)
                }
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Reals sorted ascending with consecutive gaps `ν_i = λ_{i+1} − λ_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedReals {
    values: Vec<f64>,
    diffs: Vec<f64>,
}

impl OrderedReals {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn diffs(&self) -> &[f64] {
        &self.diffs
    }

    /// Smallest gap; `None` for a singleton.
    pub fn nu_min(&self) -> Option<f64> {
        self.diffs.iter().copied().reduce(f64::min)
    }

    /// Largest gap; `None` for a singleton.
    pub fn nu_max(&self) -> Option<f64> {
        self.diffs.iter().copied().reduce(f64::max)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Stable ascending sort (ties keep their input order).
pub fn order_reals(xs: &[f64]) -> Result<OrderedReals> {
    if xs.is_empty() {
        return Err(Error::EmptyInput("list of reals"));
    }
    if xs.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidArgument("NaN in list of reals".into()));
    }
    let mut values = xs.to_vec();
    values.sort_by(|a, b| a.total_cmp(b));
    let diffs = values.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(OrderedReals { values, diffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sec1b() -> Realization {
        let s2 = 2f64.sqrt();
        Realization::from_rows(2, 1, &[-1.0, 0.0, 0.0, -3.0], &[s2, 1.0], &[s2, 1.0], &[1.0]).unwrap()
    }

    #[test]
    fn symmetric_plus() {
        let cert = validate_realization(&sec1b(), SYMMETRY_TOL).unwrap();
        assert!(cert.is_symmetric);
        assert_eq!(cert.sign, PortSign::Plus);
        assert_eq!(cert.defect, 0.0);
    }

    #[test]
    fn jordan_block_not_symmetric() {
        let r = Realization::from_rows(2, 1, &[0.0, 1.0, 0.0, 0.0], &[0.0, 1.0], &[1.0, 0.0], &[1.0]).unwrap();
        let cert = validate_realization(&r, SYMMETRY_TOL).unwrap();
        assert!(!cert.is_symmetric);
        assert_eq!(cert.defect, 1.0);
    }

    #[test]
    fn symmetric_minus() {
        let s2 = 2f64.sqrt();
        let r = Realization::from_rows(2, 1, &[-3.0, -s2, -s2, -4.0], &[s2, 1.0], &[-s2, -1.0], &[1.0]).unwrap();
        let cert = validate_realization(&r, SYMMETRY_TOL).unwrap();
        assert!(cert.is_symmetric);
        assert_eq!(cert.sign, PortSign::Minus);
    }

    #[test]
    fn structural_errors() {
        let bad = Realization::from_rows(2, 1, &[-1.0, 0.0, 0.0, -2.0], &[1.0], &[1.0, 1.0], &[1.0]);
        assert!(matches!(bad, Err(Error::DimensionMismatch(_))));
        let scalar = Realization::from_rows(1, 1, &[-1.0], &[1.0], &[1.0], &[1.0]).unwrap();
        assert_eq!(
            validate_realization(&scalar, SYMMETRY_TOL),
            Err(Error::StateDimensionTooSmall { n: 1, m: 1 })
        );
        let zero_b = Realization::from_rows(2, 1, &[-1.0, 0.0, 0.0, -2.0], &[0.0, 0.0], &[1.0, 1.0], &[1.0]).unwrap();
        assert!(matches!(
            validate_realization(&zero_b, SYMMETRY_TOL),
            Err(Error::RankDeficient { which: "B", .. })
        ));
    }

    #[test]
    fn order_reals_examples() {
        let o = order_reals(&[-3.0, -8.0, -4.0, -7.0]).unwrap();
        assert_eq!(o.values(), &[-8.0, -7.0, -4.0, -3.0]);
        assert_eq!(o.diffs(), &[1.0, 3.0, 1.0]);
        assert_eq!(o.nu_min(), Some(1.0));
        assert_eq!(o.nu_max(), Some(3.0));

        let s = order_reals(&[5.0]).unwrap();
        assert!(s.diffs().is_empty());
        assert_eq!(s.nu_min(), None);

        let t = order_reals(&[2.0, 2.0, 3.0]).unwrap();
        assert_eq!(t.diffs(), &[0.0, 1.0]);
        assert_eq!(t.nu_min(), Some(0.0));

        assert_eq!(order_reals(&[]), Err(Error::EmptyInput("list of reals")));
    }

    #[test]
    fn transfer_function_of_sec1b() {
        let tf = sec1b().transfer_function().unwrap();
        // (s+2)(s+5) / ((s+1)(s+3))
        let num = [1.0, 7.0, 10.0];
        let den = [1.0, 4.0, 3.0];
        for k in 0..3 {
            assert!((tf.num()[k] - num[k]).abs() < 1e-12);
            assert!((tf.den()[k] - den[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn pole_residue_validation() {
        let pr = PoleResidue::new(1.0, vec![-1.0, -3.0], vec![2.0, 1.0]).unwrap();
        assert_eq!(pr.poles(), &[-3.0, -1.0]);
        assert_eq!(pr.residues(), &[1.0, 2.0]);
        assert_eq!(pr.sign(), ResidueSign::Positive);
        assert_eq!(
            PoleResidue::new(1.0, vec![-1.0, -2.0], vec![1.0, -1.0]),
            Err(Error::MixedResidueSigns)
        );
        assert!(matches!(
            PoleResidue::new(1.0, vec![-1.0, -1.0], vec![1.0, 1.0]),
            Err(Error::RepeatedPoles { .. })
        ));
        assert!(matches!(
            PoleResidue::new(1.0, vec![1.0], vec![1.0]),
            Err(Error::InvalidPoles(_))
        ));
        assert_eq!(
            PoleResidue::new(1.0, vec![-1.0], vec![0.0]),
            Err(Error::ZeroResidue { pole: -1.0 })
        );
        let tf = pr.to_rational().unwrap();
        assert_eq!(tf.num(), &[1.0, 7.0, 10.0]);
        assert_eq!(tf.den(), &[1.0, 4.0, 3.0]);
    }

    #[test]
    fn rational_normalizes_monic() {
        let f = RationalFunction::new(vec![2.0, 8.0], vec![2.0, 2.0]).unwrap();
        assert_eq!(f.num(), &[1.0, 4.0]);
        assert_eq!(f.den(), &[1.0, 1.0]);
        assert!(matches!(
            RationalFunction::new(vec![1.0], vec![1.0, 1.0]),
            Err(Error::NotBiproper(_))
        ));
    }

    #[test]
    fn spectrum_partition() {
        let s = Spectrum::new(vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(-1.0, 1.0),
            Complex64::new(-1.0, -1.0),
            Complex64::new(-2.0, 0.0),
        ]);
        assert_eq!(s.values()[0], Complex64::new(-2.0, 0.0));
        assert_eq!(s.values()[1], Complex64::new(-1.0, -1.0));
        assert_eq!(s.stable_indices(), &[0, 1, 2]);
        assert_eq!(s.antistable_indices(), &[3]);
    }

    proptest! {
        #[test]
        fn order_reals_idempotent_and_permutation_invariant(
            xs in proptest::collection::vec(-100.0f64..100.0, 1..20),
            seed in any::<u64>(),
        ) {
            let once = order_reals(&xs).unwrap();
            let twice = order_reals(once.values()).unwrap();
            prop_assert_eq!(&once, &twice);
            let mut shuffled = xs.clone();
            let len = shuffled.len();
            let mut state = seed;
            for i in (1..len).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                shuffled.swap(i, (state >> 33) as usize % (i + 1));
            }
            prop_assert_eq!(order_reals(&shuffled).unwrap(), once);
        }

        #[test]
        fn symmetric_certificate_survives_dual(
            diag in proptest::collection::vec(-10.0f64..-0.1, 3..6),
            b0 in 0.1f64..3.0,
        ) {
            let n = diag.len();
            let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
            let b = DMatrix::from_fn(n, 1, |i, _| b0 + i as f64);
            let r = Realization::new(a, b.clone(), b.transpose(), DMatrix::identity(1, 1)).unwrap();
            let cert = validate_realization(&r, SYMMETRY_TOL).unwrap();
            prop_assert_eq!(cert.defect, 0.0);
            prop_assert_eq!(validate_realization(&r.dual(), SYMMETRY_TOL).unwrap(), cert);
        }
    }
}
