//! Symmetric realizations from pole/residue data and Foster RC/RL
//! one-port networks with netlist export.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmt::sig12;
use crate::model::{PoleResidue, RationalFunction, Realization, ResidueSign};
use crate::poly;

/// Relative size of imaginary parts tolerated on poles taken as real.
const REAL_POLE_TOL: f64 = 1e-8;

/// Residues smaller than this, relative to the function's scale, are
/// treated as cancelled.
const ZERO_RESIDUE_TOL: f64 = 1e-10;

fn real_distinct_poles(f: &RationalFunction) -> Result<Vec<f64>> {
    let poles = f.poles()?;
    let scale = poles.iter().fold(1.0f64, |a, z| a.max(z.norm()));
    if let Some(z) = poles.iter().find(|z| z.im.abs() > REAL_POLE_TOL * scale) {
        return Err(Error::InvalidPoles(format!("pole {}{:+}j is not real", z.re, z.im)));
    }
    let mut re: Vec<f64> = poles.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    for w in re.windows(2) {
        if w[1] - w[0] <= REAL_POLE_TOL * scale {
            return Err(Error::RepeatedPoles { gap: w[1] - w[0] });
        }
    }
    Ok(re)
}

fn residues_at(f: &RationalFunction, poles: &[f64]) -> Vec<f64> {
    let dd = poly::derivative(f.den());
    poles
        .iter()
        .map(|&p| poly::eval(f.num(), p) / poly::eval(&dd, p))
        .collect()
}

/// Partial fractions `g_∞ + Σ g_k/(s − p_k)` of a biproper function with
/// real, distinct, negative poles and residues of one sign.
pub fn pole_residue_from_rational(f: &RationalFunction) -> Result<PoleResidue> {
    let poles = real_distinct_poles(f)?;
    let mut residues = residues_at(f, &poles);
    let g_inf = f.high_frequency_gain();
    let scale = g_inf.abs() + residues.iter().map(|g| g.abs()).sum::<f64>();
    for g in residues.iter_mut() {
        if g.abs() <= ZERO_RESIDUE_TOL * scale {
            *g = 0.0;
        }
    }
    PoleResidue::new(g_inf, poles, residues)
}

/// `A = diag(p)`, `B = (|g_k|^{1/2})`, `C = ±Bᵀ` by residue sign, `D = g_∞`.
pub fn symmetric_from_pole_residue(pr: &PoleResidue) -> Realization {
    let n = pr.order();
    let a = DMatrix::from_diagonal(&DVector::from_row_slice(pr.poles()));
    let b = DMatrix::from_iterator(n, 1, pr.residues().iter().map(|g| g.abs().sqrt()));
    let c = match pr.sign() {
        ResidueSign::Positive => b.transpose(),
        ResidueSign::Negative => -b.transpose(),
    };
    Realization::new(a, b, c, DMatrix::from_element(1, 1, pr.g_inf()))
        .expect("dimensions are consistent by construction")
}

/// A state-space realization of any biproper SISO function: symmetric when
/// the partial fractions allow it, modal (`A = diag(p)`, `B = g`,
/// `C = 1ᵀ`) for other real distinct poles, controllable canonical form
/// otherwise.
pub fn realize_rational(f: &RationalFunction) -> Result<Realization> {
    if let Ok(pr) = pole_residue_from_rational(f) {
        return Ok(symmetric_from_pole_residue(&pr));
    }
    let g_inf = f.high_frequency_gain();
    let d = DMatrix::from_element(1, 1, g_inf);
    if let Ok(poles) = real_distinct_poles(f) {
        let n = poles.len();
        let g = residues_at(f, &poles);
        return Realization::new(
            DMatrix::from_diagonal(&DVector::from_row_slice(&poles)),
            DMatrix::from_row_slice(n, 1, &g),
            DMatrix::from_element(1, n, 1.0),
            d,
        );
    }
    let n = f.degree();
    let rem = poly::add(f.num(), &poly::scale(f.den(), -g_inf));
    let mut a = DMatrix::zeros(n, n);
    for j in 0..n {
        a[(0, j)] = -f.den()[j + 1];
    }
    for i in 1..n {
        a[(i, i - 1)] = 1.0;
    }
    let mut b = DMatrix::zeros(n, 1);
    b[(0, 0)] = 1.0;
    let c = DMatrix::from_row_slice(1, n, &rem[1..]);
    Realization::new(a, b, c, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FosterKind {
    /// Series resistor and parallel R‖C sections realizing an impedance.
    RcFosterI,
    /// Shunt resistor and series R–L branches realizing an admittance.
    RlFosterII,
}

/// One pole section: a resistor with a capacitor (RC) or inductor (RL).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FosterBranch {
    pub resistance: f64,
    /// Capacitance in farads (RC) or inductance in henries (RL).
    pub reactive: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FosterNetwork {
    pub kind: FosterKind,
    /// The resistor realizing `g_∞`: series for RC, shunt for RL.
    pub resistor: f64,
    /// One branch per pole, in ascending pole order.
    pub branches: Vec<FosterBranch>,
}

fn require_positive(pr: &PoleResidue) -> Result<()> {
    match pr.sign() {
        ResidueSign::Positive => Ok(()),
        found => Err(Error::WrongResidueSign {
            expected: ResidueSign::Positive.name(),
            found: found.name(),
        }),
    }
}

/// Foster-I RC impedance: series `R = g_∞`, then per pole a parallel
/// section with `C_k = 1/g_k` and `R_k = g_k/(−p_k)`.
pub fn foster1_rc(pr: &PoleResidue) -> Result<FosterNetwork> {
    require_positive(pr)?;
    Ok(FosterNetwork {
        kind: FosterKind::RcFosterI,
        resistor: pr.g_inf(),
        branches: pr
            .poles()
            .iter()
            .zip(pr.residues())
            .map(|(&p, &g)| FosterBranch {
                resistance: g / -p,
                reactive: 1.0 / g,
            })
            .collect(),
    })
}

/// Foster-II RL admittance: shunt `R = 1/g_∞`, then per pole a series
/// branch with `L_k = 1/g_k` and `R_k = −p_k/g_k`.
pub fn foster2_rl(pr: &PoleResidue) -> Result<FosterNetwork> {
    require_positive(pr)?;
    Ok(FosterNetwork {
        kind: FosterKind::RlFosterII,
        resistor: 1.0 / pr.g_inf(),
        branches: pr
            .poles()
            .iter()
            .zip(pr.residues())
            .map(|(&p, &g)| FosterBranch {
                resistance: -p / g,
                reactive: 1.0 / g,
            })
            .collect(),
    })
}

impl FosterNetwork {
    pub fn element_count(&self) -> usize {
        1 + 2 * self.branches.len()
    }

    /// Impedance (RC) or admittance (RL) seen at the port, evaluated from
    /// the element values.
    pub fn driving_point(&self, s: Complex64) -> Complex64 {
        match self.kind {
            FosterKind::RcFosterI => self.branches.iter().fold(Complex64::new(self.resistor, 0.0), |z, b| {
                z + 1.0 / (1.0 / b.resistance + s * b.reactive)
            }),
            FosterKind::RlFosterII => self
                .branches
                .iter()
                .fold(Complex64::new(1.0 / self.resistor, 0.0), |y, b| {
                    y + 1.0 / (b.resistance + s * b.reactive)
                }),
        }
    }

    /// The port function as a ratio of polynomials built from the element
    /// values.
    pub fn driving_point_function(&self) -> Result<RationalFunction> {
        // each section contributes num_k / den_k
        let sections: Vec<(Vec<f64>, Vec<f64>)> = self
            .branches
            .iter()
            .map(|b| match self.kind {
                // R/(1 + sRC)
                FosterKind::RcFosterI => (vec![b.resistance], vec![b.resistance * b.reactive, 1.0]),
                // 1/(R + sL)
                FosterKind::RlFosterII => (vec![1.0], vec![b.reactive, b.resistance]),
            })
            .collect();
        let constant = match self.kind {
            FosterKind::RcFosterI => self.resistor,
            FosterKind::RlFosterII => 1.0 / self.resistor,
        };
        let mut num = vec![constant];
        let mut den = vec![1.0];
        for (n_k, d_k) in sections {
            num = poly::add(&poly::mul(&num, &d_k), &poly::mul(&n_k, &den));
            den = poly::mul(&den, &d_k);
        }
        RationalFunction::new(num, den)
    }
}

/// SPICE-style two-terminal netlist between nodes `in` and `0`, values
/// with 12 significant digits.
pub fn netlist(net: &FosterNetwork) -> String {
    let mut out = String::new();
    let k = net.branches.len();
    match net.kind {
        FosterKind::RcFosterI => {
            out.push_str("* Foster-I RC impedance\n");
            let node = |i: usize| if i == k { "0".to_string() } else { format!("n{}", i + 1) };
            let first = if k == 0 { "0".to_string() } else { "n1".to_string() };
            writeln!(out, "R0 in {first} {}", sig12(net.resistor)).unwrap();
            for (i, b) in net.branches.iter().enumerate() {
                let (a, z) = (format!("n{}", i + 1), node(i + 1));
                writeln!(out, "R{} {a} {z} {}", i + 1, sig12(b.resistance)).unwrap();
                writeln!(out, "C{} {a} {z} {}", i + 1, sig12(b.reactive)).unwrap();
            }
        }
        FosterKind::RlFosterII => {
            out.push_str("* Foster-II RL admittance\n");
            writeln!(out, "R0 in 0 {}", sig12(net.resistor)).unwrap();
            for (i, b) in net.branches.iter().enumerate() {
                writeln!(out, "R{} in m{} {}", i + 1, i + 1, sig12(b.resistance)).unwrap();
                writeln!(out, "L{} m{} 0 {}", i + 1, i + 1, sig12(b.reactive)).unwrap();
            }
        }
    }
    out.push_str(".end\n");
    out
}
