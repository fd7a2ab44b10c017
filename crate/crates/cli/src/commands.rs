use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use passive_spectra::balancing::{pr_balance, quasi_balance_form1, quasi_balance_form2};
use passive_spectra::fmt::{format_sig, round_sig, sig12};
use passive_spectra::interlace::{eta_scan, eta_threshold, spectral_interlace_check, system_poles, system_zeros};
use passive_spectra::linops::general_eig;
use passive_spectra::model::matching_distance;
use passive_spectra::oracle::{oracle_spectral_zeros, szp_polynomial, vieta_checks};
use passive_spectra::passivity::{hamiltonian, is_strictly_passive, spectral_zeros};
use passive_spectra::synth::{foster1_rc, foster2_rl, netlist};
use passive_spectra::{validate_realization, Error, EtaScanRow, EvenPolynomial, FosterKind, PortSign};
use serde::Serialize;

use crate::input::{load_matrix, load_system, matrix_rows, SystemFile};
use crate::output::{decimals, matrix, nums, spectrum, to_json, ComplexNum, Num};
use crate::{CliError, FormArg, ReportFormat, TableFormat};

/// Relative agreement required between the Hamiltonian and the even
/// polynomial.
const ORACLE_TOL: f64 = 1e-6;

/// `K_max·K_min = I` is reported when the defect is below this, relative to
/// `1 + ‖K_max‖‖K_min‖`.
const RECIPROCITY_TOL: f64 = 1e-8;

fn sign_name(s: PortSign) -> &'static str {
    match s {
        PortSign::Plus => "B = C^T",
        PortSign::Minus => "B = -C^T",
    }
}

#[derive(Serialize)]
struct Residuals {
    #[serde(rename = "K_min")]
    k_min: Num,
    #[serde(rename = "K_max")]
    k_max: Num,
}

#[derive(Serialize)]
struct AnalyzeReport {
    name: String,
    n: usize,
    m: usize,
    poles: Vec<ComplexNum>,
    /// `null` when `D` is singular.
    zeros: Option<Vec<ComplexNum>>,
    spectral_zeros: Vec<ComplexNum>,
    symmetric: bool,
    port_sign: Option<&'static str>,
    symmetry_defect: Num,
    strictly_passive: bool,
    passivity_reasons: Vec<String>,
    #[serde(rename = "K_min")]
    k_min: Option<Vec<Vec<Num>>>,
    #[serde(rename = "K_max")]
    k_max: Option<Vec<Vec<Num>>>,
    residuals: Option<Residuals>,
    reciprocity_defect: Option<Num>,
    #[serde(rename = "K_max_K_min_is_identity")]
    reciprocal: Option<bool>,
}

pub fn analyze(file: &Path, tol: f64) -> Result<String, CliError> {
    let sys = load_system(file)?;
    let r = sys.realization()?;
    let cert = if r.n() > r.m() {
        validate_realization(&r, tol)?
    } else {
        r.symmetry(tol)
    };
    let zeros = match system_zeros(&r) {
        Ok(z) => Some(spectrum(&z)),
        Err(Error::Singular(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let passivity = is_strictly_passive(&r);
    let storage = passivity.storage.as_ref();
    let report = AnalyzeReport {
        name: sys.name.clone(),
        n: r.n(),
        m: r.m(),
        poles: spectrum(&system_poles(&r)?),
        zeros,
        // no guard band here: non-passive systems are reported, not rejected
        spectral_zeros: spectrum(&general_eig(&hamiltonian(&r)?.matrix)?),
        symmetric: cert.is_symmetric,
        port_sign: cert.is_symmetric.then(|| sign_name(cert.sign)),
        symmetry_defect: Num(cert.defect),
        strictly_passive: passivity.strictly_passive,
        passivity_reasons: passivity.reasons.clone(),
        k_min: storage.map(|p| matrix(&p.k_min)),
        k_max: storage.map(|p| matrix(&p.k_max)),
        residuals: storage.map(|p| Residuals {
            k_min: Num(p.residual_min),
            k_max: Num(p.residual_max),
        }),
        reciprocity_defect: storage.map(|p| Num(p.reciprocity_defect())),
        reciprocal: storage
            .map(|p| p.reciprocity_defect() <= RECIPROCITY_TOL * (1.0 + p.k_max.norm() * p.k_min.norm())),
    };
    Ok(to_json(&report))
}

#[derive(Serialize)]
struct BalanceReport {
    form: &'static str,
    sigma: Vec<Num>,
    /// Largest deviation of the claimed diagonal storages from the
    /// recomputed ones.
    deviation: Num,
    transform: Vec<Vec<Num>>,
    system: SystemFile,
}

fn rounded(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    matrix_rows(&m.map(|v| round_sig(v, 12)))
}

pub fn balance(file: &Path, form: FormArg) -> Result<String, CliError> {
    let sys = load_system(file)?;
    let r = sys.realization()?;
    let bal = match form {
        FormArg::Pr => pr_balance(&r)?,
        FormArg::Quasi1 => quasi_balance_form1(&r)?,
        FormArg::Quasi2 => quasi_balance_form2(&r)?,
    };
    let t = &bal.realization;
    let report = BalanceReport {
        form: bal.form.name(),
        sigma: nums(&bal.sigma),
        deviation: Num(bal.verify()?),
        transform: matrix(&bal.t),
        system: SystemFile {
            name: format!("{} ({})", sys.name, bal.form.name()),
            a: Some(rounded(t.a())),
            b: Some(rounded(t.b())),
            c: Some(rounded(t.c())),
            d: Some(rounded(t.d())),
            ..SystemFile::default()
        },
    };
    Ok(to_json(&report))
}

#[derive(Serialize)]
struct InterlaceReport {
    name: String,
    zeros: Vec<Num>,
    spectral_zeros: Vec<Num>,
    poles: Vec<Num>,
    remark: &'static str,
    orientation: &'static str,
    zip_margin: Num,
    sandwich: Vec<bool>,
    margins: Vec<Num>,
    full_chain: Option<bool>,
}

pub fn interlace(file: &Path, format: ReportFormat, digits: usize) -> Result<String, CliError> {
    let sys = load_system(file)?;
    let rep = spectral_interlace_check(&sys.realization()?)?;
    let mu = rep.stable_spectral.as_ref().expect("filled for realizations");
    if let ReportFormat::Json = format {
        return Ok(to_json(&InterlaceReport {
            name: sys.name,
            zeros: nums(rep.zeros.values()),
            spectral_zeros: nums(mu.values()),
            poles: nums(rep.poles.values()),
            remark: rep.remark(),
            orientation: rep.orientation.name(),
            zip_margin: Num(rep.zip_margin),
            sandwich: rep.sandwich.clone(),
            margins: nums(&rep.margins),
            full_chain: rep.full_chain,
        }));
    }

    let f = |x: f64| format_sig(x, digits);
    let mut out = String::new();
    writeln!(out, "# {}\n", sys.name).unwrap();
    out.push_str("| i | zero | spectral zero | pole | sandwich | slack |\n");
    out.push_str("|---|---|---|---|---|---|\n");
    for i in 0..rep.poles.len() {
        writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            i + 1,
            f(rep.zeros.values()[i]),
            f(mu.values()[i]),
            f(rep.poles.values()[i]),
            if rep.sandwich[i] { "holds" } else { "fails" },
            format_sig(rep.margins[i], 3),
        )
        .unwrap();
    }
    writeln!(out, "\nremark: {}", rep.remark()).unwrap();
    writeln!(out, "orientation: {}", rep.orientation.name()).unwrap();
    writeln!(out, "ZIP margin: {}", format_sig(rep.zip_margin, 3)).unwrap();
    writeln!(
        out,
        "sandwich: {}",
        if rep.sandwich_holds() { "holds" } else { "fails" }
    )
    .unwrap();
    let chain = match rep.full_chain {
        Some(true) => "strict",
        Some(false) => "not strict",
        None => "n/a",
    };
    writeln!(out, "full chain: {chain}").unwrap();
    Ok(out)
}

fn joined(xs: &[f64], digits: usize, sep: &str) -> String {
    xs.iter().map(|&x| decimals(x, digits)).collect::<Vec<_>>().join(sep)
}

fn scan_table(rows: &[EtaScanRow], digits: usize, format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Markdown => {
            out.push_str("| η | system zeros | spectral zeros | system poles | remark |\n");
            out.push_str("|---|---|---|---|---|\n");
            for row in rows {
                writeln!(
                    out,
                    "| {} | {} | {} | {} | {} |",
                    sig12(row.eta),
                    joined(row.zeros.values(), digits, ", "),
                    joined(row.stable_spectral.values(), digits, ", "),
                    joined(row.poles.values(), digits, ", "),
                    row.report.remark(),
                )
                .unwrap();
            }
        }
        TableFormat::Csv => {
            let n = rows.first().map_or(0, |r| r.poles.len());
            let mut header = vec!["eta".to_string()];
            for prefix in ["z", "mu", "p"] {
                header.extend((1..=n).map(|i| format!("{prefix}{i}")));
            }
            header.extend(["zip".to_string(), "remark".to_string()]);
            writeln!(out, "{}", header.join(",")).unwrap();
            for row in rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    sig12(row.eta),
                    joined(row.zeros.values(), digits, ","),
                    joined(row.stable_spectral.values(), digits, ","),
                    joined(row.poles.values(), digits, ","),
                    row.zip,
                    row.report.remark(),
                )
                .unwrap();
            }
        }
    }
    out
}

pub fn scan_eta(
    file: &Path,
    d0: Option<&Path>,
    etas: Option<&[f64]>,
    bisect: Option<&[f64]>,
    digits: usize,
    format: TableFormat,
) -> Result<String, CliError> {
    let sys = load_system(file)?;
    let r = sys.realization()?;
    let d0 = match d0 {
        Some(path) => load_matrix(path)?,
        None => r.d().clone(),
    };
    if etas.is_none() && bisect.is_none() {
        return Err(CliError::Input("give --etas, --bisect or both".into()));
    }
    let mut out = String::new();
    if let Some(etas) = etas {
        out.push_str(&scan_table(&eta_scan(&r, &d0, etas)?, digits, format));
    }
    if let Some(&[lo, hi]) = bisect {
        let star = eta_threshold(&r, &d0, lo, hi)?;
        writeln!(out, "η* = {}", sig12(star)).unwrap();
    }
    Ok(out)
}

pub fn synth(file: &Path, foster: u8, netlist_path: Option<&Path>) -> Result<String, CliError> {
    let sys = load_system(file)?;
    let pr = sys.pole_residue()?;
    let net = if foster == 1 {
        foster1_rc(&pr)?
    } else {
        foster2_rl(&pr)?
    };
    let (title, reactive) = match net.kind {
        FosterKind::RcFosterI => ("Foster-I RC impedance", "C"),
        FosterKind::RlFosterII => ("Foster-II RL admittance", "L"),
    };
    let mut out = String::new();
    writeln!(out, "# {}: {title}\n", sys.name).unwrap();
    out.push_str("| element | value |\n|---|---|\n");
    writeln!(out, "| R0 | {} |", sig12(net.resistor)).unwrap();
    for (i, b) in net.branches.iter().enumerate() {
        writeln!(out, "| R{} | {} |", i + 1, sig12(b.resistance)).unwrap();
        writeln!(out, "| {reactive}{} | {} |", i + 1, sig12(b.reactive)).unwrap();
    }
    if let Some(path) = netlist_path {
        std::fs::write(path, netlist(&net))
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(out)
}

fn even_polynomial_text(p: &EvenPolynomial) -> String {
    let deg = p.degree();
    let mut out = String::new();
    for (k, &c) in p.coeffs().iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let power = deg - 2 * k;
        let magnitude = c.abs();
        let coef = if magnitude == 1.0 && power > 0 {
            String::new()
        } else {
            sig12(magnitude)
        };
        let term = match power {
            0 => coef,
            _ => format!("{coef}s^{power}"),
        };
        if out.is_empty() {
            out = if c < 0.0 { format!("-{term}") } else { term };
        } else {
            write!(out, " {} {term}", if c < 0.0 { '-' } else { '+' }).unwrap();
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Serialize)]
struct VietaJson {
    product: Num,
    product_expected: Num,
    sum_of_squares: Num,
    sum_of_squares_expected: Num,
    holds: bool,
}

#[derive(Serialize)]
struct OracleReport {
    name: String,
    even_polynomial: String,
    /// Coefficients of the even polynomial in `s²`, descending.
    even_coefficients: Vec<Num>,
    oracle_spectral_zeros: Vec<ComplexNum>,
    hamiltonian_spectral_zeros: Vec<ComplexNum>,
    distance: Num,
    #[serde(rename = "match")]
    matched: bool,
    /// Present when the poles and zeros are real and negative.
    vieta: Option<VietaJson>,
}

pub fn oracle_check(file: &Path) -> Result<String, CliError> {
    let sys = load_system(file)?;
    let f = sys.rational()?;
    let p = szp_polynomial(&f)?;
    let oracle = oracle_spectral_zeros(&f)?;
    let hamiltonian = spectral_zeros(&sys.realization()?)?;
    let distance = matching_distance(oracle.values(), hamiltonian.values());
    let vieta = match vieta_checks(&f) {
        Ok(v) => Some(VietaJson {
            product: Num(v.product),
            product_expected: Num(v.product_expected),
            sum_of_squares: Num(v.sum_of_squares),
            sum_of_squares_expected: Num(v.sum_of_squares_expected),
            holds: v.holds,
        }),
        Err(e) if e.is_numerical() => return Err(e.into()),
        Err(_) => None,
    };
    Ok(to_json(&OracleReport {
        name: sys.name,
        even_polynomial: even_polynomial_text(&p),
        even_coefficients: nums(p.coeffs()),
        oracle_spectral_zeros: spectrum(&oracle),
        hamiltonian_spectral_zeros: spectrum(&hamiltonian),
        distance: Num(distance),
        matched: distance <= ORACLE_TOL,
        vieta,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_text() {
        let p = EvenPolynomial::new(vec![2.0, -14.0, 48.0]).unwrap();
        assert_eq!(even_polynomial_text(&p), "2s^4 - 14s^2 + 48");
        let q = EvenPolynomial::new(vec![-1.0, 0.0, 0.5]).unwrap();
        assert_eq!(even_polynomial_text(&q), "-s^4 + 0.5");
    }
}
