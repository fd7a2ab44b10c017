//! Acceptance run: one pass/fail line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use passive_spectra::balancing::{form1_to_form2, quasi_balance_form1, quasi_balance_form2, singular_value_relations};
use passive_spectra::interlace::{
    eta_row, inverse_system, spectral_interlace_check, system_zeros, zip_sufficient_condition,
};
use passive_spectra::model::matching_distance;
use passive_spectra::oracle::{oracle_spectral_zeros, szp_polynomial, vieta_checks};
use passive_spectra::passivity::{extremal_solutions, spectral_zeros};
use passive_spectra::random::{strictly_passive_system, symmetric_system, zip_function};
use passive_spectra::synth::{foster1_rc, foster2_rl, pole_residue_from_rational, realize_rational};
use passive_spectra::{FosterNetwork, PortSign, RationalFunction, Realization};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn err(e: impl std::fmt::Display) -> Outcome {
    Outcome::new(false, format!("error: {e}"))
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn sign_for(k: usize) -> PortSign {
    if k % 2 == 0 {
        PortSign::Plus
    } else {
        PortSign::Minus
    }
}

// ---------------------------------------------------------------- AC1

fn two_pole_regression() -> Outcome {
    let f = match RationalFunction::from_roots(1.0, &[-1.0, -2.0], &[-3.0, -4.0]) {
        Ok(f) => f,
        Err(e) => return err(e),
    };
    let p = match szp_polynomial(&f) {
        Ok(p) => p,
        Err(e) => return err(e),
    };
    let exact = p.coeffs() == [2.0, -14.0, 48.0];
    let mu = match realize_rational(&f).and_then(|r| spectral_zeros(&r)) {
        Ok(s) => s,
        Err(e) => return err(e),
    };
    let expected: Vec<Complex64> = [(-2.05, -0.84), (-2.05, 0.84), (2.05, -0.84), (2.05, 0.84)]
        .iter()
        .map(|&(re, im)| Complex64::new(re, im))
        .collect();
    let worst = mu
        .values()
        .iter()
        .map(|z| expected.iter().map(|e| (z - e).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    Outcome::new(
        exact && worst <= 0.01 && mu.len() == 4,
        format!(
            "even polynomial {:?}, max distance to ±2.05±0.84j {worst:.4}",
            p.coeffs()
        ),
    )
}

// ---------------------------------------------------------------- AC2, AC3

struct TableRow {
    eta: f64,
    zeros: [f64; 4],
    spectral: [f64; 4],
    poles: [f64; 4],
    remark: &'static str,
}

fn check_table(r: &Realization, d0: &DMatrix<f64>, rows: &[TableRow]) -> Outcome {
    let mut worst = 0.0f64;
    let mut remarks_ok = true;
    let mut notes = Vec::new();
    for row in rows {
        let got = match eta_row(r, d0, row.eta) {
            Ok(g) => g,
            Err(e) => return err(e),
        };
        for (computed, reference) in [
            (got.zeros.values(), &row.zeros),
            (got.stable_spectral.values(), &row.spectral),
            (got.poles.values(), &row.poles),
        ] {
            if computed.len() != 4 {
                return Outcome::new(false, format!("eta = {}: expected 4 values", row.eta));
            }
            for (c, e) in computed.iter().zip(reference.iter()) {
                worst = worst.max((round2(*c) - e).abs());
            }
        }
        let remark = got.report.remark();
        remarks_ok &= remark == row.remark;
        notes.push(format!("eta={}: {remark}", row.eta));
    }
    Outcome::new(
        worst <= 0.01 + 1e-12 && remarks_ok,
        format!("max entry deviation {worst:.4}; {}", notes.join(", ")),
    )
}

fn decoupled_example() -> Realization {
    Realization::from_rows(
        4,
        2,
        &[
            -3.0, 0.0, 0.0, 0.0, 0.0, -4.0, 0.0, 0.0, 0.0, 0.0, -7.0, 0.0, 0.0, 0.0, 0.0, -8.0,
        ],
        &[1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0],
        &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0],
        &[1.0, 0.0, 0.0, 1.0],
    )
    .expect("valid example")
}

fn decoupled_scan() -> Outcome {
    let p = [-8.0, -7.0, -4.0, -3.0];
    let rows = [
        TableRow {
            eta: 1.0,
            zeros: [-9.24, -8.24, -4.76, -3.76],
            spectral: [-8.52, -7.51, -4.40, -3.40],
            poles: p,
            remark: "not interlaced",
        },
        TableRow {
            eta: 1.2,
            zeros: [-9.00, -8.00, -4.67, -3.67],
            spectral: [-8.43, -7.43, -4.35, -3.34],
            poles: p,
            remark: "verge-of interlaced",
        },
        TableRow {
            eta: 2.0,
            zeros: [-8.56, -7.56, -4.44, -3.44],
            spectral: [-8.26, -7.25, -4.22, -3.22],
            poles: p,
            remark: "interlaced",
        },
        TableRow {
            eta: 100.0,
            zeros: [-8.01, -7.01, -4.01, -3.01],
            spectral: [-8.005, -7.005, -4.005, -3.005],
            poles: p,
            remark: "interlaced",
        },
    ];
    check_table(&decoupled_example(), &DMatrix::identity(2, 2), &rows)
}

fn multi_agent_example() -> Realization {
    Realization::from_rows(
        4,
        2,
        &[
            -1.1, 1.0, 0.0, 0.0, 1.0, -2.1, 1.0, 0.0, 0.0, 1.0, -2.1, 1.0, 0.0, 0.0, 1.0, -1.1,
        ],
        &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        &[0.1, 0.0, 0.0, 0.1],
    )
    .expect("valid example")
}

fn multi_agent_scan() -> Outcome {
    let p = [-3.51, -2.10, -0.69, -0.10];
    let rows = [
        TableRow {
            eta: 1.0,
            zeros: [-11.22, -11.20, -2.98, -1.00],
            spectral: [-4.44, -3.91, -2.02, -0.39],
            poles: p,
            remark: "not interlaced",
        },
        TableRow {
            eta: 5.0,
            zeros: [-4.10, -3.51, -2.10, -0.69],
            spectral: [-3.67, -2.56, -1.24, -0.28],
            poles: p,
            remark: "verge-of interlaced",
        },
        TableRow {
            eta: 10.0,
            zeros: [-3.72, -2.72, -1.48, -0.48],
            spectral: [-3.59, -2.34, -1.01, -0.22],
            poles: p,
            remark: "interlaced",
        },
        TableRow {
            eta: 100.0,
            zeros: [-3.53, -2.15, -0.77, -0.15],
            spectral: [-3.52, -2.12, -0.73, -0.12],
            poles: p,
            remark: "interlaced",
        },
    ];
    // the tabulated values correspond to the feedthrough 0.1·I
    check_table(&multi_agent_example(), &(DMatrix::identity(2, 2) * 0.1), &rows)
}

// ---------------------------------------------------------------- AC4

fn two_state_example() -> Realization {
    let s2 = 2f64.sqrt();
    Realization::from_rows(2, 1, &[-1.0, 0.0, 0.0, -3.0], &[s2, 1.0], &[s2, 1.0], &[1.0]).expect("valid example")
}

fn branch_set_matches(net: &FosterNetwork, resistor: f64, expected: &[(f64, f64)]) -> bool {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12;
    close(net.resistor, resistor)
        && net.branches.len() == expected.len()
        && expected.iter().all(|&(r, x)| {
            net.branches
                .iter()
                .any(|b| close(b.resistance, r) && close(b.reactive, x))
        })
}

fn inverse_and_foster() -> Outcome {
    let r = two_state_example();
    let s2 = 2f64.sqrt();
    let y = match inverse_system(&r) {
        Ok(y) => y,
        Err(e) => return err(e),
    };
    let a_y = DMatrix::from_row_slice(2, 2, &[-3.0, -s2, -s2, -4.0]);
    let b_y = DMatrix::from_row_slice(2, 1, &[s2, 1.0]);
    let dev = (y.a() - &a_y)
        .amax()
        .max((y.b() - &b_y).amax())
        .max((y.c() + b_y.transpose()).amax())
        .max((y.d()[(0, 0)] - 1.0).abs());
    let zeros = match system_zeros(&r) {
        Ok(z) => z.real_parts(),
        Err(e) => return err(e),
    };
    let zeros_ok = zeros.len() == 2 && (zeros[0] + 5.0).abs() <= 1e-12 && (zeros[1] + 2.0).abs() <= 1e-12;

    let pr = match r.transfer_function().and_then(|f| pole_residue_from_rational(&f)) {
        Ok(pr) => pr,
        Err(e) => return err(e),
    };
    let (f1, f2) = match (foster1_rc(&pr), foster2_rl(&pr)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return err(e),
    };
    let foster_ok = branch_set_matches(&f1, 1.0, &[(2.0, 0.5), (1.0 / 3.0, 1.0)])
        && branch_set_matches(&f2, 1.0, &[(0.5, 0.5), (3.0, 1.0)]);
    Outcome::new(
        dev <= 1e-12 && zeros_ok && foster_ok,
        format!("inverse deviation {dev:.1e}, zeros {zeros:?}, Foster elements exact: {foster_ok}"),
    )
}

// ---------------------------------------------------------------- AC5

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xac05);
    let mut worst = 0.0f64;
    for k in 0..1000 {
        let s = zip_function(&mut rng, 6);
        let oracle = oracle_spectral_zeros(&s.f);
        let hamiltonian = realize_rational(&s.f).and_then(|r| spectral_zeros(&r));
        match (oracle, hamiltonian) {
            (Ok(a), Ok(b)) => worst = worst.max(matching_distance(a.values(), b.values())),
            (Err(e), _) | (_, Err(e)) => return err(format!("system {k}: {e}")),
        }
    }
    Outcome::new(
        worst <= 1e-6,
        format!("1000 systems, worst relative mismatch {worst:.2e}"),
    )
}

// ---------------------------------------------------------------- AC6, AC7

fn symmetric_batch() -> Vec<Realization> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xac06);
    (0..300).map(|k| symmetric_system(&mut rng, 8, sign_for(k))).collect()
}

fn reciprocal_storage(systems: &[Realization]) -> Outcome {
    let (mut worst_product, mut worst_residual) = (0.0f64, 0.0f64);
    for (k, r) in systems.iter().enumerate() {
        let pair = match extremal_solutions(r) {
            Ok(p) => p,
            Err(e) => return err(format!("system {k}: {e}")),
        };
        let n = r.n();
        worst_product = worst_product.max((&pair.k_max * &pair.k_min - DMatrix::identity(n, n)).norm());
        worst_residual = worst_residual
            .max(pair.residual_min / (1.0 + pair.k_min.norm()))
            .max(pair.residual_max / (1.0 + pair.k_max.norm()));
    }
    Outcome::new(
        worst_product <= 1e-8 && worst_residual <= 1e-8,
        format!(
            "{} systems, worst ‖K_max·K_min − I‖ {worst_product:.2e}, worst residual/(1+‖K‖) {worst_residual:.2e}",
            systems.len()
        ),
    )
}

fn interlacing_suite(systems: &[Realization]) -> Outcome {
    let (mut worst_imag, mut worst_sandwich, mut min_strict) = (0.0f64, f64::INFINITY, f64::INFINITY);
    let mut controllable = 0;
    for (k, r) in systems.iter().enumerate() {
        let spectrum = match spectral_zeros(r) {
            Ok(s) => s,
            Err(e) => return err(format!("system {k}: {e}")),
        };
        worst_imag = worst_imag.max(spectrum.max_imag());
        let report = match spectral_interlace_check(r) {
            Ok(rep) => rep,
            Err(e) => return err(format!("system {k}: {e}")),
        };
        if !report.sandwich_holds() {
            return Outcome::new(
                false,
                format!("system {k}: sandwich violated, margins {:?}", report.margins),
            );
        }
        let margin = report.min_margin().unwrap_or(f64::INFINITY);
        worst_sandwich = worst_sandwich.min(margin);
        match zip_sufficient_condition(r) {
            Ok(c) if c.controllable => {
                controllable += 1;
                min_strict = min_strict.min(margin);
            }
            Ok(_) => {}
            Err(e) => return err(format!("system {k}: {e}")),
        }
    }
    Outcome::new(
        worst_imag <= 1e-8 && min_strict > 1e-10,
        format!(
            "max |Im| {worst_imag:.1e}, smallest sandwich slack {worst_sandwich:.2e}, \
             {controllable} PBH-controllable with smallest slack {min_strict:.2e}"
        ),
    )
}

// ---------------------------------------------------------------- AC8

fn vieta_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xac08);
    let (mut worst_product, mut worst_sum) = (0.0f64, 0.0f64);
    for k in 0..500 {
        let s = zip_function(&mut rng, 6);
        match vieta_checks(&s.f) {
            Ok(rep) => {
                worst_product = worst_product.max(rep.product_rel_err);
                worst_sum = worst_sum.max(rep.sum_rel_err);
            }
            Err(e) => return err(format!("system {k}: {e}")),
        }
    }
    let mut worst_order_one = 0.0f64;
    for _ in 0..200 {
        let p: f64 = -rng.random_range(0.1..10.0);
        let z: f64 = -rng.random_range(0.1..10.0);
        if (p - z).abs() < 1e-3 {
            continue;
        }
        let f = match RationalFunction::from_roots(rng.random_range(0.2..5.0), &[z], &[p]) {
            Ok(f) => f,
            Err(e) => return err(e),
        };
        let mu = match oracle_spectral_zeros(&f) {
            Ok(s) => s.stable(),
            Err(e) => return err(e),
        };
        let expected = (p * z).sqrt();
        worst_order_one = worst_order_one.max((mu[0].norm() - expected).abs() / expected);
    }
    Outcome::new(
        worst_product <= 1e-8 && worst_sum <= 1e-8 && worst_order_one <= 1e-12,
        format!(
            "500 systems, worst product {worst_product:.1e}, sum of squares {worst_sum:.1e}; \
             order one |μ| = √(pz) worst {worst_order_one:.1e}"
        ),
    )
}

// ---------------------------------------------------------------- AC9

fn balancing_relations() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xac09);
    let (mut worst_sigma, mut worst_convert) = (0.0f64, 0.0f64);
    for k in 0..200 {
        let r = strictly_passive_system(&mut rng, 8);
        let rel = match singular_value_relations(&r) {
            Ok(rel) => rel,
            Err(e) => return err(format!("system {k}: {e}")),
        };
        worst_sigma = worst_sigma.max(rel.max_deviation);
        let (converted, direct) = match (
            quasi_balance_form1(&r).and_then(|b| form1_to_form2(&b)),
            quasi_balance_form2(&r),
        ) {
            (Ok(c), Ok(d)) => (c, d),
            (Err(e), _) | (_, Err(e)) => return err(format!("system {k}: {e}")),
        };
        for (x, y) in converted.sigma.iter().zip(&direct.sigma) {
            worst_convert = worst_convert.max((x - y).abs() / y.abs().max(1.0));
        }
    }
    Outcome::new(
        worst_sigma <= 1e-8 && worst_convert <= 1e-8,
        format!("200 systems, worst σ/√σ⁺/1/√σ⁻ spread {worst_sigma:.1e}, Form-I→II vs direct {worst_convert:.1e}"),
    )
}

// ---------------------------------------------------------------- AC10

fn scalar_riccati() -> Outcome {
    let s3 = 3f64.sqrt();
    let r = match Realization::from_rows(1, 1, &[-1.0], &[s3], &[s3], &[1.0]) {
        Ok(r) => r,
        Err(e) => return err(e),
    };
    match extremal_solutions(&r) {
        Ok(p) => {
            let (kmax, kmin) = (p.k_max[(0, 0)], p.k_min[(0, 0)]);
            Outcome::new(
                (kmax - 3.0).abs() <= 1e-12 && (kmin - 1.0 / 3.0).abs() <= 1e-12,
                format!("K_max = {kmax:.15}, K_min = {kmin:.15}"),
            )
        }
        Err(e) => err(e),
    }
}

fn main() -> ExitCode {
    let total = Instant::now();
    let mut failures = 0;
    let mut run = |id: &str, title: &str, budget: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let mut outcome = f();
        let elapsed = start.elapsed();
        if let Some(b) = budget {
            if elapsed > b {
                outcome.pass = false;
                outcome.detail.push_str(&format!("; over the {:.0?} budget", b));
            }
        }
        if !outcome.pass {
            failures += 1;
        }
        println!(
            "[{}] {id} {title} ({:.2}s): {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            outcome.detail
        );
    };

    let secs = Duration::from_secs;
    run(
        "AC1",
        "two-pole spectral zeros and even polynomial",
        Some(secs(1)),
        &mut two_pole_regression,
    );
    run(
        "AC2",
        "feedthrough scan, decoupled two-port",
        Some(secs(2)),
        &mut decoupled_scan,
    );
    run(
        "AC3",
        "feedthrough scan, multi-agent network",
        Some(secs(2)),
        &mut multi_agent_scan,
    );
    run(
        "AC4",
        "inverse system, system zeros and Foster elements",
        None,
        &mut inverse_and_foster,
    );
    run(
        "AC5",
        "oracle equivalence on random ZIP functions",
        Some(secs(30)),
        &mut oracle_equivalence,
    );
    let systems = symmetric_batch();
    run(
        "AC6",
        "reciprocal extremal storage of symmetric systems",
        None,
        &mut || reciprocal_storage(&systems),
    );
    run("AC7", "real spectral zeros and sandwich interlacing", None, &mut || {
        interlacing_suite(&systems)
    });
    run("AC8", "Vieta identities of spectral zeros", None, &mut vieta_identities);
    run(
        "AC9",
        "balancing singular value relations",
        None,
        &mut balancing_relations,
    );
    run("AC10", "scalar Riccati ground truth", None, &mut scalar_riccati);

    let elapsed = total.elapsed();
    let in_budget = elapsed <= secs(60);
    if !in_budget {
        failures += 1;
    }
    println!(
        "[{}] suite runtime {:.2}s (budget 60s); {failures} failing",
        if in_budget { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
