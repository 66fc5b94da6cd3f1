//! Shared constructors for the three reference polynomials and comparison
//! helpers used by the integration suites.

#![allow(dead_code)]

use whfactor::oracle::exact::{self, CQ};
use whfactor::report::InputFile;
use whfactor::scalar::{BigReal, Real};

/// Digits used when rendering exact rationals as input strings.
pub const INPUT_DIGITS: u32 = 45;

pub fn seed45() -> BigReal {
    BigReal::seed(INPUT_DIGITS)
}

/// Example A: prod_{k=2..12} (z + 1/k)(z + k), degree 22, kappa 11.
pub fn example1_roots() -> Vec<CQ> {
    let mut roots = Vec::new();
    for k in 2..=12 {
        roots.push(exact::cq(-1, k));
        roots.push(exact::cq(-k, 1));
    }
    roots
}

pub fn example1_inside_roots() -> Vec<CQ> {
    (2..=12).map(|k| exact::cq(-1, k)).collect()
}

pub fn example1_outside_roots() -> Vec<CQ> {
    (2..=12).map(|k| exact::cq(-k, 1)).collect()
}

/// Example B: sum_{i=0}^{10} z^i + 4 z^5, degree 10, kappa 5.
pub fn example2_coeffs() -> Vec<CQ> {
    let mut c = vec![exact::cq(1, 1); 11];
    c[5] = exact::cq(5, 1);
    c
}

/// Example C: the degree-11 complex polynomial with rational coefficients.
pub fn example3_coeffs() -> Vec<CQ> {
    let q = exact::q;
    let c = exact::cq2;
    vec![
        c(q(-61, 60), q(16, 9)),
        c(q(39, 10), q(58, 15)),
        c(q(-1, 1), q(814, 135)),
        c(q(7, 3), q(-2, 3)),
        c(q(-31, 6), q(68, 135)),
        c(q(43, 60), q(764, 135)),
        c(q(-43, 60), q(106, 135)),
        c(q(-28, 15), q(514, 135)),
        c(q(223, 60), q(848, 135)),
        c(q(13, 10), q(0, 1)),
        c(q(-17, 30), q(0, 1)),
        c(q(1, 1), q(0, 1)),
    ]
}

/// Decimal-string rendering of exact rational coefficients for input files.
pub fn coeffs_to_input(coeffs: &[CQ], delta: &str, rho: Option<&str>) -> InputFile {
    let seed = seed45();
    let pairs: Vec<[serde_json::Value; 2]> = coeffs
        .iter()
        .map(|c| {
            [
                serde_json::Value::String(exact::rational_to_real(&seed, &c.re).to_decimal()),
                serde_json::Value::String(exact::rational_to_real(&seed, &c.im).to_decimal()),
            ]
        })
        .collect();
    let mut body = serde_json::json!({
        "coefficients": pairs,
        "delta": delta,
    });
    if let Some(r) = rho {
        body["rho"] = serde_json::Value::String(r.to_string());
    }
    InputFile::from_json(&body.to_string()).expect("input construction")
}

/// Parses a report coefficient table into 45-digit values.
pub fn pairs_to_bigreal(pairs: &[[String; 2]]) -> Vec<(BigReal, BigReal)> {
    let seed = seed45();
    pairs
        .iter()
        .map(|p| {
            (
                seed.parse_decimal(&p[0]).expect("report decimal"),
                seed.parse_decimal(&p[1]).expect("report decimal"),
            )
        })
        .collect()
}

/// 1-norm distance between a report coefficient table and exact rationals.
pub fn table_error_vs_exact(pairs: &[[String; 2]], exact_coeffs: &[CQ]) -> f64 {
    let seed = seed45();
    let got = pairs_to_bigreal(pairs);
    let len = got.len().max(exact_coeffs.len());
    let mut acc = seed.zero();
    for i in 0..len {
        let (gre, gim) = got
            .get(i)
            .cloned()
            .unwrap_or_else(|| (seed.zero(), seed.zero()));
        let (ere, eim) = exact_coeffs
            .get(i)
            .map(|c| {
                (
                    exact::rational_to_real(&seed, &c.re),
                    exact::rational_to_real(&seed, &c.im),
                )
            })
            .unwrap_or_else(|| (seed.zero(), seed.zero()));
        let dre = gre - ere;
        let dim = gim - eim;
        acc = acc + (dre.clone() * &dre + dim.clone() * &dim).sqrt();
    }
    acc.to_f64()
}

/// Largest coefficientwise distance to a table of (re, im) literals.
pub fn max_table_distance(pairs: &[[String; 2]], table: &[(f64, f64)]) -> f64 {
    assert_eq!(pairs.len(), table.len(), "table length mismatch");
    let mut worst: f64 = 0.0;
    for (pair, want) in pairs.iter().zip(table.iter()) {
        let re: f64 = pair[0].parse().unwrap();
        let im: f64 = pair[1].parse().unwrap();
        worst = worst.max((re - want.0).hypot(im - want.1));
    }
    worst
}

pub fn pass(line: &str) {
    println!("PASS {line}");
}
