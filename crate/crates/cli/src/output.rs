//! Report values rounded to 12 significant digits so identical inputs give
//! byte-identical JSON.

use nalgebra::DMatrix;
use passive_spectra::fmt::round_sig;
use passive_spectra::Spectrum;
use serde::{Serialize, Serializer};

const JSON_DIGITS: usize = 12;

/// A float serialized at 12 significant digits, `null` when not finite.
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(round_sig(self.0, JSON_DIGITS))
        } else {
            s.serialize_none()
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexNum {
    pub re: Num,
    pub im: Num,
}

pub fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

pub fn spectrum(s: &Spectrum) -> Vec<ComplexNum> {
    s.values()
        .iter()
        .map(|z| ComplexNum {
            re: Num(z.re),
            im: Num(z.im),
        })
        .collect()
}

pub fn matrix(m: &DMatrix<f64>) -> Vec<Vec<Num>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().map(Num).collect())
        .collect()
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Fixed-decimal table cell with negative zero folded to zero.
pub fn decimals(x: f64, digits: usize) -> String {
    let s = format!("{:.*}", digits, x);
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(to_json(&Num(1.0 / 3.0)), "0.333333333333\n");
        assert_eq!(to_json(&Num(f64::NAN)), "null\n");
        assert_eq!(to_json(&Num(3.0)), "3.0\n");
    }

    #[test]
    fn table_cells() {
        assert_eq!(decimals(-3.514, 2), "-3.51");
        assert_eq!(decimals(-0.001, 2), "0.00");
        assert_eq!(decimals(2.0, 0), "2");
    }
}
