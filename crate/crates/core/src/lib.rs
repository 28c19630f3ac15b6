//! Freezing phase transitions at desk scale: subshift languages, freezing
//! potentials, dyadic tilings, pressure curves and finite Gibbs
//! specifications.

pub mod complexity;
pub mod error;
pub mod gibbs;
pub mod par;
pub mod potential;
pub mod pressure;
pub mod spectral;
pub mod subshift;
pub mod tiling;

pub use error::{Error, Result};

/// Format like C's `%.12g`.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.11e}", v);
    let (mant, e) = sci.split_once('e').unwrap();
    let e: i32 = e.parse().unwrap();
    if !(-5..12).contains(&e) {
        let mant = trim_zeros(mant);
        return format!("{mant}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs());
    }
    let decimals = (11 - e).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, v)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
