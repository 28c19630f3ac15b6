use serde::{Deserialize, Serialize};

use super::sequence::{AsymptoticClass, FreezingSequence, Tail};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoGoVerdict {
    NoGo,
    CandidateFreezing,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoGoReport {
    pub verdict: NoGoVerdict,
    pub reason: String,
    /// (N, Σ_{n=1}^N n^{d-1} a_n)
    pub trace: Vec<(usize, f64)>,
}

pub const TRACE_POINTS: [usize; 5] = [100, 1_000, 10_000, 100_000, 1_000_000];

/// Summability of Σ n^{d-1} a_n, decided from the growth class when one is
/// known. Numeric-only sequences get the partial-sum trace and no verdict.
pub fn nogo_classify(sequence: &FreezingSequence, d: usize) -> NoGoReport {
    let numeric_only = matches!(sequence.tail, Tail::Harmonic { .. });
    let limit = if numeric_only {
        sequence.table.len().saturating_sub(1)
    } else {
        TRACE_POINTS[TRACE_POINTS.len() - 1]
    };
    let mut trace = Vec::new();
    let mut sum = 0.0;
    let mut next = 0;
    for n in 1..=limit {
        sum += (n as f64).powi(d as i32 - 1) * sequence.value(n);
        if next < TRACE_POINTS.len() && n == TRACE_POINTS[next] {
            trace.push((n, sum));
            next += 1;
        }
    }
    if trace.last().map(|t| t.0) != Some(limit) && limit > 0 {
        trace.push((limit, sum));
    }
    let (verdict, reason) = match sequence.class {
        AsymptoticClass::LogLogOverJd => (
            NoGoVerdict::CandidateFreezing,
            "n^{d-1} loglog n / n^d is not summable".to_string(),
        ),
        AsymptoticClass::LogOverJd => (
            NoGoVerdict::CandidateFreezing,
            "n^{d-1} log n / n^d is not summable".to_string(),
        ),
        AsymptoticClass::Log2OverJ => (
            NoGoVerdict::CandidateFreezing,
            format!("n^{} log^2 n / n is not summable", d as i64 - 1),
        ),
        AsymptoticClass::InversePower { exponent } => {
            if exponent > d as f64 {
                (
                    NoGoVerdict::NoGo,
                    format!("n^{} / n^{exponent} is summable", d as i64 - 1),
                )
            } else {
                (
                    NoGoVerdict::CandidateFreezing,
                    format!("n^{} / n^{exponent} is not summable", d as i64 - 1),
                )
            }
        }
        AsymptoticClass::Custom => (
            NoGoVerdict::Inconclusive,
            "no growth class; divergence cannot be decided from partial sums".to_string(),
        ),
    };
    NoGoReport { verdict, reason, trace }
}
