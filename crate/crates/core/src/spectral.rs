//! Perron roots of nonnegative matrices with Collatz–Wielandt enclosures.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};

/// Certified enclosure `lower ≤ ρ ≤ upper` from the min/max ratios of a
/// positive vector.
#[derive(Clone, Debug)]
pub struct CwBounds {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub vector: Vec<f64>,
}

impl CwBounds {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

const FLOOR: f64 = 1e-300;

/// Power iteration for an irreducible nonnegative operator given by `apply`
/// (`y = M u`). Stops when `upper - lower ≤ tol · upper`.
pub fn perron_root<F>(n: usize, apply: F, start: Option<Vec<f64>>, tol: f64, max_iter: usize) -> Result<CwBounds>
where
    F: Fn(&[f64], &mut [f64]),
{
    let mut u = start.filter(|s| s.len() == n).unwrap_or_else(|| vec![1.0; n]);
    for x in u.iter_mut() {
        if !(*x > FLOOR) {
            *x = FLOOR;
        }
    }
    let mut y = vec![0.0; n];
    let mut lower = 0.0;
    let mut upper = f64::INFINITY;
    for it in 1..=max_iter {
        apply(&u, &mut y);
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        let mut top = 0.0f64;
        for i in 0..n {
            let r = y[i] / u[i];
            lo = lo.min(r);
            hi = hi.max(r);
            top = top.max(y[i]);
        }
        lower = f64::max(lower, lo);
        upper = f64::min(upper, hi);
        if upper - lower <= tol * upper {
            return Ok(CwBounds {
                lower,
                upper,
                iterations: it,
                vector: u,
            });
        }
        if top <= 0.0 {
            return Ok(CwBounds {
                lower: 0.0,
                upper: 0.0,
                iterations: it,
                vector: u,
            });
        }
        for i in 0..n {
            u[i] = (y[i] / top).max(FLOOR);
        }
    }
    Err(Error::NonConvergent {
        iterations: max_iter,
        lower,
        upper,
    })
}

/// Spectral radius of a nonnegative matrix given as weighted edges, handled
/// per strongly connected component with the shift `A + I` to remove
/// periodicity.
pub fn spectral_radius(n: usize, edges: &[(usize, usize, f64)], tol: f64) -> Result<CwBounds> {
    let mut g = DiGraph::<(), f64>::with_capacity(n, edges.len());
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for &(a, b, w) in edges {
        if w > 0.0 {
            g.add_edge(nodes[a], nodes[b], w);
        }
    }
    let mut best = CwBounds {
        lower: 0.0,
        upper: 0.0,
        iterations: 0,
        vector: Vec::new(),
    };
    for comp in tarjan_scc(&g) {
        let mut local = vec![usize::MAX; n];
        for (i, v) in comp.iter().enumerate() {
            local[v.index()] = i;
        }
        let sub: Vec<(usize, usize, f64)> = edges
            .iter()
            .filter(|&&(a, b, w)| w > 0.0 && local[a] != usize::MAX && local[b] != usize::MAX)
            .map(|&(a, b, w)| (local[a], local[b], w))
            .collect();
        if sub.is_empty() {
            continue;
        }
        let m = comp.len();
        let bounds = perron_root(
            m,
            |u, y| {
                y.copy_from_slice(u);
                for &(a, b, w) in &sub {
                    y[a] += w * u[b];
                }
            },
            None,
            tol,
            10_000_000,
        )?;
        let shifted = CwBounds {
            lower: bounds.lower - 1.0,
            upper: bounds.upper - 1.0,
            iterations: bounds.iterations,
            vector: bounds.vector,
        };
        if shifted.upper > best.upper {
            best = shifted;
        }
    }
    Ok(best)
}
