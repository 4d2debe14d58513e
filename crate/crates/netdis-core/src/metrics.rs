//! Disintegration metrics: surviving-cluster fraction, the robustness
//! measure R, and critical-fraction search.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeMask};
use crate::strategies::AttackSolution;

/// One evaluated point of an attack curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// Number of removed nodes Q.
    pub removed: usize,
    /// Removed fraction q = Q / N.
    pub fraction: f64,
    /// Surviving-cluster fraction S(Q).
    pub s: f64,
}

/// S(Q) samples for one strategy run on one graph. Points are strictly
/// increasing in Q. S need not be monotone: independent per-Q
/// optimizations may wobble; only nested attack sequences are monotone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackCurve {
    pub strategy: String,
    pub seed: u64,
    pub n: usize,
    pub points: Vec<CurvePoint>,
}

impl AttackCurve {
    pub fn new(strategy: impl Into<String>, seed: u64, n: usize) -> AttackCurve {
        AttackCurve {
            strategy: strategy.into(),
            seed,
            n,
            points: Vec::new(),
        }
    }

    pub fn push(&mut self, removed: usize, s: f64) {
        debug_assert!(self.points.last().is_none_or(|p| p.removed < removed));
        self.points.push(CurvePoint {
            removed,
            fraction: removed as f64 / self.n as f64,
            s,
        });
    }
}

/// Fraction of the original N nodes left in the largest connected cluster
/// once the solution's attack set is removed.
pub fn s_of_q(g: &Graph, solution: &AttackSolution) -> f64 {
    let mask = solution.mask();
    g.largest_connected_cluster(&mask).len() as f64 / g.node_count() as f64
}

/// Robustness measure: the average of S(Q) over the complete sweep
/// Q = 0, 1, ..., N. Requires exactly those N+1 points.
pub fn robustness_r(curve: &AttackCurve) -> Result<f64> {
    if curve.points.len() != curve.n + 1 {
        return Err(Error::InvalidCurve(format!(
            "need {} points covering Q=0..{}, got {}",
            curve.n + 1,
            curve.n,
            curve.points.len()
        )));
    }
    for (expected, point) in curve.points.iter().enumerate() {
        if point.removed != expected {
            return Err(Error::InvalidCurve(format!(
                "expected Q={expected}, found Q={}",
                point.removed
            )));
        }
    }
    Ok(curve.points.iter().map(|p| p.s).sum::<f64>() / (curve.n + 1) as f64)
}

/// Approximate R for a coarse sweep: fills the missing integer Q values by
/// linear interpolation before averaging. The curve must still cover both
/// endpoints Q=0 and Q=N.
pub fn robustness_r_interpolated(curve: &AttackCurve) -> Result<f64> {
    let points = &curve.points;
    if points.is_empty() || points[0].removed != 0 || points.last().unwrap().removed != curve.n {
        return Err(Error::InvalidCurve(
            "interpolated R needs endpoints Q=0 and Q=N".to_string(),
        ));
    }
    let mut total = 0.0;
    let mut segment = 0;
    for q in 0..=curve.n {
        while points[segment + 1].removed < q {
            segment += 1;
        }
        let (a, b) = (&points[segment], &points[segment + 1]);
        let s = if q == a.removed {
            a.s
        } else {
            let t = (q - a.removed) as f64 / (b.removed - a.removed) as f64;
            a.s + t * (b.s - a.s)
        };
        total += s;
    }
    Ok(total / (curve.n + 1) as f64)
}

/// When is an attacked network considered collapsed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum CollapseCriterion {
    /// Percolation criterion: `<k^2>/<k> <= 2`. The default used by the
    /// optimizer termination and the reported critical fractions.
    #[default]
    Kappa,
    /// Curve-intercept mode: surviving-cluster fraction at or below the
    /// given threshold.
    LccFraction(f64),
}

/// Whether the masked remainder counts as collapsed under the criterion.
/// A fully masked graph is always collapsed.
pub fn is_collapsed(g: &Graph, mask: &NodeMask, criterion: CollapseCriterion) -> bool {
    match criterion {
        CollapseCriterion::Kappa => match g.kappa(mask) {
            Ok(kappa) => kappa <= 2.0,
            Err(_) => true,
        },
        CollapseCriterion::LccFraction(threshold) => {
            let s = g.largest_connected_cluster(mask).len() as f64 / g.node_count() as f64;
            s <= threshold
        }
    }
}

/// Smallest removal count Q at which the strategy's attack collapses the
/// network; 0 when the intact graph already satisfies the criterion. The
/// strategy is re-run independently at each Q.
pub fn critical_removal_count(
    g: &Graph,
    criterion: CollapseCriterion,
    mut strategy: impl FnMut(usize) -> Result<AttackSolution>,
) -> Result<usize> {
    let n = g.node_count();
    if is_collapsed(g, &NodeMask::none(n), criterion) {
        return Ok(0);
    }
    for q in 1..=n {
        let solution = strategy(q)?;
        if is_collapsed(g, &solution.mask(), criterion) {
            return Ok(q);
        }
    }
    Ok(n)
}

/// [`critical_removal_count`] as a fraction of N.
pub fn critical_fraction(
    g: &Graph,
    criterion: CollapseCriterion,
    strategy: impl FnMut(usize) -> Result<AttackSolution>,
) -> Result<f64> {
    Ok(critical_removal_count(g, criterion, strategy)? as f64 / g.node_count() as f64)
}

/// Writes curves as CSV with the header `strategy,seed,N,Q,q,S`.
pub fn write_curve_csv<W: Write>(curves: &[AttackCurve], mut out: W) -> Result<()> {
    writeln!(out, "strategy,seed,N,Q,q,S")?;
    for curve in curves {
        for p in &curve.points {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                curve.strategy, curve.seed, curve.n, p.removed, p.fraction, p.s
            )?;
        }
    }
    Ok(())
}
