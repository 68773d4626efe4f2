/*
Copyright 2026 The epssub Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

//! Sampled graphs of `x ↦ ∂_ε f(x)` and `ε ↦ ∂_ε f(x̄)`, and the Brøndsted–Rockafellar
//! rectangle check against the staircase graph of `∂f`.

use crate::epssub::{EpsError, EpsQuery, EpsSolver};
use crate::ext::{ExtInterval, ExtReal, Tolerance};
use crate::plq::PlqFunction;
use crate::transforms::subdifferential;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    X,
    Eps,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSample {
    pub param: f64,
    pub lo: ExtReal,
    pub hi: ExtReal,
}

impl GraphSample {
    pub fn interval(&self) -> ExtInterval {
        ExtInterval::new(self.lo, self.hi).expect("ordered sample")
    }
}

/// Samples of the interval-valued map, in increasing parameter order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubdiffGraph {
    pub axis: SweepAxis,
    pub samples: Vec<GraphSample>,
}

impl SubdiffGraph {
    /// `param,lo,hi` with one row per sample, infinities as `inf`/`-inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,lo,hi\n");
        for s in &self.samples {
            let _ = writeln!(out, "{},{},{}", s.param, s.lo, s.hi);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// A sweep result together with the grid points that fell outside the domain.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub graph: SubdiffGraph,
    pub skipped: Vec<f64>,
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
            v[n - 1] = hi;
            v
        }
    }
}

/// Parses `lo:hi:n` into [`linspace`].
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid `{spec}` is not of the form lo:hi:n"));
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| format!("bad grid start `{}`", parts[0]))?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| format!("bad grid end `{}`", parts[1]))?;
    let n: usize = parts[2].trim().parse().map_err(|_| format!("bad grid size `{}`", parts[2]))?;
    if !lo.is_finite() || !hi.is_finite() {
        return Err("grid ends must be finite".into());
    }
    if n == 0 {
        return Err("grid must have at least one point".into());
    }
    if n > 1 && !(lo < hi) {
        return Err(format!("grid start {lo} must be below end {hi}"));
    }
    Ok(linspace(lo, hi, n))
}

fn check_grid(grid: &[f64]) -> Result<(), EpsError> {
    if grid.is_empty() {
        return Err(EpsError::InvalidQuery("empty grid".into()));
    }
    if let Some(i) = grid.windows(2).position(|w| !(w[0] < w[1])) {
        return Err(EpsError::InvalidQuery(format!(
            "grid not strictly increasing at index {}",
            i + 1
        )));
    }
    Ok(())
}

/// `∂_ε f(x)` for every `x` in `grid`, sharing one conjugate.
pub fn sweep_x(solver: &EpsSolver, eps: f64, grid: &[f64]) -> Result<SweepReport, EpsError> {
    check_grid(grid)?;
    let mut samples = Vec::with_capacity(grid.len());
    let mut skipped = Vec::new();
    for &x in grid {
        let q = EpsQuery::with_tol(x, eps, solver.tol())?;
        match solver.interval(&q) {
            Ok(i) => samples.push(GraphSample { param: x, lo: i.lo(), hi: i.hi() }),
            Err(EpsError::OutsideDomain) => skipped.push(x),
            Err(e) => return Err(e),
        }
    }
    Ok(SweepReport {
        graph: SubdiffGraph { axis: SweepAxis::X, samples },
        skipped,
    })
}

/// `∂_ε f(x̄)` for every `ε` in `grid`.
pub fn sweep_eps(solver: &EpsSolver, x_bar: f64, grid: &[f64]) -> Result<SweepReport, EpsError> {
    check_grid(grid)?;
    if grid[0] <= 0.0 {
        return Err(EpsError::InvalidQuery("ε values must be positive".into()));
    }
    let mut samples = Vec::with_capacity(grid.len());
    for &eps in grid {
        let i = solver.interval(&EpsQuery::with_tol(x_bar, eps, solver.tol())?)?;
        samples.push(GraphSample { param: eps, lo: i.lo(), hi: i.hi() });
    }
    Ok(SweepReport {
        graph: SubdiffGraph { axis: SweepAxis::Eps, samples },
        skipped: Vec::new(),
    })
}

/// A point `(x_λ, s_λ)` on the graph of `∂f` within the Brøndsted–Rockafellar rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BrWitness {
    pub lambda: f64,
    pub x_lambda: f64,
    pub s_lambda: f64,
}

impl BrWitness {
    /// `|x_λ - x̄| <= λ`, `|s_λ - s| <= ε/λ` and `s_λ ∈ ∂f(x_λ)`, all without tolerance.
    pub fn satisfies(&self, f: &PlqFunction, q: &EpsQuery, s: f64) -> bool {
        (self.x_lambda - q.x_bar()).abs() <= self.lambda
            && (self.s_lambda - s).abs() <= q.eps() / self.lambda
            && subdifferential(f, self.x_lambda)
                .is_some_and(|d| d.contains(ExtReal::finite(self.s_lambda)))
    }
}

/// Intersects `[x̄-λ, x̄+λ] × [s-ε/λ, s+ε/λ]` with the graph of `∂f`.
///
/// Candidates are taken from `x̄` itself, then breakpoints by distance to `x̄`, then the
/// clipped pieces; the first one passing [`BrWitness::satisfies`] is returned.
pub fn br_witness(solver: &EpsSolver, q: &EpsQuery, s: f64, lambda: f64) -> Result<BrWitness, EpsError> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(EpsError::InvalidQuery(format!("λ must be positive, got {lambda}")));
    }
    if !s.is_finite() {
        return Err(EpsError::InvalidQuery(format!("slope must be finite, got {s}")));
    }
    let interval = solver.interval(q)?;
    if !interval.contains_tol(s, q.tol()) {
        return Err(EpsError::InvalidQuery(format!(
            "{s} is not an ε-subgradient; ∂_ε f(x̄) = {interval}"
        )));
    }
    let f = solver.function();
    let x_bar = q.x_bar();
    let h = q.eps() / lambda;
    let (x0, x1) = (x_bar - lambda, x_bar + lambda);
    let (s0, s1) = (s - h, s + h);

    let mut candidates: Vec<(f64, f64)> = Vec::new();
    let on_graph = |x: f64| subdifferential(f, x).map(|d| (x, d.clamp(s)));
    candidates.extend(on_graph(x_bar));

    let rows = f.rows();
    let mut kinks: Vec<f64> = match f.needle_point() {
        Some((p, _)) => vec![p],
        None => rows[..rows.len() - 1]
            .iter()
            .map(|p| p.x_hi.get())
            .filter(|&x| x0 <= x && x <= x1)
            .collect(),
    };
    kinks.sort_by(|a, b| (a - x_bar).abs().total_cmp(&(b - x_bar).abs()));
    candidates.extend(kinks.into_iter().filter_map(on_graph));

    if !f.is_needle() {
        for (i, p) in rows.iter().enumerate() {
            if p.is_infinite() {
                continue;
            }
            let mut lo = x0;
            let mut hi = x1;
            let row_lo = f.lower_bound(i);
            if row_lo.is_finite() {
                lo = lo.max(row_lo.get());
            }
            if p.x_hi.is_finite() {
                hi = hi.min(p.x_hi.get());
            }
            if p.a > 0.0 {
                lo = lo.max((s0 - p.b) / (2.0 * p.a));
                hi = hi.min((s1 - p.b) / (2.0 * p.a));
            } else if p.b < s0 || p.b > s1 {
                continue;
            }
            if lo > hi {
                continue;
            }
            let target = if p.a > 0.0 { (s - p.b) / (2.0 * p.a) } else { x_bar };
            for x in [target.clamp(lo, hi), 0.5 * (lo + hi), lo, hi] {
                candidates.push((x, p.slope(x)));
            }
        }
    }

    candidates
        .into_iter()
        .map(|(x, sl)| BrWitness { lambda, x_lambda: x, s_lambda: sl })
        .find(|w| w.satisfies(f, q, s))
        .ok_or_else(|| {
            EpsError::Internal(format!(
                "no point of the graph of ∂f in [{x0}, {x1}] × [{s0}, {s1}]"
            ))
        })
}

/// Endpoint monotonicity of an x-sweep: indices where `lo` or `hi` decreases.
pub fn monotonicity_violations(graph: &SubdiffGraph, tol: Tolerance) -> Vec<usize> {
    graph
        .samples
        .windows(2)
        .enumerate()
        .filter(|(_, w)| {
            let drop = |a: ExtReal, b: ExtReal| {
                a.is_finite() && b.is_finite() && !tol.le(a.get(), b.get())
                    || a.is_pos_inf() && !b.is_pos_inf()
                    || b.is_neg_inf() && !a.is_neg_inf()
            };
            drop(w[0].lo, w[1].lo) || drop(w[0].hi, w[1].hi)
        })
        .map(|(i, _)| i + 1)
        .collect()
}
