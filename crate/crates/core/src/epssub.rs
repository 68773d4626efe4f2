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

//! Epsilon-subdifferential of a convex PLQ function at a point.
//!
//! `∂_ε f(x̄) = { s : f*(s) <= l(s) }` with the affine minorant `l(s) = ε - f(x̄) + x̄ s`.
//! The level set is read off the rows of `m = min(f*, l)`: the lower end is `m`'s first
//! breakpoint when `m` starts on `l` and `-inf` otherwise; symmetrically for the upper end.
//!
//! The general four-step procedure (conjugate, minorant, minimum, coincidence set) is
//! realized by [`conjugate`](crate::transforms::conjugate), [`affine_minorant`],
//! [`plq_min`](crate::transforms::plq_min) and the endpoint extraction in
//! [`EpsSolver::solve`]; there is no separate generic code path.

use crate::error::PlqError;
use crate::ext::{ExtInterval, ExtReal, Tolerance};
use crate::plq::{PlqFunction, PlqPiece};
use crate::transforms::{conjugate_convex, plq_min_tol};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EpsError {
    #[error("the input function is not plq.")]
    NotPlq { details: String },
    #[error("the input function is not convex.")]
    NotConvex,
    #[error("x̄ is not in the domain of the function.")]
    OutsideDomain,
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl EpsError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            EpsError::NotPlq { .. } => "not-plq",
            EpsError::NotConvex => "not-convex",
            EpsError::OutsideDomain => "outside-domain",
            EpsError::InvalidQuery(_) => "invalid-query",
            EpsError::Internal(_) => "internal",
        }
    }
}

impl From<PlqError> for EpsError {
    fn from(e: PlqError) -> Self {
        match e {
            PlqError::NotConvex => EpsError::NotConvex,
            PlqError::Unrepresentable(msg) => EpsError::Internal(msg),
            other => EpsError::NotPlq {
                details: other.to_string(),
            },
        }
    }
}

/// The point `x̄`, the slack `ε > 0`, and the comparison tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsQuery {
    x_bar: f64,
    eps: f64,
    tol: Tolerance,
}

impl EpsQuery {
    pub fn new(x_bar: f64, eps: f64) -> Result<EpsQuery, EpsError> {
        EpsQuery::with_tol(x_bar, eps, Tolerance::default())
    }

    pub fn with_tol(x_bar: f64, eps: f64, tol: Tolerance) -> Result<EpsQuery, EpsError> {
        if !x_bar.is_finite() {
            return Err(EpsError::InvalidQuery(format!("x̄ must be finite, got {x_bar}")));
        }
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(EpsError::InvalidQuery(format!(
                "ε must be positive and finite, got {eps}"
            )));
        }
        Ok(EpsQuery { x_bar, eps, tol })
    }

    pub fn x_bar(&self) -> f64 {
        self.x_bar
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn tol(&self) -> Tolerance {
        self.tol
    }
}

/// Which branch of the case analysis produced the interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    /// `f` is affine, so its conjugate is a needle at the slope.
    LinearF,
    /// `f` is a needle, so every slope qualifies.
    IndicatorF,
    General,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsSubdiffResult {
    pub interval: ExtInterval,
    pub f_conj: PlqFunction,
    /// `l`, absent when the answer was decided before building it.
    pub minorant: Option<PlqFunction>,
    /// `min(f*, l)`, absent likewise.
    pub m: Option<PlqFunction>,
    pub case_tag: CaseTag,
}

/// A validated convex PLQ function with its conjugate, reusable across queries.
#[derive(Clone, Debug)]
pub struct EpsSolver {
    f: PlqFunction,
    f_conj: PlqFunction,
    tol: Tolerance,
}

impl EpsSolver {
    /// Convexity check and conjugate. Integrity is guaranteed by [`PlqFunction`] itself;
    /// malformed rows surface as [`EpsError::NotPlq`] when parsed or converted.
    pub fn new(f: PlqFunction, tol: Tolerance) -> Result<EpsSolver, EpsError> {
        if !f.is_convex(tol) {
            return Err(EpsError::NotConvex);
        }
        let f_conj = conjugate_convex(&f, tol);
        Ok(EpsSolver { f, f_conj, tol })
    }

    /// Validates raw rows first, mapping violations to [`EpsError::NotPlq`].
    pub fn from_rows(rows: Vec<PlqPiece>, tol: Tolerance) -> Result<EpsSolver, EpsError> {
        let f = PlqFunction::new(rows)?;
        EpsSolver::new(f, tol)
    }

    pub fn function(&self) -> &PlqFunction {
        &self.f
    }

    pub fn conjugate(&self) -> &PlqFunction {
        &self.f_conj
    }

    pub fn tol(&self) -> Tolerance {
        self.tol
    }

    /// `f(x̄)`, or the domain error.
    fn value_at_query(&self, q: &EpsQuery) -> Result<f64, EpsError> {
        self.f
            .value_at(q.x_bar)
            .finite_value()
            .ok_or(EpsError::OutsideDomain)
    }

    pub fn minorant(&self, q: &EpsQuery) -> Result<PlqFunction, EpsError> {
        let fx = self.value_at_query(q)?;
        Ok(minorant_row(q.x_bar, q.eps - fx))
    }

    pub fn solve(&self, q: &EpsQuery) -> Result<EpsSubdiffResult, EpsError> {
        let fx = self.value_at_query(q)?;
        if self.f.is_needle() {
            return Ok(self.early(ExtInterval::whole_line(), CaseTag::IndicatorF));
        }
        if let Some((s0, _)) = self.f_conj.needle_point() {
            let s0 = ExtReal::finite(s0);
            return Ok(self.early(ExtInterval::singleton(s0), CaseTag::LinearF));
        }
        let intercept = q.eps - fx;
        let l = minorant_row(q.x_bar, intercept);
        let m = plq_min_tol(&self.f_conj, &l, self.tol)?;
        let rows = m.rows();
        let k = rows.len() - 1;
        let (interval, case_tag) = if k == 0 {
            (ExtInterval::whole_line(), CaseTag::IndicatorF)
        } else {
            // c tolerance stays below ε so f*'s own line x̄ s - f(x̄) never matches l
            let is_l = |p: &PlqPiece| {
                let c_bound = self.tol.bound(p.c.get(), intercept).min(0.25 * q.eps);
                self.tol.is_zero(p.a)
                    && self.tol.close(p.b, q.x_bar)
                    && p.c.is_finite()
                    && (p.c.get() - intercept).abs() <= c_bound
            };
            let lo = if is_l(&rows[0]) {
                rows[0].x_hi
            } else {
                ExtReal::NEG_INFINITY
            };
            let hi = if is_l(&rows[k]) {
                rows[k - 1].x_hi
            } else {
                ExtReal::INFINITY
            };
            let interval = ExtInterval::new(lo, hi).ok_or_else(|| {
                EpsError::Internal(format!("inverted endpoints [{lo}, {hi}]"))
            })?;
            (interval, CaseTag::General)
        };
        Ok(EpsSubdiffResult {
            interval,
            f_conj: self.f_conj.clone(),
            minorant: Some(l),
            m: Some(m),
            case_tag,
        })
    }

    /// Only the interval of [`solve`](Self::solve).
    pub fn interval(&self, q: &EpsQuery) -> Result<ExtInterval, EpsError> {
        self.solve(q).map(|r| r.interval)
    }

    fn early(&self, interval: ExtInterval, case_tag: CaseTag) -> EpsSubdiffResult {
        EpsSubdiffResult {
            interval,
            f_conj: self.f_conj.clone(),
            minorant: None,
            m: None,
            case_tag,
        }
    }
}

fn minorant_row(x_bar: f64, intercept: f64) -> PlqFunction {
    PlqFunction::affine(x_bar, intercept)
}

/// The single row `[+inf, 0, x̄, ε - f(x̄)]`.
pub fn affine_minorant(f: &PlqFunction, q: &EpsQuery) -> Result<PlqFunction, EpsError> {
    let fx = f
        .value_at(q.x_bar)
        .finite_value()
        .ok_or(EpsError::OutsideDomain)?;
    Ok(minorant_row(q.x_bar, q.eps - fx))
}

/// One-shot query; see [`EpsSolver`] to reuse the conjugate across queries.
pub fn eps_subdifferential(f: &PlqFunction, q: &EpsQuery) -> Result<EpsSubdiffResult, EpsError> {
    EpsSolver::new(f.clone(), q.tol)?.solve(q)
}
