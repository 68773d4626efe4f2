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

//! Univariate piecewise linear-quadratic functions stored as `(N+1) x 4` row matrices.
//!
//! Row `i` is `[x_i, a_i, b_i, c_i]` and holds `a_i x^2 + b_i x + c_i` on `(x_{i-1}, x_i]`,
//! with `x_{-1} = -inf` and `x_N = +inf`. A constant `c_i = +inf` (first or last row only)
//! marks the part of the line outside the domain. A single row with finite `x_0` is the
//! needle `iota_{x_0} + c_0`.
//!
//! At a breakpoint the row ending there supplies the value, except when that row is an
//! infinite row, in which case the neighbour on the right does (so a closed left domain
//! endpoint keeps its finite value).

use crate::error::PlqError;
use crate::ext::{ExtInterval, ExtReal, Tolerance};
use serde::{Deserialize, Serialize};
use std::fmt;

/// One row `[x_hi, a, b, c]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlqPiece {
    pub x_hi: ExtReal,
    pub a: f64,
    pub b: f64,
    pub c: ExtReal,
}

impl PlqPiece {
    pub fn new(x_hi: ExtReal, a: f64, b: f64, c: ExtReal) -> PlqPiece {
        PlqPiece {
            x_hi,
            a: a + 0.0,
            b: b + 0.0,
            c,
        }
    }

    /// Builds a row from raw floats; `f64::INFINITY` stands for `+inf`.
    pub fn from_f64(row: [f64; 4]) -> PlqPiece {
        PlqPiece::new(ExtReal::from(row[0]), row[1], row[2], ExtReal::from(row[3]))
    }

    /// Whether this row is `+inf` on its whole interval.
    pub fn is_infinite(&self) -> bool {
        self.c.is_pos_inf()
    }

    /// `a x^2 + b x + c`, or `+inf` for an infinite row.
    pub fn value(&self, x: f64) -> ExtReal {
        if self.is_infinite() {
            return ExtReal::INFINITY;
        }
        ExtReal::from((self.a * x + self.b) * x + self.c.get())
    }

    /// Derivative `2 a x + b` of the row's quadratic.
    pub fn slope(&self, x: f64) -> f64 {
        2.0 * self.a * x + self.b
    }

    /// The quadratic's coefficients `(a, b, c)`.
    pub fn coeffs(&self) -> (f64, f64, ExtReal) {
        (self.a, self.b, self.c)
    }

    pub fn same_coeffs(&self, other: &PlqPiece, tol: Tolerance) -> bool {
        tol.close(self.a, other.a) && tol.close(self.b, other.b) && tol.close_ext(self.c, other.c)
    }
}

/// What is wrong with a candidate row matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    NoRows,
    NonFiniteCoefficient,
    NegInfConstant,
    InfiniteConstantWithSlope,
    InteriorInfiniteConstant,
    BreakpointsNotIncreasing,
    InteriorBreakpointNotFinite,
    LastBreakpointNotInf,
    NeedleWithSlope,
    EmptyDomain,
}

/// A single failed integrity condition, tied to a row when one is to blame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub row: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self.kind {
            ViolationKind::NoRows => "no rows",
            ViolationKind::NonFiniteCoefficient => "coefficients a and b must be finite",
            ViolationKind::NegInfConstant => "constant c = -inf is not allowed",
            ViolationKind::InfiniteConstantWithSlope => "infinite c requires a = 0 and b = 0",
            ViolationKind::InteriorInfiniteConstant => {
                "infinite c is only allowed in the first or last row"
            }
            ViolationKind::BreakpointsNotIncreasing => "breakpoints not increasing",
            ViolationKind::InteriorBreakpointNotFinite => "breakpoint must be finite",
            ViolationKind::LastBreakpointNotInf => "last breakpoint must be +inf",
            ViolationKind::NeedleWithSlope => "single row with finite breakpoint requires a = 0 and b = 0",
            ViolationKind::EmptyDomain => "function is +inf everywhere",
        };
        match self.row {
            Some(r) => write!(f, "row {r}: {msg}"),
            None => f.write_str(msg),
        }
    }
}

/// Integrity check on raw rows. An empty result means the rows form a valid PLQ function.
pub fn check(rows: &[PlqPiece]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |row: Option<usize>, kind| out.push(Violation { row, kind });
    if rows.is_empty() {
        push(None, ViolationKind::NoRows);
        return out;
    }
    let n = rows.len();
    for (i, p) in rows.iter().enumerate() {
        if !p.a.is_finite() || !p.b.is_finite() {
            push(Some(i), ViolationKind::NonFiniteCoefficient);
        }
        if p.c.is_neg_inf() {
            push(Some(i), ViolationKind::NegInfConstant);
        }
        if p.c.is_pos_inf() {
            if p.a != 0.0 || p.b != 0.0 {
                push(Some(i), ViolationKind::InfiniteConstantWithSlope);
            }
            if i != 0 && i != n - 1 {
                push(Some(i), ViolationKind::InteriorInfiniteConstant);
            }
        }
    }
    if n == 1 {
        let p = rows[0];
        if p.x_hi.is_neg_inf() {
            push(Some(0), ViolationKind::InteriorBreakpointNotFinite);
        } else if p.x_hi.is_finite() && (p.a != 0.0 || p.b != 0.0) {
            push(Some(0), ViolationKind::NeedleWithSlope);
        }
        if p.c.is_pos_inf() {
            push(None, ViolationKind::EmptyDomain);
        }
        return out;
    }
    for (i, p) in rows[..n - 1].iter().enumerate() {
        if !p.x_hi.is_finite() {
            push(Some(i), ViolationKind::InteriorBreakpointNotFinite);
        }
    }
    for i in 1..n {
        if rows[i].x_hi <= rows[i - 1].x_hi {
            push(Some(i), ViolationKind::BreakpointsNotIncreasing);
        }
    }
    if !rows[n - 1].x_hi.is_pos_inf() {
        push(Some(n - 1), ViolationKind::LastBreakpointNotInf);
    }
    if n == 2 && rows[0].is_infinite() && rows[1].is_infinite() {
        push(None, ViolationKind::EmptyDomain);
    }
    out
}

/// Collapses runs of adjacent rows with equal coefficients (within `tol`) into one row.
pub(crate) fn merge_rows(rows: Vec<PlqPiece>, tol: Tolerance) -> Vec<PlqPiece> {
    let mut out: Vec<PlqPiece> = Vec::with_capacity(rows.len());
    for (i, &p) in rows.iter().enumerate() {
        let narrow = |last: &PlqPiece| {
            !p.is_infinite()
                && last.x_hi.is_finite()
                && p.x_hi.is_finite()
                && tol.close(last.x_hi.get(), p.x_hi.get())
        };
        match out.last_mut() {
            Some(last) if last.same_coeffs(&p, tol) => last.x_hi = p.x_hi,
            // rows narrower than the tolerance are absorbed by a finite neighbour
            Some(last) if narrow(last) && !last.is_infinite() => last.x_hi = p.x_hi,
            Some(last) if narrow(last) && rows.get(i + 1).is_some_and(|n| !n.is_infinite()) => {}
            _ => out.push(p),
        }
    }
    out
}

/// A valid PLQ function. Every value of this type passes [`check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlqFunction {
    rows: Vec<PlqPiece>,
}

/// Piece lookups performed by a grid evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalStats {
    pub piece_steps: usize,
}

impl PlqFunction {
    pub fn new(rows: Vec<PlqPiece>) -> Result<PlqFunction, PlqError> {
        let violations = check(&rows);
        if violations.is_empty() {
            Ok(PlqFunction { rows })
        } else {
            Err(PlqError::Invalid(violations))
        }
    }

    /// Rows given as raw floats, with `f64::INFINITY` for `+inf`.
    pub fn from_rows(rows: &[[f64; 4]]) -> Result<PlqFunction, PlqError> {
        for row in rows {
            if row.iter().any(|v| v.is_nan()) {
                return Err(PlqError::Invalid(vec![Violation {
                    row: None,
                    kind: ViolationKind::NonFiniteCoefficient,
                }]));
            }
        }
        PlqFunction::new(rows.iter().map(|r| PlqPiece::from_f64(*r)).collect())
    }

    /// `a x^2 + b x + c` on the whole line.
    pub fn quadratic(a: f64, b: f64, c: f64) -> PlqFunction {
        PlqFunction::new(vec![PlqPiece::new(ExtReal::INFINITY, a, b, ExtReal::finite(c))])
            .expect("finite global quadratic")
    }

    /// `slope * x + intercept` on the whole line.
    pub fn affine(slope: f64, intercept: f64) -> PlqFunction {
        PlqFunction::quadratic(0.0, slope, intercept)
    }

    /// `iota_{x0} + c`.
    pub fn needle(x0: f64, c: f64) -> PlqFunction {
        PlqFunction::new(vec![PlqPiece::new(
            ExtReal::finite(x0),
            0.0,
            0.0,
            ExtReal::finite(c),
        )])
        .expect("finite needle")
    }

    pub(crate) fn from_valid_rows(rows: Vec<PlqPiece>) -> PlqFunction {
        debug_assert!(check(&rows).is_empty(), "invalid rows: {:?}", check(&rows));
        PlqFunction { rows }
    }

    pub fn rows(&self) -> &[PlqPiece] {
        &self.rows
    }

    /// Number of rows, `N + 1`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Raw `[x, a, b, c]` rows with infinities as `f64::INFINITY`.
    pub fn to_matrix(&self) -> Vec<[f64; 4]> {
        self.rows
            .iter()
            .map(|p| [p.x_hi.get(), p.a, p.b, p.c.get()])
            .collect()
    }

    pub fn is_needle(&self) -> bool {
        self.rows.len() == 1 && self.rows[0].x_hi.is_finite()
    }

    /// The needle's point and value, if this is a needle.
    pub fn needle_point(&self) -> Option<(f64, f64)> {
        self.is_needle()
            .then(|| (self.rows[0].x_hi.get(), self.rows[0].c.get()))
    }

    /// Lower end of row `i`'s interval (`-inf` for the first row).
    pub fn lower_bound(&self, i: usize) -> ExtReal {
        if i == 0 {
            ExtReal::NEG_INFINITY
        } else {
            self.rows[i - 1].x_hi
        }
    }

    /// Index of the row that supplies the value at `x` (see the module docs).
    pub fn governing_row(&self, x: f64) -> usize {
        let n = self.rows.len();
        let i = self.rows.partition_point(|p| p.x_hi.get() < x);
        let i = i.min(n - 1);
        if i + 1 < n && self.rows[i].is_infinite() && self.rows[i].x_hi.get() == x {
            i + 1
        } else {
            i
        }
    }

    /// Value at a single point.
    pub fn value_at(&self, x: f64) -> ExtReal {
        if let Some((x0, c)) = self.needle_point() {
            return if x == x0 {
                ExtReal::finite(c)
            } else {
                ExtReal::INFINITY
            };
        }
        self.rows[self.governing_row(x)].value(x)
    }

    /// Evaluates on a nondecreasing grid by a linear merge.
    pub fn eval(&self, xs: &[f64]) -> Result<Vec<ExtReal>, PlqError> {
        self.eval_with_stats(xs).map(|(v, _)| v)
    }

    /// [`eval`](Self::eval), also reporting how many piece lookups the merge needed.
    pub fn eval_with_stats(&self, xs: &[f64]) -> Result<(Vec<ExtReal>, EvalStats), PlqError> {
        for (k, w) in xs.windows(2).enumerate() {
            if !(w[0] <= w[1]) {
                return Err(PlqError::UnsortedGrid { index: k + 1 });
            }
        }
        if xs.iter().any(|x| x.is_nan()) {
            return Err(PlqError::UnsortedGrid { index: 0 });
        }
        let mut stats = EvalStats::default();
        let mut out = Vec::with_capacity(xs.len());
        if let Some((x0, c)) = self.needle_point() {
            for &x in xs {
                stats.piece_steps += 1;
                out.push(if x == x0 {
                    ExtReal::finite(c)
                } else {
                    ExtReal::INFINITY
                });
            }
            return Ok((out, stats));
        }
        let n = self.rows.len();
        let mut i = 0;
        for &x in xs {
            while i + 1 < n && self.rows[i].x_hi.get() < x {
                i += 1;
                stats.piece_steps += 1;
            }
            stats.piece_steps += 1;
            let row = if i + 1 < n && self.rows[i].is_infinite() && self.rows[i].x_hi.get() == x {
                i + 1
            } else {
                i
            };
            out.push(self.rows[row].value(x));
        }
        Ok((out, stats))
    }

    /// Closure of `{x : f(x) < +inf}`.
    pub fn domain(&self) -> ExtInterval {
        if let Some((x0, _)) = self.needle_point() {
            return ExtInterval::singleton(ExtReal::finite(x0));
        }
        let n = self.rows.len();
        let lo = if self.rows[0].is_infinite() {
            self.rows[0].x_hi
        } else {
            ExtReal::NEG_INFINITY
        };
        let hi = if self.rows[n - 1].is_infinite() {
            self.rows[n - 2].x_hi
        } else {
            ExtReal::INFINITY
        };
        ExtInterval::new(lo, hi).expect("valid rows have a nonempty domain")
    }

    /// Convexity up to `tol`: nonnegative curvature, continuity and nondecreasing
    /// one-sided slopes at every breakpoint inside the domain.
    pub fn is_convex(&self, tol: Tolerance) -> bool {
        if self.is_needle() {
            return true;
        }
        if self
            .rows
            .iter()
            .any(|p| !p.is_infinite() && p.a < 0.0 && !tol.is_zero(p.a))
        {
            return false;
        }
        self.rows.windows(2).all(|w| {
            let (l, r) = (w[0], w[1]);
            if l.is_infinite() || r.is_infinite() {
                return true;
            }
            let x = l.x_hi.get();
            let continuous = tol.close_ext(l.value(x), r.value(x));
            let monotone = tol.le(l.slope(x), r.slope(x));
            continuous && monotone
        })
    }

    /// Merges adjacent rows whose coefficients agree within `tol`.
    pub fn canonical(&self, tol: Tolerance) -> PlqFunction {
        PlqFunction::from_valid_rows(merge_rows(self.rows.clone(), tol))
    }

    /// Equality of canonical forms, breakpoints and coefficients compared within `tol`.
    pub fn is_equal(&self, other: &PlqFunction, tol: Tolerance) -> bool {
        let f = self.canonical(tol);
        let g = other.canonical(tol);
        f.rows.len() == g.rows.len()
            && f.rows.iter().zip(&g.rows).all(|(p, q)| {
                tol.close_ext(p.x_hi, q.x_hi) && p.same_coeffs(q, tol)
            })
    }
}

impl<'de> Deserialize<'de> for PlqFunction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            rows: Vec<PlqPiece>,
        }
        let raw = Raw::deserialize(deserializer)?;
        PlqFunction::new(raw.rows).map_err(serde::de::Error::custom)
    }
}
