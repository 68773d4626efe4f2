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

//! Brute-force check of epsilon-subgradient membership straight from the definition.
//!
//! `s` is an ε-subgradient at `x̄` iff `inf_y { f(y) - s y } >= f(x̄) - s x̄ - ε`. The infimum
//! is computed row by row from the coefficients, never through the conjugate or the
//! minimum, so it serves as an independent check of [`crate::epssub`].

use crate::ext::{ExtInterval, ExtReal, Tolerance};
use crate::plq::PlqFunction;
use crate::EpsQuery;

/// Search limits for [`oracle_eps_interval`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Slopes beyond this magnitude are reported as an unbounded end.
    pub slope_cap: f64,
    /// Bisection stops once the bracket is this narrow.
    pub width: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            slope_cap: 1e12,
            width: 1e-9,
        }
    }
}

/// `inf_y { f(y) - s y }`, which is `-f*(s)`.
pub fn tilted_infimum(f: &PlqFunction, s: f64) -> ExtReal {
    if let Some((x0, c)) = f.needle_point() {
        return ExtReal::finite(c - s * x0);
    }
    let mut best = ExtReal::INFINITY;
    for (i, p) in f.rows().iter().enumerate() {
        if p.is_infinite() {
            continue;
        }
        let lo = f.lower_bound(i);
        let hi = p.x_hi;
        let (a, b, c) = (p.a, p.b - s, p.c.get());
        let g = |y: f64| (a * y + b) * y + c;
        let v = if a > 0.0 {
            let mut y = -b / (2.0 * a);
            if lo.is_finite() {
                y = y.max(lo.get());
            }
            if hi.is_finite() {
                y = y.min(hi.get());
            }
            ExtReal::finite(g(y))
        } else if (b > 0.0 && lo.is_neg_inf()) || (b < 0.0 && hi.is_pos_inf()) {
            ExtReal::NEG_INFINITY
        } else if b > 0.0 {
            ExtReal::finite(g(lo.get()))
        } else if b < 0.0 {
            ExtReal::finite(g(hi.get()))
        } else {
            ExtReal::finite(c)
        };
        best = best.min(v);
    }
    best
}

/// Whether `s` satisfies the ε-subgradient inequality at `x̄`, relaxed by `q.tol()`.
pub fn oracle_member(f: &PlqFunction, q: &EpsQuery, s: f64) -> bool {
    member_with(f, q, s, q.tol())
}

fn member_with(f: &PlqFunction, q: &EpsQuery, s: f64, tol: Tolerance) -> bool {
    let fx = match f.value_at(q.x_bar()).finite_value() {
        Some(v) => v,
        None => return false,
    };
    let rhs = fx - s * q.x_bar() - q.eps();
    match tilted_infimum(f, s).finite_value() {
        Some(inf) => inf >= rhs - tol.bound(inf, rhs),
        None => false,
    }
}

/// A slope known to be an ε-subgradient: any one-sided derivative at `x̄`.
fn seed_slope(f: &PlqFunction, x: f64) -> f64 {
    if f.is_needle() {
        return 0.0;
    }
    // the governing row is finite on the domain and its slope is a one-sided derivative
    f.rows()[f.governing_row(x)].slope(x)
}

/// Locates `∂_ε f(x̄)` by exponential search and bisection on [`oracle_member`].
pub fn oracle_eps_interval(f: &PlqFunction, q: &EpsQuery) -> ExtInterval {
    oracle_eps_interval_with(f, q, OracleConfig::default())
}

pub fn oracle_eps_interval_with(f: &PlqFunction, q: &EpsQuery, cfg: OracleConfig) -> ExtInterval {
    let seed = seed_slope(f, q.x_bar());
    let member = |s: f64| member_with(f, q, s, Tolerance::EXACT);
    let lo = search_end(seed, -1.0, &member, cfg);
    let hi = search_end(seed, 1.0, &member, cfg);
    ExtInterval::new(lo, hi).unwrap_or_else(|| ExtInterval::singleton(ExtReal::finite(seed)))
}

fn search_end(seed: f64, dir: f64, member: &impl Fn(f64) -> bool, cfg: OracleConfig) -> ExtReal {
    let mut inside = seed;
    let mut step = 1.0;
    let outside = loop {
        let probe = seed + dir * step;
        if probe.abs() > cfg.slope_cap {
            return if dir < 0.0 {
                ExtReal::NEG_INFINITY
            } else {
                ExtReal::INFINITY
            };
        }
        if !member(probe) {
            break probe;
        }
        inside = probe;
        step *= 2.0;
    };
    let (mut a, mut b) = (inside, outside);
    while (b - a).abs() > cfg.width {
        let mid = a + 0.5 * (b - a);
        if mid == a || mid == b {
            break;
        }
        if member(mid) {
            a = mid;
        } else {
            b = mid;
        }
    }
    ExtReal::finite(a)
}
