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

//! Fenchel conjugate, pointwise minimum and exact subdifferential of PLQ functions.

use crate::error::PlqError;
use crate::ext::{ExtInterval, ExtReal, Tolerance};
use crate::plq::{merge_rows, PlqFunction, PlqPiece};
use crate::roots::{quadratic_roots, QuadRoots};

/// Accumulates rows left to right, dropping zero-width intervals and merging rows whose
/// coefficients are bit-identical.
#[derive(Default)]
struct RowBuilder {
    rows: Vec<PlqPiece>,
}

impl RowBuilder {
    fn last_hi(&self) -> ExtReal {
        self.rows
            .last()
            .map(|p| p.x_hi)
            .unwrap_or(ExtReal::NEG_INFINITY)
    }

    fn push(&mut self, hi: ExtReal, a: f64, b: f64, c: ExtReal) {
        if hi <= self.last_hi() {
            return;
        }
        let piece = PlqPiece::new(hi, a, b, c);
        if let Some(last) = self.rows.last_mut() {
            if last.coeffs() == piece.coeffs() {
                last.x_hi = hi;
                return;
            }
        }
        self.rows.push(piece);
    }

    fn push_piece(&mut self, hi: ExtReal, p: &PlqPiece) {
        self.push(hi, p.a, p.b, p.c);
    }

    fn push_infinite(&mut self, hi: ExtReal) {
        self.push(hi, 0.0, 0.0, ExtReal::INFINITY);
    }
}

/// Legendre-Fenchel conjugate `f*(s) = sup_x { s x - f(x) }` with the default tolerance
/// for the convexity check.
pub fn conjugate(f: &PlqFunction) -> Result<PlqFunction, PlqError> {
    conjugate_tol(f, Tolerance::default())
}

pub fn conjugate_tol(f: &PlqFunction, tol: Tolerance) -> Result<PlqFunction, PlqError> {
    if !f.is_convex(tol) {
        return Err(PlqError::NotConvex);
    }
    Ok(conjugate_convex(f, tol))
}

/// Builds `f*` in slope order. Each strictly convex row maps to a quadratic on its slope
/// range, each breakpoint to the line `x_i s - f(x_i)` across its slope jump, and a closed
/// domain end to an unbounded linear tail.
pub(crate) fn conjugate_convex(f: &PlqFunction, tol: Tolerance) -> PlqFunction {
    if let Some((x0, c)) = f.needle_point() {
        return PlqFunction::affine(x0, -c);
    }
    let rows = f.rows();
    let n = rows.len();
    let first = usize::from(rows[0].is_infinite());
    let last = if rows[n - 1].is_infinite() { n - 2 } else { n - 1 };
    let mut out = RowBuilder::default();

    if first == 1 {
        let left = rows[0].x_hi.get();
        let p = &rows[1];
        out.push(
            ExtReal::finite(p.slope(left)),
            0.0,
            left,
            -p.value(left),
        );
    } else if rows[0].a == 0.0 {
        out.push_infinite(ExtReal::finite(rows[0].b));
    }

    for i in first..=last {
        let p = &rows[i];
        if p.a > 0.0 {
            let s_hi = if p.x_hi.is_finite() {
                ExtReal::finite(p.slope(p.x_hi.get()))
            } else {
                ExtReal::INFINITY
            };
            out.push(
                s_hi,
                1.0 / (4.0 * p.a),
                -p.b / (2.0 * p.a),
                ExtReal::finite(p.b * p.b / (4.0 * p.a)) - p.c,
            );
        }
        if i < last {
            let x = p.x_hi.get();
            let s_right = rows[i + 1].slope(x);
            out.push(ExtReal::finite(s_right), 0.0, x, -p.value(x));
        }
    }

    if last + 2 == n {
        let right = rows[last].x_hi.get();
        out.push(ExtReal::INFINITY, 0.0, right, -rows[last].value(right));
    } else if rows[last].a == 0.0 {
        out.push_infinite(ExtReal::INFINITY);
    }

    if out.rows.iter().all(|p| p.is_infinite()) {
        // affine f: the conjugate lives at a single slope
        let p = &rows[first];
        return PlqFunction::needle(p.b, -p.c.get());
    }
    PlqFunction::from_valid_rows(out.rows).canonical(tol)
}

/// Pointwise minimum with the default tolerance.
pub fn plq_min(f: &PlqFunction, g: &PlqFunction) -> Result<PlqFunction, PlqError> {
    plq_min_tol(f, g, Tolerance::default())
}

/// Pointwise minimum of two PLQ functions (convexity not required).
///
/// Fails only when the minimum cannot be stored as a row matrix: a `+inf` gap between two
/// bounded domains, or a needle that undercuts the other function at a single point.
pub fn plq_min_tol(
    f: &PlqFunction,
    g: &PlqFunction,
    tol: Tolerance,
) -> Result<PlqFunction, PlqError> {
    if let Some((x0, c)) = f.needle_point() {
        return min_with_needle(x0, c, g, tol);
    }
    if let Some((x0, c)) = g.needle_point() {
        return min_with_needle(x0, c, f, tol);
    }
    let (fr, gr) = (f.rows(), g.rows());
    let (mut i, mut j) = (0, 0);
    let mut lo = ExtReal::NEG_INFINITY;
    let mut out = RowBuilder::default();
    loop {
        let hi = fr[i].x_hi.min(gr[j].x_hi);
        min_on_interval(lo, hi, &fr[i], &gr[j], tol, &mut out);
        if hi.is_pos_inf() {
            break;
        }
        if fr[i].x_hi == hi {
            i += 1;
        }
        if gr[j].x_hi == hi {
            j += 1;
        }
        lo = hi;
    }
    let rows = merge_rows(out.rows, tol);
    let n = rows.len();
    if rows
        .iter()
        .enumerate()
        .any(|(k, p)| p.is_infinite() && k != 0 && k != n - 1)
    {
        return Err(PlqError::Unrepresentable(
            "the domains are separated by a gap".into(),
        ));
    }
    PlqFunction::new(rows)
}

fn min_with_needle(
    x0: f64,
    c: f64,
    g: &PlqFunction,
    tol: Tolerance,
) -> Result<PlqFunction, PlqError> {
    if let Some((y0, d)) = g.needle_point() {
        if x0 == y0 {
            return Ok(PlqFunction::needle(x0, c.min(d)));
        }
        return Err(PlqError::Unrepresentable(
            "two needles at different points".into(),
        ));
    }
    match g.value_at(x0).finite_value() {
        Some(v) if tol.le(v, c) => Ok(g.clone()),
        _ => Err(PlqError::Unrepresentable(format!(
            "the needle at {x0} lies strictly below the other function"
        ))),
    }
}

fn sample_point(lo: ExtReal, hi: ExtReal) -> f64 {
    match (lo.finite_value(), hi.finite_value()) {
        (Some(l), Some(h)) => l + 0.5 * (h - l),
        (None, Some(h)) => h - h.abs().max(1.0),
        (Some(l), None) => l + l.abs().max(1.0),
        (None, None) => 0.0,
    }
}

fn min_on_interval(
    lo: ExtReal,
    hi: ExtReal,
    p: &PlqPiece,
    q: &PlqPiece,
    tol: Tolerance,
    out: &mut RowBuilder,
) {
    match (p.is_infinite(), q.is_infinite()) {
        (true, true) => return out.push_infinite(hi),
        (true, false) => return out.push_piece(hi, q),
        (false, true) => return out.push_piece(hi, p),
        (false, false) => {}
    }
    let (da, db, dc) = (p.a - q.a, p.b - q.b, p.c.get() - q.c.get());
    let inside = |r: f64| {
        (lo.is_neg_inf() || (r > lo.get() && !tol.close(r, lo.get())))
            && (hi.is_pos_inf() || (r < hi.get() && !tol.close(r, hi.get())))
    };
    let mut cuts: Vec<f64> = match quadratic_roots(da, db, dc, tol) {
        QuadRoots::None | QuadRoots::Double(_) => vec![],
        QuadRoots::Simple(r) => vec![r],
        QuadRoots::Two(r1, r2) => vec![r1, r2],
    };
    cuts.retain(|&r| r.is_finite() && inside(r));

    let mut seg_lo = lo;
    let ends = cuts
        .into_iter()
        .map(ExtReal::finite)
        .chain(std::iter::once(hi));
    for seg_hi in ends {
        let t = sample_point(seg_lo, seg_hi);
        let (pv, qv) = (p.value(t).get(), q.value(t).get());
        let pick = if tol.close(pv, qv) {
            // equal within tolerance: keep extending the previous row if possible
            match out.rows.last() {
                Some(last) if last.coeffs() == q.coeffs() => q,
                _ => p,
            }
        } else if pv < qv {
            p
        } else {
            q
        };
        out.push_piece(seg_hi, pick);
        seg_lo = seg_hi;
    }
}

/// `∂f(x)` from one-sided slopes; `None` when `x` is outside the domain.
pub fn subdifferential(f: &PlqFunction, x: f64) -> Option<ExtInterval> {
    if let Some((x0, _)) = f.needle_point() {
        return (x == x0).then(ExtInterval::whole_line);
    }
    if !f.value_at(x).is_finite() {
        return None;
    }
    let rows = f.rows();
    let n = rows.len();
    let i = rows.partition_point(|p| p.x_hi.get() < x).min(n - 1);
    let (lo, hi) = if i + 1 < n && rows[i].x_hi.get() == x {
        let left = if rows[i].is_infinite() {
            ExtReal::NEG_INFINITY
        } else {
            ExtReal::finite(rows[i].slope(x))
        };
        let right = if rows[i + 1].is_infinite() {
            ExtReal::INFINITY
        } else {
            ExtReal::finite(rows[i + 1].slope(x))
        };
        (left, right)
    } else {
        let s = ExtReal::finite(rows[i].slope(x));
        (s, s)
    };
    // slopes that cross by rounding on a convex-within-tolerance input
    Some(ExtInterval::new(lo.min(hi), hi.max(lo)).expect("ordered bounds"))
}
