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

#![allow(dead_code)]

use epssub::{PlqFunction, PlqPiece, ExtReal};
use rand::rngs::StdRng;
use rand::Rng;

pub const INF: f64 = f64::INFINITY;

pub fn rows(r: &[[f64; 4]]) -> PlqFunction {
    PlqFunction::from_rows(r).unwrap()
}

/// x^2/2 for x < 0, 0 beyond.
pub fn half_square() -> PlqFunction {
    rows(&[[0.0, 0.5, 0.0, 0.0], [INF, 0.0, 0.0, 0.0]])
}

/// -7x-5 | x^2-x | 2x^2-3x+1 with breaks at -1 and 1.
pub fn three_piece() -> PlqFunction {
    rows(&[[-1.0, 0.0, -7.0, -5.0], [1.0, 1.0, -1.0, 0.0], [INF, 2.0, -3.0, 1.0]])
}

/// x^2/6 + x/3 | x + 2 on (-2, 1], +inf beyond.
pub fn bounded_right() -> PlqFunction {
    rows(&[[-2.0, 1.0 / 6.0, 1.0 / 3.0, 0.0], [1.0, 0.0, 1.0, 2.0], [INF, 0.0, 0.0, INF]])
}

/// -2x on [-6, 0] | x^2-2x | 2x-4 | x^2/3-1.
pub fn bounded_left() -> PlqFunction {
    rows(&[
        [-6.0, 0.0, 0.0, INF],
        [0.0, 0.0, -2.0, 0.0],
        [2.0, 1.0, -2.0, 0.0],
        [3.0, 0.0, 2.0, -4.0],
        [INF, 1.0 / 3.0, 0.0, -1.0],
    ])
}

/// x^2/3 | x/2+7/3 | x^2-8/3 with breaks at -2 and 2.5.
pub fn kinked() -> PlqFunction {
    rows(&[
        [-2.0, 1.0 / 3.0, 0.0, 0.0],
        [2.5, 0.0, 0.5, 7.0 / 3.0],
        [INF, 1.0, 0.0, -8.0 / 3.0],
    ])
}

pub fn corpus() -> Vec<(&'static str, PlqFunction)> {
    vec![
        ("half_square", half_square()),
        ("three_piece", three_piece()),
        ("bounded_right", bounded_right()),
        ("bounded_left", bounded_left()),
        ("kinked", kinked()),
        ("quadratic", PlqFunction::quadratic(0.5, 0.0, 0.0)),
        ("affine", PlqFunction::affine(-0.75, 4.0)),
        ("needle", PlqFunction::needle(2.0, 1.0)),
        ("abs", rows(&[[0.0, 0.0, -1.0, 0.0], [INF, 0.0, 1.0, 0.0]])),
        ("interval_indicator", rows(&[[-1.0, 0.0, 0.0, INF], [1.0, 0.0, 0.0, 0.0], [INF, 0.0, 0.0, INF]])),
    ]
}

/// A continuous convex PLQ function with `pieces` finite pieces on `[-span, span]`,
/// optionally closed on either side.
pub fn random_convex(rng: &mut StdRng, pieces: usize, span: f64) -> PlqFunction {
    let mut xs: Vec<f64> = (0..pieces.saturating_sub(1))
        .map(|_| rng.gen_range(-span..span))
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-3 * span / pieces as f64);
    let closed_left = rng.gen_bool(0.25);
    let closed_right = rng.gen_bool(0.25);
    let left = -span - rng.gen_range(0.5..2.0);
    let right = span + rng.gen_range(0.5..2.0);

    let draw_a = |rng: &mut StdRng| if rng.gen_bool(0.4) { 0.0 } else { rng.gen_range(0.05..10.0) };
    let mut a = draw_a(rng);
    let mut b: f64 = rng.gen_range(-10.0..10.0);
    let mut c: f64 = rng.gen_range(-10.0..10.0);
    if closed_left {
        let x = left;
        c -= a * x * x + b * x;
        c += rng.gen_range(-10.0..10.0);
    }

    let mut out = Vec::new();
    if closed_left {
        out.push(PlqPiece::new(ExtReal::finite(left), 0.0, 0.0, ExtReal::INFINITY));
    }
    for &x in &xs {
        out.push(PlqPiece::new(ExtReal::finite(x), a, b, ExtReal::finite(c)));
        let v = (a * x + b) * x + c;
        let s = 2.0 * a * x + b + if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..5.0) };
        a = draw_a(rng);
        b = s - 2.0 * a * x;
        c = v - (a * x + b) * x;
    }
    if closed_right {
        out.push(PlqPiece::new(ExtReal::finite(right), a, b, ExtReal::finite(c)));
        out.push(PlqPiece::new(ExtReal::INFINITY, 0.0, 0.0, ExtReal::INFINITY));
    } else {
        out.push(PlqPiece::new(ExtReal::INFINITY, a, b, ExtReal::finite(c)));
    }
    PlqFunction::new(out).expect("generated rows are valid")
}

/// A point of the domain, landing on a breakpoint one time in five.
pub fn random_point(rng: &mut StdRng, f: &PlqFunction) -> f64 {
    if let Some((x0, _)) = f.needle_point() {
        return x0;
    }
    let kinks: Vec<f64> = f
        .rows()
        .iter()
        .filter_map(|p| p.x_hi.finite_value())
        .filter(|&x| f.value_at(x).is_finite())
        .collect();
    if !kinks.is_empty() && rng.gen_bool(0.2) {
        return kinks[rng.gen_range(0..kinks.len())];
    }
    let dom = f.domain();
    let lo = dom.lo().finite_value().unwrap_or(-15.0).max(-15.0);
    let hi = dom.hi().finite_value().unwrap_or(15.0).min(15.0);
    if lo >= hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}
