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

//! Extended reals, closed extended-real intervals and comparison tolerances.

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A real number extended with `-inf` and `+inf`. NaN is unrepresentable.
#[derive(Clone, Copy, PartialEq)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const INFINITY: ExtReal = ExtReal(f64::INFINITY);
    pub const NEG_INFINITY: ExtReal = ExtReal(f64::NEG_INFINITY);
    pub const ZERO: ExtReal = ExtReal(0.0);

    /// Wraps `v`, or returns `None` for NaN. Negative zero is normalized to zero.
    pub fn new(v: f64) -> Option<ExtReal> {
        if v.is_nan() {
            None
        } else {
            Some(ExtReal(v + 0.0))
        }
    }

    /// Panics on NaN; use for values that are finite by construction.
    pub fn finite(v: f64) -> ExtReal {
        assert!(v.is_finite(), "expected a finite value, got {v}");
        ExtReal(v + 0.0)
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_pos_inf(self) -> bool {
        self.0 == f64::INFINITY
    }

    pub fn is_neg_inf(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn finite_value(self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pos_inf() {
            f.write_str("inf")
        } else if self.is_neg_inf() {
            f.write_str("-inf")
        } else {
            fmt::Display::fmt(&self.0, f)
        }
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        // no NaN and no negative zero, so total_cmp agrees with numeric order
        self.0.total_cmp(&other.0)
    }
}

impl From<f64> for ExtReal {
    /// Panics on NaN.
    fn from(v: f64) -> Self {
        ExtReal::new(v).expect("NaN is not an extended real")
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    /// Panics on `inf + (-inf)`.
    fn add(self, rhs: ExtReal) -> ExtReal {
        let v = self.0 + rhs.0;
        assert!(!v.is_nan(), "undefined extended-real sum {self} + {rhs}");
        ExtReal(v + 0.0)
    }
}

impl Sub for ExtReal {
    type Output = ExtReal;

    fn sub(self, rhs: ExtReal) -> ExtReal {
        self + (-rhs)
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;

    fn neg(self) -> ExtReal {
        ExtReal(-self.0 + 0.0)
    }
}

impl Mul<f64> for ExtReal {
    type Output = ExtReal;

    /// Scaling by a finite factor; `0 * inf` is taken to be `0`.
    fn mul(self, k: f64) -> ExtReal {
        assert!(k.is_finite(), "scale factor must be finite");
        if k == 0.0 {
            ExtReal::ZERO
        } else {
            ExtReal(self.0 * k + 0.0)
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_pos_inf() {
            serializer.serialize_str("inf")
        } else if self.is_neg_inf() {
            serializer.serialize_str("-inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ExtVisitor;

        impl Visitor<'_> for ExtVisitor {
            type Value = ExtReal;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or one of \"inf\", \"-inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtReal, E> {
                ExtReal::new(v).ok_or_else(|| E::custom("NaN is not an extended real"))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtReal, E> {
                Ok(ExtReal(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtReal, E> {
                Ok(ExtReal(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtReal, E> {
                parse_ext_token(v).ok_or_else(|| E::custom(format!("invalid extended real `{v}`")))
            }
        }

        deserializer.deserialize_any(ExtVisitor)
    }
}

/// Parses a decimal number or one of `inf`, `+inf`, `-inf`, `infinity` (any case).
pub fn parse_ext_token(tok: &str) -> Option<ExtReal> {
    let lower = tok.trim().to_ascii_lowercase();
    match lower.as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => Some(ExtReal::INFINITY),
        "-inf" | "-infinity" => Some(ExtReal::NEG_INFINITY),
        "nan" | "+nan" | "-nan" => None,
        _ => lower.parse::<f64>().ok().and_then(ExtReal::new),
    }
}

/// Closed interval `[lo, hi]` of extended reals with `lo <= hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtInterval {
    lo: ExtReal,
    hi: ExtReal,
}

impl ExtInterval {
    /// Returns `None` when `lo > hi`; emptiness is never encoded as an inverted interval.
    pub fn new(lo: ExtReal, hi: ExtReal) -> Option<ExtInterval> {
        (lo <= hi).then_some(ExtInterval { lo, hi })
    }

    pub fn singleton(v: ExtReal) -> ExtInterval {
        ExtInterval { lo: v, hi: v }
    }

    pub fn whole_line() -> ExtInterval {
        ExtInterval {
            lo: ExtReal::NEG_INFINITY,
            hi: ExtReal::INFINITY,
        }
    }

    pub fn lo(&self) -> ExtReal {
        self.lo
    }

    pub fn hi(&self) -> ExtReal {
        self.hi
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: ExtReal) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// Membership with the bounds relaxed by `tol`.
    pub fn contains_tol(&self, v: f64, tol: Tolerance) -> bool {
        let above = self.lo.is_neg_inf() || v >= self.lo.get() || tol.close(v, self.lo.get());
        let below = self.hi.is_pos_inf() || v <= self.hi.get() || tol.close(v, self.hi.get());
        above && below
    }

    /// `self ⊆ other` up to `tol` on each finite bound.
    pub fn is_subset_tol(&self, other: &ExtInterval, tol: Tolerance) -> bool {
        let lo_ok = other.lo.is_neg_inf()
            || (self.lo.is_finite() && (self.lo >= other.lo || tol.close(self.lo.get(), other.lo.get())))
            || self.lo == other.lo;
        let hi_ok = other.hi.is_pos_inf()
            || (self.hi.is_finite() && (self.hi <= other.hi || tol.close(self.hi.get(), other.hi.get())))
            || self.hi == other.hi;
        lo_ok && hi_ok
    }

    /// Clamps `v` into the interval.
    pub fn clamp(&self, v: f64) -> f64 {
        let mut out = v;
        if self.lo.is_finite() && out < self.lo.get() {
            out = self.lo.get();
        }
        if self.hi.is_finite() && out > self.hi.get() {
            out = self.hi.get();
        }
        out
    }
}

impl fmt::Display for ExtInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_short(self.lo), format_short(self.hi))
    }
}

/// Formats with eight significant digits, trimming trailing zeros (`-1.4142136`, `0`, `inf`).
pub fn format_short(v: ExtReal) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let x = v.get();
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = 8i32;
    let exp = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        return format!("{:.*e}", (digits - 1) as usize, x);
    }
    let decimals = (digits - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

/// Absolute-plus-relative comparison tolerance: `|a - b| <= abs + rel * max(|a|, |b|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-9, rel: 1e-9 }
    }
}

impl Tolerance {
    pub const EXACT: Tolerance = Tolerance { abs: 0.0, rel: 0.0 };

    pub fn new(abs: f64, rel: f64) -> Tolerance {
        Tolerance { abs, rel }
    }

    /// Same absolute and relative component.
    pub fn uniform(t: f64) -> Tolerance {
        Tolerance { abs: t, rel: t }
    }

    pub fn bound(&self, a: f64, b: f64) -> f64 {
        self.abs + self.rel * a.abs().max(b.abs())
    }

    pub fn close(&self, a: f64, b: f64) -> bool {
        if a == b {
            return true;
        }
        (a - b).abs() <= self.bound(a, b)
    }

    pub fn close_ext(&self, a: ExtReal, b: ExtReal) -> bool {
        if a.is_finite() && b.is_finite() {
            self.close(a.get(), b.get())
        } else {
            a == b
        }
    }

    /// `a <= b` up to tolerance.
    pub fn le(&self, a: f64, b: f64) -> bool {
        a <= b || self.close(a, b)
    }

    pub fn is_zero(&self, a: f64) -> bool {
        a.abs() <= self.abs
    }
}
