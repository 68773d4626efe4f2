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

//! Real roots of `a x^2 + b x + c` using the cancellation-free form.

use crate::ext::Tolerance;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuadRoots {
    /// No real root, or the polynomial is identically zero.
    None,
    /// Sign-changing root of a linear polynomial.
    Simple(f64),
    /// Touching root: the discriminant is zero within tolerance, so no sign change.
    Double(f64),
    /// Two distinct roots, ascending.
    Two(f64, f64),
}

pub fn quadratic_roots(a: f64, b: f64, c: f64, tol: Tolerance) -> QuadRoots {
    if a == 0.0 {
        if b == 0.0 {
            return QuadRoots::None;
        }
        return QuadRoots::Simple(-c / b);
    }
    let disc = b * b - 4.0 * a * c;
    if disc.abs() <= tol.bound(b * b, 4.0 * a * c) {
        return QuadRoots::Double(-b / (2.0 * a));
    }
    if disc < 0.0 {
        return QuadRoots::None;
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let r1 = q / a;
    let r2 = c / q;
    if r1 <= r2 {
        QuadRoots::Two(r1, r2)
    } else {
        QuadRoots::Two(r2, r1)
    }
}
