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

//! Convex univariate piecewise linear-quadratic (PLQ) functions: conjugates, pointwise
//! minima, exact subdifferentials and epsilon-subdifferentials, with sweeps and plot output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod epssub;
pub mod error;
pub mod ext;
pub mod format;
pub mod oracle;
pub mod plq;
pub mod roots;
pub mod sweep;
pub mod transforms;
pub mod viz;

pub use epssub::{affine_minorant, eps_subdifferential, CaseTag, EpsError, EpsQuery, EpsSolver, EpsSubdiffResult};
pub use error::PlqError;
pub use ext::{ExtInterval, ExtReal, Tolerance};
pub use format::{parse_plq, serialize_plq, serialize_plq_json};
pub use plq::{check, PlqFunction, PlqPiece, Violation, ViolationKind};
pub use transforms::{conjugate, plq_min, subdifferential};
