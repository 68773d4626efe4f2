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

use crate::plq::Violation;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlqError {
    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error("invalid plq rows: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("evaluation grid must be sorted (offending index {index})")]
    UnsortedGrid { index: usize },
    #[error("the input function is not convex.")]
    NotConvex,
    #[error("result is not representable as a plq function: {0}")]
    Unrepresentable(String),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
