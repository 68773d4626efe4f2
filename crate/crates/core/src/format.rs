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

//! Text and JSON encodings of PLQ row matrices.
//!
//! Text: one row per line, four whitespace-separated tokens `x a b c`, `inf`/`-inf` for
//! infinities. Blank lines and `#` comments are ignored.
//!
//! JSON: `{"rows": [[x, a, b, c], ...]}` with `"inf"`/`"-inf"` strings for infinities.

use crate::error::PlqError;
use crate::ext::{parse_ext_token, ExtReal};
use crate::plq::{check, PlqFunction, PlqPiece};
use serde::Serialize;

pub fn parse_plq_text(text: &str) -> Result<PlqFunction, PlqError> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = rows.len();
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(PlqError::Parse {
                row,
                message: format!("line {}: expected 4 tokens, found {}", lineno + 1, toks.len()),
            });
        }
        let mut vals = [ExtReal::ZERO; 4];
        for (k, tok) in toks.iter().enumerate() {
            vals[k] = parse_ext_token(tok).ok_or_else(|| PlqError::Parse {
                row,
                message: format!("line {}: malformed token `{tok}`", lineno + 1),
            })?;
        }
        if !vals[1].is_finite() || !vals[2].is_finite() {
            return Err(PlqError::Parse {
                row,
                message: "coefficients a and b must be finite".into(),
            });
        }
        rows.push(PlqPiece::new(vals[0], vals[1].get(), vals[2].get(), vals[3]));
    }
    validate(rows)
}

pub fn parse_plq_json(text: &str) -> Result<PlqFunction, PlqError> {
    #[derive(serde::Deserialize)]
    struct Raw {
        rows: Vec<[ExtReal; 4]>,
    }
    let raw: Raw = serde_json::from_str(text).map_err(|e| PlqError::Parse {
        row: 0,
        message: format!("json: {e}"),
    })?;
    let mut rows = Vec::with_capacity(raw.rows.len());
    for (i, r) in raw.rows.iter().enumerate() {
        if !r[1].is_finite() || !r[2].is_finite() {
            return Err(PlqError::Parse {
                row: i,
                message: "coefficients a and b must be finite".into(),
            });
        }
        rows.push(PlqPiece::new(r[0], r[1].get(), r[2].get(), r[3]));
    }
    validate(rows)
}

/// Accepts either encoding, choosing JSON when the document starts with `{`.
pub fn parse_plq(text: &str) -> Result<PlqFunction, PlqError> {
    if text.trim_start().starts_with('{') {
        parse_plq_json(text)
    } else {
        parse_plq_text(text)
    }
}

fn validate(rows: Vec<PlqPiece>) -> Result<PlqFunction, PlqError> {
    let violations = check(&rows);
    if violations.is_empty() {
        PlqFunction::new(rows)
    } else {
        Err(PlqError::Invalid(violations))
    }
}

pub fn serialize_plq(f: &PlqFunction) -> String {
    let mut out = String::new();
    for p in f.rows() {
        out.push_str(&format!(
            "{} {} {} {}\n",
            p.x_hi,
            ExtReal::finite(p.a),
            ExtReal::finite(p.b),
            p.c
        ));
    }
    out
}

pub fn serialize_plq_json(f: &PlqFunction) -> String {
    #[derive(Serialize)]
    struct Raw {
        rows: Vec<[ExtReal; 4]>,
    }
    let raw = Raw {
        rows: f
            .rows()
            .iter()
            .map(|p| [p.x_hi, ExtReal::finite(p.a), ExtReal::finite(p.b), p.c])
            .collect(),
    };
    serde_json::to_string(&raw).expect("plq rows serialize")
}
