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

//! Primal, dual and subdifferential views of an ε-subdifferential query, with SVG, CSV and
//! JSON output and frame sequences for sweeps.
//!
//! Endpoints and support-line slopes come straight from [`EpsSolver::solve`]; this module
//! only samples and lays out.

mod svg;

pub use svg::render_svg;

use crate::epssub::{EpsError, EpsQuery, EpsSolver};
use crate::ext::{ExtInterval, ExtReal};
use crate::plq::PlqFunction;
use crate::sweep::{linspace, sweep_eps, sweep_x, SubdiffGraph, SweepAxis};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

pub const DEFAULT_SAMPLES: usize = 512;
pub const DEFAULT_GRAPH_POINTS: usize = 100;

/// Plot ranges. `x` is the primal abscissa, `s` the slope axis shared by the dual and
/// subdifferential views; `y` and `t` are the primal and dual ordinates, chosen from the
/// samples when absent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x: [f64; 2],
    pub s: [f64; 2],
    pub y: Option<[f64; 2]>,
    pub t: Option<[f64; 2]>,
}

impl Window {
    pub fn new(x: [f64; 2], s: [f64; 2]) -> Window {
        Window { x, s, y: None, t: None }
    }

    fn validate(&self) -> Result<(), EpsError> {
        let ranges = [Some(self.x), Some(self.s), self.y, self.t];
        for r in ranges.iter().flatten() {
            if !(r[0].is_finite() && r[1].is_finite() && r[0] < r[1]) {
                return Err(EpsError::InvalidQuery(format!(
                    "degenerate window [{}, {}]",
                    r[0], r[1]
                )));
            }
        }
        Ok(())
    }

    /// Covers the breakpoints of `f` and `f*`, the query points and finite endpoints.
    pub fn auto(solver: &EpsSolver, queries: &[EpsQuery]) -> Result<Window, EpsError> {
        let mut xs: Vec<f64> = breakpoints(solver.function());
        let mut ss: Vec<f64> = breakpoints(solver.conjugate());
        for q in queries {
            xs.push(q.x_bar());
            let i = solver.interval(q)?;
            ss.extend([i.lo(), i.hi()].iter().filter_map(|v| v.finite_value()));
        }
        Ok(Window::new(padded(&xs), padded(&ss)))
    }
}

fn breakpoints(f: &PlqFunction) -> Vec<f64> {
    if let Some((x0, _)) = f.needle_point() {
        return vec![x0];
    }
    f.rows()
        .iter()
        .filter_map(|p| p.x_hi.finite_value())
        .collect()
}

fn padded(v: &[f64]) -> [f64; 2] {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() {
        return [-5.0, 5.0];
    }
    let pad = ((hi - lo) * 0.25).max(1.0);
    [lo - pad, hi + pad]
}

/// A line through `through` with slope `slope`; infinite slopes are vertical.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub slope: ExtReal,
    pub through: [f64; 2],
    /// The part inside the view box, if any.
    pub segment: Option<[[f64; 2]; 2]>,
}

impl Line {
    fn clipped(slope: ExtReal, through: [f64; 2], bx: [f64; 2], by: [f64; 2]) -> Line {
        let segment = match slope.finite_value() {
            None => {
                let x = through[0];
                (bx[0] <= x && x <= bx[1]).then_some([[x, by[0]], [x, by[1]]])
            }
            Some(m) => {
                let y = |x: f64| through[1] + m * (x - through[0]);
                clip_segment([bx[0], y(bx[0])], [bx[1], y(bx[1])], bx, by)
            }
        };
        Line { slope, through, segment }
    }
}

/// Liang–Barsky clipping of `p→q` to the box.
fn clip_segment(p: [f64; 2], q: [f64; 2], bx: [f64; 2], by: [f64; 2]) -> Option<[[f64; 2]; 2]> {
    let d = [q[0] - p[0], q[1] - p[1]];
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (pk, qk) in [
        (-d[0], p[0] - bx[0]),
        (d[0], bx[1] - p[0]),
        (-d[1], p[1] - by[0]),
        (d[1], by[1] - p[1]),
    ] {
        if pk == 0.0 {
            if qk < 0.0 {
                return None;
            }
        } else {
            let r = qk / pk;
            if pk < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    (t0 <= t1).then(|| {
        [
            [p[0] + t0 * d[0], p[1] + t0 * d[1]],
            [p[0] + t1 * d[0], p[1] + t1 * d[1]],
        ]
    })
}

/// Polylines of the finite samples, split where the function leaves its domain.
fn sample_curve(f: &PlqFunction, range: [f64; 2], n: usize) -> Vec<Vec<[f64; 2]>> {
    let mut xs = linspace(range[0], range[1], n);
    if let Some((x0, _)) = f.needle_point() {
        xs = if range[0] <= x0 && x0 <= range[1] { vec![x0] } else { Vec::new() };
    } else {
        // closed domain ends fall between samples otherwise
        let dom = f.domain();
        for e in [dom.lo(), dom.hi()] {
            if let Some(v) = e.finite_value() {
                if range[0] < v && v < range[1] {
                    xs.push(v);
                }
            }
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup();
    }
    let mut out: Vec<Vec<[f64; 2]>> = Vec::new();
    let mut cur = Vec::new();
    for x in xs {
        match f.value_at(x).finite_value() {
            Some(y) => cur.push([x, y]),
            None => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn value_range(curves: &[Vec<[f64; 2]>], extra: &[f64]) -> [f64; 2] {
    let vals: Vec<f64> = curves
        .iter()
        .flatten()
        .map(|p| p[1])
        .chain(extra.iter().copied())
        .collect();
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() {
        return [-1.0, 1.0];
    }
    let pad = ((hi - lo) * 0.1).max(0.5);
    [lo - pad, hi + pad]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimalView {
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    pub f: Vec<Vec<[f64; 2]>>,
    /// Lines through `(x̄, f(x̄) - ε)` with slopes `v_l` and `v_u`.
    pub support: [Line; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualView {
    pub s_range: [f64; 2],
    pub t_range: [f64; 2],
    pub f_conj: Vec<Vec<[f64; 2]>>,
    /// `l(s) = ε - f(x̄) + x̄ s`.
    pub minorant: Line,
    /// `[v_l, v_u] ∩ dom f*`, where `min(f*, l) = f*`.
    pub coincidence: Option<ExtInterval>,
    pub coincidence_curve: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubdiffView {
    pub param_range: [f64; 2],
    pub s_range: [f64; 2],
    pub graph: SubdiffGraph,
    /// Parameter value of the current query and its interval.
    pub highlight: (f64, ExtInterval),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryEcho {
    pub x_bar: f64,
    pub eps: f64,
    pub f_x_bar: f64,
    pub interval: ExtInterval,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViewBundle {
    pub meta: QueryEcho,
    pub primal: PrimalView,
    pub dual: DualView,
    pub subdiff: SubdiffView,
}

impl ViewBundle {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle serializes")
    }

    pub fn from_json(text: &str) -> Result<ViewBundle, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Long format `series,u,v` over every sampled curve, followed by the graph samples.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("series,u,v\n");
        let mut curves = |name: &str, cs: &[Vec<[f64; 2]>]| {
            for p in cs.iter().flatten() {
                let _ = writeln!(out, "{name},{},{}", p[0], p[1]);
            }
        };
        curves("f", &self.primal.f);
        curves("f_conj", &self.dual.f_conj);
        curves("coincidence", &self.dual.coincidence_curve);
        for s in &self.subdiff.graph.samples {
            let _ = writeln!(out, "graph_lo,{},{}", s.param, s.lo);
            let _ = writeln!(out, "graph_hi,{},{}", s.param, s.hi);
        }
        out
    }
}

/// Views for one query with an x-sweep of [`DEFAULT_GRAPH_POINTS`] over the window.
pub fn render_views(solver: &EpsSolver, q: &EpsQuery, window: &Window) -> Result<ViewBundle, EpsError> {
    window.validate()?;
    let grid = linspace(window.x[0], window.x[1], DEFAULT_GRAPH_POINTS);
    let graph = sweep_x(solver, q.eps(), &grid)?.graph;
    render_with_graph(solver, q, window, graph)
}

/// As [`render_views`] with a caller-supplied subdifferential graph.
pub fn render_with_graph(
    solver: &EpsSolver,
    q: &EpsQuery,
    window: &Window,
    graph: SubdiffGraph,
) -> Result<ViewBundle, EpsError> {
    window.validate()?;
    let res = solver.solve(q)?;
    let interval = res.interval;
    let f = solver.function();
    let fx = f.value_at(q.x_bar()).get();
    let anchor = [q.x_bar(), fx - q.eps()];

    let f_curve = sample_curve(f, window.x, DEFAULT_SAMPLES);
    let y_range = window.y.unwrap_or_else(|| value_range(&f_curve, &[anchor[1]]));
    let support = [
        Line::clipped(interval.lo(), anchor, window.x, y_range),
        Line::clipped(interval.hi(), anchor, window.x, y_range),
    ];

    let conj = solver.conjugate();
    let conj_curve = sample_curve(conj, window.s, DEFAULT_SAMPLES);
    let intercept = q.eps() - fx;
    let l_at = |s: f64| intercept + q.x_bar() * s;
    let t_extra: Vec<f64> = if conj_curve.is_empty() {
        vec![l_at(window.s[0]), l_at(window.s[1])]
    } else {
        Vec::new()
    };
    let t_range = window.t.unwrap_or_else(|| value_range(&conj_curve, &t_extra));
    let minorant = Line::clipped(ExtReal::finite(q.x_bar()), [0.0, intercept], window.s, t_range);

    let dom = conj.domain();
    let coincidence = ExtInterval::new(interval.lo().max(dom.lo()), interval.hi().min(dom.hi()));
    let coincidence_curve = match coincidence {
        Some(c) => {
            let lo = c.lo().finite_value().unwrap_or(window.s[0]).max(window.s[0]);
            let hi = c.hi().finite_value().unwrap_or(window.s[1]).min(window.s[1]);
            if lo <= hi {
                sample_curve(conj, [lo, hi], DEFAULT_SAMPLES)
            } else {
                Vec::new()
            }
        }
        None => Vec::new(),
    };

    let param = match graph.axis {
        SweepAxis::X => q.x_bar(),
        SweepAxis::Eps => q.eps(),
    };
    let param_range = match graph.axis {
        SweepAxis::X => window.x,
        SweepAxis::Eps => {
            let first = graph.samples.first().map_or(param, |s| s.param).min(param);
            let last = graph.samples.last().map_or(param, |s| s.param).max(param);
            if first < last {
                [first, last]
            } else {
                [first - 0.5, first + 0.5]
            }
        }
    };

    Ok(ViewBundle {
        meta: QueryEcho {
            x_bar: q.x_bar(),
            eps: q.eps(),
            f_x_bar: fx,
            interval,
        },
        primal: PrimalView {
            x_range: window.x,
            y_range,
            f: f_curve,
            support,
        },
        dual: DualView {
            s_range: window.s,
            t_range,
            f_conj: conj_curve,
            minorant,
            coincidence,
            coincidence_curve,
        },
        subdiff: SubdiffView {
            param_range,
            s_range: window.s,
            graph,
            highlight: (param, interval),
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Svg,
    Csv,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "svg" => Ok(ExportFormat::Svg),
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(format!("unknown format `{other}` (expected svg, csv or json)")),
        }
    }
}

pub fn export_bundle(bundle: &ViewBundle, format: ExportFormat) -> String {
    match format {
        ExportFormat::Svg => render_svg(bundle),
        ExportFormat::Csv => bundle.to_csv(),
        ExportFormat::Json => bundle.to_json(),
    }
}

/// Graphs have no SVG form of their own; use [`render_views`] for pictures.
pub fn export_graph(graph: &SubdiffGraph, format: ExportFormat) -> Option<String> {
    match format {
        ExportFormat::Svg => None,
        ExportFormat::Csv => Some(graph.to_csv()),
        ExportFormat::Json => Some(graph.to_json()),
    }
}

pub fn write_output(path: &Path, contents: &str) -> io::Result<()> {
    std::fs::write(path, contents)
}

/// Which parameter varies across frames; the other is held at `fixed`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnimationSpec {
    pub axis: SweepAxis,
    pub fixed: f64,
    pub grid: Vec<f64>,
}

/// One SVG per grid point with axes shared across frames.
pub fn animate(solver: &EpsSolver, spec: &AnimationSpec, window: Option<Window>) -> Result<Vec<String>, EpsError> {
    let queries: Vec<EpsQuery> = spec
        .grid
        .iter()
        .map(|&p| match spec.axis {
            SweepAxis::X => EpsQuery::with_tol(p, spec.fixed, solver.tol()),
            SweepAxis::Eps => EpsQuery::with_tol(spec.fixed, p, solver.tol()),
        })
        .collect::<Result<_, _>>()?;
    if queries.is_empty() {
        return Err(EpsError::InvalidQuery("empty grid".into()));
    }
    let mut w = match window {
        Some(w) => w,
        None => Window::auto(solver, &queries)?,
    };
    w.validate()?;
    if w.y.is_none() {
        let curve = sample_curve(solver.function(), w.x, DEFAULT_SAMPLES);
        let anchors: Vec<f64> = queries
            .iter()
            .map(|q| solver.function().value_at(q.x_bar()).finite_value().map(|v| v - q.eps()))
            .collect::<Option<_>>()
            .ok_or(EpsError::OutsideDomain)?;
        w.y = Some(value_range(&curve, &anchors));
    }
    if w.t.is_none() {
        let probe = render_views(solver, &queries[0], &w)?;
        w.t = Some(probe.dual.t_range);
    }
    match spec.axis {
        SweepAxis::X => queries
            .iter()
            .map(|q| render_views(solver, q, &w).map(|b| render_svg(&b)))
            .collect(),
        SweepAxis::Eps => {
            let graph = sweep_eps(solver, spec.fixed, &spec.grid)?.graph;
            queries
                .iter()
                .map(|q| render_with_graph(solver, q, &w, graph.clone()).map(|b| render_svg(&b)))
                .collect()
        }
    }
}

/// Writes `frame_0000.svg`, `frame_0001.svg`, ... into `dir`.
pub fn write_frames(dir: &Path, frames: &[String]) -> io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    frames
        .iter()
        .enumerate()
        .map(|(i, svg)| {
            let path = dir.join(format!("frame_{i:04}.svg"));
            std::fs::write(&path, svg)?;
            Ok(path)
        })
        .collect()
}
