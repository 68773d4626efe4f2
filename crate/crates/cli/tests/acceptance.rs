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

//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use common::{bounded_right, corpus, half_square, kinked, random_convex, random_point, rows, three_piece, INF};
use epssub::oracle::oracle_eps_interval;
use epssub::sweep::{br_witness, linspace, monotonicity_violations, sweep_eps, sweep_x};
use epssub::{conjugate, eps_subdifferential, subdifferential, EpsQuery, EpsSolver, ExtInterval, PlqFunction, Tolerance};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::alloc::{GlobalAlloc, Layout, System};
use std::f64::consts::SQRT_2;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

struct Counting;

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            let now = CURRENT.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(now, Ordering::Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        CURRENT.fetch_sub(layout.size(), Ordering::Relaxed);
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let p = System.realloc(ptr, layout, new_size);
        if !p.is_null() {
            if new_size >= layout.size() {
                let now = CURRENT.fetch_add(new_size - layout.size(), Ordering::Relaxed) + new_size - layout.size();
                PEAK.fetch_max(now, Ordering::Relaxed);
            } else {
                CURRENT.fetch_sub(layout.size() - new_size, Ordering::Relaxed);
            }
        }
        p
    }
}

#[global_allocator]
static GLOBAL: Counting = Counting;

/// Bytes allocated above the starting level while `f` runs.
fn high_water<T>(f: impl FnOnce() -> T) -> (T, usize) {
    let base = CURRENT.load(Ordering::Relaxed);
    PEAK.store(base, Ordering::Relaxed);
    let out = f();
    (out, PEAK.load(Ordering::Relaxed) - base)
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

const GAP: Tolerance = Tolerance { abs: 1e-9, rel: 0.0 };

fn interval_close(i: &ExtInterval, lo: f64, hi: f64, tol: Tolerance) -> bool {
    tol.close_ext(i.lo(), epssub::ExtReal::new(lo).unwrap()) && tol.close_ext(i.hi(), epssub::ExtReal::new(hi).unwrap())
}

fn half_square_replication() -> Outcome {
    let f = half_square();
    let q = EpsQuery::new(0.0, 1.0).unwrap();
    let start = Instant::now();
    let r = eps_subdifferential(&f, &q).unwrap();
    let took = start.elapsed();
    let conj_ok = r.f_conj.to_matrix() == vec![[0.0, 0.5, 0.0, 0.0], [INF, 0.0, 0.0, INF]];
    let m_want = rows(&[[-2f64.sqrt(), 0.0, 0.0, 1.0], [0.0, 0.5, 0.0, 0.0], [INF, 0.0, 0.0, 1.0]]);
    let m_ok = r.m.as_ref().is_some_and(|m| m.is_equal(&m_want, Tolerance::uniform(1e-12)));
    let i_ok = interval_close(&r.interval, -SQRT_2, 0.0, Tolerance::new(1e-7, 0.0))
        && interval_close(&r.interval, -2f64.sqrt(), 0.0, GAP);
    outcome(
        conj_ok && m_ok && i_ok && took < Duration::from_millis(10),
        format!("interval {} conj {conj_ok} min {m_ok} in {took:?}", r.interval),
    )
}

fn three_piece_replication() -> Outcome {
    let s = EpsSolver::new(three_piece(), Tolerance::default()).unwrap();
    let a = s.interval(&EpsQuery::new(-1.0, 1.0).unwrap()).unwrap();
    let b = s.interval(&EpsQuery::new(0.5, 1.0).unwrap()).unwrap();
    outcome(
        interval_close(&a, -7.0, -1.0, GAP) && interval_close(&b, -2.0, 10f64.sqrt() - 1.0, GAP),
        format!("x=-1: {a}, x=0.5: {b}"),
    )
}

fn random_instances(seed: u64, count: usize) -> Vec<(PlqFunction, f64, f64)> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=20);
            let f = random_convex(&mut rng, n, 10.0);
            let x = random_point(&mut rng, &f);
            let eps = rng.gen_range(1e-3..=5.0);
            (f, x, eps)
        })
        .collect()
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let tol = Tolerance::uniform(1e-6);
    let mut bad = 0;
    let cases = random_instances(0x5eed, 500);
    for (f, x, eps) in &cases {
        let q = EpsQuery::new(*x, *eps).unwrap();
        let a = EpsSolver::new(f.clone(), Tolerance::default()).and_then(|s| s.interval(&q));
        let o = oracle_eps_interval(f, &q);
        match a {
            Ok(a) if tol.close_ext(a.lo(), o.lo()) && tol.close_ext(a.hi(), o.hi()) => {}
            _ => bad += 1,
        }
    }
    let took = start.elapsed();
    outcome(
        bad == 0 && took < Duration::from_secs(60),
        format!("{} instances, {bad} mismatches, {took:?}", cases.len()),
    )
}

fn biconjugate() -> Outcome {
    let tol = Tolerance::uniform(1e-8);
    let mut fns: Vec<PlqFunction> = corpus().into_iter().map(|(_, f)| f).collect();
    fns.extend(random_instances(0xb1c0, 500).into_iter().map(|(f, _, _)| f));
    let bad = fns
        .iter()
        .filter(|f| !conjugate(&conjugate(f).unwrap()).unwrap().is_equal(f, tol))
        .count();
    outcome(bad == 0, format!("{} functions, {bad} failures", fns.len()))
}

fn monotonicity_and_nesting() -> Outcome {
    let tol = Tolerance::default();
    let mut fns: Vec<(PlqFunction, f64)> = corpus()
        .into_iter()
        .map(|(_, f)| {
            let x = f.needle_point().map_or(0.0, |p| p.0);
            let x = if f.value_at(x).is_finite() { x } else { -3.0 };
            (f, x)
        })
        .collect();
    fns.extend(random_instances(0x4e57, 200).into_iter().map(|(f, x, _)| (f, x)));
    let (mut contain, mut nest, mut mono) = (0, 0, 0);
    let eps_grid = linspace(0.05, 5.0, 20);
    for (f, x) in &fns {
        let s = EpsSolver::new(f.clone(), tol).unwrap();
        let d = subdifferential(f, *x).unwrap();
        for &eps in &eps_grid {
            if !d.is_subset_tol(&s.interval(&EpsQuery::new(*x, eps).unwrap()).unwrap(), tol) {
                contain += 1;
            }
        }
        let g = sweep_eps(&s, *x, &eps_grid).unwrap().graph;
        nest += g
            .samples
            .windows(2)
            .filter(|w| !w[0].interval().is_subset_tol(&w[1].interval(), tol))
            .count();
        let g = sweep_x(&s, 1.0, &linspace(-12.0, 12.0, 100)).unwrap().graph;
        mono += monotonicity_violations(&g, tol).len();
    }
    outcome(
        contain + nest + mono == 0,
        format!("{} functions: containment {contain}, nesting {nest}, monotonicity {mono} violations", fns.len()),
    )
}

fn median_time(f: &PlqFunction, q: &EpsQuery, runs: usize) -> Duration {
    let mut times: Vec<Duration> = (0..runs)
        .map(|_| {
            let start = Instant::now();
            eps_subdifferential(f, q).unwrap();
            start.elapsed()
        })
        .collect();
    times.sort();
    times[runs / 2]
}

fn linear_complexity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xc0de);
    let mut measure = |n: usize| {
        let f = random_convex(&mut rng, n, 1000.0);
        let x = random_point(&mut rng, &f);
        let q = EpsQuery::new(x, 1.0).unwrap();
        let t = median_time(&f, &q, 7);
        let (_, bytes) = high_water(|| eps_subdifferential(&f, &q).unwrap());
        (t, bytes)
    };
    let (t1, m1) = measure(10_000);
    let (t2, m2) = measure(20_000);
    let tr = t2.as_secs_f64() / t1.as_secs_f64();
    let mr = m2 as f64 / m1 as f64;
    outcome(
        tr <= 3.0 && (1.0..=4.0).contains(&mr),
        format!("time {t1:?} -> {t2:?} (x{tr:.2}), memory {m1} -> {m2} bytes (x{mr:.2})"),
    )
}

fn sweep_speed() -> Outcome {
    let start = Instant::now();
    let s = EpsSolver::new(three_piece(), Tolerance::default()).unwrap();
    let r = sweep_x(&s, 1.0, &linspace(-5.0, 5.0, 100)).unwrap();
    let took = start.elapsed();
    outcome(
        r.graph.len() == 100 && took < Duration::from_secs(1),
        format!("100 points in {took:?}"),
    )
}

fn br_suite() -> Outcome {
    let s = EpsSolver::new(kinked(), Tolerance::default()).unwrap();
    let q = EpsQuery::new(-1.5, 1.0).unwrap();
    let interval = s.interval(&q).unwrap();
    let v_l = interval.lo().get();
    let lambdas = linspace(0.2, 2.0, 50);
    let mut ok = 0;
    for &lambda in &lambdas {
        if let Ok(w) = br_witness(&s, &q, v_l, lambda) {
            let exact = (w.x_lambda - q.x_bar()).abs() <= lambda
                && (w.s_lambda - v_l).abs() <= q.eps() / lambda
                && subdifferential(s.function(), w.x_lambda)
                    .is_some_and(|d| d.contains(epssub::ExtReal::finite(w.s_lambda)));
            if exact {
                ok += 1;
            }
        }
    }
    let oracle = oracle_eps_interval(s.function(), &q);
    let agrees = Tolerance::uniform(1e-6).close_ext(interval.lo(), oracle.lo());
    outcome(
        ok == lambdas.len() && agrees,
        format!("v_l = {v_l:.6} (oracle {}), {ok}/{} witnesses", oracle.lo(), lambdas.len()),
    )
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_epssub")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn error_paths() -> Outcome {
    let malformed = data("malformed.plq");
    let nonconvex = data("nonconvex.plq");
    let right = data("bounded_right.plq");
    let cases = [
        (
            vec!["check", "--plq", malformed.to_str().unwrap()],
            "the input function is not plq.",
        ),
        (
            vec!["epssub", "--plq", nonconvex.to_str().unwrap(), "--xbar", "0", "--eps", "1"],
            "the input function is not convex.",
        ),
        (
            vec!["epssub", "--plq", right.to_str().unwrap(), "--xbar", "2", "--eps", "1"],
            "x̄ is not in the domain of the function.",
        ),
    ];
    let mut bad = Vec::new();
    for (args, msg) in &cases {
        let (code, _, err) = run_cli(args);
        if code != 2 || err.lines().next() != Some(*msg) {
            bad.push(format!("{} -> exit {code}, {:?}", args[0], err.lines().next()));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "3 messages, exit 2".to_string() } else { bad.join("; ") })
}

struct Figure {
    name: &'static str,
    file: &'static str,
    x_bar: &'static str,
    x_window: &'static str,
    s_window: &'static str,
    slopes: [f64; 2],
    coincidence: [f64; 2],
}

const FIGURES: [Figure; 4] = [
    Figure {
        name: "half_square",
        file: "half_square.plq",
        x_bar: "0",
        x_window: "-3:3",
        s_window: "-3:1",
        slopes: [-SQRT_2, 0.0],
        coincidence: [-SQRT_2, 0.0],
    },
    Figure {
        name: "three_piece_at_kink",
        file: "three_piece.plq",
        x_bar: "-1",
        x_window: "-5:5",
        s_window: "-10:10",
        slopes: [-7.0, -1.0],
        coincidence: [-7.0, -1.0],
    },
    Figure {
        name: "three_piece_inside",
        file: "three_piece.plq",
        x_bar: "0.5",
        x_window: "-5:5",
        s_window: "-10:10",
        slopes: [-2.0, 2.1622776601683795],
        coincidence: [-2.0, 2.1622776601683795],
    },
    Figure {
        name: "bounded_left",
        file: "bounded_left.plq",
        x_bar: "-6",
        x_window: "-7:5",
        s_window: "-4:4",
        slopes: [f64::NEG_INFINITY, -1.8344749394035609],
        coincidence: [f64::NEG_INFINITY, -1.8344749394035609],
    },
];

fn attr<'a>(tag: &'a str, name: &str) -> Option<&'a str> {
    let key = format!(" {name}=\"");
    let start = tag.find(&key)? + key.len();
    let len = tag[start..].find('"')?;
    Some(&tag[start..start + len])
}

fn pair(s: &str) -> [f64; 2] {
    let v: Vec<f64> = s.split(' ').map(|t| t.parse().unwrap()).collect();
    [v[0], v[1]]
}

fn ext(s: &str) -> f64 {
    match s {
        "inf" => INF,
        "-inf" => -INF,
        v => v.parse().unwrap(),
    }
}

/// Slopes, anchor and coincidence interval read back out of the SVG text.
fn check_svg(svg: &str, fig: &Figure) -> Result<(), String> {
    let close = |a: f64, b: f64, t: f64| (a.is_infinite() && a == b) || (a - b).abs() <= t * (1.0 + b.abs());
    let primal = svg.lines().find(|l| l.starts_with("<g id=\"primal\"")).ok_or("no primal group")?;
    let u = pair(attr(primal, "data-u-range").unwrap());
    let v = pair(attr(primal, "data-v-range").unwrap());
    let supports: Vec<&str> = svg.lines().filter(|l| l.contains("class=\"support\"")).collect();
    if supports.len() != 2 {
        return Err(format!("{} support lines", supports.len()));
    }
    let meta = svg.lines().find(|l| l.starts_with("<metadata")).ok_or("no metadata")?;
    let anchor_y = ext(attr(meta, "data-f-x-bar").unwrap()) - ext(attr(meta, "data-eps").unwrap());
    for (line, want) in supports.iter().zip(fig.slopes) {
        let slope = ext(attr(line, "data-slope").unwrap());
        if !close(slope, want, 1e-9) {
            return Err(format!("slope {slope} != {want}"));
        }
        let through = pair(attr(line, "data-through").unwrap());
        if through != [ext(attr(meta, "data-x-bar").unwrap()), anchor_y] {
            return Err(format!("line through {through:?}"));
        }
        if slope.is_finite() {
            let px = |k: &str| attr(line, k).unwrap().parse::<f64>().unwrap();
            let du = (px("x2") - px("x1")) / 400.0 * (u[1] - u[0]);
            let dv = -(px("y2") - px("y1")) / 400.0 * (v[1] - v[0]);
            if !close(dv / du, slope, 1e-3) {
                return Err(format!("drawn slope {} != {slope}", dv / du));
            }
        }
    }
    let coin = svg
        .lines()
        .find(|l| l.contains("class=\"coincidence\""))
        .ok_or("no coincidence segment")?;
    let lo = ext(attr(coin, "data-lo").unwrap());
    let hi = ext(attr(coin, "data-hi").unwrap());
    if !close(lo, fig.coincidence[0], 1e-9) || !close(hi, fig.coincidence[1], 1e-9) {
        return Err(format!("coincidence [{lo}, {hi}]"));
    }
    for id in ["primal", "dual", "subdiff"] {
        if !svg.contains(&format!("<g id=\"{id}\"")) {
            return Err(format!("missing group {id}"));
        }
    }
    Ok(())
}

fn golden_figures() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let bless = std::env::var_os("EPSSUB_BLESS").is_some();
    let mut problems = Vec::new();
    for fig in &FIGURES {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("{}_{run}.svg", fig.name));
            let plq = data(fig.file);
            let (code, _, err) = run_cli(&[
                "render",
                "--plq",
                plq.to_str().unwrap(),
                "--xbar",
                fig.x_bar,
                "--eps",
                "1",
                "--x-window",
                fig.x_window,
                "--s-window",
                fig.s_window,
                "--out",
                out.to_str().unwrap(),
            ]);
            if code != 0 {
                problems.push(format!("{}: exit {code} {err}", fig.name));
            }
            outputs.push(std::fs::read_to_string(&out).unwrap_or_default());
        }
        if outputs[0] != outputs[1] {
            problems.push(format!("{}: differs between runs", fig.name));
        }
        let path = golden.join(format!("{}.svg", fig.name));
        if bless {
            std::fs::create_dir_all(&golden).unwrap();
            std::fs::write(&path, &outputs[0]).unwrap();
        }
        match std::fs::read_to_string(&path) {
            Ok(g) if g == outputs[0] => {}
            Ok(_) => problems.push(format!("{}: differs from golden", fig.name)),
            Err(_) => problems.push(format!("{}: golden file missing", fig.name)),
        }
        if let Err(e) = check_svg(&outputs[0], fig) {
            problems.push(format!("{}: {e}", fig.name));
        }
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            format!("{} figures byte-stable and matching", FIGURES.len())
        } else {
            problems.join("; ")
        },
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let _ = eps_subdifferential(&bounded_right(), &EpsQuery::new(0.0, 1.0).unwrap());
    let criteria: [Criterion; 10] = [
        ("half-square replication", half_square_replication),
        ("three-piece replication", three_piece_replication),
        ("oracle equivalence on 500 random functions", oracle_equivalence),
        ("biconjugate identity", biconjugate),
        ("containment, nesting and monotonicity", monotonicity_and_nesting),
        ("linear time and memory", linear_complexity),
        ("100-point sweep under 1 s", sweep_speed),
        ("Brondsted-Rockafellar witnesses", br_suite),
        ("validation messages and exit codes", error_paths),
        ("golden figures", golden_figures),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("{} criterion {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
