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

//! Hand-written SVG for a [`ViewBundle`]. Pixel coordinates carry three decimals; the
//! underlying data values ride along in `data-*` attributes at full precision.

use super::{Line, ViewBundle};
use crate::ext::{format_short, ExtReal};
use std::fmt::Write as _;

const PANEL: f64 = 400.0;
const GAP: f64 = 20.0;
const TOP: f64 = 30.0;
const WIDTH: f64 = 3.0 * PANEL + 4.0 * GAP;
const HEIGHT: f64 = PANEL + TOP + GAP;

const STYLE: &str = "<style>\
.frame{fill:none;stroke:#888;stroke-width:1}\
.axis{stroke:#bbb;stroke-width:1}\
.f,.f-conj,.graph-lo,.graph-hi{fill:none;stroke:#d62728;stroke-width:2}\
.support{stroke:#000;stroke-width:1.5;stroke-dasharray:6 4}\
.minorant{stroke:#000;stroke-width:1.5}\
.coincidence{fill:none;stroke:#2ca02c;stroke-width:4}\
.highlight{stroke:#1f77b4;stroke-width:3}\
.anchor{fill:#000}\
text{font-family:sans-serif;font-size:13px}\
</style>";

struct Panel {
    left: f64,
    u: [f64; 2],
    v: [f64; 2],
}

impl Panel {
    fn px(&self, u: f64) -> f64 {
        self.left + (u - self.u[0]) / (self.u[1] - self.u[0]) * PANEL
    }

    fn py(&self, v: f64) -> f64 {
        TOP + PANEL - (v - self.v[0]) / (self.v[1] - self.v[0]) * PANEL
    }

    fn point(&self, p: [f64; 2]) -> String {
        format!("{},{}", num(self.px(p[0])), num(self.py(p[1])))
    }

    fn open(&self, out: &mut String, id: &str, title: &str) {
        let _ = writeln!(
            out,
            r#"<clipPath id="clip-{id}"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath>"#,
            num(self.left),
            num(TOP),
            num(PANEL),
            num(PANEL)
        );
        let _ = writeln!(
            out,
            r#"<g id="{id}" data-u-range="{} {}" data-v-range="{} {}">"#,
            self.u[0], self.u[1], self.v[0], self.v[1]
        );
        let _ = writeln!(
            out,
            r#"<rect class="frame" x="{}" y="{}" width="{}" height="{}"/>"#,
            num(self.left),
            num(TOP),
            num(PANEL),
            num(PANEL)
        );
        let _ = writeln!(out, r#"<text x="{}" y="{}">{title}</text>"#, num(self.left), num(TOP - 10.0));
        let _ = writeln!(out, r#"<g clip-path="url(#clip-{id})">"#);
        if self.u[0] < 0.0 && 0.0 < self.u[1] {
            let x = num(self.px(0.0));
            let _ = writeln!(out, r#"<line class="axis" x1="{x}" y1="{}" x2="{x}" y2="{}"/>"#, num(TOP), num(TOP + PANEL));
        }
        if self.v[0] < 0.0 && 0.0 < self.v[1] {
            let y = num(self.py(0.0));
            let _ = writeln!(
                out,
                r#"<line class="axis" x1="{}" y1="{y}" x2="{}" y2="{y}"/>"#,
                num(self.left),
                num(self.left + PANEL)
            );
        }
    }

    fn close(out: &mut String) {
        out.push_str("</g>\n</g>\n");
    }

    fn polylines(&self, out: &mut String, class: &str, curves: &[Vec<[f64; 2]>], data: &str) {
        for c in curves {
            let pts: Vec<String> = c.iter().map(|&p| self.point(p)).collect();
            let _ = writeln!(out, r#"<polyline class="{class}"{data} points="{}"/>"#, pts.join(" "));
        }
    }

    fn line(&self, out: &mut String, class: &str, line: &Line, data: &str) {
        if let Some([p, q]) = line.segment {
            let _ = writeln!(
                out,
                r#"<line class="{class}" data-slope="{}" data-through="{} {}"{data} x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                line.slope,
                line.through[0],
                line.through[1],
                num(self.px(p[0])),
                num(self.py(p[1])),
                num(self.px(q[0])),
                num(self.py(q[1]))
            );
        }
    }

    fn clamp_v(&self, v: ExtReal) -> f64 {
        v.get().clamp(self.v[0], self.v[1])
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

/// Three side-by-side panels: `primal`, `dual` and `subdiff` groups.
pub fn render_svg(b: &ViewBundle) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(WIDTH),
        h = num(HEIGHT)
    );
    let _ = writeln!(
        out,
        r#"<desc data-x-range="{} {}" data-y-range="{} {}" data-s-range="{} {}" data-t-range="{} {}" data-param-range="{} {}">epsilon-subdifferential views</desc>"#,
        b.primal.x_range[0],
        b.primal.x_range[1],
        b.primal.y_range[0],
        b.primal.y_range[1],
        b.dual.s_range[0],
        b.dual.s_range[1],
        b.dual.t_range[0],
        b.dual.t_range[1],
        b.subdiff.param_range[0],
        b.subdiff.param_range[1]
    );
    out.push_str(STYLE);
    out.push('\n');
    let m = &b.meta;
    let _ = writeln!(
        out,
        r#"<metadata data-x-bar="{}" data-eps="{}" data-f-x-bar="{}" data-lo="{}" data-hi="{}"/>"#,
        m.x_bar,
        m.eps,
        m.f_x_bar,
        m.interval.lo(),
        m.interval.hi()
    );

    let primal = Panel { left: GAP, u: b.primal.x_range, v: b.primal.y_range };
    primal.open(&mut out, "primal", "primal: f and support lines");
    primal.polylines(&mut out, "f", &b.primal.f, "");
    for l in &b.primal.support {
        primal.line(&mut out, "support", l, "");
    }
    let a = b.primal.support[0].through;
    let _ = writeln!(
        out,
        r#"<circle class="anchor" data-x="{}" data-y="{}" cx="{}" cy="{}" r="3"/>"#,
        a[0],
        a[1],
        num(primal.px(a[0])),
        num(primal.py(a[1]))
    );
    Panel::close(&mut out);

    let dual = Panel { left: 2.0 * GAP + PANEL, u: b.dual.s_range, v: b.dual.t_range };
    dual.open(&mut out, "dual", "dual: f* and the minorant l");
    dual.polylines(&mut out, "f-conj", &b.dual.f_conj, "");
    dual.line(&mut out, "minorant", &b.dual.minorant, "");
    let coin = match b.dual.coincidence {
        Some(c) => format!(r#" data-lo="{}" data-hi="{}""#, c.lo(), c.hi()),
        None => String::new(),
    };
    dual.polylines(&mut out, "coincidence", &b.dual.coincidence_curve, &coin);
    Panel::close(&mut out);

    let sub = Panel { left: 3.0 * GAP + 2.0 * PANEL, u: b.subdiff.param_range, v: b.subdiff.s_range };
    let title = match b.subdiff.graph.axis {
        crate::sweep::SweepAxis::X => "subdifferential graph in x",
        crate::sweep::SweepAxis::Eps => "subdifferential graph in ε",
    };
    sub.open(&mut out, "subdiff", title);
    let lo: Vec<[f64; 2]> = b.subdiff.graph.samples.iter().map(|s| [s.param, sub.clamp_v(s.lo)]).collect();
    let hi: Vec<[f64; 2]> = b.subdiff.graph.samples.iter().map(|s| [s.param, sub.clamp_v(s.hi)]).collect();
    sub.polylines(&mut out, "graph-lo", &[lo], "");
    sub.polylines(&mut out, "graph-hi", &[hi], "");
    let (p, i) = b.subdiff.highlight;
    let x = num(sub.px(p));
    let _ = writeln!(
        out,
        r#"<line class="highlight" data-param="{p}" data-lo="{}" data-hi="{}" x1="{x}" y1="{}" x2="{x}" y2="{}"/>"#,
        i.lo(),
        i.hi(),
        num(sub.py(sub.clamp_v(i.lo()))),
        num(sub.py(sub.clamp_v(i.hi())))
    );
    Panel::close(&mut out);

    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}">x̄ = {}, ε = {}, ∂εf(x̄) = {}</text>"#,
        num(GAP),
        num(HEIGHT - 4.0),
        format_short(ExtReal::finite(m.x_bar)),
        format_short(ExtReal::finite(m.eps)),
        m.interval
    );
    out.push_str("</svg>\n");
    out
}
