//! Static SVG figures of the sector decompositions.

use std::f64::consts::{PI, TAU};
use std::fmt::Write;

use crate::blockdata::StokesData;
use crate::fourier::{dual_param, heart_pair};
use crate::geometry::{
    aligned_sectors, all_stokes_directions, standard_sectors, ComplexParam, GaussianParamSet,
    SectorSpec,
};

const PANEL: f64 = 400.0;
const RADIUS: f64 = 160.0;
const FILLS: [&str; 4] = ["#4e79a7", "#f28e2b", "#59a14f", "#b07aa1"];

fn pt(cx: f64, cy: f64, r: f64, th: f64) -> (f64, f64) {
    (cx + r * th.cos(), cy - r * th.sin())
}

fn wedge(out: &mut String, cx: f64, cy: f64, s: &SectorSpec, fill: &str, label: &str) {
    if s.width >= TAU {
        let _ = writeln!(
            out,
            r#"<circle class="sector" cx="{cx:.3}" cy="{cy:.3}" r="{RADIUS:.3}" fill="{fill}" fill-opacity="0.25"/>"#
        );
    } else {
        let (x0, y0) = pt(cx, cy, RADIUS, s.lo);
        let (x1, y1) = pt(cx, cy, RADIUS, s.lo + s.width);
        let large = u8::from(s.width > PI);
        let _ = writeln!(
            out,
            r#"<path class="sector" d="M {cx:.3} {cy:.3} L {x0:.3} {y0:.3} A {RADIUS:.3} {RADIUS:.3} 0 {large} 0 {x1:.3} {y1:.3} Z" fill="{fill}" fill-opacity="0.25" stroke="{fill}"/>"#
        );
    }
    let (lx, ly) = pt(cx, cy, 0.6 * RADIUS, s.lo + s.width / 2.0);
    let _ = writeln!(
        out,
        r#"<text class="sector-label" x="{lx:.3}" y="{ly:.3}" text-anchor="middle" font-size="16">{label}</text>"#
    );
}

fn rays(out: &mut String, cx: f64, cy: f64, set: &GaussianParamSet) {
    for d in all_stokes_directions(set, 1e-9) {
        let th = d.radians();
        let (x, y) = pt(cx, cy, RADIUS + 20.0, th);
        let (lx, ly) = pt(cx, cy, RADIUS + 34.0, th);
        let _ = writeln!(
            out,
            r#"<line class="stokes-ray" x1="{cx:.3}" y1="{cy:.3}" x2="{x:.3}" y2="{y:.3}" stroke="red" stroke-width="2"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text class="ray-label" x="{lx:.3}" y="{ly:.3}" text-anchor="middle" font-size="11" fill="red">{:.4}</text>"#,
            th
        );
    }
}

fn panel(
    out: &mut String,
    x0: f64,
    title: &str,
    sectors: &[SectorSpec; 4],
    labels: [&str; 4],
    set: &GaussianParamSet,
) {
    let (cx, cy) = (x0 + PANEL / 2.0, PANEL / 2.0 + 20.0);
    let _ = writeln!(out, r#"<g class="panel">"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="18" text-anchor="middle" font-size="16">{title}</text>"#,
        cx
    );
    for (k, s) in sectors.iter().enumerate() {
        wedge(out, cx, cy, s, FILLS[k], labels[k]);
    }
    let _ = writeln!(
        out,
        r##"<line x1="{:.3}" y1="{cy:.3}" x2="{:.3}" y2="{cy:.3}" stroke="#999"/>"##,
        cx - RADIUS,
        cx + RADIUS
    );
    let _ = writeln!(
        out,
        r##"<line x1="{cx:.3}" y1="{:.3}" x2="{cx:.3}" y2="{:.3}" stroke="#999"/>"##,
        cy - RADIUS,
        cy + RADIUS
    );
    rays(out, cx, cy, set);
    let _ = writeln!(out, "</g>");
}

fn heart_panel(out: &mut String, x0: f64, c: ComplexParam, d: ComplexParam) {
    let (cx, cy) = (x0 + 60.0, PANEL / 2.0 + 180.0);
    let span = c.norm().max(d.norm()) * 1.3;
    let scale = 300.0 / span;
    let map = |re: f64, im: f64| (cx + re * scale, cy - im * scale);
    let _ = writeln!(out, r#"<g class="panel">"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="18" text-anchor="middle" font-size="16">parameter plane</text>"#,
        x0 + PANEL / 2.0
    );
    let (vx, vy) = map(c.re(), c.im());
    let far = 2.0 * span;
    let (ax, ay) = map(c.re() + far * c.arg().cos(), c.im() + far * c.arg().sin());
    let (bx, by) = map(c.re(), c.im() + far);
    let _ = writeln!(
        out,
        r##"<path class="heart-cone" d="M {vx:.3} {vy:.3} L {ax:.3} {ay:.3} L {bx:.3} {by:.3} Z" fill="#e15759" fill-opacity="0.2" stroke="none"/>"##
    );
    let _ = writeln!(
        out,
        r##"<line class="cone-edge" x1="{vx:.3}" y1="{vy:.3}" x2="{ax:.3}" y2="{ay:.3}" stroke="#e15759" stroke-width="2"/>"##
    );
    let _ = writeln!(
        out,
        r##"<line class="cone-edge" x1="{vx:.3}" y1="{vy:.3}" x2="{bx:.3}" y2="{by:.3}" stroke="#e15759" stroke-width="1" stroke-dasharray="4 3"/>"##
    );
    let _ = writeln!(
        out,
        r##"<line x1="{:.3}" y1="{cy:.3}" x2="{:.3}" y2="{cy:.3}" stroke="#999"/>"##,
        x0 + 10.0,
        x0 + PANEL - 10.0
    );
    let _ = writeln!(
        out,
        r##"<line x1="{cx:.3}" y1="{:.3}" x2="{cx:.3}" y2="{:.3}" stroke="#999"/>"##,
        cy + 20.0,
        40.0
    );
    for (p, name) in [(c, "c"), (d, "d")] {
        let (x, y) = map(p.re(), p.im());
        let _ = writeln!(
            out,
            r#"<circle class="param" cx="{x:.3}" cy="{y:.3}" r="4" fill="black"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" font-size="14">{name}</text>"#,
            x + 6.0,
            y - 6.0
        );
    }
    let _ = writeln!(out, "</g>");
}

/// Which decomposition the figure shows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotMode {
    Aligned,
    Heart,
    Generic,
}

pub fn plot_mode(d: &StokesData, eps: f64) -> PlotMode {
    if d.params().common_arg(eps).is_some() {
        PlotMode::Aligned
    } else if heart_pair(d.params(), eps).is_ok() {
        PlotMode::Heart
    } else {
        PlotMode::Generic
    }
}

/// SVG of the z-plane sectors with the Stokes directions of `C`, and when a
/// transform rule applies, the w-plane sectors with those of `-1/C`.
pub fn render(d: &StokesData, eps: f64) -> String {
    let mode = plot_mode(d, eps);
    let set = d.params();
    let heart = match mode {
        PlotMode::Heart => heart_pair(set, eps)
            .ok()
            .map(|(i, j)| (set.param(i), set.param(j))),
        _ => None,
    };
    let panels = match mode {
        PlotMode::Generic => 1,
        PlotMode::Aligned => 2,
        PlotMode::Heart => 3,
    };
    let width = PANEL * panels as f64;
    let height = PANEL + 40.0;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let zlabels = ["S1", "S2", "S3", "S4"];
    let wlabels = ["Ŝ1", "Ŝ2", "Ŝ3", "Ŝ4"];
    match mode {
        PlotMode::Generic => {
            panel(
                &mut out,
                0.0,
                "z-plane",
                &standard_sectors(d.theta0()),
                zlabels,
                set,
            );
        }
        _ => {
            let a = match heart {
                Some((c, _)) => c.arg(),
                None => set.common_arg(eps).unwrap_or(0.0),
            };
            let (zs, ws) = aligned_sectors(a)
                .unwrap_or_else(|_| (standard_sectors(d.theta0()), standard_sectors(d.theta0())));
            panel(&mut out, 0.0, "z-plane", &zs, zlabels, set);
            let dual = GaussianParamSet::new(
                set.params()
                    .iter()
                    .map(|(c, r)| {
                        (
                            ComplexParam::from_complex(dual_param(c.value())).expect("nonzero"),
                            *r,
                        )
                    })
                    .collect(),
                0.0,
            )
            .expect("dual of a valid set");
            panel(&mut out, PANEL, "w-plane", &ws, wlabels, &dual);
            if let Some((c, dd)) = heart {
                heart_panel(&mut out, 2.0 * PANEL, c, dd);
            }
        }
    }
    let _ = writeln!(out, "</svg>");
    out
}
