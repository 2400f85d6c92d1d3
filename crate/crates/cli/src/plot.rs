//! Sign-grid contouring of `L_P` into SVG.

use std::fmt::Write;

use lemkit::curvekit::BivarPoly;

#[derive(Clone, Copy, Debug)]
pub struct Frame {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    pub samples: usize,
}

impl Frame {
    fn x(&self, i: f64) -> f64 {
        self.x0 + (self.x1 - self.x0) * i / self.samples as f64
    }

    fn y(&self, j: f64) -> f64 {
        self.y0 + (self.y1 - self.y0) * j / self.samples as f64
    }
}

/// A contour piece in grid coordinates: `(i, j)` with `x = x0 + i h`.
pub type Segment = [(f64, f64); 2];

fn evaluator(l: &BivarPoly) -> impl Fn(f64, f64) -> f64 {
    let m: Vec<Vec<f64>> = l
        .matrix()
        .iter()
        .map(|row| row.iter().map(|c| c.to_complex(64).real().to_f64()).collect())
        .collect();
    move |x, y| {
        m.iter().rev().fold(0.0, |acc, row| {
            acc * x + row.iter().rev().fold(0.0, |a, c| a * y + c)
        })
    }
}

/// Marching squares on the sign of `L_P`; saddles resolved by the cell centre.
pub fn contour(l: &BivarPoly, frame: &Frame) -> Vec<Segment> {
    let f = evaluator(l);
    let n = frame.samples;
    let grid: Vec<Vec<f64>> = (0..=n)
        .map(|j| (0..=n).map(|i| f(frame.x(i as f64), frame.y(j as f64))).collect())
        .collect();
    let cross = |a: f64, b: f64| {
        let t = a / (a - b);
        if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.5 }
    };
    let mut out = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let v = [grid[j][i], grid[j][i + 1], grid[j + 1][i + 1], grid[j + 1][i]];
            let (fi, fj) = (i as f64, j as f64);
            // edge k joins corner k and corner k+1: bottom, right, top, left
            let point = |k: usize| -> (f64, f64) {
                let (a, b) = (v[k], v[(k + 1) % 4]);
                let t = cross(a, b);
                match k {
                    0 => (fi + t, fj),
                    1 => (fi + 1.0, fj + t),
                    2 => (fi + 1.0 - t, fj + 1.0),
                    _ => (fi, fj + 1.0 - t),
                }
            };
            let edges: Vec<usize> = (0..4).filter(|&k| (v[k] > 0.0) != (v[(k + 1) % 4] > 0.0)).collect();
            match edges.len() {
                2 => out.push([point(edges[0]), point(edges[1])]),
                4 => {
                    let centre = f(frame.x(fi + 0.5), frame.y(fj + 0.5));
                    if (centre > 0.0) == (v[0] > 0.0) {
                        out.push([point(0), point(1)]);
                        out.push([point(2), point(3)]);
                    } else {
                        out.push([point(0), point(3)]);
                        out.push([point(1), point(2)]);
                    }
                }
                _ => {}
            }
        }
    }
    out.retain(|[a, b]| a != b);
    out
}

pub fn svg(segments: &[Segment], frame: &Frame, title: &str) -> String {
    let n = frame.samples;
    let mut d = String::new();
    for [(a, b), (c, e)] in segments {
        let _ = write!(d, "M{:.3} {:.3}L{:.3} {:.3}", a, n as f64 - b, c, n as f64 - e);
    }
    let title = title.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
    format!(
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{n}" height="{n}" viewBox="0 0 {n} {n}" data-box="{} {} {} {}">
<title>{title}</title>
<rect x="0" y="0" width="{n}" height="{n}" fill="white" stroke="none"/>
<path d="{d}" fill="none" stroke="black" stroke-width="1"/>
</svg>
"#,
        frame.x0, frame.y0, frame.x1, frame.y1
    )
}

/// Segment endpoints in the plane.
pub fn to_plane(segments: &[Segment], frame: &Frame) -> Vec<[[f64; 2]; 2]> {
    segments
        .iter()
        .map(|[(a, b), (c, d)]| [[frame.x(*a), frame.y(*b)], [frame.x(*c), frame.y(*d)]])
        .collect()
}
