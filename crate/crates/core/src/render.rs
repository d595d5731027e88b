//! SVG rendering of rank-3 scenes in the Poincaré disk.
//!
//! The hyperboloid is put in standard position with a rational orthogonal
//! frame `f0, f1, f2` (`f0` the orientation class). A class with frame
//! coordinates `ξ` maps to `(ξ1, ξ2) / (ξ0 + sqrt(q))`, which sends isotropic
//! classes to the boundary circle. A wall `v` cuts a chord `η1 u1 + η2 u2 = η0`
//! in the Klein model; its Poincaré geodesic is the arc with the same
//! endpoints on the circle centred at `(η1, η2) / η0`.

use std::fmt::Write as _;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cone::WalkTrace;
use crate::enumeration::Wall;
use crate::error::{Error, Result};
use crate::lattice::{LatVec, Lattice};

const MARGIN: f64 = 24.0;

#[derive(Clone, Debug)]
pub struct Scene {
    lattice: Lattice,
    walls: Vec<Wall>,
    points: Vec<(String, LatVec)>,
    cusp_points: Vec<(String, LatVec)>,
    trace: Option<WalkTrace>,
    /// Disk radius in pixels.
    view: f64,
}

impl Scene {
    pub fn new(lattice: Lattice, view: f64) -> Result<Self> {
        if lattice.rank() != 3 {
            return Err(Error::RankNotThree(lattice.rank()));
        }
        if view.is_nan() || view <= 0.0 || !view.is_finite() {
            return Err(Error::InvalidArgument(format!("view radius {view} must be positive")));
        }
        Ok(Scene {
            lattice,
            walls: Vec::new(),
            points: Vec::new(),
            cusp_points: Vec::new(),
            trace: None,
            view,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn add_wall(&mut self, v: LatVec) -> Result<()> {
        self.walls.push(Wall::new(&self.lattice, v)?);
        Ok(())
    }

    pub fn add_point(&mut self, label: impl Into<String>, v: LatVec) -> Result<()> {
        self.lattice.check_dim(&v)?;
        if !self.lattice.is_positive(&v) {
            return Err(Error::NotPositive(v));
        }
        self.points.push((label.into(), v));
        Ok(())
    }

    pub fn add_cusp(&mut self, label: impl Into<String>, v: LatVec) -> Result<()> {
        self.lattice.check_dim(&v)?;
        if v.is_zero() || !self.lattice.quad_unchecked(&v).is_zero() {
            return Err(Error::NotIsotropic(v));
        }
        // the opposite ray names the same boundary point
        let v = if self.lattice.in_closed_cone(&v) { v } else { -v };
        self.cusp_points.push((label.into(), v));
        Ok(())
    }

    pub fn set_trace(&mut self, trace: WalkTrace) -> Result<()> {
        self.lattice.check_dim(&trace.start)?;
        self.trace = Some(trace);
        Ok(())
    }
}

struct Frame {
    /// Rational frame vectors and `sqrt|q(f_k)|`.
    vectors: Vec<Vec<BigRational>>,
    norms: Vec<f64>,
}

impl Frame {
    fn new(lattice: &Lattice) -> Self {
        let n = lattice.rank();
        let to_q = |v: &LatVec| -> Vec<BigRational> {
            v.coords().iter().map(|c| BigRational::from_integer(c.clone())).collect()
        };
        let mut vectors: Vec<Vec<BigRational>> = vec![to_q(lattice.orientation())];
        let mut squares = vec![rational_pair(lattice, &vectors[0], &vectors[0])];
        for i in 0..n {
            if vectors.len() == n {
                break;
            }
            let mut f = to_q(&LatVec::basis(n, i));
            for (g, qg) in vectors.iter().zip(&squares) {
                let c = rational_pair(lattice, &f, g) / qg;
                for (a, b) in f.iter_mut().zip(g) {
                    *a -= &c * b;
                }
            }
            let qf = rational_pair(lattice, &f, &f);
            if !qf.is_zero() {
                vectors.push(f);
                squares.push(qf);
            }
        }
        let norms = squares
            .iter()
            .map(|q| q.abs().to_f64().unwrap_or(f64::NAN).sqrt())
            .collect();
        Frame { vectors, norms }
    }

    fn coords(&self, lattice: &Lattice, v: &LatVec) -> [f64; 3] {
        let vq: Vec<BigRational> = v.coords().iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let mut out = [0.0; 3];
        for k in 0..3 {
            let p = rational_pair(lattice, &vq, &self.vectors[k]);
            out[k] = p.to_f64().unwrap_or(f64::NAN) / self.norms[k];
        }
        out
    }

    fn pairs_orientation_trivially(&self, lattice: &Lattice, v: &LatVec) -> bool {
        let vq: Vec<BigRational> = v.coords().iter().map(|c| BigRational::from_integer(c.clone())).collect();
        rational_pair(lattice, &vq, &self.vectors[0]).is_zero()
    }
}

fn rational_pair(lattice: &Lattice, x: &[BigRational], y: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            let g = &lattice.gram()[i][j];
            if !g.is_zero() && !yj.is_zero() {
                acc += xi * yj * BigRational::from_integer(g.clone());
            }
        }
    }
    acc
}

/// Poincaré disk position of a class of the closed positive cone.
fn disk_point(lattice: &Lattice, frame: &Frame, v: &LatVec) -> (f64, f64) {
    let xi = frame.coords(lattice, v);
    let q = lattice.quad_unchecked(v).to_f64().unwrap_or(f64::NAN).max(0.0);
    let denom = xi[0] + q.sqrt();
    (xi[1] / denom, xi[2] / denom)
}

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders the scene to an SVG document. Output depends only on the scene.
pub fn render_svg(scene: &Scene) -> String {
    let lattice = &scene.lattice;
    let frame = Frame::new(lattice);
    let r = scene.view;
    let c = MARGIN + r;
    let size = 2.0 * c;
    let screen = |(u1, u2): (f64, f64)| (c + r * u1, c - r * u2);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        num(size)
    );
    let _ = writeln!(
        svg,
        r#"<circle class="boundary" cx="{0}" cy="{0}" r="{1}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        num(c),
        num(r)
    );

    for wall in &scene.walls {
        let v = wall.vector();
        let eta = frame.coords(lattice, v);
        let (n1, n2, n0) = (eta[1], eta[2], eta[0]);
        let nn = (n1 * n1 + n2 * n2).sqrt();
        let d = if frame.pairs_orientation_trivially(lattice, v) {
            let (p1, p2) = ((-n2 / nn, n1 / nn), (n2 / nn, -n1 / nn));
            let (a, b) = (screen(p1), screen(p2));
            format!("M {} {} L {} {}", num(a.0), num(a.1), num(b.0), num(b.1))
        } else {
            let foot = (n0 * n1 / (nn * nn), n0 * n2 / (nn * nn));
            let half = (1.0 - (n0 * n0) / (nn * nn)).max(0.0).sqrt();
            let tau = (-n2 / nn, n1 / nn);
            let p1 = (foot.0 + half * tau.0, foot.1 + half * tau.1);
            let p2 = (foot.0 - half * tau.0, foot.1 - half * tau.1);
            let centre = (n1 / n0, n2 / n0);
            let rho = (centre.0 * centre.0 + centre.1 * centre.1 - 1.0).max(0.0).sqrt();
            let (a, b, cs) = (screen(p1), screen(p2), screen(centre));
            let cross = (a.0 - cs.0) * (b.1 - cs.1) - (a.1 - cs.1) * (b.0 - cs.0);
            let sweep = if cross > 0.0 { 1 } else { 0 };
            format!(
                "M {} {} A {} {} 0 0 {} {} {}",
                num(a.0),
                num(a.1),
                num(r * rho),
                num(r * rho),
                sweep,
                num(b.0),
                num(b.1)
            )
        };
        let _ = writeln!(
            svg,
            r##"<path class="wall" data-wall="{}" d="{d}" fill="none" stroke="#1f5fa8" stroke-width="1"/>"##,
            escape(&v.to_string())
        );
    }

    if let Some(trace) = &scene.trace {
        let mut pts = vec![screen(disk_point(lattice, &frame, &trace.start))];
        pts.extend(trace.steps.iter().map(|s| screen(disk_point(lattice, &frame, &s.image))));
        let list: Vec<String> = pts.iter().map(|p| format!("{},{}", num(p.0), num(p.1))).collect();
        let _ = writeln!(
            svg,
            r##"<polyline class="trace" points="{}" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##,
            list.join(" ")
        );
    }

    for (label, v) in &scene.cusp_points {
        let (u1, u2) = disk_point(lattice, &frame, v);
        let norm = (u1 * u1 + u2 * u2).sqrt();
        let (d1, d2) = (u1 / norm, u2 / norm);
        let a = screen((0.95 * d1, 0.95 * d2));
        let b = screen((1.05 * d1, 1.05 * d2));
        let t = screen((1.09 * d1, 1.09 * d2));
        let _ = writeln!(
            svg,
            r##"<line class="cusp" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#2e7d32" stroke-width="2"/>"##,
            num(a.0),
            num(a.1),
            num(b.0),
            num(b.1)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
            num(t.0),
            num(t.1),
            escape(label)
        );
    }

    for (label, v) in &scene.points {
        let p = screen(disk_point(lattice, &frame, v));
        let _ = writeln!(
            svg,
            r#"<circle class="point" cx="{}" cy="{}" r="3" fill="black"/>"#,
            num(p.0),
            num(p.1)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
            num(p.0 + 5.0),
            num(p.1 - 5.0),
            escape(label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Renders the scene and writes it to `out`.
pub fn render_disk(scene: &Scene, out: &Path) -> Result<String> {
    let svg = render_svg(scene);
    std::fs::write(out, &svg).map_err(|e| Error::UnwritablePath {
        path: out.display().to_string(),
        reason: e.to_string(),
    })?;
    Ok(svg)
}
