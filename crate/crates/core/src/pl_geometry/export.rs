use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Value};

use super::complex::{CellComplex, LocusFace, Point};
use super::polytope::clip;
use super::PlError;
use crate::matrix::RatMatrix;
use crate::rational::{fmt_rational, int, to_f64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFormat {
    Json,
    Svg,
    Obj,
}

impl FromStr for MeshFormat {
    type Err = PlError;

    fn from_str(s: &str) -> Result<Self, PlError> {
        match s {
            "json" => Ok(MeshFormat::Json),
            "svg" => Ok(MeshFormat::Svg),
            "obj" => Ok(MeshFormat::Obj),
            other => Err(PlError::UnsupportedFormat(other.to_string())),
        }
    }
}

fn pt(p: &[Rational]) -> Value {
    Value::Array(p.iter().map(|x| Value::String(fmt_rational(x))).collect())
}

fn face_json(f: &LocusFace) -> Value {
    json!({
        "points": f.vertices.iter().map(|p| pt(p)).collect::<Vec<_>>(),
        "witnesses": f.witnesses,
        "boundary": f.boundary.iter().map(|(i, s)| json!([i, s])).collect::<Vec<_>>(),
    })
}

/// Exact JSON description of the complex.
pub fn mesh_json(complex: &CellComplex) -> Value {
    let level = |k: usize| complex.faces.get(k).map_or(Vec::new(), |fs| fs.iter().map(face_json).collect());
    json!({
        "g": complex.g,
        "period_basis": complex.period_basis.iter().map(|p| pt(p)).collect::<Vec<_>>(),
        "cells": complex.cells.iter().map(|c| json!({
            "witness": c.witness,
            "w": fmt_rational(&c.w),
            "vertices": c.vertices.iter().map(|p| pt(p)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "vertices": level(0),
        "edges": level(1),
        "faces": level(2),
        "betti": complex.betti,
        "euler_characteristic": complex.euler_characteristic,
    })
}

/// Half-spaces cutting out the closed fundamental parallelepiped.
fn domain_planes(complex: &CellComplex) -> Vec<(Vec<Rational>, Rational)> {
    let e = RatMatrix::from_rows(complex.period_basis.clone()).expect("square basis");
    // x = Σ c_i p_i, so c = (Eᵀ)⁻¹ x
    let inv = e.transpose().inverse().expect("periods are independent");
    let mut planes = Vec::new();
    for i in 0..complex.g {
        let row = inv.row(i).to_vec();
        planes.push((row.clone(), int(0)));
        planes.push((row.iter().map(|x| -x).collect(), int(-1)));
    }
    planes
}

/// Translates of each face by small periods, clipped to the domain.
fn clipped(complex: &CellComplex, faces: &[LocusFace]) -> Vec<Vec<Point>> {
    let planes = domain_planes(complex);
    let g = complex.g;
    let mut shifts: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..g {
        shifts = shifts.into_iter().flat_map(|s| (-2..=2).map(move |k| [s.clone(), vec![k]].concat())).collect();
    }
    let mut out = Vec::new();
    for f in faces {
        for s in &shifts {
            let off: Point = (0..g)
                .map(|j| (0..g).map(|i| &complex.period_basis[i][j] * int(s[i])).sum())
                .collect();
            let moved: Vec<Point> = f.vertices.iter().map(|p| p.iter().zip(&off).map(|(a, b)| a + b).collect()).collect();
            let piece = clip(&moved, &planes);
            if piece.len() == f.vertices.len().min(3) || (f.vertices.len() > 3 && piece.len() >= 3) {
                out.push(piece);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn f(x: &Rational) -> f64 {
    to_f64(x)
}

fn svg(complex: &CellComplex) -> Result<String, PlError> {
    if complex.g != 2 {
        return Err(PlError::UnsupportedFormat(format!("svg needs g = 2, found g = {}", complex.g)));
    }
    let p = &complex.period_basis;
    let corners = [
        vec![int(0), int(0)],
        p[0].clone(),
        vec![&p[0][0] + &p[1][0], &p[0][1] + &p[1][1]],
        p[1].clone(),
    ];
    let xs: Vec<f64> = corners.iter().map(|c| f(&c[0])).collect();
    let ys: Vec<f64> = corners.iter().map(|c| f(&c[1])).collect();
    let (x0, x1) = (xs.iter().cloned().fold(f64::MAX, f64::min), xs.iter().cloned().fold(f64::MIN, f64::max));
    let (y0, y1) = (ys.iter().cloned().fold(f64::MAX, f64::min), ys.iter().cloned().fold(f64::MIN, f64::max));
    let size = 480.0;
    let margin = 10.0;
    let scale = (size - 2.0 * margin) / (x1 - x0).max(y1 - y0).max(1e-9);
    let map = |q: &[Rational]| (margin + (f(&q[0]) - x0) * scale, size - margin - (f(&q[1]) - y0) * scale);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#);
    let outline: Vec<String> = corners.iter().map(|c| {
        let (a, b) = map(c);
        format!("{a:.3},{b:.3}")
    }).collect();
    let _ = writeln!(s, r##"<polygon points="{}" fill="#f4f4f0" stroke="#999" stroke-width="1"/>"##, outline.join(" "));
    if let Some(edges) = complex.faces.get(1) {
        for seg in clipped(complex, edges) {
            let (a, b) = map(&seg[0]);
            let (c, d) = map(&seg[seg.len() - 1]);
            let _ = writeln!(s, r##"<line x1="{a:.3}" y1="{b:.3}" x2="{c:.3}" y2="{d:.3}" stroke="#b03020" stroke-width="2"/>"##);
        }
    }
    for dot in clipped(complex, &complex.faces[0]) {
        let (a, b) = map(&dot[0]);
        let _ = writeln!(s, r##"<circle cx="{a:.3}" cy="{b:.3}" r="3" fill="#202020"/>"##);
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn obj(complex: &CellComplex) -> Result<String, PlError> {
    if complex.g != 3 {
        return Err(PlError::UnsupportedFormat(format!("obj needs g = 3, found g = {}", complex.g)));
    }
    let mut s = String::from("# corner locus clipped to the fundamental domain\n");
    let mut next = 1;
    for poly in clipped(complex, &complex.faces[2]) {
        if poly.len() < 3 {
            continue;
        }
        let mut ids = Vec::new();
        for q in &poly {
            let _ = writeln!(s, "v {:.6} {:.6} {:.6}", f(&q[0]), f(&q[1]), f(&q[2]));
            ids.push(next.to_string());
            next += 1;
        }
        let _ = writeln!(s, "f {}", ids.join(" "));
    }
    Ok(s)
}

/// Deterministic serialization of the complex.
pub fn export_mesh(complex: &CellComplex, format: MeshFormat) -> Result<Vec<u8>, PlError> {
    match format {
        MeshFormat::Json => {
            let mut bytes = serde_json::to_vec_pretty(&mesh_json(complex)).expect("json values serialize");
            bytes.push(b'\n');
            Ok(bytes)
        }
        MeshFormat::Svg => svg(complex).map(String::into_bytes),
        MeshFormat::Obj => obj(complex).map(String::into_bytes),
    }
}
