//! WebAssembly bindings behind the static page in `www/`.
//!
//! Inputs are exact fractions such as `"3/2"`. Results come back as JSON
//! strings carrying the exact values plus float copies for plotting.

use std::sync::Arc;

use serde_json::{json, Value};
use tropical_theta::matrix::{IntMatrix, RatMatrix};
use tropical_theta::pl_geometry::{corner_locus, export_mesh, periodic_segment_pieces, segment_pieces, LinearPiece, MeshFormat};
use tropical_theta::rational::{fmt_rational, parse_rational, to_f64, Rational};
use tropical_theta::trop_av::{TropPoint, TropicalPolarizationData};
use tropical_theta::trop_theta::{level_n_function, riemann_theta, TropicalThetaFunction};
use wasm_bindgen::prelude::*;

/// Longest interval a curve may span; keeps the page responsive.
const MAX_SPAN: i64 = 200;

fn number(name: &str, text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|_| format!("{name}: {text:?} is not a fraction"))
}

fn riemann(rows: Vec<Vec<Rational>>) -> Result<Arc<TropicalThetaFunction>, String> {
    let g = rows.len();
    let p = RatMatrix::from_rows(rows).map_err(|e| e.to_string())?;
    let data = TropicalPolarizationData::new(p, IntMatrix::identity(g)).map_err(|e| e.to_string())?;
    riemann_theta(&Arc::new(data)).map(Arc::new).map_err(|e| e.to_string())
}

fn interval(a: &str, b: &str) -> Result<(TropPoint, TropPoint), String> {
    let (a, b) = (number("from", a)?, number("to", b)?);
    if a >= b {
        return Err("the interval must have from < to".into());
    }
    if &b - &a > Rational::from_integer(MAX_SPAN.into()) {
        return Err(format!("the interval is limited to length {MAX_SPAN}"));
    }
    Ok((TropPoint::new(vec![a]), TropPoint::new(vec![b])))
}

/// Pieces along `[a, b]` re-expressed in the coordinate `x` rather than `t`.
fn curve_json(pieces: &[LinearPiece], a: &TropPoint, b: &TropPoint) -> Value {
    let (x0, d) = (&a.coords[0], &b.coords[0] - &a.coords[0]);
    let items: Vec<Value> = pieces
        .iter()
        .map(|p| {
            let (s, e) = (x0 + &d * &p.start, x0 + &d * &p.end);
            let (fs, fe) = (p.value_at(std::slice::from_ref(&s)), p.value_at(std::slice::from_ref(&e)));
            json!({
                "from": fmt_rational(&s),
                "to": fmt_rational(&e),
                "slope": p.gradient[0],
                "value_from": fmt_rational(&fs),
                "value_to": fmt_rational(&fe),
                "plot": [to_f64(&s), to_f64(&fs), to_f64(&e), to_f64(&fe)],
            })
        })
        .collect();
    json!({ "pieces": items })
}

/// `φ(x) = min_n ½pn² + nx` on `[from, to]`.
pub fn riemann_curve_json(p: &str, from: &str, to: &str) -> Result<String, String> {
    let th = riemann(vec![vec![number("P", p)?]])?;
    let (a, b) = interval(from, to)?;
    let pieces = segment_pieces(&th, &a, &b).map_err(|e| e.to_string())?;
    Ok(curve_json(&pieces, &a, &b).to_string())
}

/// The level-2 function `φ(x + w) + φ(x − w) − 2φ(x)`, periodic and even.
pub fn kummer_curve_json(p: &str, w: &str, from: &str, to: &str) -> Result<String, String> {
    let th = riemann(vec![vec![number("P", p)?]])?;
    let w = TropPoint::new(vec![number("w", w)?]);
    let h = level_n_function(&th, &[w.clone(), w.neg()]).map_err(|e| e.to_string())?;
    let (a, b) = interval(from, to)?;
    let pieces = periodic_segment_pieces(&h, &a, &b).map_err(|e| e.to_string())?;
    Ok(curve_json(&pieces, &a, &b).to_string())
}

/// Corner locus of the g = 2 Riemann theta function of `P = [[a, b], [b, c]]`.
pub fn corner_locus_json(a: &str, b: &str, c: &str) -> Result<String, String> {
    let (a, b, c) = (number("a", a)?, number("b", b)?, number("c", c)?);
    let th = riemann(vec![vec![a, b.clone()], vec![b, c]])?;
    let complex = corner_locus(&th).map_err(|e| e.to_string())?;
    let svg = export_mesh(&complex, MeshFormat::Svg).map_err(|e| e.to_string())?;
    Ok(json!({
        "svg": String::from_utf8(svg).expect("svg is text"),
        "vertices": complex.faces[0].len(),
        "edges": complex.faces[1].len(),
        "betti": complex.betti,
        "euler_characteristic": complex.euler_characteristic,
    })
    .to_string())
}

#[wasm_bindgen(js_name = riemannCurve)]
pub fn riemann_curve(p: &str, from: &str, to: &str) -> Result<String, JsError> {
    riemann_curve_json(p, from, to).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = kummerCurve)]
pub fn kummer_curve(p: &str, w: &str, from: &str, to: &str) -> Result<String, JsError> {
    kummer_curve_json(p, w, from, to).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = cornerLocus)]
pub fn corner_locus_svg(a: &str, b: &str, c: &str) -> Result<String, JsError> {
    corner_locus_json(a, b, c).map_err(|e| JsError::new(&e))
}
