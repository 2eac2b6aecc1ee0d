//! wasm-bindgen exports for the static demo page in `www/`.
//!
//! Each export wraps a plain function returning `Result<String, String>` so
//! the logic is testable natively.

use serde::Serialize;
use triangle_ifs::fmt;
use triangle_ifs::plane_model::DiskModel;
use triangle_ifs::render::{self, RenderMode, RenderSpec};
use triangle_ifs::subdivision::{self, DEFAULT_TOL};
use triangle_ifs::symbolic;
use triangle_ifs::{ShapeRecord, SymbolSequence};
use wasm_bindgen::prelude::*;

fn triple(text: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = text
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("not a number: {p:?}"))
        })
        .collect::<Result<_, _>>()?;
    v.try_into()
        .map_err(|_| "expected three comma-separated numbers".to_string())
}

fn shape(edges: &str) -> Result<ShapeRecord, String> {
    let [a, b, c] = triple(edges)?;
    ShapeRecord::from_edges(a, b, c).map_err(|e| e.to_string())
}

/// SVG of the triangle with edges `edges`; a nonempty `word` selects word
/// mode, otherwise all cells of depth `depth` are drawn.
pub fn render_inner(edges: &str, model: &str, depth: u32, word: &str) -> Result<String, String> {
    let model = match model {
        "klein" => DiskModel::Klein,
        "poincare" => DiskModel::Poincare,
        other => return Err(format!("unknown model {other:?}")),
    };
    let mode = if word.trim().is_empty() {
        RenderMode::Depth(depth as usize)
    } else {
        RenderMode::Word(subdivision::parse_word(word.trim()).map_err(|e| e.to_string())?)
    };
    render::render_svg(&shape(edges)?, &RenderSpec::new(model, mode)).map_err(|e| e.to_string())
}

pub fn limit_inner(edges: &str, seq: &str) -> Result<String, String> {
    let s = SymbolSequence::parse(seq).map_err(|e| e.to_string())?;
    let r = subdivision::limit_shape(&s, &shape(edges)?, DEFAULT_TOL).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&r).expect("serializes"))
}

#[derive(Serialize)]
struct Address {
    seq: String,
    exact: [String; 3],
    #[serde(serialize_with = "fmt::ser_f64x3")]
    approx: [f64; 3],
}

pub fn address_inner(seq: &str) -> Result<String, String> {
    let s = SymbolSequence::parse(seq).map_err(|e| e.to_string())?;
    let exact = symbolic::address_exact(&s);
    Ok(serde_json::to_string(&Address {
        seq: s.to_string(),
        approx: exact.to_f64(),
        exact: exact.to_fraction_strings(),
    })
    .expect("serializes"))
}

#[wasm_bindgen]
pub fn render(edges: &str, model: &str, depth: u32, word: &str) -> Result<String, JsValue> {
    render_inner(edges, model, depth, word).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn limit(edges: &str, seq: &str) -> Result<String, JsValue> {
    limit_inner(edges, seq).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn address(seq: &str) -> Result<String, JsValue> {
    address_inner(seq).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_both_modes() {
        let svg = render_inner("1,1.2,1.4", "poincare", 2, "").unwrap();
        assert_eq!(render::parse_polygons(&svg).len(), 17);
        let svg = render_inner("1,1.2,1.4", "klein", 0, "AMB").unwrap();
        assert!(svg.contains("data-address=\"AMB\""));
        assert!(render_inner("1,1.2,1.4", "halfplane", 1, "").is_err());
        assert!(render_inner("1,1.2", "klein", 1, "").is_err());
        assert!(render_inner("1,1,1", "klein", 9, "").is_err());
    }

    #[test]
    fn limit_json() {
        let v: serde_json::Value =
            serde_json::from_str(&limit_inner("4,4,7", "|M").unwrap()).unwrap();
        assert!(v["residual"].as_f64().unwrap() < 1e-12);
        assert!(limit_inner("1,2,5", "|M").is_err());
    }

    #[test]
    fn address_json() {
        let v: serde_json::Value = serde_json::from_str(&address_inner("|BC").unwrap()).unwrap();
        assert_eq!(v["exact"], serde_json::json!(["0", "2/3", "1/3"]));
        assert!(address_inner("A|").is_err());
    }
}
