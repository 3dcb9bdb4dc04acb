//! Browser bindings for the sheaflab demo page.
//!
//! Each exported function takes presheaf JSON (as produced by
//! `sheaflab fixture`) and returns pretty JSON, or throws the error text.
//! The logic lives in [`api`] so it can be tested natively.

use wasm_bindgen::prelude::*;

pub mod api {
    use std::sync::Arc;

    use serde::Serialize;
    use sheaflab::cli::parse_presheaf;
    use sheaflab::reflect::compare_reflections;
    use sheaflab::stalks::stalk_structured;
    use sheaflab::{fixtures, json, plus, Caps, ReflectionTarget};

    fn pretty<T: Serialize>(value: &T) -> String {
        json::to_string(value, true)
    }

    pub fn fixture_names() -> String {
        serde_json::to_string(&fixtures::NAMES).expect("names serialize")
    }

    pub fn fixture(name: &str) -> Result<String, String> {
        fixtures::json_fixture(name).ok_or_else(|| format!("unknown fixture `{name}`"))
    }

    /// The points of a presheaf's space, for populating a picker.
    pub fn points(presheaf: &str) -> Result<String, String> {
        let f = parse_presheaf(presheaf).map_err(|e| e.to_string())?;
        Ok(serde_json::to_string(f.space().points()).expect("points serialize"))
    }

    /// Germs at `point`, with the induced operation or order when there is one.
    pub fn stalk(presheaf: &str, point: &str) -> Result<String, String> {
        let f = parse_presheaf(presheaf).map_err(|e| e.to_string())?;
        let st = stalk_structured(&f, point).map_err(|e| e.to_string())?;
        Ok(pretty(&st.to_json(&f)))
    }

    /// The plus construction and its unit.
    pub fn sheafify(presheaf: &str) -> Result<String, String> {
        let f = Arc::new(parse_presheaf(presheaf).map_err(|e| e.to_string())?);
        let pf = plus(&f, &Caps::default()).map_err(|e| e.to_string())?;
        Ok(pretty(&pf.to_json()))
    }

    /// Both orders of reflecting and sheafifying, and whether they agree.
    pub fn compare(presheaf: &str, target: &str) -> Result<String, String> {
        let f = Arc::new(parse_presheaf(presheaf).map_err(|e| e.to_string())?);
        let target: ReflectionTarget = target.parse().map_err(|e: sheaflab::Error| e.to_string())?;
        let report = compare_reflections(&f, target, &Caps::default()).map_err(|e| e.to_string())?;
        Ok(pretty(&report.to_json()))
    }
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn fixture_names() -> String {
    api::fixture_names()
}

#[wasm_bindgen]
pub fn fixture(name: &str) -> Result<String, JsValue> {
    js(api::fixture(name))
}

#[wasm_bindgen]
pub fn points(presheaf: &str) -> Result<String, JsValue> {
    js(api::points(presheaf))
}

#[wasm_bindgen]
pub fn stalk(presheaf: &str, point: &str) -> Result<String, JsValue> {
    js(api::stalk(presheaf, point))
}

#[wasm_bindgen]
pub fn sheafify(presheaf: &str) -> Result<String, JsValue> {
    js(api::sheafify(presheaf))
}

#[wasm_bindgen]
pub fn compare(presheaf: &str, target: &str) -> Result<String, JsValue> {
    js(api::compare(presheaf, target))
}
