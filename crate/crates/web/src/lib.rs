//! Browser bindings. Each export takes and returns JSON text; errors come
//! back as thrown strings.

use foldhom::planner::{necessary_conditions, plan_search};
use foldhom::{Catalog, FGAbelianGroup, PlanDocument, PlanFailure, TargetFamily};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn text(v: Value) -> String {
    v.to_string()
}

/// Canonical form of a group written as text (`Z_6 + Z_4`) or as JSON.
pub fn canonicalize_text(input: &str) -> Result<String, String> {
    let trimmed = input.trim();
    let g: FGAbelianGroup = if trimmed.starts_with('{') {
        serde_json::from_str(trimmed).map_err(|e| e.to_string())?
    } else {
        trimmed.parse().map_err(|e: foldhom::Error| e.to_string())?
    };
    Ok(text(json!({"text": g.to_string(), "group": g})))
}

/// Replays a plan document against the bundled catalog.
pub fn bubble_text(plan: &str) -> Result<String, String> {
    let doc: PlanDocument = serde_json::from_str(plan).map_err(|e| e.to_string())?;
    let plan = doc
        .to_plan(&Catalog::builtin())
        .map_err(|e| e.to_string())?;
    let delta = foldhom::bubbling::delta_family(plan.initial(), plan.final_state());
    let show = |gs: &[FGAbelianGroup]| gs.iter().map(ToString::to_string).collect::<Vec<_>>();
    Ok(text(json!({
        "final_state": show(plan.final_state().homology()),
        "delta": delta.as_ref().map(|d| show(d.groups())),
        "ledger": plan.ledger().0.iter().map(|d| show(d)).collect::<Vec<_>>(),
    })))
}

/// Necessary-condition verdicts for a target, and a plan when the catalog
/// search finds one.
pub fn analyze_text(target: &str, max_carriers: usize) -> Result<String, String> {
    let t: TargetFamily = serde_json::from_str(target).map_err(|e| e.to_string())?;
    let catalog = Catalog::builtin();
    let verdicts = necessary_conditions(&t);
    let plan = match plan_search(&t, &catalog, max_carriers) {
        Ok(p) => json!(PlanDocument::from_plan(&p, &catalog)),
        Err(PlanFailure::Invalid(e)) => return Err(e.to_string()),
        Err(f @ PlanFailure::Exhausted) => json!({"status": "Exhausted", "witness": f.to_string()}),
        Err(PlanFailure::HypothesisNotMet(w)) => {
            json!({"status": "HypothesisNotMet", "witness": w})
        }
    };
    Ok(text(json!({"verdicts": verdicts, "plan": plan})))
}

#[wasm_bindgen]
pub fn canonicalize(input: &str) -> Result<String, JsValue> {
    canonicalize_text(input).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bubble(plan: &str) -> Result<String, JsValue> {
    bubble_text(plan).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn analyze(target: &str, max_carriers: usize) -> Result<String, JsValue> {
    analyze_text(target, max_carriers).map_err(|e| JsValue::from_str(&e))
}
