//! Browser bindings. Each export takes automaton text and returns a JSON
//! string, or throws the error message.

use orbitree::{
    classify_group, component_growth, element_order, parse_automaton, Budgets, HeavyBranch, OrbitTree, OrderVerdict,
};
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_DEPTH: usize = 9;

fn demo_budgets() -> Budgets {
    Budgets::default().scaled(0.1)
}

pub fn orbit_tree(text: &str, depth: usize) -> Result<String, String> {
    let a = parse_automaton(text).map_err(|e| e.to_string())?;
    let depth = depth.min(MAX_DEPTH);
    let b = demo_budgets();
    let mut tree = OrbitTree::new(&a, b.member_budget).map_err(|e| e.to_string())?;
    tree.expand_to_depth(depth).map_err(|e| e.to_string())?;
    let heavy = if depth == 0 {
        HeavyBranch::Absent
    } else {
        tree.find_heavy_branch(depth).map_err(|e| e.to_string())?
    };
    Ok(tree.to_json(&heavy).to_string())
}

pub fn order(text: &str, word: &str) -> Result<String, String> {
    let a = parse_automaton(text).map_err(|e| e.to_string())?;
    let u = a.parse_state_word(word).map_err(|e| e.to_string())?;
    if u.is_empty() {
        return Err("the word must be nonempty".into());
    }
    let b = demo_budgets();
    let verdict = element_order(&a, &u, b.k_budget, b.member_budget).map_err(|e| e.to_string())?;
    let growth = if a.is_reversible() {
        Some(component_growth(&a, &u, b.growth_levels, b.member_budget).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let v = match verdict {
        OrderVerdict::Finite { order, .. } => json!({"verdict": "Finite", "order": order}),
        OrderVerdict::AtLeast { k, .. } => json!({"verdict": "AtLeast", "k": k}),
    };
    Ok(json!({"word": a.format_word(&u), "order": v, "growth": growth}).to_string())
}

pub fn classify(text: &str) -> Result<String, String> {
    let a = parse_automaton(text).map_err(|e| e.to_string())?;
    let c = classify_group(&a, &demo_budgets()).map_err(|e| e.to_string())?;
    serde_json::to_string(&c).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = orbitTree)]
pub fn orbit_tree_js(text: &str, depth: usize) -> Result<String, JsError> {
    orbit_tree(text, depth).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = order)]
pub fn order_js(text: &str, word: &str) -> Result<String, JsError> {
    order(text, word).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = classify)]
pub fn classify_js(text: &str) -> Result<String, JsError> {
    classify(text).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use orbitree::examples::{A1_TEXT, A2_TEXT};

    #[test]
    fn tree_json_has_root() {
        let v: serde_json::Value = serde_json::from_str(&orbit_tree(A1_TEXT, 3).unwrap()).unwrap();
        assert_eq!(v["nodes"][0]["level"], 0);
        assert!(v["edges"].as_array().unwrap().len() >= 3);
    }

    #[test]
    fn order_of_y_in_a2() {
        let v: serde_json::Value = serde_json::from_str(&order(A2_TEXT, "y").unwrap()).unwrap();
        assert_eq!(v["order"]["order"], 2);
    }

    #[test]
    fn errors_are_strings() {
        assert!(orbit_tree("garbage", 2).is_err());
        assert!(order(A2_TEXT, "").is_err());
    }
}
