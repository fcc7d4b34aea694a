//! Browser bindings for the counting engine. Every export takes plain
//! strings and numbers and returns a JSON envelope, either
//! `{"ok":true,"value":...}` or `{"ok":false,"error":"..."}`, so the page
//! never has to catch exceptions.

use qct_core::lr::{lr_coefficient, parabolic_kostka, KostkaInstance, TermBudget};
use qct_core::partition::parse_usize_list;
use qct_core::pipeline::{build_trace, run_methods, Budgets, Method};
use qct_core::{Partition, TableInstance};
use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

/// Browser-side budgets are much tighter than the CLI defaults so a slow
/// instance fails fast instead of freezing the tab.
const SEARCH_BUDGET: u64 = 5_000_000;
const TERM_BUDGET: u64 = 500_000;

fn envelope(result: Result<Value, String>) -> String {
    match result {
        Ok(value) => json!({ "ok": true, "value": value }),
        Err(error) => json!({ "ok": false, "error": error }),
    }
    .to_string()
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, String> {
    serde_json::to_value(v).map_err(|e| e.to_string())
}

fn instance(m: usize, n: usize, p: usize, a: &str, b: &str) -> Result<TableInstance, String> {
    let list = |name: &str, s: &str| -> Result<Vec<u64>, String> {
        parse_usize_list(s)
            .map(|v| v.into_iter().map(|x| x as u64).collect())
            .map_err(|e| format!("{name}: {e}"))
    };
    TableInstance::new(m, n, p, list("a", a)?, list("b", b)?).map_err(|e| e.to_string())
}

fn partition(name: &str, s: &str) -> Result<Partition, String> {
    s.parse().map_err(|e| format!("{name}: {e}"))
}

/// Counts the tables with margins `a`, `b` by the comma-separated
/// `methods` (`flow`, `kostka`, `sum`, `oracle`, `rsk`).
#[wasm_bindgen]
pub fn count_tables(m: usize, n: usize, p: usize, a: &str, b: &str, methods: &str) -> String {
    envelope((|| {
        let inst = instance(m, n, p, a, b)?;
        let methods = methods
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                serde_json::from_value::<Method>(Value::String(s.to_string()))
                    .map_err(|_| format!("unknown method `{s}`"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if methods.is_empty() {
            return Err("no method selected".into());
        }
        if methods.contains(&Method::Rsk) && p != 1 {
            return Err("the RSK sum needs p = 1".into());
        }
        let budgets = Budgets {
            search_nodes: SEARCH_BUDGET,
            expansion_terms: TERM_BUDGET,
        };
        let report = run_methods(&inst, &methods, budgets).map_err(|e| e.to_string())?;
        to_value(&report)
    })())
}

/// Every stage of the quiver reduction, ending in the Kostka instance.
#[wasm_bindgen]
pub fn pipeline_trace(m: usize, n: usize, p: usize, a: &str, b: &str) -> String {
    envelope((|| {
        let inst = instance(m, n, p, a, b)?;
        let trace = build_trace(&inst).map_err(|e| e.to_string())?;
        to_value(&trace)
    })())
}

/// `c^λ_{μν}` as a decimal string.
#[wasm_bindgen]
pub fn lr(lambda: &str, mu: &str, nu: &str) -> String {
    envelope((|| {
        let c = lr_coefficient(
            &partition("lambda", lambda)?,
            &partition("mu", mu)?,
            &partition("nu", nu)?,
        );
        Ok(Value::String(c.to_string()))
    })())
}

/// `K_{λ,ℛ}` with rectangles separated by `;`.
#[wasm_bindgen]
pub fn pkostka(lambda: &str, rects: &str, rank: usize) -> String {
    envelope((|| {
        let rects = rects
            .split(';')
            .filter(|r| !r.trim().is_empty())
            .map(|r| partition("rects", r))
            .collect::<Result<Vec<_>, _>>()?;
        let inst = KostkaInstance::new(partition("lambda", lambda)?, rects, rank)
            .map_err(|e| e.to_string())?;
        let k = parabolic_kostka(&inst, &mut TermBudget::new(TERM_BUDGET))
            .map_err(|e| e.to_string())?;
        Ok(Value::String(k.to_string()))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn count_envelope() {
        let v = parse(&count_tables(
            2,
            3,
            1,
            "2,1",
            "1,1,1",
            "flow,kostka,sum,rsk",
        ));
        assert_eq!(v["ok"], true);
        assert_eq!(v["value"]["agree"], true);
        assert_eq!(v["value"]["counts"]["kostka"], "3");
    }

    #[test]
    fn errors_are_reported_not_thrown() {
        assert_eq!(
            parse(&count_tables(2, 2, 1, "2,1", "1,1", "flow"))["ok"],
            false
        );
        assert_eq!(
            parse(&count_tables(1, 1, 1, "1", "1", "guess"))["ok"],
            false
        );
        assert_eq!(parse(&count_tables(1, 1, 2, "1", "1", "rsk"))["ok"], false);
        assert_eq!(parse(&lr("1,2", "1", "1"))["ok"], false);
        let budget = parse(&count_tables(3, 3, 2, "14,13,13", "13,14,13", "flow"));
        assert_eq!(budget["value"]["budget_exceeded"][0], "flow");
    }

    #[test]
    fn trace_and_coefficients() {
        let v = parse(&pipeline_trace(1, 1, 2, "2", "2"));
        assert_eq!(v["value"]["kostka"]["rank"], 2);
        assert_eq!(parse(&lr("2,1", "1", "1,1"))["value"], "1");
        assert_eq!(parse(&pkostka("2,2", "1;1;1;1", 2))["value"], "2");
    }
}
