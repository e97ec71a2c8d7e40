//! Browser bindings: paste an instance as JSON, get back an SVG of the
//! optimal plan, an online-vs-offline report, or a ready-made relay chain.
//!
//! All exported functions speak strings so the page needs no glue beyond
//! `JSON.parse`. The `*_impl` functions hold the logic and stay callable
//! from native tests; the `wasm_bindgen` wrappers only translate errors.

use pony_core::offline_multi::solve_multi;
use pony_core::offline_two::solve_two;
use pony_core::online::{build_relay_construction, run_online};
use pony_core::{io, svg, DeliveryPlan, Instance};
use wasm_bindgen::prelude::*;

const GRID_EPS_PRIME: f64 = 0.05;

fn parse(instance_json: &str) -> Result<Instance, String> {
    io::parse_instance(instance_json).map_err(|e| e.to_string())
}

fn best_plan(instance: &Instance) -> Result<DeliveryPlan, String> {
    let plan = if instance.robots.len() == 2 {
        solve_two(instance).map(|solution| solution.plan)
    } else {
        solve_multi(instance, GRID_EPS_PRIME)
    };
    plan.map_err(|e| e.to_string())
}

fn plot_impl(instance_json: &str) -> Result<String, String> {
    let instance = parse(instance_json)?;
    let plan = best_plan(&instance)?;
    Ok(svg::render(&instance, &plan))
}

fn online_report_impl(instance_json: &str) -> Result<String, String> {
    let instance = parse(instance_json)?;
    let online = run_online(&instance).map_err(|e| e.to_string())?;
    let mut report = serde_json::json!({
        "online_time": online.delivery_time,
        "winning_robot": online.winning_robot,
        "solo_times": online.per_robot_solo_time,
    });

    match instance.robots.len() {
        // a lone robot has no strategy other than the online one
        1 => {
            report["offline_time"] = online.delivery_time.into();
            report["ratio"] = 1.0.into();
        }
        2 => {
            let offline = solve_two(&instance).map_err(|e| e.to_string())?.total_time();
            report["offline_time"] = offline.into();
            report["ratio"] = (online.delivery_time / offline).into();
        }
        // beyond two robots only the grid bracket is available
        _ => {
            let grid = solve_multi(&instance, GRID_EPS_PRIME)
                .map_err(|e| e.to_string())?
                .total_time;
            let lo = (grid / std::f64::consts::SQRT_2 - GRID_EPS_PRIME).max(0.0);
            report["offline_time_between"] = serde_json::json!([lo, grid]);
            report["ratio_at_least"] = (online.delivery_time / grid).into();
            if lo > 0.0 {
                report["ratio_at_most"] = (online.delivery_time / lo).into();
            }
        }
    }
    serde_json::to_string_pretty(&report).map_err(|e| e.to_string())
}

fn relay_instance_impl(n: usize) -> Result<String, String> {
    let chain = build_relay_construction(n).map_err(|_| "n must be at least 3".to_string())?;
    Ok(io::instance_to_json(&chain.as_instance()))
}

/// Solve the pasted instance (exactly for two robots, on the grid otherwise)
/// and render the plan as standalone SVG markup.
#[wasm_bindgen]
pub fn solve_and_plot(instance_json: &str) -> Result<String, JsValue> {
    plot_impl(instance_json).map_err(|e| JsValue::from_str(&e))
}

/// Compare the head-for-the-source online strategy against the offline
/// optimum. Exact for up to two robots, a certified bracket beyond that.
#[wasm_bindgen]
pub fn online_report(instance_json: &str) -> Result<String, JsValue> {
    online_report_impl(instance_json).map_err(|e| JsValue::from_str(&e))
}

/// Instance JSON for the n-robot chain whose solo deliveries all tie while a
/// bucket-brigade relay is meant to beat them.
#[wasm_bindgen]
pub fn relay_instance(n: u32) -> Result<String, JsValue> {
    relay_instance_impl(n as usize).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
        "source": [0.0, 0.0],
        "destination": [1.0, 0.0],
        "robots": [
            { "x": 0.0, "y": 0.0, "speed": 0.41421356237309515 },
            { "x": 1.4142135623730951, "y": 0.0, "speed": 1.0 }
        ]
    }"#;

    #[test]
    fn plot_returns_standalone_svg() {
        let markup = plot_impl(EXAMPLE).unwrap();
        assert!(markup.starts_with("<svg"));
        assert!(markup.trim_end().ends_with("</svg>"));
        assert_eq!(markup.matches("class=\"apollonius\"").count(), 1);
    }

    #[test]
    fn report_on_two_robots_is_exact() {
        let report: serde_json::Value =
            serde_json::from_str(&online_report_impl(EXAMPLE).unwrap()).unwrap();
        let online = report["online_time"].as_f64().unwrap();
        let ratio = report["ratio"].as_f64().unwrap();
        assert!((online - (1.0 + 2.0f64.sqrt())).abs() < 1e-9);
        assert!((ratio - (5.0 + 4.0 * 2.0f64.sqrt()) / 7.0) < 1e-9);
        assert!(report.get("offline_time_between").is_none());
    }

    #[test]
    fn report_on_three_robots_brackets_the_optimum() {
        let three = r#"{
            "source": [0.0, 0.0],
            "destination": [1.0, 0.0],
            "robots": [
                { "x": 0.0, "y": 0.4, "speed": 0.5 },
                { "x": 1.2, "y": -0.3, "speed": 1.0 },
                { "x": 0.5, "y": 0.8, "speed": 0.7 }
            ]
        }"#;
        let report: serde_json::Value =
            serde_json::from_str(&online_report_impl(three).unwrap()).unwrap();
        let bracket = report["offline_time_between"].as_array().unwrap();
        let lo = bracket[0].as_f64().unwrap();
        let hi = bracket[1].as_f64().unwrap();
        assert!(0.0 <= lo && lo <= hi);
        assert!(report["online_time"].as_f64().unwrap() >= lo - 1e-9);
    }

    #[test]
    fn relay_instance_round_trips() {
        let json = relay_instance_impl(3).unwrap();
        let instance = io::parse_instance(&json).unwrap();
        assert_eq!(instance.robots.len(), 3);
        assert_eq!(instance.robots[0].speed, 1.0);
        assert!(relay_instance_impl(2).is_err());
    }

    #[test]
    fn garbage_input_reports_the_parser_error() {
        let err = plot_impl("not json").unwrap_err();
        assert!(err.contains("instance"), "{err}");
    }
}
