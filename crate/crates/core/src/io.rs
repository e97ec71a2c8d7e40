//! JSON wire formats for instances and plans.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::plan::{DeliveryPlan, EventKind, Instance, PlanEvent, Robot};

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    source: [f64; 2],
    destination: [f64; 2],
    robots: Vec<RobotFile>,
}

#[derive(Serialize, Deserialize)]
struct RobotFile {
    x: f64,
    y: f64,
    speed: f64,
}

#[derive(Serialize, Deserialize)]
struct PlanFile {
    total_time: f64,
    events: Vec<EventFile>,
    trajectories: Vec<Vec<WaypointFile>>,
}

#[derive(Serialize, Deserialize)]
struct EventFile {
    kind: KindFile,
    time: f64,
    location: [f64; 2],
    from: Option<usize>,
    to: Option<usize>,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum KindFile {
    Pickup,
    Handover,
    Deliver,
}

#[derive(Serialize, Deserialize)]
struct WaypointFile {
    t: f64,
    x: f64,
    y: f64,
}

/// Parse an instance; error messages carry serde's line/column positions.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInstance(format!("instance: {e}")))?;
    let instance = Instance {
        source: Point::new(file.source[0], file.source[1]),
        destination: Point::new(file.destination[0], file.destination[1]),
        robots: file
            .robots
            .iter()
            .map(|r| Robot { start: Point::new(r.x, r.y), speed: r.speed })
            .collect(),
    };
    instance.validate().map_err(Error::InvalidInstance)?;
    Ok(instance)
}

pub fn instance_to_json(instance: &Instance) -> String {
    let file = InstanceFile {
        source: [instance.source.x, instance.source.y],
        destination: [instance.destination.x, instance.destination.y],
        robots: instance
            .robots
            .iter()
            .map(|r| RobotFile { x: r.start.x, y: r.start.y, speed: r.speed })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("instance serialization is infallible")
}

pub fn plan_to_json(plan: &DeliveryPlan) -> String {
    let file = PlanFile {
        total_time: plan.total_time,
        events: plan
            .events
            .iter()
            .map(|e| EventFile {
                kind: match e.kind {
                    EventKind::Pickup => KindFile::Pickup,
                    EventKind::Handover => KindFile::Handover,
                    EventKind::Deliver => KindFile::Deliver,
                },
                time: e.time,
                location: [e.location.x, e.location.y],
                from: e.from_robot,
                to: e.to_robot,
            })
            .collect(),
        trajectories: plan
            .trajectories
            .iter()
            .map(|w| w.iter().map(|&(t, p)| WaypointFile { t, x: p.x, y: p.y }).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("plan serialization is infallible")
}

pub fn parse_plan(text: &str) -> Result<DeliveryPlan> {
    let file: PlanFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidInstance(format!("plan: {e}")))?;
    Ok(DeliveryPlan {
        total_time: file.total_time,
        events: file
            .events
            .iter()
            .map(|e| PlanEvent {
                kind: match e.kind {
                    KindFile::Pickup => EventKind::Pickup,
                    KindFile::Handover => EventKind::Handover,
                    KindFile::Deliver => EventKind::Deliver,
                },
                time: e.time,
                location: Point::new(e.location[0], e.location[1]),
                from_robot: e.from,
                to_robot: e.to,
            })
            .collect(),
        trajectories: file
            .trajectories
            .iter()
            .map(|w| w.iter().map(|p| (p.t, Point::new(p.x, p.y))).collect())
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
        "source": [0.0, 0.0],
        "destination": [1.0, 0.0],
        "robots": [
            {"x": 0.0, "y": 0.0, "speed": 0.41421356237309515},
            {"x": 1.4142135623730951, "y": 0.0, "speed": 1.0}
        ]
    }"#;

    #[test]
    fn parses_example() {
        let inst = parse_instance(EXAMPLE).unwrap();
        assert_eq!(inst.robots.len(), 2);
        assert_eq!(inst.destination, Point::new(1.0, 0.0));
        assert_eq!(inst.robots[1].start.x, 2f64.sqrt());
    }

    #[test]
    fn instance_roundtrip_is_exact() {
        let inst = parse_instance(EXAMPLE).unwrap();
        let again = parse_instance(&instance_to_json(&inst)).unwrap();
        assert_eq!(inst.robots[0].speed.to_bits(), again.robots[0].speed.to_bits());
        assert_eq!(inst.robots[1].start.x.to_bits(), again.robots[1].start.x.to_bits());
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_instance("{\n  \"source\": [0, 0,\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn missing_fields_are_reported() {
        let err = parse_instance(r#"{"source": [0,0], "destination": [1,0]}"#).unwrap_err();
        assert!(err.to_string().contains("robots"), "{err}");
    }

    #[test]
    fn semantic_validation_applies() {
        let err = parse_instance(
            r#"{"source": [0,0], "destination": [1,0],
                "robots": [{"x": 0, "y": 0, "speed": -1.0}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("speed"), "{err}");
    }

    #[test]
    fn plan_roundtrip_is_exact() {
        let plan = DeliveryPlan {
            total_time: 0.1 + 0.2,
            events: vec![PlanEvent {
                kind: EventKind::Deliver,
                time: 0.1 + 0.2,
                location: Point::new(1e-17, 3.0_f64.sqrt()),
                from_robot: Some(1),
                to_robot: None,
            }],
            trajectories: vec![vec![(0.0, Point::new(0.3, -0.7)), (0.3, Point::new(1e-17, 3.0_f64.sqrt()))]],
        };
        let again = parse_plan(&plan_to_json(&plan)).unwrap();
        assert_eq!(plan.total_time.to_bits(), again.total_time.to_bits());
        assert_eq!(
            plan.events[0].location.y.to_bits(),
            again.events[0].location.y.to_bits()
        );
        assert_eq!(plan.trajectories[0][1].1.x.to_bits(), again.trajectories[0][1].1.x.to_bits());
        assert_eq!(again.events[0].from_robot, Some(1));
        assert_eq!(again.events[0].to_robot, None);
    }

    #[test]
    fn event_kinds_use_lowercase_names() {
        let plan = DeliveryPlan {
            total_time: 1.0,
            events: vec![PlanEvent {
                kind: EventKind::Handover,
                time: 0.5,
                location: Point::new(0.0, 0.0),
                from_robot: Some(0),
                to_robot: Some(1),
            }],
            trajectories: vec![],
        };
        let json = plan_to_json(&plan);
        assert!(json.contains("\"handover\""), "{json}");
        assert!(parse_plan(&json.replace("handover", "teleport")).is_err());
    }
}
