//! Static SVG rendering of an instance together with a delivery plan.
//! World y points up, SVG y points down, so everything is mirrored once.

use std::fmt::Write as _;

use crate::geometry::{apollonius_circle, distance, Point};
use crate::plan::{DeliveryPlan, EventKind, Instance};

fn fmt(x: f64) -> String {
    format!("{x:.6}")
}

/// Render the scene: trajectories, robot starts, endpoints, handover marks,
/// and (for a two-robot plan with distinct speeds) the circle of points the
/// two robots reach simultaneously.
pub fn render(instance: &Instance, plan: &DeliveryPlan) -> String {
    let mut pts: Vec<Point> = vec![instance.source, instance.destination];
    pts.extend(instance.robots.iter().map(|r| r.start));
    pts.extend(plan.trajectories.iter().flatten().map(|&(_, p)| p));
    pts.extend(plan.events.iter().map(|e| e.location));

    let flip = |p: Point| Point::new(p.x, -p.y);
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in pts.iter().map(|&p| flip(p)) {
        xmin = xmin.min(p.x);
        xmax = xmax.max(p.x);
        ymin = ymin.min(p.y);
        ymax = ymax.max(p.y);
    }
    let w = (xmax - xmin).max(1e-6);
    let h = (ymax - ymin).max(1e-6);
    let margin = 0.1 * w.max(h);
    let unit = w.max(h) / 100.0; // stroke and marker scale

    let mut out = String::new();
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        fmt(xmin - margin),
        fmt(ymin - margin),
        fmt(w + 2.0 * margin),
        fmt(h + 2.0 * margin)
    );
    let _ = write!(
        out,
        "<style>.trajectory{{fill:none;stroke-width:{sw}}}\
         .trajectory-0{{stroke:#1f77b4}}.trajectory-1{{stroke:#d62728}}\
         .trajectory-rest{{stroke:#7f7f7f}}\
         .apollonius{{fill:none;stroke:#2ca02c;stroke-width:{swthin};stroke-dasharray:{dash}}}\
         .robot{{fill:#333}}.source{{fill:#1f77b4}}.dest{{fill:#d62728}}\
         .event{{fill:#ff7f0e}}text{{font-size:{fs}px;font-family:sans-serif}}</style>\n",
        sw = fmt(unit * 0.4),
        swthin = fmt(unit * 0.2),
        dash = fmt(unit),
        fs = fmt(unit * 4.0),
    );

    if let Some(circle) = equal_arrival_circle(instance, plan) {
        let c = flip(circle.center);
        let _ = write!(
            out,
            "<circle class=\"apollonius\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n",
            fmt(c.x),
            fmt(c.y),
            fmt(circle.radius)
        );
    }

    for (i, traj) in plan.trajectories.iter().enumerate() {
        if traj.is_empty() || traj.iter().all(|&(_, p)| distance(p, traj[0].1) < 1e-12) {
            continue;
        }
        let class = if i < 2 { format!("trajectory-{i}") } else { "trajectory-rest".into() };
        let points: Vec<String> =
            traj.iter().map(|&(_, p)| format!("{},{}", fmt(p.x), fmt(-p.y))).collect();
        let _ = write!(
            out,
            "<polyline class=\"trajectory {class}\" points=\"{}\"/>\n",
            points.join(" ")
        );
    }

    for (i, r) in instance.robots.iter().enumerate() {
        let p = flip(r.start);
        let _ = write!(
            out,
            "<circle class=\"robot robot-{i}\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n",
            fmt(p.x),
            fmt(p.y),
            fmt(unit * 1.2)
        );
    }

    for (p, class, label) in [
        (flip(instance.source), "source", "S"),
        (flip(instance.destination), "dest", "D"),
    ] {
        let _ = write!(
            out,
            "<circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>\
             <text x=\"{}\" y=\"{}\">{label}</text>\n",
            fmt(p.x),
            fmt(p.y),
            fmt(unit * 1.5),
            fmt(p.x + unit * 2.0),
            fmt(p.y - unit * 2.0),
        );
    }

    for ev in &plan.events {
        let p = flip(ev.location);
        let r = unit * 1.5;
        let kind = match ev.kind {
            EventKind::Pickup => "pickup",
            EventKind::Handover => "handover",
            EventKind::Deliver => "deliver",
        };
        let _ = write!(
            out,
            "<path class=\"event {kind}\" d=\"M {} {} L {} {} L {} {} L {} {} Z\"/>\n",
            fmt(p.x),
            fmt(p.y - r),
            fmt(p.x + r),
            fmt(p.y),
            fmt(p.x),
            fmt(p.y + r),
            fmt(p.x - r),
            fmt(p.y),
        );
    }

    out.push_str("</svg>\n");
    out
}

/// Points reached at the same moment by both robots of a two-robot plan,
/// the slow one from the source, the fast one from where it stands at the
/// first event. None when speeds tie or the geometry degenerates.
fn equal_arrival_circle(
    instance: &Instance,
    plan: &DeliveryPlan,
) -> Option<crate::geometry::Circle> {
    if instance.robots.len() != 2 {
        return None;
    }
    let (s0, s1) = (instance.robots[0].speed, instance.robots[1].speed);
    if (s0 - s1).abs() <= crate::TOL_SPEED * s0.max(s1) {
        return None;
    }
    let fast = if s0 > s1 { 0 } else { 1 };
    let t0 = plan.events.first().map_or(0.0, |e| e.time);
    let q = plan.position_of(fast, t0)?;
    let v = s0.max(s1) / s0.min(s1);
    apollonius_circle(q, instance.source, v).ok()
}
