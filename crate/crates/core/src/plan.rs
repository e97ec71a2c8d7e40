//! Problem instances and timed delivery plans.

use crate::geometry::{distance, Point};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Robot {
    pub start: Point,
    pub speed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub source: Point,
    pub destination: Point,
    pub robots: Vec<Robot>,
}

impl Instance {
    pub fn validate(&self) -> Result<(), String> {
        if !self.source.is_finite() || !self.destination.is_finite() {
            return Err("source and destination must be finite".into());
        }
        if self.robots.is_empty() {
            return Err("robots must be non-empty".into());
        }
        for (i, r) in self.robots.iter().enumerate() {
            if !r.start.is_finite() {
                return Err(format!("robot {i} has a non-finite start"));
            }
            if !(r.speed > 0.0) || !r.speed.is_finite() {
                return Err(format!("robot {i} must have a positive finite speed"));
            }
        }
        Ok(())
    }

    /// Coordinate scale used to set absolute tolerances.
    pub fn extent(&self) -> f64 {
        let mut m: f64 = 1.0;
        for p in std::iter::once(self.source)
            .chain(std::iter::once(self.destination))
            .chain(self.robots.iter().map(|r| r.start))
        {
            m = m.max(p.x.abs()).max(p.y.abs());
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Pickup,
    Handover,
    Deliver,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanEvent {
    pub kind: EventKind,
    pub time: f64,
    pub location: Point,
    pub from_robot: Option<usize>,
    pub to_robot: Option<usize>,
}

/// Timed piecewise-linear trajectories plus the message event chain.
///
/// `trajectories[i]` lists (time, position) waypoints for robot i in
/// nondecreasing time order; a robot waits in place between a waypoint and a
/// later one at the same position, and moves in a straight line otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct DeliveryPlan {
    pub total_time: f64,
    pub events: Vec<PlanEvent>,
    pub trajectories: Vec<Vec<(f64, Point)>>,
}

impl DeliveryPlan {
    /// Position of robot `i` at time `t` (clamped to its waypoint span).
    pub fn position_of(&self, i: usize, t: f64) -> Option<Point> {
        let w = self.trajectories.get(i)?;
        let (first, last) = (w.first()?, w.last()?);
        if t <= first.0 {
            return Some(first.1);
        }
        if t >= last.0 {
            return Some(last.1);
        }
        for pair in w.windows(2) {
            let (t0, p0) = pair[0];
            let (t1, p1) = pair[1];
            if t <= t1 {
                if t1 - t0 <= 0.0 {
                    return Some(p1);
                }
                let f = (t - t0) / (t1 - t0);
                return Some(p0 + (p1 - p0) * f);
            }
        }
        Some(last.1)
    }

    /// Checks every plan invariant against the instance: speed limits on all
    /// trajectory legs, event ordering, and that the message reaches the
    /// destination through co-location events only.
    pub fn validate(&self, instance: &Instance) -> Result<(), String> {
        let tol = 1e-7 * (1.0 + instance.extent());
        if !(self.total_time >= 0.0) || !self.total_time.is_finite() {
            return Err("total_time must be finite and nonnegative".into());
        }
        if self.trajectories.len() != instance.robots.len() {
            return Err("one trajectory required per robot".into());
        }

        for (i, w) in self.trajectories.iter().enumerate() {
            if w.is_empty() {
                return Err(format!("robot {i} needs at least one waypoint"));
            }
            let speed = instance.robots[i].speed;
            if distance(w[0].1, instance.robots[i].start) > tol {
                return Err(format!("robot {i} does not start at its start point"));
            }
            for pair in w.windows(2) {
                let (t0, p0) = pair[0];
                let (t1, p1) = pair[1];
                if t1 < t0 {
                    return Err(format!("robot {i} waypoint times decrease"));
                }
                let d = distance(p0, p1);
                if d > speed * (t1 - t0) * (1.0 + 1e-9) + 1e-12 {
                    return Err(format!(
                        "robot {i} exceeds speed {speed}: {d} over {}",
                        t1 - t0
                    ));
                }
            }
        }

        if self.events.is_empty() {
            return Err("plan has no events".into());
        }
        for pair in self.events.windows(2) {
            if pair[1].time < pair[0].time {
                return Err("events are not sorted by time".into());
            }
        }
        let first = self.events.first().unwrap();
        let last = self.events.last().unwrap();
        if first.kind != EventKind::Pickup {
            return Err("first event must be a pickup".into());
        }
        if last.kind != EventKind::Deliver {
            return Err("last event must be the delivery".into());
        }
        if distance(first.location, instance.source) > tol {
            return Err("pickup must happen at the source".into());
        }
        if distance(last.location, instance.destination) > tol {
            return Err("delivery must happen at the destination".into());
        }
        if (last.time - self.total_time).abs() > tol {
            return Err("delivery time must equal total_time".into());
        }

        // message holder chain: every transfer requires co-location
        let mut holder: Option<usize> = None;
        for ev in &self.events {
            match ev.kind {
                EventKind::Pickup => {
                    if holder.is_some() {
                        return Err("duplicate pickup".into());
                    }
                    let r = ev.to_robot.ok_or("pickup needs to_robot")?;
                    self.check_at(r, ev.time, ev.location, instance, tol)?;
                    holder = Some(r);
                }
                EventKind::Handover => {
                    let from = ev.from_robot.ok_or("handover needs from_robot")?;
                    let to = ev.to_robot.ok_or("handover needs to_robot")?;
                    if holder != Some(from) {
                        return Err("handover from a robot not holding the message".into());
                    }
                    self.check_at(from, ev.time, ev.location, instance, tol)?;
                    self.check_at(to, ev.time, ev.location, instance, tol)?;
                    holder = Some(to);
                }
                EventKind::Deliver => {
                    let from = ev.from_robot.ok_or("delivery needs from_robot")?;
                    if holder != Some(from) {
                        return Err("delivery by a robot not holding the message".into());
                    }
                    self.check_at(from, ev.time, ev.location, instance, tol)?;
                }
            }
        }
        Ok(())
    }

    fn check_at(
        &self,
        robot: usize,
        t: f64,
        loc: Point,
        instance: &Instance,
        tol: f64,
    ) -> Result<(), String> {
        if robot >= instance.robots.len() {
            return Err(format!("event references missing robot {robot}"));
        }
        let pos = self
            .position_of(robot, t)
            .ok_or_else(|| format!("robot {robot} has no trajectory"))?;
        if distance(pos, loc) > tol {
            return Err(format!(
                "robot {robot} is at ({}, {}) not at event location ({}, {}) at t={t}",
                pos.x, pos.y, loc.x, loc.y
            ));
        }
        Ok(())
    }
}
