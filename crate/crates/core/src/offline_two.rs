//! Optimal two-robot delivery: a fast robot and a slow one, with the message
//! handed over face to face at a computed meeting point.
//!
//! The normalized solvers (`solve_two_at_source`, `solve_two_general`) take a
//! slow robot of speed 1 and a fast robot of speed v > 1; plans they return
//! index the slow robot as 0 and the fast robot as 1. `solve_two` accepts any
//! two-robot instance and rescales time.

use crate::error::{Error, Result};
use crate::geometry::{
    angle_at, apollonius_circle, bisector_meeting_point, distance, polar_angle, Frame, Point,
};
use crate::plan::{DeliveryPlan, EventKind, Instance, PlanEvent, Robot};
use crate::search;
use crate::TOL_SPEED;

/// Solo plans win ties against handovers within this margin (fewer events).
pub const TOL_TIE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionCase {
    FastSolo,
    SlowSolo,
    Handover,
}

#[derive(Debug, Clone)]
pub struct TwoRobotSolution {
    pub plan: DeliveryPlan,
    pub case: SolutionCase,
    /// Handover point M (world coordinates).
    pub meeting_point: Option<Point>,
    /// Detour waypoint Q of the general solver: where the fast robot is at the
    /// moment the slow one reaches the source.
    pub detour_point: Option<Point>,
    /// Polar angle of M about the meeting-circle center, measured from the
    /// center-to-fast-robot ray (radians).
    pub alpha: Option<f64>,
    /// At-source solutions: angle at the fast robot between source and
    /// destination. General solutions: detour direction of Q (radians).
    pub beta: Option<f64>,
}

impl TwoRobotSolution {
    pub fn total_time(&self) -> f64 {
        self.plan.total_time
    }
}

fn pickup(time: f64, location: Point, robot: usize) -> PlanEvent {
    PlanEvent { kind: EventKind::Pickup, time, location, from_robot: None, to_robot: Some(robot) }
}

fn deliver(time: f64, location: Point, robot: usize) -> PlanEvent {
    PlanEvent { kind: EventKind::Deliver, time, location, from_robot: Some(robot), to_robot: None }
}

/// Courier fetches the message from `s` and carries it to `d`; the other
/// robot never moves.
fn solo_solution(robots: [Robot; 2], courier: usize, s: Point, d: Point) -> TwoRobotSolution {
    let r = robots[courier];
    let t_pickup = distance(r.start, s) / r.speed;
    let total = t_pickup + distance(s, d) / r.speed;
    let mut trajectories = vec![vec![(0.0, robots[0].start)], vec![(0.0, robots[1].start)]];
    trajectories[courier] = vec![(0.0, r.start), (t_pickup, s), (total, d)];
    TwoRobotSolution {
        plan: DeliveryPlan {
            total_time: total,
            events: vec![pickup(t_pickup, s, courier), deliver(total, d, courier)],
            trajectories,
        },
        case: if courier == 0 { SolutionCase::SlowSolo } else { SolutionCase::FastSolo },
        meeting_point: None,
        detour_point: None,
        alpha: None,
        beta: None,
    }
}

/// Meeting point of the at-source problem in a local frame with the source at
/// the origin, the fast robot `k` on the positive x axis and `d` at y >= 0.
/// Returns (M, alpha, beta).
fn at_source_meeting(k: Point, d: Point, v: f64) -> Result<(Point, f64, Option<f64>)> {
    let origin = Point::new(0.0, 0.0);
    if d.approx_eq(k) {
        // Degenerate target on top of the fast robot: nearest circle point.
        let c = apollonius_circle(k, origin, v)?;
        let m = c.center + (k - c.center) * (c.radius / distance(c.center, k));
        return Ok((m, 0.0, None));
    }
    let beta = angle_at(k, origin, d);
    let sk = k.x;
    if beta < std::f64::consts::FRAC_PI_2 && beta.sin() <= 1.0 / v + 1e-12 {
        // Straight fast path K->D crosses the meeting circle.
        let alpha = std::f64::consts::PI - beta - (v * beta.sin()).min(1.0).asin();
        let scale = sk / (v * v - 1.0);
        let m = Point::new(scale * (v * alpha.cos() - 1.0), scale * (v * alpha.sin()));
        if distance(k, d) >= distance(k, m) {
            return Ok((m, alpha, Some(beta)));
        }
    }
    let circle = apollonius_circle(k, origin, v)?;
    let m = bisector_meeting_point(circle, k, d, v)?;
    let alpha = polar_angle(m - circle.center) - polar_angle(k - circle.center);
    Ok((m, alpha.rem_euclid(std::f64::consts::TAU), Some(beta)))
}

/// Fastest delivery when the slow robot already sits on the source.
///
/// Robot roster of the returned plan: 0 = slow (speed 1, at `s`),
/// 1 = fast (speed `v`, at `k`).
pub fn solve_two_at_source(k: Point, s: Point, d: Point, v: f64) -> Result<TwoRobotSolution> {
    if !(v > 1.0 + TOL_SPEED) {
        return Err(Error::DegenerateSpeed);
    }
    if k.approx_eq(s) {
        return Err(Error::CoincidentPoints);
    }
    let robots = [Robot { start: s, speed: 1.0 }, Robot { start: k, speed: v }];
    let sd = distance(s, d);
    if distance(k, d) / v >= sd {
        // The fast robot cannot even reach D before the slow one walks there.
        return Ok(solo_solution(robots, 0, s, d));
    }

    let frame = Frame::from_segment(s, k)?.oriented_with(d);
    let (m_loc, alpha, beta) = at_source_meeting(frame.to_local(k), frame.to_local(d), v)?;
    let m = frame.to_world(m_loc);

    let t_slow = distance(s, m);
    let t_fast = distance(k, m) / v;
    let t_meet = t_slow.max(t_fast);
    let total = t_meet + distance(m, d) / v;
    if total >= sd - TOL_TIE {
        return Ok(solo_solution(robots, 0, s, d));
    }
    Ok(TwoRobotSolution {
        plan: DeliveryPlan {
            total_time: total,
            events: vec![
                pickup(0.0, s, 0),
                PlanEvent {
                    kind: EventKind::Handover,
                    time: t_meet,
                    location: m,
                    from_robot: Some(0),
                    to_robot: Some(1),
                },
                deliver(total, d, 1),
            ],
            trajectories: vec![
                vec![(0.0, s), (t_slow, m)],
                vec![(0.0, k), (t_fast, m), (total, d)],
            ],
        },
        case: SolutionCase::Handover,
        meeting_point: Some(m),
        detour_point: None,
        alpha: Some(alpha),
        beta,
    })
}

/// Fastest delivery for arbitrary starting positions of the two robots.
///
/// Robot roster of the returned plan: 0 = slow (speed 1, at `l`),
/// 1 = fast (speed `v`, at `k`).
pub fn solve_two_general(
    l: Point,
    k: Point,
    s: Point,
    d: Point,
    v: f64,
) -> Result<TwoRobotSolution> {
    if !(v > 1.0 + TOL_SPEED) {
        return Err(Error::DegenerateSpeed);
    }
    let robots = [Robot { start: l, speed: 1.0 }, Robot { start: k, speed: v }];
    let ls = distance(l, s);
    let ks = distance(k, s);
    let sd = distance(s, d);
    if ks / v <= ls {
        // The fast robot reaches the source first; any handover would only
        // delay it.
        return Ok(solo_solution(robots, 1, s, d));
    }
    if distance(k, d) / v >= ls + sd {
        return Ok(solo_solution(robots, 0, s, d));
    }
    if l.approx_eq(s) {
        return solve_two_at_source(k, s, d, v);
    }

    // While the slow robot walks to the source the fast one commits to a
    // detour direction, ending at Q exactly when the message is picked up.
    // From there the problem is the at-source one.
    let detour = v * ls;
    let q_at = |b: f64| k + Point::new(b.cos(), b.sin()) * detour;
    let time_from = |b: f64| -> f64 {
        match solve_two_at_source(q_at(b), s, d, v) {
            Ok(sub) => sub.total_time(),
            Err(_) => f64::INFINITY,
        }
    };

    let samples = 720;
    let step = std::f64::consts::TAU / samples as f64;
    let mut best_j = 0;
    let mut best_t = f64::INFINITY;
    for j in 0..samples {
        let t = time_from(j as f64 * step);
        if t < best_t {
            best_t = t;
            best_j = j;
        }
    }
    let center = best_j as f64 * step;
    let (beta_star, _) = search::golden_min(time_from, center - step, center + step, 1e-12);

    let q = q_at(beta_star);
    let sub = solve_two_at_source(q, s, d, v)?;
    let handover_total = ls + sub.total_time();

    let slow_solo_t = ls + sd;
    let fast_solo_t = (ks + sd) / v;
    let best_solo = slow_solo_t.min(fast_solo_t);
    if handover_total >= best_solo - TOL_TIE || sub.meeting_point.is_none() {
        let courier = if fast_solo_t < slow_solo_t { 1 } else { 0 };
        return Ok(solo_solution(robots, courier, s, d));
    }

    let m = sub.meeting_point.unwrap();
    let t_slow = ls + distance(s, m);
    let t_fast = ls + distance(q, m) / v; // fast reaches Q at |KQ|/v = ls
    let t_meet = t_slow.max(t_fast);
    let total = t_meet + distance(m, d) / v;
    Ok(TwoRobotSolution {
        plan: DeliveryPlan {
            total_time: total,
            events: vec![
                pickup(ls, s, 0),
                PlanEvent {
                    kind: EventKind::Handover,
                    time: t_meet,
                    location: m,
                    from_robot: Some(0),
                    to_robot: Some(1),
                },
                deliver(total, d, 1),
            ],
            trajectories: vec![
                vec![(0.0, l), (ls, s), (t_slow, m)],
                vec![(0.0, k), (ls, q), (t_fast, m), (total, d)],
            ],
        },
        case: SolutionCase::Handover,
        meeting_point: Some(m),
        detour_point: Some(q),
        alpha: sub.alpha,
        beta: Some(beta_star.rem_euclid(std::f64::consts::TAU)),
    })
}

/// Solves a two-robot instance with arbitrary speeds.
///
/// Times and robot indices in the returned plan follow the instance. Equal
/// speeds (within `TOL_SPEED` of ratio 1) fall back to the better solo plan:
/// a handover between equal-speed robots can never strictly win.
pub fn solve_two(instance: &Instance) -> Result<TwoRobotSolution> {
    instance.validate().map_err(Error::InvalidInstance)?;
    if instance.robots.len() != 2 {
        return Err(Error::InvalidInstance("expected exactly two robots".into()));
    }
    let (s, d) = (instance.source, instance.destination);
    let (r0, r1) = (instance.robots[0], instance.robots[1]);
    let (slow_idx, fast_idx) = if r0.speed <= r1.speed { (0, 1) } else { (1, 0) };
    let slow = instance.robots[slow_idx];
    let fast = instance.robots[fast_idx];

    if fast.speed / slow.speed <= 1.0 + TOL_SPEED {
        let time_of = |r: &Robot| (distance(r.start, s) + distance(s, d)) / r.speed;
        let courier = if time_of(&r1) < time_of(&r0) { 1 } else { 0 };
        let mut sol = solo_solution([r0, r1], courier, s, d);
        sol.case =
            if courier == slow_idx { SolutionCase::SlowSolo } else { SolutionCase::FastSolo };
        return Ok(sol);
    }

    let v = fast.speed / slow.speed;
    let mut sol = solve_two_general(slow.start, fast.start, s, d, v)?;

    // Normalized time assumed slow speed 1; real slow speed stretches it.
    let scale = 1.0 / slow.speed;
    sol.plan.total_time *= scale;
    for ev in &mut sol.plan.events {
        ev.time *= scale;
        ev.from_robot = ev.from_robot.map(|i| if i == 0 { slow_idx } else { fast_idx });
        ev.to_robot = ev.to_robot.map(|i| if i == 0 { slow_idx } else { fast_idx });
    }
    for w in sol.plan.trajectories.iter_mut().flatten() {
        w.0 *= scale;
    }
    if slow_idx == 1 {
        sol.plan.trajectories.swap(0, 1);
    }
    Ok(sol)
}

/// Signed feasibility residual of a candidate meeting point M for the general
/// problem: zero exactly on the locus where the slow robot (through S) and the
/// fast robot (through its detour) can reach M simultaneously.
///
/// Requires |LS| > 0 and v > 1.
pub fn optimal_time_constraint_residual(m: Point, l: Point, k: Point, s: Point, v: f64) -> f64 {
    let a = distance(l, s);
    let mk2 = {
        let d = m - k;
        d.dot(d)
    };
    let ms2 = {
        let d = m - s;
        d.dot(d)
    };
    let inner = mk2 / (2.0 * a * v * v) - ms2 / (2.0 * a) - a / 2.0;
    inner * inner - ms2
}
