//! Online delivery (robots learn about the request only when it appears) and
//! the adversarial constructions that bound how much better any online
//! strategy could do.

use crate::error::{Error, Result};
use crate::geometry::{distance, Point};
use crate::offline_two::solve_two;
use crate::plan::{DeliveryPlan, EventKind, Instance, PlanEvent, Robot};
use crate::search::{golden_max, golden_min};

#[derive(Debug, Clone, PartialEq)]
pub struct OnlineOutcome {
    pub delivery_time: f64,
    pub winning_robot: usize,
    pub per_robot_solo_time: Vec<f64>,
}

/// The natural online strategy: every robot heads for the source, whoever
/// would finish first carries the message alone. Ties go to the lowest index.
pub fn run_online(instance: &Instance) -> Result<OnlineOutcome> {
    instance.validate().map_err(Error::InvalidInstance)?;
    let sd = distance(instance.source, instance.destination);
    let solos: Vec<f64> = instance
        .robots
        .iter()
        .map(|r| (distance(r.start, instance.source) + sd) / r.speed)
        .collect();
    let winner = solos
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("validated instances have robots");
    Ok(OnlineOutcome {
        delivery_time: solos[winner],
        winning_robot: winner,
        per_robot_solo_time: solos,
    })
}

/// Online delivery time divided by the offline optimum, two-robot instances.
pub fn competitive_ratio_two(instance: &Instance) -> Result<f64> {
    let online = run_online(instance)?.delivery_time;
    let offline = solve_two(instance)?.total_time();
    Ok(online / offline)
}

/// A chain of robots on the segment from source (0) to destination (1),
/// engineered so that solo delivery is slow but a bucket-brigade relay is
/// fast. All coordinates live on the x axis.
#[derive(Debug, Clone, PartialEq)]
pub struct RelayConstruction {
    pub n: usize,
    /// Handover points, outermost first; robot i picks up at meeting_points[i]
    /// (the last robot picks up at the source).
    pub meeting_points: Vec<f64>,
    pub speeds: Vec<f64>,
    pub positions: Vec<f64>,
    pub online_time: f64,
    pub relay_time: f64,
}

impl RelayConstruction {
    pub fn as_instance(&self) -> Instance {
        Instance {
            source: Point::new(0.0, 0.0),
            destination: Point::new(1.0, 0.0),
            robots: self
                .positions
                .iter()
                .zip(&self.speeds)
                .map(|(&x, &v)| Robot { start: Point::new(x, 0.0), speed: v })
                .collect(),
        }
    }

    /// Simulate the relay: robots pre-position at their pickup points, wait,
    /// and carry in order n-1, n-2, ..., 0. Returns a feasible plan whose
    /// total time is the simulated one (which need not equal `relay_time`).
    pub fn relay_plan(&self) -> DeliveryPlan {
        let n = self.n;
        let pick = |i: usize| if i == n - 1 { 0.0 } else { self.meeting_points[i] };
        let hand = |i: usize| if i == 0 { 1.0 } else { self.meeting_points[i - 1] };
        let arrive: Vec<f64> = (0..n)
            .map(|i| (self.positions[i] - pick(i)).abs() / self.speeds[i])
            .collect();

        let mut trajectories: Vec<Vec<(f64, Point)>> = (0..n)
            .map(|i| {
                vec![
                    (0.0, Point::new(self.positions[i], 0.0)),
                    (arrive[i], Point::new(pick(i), 0.0)),
                ]
            })
            .collect();
        let mut events = Vec::new();
        let mut t = arrive[n - 1];
        for i in (0..n).rev() {
            t = t.max(arrive[i]);
            events.push(PlanEvent {
                kind: if i == n - 1 { EventKind::Pickup } else { EventKind::Handover },
                time: t,
                location: Point::new(pick(i), 0.0),
                from_robot: if i == n - 1 { None } else { Some(i + 1) },
                to_robot: Some(i),
            });
            let tw = &mut trajectories[i];
            tw.push((t, Point::new(pick(i), 0.0)));
            t += (hand(i) - pick(i)).abs() / self.speeds[i];
            tw.push((t, Point::new(hand(i), 0.0)));
        }
        events.push(PlanEvent {
            kind: EventKind::Deliver,
            time: t,
            location: Point::new(1.0, 0.0),
            from_robot: Some(0),
            to_robot: None,
        });
        DeliveryPlan { total_time: t, events, trajectories }
    }
}

/// Chain instance with speeds v_{i+1} = v_i (1 - 2^{i+2} / (2^{n+1} - 2^{i+1} - 3)),
/// positions 4 v_i - 1 and handover points 1 - (2^{i+1} - 1)/(2^n - 1).
/// The advertised relay time is 2 + 2/(2^n - 1); `relay_plan` reports what the
/// schedule actually achieves.
pub fn build_relay_construction(n: usize) -> Result<RelayConstruction> {
    if n < 3 {
        return Err(Error::InvalidN);
    }
    let big = (2f64).powi(n as i32) - 1.0;
    let mut speeds = vec![1.0];
    for i in 0..n - 1 {
        let prev = speeds[i];
        let frac = (2f64).powi(i as i32 + 2) / ((2f64).powi(n as i32 + 1) - (2f64).powi(i as i32 + 1) - 3.0);
        speeds.push(prev * (1.0 - frac));
    }
    let positions: Vec<f64> = speeds.iter().map(|v| 4.0 * v - 1.0).collect();
    let meeting_points: Vec<f64> =
        (0..n - 1).map(|i| 1.0 - ((2f64).powi(i as i32 + 1) - 1.0) / big).collect();
    let online_time = (0..n)
        .map(|i| (positions[i].abs() + 1.0) / speeds[i])
        .fold(f64::INFINITY, f64::min);
    Ok(RelayConstruction {
        n,
        meeting_points,
        speeds,
        positions,
        online_time,
        relay_time: 2.0 + 2.0 / big,
    })
}

/// Variant of the chain with speeds (sigma/rho)^(n-1-i) / 4, sigma = 2^(1/n),
/// rho = 2 - sigma: every solo takes exactly 4 while the relay hands the
/// message over with no waiting, finishing at 4 - 4 rho^n.
pub fn tight_relay_construction(n: usize) -> Result<RelayConstruction> {
    if n < 2 {
        return Err(Error::InvalidN);
    }
    let sigma = (2f64).powf(1.0 / n as f64);
    let rho = 2.0 - sigma;
    let speeds: Vec<f64> =
        (0..n).map(|i| (sigma / rho).powi((n - 1 - i) as i32) / 4.0).collect();
    let positions: Vec<f64> = speeds.iter().map(|v| 4.0 * v - 1.0).collect();
    let meeting_points: Vec<f64> =
        (0..n - 1).map(|i| sigma.powi((n - 1 - i) as i32) - 1.0).collect();
    Ok(RelayConstruction {
        n,
        meeting_points,
        speeds,
        positions,
        online_time: 4.0,
        relay_time: 4.0 - 4.0 * rho.powi(n as i32),
    })
}

/// Scene parameters for the speed-blind adversary: the message sits at the
/// center of a circle of candidate handover points, the fast robot does not
/// know the slow robot's speed and commits to a detour point X at angle beta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdversaryConfig {
    pub v: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Competitive ratios forced against a fast robot committing to the detour
/// point at angle `beta`, for the two adversarial speed choices: the slow
/// robot is real (first component) or a decoy that never moves (second).
pub fn lb_speed_ratio(cfg: &AdversaryConfig) -> Result<(f64, f64)> {
    let AdversaryConfig { v, alpha, beta } = *cfg;
    if !(v > 1.0) || !v.is_finite() {
        return Err(Error::DegenerateSpeed);
    }
    let den = v * v - 1.0;
    let k = Point::new(v * v / den, 0.0);
    let s = Point::new(1.0 / den, 0.0);
    let m = Point::new(v / den * alpha.cos(), v / den * alpha.sin());
    let d = Point::new(
        v * v / den * (2.0 * alpha).cos(),
        v * v / den * (2.0 * alpha).sin(),
    );
    let x = Point::new(v / den * beta.cos(), v / den * beta.sin());

    let online1 = (distance(k, x) + distance(x, d)) / v;
    let opt1 = distance(s, d).min(2.0 * distance(k, m) / v);
    let ratio_moving = online1 / opt1;

    let online0 = distance(k, x) * (1.0 + 1.0 / v) + distance(s, d);
    let opt0 = 1.0 + distance(s, d);
    let ratio_standing = online0 / opt0;
    Ok((ratio_moving, ratio_standing))
}

fn lb_speed_inner(v: f64, alpha: f64, grid_beta: usize) -> (f64, f64) {
    let worst = |beta: f64| {
        let (a, b) = lb_speed_ratio(&AdversaryConfig { v, alpha, beta })
            .expect("v > 1 on the sweep grid");
        a.max(b)
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let step = half_pi / grid_beta as f64;
    let mut best_k = 0;
    let mut best = f64::INFINITY;
    for k in 0..grid_beta {
        let val = worst((k as f64 + 0.5) * step);
        if val < best {
            best = val;
            best_k = k;
        }
    }
    let lo = ((best_k as f64 - 0.5) * step).max(1e-9);
    let hi = ((best_k as f64 + 1.5) * step).min(half_pi - 1e-9);
    let (beta, val) = golden_min(worst, lo, hi, 1e-10);
    if val < best {
        (val, beta)
    } else {
        (best, (best_k as f64 + 0.5) * step)
    }
}

/// Best ratio the speed-blind adversary can force, maximized over the scene
/// and minimized over the fast robot's committed detour. Returns the bound
/// and the scene achieving it. Deterministic for fixed grid sizes.
pub fn lb_speed_search(
    grid_v: usize,
    grid_alpha: usize,
    grid_beta: usize,
) -> (f64, AdversaryConfig) {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let astep = half_pi / grid_alpha as f64;
    let vstep = 1.0 / grid_v as f64;
    let mut best = f64::NEG_INFINITY;
    let mut arg = AdversaryConfig { v: 2.0, alpha: astep / 2.0, beta: astep / 2.0 };
    for j in 0..grid_v {
        let v = 1.0 + (j as f64 + 1.0) * vstep;
        for i in 0..grid_alpha {
            let alpha = (i as f64 + 0.5) * astep;
            let (val, beta) = lb_speed_inner(v, alpha, grid_beta);
            if val > best {
                best = val;
                arg = AdversaryConfig { v, alpha, beta };
            }
        }
    }
    // local polish: coordinate ascent on (v, alpha) around the best cell
    let inner = |v: f64, alpha: f64| lb_speed_inner(v, alpha, grid_beta.max(64)).0;
    let (mut v, mut alpha) = (arg.v, arg.alpha);
    for _ in 0..3 {
        let (nv, _) = golden_max(
            |x| inner(x, alpha),
            (v - vstep).max(1.0 + 1e-9),
            (v + vstep).min(2.0),
            1e-9,
        );
        v = nv;
        let (na, _) = golden_max(
            |x| inner(v, x),
            (alpha - astep).max(1e-9),
            (alpha + astep).min(half_pi - 1e-9),
            1e-9,
        );
        alpha = na;
    }
    let (val, beta) = lb_speed_inner(v, alpha, grid_beta.max(256));
    if val > best {
        (val, AdversaryConfig { v, alpha, beta })
    } else {
        (best, arg)
    }
}

/// Ratio forced by the position-blind adversary: two fast robots claim to sit
/// at mirrored spots, the real one is revealed only at the handover point.
pub fn lb_position_ratio(v: f64, alpha: f64) -> Result<f64> {
    if !(v > 1.0) || !v.is_finite() {
        return Err(Error::DegenerateSpeed);
    }
    let den = v * v - 1.0;
    let guarded_sqrt = |x: f64| -> Result<f64> {
        if x >= 0.0 {
            Ok(x.sqrt())
        } else if x > -1e-12 {
            Ok(0.0)
        } else {
            Err(Error::GeometryInfeasible)
        }
    };
    let sd = guarded_sqrt(1.0 + v.powi(4) - 2.0 * v * v * (2.0 * alpha).cos())? / den;
    let km = v / den * guarded_sqrt(1.0 + v * v - 2.0 * v * alpha.cos())?;
    // angle at S between the two claimed directions, sign carried by cos
    let cos_beta = (1.0 - v * v * (2.0 * alpha).cos()) / (sd * den);
    let sin_beta_sq = (1.0 - cos_beta * cos_beta).max(0.0);
    let r = v / den; // circle of candidate meeting points
    let sc = 1.0 / den;
    let sx = sc * cos_beta + guarded_sqrt(r * r - sc * sc * sin_beta_sq)?;
    Ok((sx * (v - 1.0) + sd) / (2.0 * km))
}

/// Best position-blind bound over v in (1, 6], alpha in (0, pi/2).
/// Returns the bound and the (v, alpha) achieving it.
pub fn lb_position_search(grid_v: usize, grid_alpha: usize) -> (f64, (f64, f64)) {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let astep = half_pi / grid_alpha as f64;
    let vstep = 5.0 / grid_v as f64;
    let eval = |v: f64, alpha: f64| lb_position_ratio(v, alpha).unwrap_or(f64::NEG_INFINITY);
    let mut best = f64::NEG_INFINITY;
    let mut arg = (2.0, astep / 2.0);
    for j in 0..grid_v {
        let v = 1.0 + (j as f64 + 1.0) * vstep;
        for i in 0..grid_alpha {
            let alpha = (i as f64 + 0.5) * astep;
            let val = eval(v, alpha);
            if val > best {
                best = val;
                arg = (v, alpha);
            }
        }
    }
    let (mut v, mut alpha) = arg;
    for _ in 0..3 {
        let (nv, _) = golden_max(
            |x| eval(x, alpha),
            (v - vstep).max(1.0 + 1e-9),
            (v + vstep).min(6.0),
            1e-12,
        );
        v = nv;
        let (na, _) = golden_max(
            |x| eval(v, x),
            (alpha - astep).max(1e-9),
            (alpha + astep).min(half_pi - 1e-9),
            1e-12,
        );
        alpha = na;
    }
    let val = eval(v, alpha);
    if val > best {
        (val, (v, alpha))
    } else {
        (best, arg)
    }
}
