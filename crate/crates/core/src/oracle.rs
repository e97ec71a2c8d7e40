//! Brute-force reference solvers. Deliberately slow and simple; used by tests
//! to cross-check the analytic solvers.

use crate::error::{Error, Result};
use crate::geometry::{distance, Point};
use crate::offline_multi::GraphDeliveryProblem;

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Cells per axis of the meeting-point grid (>= 100).
    pub grid_resolution: usize,
    /// Rounds of 10x zoom around the incumbent cell.
    pub refine_iterations: usize,
    /// Fractional margin added around the bounding box (>= 0.25).
    pub bounding_inflation: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { grid_resolution: 1500, refine_iterations: 6, bounding_inflation: 0.5 }
    }
}

/// Best achievable delivery time for a slow robot (speed 1) at `l` and a fast
/// robot (speed `v` > 1) at `k`: both solo strategies and a grid search over
/// all single-handover meeting points.
///
/// Only the fast robot carries after a handover; a slow carrier after the
/// meeting is dominated by the solo terms.
pub fn oracle_two_robot(l: Point, k: Point, s: Point, d: Point, v: f64, cfg: &OracleConfig) -> f64 {
    let ls = distance(l, s);
    let sd = distance(s, d);
    let slow_solo = ls + sd;
    let fast_solo = (distance(k, s) + sd) / v;
    let mut best = slow_solo.min(fast_solo);
    let mut best_at = s;

    let handover = |m: Point| (ls + distance(s, m)).max(distance(k, m) / v) + distance(m, d) / v;

    let xs = [k.x, s.x, d.x];
    let ys = [k.y, s.y, d.y];
    let fold = |it: [f64; 3], f: fn(f64, f64) -> f64| it.into_iter().reduce(f).unwrap();
    let (xmin, xmax) = (fold(xs, f64::min), fold(xs, f64::max));
    let (ymin, ymax) = (fold(ys, f64::min), fold(ys, f64::max));
    let scale = (xmax - xmin).max(ymax - ymin).max(1e-3);
    let pad = 1e-6 * scale;
    let mut cx = 0.5 * (xmin + xmax);
    let mut cy = 0.5 * (ymin + ymax);
    let mut hx = 0.5 * (xmax - xmin) * (1.0 + cfg.bounding_inflation) + pad;
    let mut hy = 0.5 * (ymax - ymin) * (1.0 + cfg.bounding_inflation) + pad;

    let res = cfg.grid_resolution;
    for round in 0..=cfg.refine_iterations {
        let res = if round == 0 { res } else { 200 };
        for j in 0..=res {
            let y = cy - hy + 2.0 * hy * j as f64 / res as f64;
            for i in 0..=res {
                let x = cx - hx + 2.0 * hx * i as f64 / res as f64;
                let m = Point::new(x, y);
                let t = handover(m);
                if t < best {
                    best = t;
                    best_at = m;
                }
            }
        }
        // zoom: keep the incumbent centered, shrink to 20 previous cells
        cx = best_at.x;
        cy = best_at.y;
        hx = (hx / res as f64) * 10.0;
        hy = (hy / res as f64) * 10.0;
    }

    // The grid alone drifts along the equal-arrival crease: across the locus
    // max(ls + |SM|, |KM|/v) has a V-shaped floor, so the incumbent cell
    // wanders O(sqrt(cell)) along it. Refine on the crease itself. The locus
    // {lead(M) = ls} is star-shaped around S (lead strictly decreases along
    // every ray from S), so each direction holds exactly one crease point.
    let lead = |m: Point| distance(k, m) / v - distance(s, m);
    let ks = distance(k, s);
    if ks / v > ls {
        let r_hi = (ks / v - ls) / (1.0 - 1.0 / v) + 1e-6 * scale;
        let crease_at = |theta: f64| -> Point {
            let dir = Point::new(theta.cos(), theta.sin());
            let (mut lo, mut hi) = (0.0f64, r_hi);
            for _ in 0..64 {
                let mid = 0.5 * (lo + hi);
                if lead(s + dir * mid) >= ls {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            s + dir * (0.5 * (lo + hi))
        };
        let value = |theta: f64| handover(crease_at(theta));
        let samples = 4096;
        let step = std::f64::consts::TAU / samples as f64;
        let mut best_j = 0;
        let mut best_val = f64::INFINITY;
        for j in 0..samples {
            let t = value(j as f64 * step);
            if t < best_val {
                best_val = t;
                best_j = j;
            }
        }
        let center = best_j as f64 * step;
        let (_, refined) = crate::search::golden_min(value, center - step, center + step, 1e-12);
        best = best.min(refined);
    }

    // Pickup on the fast robot's own line: if the slow robot reaches some
    // point of segment KD no later than the fast one, |KD|/v is achievable.
    let along = |t: f64| lead(k + (d - k) * t);
    let samples = 2048;
    let mut best_j = 0;
    let mut best_val = f64::NEG_INFINITY;
    for j in 0..=samples {
        let t = along(j as f64 / samples as f64);
        if t > best_val {
            best_val = t;
            best_j = j;
        }
    }
    let center = best_j as f64 / samples as f64;
    let lo = (center - 1.0 / samples as f64).max(0.0);
    let hi = (center + 1.0 / samples as f64).min(1.0);
    let (_, peak) = crate::search::golden_max(along, lo, hi, 1e-12);
    if peak >= ls {
        best = best.min(distance(k, d) / v);
    }

    best
}

const INF: f64 = f64::INFINITY;

fn all_pairs_shortest(problem: &GraphDeliveryProblem) -> Vec<Vec<f64>> {
    let n = problem.vertex_count;
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(a, b, w) in &problem.edges {
        if w < d[a][b] {
            d[a][b] = w;
            d[b][a] = w;
        }
    }
    for m in 0..n {
        for a in 0..n {
            for b in 0..n {
                let via = d[a][m] + d[m][b];
                if via < d[a][b] {
                    d[a][b] = via;
                }
            }
        }
    }
    d
}

/// Exact minimum delivery time by exhaustive enumeration of agent relay
/// sequences and handover vertices. Capped at 6 vertices / 3 agents.
pub fn oracle_graph_delivery(problem: &GraphDeliveryProblem) -> Result<f64> {
    if problem.vertex_count > 6 || problem.agents.len() > 3 {
        return Err(Error::TooLarge);
    }
    if problem.source == problem.dest {
        return Ok(0.0);
    }
    let dist = all_pairs_shortest(problem);
    let arrival = |agent: usize, vertex: usize| -> f64 {
        let a = &problem.agents[agent];
        a.release + dist[a.vertex][vertex] / a.speed
    };

    let k = problem.agents.len();
    let n = problem.vertex_count;
    let mut best = INF;

    // Ordered sequences of distinct agents; a repeated carrier never helps
    // because the returning agent could have kept the message instead.
    let mut sequence: Vec<usize> = Vec::new();
    let mut stack: Vec<Vec<usize>> = Vec::new();
    fn gen(k: usize, sequence: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !sequence.is_empty() {
            out.push(sequence.clone());
        }
        if sequence.len() == k {
            return;
        }
        for a in 0..k {
            if !sequence.contains(&a) {
                sequence.push(a);
                gen(k, sequence, out);
                sequence.pop();
            }
        }
    }
    gen(k, &mut sequence, &mut stack);

    for seq in &stack {
        let m = seq.len();
        // handover vertices between consecutive carriers
        let mut choice = vec![0usize; m - 1];
        loop {
            let mut tau = 0.0f64;
            let mut here = problem.source;
            let mut ok = true;
            for (j, &agent) in seq.iter().enumerate() {
                let next = if j + 1 == m { problem.dest } else { choice[j] };
                let t_arr = arrival(agent, here);
                let hop = dist[here][next];
                if !t_arr.is_finite() || !hop.is_finite() {
                    ok = false;
                    break;
                }
                tau = tau.max(t_arr) + hop / problem.agents[agent].speed;
                here = next;
            }
            if ok && tau < best {
                best = tau;
            }
            // odometer over handover vertex choices
            let mut pos = 0;
            loop {
                if pos == choice.len() {
                    break;
                }
                choice[pos] += 1;
                if choice[pos] < n {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == choice.len() {
                break;
            }
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::Unreachable)
    }
}
